"""Exact and floating-point verification of Sasakian curvature identities,
generalised Killing spinors and first-order M-theory backgrounds."""

from .clifford import CliffordOp, Spinor, SpinorModule
from .exterior import FrameSpace, FrameVector, ModelForm
from .kahler import KahlerCurvature, constant_holomorphic, flat, random_kahler_curvature
from .mtheory import (
    BackgroundReport,
    ConnectionConstants,
    FluxAnsatz,
    corrected_maxwell_residual,
    einstein_residual,
    maxwell_residual,
    nabla_beta,
    nabla_o,
    p_form,
    solve_beta,
    solve_lambda,
    solve_mu_constants,
    susy_verify,
    trace_forms_on_M,
)
from .sasaki import SasakiModel, flat_model
from .scalars import CScalar, QuadScalar, get_backend

__version__ = "0.1.0"
