"""Command-line front end: ``verify``, ``table`` and ``oracle``.

Exit codes are a stable contract: 0 when every check passes, 1 when a check
fails, 2 for usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from . import kahler as kh
from . import mtheory as mt
from .exterior import ModelForm
from .sasaki import SasakiModel
from .scalars import (
    CScalar,
    NoRealSolution,
    NotRepresentable,
    QuadScalar,
    ScalarError,
    format_complex,
    get_backend,
    parse_quad,
)

CHECKS = ("sasaki", "gks", "einstein", "maxwell", "trace_forms", "corrected_maxwell", "constants", "susy", "oracles")
ELEVEN_ONLY = {"maxwell", "trace_forms", "corrected_maxwell", "constants", "susy"}
FLAT_ONLY = {"constants", "susy"}
LORENTZIAN_MSG = "no real λ: metric must be Lorentzian"


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


@dataclass
class RunConfig:
    n: int = 5
    epsilon: int = -1
    base: dict = field(default_factory=lambda: {"kind": "flat"})
    lam: str = "solve"
    constants: str = "solve"
    backend: str = "exact"
    tolerance: float = 1e-9
    checks: list = field(default_factory=lambda: list(CHECKS))

    @classmethod
    def from_dict(cls, data: dict, base_dir: Path | None = None) -> RunConfig:
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {"n", "epsilon", "base", "lambda", "constants", "backend", "checks"}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        cfg = cls()
        cfg.n = _int(data.get("n", 5), "n")
        cfg.epsilon = _int(data.get("epsilon", -1), "epsilon")
        cfg.base = _parse_base(data.get("base", "flat"), base_dir)
        lam = data.get("lambda", "solve")
        cfg.lam = lam if lam == "solve" else str(lam)
        cfg.constants = data.get("constants", "solve")
        cfg.backend, cfg.tolerance = _parse_backend(data.get("backend", "exact"))
        checks = data.get("checks", "all")
        cfg.checks = list(CHECKS) if checks == "all" else checks
        cfg.validate()
        return cfg

    def validate(self):
        if self.n < 1:
            raise ConfigError("n must be positive")
        if self.epsilon not in (-1, 1):
            raise ConfigError("epsilon must be -1 or +1")
        if self.constants not in ("paper", "solve"):
            raise ConfigError("constants must be 'paper' or 'solve'")
        if self.backend not in ("exact", "float"):
            raise ConfigError("backend must be 'exact' or 'float'")
        if not isinstance(self.checks, list) or not self.checks:
            raise ConfigError("checks must be a non-empty list or 'all'")
        bad = [c for c in self.checks if c not in CHECKS]
        if bad:
            raise ConfigError(f"unknown checks {bad}; allowed: {list(CHECKS)}")
        if self.lam != "solve":
            try:
                parse_quad(self.lam)
            except (ScalarError, ValueError) as exc:
                raise ConfigError(f"invalid lambda literal {self.lam!r}: {exc}") from None
        if "einstein" in self.checks and self.n < 2 and self.lam == "solve":
            raise ConfigError("lambda cannot be solved for n = 1")
        need = sorted(set(self.checks) & ELEVEN_ONLY)
        if need and (self.n != 5 or self.epsilon != -1):
            raise ConfigError(f"checks {need} are defined for n = 5, epsilon = -1")
        need = sorted(set(self.checks) & FLAT_ONLY)
        if need and self.base["kind"] != "flat":
            raise ConfigError(f"checks {need} need the flat base")
        if self.base["kind"] == "random" and self.n < 1:
            raise ConfigError("random base needs n >= 1")

    def ordered_checks(self) -> list:
        return [c for c in CHECKS if c in self.checks]

    def to_json(self) -> dict:
        out = asdict(self)
        out["lambda"] = out.pop("lam")
        out["checks"] = self.ordered_checks()
        out["base"] = {k: v for k, v in self.base.items() if k != "data"}
        return out


def _int(x, name):
    if isinstance(x, bool) or not isinstance(x, int):
        raise ConfigError(f"{name} must be an integer")
    return x


def _parse_base(spec, base_dir):
    if spec == "flat" or spec == {"kind": "flat"}:
        return {"kind": "flat"}
    if isinstance(spec, dict):
        if "random" in spec:
            r = spec["random"]
            seed = r.get("seed", 0) if isinstance(r, dict) else r
            return {"kind": "random", "seed": _int(seed, "base.random.seed")}
        if "explicit" in spec:
            e = spec["explicit"]
            path = e.get("file") if isinstance(e, dict) else e
            if not path:
                raise ConfigError("base.explicit needs a file")
            p = Path(path)
            if not p.is_absolute() and base_dir is not None:
                p = base_dir / p
            try:
                data = json.loads(p.read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read base curvature file {path}: {exc}") from None
            return {"kind": "explicit", "file": str(path), "data": data}
    raise ConfigError("base must be 'flat', {'random': {'seed': N}} or {'explicit': {'file': path}}")


def _parse_backend(spec):
    if spec in ("exact", "float"):
        return spec, 1e-9
    if isinstance(spec, dict) and "float" in spec:
        inner = spec["float"] or {}
        tol = inner.get("tolerance", 1e-9) if isinstance(inner, dict) else inner
        try:
            tol = float(tol)
        except (TypeError, ValueError):
            raise ConfigError("backend tolerance must be a number") from None
        if not tol > 0:
            raise ConfigError("backend tolerance must be positive")
        return "float", tol
    raise ConfigError("backend must be 'exact', 'float' or {'float': {'tolerance': t}}")


def load_config(path: str | Path, backend: str | None = None) -> RunConfig:
    p = Path(path)
    try:
        data = json.loads(p.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if backend is not None and isinstance(data, dict):
        data["backend"] = backend
    return RunConfig.from_dict(data, p.parent)


def build_base(cfg: RunConfig, exact: bool) -> kh.KahlerCurvature:
    kind = cfg.base["kind"]
    if kind == "flat":
        return kh.flat(cfg.n, exact)
    if kind == "random":
        return kh.random_kahler_curvature(cfg.base["seed"], cfg.n, exact=exact)
    try:
        R = kh.KahlerCurvature.from_json(cfg.base["data"], exact=exact)
    except (KeyError, TypeError, ValueError, ScalarError) as exc:
        raise ConfigError(f"invalid base curvature: {exc}") from None
    if R.n != cfg.n:
        raise ConfigError(f"base curvature has n = {R.n}, config has n = {cfg.n}")
    return R


# ---------------------------------------------------------------------------
# running checks
# ---------------------------------------------------------------------------


class _Run:
    """Holds the models and shared intermediate results of one verify run."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.exact = cfg.backend == "exact"
        self.tol = None if self.exact else cfg.tolerance
        base = build_base(cfg, self.exact)
        report = base.validate()
        if not report.passed:
            raise ConfigError(f"base curvature is not Kaehler: {report.violations}")
        backend = get_backend("exact" if self.exact else {"float": {"tolerance": cfg.tolerance}})
        self.m = SasakiModel(base, cfg.epsilon, backend)
        # field equations live in Q(sqrt2, sqrt3): always exact
        self.mx = self.m if self.exact else SasakiModel(build_base(cfg, True), cfg.epsilon)
        self.report = mt.BackgroundReport(self.m.backend.name)
        self.summary = {"field_backend": "exact"}
        self._p = None
        self._mu = None
        self.lam, self.lam_sq, self.lam_error = self._lambda()

    def ok(self, res, scale: float = 1.0) -> bool:
        return res == 0 if self.tol is None else res <= self.tol * max(1.0, scale)

    def _lambda(self):
        cfg = self.cfg
        if cfg.lam != "solve":
            lam = parse_quad(cfg.lam)
            return lam, lam * lam, None
        try:
            lam_sq = mt.solve_lambda_sq(cfg.n, cfg.epsilon)
        except mt.MTheoryError as exc:
            return None, None, str(exc)
        if lam_sq < 0:
            return None, None, LORENTZIAN_MSG
        try:
            return mt.solve_lambda(cfg.n, cfg.epsilon), QuadScalar(lam_sq), None
        except NotRepresentable:
            return None, QuadScalar(lam_sq), "lambda is not representable in Q(sqrt2, sqrt3)"

    @property
    def flux(self):
        if self.lam is None:
            raise _CheckError(self.lam_error)
        return mt.FluxAnsatz(self.lam, self.mx.space)

    @property
    def p(self):
        if self._p is None:
            self._p = mt.p_form(self.mx)
        return self._p

    def beta(self):
        return mt.PAPER_BETA if self.cfg.constants == "paper" else mt.solve_beta(self.mx, self.flux, self.p)

    def mu(self):
        if self._mu is None:
            beta = mt.solve_beta(self.mx, self.flux, self.p)
            self._mu = (beta, mt.solve_mu_constants(self.mx, self.flux, beta, self.p))
        return self._mu

    # -- checks ---------------------------------------------------------------
    def check_sasaki(self):
        m = self.m
        st = m.structure_residuals()
        self.report.add("sasaki.structure", all(self.ok(v) for v in st.values()), max(st.values()), st)
        sym = m.curvature_symmetries()
        self.report.add("sasaki.curvature_symmetries", all(self.ok(v) for v in sym.values()), max(sym.values()), sym)
        agree = m.ricci_agreement()
        self.report.add("sasaki.ricci_formula", self.ok(agree), agree)
        if kh.max_abs(m.base.ricci()) == 0:
            e = m.eta_einstein_check()
            self.report.add("sasaki.eta_einstein", self.ok(e.residual) and self.ok(e.fit_residual), e.residual,
                            {"lambda": _lit(e.lam), "nu": _lit(e.nu),
                             "expected_lambda": _lit(e.expected_lam), "expected_nu": _lit(e.expected_nu)})

    def check_gks(self):
        m = self.m
        S = m.spinors
        phis = {"phi_plus": S.phi_plus, "phi_minus": S.phi_minus}
        if m.base.is_zero():
            for name, phi in phis.items():
                g = m.gks_verify(phi)
                self.report.add(f"gks.{name}", self.ok(g.max_residual), g.max_residual,
                                {"horizontal": g.horizontal, "vertical": g.vertical})
        worst = 0.0
        for phi in phis.values():
            for a in range(m.dim):
                X = m.frame_vector(a)
                worst = max(worst, (m.gamma_trace(X, phi) - m.gamma_trace_expected(X, phi)).max_abs())
        self.report.add("gks.gamma_trace", self.ok(worst), worst)

    def check_einstein(self):
        cfg = self.cfg
        if self.lam_sq is None:
            self.report.add("einstein", False, "n/a", {"error": self.lam_error})
            return
        E = mt.einstein_residual(self.mx, lam_sq=self.lam_sq)
        coeff = mt.einstein_horizontal_coefficient(cfg.n, cfg.epsilon, self.lam_sq)
        self.report.add("einstein", E.is_zero, _max_entry(E.matrix), {
            "lambda": _lit(self.lam) if self.lam is not None else None,
            "lambda_squared": str(self.lam_sq),
            "ricci_xi_xi": _lit(E.ricci_xi_xi),
            "flux_xi_xi": str(E.flux_xi_xi),
            "horizontal_condition": f"Ric_h = ({coeff}) h",
            "pairs": len(E.pairs()),
        })

    def check_maxwell(self):
        f = self.flux
        coeff = mt.omega4_coefficient(mt.maxwell_residual(self.mx, f))
        lam = f.lam
        expected = lam * Fraction(2, 3) + lam * lam / 2
        self.report.add("maxwell.classical", coeff == expected, coeff, {
            "form": "omega^4 coefficient of d*F + 1/2 F^F",
            "expected": str(expected),
            "maxwell_satisfied": bool(coeff is not None and not coeff),
        })

    def check_trace_forms(self):
        for k in (1, 2):
            cmp = mt.trace_forms_on_M(self.m, k)
            ok = cmp.agree if self.tol is None else cmp.agree_within(self.tol)
            self.report.add(f"trace_forms.TrR{2 * k}", ok, cmp.difference,
                            {"direct_max_abs": cmp.direct.max_abs()})
        pd = mt.pontryagin(self.m)
        scale = pd.p.max_abs()
        details = {}
        if self.m.base.is_zero():
            details["p_omega4_coefficient"] = _lit(mt.omega4_coefficient(pd.p))
        self.report.add("trace_forms.pontryagin_identity", self.ok(pd.identity_residual, scale),
                        pd.identity_residual, details)

    def check_corrected_maxwell(self):
        f = self.flux
        try:
            solved = mt.solve_beta(self.mx, f, self.p)
        except mt.BetaUnsolvable as exc:
            self.report.add("corrected_maxwell", False, "n/a", {"error": str(exc)})
            return
        beta = self.beta()
        c = mt.ConnectionConstants(beta, QuadScalar(0), QuadScalar(0))
        res = mt.corrected_maxwell_residual(self.mx, f, c, self.p)
        self.report.add("corrected_maxwell", res.is_zero(), res.max_abs(), {
            "beta_used": str(beta), "beta_solved": str(solved), "beta_paper": str(mt.PAPER_BETA),
            "beta_matches_paper": solved == mt.PAPER_BETA,
        })

    def check_constants(self):
        beta, sol = self.mu()
        ok = beta == mt.PAPER_BETA and sol.mu2_matches_paper and sol.residual_solved == 0
        self.summary["constants"] = {
            "lambda": str(self.lam),
            "paper": mt.ConnectionConstants.paper().to_json(),
            "solved": mt.ConnectionConstants(beta, sol.mu1, sol.mu2).to_json(),
        }
        self.report.add("constants", ok, sol.residual_solved, dict(sol.to_json(), beta_solved=str(beta),
                                                                   beta_paper=str(mt.PAPER_BETA)))

    def check_susy(self):
        beta, sol = self.mu()
        solved = mt.ConnectionConstants(beta, sol.mu1, sol.mu2)
        rep = mt.susy_verify(self.mx, self.flux, solved, p=self.p)
        if self.cfg.constants == "paper":
            # paper constants are report content, not a pass criterion
            res = mt.parallel_residuals(self.mx, self.flux, mt.ConnectionConstants.paper(), self.p)
            rep.entries[-1]["details"]["paper_constants_residual_by_direction"] = res
        self.report.extend(rep)

    def check_oracles(self):
        m = self.m
        if m.base.is_zero():
            k = m.koszul_oracle()
            self.report.add("oracles.koszul", all(self.ok(v) for v in k.values()), max(k.values()), k)
        s = m.spin_connection_oracle()
        self.report.add("oracles.spin_connection", self.ok(s), s)
        r = m.ricci_agreement()
        self.report.add("oracles.ricci_contraction", self.ok(r), r)
        w = m.switch_relation_residual()
        self.report.add("oracles.switch", self.ok(w), w)

    def run(self) -> mt.BackgroundReport:
        for name in self.cfg.ordered_checks():
            try:
                getattr(self, f"check_{name}")()
            except _CheckError as exc:
                self.report.add(name, False, "n/a", {"error": str(exc)})
            except (mt.MTheoryError, NoRealSolution) as exc:
                self.report.add(name, False, "n/a", {"error": str(exc)})
        return self.report


class _CheckError(Exception):
    pass


def _lit(x):
    if x is None:
        return None
    if isinstance(x, CScalar):
        return format_complex(x)
    if isinstance(x, (QuadScalar, Fraction, int)):
        return str(QuadScalar.from_rational(x) if not isinstance(x, QuadScalar) else x)
    try:
        import numpy as np

        if isinstance(x, np.integer):
            return str(int(x))
    except ImportError:  # pragma: no cover
        pass
    return repr(float(x))


def _max_entry(matrix):
    best = QuadScalar(0)
    for x in matrix.flat:
        if abs(float(x)) > abs(float(best)):
            best = x
    return best


def run_config(cfg: RunConfig) -> dict:
    r = _Run(cfg)
    report = r.run()
    out = report.to_json()
    out.update(r.summary)
    out["config"] = cfg.to_json()
    return out


def render_summary(result: dict) -> str:
    lines = [f"backend: {result['backend']}  (field equations: {result.get('field_backend', 'exact')})"]
    rows = [(e["check"], e["status"].upper(), _with_float(e["residual"])) for e in result["entries"]]
    w1 = max([len("check")] + [len(r[0]) for r in rows])
    lines.append(f"{'check':<{w1}}  status  residual")
    lines.append("-" * (w1 + 20))
    for name, status, res in rows:
        lines.append(f"{name:<{w1}}  {status:<6}  {res}")
        err = next(e["details"].get("error") for e in result["entries"] if e["check"] == name)
        if err:
            lines.append(f"{'':<{w1}}          {err}")
    consts = result.get("constants")
    if consts:
        lines.append("")
        lines.append("constants (paper | solved):")
        lines.append(f"  lambda = {_with_float(consts['lambda'])}")
        for key in ("beta", "mu1", "mu2"):
            lines.append(f"  {key:<4} = {_with_float(consts['paper'][key])} | {_with_float(consts['solved'][key])}")
    lines.append("")
    lines.append("PASS" if result["passed"] else "FAIL: " + ", ".join(e["check"] for e in result["entries"]
                                                                        if e["status"] != "pass"))
    return "\n".join(lines) + "\n"


def _with_float(lit: str) -> str:
    """Exact literal followed by its float value in parentheses."""
    try:
        q = parse_quad(lit)
    except (ScalarError, ValueError, TypeError):
        return lit
    if isinstance(q, QuadScalar) and q.is_rational() and q.a.denominator == 1:
        return lit
    return f"{lit} ({float(q):.12g})"


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------


TABLES = ("spinor-eigenvalues", "connection", "curvature", "constants")


def _label(a: int, n: int) -> str:
    return "xi" if a == 2 * n else f"e{a + 1}"


def _combo(vec, n: int) -> str:
    terms = []
    for a, c in enumerate(vec):
        if not c:
            continue
        c = Fraction(c)
        lab = _label(a, n)
        if c == 1:
            s = lab
        elif c == -1:
            s = f"-{lab}"
        else:
            s = f"{c}*{lab}"
        terms.append(s)
    if not terms:
        return "0"
    return " + ".join(terms).replace("+ -", "- ")


def _imag_literal(z) -> str:
    """``-(5/2)i`` style for purely imaginary rationals."""
    if isinstance(z, CScalar) and not z.re and z.im.is_rational():
        q = z.im.a
        sign = "-" if q < 0 else "+"
        return f"{sign}({abs(q)})i"
    return format_complex(z)


def table_spinor_eigenvalues(n: int = 5, epsilon: int = -1) -> str:
    m = SasakiModel(kh.flat(n), epsilon)
    S = m.spinors
    lines = [f"Phi eigenvalues on Lambda^p U* (n={n}, eps={epsilon:+d})", "p  dim  eigenvalue"]
    for p in range(n + 1):
        vals = {_imag_literal(S.eigenvalue(m.phi_spin, S.basis_spinor(T)))
                for T in S.basis if len(T) == p}
        if len(vals) != 1:
            raise RuntimeError(f"Phi is not scalar on degree {p}")
        dim = sum(1 for T in S.basis if len(T) == p)
        lines.append(f"{p}  {dim:>3}  Phi phi = {vals.pop()} phi")
    return "\n".join(lines) + "\n"


def table_connection(n: int = 5, epsilon: int = -1) -> str:
    m = SasakiModel(kh.flat(n), epsilon)
    G = m.connection
    d = m.dim
    cells = [[_combo(G[a, b], n) for b in range(d)] for a in range(d)]
    labels = [_label(a, n) for a in range(d)]
    w = max(max(len(c) for row in cells for c in row), 4)
    head = f"{'nabla_a b':<9} " + " ".join(f"{lab:>{w}}" for lab in labels)
    lines = [f"Levi-Civita connection nabla_{{e_a}} e_b on the flat model (n={n}, eps={epsilon:+d})", head]
    for a in range(d):
        lines.append(f"{labels[a]:<9} " + " ".join(f"{c:>{w}}" for c in cells[a]))
    return "\n".join(lines) + "\n"


def table_curvature(n: int = 5, epsilon: int = -1) -> str:
    m = SasakiModel(kh.flat(n), epsilon)
    R = m.riemann_tensor
    d = m.dim
    lines = [f"Curvature R(e_a, e_b) e_c on the flat model (n={n}, eps={epsilon:+d}), a < b, nonzero only"]
    for a in range(d):
        for b in range(a + 1, d):
            for c in range(d):
                vec = [R[a, b, c, e] for e in range(d)]
                if any(vec):
                    lines.append(f"R({_label(a, n)}, {_label(b, n)}) {_label(c, n)} = {_combo(vec, n)}")
    return "\n".join(lines) + "\n"


def table_constants() -> str:
    m = SasakiModel(kh.flat(5), -1)
    lam = mt.solve_lambda(5, -1)
    f = mt.FluxAnsatz(lam, m.space)
    p = mt.p_form(m)
    beta = mt.solve_beta(m, f, p)
    sol = mt.solve_mu_constants(m, f, beta, p)
    rows = [
        ("lambda", lam),
        ("beta (solved)", beta),
        ("beta (paper)", mt.PAPER_BETA),
        ("mu1 (paper)", mt.PAPER_MU1),
        ("mu1 (solved)", sol.mu1),
        ("mu2 (paper)", mt.PAPER_MU2),
        ("mu2 (solved)", sol.mu2),
    ]
    tail = [("residual (paper mu1)", sol.residual_paper), ("residual (solved)", sol.residual_solved)]
    w = max(len(r[0]) for r in rows + tail)
    w2 = max(len(str(r[1])) for r in rows)
    lines = ["Constants of the flat-base background (n=5, eps=-1)"]
    for name, val in rows:
        lines.append(f"{name:<{w}}  {str(val):<{w2}}  {float(val):.15g}")
    for name, val in tail:
        lines.append(f"{name:<{w}}  {'':<{w2}}  {val!r}")
    return "\n".join(lines) + "\n"


def table(kind: str, n: int = 5, epsilon: int = -1) -> str:
    if kind == "spinor-eigenvalues":
        return table_spinor_eigenvalues(n, epsilon)
    if kind == "connection":
        return table_connection(n, epsilon)
    if kind == "curvature":
        return table_curvature(n, epsilon)
    if kind == "constants":
        return table_constants()
    raise ConfigError(f"unknown table kind {kind!r}; choose from {list(TABLES)}")


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------


ORACLES = ("koszul", "trace-direct", "spin-connection")


def oracle(kind: str, seed: int | None = None) -> dict:
    if kind == "koszul":
        m = SasakiModel(kh.flat(5), -1)
        diffs = m.koszul_oracle()
        return {"oracle": kind, "base": "flat", "diffs": diffs, "passed": all(v == 0 for v in diffs.values())}
    if kind == "trace-direct":
        seed = 3 if seed is None else seed
        out = {"oracle": kind, "base": {"random": {"seed": seed}}, "diffs": {}}
        ok = True
        for exact in (True, False):
            m = SasakiModel(kh.random_kahler_curvature(seed, exact=exact), -1)
            for k in (1, 2):
                cmp = mt.trace_forms_on_M(m, k)
                key = f"TrR{2 * k}.{'exact' if exact else 'float'}"
                out["diffs"][key] = cmp.difference
                ok &= cmp.agree if exact else cmp.agree_within(1e-9)
        out["passed"] = bool(ok)
        return out
    if kind == "spin-connection":
        base = kh.flat(5) if seed is None else kh.random_kahler_curvature(seed)
        m = SasakiModel(base, -1)
        d = m.spin_connection_oracle()
        return {"oracle": kind, "base": "flat" if seed is None else {"random": {"seed": seed}},
                "diffs": {"max": d}, "passed": d == 0}
    raise ConfigError(f"unknown oracle kind {kind!r}; choose from {list(ORACLES)}")


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sasakiverify", description="Sasakian / M-theory background verification")
    sub = ap.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run a configured verification suite")
    v.add_argument("--config", required=True)
    v.add_argument("--backend", choices=("exact", "float"))
    v.add_argument("--out", help="write the JSON report here (text summary goes next to it)")
    t = sub.add_parser("table", help="print a reference table")
    t.add_argument("kind", choices=TABLES)
    t.add_argument("--n", type=int, default=5)
    t.add_argument("--epsilon", type=int, default=-1, choices=(-1, 1))
    t.add_argument("--json", action="store_true", help="JSON output (connection and curvature)")
    o = sub.add_parser("oracle", help="run an independent-path comparison")
    o.add_argument("kind", choices=ORACLES)
    o.add_argument("--seed", type=int)
    return ap


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def main(argv=None) -> int:
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if args.command == "verify":
            cfg = load_config(args.config, args.backend)
            result = run_config(cfg)
            text = render_summary(result)
            if args.out:
                out = Path(args.out)
                out.write_text(dumps(result))
                out.with_suffix(".txt").write_text(text)
            sys.stdout.write(text)
            return 0 if result["passed"] else 1
        if args.command == "table":
            if args.kind != "constants" and args.n < 1:
                raise ConfigError("n must be positive")
            if args.json:
                if args.kind not in ("connection", "curvature"):
                    raise ConfigError("--json is available for the connection and curvature tables")
                m = SasakiModel(kh.flat(args.n), args.epsilon)
                data = m.connection_table() if args.kind == "connection" else m.curvature_table()
                sys.stdout.write(dumps(data))
                return 0
            sys.stdout.write(table(args.kind, args.n, args.epsilon))
            return 0
        result = oracle(args.kind, args.seed)
        sys.stdout.write(dumps(result))
        return 0 if result["passed"] else 1
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
