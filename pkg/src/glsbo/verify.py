"""Seeded verification suites with structured reports.

Every suite draws its random inputs from a generator seeded by
``(seed, trial)``, so a report is reproducible trial by trial. A check
compares a left and a right hand side; failures keep the full inputs.
Quadrature that does not reach its tolerance is recorded as a failure.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .jets import (
    apply_bs_operator,
    apply_operator,
    continued_bb_kernel_n1,
    fi_proportionality,
)
from .kernel import (
    KernelSpec,
    b_chain,
    b_constant,
    c_constant,
    c_tilde_constant,
    d_constant,
    d_formula_n1,
    det_convention_kernel_n1,
    eval_kernel,
    jet_kernel,
    normalized_s_constant,
    normalized_t_constant,
)
from .matgroup import (
    cocycle,
    lemma_first,
    lemma_second,
    sample_integer_matrix,
    sample_regular_matrix,
    z0,
)
from .params import (
    GParams,
    ParamPoint,
    SpectralParams,
    bb_arguments,
    bb_bf_exponents,
    bb_bs_polynomial,
    bf_bs_polynomial,
    bf_pole_conditions,
    bs_polynomial,
    bs_sign,
    bs_target,
    duplication_quotient,
    f_polynomial,
    is_irreducible_ps,
    is_locally_integrable,
    minor_shift_polynomial,
    minor_shift_target,
    normalizer_bb,
    normalizer_bf,
    normalizer_intro,
    operator_identity,
    ps_to_spectral,
    shifted_d1_polynomial,
    shifted_d1_source,
    spectral_to_ps,
    weyl_act_g,
    weyl_act_h,
    zero_set_member,
)
from .quad import (
    MAX_WORD,
    DomainError,
    QuadratureError,
    apply_ks_S,
    apply_ks_T,
    apply_ks_word,
    convolution_closed_form,
    convolution_integral,
    residue_model,
    spherical_closed_form_n1,
    spherical_pairing,
)
from .scalars import e_function, format_complex

POLE_MARGIN = 1e-3
MAX_RESAMPLE = 200


class UnknownSuiteError(KeyError):
    pass


class DegenerateRatioError(ArithmeticError):
    pass


@dataclass
class SuiteConfig:
    """What to run: suite name, rank, trial count, seed, tolerance and sampling box."""

    suite: str
    n: int = 2
    trials: int = 20
    seed: int = 0
    tol: float | None = None
    re_box: tuple = (-1.0, 1.0)
    im_box: tuple = (-1.0, 1.0)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.tol is not None and not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.n < 1:
            raise ValueError("n must be at least 1")


@dataclass
class Failure:
    trial: int
    inputs: dict
    lhs: complex | None
    rhs: complex | None
    rel_err: float
    note: str = ""

    def to_dict(self) -> dict:
        fmt = lambda z: None if z is None else format_complex(z)  # noqa: E731
        return {"trial": self.trial, "inputs": self.inputs, "lhs": fmt(self.lhs),
                "rhs": fmt(self.rhs), "rel_err": _json_float(self.rel_err), "note": self.note}


@dataclass
class SuiteReport:
    suite: str
    n: int
    trials: int
    seed: int
    tol: float
    checks: int = 0
    failures: list = field(default_factory=list)
    max_rel_err: float = 0.0
    runtime_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "suite": self.suite, "n": self.n, "trials": self.trials, "seed": self.seed,
            "tol": self.tol, "pass": self.passed, "checks": self.checks,
            "max_rel_err": _json_float(self.max_rel_err),
            "failures": [f.to_dict() for f in self.failures],
            "runtime_ms": round(self.runtime_ms, 3),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def summary_row(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return (f"| {self.suite} | {self.n} | {self.trials} | {self.seed} | {self.tol:.1e} | "
                f"{status} | {self.checks} | {self.max_rel_err:.3e} | {len(self.failures)} | "
                f"{self.runtime_ms:.0f} |")

    def to_markdown(self) -> str:
        return reports_to_markdown([self])


MD_HEADER = ("| suite | n | trials | seed | tol | result | checks | max rel err | failures | ms |\n"
             "|---|---|---|---|---|---|---|---|---|---|")


def reports_to_markdown(reports) -> str:
    lines = [MD_HEADER] + [r.summary_row() for r in reports]
    for r in reports:
        for f in r.failures[:10]:
            lines.append(f"\n- {r.suite} trial {f.trial}: rel err {f.rel_err:.3e} {f.note}".rstrip())
    return "\n".join(lines) + "\n"


def _json_float(x: float):
    return x if math.isfinite(x) else str(x)


def _c(z) -> str:
    return format_complex(z)


def _mat(g) -> list:
    return [[float(x) for x in row] for row in np.asarray(g, dtype=float)]


class Recorder:
    """Accumulates checks of one suite run."""

    def __init__(self, tol: float):
        self.tol = tol
        self.failures: list = []
        self.max_rel_err = 0.0
        self.checks = 0

    def _update(self, rel):
        if math.isfinite(rel):
            self.max_rel_err = max(self.max_rel_err, rel)
        else:
            self.max_rel_err = math.inf

    def compare(self, trial, inputs, lhs, rhs, scale=None, tol=None, note="") -> float:
        """Relative comparison |lhs - rhs| / scale, scale defaulting to max(|lhs|, |rhs|)."""
        tol = self.tol if tol is None else tol
        lhs, rhs = complex(lhs), complex(rhs)
        if scale is None:
            scale = max(abs(lhs), abs(rhs))
        diff = abs(lhs - rhs)
        rel = 0.0 if diff == 0 else (diff / scale if scale > 0 else math.inf)
        if not (math.isfinite(lhs.real) and math.isfinite(lhs.imag)):
            rel = math.inf
        self.checks += 1
        self._update(rel)
        if not rel <= tol:
            self.failures.append(Failure(trial, inputs, lhs, rhs, rel, note))
        return rel

    def exact(self, trial, inputs, lhs, rhs, note=""):
        self.checks += 1
        if lhs != rhs:
            self._update(1.0)
            self.failures.append(Failure(trial, inputs, complex(lhs), complex(rhs), 1.0, note))

    def truth(self, trial, inputs, ok: bool, note=""):
        self.checks += 1
        if not ok:
            self._update(1.0)
            self.failures.append(Failure(trial, inputs, None, None, 1.0, note))

    def error(self, trial, inputs, exc: Exception):
        self.checks += 1
        self._update(math.inf)
        best = getattr(exc, "best", None)
        self.failures.append(Failure(trial, inputs, best, None, math.inf,
                                     f"{type(exc).__name__}: {exc}"))


def ratio_of_ratios(lhs1, rhs1, lhs2, rhs2, floor: float = 1e-300) -> complex:
    """[lhs1 / rhs1] / [lhs2 / rhs2]; equals 1 when the identity holds up to a
    constant shared by both points."""
    for v in (rhs1, rhs2, lhs2):
        if abs(v) <= floor:
            raise DegenerateRatioError("right hand side vanishes; resample")
    return (lhs1 / rhs1) / (lhs2 / rhs2)


# Sampling ------------------------------------------------------------------------


def _pole_distance(z: complex) -> float:
    m = min(0, round(z.real))
    return abs(z - m)


def _far_from_poles(p: ParamPoint, margin: float = POLE_MARGIN) -> bool:
    args = []
    for z, e in bb_arguments(p):
        args += [z, (z + e) / 2, (z + 1 - e) / 2, z - 1]
    for vec, bits in ((p.lam, p.xi), (p.nu, p.eta)):
        for a in range(len(vec)):
            for b in range(len(vec)):
                if a != b:
                    d = vec[a] - vec[b]
                    e = (bits[a] + bits[b]) % 2
                    args += [(d + e) / 2, (d + 1 + e) / 2]
    return all(_pole_distance(complex(z)) >= margin for z in args)


def random_point(n: int, rng, cfg: SuiteConfig, xi=None, eta=None) -> ParamPoint:
    """Generic complex parameters in the configured box, away from all referenced poles
    and with irreducible principal series on both sides."""
    lo, hi = cfg.re_box
    ilo, ihi = cfg.im_box
    for _ in range(MAX_RESAMPLE):
        lam = rng.uniform(lo, hi, n + 1) + 1j * rng.uniform(ilo, ihi, n + 1)
        nu = rng.uniform(lo, hi, n) + 1j * rng.uniform(ilo, ihi, n)
        x = rng.integers(0, 2, n + 1) if xi is None else xi
        e = rng.integers(0, 2, n) if eta is None else eta
        p = ParamPoint.make(lam, nu, x, e)
        if (_far_from_poles(p) and is_irreducible_ps(p.g)
                and is_irreducible_ps(GParams(p.eta, p.nu))):
            return p
    raise RuntimeError("could not sample a generic parameter point")


def _window_pair(rng, lo=-0.3, hi=0.3, bound=-0.2):
    """(x, y) uniform in [lo, hi]^2 conditioned on x + y < bound."""
    while True:
        x, y = rng.uniform(lo, hi, 2)
        if x + y < bound:
            return x, y


def sample_t_window(n: int, i: int, rng, cfg: SuiteConfig) -> ParamPoint:
    """Point with Re(lambda_i - nu_j), Re(nu_j - lambda_{i+1}) in [-0.3, 0.3] (j = n+1-i)
    and Re(lambda_i - lambda_{i+1}) < -0.2."""
    j = n + 1 - i
    for _ in range(MAX_RESAMPLE):
        p = random_point(n, rng, cfg)
        lam = p.lam.copy()
        x, y = _window_pair(rng)
        lam[i - 1] = p.nu[j - 1].real + x + 1j * lam[i - 1].imag
        lam[i] = p.nu[j - 1].real - y + 1j * lam[i].imag
        q = ParamPoint.make(lam, p.nu, p.xi, p.eta)
        if _far_from_poles(q):
            return q
    raise RuntimeError("could not sample a point in the window")


def sample_s_window(n: int, i: int, rng, cfg: SuiteConfig) -> ParamPoint:
    """Point in the H-side window of the i-th simple reflection."""
    k = n + 1 - i
    for _ in range(MAX_RESAMPLE):
        p = random_point(n, rng, cfg)
        nu = p.nu.copy()
        x, y = _window_pair(rng)
        nu[i - 1] = p.lam[k - 1].real - x + 1j * nu[i - 1].imag
        nu[i] = p.lam[k - 1].real + y + 1j * nu[i].imag
        q = ParamPoint.make(p.lam, nu, p.xi, p.eta)
        if _far_from_poles(q):
            return q
    raise RuntimeError("could not sample a point in the window")


def sample_chain_window(n: int, i: int, sign: str, rng, cfg: SuiteConfig, xi=None, eta=None):
    """Point where every step of the w_+ (or w_-) chain of simple reflections
    lies in its window; the margins are tighter since the constraints stack."""
    for _ in range(MAX_RESAMPLE):
        p = random_point(n, rng, cfg, xi, eta)
        lam, nu = p.lam.copy(), p.nu.copy()
        steps = range(i, n + 1) if sign == "+" else range(1, i)
        for j in steps:
            x, y = _window_pair(rng, -0.15, 0.05, -0.2)
            if sign == "+":
                nu[n - j] = lam[i - 1].real + y + 1j * nu[n - j].imag
                lam[j] = nu[n - j].real + x + 1j * lam[j].imag
            else:
                nu[n - j] = lam[i - 1].real - x + 1j * nu[n - j].imag
                lam[j - 1] = nu[n - j].real - y + 1j * lam[j - 1].imag
        q = ParamPoint.make(lam, nu, p.xi, p.eta)
        if _far_from_poles(q):
            return q
    raise RuntimeError("could not sample a point in the chain window")


def chain_word(sign: str, i: int, n: int) -> list:
    return list(range(i, n + 1)) if sign == "+" else list(range(i - 1, 0, -1))


def chain_source(sign: str, i: int, p: ParamPoint) -> ParamPoint:
    """Parameter the innermost operator of the chain acts on."""
    q = p
    for a in chain_word(sign, i, p.n):
        q = weyl_act_g(q, a)
    return q


# Suites ----------------------------------------------------------------------------


def _suite_lemma_algebra(cfg, trial, rng, rec):
    n = cfg.n
    g = sample_integer_matrix(n, rng)
    inputs = {"g": [[int(x) for x in row] for row in g]}
    for i in range(1, n + 1):
        lhs, rhs = lemma_first(i, g)
        rec.exact(trial, {**inputs, "i": i, "identity": "first"}, lhs, rhs)
    for i in range(1, n):
        lhs, rhs = lemma_second(i, g)
        rec.exact(trial, {**inputs, "i": i, "identity": "second"}, lhs, rhs)


def _suite_cocycle(cfg, trial, rng, rec):
    n = cfg.n
    g = sample_regular_matrix(n, rng)
    x = float(rng.normal())
    i = int(rng.integers(1, n + 1))
    sides = [("right", i)]
    if n >= 2:
        sides.append(("left", int(rng.integers(1, n))))
    for side, k in sides:
        for kind, top in (("phi", n + 1), ("psi", n)):
            for j in range(1, top + 1):
                lhs, rhs, scale = cocycle(side, kind, j, k, x, g)
                rec.compare(trial, {"g": _mat(g), "x": x, "i": k, "j": j, "side": side,
                                    "minor": kind}, lhs, rhs, scale=scale)


def _suite_convolution(cfg, trial, rng, rec):
    while True:
        a, b, c, d = rng.uniform(-2, 2, 4)
        if min(abs(a), abs(c), abs(a * d - b * c)) > 0.1:
            break
    while True:
        alpha = complex(rng.uniform(-0.7, 0.3), rng.uniform(-2, 2))
        beta = complex(rng.uniform(-0.7, 0.3), rng.uniform(-2, 2))
        if (alpha + beta).real < -1.3:
            break
    eps, xi = (int(v) for v in rng.integers(0, 2, 2))
    inputs = {"abcd": [a, b, c, d], "alpha": _c(alpha), "beta": _c(beta), "eps": eps, "xi": xi}
    try:
        lhs = convolution_integral(a, b, c, d, alpha, beta, eps, xi, tol=1e-10)
    except (QuadratureError, DomainError) as exc:
        rec.error(trial, inputs, exc)
        return
    rec.compare(trial, inputs, lhs, convolution_closed_form(a, b, c, d, alpha, beta, eps, xi))


def _ks_compare(rec, trial, p, g, i, side, normalization):
    inputs = {"p": p.as_dict(), "g": _mat(g), "i": i, "side": side, "normalization": normalization}
    try:
        if side == "T":
            lhs = apply_ks_T(i, p, g, tol=1e-10, normalization=normalization)
            q = weyl_act_g(p, i)
            const = c_constant(i, p) if normalization == "none" else normalized_t_constant(i, p)
        else:
            lhs = apply_ks_S(i, p, g, tol=1e-10, normalization=normalization)
            q = weyl_act_h(p, i)
            const = d_constant(i, p) if normalization == "none" else normalized_s_constant(i, p)
    except (QuadratureError, DomainError) as exc:
        rec.error(trial, inputs, exc)
        return
    rec.compare(trial, inputs, lhs, const.value * eval_kernel(KernelSpec(q, normalization), g))


def _suite_functional_identities(cfg, trial, rng, rec):
    n = cfg.n
    for i in range(1, n + 1):
        g = sample_regular_matrix(n, rng)
        _ks_compare(rec, trial, sample_t_window(n, i, rng, cfg), g, i, "T", "none")
        _ks_compare(rec, trial, sample_t_window(n, i, rng, cfg), g, i, "T", "bf")
    for i in range(1, n):
        g = sample_regular_matrix(n, rng)
        _ks_compare(rec, trial, sample_s_window(n, i, rng, cfg), g, i, "S", "none")
        _ks_compare(rec, trial, sample_s_window(n, i, rng, cfg), g, i, "S", "bf")
    if n == 1:
        p = random_point(1, rng, cfg)
        (l1, l2), (nu,), (x1, x2), (e,) = p.lam, p.nu, p.xi, p.eta
        lhs = (l1 - l2 - 1) * d_formula_n1(l2 + 1, l1, nu, x2 + 1, x1, e).value
        rhs = (nu - l2 - 0.5) * d_formula_n1(l2, l1, nu, x2, x1, e).value
        rec.compare(trial, {"p": p.as_dict(), "check": "d ratio identity"}, lhs, rhs,
                    tol=min(rec.tol, 1e-12))
        q = sample_t_window(1, 1, rng, cfg)
        inputs = {"p": q.as_dict(), "check": "d formula at z0"}
        try:
            lhs = apply_ks_T(1, q, z0(1), tol=1e-12, normalized_operator=False)
        except (QuadratureError, DomainError) as exc:
            rec.error(trial, inputs, exc)
            return
        (l1, l2), (nu,), (x1, x2), (e,) = q.lam, q.nu, q.xi, q.eta
        sign = (-1) ** (x1 + e)
        rhs = sign * d_formula_n1(l1, l2, nu, x1, x2, e).value * eval_kernel(
            KernelSpec(weyl_act_g(q, 1)), z0(1))
        rec.compare(trial, inputs, lhs, rhs)


def _kinds(n):
    out = [("D", i) for i in range(1, n + 1)] + [("P", i) for i in range(1, n + 1)]
    out += [("L", i) for i in range(1, n)] + [("C", i) for i in range(1, n + 1)]
    return out + [("F", i) for i in range(1, n + 1)]


def _suite_bs_identities(cfg, trial, rng, rec):
    n = cfg.n
    for kind, i in _kinds(n):
        p = random_point(n, rng, cfg)
        g = sample_regular_matrix(n, rng)
        inputs = {"p": p.as_dict(), "g": _mat(g), "kind": kind, "i": i}
        factor, q = operator_identity(kind, i, p)
        lhs = apply_bs_operator(kind, i, p, g)
        rec.compare(trial, {**inputs, "normalization": "none"}, lhs,
                    factor * eval_kernel(KernelSpec(q), g))
        if kind in ("D", "P", "L"):
            lhs = apply_bs_operator(kind, i, p, g, "bb")
            rhs = bs_sign(kind) * bb_bs_polynomial(kind, i, p) * eval_kernel(KernelSpec(q, "bb"), g)
            rec.compare(trial, {**inputs, "normalization": "bb"}, lhs, rhs)
    if n == 1:
        _n1_golden(cfg, trial, rng, rec)


def _n1_golden(cfg, trial, rng, rec):
    """D K = t K' with the det(w0 g) kernel; with the |det g| kernel the
    operators -D and P give t K' and s_1 K''."""
    p = random_point(1, rng, cfg)
    g = sample_regular_matrix(1, rng)
    sp = ps_to_spectral(p)
    (s1, s2), (t,) = sp.s, sp.t
    (d1, d2), (e,) = sp.delta, sp.eps
    sp_d = SpectralParams((d1, d2 + 1), (s1, s2 + 1), (e + 1,), (t - 1,))
    sp_p = SpectralParams((d1 + 1, d2 + 1), (s1 - 1, s2 + 1), (e,), (t,))
    inputs = {"p": p.as_dict(), "g": _mat(g)}
    spec = KernelSpec(p)
    lhs = apply_operator("D", 1, p, lambda M: jet_kernel(spec, M), g)
    rec.compare(trial, {**inputs, "check": "D K = t K'"}, lhs,
                t * eval_kernel(KernelSpec(spectral_to_ps(sp_d)), g), tol=min(rec.tol, 1e-10))
    f = det_convention_kernel_n1(sp)
    lhs = -apply_operator("D", 1, p, f, g)
    rec.compare(trial, {**inputs, "check": "-D K = t K' (|det g| kernel)"}, lhs,
                t * det_convention_kernel_n1(sp_d)(g), tol=min(rec.tol, 1e-10))
    lhs = apply_operator("P", 1, p, f, g)
    rec.compare(trial, {**inputs, "check": "P K = s1 K'' (|det g| kernel)"}, lhs,
                s1 * det_convention_kernel_n1(sp_p)(g), tol=min(rec.tol, 1e-10))


def _random_spectral(n, rng, cfg):
    for _ in range(MAX_RESAMPLE):
        p = random_point(n, rng, cfg)
        sp = ps_to_spectral(p)
        if _far_from_poles(shifted_d1_source(sp)):
            return sp
    raise RuntimeError("could not sample a generic spectral point")


def _suite_bs_shifted(cfg, trial, rng, rec):
    n = cfg.n
    sp1 = _random_spectral(n, rng, cfg)
    # second point with the same parities so the constant is shared
    for _ in range(MAX_RESAMPLE):
        p2 = random_point(n, rng, cfg)
        s2 = ps_to_spectral(p2)
        sp2 = SpectralParams(sp1.delta, s2.s, sp1.eps, s2.t)
        if _far_from_poles(spectral_to_ps(sp2)) and _far_from_poles(shifted_d1_source(sp2)):
            break
    g = sample_regular_matrix(n, rng)
    vals = []
    for sp in (sp1, sp2):
        q = shifted_d1_source(sp)
        lhs = apply_bs_operator("D", 1, q, g, "bf")
        rhs = shifted_d1_polynomial(sp) * eval_kernel(KernelSpec(spectral_to_ps(sp), "bf"), g)
        vals += [lhs, rhs]
    inputs = {"s1": [_c(z) for z in sp1.s], "t1": [_c(z) for z in sp1.t],
              "s2": [_c(z) for z in sp2.s], "t2": [_c(z) for z in sp2.t],
              "delta": list(sp1.delta), "eps": list(sp1.eps), "g": _mat(g)}
    try:
        r = ratio_of_ratios(*vals)
    except DegenerateRatioError as exc:
        rec.error(trial, inputs, exc)
        return
    rec.compare(trial, inputs, r, 1.0, scale=1.0)


def _line(p: ParamPoint, rng, count: int, length: float = 1.0):
    dl = rng.normal(size=p.n + 1)
    dn = rng.normal(size=p.n)
    us = np.linspace(0.0, length, count)
    return us, [ParamPoint.make(p.lam + u * dl, p.nu + u * dn, p.xi, p.eta) for u in us]


def _suite_normalizer_structure(cfg, trial, rng, rec):
    n = cfg.n
    p = random_point(n, rng, cfg)
    # (a) bb / bf / (duplication gamma products) is pi^a 2^b with a, b affine
    us, pts = _line(p, rng, 5, 0.5)
    q = np.array([normalizer_bb(x).value / normalizer_bf(x).value / duplication_quotient(x) for x in pts])
    logs = np.log(np.abs(q)) + 1j * np.unwrap(np.angle(q))
    coef = np.polyfit(us, logs, 1)
    resid = float(np.max(np.abs(np.polyval(coef, us) - logs)))
    rec.compare(trial, {"p": p.as_dict(), "check": "log-linear fit"}, resid, 0.0, scale=1.0,
                tol=max(rec.tol, 1e-9))
    for x in pts[:2]:
        a, b = bb_bf_exponents(x)
        closed = np.exp(a * math.log(math.pi) + b * math.log(2.0))
        rec.compare(trial, {"p": x.as_dict(), "check": "pi/2 exponents"},
                    normalizer_bb(x).value / normalizer_bf(x).value / duplication_quotient(x), closed)
    # (b) shift ratios: constant along lines, hence no zeros and no poles
    us, pts = _line(p, rng, 9, 2.0)
    checks = [(k, i) for k in ("D", "P") for i in range(1, n + 1)]
    checks += [("L", i) for i in range(1, n)]
    checks += [("phi", k) for k in range(1, n + 2)] + [("psi", k) for k in range(1, n + 1)]
    for kind, i in checks:
        vals = []
        for x in pts:
            if kind in ("phi", "psi"):
                tgt = minor_shift_target(kind, i, x)
                v = normalizer_bf(tgt).value / normalizer_bf(x).value / minor_shift_polynomial(kind, i, x)
            else:
                tgt = bs_target(kind, i, x)
                v = (bs_polynomial(kind, i, x) * normalizer_bf(tgt).value / normalizer_bf(x).value
                     / bf_bs_polynomial(kind, i, x))
            vals.append(v)
        vals = np.array(vals)
        bounded = bool(np.all(np.isfinite(vals)) and np.all(np.abs(vals / vals[0]) >= 1e-6)
                       and np.all(np.abs(vals / vals[0]) <= 1e6))
        rec.truth(trial, {"p": p.as_dict(), "kind": kind, "i": i}, bounded, "ratio bounded")
        for v in vals[1:]:
            rec.compare(trial, {"p": p.as_dict(), "kind": kind, "i": i, "check": "constant ratio"},
                        v, vals[0])


def _zero_set_point(n, rng, cfg):
    """A member of N_{i,j,k} (i < j) or M_{i,j,k} (i < j <= n) with other entries generic."""
    p = random_point(n, rng, cfg)
    lam, nu = p.lam.copy(), p.nu.copy()
    xi, eta = list(p.xi), list(p.eta)
    m1, m2 = (int(v) for v in rng.integers(0, 4, 2))
    use_m = n >= 2 and rng.random() < 0.5
    if not use_m:
        i, j = sorted(rng.choice(np.arange(1, n + 2), 2, replace=False))
        k = int(rng.integers(1, n + 1))
        lam[i - 1] = nu[k - 1] - 0.5 - (xi[i - 1] + eta[k - 1]) % 2 - 2 * m1
        lam[j - 1] = nu[k - 1] + 0.5 + (eta[k - 1] + xi[j - 1]) % 2 + 2 * m2
        label = ("N", int(i), int(j), k)
    else:
        i, j = sorted(rng.choice(np.arange(1, n + 1), 2, replace=False))
        k = int(rng.integers(1, n + 2))
        nu[j - 1] = lam[k - 1] - 0.5 - (eta[j - 1] + xi[k - 1]) % 2 - 2 * m1
        nu[i - 1] = lam[k - 1] + 0.5 + (xi[k - 1] + eta[i - 1]) % 2 + 2 * m2
        label = ("M", int(i), int(j), k)
    return ParamPoint.make(lam, nu, xi, eta), label


def _suite_zero_sets(cfg, trial, rng, rec):
    n = cfg.n
    p, label = _zero_set_point(n, rng, cfg)
    inputs = {"p": p.as_dict(), "set": list(label)}
    rec.truth(trial, inputs, label in zero_set_member(p), "membership detected")
    rec.truth(trial, inputs, bool(bf_pole_conditions(p)), "normalizer pole present")
    spec = KernelSpec(p, "bf")
    for _ in range(10):
        g = sample_regular_matrix(n, rng)
        rec.exact(trial, {**inputs, "g": _mat(g)}, eval_kernel(spec, g), 0j, "kernel vanishes")
    q = random_point(n, rng, cfg)
    rec.truth(trial, {"p": q.as_dict()}, zero_set_member(q) == [], "generic point not a member")


def _suite_residue_model(cfg, trial, rng, rec):
    a = rng.uniform(0.5, 2.0)
    b, c = rng.uniform(-1, 1, 2)
    tests = {
        "gauss": lambda x: np.exp(-x * x),
        "rational": lambda x: (1 + x * x) ** -2.0,
        "shifted": lambda x: np.exp(-x * x) * (np.cos(x) + x),
        "random": lambda x: np.exp(-a * x * x) * (1 + b * x + c * x * x),
    }
    for name, phi in tests.items():
        inputs = {"phi": name, "a": a, "b": b, "c": c}
        vals = [residue_model(-1 + 10.0 ** -k, phi) for k in range(2, 7)]
        errs = [abs(v - 1.0) for v in vals]
        rec.compare(trial, {**inputs, "t": -1 + 1e-6}, vals[-1], 1.0, scale=1.0)
        rec.truth(trial, inputs, errs[-1] <= errs[0] + 1e-12, "error decreases toward t = -1")
    t = rng.uniform(-0.99, 2.0)
    odd = residue_model(t, lambda x: x * np.exp(-a * x * x))
    rec.compare(trial, {"phi": "odd", "t": t, "a": a}, odd, 0.0, scale=1.0)
    rec.compare(trial, {"phi": "gauss", "t": 0.0}, residue_model(0.0, tests["gauss"]), 1.0)


def _spherical_n1_point(rng, cfg):
    for _ in range(MAX_RESAMPLE):
        s1, t = rng.uniform(-0.7, 1.0, 2)
        nu = complex(rng.uniform(-0.5, 0.5), rng.uniform(*cfg.im_box))
        lam = [nu + s1 + 0.5 + 1j * rng.uniform(*cfg.im_box), nu - t - 0.5 + 1j * rng.uniform(*cfg.im_box)]
        p = ParamPoint.make(lam, [nu])
        if is_locally_integrable(p) and _far_from_poles(p):
            return p
    raise RuntimeError("could not sample an integrable point")


def _spherical_n2_point(rng, cfg):
    """Mild exponents: every spectral real part at least -0.75 and a decaying tail."""
    base_lam, base_nu = np.array([0.6, 0.0, -0.6]), np.array([0.2, -0.2])
    for _ in range(MAX_RESAMPLE):
        lam = base_lam + rng.uniform(-0.15, 0.15, 3) + 0.3j * rng.uniform(-1, 1, 3)
        nu = base_nu + rng.uniform(-0.1, 0.1, 2) + 0.3j * rng.uniform(-1, 1, 2)
        p = ParamPoint.make(lam, nu)
        sp = ps_to_spectral(p)
        if (min(sp.s[:2].real.min(), sp.t.real.min()) >= -0.75 and is_locally_integrable(p)
                and _far_from_poles(p)):
            return p
    raise RuntimeError("could not sample a spherical test point")


def _spherical_target(p: ParamPoint) -> complex:
    n = p.n
    eg = e_function([p.chi(i) for i in range(1, n + 2)])
    eh = e_function([p.psi(j) for j in range(1, n + 1)], inverse=True)
    return normalizer_intro(p).value * eg * eh


def _suite_spherical(cfg, trial, rng, rec):
    n = cfg.n
    if n > 2:
        rec.truth(trial, {"n": n}, False, "spherical pairing is implemented for n <= 2")
        return
    sampler = _spherical_n1_point if n == 1 else _spherical_n2_point
    qtol = 1e-10 if n == 1 else 1e-6
    pts = [sampler(rng, cfg), sampler(rng, cfg)]
    vals = []
    inputs = {"points": [p.as_dict() for p in pts]}
    for p in pts:
        try:
            vals += [spherical_pairing(n, p.lam, p.nu, tol=qtol), _spherical_target(p)]
        except (QuadratureError, DomainError) as exc:
            rec.error(trial, inputs, exc)
            return
    try:
        r = ratio_of_ratios(*vals)
    except DegenerateRatioError as exc:
        rec.error(trial, inputs, exc)
        return
    rec.compare(trial, inputs, r, 1.0, scale=1.0)
    if n == 1:
        p = pts[0]
        rec.compare(trial, {"p": p.as_dict(), "check": "closed form"}, vals[0],
                    spherical_closed_form_n1(p.lam, p.nu))


def _suite_ftilde(cfg, trial, rng, rec):
    n = cfg.n
    gs = [sample_regular_matrix(n, rng) for _ in range(3)]
    for i in range(1, n + 1):
        p = random_point(n, rng, cfg)
        res = fi_proportionality(i, p, gs)
        inputs = {"p": p.as_dict(), "i": i}
        rec.truth(trial, inputs, res.label == f"lambda+1-e{i}, nu+1", f"matched shift {res.label}")
        if res.constant is not None:
            rec.compare(trial, {**inputs, "check": "polynomial"}, res.constant, f_polynomial(i, p))


def _chain_cases(n):
    out = []
    for i in range(1, n + 1):
        if 1 <= n + 1 - i <= MAX_WORD:
            out.append(("+", i))
    for i in range(2, n + 2):
        if 1 <= i - 1 <= MAX_WORD:
            out.append(("-", i))
    return out


def _suite_ks_composition(cfg, trial, rng, rec):
    n = cfg.n
    # inverse relation of the two functional identity constants
    p = random_point(n, rng, cfg)
    for i in range(1, n + 1):
        rec.compare(trial, {"p": p.as_dict(), "i": i, "check": "ctilde c = 1"},
                    c_tilde_constant(i, p).value * c_constant(i, weyl_act_g(p, i)).value, 1.0,
                    tol=min(rec.tol, 1e-11))
    cases = _chain_cases(n)
    sign, i = cases[trial % len(cases)]
    xi = rng.integers(0, 2, n + 1)
    eta = rng.integers(0, 2, n)
    g = sample_regular_matrix(n, rng)
    vals = []
    pts = [sample_chain_window(n, i, sign, rng, cfg, xi, eta) for _ in range(2)]
    inputs = {"sign": sign, "i": i, "g": _mat(g), "points": [q.as_dict() for q in pts]}
    for q in pts:
        word = chain_word(sign, i, n)
        try:
            v = apply_ks_word(word, chain_source(sign, i, q), g, tol=1e-8)
        except (QuadratureError, DomainError) as exc:
            rec.error(trial, inputs, exc)
            return
        k = eval_kernel(KernelSpec(q), g)
        rec.compare(trial, {**inputs, "p": q.as_dict(), "check": "chain"},
                    k, b_chain(sign, i, q).value * v)
        vals += [k, b_constant(sign, i, q).value * v]
    try:
        r = ratio_of_ratios(*vals)
    except DegenerateRatioError as exc:
        rec.error(trial, inputs, exc)
        return
    rec.compare(trial, {**inputs, "check": "ratio of ratios with displayed b"}, r, 1.0, scale=1.0)


HAND_CASES = [
    # (lambda, xi, expected irreducible)
    ([1, 0], [0, 0], False),
    ([2, 0], [0, 1], False),
    ([2, 0], [0, 0], True),
    ([1, 0], [0, 1], True),
    ([0.3 + 0.2j, -0.1], [0, 0], True),
    ([3, 0, 0.5j], [1, 1, 0], False),
    ([0, 0, 0], [0, 1, 0], True),
]
INTEGRABLE_CASES = [
    # (lambda, nu, expected)
    ([0, 0], [0], True),
    ([1, 0], [0], True),
    ([-0.5, 0], [0], False),
    ([0, 0.5], [0], False),
    ([0, 0, 0], [0, 0], True),
    ([0.1, 0, 0], [0.6, 0], False),
]


def _suite_irreducibility(cfg, trial, rng, rec):
    lam, xi, expected = HAND_CASES[trial % len(HAND_CASES)]
    rec.truth(trial, {"lambda": [_c(z) for z in lam], "xi": xi},
              is_irreducible_ps(GParams(xi, lam)) == expected, "irreducibility")
    lam, nu, expected = INTEGRABLE_CASES[trial % len(INTEGRABLE_CASES)]
    rec.truth(trial, {"lambda": lam, "nu": nu},
              is_locally_integrable(ParamPoint.make(lam, nu)) == expected, "local integrability")
    # random points: integrability agrees with positivity of the gamma arguments
    p = ParamPoint.make(rng.uniform(-1.5, 1.5, cfg.n + 1), rng.uniform(-1.5, 1.5, cfg.n))
    direct = all(z.real > 0 for z, _ in bb_arguments(p))
    rec.truth(trial, {"p": p.as_dict()}, is_locally_integrable(p) == direct, "integrability vs arguments")
    q = random_point(cfg.n, rng, cfg)
    rec.truth(trial, {"p": q.as_dict()}, is_irreducible_ps(q.g), "generic point irreducible")


def _suite_continuation(cfg, trial, rng, rec):
    """n = 1: the kernel continued through the D identity equals direct evaluation."""
    for _ in range(MAX_RESAMPLE):
        p = random_point(1, rng, cfg)
        sp = ps_to_spectral(p)
        t = complex(rng.uniform(-1.95, -1.05), sp.t[0].imag)
        sp = SpectralParams(sp.delta, sp.s, sp.eps, (t,))
        if _far_from_poles(spectral_to_ps(sp)):
            break
    for _ in range(3):
        g = sample_regular_matrix(1, rng)
        lhs = continued_bb_kernel_n1(sp, g)
        rhs = eval_kernel(KernelSpec(spectral_to_ps(sp), "bb"), g)
        rec.compare(trial, {"s": [_c(z) for z in sp.s], "t": _c(t), "delta": list(sp.delta),
                            "eps": list(sp.eps), "g": _mat(g)}, lhs, rhs)


SUITES = {
    "lemma-algebra": (_suite_lemma_algebra, 0.0),
    "cocycle": (_suite_cocycle, 1e-10),
    "convolution": (_suite_convolution, 1e-6),
    "functional-identities": (_suite_functional_identities, 1e-6),
    "bs-identities": (_suite_bs_identities, 1e-8),
    "bs-shifted": (_suite_bs_shifted, 1e-8),
    "normalizer-structure": (_suite_normalizer_structure, 1e-9),
    "zero-sets": (_suite_zero_sets, 0.0),
    "residue-model": (_suite_residue_model, 1e-3),
    "spherical": (_suite_spherical, 1e-5),
    "ftilde": (_suite_ftilde, 1e-8),
    "ks-composition": (_suite_ks_composition, 1e-5),
    "irreducibility-and-integrability": (_suite_irreducibility, 0.0),
    "continuation": (_suite_continuation, 1e-9),
}
ALIASES = {"bernstein-sato": "bs-identities"}


def suite_names() -> list:
    return list(SUITES)


def resolve_suite(name: str) -> str:
    name = ALIASES.get(name, name)
    if name not in SUITES:
        raise UnknownSuiteError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    return name


def run_suite(cfg: SuiteConfig) -> SuiteReport:
    """Run a registered suite; the result depends only on (suite, n, trials, seed, tol, box)."""
    name = resolve_suite(cfg.suite)
    fn, default_tol = SUITES[name]
    tol = default_tol if cfg.tol is None else cfg.tol
    rec = Recorder(tol)
    start = time.perf_counter()
    for trial in range(cfg.trials):
        rng = np.random.default_rng([cfg.seed, trial])
        try:
            fn(cfg, trial, rng, rec)
        except (QuadratureError, DomainError) as exc:
            rec.error(trial, {"trial": trial}, exc)
    runtime = (time.perf_counter() - start) * 1e3
    return SuiteReport(name, cfg.n, cfg.trials, cfg.seed, tol, rec.checks, rec.failures,
                       rec.max_rel_err, runtime)
