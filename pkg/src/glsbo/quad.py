"""Tanh-sinh quadrature on the real line for integrands with algebraic
singularities and algebraic decay, and the integrals built on it: the
convolution formula, Knapp-Stein operators applied to kernels, the
spherical pairing and a one-dimensional residue model.

Panels are split at the singular points. Each finite panel is integrated
by the double exponential rule on both ends; tails are mapped to a finite
range by x -> c + L (1 + y) / (1 - y). Integrands may accept the node as
``(base, offset)`` with x = base + offset and base a panel end point, so
that distances to singular points are never lost to cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .kernel import KernelSpec, SingularMinorError
from .matgroup import all_minors, h_reflection, simple_reflection
from .params import ParamPoint, is_locally_integrable, ps_to_spectral
from .scalars import RealCharacter, gamma, l_factor, parity

T_MAX = 6.0
MAX_LEVEL = 7
LINE_BUDGET = 1 << 14
# tails are truncated where the mapped node exceeds about 1e100 times the scale
TAIL_CUTOFF = 1e-100
EPS = float(np.finfo(float).eps)
# nested integrands are trusted up to this multiple of the panel scale
NESTED_MAX_ABS = 1e4
NESTED_T_MAX = 4.5
NESTED_TRUSTED = 1e-7
MAX_WORD = 2


class QuadratureError(RuntimeError):
    """Tolerance not reached; ``best`` carries the last estimate."""

    def __init__(self, msg, best=None, err=None):
        super().__init__(msg)
        self.best = best
        self.err = err


class DomainError(ValueError):
    pass


@dataclass
class LineIntegrand:
    """f on the real line with integrable algebraic singularities.

    ``evaluator(x)`` is vectorized over x. ``local(base, off)`` optionally
    evaluates at x = base + off with the offset known exactly.
    """

    evaluator: Callable | None
    singular_points: Sequence[float] = ()
    decay_exponent: float = -2.0
    local: Callable | None = None
    max_abs: float = math.inf
    decay_power: complex | None = None
    trusted_distance: float = 0.0
    singular_powers: Sequence[complex] | None = None
    # tail model beyond max_abs: 1 for |x|^p c0, 2 for |x|^p (c0 + c1 / |x|)
    tail_terms: int = 1

    def __call__(self, base, off):
        if self.local is not None:
            return self.local(base, off)
        return self.evaluator(base + off)


@dataclass
class QuadResult:
    value: complex
    err_estimate: float
    panels: int
    evaluations: int = 0


@lru_cache(maxsize=None)
def _ts_rule(level: int, t_max: float = T_MAX, odd_only: bool = False):
    """Nodes t, offsets from the near end on [-1, 1], and weights at step 2^-level.

    With ``odd_only`` only the nodes absent from the previous level are returned.
    """
    h = 0.5 ** level
    k = np.arange(-int(t_max / h), int(t_max / h) + 1)
    if odd_only:
        k = k[k % 2 == 1]
    t = k * h
    u = 0.5 * math.pi * np.sinh(np.abs(t))
    # 1 - tanh(u) without cancellation
    d = 2.0 / (1.0 + np.exp(2.0 * u))
    w = h * 0.5 * math.pi * np.cosh(t) / np.cosh(u) ** 2
    keep = (d > 0) & (w > 0)
    return t[keep], d[keep], w[keep]


def _panel_nodes(kind: str, a: float, b: float, level: int, scale: float = 1.0,
                 tail_cutoff: float = TAIL_CUTOFF, t_max: float = T_MAX, odd_only: bool = False):
    """(base, offset, weight) arrays for a panel.

    kind 'finite' integrates [a, b]; 'right' integrates [a, inf); 'left'
    integrates (-inf, a].
    """
    t, d, w = _ts_rule(level, t_max, odd_only)
    if kind == "finite":
        hl = 0.5 * (b - a)
        near_a = t < 0
        base = np.where(near_a, a, b)
        off = np.where(near_a, hl * d, -hl * d)
        mid = t == 0
        base = np.where(mid, a, base)
        off = np.where(mid, hl, off)
        return base, off, w * hl
    # y = tanh(u(t)); 1 + y and 1 - y from the near-end offset
    far = (t > 0) & (d < tail_cutoff)
    t, d, w = t[~far], d[~far], w[~far]
    one_plus = np.where(t < 0, d, 2.0 - d)
    one_minus = np.where(t < 0, 2.0 - d, d)
    off = scale * one_plus / one_minus
    jac = 2.0 * scale / one_minus ** 2
    base = np.full_like(off, a)
    if kind == "left":
        off = -off
    return base, off, w * jac


def _layout(points, scale):
    pts = sorted(set(float(p) for p in points))
    if not pts:
        pts = [0.0]
    panels = [("left", pts[0], None)]
    panels += [("finite", pts[k], pts[k + 1]) for k in range(len(pts) - 1)]
    panels.append(("right", pts[-1], None))
    return panels


def _extrapolate(f, base, off, ref_base, ref_off, power, scale_to):
    ref = complex(np.asarray(f(np.array([ref_base]), np.array([ref_off])), dtype=complex)[0])
    return ref * np.exp(power * np.log(scale_to))


def _extrapolate_tail(f, sgn, power, x):
    X = f.max_abs
    a1 = complex(np.asarray(f(np.array([sgn * X]), np.array([0.0])), dtype=complex)[0])
    if f.tail_terms < 2:
        return a1 * np.exp(power * np.log(x / X))
    a2 = complex(np.asarray(f(np.array([2 * sgn * X]), np.array([0.0])), dtype=complex)[0])
    a2 /= np.exp(power * math.log(2.0))
    # a1 = c0 + c1 / X and a2 = c0 + c1 / (2 X)
    c0, c1 = 2 * a2 - a1, 2 * (a1 - a2)
    return np.exp(power * np.log(x / X)) * (c0 + c1 * X / x)


def _evaluate(f: LineIntegrand, kind, base, off):
    """f at the nodes, with two power-law substitutions for nodes the
    integrand cannot be trusted at: tail nodes beyond ``f.max_abs`` follow
    |x|^decay, and nodes closer than ``f.trusted_distance`` to a singular
    point follow |x - r|^power from the nearest trusted node."""
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        out = np.zeros(np.shape(off), dtype=complex)
        todo = np.ones(np.shape(off), dtype=bool)
        if kind != "finite" and np.isfinite(f.max_abs):
            x = base + off
            far = np.abs(x) > f.max_abs
            if far.any():
                sgn = np.sign(x[far][0])
                power = f.decay_exponent if f.decay_power is None else f.decay_power
                out[far] = _extrapolate_tail(f, sgn, power, np.abs(x[far]))
                todo &= ~far
        td = f.trusted_distance
        if td > 0 and f.singular_powers is not None:
            for r, power in zip(f.singular_points, f.singular_powers):
                for side in (1.0, -1.0):
                    near = todo & (base == r) & (side * off > 0) & (np.abs(off) < td)
                    if near.any():
                        out[near] = _extrapolate(f, None, None, r, side * td, power,
                                                 np.abs(off[near]) / td)
                        todo &= ~near
        if todo.any():
            out[todo] = f(base[todo], off[todo])
        return out


def _integrate_panel(f: LineIntegrand, kind, a, b, tol, scale=1.0, tail_cutoff=TAIL_CUTOFF,
                     t_max=T_MAX, budget=LINE_BUDGET):
    """Adaptive tanh-sinh on one panel; returns (estimate, error, evaluations)."""
    est, err, mass, evals = None, math.inf, 0.0, 0
    for level in range(1, MAX_LEVEL + 1):
        base, off, w = _panel_nodes(kind, a, b, level, scale, tail_cutoff, t_max, level > 1)
        evals += base.size
        terms = w * _evaluate(f, kind, base, off)
        terms = np.where(np.isfinite(terms), terms, 0.0)
        new = complex(np.sum(terms))
        mass = float(np.sum(np.abs(terms))) + 0.5 * mass
        prev, est = est, new if est is None else 0.5 * est + new
        if prev is not None:
            # level difference plus a rounding floor
            err = abs(est - prev) + 8 * EPS * mass
            if err <= 0.1 * tol * max(1.0, abs(est)):
                break
        if evals > budget:
            break
    return est, err, evals


def integrate_line(f: LineIntegrand, tol: float = 1e-10, budget: int = LINE_BUDGET,
                   scale: float | None = None, tail_cutoff: float = TAIL_CUTOFF,
                   t_max: float = T_MAX) -> QuadResult:
    """Integral of f over the real line."""
    if f.decay_exponent >= -1:
        raise DomainError("integrand must decay faster than 1/|x|")
    pts = list(f.singular_points)
    if scale is None:
        scale = max(1.0, (max(pts) - min(pts)) if pts else 1.0)
    panels = _layout(pts, scale)
    total, total_err, evals = 0j, 0.0, 0
    for kind, a, b in panels:
        est, err, used = _integrate_panel(f, kind, a, b, tol, scale, tail_cutoff, t_max,
                                          budget // len(panels))
        total += est
        total_err += err
        evals += used
    if total_err > tol * max(1.0, abs(total)):
        raise QuadratureError(f"tolerance {tol:g} not reached (err {total_err:.3g})", total, total_err)
    return QuadResult(total, total_err, len(panels), evals)


# Products of signed powers of affine forms ----------------------------------------


def _spow(x, expo, par):
    ax = np.abs(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.exp(expo * np.log(ax))
    if parity(par):
        out = np.where(x < 0, -out, out)
    return out


@dataclass
class AffinePowerProduct:
    """x -> const * prod_k |A_k + x B_k|^{alpha_k}_{eps_k}."""

    factors: list
    const: complex = 1.0
    roots: list = field(init=False)

    def __post_init__(self):
        const, keep = complex(self.const), []
        for A, B, alpha, eps in self.factors:
            if B == 0:
                if A == 0:
                    raise DomainError("identically vanishing factor")
                const *= _spow(np.array(A), alpha, eps).item()
            else:
                keep.append((float(A), float(B), complex(alpha), parity(eps)))
        self.const = const
        self.factors = keep
        self.roots = [-A / B for A, B, _, _ in keep]

    @property
    def decay(self) -> float:
        return float(sum(alpha.real for _, _, alpha, _ in self.factors))

    def root_powers(self) -> list:
        """Exponent of |x - r| at each root r (summed over coincident factors)."""
        return [sum((alpha for (_, _, alpha, _), r2 in zip(self.factors, self.roots) if r2 == r), 0j)
                for r in self.roots]

    @property
    def decay_power(self) -> complex:
        return complex(sum(alpha for _, _, alpha, _ in self.factors))

    def local(self, base, off):
        out = np.full(np.shape(off), self.const, dtype=complex)
        for (A, B, alpha, eps), r in zip(self.factors, self.roots):
            # A + x B = B (x - r)
            val = B * ((base - r) + off)
            out = out * _spow(val, alpha, eps)
        return out

    def integrand(self) -> LineIntegrand:
        return LineIntegrand(None, self.roots, self.decay, self.local)


def convolution_integral(a, b, c, d, alpha, beta, eps, xi, tol: float = 1e-10) -> complex:
    """Quadrature of int |a x + b|^alpha_eps |c x + d|^beta_xi dx."""
    if a == 0 or c == 0:
        raise DomainError("a and c must be nonzero")
    if a * d - b * c == 0:
        raise DomainError("degenerate configuration ad - bc = 0")
    alpha, beta = complex(alpha), complex(beta)
    if not (alpha.real > -1 and beta.real > -1 and (alpha + beta + 1).real < 0):
        raise DomainError("exponents outside the convergence window")
    prod = AffinePowerProduct([(b, a, alpha, eps), (d, c, beta, xi)])
    return integrate_line(prod.integrand(), tol).value


def convolution_closed_form(a, b, c, d, alpha, beta, eps, xi) -> complex:
    from .scalars import signed_pow, t_factor

    t = t_factor(alpha, beta, eps, xi)
    return ((-1) ** parity(eps) * t.value * signed_pow(a, -beta - 1, xi)
            * signed_pow(c, -alpha - 1, eps) * signed_pow(a * d - b * c, alpha + beta + 1, eps + xi))


# Kernel along affine lines -------------------------------------------------------


def kernel_line(spec: KernelSpec, g0: np.ndarray, g1: np.ndarray, moving=None) -> AffinePowerProduct:
    """K(g0 + x g1) when every minor is affine in x.

    ``moving`` optionally lists, per minor (Phi_1.., Psi_1..), whether it
    depends on x; the others are frozen at their value at g0. Without it the
    dependence is detected from x = -1, 0, 1.
    """
    sp = spec.sp
    m0 = all_minors(g0)
    mp = all_minors(g0 + g1)
    mm = all_minors(g0 - g1)
    factors = []
    exps = list(zip(sp.s, sp.delta)) + list(zip(sp.t, sp.eps))
    rows = zip(exps, m0[0] + m0[1], mp[0] + mp[1], mm[0] + mm[1])
    for k, ((expo, par), a0, ap, am) in enumerate(rows):
        B = 0.5 * (ap - am)
        if moving is not None:
            if not moving[k]:
                B = 0.0
        else:
            if abs(ap + am - 2 * a0) > 1e-9 * max(1.0, abs(a0), abs(B)):
                raise DomainError("minor is not affine along the line")
            if abs(B) <= 1e-13 * (abs(ap) + abs(am)):
                B = 0.0
        factors.append((a0, B, expo, par))
    norm = spec.normalizer()
    const = 0j if norm.is_pole else 1.0 / norm.value
    return AffinePowerProduct(factors, const)


def right_moving(i: int, n: int) -> list:
    """Minors changed by g -> g nbar_i(x): only Phi_i and Psi_i contain column i without i+1."""
    return [k == i for k in range(1, n + 2)] + [k == i for k in range(1, n + 1)]


def left_moving(i: int, n: int) -> list:
    """Minors changed by g -> nbar_i(x) g: those using row i+1 of g but not row i."""
    return [k == n + 1 - i for k in range(1, n + 2)] + [k == n - i for k in range(1, n + 1)]


def _check_window(conds, what):
    if not all(c for c in conds):
        raise DomainError(f"parameters outside the convergence window of {what}")


def t_window(i: int, p: ParamPoint) -> bool:
    j = p.n + 1 - i
    return bool((p.lam[i - 1] - p.nu[j - 1]).real > -0.5 and (p.nu[j - 1] - p.lam[i]).real > -0.5
                and (p.lam[i - 1] - p.lam[i]).real < 0)


def s_window(i: int, p: ParamPoint) -> bool:
    k = p.n + 1 - i
    return bool((p.lam[k - 1] - p.nu[i - 1]).real > -0.5 and (p.nu[i] - p.lam[k - 1]).real > -0.5
                and (p.nu[i] - p.nu[i - 1]).real < 0)


def ks_T_normalizer(i: int, p: ParamPoint):
    """L(0, chi_i chi_{i+1}^{-1}) at the parameter (xi, -lambda)."""
    return l_factor(0, RealCharacter(p.xi[i - 1] + p.xi[i], p.lam[i] - p.lam[i - 1]))


def ks_S_normalizer(i: int, p: ParamPoint):
    """L(0, psi_i psi_{i+1}^{-1}) at (eta, nu)."""
    return l_factor(0, RealCharacter(p.eta[i - 1] + p.eta[i], p.nu[i - 1] - p.nu[i]))


def apply_ks_T(i: int, p: ParamPoint, g: np.ndarray, tol: float = 1e-10,
               normalization: str = "none", normalized_operator: bool = True,
               scale: float | None = None) -> complex:
    """Knapp-Stein operator for w_i applied to the kernel, at g:
    int K(g w_i nbar_i(x)) dx, divided by its L-factor unless disabled."""
    n = p.n
    if not 1 <= i <= n:
        raise DomainError(f"index {i} out of range")
    _check_window([t_window(i, p)], "the G-side functional identity")
    m = n + 1
    gw = g @ simple_reflection(i, m).matrix
    # g w_i nbar_i(x) = gw + x * gw E_{i+1,i}
    g1 = np.zeros((m, m))
    g1[:, i - 1] = gw[:, i]
    line = kernel_line(KernelSpec(p, normalization), gw, g1, right_moving(i, n))
    val = integrate_line(line.integrand(), tol, scale=scale).value
    if normalized_operator:
        val *= ks_T_normalizer(i, p).reciprocal()
    return val


def apply_ks_S(i: int, p: ParamPoint, g: np.ndarray, tol: float = 1e-10,
               normalization: str = "none", normalized_operator: bool = True,
               scale: float | None = None) -> complex:
    """H-side Knapp-Stein operator for w_i applied to the kernel, at g:
    int K((w_i nbar_i(x))^{-1} g) dx, divided by its L-factor unless disabled."""
    n = p.n
    if not 1 <= i <= n - 1:
        raise DomainError(f"index {i} out of range")
    _check_window([s_window(i, p)], "the H-side functional identity")
    m = n + 1
    wg = h_reflection(i, n).matrix.T @ g
    # nbar_i(-x) wg = wg - x E_{i+1,i} wg
    g1 = np.zeros((m, m))
    g1[i, :] = -wg[i - 1, :]
    line = kernel_line(KernelSpec(p, normalization), wg, g1, left_moving(i, n))
    val = integrate_line(line.integrand(), tol, scale=scale).value
    if normalized_operator:
        val *= ks_S_normalizer(i, p).reciprocal()
    return val


def apply_ks_word(word: Sequence[int], q: ParamPoint, g: np.ndarray, tol: float = 1e-8) -> complex:
    """Nested quadrature of T^{w_{a_1}} o ... o T^{w_{a_k}} applied to K_q at g.

    The innermost operator acts first; every step is a bold (L-normalized)
    G-side Knapp-Stein operator at the parameter reached so far. Words of
    length three or more are refused: the middle integrals become too
    ill-conditioned at the outer tail nodes for a meaningful tolerance.
    """
    from .params import weyl_act_g

    word = list(word)
    if not word:
        return eval_kernel_plain(q, g)
    if len(word) > MAX_WORD:
        raise DomainError(f"nested quadrature supports words of length at most {MAX_WORD}")
    params = [q]
    for a in reversed(word[1:]):
        params.append(weyl_act_g(params[-1], a))
    # params[-1] is the parameter of the function the outermost operator acts on
    return _ks_word(word, params[::-1], g, tol)


def eval_kernel_plain(p: ParamPoint, g) -> complex:
    from .kernel import eval_kernel

    return eval_kernel(KernelSpec(p), g)


def _ks_word(word, params, g, tol):
    a, p = word[0], params[0]
    if len(word) == 1:
        return apply_ks_T(a, p, g, tol)
    _check_window([t_window(a, p)], "an intermediate functional identity")
    m = p.n + 1
    gw = g @ simple_reflection(a, m).matrix
    g1 = np.zeros((m, m))
    g1[:, a - 1] = gw[:, a]
    line = kernel_line(KernelSpec(p), gw, g1, right_moving(a, p.n))

    def inner(xv):
        try:
            return _ks_word(word[1:], params[1:], gw + xv * g1, 0.1 * tol)
        except (DomainError, SingularMinorError):
            # x rounded onto a singular point; such nodes carry negligible weight
            return np.nan
        except QuadratureError as exc:
            # the inner target is ten times stricter; a miss within the outer one is usable
            if exc.err is not None and exc.err <= tol * max(1.0, abs(exc.best)):
                return exc.best
            raise

    def f(x):
        return np.array([inner(xv) for xv in np.ravel(x)])

    scale = max(1.0, max(line.roots) - min(line.roots))
    gaps = np.diff(sorted(line.roots)) if len(line.roots) > 1 else [scale]
    f_line = LineIntegrand(f, line.roots, line.decay, max_abs=NESTED_MAX_ABS * scale,
                           decay_power=line.decay_power,
                           trusted_distance=min(NESTED_TRUSTED * scale, 0.25 * min(gaps)),
                           singular_powers=line.root_powers(), tail_terms=2)
    val = integrate_line(f_line, tol, scale=scale, t_max=NESTED_T_MAX).value
    return val * ks_T_normalizer(a, p).reciprocal()


# Spherical pairing ---------------------------------------------------------------


def spherical_integrand_n1(lam, nu) -> LineIntegrand:
    """x -> K(nbar(x)) 1_lambda(nbar(x)) for nbar(x) = [[1, 0], [x, 1]].

    Here Phi_1 = x, Phi_2 = -1, Psi_1 = 1 and nbar(x) has Iwasawa a-part
    diag(r, 1/r) with r = sqrt(1 + x^2).
    """
    lam = np.asarray(lam, dtype=complex)
    sp = ps_to_spectral(ParamPoint.make(lam, nu))
    s1, d1, d2 = sp.s[0], sp.delta[0], sp.delta[1]
    # r^{-lambda_1 - 1/2} (1/r)^{-lambda_2 + 1/2}
    b = (lam[1] - lam[0] - 1) / 2

    def local(base, off):
        x = base + off
        return (-1.0) ** parity(d2) * _spow(x, s1, d1) * np.exp(b * np.log1p(x * x))

    return LineIntegrand(None, [0.0], float((s1 + 2 * b).real), local)


def _spherical_n1(lam, nu, tol):
    return integrate_line(spherical_integrand_n1(lam, nu), tol).value


def spherical_closed_form_n1(lam, nu) -> complex:
    """Closed form of the n = 1 spherical pairing (beta integral)."""
    lam = np.asarray(lam, dtype=complex)
    nu = complex(np.ravel(nu)[0])
    return (gamma((lam[0] - nu + 0.5) / 2) * gamma((nu - lam[1] + 0.5) / 2)
            / gamma((lam[0] - lam[1] + 1) / 2))


def _ts_axis(points, level, scale, t_max=T_MAX):
    """Flattened (base, offset, weight) for the whole line split at ``points``."""
    parts = [_panel_nodes(kind, a, b, level, scale, t_max=t_max) for kind, a, b in _layout(points, scale)]
    return tuple(np.concatenate([p[k] for p in parts]) for k in range(3))


SPHERICAL_T_MAX = 4.0
# the level-3 rule uses about 3.3e6 nodes, level 4 about 2.6e7
SPHERICAL_LEVELS = (3, 4)


def _spherical_n2(lam, nu, level: int, block: int = 1 << 21) -> complex:
    """Tensor tanh-sinh over nbar = [[1,0,0],[a,1,0],[b,c,1]].

    Along these coordinates Phi_1 = b, Phi_2 = b - a c, Phi_3 = -1, Psi_1 = a
    and Psi_2 = -1. The b axis is split at 0 and a c for every (a, c) node.
    The a axis is processed in chunks of about ``block`` nodes.
    """
    lam = np.asarray(lam, dtype=complex)
    sp = ps_to_spectral(ParamPoint.make(lam, nu))
    # the constant minors Phi_3 = Psi_2 = -1
    const = (-1.0) ** (parity(sp.delta[2]) + parity(sp.eps[1]))
    ba, oa, wa = _ts_axis([0.0], level, 1.0, SPHERICAL_T_MAX)
    bc, oc, wc = _ts_axis([0.0], level, 1.0, SPHERICAL_T_MAX)
    a_all, c = ba + oa, bc + oc
    rule = _ts_rule(level, SPHERICAL_T_MAX)
    step = max(1, block // (c.size * rule[0].size))
    total = 0j
    for k in range(0, a_all.size, step):
        total += _spherical_n2_block(lam, sp, a_all[k:k + step], wa[k:k + step], c, wc, rule)
    return const * total


def _spherical_n2_block(lam, sp, a, wa, c, wc, rule) -> complex:
    s1, s2, _ = sp.s
    t1, _ = sp.t
    d1, d2, _ = sp.delta
    e1, _ = sp.eps
    A = a[:, None]
    C = c[None, :]
    R = A * C
    # b axis: panels (-inf, lo], [lo, hi], [hi, inf) with {lo, hi} = {0, a c}
    lo, hi = np.minimum(R, 0.0), np.maximum(R, 0.0)
    scale = np.maximum(1.0, hi - lo)
    t, dd, w = rule
    total = 0j
    for kind in ("left", "finite", "right"):
        if kind == "finite":
            hl = 0.5 * (hi - lo)[..., None]
            near_lo = t < 0
            off = np.where(near_lo, hl * dd, -hl * dd)
            base = np.where(near_lo, lo[..., None], hi[..., None])
            wb = w * hl
        else:
            one_plus = np.where(t < 0, dd, 2.0 - dd)
            one_minus = np.where(t < 0, 2.0 - dd, dd)
            sc = scale[..., None]
            off = sc * one_plus / one_minus
            wb = w * 2.0 * sc / one_minus ** 2
            base = lo[..., None] if kind == "left" else hi[..., None]
            base = np.broadcast_to(base, off.shape)
            if kind == "left":
                off = -off
        B = base + off
        r3 = R[..., None]
        # distances to the two singular points, exact when the base is that point
        dist0 = np.where(base == 0.0, off, B)
        dist1 = np.where(base == r3, off, B - r3)
        ker = (_spow(dist0, s1, d1) * _spow(dist1, s2, d2)
               * _spow(np.broadcast_to(A[..., None], B.shape), t1, e1))
        # Iwasawa a-part: a_1 = |col_1|, a_1 a_2 = area of (col_1, col_2), a_1 a_2 a_3 = 1
        Cb = np.broadcast_to(C[..., None], B.shape)
        Ab = np.broadcast_to(A[..., None], B.shape)
        n1 = 1.0 + Ab * Ab + B * B
        # |col_1 x col_2|^2 with col_1 x col_2 = (a c - b, -c, 1)
        area2 = dist1 * dist1 + Cb * Cb + 1.0
        la1 = 0.5 * np.log(n1)
        la12 = 0.5 * np.log(area2)
        sph = np.exp((-lam[0] - 1.0) * la1 + (-lam[1]) * (la12 - la1) + (-lam[2] + 1.0) * (-la12))
        vals = wb * ker * sph
        vals = np.where(np.isfinite(vals), vals, 0.0)
        total += np.sum(wa[:, None] * wc[None, :] * vals.sum(axis=-1))
    return total


def spherical_pairing(n: int, lam, nu, tol: float = 1e-8) -> complex:
    """int over Nbar of K(nbar) 1_lambda(nbar) dnbar with trivial parities.

    n = 1 is a single line integral; n = 2 is a tensor product rule over the
    three coordinates of Nbar, refined until two levels agree to ``tol``.
    """
    p = ParamPoint.make(lam, nu)
    if p.n != n:
        raise DomainError(f"parameters have n = {p.n}, not {n}")
    if not is_locally_integrable(p):
        raise DomainError("kernel is not locally integrable at these parameters")
    if n == 1:
        return _spherical_n1(lam, nu, tol)
    if n == 2:
        prev = _spherical_n2(lam, nu, 2)
        for lev in SPHERICAL_LEVELS:
            val = _spherical_n2(lam, nu, lev)
            err = abs(val - prev)
            if err <= tol * max(1.0, abs(val)):
                return val
            prev = val
        raise QuadratureError("spherical pairing did not converge", val, err)
    raise DomainError("spherical pairing is implemented for n = 1, 2 only")


# Residue model --------------------------------------------------------------------


def residue_model(t: float, phi: Callable, tol: float = 1e-10) -> complex:
    """int |x|^t phi(x) dx / Gamma((t+1)/2) for t > -1.

    With E(x) = phi(x) + phi(-x) the integral is split as
    int_0^1 x^t (E(x) - E(0)) dx + E(0) / (t + 1) + int_1^inf x^t E(x) dx,
    so the part that blows up as t -> -1 is taken in closed form.
    """
    t = float(t)
    if t <= -1:
        raise DomainError("t must exceed -1")

    def even(x):
        return np.asarray(phi(x), dtype=complex) + np.asarray(phi(-x), dtype=complex)

    e0 = complex(even(np.array([0.0]))[0])
    core = LineIntegrand(None, [0.0], -2.0,
                         local=lambda base, off: np.exp(t * np.log(np.abs(base + off))) * (even(base + off) - e0))
    tail = LineIntegrand(None, [1.0], -2.0,
                         local=lambda base, off: np.exp(t * np.log(np.abs(base + off))) * even(base + off))
    inner, _, _ = _integrate_panel(core, "finite", 0.0, 1.0, tol)
    outer, _, _ = _integrate_panel(tail, "right", 1.0, None, tol)
    return (inner + e0 / (t + 1) + outer) / gamma((t + 1) / 2)
