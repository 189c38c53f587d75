"""Pointwise evaluation of the kernel, its two normalizations, the spherical
vector and the constants in the Knapp-Stein functional identities."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .jets import Jet, JetMatrix, jet_minors
from .matgroup import all_minors, iwasawa
from .params import (
    ParamPoint,
    SpectralParams,
    normalizer_bb,
    normalizer_bf,
    ps_to_spectral,
    rho,
    weyl_act_g,
)
from .scalars import GammaValue, complex_gamma, l_factor, parity, signed_pow

NORMALIZATIONS = ("none", "bb", "bf")


class SingularMinorError(ValueError):
    pass


@dataclass(frozen=True)
class KernelSpec:
    """Parameters of a kernel and the normalization to divide by."""

    p: ParamPoint
    normalization: str = "none"
    sp: SpectralParams = field(init=False, repr=False)

    def __post_init__(self):
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f"unknown normalization {self.normalization!r}")
        object.__setattr__(self, "sp", ps_to_spectral(self.p))

    def normalizer(self) -> GammaValue:
        if self.normalization == "bb":
            return normalizer_bb(self.p)
        if self.normalization == "bf":
            return normalizer_bf(self.p)
        return GammaValue(1 + 0j)


def _exponents(sp: SpectralParams):
    return list(zip(sp.s, sp.delta)), list(zip(sp.t, sp.eps))


def unnormalized_kernel(sp: SpectralParams, g) -> complex:
    phis, psis = all_minors(np.asarray(g, dtype=float))
    out = 1 + 0j
    for (expo, par), x in zip(_exponents(sp)[0] + _exponents(sp)[1], phis + psis):
        if x == 0:
            raise SingularMinorError("kernel evaluated on the singular set")
        out *= signed_pow(x, expo, par)
    return out


def eval_kernel(spec: KernelSpec, g) -> complex:
    """K, or K divided by the selected normalizer (0 at a normalizer pole)."""
    if isinstance(g, JetMatrix):
        return jet_kernel(spec, g)
    norm = spec.normalizer()
    if norm.is_pole:
        return 0j
    return unnormalized_kernel(spec.sp, g) / norm.value


def jet_kernel(spec: KernelSpec, M: JetMatrix) -> Jet:
    phis, psis = jet_minors(M)
    s_exp, t_exp = _exponents(spec.sp)
    out = Jet.constant(1.0, M.depth)
    norm = spec.normalizer()
    if norm.is_pole:
        return out * 0.0
    for (expo, par), x in zip(s_exp + t_exp, phis + psis):
        if x.value == 0:
            raise SingularMinorError("kernel evaluated on the singular set")
        out = out * x.signed_pow(expo, par)
    return out * (1.0 / norm.value)


def kernel_homogeneity_degree(sp: SpectralParams) -> complex:
    """Degree of K under g -> t g: minors Phi_k, Psi_k have degree k."""
    ks = np.arange(1, sp.s.size + 1)
    return complex(np.dot(ks, sp.s) + np.dot(ks[:-1], sp.t))


def spherical_vector(lam, g) -> complex:
    """1_lambda(g) = prod a_i^{-lambda_i - rho_i} for g = k a n."""
    lam = np.asarray(lam, dtype=complex)
    _, a, _ = iwasawa(np.asarray(g, dtype=float))
    return complex(np.prod(np.exp((-lam - rho(lam.size)) * np.log(a))))


# Functional identity constants --------------------------------------------------


def _sign_exp(a1, a2, b) -> int:
    return parity((a1 + a2) * (b + 1) + a1 * a2)


def _lval(s, chi) -> GammaValue:
    return l_factor(s, chi)


def _ratio(num, den) -> GammaValue:
    """prod num / prod den of GammaValues; a numerator pole wins, denominator poles give 0."""
    val = 1 + 0j
    for d in den:
        val *= d.reciprocal()
    if val == 0:
        return GammaValue(0j)
    for x in num:
        if x.is_pole:
            return GammaValue.pole()
        val *= x.value
    return GammaValue(val)


def c_constant(i: int, p: ParamPoint, with_sqrt_pi: bool = False) -> GammaValue:
    """Proportionality constant of the G-side functional identity.

    By default the value is the one that makes the normalized Knapp-Stein
    integral of K equal c_i times the kernel at swapped parameters; the
    literal formula with an extra 1/sqrt(pi) is available via ``with_sqrt_pi``.
    """
    n = p.n
    j = n + 1 - i
    ci, ci1, pj = p.chi(i), p.chi(i + 1), p.psi(j)
    sgn = (-1) ** _sign_exp(p.xi[i - 1], p.xi[i], p.eta[j - 1])
    num = [_lval(0.5, ci / pj), _lval(0.5, pj / ci1)]
    den = [_lval(1, ci / ci1), _lval(0.5, pj / ci), _lval(0.5, ci1 / pj)]
    out = _ratio(num, den) * sgn
    return out * (1 / math.sqrt(math.pi)) if with_sqrt_pi else out


def d_constant(i: int, p: ParamPoint, with_sqrt_pi: bool = False) -> GammaValue:
    """Proportionality constant of the H-side functional identity (1 <= i <= n-1)."""
    n = p.n
    k = n + 1 - i
    ck, pi_, pi1 = p.chi(k), p.psi(i), p.psi(i + 1)
    sgn = (-1) ** _sign_exp(p.eta[i - 1], p.eta[i], p.xi[k - 1])
    num = [_lval(0.5, ck / pi_), _lval(0.5, pi1 / ck)]
    den = [_lval(1, pi1 / pi_), _lval(0.5, pi_ / ck), _lval(0.5, ck / pi1)]
    out = _ratio(num, den) * sgn
    return out * (1 / math.sqrt(math.pi)) if with_sqrt_pi else out


def c_tilde_constant(i: int, p: ParamPoint, with_sqrt_pi: bool = False) -> GammaValue:
    """Constant with K = c~_i T K_{w_i(xi, lambda)}; satisfies c~_i(p) c_i(w_i p) = 1."""
    n = p.n
    j = n + 1 - i
    ci, ci1, pj = p.chi(i), p.chi(i + 1), p.psi(j)
    sgn = (-1) ** _sign_exp(p.xi[i - 1], p.xi[i], p.eta[j - 1])
    num = [_lval(1, ci1 / ci), _lval(0.5, pj / ci1), _lval(0.5, ci / pj)]
    den = [_lval(0.5, ci1 / pj), _lval(0.5, pj / ci)]
    out = _ratio(num, den) * sgn
    return out * math.sqrt(math.pi) if with_sqrt_pi else out


def b_constant(sign: str, i: int, p: ParamPoint) -> GammaValue:
    """The displayed products b_i^+ / b_i^- with the undetermined constant set to 1."""
    n = p.n
    ci = p.chi(i)
    num, den = [], []
    if sign == "+":
        for j in range(i, n + 1):
            cj1, pj = p.chi(j + 1), p.psi(n + 1 - j)
            num += [_lval(1, cj1 / ci), _lval(0.5, pj / cj1), _lval(0.5, ci / pj)]
            den += [_lval(0.5, cj1 / pj), _lval(0.5, pj / ci)]
    elif sign == "-":
        for j in range(1, i):
            cj, pj = p.chi(j), p.psi(n + 1 - j)
            num += [_lval(1, ci / cj), _lval(0.5, pj / ci), _lval(0.5, cj / pj)]
            den += [_lval(0.5, ci / pj), _lval(0.5, pj / cj)]
    else:
        raise ValueError("sign must be '+' or '-'")
    return _ratio(num, den)


def b_chain(sign: str, i: int, p: ParamPoint) -> GammaValue:
    """b_i^+ as the product of c~ over the chain of simple reflections.

    For ``+`` this is c~_i(p) prod_{j=i+1}^n c~_j(w_{j-1} ... w_i p); for ``-``
    the mirror chain c~_{i-1}(p) prod_{j=i-2}^{1} c~_j(w_{j+1} ... w_{i-1} p).
    """
    n = p.n
    out = GammaValue(1 + 0j)
    q = p
    if sign == "+":
        for j in range(i, n + 1):
            out = out * c_tilde_constant(j, q)
            q = weyl_act_g(q, j)
    else:
        for j in range(i - 1, 0, -1):
            out = out * c_tilde_constant(j, q)
            q = weyl_act_g(q, j)
    return out


def functional_constant(kind: str, i: int, p: ParamPoint) -> GammaValue:
    kinds = {
        "c": lambda: c_constant(i, p),
        "d": lambda: d_constant(i, p),
        "c_tilde": lambda: c_tilde_constant(i, p),
        "ctilde": lambda: c_tilde_constant(i, p),
        "b_plus": lambda: b_constant("+", i, p),
        "bplus": lambda: b_constant("+", i, p),
        "b_minus": lambda: b_constant("-", i, p),
        "bminus": lambda: b_constant("-", i, p),
    }
    n = p.n
    hi = n - 1 if kind == "d" else n
    if kind not in kinds:
        raise ValueError(f"unknown constant kind {kind!r}")
    if not 1 <= i <= hi:
        raise ValueError(f"index {i} out of range for kind {kind} at n={n}")
    return kinds[kind]()


def normalized_t_constant(i: int, p: ParamPoint) -> GammaValue:
    """Constant in the G-side identity written for the optimally normalized kernel."""
    j = p.n + 1 - i
    sgn = (-1) ** _sign_exp(p.xi[i - 1], p.xi[i], p.eta[j - 1])
    return GammaValue(sgn * l_factor(1, p.chi(i) / p.chi(i + 1)).reciprocal())


def normalized_s_constant(i: int, p: ParamPoint) -> GammaValue:
    """Constant in the H-side identity written for the optimally normalized kernel."""
    k = p.n + 1 - i
    sgn = (-1) ** _sign_exp(p.eta[i - 1], p.eta[i], p.xi[k - 1])
    return GammaValue(sgn * l_factor(1, p.psi(i + 1) / p.psi(i)).reciprocal())


def d_function_n1(lam1, lam2, nu, xi1=0, xi2=0, eta=0) -> GammaValue:
    """The n = 1 constant c_1 written in terms of (lambda_1, lambda_2, nu)."""
    return c_constant(1, ParamPoint.make([lam1, lam2], [nu], [xi1, xi2], [eta]))


def d_formula_n1(lam1, lam2, nu, xi1=0, xi2=0, eta=0) -> GammaValue:
    """Gamma-quotient constant d of the unnormalized n = 1 Knapp-Stein identity.

    Related to c_1 by d = (-1)^{xi1 + eta} c_1 L(0, chi_2 chi_1^{-1}); the sign
    comes from the |det g| versus det(w0 g) convention for the top minor.
    """
    b = parity
    num = [
        (lam1 - nu + 0.5 + b(xi1 + eta)) / 2,
        (nu - lam2 + 0.5 + b(xi2 + eta)) / 2,
        (lam2 - lam1 + b(xi1 + xi2)) / 2,
    ]
    den = [
        (nu - lam1 + 0.5 + b(eta + xi1)) / 2,
        (lam2 - nu + 0.5 + b(xi2 + eta)) / 2,
        (lam1 - lam2 + 1 + b(xi1 + xi2)) / 2,
    ]
    sgn = (-1) ** b(xi2 + (xi1 + eta) * (xi2 + eta))
    out = _ratio([complex_gamma(z) for z in num], [complex_gamma(z) for z in den])
    return out * (sgn * math.sqrt(math.pi))


def det_convention_kernel_n1(sp: SpectralParams):
    """n = 1 kernel |Phi_1|^{s_1} |Psi_1|^{t_1} |det g|^{s_2} (det g = -Phi_2).

    Returns a function accepting plain matrices or :class:`JetMatrix`.
    """
    if sp.n != 1:
        raise ValueError("only defined for n = 1")
    (s1, s2), (t1,) = sp.s, sp.t
    d1, d2 = sp.delta
    (e1,) = sp.eps

    def f(M):
        if isinstance(M, JetMatrix):
            (phi1, phi2), (psi1,) = jet_minors(M)
            return phi1.signed_pow(s1, d1) * psi1.signed_pow(t1, e1) * (-phi2).signed_pow(s2, d2)
        (phi1, phi2), (psi1,) = all_minors(np.asarray(M, dtype=float))
        return signed_pow(phi1, s1, d1) * signed_pow(psi1, t1, e1) * signed_pow(-phi2, s2, d2)

    return f
