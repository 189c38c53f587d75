"""Parameter spaces, the spectral coordinate change, Weyl actions,
normalizing gamma/L-factor products, Bernstein-Sato polynomials and
parameter predicates.

Indices in docstrings are 1-based as in the mathematical formulas; the
arrays themselves are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .scalars import (
    GammaValue,
    RealCharacter,
    complex_gamma,
    is_nonpositive_integer,
    l_factor,
    parity,
)

ZERO_SET_TOL = 1e-9
ZERO_SET_DEPTH = 40


def _bits(v, k=None) -> tuple:
    out = tuple(parity(x) for x in v)
    if k is not None and len(out) != k:
        raise ValueError(f"expected {k} parities, got {len(out)}")
    return out


def _cvec(v, k=None) -> np.ndarray:
    out = np.asarray(v, dtype=complex).reshape(-1)
    if k is not None and out.size != k:
        raise ValueError(f"expected {k} entries, got {out.size}")
    return out


@dataclass(frozen=True)
class GParams:
    """Principal series parameters (xi, lambda) of GL(n+1)."""

    xi: tuple
    lam: np.ndarray

    def __post_init__(self):
        lam = _cvec(self.lam)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "xi", _bits(self.xi, lam.size))

    @property
    def chars(self) -> list:
        return [RealCharacter(e, m) for e, m in zip(self.xi, self.lam)]


@dataclass(frozen=True)
class HParams:
    """Principal series parameters (eta, nu) of GL(n)."""

    eta: tuple
    nu: np.ndarray

    def __post_init__(self):
        nu = _cvec(self.nu)
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "eta", _bits(self.eta, nu.size))

    @property
    def chars(self) -> list:
        return [RealCharacter(e, m) for e, m in zip(self.eta, self.nu)]


@dataclass(frozen=True)
class ParamPoint:
    """A full parameter tuple (xi, lambda, eta, nu) for the pair (GL(n+1), GL(n))."""

    g: GParams
    h: HParams
    n: int = field(default=0)

    def __post_init__(self):
        n = self.h.nu.size
        if self.g.lam.size != n + 1 or n < 1:
            raise ValueError("need len(lambda) = len(nu) + 1 >= 2")
        object.__setattr__(self, "n", n)

    @classmethod
    def make(cls, lam, nu, xi=None, eta=None) -> "ParamPoint":
        lam, nu = _cvec(lam), _cvec(nu)
        xi = (0,) * lam.size if xi is None else xi
        eta = (0,) * nu.size if eta is None else eta
        return cls(GParams(xi, lam), HParams(eta, nu))

    @property
    def xi(self):
        return self.g.xi

    @property
    def lam(self):
        return self.g.lam

    @property
    def eta(self):
        return self.h.eta

    @property
    def nu(self):
        return self.h.nu

    def chi(self, i: int) -> RealCharacter:
        """chi_i (1-based)."""
        return RealCharacter(self.xi[i - 1], self.lam[i - 1])

    def psi(self, j: int) -> RealCharacter:
        """psi_j (1-based)."""
        return RealCharacter(self.eta[j - 1], self.nu[j - 1])

    def shift(self, g_shift=None, h_shift=None) -> "ParamPoint":
        """Add an integer vector to (xi, lambda) and/or (eta, nu) simultaneously."""
        xi, lam, eta, nu = list(self.xi), self.lam.copy(), list(self.eta), self.nu.copy()
        if g_shift is not None:
            g_shift = np.asarray(g_shift)
            lam = lam + g_shift
            xi = [a + int(b) for a, b in zip(xi, g_shift)]
        if h_shift is not None:
            h_shift = np.asarray(h_shift)
            nu = nu + h_shift
            eta = [a + int(b) for a, b in zip(eta, h_shift)]
        return ParamPoint.make(lam, nu, xi, eta)

    def spectral(self) -> "SpectralParams":
        return ps_to_spectral(self)

    def as_dict(self) -> dict:
        return {
            "xi": list(self.xi),
            "lambda": [str(z) for z in self.lam],
            "eta": list(self.eta),
            "nu": [str(z) for z in self.nu],
        }


@dataclass(frozen=True)
class SpectralParams:
    """Exponents (delta, s, eps, t) of the minors in the kernel."""

    delta: tuple
    s: np.ndarray
    eps: tuple
    t: np.ndarray

    def __post_init__(self):
        s, t = _cvec(self.s), _cvec(self.t)
        if s.size != t.size + 1:
            raise ValueError("need len(s) = len(t) + 1")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "delta", _bits(self.delta, s.size))
        object.__setattr__(self, "eps", _bits(self.eps, t.size))

    @property
    def n(self) -> int:
        return self.t.size


def unit(k: int, i: int) -> np.ndarray:
    """The (1-based) standard basis vector e_i of length k."""
    out = np.zeros(k, dtype=int)
    out[i - 1] = 1
    return out


def rho(k: int) -> np.ndarray:
    """Half sum of positive roots of GL(k): (k-1, k-3, ..., 1-k) / 2."""
    return (k - 1 - 2 * np.arange(k)) / 2.0


# Spectral coordinates --------------------------------------------------------


def ps_to_spectral(p: ParamPoint) -> SpectralParams:
    """Map (xi, lambda, eta, nu) to the minor exponents (delta, s, eps, t)."""
    n, lam, nu, xi, eta = p.n, p.lam, p.nu, p.xi, p.eta
    s = np.empty(n + 1, dtype=complex)
    t = np.empty(n, dtype=complex)
    delta, eps = [0] * (n + 1), [0] * n
    for i in range(1, n + 1):
        j = n + 1 - i
        s[i - 1] = lam[i - 1] - nu[j - 1] - 0.5
        t[i - 1] = nu[j - 1] - lam[i] - 0.5
        delta[i - 1] = xi[i - 1] + eta[j - 1]
        eps[i - 1] = eta[j - 1] + xi[i]
    s[n] = lam[n] + n / 2.0
    delta[n] = xi[n]
    return SpectralParams(delta, s, eps, t)


def spectral_to_ps(sp: SpectralParams) -> ParamPoint:
    """Inverse of :func:`ps_to_spectral`."""
    n = sp.n
    lam = np.empty(n + 1, dtype=complex)
    nu = np.empty(n, dtype=complex)
    xi, eta = [0] * (n + 1), [0] * n
    lam[n] = sp.s[n] - n / 2.0
    xi[n] = sp.delta[n]
    for i in range(n, 0, -1):
        j = n + 1 - i
        nu[j - 1] = sp.t[i - 1] + lam[i] + 0.5
        eta[j - 1] = parity(sp.eps[i - 1] - xi[i])
        lam[i - 1] = sp.s[i - 1] + nu[j - 1] + 0.5
        xi[i - 1] = parity(sp.delta[i - 1] - eta[j - 1])
    return ParamPoint.make(lam, nu, xi, eta)


# Weyl action -------------------------------------------------------------------


def weyl_act(perm, bits, vec):
    """Permute a parity vector and a complex vector by w: (w v)_{w(i)} = v_i.

    ``perm`` is a 0-based tuple with perm[i] = w(i) (or a WeylElement).
    """
    perm = tuple(getattr(perm, "perm", perm))
    bits, vec = list(bits), np.asarray(vec)
    if len(perm) != len(bits) or len(perm) != len(vec) or sorted(perm) != list(range(len(perm))):
        raise ValueError("permutation does not match vector size")
    out_bits = [0] * len(bits)
    out_vec = np.empty_like(vec)
    for i, wi in enumerate(perm):
        out_bits[wi] = bits[i]
        out_vec[wi] = vec[i]
    return tuple(out_bits), out_vec


def swap(i: int, k: int) -> tuple:
    perm = list(range(k))
    perm[i - 1], perm[i] = perm[i], perm[i - 1]
    return tuple(perm)


def weyl_act_g(p: ParamPoint, i: int) -> ParamPoint:
    """w_i(xi, lambda) with (eta, nu) unchanged."""
    xi, lam = weyl_act(swap(i, p.n + 1), p.xi, p.lam)
    return ParamPoint.make(lam, p.nu, xi, p.eta)


def weyl_act_h(p: ParamPoint, i: int) -> ParamPoint:
    """w_i(eta, nu) with (xi, lambda) unchanged."""
    eta, nu = weyl_act(swap(i, p.n), p.eta, p.nu)
    return ParamPoint.make(p.lam, nu, p.xi, eta)


# Normalizers -------------------------------------------------------------------


def _product(values) -> GammaValue:
    out = GammaValue(1 + 0j)
    for v in values:
        out = out * v
    return out


def normalizer_intro(p: ParamPoint) -> GammaValue:
    """prod_{i+j<=n+1} L(1/2, chi_i psi_j^-1) prod_{i+j>=n+2} L(1/2, chi_i^-1 psi_j)."""
    n = p.n
    vals = []
    for i in range(1, n + 2):
        for j in range(1, n + 1):
            if i + j <= n + 1:
                vals.append(l_factor(0.5, p.chi(i) / p.psi(j)))
            else:
                vals.append(l_factor(0.5, p.psi(j) / p.chi(i)))
    return _product(vals)


def normalizer_bf(p: ParamPoint) -> GammaValue:
    """The L-factor denominator of the optimally renormalized kernel, indexed by j first."""
    n = p.n
    vals = []
    for j in range(1, n + 1):
        for i in range(1, n + 2 - j):
            vals.append(l_factor(0.5, p.chi(i) / p.psi(j)))
        for i in range(n + 2 - j, n + 2):
            vals.append(l_factor(0.5, p.psi(j) / p.chi(i)))
    return _product(vals)


def bb_arguments(p: ParamPoint) -> list:
    """Gamma arguments of the holomorphic (gamma-product) normalization, with parities."""
    n = p.n
    out = []
    for i in range(1, n + 2):
        for j in range(1, n + 1):
            e = parity(p.xi[i - 1] + p.eta[j - 1])
            if i + j <= n + 1:
                out.append((p.lam[i - 1] - p.nu[j - 1] + 0.5, e))
            else:
                out.append((p.nu[j - 1] - p.lam[i - 1] + 0.5, e))
    return out


def normalizer_bb(p) -> GammaValue:
    """prod_{i+j<=n+1} Gamma(lambda_i - nu_j + 1/2) prod_{i+j>n+1} Gamma(nu_j - lambda_i + 1/2).

    Accepts a :class:`ParamPoint` or a :class:`SpectralParams`.
    """
    if isinstance(p, SpectralParams):
        p = spectral_to_ps(p)
    return _product(complex_gamma(z) for z, _ in bb_arguments(p))


def bb_bf_exponents(p: ParamPoint):
    """(a, b) with normalizer_bb / normalizer_bf / duplication_quotient = pi^a 2^b.

    Both exponents are affine in (lambda, nu); a is not constant.
    """
    a = b = 0j
    for z, e in bb_arguments(p):
        a += (z + e - 1) / 2
        b += z - 1
    return complex(a), complex(b)


def duplication_quotient(p: ParamPoint) -> complex:
    """prod Gamma((z + 1 - [e]) / 2) over the gamma arguments z of the gamma
    normalization; these are the factors left after the L-factor halves are
    split off by the duplication formula."""
    out = 1 + 0j
    for z, e in bb_arguments(p):
        out *= complex_gamma((z + 1 - e) / 2).value
    return out


# Bernstein-Sato polynomials ----------------------------------------------------


def bs_polynomial(kind: str, i: int, p: ParamPoint) -> complex:
    """Polynomial on the right hand side of the Bernstein-Sato identity for D_i, P_i, L_i."""
    n, lam, nu = p.n, p.lam, p.nu
    kind = kind.upper()
    hi = n - 1 if kind == "L" else n
    if kind not in ("D", "P", "L") or not 1 <= i <= hi:
        raise ValueError(f"no Bernstein-Sato polynomial for kind {kind!r}, index {i}, n={n}")
    L = lambda k: lam[k - 1]  # noqa: E731
    N = lambda k: nu[k - 1]  # noqa: E731
    val = 1 + 0j
    if kind == "D":
        val = (-1) ** (i + 1)
        for j in range(n + 1 - i, n + 1):
            val *= N(j) - L(i + 1) - 0.5
    elif kind == "P":
        for j in range(1, i + 1):
            val *= L(j) - N(n + 1 - i) - 0.5
        for k in range(n + 2 - i, n + 1):
            val *= N(k) - L(i + 1) - 0.5
    else:
        for k in range(1, i + 1):
            val *= L(k) - N(n - i) - 0.5
        for j in range(n + 1 - i, n + 1):
            val *= N(j) - L(i + 1) - 0.5
    return complex(val)


def bs_target(kind: str, i: int, p: ParamPoint) -> ParamPoint:
    """Parameters of the kernel on the right hand side of the identity for kind/i."""
    n = p.n
    kind = kind.upper()
    if kind == "D":
        return p.shift(unit(n + 1, i + 1))
    if kind == "P":
        return p.shift(unit(n + 1, i + 1), unit(n, n + 1 - i))
    if kind == "L":
        return p.shift(unit(n + 1, i + 1), unit(n, n - i))
    if kind == "C":
        return p.shift(unit(n + 1, 1), unit(n, i))
    if kind == "F":
        return p.shift(np.ones(n + 1, dtype=int) - unit(n + 1, i), np.ones(n, dtype=int))
    raise ValueError(f"unknown operator kind {kind!r}")


def bs_sign(kind: str) -> int:
    """Sign relating the determinantal operator to the displayed polynomial.

    With Phi_{n+1} = det(w0 g) the P and L determinants produce -p_P, -p_L.
    """
    return -1 if kind.upper() in ("P", "L") else 1


def c_polynomial(i: int, p: ParamPoint) -> complex:
    """C_i K = prod_{k=2}^{n+1-i} (nu_i - lambda_k + 1/2) K at bs_target('C', i, p); found empirically."""
    n = p.n
    if not 1 <= i <= n:
        raise ValueError(f"C index {i} out of range for n={n}")
    val = 1 + 0j
    for k in range(2, n + 2 - i):
        val *= p.nu[i - 1] - p.lam[k - 1] + 0.5
    return complex(val)


def f_polynomial(i: int, p: ParamPoint) -> complex:
    """F_i K = prod_{j=1}^{n+1-i} (lambda_i - nu_j - 1/2) K at bs_target('F', i, p); found empirically."""
    n = p.n
    if not 1 <= i <= n:
        raise ValueError(f"F index {i} out of range for n={n}")
    val = 1 + 0j
    for j in range(1, n + 2 - i):
        val *= p.lam[i - 1] - p.nu[j - 1] - 0.5
    return complex(val)


def operator_identity(kind: str, i: int, p: ParamPoint):
    """(factor, target) with Op K_p = factor * K_target for every operator kind."""
    kind = kind.upper()
    if kind == "C":
        return c_polynomial(i, p), bs_target(kind, i, p)
    if kind == "F":
        return f_polynomial(i, p), bs_target(kind, i, p)
    return bs_sign(kind) * bs_polynomial(kind, i, p), bs_target(kind, i, p)


def bb_bs_polynomial(kind: str, i: int, p: ParamPoint) -> complex:
    """Polynomial of the D/P/L identities for the gamma-normalized kernel (sign as in bs_polynomial)."""
    n, lam, nu = p.n, p.lam, p.nu
    kind = kind.upper()
    L = lambda k: lam[k - 1]  # noqa: E731
    N = lambda k: nu[k - 1]  # noqa: E731
    bs_polynomial(kind, i, p)  # range check
    val = 1 + 0j
    if kind == "D":
        val = (-1) ** (i + 1)
        for j in range(1, n - i + 1):
            val *= L(i + 1) - N(j) + 0.5
    elif kind == "P":
        for j in range(1, n - i + 1):
            val *= L(i + 1) - N(j) + 0.5
        for k in range(i + 2, n + 2):
            val *= N(n + 1 - i) - L(k) + 0.5
    else:
        for j in range(1, n - i):
            val *= L(i + 1) - N(j) + 0.5
        for k in range(i + 2, n + 2):
            val *= N(n - i) - L(k) + 0.5
    return complex(val)


def _even(p, i, j) -> bool:
    return parity(p.xi[i - 1] + p.eta[j - 1]) == 0


def bf_bs_polynomial(kind: str, i: int, p: ParamPoint) -> complex:
    """Linear factors of the D/P/L identities for the L-factor normalized kernel.

    The quotient bs_polynomial * normalizer_bf(target) / normalizer_bf(p) / this
    is a constant (a signed power of 2 and pi) on each parity class.
    """
    n, lam, nu = p.n, p.lam, p.nu
    kind = kind.upper()
    L = lambda k: lam[k - 1]  # noqa: E731
    N = lambda k: nu[k - 1]  # noqa: E731
    bs_polynomial(kind, i, p)
    val = 1 + 0j
    if kind == "D":
        for j in range(1, n + 1):
            if _even(p, i + 1, j):
                val *= L(i + 1) - N(j) + 0.5
        return complex(val)
    m = n + 1 - i if kind == "P" else n - i
    for j in range(1, m):
        if _even(p, i + 1, j):
            val *= L(i + 1) - N(j) + 0.5
    for k in range(i + 2, n + 2):
        if _even(p, k, m):
            val *= N(m) - L(k) + 0.5
    # factors that the parity-split normalization leaves uncancelled
    for k in range(1, i + 1):
        if _even(p, k, m):
            val *= L(k) - N(m) - 0.5
    for j in range(n + 2 - i if kind == "P" else n + 1 - i, n + 1):
        if _even(p, i + 1, j):
            val *= N(j) - L(i + 1) - 0.5
    return complex(val)


def minor_shift_target(kind: str, k: int, p: ParamPoint) -> ParamPoint:
    """Parameters of Phi_k K (kind 'phi') or Psi_k K (kind 'psi'): s + e_k resp. t + e_k."""
    sp = ps_to_spectral(p)
    n = p.n
    if kind == "phi":
        e = unit(n + 1, k)
        sq = SpectralParams(np.array(sp.delta) + e, sp.s + e, sp.eps, sp.t)
    elif kind == "psi":
        e = unit(n, k)
        sq = SpectralParams(sp.delta, sp.s, np.array(sp.eps) + e, sp.t + e)
    else:
        raise ValueError(f"unknown minor kind {kind!r}")
    return spectral_to_ps(sq)


def minor_shift_polynomial(kind: str, k: int, p: ParamPoint) -> complex:
    """Linear factors picked up by the L-factor normalized kernel under Phi_k or Psi_k multiplication."""
    n = p.n
    off = 0 if kind == "phi" else 1
    val = 1 + 0j
    for i in range(1, n + 2):
        for j in range(1, n + 1):
            if not _even(p, i, j):
                continue
            if i <= k <= n + 1 - j - off:
                val *= p.lam[i - 1] - p.nu[j - 1] + 0.5
            if n + 2 - j - off <= k <= i - 1:
                val *= p.nu[j - 1] - p.lam[i - 1] + 0.5
    return complex(val)


def shifted_d1_polynomial(sp: SpectralParams) -> complex:
    """p1 p2 p3 (without the constant) of the shifted D_1 identity in spectral coordinates.

    D_1 at (s - e_2, t + e_1) applied to the normalized kernel there gives this
    times the normalized kernel at (s, t), up to a parity-dependent constant.
    """
    n, s, t, d, e = sp.n, sp.s, sp.t, sp.delta, sp.eps
    val = 1 + 0j
    if n >= 2 and d[1]:
        val *= s[1]
    if e[0]:
        val *= t[0] + 1
    for j in range(1, n - 1):
        m = n + 1 - j
        tot, bits = 0j, 0
        for a in range(2, m + 1):
            tot += s[a - 1]
            bits += d[a - 1]
            if a < m:
                tot += t[a - 1]
                bits += e[a - 1]
        if bits % 2:
            val *= tot + n - j - 1
    return complex(val)


def shifted_d1_source(sp: SpectralParams) -> ParamPoint:
    """Principal series point with spectral parameters (delta - e_2, s - e_2, eps + e_1, t + e_1)."""
    n = sp.n
    e2, e1 = unit(n + 1, 2), unit(n, 1)
    return spectral_to_ps(SpectralParams(np.array(sp.delta) - e2, sp.s - e2, np.array(sp.eps) + e1, sp.t + e1))


# Predicates --------------------------------------------------------------------


def is_locally_integrable(p: ParamPoint) -> bool:
    n = p.n
    for i in range(1, n + 2):
        for j in range(1, n + 1):
            z = p.lam[i - 1] - p.nu[j - 1] + 0.5 if i + j <= n + 1 else p.nu[j - 1] - p.lam[i - 1] + 0.5
            if z.real <= 0:
                return False
    return True


def _is_integer(z: complex, tol: float = 1e-12) -> bool:
    return abs(z.imag) <= tol and abs(z.real - round(z.real)) <= tol


def is_irreducible_ps(g: GParams) -> bool:
    """Irreducibility of the principal series of GL(k) with parameters (xi, lambda).

    Reducible iff some lambda_i - lambda_j lies in 2Z+1 (equal parities) or in
    2Z \\ {0} (different parities).
    """
    k = g.lam.size
    for a in range(k):
        for b in range(a + 1, k):
            d = g.lam[a] - g.lam[b]
            if not _is_integer(d):
                continue
            m = int(round(d.real))
            if g.xi[a] == g.xi[b] and m % 2 != 0:
                return False
            if g.xi[a] != g.xi[b] and m % 2 == 0 and m != 0:
                return False
    return True


def in_minus_2n0(z: complex, tol: float = ZERO_SET_TOL, depth: int = ZERO_SET_DEPTH) -> bool:
    """z lies within ``tol`` of {0, -2, -4, ..., -2 depth}."""
    if abs(z.imag) > tol:
        return False
    m = -z.real / 2
    k = round(m)
    return 0 <= k <= depth and abs(z.real + 2 * k) <= tol


def _ell_lam_nu(p, i, j):
    return p.lam[i - 1] - p.nu[j - 1] + 0.5 + parity(p.xi[i - 1] + p.eta[j - 1])


def _ell_nu_lam(p, j, i):
    return p.nu[j - 1] - p.lam[i - 1] + 0.5 + parity(p.xi[i - 1] + p.eta[j - 1])


def zero_set_member(p: ParamPoint) -> list:
    """All memberships (set, i, j, k) of p in the families N_{i,j,k} and M_{i,j,k}."""
    n = p.n
    out = []
    for i in range(1, n + 2):
        for j in range(i + 1, n + 2):
            for k in range(1, n + 1):
                if in_minus_2n0(_ell_lam_nu(p, i, k)) and in_minus_2n0(_ell_nu_lam(p, k, j)):
                    out.append(("N", i, j, k))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for k in range(1, n + 2):
                if in_minus_2n0(_ell_nu_lam(p, j, k)) and in_minus_2n0(_ell_lam_nu(p, k, i)):
                    out.append(("M", i, j, k))
    return out


def bf_pole_conditions(p: ParamPoint) -> list:
    """Index pairs (i, j) whose L-factor in the optimal normalization sits at a pole."""
    n = p.n
    out = []
    for i in range(1, n + 2):
        for j in range(1, n + 1):
            z = _ell_lam_nu(p, i, j) if i + j <= n + 1 else _ell_nu_lam(p, j, i)
            if is_nonpositive_integer(z / 2):
                out.append((i, j))
    return out
