"""Nested first-order dual numbers and the determinantal differential operators.

A :class:`Jet` of depth d stores the 2^d coefficients of a polynomial in
d nilpotent variables tau_1..tau_d with tau_k^2 = 0, indexed by bitmask.
Applying an operator word to a function on the group introduces one
variable per vector field letter; the answer is the coefficient of
tau_1 ... tau_d.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .matgroup import WeylElement, all_minors, weyl_word
from .scalars import parity


@lru_cache(maxsize=None)
def _mul_table(d: int):
    """Index pairs (I, J) of disjoint subsets and the 0/1 matrix summing I|J."""
    pairs = [(a, b) for a in range(1 << d) for b in range(1 << d) if not a & b]
    I = np.array([a for a, _ in pairs])
    J = np.array([b for _, b in pairs])
    S = np.zeros((len(pairs), 1 << d))
    S[np.arange(len(pairs)), I | J] = 1.0
    return I, J, S


def _lift(c: np.ndarray, size: int) -> np.ndarray:
    if c.shape[-1] == size:
        return c
    out = np.zeros(c.shape[:-1] + (size,), dtype=complex)
    out[..., : c.shape[-1]] = c
    return out


class JetError(ArithmeticError):
    pass


class Jet:
    """Element of C[tau_1..tau_d] / (tau_k^2)."""

    __slots__ = ("c",)

    def __init__(self, c):
        self.c = np.asarray(c, dtype=complex).reshape(-1)

    @classmethod
    def constant(cls, value, depth: int = 0) -> "Jet":
        c = np.zeros(1 << depth, dtype=complex)
        c[0] = value
        return cls(c)

    @property
    def depth(self) -> int:
        return self.c.size.bit_length() - 1

    @property
    def value(self) -> complex:
        return complex(self.c[0])

    @property
    def top(self) -> complex:
        """Coefficient of tau_1 ... tau_d."""
        return complex(self.c[-1])

    def _coerce(self, other):
        if isinstance(other, Jet):
            size = max(self.c.size, other.c.size)
            return _lift(self.c, size), _lift(other.c, size)
        return None

    def __add__(self, other):
        if isinstance(other, Jet):
            a, b = self._coerce(other)
            return Jet(a + b)
        c = self.c.copy()
        c[0] += other
        return Jet(c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            a, b = self._coerce(other)
            if a.size == 1:
                return Jet(a * b)
            I, J, S = _mul_table(a.size.bit_length() - 1)
            return Jet((a[I] * b[J]) @ S)
        return Jet(self.c * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return Jet(self.c / other)

    def nilpotent(self) -> "Jet":
        c = self.c.copy()
        c[0] = 0
        return Jet(c)

    def reciprocal(self) -> "Jet":
        return self.power(-1)

    def power(self, s: complex) -> "Jet":
        """x^s for a jet with nonzero constant part, principal branch on the constant."""
        x0 = self.value
        if x0 == 0:
            raise JetError("power of a jet with zero base point")
        return self._binomial_series(complex(x0) ** s, s, x0)

    def _binomial_series(self, lead, s, x0) -> "Jet":
        # x0^s (1 + N/x0)^s, truncated after depth terms since N^(d+1) = 0
        u = self.nilpotent() * (1.0 / x0)
        out = Jet.constant(1.0, self.depth)
        term = Jet.constant(1.0, self.depth)
        coef = 1 + 0j
        for k in range(1, self.depth + 1):
            term = term * u
            coef *= (s - k + 1) / k
            out = out + term * coef
        return out * lead

    def signed_pow(self, s: complex, eps) -> "Jet":
        """sgn(x)^[eps] |x|^s for a real-valued jet with nonzero base point."""
        x0 = self.c[0]
        if x0 == 0:
            raise JetError("signed power of a jet with zero base point")
        x0 = x0.real
        lead = complex(np.exp(s * math.log(abs(x0))))
        if parity(eps) and x0 < 0:
            lead = -lead
        return self._binomial_series(lead, s, x0)

    def __repr__(self):
        return f"Jet(depth={self.depth}, c={self.c!r})"


class JetMatrix:
    """Square matrix with jet entries, stored as an (m, m, 2^d) coefficient array."""

    __slots__ = ("c",)

    def __init__(self, c):
        c = np.asarray(c, dtype=complex)
        if c.ndim == 2:
            c = c[:, :, None]
        self.c = c

    @property
    def size(self) -> int:
        return self.c.shape[0]

    @property
    def depth(self) -> int:
        return self.c.shape[2].bit_length() - 1

    def entries(self):
        m = self.size
        return [[Jet(self.c[r, k]) for k in range(m)] for r in range(m)]

    def base(self) -> np.ndarray:
        return self.c[:, :, 0].real

    def translate(self, right: WeylElement | None = None, left: WeylElement | None = None) -> "JetMatrix":
        """Return left^{-1} M right."""
        c = self.c
        if right is not None:
            c = c[:, list(right.perm), :]
        if left is not None:
            c = c[list(left.perm), :, :]
        return JetMatrix(c)

    def extend(self, kind: str, i: int, j: int) -> "JetMatrix":
        """Adjoin a new variable tau: M + tau M E_ij (right) or M + tau E_ji M (left)."""
        c = self.c
        d = np.zeros_like(c)
        if kind == "right":
            d[:, j - 1, :] = c[:, i - 1, :]
        else:
            d[j - 1, :, :] = c[i - 1, :, :]
        return JetMatrix(np.concatenate([c, d], axis=2))


def jet_minors(M: JetMatrix):
    """All Phi_k and Psi_k of a jet matrix as jets."""
    return all_minors(M.entries())


# Operator letters and words ----------------------------------------------------


@dataclass(frozen=True)
class VectorField:
    """Right field eps^{i,j} = sum_k g_ki d/dg_kj or left field eps_{i,j} = sum_k g_ik d/dg_jk."""

    kind: str
    i: int
    j: int

    def __str__(self):
        return f"e^{{{self.i},{self.j}}}" if self.kind == "right" else f"e_{{{self.i},{self.j}}}"


@dataclass(frozen=True)
class MinorFunction:
    """g -> Phi_k(left^{-1} g right) or Psi_k(left^{-1} g right)."""

    family: str
    k: int
    right: WeylElement | None = None
    left: WeylElement | None = None

    def __call__(self, M: JetMatrix) -> Jet:
        phis, psis = jet_minors(M.translate(self.right, self.left))
        return phis[self.k - 1] if self.family == "phi" else psis[self.k - 1]

    def right_translate(self, w: WeylElement) -> "MinorFunction":
        """r(w) applied to this function: g -> f(g w)."""
        right = w if self.right is None else w * self.right
        return MinorFunction(self.family, self.k, right, self.left)

    def __str__(self):
        name = ("Phi" if self.family == "phi" else "Psi") + str(self.k)
        if self.right is not None:
            name = f"r{list(self.right.perm)}{name}"
        if self.left is not None:
            name = f"l{list(self.left.perm)}{name}"
        return name


@dataclass(frozen=True)
class Scalar:
    value: complex
    label: str = ""

    def __str__(self):
        return self.label or str(self.value)


def apply_word(word, f, g) -> complex:
    """(L_1 L_2 ... L_m f)(g) for letters VectorField, MinorFunction or Scalar.

    ``f`` maps a :class:`JetMatrix` to a :class:`Jet`; ``g`` is a plain matrix.
    """
    M = JetMatrix(np.asarray(g, dtype=complex))
    P = Jet.constant(1.0)
    for letter in word:
        if isinstance(letter, VectorField):
            M = M.extend(letter.kind, letter.i, letter.j)
        elif isinstance(letter, Scalar):
            P = P * letter.value
        else:
            P = P * letter(M)
    return (P * f(M)).top


# Linear combinations of words and noncommutative determinants ------------------


def _lc_product(factors):
    out = [(1 + 0j, ())]
    for fac in factors:
        out = [(c1 * c2, w1 + w2) for c1, w1 in out for c2, w2 in fac]
    return out


def _lc_right_translate(lc, w: WeylElement):
    return [
        (c, tuple(x.right_translate(w) if isinstance(x, MinorFunction) else x for x in word))
        for c, word in lc
    ]


@dataclass
class NCDeterminant:
    """Square array of operator entries expanded column by column.

    Entries are linear combinations of words, given as lists of
    (coefficient, tuple of letters); ``None`` marks a zero entry. The
    expansion is sum_sigma sgn(sigma) a_{sigma(1),1} ... a_{sigma(m),m}.
    """

    entries: list
    sign: int = 1
    labels: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.entries)

    def formal_term_count(self) -> int:
        return math.factorial(self.size)

    def expand(self) -> list:
        m = self.size
        out = []
        for sigma in itertools.permutations(range(m)):
            factors = [self.entries[sigma[c]][c] for c in range(m)]
            if any(f is None for f in factors):
                continue
            sgn = WeylElement(sigma).sign() * self.sign
            out.extend((sgn * c, w) for c, w in _lc_product(factors))
        return out

    def order(self) -> int:
        return max(sum(isinstance(x, VectorField) for x in w) for _, w in self.expand())

    def nonzero_term_count(self) -> int:
        return len(self.expand())


def _letter(x):
    return [(1 + 0j, (x,))]


def _scalar(v):
    return [(complex(v), ())]


def _c_lincomb(i: int, n: int, nu) -> list:
    """Expanded C_i(nu); C_n is the multiplication by Psi_1."""
    if i == n:
        return _letter(MinorFunction("psi", 1))
    return build_c_determinant(i, n, nu).expand()


def build_c_determinant(i: int, n: int, nu) -> NCDeterminant:
    m = n - i + 1
    N = lambda a, b: nu[a - 1] - nu[b - 1] - 1  # noqa: E731
    rows = [[None] * m for _ in range(m)]
    for r in range(1, m + 1):
        a = n + 1 - r
        left = None if r == 1 else weyl_word(a, n - 1, n + 1)
        rows[r - 1][0] = _letter(MinorFunction("psi", 1, None, left))
        if r < m:
            rows[r - 1][r] = _scalar(N(a, i))
        for c in range(2, r + 1):
            rows[r - 1][c - 1] = _letter(VectorField("left", a, n + 2 - c))
    return NCDeterminant(rows, (-1) ** (n - i))


def _d_layout(i: int, n: int, lam, first_column) -> NCDeterminant:
    """The shared layout of D_i, P_i and L_i; first_column(r) gives entry (r, 1)."""
    m = i + 1
    L = lambda a, b: lam[a - 1] - lam[b - 1] - 1  # noqa: E731
    rows = [[None] * m for _ in range(m)]
    for r in range(1, m + 1):
        rows[r - 1][0] = first_column(r)
        if r < m:
            rows[r - 1][r] = _scalar(L(r, i + 1))
        for c in range(2, r + 1):
            rows[r - 1][c - 1] = _letter(VectorField("right", r, c - 1))
    return NCDeterminant(rows, (-1) ** (i + 1))


def _translated_first_column(base_lc, n):
    def entry(r):
        if r == 1:
            return base_lc
        return _lc_right_translate(base_lc, weyl_word(r - 1, 1, n + 1))

    return entry


def build_operator(kind: str, i: int, p) -> NCDeterminant:
    """The determinantal operator of the given kind (D, C, P, L, F) and index."""
    n, lam, nu = p.n, p.lam, p.nu
    kind = kind.upper()
    ranges = {"D": (1, n), "C": (1, n), "P": (1, n), "L": (1, n - 1), "F": (1, n)}
    if kind not in ranges:
        raise ValueError(f"unknown operator kind {kind!r}")
    lo, hi = ranges[kind]
    if not lo <= i <= hi:
        raise ValueError(f"index {i} out of range {lo}..{hi} for kind {kind} at n={n}")
    if kind == "D":
        return _d_layout(i, n, lam, _translated_first_column(_letter(MinorFunction("phi", 1)), n))
    if kind == "C":
        if i == n:
            return NCDeterminant([[_letter(MinorFunction("psi", 1))]])
        return build_c_determinant(i, n, nu)
    if kind == "P":
        return _d_layout(i, n, lam, _translated_first_column(_c_lincomb(n + 1 - i, n, nu), n))
    if kind == "L":
        return _d_layout(i, n, lam, _translated_first_column(_c_lincomb(n - i, n, nu), n))
    # F
    m = n + 2 - i
    L = lambda a, b: lam[a - 1] - lam[b - 1] - 1  # noqa: E731
    rows = [[None] * m for _ in range(m)]
    for r in range(1, m + 1):
        a = n + 2 - r
        right = None if r == 1 else weyl_word(a, n, n + 1)
        rows[r - 1][0] = _letter(MinorFunction("psi", n, right))
        if r < m:
            rows[r - 1][r] = _scalar(L(i, n + 2 - r))
        for c in range(2, r + 1):
            top = n + 3 - c
            rows[r - 1][c - 1] = [((-1) ** (top + a + 1), (VectorField("right", top, a),))]
    return NCDeterminant(rows, (-1) ** (n + 1 - i))


def apply_lincomb(lc, f, g) -> complex:
    return sum(c * apply_word(w, f, g) for c, w in lc if c != 0)


def apply_bs_operator(kind: str, i: int, p, g, normalization: str = "none") -> complex:
    """(Op K)(g) for the operator of the given kind at parameters p."""
    from .kernel import KernelSpec, jet_kernel

    spec = KernelSpec(p, normalization)
    return apply_lincomb(build_operator(kind, i, p).expand(), lambda M: jet_kernel(spec, M), g)


def apply_operator(kind: str, i: int, p, f, g) -> complex:
    """(Op f)(g) for an arbitrary jet-evaluable function f."""
    return apply_lincomb(build_operator(kind, i, p).expand(), f, g)


def continued_bb_kernel_n1(sp, g) -> complex:
    """Gamma-normalized n = 1 kernel at (s, t) obtained as D applied to the kernel at t + 1.

    Uses D(s, t+1) KK_{s_1, s_2-1}^{t+1} = KK_{s_1, s_2}^t, which continues the
    family from Re t > -1 to Re t > -2.
    """
    from .kernel import KernelSpec, jet_kernel
    from .params import SpectralParams, spectral_to_ps

    if sp.n != 1:
        raise ValueError("only defined for n = 1")
    src = SpectralParams((sp.delta[0], sp.delta[1] + 1), sp.s - np.array([0, 1]),
                         (sp.eps[0] + 1,), sp.t + 1)
    q = spectral_to_ps(src)
    spec = KernelSpec(q, "bb")
    return apply_operator("D", 1, q, lambda M: jet_kernel(spec, M), g)


def fi_candidates(i: int, n: int) -> list:
    """Candidate (G-shift, H-shift, label) targets for F_i K."""
    ones_g, ones_h = np.ones(n + 1, dtype=int), np.ones(n, dtype=int)
    out = []
    for gi in (i + 1, i):
        gs = ones_g.copy()
        gs[gi - 1] -= 1
        hs_list = [(np.zeros(n, dtype=int), "0"), (ones_h, "1")]
        hs_list += [(np.eye(n, dtype=int)[j], f"e{j + 1}") for j in range(n)]
        for hs, hl in hs_list:
            out.append((gs, hs, f"lambda+1-e{gi}, nu+{hl}"))
    return out


@dataclass
class FiResult:
    label: str | None
    constant: complex | None
    rel_spread: float
    table: dict


def fi_proportionality(i: int, p, gs, tol: float = 1e-8) -> FiResult:
    """Search the candidate shifts for which (F_i K)(g) / K_shifted(g) is independent of g."""
    from .kernel import KernelSpec, eval_kernel, jet_kernel

    lc = build_operator("F", i, p).expand()
    spec = KernelSpec(p)
    lhs = np.array([apply_lincomb(lc, lambda M: jet_kernel(spec, M), g) for g in gs])
    best, table = None, {}
    for gsh, hsh, label in fi_candidates(i, p.n):
        q = p.shift(gsh, hsh)
        rhs = np.array([eval_kernel(KernelSpec(q), g) for g in gs])
        ratios = lhs / rhs
        mean = ratios.mean()
        spread = float(np.max(np.abs(ratios - mean)) / max(abs(mean), 1e-300))
        table[label] = (complex(mean), spread)
        if best is None or spread < best[2]:
            best = (label, complex(mean), spread)
    if best[2] > tol:
        return FiResult(None, None, best[2], table)
    return FiResult(best[0], best[1], best[2], table)
