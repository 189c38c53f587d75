"""Matrices over a generic scalar ring, the minors Phi_k / Psi_k, Weyl
elements, one-parameter unipotents and related helpers.

Matrices are plain numpy arrays of shape (m, m) with m = n + 1. Anything
that only needs ring operations (``+``, ``-``, ``*``) also works for object
arrays holding python ints or :class:`glsbo.jets.Jet` entries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

REGULAR_THRESHOLD = 1e-3


# Weyl elements --------------------------------------------------------------


@dataclass(frozen=True)
class WeylElement:
    """A permutation w of {0, ..., m-1} with matrix w e_i = e_{w(i)}."""

    perm: tuple

    @property
    def size(self) -> int:
        return len(self.perm)

    @property
    def matrix(self) -> np.ndarray:
        m = self.size
        out = np.zeros((m, m))
        for i, wi in enumerate(self.perm):
            out[wi, i] = 1.0
        return out

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        # (w w')(i) = w(w'(i)), matching the matrix product
        return WeylElement(tuple(self.perm[j] for j in other.perm))

    def inverse(self) -> "WeylElement":
        inv = [0] * self.size
        for i, wi in enumerate(self.perm):
            inv[wi] = i
        return WeylElement(tuple(inv))

    def sign(self) -> int:
        perm, sgn, seen = self.perm, 1, [False] * self.size
        for i in range(self.size):
            if seen[i]:
                continue
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sgn = -sgn
        return sgn

    @classmethod
    def identity(cls, m: int) -> "WeylElement":
        return cls(tuple(range(m)))


def simple_reflection(i: int, m: int) -> WeylElement:
    """w_i swapping the (1-based) indices i and i+1 in GL(m)."""
    if not 1 <= i <= m - 1:
        raise ValueError(f"simple reflection index {i} out of range for size {m}")
    perm = list(range(m))
    perm[i - 1], perm[i] = perm[i], perm[i - 1]
    return WeylElement(tuple(perm))


def weyl_word(i: int, j: int, m: int) -> WeylElement:
    """w_{i,j}: w_i w_{i+1} ... w_j for i <= j, w_i w_{i-1} ... w_j for i > j."""
    step = 1 if j >= i else -1
    out = WeylElement.identity(m)
    for k in range(i, j + step, step):
        out = out * simple_reflection(k, m)
    return out


def longest_element(m: int) -> WeylElement:
    return WeylElement(tuple(range(m - 1, -1, -1)))


def w0(m: int) -> np.ndarray:
    return longest_element(m).matrix


def embed_h(h: np.ndarray) -> np.ndarray:
    """Embed h in GL(n) into GL(n+1) as block-diag(h, 1)."""
    h = np.asarray(h)
    n = h.shape[0]
    out = np.eye(n + 1, dtype=np.result_type(h, float))
    out[:n, :n] = h
    return out


def h_reflection(i: int, n: int) -> WeylElement:
    """The H-side simple reflection w_i (1 <= i <= n-1) embedded in GL(n+1)."""
    if not 1 <= i <= n - 1:
        raise ValueError(f"H-side reflection index {i} out of range for n={n}")
    return simple_reflection(i, n + 1)


# Minors ----------------------------------------------------------------------


def _det_generic(rows):
    """Laplace expansion of a small square matrix given as a list of rows."""
    k = len(rows)
    if k == 1:
        return rows[0][0]
    total = None
    for r in range(k):
        sub = [row[1:] for idx, row in enumerate(rows) if idx != r]
        term = rows[r][0] * _det_generic(sub)
        if r % 2:
            term = -term
        total = term if total is None else total + term
    return total


def all_minors(g):
    """Return ([Phi_1..Phi_{n+1}], [Psi_1..Psi_n]) using ring operations only.

    Works for any square array whose entries support ``+``, ``-`` and ``*``.
    Determinants of A[R, :k] (A = w0 g) are shared between the two families.
    """
    m = len(g)
    rows = [[g[m - 1 - r][c] for c in range(m)] for r in range(m)]  # w0 g
    cache = {}

    def det(rowset):
        # det of A[rowset, :k] expanding along the last column
        if rowset in cache:
            return cache[rowset]
        k = len(rowset)
        if k == 1:
            val = rows[rowset[0]][0]
        else:
            val = None
            for pos, r in enumerate(rowset):
                rest = rowset[:pos] + rowset[pos + 1:]
                term = rows[r][k - 1] * det(rest)
                if (pos + k - 1) % 2:
                    term = -term
                val = term if val is None else val + term
        cache[rowset] = val
        return val

    phis = [det(tuple(range(p))) for p in range(1, m + 1)]
    psis = [det(tuple(range(1, q + 1))) for q in range(1, m)]
    return phis, psis


def phi_minor(k: int, g):
    """Phi_k(g): leading k x k principal minor of w0 g (1 <= k <= n+1)."""
    m = len(g)
    if not 1 <= k <= m:
        raise ValueError(f"Phi index {k} out of range")
    a = np.asarray(g)[::-1]
    if a.dtype == object:
        return _det_generic([list(a[r, :k]) for r in range(k)])
    return np.linalg.det(a[:k, :k])


def psi_minor(k: int, g):
    """Psi_k(g): rows 2..k+1, columns 1..k of w0 g (0 <= k <= n, Psi_0 = 1)."""
    m = len(g)
    if not 0 <= k <= m - 1:
        raise ValueError(f"Psi index {k} out of range")
    if k == 0:
        return 1
    a = np.asarray(g)[::-1]
    if a.dtype == object:
        return _det_generic([list(a[r, :k]) for r in range(1, k + 1)])
    return np.linalg.det(a[1:k + 1, :k])


def det_exact(a) -> int:
    """Fraction-free (Bareiss) determinant of an integer matrix."""
    m = [[int(x) for x in row] for row in a]
    k = len(m)
    if k == 0:
        return 1
    sign, prev = 1, 1
    for p in range(k - 1):
        if m[p][p] == 0:
            for r in range(p + 1, k):
                if m[r][p] != 0:
                    m[p], m[r] = m[r], m[p]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(p + 1, k):
            for c in range(p + 1, k):
                m[r][c] = (m[r][c] * m[p][p] - m[r][p] * m[p][c]) // prev
        prev = m[p][p]
    return sign * m[k - 1][k - 1]


def phi_exact(k: int, g) -> int:
    a = [list(row) for row in g][::-1]
    return det_exact([row[:k] for row in a[:k]])


def psi_exact(k: int, g) -> int:
    if k == 0:
        return 1
    a = [list(row) for row in g][::-1]
    return det_exact([row[:k] for row in a[1:k + 1]])


def _as_int_matrix(g):
    return [[int(x) for x in row] for row in g]


def lemma_first(i: int, g):
    """(lhs, rhs) of Phi_i(g) Psi_i(g w_i) - Phi_i(g w_i) Psi_i(g) = Psi_{i-1}(g) Phi_{i+1}(g).

    Exact for integer matrices (1 <= i <= n).
    """
    m = len(g)
    g = np.array(_as_int_matrix(g), dtype=object)
    gw = g.dot(simple_reflection(i, m).matrix.astype(int).astype(object))
    lhs = phi_exact(i, g) * psi_exact(i, gw) - phi_exact(i, gw) * psi_exact(i, g)
    return lhs, psi_exact(i - 1, g) * phi_exact(i + 1, g)


def lemma_second(i: int, g):
    """(lhs, rhs) of Phi_{n+1-i}(w_i g) Psi_{n-i}(g) - Phi_{n+1-i}(g) Psi_{n-i}(w_i g)
    = Psi_{n+1-i}(g) Phi_{n-i}(g), with w_i the H-side reflection (1 <= i <= n-1)."""
    m = len(g)
    n = m - 1
    g = np.array(_as_int_matrix(g), dtype=object)
    wg = h_reflection(i, n).matrix.astype(int).astype(object).dot(g)
    k = n + 1 - i
    lhs = phi_exact(k, wg) * psi_exact(k - 1, g) - phi_exact(k, g) * psi_exact(k - 1, wg)
    return lhs, psi_exact(k, g) * phi_exact(k - 1, g)


def cocycle(side: str, kind: str, j: int, i: int, x: float, g: np.ndarray):
    """(lhs, rhs, scale) for the minor transformation rules under a unipotent step.

    ``side='right'``: the minor of g w_i nbar_i(x) against the rule
    j < i: M_j(g);  j = i: M_j(g w_i) + x M_j(g);  j > i: -M_j(g).
    ``side='left'``: the minor of nbar_i(x) w_i g (H-side, i <= n-1); the
    moving index is k0 = n+1-i for Phi and n-i for Psi, unchanged below it
    and negated above it. ``scale`` bounds the size of the terms on the right.
    """
    g = np.asarray(g, dtype=float)
    m = g.shape[0]
    n = m - 1
    minor = phi_minor if kind == "phi" else psi_minor
    if side == "right":
        w = simple_reflection(i, m).matrix
        moved = g @ w @ nbar(i, x, m)
        swapped = g @ w
        k0 = i
    elif side == "left":
        w = h_reflection(i, n).matrix
        moved = nbar(i, x, m) @ w @ g
        swapped = w @ g
        k0 = n + 1 - i if kind == "phi" else n - i
    else:
        raise ValueError(f"unknown side {side!r}")
    lhs = minor(j, moved)
    base = minor(j, g)
    if j < k0:
        rhs, scale = base, abs(base)
    elif j == k0:
        sw = minor(j, swapped)
        rhs, scale = sw + x * base, abs(sw) + abs(x * base)
    else:
        rhs, scale = -base, abs(base)
    return lhs, rhs, scale


# Special matrices --------------------------------------------------------------


def nbar(i: int, x, m: int) -> np.ndarray:
    """Identity plus x at the (1-based) entry (i+1, i)."""
    if not 1 <= i <= m - 1:
        raise ValueError(f"nbar index {i} out of range for size {m}")
    out = np.eye(m, dtype=np.result_type(x, float))
    out[i, i - 1] = x
    return out


def iwasawa_nbar(i: int, x: float, m: int):
    """Decompose nbar_i(x) = k a nu with k orthogonal, a diagonal, nu unipotent upper."""
    r = np.sqrt(1.0 + x * x)
    k = np.eye(m)
    k[i - 1, i - 1], k[i - 1, i] = 1 / r, -x / r
    k[i, i - 1], k[i, i] = x / r, 1 / r
    a = np.eye(m)
    a[i - 1, i - 1], a[i, i] = r, 1 / r
    nu = np.eye(m)
    nu[i - 1, i] = x / (1 + x * x)
    return k, a, nu


def z0(n: int) -> np.ndarray:
    """0/1 matrix with ones where i + j is n+1 or n+2 (1-based, size n+1)."""
    m = n + 1
    out = np.zeros((m, m))
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            if i + j in (n + 1, n + 2):
                out[i - 1, j - 1] = 1.0
    return out


def unit_lower_bidiagonal(m: int) -> np.ndarray:
    return np.eye(m) + np.eye(m, k=-1)


def iwasawa(g: np.ndarray):
    """g = k a nu with k orthogonal, a positive diagonal, nu unipotent upper triangular.

    Returns (k, diag(a), nu).
    """
    q, r = np.linalg.qr(np.asarray(g, dtype=float))
    d = np.sign(np.diag(r))
    d[d == 0] = 1.0
    q = q * d
    r = d[:, None] * r
    a = np.diag(r).copy()
    return q, a, r / a[:, None]


# Regularity ------------------------------------------------------------------


def minor_values(g: np.ndarray):
    phis, psis = all_minors(np.asarray(g))
    return np.array(phis), np.array(psis)


def is_regular(g: np.ndarray, threshold: float = REGULAR_THRESHOLD) -> bool:
    """All Phi_k, Psi_k of g / ||g||_F have modulus at least ``threshold``."""
    g = np.asarray(g, dtype=float)
    g = g / np.linalg.norm(g)
    phis, psis = minor_values(g)
    return bool(np.all(np.abs(phis) >= threshold) and np.all(np.abs(psis) >= threshold))


class RegularSamplingError(RuntimeError):
    pass


def sample_regular_matrix(n: int, rng: np.random.Generator, max_tries: int = 1000,
                          threshold: float = REGULAR_THRESHOLD) -> np.ndarray:
    """Gaussian (n+1) x (n+1) matrix, rescaled to unit Frobenius norm, that is regular."""
    for _ in range(max_tries):
        g = rng.standard_normal((n + 1, n + 1))
        g /= np.linalg.norm(g)
        if is_regular(g, threshold):
            return g
    raise RegularSamplingError(f"no regular matrix found in {max_tries} tries")


def sample_integer_matrix(n: int, rng: np.random.Generator, bound: int = 5) -> np.ndarray:
    return rng.integers(-bound, bound + 1, size=(n + 1, n + 1)).astype(object)


def parse_matrix(text: str, m: int | None = None) -> np.ndarray:
    """Parse a row-major comma separated matrix literal."""
    vals = [float(v) for v in text.replace(" ", "").split(",") if v]
    size = int(round(len(vals) ** 0.5))
    if size * size != len(vals) or (m is not None and size != m):
        raise ValueError(f"matrix literal has {len(vals)} entries, not a square of the expected size")
    return np.array(vals).reshape(size, size)
