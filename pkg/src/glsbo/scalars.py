"""Scalar special functions: parities, signed powers, the complex gamma
function, archimedean L-factors, the convolution gamma factor and
Harish-Chandra e-functions.
"""

from __future__ import annotations

import cmath
import re
import math
from dataclasses import dataclass

POLE_TOL = 1e-12

# Godfrey's coefficients for g = 607/128, n = 15.
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_COEF = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def parity(e) -> int:
    """Return the representative [e] in {0, 1} of an element of Z/2Z."""
    return int(e) % 2


@dataclass(frozen=True)
class RealCharacter:
    """The character x -> sgn(x)^eps |x|^mu of R^x."""

    eps: int
    mu: complex

    def __post_init__(self):
        object.__setattr__(self, "eps", parity(self.eps))
        object.__setattr__(self, "mu", complex(self.mu))

    def __call__(self, x: float) -> complex:
        return signed_pow(x, self.mu, self.eps)

    def __mul__(self, other: "RealCharacter") -> "RealCharacter":
        return RealCharacter(self.eps + other.eps, self.mu + other.mu)

    def inverse(self) -> "RealCharacter":
        return RealCharacter(self.eps, -self.mu)

    def __truediv__(self, other: "RealCharacter") -> "RealCharacter":
        return self * other.inverse()


@dataclass(frozen=True)
class GammaValue:
    """A value of a meromorphic function, with poles flagged instead of raised.

    ``value`` is meaningless when ``is_pole`` is set. ``reciprocal`` gives the
    entire function 1/value, which is 0 at a pole.
    """

    value: complex
    is_pole: bool = False

    @classmethod
    def pole(cls) -> "GammaValue":
        return cls(complex("nan"), True)

    def reciprocal(self) -> complex:
        if self.is_pole:
            return 0j
        return 1.0 / self.value

    def __mul__(self, other) -> "GammaValue":
        if isinstance(other, GammaValue):
            if self.is_pole or other.is_pole:
                return GammaValue.pole()
            return GammaValue(self.value * other.value)
        if self.is_pole:
            return GammaValue.pole()
        return GammaValue(self.value * other)

    __rmul__ = __mul__

    def __complex__(self) -> complex:
        if self.is_pole:
            raise ZeroDivisionError("value requested at a pole")
        return complex(self.value)


def signed_pow(x: float, mu: complex, eps) -> complex:
    """sgn(x)^[eps] |x|^mu for real x != 0."""
    if x == 0:
        raise ValueError("signed_pow is singular at x = 0")
    ax = abs(x)
    val = cmath.exp(complex(mu) * math.log(ax))
    if parity(eps) and x < 0:
        return -val
    return val


def is_nonpositive_integer(z: complex, tol: float = POLE_TOL) -> bool:
    z = complex(z)
    if abs(z.imag) > tol or z.real > tol:
        return False
    return abs(z.real - round(z.real)) <= tol


def _lanczos_log_gamma(z: complex) -> complex:
    # valid for Re z >= 0.5
    z = z - 1.0
    x = _LANCZOS_COEF[0]
    for k in range(1, len(_LANCZOS_COEF)):
        x += _LANCZOS_COEF[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def _gamma_raw(z: complex) -> complex:
    if z.real < 0.5:
        # reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return math.pi / (cmath.sin(math.pi * z) * _gamma_raw(1.0 - z))
    if z.imag == 0.0 and z.real <= 171.0 and z.real == int(z.real):
        return complex(math.factorial(int(z.real) - 1))
    return cmath.exp(_lanczos_log_gamma(z))


def complex_gamma(z: complex) -> GammaValue:
    """Gamma(z) for complex z; poles at 0, -1, -2, ... are flagged."""
    z = complex(z)
    if is_nonpositive_integer(z):
        return GammaValue.pole()
    return GammaValue(_gamma_raw(z))


def gamma(z: complex) -> complex:
    """Plain complex gamma; raises ZeroDivisionError at a pole."""
    return complex(complex_gamma(z))


def rgamma(z: complex) -> complex:
    """1/Gamma(z), an entire function (0 at the poles of Gamma)."""
    return complex_gamma(z).reciprocal()


def l_factor(s: complex, chi: RealCharacter) -> GammaValue:
    """Archimedean local L-factor pi^{-(s+mu+[eps])/2} Gamma((s+mu+[eps])/2)."""
    a = complex(s) + chi.mu + chi.eps
    g = complex_gamma(a / 2.0)
    if g.is_pole:
        return g
    return GammaValue(cmath.exp(-a / 2.0 * math.log(math.pi)) * g.value)


def t_factor(alpha: complex, beta: complex, eps, xi) -> GammaValue:
    """Gamma factor of the convolution integral

        int |y|^alpha_eps |x - y|^beta_xi dy = t(alpha, beta, eps, xi) |x|^{alpha+beta+1}_{eps+xi}.
    """
    e, x = parity(eps), parity(xi)
    ex = parity(e + x)
    alpha, beta = complex(alpha), complex(beta)
    num = [(alpha + 1 + e) / 2, (beta + 1 + x) / 2, (-alpha - beta - 1 + ex) / 2]
    den = [(-alpha + e) / 2, (-beta + x) / 2, (alpha + beta + 2 + ex) / 2]
    val = complex((-1) ** (e * x) * math.sqrt(math.pi))
    for z in den:
        val *= rgamma(z)
    if val == 0:
        return GammaValue(0j)
    for z in num:
        g = complex_gamma(z)
        if g.is_pole:
            return g
        val *= g.value
    return GammaValue(val)


def e_function(chis, inverse: bool = False) -> complex:
    """Harish-Chandra e-function prod_{i<j} L(1, chi_i chi_j^{-1})^{-1}.

    With ``inverse=True`` the H-side variant e_H(-nu) = prod_{i<j} L(1, chi_i^{-1} chi_j)^{-1}
    is returned.
    """
    chis = list(chis)
    val = 1 + 0j
    for i in range(len(chis)):
        for j in range(i + 1, len(chis)):
            chi = chis[j] / chis[i] if inverse else chis[i] / chis[j]
            val *= l_factor(1, chi).reciprocal()
    return val


_COMPLEX_RE = re.compile(
    r"^\s*(?:(?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?![\deE.]*[ij]))?"
    r"\s*(?:(?P<im>[+-]?\s*(?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?)[ij])?\s*$"
)


def parse_complex(text: str) -> complex:
    """Parse ``a+bi``, ``a-bi``, ``a``, ``bi``, ``-i`` (``j`` also accepted)."""
    m = _COMPLEX_RE.match(text)
    if not text.strip() or m is None or (m.group("re") is None and m.group("im") is None):
        raise ValueError(f"cannot parse complex number {text!r}")
    re_part = float(m.group("re")) if m.group("re") else 0.0
    im_text = m.group("im")
    if im_text is None:
        im_part = 0.0
    else:
        im_text = im_text.replace(" ", "")
        im_part = float(im_text + "1") if im_text in ("", "+", "-") else float(im_text)
    return complex(re_part, im_part)


def format_complex(z: complex, digits: int = 15) -> str:
    """Render z as ``a+bi`` / ``a-bi`` with ``digits`` significant digits."""
    z = complex(z)
    re_s = f"{z.real:.{digits}g}"
    im = z.imag
    sign = "-" if (im < 0 or (im == 0 and math.copysign(1.0, im) < 0)) else "+"
    return f"{re_s}{sign}{abs(im):.{digits}g}i"
