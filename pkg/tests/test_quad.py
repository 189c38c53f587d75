import math

import numpy as np
import pytest

import oracles
from glsbo.kernel import KernelSpec, c_constant, d_constant, eval_kernel
from glsbo.matgroup import sample_regular_matrix, z0
from glsbo.params import ParamPoint, weyl_act_g, weyl_act_h
from glsbo.quad import (
    AffinePowerProduct,
    DomainError,
    LineIntegrand,
    QuadratureError,
    apply_ks_S,
    apply_ks_T,
    apply_ks_word,
    convolution_closed_form,
    convolution_integral,
    integrate_line,
    residue_model,
    spherical_closed_form_n1,
    spherical_pairing,
)
from glsbo.verify import SuiteConfig, sample_s_window, sample_t_window


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b))


CFG = SuiteConfig("functional-identities")


class TestIntegrateLine:
    def test_cauchy(self):
        f = LineIntegrand(lambda x: 1 / (1 + x * x))
        assert abs(integrate_line(f).value - math.pi) < 1e-12

    def test_singular_at_origin(self):
        f = LineIntegrand(lambda x: np.abs(x) ** -0.5 / (1 + x * x), [0.0], -2.5)
        assert abs(integrate_line(f).value - math.pi * math.sqrt(2)) < 1e-11

    def test_slow_decay_refused(self):
        with pytest.raises(DomainError):
            integrate_line(LineIntegrand(lambda x: 1 / (1 + np.abs(x)), decay_exponent=-1.0))

    def test_tolerance_failure_carries_estimate(self):
        # a discontinuity away from the declared singular points cannot be resolved
        f = LineIntegrand(lambda x: np.where(np.abs(x - 0.3) < 1e-3, 1e6, 0.0) + 1 / (1 + x * x))
        with pytest.raises(QuadratureError) as info:
            integrate_line(f, tol=1e-14, budget=256)
        assert info.value.best is not None

    def test_two_term_tail_model(self):
        # beyond max_abs the integrand is replaced by |x|^p (c0 + c1/|x|) fitted at max_abs and 2 max_abs
        f = lambda x: (1 + x * x) ** -0.65 * (1 + 0.5 / (1 + np.abs(x)))  # noqa: E731
        exact = integrate_line(LineIntegrand(f, [0.0], -1.3), tol=1e-12).value
        errs = []
        for terms in (1, 2):
            g = LineIntegrand(f, [0.0], -1.3, max_abs=100.0, decay_power=-1.3, tail_terms=terms)
            errs.append(abs(integrate_line(g, tol=1e-6).value - exact))
        assert errs[1] < 0.02 * errs[0] and errs[1] < 1e-4

    def test_error_estimate_is_honest(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            a, b, c, d = rng.uniform(-2, 2, 4)
            alpha, beta = (complex(rng.uniform(-0.7, 0.3), rng.normal()) for _ in range(2))
            if min(abs(a), abs(c), abs(a * d - b * c)) < 0.05 or (alpha + beta).real > -1.2:
                continue
            eps, xi = (int(v) for v in rng.integers(0, 2, 2))
            prod = AffinePowerProduct([(b, a, alpha, eps), (d, c, beta, xi)])
            res = integrate_line(prod.integrand(), tol=1e-6)
            exact = convolution_closed_form(a, b, c, d, alpha, beta, eps, xi)
            assert abs(res.value - exact) <= 3 * res.err_estimate + 1e-15 * abs(exact)


class TestConvolution:
    @pytest.mark.parametrize("k", range(4))
    def test_against_mpmath(self, k):
        # int |x|^alpha_e |1 - x|^beta_xi dx, and |x - 1| differs by (-1)^xi
        alpha, beta, e, x = oracles.CONV_POINTS[k]
        val = convolution_integral(1, 0, -1, 1, alpha, beta, e, x)
        assert rel(val, oracles.CONV[k]) < 1e-9
        val = convolution_integral(1, 0, 1, -1, alpha, beta, e, x)
        assert rel((-1) ** x * val, oracles.CONV[k]) < 1e-9

    def test_random_configurations(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            a, b, c, d = rng.choice([-1, 1], 4) * rng.uniform(0.3, 2, 4)
            if abs(a * d - b * c) < 0.2:
                continue
            alpha, beta = complex(-0.7, rng.normal()), complex(-0.65, rng.normal())
            eps, xi = (int(v) for v in rng.integers(0, 2, 2))
            lhs = convolution_integral(a, b, c, d, alpha, beta, eps, xi)
            assert rel(lhs, convolution_closed_form(a, b, c, d, alpha, beta, eps, xi)) < 1e-8

    @pytest.mark.parametrize("args", [
        (0, 1, 1, 2, -0.6, -0.6, 0, 0), (1, 1, 2, 2, -0.6, -0.6, 0, 0),
        (1, 0, 1, 1, -1.2, -0.6, 0, 0), (1, 0, 1, 1, -0.2, -0.3, 0, 0),
    ])
    def test_domain(self, args):
        with pytest.raises(DomainError):
            convolution_integral(*args)


class TestKnappStein:
    @pytest.mark.parametrize("n", [1, 2])
    def test_g_side(self, n):
        rng = np.random.default_rng(10 + n)
        for i in range(1, n + 1):
            p = sample_t_window(n, i, rng, CFG)
            g = sample_regular_matrix(n, rng)
            lhs = apply_ks_T(i, p, g)
            rhs = c_constant(i, p).value * eval_kernel(KernelSpec(weyl_act_g(p, i)), g)
            assert rel(lhs, rhs) < 1e-7

    def test_h_side(self):
        rng = np.random.default_rng(20)
        p = sample_s_window(2, 1, rng, CFG)
        g = sample_regular_matrix(2, rng)
        lhs = apply_ks_S(1, p, g)
        rhs = d_constant(1, p).value * eval_kernel(KernelSpec(weyl_act_h(p, 1)), g)
        assert rel(lhs, rhs) < 1e-7

    def test_window_violation(self):
        p = ParamPoint.make([0.5, -0.5], [0.0])
        with pytest.raises(DomainError):
            apply_ks_T(1, p, z0(1))
        with pytest.raises(DomainError):
            apply_ks_T(2, p, z0(1))

    def test_word_length_limit(self):
        p = ParamPoint.make([0, 0, 0, 0], [0, 0, 0])
        with pytest.raises(DomainError):
            apply_ks_word([1, 2, 3], p, z0(3))
        assert apply_ks_word([], p, z0(3)) == pytest.approx(1)


class TestSpherical:
    def test_n1_mpmath(self):
        val = spherical_pairing(1, [0.6 + 0.2j, -0.6], [0.1 - 0.3j], tol=1e-12)
        assert rel(val, oracles.SPHERICAL_N1) < 1e-10

    def test_n1_closed_form(self):
        rng = np.random.default_rng(30)
        for _ in range(5):
            lam = [complex(rng.uniform(0.2, 0.6), rng.normal()), complex(rng.uniform(-0.6, -0.2), rng.normal())]
            nu = [complex(rng.uniform(-0.1, 0.1), rng.normal())]
            val = spherical_pairing(1, lam, nu, tol=1e-11)
            assert rel(val, spherical_closed_form_n1(lam, nu)) < 1e-9

    def test_not_integrable(self):
        with pytest.raises(DomainError):
            spherical_pairing(1, [-0.8, 0], [0.0])

    def test_n3_unsupported(self):
        with pytest.raises(DomainError):
            spherical_pairing(3, [0.1, 0, 0, -0.1], [0, 0, 0])


class TestResidueModel:
    def test_rational_mpmath(self):
        val = residue_model(-0.5, lambda x: (1 + x * x) ** -2)
        assert rel(val, oracles.RESIDUE_RATIONAL) < 1e-10

    def test_odd_function_vanishes(self):
        assert abs(residue_model(-0.3, lambda x: x / (1 + x ** 4))) < 1e-14

    @pytest.mark.parametrize("t", [0.0, -0.5, -0.99])
    def test_gaussian(self, t):
        # int |x|^t exp(-pi x^2) dx = pi^{-(t+1)/2} Gamma((t+1)/2)
        val = residue_model(t, lambda x: np.exp(-math.pi * x * x))
        assert abs(val - math.pi ** (-(t + 1) / 2)) < 1e-10

    def test_limit_is_phi0(self):
        # as t -> -1 the pole of the integral cancels against Gamma((t+1)/2), leaving phi(0)
        phi = lambda x: 3.0 / (1 + x * x)  # noqa: E731
        vals = [residue_model(t, phi) for t in (-0.9, -0.99, -0.999)]
        errs = [abs(v - 3.0) for v in vals]
        assert errs[2] < errs[1] < errs[0] and errs[2] < 1e-2

    def test_domain(self):
        with pytest.raises(DomainError):
            residue_model(-1.0, lambda x: x)
