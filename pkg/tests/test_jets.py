import math

import numpy as np
import pytest

import oracles
from glsbo.jets import (
    Jet,
    JetMatrix,
    MinorFunction,
    Scalar,
    VectorField,
    apply_bs_operator,
    apply_operator,
    apply_word,
    build_operator,
    fi_proportionality,
    jet_minors,
)
from glsbo.kernel import KernelSpec, eval_kernel, jet_kernel
from glsbo.matgroup import all_minors, sample_regular_matrix
from glsbo.params import ParamPoint, bs_polynomial, bs_target, f_polynomial, operator_identity


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b))


def entry(r, c):
    return lambda M: M.entries()[r - 1][c - 1]


def random_point(n, rng):
    return ParamPoint.make(rng.uniform(-1, 1, n + 1) + 1j * rng.uniform(-1, 1, n + 1),
                           rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n),
                           rng.integers(0, 2, n + 1), rng.integers(0, 2, n))


class TestJetArithmetic:
    def test_ring_laws(self):
        rng = np.random.default_rng(0)
        a, b, c = (Jet(rng.normal(size=8) + 1j * rng.normal(size=8)) for _ in range(3))
        assert np.allclose(((a * b) * c).c, (a * (b * c)).c)
        assert np.allclose((a * b).c, (b * a).c)
        assert np.allclose((a * (b + c)).c, (a * b + a * c).c)

    def test_nilpotent_square(self):
        # tau_1 squared vanishes
        t = Jet([0, 1])
        assert np.allclose((t * t).c, 0)

    def test_power_derivatives(self):
        # (x0 + tau1 + tau2)^s has mixed coefficient s (s - 1) x0^(s - 2)
        x0, s = 1.7, 0.3 + 0.4j
        x = Jet([x0, 1, 1, 0])
        y = x.power(s)
        assert rel(y.top, s * (s - 1) * x0 ** (s - 2)) < 1e-14
        z = Jet([-x0, 1, 1, 0]).signed_pow(s, 1)
        assert rel(z.top, -(s * (s - 1)) * x0 ** (s - 2)) < 1e-14

    def test_zero_base_is_error(self):
        with pytest.raises(ArithmeticError):
            Jet([0.0, 1.0]).signed_pow(0.5, 0)


class TestWords:
    def test_single_field_on_phi1(self):
        g = np.array([[0.3, -1.2], [0.7, 2.1]])
        val = apply_word([VectorField("right", 2, 1)], MinorFunction("phi", 1), g)
        assert abs(val - g[1, 1]) < 1e-15

    def test_empty_word(self):
        g = np.array([[0.3, -1.2], [0.7, 2.1]])
        assert abs(apply_word([], MinorFunction("phi", 2), g) - (-np.linalg.det(g))) < 1e-14

    def test_two_fields_on_square(self):
        g = np.array([[0.3, -1.2], [0.7, 2.1]])
        f = lambda M: entry(2, 1)(M) * entry(2, 1)(M)  # noqa: E731
        val = apply_word([VectorField("right", 2, 1), VectorField("right", 2, 1)], f, g)
        assert abs(val - 2 * g[1, 1] ** 2) < 1e-14

    def test_against_mpmath_derivatives(self):
        p = ParamPoint.make(oracles.LAM, oracles.NU, oracles.XI, oracles.ETA)
        spec = KernelSpec(p)
        f = lambda M: jet_kernel(spec, M)  # noqa: E731
        g = oracles.G3
        assert rel(eval_kernel(spec, g), oracles.KERNEL_N2) < 1e-13
        val = apply_word([VectorField("right", 2, 1), VectorField("right", 3, 2)], f, g)
        assert rel(val, oracles.JET_RR) < 1e-12
        val = apply_word([VectorField("left", 1, 2), VectorField("right", 3, 1)], f, g)
        assert rel(val, oracles.JET_LR) < 1e-12
        val = apply_word([VectorField("right", 2, 1), VectorField("right", 2, 1)], f, g)
        assert rel(val, oracles.JET_RR_SAME) < 1e-12

    def test_upper_right_fields_annihilate_kernel(self):
        p = ParamPoint.make(oracles.LAM, oracles.NU, oracles.XI, oracles.ETA)
        spec = KernelSpec(p)
        val = apply_word([VectorField("right", 1, 2)], lambda M: jet_kernel(spec, M), oracles.G3)
        assert abs(val) < 1e-13 * abs(oracles.KERNEL_N2)

    def test_chain_rule_vs_finite_differences(self):
        rng = np.random.default_rng(1)
        h = 1e-5
        for _ in range(10):
            n = int(rng.integers(1, 4))
            g = sample_regular_matrix(n, rng)
            p = random_point(n, rng)
            spec = KernelSpec(p)
            i, j = (int(v) for v in rng.integers(1, n + 2, 2))
            E = np.zeros((n + 1, n + 1))
            E[i - 1, j - 1] = 1
            val = apply_word([VectorField("right", i, j)], lambda M: jet_kernel(spec, M), g)
            fd = (eval_kernel(spec, g @ (np.eye(n + 1) + h * E))
                  - eval_kernel(spec, g @ (np.eye(n + 1) - h * E))) / (2 * h)
            assert abs(val - fd) <= 1e-7 * max(1.0, abs(eval_kernel(spec, g)))

    def test_word_associativity(self):
        rng = np.random.default_rng(2)
        g = sample_regular_matrix(2, rng)
        v1, v2 = VectorField("right", 3, 1), VectorField("left", 1, 2)
        f = lambda M: MinorFunction("psi", 2)(M) * MinorFunction("phi", 2)(M)  # noqa: E731
        inner = lambda M: apply_jet_word([v2], f, M)  # noqa: E731
        composed = apply_word([v1], inner, g)
        assert composed == apply_word([v1, v2], f, g)

    def test_scalar_letters(self):
        g = np.eye(2) + 0.5
        assert apply_word([Scalar(3.0)], MinorFunction("phi", 1), g) == 1.5


def apply_jet_word(word, f, M):
    """Apply a word on a jet matrix, returning the derivative as a jet of lower depth."""
    N = M
    for letter in word:
        N = N.extend(letter.kind, letter.i, letter.j)
    val = f(N)
    d = M.depth
    # the coefficient of the new variable, as a jet in the old variables
    return Jet(val.c[1 << d:])


def test_jet_minors_depth0_matches_plain():
    rng = np.random.default_rng(3)
    g = rng.normal(size=(4, 4))
    jp, js = jet_minors(JetMatrix(g))
    pp, ps = all_minors(g)
    assert np.allclose([x.value for x in jp], pp) and np.allclose([x.value for x in js], ps)


class TestOperators:
    def test_d1_n1_expansion(self):
        # the determinantal D_1 is minus (l1 - l2 - 1) g22 - g21 (g12 d/dg11 + g22 d/dg21),
        # tested on f = g11^2 g21 + g12 g22^3
        lam = [0.4 + 0.3j, -0.2 - 0.1j]
        p = ParamPoint.make(lam, [0.1])
        g = np.array([[0.3, -1.2], [0.7, 2.1]])
        (a, b), (c, d) = g
        f = lambda M: entry(1, 1)(M) * entry(1, 1)(M) * entry(2, 1)(M) + entry(1, 2)(M) * entry(2, 2)(M).power(3)  # noqa: E731
        fv = a * a * c + b * d ** 3
        d11, d21 = 2 * a * c, a * a
        expected = (lam[0] - lam[1] - 1) * d * fv - c * (b * d11 + d * d21)
        assert rel(apply_operator("D", 1, p, f, g), -expected) < 1e-14

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_orders_and_counts(self, n):
        p = ParamPoint.make(np.zeros(n + 1) + 0.1j, np.zeros(n) + 0.2j)
        for i in range(1, n + 1):
            op = build_operator("D", i, p)
            assert op.order() == i
            assert op.formal_term_count() == math.factorial(i + 1)
            assert build_operator("P", i, p).order() == 2 * i - 1
        for i in range(1, n):
            assert build_operator("C", i, p).order() == n - i
            assert build_operator("L", i, p).order() == 2 * i

    def test_index_range(self):
        p = ParamPoint.make([0, 0, 0], [0, 0])
        with pytest.raises(ValueError):
            build_operator("L", 2, p)
        with pytest.raises(ValueError):
            build_operator("X", 1, p)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_bernstein_sato_identities(self, n):
        rng = np.random.default_rng(40 + n)
        kinds = [("D", i) for i in range(1, n + 1)] + [("P", i) for i in range(1, n + 1)]
        kinds += [("L", i) for i in range(1, n)] + [("C", i) for i in range(1, n + 1)]
        for kind, i in kinds:
            for _ in range(3):
                p = random_point(n, rng)
                g = sample_regular_matrix(n, rng)
                factor, q = operator_identity(kind, i, p)
                lhs = apply_bs_operator(kind, i, p, g)
                assert rel(lhs, factor * eval_kernel(KernelSpec(q), g)) < 1e-8

    def test_n1_d_identity_target(self):
        p = ParamPoint.make([0.3 + 0.2j, -0.4 + 0.1j], [0.1 - 0.2j], [1, 0], [1])
        g = np.array([[0.3, -1.2], [0.7, 2.1]])
        q = bs_target("D", 1, p)
        assert q.lam[1] == p.lam[1] + 1 and q.xi == (1, 1)
        expected = bs_polynomial("D", 1, p) * eval_kernel(KernelSpec(q), g)
        assert rel(apply_bs_operator("D", 1, p, g), expected) < 1e-12

    @pytest.mark.parametrize("n", [1, 2])
    def test_ftilde_proportionality(self, n):
        rng = np.random.default_rng(50 + n)
        gs = [sample_regular_matrix(n, rng) for _ in range(3)]
        for i in range(1, n + 1):
            p = random_point(n, rng)
            res = fi_proportionality(i, p, gs)
            assert res.label == f"lambda+1-e{i}, nu+1"
            assert rel(res.constant, f_polynomial(i, p)) < 1e-8
