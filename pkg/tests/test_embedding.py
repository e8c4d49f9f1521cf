import math

import numpy as np
import pytest

from distembed import (
    Atom,
    EmbeddedFunction,
    GeneralizedMeasure,
    InvalidArgumentError,
    Kernel,
    MultiIndex,
    NumericalInconsistencyError,
    UnsupportedOrderError,
    brownian_kernel,
    constant_kernel,
    cosine_kernel,
    distance,
    embed_eval,
    embed_eval_deriv,
    gaussian_kernel,
    gm_derivative,
    gm_dipole_quotient,
    gm_linear_combine,
    gm_point_mass,
    gm_total_mass,
    gram_entry,
    inner,
    inverse_multiquadric_kernel,
    kernel_center,
    kernel_deriv,
    kernel_derived,
    kernel_deriv_fd,
    kernel_eval,
    kernel_shift_constant,
    laplace_kernel,
    norm,
    sinc_kernel,
    spd_check,
)
from conftest import random_measure, random_order0_measure

GAUSS = gaussian_kernel(1)


def delta(x):
    return gm_point_mass(x)


def ddelta(x, order=1):
    return gm_derivative(gm_point_mass(x), order)


class TestGramEntry:
    def test_point_pair(self):
        a = Atom(1.0, MultiIndex((0,)), (0.0,))
        assert gram_entry(GAUSS, a, a) == 1.0

    def test_mixed_with_point_is_odd(self):
        a = Atom(1.0, MultiIndex((1,)), (0.0,))
        b = Atom(1.0, MultiIndex((0,)), (0.0,))
        assert gram_entry(GAUSS, a, b) == 0.0

    def test_derivative_pair(self):
        # oracle: finite differences of d^(1,1) exp(-(x-y)^2) at the origin
        a = Atom(1.0, MultiIndex((1,)), (0.0,))
        oracle = kernel_deriv_fd(GAUSS, 1, 1, 0.0, 0.0, 1e-3, richardson=1)
        assert gram_entry(GAUSS, a, a) == pytest.approx(oracle, abs=1e-8)
        assert gram_entry(GAUSS, a, a) == pytest.approx(2.0, abs=1e-12)

    def test_weights_enter_sesquilinearly(self):
        a = Atom(2.0 + 1.0j, MultiIndex((0,)), (0.0,))
        b = Atom(0.0 + 3.0j, MultiIndex((0,)), (1.0,))
        expected = (2.0 + 1.0j) * np.conj(3.0j) * math.exp(-1.0)
        assert gram_entry(GAUSS, a, b) == pytest.approx(expected, abs=1e-15)

    def test_order_beyond_smoothness(self):
        a = Atom(1.0, MultiIndex((1,)), (0.0,))
        with pytest.raises(UnsupportedOrderError):
            gram_entry(laplace_kernel(1), a, a)


class TestInner:
    def test_single_pair(self):
        assert inner(GAUSS, delta(0.0), delta(1.0)) == pytest.approx(math.exp(-1.0))

    def test_self_inner_real_nonnegative(self, rng):
        for _ in range(100):
            d = random_measure(rng)
            v = inner(GAUSS, d, d)
            assert abs(v.imag) <= 1e-10 * (1.0 + abs(v))
            assert v.real >= -1e-10 * (1.0 + abs(v))

    def test_derivative_cross_term_against_fd(self):
        # <emb(d delta_0), emb(delta_y)> = -d^(0,1) k(y, 0); at y = 1 the
        # finite-difference oracle gives -2 e^{-1}.
        got = inner(GAUSS, ddelta(0.0), delta(1.0))
        oracle = -kernel_deriv_fd(GAUSS, 0, 1, 1.0, 0.0, 1e-4, richardson=1)
        assert got == pytest.approx(oracle, abs=1e-9)
        assert abs(got) == pytest.approx(2.0 * math.exp(-1.0), abs=1e-12)

    def test_hermitian(self, rng):
        for _ in range(50):
            d = random_measure(rng)
            t = random_measure(rng)
            lhs = inner(GAUSS, d, t)
            rhs = np.conj(inner(GAUSS, t, d))
            assert abs(lhs - rhs) <= 1e-10 * (1.0 + abs(lhs))

    def test_cauchy_schwarz(self, rng):
        for _ in range(50):
            d = random_measure(rng)
            t = random_measure(rng)
            bound = (1.0 + 1e-10) * inner(GAUSS, d, d).real * inner(GAUSS, t, t).real
            assert abs(inner(GAUSS, d, t)) ** 2 <= bound


class TestNormDistance:
    def test_identical_arguments(self, rng):
        for x in rng.uniform(-3, 3, 5):
            assert distance(GAUSS, delta(x), delta(x)) == 0.0

    def test_point_mass_norm(self):
        assert norm(GAUSS, delta(0.0)) == 1.0

    def test_cosine_two_point_difference(self):
        # 2x2 Gram expansion oracle: cos 0 - 2 cos pi + cos 0 = 4
        k = cosine_kernel()
        d = gm_linear_combine([(1.0, delta(0.0)), (-1.0, delta(math.pi))])
        brute = (
            kernel_eval(k, 0.0, 0.0)
            - kernel_eval(k, 0.0, math.pi)
            - kernel_eval(k, math.pi, 0.0)
            + kernel_eval(k, math.pi, math.pi)
        )
        assert brute == pytest.approx(4.0, abs=1e-12)
        assert norm(k, d) ** 2 == pytest.approx(4.0, abs=1e-12)

    def test_non_positive_kernel_is_reported(self):
        broken = Kernel(1, 0, lambda X, Y: -gaussian_kernel(1).pair_eval(X, Y))
        with pytest.raises(NumericalInconsistencyError):
            norm(broken, delta(0.0))


class TestEmbedEval:
    def test_reproducing_property_exact(self, rng):
        catalog = (
            GAUSS,
            laplace_kernel(1),
            sinc_kernel(),
            cosine_kernel(),
            inverse_multiquadric_kernel(),
            constant_kernel(1),
            brownian_kernel(),
        )
        for k in catalog:
            for _ in range(30):
                x, y = rng.uniform(-3, 3, 2)
                assert embed_eval(k, delta(x), y) == kernel_eval(k, y, x)

    def test_derivative_point_mass(self):
        got = embed_eval(GAUSS, ddelta(0.0), 1.0)
        assert got == pytest.approx(-2.0 * math.exp(-1.0), abs=1e-12)
        assert got == pytest.approx(-0.735759, abs=1e-6)

    def test_zero_measure(self):
        zero = gm_linear_combine([(1.0, delta(0.5)), (-1.0, delta(0.5))])
        assert embed_eval(GAUSS, zero, 1.0) == 0.0

    def test_differentiation_identity_exact(self, rng):
        # emb(d^p delta_x)(y) == (-1)^|p| d^(0,p) k(y, x) by construction ...
        for _ in range(40):
            p = int(rng.integers(0, 3))
            x, y = rng.uniform(-2, 2, 2)
            lhs = embed_eval(GAUSS, ddelta(x, p), y)
            assert lhs == (-1.0) ** p * kernel_deriv(GAUSS, 0, p, y, x)

    def test_differentiation_identity_against_fd(self, rng):
        # ... and against the independent x-slot finite difference of k(y, .).
        steps = {1: 1e-4, 2: 1e-3}
        for _ in range(40):
            p = int(rng.integers(1, 3))
            x, y = rng.uniform(-2, 2, 2)
            lhs = embed_eval(GAUSS, ddelta(x, p), y)
            fd = kernel_deriv_fd(GAUSS, 0, p, y, x, steps[p], richardson=1)
            assert abs(lhs - (-1.0) ** p * fd) <= 1e-5 * (1.0 + abs(lhs))


class TestEmbedEvalDeriv:
    def test_zero_order_reduces(self, rng):
        d = random_measure(rng)
        y = 0.7
        assert embed_eval_deriv(GAUSS, d, 0, y) == embed_eval(GAUSS, d, y)

    def test_odd_symmetry(self):
        assert embed_eval_deriv(GAUSS, delta(0.0), 1, 0.0) == 0.0

    def test_matches_fd_of_embed_eval(self, rng):
        d = random_measure(rng, max_order=1)
        for _ in range(20):
            y = float(rng.uniform(-2, 2))
            h = 1e-4
            fd = (embed_eval(GAUSS, d, y + h) - embed_eval(GAUSS, d, y - h)) / (2 * h)
            got = embed_eval_deriv(GAUSS, d, 1, y)
            assert abs(got - fd) <= 1e-6 * (1.0 + abs(got))

    def test_stationary_commutation(self, rng):
        # For stationary kernels, embedding the derivative equals
        # differentiating the embedding.
        for k in (GAUSS, sinc_kernel(), cosine_kernel()):
            for _ in range(20):
                d = random_measure(rng, max_order=1)
                p = (1,)
                y = float(rng.uniform(-2, 2))
                lhs = embed_eval(k, gm_derivative(d, p), y)
                rhs = embed_eval_deriv(k, d, p, y)
                assert abs(lhs - rhs) <= 1e-10 * (1.0 + abs(lhs))

    def test_order_budget(self):
        base = gaussian_kernel(1)
        k = Kernel(1, 2, base.pair_eval, base.pair_deriv)
        d = ddelta(0.0, 1)
        assert embed_eval_deriv(k, d, 1, 0.5) is not None
        with pytest.raises(UnsupportedOrderError):
            embed_eval_deriv(k, d, 2, 0.5)


def test_dipole_quotient_converges_to_derivative():
    # Q(h) = || (delta_h - delta_0)/h + d delta_0 ||; first-order convergence
    # means halving h halves Q.
    qs = {}
    for h in (1e-2, 5e-3, 2.5e-3, 1.25e-3):
        d = gm_linear_combine([(1.0, gm_dipole_quotient(0.0, 0, h)), (1.0, ddelta(0.0))])
        qs[h] = norm(GAUSS, d)
    for h in (1e-2, 5e-3, 2.5e-3):
        assert 0.4 <= qs[h / 2] / qs[h] <= 0.6


def test_constant_shift_identity(rng):
    # ||mu||^2 under k + eps^2 grows by exactly eps^2 |mu(1)|^2.
    for eps in (0.1, 1.0, 10.0):
        shifted = kernel_shift_constant(GAUSS, eps**2)
        for _ in range(20):
            mu = random_order0_measure(rng)
            lhs = norm(shifted, mu) ** 2
            rhs = norm(GAUSS, mu) ** 2 + eps**2 * abs(gm_total_mass(mu)) ** 2
            assert abs(lhs - rhs) <= 1e-10 * (1.0 + abs(lhs))


class TestCentering:
    def test_metric_invariance_on_equal_mass_pairs(self, rng):
        nu0 = random_order0_measure(rng, complex_weights=False)
        k0 = kernel_center(GAUSS, nu0)
        for _ in range(30):
            mu = random_order0_measure(rng)
            tau = random_order0_measure(rng)
            # rescale tau to match mu's total mass
            m_mu, m_tau = gm_total_mass(mu), gm_total_mass(tau)
            if abs(m_tau) < 1e-6:
                continue
            tau = gm_linear_combine([(m_mu / m_tau, tau)])
            d_plain = distance(GAUSS, mu, tau)
            d_centered = distance(k0, mu, tau)
            assert abs(d_plain - d_centered) <= 1e-10 * (1.0 + d_plain)

    def test_centering_measure_embeds_to_null(self):
        # A characteristic kernel that is not strictly positive definite:
        # the centered kernel annihilates its centering point mass.
        nu0 = gm_point_mass(0.7)
        k0 = kernel_center(GAUSS, nu0)
        assert norm(k0, nu0) == 0.0
        assert norm(k0, gm_point_mass(-1.3)) > 0.1


def test_derivative_isometry(rng):
    # Order-1 Gram sums under k coincide with order-0 Gram sums under the
    # kernel d^(1,1) k registered as a kernel of its own.
    dk = kernel_derived(GAUSS, 1)
    for _ in range(20):
        pts = rng.uniform(-2, 2, 5)
        coeffs = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        first_order = gm_linear_combine(
            [(c, ddelta(float(x))) for c, x in zip(coeffs, pts)]
        )
        order_zero = gm_linear_combine(
            [(c, delta(float(x))) for c, x in zip(coeffs, pts)]
        )
        lhs = inner(GAUSS, first_order, first_order)
        rhs = inner(dk, order_zero, order_zero)
        assert abs(lhs - rhs) <= 1e-10 * (1.0 + abs(lhs))


class TestSpdCheck:
    def test_gaussian_points_positive_definite(self, rng):
        pts = rng.uniform(-10, 10, 20)
        atoms = [Atom(1.0, MultiIndex((0,)), (float(x),)) for x in pts]
        diag = spd_check(GAUSS, atoms, 1e-10)
        assert diag.verdict == "positive-definite"
        assert diag.gram_size == 20

    def test_constant_kernel_degenerate(self):
        atoms = [Atom(1.0, MultiIndex((0,)), (0.0,)), Atom(1.0, MultiIndex((0,)), (1.0,))]
        diag = spd_check(constant_kernel(1), atoms, 1e-10)
        assert diag.verdict == "semidefinite-degenerate"
        assert diag.min_eigenvalue == pytest.approx(0.0, abs=1e-12)

    def test_cosine_kernel_rank_two(self, rng):
        # cos(x - y) = cos x cos y + sin x sin y: rank <= 2 on any point set.
        pts = rng.uniform(-3, 3, 4)
        atoms = [Atom(1.0, MultiIndex((0,)), (float(x),)) for x in pts]
        diag = spd_check(cosine_kernel(), atoms, 1e-10)
        assert diag.verdict == "semidefinite-degenerate"

    def test_broken_kernel_flagged_indefinite(self):
        broken = Kernel(1, 0, lambda X, Y: -gaussian_kernel(1).pair_eval(X, Y))
        atoms = [Atom(1.0, MultiIndex((0,)), (0.0,))]
        assert spd_check(broken, atoms, 1e-10).verdict == "indefinite-numerical"

    def test_bad_arguments(self):
        with pytest.raises(InvalidArgumentError):
            spd_check(GAUSS, [], 1e-10)
        atoms = [Atom(1.0, MultiIndex((0,)), (0.0,))]
        with pytest.raises(InvalidArgumentError):
            spd_check(GAUSS, atoms, 0.0)


class TestEmbeddedFunction:
    def test_call_and_derivative(self):
        f = EmbeddedFunction(GAUSS, ddelta(0.0))
        assert f(1.0) == embed_eval(GAUSS, ddelta(0.0), 1.0)
        assert f.derivative(1, 0.5) == embed_eval_deriv(GAUSS, ddelta(0.0), 1, 0.5)
        assert f.norm() == pytest.approx(math.sqrt(2.0))

    def test_order_checked_at_construction(self):
        with pytest.raises(UnsupportedOrderError):
            EmbeddedFunction(laplace_kernel(1), ddelta(0.0))


def test_unsupported_orders_surface_in_inner():
    with pytest.raises(UnsupportedOrderError):
        inner(brownian_kernel(), ddelta(1.0), delta(1.0))


def test_inner_is_bitwise_deterministic(rng):
    # fixed summation order over the canonical atom ordering
    d = random_measure(rng, max_order=2, max_atoms=12)
    t = random_measure(rng, max_order=2, max_atoms=12)
    first = inner(GAUSS, d, t)
    assert all(inner(GAUSS, d, t) == first for _ in range(3))
