"""Tests for mean embeddings, inner products and the two MMD routes."""

import math

import numpy as np
import pytest

from mmdlab import (
    Kernel,
    SignedDiscreteMeasure,
    SupportSizeError,
    dirac,
    empty_measure,
    gaussian,
    inner,
    kme_eval,
    kme_probe,
    integrate,
    laplacian,
    mmd,
    mmd_detail,
    mmd_oracle,
    norm,
    self_inner_tolerance,
    shift_kernel,
)

EXP_HALF = math.exp(-0.5)


def brute_force_inner(k, mu, nu):
    """Independent double loop, scalar evaluations, plain running sum."""
    total = 0.0
    for a, w in zip(mu.atoms, mu.weights):
        for b, v in zip(nu.atoms, nu.weights):
            total += w * v * k(a, b)
    return total


def random_signed(rng, dim, max_atoms=12, lo=-2.0, hi=2.0):
    n = int(rng.integers(1, max_atoms + 1))
    return SignedDiscreteMeasure(
        rng.uniform(lo, hi, (n, dim)), rng.standard_normal(n), dim
    )


def random_probability(rng, dim, max_atoms=12):
    n = int(rng.integers(1, max_atoms + 1))
    w = rng.random(n)
    return SignedDiscreteMeasure(rng.uniform(-2, 2, (n, dim)), w / w.sum(), dim)


class TestKmeEval:
    def test_single_atom_is_kernel_value(self):
        k = gaussian(1.0)
        assert kme_eval(k, dirac(0.7), 0.2) == k(0.7, 0.2)

    def test_two_term_sum(self):
        k = gaussian(1.0)
        mu = SignedDiscreteMeasure(np.array([[0.0], [1.0]]), [0.5, 0.5], 1)
        expected = 0.5 + 0.5 * EXP_HALF  # oracle: explicit two-term sum
        assert kme_eval(k, mu, 0.0) == pytest.approx(expected, abs=1e-15)
        assert kme_eval(k, mu, 0.0) == pytest.approx(0.8032653298563167, abs=1e-12)

    def test_empty_measure_embeds_to_zero(self):
        assert kme_eval(gaussian(1.0), empty_measure(1), 0.0) == 0.0


class TestInner:
    def test_dirac_pair_is_kernel_value(self):
        k = gaussian(1.0)
        assert inner(k, dirac(0.0), dirac(1.0)) == k(0.0, 1.0)

    def test_against_null_measure(self):
        k = gaussian(1.0)
        assert inner(k, random_signed(np.random.default_rng(0), 1), empty_measure(1)) == 0.0

    def test_four_term_expansion(self):
        k = gaussian(1.0)
        mu = dirac(0.0) - dirac(1.0)
        expected = 1.0 - EXP_HALF - EXP_HALF + 1.0  # oracle: four explicit terms
        assert inner(k, mu, mu) == pytest.approx(expected, abs=1e-15)

    def test_symmetric_in_arguments_exactly(self):
        rng = np.random.default_rng(1)
        k = gaussian(1.0, dim=2)
        for _ in range(20):
            mu = random_signed(rng, 2)
            nu = random_signed(rng, 2)
            assert inner(k, mu, nu) == inner(k, nu, mu)

    def test_matches_brute_force_loop(self):
        rng = np.random.default_rng(2)
        k = laplacian(0.8, dim=2)
        for _ in range(10):
            mu = random_signed(rng, 2)
            nu = random_signed(rng, 2)
            assert inner(k, mu, nu) == pytest.approx(
                brute_force_inner(k, mu, nu), rel=1e-12, abs=1e-13
            )

    def test_self_inner_never_too_negative(self):
        rng = np.random.default_rng(3)
        k = gaussian(1.0, dim=3)
        for _ in range(30):
            mu = random_signed(rng, 3, max_atoms=30)
            assert inner(k, mu, mu) >= -self_inner_tolerance(mu, k.sup_bound)


class TestMmd:
    def test_identical_measures_give_zero(self):
        rng = np.random.default_rng(4)
        mu = random_signed(rng, 1)
        assert mmd(gaussian(1.0), mu, mu) == 0.0

    def test_closed_form_dirac_distance(self):
        value = mmd(gaussian(1.0), dirac(0.0), dirac(1.0))
        expected = math.sqrt(2.0 - 2.0 * EXP_HALF)
        assert value == pytest.approx(expected, abs=1e-15)
        assert value == pytest.approx(0.887095643419994, abs=1e-12)

    def test_symmetry(self):
        rng = np.random.default_rng(5)
        k = gaussian(1.0, dim=2)
        mu, nu = random_signed(rng, 2), random_signed(rng, 2)
        assert mmd(k, mu, nu) == mmd(k, nu, mu)

    def test_triangle_inequality_randomized(self):
        rng = np.random.default_rng(6)
        k = laplacian(1.0, dim=2)
        for _ in range(50):
            a, b, c = (random_signed(rng, 2) for _ in range(3))
            assert mmd(k, a, c) <= mmd(k, a, b) + mmd(k, b, c) + 1e-10

    def test_clamp_flag_reported_for_indefinite_kernel(self):
        # a deliberately non-PSD "kernel": negated gaussian
        g = gaussian(1.0)
        bad = Kernel(
            block_fn=lambda X, Y: -g.block_fn(X, Y),
            dim=1,
            sup_bound=1.0,
            claims_c0=True,
            descriptor={"family": "negated"},
        )
        detail = mmd_detail(bad, dirac(0.0), dirac(1.0))
        assert detail.clamped
        assert detail.value == 0.0
        assert detail.squared_raw < 0
        good = mmd_detail(g, dirac(0.0), dirac(1.0))
        assert not good.clamped
        assert good.kernel_descriptor == {"family": "gaussian", "sigma": 1.0, "dim": 1}


class TestOracle:
    def test_agrees_on_disjoint_supports(self):
        k = gaussian(1.0)
        a, b = dirac(0.0), dirac(1.0)
        assert mmd_oracle(k, a, b) == pytest.approx(mmd(k, a, b), abs=1e-15)

    def test_agrees_with_overlapping_supports(self):
        # cancellation path: the merged difference drops a shared atom
        k = gaussian(1.0)
        mu = dirac(0.0)
        nu = SignedDiscreteMeasure(np.array([[0.0], [1.0]]), [0.5, 0.5], 1)
        direct = mmd(k, mu, nu)
        via_merge = mmd_oracle(k, mu, nu)
        assert via_merge == pytest.approx(direct, rel=1e-12, abs=1e-13)

    def test_identical_measures_merge_to_empty(self):
        rng = np.random.default_rng(7)
        mu = random_signed(rng, 2)
        assert mmd_oracle(gaussian(1.0, dim=2), mu, mu) == 0.0

    def test_randomized_equivalence(self):
        rng = np.random.default_rng(8)
        for k in (gaussian(1.0, dim=2), laplacian(0.5, dim=2), shift_kernel(gaussian(1.0, dim=2), 1.0)):
            for _ in range(20):
                mu = random_signed(rng, 2, max_atoms=20)
                nu = random_signed(rng, 2, max_atoms=20)
                a = mmd(k, mu, nu)
                b = mmd_oracle(k, mu, nu)
                assert abs(a - b) <= 1e-10 * (1.0 + a)

    def test_support_limit_enforced(self):
        big = SignedDiscreteMeasure(
            np.arange(1501, dtype=float)[:, None], np.ones(1501), 1
        )
        other = SignedDiscreteMeasure(
            (np.arange(500, dtype=float) + 0.5)[:, None], np.ones(500), 1
        )
        with pytest.raises(SupportSizeError):
            mmd_oracle(gaussian(1.0), big, other)


class TestPettisIdentity:
    def test_integral_against_embedding_equals_inner(self):
        rng = np.random.default_rng(9)
        k = gaussian(1.0, dim=2)
        for _ in range(20):
            mu = random_signed(rng, 2)
            nu = random_signed(rng, 2)
            f_nu = kme_probe(k, nu)
            lhs = integrate(mu, f_nu)
            rhs = inner(k, mu, nu)
            assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-14)


class TestShiftAndNormBasics:
    def test_shift_invariance_on_probability_pairs(self):
        rng = np.random.default_rng(10)
        k = gaussian(1.0, dim=2)
        k1 = shift_kernel(k, 1.0)
        for _ in range(10):
            p = random_probability(rng, 2)
            q = random_probability(rng, 2)
            base = mmd(k, p, q)
            assert abs(mmd(k1, p, q) - base) <= 1e-12 * (1.0 + base)

    def test_norm_is_self_distance_to_null(self):
        rng = np.random.default_rng(11)
        k = gaussian(1.0)
        mu = random_signed(rng, 1)
        assert norm(k, mu) == pytest.approx(
            mmd(k, mu, empty_measure(1)), rel=1e-14, abs=1e-14
        )
