"""Tests for kernel construction, algebra and structural probes."""

import math

import numpy as np
import pytest

from mmdlab import (
    C0_BUMP_SUP,
    DimensionMismatchError,
    MeasureError,
    ParameterError,
    ScalarField,
    c0_bump_at,
    c0_null_at,
    c0_probe,
    center_kernel,
    dirac,
    gaussian,
    gram,
    inverse_multiquadric,
    laplacian,
    make_base_kernel,
    psd_tolerance,
    saturating_at,
    scale_kernel,
    shift_kernel,
)

# closed forms computed independently of the library (math.exp, not np.exp)
EXP_HALF = math.exp(-0.5)
EXP_TWO = math.exp(-2.0)


def random_points(rng, n, dim, lo=-3.0, hi=3.0):
    return rng.uniform(lo, hi, (n, dim))


def all_kernel_specimens(dim=2):
    """One kernel of every construction, for cross-cutting invariants."""
    base = gaussian(1.0, dim=dim)
    p = dirac(np.zeros(dim))
    return {
        "gaussian": base,
        "laplacian": laplacian(0.7, dim=dim),
        "imq": inverse_multiquadric(1.0, 0.5, dim=dim),
        "shift": shift_kernel(base, 1.0),
        "scale": scale_kernel(base, c0_bump_at(np.zeros(dim))),
        "center0": center_kernel(base, p, 0.0),
        "center1": center_kernel(base, p, 1.0),
    }


class TestBaseFamilies:
    def test_gaussian_diagonal_is_one(self):
        k = gaussian(1.0)
        assert k(0.0, 0.0) == 1.0

    def test_gaussian_closed_form(self):
        k = gaussian(1.0)
        assert k(0.0, 1.0) == pytest.approx(EXP_HALF, abs=1e-15)
        assert k(0.0, 1.0) == pytest.approx(0.6065306597126334, abs=1e-12)

    def test_laplacian_closed_form(self):
        k = laplacian(1.0)
        assert k(0.0, 2.0) == pytest.approx(EXP_TWO, abs=1e-15)
        assert k(0.0, 2.0) == pytest.approx(0.1353352832366127, abs=1e-12)

    def test_imq_diagonal_and_decay(self):
        k = inverse_multiquadric(1.0, 0.5)
        assert k(3.0, 3.0) == 1.0
        # (1 + 4)^(-1/2), computed independently
        assert k(0.0, 2.0) == pytest.approx(5.0**-0.5, abs=1e-15)

    def test_all_bases_claim_c0_and_unit_bound(self):
        for k in (gaussian(2.0), laplacian(0.5), inverse_multiquadric(2.0, 1.0)):
            assert k.claims_c0
            assert k.sup_bound == 1.0

    @pytest.mark.parametrize(
        "bad",
        [
            lambda: gaussian(0.0),
            lambda: gaussian(-1.0),
            lambda: laplacian(0.0),
            lambda: inverse_multiquadric(-1.0, 0.5),
            lambda: inverse_multiquadric(1.0, 0.0),
        ],
    )
    def test_nonpositive_parameters_rejected(self, bad):
        with pytest.raises(ParameterError):
            bad()

    def test_make_base_kernel_dispatch(self):
        k = make_base_kernel("laplacian", dim=2, gamma=0.5)
        assert k.descriptor["family"] == "laplacian"
        assert k.dim == 2
        with pytest.raises(ParameterError):
            make_base_kernel("matern", dim=1)


class TestSymmetryAndBounds:
    def test_symmetry_is_exact_for_every_construction(self):
        rng = np.random.default_rng(0)
        for name, k in all_kernel_specimens().items():
            for _ in range(25):
                x = rng.uniform(-3, 3, k.dim)
                y = rng.uniform(-3, 3, k.dim)
                assert k(x, y) == k(y, x), name

    def test_sampled_values_respect_sup_bound(self):
        rng = np.random.default_rng(1)
        for name, k in all_kernel_specimens().items():
            pts = random_points(rng, 40, k.dim)
            G = gram(k, pts)
            assert np.max(np.abs(G)) <= k.sup_bound + 1e-12, name


class TestShift:
    def test_shift_adds_constant(self):
        k = shift_kernel(gaussian(1.0), 1.0)
        assert k(0.0, 0.0) == 2.0

    def test_zero_shift_is_identity_pointwise(self):
        base = gaussian(1.0)
        k = shift_kernel(base, 0.0)
        grid = np.linspace(-4, 4, 33)[:, None]
        assert np.array_equal(gram(k, grid), gram(base, grid))
        assert k.claims_c0

    def test_negative_shift_rejected(self):
        with pytest.raises(ParameterError):
            shift_kernel(gaussian(1.0), -0.5)

    def test_positive_shift_drops_c0_claim_and_raises_bound(self):
        k = shift_kernel(gaussian(1.0), 1.0)
        assert not k.claims_c0
        assert k.sup_bound == 2.0


class TestScale:
    def test_zero_of_field_kills_row(self):
        k = scale_kernel(gaussian(1.0), c0_bump_at([0.0]))
        for y in (-2.0, 0.5, 7.0):
            assert k(0.0, y) == 0.0

    def test_matches_manual_product(self):
        # g(x) = exp(-x^2): value at (1, 1) is exp(-1) * 1 * exp(-1)
        g = ScalarField(
            fn=lambda X: np.exp(-(X**2).sum(axis=1)),
            dim=1,
            is_c0=True,
            sup=1.0,
        )
        k = scale_kernel(gaussian(1.0), g)
        assert k(1.0, 1.0) == pytest.approx(math.exp(-1.0) ** 2, abs=1e-15)
        assert k(1.0, 1.0) == pytest.approx(EXP_TWO, abs=1e-12)

    def test_metadata_propagation(self):
        base = gaussian(1.0)
        g = c0_bump_at([0.0])
        k = scale_kernel(base, g)
        assert k.claims_c0
        assert k.sup_bound == pytest.approx(C0_BUMP_SUP**2, rel=1e-12)
        undeclared = ScalarField(fn=lambda X: np.ones(X.shape[0]), dim=1, is_c0=False)
        assert scale_kernel(base, undeclared).sup_bound == math.inf

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            scale_kernel(gaussian(1.0, dim=2), c0_bump_at([0.0]))


class TestCenter:
    def test_expanded_four_term_value(self):
        # <delta_1 - delta_0, delta_1 - delta_0> = k(1,1) - 2 k(1,0) + k(0,0)
        expected = 1.0 - 2.0 * EXP_HALF + 1.0
        k = center_kernel(gaussian(1.0), dirac(0.0), 0.0)
        assert k(1.0, 1.0) == pytest.approx(expected, abs=1e-14)
        assert k(1.0, 1.0) == pytest.approx(0.7869386805747332, abs=1e-12)

    def test_offset_adds_constant(self):
        k0 = center_kernel(gaussian(1.0), dirac(0.0), 0.0)
        k1 = center_kernel(gaussian(1.0), dirac(0.0), 1.0)
        assert k1(0.3, -0.7) == pytest.approx(k0(0.3, -0.7) + 1.0, abs=1e-15)

    def test_requires_probability_measure(self):
        signed = dirac(0.0) - dirac(1.0)
        with pytest.raises(MeasureError):
            center_kernel(gaussian(1.0), signed, 0.0)
        with pytest.raises(ParameterError):
            center_kernel(gaussian(1.0), dirac(0.0), -0.1)

    def test_gram_exactly_symmetric(self):
        rng = np.random.default_rng(2)
        p_atoms = rng.uniform(-1, 1, (5, 2))
        w = rng.random(5)
        from mmdlab import SignedDiscreteMeasure

        p = SignedDiscreteMeasure(p_atoms, w / w.sum(), 2)
        k = center_kernel(gaussian(1.0, dim=2), p, 0.5)
        pts = random_points(rng, 30, 2)
        G = gram(k, pts)
        assert np.array_equal(G, G.T)


class TestC0Probe:
    def test_gaussian_trace_matches_closed_form(self):
        trace = c0_probe(gaussian(1.0), 0.0, radii=[1.0, 2.0, 4.0])
        expected = [math.exp(-0.5), math.exp(-2.0), math.exp(-8.0)]
        np.testing.assert_allclose(trace.values, expected, atol=1e-15)
        assert trace.passed  # e^-8 ~ 3.4e-4 < 1e-3

    def test_shifted_kernel_never_decays(self):
        trace = c0_probe(shift_kernel(gaussian(1.0), 1.0), 0.0, radii=[1.0, 4.0, 16.0])
        assert np.all(trace.values >= 1.0)
        assert not trace.passed

    def test_laplacian_trace_monotone(self):
        trace = c0_probe(laplacian(1.0), 0.0, radii=list(range(1, 21)))
        assert np.all(np.diff(trace.values) < 0)

    def test_validation(self):
        k = gaussian(1.0)
        with pytest.raises(ParameterError):
            c0_probe(k, 0.0, radii=[])
        with pytest.raises(ParameterError):
            c0_probe(k, 0.0, radii=[2.0, 1.0])
        with pytest.raises(ParameterError):
            c0_probe(k, 0.0, radii=[1.0], samples_per_radius=0)


class TestGram:
    def test_singleton(self):
        k = gaussian(1.0)
        G = gram(k, [[0.5]], [[0.5]])
        assert G.shape == (1, 1) and G[0, 0] == 1.0

    def test_exact_symmetry(self):
        rng = np.random.default_rng(3)
        pts = random_points(rng, 50, 3)
        G = gram(gaussian(1.0, dim=3), pts)
        assert np.max(np.abs(G - G.T)) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            gram(gaussian(1.0, dim=2), [[0.0], [1.0]])

    def test_min_eigenvalue_within_tolerance(self):
        rng = np.random.default_rng(4)
        pts = random_points(rng, 50, 2)
        k = gaussian(1.0, dim=2)
        G = gram(k, pts)
        min_eig = float(np.linalg.eigvalsh(G)[0])
        assert min_eig >= -psd_tolerance(50, k.sup_bound)
        assert min_eig >= -1e-8


class TestScalarFields:
    def test_bump_field_zero_only_at_xi(self):
        g = c0_bump_at([1.0, -1.0])
        assert g([1.0, -1.0]) == 0.0
        rng = np.random.default_rng(5)
        pts = random_points(rng, 50, 2)
        vals = g.values(pts)
        assert np.all(vals > 0)

    def test_bump_field_decays_and_respects_sup(self):
        g = c0_bump_at([0.0])
        assert g([100.0]) < g([10.0]) < g([2.0 ** 0.25 * 1.0001]) <= C0_BUMP_SUP + 1e-12
        # declared sup is attained at |x - xi| = 2^(1/4)
        assert g([2.0**0.25]) == pytest.approx(C0_BUMP_SUP, abs=1e-12)

    def test_null_field_zeroes_every_listed_point(self):
        g = c0_null_at([[0.0], [2.0]])
        assert g([0.0]) == 0.0 and g([2.0]) == 0.0
        assert g([1.0]) > 0

    def test_saturating_field_is_not_c0(self):
        g = saturating_at([0.0])
        assert not g.is_c0
        assert g([0.0]) == 0.0
        assert g([50.0]) == pytest.approx(1.0, abs=1e-12)


def test_descriptor_tree_survives_composition():
    k = shift_kernel(scale_kernel(gaussian(1.0), c0_bump_at([0.0])), 1.0)
    d = k.descriptor
    assert d["op"] == "shift" and d["c"] == 1.0
    assert d["child"]["op"] == "scale"
    assert d["child"]["field"]["g"] == "c0_bump_at"
    assert d["child"]["child"] == {"family": "gaussian", "sigma": 1.0, "dim": 1}
