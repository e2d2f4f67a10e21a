import math

import numpy as np
import pytest

from simulmeas import protocol, qmath
from simulmeas.errors import DegenerateBasisError, RescalingSingularError, UsageError
from simulmeas.protocol import (
    decompose,
    entangle,
    inferred_means,
    joint_probabilities,
    make_equatorial,
    max_product,
    min_product,
    numeric_c_scan,
    observable_pair,
    probe_basis,
    rescaled_eigenvalues,
    sharp_probabilities,
    sharp_uncertainties,
    unsharp_uncertainties,
    von_neumann_counterexample,
)

SYMMETRIC_W = (2 + math.sqrt(2)) / 4  # maximizer of the sharp product


class TestMakeEquatorial:
    def test_a_eigenstate(self):
        s = make_equatorial(1.0, +1)
        np.testing.assert_allclose(s.amplitudes, [1, 0], atol=1e-15)

    def test_b_eigenstate(self):
        s = make_equatorial(0.5, +1)
        np.testing.assert_allclose(s.amplitudes, np.array([1, 1]) / np.sqrt(2), atol=1e-15)

    def test_general_point(self):
        s = make_equatorial(0.75, -1)
        np.testing.assert_allclose(s.amplitudes, [math.sqrt(0.75), -0.5], atol=1e-15)

    @pytest.mark.parametrize("w", [-0.1, 1.1, math.nan])
    def test_rejects_bad_probability(self, w):
        with pytest.raises(UsageError):
            make_equatorial(w)

    def test_rejects_bad_sign(self):
        with pytest.raises(UsageError):
            make_equatorial(0.5, 0)


class TestSharpQuantities:
    def test_b_eigenstate_is_certain_in_b(self):
        assert sharp_probabilities(make_equatorial(0.5, +1), "B") == pytest.approx((1, 0))

    def test_a_eigenstate_is_unbiased_in_b(self):
        for sign in (+1, -1):
            assert sharp_probabilities(make_equatorial(1.0, sign), "B") == \
                pytest.approx((0.5, 0.5))

    def test_general_b_probability(self):
        p_plus, p_minus = sharp_probabilities(make_equatorial(0.75, +1), "B")
        assert p_plus == pytest.approx(0.9330127018922193, abs=1e-12)
        assert p_plus + p_minus == pytest.approx(1.0, abs=1e-12)

    def test_b_probability_matches_projection(self):
        # oracle: project the amplitude vector onto the B basis directly
        pair = observable_pair()
        rng = np.random.default_rng(11)
        for _ in range(200):
            s = make_equatorial(rng.uniform(), rng.choice([1, -1]))
            expected = tuple(abs(qmath.inner(b, s.amplitudes)) ** 2 for b in pair.b_basis)
            assert sharp_probabilities(s, "B") == pytest.approx(expected, abs=1e-12)

    def test_uncertainty_extremes(self):
        assert sharp_uncertainties(make_equatorial(1.0)) == pytest.approx((0, 1))
        assert sharp_uncertainties(make_equatorial(0.5)) == pytest.approx((1, 0))

    def test_sharp_product_maximum(self):
        da, db = sharp_uncertainties(make_equatorial(SYMMETRIC_W))
        assert (da, db) == pytest.approx((1 / math.sqrt(2), 1 / math.sqrt(2)), abs=1e-12)
        assert da * db == pytest.approx(0.5, abs=1e-12)

    def test_sharp_product_range(self):
        for w in np.linspace(0, 1, 2001):
            da, db = protocol.sharp_deltas(w)
            assert 0.0 - 1e-15 <= da * db <= 0.5 + 1e-12
        for w in ((2 + math.sqrt(2)) / 4, (2 - math.sqrt(2)) / 4):
            da, db = protocol.sharp_deltas(w)
            assert da * db == pytest.approx(0.5, abs=1e-9)


class TestEntangleDecompose:
    def test_perfect_entanglement_at_c_zero(self):
        state = entangle(make_equatorial(0.5, +1), 0.0)
        d = decompose(state)
        assert d.c == pytest.approx(0.0, abs=1e-12)
        assert abs(qmath.inner(d.m_plus, d.m_minus)) < 1e-12

    def test_no_entanglement_at_c_one(self):
        s = make_equatorial(0.7, -1)
        state = entangle(s, 1.0)
        d = decompose(state)
        assert d.c == pytest.approx(1.0, abs=1e-12)
        # product state: object factor recovered
        np.testing.assert_allclose(qmath.tensor(s.amplitudes, d.m_plus), state, atol=1e-12)

    def test_singlet_decomposition(self):
        singlet = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
        d = decompose(singlet)
        assert d.w_a_plus == pytest.approx(0.5, abs=1e-12)
        assert d.c == pytest.approx(0.0, abs=1e-12)
        assert d.sign == -1
        assert not d.degenerate

    def test_product_state_decomposition(self):
        m = np.array([math.cos(0.3), math.sin(0.3)], dtype=complex)
        s = make_equatorial(0.6, +1)
        d = decompose(qmath.tensor(s.amplitudes, m))
        assert d.w_a_plus == pytest.approx(0.6, abs=1e-12)
        assert d.c == pytest.approx(1.0, abs=1e-12)

    def test_degenerate_object_eigenstate(self):
        state = qmath.tensor([1, 0], np.array([1, 1]) / np.sqrt(2))
        d = decompose(state)
        assert d.degenerate
        assert d.c == 1.0
        assert d.w_a_plus == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("w,sign,c", [(0.75, +1, 0.6), (0.6, +1, 0.3), (0.31, -1, 0.82)])
    def test_round_trip_examples(self, w, sign, c):
        d = decompose(entangle(make_equatorial(w, sign), c))
        assert d.w_a_plus == pytest.approx(w, abs=1e-10)
        assert d.c == pytest.approx(c, abs=1e-10)
        assert d.sign == sign

    def test_round_trip_random(self):
        rng = np.random.default_rng(12)
        for _ in range(500):
            w = rng.uniform(1e-3, 1 - 1e-3)
            c = rng.uniform(0, 1)
            sign = int(rng.choice([1, -1]))
            s = make_equatorial(w, sign)
            state = entangle(s, c)
            assert abs(qmath.norm(state) - 1) < 1e-12
            d = decompose(state)
            assert d.w_a_plus == pytest.approx(w, abs=1e-10)
            assert d.c == pytest.approx(c, abs=1e-10)

    def test_reassembly_reproduces_source(self):
        rng = np.random.default_rng(13)
        for _ in range(300):
            v = rng.normal(size=4) + 1j * rng.normal(size=4)
            state = v / np.linalg.norm(v)
            d = decompose(state)
            if d.degenerate:
                continue
            rebuilt = (math.sqrt(d.w_a_plus) * np.kron([1, 0], d.m_plus)
                       + d.sign * math.sqrt(1 - d.w_a_plus) * np.kron([0, 1], d.m_minus))
            np.testing.assert_allclose(rebuilt, state, atol=1e-10)
            assert d.c == pytest.approx(abs(qmath.inner(d.m_plus, d.m_minus)), abs=1e-12)


class TestProbeBasis:
    def test_orthogonal_conditionals_need_no_rotation(self):
        d = decompose(entangle(make_equatorial(0.5, +1), 0.0))
        basis = probe_basis(d)
        # arccos is ill-conditioned at 1; cos(gamma) itself is 1e-12-exact
        assert basis.gamma == pytest.approx(0.0, abs=1e-7)
        np.testing.assert_allclose(basis.m_big_plus, d.m_plus, atol=1e-7)

    def test_known_angle(self):
        d = decompose(entangle(make_equatorial(0.75, +1), 0.6))
        basis = probe_basis(d)
        assert math.cos(basis.gamma) ** 2 == pytest.approx(0.9, abs=1e-12)
        assert basis.gamma == pytest.approx(0.3217505543966423, abs=1e-10)

    def test_near_degenerate_limit(self):
        d = decompose(entangle(make_equatorial(0.75, +1), 1 - 1e-6))
        assert probe_basis(d).gamma == pytest.approx(math.pi / 4, abs=1e-2)

    def test_degenerate_raises(self):
        d = decompose(entangle(make_equatorial(0.75, +1), 1.0))
        with pytest.raises(DegenerateBasisError):
            probe_basis(d)

    def test_orthonormal_equal_angles_and_sign(self):
        rng = np.random.default_rng(14)
        for _ in range(200):
            c = rng.uniform(0, 0.999)
            d = decompose(entangle(make_equatorial(rng.uniform(0.01, 0.99)), c))
            basis = probe_basis(d)
            assert abs(qmath.norm(basis.m_big_plus) - 1) < 1e-12
            assert abs(qmath.norm(basis.m_big_minus) - 1) < 1e-12
            assert abs(qmath.inner(basis.m_big_plus, basis.m_big_minus)) < 1e-12
            ov_plus = qmath.inner(basis.m_big_plus, d.m_plus)
            ov_minus = qmath.inner(basis.m_big_minus, d.m_minus)
            assert ov_plus.real > 0 and abs(ov_plus.imag) < 1e-12
            assert abs(abs(ov_plus) - abs(ov_minus)) < 1e-12
            assert abs(abs(ov_plus) - math.cos(basis.gamma)) < 1e-12
            expected = (1 + math.sqrt(1 - d.c ** 2)) / 2
            assert math.cos(basis.gamma) ** 2 == pytest.approx(expected, abs=1e-10)


class TestRescaledEigenvalues:
    def test_symmetric_point(self):
        pair = observable_pair()
        a, b = rescaled_eigenvalues(pair, 1 / math.sqrt(2))
        assert (a, b) == pytest.approx((math.sqrt(2), math.sqrt(2)), abs=1e-12)

    def test_example(self):
        a, b = rescaled_eigenvalues(observable_pair(), 0.6)
        assert (a, b) == pytest.approx((1.25, 5 / 3), abs=1e-12)

    def test_sharp_a_limit(self):
        a, _ = rescaled_eigenvalues(observable_pair(), 1e-8)
        assert a == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("c", [0.0, 1.0, -0.2, 1.3])
    def test_singular(self, c):
        with pytest.raises(RescalingSingularError):
            rescaled_eigenvalues(observable_pair(), c)


def _chain(w, sign, c):
    state = entangle(make_equatorial(w, sign), c)
    d = decompose(state)
    basis = probe_basis(d)
    pair = observable_pair()
    return state, d, basis, pair, joint_probabilities(state, pair, basis)


class TestJointProbabilities:
    def test_singlet_is_uniform(self):
        singlet = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
        d = decompose(singlet)
        p = joint_probabilities(singlet, observable_pair(), probe_basis(d))
        np.testing.assert_allclose(p, 0.25, atol=1e-12)

    def test_product_state_b_eigenstate(self):
        m = np.array([math.cos(0.4), math.sin(0.4)], dtype=complex)
        state = qmath.tensor(np.array([1, 1]) / np.sqrt(2), m)
        # build a basis from a non-degenerate helper decomposition, measure the product state
        _, _, basis, pair, _ = _chain(0.7, +1, 0.5)
        p = joint_probabilities(state, pair, basis)
        np.testing.assert_allclose(p[1, :], 0.0, atol=1e-12)

    def test_closure_and_marginals(self):
        rng = np.random.default_rng(15)
        for _ in range(200):
            w, c = rng.uniform(0.01, 0.99), rng.uniform(0.01, 0.99)
            sign = int(rng.choice([1, -1]))
            _, d, basis, _, p = _chain(w, sign, c)
            assert np.all(p >= -1e-15) and np.all(p <= 1 + 1e-15)
            assert p.sum() == pytest.approx(1.0, abs=1e-12)
            # object-B marginal: 1/2 +- c sqrt(w(1-w))
            expected_b = 0.5 + sign * c * math.sqrt(w * (1 - w))
            assert p[0, :].sum() == pytest.approx(expected_b, abs=1e-10)
            # probe marginal: w cos^2 gamma + (1-w) sin^2 gamma
            cg, sg = math.cos(basis.gamma) ** 2, math.sin(basis.gamma) ** 2
            assert p[:, 0].sum() == pytest.approx(w * cg + (1 - w) * sg, abs=1e-10)

    def test_known_marginal_value(self):
        _, _, _, _, p = _chain(0.75, +1, 0.6)
        assert p[0, :].sum() == pytest.approx(0.7598076211353315, abs=1e-10)


class TestInferredMeans:
    def test_uniform_distribution_is_centered(self):
        assert inferred_means(np.full((2, 2), 0.25), (3.7, 11.0)) == pytest.approx((0, 0))

    def test_b_eigenstate_mean(self):
        _, _, basis, pair, p = _chain(0.5, +1, 1 / math.sqrt(2))
        scaled = rescaled_eigenvalues(pair, 1 / math.sqrt(2))
        _, mean_b = inferred_means(p, scaled)
        assert mean_b == pytest.approx(1.0, abs=1e-10)

    def test_unbiased_mean_a(self):
        _, _, basis, pair, p = _chain(0.75, +1, 0.6)
        scaled = rescaled_eigenvalues(pair, 0.6)
        mean_a, _ = inferred_means(p, scaled)
        assert mean_a == pytest.approx(0.5, abs=1e-10)

    def test_unbiasedness_random(self):
        rng = np.random.default_rng(16)
        for _ in range(200):
            w, c = rng.uniform(0.005, 0.995), rng.uniform(0.005, 0.995)
            sign = int(rng.choice([1, -1]))
            _, _, _, pair, p = _chain(w, sign, c)
            mean_a, mean_b = inferred_means(p, rescaled_eigenvalues(pair, c))
            assert mean_a == pytest.approx(2 * w - 1, abs=1e-10)
            assert mean_b == pytest.approx(sign * 2 * math.sqrt(w * (1 - w)), abs=1e-10)

    def test_rejects_non_distribution(self):
        with pytest.raises(UsageError):
            inferred_means([0.5, 0.5, 0.5, 0.5], (1.0, 1.0))


class TestUnsharpUncertainties:
    def test_symmetric_point_reaches_bound(self):
        report = unsharp_uncertainties(make_equatorial(SYMMETRIC_W), 1 / math.sqrt(2))
        assert report.delta_a_prime == pytest.approx(math.sqrt(1.5), abs=1e-12)
        assert report.delta_b_prime == pytest.approx(math.sqrt(1.5), abs=1e-12)
        assert report.product_simultaneous == pytest.approx(1.5, abs=1e-12)
        assert report.product_sharp == pytest.approx(0.5, abs=1e-12)

    def test_a_eigenstate(self):
        report = unsharp_uncertainties(make_equatorial(1.0), 0.5)
        assert report.delta_a_prime == pytest.approx(0.5773502691896257, abs=1e-12)

    def test_sharp_a_limit(self):
        s = make_equatorial(0.62, -1)
        report = unsharp_uncertainties(s, 1e-6)
        assert report.delta_a_prime == pytest.approx(sharp_uncertainties(s)[0], abs=1e-9)

    def test_closed_form_equals_direct_route(self):
        rng = np.random.default_rng(17)
        for _ in range(150):
            s = make_equatorial(rng.uniform(0.01, 0.99), int(rng.choice([1, -1])))
            c = rng.uniform(0.01, 0.99)
            analytic = protocol.unsharp_deltas(*sharp_uncertainties(s), c)
            direct = protocol.direct_unsharp_deltas(s, c)
            assert analytic == pytest.approx(direct, abs=1e-10)

    def test_product_never_below_bound(self):
        s = make_equatorial(0.73, +1)
        da, db = sharp_uncertainties(s)
        bound = 1 + da * db
        for c in np.linspace(1e-4, 1 - 1e-4, 1000):
            assert protocol.unsharp_product(da, db, c) >= bound - 1e-9

    @pytest.mark.parametrize("c", [0.0, 1.0])
    def test_singular_overlap(self, c):
        with pytest.raises(RescalingSingularError):
            unsharp_uncertainties(make_equatorial(0.7), c)


class TestProductExtrema:
    def test_min_product_symmetric(self):
        value, c_opt = min_product(1 / math.sqrt(2), 1 / math.sqrt(2))
        assert value == pytest.approx(1.5, abs=1e-12)
        assert c_opt == pytest.approx(1 / math.sqrt(2), abs=1e-12)
        # simultaneous floor is 9x the sharp product's square at this point
        assert value ** 2 == pytest.approx(9 * 0.25, abs=1e-12)

    def test_min_product_boundary(self):
        assert min_product(1.0, 0.0) == pytest.approx((1.0, 1.0))

    def test_min_product_example(self):
        value, c_opt = min_product(0.8660254037844386, 0.5)
        assert value == pytest.approx(1.4330127018922192, abs=1e-12)
        assert c_opt == pytest.approx(0.7962252170181257, abs=1e-12)

    def test_min_product_rejects_double_zero(self):
        with pytest.raises(UsageError):
            min_product(0.0, 0.0)

    def test_max_product(self):
        assert max_product(1 / math.sqrt(2)) == pytest.approx(2.0, abs=1e-12)
        assert max_product(0.6) == pytest.approx(1 / 0.48, abs=1e-12)
        assert max_product(1e-6) > 1e5
        with pytest.raises(RescalingSingularError):
            max_product(0.0)

    def test_nine_times_ratio(self):
        for w in np.linspace(1e-4, 1 - 1e-4, 30001):
            da, db = protocol.sharp_deltas(w)
            sharp = da * db
            if sharp > 1e-12:
                assert ((1 + sharp) / sharp) ** 2 >= 9 - 1e-9


class TestNumericCScan:
    def test_matches_closed_form(self):
        for w in (SYMMETRIC_W, 0.75, 0.62):
            s = make_equatorial(w)
            scan = numeric_c_scan(s, 1000)
            value, c_opt = min_product(*sharp_uncertainties(s))
            assert not scan.boundary
            assert scan.product_best == pytest.approx(value, abs=1e-6)
            assert scan.c_best == pytest.approx(c_opt, abs=1e-4)

    def test_boundary_flag_at_b_eigenstate(self):
        scan = numeric_c_scan(make_equatorial(0.5), 1000)
        assert scan.boundary
        assert scan.product_best == pytest.approx(1.0, abs=1e-3)

    def test_rejects_tiny_grid(self):
        with pytest.raises(UsageError):
            numeric_c_scan(make_equatorial(0.7), 2)


class TestVonNeumannCounterexample:
    @pytest.mark.parametrize("angle", [math.pi / 8, math.pi / 3])
    def test_equatorial_axes(self, angle):
        axis = np.array([math.cos(angle), math.sin(angle), 0.0])
        ce = von_neumann_counterexample(axis)
        assert ce.outcome_probabilities == pytest.approx((0.5, 0.5), abs=1e-12)
        assert max(ce.mean_gap_a, ce.mean_gap_b) > 0.5

    def test_polar_axis(self):
        ce = von_neumann_counterexample([0.0, 0.0, 1.0])
        assert ce.mean_gap_a == pytest.approx(2.0, abs=1e-12)

    def test_random_axes_prove_impossibility(self):
        # no projective direction distinguishes the pair, yet at least one
        # observable mean differs substantially
        rng = np.random.default_rng(18)
        pair = observable_pair()
        for _ in range(200):
            v = rng.normal(size=3)
            axis = v / np.linalg.norm(v)
            if min(np.linalg.norm(axis - [1, 0, 0]), np.linalg.norm(axis + [1, 0, 0]),
                   np.linalg.norm(axis - [0, 1, 0]), np.linalg.norm(axis + [0, 1, 0])) < 1e-6:
                continue
            ce = von_neumann_counterexample(axis)
            assert ce.outcome_probabilities[0] == pytest.approx(0.5, abs=1e-12)
            assert max(ce.mean_gap_a, ce.mean_gap_b) >= math.sqrt(2) - 1e-9

    @pytest.mark.parametrize("axis", [[1, 0, 0], [0, -1, 0]])
    def test_rejects_observable_axes(self, axis):
        with pytest.raises(UsageError):
            von_neumann_counterexample(axis)

    def test_rejects_non_unit(self):
        with pytest.raises(UsageError):
            von_neumann_counterexample([1, 1, 0])
