"""Extremal root selections, oscillation integrals, and prescribed searches."""

import math
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charmax import CapacityError, DomainError, RegimeWarning, build_group
from charmax.dirichlet import count_primitive_with_order
from charmax.extremal import (
    PrescribedTargets,
    extremal_profile,
    oscillation,
    oscillation_log_integral,
    prescribed_count_shape,
    root_average,
    root_maximizer,
    search_prescribed,
    weighted_prime_sum,
)


class TestRootMaximizer:
    def test_opposite_angle_picks_nearest_root(self):
        choice = root_maximizer(3, Fraction(1, 2))
        assert choice.angle == Fraction(1, 3)
        assert abs(choice.value - 0.5) < 1e-12
        assert abs(choice.root - complex(math.cos(2 * math.pi / 3), math.sin(2 * math.pi / 3))) < 1e-12

    def test_intermediate_angle(self):
        choice = root_maximizer(3, Fraction(1, 4))
        assert choice.angle == Fraction(1, 3)
        assert abs(choice.value - math.sqrt(3) / 2) < 1e-12

    def test_aligned_angle_attains_one(self):
        choice = root_maximizer(5, Fraction(2, 5))
        assert choice.angle == Fraction(2, 5)
        assert abs(choice.value - 1.0) < 1e-15

    @given(g=st.sampled_from([3, 5, 7, 9]), num=st.integers(0, 96))
    @settings(max_examples=60, deadline=None)
    def test_dominates_every_root(self, g, num):
        theta = Fraction(num, 97)
        choice = root_maximizer(g, theta)
        for j in range(g):
            other = math.cos(2 * math.pi * (j / g - float(theta)))
            assert choice.value >= other - 1e-12

    def test_value_never_below_cos_pi_over_g(self):
        for num in range(0, 20):
            choice = root_maximizer(7, Fraction(num, 20))
            assert choice.value >= math.cos(math.pi / 7) - 1e-12


class TestRootAverage:
    def test_anchor_exact(self):
        ra = root_average(3, 2, 0.0)
        assert ra.closed == 0.75
        assert abs(ra.brute - 0.75) < 1e-12

    def test_anchor_order_four(self):
        ra = root_average(3, 4, 0.0)
        assert abs(ra.closed - 0.8080127018922192) < 1e-12
        assert abs(ra.brute - ra.closed) < 1e-10

    @given(
        g=st.sampled_from([3, 5, 7, 9]),
        k=st.sampled_from([2, 4, 6, 8]),
        num=st.integers(0, 96),
    )
    @settings(max_examples=60, deadline=None)
    def test_brute_matches_closed_form(self, g, k, num):
        ra = root_average(g, k, num / 97)
        assert abs(ra.brute - ra.closed) < 1e-10

    def test_rejects_odd_k(self):
        with pytest.raises(DomainError):
            root_average(3, 3, 0.0)


class TestOscillation:
    def test_half_integer_peak(self):
        assert abs(oscillation(3, 0.75) - math.sqrt(3)) < 1e-12

    def test_integer_points_are_unity(self):
        for n in (3, 7, 12):
            for u in (0.0, 1.0, 2.0, -1.0):
                assert abs(oscillation(n, u) - 1.0) < 1e-12

    def test_periodic(self):
        for u in (0.1, 0.37, 0.9):
            assert abs(oscillation(5, u) - oscillation(5, u + 1.0)) < 1e-12

    def test_continuous_across_integer_joint(self):
        # cos(2 pi / n) + tan(pi / n) sin(2 pi / n) = 1 keeps the two branches glued
        for n in (3, 10, 60):
            eps = 1e-9
            assert abs(oscillation(n, 1 - eps) - oscillation(n, 1 + eps)) < 1e-6

    def test_bounded_by_secant(self):
        for u in [i / 50 for i in range(50)]:
            assert oscillation(9, u) <= 1 / math.cos(math.pi / 9) + 1e-12


class TestOscillationIntegral:
    def test_empty_interval_is_exactly_zero(self):
        res = oscillation_log_integral(5, 2.0, 2.0)
        assert res.value == 0.0 and res.main_term == 0.0 and res.defect == 0.0

    def test_anchor_defect(self):
        res = oscillation_log_integral(7, 1.0, 1000.0)
        assert abs(res.defect) <= 4.0
        assert res.quad_error < 1e-8
        assert abs(res.value - res.main_term - res.defect) < 1e-12

    @pytest.mark.parametrize("n", [3, 12, 35, 60])
    @pytest.mark.parametrize("a,b", [(1.0, 10.0), (1.0, 1e3), (1e-2, 1.0)])
    def test_defect_stays_small(self, n, a, b):
        res = oscillation_log_integral(n, a, b)
        assert abs(res.defect) <= 4.0
        assert res.quad_error < 1e-8

    def test_main_term_formula(self):
        res = oscillation_log_integral(5, 1.0, 100.0)
        want = (5 / math.pi) * math.tan(math.pi / 5) * math.log(100.0)
        assert abs(res.main_term - want) < 1e-12


class TestPrescribedTargets:
    def test_rejects_even_order(self):
        with pytest.raises(DomainError):
            PrescribedTargets.from_angles(4, {})

    def test_rejects_composite_key(self):
        with pytest.raises(DomainError):
            PrescribedTargets.from_angles(3, {6: Fraction(1, 3)})

    def test_rejects_prime_dividing_order(self):
        with pytest.raises(DomainError):
            PrescribedTargets.from_angles(3, {3: Fraction(1, 3)})

    def test_rejects_wrong_root(self):
        with pytest.raises(DomainError):
            PrescribedTargets.from_angles(3, {2: Fraction(1, 4)})

    def test_normalizes_angles(self):
        tg = PrescribedTargets.from_angles(3, {2: Fraction(4, 3)})
        assert tg.targets[2] == Fraction(1, 3)


class TestSearchPrescribed:
    def test_unconstrained_count_matches_census(self):
        found = search_prescribed(PrescribedTargets.from_angles(3, {}), 30)
        census = sum(count_primitive_with_order(q, 3) for q in range(3, 31))
        assert len(found) == census == 8

    def test_results_satisfy_targets(self):
        tg = PrescribedTargets.from_angles(3, {2: Fraction(1, 3), 7: None})
        hits = search_prescribed(tg, 500)
        assert hits
        for chi in hits:
            assert chi.order == 3
            assert chi.is_primitive
            assert chi.angle(2) == Fraction(1, 3)
            assert chi(7) == 0
            assert chi.group.modulus % 7 == 0

    def test_smallest_witness_is_mod_seven(self):
        tg = PrescribedTargets.from_angles(3, {2: Fraction(1, 3), 7: None})
        hits = search_prescribed(tg, 500, stop_after=1)
        assert hits[0].group.modulus == 7

    def test_stop_after_truncates(self):
        few = search_prescribed(PrescribedTargets.from_angles(3, {}), 200, stop_after=5)
        assert len(few) == 5

    def test_unsatisfiable_component_yields_nothing(self):
        # order 3 at a prime with phi(5^k) coprime to 3: no primitive component exists
        tg = PrescribedTargets.from_angles(3, {5: None})
        assert search_prescribed(tg, 2000) == ()

    def test_too_many_targets(self):
        primes = (2, 5, 7, 11, 13, 17, 19, 23, 29)
        with pytest.raises(CapacityError):
            search_prescribed(
                PrescribedTargets.from_angles(3, {p: None for p in primes}), 100
            )

    def test_conductor_cap(self):
        with pytest.raises(CapacityError):
            search_prescribed(PrescribedTargets.from_angles(3, {}), 2 * 10**6)


def test_count_shape_positive_and_growing():
    small = prescribed_count_shape(3, 7.0, 10**4)
    large = prescribed_count_shape(3, 7.0, 10**6)
    assert 0 < small < large

    with pytest.raises(DomainError):
        prescribed_count_shape(3, 7.0, 1)


class TestWeightedPrimeSum:
    def test_in_regime_report(self):
        psi = next(build_group(3).characters(primitive_only=True))
        with warnings.catch_warnings():
            warnings.simplefilter("error", RegimeWarning)
            rep = weighted_prime_sum(psi, 3, 10**4)
        assert rep.lhs > 0 and rep.rhs_main > 0
        assert abs(rep.defect - (rep.lhs - rep.rhs_main)) < 1e-12
        assert rep.params["m"] == 3 and rep.params["g"] == 3

    def test_warns_for_large_conductor(self):
        psi = next(build_group(3).characters(primitive_only=True))
        with pytest.warns(RegimeWarning):
            weighted_prime_sum(psi, 3, 50.0)

    def test_rejects_even_psi(self):
        psi = next(build_group(5).characters(order_equals=2))
        with pytest.raises(DomainError):
            weighted_prime_sum(psi, 3, 1000.0)


class TestExtremalProfile:
    def test_light_profile(self):
        psi = next(build_group(3).characters(primitive_only=True))
        prof = extremal_profile(psi, 3, 1000.0, prescribe_up_to=7, q_max=20000, pool=8)
        assert prof.examined >= 1
        assert prof.witness.order == 3
        assert prof.achieved >= prof.main_term  # witness beats the bound's main term
        assert abs(prof.defect - (prof.achieved - prof.main_term)) < 1e-12
        assert len(prof.choices) > 0
