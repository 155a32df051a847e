from fractions import Fraction as F

import pytest

import qleontief as q
from qleontief import corpus

from conftest import brute_minimal, certified, grid_utility, tuple_leq


def fraction_grid_space():
    # positive grid with values below and above 1
    vals = [F(1, 4), F(1, 2), F(1), F(2), F(4)]
    return q.grid_space(vals, vals)


def min_x1_x1x2():
    """u(x1, x2) = min(x1, x1*x2) tabulated on the positive fraction grid."""
    space = fraction_grid_space()
    values = {p: min(p[0], p[0] * p[1]) for p in space.points()}
    return q.TabulatedUtility(space.as_poset(), values, space=space)


def min_x1x3_x2(lo=1, hi=4):
    space = q.grid_space(range(lo, hi + 1), range(lo, hi + 1), range(lo, hi + 1))
    values = {p: F(min(p[0] * p[2], p[1])) for p in space.points()}
    return q.TabulatedUtility(space.as_poset(), values, space=space)


class TestEfficientSet:
    def test_diagonal_for_equal_coefficients(self):
        u = q.classical_leontief([F(1), F(1)], q.Box.integer_grid(2, 0, 3))
        eff = q.efficient_set(u)
        assert set(eff.points) == {(k, k) for k in range(4)}

    def test_identity_on_chain_every_point(self):
        chain = q.FinitePoset.chain(range(4))
        u = certified(q.TabulatedUtility(chain, {t: F(t) for t in range(4)}))
        assert set(q.efficient_set(u).points) == set(range(4))

    def test_unbalanced_coefficients_grid_locus(self):
        u = q.classical_leontief([F(1), F(2)], q.Box.integer_grid(2, 0, 4))
        eff = q.efficient_set(u)
        assert set(eff.points) == {(F(0), F(0)), (F(2), F(1)), (F(4), F(2))}
        # locus check: a1 x1 == a2 x2 on each one
        for x in eff.points:
            assert 1 * x[0] == 2 * x[1]

    def test_subset_restriction_intersects(self, min_on_4x4):
        s = q.DownSet.from_generators(min_on_4x4.poset, [(2, 3)])
        eff = q.efficient_set(min_on_4x4, s.sorted_members())
        assert set(eff.points) == {(0, 0), (1, 1), (2, 2)}


class TestIsEfficientGlobal:
    def test_interior_images_are_efficient(self, min_on_4x4):
        for y in min_on_4x4.poset.elements:
            assert q.is_efficient_global(min_on_4x4, min_on_4x4.interior(y))

    def test_off_locus_point(self):
        u = q.classical_leontief([F(1), F(2)], q.Box.integer_grid(2, 0, 4))
        assert not q.is_efficient_global(u, (F(4), F(1)))

    def test_level_set_identity_form(self, min_on_4x4):
        u = min_on_4x4
        p = u.poset
        for x in p.elements:
            eff = q.is_efficient_global(u, x)
            identity = p.up_set(x) == frozenset(
                y for y in p.elements if u.value(y) >= u.value(x)
            )
            assert eff == identity


class TestPartialUtility:
    def test_freeze_in_min_grid(self, min_on_4x4):
        pu = q.partial_utility(min_on_4x4, (3,), 0)
        for t in range(4):
            assert pu.value(t) == min(t, 3)
        assert pu.utility.certified
        assert pu.interior(2) == 2

    def test_projection_matches_fresh_certification(self, min_on_4x4):
        # the auto-certified slice of a certified parent agrees with an
        # independent oracle run on the uncertified slice
        space = min_on_4x4.space
        raw = q.TabulatedUtility(min_on_4x4.poset, min_on_4x4.values, space=space)
        for axis in range(2):
            for frozen in range(4):
                auto = q.partial_utility(min_on_4x4, (frozen,), axis)
                fresh = q.certified_partial(raw, (frozen,), axis)
                assert auto.utility._interior == fresh.utility._interior

    def test_min_x1_x1x2_partials_certify_on_grid(self):
        u = min_x1_x1x2()
        for a in [F(1, 4), F(1), F(4)]:
            pu = q.certified_partial(u, (a,), 1)  # freeze x1 = a, vary x2
            for t in [F(1, 4), F(1, 2), F(1), F(2), F(4)]:
                assert pu.value(t) == min(a, a * t)

    def test_frozen_at_top_of_min_product_recovers_factor(self):
        chain = q.FinitePoset.chain(range(4))
        mk = lambda: certified(q.TabulatedUtility(chain, {t: F(t) for t in range(4)}))
        m = q.min_product(mk(), mk())
        tab = certified(m.tabulate())
        pu = q.partial_utility(tab, (3,), 0)
        for t in range(4):
            assert pu.value(t) == F(t)

    def test_invalid_axis(self, min_on_4x4):
        with pytest.raises(q.OrderError):
            q.partial_utility(min_on_4x4, (3,), 5)


class TestPartialDualConsistency:
    def test_two_freezes_agree_with_projection(self, min_on_4x4):
        cu = q.certify_regular(min_on_4x4).utility
        cert = q.partial_dual_consistency(cu, F(2), (2,), (3,), 0)
        assert cert.ok and not cert.detail

    def test_freeze_below_threshold_is_skipped(self, min_on_4x4):
        cu = q.certify_regular(min_on_4x4).utility
        cert = q.partial_dual_consistency(cu, F(2), (1,), (3,), 0)
        assert cert.ok
        assert "skipped" in cert.detail

    def test_bottom_level(self, min_on_4x4):
        cu = q.certify_regular(min_on_4x4).utility
        lam = min(cu.image())
        cert = q.partial_dual_consistency(cu, lam, (0,), (3,), 1)
        assert cert.ok and not cert.detail

    def test_cache_rejects_conflicting_entries(self, min_on_4x4):
        cache = q.efficiency.PartialDualCache(min_on_4x4)
        cache.record(0, F(2), 2)
        assert cache.lookup(0, F(2)) == 2
        cache.record(0, F(2), 2)
        with pytest.raises(q.InconsistencyError):
            cache.record(0, F(2), 3)


class TestPuMap:
    def test_strictly_increasing_axes_make_everything_efficient(self):
        u = grid_utility(lambda a, b: F((a + 1) * (b + 1)), range(3), range(3))
        res = q.pu_map(u, (1, 2))
        assert res.cardinality == 9
        for x in u.space.points():
            assert q.pu_map(u, x).contains(x)
            assert q.is_efficient_minimal(u, x)

    def test_min_grid_membership_table(self, min_on_4x4):
        res = q.pu_map(min_on_4x4, (2, 3))
        assert res.axis_sets[0].points == (0, 1, 2, 3)
        assert res.axis_sets[1].points == (0, 1, 2)
        assert not res.contains((2, 3))
        assert res.contains((2, 2))

    def test_single_axis_product_reduces_to_efficient_set(self):
        chain = q.FinitePoset.chain(range(4))
        space = q.product_poset([chain])
        u = certified(
            q.TabulatedUtility(
                space.as_poset(), {(t,): F(min(t, 2)) for t in range(4)}, space=space
            )
        )
        res = q.pu_map(u, (1,))
        assert res.axis_sets[0].points == (0, 1, 2)
        inner = q.TabulatedUtility(chain, {t: F(min(t, 2)) for t in range(4)})
        inner = certified(inner)
        assert set(res.axis_sets[0].points) == set(q.efficient_set(inner).points)


class TestIsEfficientMinimal:
    def test_locus_points_are_minimal(self):
        u = min_x1x3_x2()
        for x in u.space.points():
            if x[0] * x[2] == x[1]:
                assert q.is_efficient_minimal(u, x)

    def test_excess_x2_is_not_minimal_with_witness(self):
        u = min_x1x3_x2()
        x = (1, 3, 2)  # x2 = 3 > 2 = x1*x3
        assert not q.is_efficient_minimal(u, x)
        w = q.minimality_witness(u, x)
        assert w is not None and w != x
        assert tuple_leq(w, x)
        assert u.value(w) >= u.value(x)
        assert w[1] < x[1]

    def test_bottom_is_minimal(self):
        u = min_x1x3_x2()
        assert q.is_efficient_minimal(u, (1, 1, 1))

    def test_matches_brute_force_minimal_elements(self, min_on_4x4):
        u = min_on_4x4
        pts = list(u.space.points())
        for x in pts:
            level = [p for p in pts if u.value(p) >= u.value(x)]
            minimal = x in brute_minimal(level, tuple_leq)
            assert q.is_efficient_minimal(u, x) == minimal


class TestCheckCharpar:
    def test_min_grid_exhaustive(self, min_on_4x4):
        cert = q.check_charpar(min_on_4x4)
        assert cert.ok
        assert cert.data["points_checked"] == 16

    def test_min_x1_x1x2_positive_grid(self):
        cert = q.check_charpar(min_x1_x1x2())
        assert cert.ok

    def test_min_x1x3_x2_grid(self):
        cert = q.check_charpar(min_x1x3_x2())
        assert cert.ok
        assert cert.data["points_checked"] == 64

    def test_random_products_of_chains(self):
        for i in range(30):
            rng = corpus.derive_rng(23, "charpar-unit", i)
            space = corpus.random_product_of_chains(rng)
            u = corpus.random_isotone_on_product(rng, space)
            assert q.check_charpar(u).ok


class TestEfficiencyReport:
    def test_efficient_point(self, min_on_4x4):
        rep = q.efficiency_report(min_on_4x4, (2, 2))
        assert rep["efficient"] is True
        assert rep["axis_membership"] == [True, True]
        assert rep["witness"] is None

    def test_dominated_point_carries_witness(self, min_on_4x4):
        rep = q.efficiency_report(min_on_4x4, (2, 3))
        assert rep["efficient"] is False
        assert rep["axis_membership"] == [True, False]
        assert rep["witness"] is not None
        assert rep["pu_cardinality"] == 12
        json_text = __import__("json").dumps(rep)
        assert "pu_cardinality" in json_text


class TestEfficiencyStructure:
    def test_efficient_set_is_chain_and_meet_closed(self):
        for i in range(30):
            rng = corpus.derive_rng(29, "structure-unit", i)
            poset = corpus.random_poset(rng, 12, with_bottom=True)
            u = certified(corpus.random_quasileontief_utility(rng, poset))
            eff = q.efficient_set(u)
            assert poset.is_chain(eff.points)
            if poset.is_inf_semilattice():
                for x in eff.points:
                    for y in eff.points:
                        assert poset.meet(x, y) in eff.points

    def test_at_most_one_efficient_point_per_value(self, min_on_4x4):
        u = min_on_4x4
        eff = q.efficient_set(u).points
        values = [u.value(x) for x in eff]
        assert len(values) == len(set(values))

    def test_dual_is_order_isomorphism_onto_efficient_set(self, min_on_4x4):
        u = q.certify_regular(min_on_4x4).utility
        image = u.image()
        duals = [u.dual(lam) for lam in image]
        assert set(duals) == set(q.efficient_set(u).points)
        for l1, l2 in zip(image, image[1:]):
            assert u.poset.lt(u.dual(l1), u.dual(l2))
        for lam, d in zip(image, duals):
            assert u.value(d) == lam

    def test_global_bridging(self, min_on_4x4):
        # globally efficient iff every coordinate is axis-efficient
        u = min_on_4x4
        for x in u.space.points():
            global_eff = q.is_efficient_global(u, x)
            axiswise = q.pu_map(u, x).contains(x)
            assert global_eff == axiswise
