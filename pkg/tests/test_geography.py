"""Region enumerators and the named family generators."""

from fractions import Fraction

import pytest

from fourcalc.certificates import verify_certificate
from fourcalc.config import Config
from fourcalc.errors import BadP, BadParity, InfeasiblePoint
from fourcalc.evaluate import evaluate
from fourcalc.expr import Primitive
from fourcalc.flags import Parity, W2Type
from fourcalc.geography import (
    GeographyQuery,
    bk_contains,
    bk_region,
    build_quotient_blueprint,
    exotic_partner_family,
    free_action_region,
    group_family,
    ke_corrected_chi_h,
    ke_family_start,
    ke_printed_chi_h,
    ke_quotient_family,
    printed_even_invariants,
    spin_sum_families,
)


class TestBkRegion:
    def test_membership_examples(self):
        points = {(p.x, p.y) for p in bk_region(Fraction(1), Fraction(100), (13, 20))}
        assert (13, 4) in points
        assert (13, 18) not in points

    def test_strict_positivity(self):
        assert all(p.y >= 1 for p in bk_region(Fraction(1), Fraction(1), (5, 5)))

    def test_half_eps_slope(self):
        # eps' = 1/2 gives the working slope 8.5.
        assert bk_contains(Fraction(1, 2), Fraction(10), 4, 24)
        assert not bk_contains(Fraction(1, 2), Fraction(10), 4, 25)


class TestFreeActionRegion:
    def test_divisibility_filter(self):
        query = GeographyQuery(2, Fraction(1, 2), Fraction(10), (8, 8))
        points = free_action_region(query)
        assert points and all(p.n % 2 == 0 and p.m % 2 == 0 for p in points)

    def test_monotone_in_bounds(self):
        small = GeographyQuery(2, Fraction(1, 2), Fraction(10), (8, 8))
        large = GeographyQuery(2, Fraction(1, 2), Fraction(10), (12, 12))
        small_pts = {(p.n, p.m) for p in free_action_region(small)}
        large_pts = {(p.n, p.m) for p in free_action_region(large)}
        assert small_pts <= large_pts

    def test_anti_monotone_in_c(self):
        lo = GeographyQuery(2, Fraction(1, 2), Fraction(5), (10, 10))
        hi = GeographyQuery(2, Fraction(1, 2), Fraction(20), (10, 10))
        assert {(p.n, p.m) for p in free_action_region(hi)} <= {
            (p.n, p.m) for p in free_action_region(lo)
        }

    def test_certificates_verify(self):
        query = GeographyQuery(3, Fraction(1, 2), Fraction(10), (12, 12))
        for point in free_action_region(query):
            for cert in point.blueprint.certificates:
                assert verify_certificate(cert) == []


class TestQuotientBlueprint:
    def test_reference_point(self):
        bp = build_quotient_blueprint(2, 10, 2)
        assert bp.labels["k"] == 1
        assert bp.quotient_record.c1sq == 1  # n/d
        assert bp.quotient_record.chi_h == 5  # m/d
        assert bp.cover_record.c1sq == 2 and bp.cover_record.chi_h == 10
        assert str(bp.cover_normal_form.expr) == "19*CP2 # 97*CP2b"

    def test_smallest_point_arithmetic(self):
        # n = m = d: k = floor(3/2) + 1 - 1 = 1 (needs a small c to be
        # inside the geography region).
        for d in (2, 3, 5):
            bp = build_quotient_blueprint(d, d, d, c_of_eps=Fraction(1, 2))
            assert bp.labels["k"] == (3 * d) // (2 * d) + 1 - 1 == 1

    def test_cover_identities_symbolically(self):
        for n, m, d in ((2, 10, 2), (4, 8, 2), (3, 9, 3), (6, 12, 3), (9, 21, 3)):
            bp = build_quotient_blueprint(n, m, d)
            crec = bp.cover_record
            assert crec.c1sq == n and crec.chi_h == m
            parts = dict(bp.cover_normal_form.expr.parts)
            assert parts[Primitive("CP2")] == 2 * m - 1
            assert parts[Primitive("CP2b")] == 10 * m - n - 1

    def test_excess_dominates_block(self):
        for n, m, d in ((2, 10, 2), (6, 12, 3), (12, 24, 4)):
            bp = build_quotient_blueprint(n, m, d)
            f = (3 * n) // (2 * d)
            assert Fraction(bp.labels["k"]) > Fraction(f + 1, 3)

    def test_rejections(self):
        with pytest.raises(InfeasiblePoint):
            build_quotient_blueprint(3, 10, 2)  # d does not divide n
        with pytest.raises(InfeasiblePoint):
            build_quotient_blueprint(-2, 10, 2)
        with pytest.raises(InfeasiblePoint):
            build_quotient_blueprint(2, 2, 2)  # outside the region (c too big)


class TestKeQuotientFamily:
    def test_reference_invariants(self):
        bp = ke_quotient_family(3, 1)
        assert bp.quotient_record.c1sq == 196
        assert bp.quotient_record.chi_h == 41
        assert Fraction(196, 41) < 5

    def test_printed_closed_form_delta(self):
        for d in (3, 5, 7):
            for i in (1, 3, 5):
                bp = ke_quotient_family(d, i)
                assert bp.quotient_record.chi_h == ke_corrected_chi_h(d, i)
                assert ke_printed_chi_h(d, i) - bp.quotient_record.chi_h == d * (d - 1)

    def test_flags(self):
        flags = evaluate(ke_quotient_family(3, 1).quotient).flags
        assert flags.parity is Parity.ODD
        assert flags.w2type is W2Type.I
        assert str(flags.pi1) == "Z/3"

    def test_even_family_congruence(self):
        for d in (2, 4, 6):
            for i in (1, 3, 5):
                bp = ke_quotient_family(d, i)
                tau = bp.labels["tau"]
                assert tau % 8 != 0
                c1, c2, tau2 = printed_even_invariants(d, i)
                assert tau == tau2 and bp.labels["c1sq"] == c1

    def test_bad_parity(self):
        with pytest.raises(BadParity):
            ke_quotient_family(3, 2)

    def test_family_start_and_ratio(self):
        starts = {d: ke_family_start(d) for d in (2, 3, 5, 7)}
        assert starts == {2: 33, 3: 1, 5: 11, 7: 19}
        for d, start in starts.items():
            for i in range(start, start + 8, 2):
                bp = ke_quotient_family(d, i)
                if d % 2 == 1:
                    rec = bp.quotient_record
                    assert Fraction(rec.c1sq) <= 5 * rec.chi_h
                else:
                    c1, c2, _ = printed_even_invariants(d, i)
                    assert Fraction(12 * c1, c1 + c2) <= 5

    def test_ratio_limits(self):
        # c1^2/chi_h approaches 4 for odd d and 24/5 for the even family.
        i = 20001
        odd_ratio = Fraction(4 * (3 * 2 + 3 * i - 2) ** 2) / ke_corrected_chi_h(3, i)
        assert abs(odd_ratio - 4) < Fraction(1, 100)
        c1, c2, _ = printed_even_invariants(2, i)
        even_ratio = Fraction(12 * c1, c1 + c2)
        assert abs(even_ratio - Fraction(24, 5)) < Fraction(1, 100)


class TestExoticPartners:
    def test_partner_bounds_and_homeo(self):
        bp = exotic_partner_family(3, 1, 1)
        chi_h = bp.labels["chi_h"]
        assert bp.labels["k"] >= 3 * chi_h
        verdicts = [c.verdict for c in bp.certificates]
        assert "homeomorphic" in verdicts and "einstein_obstructed" in verdicts
        assert bp.cover_record.chi == 3 * bp.quotient_record.chi

    def test_below_start_rejected(self):
        with pytest.raises(InfeasiblePoint):
            exotic_partner_family(5, 1, 1)  # start index for d=5 is 11

    def test_even_d_rejected(self):
        with pytest.raises(InfeasiblePoint):
            exotic_partner_family(2, 33, 1)


class TestSpinFamilies:
    def test_cover_counts(self):
        for d in (2, 3):
            for n in (1, 2):
                first, second = spin_sum_families(d, n, 1)
                assert first.labels["cover_k3"] == d * (n + 5)
                assert first.labels["cover_s2xs2"] == d * (n + 7) - 1
                assert second.labels["cover_k3"] == d * (2 * n + 5)
                assert second.labels["cover_s2xs2"] == d * (2 * n + 6) - 1

    def test_chi_multiplicativity(self):
        first, _ = spin_sum_families(2, 1, 1)
        assert first.cover_record.chi == 296 == 2 * first.quotient_record.chi
        assert first.quotient_record.chi == 148

    def test_j_independence(self):
        a, _ = spin_sum_families(2, 1, 1)
        b, _ = spin_sum_families(2, 1, 5)
        assert a.cover_normal_form.expr == b.cover_normal_form.expr

    def test_wall_constant_guard(self):
        with pytest.raises(InfeasiblePoint):
            spin_sum_families(2, 1, 1, Config(wall_n0=2))


class TestGroupFamily:
    def test_blowup_bounds(self):
        c1sq = evaluate(Primitive("Xk", (1,))).record.c1sq
        assert c1sq == 8
        with pytest.raises(BadP):
            group_family(24, -16, "G", 1, 8, 1)  # boundary (strict)
        with pytest.raises(BadP):
            group_family(24, -16, "G", 1, 24, 1)
        bp = group_family(24, -16, "G", 1, 9, 1)
        assert bp.quotient_record.c1sq == 8 + 16 - 9

    def test_group_label_and_verdicts(self):
        bp = group_family(24, -16, "Dihedral7", 2, 20, 3)
        assert bp.labels["group"] == "Dihedral7"
        assert str(evaluate(bp.quotient).flags.pi1) == "Dihedral7"
        assert [c.verdict for c in bp.certificates] == [
            "hitchin_thorpe_ok",
            "einstein_obstructed",
        ]

    def test_structures_share_invariants(self):
        a = group_family(24, -16, "G", 1, 10, 1)
        b = group_family(24, -16, "G", 1, 10, 9)
        assert a.quotient_record == b.quotient_record
