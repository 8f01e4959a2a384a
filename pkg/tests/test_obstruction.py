"""Obstruction engine: Hitchin-Thorpe, curvature and Bauer-Furuta
obstructions, SW propagation, homeomorphism keys, certificates."""

import itertools

import pytest

from fourcalc.certificates import verify_certificate
from fourcalc.errors import NoSplit, UnknownFlag, UnsupportedGroup
from fourcalc.evaluate import evaluate
from fourcalc.expr import CyclicCover, DivisorClass, Primitive, connected_sum_of
from fourcalc.flags import NO, UNKNOWN, YES, StructureFlags
from fourcalc.invariants import InvariantRecord
from fourcalc.obstruction import (
    decompose_for_obstruction,
    hitchin_thorpe,
    homeo_equal,
    homeo_key,
    lebrun_einstein,
    spin_einstein,
    sw_status,
)
from fourcalc.registry import REGISTRY

CP2 = Primitive("CP2")
CP2B = Primitive("CP2b")
K3 = Primitive("K3")
OCTIC = CyclicCover("CP2", 2, DivisorClass("CP2", (8,)))
SPHERE2 = Primitive("Sd", (2,))


def certify(cert):
    assert verify_certificate(cert) == []
    return cert


class TestHitchinThorpe:
    def test_k3_boundary(self):
        cert = certify(hitchin_thorpe(evaluate(K3).record))
        assert cert.verdict == "hitchin_thorpe_ok"
        assert any("2*24 + 3*(-16) == 0" in (s.arithmetic or "") for s in cert.steps)

    def test_obstruction_sum(self):
        rec = evaluate(
            connected_sum_of((OCTIC, 1), (CP2B, 1), (SPHERE2, 1))
        ).record
        assert (2 * rec.chi + 3 * rec.tau, 2 * rec.chi - 3 * rec.tau) == (1, 187)
        cert = certify(hitchin_thorpe(rec))
        assert cert.verdict == "hitchin_thorpe_ok"

    def test_negative_euler_violated(self):
        rec = evaluate(connected_sum_of((Primitive("S1xS3"), 2))).record
        assert rec.chi == -2
        cert = certify(hitchin_thorpe(rec))
        assert cert.verdict == "hitchin_thorpe_violated"


class TestSwStatus:
    def test_kaehler_cover_yes(self):
        verdict = sw_status(OCTIC)
        assert verdict.status is YES and verdict.rule == "general-type"

    def test_sum_of_positive_pieces_vanishes(self):
        assert sw_status(connected_sum_of((CP2, 2))).status is NO

    def test_sum_with_null_pieces_keeps_invariant(self):
        expr = connected_sum_of((OCTIC, 1), (SPHERE2, 1), (CP2B, 3))
        verdict = sw_status(expr)
        assert verdict.status is YES and verdict.rule == "sum-with-null-pieces"

    def test_rules_never_conflict(self):
        # On any sum from this pool, the vanishing rule and the
        # null-pieces rule never both apply.
        pool = [CP2, CP2B, K3, OCTIC, SPHERE2, Primitive("E", (2,))]
        for size in (2, 3):
            for combo in itertools.combinations_with_replacement(pool, size):
                expr = connected_sum_of(*[(p, 1) for p in combo])
                positives = sum(
                    1 for p in combo if evaluate(p).record.b2plus > 0
                )
                verdict = sw_status(expr)
                if verdict.status is NO:
                    assert positives >= 2
                if verdict.rule == "sum-with-null-pieces":
                    assert positives <= 1

    def test_unknown_without_rule(self):
        assert sw_status(Primitive("S4")).status is NO  # declared
        assert sw_status(connected_sum_of((SPHERE2, 1), (Primitive("Sd", (3,)), 1))).status is UNKNOWN


class TestLebrun:
    def test_involution_example(self):
        x_part = connected_sum_of((OCTIC, 1), (SPHERE2, 1))
        cert = certify(lebrun_einstein(x_part, 1, 0))
        assert cert.verdict == "einstein_obstructed"
        assert any("1 + 4*0 >=" in (s.arithmetic or "") for s in cert.steps)

    def test_zero_excess_no_verdict(self):
        cert = certify(lebrun_einstein(OCTIC, 0, 0))
        assert cert.verdict == "no_verdict"

    def test_hypothesis_failures_named(self):
        cert = certify(lebrun_einstein(K3, 5, 0))  # 2chi+3tau = 0
        assert cert.verdict == "no_verdict"
        assert any(s.rule == "hypothesis-failed:positivity" for s in cert.steps)
        cert = certify(lebrun_einstein(CP2, 5, 0))  # SW vanishes
        assert any(s.rule == "hypothesis-failed:sw-nontrivial" for s in cert.steps)

    def test_monotone_in_k_and_l(self):
        x_part = connected_sum_of((OCTIC, 1), (SPHERE2, 1))
        for k in range(4):
            for l in range(3):
                if lebrun_einstein(x_part, k, l).verdict == "einstein_obstructed":
                    assert lebrun_einstein(x_part, k + 1, l).verdict == "einstein_obstructed"
                    assert lebrun_einstein(x_part, k, l + 1).verdict == "einstein_obstructed"


class TestDecompose:
    def test_involution_split(self):
        expr = connected_sum_of((OCTIC, 1), (SPHERE2, 1), (CP2B, 1))
        best = decompose_for_obstruction(expr)[0]
        assert (best.k, best.l) == (1, 0)
        assert best.x_expr == connected_sum_of((OCTIC, 1), (SPHERE2, 1))

    def test_k3_alone_has_no_split(self):
        with pytest.raises(NoSplit):
            decompose_for_obstruction(K3)

    def test_thm_family_pattern(self):
        block = Primitive("BK", (41, 328, 1))
        expr = connected_sum_of((block, 1), (Primitive("Sd", (3,)), 1), (CP2B, 132))
        best = decompose_for_obstruction(expr)[0]
        assert best.k == 132 and best.l == 0
        assert best.x_expr == connected_sum_of((block, 1), (Primitive("Sd", (3,)), 1))

    def test_exhaustive_oracle_small_sums(self):
        # Compare against brute force over all (k, l) splittings.
        expr = connected_sum_of(
            (OCTIC, 1), (SPHERE2, 1), (CP2B, 3), (Primitive("S1xS3"), 1)
        )
        found = {(s.k, s.l) for s in decompose_for_obstruction(expr)}
        brute = set()
        for k in range(4):
            for l in range(2):
                inside = [(OCTIC, 1), (SPHERE2, 1)]
                if 3 - k:
                    inside.append((CP2B, 3 - k))
                if 1 - l:
                    inside.append((Primitive("S1xS3"), 1 - l))
                x_expr = connected_sum_of(*inside)
                if lebrun_einstein(x_expr, k, l).verdict == "einstein_obstructed":
                    brute.add((k, l))
        assert found == brute and found
        best = decompose_for_obstruction(expr)[0]
        assert best.k + 4 * best.l == max(k + 4 * l for k, l in brute)


class TestSpinEinstein:
    def test_reference_pieces(self):
        pieces = [Primitive("X442"), Primitive("Y", (1,)), Primitive("E", (2,)), K3]
        cert = certify(spin_einstein(pieces, 3, SPHERE2))
        assert cert.verdict == "einstein_obstructed"
        assert any("mod(19 + 3 + 3 + 3, 8) == 4" in (s.arithmetic or "") for s in cert.steps)

    def test_congruence_failure_is_named(self):
        if "FlatPiece" not in REGISTRY:
            REGISTRY.register_primitive(
                "FlatPiece",
                InvariantRecord(4, 0, 0),
                StructureFlags().cite(
                    sw_mod2_nontrivial=YES, rule="declared", citation="test fixture"
                ),
            )
        pieces = [Primitive("X442"), Primitive("Y", (1,)), Primitive("FlatPiece"), K3]
        cert = certify(spin_einstein(pieces, 3, SPHERE2))
        assert cert.verdict == "no_verdict"
        assert any("b2plus-congruence" in s.rule for s in cert.steps if "failed" in s.rule)

    def test_sum_congruence_failure(self):
        pieces = [Primitive("X442"), Primitive("Y", (1,)), Primitive("E", (4,)), K3]
        cert = certify(spin_einstein(pieces, 3, SPHERE2))
        assert cert.verdict == "no_verdict"
        assert any(s.rule == "hypothesis-failed:sum-congruence" for s in cert.steps)

    def test_n_with_positive_b2plus_rejected(self):
        pieces = [Primitive("X442"), Primitive("Y", (1,)), Primitive("E", (2,)), K3]
        cert = certify(spin_einstein(pieces, 3, CP2))
        assert cert.verdict == "no_verdict"


class TestHomeo:
    def test_planes_differ(self):
        cert = certify(homeo_equal(CP2, CP2B))
        assert cert.verdict == "not_homeomorphic"

    def test_log_transforms_homeomorphic(self):
        cert = certify(homeo_equal(Primitive("Y", (1,)), Primitive("Y", (4,))))
        assert cert.verdict == "homeomorphic"
        # ... while the smooth-structure labels differ.
        assert evaluate(Primitive("Y", (1,))).labels != evaluate(Primitive("Y", (4,))).labels

    def test_key_requires_known_flags(self):
        with pytest.raises(UnsupportedGroup):
            homeo_key(Primitive("S1xS3"))
        with pytest.raises(UnknownFlag):
            homeo_key(SPHERE2)  # w2-type unknown for d >= 2

    def test_equivalence_relation(self):
        pool = [
            Primitive("Y", (1,)),
            Primitive("Y", (2,)),
            Primitive("E", (2,)),
            connected_sum_of((CP2, 3), (CP2B, 5)),
            connected_sum_of((CP2, 3), (CP2B, 5)),
            connected_sum_of((K3, 1), (Primitive("S2xS2"), 1)),
        ]
        for a in pool:
            assert homeo_equal(a, a).verdict == "homeomorphic"
        for a, b in itertools.combinations(pool, 2):
            ab = homeo_equal(a, b).verdict
            assert ab == homeo_equal(b, a).verdict
        for a, b, c in itertools.permutations(pool, 3):
            if (
                homeo_equal(a, b).verdict == "homeomorphic"
                and homeo_equal(b, c).verdict == "homeomorphic"
            ):
                assert homeo_equal(a, c).verdict == "homeomorphic"

    def test_certificates_tamper_detection(self):
        from fourcalc.certificates import Certificate, Step

        cert = homeo_equal(CP2, CP2B)
        tampered = Certificate(
            verdict=cert.verdict,
            steps=tuple(
                Step(s.rule, s.citation, "1 == 2" if s.arithmetic else None)
                for s in cert.steps
            ),
            inputs=cert.inputs,
        )
        assert verify_certificate(tampered) != []
