"""Einstein-metric obstructions, Seiberg-Witten flag propagation and
homeomorphism keys, all emitting self-verifying certificates.

The engine decides three obstructions:

* Hitchin-Thorpe: chi >= 0 and 2 chi +- 3 tau >= 0 are necessary for an
  Einstein metric;
* the curvature obstruction: if X has nontrivial Seiberg-Witten
  invariant and (2 chi + 3 tau)(X) > 0, then X # k CP2b # l (S1xS3)
  carries no Einstein metric once k + 4l >= (2 chi + 3 tau)(X)/3;
* the Bauer-Furuta refinement for connected sums of up to four pieces
  with nonzero mod-2 invariant.

Absence of an obstruction is never reported as existence of a metric:
failed hypotheses yield the verdict ``no_verdict`` with the failing
condition named.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from fourcalc.certificates import Certificate, Step
from fourcalc.errors import NoSplit, UnknownFlag, UnsupportedGroup
from fourcalc.evaluate import evaluate
from fourcalc.expr import ManifoldExpr, Primitive, connected_sum_of, sum_parts
from fourcalc.flags import NO, UNKNOWN, YES, GroupLabel, Parity, TriState, W2Type
from fourcalc.invariants import InvariantRecord

CITE_HT = "Hitchin-Thorpe inequality"
CITE_LEBRUN = "Seiberg-Witten scalar-curvature estimates on blown-up manifolds"
CITE_BAUER_FURUTA = "Bauer-Furuta stable-cohomotopy obstruction for connected sums"
CITE_TAUBES = "Taubes: symplectic manifolds with b2+ > 1 have SW = 1"
CITE_WITTEN = "Kaehler surfaces of general type have nontrivial SW"
CITE_KMT = "sums with b2+ = 0 pieces keep a nontrivial SW-type invariant"
CITE_SW_VANISH = "SW vanishes on sums of two pieces with positive b2+"
CITE_FREEDMAN = "Freedman: simply connected homeomorphism classification"
CITE_HAMBLETON_KRECK = "homeomorphism classification for cyclic fundamental groups"


def _fmt(n) -> str:
    return str(n) if n >= 0 else f"({n})"


def _two_chi_three_tau(rec: InvariantRecord) -> str:
    return f"2*{_fmt(rec.chi)} + 3*{_fmt(rec.tau)}"


def hitchin_thorpe(rec: InvariantRecord, inputs: Optional[dict] = None) -> Certificate:
    """Check chi >= 0 and both Hitchin-Thorpe inequalities, exactly."""
    ok = rec.chi >= 0 and 2 * rec.chi + 3 * rec.tau >= 0 and 2 * rec.chi - 3 * rec.tau >= 0
    steps = []
    chi_cmp = ">=" if rec.chi >= 0 else "<"
    steps.append(Step("euler-nonnegative", CITE_HT, f"{_fmt(rec.chi)} {chi_cmp} 0"))
    plus = 2 * rec.chi + 3 * rec.tau
    minus = 2 * rec.chi - 3 * rec.tau
    steps.append(
        Step("ht-plus", CITE_HT, f"{_two_chi_three_tau(rec)} == {_fmt(plus)} {'>=' if plus >= 0 else '<'} 0")
    )
    steps.append(
        Step(
            "ht-minus",
            CITE_HT,
            f"2*{_fmt(rec.chi)} - 3*{_fmt(rec.tau)} == {_fmt(minus)} {'>=' if minus >= 0 else '<'} 0",
        )
    )
    return Certificate(
        verdict="hitchin_thorpe_ok" if ok else "hitchin_thorpe_violated",
        steps=tuple(steps),
        inputs={"chi": rec.chi, "tau": rec.tau, **(inputs or {})},
    )


@dataclass(frozen=True)
class SwVerdict:
    status: TriState
    rule: str
    citation: str


def sw_status(expr: ManifoldExpr) -> SwVerdict:
    """Tri-state Seiberg-Witten nontriviality with the rule that decided it.

    Rules: declared block values; Kaehler/symplectic with b2+ > 1 (yes);
    a sum of one yes-piece with only b2+ = 0 companions (yes); a sum with
    at least two b2+ > 0 pieces (no).  Everything else stays unknown.
    """
    ev = evaluate(expr)
    parts = sum_parts(expr)
    if len(parts) > 1 or parts[0][1] > 1:
        positive = 0
        all_known = True
        for part, mult in parts:
            b2p = evaluate(part).record.b2plus
            if b2p is None:
                all_known = False
            elif b2p > 0:
                positive += mult
        if all_known and positive >= 2:
            return SwVerdict(NO, "sum-vanishing", CITE_SW_VANISH)
        if all_known:
            yes_parts = []
            others_zero = True
            for part, mult in parts:
                sub = sw_status(part)
                b2p = evaluate(part).record.b2plus
                if sub.status is YES:
                    yes_parts.extend([part] * mult)
                elif b2p > 0:
                    others_zero = False
            if len(yes_parts) == 1 and others_zero:
                return SwVerdict(YES, "sum-with-null-pieces", CITE_KMT)
        return SwVerdict(UNKNOWN, "no-rule", "")

    flags = ev.flags
    if flags.sw_nontrivial is not UNKNOWN:
        rule, citation = "declared", "registry block"
        for prov in flags.provenance:
            if prov.field == "sw_nontrivial":
                rule, citation = prov.rule, prov.citation
        if rule == "taubes-symplectic" and flags.minimal_general_type is YES:
            rule, citation = "general-type", CITE_WITTEN
        return SwVerdict(flags.sw_nontrivial, rule, citation)
    b2p = ev.record.b2plus
    if b2p is not None and b2p > 1:
        if flags.minimal_general_type is YES:
            return SwVerdict(YES, "general-type", CITE_WITTEN)
        if flags.symplectic is YES:
            return SwVerdict(YES, "symplectic", CITE_TAUBES)
    return SwVerdict(UNKNOWN, "no-rule", "")


def lebrun_einstein(x_expr: ManifoldExpr, k: int, l: int) -> Certificate:
    """Curvature obstruction for X # k CP2b # l (S1xS3).

    Hypotheses: nontrivial SW invariant on X and (2 chi + 3 tau)(X) > 0.
    Obstructed when k + 4l >= (2 chi + 3 tau)(X) / 3, compared exactly.
    """
    rec = evaluate(x_expr).record
    sw = sw_status(x_expr)
    inputs = {
        "X": str(x_expr),
        "chi": rec.chi,
        "tau": rec.tau,
        "k": k,
        "l": l,
    }
    steps = []
    if sw.status is not YES:
        steps.append(
            Step(
                "hypothesis-failed:sw-nontrivial",
                CITE_LEBRUN,
                None,
            )
        )
        return Certificate("no_verdict", tuple(steps), inputs)
    steps.append(Step(f"sw-nontrivial:{sw.rule}", sw.citation, None))
    total = 2 * rec.chi + 3 * rec.tau
    if total <= 0:
        steps.append(
            Step(
                "hypothesis-failed:positivity",
                CITE_LEBRUN,
                f"{_two_chi_three_tau(rec)} == {_fmt(total)} <= 0",
            )
        )
        return Certificate("no_verdict", tuple(steps), inputs)
    steps.append(
        Step("positivity", CITE_LEBRUN, f"{_two_chi_three_tau(rec)} == {_fmt(total)} > 0")
    )
    fires = Fraction(k + 4 * l) >= Fraction(total, 3)
    op = ">=" if fires else "<"
    steps.append(
        Step(
            "blowup-excess" if fires else "blowup-excess-insufficient",
            CITE_LEBRUN,
            f"{k} + 4*{l} {op} 1/3 * ({_two_chi_three_tau(rec)})",
        )
    )
    return Certificate("einstein_obstructed" if fires else "no_verdict", tuple(steps), inputs)


@dataclass(frozen=True)
class Splitting:
    x_expr: ManifoldExpr
    k: int
    l: int
    certificate: Certificate


def decompose_for_obstruction(expr: ManifoldExpr) -> list[Splitting]:
    """Enumerate splittings of a connected sum into (X, k CP2b, l S1xS3)
    for which the curvature obstruction fires, best (max k + 4l) first."""
    parts = sum_parts(expr)
    bars = sum(m for p, m in parts if p == Primitive("CP2b"))
    tubes = sum(m for p, m in parts if p == Primitive("S1xS3"))
    core = [(p, m) for p, m in parts if p not in (Primitive("CP2b"), Primitive("S1xS3"))]
    if not core:
        raise NoSplit("no summand can carry a Seiberg-Witten invariant")

    candidates = []
    for k in range(bars, -1, -1):
        for l in range(tubes, -1, -1):
            pieces = list(core)
            if bars - k:
                pieces.append((Primitive("CP2b"), bars - k))
            if tubes - l:
                pieces.append((Primitive("S1xS3"), tubes - l))
            x_expr = connected_sum_of(*pieces)
            cert = lebrun_einstein(x_expr, k, l)
            if cert.verdict == "einstein_obstructed":
                candidates.append(Splitting(x_expr, k, l, cert))
    if not candidates:
        raise NoSplit("no splitting satisfies the obstruction hypotheses")
    candidates.sort(key=lambda s: s.k + 4 * s.l, reverse=True)
    return candidates


def spin_einstein(
    pieces: list[ManifoldExpr], m: int, n_expr: ManifoldExpr, assumption: str = ""
) -> Certificate:
    """Bauer-Furuta obstruction for #_{j<=m} pieces[j] # N.

    ``pieces`` lists four candidate summands (the congruence is over all
    four even when only m of them are summed); each needs nonzero mod-2
    SW invariant, b1 = 0 and b2+ = 3 mod 4, with the four b2+ summing to
    4 mod 8.  N must have b2+ = 0.  Obstructed when
    4m - (2 chi + 3 tau)(N) >= (sum of the first m c1^2)/3.
    """
    inputs = {
        "pieces": [str(p) for p in pieces],
        "m": m,
        "N": str(n_expr),
    }
    if assumption:
        inputs["assumption"] = assumption
    steps = []
    if assumption:
        steps.append(Step("fourth-piece-assumption", assumption, None))
    if len(pieces) != 4 or m not in (2, 3, 4):
        steps.append(Step("hypothesis-failed:shape", CITE_BAUER_FURUTA, None))
        return Certificate("no_verdict", tuple(steps), inputs)

    b2ps = []
    for j, piece in enumerate(pieces):
        ev = evaluate(piece)
        rec, flags = ev.record, ev.flags
        if flags.sw_mod2_nontrivial is not YES:
            steps.append(
                Step(f"hypothesis-failed:mod2-sw(piece {j + 1})", CITE_BAUER_FURUTA, None)
            )
            return Certificate("no_verdict", tuple(steps), inputs)
        if rec.b1 != 0:
            steps.append(
                Step(f"hypothesis-failed:b1(piece {j + 1})", CITE_BAUER_FURUTA, None)
            )
            return Certificate("no_verdict", tuple(steps), inputs)
        b2p = rec.b2plus
        if b2p is None or b2p.denominator != 1:
            steps.append(
                Step(f"hypothesis-failed:b2plus-known(piece {j + 1})", CITE_BAUER_FURUTA, None)
            )
            return Certificate("no_verdict", tuple(steps), inputs)
        b2p = int(b2p)
        b2ps.append(b2p)
        if b2p % 4 != 3:
            steps.append(
                Step(
                    f"hypothesis-failed:b2plus-congruence(piece {j + 1})",
                    CITE_BAUER_FURUTA,
                    f"mod({b2p}, 4) != 3",
                )
            )
            return Certificate("no_verdict", tuple(steps), inputs)
        steps.append(
            Step(f"b2plus-congruence(piece {j + 1})", CITE_BAUER_FURUTA, f"mod({b2p}, 4) == 3")
        )
    total_b2p = sum(b2ps)
    sum_text = " + ".join(str(v) for v in b2ps)
    if total_b2p % 8 != 4:
        steps.append(
            Step("hypothesis-failed:sum-congruence", CITE_BAUER_FURUTA, f"mod({sum_text}, 8) != 4")
        )
        return Certificate("no_verdict", tuple(steps), inputs)
    steps.append(Step("sum-congruence", CITE_BAUER_FURUTA, f"mod({sum_text}, 8) == 4"))

    n_rec = evaluate(n_expr).record
    n_b2p = n_rec.b2plus
    if n_b2p is None or n_b2p != 0:
        steps.append(Step("hypothesis-failed:N-b2plus", CITE_BAUER_FURUTA, None))
        return Certificate("no_verdict", tuple(steps), inputs)
    steps.append(Step("N-b2plus-zero", CITE_BAUER_FURUTA, f"{_fmt(int(n_b2p))} == 0"))

    c1sqs = [evaluate(p).record.c1sq for p in pieces[:m]]
    lhs = 4 * m - (2 * n_rec.chi + 3 * n_rec.tau)
    rhs = Fraction(sum(c1sqs), 3)
    fires = Fraction(lhs) >= rhs
    c1_text = " + ".join(_fmt(v) for v in c1sqs)
    op = ">=" if fires else "<"
    steps.append(
        Step(
            "bauer-furuta-bound" if fires else "bauer-furuta-bound-insufficient",
            CITE_BAUER_FURUTA,
            f"4*{m} - ({_two_chi_three_tau(n_rec)}) {op} 1/3 * ({c1_text})",
        )
    )
    return Certificate(
        "einstein_obstructed" if fires else "no_verdict", tuple(steps), inputs
    )


@dataclass(frozen=True)
class HomeoKey:
    """Hambleton-Kreck data: for cyclic fundamental groups and indefinite
    forms, (pi1, b2+, b2-, parity, w2-type) classifies up to homeomorphism."""

    pi1: GroupLabel
    b2plus: int
    b2minus: int
    parity: Parity
    w2type: W2Type

    def as_dict(self) -> dict:
        return {
            "pi1": str(self.pi1),
            "b2plus": self.b2plus,
            "b2minus": self.b2minus,
            "parity": self.parity.value,
            "w2type": self.w2type.value,
        }


def homeo_key(expr: ManifoldExpr, require_indefinite: bool = True) -> HomeoKey:
    ev = evaluate(expr)
    flags, rec = ev.flags, ev.record
    if flags.pi1.kind not in ("trivial", "cyclic"):
        raise UnsupportedGroup(f"pi1 = {flags.pi1} is not trivial or finite cyclic")
    if flags.parity is Parity.UNKNOWN:
        raise UnknownFlag(f"parity unknown for {expr}")
    if flags.w2type is W2Type.UNKNOWN:
        raise UnknownFlag(f"w2-type unknown for {expr}")
    b2p, b2m = rec.b2plus, rec.b2minus
    if b2p is None or b2p.denominator != 1 or b2m.denominator != 1:
        raise UnknownFlag(f"b2+/b2- not integral for {expr}")
    b2p, b2m = int(b2p), int(b2m)
    if require_indefinite and (b2p < 1 or b2m < 1):
        raise UnknownFlag(
            f"intersection form not visibly indefinite (b2+={b2p}, b2-={b2m})"
        )
    return HomeoKey(flags.pi1, b2p, b2m, flags.parity, flags.w2type)


def homeo_equal(a: ManifoldExpr, b: ManifoldExpr) -> Certificate:
    """Compare homeomorphism keys.

    Differing keys are conclusive for any forms; equal keys conclude
    homeomorphism only on indefinite forms (or identical expressions).
    """
    ka = homeo_key(a, require_indefinite=False)
    kb = homeo_key(b, require_indefinite=False)
    if ka == kb and a != b and (ka.b2plus < 1 or ka.b2minus < 1):
        raise UnknownFlag(
            "equal keys on a definite form: the classification does not apply"
        )
    citation = CITE_FREEDMAN if ka.pi1.is_trivial else CITE_HAMBLETON_KRECK
    steps = [
        Step(
            "b2plus-compare",
            citation,
            f"{ka.b2plus} {'==' if ka.b2plus == kb.b2plus else '!='} {kb.b2plus}",
        ),
        Step(
            "b2minus-compare",
            citation,
            f"{ka.b2minus} {'==' if ka.b2minus == kb.b2minus else '!='} {kb.b2minus}",
        ),
        Step(f"parity: {ka.parity.value} vs {kb.parity.value}", citation, None),
        Step(f"w2type: {ka.w2type.value} vs {kb.w2type.value}", citation, None),
        Step(f"pi1: {ka.pi1} vs {kb.pi1}", citation, None),
    ]
    equal = ka == kb
    return Certificate(
        "homeomorphic" if equal else "not_homeomorphic",
        tuple(steps),
        inputs={"left": str(a), "right": str(b), "left_key": ka.as_dict(), "right_key": kb.as_dict()},
    )
