"""Verdict certificates and their independent checker.

A certificate is a verdict plus an ordered chain of rule applications.
Each step carries a rule name, a citation and (when the rule is
arithmetic) one exact comparison written in a tiny expression language:
integer literals, ``+ - * / ( )``, ``floor(x)`` and ``mod(a, b)``,
joined by ``== != <= >= < >`` (chains allowed).  The checker re-parses
and re-evaluates every step over exact rationals, entirely independently
of the code that produced the certificate; every step must state a true
fact, including in negative verdicts.

Certificates serialize to JSON as
``{"verdict": ..., "steps": [{"rule", "citation", "arithmetic"}], "inputs": ...}``.
"""

from __future__ import annotations

import ast
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Optional

VERDICTS = (
    "einstein_obstructed",
    "hitchin_thorpe_ok",
    "hitchin_thorpe_violated",
    "homeomorphic",
    "not_homeomorphic",
    "diffeomorphic_under_rewrite_axioms",
    "no_verdict",
)


@dataclass(frozen=True)
class Step:
    rule: str
    citation: str
    arithmetic: Optional[str] = None  # None for purely qualitative steps

    def as_dict(self) -> dict:
        return {"rule": self.rule, "citation": self.citation, "arithmetic": self.arithmetic}


@dataclass(frozen=True)
class Certificate:
    verdict: str
    steps: tuple[Step, ...]
    inputs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "steps": [s.as_dict() for s in self.steps],
            "inputs": self.inputs,
        }

    def to_json(self, indent: Optional[int] = None) -> str:
        return json.dumps(self.as_dict(), indent=indent, sort_keys=True)


class CertificateError(Exception):
    pass


_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}

_CMPOPS = {
    ast.Eq: lambda a, b: a == b,
    ast.NotEq: lambda a, b: a != b,
    ast.Lt: lambda a, b: a < b,
    ast.LtE: lambda a, b: a <= b,
    ast.Gt: lambda a, b: a > b,
    ast.GtE: lambda a, b: a >= b,
}


def _eval_node(node: ast.AST) -> Fraction:
    if isinstance(node, ast.Constant):
        if isinstance(node.value, int):
            return Fraction(node.value)
        raise CertificateError(f"non-integer literal {node.value!r}")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_eval_node(node.operand)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.UAdd):
        return _eval_node(node.operand)
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_node(node.left), _eval_node(node.right))
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
        args = [_eval_node(a) for a in node.args]
        if node.func.id == "floor" and len(args) == 1:
            return Fraction(floor(args[0]))
        if node.func.id == "mod" and len(args) == 2:
            a, b = args
            if a.denominator != 1 or b.denominator != 1 or b == 0:
                raise CertificateError("mod needs integers and nonzero modulus")
            return Fraction(a.numerator % b.numerator)
        raise CertificateError(f"unknown function {node.func.id!r}")
    raise CertificateError(f"unsupported syntax: {ast.dump(node)}")


def check_arithmetic(text: str) -> bool:
    """Evaluate one comparison chain over exact rationals."""
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise CertificateError(f"unparseable arithmetic {text!r}: {exc}") from exc
    body = tree.body
    if not isinstance(body, ast.Compare):
        raise CertificateError(f"arithmetic must be a comparison: {text!r}")
    left = _eval_node(body.left)
    for op, comparator in zip(body.ops, body.comparators):
        if type(op) not in _CMPOPS:
            raise CertificateError(f"unsupported comparison in {text!r}")
        right = _eval_node(comparator)
        if not _CMPOPS[type(op)](left, right):
            return False
        left = right
    return True


def verify_certificate(cert: Certificate) -> list[str]:
    """Re-evaluate every arithmetic step; returns human-readable failures
    (empty list means the certificate is self-consistent)."""
    failures = []
    if cert.verdict not in VERDICTS:
        failures.append(f"unknown verdict {cert.verdict!r}")
    for i, step in enumerate(cert.steps):
        if step.arithmetic is None:
            continue
        try:
            ok = check_arithmetic(step.arithmetic)
        except CertificateError as exc:
            failures.append(f"step {i} ({step.rule}): {exc}")
            continue
        if not ok:
            failures.append(
                f"step {i} ({step.rule}): arithmetic is false: {step.arithmetic}"
            )
    return failures


def certificate_from_json(text: str) -> Certificate:
    data = json.loads(text)
    steps = tuple(
        Step(s["rule"], s.get("citation", ""), s.get("arithmetic")) for s in data["steps"]
    )
    return Certificate(verdict=data["verdict"], steps=steps, inputs=data.get("inputs", {}))
