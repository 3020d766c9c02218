"""Ordinals below omega^omega in Cantor normal form, natural sums, and the
syntactic-depth measure used to prove that reduction terminates.

An ordinal is a finite sum of terms omega^e * c stored as (exponent,
coefficient) pairs with strictly decreasing exponents; the natural
(Hessenberg) sum adds coefficients pointwise, which keeps it commutative
and strictly monotone in both arguments.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from .errors import MalformedSyntax
from .syntax import Arr, Coh, Item, Star, Substitution, Var, dim_type


@dataclass(frozen=True)
class Ordinal:
    terms: tuple[tuple[int, int], ...] = ()  # (exponent, coefficient)

    def __post_init__(self) -> None:
        exps = [e for e, _ in self.terms]
        if exps != sorted(exps, reverse=True) or len(set(exps)) != len(exps):
            raise MalformedSyntax("ordinal exponents must strictly decrease")
        if any(e < 0 or c <= 0 for e, c in self.terms):
            raise MalformedSyntax("ordinal terms need e >= 0 and c > 0")

    def coefficient(self, exponent: int) -> int:
        for e, c in self.terms:
            if e == exponent:
                return c
        return 0

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __lt__(self, other: "Ordinal") -> bool:
        return self.terms < other.terms

    def __le__(self, other: "Ordinal") -> bool:
        return self.terms <= other.terms

    def __gt__(self, other: "Ordinal") -> bool:
        return other < self

    def __ge__(self, other: "Ordinal") -> bool:
        return other <= self

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            if e == 0:
                parts.append(str(c))
            else:
                head = "ω" if e == 1 else f"ω^{e}"
                parts.append(head if c == 1 else f"{head}·{c}")
        return " ⊞ ".join(parts)


ZERO = Ordinal()
ONE = Ordinal(((0, 1),))


def from_int(n: int) -> Ordinal:
    if n < 0:
        raise MalformedSyntax("ordinals are non-negative")
    return Ordinal(((0, n),)) if n else ZERO


def omega_pow(n: int) -> Ordinal:
    """The ordinal omega^n (so omega_pow(0) is 1)."""
    if n < 0:
        raise MalformedSyntax("exponent must be non-negative")
    return Ordinal(((n, 1),))


def nat_sum(a: Ordinal, b: Ordinal) -> Ordinal:
    coeffs: dict[int, int] = {}
    for e, c in a.terms:
        coeffs[e] = coeffs.get(e, 0) + c
    for e, c in b.terms:
        coeffs[e] = coeffs.get(e, 0) + c
    return Ordinal(tuple(sorted(coeffs.items(), reverse=True)))


def nat_sum_all(items) -> Ordinal:
    return reduce(nat_sum, items, ZERO)


def ord_lt(a: Ordinal, b: Ordinal) -> bool:
    return a < b


def ord_le(a: Ordinal, b: Ordinal) -> bool:
    return a <= b


# ---------------------------------------------------------------------------
# Syntactic depth
# ---------------------------------------------------------------------------


def syntactic_depth(item: Item) -> Ordinal:
    """Ordinal measure that strictly decreases along every reduction step.

    Variables and the base type weigh nothing; arrows add up their parts;
    a coherence adds omega^(dimension of its type) on top of the depths of
    its type and arguments.
    """
    if isinstance(item, Var):
        return ZERO
    if isinstance(item, Star):
        return ZERO
    if isinstance(item, Arr):
        return nat_sum_all(
            (
                syntactic_depth(item.src),
                syntactic_depth(item.base),
                syntactic_depth(item.tgt),
            )
        )
    if isinstance(item, Substitution):
        return nat_sum_all(syntactic_depth(t) for _, t in item.entries)
    if isinstance(item, Coh):
        return nat_sum_all(
            (
                omega_pow(dim_type(item.ty)),
                syntactic_depth(item.ty),
                syntactic_depth(item.sub),
            )
        )
    raise MalformedSyntax(f"no syntactic depth for {item!r}")
