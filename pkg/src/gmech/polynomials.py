"""Sparse integer polynomials in edge variables.

A monomial is packed into one int with a 4-bit exponent field per
variable, so multiplying monomials is integer addition.  Exponents above 15
would carry into the neighbouring field and are rejected.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

FIELD = 4
FIELD_MASK = (1 << FIELD) - 1


@lru_cache(maxsize=1 << 16)
def spread(edge_mask: int) -> int:
    """Packed monomial of the squarefree product of the variables in ``edge_mask``."""
    out = 0
    k = 0
    while edge_mask:
        if edge_mask & 1:
            out |= 1 << FIELD * k
        edge_mask >>= 1
        k += 1
    return out


def exponent(monomial: int, var: int) -> int:
    return monomial >> FIELD * var & FIELD_MASK


class Polynomial:
    """Mapping packed monomial -> nonzero integer coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, int] | None = None):
        self.terms = {mono: c for mono, c in (terms or {}).items() if c}

    @classmethod
    def variable(cls, var: int) -> "Polynomial":
        return cls({1 << FIELD * var: 1})

    @classmethod
    def constant(cls, c: int) -> "Polynomial":
        return cls({0: c})

    @classmethod
    def from_edge_sets(cls, masks: Iterable[int]) -> "Polynomial":
        terms = defaultdict(int)
        for mask in masks:
            terms[spread(mask)] += 1
        return cls(terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        terms = defaultdict(int, self.terms)
        for mono, c in other.terms.items():
            terms[mono] += c
        return Polynomial(terms)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        terms = defaultdict(int, self.terms)
        for mono, c in other.terms.items():
            terms[mono] -= c
        return Polynomial(terms)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.max_exponent() + other.max_exponent() > FIELD_MASK:
            raise OverflowError("exponent exceeds packed field width")
        terms = defaultdict(int)
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                terms[m1 + m2] += c1 * c2
        return Polynomial(terms)

    def derivative(self, var: int) -> "Polynomial":
        shift = FIELD * var
        unit = 1 << shift
        terms = defaultdict(int)
        for mono, c in self.terms.items():
            e = mono >> shift & FIELD_MASK
            if e:
                terms[mono - unit] += c * e
        return Polynomial(terms)

    def split(self, var: int) -> tuple["Polynomial", "Polynomial"]:
        """``(A, B)`` with ``self = A + x_var * B`` for a polynomial linear in ``var``."""
        shift = FIELD * var
        unit = 1 << shift
        a, b = {}, {}
        for mono, c in self.terms.items():
            e = mono >> shift & FIELD_MASK
            if e == 0:
                a[mono] = c
            elif e == 1:
                b[mono - unit] = c
            else:
                raise ValueError("polynomial is not linear in the split variable")
        return Polynomial(a), Polynomial(b)

    def variables(self) -> set[int]:
        out = set()
        for mono in self.terms:
            k = 0
            while mono:
                if mono & FIELD_MASK:
                    out.add(k)
                mono >>= FIELD
                k += 1
        return out

    def max_exponent(self) -> int:
        return max((_max_exp(mono) for mono in self.terms), default=0)

    def is_multilinear(self) -> bool:
        return self.max_exponent() <= 1

    def evaluate(self, values: Mapping[int, Fraction]) -> Fraction:
        total = Fraction(0)
        for mono, c in self.terms.items():
            term = Fraction(c)
            k = 0
            while mono:
                e = mono & FIELD_MASK
                if e:
                    term *= Fraction(values[k]) ** e
                mono >>= FIELD
                k += 1
            total += term
        return total

    def __repr__(self):
        if not self.terms:
            return "Polynomial(0)"
        parts = []
        for mono, c in sorted(self.terms.items()):
            factors = []
            k = 0
            while mono:
                e = mono & FIELD_MASK
                if e:
                    factors.append(f"z{k}" + (f"^{e}" if e > 1 else ""))
                mono >>= FIELD
                k += 1
            parts.append(("" if c == 1 and factors else str(c)) + "*".join(factors))
        return "Polynomial(" + " + ".join(parts) + ")"


def _max_exp(mono: int) -> int:
    best = 0
    while mono:
        best = max(best, mono & FIELD_MASK)
        mono >>= FIELD
    return best

