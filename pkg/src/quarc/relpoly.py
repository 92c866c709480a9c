"""Exact polynomial algebra over reliability variables with idempotent exponents.

Monomials are sets of variables (r^p collapses to r as soon as products are
expanded), so a component instantiated on several redundant paths contributes
a single factor to any term.  Coefficients stay integral for every
construction used here, which makes expression equality syntactic.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

from .errors import ValidationError

Var = Hashable
Monomial = tuple[Var, ...]


def _normalize(monomials: Mapping[frozenset, int | float]) -> tuple[tuple[Monomial, int | float], ...]:
    items = []
    for vars_, coeff in monomials.items():
        if coeff == 0:
            continue
        items.append((tuple(sorted(vars_)), coeff))
    items.sort(key=lambda it: it[0])
    return tuple(items)


@dataclass(frozen=True)
class RelExpr:
    """Canonical expanded polynomial: sorted (variable set, coefficient) pairs."""

    monomials: tuple[tuple[Monomial, int | float], ...] = ()

    @staticmethod
    def const(c: int | float) -> "RelExpr":
        return RelExpr(((tuple(), c),) if c != 0 else ())

    @staticmethod
    def var(v: Var) -> "RelExpr":
        return RelExpr((((v,), 1),))

    @staticmethod
    def from_dict(monomials: Mapping[frozenset, int | float]) -> "RelExpr":
        return RelExpr(_normalize(monomials))

    @property
    def variables(self) -> set:
        return {v for vars_, _ in self.monomials for v in vars_}

    def __add__(self, other: "RelExpr") -> "RelExpr":
        acc: dict[frozenset, int | float] = {}
        for vars_, coeff in self.monomials + other.monomials:
            key = frozenset(vars_)
            acc[key] = acc.get(key, 0) + coeff
        return RelExpr.from_dict(acc)

    def __sub__(self, other: "RelExpr") -> "RelExpr":
        return self + RelExpr(tuple((vars_, -c) for vars_, c in other.monomials))

    def __mul__(self, other: "RelExpr") -> "RelExpr":
        acc: dict[frozenset, int | float] = {}
        for avars, acoeff in self.monomials:
            aset = frozenset(avars)
            for bvars, bcoeff in other.monomials:
                key = aset | frozenset(bvars)
                acc[key] = acc.get(key, 0) + acoeff * bcoeff
        return RelExpr.from_dict(acc)

    def eval(self, assignment: Mapping[Var, float]) -> float:
        total = 0.0
        for vars_, coeff in self.monomials:
            term = float(coeff)
            for v in vars_:
                if v not in assignment:
                    raise ValidationError(f"no value assigned to variable {v!r}")
                term *= assignment[v]
            total += term
        return total

    def __str__(self) -> str:
        if not self.monomials:
            return "0"
        parts = []
        for vars_, coeff in self.monomials:
            body = "*".join(str(v) for v in vars_)
            if not vars_:
                parts.append(f"{coeff}")
            elif coeff == 1:
                parts.append(body)
            elif coeff == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{coeff}*{body}")
        return " + ".join(parts).replace("+ -", "- ")


ONE = RelExpr.const(1)
ZERO = RelExpr.const(0)


def poly_mul(a: RelExpr, b: RelExpr) -> RelExpr:
    """Expanded product with r^p -> r normalization and like terms collected."""
    return a * b


def poly_eval(e: RelExpr, assignment: Mapping[Var, float]) -> float:
    """Evaluate with every variable bound; raises on a missing assignment."""
    return e.eval(assignment)


def path_success_expr(paths: Iterable[Iterable[Var]]) -> RelExpr:
    """Probability that at least one path fully succeeds: 1 - prod(1 - prod(vars)).

    Idempotent normalization makes a variable shared between paths count
    once, and duplicating a whole path leaves the expression unchanged.
    An empty path list yields the constant 0 (no connectivity).
    """
    factors = []
    for path in paths:
        vars_ = frozenset(path)
        if not vars_:
            raise ValidationError("a path must contain at least one variable")
        factors.append(ONE - RelExpr(((tuple(sorted(vars_)), 1),)))
    if not factors:
        return ZERO
    product = ONE
    for f in factors:
        product = product * f
    return ONE - product
