"""Exact rational linear algebra on lists of rows.

Thin wrappers over sympy's ``DomainMatrix`` over ``QQ`` that accept and
return :class:`fractions.Fraction` / ``int`` entries.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Row = Sequence[int | Fraction]


def _qq(x) -> object:
    x = Fraction(x)
    return QQ(x.numerator, x.denominator)


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def to_domain(rows: Sequence[Row], ncols: int | None = None) -> DomainMatrix:
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return DomainMatrix([[_qq(x) for x in r] for r in rows], (len(rows), ncols), QQ)


def from_domain(m: DomainMatrix) -> list[list[Fraction]]:
    return [[_frac(x) for x in row] for row in m.to_list()]


def rank(rows: Sequence[Row], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return to_domain(rows, ncols).rank()


def det(rows: Sequence[Row]) -> Fraction:
    if not rows:
        return Fraction(1)
    return _frac(to_domain(rows).det())


def transpose(rows: Sequence[Row]) -> list[list]:
    return [list(c) for c in zip(*rows)]


def solve(rows: Sequence[Row], rhs: Row) -> list[Fraction]:
    """Solve ``M x = rhs`` for square nonsingular ``M``."""
    m = to_domain(rows)
    b = DomainMatrix([[_qq(x)] for x in rhs], (len(rhs), 1), QQ)
    x = m.lu_solve(b)
    return [_frac(r[0]) for r in x.to_list()]


def inverse(rows: Sequence[Row]) -> list[list[Fraction]]:
    return from_domain(to_domain(rows).inv())


def nullspace(rows: Sequence[Row], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : M x = 0}``."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ns = to_domain(rows, ncols).nullspace()
    return from_domain(ns)


def matvec(rows: Sequence[Row], v: Row) -> list:
    return [sum(a * b for a, b in zip(r, v)) for r in rows]


def integral_primitive(v: Row) -> tuple[int, ...]:
    """Scale a rational vector by a positive factor to a primitive integer vector."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)
