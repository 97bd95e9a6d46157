"""Classes of linear cycles, quadrics and witnesses on X^n_{r,s}.

Cycles are described by their dimension ``d`` and live in ``N^(n-d)``.
Lines are indexed ``1..r`` and points ``1..s``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

from . import linalg
from .ring import (
    GradedClass,
    SpaceSignature,
    canonical_basis,
    from_signed,
    to_signed,
)

__all__ = [
    "IncidenceProfile",
    "Feasibility",
    "ConstraintError",
    "LabeledClass",
    "WitnessClass",
    "feasible_profile",
    "feasible_quadric_profile",
    "proper_transform_linear",
    "proper_transform_quadric",
    "exceptional_line_cycle",
    "exceptional_point_cycle",
    "divisor_with_multiplicities",
    "linear_cone_generators",
    "witness",
    "WITNESS_NAMES",
    "generators_to_json",
    "generators_from_json",
]


class ConstraintError(ValueError):
    """Raised for an incidence profile that cannot be realised."""

    def __init__(self, message: str, expected_dim: int):
        super().__init__(message)
        self.expected_dim = expected_dim


def _sign(p: int) -> int:
    return -1 if p % 2 else 1


@dataclass(frozen=True)
class IncidenceProfile:
    """A ``dim``-dimensional subvariety of P^n that contains the lines in
    ``contains``, meets the lines in ``meets`` and passes through the points
    in ``points``."""

    space: SpaceSignature
    dim: int
    contains: frozenset[int] = frozenset()
    meets: frozenset[int] = frozenset()
    points: frozenset[int] = frozenset()

    def __post_init__(self):
        for name in ("contains", "meets", "points"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        n, r, s = self.space.n, self.space.r, self.space.s
        if not 0 <= self.dim <= n - 1:
            raise ValueError(f"dimension {self.dim} outside [0, {n - 1}]")
        if self.contains & self.meets:
            raise ValueError("a line cannot be both contained and merely met")
        if any(not 1 <= i <= r for i in self.contains | self.meets):
            raise ValueError(f"line index outside 1..{r}")
        if any(not 1 <= j <= s for j in self.points):
            raise ValueError(f"point index outside 1..{s}")

    @property
    def spanned_dim(self) -> int:
        """Dimension of the span of the contained lines and points."""
        if not self.contains and not self.points:
            return -1
        return min(self.space.n, 2 * len(self.contains) + len(self.points) - 1)

    @property
    def span_ok(self) -> bool:
        return self.spanned_dim <= self.dim

    def label(self, kind: str | None = None) -> str:
        kind = kind or _linear_name(self.dim, self.space.n)
        parts = [kind]
        for tag, idx in (("C", self.contains), ("T", self.meets), ("P", self.points)):
            if idx:
                parts.append(f"{tag}={{{','.join(map(str, sorted(idx)))}}}")
        return " ".join(parts)


def _linear_name(d: int, n: int) -> str:
    if d == n - 1:
        return "hyperplane"
    return {0: "point", 1: "line", 2: "plane"}.get(d, f"{d}-plane")


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    expected_dim: int

    def __bool__(self) -> bool:
        return self.feasible


def feasible_profile(p: IncidenceProfile) -> Feasibility:
    """Dimension count in G(d, n) with the incidence codimensions
    2(n-d) per contained line, n-d-1 per met line, n-d per point."""
    n, d = p.space.n, p.dim
    c = n - d
    expected = (d + 1) * c - (2 * c * len(p.contains) + (c - 1) * len(p.meets) + c * len(p.points))
    return Feasibility(expected >= 0 and p.span_ok, expected)


def feasible_quadric_profile(p: IncidenceProfile) -> Feasibility:
    """Dimension count for a quadric of dimension ``d`` spanning a
    ``(d+1)``-plane: choose the plane, then the quadric inside it."""
    n, d = p.space.n, p.dim
    if d > n - 1:
        return Feasibility(False, -1)
    c = n - d - 1  # codimension of the spanning plane
    total = (d + 2) * c + comb(d + 3, 2) - 1
    cost = len(p.contains) * (2 * c + 3) + len(p.meets) * (max(0, c - 1) + 1) + len(p.points) * (c + 1)
    expected = total - cost
    span = -1 if not p.contains and not p.points else 2 * len(p.contains) + len(p.points) - 1
    return Feasibility(expected >= 0 and span <= d + 1, expected)


def _coeffs_to_class(space: SpaceSignature, k: int, coeffs: Mapping[tuple, int]) -> GradedClass:
    """Build ``sum c * H^a X^b`` from raw exponents and reduce it."""
    h = GradedClass.monomial(space, "H")
    total = GradedClass.zero(space, k)
    for (a, gen, b), c in coeffs.items():
        if not c:
            continue
        if gen == 0:
            term = h ** a if a else GradedClass.monomial(space, "1")
        else:
            x = GradedClass.monomial(space, f"E{gen}" if gen > 0 else f"e{-gen}")
            term = x ** b
            if a:
                term = (h ** a) * term
        total = total + term.scale(c)
    return total


def _transform(p: IncidenceProfile, degree: int, mixed_contain: int) -> GradedClass:
    space, k = p.space, p.space.n - p.dim
    coeffs: dict[tuple, int] = {(k, 0, 0): degree}
    if k == 1:
        # divisors: a contained centre lowers the multiplicity by one,
        # a met line imposes nothing
        for i in p.contains:
            coeffs[(0, i, 1)] = -1
        for j in p.points:
            coeffs[(0, -j, 1)] = -1
        return _coeffs_to_class(space, k, coeffs)
    for i in p.contains:
        coeffs[(1, i, k - 1)] = _sign(k - 1) * mixed_contain
        coeffs[(0, i, k)] = _sign(k)
    for i in p.meets:
        coeffs[(1, i, k - 1)] = _sign(k - 1)
    for j in p.points:
        coeffs[(0, -j, k)] = _sign(k)
    return _coeffs_to_class(space, k, coeffs)


def proper_transform_linear(p: IncidenceProfile) -> GradedClass:
    """Class of the proper transform of a general linear space with the
    given incidences.  Degenerate profiles (the space lies inside a centre)
    give the zero class."""
    f = feasible_profile(p)
    if not f.feasible:
        raise ConstraintError(f"no {p.label()} exists for general centres (expected dimension {f.expected_dim})", f.expected_dim)
    return _transform(p, 1, p.space.n - p.dim)


def proper_transform_quadric(p: IncidenceProfile, assume_feasible: bool = False) -> GradedClass:
    """Class of the proper transform of a quadric of dimension ``p.dim``."""
    f = feasible_quadric_profile(p)
    if not (f.feasible or assume_feasible):
        raise ConstraintError(f"no {p.label('quadric')} exists for general centres (expected dimension {f.expected_dim})", f.expected_dim)
    return _transform(p, 2, p.space.n - p.dim + 1)


def divisor_with_multiplicities(space: SpaceSignature, degree: int, line_mult: Mapping[int, int], point_mult: Mapping[int, int] | None = None) -> GradedClass:
    """Proper transform of a degree-``degree`` hypersurface with the given
    multiplicities along the centres."""
    coeffs = {"H": degree}
    coeffs.update({f"E{i}": -m for i, m in line_mult.items()})
    coeffs.update({f"e{j}": -m for j, m in (point_mult or {}).items()})
    return GradedClass.from_dict(space, 1, coeffs)


# -- cycles inside exceptional divisors --------------------------------------------
#
# E_i = P^1 x P^(n-2).  Its ring is Q[u, w]/(u^2, ...) with u the fibre class
# over L_i and w = v + c*u for a ruling class v; integration is
#   int u w^(n-2) = 1,   int w^(n-1) = c (n-1).
# Restrictions: H -> u, E_i -> (1+c) u - w, other centres -> 0.


def _poly_mul(p, q):
    out: dict[tuple[int, int], Fraction] = {}
    for (a1, b1), x in p.items():
        for (a2, b2), y in q.items():
            if a1 + a2 > 1:
                continue
            key = (a1 + a2, b1 + b2)
            out[key] = out.get(key, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _poly_pow(p, m):
    out = {(0, 0): Fraction(1)}
    for _ in range(m):
        out = _poly_mul(out, p)
    return out


def _integrate_line(p, n, c):
    return p.get((1, n - 2), 0) + p.get((0, n - 1), 0) * c * (n - 1)


def _solve_from_pairings(space: SpaceSignature, k: int, pairings: Sequence[Fraction]) -> GradedClass:
    """Class in N^k with prescribed pairings against the basis of N^(n-k)."""
    from .ring import pairing_matrix

    m = pairing_matrix(space, k)  # rows N^k, cols N^(n-k)
    coords = linalg.solve(linalg.transpose(m), pairings)
    return GradedClass(space, k, tuple(coords))


def exceptional_line_cycle(space: SpaceSignature, i: int, shape: str, d: int, normalization: int = 0) -> GradedClass:
    """Class of a linear cycle of dimension ``d`` in ``E_i``.

    ``shape="fiber"`` is {point} x P^d (0 <= d <= n-2); ``shape="sweep"`` is
    P^1 x P^(d-1) (1 <= d <= n-1).  The class is obtained by solving the
    pairing system; ``normalization`` shifts the ruling class and must not
    change the answer.
    """
    n = space.n
    if not 1 <= i <= space.r:
        raise ValueError(f"line index {i} outside 1..{space.r}")
    c = Fraction(normalization)
    if shape == "fiber":
        if not 0 <= d <= n - 2:
            raise ValueError(f"fibre slices have dimension 0..{n - 2}")
        cycle = {(1, n - 2 - d): Fraction(1)}
    elif shape == "sweep":
        if not 1 <= d <= n - 1:
            raise ValueError(f"swept cycles have dimension 1..{n - 1}")
        cycle = _poly_pow({(0, 1): Fraction(1), (1, 0): -c}, n - 1 - d)
    else:
        raise ValueError(f"unknown shape {shape!r}")
    h_res = {(1, 0): Fraction(1)}
    e_res = {(1, 0): 1 + c, (0, 1): Fraction(-1)}
    pairings = []
    for m in canonical_basis(space, d):
        a, gen, b = m.raw()
        if gen < 0 or (gen > 0 and gen != i):
            pairings.append(Fraction(0))
            continue
        res = _poly_mul(_poly_pow(h_res, a), _poly_pow(e_res, b))
        pairings.append(_integrate_line(_poly_mul(res, cycle), n, c))
    return _solve_from_pairings(space, n - d, pairings)


def exceptional_point_cycle(space: SpaceSignature, j: int, d: int) -> GradedClass:
    """Class of a ``d``-dimensional linear subspace of ``e_j = P^(n-1)``,
    solved from the restrictions ``e_j -> -t`` and ``H -> 0``."""
    n = space.n
    if not 1 <= j <= space.s:
        raise ValueError(f"point index {j} outside 1..{space.s}")
    if not 0 <= d <= n - 1:
        raise ValueError(f"linear subspaces of e_j have dimension 0..{n - 1}")
    pairings = []
    for m in canonical_basis(space, d):
        a, gen, b = m.raw()
        if a == 0 and gen == 0:  # the unit, d == 0
            pairings.append(Fraction(1))
        elif a == 0 and gen == -j:
            pairings.append(Fraction(_sign(b)))
        else:
            pairings.append(Fraction(0))
    return _solve_from_pairings(space, n - d, pairings)


# -- linear cone generators -----------------------------------------------------------


@dataclass(frozen=True)
class LabeledClass:
    cls: GradedClass
    provenance: str

    def to_json(self) -> dict:
        return {"class": self.cls.to_json(), "provenance": self.provenance}

    @classmethod
    def from_json(cls, d: Mapping) -> "LabeledClass":
        return cls(GradedClass.from_json(d["class"]), d["provenance"])


def _subsets(items: Sequence[int]):
    for size in range(len(items) + 1):
        yield from itertools.combinations(items, size)


def feasible_profiles(space: SpaceSignature, d: int) -> Iterable[IncidenceProfile]:
    lines = range(1, space.r + 1)
    pts = range(1, space.s + 1)
    for C in _subsets(list(lines)):
        rest = [i for i in lines if i not in C]
        for T in _subsets(rest):
            for P in _subsets(list(pts)):
                p = IncidenceProfile(space, d, frozenset(C), frozenset(T), frozenset(P))
                if feasible_profile(p).feasible:
                    yield p


def linear_cone_generators(space: SpaceSignature, k: int) -> list[LabeledClass]:
    """Classes of all ``k``-dimensional linear subvarieties, one per
    distinct class, sorted by signed coordinates."""
    n = space.n
    if not 0 <= k <= n - 1:
        raise ValueError(f"cycle dimension {k} outside [0, {n - 1}]")
    found: dict[tuple, LabeledClass] = {}

    def add(cls: GradedClass, label: str):
        if cls.is_zero():
            return
        key = tuple(to_signed(cls).coords)
        found.setdefault(key, LabeledClass(cls, label))

    for p in feasible_profiles(space, k):
        add(proper_transform_linear(p), p.label())
    for i in range(1, space.r + 1):
        if k <= n - 2:
            add(exceptional_line_cycle(space, i, "fiber", k), f"exc-line-fiber i={i}")
        if k >= 1:
            add(exceptional_line_cycle(space, i, "sweep", k), f"exc-line-sweep i={i}")
    for j in range(1, space.s + 1):
        add(exceptional_point_cycle(space, j, k), f"exc-point j={j}")
    return [found[key] for key in sorted(found)]


def generators_to_json(space: SpaceSignature, k: int, gens: Sequence[LabeledClass]) -> dict:
    return {"space": space.to_json(), "k": k, "generators": [g.to_json() for g in gens]}


def generators_from_json(d: Mapping) -> tuple[SpaceSignature, int, list[LabeledClass]]:
    return SpaceSignature.from_json(d["space"]), int(d["k"]), [LabeledClass.from_json(g) for g in d["generators"]]


# -- witnesses ------------------------------------------------------------------------


@dataclass(frozen=True)
class WitnessClass:
    name: str
    cls: GradedClass
    provenance: str
    cycle_dim: int

    def to_json(self) -> dict:
        return {"name": self.name, "class": self.cls.to_json(), "provenance": self.provenance, "cycleDim": self.cycle_dim}


def _segre_cubic() -> GradedClass:
    space = SpaceSignature(5, 4)
    return from_signed(space, 2, [3] + [-4] * 4 + [-1] * 4)


def _quadric_surface() -> GradedClass:
    space = SpaceSignature(4, 5)
    p = IncidenceProfile(space, 2, frozenset({1, 2}), frozenset({3, 4, 5}))
    return proper_transform_quadric(p)


def _cubic_divisor() -> GradedClass:
    return divisor_with_multiplicities(SpaceSignature(5, 4), 3, {1: 2, 2: 2, 3: 2, 4: 1})


_WITNESSES = {
    "segre-cubic-x54": (_segre_cubic, "witness segre-cubic-x54: Segre cubic threefold through 4 lines as rulings", 3),
    "quadric-surface-x45": (_quadric_surface, "witness quadric-surface-x45: quadric C={1,2} T={3,4,5}", 2),
    "cubic-divisor-x54": (_cubic_divisor, "witness cubic-divisor-x54: cubic double along L1,L2,L3 containing L4", 4),
}

WITNESS_NAMES = tuple(sorted(_WITNESSES))


def witness(name: str) -> WitnessClass:
    try:
        build, prov, dim = _WITNESSES[name]
    except KeyError:
        raise KeyError(f"unknown witness {name!r}; known: {', '.join(WITNESS_NAMES)}") from None
    return WitnessClass(name, build(), prov, dim)
