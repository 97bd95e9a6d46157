"""Exact rational polyhedral cones: duality under a bilinear pairing,
extreme rays, Farkas membership, permutation orbits and the shift order
used to shorten generator lists.

Vectors are integer tuples.  A cone may carry a ``pairing`` matrix ``M``:
the pairing of a dual vector ``x`` with a vector ``y`` of the cone is
``x^T M y``.  Without one, the pairing is the dot product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels as K
from . import linalg
from .farkas import farkas

Vector = tuple[int, ...]

__all__ = [
    "RayCone",
    "MembershipResult",
    "OrbitSpec",
    "DecompositionResult",
    "primitive",
    "double_description",
    "dual_cone",
    "membership",
    "extreme_rays",
    "same_cone",
    "orbit_compress",
    "orbit_expand",
    "maximally_incident_reduce",
    "decomposition_check",
    "shift_certificate",
    "shift_reachable",
    "ShiftOrder",
]


def primitive(v: Sequence, oriented: bool = False) -> Vector:
    """Primitive integer vector on the ray through ``v``.

    With ``oriented=True`` the sign is also normalised (first nonzero entry
    positive); used for lineality directions, which have no orientation.
    """
    out = linalg.integral_primitive(v)
    if oriented:
        for x in out:
            if x:
                if x < 0:
                    out = tuple(-y for y in out)
                break
    return out


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


# -- double description ----------------------------------------------------------


def double_description(constraints: Iterable[Sequence[int]], d: int) -> tuple[list[Vector], list[Vector]]:
    """Extreme rays and a lineality basis of ``{x in Q^d : a . x >= 0}``.

    Constraints are inserted in lexicographic order; the output is sorted.
    """
    cons = sorted({primitive(a) for a in constraints if any(a)})
    m = len(cons)
    lin: list[list[int]] = [[int(i == j) for j in range(d)] for i in range(d)]
    rays = np.zeros((0, d), dtype=np.int64)
    zero = np.zeros((0, m), dtype=bool)

    for c, a in enumerate(cons):
        sl = [_dot(a, l) for l in lin]
        piv = next((t for t, x in enumerate(sl) if x), None)
        if piv is not None:
            l0 = lin[piv]
            s0 = sl[piv]
            if s0 < 0:
                l0 = [-x for x in l0]
                s0 = -s0
            new_lin = []
            # project the remaining lineality and the rays onto a . x = 0;
            # l0 itself becomes a ray (zero on every earlier constraint)
            for t, l in enumerate(lin):
                if t != piv:
                    st = sl[t]
                    new_lin.append(list(primitive([s0 * x - st * y for x, y in zip(l, l0)], oriented=True)))
            lin = new_lin
            moved = []
            for r in rays:
                r = [int(x) for x in r]
                sr = _dot(a, r)
                moved.append(list(primitive([s0 * x - sr * y for x, y in zip(r, l0)])))
            moved.append(list(primitive(l0)))
            rays = _as_array(moved, d)
            zrow = np.zeros((1, m), dtype=bool)
            zrow[0, :c] = True
            zero = np.vstack([zero, zrow])
            zero[:-1, c] = True
            continue

        arr_a = _as_vector(a, rays.dtype)
        if rays.dtype != object and K.max_abs(rays) * K.max_abs(arr_a) * d >= K.INT64_SAFE:
            rays, arr_a = rays.astype(object), _as_vector(a, object)
        s = K.dot(rays, arr_a)
        pos = np.nonzero(s > 0)[0]
        neg = np.nonzero(s < 0)[0]
        zer = np.nonzero(s == 0)[0]
        if len(neg) == 0:
            zero[zer, c] = True
            continue
        if rays.dtype != object and K.max_abs(s) * K.max_abs(rays) * 2 >= K.INT64_SAFE:
            rays = rays.astype(object)
            s = K.dot(rays, _as_vector(a, object))
        zbits = K.pack_bits(zero[:, :c]) if c else np.zeros((rays.shape[0], 1), dtype=np.uint64)
        pairs = K.adjacent_pairs(zbits, pos, neg, d - len(lin) - 2)
        new = K.combine(rays, s, pairs)
        new_zero = zero[pairs[:, 0]] & zero[pairs[:, 1]]
        new_zero[:, c] = True
        keep = np.sort(np.concatenate([pos, zer]))
        kept_zero = zero[keep]
        kept_zero[:, c] = s[keep] == 0
        rays = np.concatenate([rays[keep], new.astype(rays.dtype)]) if len(new) else rays[keep]
        zero = np.concatenate([kept_zero, new_zero]) if len(new) else kept_zero

    out_rays = sorted({tuple(int(x) for x in r) for r in rays})
    out_lin = _lineality_basis(lin, d)
    return out_rays, out_lin


def _as_array(rows: list[list[int]], d: int) -> np.ndarray:
    if not rows:
        return np.zeros((0, d), dtype=np.int64)
    big = max(abs(x) for r in rows for x in r)
    dtype = object if big >= K.INT64_SAFE else np.int64
    return np.array(rows, dtype=dtype).reshape(len(rows), d)


def _as_vector(a: Sequence[int], dtype) -> np.ndarray:
    if dtype == object:
        return np.array(list(a), dtype=object)
    return np.array(a, dtype=np.int64)


def _lineality_basis(vectors: Sequence[Sequence], d: int) -> list[Vector]:
    """Canonical integral basis (reduced row echelon form) of a span."""
    if not vectors:
        return []
    m = linalg.to_domain(vectors, d).rref()[0]
    rows = [r for r in linalg.from_domain(m) if any(r)]
    return [primitive(r, oriented=True) for r in rows]


# -- cones ---------------------------------------------------------------------------


class ConeError(ValueError):
    pass


@dataclass(frozen=True)
class RayCone:
    """Cone generated by integer rays (plus an optional lineality space)."""

    ambient_dim: int
    rays: tuple[Vector, ...] = ()
    facets: tuple[Vector, ...] | None = None
    pairing: tuple[tuple[Fraction, ...], ...] | None = None
    lineality: tuple[Vector, ...] = field(default=())

    def __post_init__(self):
        d = self.ambient_dim
        rays = set()
        for r in self.rays:
            if len(r) != d:
                raise ConeError(f"ray {r} has length {len(r)}, expected {d}")
            if any(r):
                rays.add(primitive(r))
        object.__setattr__(self, "rays", tuple(sorted(rays)))
        object.__setattr__(self, "lineality", tuple(_lineality_basis(self.lineality, d)))
        if self.pairing is not None:
            p = tuple(tuple(Fraction(x) for x in row) for row in self.pairing)
            if len(p) != len(p[0]) or len(p[0]) != d:
                raise ConeError("pairing matrix must be square of the ambient dimension")
            object.__setattr__(self, "pairing", p)
        if self.facets is not None:
            facets = tuple(sorted({primitive(f) for f in self.facets if any(f)}))
            object.__setattr__(self, "facets", facets)
            for f in facets:
                for g in self.rays:
                    if _dot(f, g) < 0:
                        raise ConeError(f"facet {f} is negative on ray {g}")
                for l in self.lineality:
                    if _dot(f, l) != 0:
                        raise ConeError(f"facet {f} is not constant on the lineality space")

    # -- derived data ----------------------------------------------------------
    @cached_property
    def _hrep(self) -> tuple[tuple[Vector, ...], tuple[Vector, ...]]:
        cons = list(self.rays)
        for l in self.lineality:
            cons += [l, tuple(-x for x in l)]
        return tuple(map(tuple, double_description(cons, self.ambient_dim)))

    def with_facets(self) -> "RayCone":
        """Same cone with its irredundant inequality description attached;
        equations appear as opposite pairs."""
        ineq, eq = self._hrep
        facets = list(ineq)
        for l in eq:
            facets += [l, tuple(-x for x in l)]
        return RayCone(self.ambient_dim, self.rays, tuple(facets), self.pairing, self.lineality)

    def contains(self, v: Sequence) -> bool:
        ineq, eq = self._hrep
        return all(_dot(f, v) >= 0 for f in ineq) and all(_dot(l, v) == 0 for l in eq)

    @property
    def is_pointed(self) -> bool:
        return not self.lineality and linalg.rank(list(self._hrep[0]) + list(self._hrep[1]), self.ambient_dim) == self.ambient_dim

    def to_json(self) -> dict:
        d = {"ambientDim": self.ambient_dim, "rays": [list(r) for r in self.rays]}
        if self.pairing is not None:
            d["pairing"] = [[_num(x) for x in row] for row in self.pairing]
        if self.lineality:
            d["lineality"] = [list(l) for l in self.lineality]
        if self.facets is not None:
            d["facets"] = [list(f) for f in self.facets]
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> "RayCone":
        pairing = d.get("pairing")
        if pairing is not None:
            pairing = tuple(tuple(Fraction(x) for x in row) for row in pairing)
        return cls(
            int(d["ambientDim"]),
            tuple(tuple(int(x) for x in r) for r in d.get("rays", [])),
            tuple(tuple(int(x) for x in f) for f in d["facets"]) if d.get("facets") is not None else None,
            pairing,
            tuple(tuple(int(x) for x in l) for l in d.get("lineality", [])),
        )


def _num(x: Fraction):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else str(x)


def _transpose(m):
    return tuple(tuple(c) for c in zip(*m))


def dual_cone(c: RayCone) -> RayCone:
    """``{x : <x, g> >= 0 for all g in c}`` under the cone's pairing."""
    d = c.ambient_dim
    if c.pairing is None:
        transform = lambda g: g  # noqa: E731
    else:
        transform = lambda g: linalg.integral_primitive(linalg.matvec(c.pairing, g))  # noqa: E731
    cons = [transform(g) for g in c.rays]
    for l in c.lineality:
        t = transform(l)
        cons += [t, tuple(-x for x in t)]
    rays, lin = double_description(cons, d)
    pairing = None if c.pairing is None else _transpose(c.pairing)
    return RayCone(d, tuple(rays), None, pairing, tuple(lin))


@dataclass(frozen=True)
class MembershipResult:
    inside: bool
    combination: dict[int, Fraction] | None = None
    separator: tuple[Fraction, ...] | None = None
    separator_class: Vector | None = None

    def __bool__(self) -> bool:
        return self.inside

    def verify(self, v: Sequence, cone: RayCone) -> bool:
        gens = _generators(cone)
        if self.inside:
            total = [Fraction(0)] * cone.ambient_dim
            for idx, lam in self.combination.items():
                if lam < 0 and idx < len(cone.rays):
                    return False
                total = [t + lam * x for t, x in zip(total, gens[idx])]
            return total == [Fraction(x) for x in v]
        w = self.separator
        return all(_dot(w, g) >= 0 for g in gens) and _dot(w, v) < 0

    def to_json(self) -> dict:
        if self.inside:
            return {"inside": True, "combination": {str(i): str(x) for i, x in self.combination.items()}}
        d = {"inside": False, "separator": [str(x) for x in self.separator]}
        if self.separator_class is not None:
            d["separatorClass"] = list(self.separator_class)
        return d


def _generators(c: RayCone) -> list[Vector]:
    gens = list(c.rays)
    for l in c.lineality:
        gens += [l, tuple(-x for x in l)]
    return gens


def membership(v: Sequence, c: RayCone) -> MembershipResult:
    """Exact Farkas alternative.  Inside: nonnegative combination keyed by
    ray index (lineality directions follow the rays, each as a +/- pair).
    Outside: a functional ``w`` with ``w . g >= 0`` on all generators and
    ``w . v < 0``; with a pairing, also the dual class realising it."""
    if len(v) != c.ambient_dim:
        raise ConeError(f"vector of length {len(v)} does not live in dimension {c.ambient_dim}")
    gens = _generators(c)
    res = farkas(gens, v)
    if res.feasible:
        return MembershipResult(True, combination=res.combination)
    w = tuple(res.separator)
    sep_class = None
    if c.pairing is not None:
        x = linalg.solve(_transpose(c.pairing), w)
        sep_class = linalg.integral_primitive(x)
    return MembershipResult(False, separator=w, separator_class=sep_class)


def extreme_rays(c: RayCone) -> RayCone:
    """Minimal generating subset (modulo the lineality space)."""
    d = c.ambient_dim
    ineq, eq = c._hrep
    eq = list(eq)
    lin = _lineality_basis(_nullspace_int(list(ineq) + eq, d), d)
    lam = len(lin)
    keep = []
    seen_faces = set()
    for g in c.rays:
        tight = tuple(i for i, f in enumerate(ineq) if _dot(f, g) == 0)
        if len(tight) == len(ineq):
            continue  # inside the lineality space
        if linalg.rank([ineq[i] for i in tight] + eq, d) != d - lam - 1:
            continue
        if tight in seen_faces:
            continue
        seen_faces.add(tight)
        keep.append(g)
    return RayCone(d, tuple(keep), None, c.pairing, tuple(lin))


def _nullspace_int(rows: Sequence[Sequence], d: int) -> list[Vector]:
    return [linalg.integral_primitive(v) for v in linalg.nullspace(rows, d)]


def same_cone(a: RayCone, b: RayCone) -> bool:
    return all(b.contains(g) for g in _generators(a)) and all(a.contains(g) for g in _generators(b))


# -- orbits ----------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitSpec:
    """Coordinate blocks permuted by S_r x S_s.

    ``line_blocks[i]`` lists the coordinates belonging to line ``i`` (for
    codimension-2 classes: its ``F`` and ``G`` coordinate); likewise for
    points.  Coordinates not in any block are fixed.
    """

    dim: int
    line_blocks: tuple[tuple[int, ...], ...] = ()
    point_blocks: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        seen = set()
        for blocks in (self.line_blocks, self.point_blocks):
            widths = {len(b) for b in blocks}
            if len(widths) > 1:
                raise ValueError("malformed block spec: blocks of one kind must have equal width")
            for b in blocks:
                for i in b:
                    if not 0 <= i < self.dim or i in seen:
                        raise ValueError(f"malformed block spec: coordinate {i} repeated or out of range")
                    seen.add(i)

    @classmethod
    def for_basis(cls, monomials) -> "OrbitSpec":
        """Blocks read off a canonical basis (see :mod:`cyclecones.ring`)."""
        lines: dict[int, list[int]] = {}
        points: dict[int, list[int]] = {}
        for pos, m in enumerate(monomials):
            if m.kind in ("line_mixed", "line_pure"):
                lines.setdefault(m.index, []).append(pos)
            elif m.kind == "point_pure":
                points.setdefault(m.index, []).append(pos)
        return cls(
            len(monomials),
            tuple(tuple(lines[i]) for i in sorted(lines)),
            tuple(tuple(points[j]) for j in sorted(points)),
        )

    def act(self, v: Sequence, line_perm: Sequence[int], point_perm: Sequence[int]) -> Vector:
        out = list(v)
        for src, dst in enumerate(line_perm):
            for a, b in zip(self.line_blocks[src], self.line_blocks[dst]):
                out[b] = v[a]
        for src, dst in enumerate(point_perm):
            for a, b in zip(self.point_blocks[src], self.point_blocks[dst]):
                out[b] = v[a]
        return tuple(out)

    def group(self):
        return itertools.product(
            itertools.permutations(range(len(self.line_blocks))),
            itertools.permutations(range(len(self.point_blocks))),
        )

    def orbit(self, v: Sequence) -> set[Vector]:
        return {self.act(v, lp, pp) for lp, pp in self.group()}

    def canonical(self, v: Sequence) -> Vector:
        """Lexicographically smallest element of the orbit of ``v``."""
        if self._sortable:
            return self._canonical_sorted(v)
        return min(self.orbit(v))

    @cached_property
    def _sortable(self) -> bool:
        # blocks laid out slot-major with ascending block order: sorting the
        # blocks by their entries is then exactly the lexicographic minimum
        for blocks in (self.line_blocks, self.point_blocks):
            if not blocks:
                continue
            for slot in range(len(blocks[0])):
                col = [b[slot] for b in blocks]
                if col != list(range(col[0], col[0] + len(col))):
                    return False
            for slot in range(1, len(blocks[0])):
                if blocks[0][slot] < blocks[-1][slot - 1]:
                    return False
        return True

    def _canonical_sorted(self, v: Sequence) -> Vector:
        out = list(v)
        for blocks in (self.line_blocks, self.point_blocks):
            if not blocks:
                continue
            entries = sorted(tuple(v[i] for i in b) for b in blocks)
            for b, e in zip(blocks, entries):
                for i, x in zip(b, e):
                    out[i] = x
        return tuple(out)


def orbit_compress(rays: Iterable[Sequence], spec: OrbitSpec) -> list[Vector]:
    return sorted({spec.canonical(tuple(r)) for r in rays})


def orbit_expand(reps: Iterable[Sequence], spec: OrbitSpec) -> list[Vector]:
    out: set[Vector] = set()
    for r in reps:
        out |= spec.orbit(tuple(r))
    return sorted(out)


# -- shift order ------------------------------------------------------------------


class ShiftOrder:
    """The order ``w <= v`` iff ``v - w`` is a nonnegative integer combination
    of fixed, linearly independent shift rays.

    Coefficients are read off ``t`` pivot coordinates through one exact
    inverse (scaled to integers by its common denominator), so testing many
    pairs is plain integer array arithmetic.
    """

    def __init__(self, shift_rays: Sequence[Sequence[int]], d: int):
        self.d = d
        self.shifts = np.array([list(map(int, s)) for s in shift_rays], dtype=object).reshape(-1, d)
        t = self.shifts.shape[0]
        if t and linalg.rank(self.shifts.tolist(), d) != t:
            raise ValueError("shift rays must be linearly independent")
        if t:
            _, piv = linalg.to_domain(self.shifts.tolist(), d).rref()
            self.pivots = list(piv)
            inv = linalg.inverse([[self.shifts[i][j] for j in self.pivots] for i in range(t)])
            self.den = 1
            for row in inv:
                for x in row:
                    self.den = self.den * x.denominator // gcd(self.den, x.denominator)
            self.inv = np.array([[int(x * self.den) for x in row] for row in inv], dtype=object)
        else:
            self.pivots, self.den, self.inv = [], 1, np.zeros((0, 0), dtype=object)

    def _dtype(self, bound: int):
        big = max([1] + [abs(int(x)) for x in self.inv.flat] + [abs(int(x)) for x in self.shifts.flat])
        return np.int64 if bound * big * (len(self.pivots) + 1) * self.den < K.INT64_SAFE else object

    def reachable_mask(self, v: Sequence, ws: np.ndarray) -> np.ndarray:
        """Boolean mask over the rows ``w`` of ``ws``: whether ``w <= v``."""
        bound = 2 * max(1, K.max_abs(ws), max((abs(int(x)) for x in v), default=0))
        dt = self._dtype(bound)
        diff = np.asarray(v, dtype=object).astype(dt)[None, :] - ws.astype(dt)
        if not len(self.pivots):
            return ~diff.astype(bool).any(axis=1)
        coef = diff[:, self.pivots].dot(self.inv.astype(dt))
        ok = (coef >= 0).all(axis=1) & (coef % self.den == 0).all(axis=1)
        ok &= (coef.dot(self.shifts.astype(dt)) == diff * self.den).all(axis=1)
        return ok

    def below(self, w: Sequence, v: Sequence) -> bool:
        return bool(self.reachable_mask(v, np.array([list(map(int, w))], dtype=object))[0])


def shift_reachable(v: Sequence, w: Sequence, shift_rays: Sequence[Sequence[int]]) -> bool:
    """Whether ``v = w + (nonnegative integer combination of shift rays)``."""
    return ShiftOrder(shift_rays, len(v)).below(w, v)


def maximally_incident_reduce(rays: Iterable[Sequence], shift_rays: Sequence[Sequence[int]]) -> list[Vector]:
    """Minimal elements of the order ``w <= v`` iff ``v - w`` is a
    nonnegative integer combination of ``shift_rays``."""
    rays = sorted({tuple(int(x) for x in r) for r in rays})
    if not rays:
        return []
    order = ShiftOrder(shift_rays, len(rays[0]))
    arr = np.array(rays, dtype=object)
    keep = []
    for i, v in enumerate(rays):
        mask = order.reachable_mask(v, arr)
        mask[i] = False
        if not mask.any():
            keep.append(v)
    return keep


# -- decompositions -----------------------------------------------------------------


@dataclass(frozen=True)
class DecompositionResult:
    ok: bool
    residual: tuple

    def __bool__(self) -> bool:
        return self.ok


def decomposition_check(target, parts) -> DecompositionResult:
    """Exact check ``target == sum(parts)``; works on GradedClass or tuples."""
    if hasattr(target, "coords"):
        total = target.scale(0)
        for p in parts:
            total = total + p
        residual = target - total
        return DecompositionResult(residual.is_zero(), residual.coords)
    total = [Fraction(0)] * len(target)
    for p in parts:
        if len(p) != len(target):
            return DecompositionResult(False, tuple(target))
        total = [t + Fraction(x) for t, x in zip(total, p)]
    residual = tuple(Fraction(a) - b for a, b in zip(target, total))
    return DecompositionResult(not any(residual), residual)


def shift_certificate(beta: Sequence, alpha: Sequence, exceptional_parts: Sequence[Sequence], lin_dual: RayCone) -> bool:
    """Checkable hypotheses of the maximality lemma: ``beta - alpha`` is a
    nonnegative combination of exceptional cycle classes and ``beta`` lies
    in the dual of the linear cone."""
    diff = [Fraction(a) - Fraction(b) for a, b in zip(beta, alpha)]
    if any(diff):
        if not exceptional_parts:
            return False
        if not farkas([tuple(p) for p in exceptional_parts], diff).feasible:
            return False
    return lin_dual.contains(beta)
