"""Exact Farkas alternative via a phase-one simplex over the rationals.

For generators ``g_1..g_m`` and a target ``v`` exactly one of the following
holds, and :func:`farkas` returns a certificate for it:

* ``v = sum(lam_i g_i)`` with ``lam_i >= 0``;
* some ``w`` has ``w . g_i >= 0`` for all ``i`` and ``w . v < 0``.

Bland's rule keeps the pivoting finite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class FarkasResult:
    feasible: bool
    combination: dict[int, Fraction] | None = None
    separator: tuple[Fraction, ...] | None = None


def farkas(generators: Sequence[Sequence], v: Sequence) -> FarkasResult:
    d = len(v)
    m = len(generators)
    sigma = [(-1 if Fraction(x) < 0 else 1) for x in v]
    # tableau rows: [g-columns | artificial columns | rhs], rows flipped so rhs >= 0
    rows = []
    for i in range(d):
        row = [sigma[i] * Fraction(generators[j][i]) for j in range(m)]
        row += [Fraction(int(i == t)) for t in range(d)]
        row.append(sigma[i] * Fraction(v[i]))
        rows.append(row)
    basis = [m + i for i in range(d)]
    ncols = m + d
    # reduced costs for "minimise sum of artificials"
    cost = [Fraction(0)] * m + [Fraction(1)] * d + [Fraction(0)]
    red = cost[:]
    for i in range(d):
        for c in range(ncols + 1):
            red[c] -= rows[i][c]

    while True:
        enter = next((c for c in range(ncols) if red[c] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(d):
            a = rows[i][enter]
            if a > 0:
                ratio = rows[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:  # pragma: no cover - objective is bounded below by 0
            raise RuntimeError("unbounded phase-one problem")
        p = best[1]
        piv = rows[p][enter]
        rows[p] = [x / piv for x in rows[p]]
        for i in range(d):
            if i != p and rows[i][enter]:
                f = rows[i][enter]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[p])]
        f = red[enter]
        red = [x - f * y for x, y in zip(red, rows[p])]
        basis[p] = enter

    objective = -red[-1]
    if objective == 0:
        lam = {}
        for i, b in enumerate(basis):
            if b < m and rows[i][-1]:
                lam[b] = rows[i][-1]
        return FarkasResult(True, combination=dict(sorted(lam.items())))
    # simplex multipliers y_i = cost_i - reduced cost of artificial column i
    y = [Fraction(1) - red[m + i] for i in range(d)]
    w = tuple(-sigma[i] * y[i] for i in range(d))
    return FarkasResult(False, separator=w)
