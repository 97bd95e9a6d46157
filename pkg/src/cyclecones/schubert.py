"""Schubert calculus on G(a, n), the a-planes in P^n, via Pieri's rule.

Partitions fit in a box of ``a+1`` rows and ``n-a`` columns.  The special
class ``σ_p`` is the locus of a-planes meeting a fixed ``(n-a-p)``-plane;
multiplying by it adds ``p`` boxes, no two in one column.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Mapping

__all__ = [
    "Partition",
    "SchubertExpression",
    "pieri",
    "schubert_degree",
    "grassmannian_degree",
    "incidence_codim",
    "expected_codim",
    "expected_codim_vertex",
    "vertex_locus_dimension",
    "ConsistencyReport",
    "consistency_report",
    "parse_expression",
]

Partition = tuple[int, ...]


def _normalize(lam) -> Partition:
    lam = tuple(int(x) for x in lam)
    if any(x < 0 for x in lam):
        raise ValueError(f"negative part in {lam}")
    if list(lam) != sorted(lam, reverse=True):
        raise ValueError(f"{lam} is not weakly decreasing")
    return tuple(x for x in lam if x)


def _check_grassmannian(a: int, n: int):
    if not 0 <= a < n:
        raise ValueError(f"G({a},{n}) needs 0 <= a < n")


def fits(lam: Partition, a: int, n: int) -> bool:
    return len(lam) <= a + 1 and all(x <= n - a for x in lam)


@dataclass(frozen=True)
class SchubertExpression:
    """Nonnegative integer combination of Schubert classes on G(a, n)."""

    a: int
    n: int
    terms: Mapping[Partition, int] = field(default_factory=dict)

    def __post_init__(self):
        _check_grassmannian(self.a, self.n)
        clean = {}
        for lam, c in self.terms.items():
            lam = _normalize(lam)
            if c < 0:
                raise ValueError("coefficients must be nonnegative")
            if not fits(lam, self.a, self.n):
                raise ValueError(f"σ{_fmt(lam)} does not fit G({self.a},{self.n})")
            if c:
                clean[lam] = clean.get(lam, 0) + int(c)
        object.__setattr__(self, "terms", dict(sorted(clean.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0])))))

    @classmethod
    def single(cls, a: int, n: int, lam=()) -> "SchubertExpression":
        return cls(a, n, {_normalize(lam): 1})

    @property
    def dim(self) -> int:
        """Dimension of the Grassmannian."""
        return (self.a + 1) * (self.n - self.a)

    @property
    def point(self) -> Partition:
        return (self.n - self.a,) * (self.a + 1)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "SchubertExpression") -> "SchubertExpression":
        if (self.a, self.n) != (other.a, other.n):
            raise ValueError("expressions live on different Grassmannians")
        t = dict(self.terms)
        for lam, c in other.terms.items():
            t[lam] = t.get(lam, 0) + c
        return SchubertExpression(self.a, self.n, t)

    def scale(self, c: int) -> "SchubertExpression":
        return SchubertExpression(self.a, self.n, {lam: c * m for lam, m in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return multiply(self, other)

    __rmul__ = __mul__

    def pieri(self, p: int) -> "SchubertExpression":
        return pieri(self, p)

    def evaluate(self) -> int:
        """Coefficient of the point class."""
        return self.terms.get(self.point, 0)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for lam, c in self.terms.items():
            parts.append(("" if c == 1 else str(c)) + "σ" + _fmt(lam))
        return " + ".join(parts)


def _fmt(lam: Partition) -> str:
    return "{" + ",".join(map(str, lam)) + "}"


@lru_cache(maxsize=None)
def _pieri_term(lam: Partition, p: int, a: int, n: int) -> tuple[Partition, ...]:
    rows, cols = a + 1, n - a
    lam_full = list(lam) + [0] * (rows - len(lam))
    out = []

    def rec(i: int, left: int, mu: list[int]):
        if i == rows:
            if left == 0:
                out.append(_normalize(mu))
            return
        # horizontal strip: mu_i <= lam_{i-1} (previous row of lam), mu_i <= cols
        upper = cols if i == 0 else min(cols, lam_full[i - 1])
        for add in range(min(left, upper - lam_full[i]) + 1):
            rec(i + 1, left - add, mu + [lam_full[i] + add])

    rec(0, p, [])
    return tuple(out)


def pieri(e: SchubertExpression, p: int) -> SchubertExpression:
    """Multiply by the special class σ_p."""
    if p < 1:
        raise ValueError("Pieri multiplier must be positive")
    t: dict[Partition, int] = {}
    if p <= e.n - e.a:
        for lam, c in e.terms.items():
            for mu in _pieri_term(lam, p, e.a, e.n):
                t[mu] = t.get(mu, 0) + c
    return SchubertExpression(e.a, e.n, t)


def multiply(x: SchubertExpression, y: SchubertExpression) -> SchubertExpression:
    """Product where at least one side is a combination of special classes
    (one-row partitions or the unit)."""
    if (x.a, x.n) != (y.a, y.n):
        raise ValueError("expressions live on different Grassmannians")
    if not all(len(lam) <= 1 for lam in y.terms):
        x, y = y, x
    if not all(len(lam) <= 1 for lam in y.terms):
        raise ValueError("only products with special classes σ_p are supported")
    total = SchubertExpression(x.a, x.n)
    for lam, c in y.terms.items():
        part = x if not lam else pieri(x, lam[0])
        total = total + part.scale(c)
    return total


def schubert_degree(lam, a: int, n: int) -> int:
    """Plücker degree of the Schubert variety σ_λ in G(a, n)."""
    lam = _normalize(lam)
    e = SchubertExpression.single(a, n, lam)
    for _ in range(e.dim - sum(lam)):
        e = pieri(e, 1)
    return e.evaluate()


def grassmannian_degree(a: int, n: int) -> int:
    return schubert_degree((), a, n)


# -- incidence conditions -----------------------------------------------------------

_INCIDENCE = {"containsLine", "meetsLine", "containsPoint"}


def incidence_codim(condition: str, d: int, n: int) -> int:
    """Codimension in G(d, n) of the d-planes satisfying one condition."""
    if condition == "containsLine":
        return 2 * (n - d)
    if condition == "meetsLine":
        return n - d - 1
    if condition == "containsPoint":
        return n - d
    raise ValueError(f"unknown condition {condition!r}; expected one of {sorted(_INCIDENCE)}")


# -- quadric transversality counts ----------------------------------------------------


def _quadric_space(n: int) -> int:
    return comb(n + 2, 2)


def expected_codim(k: int, N: int, n: int, reading: str = "corrected") -> int:
    """Codimension of corank-``k`` quadrics in P^n containing ``N`` general
    lines.  ``literal`` takes the maximum with C(n+2,2) as printed;
    ``corrected`` caps the count at C(n+2,2) (an empty locus)."""
    if not 0 <= k <= n - 1 or N < 0:
        raise ValueError("need 0 <= k <= n-1 and N >= 0")
    count = 3 * N + comb(k + 1, 2)
    if reading == "literal":
        return max(count, _quadric_space(n))
    if reading == "corrected":
        return min(count, _quadric_space(n))
    raise ValueError(f"unknown reading {reading!r}")


def expected_codim_vertex(k: int, N: int, n: int, reading: str = "corrected", vertex_term: str = "stated") -> int:
    """Same with the extra condition that the vertex meets another line.

    ``vertex_term="stated"`` charges ``n-k-1`` for that condition,
    ``vertex_term="worked"`` charges ``n-k`` as in the numerical example."""
    if k < 1:
        raise ValueError("the vertex condition needs k >= 1")
    extra = {"stated": n - k - 1, "worked": n - k}.get(vertex_term)
    if extra is None:
        raise ValueError(f"unknown vertex term {vertex_term!r}")
    count = expected_codim(k, N, n, "corrected") + extra
    if reading == "literal":
        return max(count, _quadric_space(n))
    if reading == "corrected":
        return min(count, _quadric_space(n))
    raise ValueError(f"unknown reading {reading!r}")


def vertex_locus_dimension(k: int, N: int, n: int, vertex_term: str = "worked") -> int:
    """Projective dimension of the vertex-incident locus Λ_v(k, N, n)."""
    return _quadric_space(n) - 1 - expected_codim_vertex(k, N, n, "corrected", vertex_term)


@dataclass(frozen=True)
class ConsistencyReport:
    k: int
    N: int
    n: int
    e_literal: int
    e_corrected: int
    eps_literal: int
    eps_stated: int
    eps_worked: int
    dim_stated: int
    dim_worked: int

    @property
    def consistent(self) -> bool:
        return self.eps_stated == self.eps_worked

    def lines(self) -> list[str]:
        flag = "agree" if self.consistent else "DISAGREE"
        return [
            f"e({self.k},{self.N},{self.n}): literal max = {self.e_literal}, capped = {self.e_corrected}",
            f"ε({self.k},{self.N},{self.n}): literal max = {self.eps_literal}, "
            f"stated vertex term n-k-1 -> {self.eps_stated}, worked example n-k -> {self.eps_worked} ({flag})",
            f"dim Λ_v({self.k},{self.N},{self.n}): stated -> {self.dim_stated}, worked -> {self.dim_worked}",
        ]

    def to_json(self) -> dict:
        return {
            "k": self.k, "N": self.N, "n": self.n,
            "eLiteral": self.e_literal, "eCorrected": self.e_corrected,
            "epsLiteral": self.eps_literal, "epsStated": self.eps_stated, "epsWorked": self.eps_worked,
            "dimStated": self.dim_stated, "dimWorked": self.dim_worked, "consistent": self.consistent,
        }


def consistency_report(k: int = 2, N: int = 4, n: int = 5) -> ConsistencyReport:
    return ConsistencyReport(
        k, N, n,
        expected_codim(k, N, n, "literal"),
        expected_codim(k, N, n, "corrected"),
        expected_codim_vertex(k, N, n, "literal"),
        expected_codim_vertex(k, N, n, "corrected", "stated"),
        expected_codim_vertex(k, N, n, "corrected", "worked"),
        vertex_locus_dimension(k, N, n, "stated"),
        vertex_locus_dimension(k, N, n, "worked"),
    )


# -- parsing ----------------------------------------------------------------------------

_FACTOR = re.compile(r"\s*(?:σ|s)\{([0-9,\s]*)\}(?:\s*\^\s*(\d+))?\s*")
_COEF = re.compile(r"\s*(\d+)\s*\*?\s*")


def parse_expression(text: str, a: int, n: int) -> SchubertExpression:
    """Evaluate expressions such as ``σ{2}*σ{1}^4`` or ``σ{2,1} + 2σ{1,1,1}``
    (``s`` may replace ``σ``)."""
    total = SchubertExpression(a, n)
    for raw in text.split("+"):
        term = raw.strip()
        if not term:
            raise ValueError(f"empty term in {text!r}")
        coef = 1
        m = _COEF.match(term)
        if m and not term[m.end():].startswith("{"):
            coef = int(m.group(1))
            term = term[m.end():]
        factors = [f for f in term.split("*") if f.strip()]
        if not factors:
            total = total + SchubertExpression.single(a, n).scale(coef)
            continue
        value = None
        for f in factors:
            fm = _FACTOR.fullmatch(f)
            if not fm:
                raise ValueError(f"cannot parse factor {f.strip()!r}")
            parts = [int(x) for x in fm.group(1).replace(" ", "").split(",") if x]
            lam = _normalize(sorted(parts, reverse=True))
            power = int(fm.group(2) or 1)
            for _ in range(power):
                cls = SchubertExpression.single(a, n, lam) if fits(lam, a, n) else SchubertExpression(a, n)
                value = cls if value is None else multiply(value, cls)
        total = total + value.scale(coef)
    return total
