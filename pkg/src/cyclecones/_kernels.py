"""Inner loops of the double description method.

Two interchangeable implementations:

* ``numba`` -- ``@njit`` loops over int64 rays and packed uint64 zero sets;
* ``numpy`` -- vectorised fallback, also the only path for ``object``
  arrays (exact Python ints, used when int64 could overflow).

The backend is chosen once from ``CYCLECONES_NUMBA`` (``0`` disables numba)
and can be switched with :func:`set_backend`.  Both paths return identical
results.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

INT64_SAFE = 2**62

_backend = "numba" if HAVE_NUMBA and os.environ.get("CYCLECONES_NUMBA", "1") != "0" else "numpy"


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    _backend = name


def _use_numba(*arrays) -> bool:
    return _backend == "numba" and all(a.dtype != object for a in arrays)


# -- zero-set packing ----------------------------------------------------------


def pack_bits(zero: np.ndarray) -> np.ndarray:
    """Pack a boolean (rays x constraints) matrix into uint64 words."""
    nrows, ncols = zero.shape
    words = max(1, (ncols + 63) // 64)
    padded = np.zeros((nrows, words * 64), dtype=bool)
    padded[:, :ncols] = zero
    bytes_ = np.packbits(padded.reshape(nrows, words * 8, 8), axis=2, bitorder="little")
    return np.ascontiguousarray(bytes_.reshape(nrows, words * 8)).view(np.uint64).copy()


# -- adjacency -----------------------------------------------------------------


def _adjacent_pairs_np(zbits, pos, neg, min_common):
    pairs = []
    if len(pos) == 0 or len(neg) == 0:
        return np.zeros((0, 2), dtype=np.int64)
    notz = ~zbits
    for i in pos:
        common = zbits[i] & zbits[neg]  # (N, W)
        counts = np.bitwise_count(common).sum(axis=1)
        cand = np.nonzero(counts >= min_common)[0]
        if len(cand) == 0:
            continue
        common = common[cand]
        # rays whose zero set contains the common zero set
        contained = ((common[:, None, :] & notz[None, :, :]) == 0).all(axis=2)
        ok = contained.sum(axis=1) == 2
        for c in cand[ok]:
            pairs.append((i, neg[c]))
    return np.array(pairs, dtype=np.int64).reshape(-1, 2)


if HAVE_NUMBA:

    @njit(cache=True)
    def _popcount64(x):
        x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
        x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
        x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
        return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)

    @njit(cache=True)
    def _adjacent_pairs_nb(zbits, pos, neg, min_common):
        nrays, words = zbits.shape
        out = np.empty((len(pos) * len(neg), 2), dtype=np.int64)
        count = 0
        common = np.empty(words, dtype=np.uint64)
        for a in range(len(pos)):
            i = pos[a]
            for b in range(len(neg)):
                j = neg[b]
                pc = 0
                for w in range(words):
                    common[w] = zbits[i, w] & zbits[j, w]
                    pc += _popcount64(common[w])
                if pc < min_common:
                    continue
                adjacent = True
                for k in range(nrays):
                    if k == i or k == j:
                        continue
                    inside = True
                    for w in range(words):
                        if common[w] & ~zbits[k, w]:
                            inside = False
                            break
                    if inside:
                        adjacent = False
                        break
                if adjacent:
                    out[count, 0] = i
                    out[count, 1] = j
                    count += 1
        return out[:count]

    @njit(cache=True)
    def _gcd(a, b):
        a = abs(a)
        b = abs(b)
        while b:
            a, b = b, a % b
        return a

    @njit(cache=True)
    def _combine_nb(rays, s, pairs):
        npairs = pairs.shape[0]
        d = rays.shape[1]
        out = np.empty((npairs, d), dtype=np.int64)
        for p in range(npairs):
            i = pairs[p, 0]
            j = pairs[p, 1]
            si = s[i]
            sj = s[j]
            g = 0
            for c in range(d):
                v = si * rays[j, c] - sj * rays[i, c]
                out[p, c] = v
                g = _gcd(g, v)
            if g > 1:
                for c in range(d):
                    out[p, c] //= g
        return out

    @njit(cache=True)
    def _dot_nb(rays, a):
        n, d = rays.shape
        out = np.zeros(n, dtype=np.int64)
        for i in range(n):
            acc = 0
            for c in range(d):
                acc += rays[i, c] * a[c]
            out[i] = acc
        return out


def adjacent_pairs(zbits: np.ndarray, pos: np.ndarray, neg: np.ndarray, min_common: int) -> np.ndarray:
    """Pairs (i, j), i in ``pos``, j in ``neg``, passing the combinatorial
    adjacency test: no third ray's zero set contains Z(i) & Z(j)."""
    pos = np.ascontiguousarray(pos, dtype=np.int64)
    neg = np.ascontiguousarray(neg, dtype=np.int64)
    if _backend == "numba":
        return _adjacent_pairs_nb(zbits, pos, neg, min_common)
    return _adjacent_pairs_np(zbits, pos, neg, min_common)


# -- arithmetic ----------------------------------------------------------------


def _primitive_rows_np(m: np.ndarray) -> np.ndarray:
    if m.shape[0] == 0:
        return m
    g = np.gcd.reduce(m, axis=1)
    g = np.where(g == 0, 1, g)
    if m.dtype == object:
        return np.array([[x // gi for x in row] for row, gi in zip(m, g)], dtype=object).reshape(m.shape)
    return m // g[:, None]


def combine(rays: np.ndarray, s: np.ndarray, pairs: np.ndarray) -> np.ndarray:
    """New primitive rays ``s_i * r_j - s_j * r_i`` for each adjacent pair."""
    if pairs.shape[0] == 0:
        return np.zeros((0, rays.shape[1]), dtype=rays.dtype)
    if _use_numba(rays, s):
        return _combine_nb(rays, s, pairs)
    i, j = pairs[:, 0], pairs[:, 1]
    out = s[i][:, None] * rays[j] - s[j][:, None] * rays[i]
    return _primitive_rows_np(out)


def dot(rays: np.ndarray, a: np.ndarray) -> np.ndarray:
    if rays.shape[0] == 0:
        return np.zeros(0, dtype=rays.dtype)
    if _use_numba(rays, a):
        return _dot_nb(rays, a)
    return rays.dot(a)


def max_abs(m: np.ndarray) -> int:
    if m.size == 0:
        return 0
    return int(max(abs(int(m.max())), abs(int(m.min()))))
