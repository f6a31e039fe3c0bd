"""Uniquely k-chromatic constructions.

Every builder here lays out gadget sets A, F, G, H (and K for two colours),
each split into e-sets X^1..X^k (plus X_0 when k is odd), followed by
disjoint copies of a base system. Fixing A^s to colour s forces every other
vertex through stars {v; X^t} with t != colour(v); subsets of A that are not
one of the A^s are spread over the copies by a subset partition.

Ids: gadget vertices first, in the order A, F, G, H, (K), then copy i at
``gadget + (i-1)*n0 + x``.
"""

from __future__ import annotations

from itertools import combinations
from math import comb

import numpy as np

from ..baranyai import partition_all_subsets
from ..core import Colouring, id_dtype
from ..errors import InadmissibleOrder, PreconditionError, UnsupportedCase
from ._common import (
    BlockWriter,
    ConstructionResult,
    anchored,
    finish,
    non_mono_groups,
    provenance,
)
from .base import build_2chromatic_estar, estar_rows


class _Gadget:
    """A gadget block: sets[s] for s = 1..k are the coloured e-sets; sets[0]
    is the extra colour-1 set (empty unless used)."""

    def __init__(self, start: int, e: int, k: int, extra: bool) -> None:
        ids = iter(range(start + 1, start + (k + extra) * e + 1))
        self.sets: list[list[int]] = [[] for _ in range(k + 1)]
        for s in range(1, k + 1):
            self.sets[s] = [next(ids) for _ in range(e)]
        if extra:
            self.sets[0] = [next(ids) for _ in range(e)]
        self.size = (k + extra) * e

    def __getitem__(self, s: int) -> list[int]:
        return self.sets[s]

    def others(self, s: int, k: int) -> list[int]:
        """X^{s+1}, X^{s+2}, ... cyclically, skipping X^s; flattened."""
        out: list[int] = []
        for d in range(1, k):
            out += self.sets[(s - 1 + d) % k + 1]
        return out

    def colours(self, k: int) -> list[int]:
        col = []
        for s in range(1, k + 1):
            col += [s] * len(self.sets[s])
        col += [1] * len(self.sets[0])
        return col


def _pair_block(w: BlockWriter, e: int, odd: list[int], even: list[int]) -> None:
    """Order-2e base system with odd ids on ``odd`` and even ids on ``even``."""
    table = {}
    for i in range(e):
        table[2 * i + 1] = odd[i]
        table[2 * i + 2] = even[i]
    for c, leaves in estar_rows(e):
        w.star(table[c], [table[x] for x in leaves])


def _internal(w: BlockWriter, g: _Gadget, e: int, k: int) -> None:
    """Decompose K on a gadget: consecutive colour sets are paired (the extra
    set pairs with X^k when k is odd) and each pair carries an order-2e base
    system; vertices of a later pair cover an earlier pair in two mixed e-sets."""
    order = [g[s] for s in range(1, k + 1)] + ([g[0]] if g[0] else [])
    pairs = [(order[i], order[i + 1]) for i in range(0, len(order), 2)]
    for p, q in pairs:
        _pair_block(w, e, p, q)
    for j in range(len(pairs)):
        for i in range(j):
            p, q = pairs[i]
            groups = [p[: e - 1] + q[:1], p[e - 1 :] + q[1:]]
            w.fan(pairs[j][0] + pairs[j][1], groups)


def _copies(w: BlockWriter, base: ConstructionResult, offset: int, count: int) -> None:
    blocks = base.system.blocks.astype(np.int64)
    for i in range(count):
        w.array(blocks + offset + i * base.n)


def _by_colour(col: np.ndarray, k: int) -> list[np.ndarray]:
    """Copy vertices (base ids) of each colour 1..k, index 0 unused."""
    return [np.empty(0, dtype=np.int64)] + [np.flatnonzero(col == s) + 1 for s in range(1, k + 1)]


# --------------------------------------------------------------- two colours


def build_unique_2chromatic_estar(e: int) -> ConstructionResult:
    """Strongly equitable uniquely 2-chromatic e-star system of order
    10e + (C(2e, e) - 2) * 2e."""
    if e < 3:
        raise PreconditionError("e must be at least 3")
    k = 2
    base = build_2chromatic_estar(e)
    n0 = 2 * e
    ell = comb(2 * e, e) - 2
    A, F, G, H, K = (_Gadget(i * 2 * e, e, 2, False) for i in range(5))
    gad = 10 * e
    n = gad + ell * n0
    base_col = base.colouring.as_array()[1:]
    cls = _by_colour(base_col, k)
    egroups = non_mono_groups([c.tolist() for c in cls[1:]], e)

    w = BlockWriter(e, n)
    for X in (A, F, G, H, K):
        _internal(w, X, e, k)
    _copies(w, base, gad, ell)
    for s in (1, 2):
        t = 3 - s
        w.fan(F[s], [A[t]])
        w.fan(G[s], [A[t]])
        w.fan(K[s], [G[t]])
        fg = [F[t]] + anchored(F[s] + G[s], G[t], e)
        w.fan(H[s], fg)
        w.fan(F[s], anchored(G[s], G[t], e))
        # A^s against F^s, G^s, H and K: six runs of e-1, each closed by
        # one of three H^t and three K^t vertices.
        pins = H[t][:3] + K[t][:3]
        rest = [v for v in F[s] + G[s] + H[1] + H[2] + K[1] + K[2] if v not in pins]
        w.fan(A[s], [rest[i * (e - 1) : (i + 1) * (e - 1)] + [pins[i]] for i in range(6)])
        # K^s against G^s, F and H: five runs closed by three F^t and two H^t.
        pins = F[t][:3] + H[t][:2]
        rest = [v for v in G[s] + F[1] + F[2] + H[1] + H[2] if v not in pins]
        w.fan(K[s], [rest[i * (e - 1) : (i + 1) * (e - 1)] + [pins[i]] for i in range(5)])
        # Copy vertices of colour s against F, G, H and K.
        hk = fg + anchored(H[s], H[t], e) + anchored(K[s], K[t], e)
        for i in range(ell):
            w.fan(cls[s] + gad + i * n0, hk)
    _subset_classes(
        w, A, e, k, [[T] for T in _non_canonical(A, e, k)], egroups, gad, n0
    )
    for i in range(ell):
        for j in range(i + 1, ell):
            w.fan(np.arange(1, n0 + 1) + gad + i * n0, egroups, shift=gad + j * n0)

    col = A.colours(k) + F.colours(k) + G.colours(k) + H.colours(k) + K.colours(k)
    col = np.concatenate([col, np.tile(base_col, ell)])
    return finish(
        w,
        Colouring(k, col),
        unique=True,
        prov=provenance("build_unique_2chromatic_estar", e=e),
        anchors=[A[1], A[2]],
        k=k,
    )


def _non_canonical(A: _Gadget, e: int, k: int) -> list[list[int]]:
    canon = {tuple(A[s]) for s in range(1, k + 1)}
    ground = [v for s in range(1, k + 1) for v in A[s]]
    return [list(T) for T in combinations(ground, e) if T not in canon]


def _subset_classes(
    w: BlockWriter,
    A: _Gadget,
    e: int,
    k: int,
    classes: list[list[list[int]]],
    egroups: list[list[int]],
    gad: int,
    n0: int,
) -> None:
    """Copy i takes the i-th class of pairwise disjoint subsets of A: each of
    its vertices is the centre of one star per subset, and the A vertices
    outside every subset of the class cover the copy with ``egroups``."""
    ground = [v for s in range(1, k + 1) for v in A[s]]
    for i, subsets in enumerate(classes):
        off = gad + i * n0
        w.fan(np.arange(1, n0 + 1) + off, subsets)
        covered = {v for T in subsets for v in T}
        w.fan([v for v in ground if v not in covered], egroups, shift=off)


# ------------------------------------------------------------- k colours


def lift_unique_to_strong_equitable_k(base: ConstructionResult) -> ConstructionResult:
    """Strongly equitable k-chromatic system on k copies of a strongly
    equitable uniquely (k-1)-chromatic one; copy i >= 2 gives class i-1 the
    new colour k."""
    e, n0 = base.e, base.n
    k = base.k + 1
    if k < 3:
        raise PreconditionError("base must have at least two colours")
    if not base.claims.unique or not base.claims.strongly_equitable:
        raise PreconditionError("base must be uniquely colourable and strongly equitable")
    if n0 % (2 * e):
        raise PreconditionError(f"base order must be divisible by {2 * e}")
    base_col = base.colouring.as_array()[1:].astype(np.int64)
    cls = _by_colour(base_col, k - 1)
    r = n0 // (k - 1)
    if r <= e:
        raise PreconditionError("colour classes must have more than e vertices")
    D = [np.empty(0, dtype=np.int64)] + [cls[s][:e] for s in range(1, k)]

    def sigma(i: int, s: int) -> int:
        return k if i >= 2 and s == i - 1 else s

    n = k * n0
    w = BlockWriter(e, n)
    _copies(w, base, 0, k)
    for i in range(2, k + 1):
        off = (i - 1) * n0
        for s in range(1, k):
            c = sigma(i, s)
            forced = [t for t in range(1, k) if t != c]
            centres = cls[s] + off
            w.fan(centres, [D[t] for t in forced])
            used = {int(v) for t in forced for v in D[t]}
            remaining = [[int(v) for v in cls[t] if int(v) not in used] for t in range(1, k)]
            w.fan(centres, non_mono_groups(remaining, e))
    egroups = non_mono_groups([c.tolist() for c in cls[1:]], e)
    for i in range(2, k + 1):
        for j in range(i + 1, k + 1):
            w.fan(np.arange(1, n0 + 1) + (j - 1) * n0, egroups, shift=(i - 1) * n0)

    col = [base_col]
    for i in range(2, k + 1):
        table = np.array([0] + [sigma(i, s) for s in range(1, k)])
        col.append(table[base_col])
    return finish(
        w,
        Colouring(k, np.concatenate(col)),
        unique=False,
        prov=provenance("lift_unique_to_strong_equitable_k", base=base.claims.provenance),
        anchors=[D[s] for s in range(1, k)],
        k=k,
    )


def _canonical_partition(e: int, k: int) -> list[list[list[int]]]:
    """Classes of pairwise disjoint e-subsets of [ke] covering every e-subset
    once, the first class being {1..e}, {e+1..2e}, ... (so it can be dropped);
    the rest hold at most k-1 subsets each."""
    m = k * e
    q, r = divmod(comb(m, e) - k, k - 1)
    sizes = [k] + [k - 1] * q + ([r] if r else [])
    part = partition_all_subsets(m, e, sizes)
    first = part.classes[0]
    perm = {}
    for s, T in enumerate(first):
        for i, v in enumerate(T):
            perm[v] = s * e + i + 1
    return [[sorted(perm[v] for v in T) for T in cls] for cls in part.classes[1:]]


def make_unique_kchromatic(base: ConstructionResult) -> ConstructionResult:
    """Uniquely k-chromatic e-star system built on copies of a strongly
    equitable k-chromatic one of order 0 mod 2e."""
    e, n0, k = base.e, base.n, base.k
    if e < 3 or k < 3:
        raise PreconditionError("need e >= 3 and k >= 3")
    if not base.claims.strongly_equitable:
        raise PreconditionError("base colouring must be strongly equitable")
    if n0 % (2 * e):
        raise PreconditionError(f"base order must be divisible by {2 * e}")
    extra = k % 2 == 1
    size = (k + extra) * e
    A, F, G, H = (_Gadget(i * size, e, k, extra) for i in range(4))
    gad = 4 * size
    classes = _canonical_partition(e, k)
    ell = len(classes)
    n = gad + ell * n0
    base_col = base.colouring.as_array()[1:].astype(np.int64)
    cls = _by_colour(base_col, k)
    egroups = non_mono_groups([c.tolist() for c in cls[1:]], e)

    w = BlockWriter(e, n)
    for X in (A, F, G, H):
        _internal(w, X, e, k)
    _copies(w, base, gad, ell)
    for s in range(1, k + 1):
        nxt = s % k + 1
        forcing_a = [A[t] for t in range(1, k + 1) if t != s]
        forcing_f = [F[t] for t in range(1, k + 1) if t != s]
        w.fan(F[s], forcing_a)
        w.fan(G[s], forcing_a)
        w.fan(F[s], anchored(G[s], G.others(s, k), e))
        fg = forcing_f + anchored(F[s] + G[s], G.others(s, k), e)
        w.fan(H[s], fg)
        h_others = H.others(s, k)
        w.fan(A[s], anchored(F[s] + G[s], H[nxt], e) + anchored(H[s], h_others[e:], e))
        hu = fg + anchored(H[s], h_others, e)
        for i in range(ell):
            w.fan(cls[s] + gad + i * n0, hu)
    if extra:
        _extra_sets(w, A, F, G, H, e, k, cls, gad, n0, ell)
    _subset_classes(w, A, e, k, classes, egroups, gad, n0)
    # Copy against copy: 820 pairs at the reference size, so stay vectorised.
    centres = np.arange(1, n0 + 1)
    for i in range(ell):
        for j in range(i + 1, ell):
            w.fan(centres + gad + i * n0, egroups, shift=gad + j * n0)

    col = A.colours(k) + F.colours(k) + G.colours(k) + H.colours(k)
    col = np.concatenate([col, np.tile(base_col, ell)])
    return finish(
        w,
        Colouring(k, col),
        unique=True,
        prov=provenance("make_unique_kchromatic", base=base.claims.provenance),
        anchors=[A[s] for s in range(1, k + 1)],
        k=k,
    )


def _extra_sets(w, A, F, G, H, e, k, cls, gad, n0, ell) -> None:
    """Stars centred on the colour-1 sets A_0, F_0, G_0, H_0 (odd k only).
    Each is forced to colour 1 by stars onto X^2..X^k of an earlier gadget."""

    def rest(X: _Gadget) -> list[int]:
        return [v for s in range(2, k + 1) for v in X[s]]

    copy_groups = anchored(cls[1].tolist(), np.concatenate(cls[2:]).tolist(), e)
    to_h = anchored(H[1], rest(H), e)
    to_g = anchored(G[1], rest(G), e)

    def to_copies(centres: list[int]) -> None:
        for i in range(ell):
            w.fan(centres, copy_groups, shift=gad + i * n0)

    w.fan(A[0], [F[t] for t in range(2, k + 1)] + anchored(F[1] + G[1], rest(G), e) + to_h)
    to_copies(A[0])
    w.fan(F[0], [A[t] for t in range(2, k + 1)] + anchored(A[1] + A[0] + G[1], rest(G), e) + to_h)
    to_copies(F[0])
    af = anchored(A[1] + A[0] + F[1] + F[0], rest(F), e)
    w.fan(G[0], [A[t] for t in range(2, k + 1)] + af + to_h)
    to_copies(G[0])
    w.fan(H[0], [A[t] for t in range(2, k + 1)] + af + anchored(G[1] + G[0], rest(G), e))
    to_copies(H[0])


# --------------------------------------------------------------- extension


def _unique_plus_one(rows: np.ndarray, col: np.ndarray, e: int, k: int):
    """New vertex in class 1: one star onto the first e of each other class
    forces it, the rest of the system is covered by anchored runs of class 1."""
    n = col.size - 1
    x = n + 1
    cls = [list(np.flatnonzero(col == s)) for s in range(k + 1)]
    groups = [cls[s][:e] for s in range(2, k + 1)]
    groups += anchored(cls[1], [v for s in range(2, k + 1) for v in cls[s][e:]], e)
    new = _star_rows(x, groups, e)
    return np.concatenate([rows, new.astype(rows.dtype)]), np.append(col, 1)


def _unique_plus_2e_minus_1(rows: np.ndarray, col: np.ndarray, e: int, k: int):
    """From order 2et+1 to 2et+2e: 2e-1 new vertices and a pivot v0 from
    class 1 carry an order-2e base block; odd new vertices join class 1 and
    even ones class 2, each forced by stars onto the other classes' heads."""
    n = col.size - 1
    cls = [list(np.flatnonzero(col == s)) for s in range(k + 1)]
    if len(cls[1]) <= e:
        raise UnsupportedCase("class 1 needs more than e vertices")
    v0 = cls[1][-1]
    new = list(range(n + 1, n + 2 * e))
    odd_new, even_new = new[1::2], new[0::2]  # e-1 and e vertices
    parts = []
    heads = [cls[s][:e] for s in range(k + 1)]
    tails = [cls[s][e:] for s in range(k + 1)]
    one = [v for v in cls[1] if v != v0]
    g1 = [heads[s] for s in range(2, k + 1)]
    g1 += anchored(one, [v for s in range(2, k + 1) for v in tails[s]], e)
    for x in odd_new:
        parts.append(_star_rows(x, g1, e))
    g2 = [heads[1]] + [heads[s] for s in range(3, k + 1)]
    other = [v for v in tails[1] if v != v0] + [v for s in range(3, k + 1) for v in tails[s]]
    g2 += anchored(cls[2], other, e)
    for x in even_new:
        parts.append(_star_rows(x, g2, e))
    w = BlockWriter(e, n + 2 * e - 1)
    _pair_block(w, e, odd_new + [v0], even_new)
    parts.append(w.result())
    new_col = np.zeros(n + 2 * e, dtype=col.dtype)
    new_col[: n + 1] = col
    new_col[odd_new] = 1
    new_col[even_new] = 2
    return np.concatenate([rows] + [p.astype(rows.dtype) for p in parts]), new_col


def _star_rows(x: int, groups: list[list[int]], e: int) -> np.ndarray:
    g = np.sort(np.asarray(groups, dtype=np.int64).reshape(-1, e), axis=1)
    out = np.empty((g.shape[0], e + 1), dtype=np.int64)
    out[:, 0] = x
    out[:, 1:] = g
    return out


def _extend_unique(base: ConstructionResult, target_n: int, name: str) -> ConstructionResult:
    e, k = base.e, base.k
    period = 2 * e
    if not base.claims.unique:
        raise PreconditionError("base must be uniquely colourable")
    if base.n % period not in (0, 1):
        raise PreconditionError(f"base order must be 0 or 1 mod {period}")
    if target_n is None or target_n <= base.n or target_n % period not in (0, 1):
        raise InadmissibleOrder(f"target order must be 0 or 1 mod {period} and above {base.n}")
    if min(base.colouring.class_sizes()) <= e:
        raise PreconditionError("colour classes must have more than e vertices")
    rows = base.system.blocks.astype(id_dtype(target_n))
    col = base.colouring.as_array().astype(np.int64)
    while col.size - 1 < target_n:
        if (col.size - 1) % period == 0:
            rows, col = _unique_plus_one(rows, col, e, k)
        else:
            rows, col = _unique_plus_2e_minus_1(rows, col, e, k)
    w = BlockWriter(e, target_n)
    w.array(rows)
    del rows
    return finish(
        w,
        Colouring(k, col[1:]),
        unique=True,
        prov=provenance(name, base=base.claims.provenance, target_n=target_n),
        anchors=base.anchors,
        k=k,
    )


def extend_unique_2chromatic(base: ConstructionResult, target_n: int) -> ConstructionResult:
    """Grow a uniquely 2-chromatic e-star system to order 0 or 1 mod 2e."""
    if base.k != 2:
        raise PreconditionError("base must be 2-chromatic")
    return _extend_unique(base, target_n, "extend_unique_2chromatic")


def extend_unique_kchromatic(base: ConstructionResult, target_n: int) -> ConstructionResult:
    """Grow a uniquely k-chromatic e-star system to order 0 or 1 mod 2e."""
    return _extend_unique(base, target_n, "extend_unique_kchromatic")
