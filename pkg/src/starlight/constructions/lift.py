"""Raise the chromatic number by one: disjoint copies of a (k-1)-chromatic
system, a small gadget vertex set V, and a subset partition of V that pins
every copy's colours against every gadget subset.

Ids: gadget vertices first, then copy i occupies ``|V| + (i-1)*n0 + x``.
"""

from __future__ import annotations

from math import comb

import numpy as np

from ..baranyai import partition_all_subsets
from ..core import Colouring
from ..errors import PreconditionError, UnsupportedCase
from ._common import BlockWriter, ConstructionResult, anchored, chunk, finish, provenance
from .base import build_2chromatic_estar, three_star_rows
from .extend import extend_kchromatic_estar


def _sorted_classes(base: ConstructionResult) -> list[list[int]]:
    """Base colour classes by ascending size (stable in colour index)."""
    return sorted(base.colouring.classes(), key=len)


def _copies(w: BlockWriter, base: ConstructionResult, offset: int, count: int) -> None:
    blocks = base.system.blocks.astype(np.int64)
    for i in range(count):
        w.array(blocks + offset + i * base.n)


def _fan_by_colour(
    w: BlockWriter,
    centres_col: np.ndarray,
    centre_shift: int,
    groups_by_colour: dict[int, list[list[int]]],
    leaf_shift: int,
) -> None:
    """Each copy vertex x (centre id x + centre_shift) takes the leaf groups
    chosen for its colour, shifted into the target copy."""
    for c, groups in groups_by_colour.items():
        verts = np.flatnonzero(centres_col == c) + 1
        if verts.size:
            w.fan(verts + centre_shift, groups, shift=leaf_shift)


# ------------------------------------------------------------------ 3-stars


def lift_3star_chromatic(base: ConstructionResult, seed: int = 0) -> ConstructionResult:
    """k-chromatic 3-star system from a (k-1)-chromatic one of order 0 mod 3."""
    if base.e != 3:
        raise PreconditionError("base must be a 3-star system")
    if base.n % 3:
        raise PreconditionError("base order must be divisible by 3")
    k = base.k + 1
    if k < 3:
        raise PreconditionError("lift produces k >= 3")
    n0 = base.n
    if (2 * k - 1) % 3 == 0:
        m = 2 * k - 1
        t = m // 3
        sizes = [t] * ((k - 1) * (2 * k - 3))
    elif (2 * k - 1) % 3 == 1:
        m = 2 * k - 1
        t = (m - 1) // 3
        sizes = [t] * ((2 * k - 1) * (k - 2)) + [t // 2] * (2 * k - 1)
    else:
        m = 2 * k
        t = m // 3
        sizes = [t] * ((2 * k - 1) * (k - 1))
    part = partition_all_subsets(m, 3, sizes, seed=seed)
    ell = len(sizes)
    n = m + ell * n0

    # Copy colouring: sorted classes keep their index; the largest is split,
    # its second half taking the new colour k.
    cls = _sorted_classes(base)
    top = cls[-1]
    if len(top) < 2:
        raise UnsupportedCase("largest colour class is too small to split")
    copy_col = np.zeros(n0 + 1, dtype=np.int64)
    for s, members in enumerate(cls, start=1):
        copy_col[members] = s
    copy_col[top[len(top) // 2 :]] = k
    by_colour = [[int(v) for v in np.flatnonzero(copy_col == c)] for c in range(1, k + 1)]
    # Leaf triples of one copy with no triple entirely in colour c.
    avoid = {}
    for c in range(1, k + 1):
        others = [v for d in list(range(c + 1, k + 1)) + list(range(1, c)) for v in by_colour[d - 1]]
        avoid[c] = anchored(by_colour[c - 1], others, 3)

    gadget_col = [(v + 1) // 2 if v <= 2 * k - 2 else k for v in range(1, m + 1)]

    w = BlockWriter(3, n)
    for c, leaves in three_star_rows(m):
        w.star(c, leaves)
    _copies(w, base, m, ell)
    body = copy_col[1:]
    for i, triples in enumerate(part.classes):
        off = m + i * n0
        w.fan(np.arange(1, n0 + 1) + off, triples)
        covered = {v for tr in triples for v in tr}
        for v in range(1, m + 1):
            if v not in covered:
                w.fan([v], avoid[gadget_col[v - 1]], shift=off)
    for i in range(ell):
        for j in range(i + 1, ell):
            _fan_by_colour(w, body, m + i * n0, avoid, m + j * n0)

    col = np.concatenate([gadget_col, np.tile(body, ell)])
    return finish(
        w,
        Colouring(k, col),
        unique=False,
        prov=provenance("lift_3star_chromatic", base=base.claims.provenance, seed=seed),
        k=k,
    )


# ------------------------------------------------------------------ e-stars


def _chain_groups(cls: list[list[int]], e: int) -> tuple[list[list[int]], list[int]]:
    """Split a copy into e-sets: each class in runs of e-1 topped up from the
    next class; the last class in plain e-sets whose first member is returned
    as a leader (it takes the new colour)."""
    groups: list[list[int]] = []
    carry = list(cls[0])
    for nxt_cls in cls[1:]:
        nxt = list(nxt_cls)
        o = 0
        for i in range(0, len(carry), e - 1):
            part = carry[i : i + e - 1]
            need = e - len(part)
            if o + need > len(nxt):
                raise UnsupportedCase("colour classes too unbalanced for chained grouping")
            groups.append(part + nxt[o : o + need])
            o += need
        carry = nxt[o:]
    tail = chunk(carry, e)
    return groups + tail, [g[0] for g in tail]


def _gadget_system(e: int, m: int) -> ConstructionResult:
    base = build_2chromatic_estar(e)
    if m == 2 * e:
        return base
    return extend_kchromatic_estar(base, target_n=m)


def lift_estar_chromatic(base: ConstructionResult, seed: int = 0) -> ConstructionResult:
    """k-chromatic e-star system from a (k-1)-chromatic one of order 0 mod 2e."""
    e = base.e
    if e < 3:
        raise PreconditionError("e must be at least 3")
    if base.n % (2 * e):
        raise PreconditionError(f"base order must be divisible by {2 * e}")
    k = base.k + 1
    if k < 3:
        raise PreconditionError("lift produces k >= 3")
    n0 = base.n
    n_w = (e - 1) * (k - 1) + 1
    n_b = k - 2
    n_d = e if (k - 1) % 2 else 0
    m = n_w + n_b + n_d
    a = n_w // e
    total = comb(n_w, e)
    q, r = divmod(total, a)
    sizes = [a] * q + ([r] if r else [])
    part = partition_all_subsets(n_w, e, sizes, seed=seed)
    ell = len(sizes)
    n = m + ell * n0

    # Gadget colours: e-1 vertices of W per colour 1..k-1 and the last of W
    # in colour k; b_s in colour s; d_1 in colour k-1 and the rest of D in k.
    gadget_col = [min((v - 1) // (e - 1) + 1, k - 1) for v in range(1, n_w)] + [k]
    gadget_col += list(range(1, n_b + 1))
    if n_d:
        gadget_col += [k - 1] + [k] * (e - 1)

    cls = _sorted_classes(base)
    groups, leaders = _chain_groups(cls, e)
    copy_col = np.zeros(n0 + 1, dtype=np.int64)
    for s, members in enumerate(cls, start=1):
        copy_col[members] = s
    copy_col[leaders] = k
    body = copy_col[1:]

    w = BlockWriter(e, n)
    w.array(_gadget_system(e, m).system.blocks)
    _copies(w, base, m, ell)
    for i, subsets in enumerate(part.classes):
        off = m + i * n0
        w.fan(np.arange(1, n0 + 1) + off, subsets)
        covered = {v for s in subsets for v in s}
        free = [v for v in range(1, n_w + 1) if v not in covered]
        w.fan(free, groups, shift=off)
        w.fan(np.arange(n_w + 1, m + 1), groups, shift=off)
    for i in range(ell):
        for j in range(i + 1, ell):
            w.fan(np.arange(1, n0 + 1) + m + i * n0, groups, shift=m + j * n0)

    col = np.concatenate([gadget_col, np.tile(body, ell)])
    return finish(
        w,
        Colouring(k, col),
        unique=False,
        prov=provenance("lift_estar_chromatic", base=base.claims.provenance, seed=seed),
        k=k,
    )
