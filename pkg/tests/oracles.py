"""Independent reference implementations used only by the tests."""

from __future__ import annotations

import random
from itertools import combinations
from math import comb, factorial

import numpy as np

from starlight.core import StarSystem


def proper_maps(blocks: np.ndarray, n: int, k: int) -> np.ndarray:
    """Every proper map [n] -> [k] as rows of an (m, n) array (colours 1..k)."""
    if k == 0:
        return np.zeros((0, n), dtype=np.int8)
    grid = (np.indices((k,) * n, dtype=np.int8).reshape(n, -1).T + 1).copy()
    ok = np.ones(len(grid), dtype=bool)
    for row in blocks:
        cols = grid[:, np.asarray(row) - 1]
        ok &= ~(cols == cols[:, :1]).all(axis=1)
    return grid[ok]


def brute_colourable(sys: StarSystem, k: int) -> bool:
    return len(proper_maps(sys.blocks, sys.n, k)) > 0


def orbit_count(sys: StarSystem, k: int) -> int:
    """Number of proper maps into [k] up to permutation of the k colours.

    A map using exactly j colours has an orbit of size k!/(k-j)!.
    """
    maps = proper_maps(sys.blocks, sys.n, k)
    used = sum((maps == c).any(axis=1).astype(np.int64) for c in range(1, k + 1)) if k else 0
    total = 0
    for j in range(k + 1):
        count = int(np.count_nonzero(used == j)) if len(maps) else 0
        orbit = factorial(k) // factorial(k - j)
        assert count % orbit == 0
        total += count // orbit
    return total


def same_orbit(a, b) -> bool:
    """True iff the two colour vectors induce the same partition."""
    fwd: dict[int, int] = {}
    back: dict[int, int] = {}
    for x, y in zip(a, b):
        if fwd.setdefault(x, y) != y or back.setdefault(y, x) != x:
            return False
    return True


def random_star_system(n: int, e: int, rng: random.Random, tries: int = 200) -> StarSystem | None:
    """A random e-star decomposition of K_n, or None if rejection fails.

    Orient every edge so each out-degree is a multiple of e, then split each
    out-neighbourhood into random e-sets.
    """
    if comb(n, 2) % e:
        return None
    for _ in range(tries):
        out: list[list[int]] = [[] for _ in range(n + 1)]
        order = list(range(1, n + 1))
        rng.shuffle(order)
        undecided = {frozenset(p) for p in combinations(range(1, n + 1), 2)}
        ok = True
        for v in order:
            later = [u for u in range(1, n + 1) if frozenset((u, v)) in undecided]
            have = len(out[v])
            # choose how many of the still-open edges point away from v
            choices = [t for t in range(len(later) + 1) if (have + t) % e == 0]
            if not choices:
                ok = False
                break
            t = rng.choice(choices)
            rng.shuffle(later)
            for u in later[:t]:
                out[v].append(u)
            for u in later[t:]:
                out[u].append(v)
            for u in later:
                undecided.discard(frozenset((u, v)))
        if not ok or any(len(o) % e for o in out):
            continue
        blocks = []
        for v in range(1, n + 1):
            nb = out[v][:]
            rng.shuffle(nb)
            for i in range(0, len(nb), e):
                blocks.append((v, tuple(nb[i : i + e])))
        rng.shuffle(blocks)
        return StarSystem(e, n, blocks)
    return None
