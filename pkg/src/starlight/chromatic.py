"""Weak colourings: exhaustive search, chromatic number and uniqueness.

A weak k-colouring leaves no block monochromatic. Two exact engines decide
colourability, both breaking colour symmetry by first use along a fixed
vertex order (most block memberships first): a colour may appear only after
every smaller colour has appeared earlier in that order, so each orbit under
colour permutation has exactly one canonical representative.

* ``"learning"`` (default) encodes the question as clauses (one variable per
  vertex and colour, one "not all colour c" clause per block and colour, plus
  the first-use constraints) and runs the conflict-driven solver in
  :mod:`starlight._cdcl`. Learnt clauses let it refute the forcing gadgets
  that defeat a fixed branching order.
* ``"dfs"`` is a depth-first search over vertices in that order with one
  propagation rule: once e vertices of a block share colour c and one vertex
  is still open, c is removed from that vertex's candidates. It can split the
  top of the tree across worker processes and serves as a cross-check.

``propagate_forced`` is the DFS rule run to a fixpoint with numpy, which is
what the large gadget instances need.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from ._cdcl import ClauseSolver
from .core import Colouring, StarSystem, check_colouring
from .errors import PreconditionError

DEFAULT_MAX_NODES = 100_000_000
DEFAULT_MAX_SECONDS = 300.0
BUDGET_ENV = "STARLIGHT_BUDGET_SECONDS"
_TIME_CHECK_MASK = 0xFF
_CHUNK_ROWS = 1 << 20


def _default_seconds() -> float:
    raw = os.environ.get(BUDGET_ENV)
    return float(raw) if raw else DEFAULT_MAX_SECONDS


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = DEFAULT_MAX_NODES
    max_seconds: float = field(default_factory=_default_seconds)
    workers: int = 1

    def __post_init__(self) -> None:
        if self.max_nodes <= 0 or self.max_seconds <= 0 or self.workers <= 0:
            raise ValueError("budget fields must be positive")


@dataclass(frozen=True)
class SearchStats:
    nodes: int
    depth: int
    seconds: float


@dataclass(frozen=True)
class Colourable:
    colouring: Colouring
    stats: SearchStats
    verdict = "colourable"


@dataclass(frozen=True)
class NotColourable:
    stats: SearchStats
    verdict = "not_colourable"


@dataclass(frozen=True)
class BudgetExceeded:
    stats: SearchStats
    verdict = "budget_exceeded"


@dataclass(frozen=True)
class Unique:
    colouring: Colouring
    stats: SearchStats
    verdict = "unique"


@dataclass(frozen=True)
class Multiple:
    first: Colouring
    second: Colouring
    stats: SearchStats
    verdict = "multiple"


SearchOutcome = Union[Colourable, NotColourable, BudgetExceeded]
UniquenessOutcome = Union[Unique, Multiple, NotColourable, BudgetExceeded]


# ---------------------------------------------------------- partial colourings


class PartialColouring:
    """Candidate colour sets per vertex, stored as bitmasks (bit c-1 = colour c)."""

    __slots__ = ("_k", "_m")

    def __init__(self, k: int, masks) -> None:
        if not 1 <= k <= 63:
            raise ValueError("k must lie in [1, 63]")
        m = np.array(masks, dtype=np.uint64)
        if m.ndim != 1 or m.size < 1:
            raise ValueError("masks must be a 1-d array of length n+1")
        m[0] = 0
        if np.any(m[1:] >> np.uint64(k)):
            raise ValueError(f"candidate colours must lie in [1, {k}]")
        m.flags.writeable = False
        self._k, self._m = k, m

    @classmethod
    def unassigned(cls, n: int, k: int) -> PartialColouring:
        m = np.full(n + 1, (1 << k) - 1, dtype=np.uint64)
        return cls(k, m)

    @classmethod
    def from_assignment(cls, n: int, k: int, fixed) -> PartialColouring:
        """All colours open except at the vertices fixed by the mapping."""
        m = np.full(n + 1, (1 << k) - 1, dtype=np.uint64)
        for v, c in dict(fixed).items():
            if not 1 <= c <= k:
                raise ValueError(f"colour {c} outside [1, {k}]")
            m[v] = 1 << (c - 1)
        return cls(k, m)

    @property
    def k(self) -> int:
        return self._k

    @property
    def n(self) -> int:
        return len(self._m) - 1

    @property
    def masks(self) -> np.ndarray:
        return self._m

    def candidates(self, v: int) -> tuple[int, ...]:
        mask = int(self._m[v])
        return tuple(c for c in range(1, self._k + 1) if mask >> (c - 1) & 1)

    def decided(self) -> np.ndarray:
        """Boolean array over 0..n: True where exactly one colour remains."""
        m = self._m
        out = (m != 0) & ((m & (m - np.uint64(1))) == 0)
        out[0] = False
        return out

    def is_total(self) -> bool:
        return bool(self.decided()[1:].all())

    def to_colouring(self) -> Colouring:
        if not self.is_total():
            raise ValueError("partial colouring is not total")
        colours = np.zeros(self.n, dtype=np.int64)
        m = self._m[1:]
        for c in range(1, self._k + 1):
            colours[m == np.uint64(1 << (c - 1))] = c
        return Colouring(self._k, colours)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PartialColouring):
            return NotImplemented
        return self._k == other._k and bool(np.array_equal(self._m, other._m))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"PartialColouring(k={self._k}, decided={int(self.decided().sum())}/{self.n})"


@dataclass(frozen=True)
class Extended:
    partial: PartialColouring


@dataclass(frozen=True)
class Conflict:
    block: int


def propagate_forced(sys: StarSystem, partial: PartialColouring) -> Extended | Conflict:
    """Apply the forcing rule to a fixpoint.

    Rule: if e vertices of a block are decided with the same colour c and the
    remaining vertex still allows c, drop c there. A candidate set that runs
    empty is a conflict, reported with the lowest offending block index of the
    round in which it happened. Rounds are synchronous, so the result does not
    depend on block order.
    """
    if partial.n != sys.n:
        raise PreconditionError("partial colouring and system have different orders")
    masks = partial.masks.copy()
    if np.any(masks[1:] == 0):
        raise PreconditionError("every candidate set must be nonempty")
    k, e = partial.k, sys.e
    arr = sys.blocks
    # Blocks are re-examined only when one of their vertices became decided.
    active = np.ones(sys.n + 1, dtype=bool)
    while True:
        decided = (masks & (masks - np.uint64(1))) == 0
        decided[0] = False
        hit_blocks: list[np.ndarray] = []
        hit_vertices: list[np.ndarray] = []
        hit_bits: list[np.ndarray] = []
        for start in range(0, arr.shape[0], _CHUNK_ROWS):
            rows = arr[start : start + _CHUNK_ROWS]
            sel = np.flatnonzero(active[rows].any(axis=1))
            if sel.size == 0:
                continue
            sub = rows[sel]
            m = masks[sub]
            dec = decided[sub]
            for c in range(k):
                bit = np.uint64(1 << c)
                is_c = dec & (m == bit)
                full = is_c.sum(axis=1) >= e
                if not full.any():
                    continue
                rows_c = np.flatnonzero(full)
                # the odd one out; a wholly monochromatic block yields column 0
                col = np.argmin(is_c[rows_c], axis=1)
                w = sub[rows_c, col]
                keep = (masks[w] & bit) != 0
                if keep.any():
                    hit_blocks.append(start + sel[rows_c[keep]])
                    hit_vertices.append(w[keep].astype(np.int64))
                    hit_bits.append(np.full(int(keep.sum()), bit, dtype=np.uint64))
        if not hit_blocks:
            return Extended(PartialColouring(k, masks))
        blocks_hit = np.concatenate(hit_blocks)
        verts = np.concatenate(hit_vertices)
        bits = np.concatenate(hit_bits)
        removed = np.zeros_like(masks)
        np.bitwise_or.at(removed, verts, bits)
        new = masks & ~removed
        emptied = (new == 0) & (removed != 0)
        if emptied.any():
            bad = emptied[verts]
            return Conflict(int(blocks_hit[bad].min()))
        new_decided = (new & (new - np.uint64(1))) == 0
        active = new_decided & ~decided
        active[0] = False
        masks = new


# ------------------------------------------------------------------ search


class _Search:
    """Incremental state for the depth-first solver. Vertices and colours are
    1-based; ``dom[v]`` is a bitmask with bit c-1 set when colour c is open."""

    def __init__(self, blocks: np.ndarray, n: int, e: int, k: int, masks=None) -> None:
        self.n, self.e, self.k = n, e, k
        self.rows = blocks.tolist()
        inc: list[list[int]] = [[] for _ in range(n + 1)]
        for b, row in enumerate(self.rows):
            for v in row:
                inc[v].append(b)
        self.inc = inc
        self.k1 = k + 1
        self.cnt = [0] * (len(self.rows) * self.k1)
        self.unas = [e + 1] * len(self.rows)
        self.colour = [0] * (n + 1)
        self.per_colour = [0] * (k + 1)
        self.nused = 0
        full = (1 << k) - 1
        self.symmetric = masks is None
        self.dom = [full] * (n + 1) if masks is None else [int(x) for x in masks]
        self.trail: list[int] = []
        self.order = sorted(range(1, n + 1), key=lambda v: (-len(inc[v]), v))

    def assign(self, v: int, c: int) -> bool:
        """Assign and propagate. On False the caller must undo to its mark."""
        colour, dom, cnt, unas, inc, rows = (
            self.colour, self.dom, self.cnt, self.unas, self.inc, self.rows)
        e, k1, trail = self.e, self.k1, self.trail
        queue = [(v, c)]
        while queue:
            v, c = queue.pop()
            if colour[v]:
                if colour[v] != c:
                    return False
                continue
            bit = 1 << (c - 1)
            if not dom[v] & bit:
                return False
            colour[v] = c
            trail.append(v)
            self.per_colour[c] += 1
            if self.per_colour[c] == 1:
                self.nused += 1
            bad = False
            for b in inc[v]:
                i = b * k1 + c
                cnt[i] += 1
                unas[b] -= 1
                if cnt[i] > e:
                    bad = True
                elif cnt[i] == e and unas[b] == 1 and not bad:
                    for w in rows[b]:
                        if not colour[w]:
                            break
                    if dom[w] & bit:
                        trail.append(-((w << 6) | (c - 1)) - 1)
                        dom[w] ^= bit
                        d = dom[w]
                        if not d:
                            bad = True
                        elif not d & (d - 1):
                            queue.append((w, d.bit_length()))
            if bad:
                return False
        return True

    def undo(self, mark: int) -> None:
        colour, dom, cnt, unas, inc, trail = (
            self.colour, self.dom, self.cnt, self.unas, self.inc, self.trail)
        k1 = self.k1
        while len(trail) > mark:
            t = trail.pop()
            if t >= 0:
                c = colour[t]
                for b in inc[t]:
                    cnt[b * k1 + c] -= 1
                    unas[b] += 1
                colour[t] = 0
                self.per_colour[c] -= 1
                if self.per_colour[c] == 0:
                    self.nused -= 1
            else:
                t = -t - 1
                dom[t >> 6] |= 1 << (t & 63)

    def initial(self) -> bool:
        """Commit the singleton candidate sets of a custom start."""
        for v in range(1, self.n + 1):
            d = self.dom[v]
            if not d:
                return False
            if not d & (d - 1) and not self.colour[v]:
                if not self.assign(v, d.bit_length()):
                    return False
        return True

    def values(self, v: int) -> list[int]:
        top = min(self.nused + 1, self.k) if self.symmetric else self.k
        d = self.dom[v]
        return [c for c in range(1, top + 1) if d >> (c - 1) & 1]

    def next_vertex(self, pos: int) -> int:
        order, colour = self.order, self.colour
        while pos < len(order) and colour[order[pos]]:
            pos += 1
        return pos

    def snapshot(self) -> list[int]:
        return self.colour[1:]


@dataclass
class _RunResult:
    status: str  # "done", "budget"
    solutions: list[list[int]]
    nodes: int
    depth: int


def _dfs(
    s: _Search, limit: int, max_nodes: int, deadline: float, start_pos: int = 0
) -> _RunResult:
    """Enumerate canonical solutions below the current state, up to ``limit``."""
    solutions: list[list[int]] = []
    nodes = 0
    depth = 0
    pos = s.next_vertex(start_pos)
    if pos == len(s.order):
        return _RunResult("done", [s.snapshot()], 0, 0)
    v = s.order[pos]
    stack = [[pos, v, s.values(v), 0, len(s.trail)]]
    while stack:
        fr = stack[-1]
        s.undo(fr[4])
        if fr[3] >= len(fr[2]):
            stack.pop()
            continue
        c = fr[2][fr[3]]
        fr[3] += 1
        nodes += 1
        if nodes >= max_nodes or (
            not nodes & _TIME_CHECK_MASK and time.monotonic() > deadline
        ):
            s.undo(stack[0][4])
            return _RunResult("budget", solutions, nodes, depth)
        if not s.assign(fr[1], c):
            continue
        pos = s.next_vertex(fr[0] + 1)
        if pos == len(s.order):
            solutions.append(s.snapshot())
            if len(solutions) >= limit:
                s.undo(stack[0][4])
                return _RunResult("done", solutions, nodes, depth)
            continue
        v = s.order[pos]
        stack.append([pos, v, s.values(v), 0, len(s.trail)])
        depth = max(depth, len(stack))
    return _RunResult("done", solutions, nodes, depth)


def _frontier(s: _Search, want: int, max_depth: int = 16):
    """Decision prefixes that split the tree, in depth-first order.

    Returns (prefixes, solutions found above the cut, nodes spent). Each
    prefix is a list of (vertex, colour) decisions that propagate cleanly.
    """
    level: list[tuple[list[tuple[int, int]], int]] = [([], 0)]
    found: list[tuple[list[tuple[int, int]], list[int]]] = []
    nodes = 0
    for _ in range(max_depth):
        if len(level) >= want:
            break
        nxt = []
        for prefix, pos in level:
            mark = len(s.trail)
            ok = all(s.assign(v, c) for v, c in prefix)
            if not ok:  # cannot happen: prefixes were checked when created
                s.undo(mark)
                continue
            pos = s.next_vertex(pos)
            v = s.order[pos]
            for c in s.values(v):
                nodes += 1
                inner = len(s.trail)
                if s.assign(v, c):
                    npos = s.next_vertex(pos + 1)
                    if npos == len(s.order):
                        found.append((prefix + [(v, c)], s.snapshot()))
                    else:
                        nxt.append((prefix + [(v, c)], npos))
                s.undo(inner)
            s.undo(mark)
        level = nxt
        if not level:
            break
    return level, found, nodes


def _branch_task(args) -> _RunResult:
    blocks, n, e, k, masks, prefix, pos, limit, max_nodes, deadline = args
    s = _Search(blocks, n, e, k, masks)
    if not s.initial() or not all(s.assign(v, c) for v, c in prefix):
        return _RunResult("done", [], 0, 0)
    r = _dfs(s, limit, max_nodes, deadline, pos)
    r.depth += len(prefix)
    return r


def _prefix_key(p: list[tuple[int, int]], order_index: dict[int, int]) -> list[tuple[int, int]]:
    return [(order_index[v], c) for v, c in p]


ENGINES = ("learning", "dfs")


def _vertex_order(blocks: np.ndarray, n: int) -> list[int]:
    counts = np.bincount(blocks.ravel().astype(np.int64), minlength=n + 1)
    return sorted(range(1, n + 1), key=lambda v: (-int(counts[v]), v))


def _solve_learning(
    sys: StarSystem, k: int, limit: int, budget: SearchBudget, masks=None
) -> tuple[str, list[list[int]], SearchStats]:
    t0 = time.monotonic()
    deadline = t0 + budget.max_seconds
    n, blocks = sys.n, sys.blocks
    order = _vertex_order(blocks, n)
    pos = np.zeros(n + 1, dtype=np.int64)
    pos[order] = np.arange(n)
    symmetric = masks is None and k >= 2
    nx = n * k
    nvars = nx + (n * (k - 1) if symmetric else 0)
    phase = [True] * nx + [False] * (nvars - nx)
    s = ClauseSolver(nvars, phase)

    def x(i: int, c: int) -> int:  # i-th vertex in the order, colour c
        return i * k + c

    for i in range(n):
        s.add_clause([2 * x(i, c) for c in range(1, k + 1)])
        for c in range(1, k + 1):
            for d in range(c + 1, k + 1):
                s.add_clause([2 * x(i, c) + 1, 2 * x(i, d) + 1])
    base = pos[blocks.astype(np.int64)] * k
    for c in range(1, k + 1):
        for row in (2 * (base + c) + 1).tolist():
            s.add_clause(row)
    if masks is not None:
        for v in range(1, n + 1):
            for c in range(1, k + 1):
                if not int(masks[v]) >> (c - 1) & 1:
                    s.add_clause([2 * x(int(pos[v]), c) + 1])
    if symmetric:
        # seen(i, c): colour c occurs among the first i+1 vertices of the order.
        def seen(i: int, c: int) -> int:
            return nx + i * (k - 1) + c

        for i in range(n):
            for c in range(1, k):
                s.add_clause([2 * x(i, c) + 1, 2 * seen(i, c)])
                if i:
                    s.add_clause([2 * seen(i - 1, c) + 1, 2 * seen(i, c)])
                    s.add_clause([2 * seen(i, c) + 1, 2 * seen(i - 1, c), 2 * x(i, c)])
                else:
                    s.add_clause([2 * seen(i, c) + 1, 2 * x(i, c)])
            for c in range(2, k + 1):
                if i:
                    s.add_clause([2 * x(i, c) + 1, 2 * seen(i - 1, c - 1)])
                else:
                    s.add_clause([2 * x(i, c) + 1])

    solutions: list[list[int]] = []
    status = "done"
    while len(solutions) < limit:
        left = budget.max_nodes - s.decisions
        verdict = s.solve(left, deadline) if left > 0 else None
        if verdict is None:
            status = "budget"
            break
        if not verdict:
            break
        m = s.model()
        colours = [0] * n
        for v in range(1, n + 1):
            i = int(pos[v])
            colours[v - 1] = next(c for c in range(1, k + 1) if m[x(i, c)])
        solutions.append(colours)
        s.add_clause([2 * x(int(pos[v]), colours[v - 1]) + 1 for v in range(1, n + 1)])
    return status, solutions, SearchStats(s.decisions, s.max_depth, time.monotonic() - t0)


def _solve(
    sys: StarSystem, k: int, limit: int, budget: SearchBudget, masks=None, engine: str = "learning"
) -> tuple[str, list[list[int]], SearchStats]:
    if engine not in ENGINES:
        raise PreconditionError(f"engine must be one of {ENGINES}")
    if engine == "learning":
        return _solve_learning(sys, k, limit, budget, masks)
    t0 = time.monotonic()
    deadline = t0 + budget.max_seconds
    s = _Search(sys.blocks, sys.n, sys.e, k, masks)
    if not s.initial():
        return "done", [], SearchStats(0, 0, time.monotonic() - t0)
    if budget.workers == 1:
        r = _dfs(s, limit, budget.max_nodes, deadline)
        return r.status, r.solutions, SearchStats(r.nodes, r.depth, time.monotonic() - t0)

    # Split the top of the tree; merge branch results in depth-first order so
    # the answer matches a single-worker run whenever the budget does not bind.
    base_mark = len(s.trail)
    prefixes, found, nodes = _frontier(s, 4 * budget.workers)
    s.undo(base_mark)
    index = {v: i for i, v in enumerate(s.order)}
    items: list[tuple[list, str, object]] = [(p, "solution", sol) for p, sol in found]
    tasks = [
        (sys.blocks, sys.n, sys.e, k, masks, p, pos, limit, budget.max_nodes, deadline)
        for p, pos in prefixes
    ]
    with ProcessPoolExecutor(max_workers=budget.workers) as pool:
        results = list(pool.map(_branch_task, tasks))
    items += [(p, "branch", r) for (p, _), r in zip(prefixes, results)]
    items.sort(key=lambda it: _prefix_key(it[0], index))
    solutions: list[list[int]] = []
    depth = 0
    status = "done"
    for _, kind, payload in items:
        if kind == "solution":
            solutions.append(payload)  # type: ignore[arg-type]
        else:
            r = payload  # type: ignore[assignment]
            nodes += r.nodes
            depth = max(depth, r.depth)
            solutions.extend(r.solutions)
            if r.status == "budget" and len(solutions) < limit:
                status = "budget"
                break
        if len(solutions) >= limit or nodes >= budget.max_nodes:
            break
    if len(solutions) < limit and nodes >= budget.max_nodes:
        status = "budget"
    return status, solutions[:limit], SearchStats(nodes, depth, time.monotonic() - t0)


def _to_colouring(k: int, colours: list[int], sys: StarSystem) -> Colouring:
    col = Colouring(k, colours)
    if not check_colouring(sys, col).proper:
        raise RuntimeError("solver produced an improper colouring")
    return col


def find_colouring(
    sys: StarSystem,
    k: int,
    budget: SearchBudget | None = None,
    *,
    start: PartialColouring | None = None,
    engine: str = "learning",
) -> SearchOutcome:
    """Search for a weak colouring with at most k colours.

    ``start`` restricts candidate colours per vertex; colour symmetry breaking
    is switched off in that case because the restriction may not be symmetric.
    """
    if k < 1:
        raise PreconditionError("k must be at least 1")
    budget = budget or SearchBudget()
    masks = None
    if start is not None:
        if start.k != k or start.n != sys.n:
            raise PreconditionError("start colouring does not match k and the system order")
        masks = start.masks
    status, sols, stats = _solve(sys, k, 1, budget, masks, engine)
    if sols:
        return Colourable(_to_colouring(k, sols[0], sys), stats)
    if status == "budget":
        return BudgetExceeded(stats)
    return NotColourable(stats)


def is_uniquely_k_colourable(
    sys: StarSystem, k: int, budget: SearchBudget | None = None, *, engine: str = "learning"
) -> UniquenessOutcome:
    """Enumerate colourings up to colour permutation, stopping at the second.

    Uniqueness is judged over all proper maps into [k], so a colouring that
    leaves a class empty counts as its own orbit.
    """
    if k < 1:
        raise PreconditionError("k must be at least 1")
    budget = budget or SearchBudget()
    status, sols, stats = _solve(sys, k, 2, budget, engine=engine)
    if len(sols) >= 2:
        return Multiple(_to_colouring(k, sols[0], sys), _to_colouring(k, sols[1], sys), stats)
    if status == "budget":
        return BudgetExceeded(stats)
    if sols:
        return Unique(_to_colouring(k, sols[0], sys), stats)
    return NotColourable(stats)


def uniqueness_by_forbidding(
    sys: StarSystem,
    colouring: Colouring,
    budget: SearchBudget | None = None,
    *,
    engine: str = "learning",
) -> UniquenessOutcome:
    """Independent uniqueness check for k = 2.

    Pin one vertex to its given colour (which rules out the swapped copy) and,
    for each other vertex in turn, demand the opposite colour. Any proper
    colouring found this way lies outside the orbit of ``colouring``.
    """
    if colouring.k != 2 or colouring.n != sys.n:
        raise PreconditionError("needs a 2-colouring of the same order")
    if not check_colouring(sys, colouring).proper:
        raise PreconditionError("the reference colouring is not proper")
    budget = budget or SearchBudget()
    t0 = time.monotonic()
    a = colouring.as_array()
    nodes = 0
    depth = 0
    for v in range(2, sys.n + 1):
        fixed = {1: int(a[1]), v: 3 - int(a[v])}
        start = PartialColouring.from_assignment(sys.n, 2, fixed)
        out = find_colouring(sys, 2, budget, start=start, engine=engine)
        nodes += out.stats.nodes
        depth = max(depth, out.stats.depth)
        if isinstance(out, Colourable):
            return Multiple(colouring, out.colouring, SearchStats(nodes, depth, time.monotonic() - t0))
        if isinstance(out, BudgetExceeded):
            return BudgetExceeded(SearchStats(nodes, depth, time.monotonic() - t0))
    return Unique(colouring, SearchStats(nodes, depth, time.monotonic() - t0))


@dataclass(frozen=True)
class ChromaticCertificate:
    """Upper bound by a proper colouring, lower bound by an exhausted search."""

    lower: int
    upper: int | None
    colouring: Colouring | None
    exhaustion: NotColourable | None
    uniqueness: UniquenessOutcome | None = None


def greedy_colouring(sys: StarSystem) -> Colouring:
    """Colour vertices 1..n in turn with the smallest colour that leaves no
    fully coloured block monochromatic. Cheap upper bound, never optimal by
    design."""
    n, e = sys.n, sys.e
    arr = sys.blocks.astype(np.int64)
    # Incidence: for each vertex, the blocks it belongs to.
    flat = arr.ravel()
    order = np.argsort(flat, kind="stable")
    bounds = np.searchsorted(flat[order], np.arange(n + 2))
    colour = np.zeros(n + 1, dtype=np.int64)
    for v in range(1, n + 1):
        rows = arr[order[bounds[v] : bounds[v + 1]] // (e + 1)]
        # A block becomes fully coloured by v when v is its largest vertex.
        rows = rows[rows.max(axis=1) == v]
        forbidden = set()
        for row in rows:
            others = colour[row[row != v]]
            if (others == others[0]).all():
                forbidden.add(int(others[0]))
        c = 1
        while c in forbidden:
            c += 1
        colour[v] = c
    return Colouring(int(colour.max()), colour[1:])


def chromatic_number(
    sys: StarSystem,
    budget: SearchBudget | None = None,
    *,
    max_k: int | None = None,
    engine: str = "learning",
) -> tuple[int | None, ChromaticCertificate]:
    """Smallest k with a weak k-colouring, or None with a bracketing interval.

    When the budget binds first, the bracket's upper end comes from the first
    larger k that the search still colours, or from a greedy colouring.
    """
    if len(sys) == 0:
        raise PreconditionError("the system has no blocks")
    budget = budget or SearchBudget()
    top = sys.n if max_k is None else min(max_k, sys.n)
    lower = 1
    exhaustion: NotColourable | None = None
    for k in range(1, top + 1):
        out = find_colouring(sys, k, budget, engine=engine)
        if isinstance(out, NotColourable):
            lower, exhaustion = k + 1, out
            continue
        if isinstance(out, Colourable):
            return k, ChromaticCertificate(k, k, out.colouring, exhaustion)
        greedy = greedy_colouring(sys)
        for k2 in range(k + 1, min(greedy.k, top + 1)):
            above = find_colouring(sys, k2, budget, engine=engine)
            if isinstance(above, Colourable):
                return None, ChromaticCertificate(lower, k2, above.colouring, exhaustion)
        if greedy.k <= top:
            return None, ChromaticCertificate(lower, greedy.k, greedy, exhaustion)
        return None, ChromaticCertificate(lower, None, None, exhaustion)
    return None, ChromaticCertificate(lower, None, None, exhaustion)
