"""Partition all e-subsets of [m] into classes of pairwise-disjoint subsets.

The main routine follows the inductive flow argument: elements 1..m are added
one at a time to a multiset of partial subsets held by each class. At step i
every class has a fractional "load" for the new element; an integral
assignment within floor/ceil of those loads always exists and is found by
max-flow with lower bounds. After m steps every partial subset is full and
each e-subset occurs exactly once.

A plain backtracking search over the same contract is kept for small m as a
differential-testing oracle.
"""

from __future__ import annotations

import random
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .errors import InfeasibleRequest, SearchExhausted

Subset = tuple[int, ...]
# The class-by-class search settles small or infeasible requests quickly but
# stalls on near-perfect size vectors, where the restart search does better.
_CLASS_SEARCH_NODES = 20_000


@dataclass(frozen=True)
class SubsetPartition:
    m: int
    e: int
    classes: tuple[tuple[Subset, ...], ...]

    def sizes(self) -> list[int]:
        return [len(c) for c in self.classes]

    def format(self) -> str:
        lines = []
        for i, cls in enumerate(self.classes, start=1):
            body = " ".join("{" + " ".join(map(str, s)) + "}" for s in cls)
            lines.append(f"class {i}: {body}")
        return "\n".join(lines) + "\n"


def check_request(m: int, e: int, sizes: Sequence[int]) -> None:
    if not 1 <= e <= m:
        raise InfeasibleRequest(f"need 1 <= e <= m, got e={e}, m={m}")
    if not sizes or any(int(s) < 1 for s in sizes):
        raise InfeasibleRequest("class sizes must be positive")
    if max(sizes) > m // e:
        raise InfeasibleRequest(f"class size {max(sizes)} exceeds floor(m/e) = {m // e}")
    if sum(sizes) != comb(m, e):
        raise InfeasibleRequest(f"sizes sum to {sum(sizes)}, expected C({m},{e}) = {comb(m, e)}")


def _mask_to_subset(mask: int) -> Subset:
    out = []
    x = 1
    while mask:
        if mask & 1:
            out.append(x)
        mask >>= 1
        x += 1
    return tuple(out)


def _finish(m: int, e: int, held: list[list[int]]) -> SubsetPartition:
    classes = tuple(tuple(sorted(_mask_to_subset(s) for s in cls)) for cls in held)
    return SubsetPartition(m, e, classes)


def partition_all_subsets(m: int, e: int, sizes: Sequence[int], seed: int = 0) -> SubsetPartition:
    """Flow-rounding construction. Deterministic for fixed arguments.

    With ``seed == 0`` classes and partial subsets are offered to the flow
    solver in index / colex order; any other seed shuffles that order per step.
    """
    sizes = [int(s) for s in sizes]
    check_request(m, e, sizes)
    held: list[list[int]] = [[0] * a for a in sizes]
    for i in range(m):
        rng = np.random.default_rng([seed, i]) if seed else None
        _flow_step(held, e, m - i, 1 << i, rng)
    return _finish(m, e, held)


def _flow_step(held: list[list[int]], e: int, remaining: int, bit: int, rng) -> None:
    """Add element ``bit`` to at most one partial subset per class."""
    nclass = len(held)
    lower = []
    upper = []
    mult: list[Counter] = []
    demand: dict[int, int] = {}
    for cls in held:
        need = sum(e - s.bit_count() for s in cls)
        lo, hi = need // remaining, -(-need // remaining)
        if hi > 1:
            raise RuntimeError("class load above one; invariant broken")
        lower.append(lo)
        upper.append(hi)
        cnt = Counter(s for s in cls if s.bit_count() < e)
        mult.append(cnt)
        for s in cnt:
            if s not in demand:
                demand[s] = comb(remaining - 1, e - s.bit_count() - 1)

    class_order = list(range(nclass))
    types = sorted(demand)
    if rng is not None:
        class_order = [class_order[i] for i in rng.permutation(nclass)]
        types = [types[i] for i in rng.permutation(len(types))]

    # nodes: 0 super-source, 1 super-sink, 2 source, 3 sink, classes, types
    cnode = {j: 4 + pos for pos, j in enumerate(class_order)}
    tnode = {s: 4 + nclass + pos for pos, s in enumerate(types)}
    size = 4 + nclass + len(types)
    excess = [0] * size
    rows: list[int] = []
    cols: list[int] = []
    caps: list[int] = []

    def edge(u: int, v: int, lo: int, hi: int) -> None:
        if hi > lo:
            rows.append(u)
            cols.append(v)
            caps.append(hi - lo)
        excess[v] += lo
        excess[u] -= lo

    for j in class_order:
        edge(2, cnode[j], lower[j], upper[j])
        for s in sorted(mult[j]):
            edge(cnode[j], tnode[s], 0, mult[j][s])
    for s in types:
        edge(tnode[s], 3, demand[s], demand[s])
    edge(3, 2, 0, len(held) + 1)
    need = 0
    for v in range(2, size):
        if excess[v] > 0:
            edge(0, v, 0, excess[v])
            need += excess[v]
        elif excess[v] < 0:
            edge(v, 1, 0, -excess[v])

    graph = csr_matrix((np.array(caps, dtype=np.int32), (rows, cols)), shape=(size, size))
    result = maximum_flow(graph, 0, 1)
    if result.flow_value != need:
        raise RuntimeError("no feasible rounding; this contradicts the flow invariant")

    flow = result.flow.tocoo()
    first_type = 4 + nclass
    by_node = {v: s for s, v in tnode.items()}
    by_class = {v: j for j, v in cnode.items()}
    for u, v, f in zip(flow.row, flow.col, flow.data):
        if f > 0 and 4 <= u < first_type and v >= first_type:
            cls = held[by_class[int(u)]]
            target = by_node[int(v)]
            cls[cls.index(target)] = target | bit


def verify_partition(p: SubsetPartition, sizes: Sequence[int] | None = None) -> bool:
    """True iff p covers every e-subset of [m] once, classes are disjoint
    families, and class sizes match ``sizes`` in order (when given)."""
    m, e = p.m, p.e
    if sizes is not None and [len(c) for c in p.classes] != [int(s) for s in sizes]:
        return False
    seen = set()
    for cls in p.classes:
        used: set[int] = set()
        for s in cls:
            if len(s) != e or len(set(s)) != e or not all(1 <= x <= m for x in s):
                return False
            if used.intersection(s):
                return False
            used.update(s)
            key = tuple(sorted(s))
            if key in seen:
                return False
            seen.add(key)
    return len(seen) == comb(m, e)


def exact_cover_partition(
    m: int, e: int, sizes: Sequence[int], *, max_nodes: int = 2_000_000
) -> SubsetPartition:
    """Backtracking search for the same contract (intended for m <= 16).

    Two exact searches share the node budget. The first fills classes one at
    a time, largest first, which suits mixed size vectors. The second branches
    on the tightest remaining constraint with randomized restarts, which
    suits vectors made of perfect classes.
    """
    sizes = [int(s) for s in sizes]
    check_request(m, e, sizes)
    if m > 16:
        raise InfeasibleRequest("the backtracking path is limited to m <= 16")
    first = min(max_nodes // 4, _CLASS_SEARCH_NODES)
    result, used_nodes = _class_search(m, e, sizes, first)
    if result is not None:
        return result
    if used_nodes < first:
        raise InfeasibleRequest("search space exhausted without a partition")
    spent = used_nodes
    limit = 500
    attempt = 0
    while True:
        cap_now = min(limit, max_nodes - spent)
        if cap_now <= 0:
            raise SearchExhausted(f"no partition found within {max_nodes} nodes")
        result, used_nodes = _cover_search(m, e, sizes, cap_now, attempt)
        if result is not None:
            return result
        spent += used_nodes
        if used_nodes < cap_now:
            raise InfeasibleRequest("search space exhausted without a partition")
        attempt += 1
        limit = limit * 3 // 2


def _class_search(
    m: int, e: int, sizes: list[int], max_nodes: int
) -> tuple[SubsetPartition | None, int]:
    """Fill classes in order of decreasing size, subsets in increasing index."""
    subsets = [sum(1 << (x - 1) for x in c) for c in combinations(range(1, m + 1), e)]
    order = sorted(range(len(sizes)), key=lambda j: -sizes[j])
    is_open = [True] * len(subsets)
    held: list[list[int]] = [[] for _ in sizes]
    class_used = [0] * len(sizes)

    def room_ok(pos: int) -> bool:
        later = order[pos:]
        for x in range(m):
            bit = 1 << x
            left = sum(1 for si, s in enumerate(subsets) if is_open[si] and s & bit)
            room = sum(1 for j in later if len(held[j]) < sizes[j] and not class_used[j] & bit)
            if left > room:
                return False
        return True

    nodes = 0
    # Stack of (class position, next subset index to try); the subset placed
    # at each level is the last one held by that class.
    stack: list[list[int]] = [[0, 0]]
    while stack:
        top = stack[-1]
        pos, start = top
        if pos == len(order):
            return _finish(m, e, held), nodes
        j = order[pos]
        if top[1] < 0:
            # revisit after a child failed: undo this level's placement
            si = -top[1] - 1
            is_open[si] = True
            held[j].pop()
            class_used[j] &= ~subsets[si]
            start = si + 1
        placed = False
        for si in range(start, len(subsets)):
            if is_open[si] and not subsets[si] & class_used[j]:
                nodes += 1
                if nodes >= max_nodes:
                    return None, nodes
                is_open[si] = False
                held[j].append(subsets[si])
                class_used[j] |= subsets[si]
                top[1] = -si - 1
                if len(held[j]) < sizes[j]:
                    stack.append([pos, si + 1])
                elif room_ok(pos + 1):
                    stack.append([pos + 1, 0])
                else:
                    is_open[si] = True
                    held[j].pop()
                    class_used[j] &= ~subsets[si]
                    top[1] = 0
                    continue
                placed = True
                break
        if not placed:
            stack.pop()
    return None, nodes


def _cover_search(
    m: int, e: int, sizes: list[int], max_nodes: int, attempt: int
) -> tuple[SubsetPartition | None, int]:
    rng = random.Random(attempt) if attempt else None
    subsets = [sum(1 << (x - 1) for x in c) for c in combinations(range(1, m + 1), e)]
    nclass = len(sizes)
    cap = list(sizes)
    used = [0] * nclass
    slack = [m - a * e for a in sizes]
    open_set = set(range(len(subsets)))
    held: list[list[int]] = [[] for _ in range(nclass)]
    same_size: dict[int, list[int]] = {}
    for j, a in enumerate(sizes):
        same_size.setdefault(a, []).append(j)

    def allowed() -> list[int]:
        out = []
        for group in same_size.values():
            for j in group:
                if used[j]:
                    if cap[j]:
                        out.append(j)
                else:
                    out.append(j)
                    break
        return out

    def choose() -> list[tuple[int, int]] | None:
        """Options of the tightest constraint; [] means a dead end."""
        classes = allowed()
        opened = sorted(open_set)
        best: list[tuple[int, int]] | None = None
        free_of: dict[int, list[int]] = {}
        for j in classes:
            uj = used[j]
            free = [si for si in opened if not subsets[si] & uj]
            if len(free) < cap[j]:
                return []
            free_of[j] = free
        # Element room: the open subsets holding x need distinct classes
        # without x. When the count is tight, each such class must take x.
        for x in range(m):
            b = 1 << x
            left = sum(1 for si in opened if subsets[si] & b)
            room = [j for j in range(nclass) if cap[j] and not used[j] & b]
            if left > len(room):
                return []
            if left and left == len(room):
                for j in room:
                    if j in free_of:
                        opts = [(si, j) for si in free_of[j] if subsets[si] & b]
                        if best is None or len(opts) < len(best):
                            best = opts
        for j, free in free_of.items():
            uj = used[j]
            by_elem: dict[int, list[int]] = {}
            for si in free:
                s = subsets[si]
                while s:
                    low = s & -s
                    by_elem.setdefault(low, []).append(si)
                    s ^= low
            missing = [1 << x for x in range(m) if not uj >> x & 1 and (1 << x) not in by_elem]
            if len(missing) > slack[j]:
                return []
            if len(missing) == slack[j]:
                for x, opts in by_elem.items():
                    if not uj & x and (best is None or len(opts) < len(best)):
                        best = [(si, j) for si in opts]
        if best is not None and len(best) <= 1:
            return best
        if rng is not None:
            opened = opened[:]
            rng.shuffle(opened)
        for si in opened:
            opts = [(si, j) for j in classes if not subsets[si] & used[j]]
            if not opts:
                return []
            if best is None or len(opts) < len(best):
                best = opts
            if len(best) == 1:
                break
        if rng is not None and best:
            best = best[:]
            rng.shuffle(best)
        return best

    def place(si: int, j: int) -> None:
        used[j] |= subsets[si]
        cap[j] -= 1
        held[j].append(subsets[si])
        open_set.discard(si)

    def unplace(si: int, j: int) -> None:
        used[j] &= ~subsets[si]
        cap[j] += 1
        held[j].remove(subsets[si])
        open_set.add(si)

    nodes = 0
    frames: list[list] = []  # [options, next position, placed option or None]
    descend = True
    while True:
        if descend:
            if not open_set:
                return _finish(m, e, held), nodes
            frames.append([choose(), 0, None])
        descend = False
        while frames:
            fr = frames[-1]
            if fr[2] is not None:
                unplace(*fr[2])
                fr[2] = None
            if fr[1] < len(fr[0]):
                fr[2] = fr[0][fr[1]]
                fr[1] += 1
                place(*fr[2])
                nodes += 1
                if nodes >= max_nodes:
                    return None, nodes
                descend = True
                break
            frames.pop()
        if not descend:
            return None, nodes
