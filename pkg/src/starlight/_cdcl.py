"""A small conflict-driven clause-learning solver used by the colouring search.

Literals are ints: ``2*v`` is variable v (1-based) and ``2*v + 1`` its
negation. Watched literals, first-UIP learning with basic minimisation,
activity-ordered decisions (ties go to the lowest variable index), phase
saving, Luby restarts and LBD-based pruning of learnt clauses. Fully
deterministic.
"""

from __future__ import annotations

import heapq
import time
from collections.abc import Iterable

_RESTART_UNIT = 100
_TIME_CHECK_MASK = 0xFF


def _luby(i: int) -> int:
    """i-th term (0-based) of the Luby sequence 1 1 2 1 1 2 4 ..."""
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i %= size
    return 1 << seq


class ClauseSolver:
    def __init__(self, nvars: int, initial_phase: Iterable[bool] | None = None) -> None:
        self.nv = nvars
        self.cl: list[list[int] | None] = []
        self.is_learnt: list[bool] = []
        self.lbd: list[int] = []
        self.watch: list[list[int]] = [[] for _ in range(2 * nvars + 2)]
        self.val = [-1] * (2 * nvars + 2)
        self.level = [0] * (nvars + 1)
        self.reason: list[int] = [-1] * (nvars + 1)
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.act = [0.0] * (nvars + 1)
        self.inc = 1.0
        phase = list(initial_phase) if initial_phase is not None else [False] * nvars
        self.phase = [False] + [bool(p) for p in phase]
        self.heap = [(0.0, v) for v in range(1, nvars + 1)]
        self.seen = bytearray(nvars + 1)
        self.ok = True
        self.n_learnts = 0
        self.max_learnts = 0
        self.decisions = 0
        self.conflicts = 0
        self.max_depth = 0

    # ------------------------------------------------------------ clauses

    def add_clause(self, lits: Iterable[int]) -> bool:
        """Add a clause at decision level 0. Returns False once unsatisfiable."""
        if not self.ok:
            return False
        self._cancel(0)
        val = self.val
        out: list[int] = []
        for lit in sorted(set(lits)):
            if lit ^ 1 in out:
                return True  # tautology
            v = val[lit]
            if v == 1:
                return True
            if v == -1:
                out.append(lit)
        if not out:
            self.ok = False
            return False
        if len(out) == 1:
            self._enqueue(out[0], -1)
            if self._propagate() >= 0:
                self.ok = False
            return self.ok
        self._attach(out, learnt=False, lbd=0)
        return True

    def _attach(self, lits: list[int], learnt: bool, lbd: int) -> int:
        ci = len(self.cl)
        self.cl.append(lits)
        self.is_learnt.append(learnt)
        self.lbd.append(lbd)
        self.watch[lits[0]].append(ci)
        self.watch[lits[1]].append(ci)
        if learnt:
            self.n_learnts += 1
        return ci

    # ---------------------------------------------------------- assignment

    def _enqueue(self, lit: int, reason: int) -> None:
        v = lit >> 1
        self.val[lit] = 1
        self.val[lit ^ 1] = 0
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _cancel(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        stop = self.trail_lim[lvl]
        val, phase, act, heap, reason = self.val, self.phase, self.act, self.heap, self.reason
        for lit in self.trail[stop:]:
            v = lit >> 1
            phase[v] = not lit & 1
            val[lit] = val[lit ^ 1] = -1
            reason[v] = -1
            heapq.heappush(heap, (-act[v], v))
        del self.trail[stop:]
        del self.trail_lim[lvl:]
        self.qhead = len(self.trail)

    def _propagate(self) -> int:
        """Unit propagation; returns a conflicting clause index or -1."""
        val, watch, cl, trail = self.val, self.watch, self.cl, self.trail
        enqueue = self._enqueue
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            fl = p ^ 1
            ws = watch[fl]
            keep: list[int] = []
            watch[fl] = keep
            i, n = 0, len(ws)
            while i < n:
                ci = ws[i]
                i += 1
                c = cl[ci]
                if c is None:
                    continue
                if c[0] == fl:
                    c[0] = c[1]
                    c[1] = fl
                first = c[0]
                if val[first] == 1:
                    keep.append(ci)
                    continue
                for j in range(2, len(c)):
                    lit = c[j]
                    if val[lit] != 0:
                        c[1] = lit
                        c[j] = fl
                        watch[lit].append(ci)
                        break
                else:
                    keep.append(ci)
                    if val[first] == 0:
                        keep.extend(ws[i:])
                        self.qhead = len(trail)
                        return ci
                    enqueue(first, ci)
        return -1

    # ------------------------------------------------------------ learning

    def _bump(self, v: int) -> None:
        act = self.act
        act[v] += self.inc
        if act[v] > 1e100:
            for u in range(1, self.nv + 1):
                act[u] *= 1e-100
            self.inc *= 1e-100
            self._rebuild_heap()
        elif self.val[2 * v] == -1:
            heapq.heappush(self.heap, (-act[v], v))

    def _rebuild_heap(self) -> None:
        val, act = self.val, self.act
        self.heap = [(-act[v], v) for v in range(1, self.nv + 1) if val[2 * v] == -1]
        heapq.heapify(self.heap)

    def _analyze(self, confl: int) -> tuple[list[int], int, int]:
        cl, seen, level, reason, trail = self.cl, self.seen, self.level, self.reason, self.trail
        dl = len(self.trail_lim)
        learnt = [0]
        path = 0
        p = -1
        idx = len(trail) - 1
        while True:
            c = cl[confl]
            for q in c if p == -1 else c[1:]:
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = 1
                    self._bump(v)
                    if level[v] >= dl:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            v = p >> 1
            confl = reason[v]
            seen[v] = 0
            path -= 1
            if path == 0:
                break
        learnt[0] = p ^ 1
        # Drop literals implied by the rest of the clause.
        kept = [learnt[0]]
        for q in learnt[1:]:
            r = reason[q >> 1]
            if r < 0 or any(not seen[x >> 1] and level[x >> 1] > 0 for x in cl[r][1:]):
                kept.append(q)
        for q in learnt[1:]:
            seen[q >> 1] = 0
        learnt = kept
        bt = 0
        if len(learnt) > 1:
            best = 1
            for j in range(2, len(learnt)):
                if level[learnt[j] >> 1] > level[learnt[best] >> 1]:
                    best = j
            learnt[1], learnt[best] = learnt[best], learnt[1]
            bt = level[learnt[1] >> 1]
        lbd = len({level[q >> 1] for q in learnt})
        self.inc *= 1.0 / 0.95
        return learnt, bt, lbd

    def _reduce(self) -> None:
        cl, val, reason = self.cl, self.val, self.reason
        cands = []
        for ci, c in enumerate(cl):
            if c is None or not self.is_learnt[ci] or self.lbd[ci] <= 2:
                continue
            if val[c[0]] == 1 and reason[c[0] >> 1] == ci:
                continue
            cands.append((self.lbd[ci], len(c), ci))
        cands.sort()
        for _, _, ci in cands[len(cands) // 2 :]:
            cl[ci] = None
            self.n_learnts -= 1
        self.max_learnts = int(self.max_learnts * 1.1)

    def _pick(self) -> int:
        heap, val, act = self.heap, self.val, self.act
        while heap:
            a, v = heapq.heappop(heap)
            if val[2 * v] == -1 and -a == act[v]:
                return v
        return 0

    # --------------------------------------------------------------- solve

    def solve(self, max_decisions: int, deadline: float) -> bool | None:
        """True (model in :meth:`model`), False (unsatisfiable) or None (budget)."""
        if not self.ok:
            return False
        if self._propagate() >= 0:
            self.ok = False
            return False
        if not self.max_learnts:
            self.max_learnts = max(2000, len(self.cl) // 3)
        restarts = 0
        budget_conflicts = _luby(restarts) * _RESTART_UNIT
        steps = 0
        while True:
            confl = self._propagate()
            if confl >= 0:
                self.conflicts += 1
                budget_conflicts -= 1
                if not self.trail_lim:
                    self.ok = False
                    return False
                learnt, bt, lbd = self._analyze(confl)
                self._cancel(bt)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], -1)
                else:
                    ci = self._attach(learnt, learnt=True, lbd=lbd)
                    self._enqueue(learnt[0], ci)
                if self.n_learnts - len(self.trail) >= self.max_learnts:
                    self._reduce()
                continue
            steps += 1
            if not steps & _TIME_CHECK_MASK and time.monotonic() > deadline:
                self._cancel(0)
                return None
            if budget_conflicts <= 0:
                restarts += 1
                budget_conflicts = _luby(restarts) * _RESTART_UNIT
                self._cancel(0)
                continue
            if len(self.heap) > 8 * self.nv + 10_000:
                self._rebuild_heap()
            v = self._pick()
            if not v:
                return True
            if self.decisions >= max_decisions:
                self._cancel(0)
                return None
            self.decisions += 1
            self.trail_lim.append(len(self.trail))
            self.max_depth = max(self.max_depth, len(self.trail_lim))
            self._enqueue(2 * v if self.phase[v] else 2 * v + 1, -1)

    def model(self) -> list[bool]:
        """Truth values of variables 1..nv after a True solve (index 0 unused)."""
        return [False] + [self.val[2 * v] == 1 for v in range(1, self.nv + 1)]
