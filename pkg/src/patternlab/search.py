"""Large pattern-avoiding sets: greedy construction and exact branch-and-bound.

Avoiding sets are independent sets of the r-uniform hypergraph whose edges
are the point sets of pattern instances.  Edges are produced on demand from
pairs of points (two positions of an instance determine the rest), never
materialised for the whole space.
"""

from __future__ import annotations

import multiprocessing as mp
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .engine import Space
from .pattern import Instance, PatternSpec, PointSet, find_violation, require_full_rank

DEFAULT_BUDGET = 10**7
EXACT_SIZE_LIMIT = 3**4
THREADS_ENV = "PATTERNLAB_THREADS"


class SearchError(ValueError):
    pass


@dataclass
class SearchResult:
    best_set: PointSet
    size: int
    optimal: bool
    nodes_explored: int
    certificate: Optional[Instance]
    deterministic: bool = True
    mode: str = "exact"

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "size": self.size,
            "optimal": self.optimal,
            "nodes_explored": self.nodes_explored,
            "deterministic": self.deterministic,
            "certified": self.certificate is None,
            "certificate": None if self.certificate is None else self.certificate.to_json(),
            "set": self.best_set.to_json(),
        }


def worker_count(deterministic: bool = True) -> int:
    if deterministic:
        return 1
    cap = os.environ.get(THREADS_ENV)
    n = os.cpu_count() or 1
    if cap:
        n = min(n, max(1, int(cap)))
    return n


class InstanceGraph:
    """Instance hypergraph of a full-rank pattern on ``(F_q^n)^k``."""

    def __init__(self, pattern: PatternSpec, n: int):
        require_full_rank(pattern)
        if n < 1:
            raise SearchError("n must be >= 1")
        self.pattern = pattern
        self.space = Space(pattern.field, pattern.k, n)
        self.r = pattern.r
        self._edges: dict[int, tuple[int, ...]] = {}

    def _instances_through(self, a: np.ndarray, others: np.ndarray) -> np.ndarray:
        """Point indices, shape (R, r), of every instance placing ``a`` and a
        row of ``others`` at two distinct positions."""
        sp, maps = self.space, self.pattern.position_maps
        b = others
        a = np.broadcast_to(a, b.shape)
        blocks = []
        for i in range(self.r):
            for j in range(self.r):
                if i == j:
                    continue
                cols = [sp.encode(sp.affine(maps[i, j, t], a, b)) for t in range(self.r)]
                blocks.append(np.stack(cols, axis=-1))
        return np.concatenate(blocks, axis=0)

    def edges(self, x: int) -> tuple[int, ...]:
        """Bitmasks of the other r-1 points of each instance containing x."""
        cached = self._edges.get(x)
        if cached is not None:
            return cached
        sp = self.space
        all_idx = np.arange(sp.size, dtype=np.int64)
        others = sp.decode(all_idx[all_idx != x])
        inst = self._instances_through(sp.decode(x), others)
        masks = set()
        for row in inst.tolist():
            mask = 0
            for v in row:
                if v != x:
                    mask |= 1 << v
            masks.add(mask)
        out = tuple(sorted(masks))
        self._edges[x] = out
        return out

    def completes_instance(self, x: int, members: np.ndarray, member_mask: np.ndarray) -> bool:
        """Would adding point x to the set complete an instance?"""
        if len(members) == 0:
            return False
        sp = self.space
        inst = self._instances_through(sp.decode(x), sp.decode(members))
        return bool((member_mask[inst].sum(axis=1) >= self.r - 1).any())


def greedy(pattern: PatternSpec, n: int, order: str = "lexicographic",
           seed: Optional[int] = None) -> SearchResult:
    """Scan all points in the given order, keeping each one that does not
    complete an instance with points already kept."""
    if n < 1:
        raise SearchError("n must be >= 1")
    g = InstanceGraph(pattern, n)
    sp = g.space
    points = list(range(sp.size))
    if order == "seeded-random":
        random.Random(seed).shuffle(points)
    elif order != "lexicographic":
        raise SearchError(f"unknown order {order!r}")
    member_mask = np.zeros(sp.size, dtype=bool)
    # x itself is not yet a member, so a completing instance has exactly r-1 members
    kept: list[int] = []
    for x in points:
        if not g.completes_instance(x, np.asarray(kept, dtype=np.int64), member_mask):
            kept.append(x)
            member_mask[x] = True
    A = PointSet.from_indices(sp, kept)
    return SearchResult(A, len(A), False, len(points), find_violation(pattern, A),
                        deterministic=True, mode="greedy")


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _BranchAndBound:
    def __init__(self, edges_of, budget: int, incumbent=None, node_counter=None):
        self.edges_of = edges_of
        self.budget = budget
        self.nodes = 0
        self.best = 0
        self.best_mask = 0
        self.aborted = False
        self.incumbent = incumbent
        self.node_counter = node_counter
        self._unreported = 0

    def _shared_best(self) -> int:
        if self.incumbent is None:
            return self.best
        return max(self.best, self.incumbent.value)

    def _tick(self) -> bool:
        self.nodes += 1
        if self.node_counter is None:
            return self.nodes > self.budget
        self._unreported += 1
        if self._unreported >= 1024:
            with self.node_counter.get_lock():
                self.node_counter.value += self._unreported
                total = self.node_counter.value
            self._unreported = 0
            return total > self.budget
        return False

    def _improve(self, size: int, chosen: int):
        if size > self.best:
            self.best, self.best_mask = size, chosen
            if self.incumbent is not None:
                with self.incumbent.get_lock():
                    if size > self.incumbent.value:
                        self.incumbent.value = size

    def include(self, chosen: int, cand: int, x: int) -> int:
        """Candidates left after adding x: drop x and every point that would
        now complete an instance."""
        bit = 1 << x
        forbidden = 0
        for e in self.edges_of(x):
            rest = e & ~chosen
            if rest and not rest & (rest - 1):
                forbidden |= rest
        return cand & ~bit & ~forbidden

    def run(self, chosen: int, size: int, cand: int):
        if self.aborted:
            return
        if self._tick():
            self.aborted = True
            return
        self._improve(size, chosen)
        if not cand or size + bin(cand).count("1") <= self._shared_best():
            return
        x = (cand & -cand).bit_length() - 1
        self.run(chosen | (1 << x), size + 1, self.include(chosen, cand, x))
        self.run(chosen, size, cand & ~(1 << x))

    def flush(self):
        if self.node_counter is not None and self._unreported:
            with self.node_counter.get_lock():
                self.node_counter.value += self._unreported
            self._unreported = 0


def _root_tasks(bb: _BranchAndBound, chosen: int, size: int, cand: int, depth: int):
    """Frontier of the include/exclude tree ``depth`` levels down, in DFS order."""
    if depth == 0 or not cand:
        return [(chosen, size, cand)]
    x = (cand & -cand).bit_length() - 1
    return (_root_tasks(bb, chosen | (1 << x), size + 1, bb.include(chosen, cand, x), depth - 1)
            + _root_tasks(bb, chosen, size, cand & ~(1 << x), depth - 1))


_WORKER: dict = {}


def _init_worker(edges, incumbent, node_counter, budget):
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 10_000))
    _WORKER.update(edges=edges, incumbent=incumbent, node_counter=node_counter, budget=budget)


def _run_task(task):
    w = _WORKER
    bb = _BranchAndBound(w["edges"].__getitem__, w["budget"], w["incumbent"], w["node_counter"])
    bb.run(*task)
    bb.flush()
    return bb.best, bb.best_mask, bb.aborted


def exact_max(pattern: PatternSpec, n: int, budget: int = DEFAULT_BUDGET,
              deterministic: bool = True, fix_zero: bool = True,
              size_limit: int = EXACT_SIZE_LIMIT, workers: Optional[int] = None) -> SearchResult:
    """Maximum avoiding set by include/exclude branch-and-bound.

    Points are branched in lexicographic order, include first; a branch is
    pruned when its size plus its remaining candidates cannot beat the
    incumbent.  With ``fix_zero`` only the branch containing the zero point
    is searched, which loses nothing because avoidance is translation
    invariant.  Deterministic mode reports the lexicographically smallest
    maximum set; parallel mode reports the same size but possibly another set.
    """
    g = InstanceGraph(pattern, n)
    sp = g.space
    if sp.size > size_limit:
        raise SearchError(f"space has {sp.size} points; exact search limited to {size_limit}")
    sys.setrecursionlimit(max(sys.getrecursionlimit(), sp.size * 4 + 1000))
    full = (1 << sp.size) - 1
    bb = _BranchAndBound(g.edges, budget)
    if fix_zero:
        start = (1, 1, bb.include(0, full, 0))
    else:
        start = (0, 0, full)

    workers = worker_count(deterministic) if workers is None else workers
    if workers <= 1:
        bb.run(*start)
        best_mask, nodes, optimal = bb.best_mask, bb.nodes, not bb.aborted
    else:
        best_mask, nodes, optimal = _parallel(g, bb, start, budget, workers)

    A = PointSet.from_indices(sp, _bits(best_mask))
    return SearchResult(A, len(A), optimal, nodes if optimal else min(nodes, budget),
                        find_violation(pattern, A), deterministic=workers <= 1, mode="exact")


def _parallel(g: InstanceGraph, bb: _BranchAndBound, start, budget: int, workers: int):
    edges = [g.edges(x) for x in range(g.space.size)]
    depth = max(1, (4 * workers).bit_length())
    tasks = _root_tasks(bb, *start, depth)
    ctx = mp.get_context("fork" if "fork" in mp.get_all_start_methods() else "spawn")
    incumbent = ctx.Value("i", 0)
    node_counter = ctx.Value("q", 0)
    with ProcessPoolExecutor(workers, mp_context=ctx, initializer=_init_worker,
                             initargs=(edges, incumbent, node_counter, budget)) as pool:
        results = list(pool.map(_run_task, tasks))
    best, best_mask, aborted = 0, 0, False
    for size, mask, ab in results:
        aborted |= ab
        if size > best:
            best, best_mask = size, mask
    return best_mask, node_counter.value + len(tasks), not aborted


def certify(pattern: PatternSpec, A: PointSet) -> tuple[bool, Optional[Instance]]:
    witness = find_violation(pattern, A)
    return witness is None, witness
