"""Exact offline optimization over complete allocations.

Everything here enumerates or prunes the ``n^m`` space of complete
allocations with exact rational arithmetic.  ``minimize_index`` materializes
the full argmin set (manipulation studies need the uniform distribution over
minimizers, not an arbitrary representative).  ``max_egalitarian`` binary
searches the optimum with a pruned feasibility search; the welfare maximizers
double as the offline baselines for the experiment harness.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd as _gcd
from typing import Iterator, Optional

from .indices import (
    DEFAULT_ENVY_NORM,
    EnvyNormalization,
    IndexKind,
    SearchSpaceTooLarge,
    index_of_matrix,
    is_envy_free,
)
from .model import Allocation, Instance

DEFAULT_ENUMERATION_CAP = 10_000_000


class NotSquare(Exception):
    """The matching fast path needs as many items as agents."""


@dataclass(frozen=True)
class MinimizationResult:
    min_value: Fraction
    minimizers: tuple[Allocation, ...]
    explored: int


@dataclass(frozen=True)
class PriceReport:
    """Welfare prices of an index; ``None`` means the price is unbounded."""

    utilitarian_price: Optional[Fraction]
    egalitarian_price: Optional[Fraction]


@dataclass(frozen=True)
class EgalitarianResult:
    value: Fraction
    allocation: Allocation
    optimal: bool
    explored: int


def _check_cap(inst: Instance, cap: int) -> None:
    if inst.num_agents ** inst.num_items > cap:
        raise SearchSpaceTooLarge(
            f"{inst.num_agents}^{inst.num_items} allocations exceed cap {cap}"
        )


def enumerate_complete_allocations(
    inst: Instance, cap: int = DEFAULT_ENUMERATION_CAP
) -> Iterator[Allocation]:
    """Yield each of the ``n^m`` complete allocations once, in a fixed order."""
    _check_cap(inst, cap)
    for owners in product(range(inst.num_agents), repeat=inst.num_items):
        yield Allocation(owners)


def _realized_profiles(inst: Instance, use_true: bool):
    """(owners, realized utility vector) for every complete allocation."""
    values = inst.values(use_true)
    n, m = inst.num_agents, inst.num_items
    for owners in product(range(n), repeat=m):
        realized = [Fraction(0)] * n
        for j, a in enumerate(owners):
            realized[a] += values[a][j]
        yield owners, realized


def minimize_index(
    inst: Instance,
    kind: IndexKind,
    norm: EnvyNormalization = DEFAULT_ENVY_NORM,
    use_true: bool = True,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> MinimizationResult:
    """Exact global minimum of an index over complete allocations, with the
    full argmin set."""
    _check_cap(inst, cap)
    values = inst.values(use_true)
    n, m = inst.num_agents, inst.num_items
    best: Optional[Fraction] = None
    argmin: list[Allocation] = []
    explored = 0
    for owners in product(range(n), repeat=m):
        mat = [[Fraction(0)] * n for _ in range(n)]
        for j, a in enumerate(owners):
            col = a
            for i in range(n):
                mat[i][col] += values[i][j]
        score = index_of_matrix(mat, kind, norm)
        explored += 1
        if best is None or score < best:
            best = score
            argmin = [Allocation(owners)]
        elif score == best:
            argmin.append(Allocation(owners))
    assert best is not None
    return MinimizationResult(min_value=best, minimizers=tuple(argmin), explored=explored)


def envy_free_allocations(
    inst: Instance, use_true: bool = True, cap: int = DEFAULT_ENUMERATION_CAP
) -> tuple[Allocation, ...]:
    """Exactly the complete envy-free allocations (possibly none)."""
    _check_cap(inst, cap)
    out = []
    for alloc in enumerate_complete_allocations(inst, cap):
        if is_envy_free(inst, alloc, use_true):
            out.append(alloc)
    return tuple(out)


def max_utilitarian(inst: Instance, use_true: bool = True) -> tuple[Fraction, Allocation]:
    """Offline utilitarian optimum: every item to a highest-value agent."""
    values = inst.values(use_true)
    owners = []
    total = Fraction(0)
    for j in range(inst.num_items):
        best_agent = max(range(inst.num_agents), key=lambda i: values[i][j])
        owners.append(best_agent)
        total += values[best_agent][j]
    return total, Allocation(tuple(owners))


def _greedy_egalitarian(values, items, n, shuffles=24) -> tuple[int, dict]:
    """Best of several poorest-first greedy passes, then single-item moves
    until no move raises the minimum."""
    import random as _random

    def single(order):
        realized = [0] * n
        owners = {}
        for j in order:
            candidates = [i for i in range(n) if values[i][j] > 0]
            if not candidates:
                owners[j] = 0
                continue
            poorest = min(candidates, key=lambda i: (realized[i], -values[i][j]))
            owners[j] = poorest
            realized[poorest] += values[poorest][j]
        return min(realized), owners, realized

    best_val, best_owners, best_realized = single(items)
    order = list(items)
    rng = _random.Random(0x5EED)
    for _ in range(shuffles):
        rng.shuffle(order)
        val, owners, realized = single(order)
        if val > best_val:
            best_val, best_owners, best_realized = val, owners, realized

    realized = best_realized
    owners = best_owners
    improved = True
    while improved:
        improved = False
        for j in items:
            cur = owners[j]
            for k in range(n):
                if k == cur or values[k][j] <= 0:
                    continue
                realized[cur] -= values[cur][j]
                realized[k] += values[k][j]
                if min(realized) > best_val:
                    best_val = min(realized)
                    owners[j] = k
                    improved = True
                    cur = k
                else:
                    realized[k] -= values[k][j]
                    realized[cur] += values[cur][j]
    return best_val, owners


def _egal_feasible(values, order, suffix_by_mask, n, target, deadline):
    """Does a complete allocation give every agent at least ``target``?

    Depth-first search over the items in ``order`` with utilities capped at
    ``target``: once an agent reaches the target its surplus is irrelevant,
    which collapses the state space.  A node dies when, for some agent
    subset, the joint deficit exceeds the best the remaining items could pay
    that subset (``suffix_by_mask``), or the heads needed (each agent must
    still receive at least ``ceil(deficit / best remaining item)`` items)
    exceed the remaining items that subset values at all, or the capped
    profile was already refuted at this depth.  Returns (owners dict or
    None, nodes, timed out).
    """
    depth = len(order)
    capped = [0] * n
    owners: dict[int, int] = {}
    seen: list[set] = [set() for _ in range(depth)]
    memo_room = 4_000_000
    memo_used = 0
    nodes = 0
    timed_out = False
    cols = [[values[i][j] for i in range(n)] for j in order]
    key_base = target + 1
    agents = list(range(n))
    size = 1 << n
    need = [0] * size
    heads = [0] * size

    # Per (agent, depth): cumulative sums of the remaining item values sorted
    # descending, so the fewest items that can still cover a deficit is one
    # bisect away.  Per (depth, subset): how many remaining items the subset
    # values at all.
    from bisect import bisect_left, insort

    gains: list[list[list[int]]] = [[] for _ in range(n)]
    count_left = [[0] * size for _ in range(depth + 1)]
    for i in range(n):
        acc: list[int] = []
        per_t: list[list[int]] = [[] for _ in range(depth + 1)]
        for t in range(depth - 1, -1, -1):
            v = cols[t][i]
            if v > 0:
                insort(acc, -v)
            running = 0
            sums = []
            for neg in acc:
                running -= neg
                sums.append(running)
            per_t[t] = sums
        gains[i] = per_t
    for t in range(depth - 1, -1, -1):
        col = cols[t]
        pos_mask = 0
        for i in range(n):
            if col[i] > 0:
                pos_mask |= 1 << i
        row_prev = count_left[t + 1]
        row = count_left[t]
        for mask in range(1, size):
            row[mask] = row_prev[mask] + (1 if mask & pos_mask else 0)

    def dfs(t: int) -> bool:
        nonlocal nodes, timed_out, memo_used
        nodes += 1
        if timed_out:
            return False
        if deadline is not None and nodes % 4096 == 0 and time.monotonic() > deadline:
            timed_out = True
            return False
        unfinished = 0
        key = 0
        for i in agents:
            c = capped[i]
            key = key * key_base + c
            if c < target:
                unfinished |= 1 << i
        if not unfinished:
            return True
        if t == depth:
            return False
        table = suffix_by_mask[t]
        counts = count_left[t]
        per_head = [0] * n
        deficits = [0] * n
        for i in agents:
            d = target - capped[i]
            if d > 0:
                deficits[i] = d
                sums = gains[i][t]
                if not sums or sums[-1] < d:
                    return False
                per_head[i] = bisect_left(sums, d) + 1
        for mask in range(1, size):
            low = mask & -mask
            idx = low.bit_length() - 1
            rest = mask ^ low
            value_need = need[rest] + deficits[idx]
            if value_need > table[mask]:
                return False
            need[mask] = value_need
            head_need = heads[rest] + per_head[idx]
            if head_need > counts[mask]:
                return False
            heads[mask] = head_need
        memo = seen[t]
        if key in memo:
            return False
        if memo_used < memo_room:
            memo.add(key)
            memo_used += 1

        col = cols[t]
        candidates = [i for i in agents if capped[i] < target and col[i] > 0]
        if not candidates:
            # Nobody unfinished wants this item; park it and move on.
            owners[order[t]] = 0
            return dfs(t + 1)
        if len(candidates) > 1:
            candidates.sort(key=capped.__getitem__)
        j = order[t]
        for i in candidates:
            before = capped[i]
            after = before + col[i]
            owners[j] = i
            capped[i] = after if after < target else target
            if dfs(t + 1):
                return True
            capped[i] = before
            if timed_out:
                return False
        del owners[j]
        return False

    ok = dfs(0)
    return (dict(owners) if ok else None), nodes, timed_out


def max_egalitarian(
    inst: Instance,
    use_true: bool = True,
    time_budget: Optional[float] = None,
) -> EgalitarianResult:
    """Exact maximum of ``min_i u_i(A_i)``.

    Utilities are scaled to integers, a greedy-plus-local-search incumbent
    seeds a binary search on the answer, and each candidate value is decided
    by the capped feasibility search in :func:`_egal_feasible`.  When
    ``time_budget`` (seconds) expires, the best allocation found so far is
    returned with ``optimal=False``.
    """
    raw = inst.values(use_true)
    n, m = inst.num_agents, inst.num_items
    if m == 0:
        return EgalitarianResult(Fraction(0), Allocation(()), True, 0)

    # Integer bids are by far the common case; a common scale keeps the hot
    # loop in machine arithmetic without changing any comparison.
    scale = 1
    for row in raw:
        for v in row:
            scale = scale * v.denominator // _gcd(scale, v.denominator)
    values = [[int(v * scale) for v in row] for row in raw]
    unscale = Fraction(1, scale)

    # Items nobody values cannot move the minimum; park them on agent 0.
    live = [j for j in range(m) if any(values[i][j] > 0 for i in range(n))]
    order = sorted(live, key=lambda j: (-max(values[i][j] for i in range(n)),
                                        -sum(values[i][j] for i in range(n))))
    depth = len(order)
    full = (1 << n) - 1
    # suffix_by_mask[t][mask]: what items order[t:] pay agent set `mask` if
    # each goes to its best agent inside the set.
    suffix_by_mask = [[0] * (full + 1) for _ in range(depth + 1)]
    for t in range(depth - 1, -1, -1):
        j = order[t]
        row_prev = suffix_by_mask[t + 1]
        row = suffix_by_mask[t]
        for mask in range(1, full + 1):
            low = mask & -mask
            rest = mask ^ low
            item_best = values[low.bit_length() - 1][j]
            if rest:
                prev_best = row[rest] - row_prev[rest]
                if prev_best > item_best:
                    item_best = prev_best
            row[mask] = row_prev[mask] + item_best

    best_value, greedy_owners = _greedy_egalitarian(values, order, n)
    witness = dict(greedy_owners)
    explored = 0
    deadline = time.monotonic() + time_budget if time_budget is not None else None
    timed_out = False

    lo = best_value
    hi = min(suffix_by_mask[0][mask] // bin(mask).count("1") for mask in range(1, full + 1))
    probe_above = True
    while lo < hi:
        # The greedy incumbent is usually optimal, so try to refute lo+1
        # outright before falling back to binary search.
        mid = lo + 1 if probe_above else (lo + hi + 1) // 2
        probe_above = False
        found, nodes, expired = _egal_feasible(values, order, suffix_by_mask, n, mid, deadline)
        explored += nodes
        if expired:
            timed_out = True
            break
        if found is None:
            hi = mid - 1
        else:
            witness = found
            realized = [0] * n
            for j, agent in found.items():
                realized[agent] += values[agent][j]
            lo = min(realized)

    owners = tuple(witness.get(j, 0) for j in range(m))
    return EgalitarianResult(
        value=Fraction(lo) * unscale,
        allocation=Allocation(owners),
        optimal=not timed_out,
        explored=explored,
    )


def _hopcroft_karp(adjacency: list[list[int]], num_right: int) -> list[Optional[int]]:
    """Maximum bipartite matching; returns ``match_left`` (right index or None).

    Standard Hopcroft-Karp: BFS builds level layers from free left vertices,
    DFS augments along shortest alternating paths, repeated until no
    augmenting path exists.
    """
    num_left = len(adjacency)
    INF = float("inf")
    match_left: list[Optional[int]] = [None] * num_left
    match_right: list[Optional[int]] = [None] * num_right
    dist = [INF] * num_left

    def bfs() -> bool:
        queue = deque()
        for u in range(num_left):
            if match_left[u] is None:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = INF
        found = False
        while queue:
            u = queue.popleft()
            for v in adjacency[u]:
                w = match_right[v]
                if w is None:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(u: int) -> bool:
        for v in adjacency[u]:
            w = match_right[v]
            if w is None or (dist[w] == dist[u] + 1 and dfs(w)):
                match_left[u] = v
                match_right[v] = u
                return True
        dist[u] = INF
        return False

    while bfs():
        for u in range(num_left):
            if match_left[u] is None:
                dfs(u)
    return match_left


def matching_minimizer_square(inst: Instance, kind: IndexKind) -> Optional[Allocation]:
    """Fast path for ``n == m``: look for a one-item-per-agent allocation in
    which every agent receives the same bid value.

    For each distinct bid value (richest first) build the bipartite graph of
    (agent, item) pairs bidding exactly that value and run Hopcroft-Karp; a
    perfect matching is an allocation with Gini index 0, the global minimum.
    Returns ``None`` when no value admits a perfect matching.
    """
    if kind not in (IndexKind.GINI, IndexKind.SUBJECTIVE_GINI):
        raise ValueError(f"matching fast path does not apply to {kind}")
    n, m = inst.num_agents, inst.num_items
    if n != m:
        raise NotSquare(f"need a square instance, got {n} agents and {m} items")
    bids = inst.bids
    for level in sorted({bids[i][j] for i in range(n) for j in range(m)}, reverse=True):
        adjacency = [[j for j in range(m) if bids[i][j] == level] for i in range(n)]
        match_left = _hopcroft_karp(adjacency, m)
        if all(v is not None for v in match_left):
            owners: list[Optional[int]] = [None] * m
            for agent, item in enumerate(match_left):
                owners[item] = agent
            return Allocation(tuple(owners))
    return None


def pareto_efficient_allocations(
    inst: Instance, use_true: bool = True, cap: int = DEFAULT_ENUMERATION_CAP
) -> tuple[Allocation, ...]:
    """All Pareto-efficient complete allocations, by profile comparison."""
    _check_cap(inst, cap)
    entries = [(owners, tuple(realized)) for owners, realized in _realized_profiles(inst, use_true)]
    profiles = {}
    for _, prof in entries:
        profiles[prof] = True
    distinct = list(profiles)

    def dominated(p) -> bool:
        return any(
            all(q[i] >= p[i] for i in range(len(p))) and any(q[i] > p[i] for i in range(len(p)))
            for q in distinct
        )

    efficient_profiles = {p for p in distinct if not dominated(p)}
    return tuple(Allocation(o) for o, prof in entries if prof in efficient_profiles)


def price_of_index(
    inst: Instance,
    kind: IndexKind,
    norm: EnvyNormalization = DEFAULT_ENVY_NORM,
    use_true: bool = True,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> PriceReport:
    """Ratio of the best welfare over Pareto-efficient allocations to the
    worst welfare over index-minimizing allocations; ``None`` when the worst
    minimizer welfare is 0 (the price is unbounded)."""
    efficient = pareto_efficient_allocations(inst, use_true, cap)
    minimizers = minimize_index(inst, kind, norm, use_true, cap).minimizers
    values = inst.values(use_true)
    n = inst.num_agents

    def welfare(alloc: Allocation) -> tuple[Fraction, Fraction]:
        realized = [Fraction(0)] * n
        for j, a in enumerate(alloc.owner):
            if a is not None:
                realized[a] += values[a][j]
        return sum(realized, Fraction(0)), min(realized)

    eff = [welfare(a) for a in efficient]
    mins = [welfare(a) for a in minimizers]
    best_util = max(w[0] for w in eff)
    best_egal = max(w[1] for w in eff)
    worst_util = min(w[0] for w in mins)
    worst_egal = min(w[1] for w in mins)
    return PriceReport(
        utilitarian_price=None if worst_util == 0 else best_util / worst_util,
        egalitarian_price=None if worst_egal == 0 else best_egal / worst_egal,
    )


def expected_utility_under_minimizer(
    inst: Instance,
    agent: int,
    kind: IndexKind,
    norm: EnvyNormalization = DEFAULT_ENVY_NORM,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Fraction:
    """Mean true utility of ``agent`` under the uniform distribution on the
    argmin set of the index computed from the *bids*."""
    result = minimize_index(inst, kind, norm, use_true=False, cap=cap)
    true_values = inst.values(use_true=True)
    total = Fraction(0)
    for alloc in result.minimizers:
        total += sum(
            (true_values[agent][j] for j, a in enumerate(alloc.owner) if a == agent),
            Fraction(0),
        )
    return total / len(result.minimizers)
