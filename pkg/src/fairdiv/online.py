"""The three greedy online randomized mechanisms.

Items arrive in a given order.  For each item, an agent is *feasible* when it
bids a positive amount and assigning it the item minimizes the mechanism's
index over all one-step extensions of the current partial allocation; the
item then goes to a feasible agent chosen uniformly at random.  Items nobody
bids on stay unallocated.

Mechanisms score extensions on the public bids; reported metrics use the true
utilities when the instance carries them.  Randomness is counter-based: the
choice at step ``t`` of a run is derived from ``(seed, t)``, so traces are
reproducible and sampling can be partitioned freely without changing results.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .indices import DEFAULT_ENVY_NORM, EnvyNormalization, IndexKind
from .model import Allocation, Instance

DEFAULT_SUPPORT_CAP = 1_000_000


class SupportTooLarge(Exception):
    """The exact outcome distribution has more leaves than the cap allows."""


@dataclass(frozen=True)
class RunStep:
    item: int
    feasible: tuple[int, ...]
    chosen: Optional[int]
    index_after: Fraction


@dataclass(frozen=True)
class RunTrace:
    order: tuple[int, ...]
    steps: tuple[RunStep, ...]
    final_allocation: Allocation


@dataclass(frozen=True)
class OnlineMetrics:
    """Exact arithmetic means over sampled runs."""

    gini: Fraction
    subjective_gini: Fraction
    envy: Fraction
    utilitarian: Fraction
    egalitarian: Fraction


def _derive(*parts) -> int:
    """Stable 64-bit integer from a tuple of seed parts."""
    text = ":".join(str(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def _pick(seed: int, step: int, size: int) -> int:
    return _derive(seed, "step", step) % size


def _plain_values(inst: Instance, use_true: bool) -> list[list]:
    """Bid/utility matrix with integral Fractions lowered to ints (hot path)."""
    rows = []
    for row in inst.values(use_true):
        if all(v.denominator == 1 for v in row):
            rows.append([v.numerator for v in row])
        else:
            rows.append(list(row))
    return rows


def _score(mat, n, total, kind, half_envy) -> tuple:
    """Index of the bundle-value matrix as an exact (numerator, denominator) pair."""
    if kind is IndexKind.GINI:
        own = [mat[i][i] for i in range(n)]
        s = sum(own)
        if s == 0:
            return 0, 1
        num = 0
        for i in range(n):
            xi = own[i]
            for k in range(i + 1, n):
                num += xi - own[k] if xi >= own[k] else own[k] - xi
        return 2 * num, 2 * n * s
    if total == 0:
        return 0, 1
    num = 0
    if kind is IndexKind.SUBJECTIVE_GINI:
        for i in range(n):
            row = mat[i]
            own = row[i]
            for k in range(n):
                num += own - row[k] if own >= row[k] else row[k] - own
        return num, 2 * total
    for i in range(n):
        row = mat[i]
        own = row[i]
        for k in range(n):
            if row[k] > own:
                num += row[k] - own
    return num, (2 * total if half_envy else total)


class _RunState:
    """Mutable bundle-value matrix for one mechanism run over the bids."""

    __slots__ = ("values", "n", "mat", "total", "col_sums")

    def __init__(self, values, n: int, m: int):
        self.values = values
        self.n = n
        self.mat = [[0] * n for _ in range(n)]
        self.total = 0
        self.col_sums = [sum(values[i][j] for i in range(n)) for j in range(m)]

    def apply(self, item: int, agent: int) -> None:
        values = self.values
        for i in range(self.n):
            self.mat[i][agent] += values[i][item]
        self.total += self.col_sums[item]

    def undo(self, item: int, agent: int) -> None:
        values = self.values
        for i in range(self.n):
            self.mat[i][agent] -= values[i][item]
        self.total -= self.col_sums[item]

    def feasible(self, item: int, kind: IndexKind, half_envy: bool) -> list[int]:
        n = self.n
        candidates = [k for k in range(n) if self.values[k][item] > 0]
        if len(candidates) <= 1:
            return candidates
        best_num = best_den = None
        winners: list[int] = []
        for k in candidates:
            self.apply(item, k)
            num, den = _score(self.mat, n, self.total, kind, half_envy)
            self.undo(item, k)
            if best_num is None or num * best_den < best_num * den:
                best_num, best_den = num, den
                winners = [k]
            elif num * best_den == best_num * den:
                winners.append(k)
        return winners

    def score_fraction(self, kind: IndexKind, half_envy: bool) -> Fraction:
        num, den = _score(self.mat, self.n, self.total, kind, half_envy)
        return Fraction(num, den)


def feasible_set(
    inst: Instance,
    partial: Allocation,
    item: int,
    kind: IndexKind,
    norm: EnvyNormalization = DEFAULT_ENVY_NORM,
) -> tuple[int, ...]:
    """Agents with a positive bid whose one-step extension attains the minimum
    index value; empty exactly when nobody bids on the item."""
    partial.validate_for(inst)
    if partial.owner[item] is not None:
        raise ValueError(f"item {item} is already allocated")
    state = _RunState(_plain_values(inst, use_true=False), inst.num_agents, inst.num_items)
    for j, a in enumerate(partial.owner):
        if a is not None:
            state.apply(j, a)
    half = norm is EnvyNormalization.HALF_DENOMINATOR
    return tuple(state.feasible(item, kind, half))


def _run_owners(
    state: _RunState,
    order: Sequence[int],
    kind: IndexKind,
    half_envy: bool,
    run_seed: int,
    m: int,
) -> list[Optional[int]]:
    """Fast untraced run; mutates ``state`` and returns the owner vector."""
    owners: list[Optional[int]] = [None] * m
    for t, item in enumerate(order):
        winners = state.feasible(item, kind, half_envy)
        if not winners:
            continue
        chosen = winners[0] if len(winners) == 1 else winners[_pick(run_seed, t, len(winners))]
        owners[item] = chosen
        state.apply(item, chosen)
    return owners


def run_mechanism(
    inst: Instance,
    order: Sequence[int],
    kind: IndexKind,
    norm: EnvyNormalization = DEFAULT_ENVY_NORM,
    seed: int = 0,
) -> RunTrace:
    """One seeded run over ``order`` (a permutation of the items)."""
    _check_order(inst, order)
    half = norm is EnvyNormalization.HALF_DENOMINATOR
    state = _RunState(_plain_values(inst, use_true=False), inst.num_agents, inst.num_items)
    owners: list[Optional[int]] = [None] * inst.num_items
    steps = []
    for t, item in enumerate(order):
        winners = state.feasible(item, kind, half)
        chosen: Optional[int] = None
        if winners:
            chosen = winners[0] if len(winners) == 1 else winners[_pick(seed, t, len(winners))]
            owners[item] = chosen
            state.apply(item, chosen)
        steps.append(
            RunStep(
                item=item,
                feasible=tuple(winners),
                chosen=chosen,
                index_after=state.score_fraction(kind, half),
            )
        )
    return RunTrace(
        order=tuple(order), steps=tuple(steps), final_allocation=Allocation(tuple(owners))
    )


def _check_order(inst: Instance, order: Sequence[int]) -> None:
    if sorted(order) != list(range(inst.num_items)):
        raise ValueError("order must be a permutation of the item indices")


def mechanism_support(
    inst: Instance,
    order: Sequence[int],
    kind: IndexKind,
    norm: EnvyNormalization = DEFAULT_ENVY_NORM,
    cap: int = DEFAULT_SUPPORT_CAP,
) -> list[tuple[Allocation, Fraction]]:
    """Exact outcome distribution of a mechanism run, by recursive expansion
    of every feasible choice.  Probabilities are products of ``1/|feasible|``
    and sum to 1."""
    _check_order(inst, order)
    half = norm is EnvyNormalization.HALF_DENOMINATOR
    state = _RunState(_plain_values(inst, use_true=False), inst.num_agents, inst.num_items)
    owners: list[Optional[int]] = [None] * inst.num_items
    out: list[tuple[Allocation, Fraction]] = []

    def expand(t: int, prob: Fraction) -> None:
        if t == len(order):
            if len(out) >= cap:
                raise SupportTooLarge(f"support exceeds {cap} outcomes")
            out.append((Allocation(tuple(owners)), prob))
            return
        item = order[t]
        winners = state.feasible(item, kind, half)
        if not winners:
            expand(t + 1, prob)
            return
        share = prob / len(winners)
        for agent in winners:
            owners[item] = agent
            state.apply(item, agent)
            expand(t + 1, share)
            state.undo(item, agent)
            owners[item] = None

    expand(0, Fraction(1))
    out.sort(key=lambda pair: tuple(-1 if a is None else a for a in pair[0].owner))
    return out


class _ExactMean:
    """Order-independent exact accumulator: integer numerators bucketed by
    denominator, divided once at the end."""

    __slots__ = ("buckets",)

    def __init__(self):
        self.buckets: dict[int, int] = {}

    def add(self, value) -> None:
        frac = value if isinstance(value, Fraction) else Fraction(value)
        den = frac.denominator
        self.buckets[den] = self.buckets.get(den, 0) + frac.numerator

    def mean(self, count: int) -> Fraction:
        total = sum((Fraction(num, den) for den, num in self.buckets.items()), Fraction(0))
        return total / count


def _metrics_of_owners(values, n: int, owners, half_envy: bool):
    mat = [[0] * n for _ in range(n)]
    for j, a in enumerate(owners):
        if a is not None:
            for i in range(n):
                mat[i][a] += values[i][j]
    total = sum(sum(row) for row in mat)
    g_num, g_den = _score(mat, n, total, IndexKind.GINI, half_envy)
    s_num, s_den = _score(mat, n, total, IndexKind.SUBJECTIVE_GINI, half_envy)
    e_num, e_den = _score(mat, n, total, IndexKind.ENVY, half_envy)
    own = [mat[i][i] for i in range(n)]
    return (
        Fraction(g_num, g_den),
        Fraction(s_num, s_den),
        Fraction(e_num, e_den),
        Fraction(sum(own)),
        Fraction(min(own)),
    )


def sample_online_metrics(
    inst: Instance,
    order: Optional[Sequence[int]],
    kind: IndexKind,
    norm: EnvyNormalization = DEFAULT_ENVY_NORM,
    samples: int = 1,
    seed: int = 0,
) -> OnlineMetrics:
    """Arithmetic means of the indices and welfares over independent seeded
    runs.  ``order=None`` draws a fresh uniform item order per sample;
    otherwise the given order is used for every sample."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if order is not None:
        _check_order(inst, order)
    n, m = inst.num_agents, inst.num_items
    bid_values = _plain_values(inst, use_true=False)
    true_values = _plain_values(inst, use_true=True)
    half = norm is EnvyNormalization.HALF_DENOMINATOR
    accumulators = [_ExactMean() for _ in range(5)]
    for s in range(samples):
        if order is None:
            run_order = list(range(m))
            random.Random(_derive(seed, "order", s)).shuffle(run_order)
        else:
            run_order = list(order)
        state = _RunState(bid_values, n, m)
        owners = _run_owners(state, run_order, kind, half, _derive(seed, "sample", s), m)
        for acc, value in zip(accumulators, _metrics_of_owners(true_values, n, owners, half)):
            acc.add(value)
    g, sg, e, uw, ew = (acc.mean(samples) for acc in accumulators)
    return OnlineMetrics(gini=g, subjective_gini=sg, envy=e, utilitarian=uw, egalitarian=ew)


def format_trace(trace: RunTrace, inst: Optional[Instance] = None) -> str:
    """Line-oriented record per step: item, feasible set, chosen agent, index."""

    def item_label(j):
        return inst.item_label(j) if inst else f"o{j + 1}"

    def agent_label(a):
        return inst.agent_label(a) if inst else f"a{a + 1}"

    lines = []
    for step in trace.steps:
        feasible = ",".join(agent_label(a) for a in step.feasible) or "-"
        chosen = agent_label(step.chosen) if step.chosen is not None else "-"
        value = f"{step.index_after.numerator}/{step.index_after.denominator}"
        lines.append(f"{item_label(step.item)}\t{feasible}\t{chosen}\t{value}")
    return "\n".join(lines) + ("\n" if lines else "")


def write_trace(trace: RunTrace, path, inst: Optional[Instance] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_trace(trace, inst))


def expected_true_utilities(
    inst: Instance, support: Iterable[tuple[Allocation, Fraction]]
) -> list[Fraction]:
    """Per-agent expected true utility under an exact outcome distribution."""
    values = inst.values(use_true=True)
    n = inst.num_agents
    expected = [Fraction(0)] * n
    for alloc, prob in support:
        for j, a in enumerate(alloc.owner):
            if a is not None:
                expected[a] += prob * values[a][j]
    return expected
