"""Exact evaluation of the three inequality indices and related predicates.

Given an allocation ``A`` with bundles ``A_1 .. A_n`` and additive utilities
``u_i``, the indices are

* Gini:             sum_ij |u_i(A_i) - u_j(A_j)|  /  (2 n sum_i u_i(A_i))
* subjective Gini:  sum_ij |u_i(A_i) - u_i(A_j)|  /  (2 sum_ij u_i(A_j))
* envy:             sum_ij max(0, u_i(A_j) - u_i(A_i))  /  D

where the envy denominator ``D`` is selectable: twice the total cross value
(the default, which keeps the envy index dominated by the subjective Gini
index) or the total cross value itself.

Every index returns 0 when its denominator is 0: an all-zero outcome is
perfectly equal and envy-free, and this keeps partial allocations well
defined mid-run for the online mechanisms.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .model import Allocation, Instance

DEFAULT_PARETO_CAP = 10_000_000


class SearchSpaceTooLarge(Exception):
    """Raised when an exhaustive search would exceed the configured cap."""


class IndexKind(enum.Enum):
    """Selector over the three inequality indices (and their mechanisms)."""

    GINI = "gini"
    SUBJECTIVE_GINI = "subjgini"
    ENVY = "envy"


#: The online mechanisms are the greedy per-item minimizers of each index,
#: so they share the same selector.
MechanismKind = IndexKind


class EnvyNormalization(enum.Enum):
    HALF_DENOMINATOR = "half"
    FULL_DENOMINATOR = "full"


DEFAULT_ENVY_NORM = EnvyNormalization.HALF_DENOMINATOR


def value_matrix(inst: Instance, alloc: Allocation, use_true: bool = True) -> list[list]:
    """n x n matrix ``M[i][k] = u_i(A_k)`` of every agent's value for every bundle."""
    alloc.validate_for(inst)
    values = inst.values(use_true)
    n = inst.num_agents
    mat = [[Fraction(0)] * n for _ in range(n)]
    for j, owner in enumerate(alloc.owner):
        if owner is None:
            continue
        for i in range(n):
            mat[i][owner] += values[i][j]
    return mat


def gini_of_values(realized: Sequence) -> Fraction:
    """Gini index of a vector of realized utilities (half the relative MAD)."""
    n = len(realized)
    total = sum(realized)
    if total == 0:
        return Fraction(0)
    num = sum(abs(realized[i] - realized[k]) for i in range(n) for k in range(n))
    return Fraction(num, 2 * n) / total


def subjective_gini_of_matrix(mat: Sequence[Sequence]) -> Fraction:
    n = len(mat)
    den = 2 * sum(sum(row) for row in mat)
    if den == 0:
        return Fraction(0)
    num = sum(abs(mat[i][i] - mat[i][k]) for i in range(n) for k in range(n))
    return Fraction(num) / den


def envy_of_matrix(
    mat: Sequence[Sequence], norm: EnvyNormalization = DEFAULT_ENVY_NORM
) -> Fraction:
    n = len(mat)
    total = sum(sum(row) for row in mat)
    den = 2 * total if norm is EnvyNormalization.HALF_DENOMINATOR else total
    if den == 0:
        return Fraction(0)
    num = sum(
        mat[i][k] - mat[i][i]
        for i in range(n)
        for k in range(n)
        if mat[i][k] > mat[i][i]
    )
    return Fraction(num) / den


def utilitarian_welfare(inst: Instance, alloc: Allocation, use_true: bool = True) -> Fraction:
    """Sum of realized utilities."""
    mat = value_matrix(inst, alloc, use_true)
    return sum((mat[i][i] for i in range(inst.num_agents)), Fraction(0))


def egalitarian_welfare(inst: Instance, alloc: Allocation, use_true: bool = True) -> Fraction:
    """Minimum realized utility."""
    mat = value_matrix(inst, alloc, use_true)
    return min(mat[i][i] for i in range(inst.num_agents))


def gini_index(inst: Instance, alloc: Allocation, use_true: bool = True) -> Fraction:
    mat = value_matrix(inst, alloc, use_true)
    return gini_of_values([mat[i][i] for i in range(inst.num_agents)])


def subjective_gini_index(inst: Instance, alloc: Allocation, use_true: bool = True) -> Fraction:
    return subjective_gini_of_matrix(value_matrix(inst, alloc, use_true))


def envy_index(
    inst: Instance,
    alloc: Allocation,
    norm: EnvyNormalization = DEFAULT_ENVY_NORM,
    use_true: bool = True,
) -> Fraction:
    return envy_of_matrix(value_matrix(inst, alloc, use_true), norm)


def index_value(
    inst: Instance,
    alloc: Allocation,
    kind: IndexKind,
    norm: EnvyNormalization = DEFAULT_ENVY_NORM,
    use_true: bool = True,
) -> Fraction:
    """Dispatch on :class:`IndexKind`."""
    mat = value_matrix(inst, alloc, use_true)
    return index_of_matrix(mat, kind, norm)


def index_of_matrix(
    mat: Sequence[Sequence],
    kind: IndexKind,
    norm: EnvyNormalization = DEFAULT_ENVY_NORM,
) -> Fraction:
    if kind is IndexKind.GINI:
        return gini_of_values([mat[i][i] for i in range(len(mat))])
    if kind is IndexKind.SUBJECTIVE_GINI:
        return subjective_gini_of_matrix(mat)
    return envy_of_matrix(mat, norm)


def is_envy_free(inst: Instance, alloc: Allocation, use_true: bool = True) -> bool:
    """True iff no agent values another bundle strictly above its own."""
    mat = value_matrix(inst, alloc, use_true)
    n = inst.num_agents
    return all(mat[i][i] >= mat[i][k] for i in range(n) for k in range(n))


def pareto_dominates(
    inst: Instance, alloc_a: Allocation, alloc_b: Allocation, use_true: bool = True
) -> bool:
    """True iff ``alloc_a`` makes every agent at least as well off and one strictly."""
    mat_a = value_matrix(inst, alloc_a, use_true)
    mat_b = value_matrix(inst, alloc_b, use_true)
    n = inst.num_agents
    ge = all(mat_a[i][i] >= mat_b[i][i] for i in range(n))
    gt = any(mat_a[i][i] > mat_b[i][i] for i in range(n))
    return ge and gt


def is_pareto_efficient(
    inst: Instance,
    alloc: Allocation,
    use_true: bool = True,
    cap: int = DEFAULT_PARETO_CAP,
) -> bool:
    """Decide Pareto efficiency by exhaustive search over complete allocations.

    Raises :class:`SearchSpaceTooLarge` when ``n ** m`` exceeds ``cap``.
    """
    from itertools import product

    n, m = inst.num_agents, inst.num_items
    if n ** m > cap:
        raise SearchSpaceTooLarge(f"{n}^{m} allocations exceed cap {cap}")
    values = inst.values(use_true)
    base = value_matrix(inst, alloc, use_true)
    own = [base[i][i] for i in range(n)]
    for owners in product(range(n), repeat=m):
        realized = [Fraction(0)] * n
        for j, a in enumerate(owners):
            realized[a] += values[a][j]
        if all(realized[i] >= own[i] for i in range(n)) and any(
            realized[i] > own[i] for i in range(n)
        ):
            return False
    return True


@dataclass(frozen=True)
class IndexReport:
    """All scalar results for one allocation, with the default envy normalization."""

    gini: Fraction
    subjective_gini: Fraction
    envy: Fraction
    utilitarian: Fraction
    egalitarian: Fraction
    envy_free: bool


def index_report(
    inst: Instance,
    alloc: Allocation,
    norm: EnvyNormalization = DEFAULT_ENVY_NORM,
    use_true: bool = True,
) -> IndexReport:
    mat = value_matrix(inst, alloc, use_true)
    n = inst.num_agents
    realized = [mat[i][i] for i in range(n)]
    return IndexReport(
        gini=gini_of_values(realized),
        subjective_gini=subjective_gini_of_matrix(mat),
        envy=envy_of_matrix(mat, norm),
        utilitarian=sum(realized, Fraction(0)),
        egalitarian=min(realized),
        envy_free=all(mat[i][i] >= mat[i][k] for i in range(n) for k in range(n)),
    )
