"""A small catalog of hand-picked instances.

These tiny matrices each isolate one phenomenon: impossibility of envy-free
allocations, tension between envy-freeness and low inequality, unbounded
welfare prices, profitable misreporting, and worst cases for the online
mechanisms.  They double as regression fixtures and as demo inputs.
"""

from __future__ import annotations

from fractions import Fraction

from .model import Instance, make_instance


def car_rental() -> Instance:
    """Three renters, three cars, no envy-free allocation.

    Two equal-utility allocations exist (everyone at 8, everyone at 1); only
    the first is Pareto efficient.  The least-envy allocation gives everyone
    their favourite available car but is very unequal.
    """
    return make_instance(
        [[1, 8, 3], [8, 7, 1], [18, 1, 8]],
        agent_names=("Alice", "Bob", "Carol"),
        item_names=("Renault", "Skoda", "Toyota"),
    )


def envy_free_vs_gini_2x2() -> Instance:
    """The unique envy-free allocation is not the Gini minimizer."""
    return make_instance([[1, 2], [3, 1]])


def envy_free_vs_subjective_3x3() -> Instance:
    """Cyclic preferences: envy-freeness and the subjective Gini minimizer
    pick different matchings (favourites vs. middle choices)."""
    return make_instance([[9, 1, 5], [5, 9, 1], [1, 5, 9]])


def dominated_equal_split_2x4(eps: Fraction = Fraction(1, 10)) -> Instance:
    """Every subjective-Gini minimizer is Pareto dominated."""
    return make_instance(
        [[1, 2 - eps, 1, eps], [2 - eps, 1, eps, 1]]
    )


def unbounded_price_2x2(eps: Fraction = Fraction(1, 4)) -> Instance:
    """Welfare prices of the Gini index blow up as ``eps`` goes to zero."""
    return make_instance([[eps, 1 - eps], [2 - eps, eps]])


def starving_first_agent_3x3() -> Instance:
    """Minimizing envy can leave one agent with nothing: unbounded
    egalitarian price of the envy index."""
    return make_instance([[1, 1, 1], [8, 4, 4], [8, 4, 4]])


def balanced_pairs_2x4() -> Instance:
    """Two agents, four items, two perfectly balanced 2+2 splits."""
    half = Fraction(1, 2)
    return make_instance(
        [[1, 1 + half, 1, half], [1 + half, 1, half, 1]]
    )


def crossed_bids_2x2(eps: Fraction = Fraction(1, 4)) -> Instance:
    """Each agent loves the item the other shrugs at; online mechanisms can
    end up with welfare ``2*eps`` instead of 2."""
    return make_instance([[1, eps], [eps, 1]])


def dominant_bidder_square(n: int = 4) -> Instance:
    """One agent bids ``n`` on everything, the rest bid 1: the envy-greedy
    mechanism reaches utilitarian welfare ``2n - 1`` against an optimum of
    ``n**2``."""
    rows = [[n] * n] + [[1] * n for _ in range(n - 1)]
    return make_instance(rows)


def weak_second_agent_2x2(eps: Fraction = Fraction(1, 4)) -> Instance:
    """The second agent only values the first item, a little; greedy envy
    minimization starves them entirely."""
    return make_instance([[1, 1], [eps, 0]])


def diagonal_premium_square(n: int, eps: Fraction = Fraction(1, 10)) -> Instance:
    """Agent ``i`` values item ``i`` at 1 and everything else at ``eps``.

    The family behind strategic-play analyses of the online mechanisms; this
    package ships no equilibrium solver, the generator exists for manual
    study.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return make_instance(
        [[Fraction(1) if i == j else eps for j in range(n)] for i in range(n)]
    )
