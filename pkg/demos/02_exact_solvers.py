#!/usr/bin/env python3
"""Tour of the exact solvers on the fixture catalog.

Covers: envy-freeness vs. index minimization pulling apart, welfare prices of
an index (how much efficiency minimizing it can cost), the square-instance
matching fast path, and a profitable misreport against the exact Gini
minimizer.
"""

from fractions import Fraction

from fairdiv import (
    IndexKind,
    envy_free_allocations,
    expected_utility_under_minimizer,
    make_instance,
    matching_minimizer_square,
    max_egalitarian,
    max_utilitarian,
    minimize_index,
    price_of_index,
)
from fairdiv.instances import (
    car_rental,
    envy_free_vs_gini_2x2,
    envy_free_vs_subjective_3x3,
    starving_first_agent_3x3,
    unbounded_price_2x2,
)


def main():
    two = envy_free_vs_gini_2x2()
    print("2x2 instance", [list(map(int, r)) for r in two.bids])
    print("  envy-free:", [a.owner for a in envy_free_allocations(two)])
    print("  gini argmin:", [a.owner for a in minimize_index(two, IndexKind.GINI).minimizers])
    print("  -> the envy-free allocation and the equality-optimal one disagree\n")

    cyc = envy_free_vs_subjective_3x3()
    print("3x3 cyclic instance: favourites vs middle picks")
    print("  envy-free:", [a.owner for a in envy_free_allocations(cyc)])
    print("  subjective-gini argmin:",
          [a.owner for a in minimize_index(cyc, IndexKind.SUBJECTIVE_GINI).minimizers])
    print("  matching fast path (square instance):",
          matching_minimizer_square(cyc, IndexKind.GINI).owner, "\n")

    eps = Fraction(1, 4)
    prices = price_of_index(unbounded_price_2x2(eps), IndexKind.GINI)
    print(f"Price of the gini index at eps={eps}:")
    print(f"  utilitarian price {prices.utilitarian_price}, egalitarian price {prices.egalitarian_price}")
    starving = price_of_index(starving_first_agent_3x3(), IndexKind.ENVY)
    print(f"Envy index egalitarian price on the starving-agent instance: "
          f"{'unbounded' if starving.egalitarian_price is None else starving.egalitarian_price}\n")

    car = car_rental()
    util_value, _ = max_utilitarian(car)
    egal = max_egalitarian(car)
    print(f"Car instance offline optima: utilitarian {util_value}, egalitarian {egal.value}\n")

    sincere = envy_free_vs_gini_2x2()
    lying = make_instance([[Fraction(1, 2), 3], [3, 1]], utilities=[[1, 2], [3, 1]])
    print("Misreporting against the exact gini minimizer:")
    print("  sincere expected utility of agent 1:",
          expected_utility_under_minimizer(sincere, 0, IndexKind.GINI))
    print("  after reporting (1/2, 3):",
          expected_utility_under_minimizer(lying, 0, IndexKind.GINI))


if __name__ == "__main__":
    main()
