#!/usr/bin/env python3
"""The greedy online mechanisms: traces, exact distributions, worst cases.

Each mechanism assigns every arriving item to a uniformly random member of
the set of agents whose one-step extension minimizes its index.  The demo
prints a full trace, then the exact outcome distributions on two instances
where greedy choices go badly wrong.
"""

from fractions import Fraction

from fairdiv import (
    IndexKind,
    expected_true_utilities,
    format_trace,
    mechanism_support,
    run_mechanism,
    sample_online_metrics,
    utilitarian_welfare,
)
from fairdiv.instances import (
    car_rental,
    crossed_bids_2x2,
    dominant_bidder_square,
    weak_second_agent_2x2,
)


def main():
    car = car_rental()
    trace = run_mechanism(car, range(3), IndexKind.ENVY, seed=7)
    print("Envy-greedy run on the car instance (item / feasible / chosen / index):")
    print(format_trace(trace, car))

    eps = Fraction(1, 4)
    crossed = crossed_bids_2x2(eps)
    print(f"Crossed bids at eps={eps}: the first item is a fair coin, and the "
          "wrong call locks in the bargain-basement outcome.")
    for alloc, prob in mechanism_support(crossed, range(2), IndexKind.GINI):
        print(f"  p={prob}: owners {alloc.owner}, utilitarian welfare "
              f"{utilitarian_welfare(crossed, alloc)}")
    metrics = sample_online_metrics(crossed, range(2), IndexKind.GINI, samples=50_000, seed=1)
    print(f"  sampled mean utilitarian welfare over 50k runs: {float(metrics.utilitarian):.4f} "
          "(exact expectation 5/4)\n")

    big = dominant_bidder_square(4)
    support = mechanism_support(big, range(4), IndexKind.ENVY)
    print("One dominant bidder, envy-greedy: welfare 7 in every branch, optimum 16.")
    expected = expected_true_utilities(big, support)
    print("  expected utilities:", [str(v) for v in expected], "\n")

    weak = weak_second_agent_2x2(eps)
    support = mechanism_support(weak, range(2), IndexKind.ENVY)
    print("Weak second agent: greedy envy minimization starves them outright.")
    for alloc, prob in support:
        print(f"  p={prob}: owners {alloc.owner}")


if __name__ == "__main__":
    main()
