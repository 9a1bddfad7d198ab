"""Naive reference implementations used as independent oracles.

Everything here recomputes results from first principles (literal double
sums, recursive enumeration) without touching the package's optimized code
paths, so agreement is meaningful.
"""

from fractions import Fraction


def bundles_of(owner, n):
    out = [[] for _ in range(n)]
    for j, a in enumerate(owner):
        if a is not None:
            out[a].append(j)
    return out


def cross_values(values, owner):
    """M[i][k] = agent i's total value for agent k's bundle."""
    n = len(values)
    buckets = bundles_of(owner, n)
    return [
        [sum((values[i][j] for j in buckets[k]), Fraction(0)) for k in range(n)]
        for i in range(n)
    ]


def gini(values, owner):
    n = len(values)
    mat = cross_values(values, owner)
    own = [mat[i][i] for i in range(n)]
    den = 2 * n * sum(own)
    if den == 0:
        return Fraction(0)
    num = sum(abs(own[i] - own[k]) for i in range(n) for k in range(n))
    return Fraction(num) / den


def subjective_gini(values, owner):
    n = len(values)
    mat = cross_values(values, owner)
    den = 2 * sum(mat[i][k] for i in range(n) for k in range(n))
    if den == 0:
        return Fraction(0)
    num = sum(abs(mat[i][i] - mat[i][k]) for i in range(n) for k in range(n))
    return Fraction(num) / den


def envy(values, owner, half=True):
    n = len(values)
    mat = cross_values(values, owner)
    total = sum(mat[i][k] for i in range(n) for k in range(n))
    den = 2 * total if half else total
    if den == 0:
        return Fraction(0)
    num = sum(
        max(Fraction(0), mat[i][k] - mat[i][i]) for i in range(n) for k in range(n)
    )
    return Fraction(num) / den


def envy_free(values, owner):
    n = len(values)
    mat = cross_values(values, owner)
    return all(mat[i][i] >= mat[i][k] for i in range(n) for k in range(n))


def realized(values, owner):
    n = len(values)
    mat = cross_values(values, owner)
    return [mat[i][i] for i in range(n)]


def dominates(values, owner_a, owner_b):
    ra, rb = realized(values, owner_a), realized(values, owner_b)
    return all(x >= y for x, y in zip(ra, rb)) and any(x > y for x, y in zip(ra, rb))


def all_owner_tuples(n, m):
    """Recursive enumeration of complete allocations (no itertools)."""
    if m == 0:
        yield ()
        return
    for rest in all_owner_tuples(n, m - 1):
        for a in range(n):
            yield rest + (a,)


def argmin_index(values, score):
    """(min value, list of owner tuples) by literal enumeration."""
    n, m = len(values), len(values[0]) if values else 0
    best = None
    arg = []
    for owner in all_owner_tuples(n, m):
        v = score(values, owner)
        if best is None or v < best:
            best, arg = v, [owner]
        elif v == best:
            arg.append(owner)
    return best, arg


def max_min_value(values):
    n, m = len(values), len(values[0]) if values else 0
    best = None
    for owner in all_owner_tuples(n, m):
        v = min(realized(values, owner))
        if best is None or v > best:
            best = v
    return best


def max_sum_value(values):
    n, m = len(values), len(values[0]) if values else 0
    best = None
    for owner in all_owner_tuples(n, m):
        v = sum(realized(values, owner), Fraction(0))
        if best is None or v > best:
            best = v
    return best


def pareto_efficient_owners(values):
    n, m = len(values), len(values[0]) if values else 0
    everyone = list(all_owner_tuples(n, m))
    return [
        a for a in everyone if not any(dominates(values, b, a) for b in everyone)
    ]
