"""Independent combinatorial oracles for finite simply-laced types.

Nothing here touches the algebra code: positive roots come from closing the
simple roots under reflections, and counts are done by brute force.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


def positive_roots(cartan):
    """Positive roots as coefficient tuples; raises if the type is infinite."""
    n = len(cartan)
    simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        new = []
        for beta in frontier:
            for i in range(n):
                pair = sum(cartan[i][j] * beta[j] for j in range(n))
                gamma = tuple(beta[j] - (pair if j == i else 0) for j in range(n))
                if all(c >= 0 for c in gamma) and any(gamma) and gamma not in seen:
                    seen.add(gamma)
                    new.append(gamma)
                    if sum(gamma) > 4 * n * n:
                        raise ValueError("not of finite type")
        frontier = new
    return sorted(seen, key=lambda r: (sum(r), r))


def kostant_count(cartan, nu):
    """Number of ways to write nu as an unordered sum of positive roots."""
    roots = tuple(positive_roots(cartan))

    @lru_cache(maxsize=None)
    def count(rest, k):
        if not any(rest):
            return 1
        if k == len(roots):
            return 0
        total = 0
        r = roots[k]
        cur = rest
        while all(c >= 0 for c in cur):
            total += count(cur, k + 1)
            cur = tuple(a - b for a, b in zip(cur, r))
        return total

    return count(tuple(nu), 0)


def weyl_dimension(cartan, lam):
    """Weyl dimension formula for a dominant weight given by its values (i, lambda)."""
    num = Fraction(1)
    for root in positive_roots(cartan):
        height = sum(root)
        num *= Fraction(sum(c * (l + 1) for c, l in zip(root, lam)), height)
    assert num.denominator == 1
    return int(num)


def sl2_weight_dims(lam, depth):
    """dim V_lambda at depth n for sl2."""
    return [1 if 0 <= n <= lam else 0 for n in range(depth + 1)]
