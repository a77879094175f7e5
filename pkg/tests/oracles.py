"""Slow, direct reference implementations used only by the tests.

Each one works on plain vertex tuples and edge sets and shares no code with
the package, so agreement is meaningful.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache


def all_edges(n, edges):
    return {(min(a, b), max(a, b)) for a, b in edges}


def brute_isomorphic(n1, edges1, n2, edges2):
    if n1 != n2 or len(edges1) != len(edges2):
        return False
    target = all_edges(n2, edges2)
    for perm in itertools.permutations(range(n1)):
        if all_edges(n1, [(perm[a], perm[b]) for a, b in edges1]) == target:
            return True
    return False


def brute_automorphisms(n, edges):
    base = all_edges(n, edges)
    return sum(1 for perm in itertools.permutations(range(n)) if all_edges(n, [(perm[a], perm[b]) for a, b in base]) == base)


def _subsets(items):
    items = list(items)
    for size in range(len(items) + 1):
        yield from itertools.combinations(items, size)


@lru_cache(maxsize=None)
def brute_lambda(order, edges, r, theta):
    """The potential of the ordered graph ``order`` (youngest first) with edge set ``edges``.

    Minimizes over every subgraph (vertex subset and edge subset) of the
    older vertices, joined to the youngest by every subset of its edges.
    """
    if not order:
        return Fraction(0)
    u, rest = order[0], order[1:]
    own = [e for e in edges if u in e]
    others = frozenset(e for e in edges if u not in e)
    base = brute_lambda(rest, others, r, theta) - theta * len(own)
    best = None
    for chosen in _subsets(rest):
        keep = set(chosen)
        inside = [e for e in others if e[0] in keep and e[1] in keep]
        reach = [e for e in own if (e[0] if e[1] == u else e[1]) in keep]
        sub_order = tuple(x for x in rest if x in keep)
        for sub_edges in _subsets(inside):
            inner = brute_lambda(sub_order, frozenset(sub_edges), r, theta)
            for joined in _subsets(reach):
                value = inner - theta * len(joined)
                if best is None or value < best:
                    best = value
    return 1 + base + (r - 1) * best


def brute_min_lambda(n, edges, pi, r, theta):
    """Minimum of the potential over nonempty induced subgraphs of (F, pi)."""
    edges = all_edges(n, edges)
    best = None
    for chosen in _subsets(range(n)):
        if not chosen:
            continue
        keep = set(chosen)
        order = tuple(x for x in pi if x in keep)
        inner = frozenset(e for e in edges if e[0] in keep and e[1] in keep)
        value = brute_lambda(order, inner, r, Fraction(theta))
        if best is None or value < best:
            best = value
    return best


def brute_theta_star(n, edges, r, grid_denominator=2520):
    """theta* as the first point of a fine rational grid where the max over
    orderings of the minimum potential is <= 0 (bisection; the potential is
    nonincreasing in theta)."""
    orders = list(itertools.permutations(range(n)))

    def done(i):
        theta = Fraction(i, grid_denominator)
        return max(brute_min_lambda(n, edges, pi, r, theta) for pi in orders) <= 0

    lo, hi = 0, 2 * grid_denominator
    if not done(hi):
        return None
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if done(mid):
            hi = mid
        else:
            lo = mid
    return Fraction(hi, grid_denominator)


def brute_max_density(n, edges):
    """max e(H)/v(H) over nonempty vertex subsets."""
    edges = all_edges(n, edges)
    best = Fraction(0)
    for size in range(1, n + 1):
        for chosen in itertools.combinations(range(n), size):
            keep = set(chosen)
            count = sum(1 for a, b in edges if a in keep and b in keep)
            best = max(best, Fraction(count, size))
    return best


def brute_m2(n, edges):
    """max (e(H)-1)/(v(H)-2) over subgraphs with v >= 3, and 1/2 for a single edge."""
    edges = all_edges(n, edges)
    best = Fraction(1, 2) if edges else Fraction(0)
    for size in range(3, n + 1):
        for chosen in itertools.combinations(range(n), size):
            keep = set(chosen)
            count = sum(1 for a, b in edges if a in keep and b in keep)
            if count:
                best = max(best, Fraction(count - 1, size - 2))
    return best


def brute_matched_density(kappa, block_of, edges):
    """max e/kappa over nonempty unions of r-sets."""
    best = Fraction(0)
    for pick in range(1, 1 << kappa):
        count = sum(1 for a, b in edges if pick >> block_of[a] & 1 and pick >> block_of[b] & 1)
        best = max(best, Fraction(count, bin(pick).count("1")))
    return best
