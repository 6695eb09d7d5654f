"""Brute-force reference implementations used to freeze expected values.

These deliberately share no code with the library: plain dicts, plain
recursion, no Dijkstra, no numpy.
"""
from fractions import Fraction
from itertools import product


def grid_points(lo, hi):
    return list(product(*(range(a, b + 1) for a, b in zip(lo, hi))))


def neighbors(p, lo, hi):
    for i in range(len(p)):
        for s in (-1, 1):
            q = list(p)
            q[i] += s
            if lo[i] <= q[i] <= hi[i]:
                yield tuple(q)


def edge_key(p, q):
    return (p, q) if p <= q else (q, p)


def weights_by_pair(cfg):
    """{(p, q): w} keyed by sorted endpoint pairs, read off the public edge list."""
    out = {}
    for e, w in cfg.weights.items():
        p = tuple(e.base)
        q = list(p)
        q[e.axis] += 1
        out[edge_key(p, tuple(q))] = w
    return out


def simple_path_optimum(cfg, x, y):
    """(min passage time, number of minimizing simple paths) by exhaustive DFS."""
    lo, hi = cfg.window.lo, cfg.window.hi
    w = weights_by_pair(cfg)
    best = [None, 0]
    seen = {x}

    def go(p, t):
        if p == y:
            if best[0] is None or t < best[0]:
                best[0], best[1] = t, 1
            elif t == best[0]:
                best[1] += 1
            return
        for q in neighbors(p, lo, hi):
            if q not in seen:
                seen.add(q)
                go(q, t + w[edge_key(p, q)])
                seen.discard(q)

    go(tuple(x), Fraction(0))
    return best[0], best[1]


def path_sum(cfg, vertices):
    w = weights_by_pair(cfg)
    return sum((w[edge_key(p, q)] for p, q in zip(vertices, vertices[1:])), Fraction(0))


def hausdorff_l1(S1, S2):
    def l1(p, q):
        return sum(abs(Fraction(a) - Fraction(b)) for a, b in zip(p, q))

    def directed(P, Q):
        return max(min(l1(p, q) for q in Q) for p in P)

    return max(directed(S1, S2), directed(S2, S1))


def binomial_paths(dx, dy):
    from math import comb

    return comb(abs(dx) + abs(dy), abs(dx))
