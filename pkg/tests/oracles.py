"""Independent reference computations used by the tests.

Nothing here calls into the package: nested sums are plain loops over index
tuples, products of nested sums are enumerated chain by chain, and
q-commuting words are normal-ordered by counting inversions.
"""
from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction


def nested_sum_bruteforce(indices, zs, weight, K):
    """``sum_{0<k_1<...<k_m<=K} prod z_j**k_j * weight(k_j)**n_j`` by enumerating tuples."""
    total = 0
    for ks in itertools.combinations(range(1, K + 1), len(indices)):
        term = 1
        for k, n, z in zip(ks, indices, zs):
            term *= z**k * weight(k) ** n
        total += term
    return total


def qmpl_bruteforce(indices, zs, q, K):
    return nested_sum_bruteforce(indices, zs, lambda k: 1 / (1 - q**k), K)


def classical_bruteforce(indices, zs, K):
    return nested_sum_bruteforce(indices, zs, lambda k: Fraction(1, k), K)


def stuffle_bruteforce(a, b):
    """Quasi-shuffle of letter tuples by enumerating joint placements on one chain.

    Letters are ``(n, name)``.  Every pair of strictly increasing position maps
    of ``a`` and ``b`` into ``0..r-1`` that together cover all positions gives
    one term; letters sharing a position merge (indices add, names join).
    """
    out = Counter()
    m, l = len(a), len(b)
    for r in range(max(m, l), m + l + 1):
        for pa in itertools.combinations(range(r), m):
            for pb in itertools.combinations(range(r), l):
                if set(pa) | set(pb) != set(range(r)):
                    continue
                slots = [[0, []] for _ in range(r)]
                for p, (n, name) in zip(pa, a):
                    slots[p][0] += n
                    slots[p][1].append(name)
                for p, (n, name) in zip(pb, b):
                    slots[p][0] += n
                    slots[p][1].append(name)
                out[tuple((n, tuple(sorted(names))) for n, names in slots)] += 1
    return out


def normal_order_by_inversions(word):
    """``(q_exponent, sorted word)`` for a word in q-commuting generators.

    Each pair of positions with the larger id on the left costs ``q**-1``.
    """
    inversions = sum(1 for i in range(len(word)) for j in range(i + 1, len(word)) if word[i] > word[j])
    return -inversions, tuple(sorted(word))


def zeta_word_exponent_bruteforce(letters):
    """Exchange exponent of a word of compositions, via adjacent bubble swaps."""
    key = [(sum(c), tuple(c)) for c in letters]
    w = list(zip(key, letters))
    exp = 0
    swapped = True
    while swapped:
        swapped = False
        for i in range(len(w) - 1):
            if w[i][0] > w[i + 1][0]:
                exp -= sum(w[i][1]) * sum(w[i + 1][1])
                w[i], w[i + 1] = w[i + 1], w[i]
                swapped = True
    return exp, [c for _, c in w]


def jackson_double_sum(q: float, N: int) -> float:
    """Regularized double lattice sum for ``dt1/(1-t1) dt2/t2`` over ``t1 <= t2``.

    Lattice points are ``t = q**i`` for ``0 <= i <= N``; ``t1 <= t2`` means
    ``i1 >= i2``.  The pole ``t1 = 1`` (``i1 = 0``) is dropped.  Two explicit loops.
    """
    total = 0.0
    for i1 in range(1, N + 1):
        t1 = q**i1
        w1 = (1 - q) * t1 / (1 - t1)
        for i2 in range(0, i1 + 1):
            t2 = q**i2
            total += w1 * (1 - q) * t2 / t2
    return total
