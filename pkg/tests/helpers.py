"""Shared test utilities: a brute-force pairing enumerator and error helpers.

The enumerator is deliberately independent of the library's moment recursion:
it walks every perfect matching explicitly so the two can certify each other.
"""

import math


def pairings(indices):
    """Yield every perfect matching of the index list as a list of pairs."""
    if not indices:
        yield []
        return
    first, rest = indices[0], indices[1:]
    for j in range(len(rest)):
        for tail in pairings(rest[:j] + rest[j + 1:]):
            yield [(first, rest[j])] + tail


def wick_moment(pair_value, n):
    """Sum over all pairings of range(n) of the product of pair values."""
    return sum(
        math.prod(pair_value(i, j) for i, j in pp)
        for pp in pairings(list(range(n)))
    )


def rel_err(value, reference):
    """|value - reference| relative to max(1, |reference|)."""
    return abs(value - reference) / max(1.0, abs(reference))
