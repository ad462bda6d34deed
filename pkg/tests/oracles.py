"""Independent reference implementations used by the tests."""

import math


def level_oracle(m, k, i, count):
    # unique value in [i, i + k) congruent to j*m mod k
    return [i + ((j * m - i) % k) for j in range(count)]


def condition_c_oracle(terms, i, m, k):
    in_range = all(i <= a < i + k for a in terms)
    perm = set(terms[:k]) == set(range(i, i + k)) and len(terms[:k]) == k
    periodic = all(terms[j] == terms[j + k] for j in range(len(terms) - k))
    step = all(terms[j + 1] - terms[j] in (m, m - k) for j in range(len(terms) - 1))
    return in_range and perm and periodic and step


def parameter_grid(max_k=12, ts=(2, 3, 4)):
    """(m, k, t, offset) for every coprime pair with 2 <= k <= max_k, both offset modes."""
    return [
        (m, k, t, offset)
        for k in range(2, max_k + 1)
        for m in range(1, k)
        if math.gcd(m, k) == 1
        for t in ts
        for offset in (False, True)
    ]
