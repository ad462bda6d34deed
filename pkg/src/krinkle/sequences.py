"""Integer direction sequences behind the Modulo Krinkle construction.

Everything here is exact integer arithmetic.  Infinite boundary and front
sequences are eventually periodic, so they are carried as a finite prefix
followed by a repeating block (:class:`DirectionSequence`), which makes
equality of infinite sequences decidable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import count as _count
from typing import Iterable, Iterator, Sequence


class ParameterError(ValueError):
    """Raised for an (m, k, t, n) combination outside the valid family."""


def _check_mk(m: int, k: int) -> None:
    if not (isinstance(m, int) and isinstance(k, int)):
        raise ParameterError(f"m and k must be integers, got m={m!r}, k={k!r}")
    if m < 1:
        raise ParameterError(f"constraint m >= 1 violated: m={m}")
    if not m < k:
        raise ParameterError(f"constraint m < k violated: m={m}, k={k}")
    if math.gcd(m, k) != 1:
        raise ParameterError(f"constraint gcd(m, k) = 1 violated: gcd({m}, {k}) = {math.gcd(m, k)}")


@dataclass(frozen=True)
class Params:
    """A validated (m, k, t, offset) parameter bundle.

    ``n`` is the number of directions and ``w`` the number of wedges placed
    before the closure motions take over.  Use :meth:`from_mkt` or
    :meth:`from_triple` rather than filling ``n`` and ``w`` by hand; the
    constructor re-checks every relation either way.
    """

    m: int
    k: int
    t: int
    n: int
    offset: bool
    w: int

    def __post_init__(self):
        _check_mk(self.m, self.k)
        if self.t < 2:
            raise ParameterError(f"constraint t >= 2 violated: t={self.t}")
        expected_n = 2 * (self.t * self.k - self.m) if self.offset else self.t * self.k
        if self.n != expected_n:
            mode = "2(tk - m)" if self.offset else "tk"
            raise ParameterError(f"n-resolution violated: n={self.n} but {mode} = {expected_n}")
        expected_w = self.n // 2 if self.offset else self.k
        if self.w != expected_w:
            raise ParameterError(f"wedge count w={self.w} inconsistent, expected {expected_w}")
        if 2 * self.k > self.n:
            raise ParameterError(f"constraint 2k <= n violated: k={self.k}, n={self.n}")

    @classmethod
    def from_mkt(cls, m: int, k: int, t: int, offset: bool = False) -> "Params":
        _check_mk(m, k)
        if t < 2:
            raise ParameterError(f"constraint t >= 2 violated: t={t}")
        n = 2 * (t * k - m) if offset else t * k
        w = n // 2 if offset else k
        return cls(m=m, k=k, t=t, n=n, offset=offset, w=w)

    @classmethod
    def from_triple(cls, m: int, k: int, n: int, offset: bool | None = None) -> "Params":
        """Resolve ``t`` and the offset mode from an (m, k, n) triple.

        When ``offset`` is None a multiple of ``k`` means the no-offset
        family; this also settles the k = 2 case where both readings exist.
        Passing ``offset`` explicitly forces one reading.
        """
        _check_mk(m, k)
        if offset is None:
            offset = n % k != 0
        if not offset:
            if n % k:
                raise ParameterError(f"n-resolution failed: n={n} is not a multiple of k={k}")
            return cls.from_mkt(m, k, n // k, False)
        if n % 2:
            raise ParameterError(f"n-resolution failed: offset n={n} must be even")
        if (n // 2 + m) % k:
            raise ParameterError(
                f"n-resolution failed: no integer t with n = 2(tk - m) for n={n}, m={m}, k={k}"
            )
        return cls.from_mkt(m, k, (n // 2 + m) // k, True)

    def as_dict(self) -> dict:
        return {"m": self.m, "k": self.k, "t": self.t, "n": self.n, "offset": self.offset, "w": self.w}

    def __str__(self):
        return f"({self.m}, {self.k}, {self.n})"


@dataclass(frozen=True, eq=False)
class DirectionSequence:
    """Eventually periodic integer sequence: ``prefix`` then ``period`` forever.

    An empty ``period`` makes the sequence finite.  Equality and hashing go
    through :meth:`canonical`, so two representations of the same infinite
    sequence compare equal.
    """

    prefix: tuple[int, ...] = ()
    period: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(x) for x in self.prefix))
        object.__setattr__(self, "period", tuple(int(x) for x in self.period))

    @classmethod
    def finite(cls, terms: Iterable[int]) -> "DirectionSequence":
        return cls(tuple(terms), ())

    @classmethod
    def periodic(cls, block: Iterable[int], prefix: Iterable[int] = ()) -> "DirectionSequence":
        block = tuple(block)
        if not block:
            raise ValueError("periodic block must be non-empty")
        return cls(tuple(prefix), block)

    @property
    def is_finite(self) -> bool:
        return not self.period

    def __len__(self):
        if not self.is_finite:
            raise TypeError("infinite DirectionSequence has no len()")
        return len(self.prefix)

    def __getitem__(self, j: int) -> int:
        if j < 0:
            raise IndexError("negative indices are not supported")
        if j < len(self.prefix):
            return self.prefix[j]
        if self.is_finite:
            raise IndexError(j)
        return self.period[(j - len(self.prefix)) % len(self.period)]

    def __iter__(self) -> Iterator[int]:
        yield from self.prefix
        if self.period:
            for _ in _count():
                yield from self.period

    def take(self, count: int) -> list[int]:
        if self.is_finite and count > len(self.prefix):
            raise IndexError(f"finite sequence has only {len(self.prefix)} terms")
        return [self[j] for j in range(count)]

    def shift(self, c: int) -> "DirectionSequence":
        return DirectionSequence(tuple(x + c for x in self.prefix), tuple(x + c for x in self.period))

    def drop(self, count: int) -> "DirectionSequence":
        """Remove the first ``count`` terms."""
        if count <= len(self.prefix):
            return DirectionSequence(self.prefix[count:], self.period)
        if self.is_finite:
            raise IndexError(f"cannot drop {count} terms from {len(self.prefix)}")
        r = (count - len(self.prefix)) % len(self.period)
        return DirectionSequence((), self.period[r:] + self.period[:r])

    def replace(self, old: int, new: int) -> "DirectionSequence":
        def sub(xs):
            return tuple(new if x == old else x for x in xs)

        return DirectionSequence(sub(self.prefix), sub(self.period))

    def canonical(self) -> "DirectionSequence":
        """Shortest prefix and shortest period describing the same sequence."""
        prefix, period = list(self.prefix), self.period
        if not period:
            return DirectionSequence(tuple(prefix), ())
        p = len(period)
        for d in range(1, p + 1):
            if p % d == 0 and period == period[:d] * (p // d):
                period = period[:d]
                break
        while prefix and prefix[-1] == period[-1]:
            prefix.pop()
            period = period[-1:] + period[:-1]
        return DirectionSequence(tuple(prefix), period)

    def __eq__(self, other):
        if not isinstance(other, DirectionSequence):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return a.prefix == b.prefix and a.period == b.period

    def __hash__(self):
        c = self.canonical()
        return hash((c.prefix, c.period))

    def __repr__(self):
        if self.is_finite:
            return f"DirectionSequence.finite({list(self.prefix)})"
        return f"DirectionSequence(prefix={list(self.prefix)}, period={list(self.period)})"

    def as_dict(self) -> dict:
        return {"prefix": list(self.prefix), "period": list(self.period)}

    @classmethod
    def from_dict(cls, data: dict) -> "DirectionSequence":
        return cls(tuple(data.get("prefix", ())), tuple(data.get("period", ())))


def modular_progression(m: int, k: int, count: int) -> list[int]:
    """Return ``[j*m mod k for j in range(count)]``."""
    _check_mk(m, k)
    if count < 0:
        raise ValueError(f"count must be non-negative, got {count}")
    return [(j * m) % k for j in range(count)]


def lower_sequence(m: int, k: int) -> list[int]:
    """Lower path directions: one period of the progression with ``k`` appended."""
    return modular_progression(m, k, k) + [k]


def upper_sequence(m: int, k: int) -> list[int]:
    """Lower path directions with the first and last entries exchanged."""
    seq = lower_sequence(m, k)
    seq[0], seq[-1] = seq[-1], seq[0]
    return seq


def _replace_levels(terms: list[int], k: int, levels: int) -> list[int]:
    # Level i turns every remaining i into i + k; applied for i = 0 .. levels-1.
    for level in range(levels):
        terms = [x + k if x == level else x for x in terms]
    return terms


def shifted_progression(m: int, k: int, i: int, count: int) -> list[int]:
    """First ``count`` terms of the shifted modular progression at level ``i``.

    Computed by applying the replacement step ``i`` times to the plain
    progression; the step acts termwise, so a finite window is exact.
    """
    if i < 0:
        raise ValueError(f"level i must be non-negative, got {i}")
    return _replace_levels(modular_progression(m, k, count), k, i)


def shifted_period(m: int, k: int, i: int) -> DirectionSequence:
    """The level-``i`` shifted progression as an infinite period-``k`` sequence."""
    return DirectionSequence.periodic(shifted_progression(m, k, i, k))


def lower_boundary(m: int, k: int, i: int = 0) -> DirectionSequence:
    """Lower boundary directions of wedge ``i``: the progression repeated, plus ``i``."""
    return DirectionSequence.periodic(modular_progression(m, k, k)).shift(i)


def upper_boundary(m: int, k: int, i: int = 0) -> DirectionSequence:
    """Upper boundary directions of wedge ``i``: first ``k`` upper directions repeated, plus ``i``."""
    return DirectionSequence.periodic(upper_sequence(m, k)[:k]).shift(i)


def modular_inverse(m: int, k: int) -> int:
    return pow(m, -1, k)


def alignment_index(i: int, m: int, k: int) -> int:
    """Index of the first front edge pointing in direction ``i``.

    Closed form ``i * m^-1 mod k``; see :func:`first_index_of` for the scan.
    """
    _check_mk(m, k)
    return (i * modular_inverse(m, k)) % k


def first_index_of(seq: DirectionSequence | Sequence[int], value: int, limit: int) -> int | None:
    """Linear scan for the first ``j < limit`` with ``seq[j] == value``."""
    for j in range(limit):
        try:
            if seq[j] == value:
                return j
        except IndexError:
            return None
    return None


def _window(seq, horizon: int | None, k: int) -> list[int]:
    if horizon is not None and horizon < 2 * k:
        raise ValueError(f"horizon {horizon} < 2k = {2 * k} cannot certify period k")
    if isinstance(seq, DirectionSequence) and not seq.is_finite:
        need = len(seq.prefix) + math.lcm(len(seq.period), k) + k + 1
        return seq.take(max(need, horizon or 0))
    terms = list(seq)
    if horizon is None:
        horizon = len(terms)
    if horizon < 2 * k:
        raise ValueError(f"horizon {horizon} < 2k = {2 * k} cannot certify period k")
    if len(terms) < horizon:
        raise ValueError(f"sequence has {len(terms)} terms, fewer than horizon {horizon}")
    return terms[:horizon]


def condition_c_violation(seq, i: int, m: int, k: int, horizon: int | None = None) -> str | None:
    """Return a description of the first clause of C(i) that fails, or None.

    Periodic :class:`DirectionSequence` inputs are checked over a window long
    enough to cover every distinct index class, which decides the condition
    for the whole infinite sequence.  Plain lists are checked on
    ``[0, horizon)``.
    """
    a = _window(seq, horizon, k)
    for j, x in enumerate(a):
        if not i <= x < i + k:
            return f"range: a[{j}] = {x} not in [{i}, {i + k})"
    if sorted(a[:k]) != list(range(i, i + k)):
        return f"permutation: first {k} terms {a[:k]} are not a permutation of {i}..{i + k - 1}"
    for j in range(len(a) - k):
        if a[j + k] != a[j]:
            return f"period: a[{j + k}] = {a[j + k]} != a[{j}] = {a[j]}"
    for j in range(len(a) - 1):
        nxt = a[j] + m if a[j] + m < i + k else a[j] + m - k
        if a[j + 1] != nxt:
            return f"recurrence: a[{j + 1}] = {a[j + 1]}, expected {nxt}"
    return None


def satisfies_condition_c(seq, i: int, m: int, k: int, horizon: int | None = None) -> bool:
    return condition_c_violation(seq, i, m, k, horizon) is None
