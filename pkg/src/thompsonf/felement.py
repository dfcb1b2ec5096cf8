"""Elements of Thompson's group F as exact piecewise-linear homeomorphisms.

An element is stored as its canonical breakpoint list: coordinate pairs
(a_i, b_i) from (0,0) to (1,1), strictly increasing in both coordinates,
with every coordinate dyadic, every segment slope an integer power of two,
and no interior breakpoint where the slope does not change.  The canonical
list makes equality, hashing and serialization trivial; tree pairs are a
derived view.

Composition is a breakpoint merge: the breakpoints of g . f lie among the
breakpoints of f together with f^-1 of the breakpoints of g, so evaluating
g(f(t)) at those candidates and dropping collinear points is exact.

Partition pairs: an order-preserving bijection between two standard dyadic
partitions of equal cardinality extends affinely to an element of F.  The
reverse direction, :func:`to_minimal_pair`, subdivides [0,1] greedily; a
leaf is acceptable when the element is affine on it and maps it onto a
standard dyadic interval.  Acceptability is hereditary under subdivision,
so the greedy result is the unique minimal pair.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Literal, Mapping

from .errors import (
    CardinalityMismatch,
    DomainNotContained,
    InvalidElement,
    OutOfRange,
    TooFewPoints,
)
from .exactnum import ONE, ZERO, format_number, is_power_of_two, parse_coordinate
from .partition import DyadicPartition, MarkedSet, i_n

Side = Literal["left", "right"]


def _is_power_of_two_fraction(x: Fraction) -> bool:
    return is_power_of_two(x.numerator) and is_power_of_two(x.denominator)


class FElement:
    """A group element in canonical breakpoint form."""

    __slots__ = ("breaks", "_acoords", "_bcoords", "_slopes", "_minpair", "_key")

    breaks: tuple[tuple[Fraction, Fraction], ...]

    def __init__(self, breaks: Iterable[tuple[Fraction | int, Fraction | int]]) -> None:
        pts = sorted({(Fraction(a), Fraction(b)) for a, b in breaks})
        if not pts or pts[0] != (ZERO, ZERO) or pts[-1] != (ONE, ONE):
            raise InvalidElement("breakpoints must run from (0,0) to (1,1)")
        for (a1, b1), (a2, b2) in zip(pts, pts[1:]):
            if a1 == a2 or b1 >= b2:
                raise InvalidElement("coordinates must be strictly increasing")
        for a, b in pts:
            if not (is_power_of_two(a.denominator) and is_power_of_two(b.denominator)):
                raise InvalidElement(f"non-dyadic breakpoint ({a}, {b})")

        slopes = [
            (b2 - b1) / (a2 - a1) for (a1, b1), (a2, b2) in zip(pts, pts[1:])
        ]
        for s in slopes:
            if not _is_power_of_two_fraction(s):
                raise InvalidElement(f"slope {s} is not a power of two")

        # Canonical form: drop interior points where the slope is unchanged.
        keep = [pts[0]]
        kept_slopes = [slopes[0]]
        for i in range(1, len(pts) - 1):
            if slopes[i] != kept_slopes[-1]:
                keep.append(pts[i])
                kept_slopes.append(slopes[i])
        keep.append(pts[-1])

        object.__setattr__(self, "breaks", tuple(keep))
        object.__setattr__(self, "_acoords", tuple(a for a, _ in keep))
        object.__setattr__(self, "_bcoords", tuple(b for _, b in keep))
        object.__setattr__(self, "_slopes", tuple(kept_slopes))
        object.__setattr__(self, "_minpair", None)
        object.__setattr__(self, "_key", None)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("FElement is immutable")

    # -- equality is equality of canonical forms ---------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FElement):
            return NotImplemented
        return self.breaks == other.breaks

    def __hash__(self) -> int:
        return hash(self.breaks)

    def __repr__(self) -> str:
        pairs = ",".join(
            f"({format_number(a)},{format_number(b)})" for a, b in self.breaks
        )
        return f"FElement[{pairs}]"

    @property
    def canonical_key(self) -> bytes:
        """Injective, run-stable byte encoding of the canonical form."""
        if self._key is None:
            text = ";".join(
                f"{format_number(a)}:{format_number(b)}" for a, b in self.breaks
            )
            object.__setattr__(self, "_key", text.encode("ascii"))
        return self._key

    def is_identity(self) -> bool:
        return len(self.breaks) == 2

    # -- evaluation ---------------------------------------------------------

    def apply(self, t: Fraction) -> Fraction:
        """Exact image of t in [0,1]."""
        if not ZERO <= t <= ONE:
            raise OutOfRange(f"apply expects a point of [0,1], got {t}")
        i = min(bisect_right(self._acoords, t), len(self._acoords) - 1) - 1
        a, b = self.breaks[i]
        return b + self._slopes[i] * (t - a)

    __call__ = apply

    def apply_inverse(self, y: Fraction) -> Fraction:
        """Exact preimage of y in [0,1]."""
        if not ZERO <= y <= ONE:
            raise OutOfRange(f"apply_inverse expects a point of [0,1], got {y}")
        i = min(bisect_right(self._bcoords, y), len(self._bcoords) - 1) - 1
        a, b = self.breaks[i]
        return a + (y - b) / self._slopes[i]

    # -- group structure ----------------------------------------------------

    def __mul__(self, other: "FElement") -> "FElement":
        return compose(self, other)

    def __invert__(self) -> "FElement":
        return invert(self)

    def __pow__(self, k: int) -> "FElement":
        if k < 0:
            return invert(self) ** (-k)
        out = identity()
        for _ in range(k):
            out = compose(out, self)
        return out

    # -- serialization --------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "breaks": [[format_number(a), format_number(b)] for a, b in self.breaks]
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "FElement":
        try:
            raw = data["breaks"]
        except (KeyError, TypeError):
            raise InvalidElement("expected an object with a 'breaks' array")
        return cls(
            (parse_coordinate(a), parse_coordinate(b)) for a, b in raw
        )


@dataclass(frozen=True)
class PartitionPair:
    """Two standard dyadic partitions of equal cardinality."""

    domain: DyadicPartition
    range: DyadicPartition

    def __post_init__(self) -> None:
        if len(self.domain) != len(self.range):
            raise CardinalityMismatch(
                f"|domain| = {len(self.domain)} but |range| = {len(self.range)}"
            )

    def to_json_dict(self) -> dict:
        return {
            "domain": self.domain.to_strings(),
            "range": self.range.to_strings(),
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "PartitionPair":
        return cls(
            DyadicPartition.from_strings(data["domain"]),
            DyadicPartition.from_strings(data["range"]),
        )


def identity() -> FElement:
    return _identity()


@lru_cache(maxsize=1)
def _identity() -> FElement:
    return FElement(((ZERO, ZERO), (ONE, ONE)))


def from_pair(pair: PartitionPair) -> FElement:
    """The element agreeing with the order-preserving bijection domain -> range."""
    return FElement(zip(pair.domain.points, pair.range.points))


def compose(g: FElement, f: FElement) -> FElement:
    """Canonical form of g after f (f is applied first)."""
    candidates = set(f._acoords)
    candidates.update(f.apply_inverse(a) for a in g._acoords)
    return FElement((t, g.apply(f.apply(t))) for t in candidates)


def invert(f: FElement) -> FElement:
    return FElement((b, a) for a, b in f.breaks)


def to_minimal_pair(f: FElement) -> PartitionPair:
    """The unique minimal-cardinality partition pair representing f.

    Greedy subdivision of [0,1]: keep a leaf once f is affine on it and its
    image is a standard dyadic interval, otherwise split at the midpoint.
    Identity yields ({0,1},{0,1}).
    """
    if f._minpair is not None:
        return f._minpair

    acoords = f._acoords

    def acceptable(a: Fraction, b: Fraction) -> bool:
        i = bisect_right(acoords, a) - 1
        if acoords[i + 1] < b:  # a breakpoint strictly inside (a, b)
            return False
        fa, fb = f.apply(a), f.apply(b)
        gap = fb - fa
        return (
            gap.numerator == 1
            and is_power_of_two(gap.denominator)
            and gap.denominator % fa.denominator == 0
        )

    domain = [ZERO, ONE]
    stack = [(ZERO, ONE)]
    while stack:
        a, b = stack.pop()
        if not acceptable(a, b):
            m = (a + b) / 2
            domain.append(m)
            stack.append((a, m))
            stack.append((m, b))
            if len(domain) > 1 << 20:
                raise InvalidElement("subdivision did not terminate")
    domain.sort()
    pair = PartitionPair(
        DyadicPartition(domain),
        DyadicPartition(f.apply(t) for t in domain),
    )
    object.__setattr__(f, "_minpair", pair)
    return pair


GENERATOR_NAMES = ("x0", "x1", "x0^-1", "x1^-1")


@lru_cache(maxsize=1)
def generator_table() -> dict[str, FElement]:
    """The four standard generators, keyed by name, in audit order."""
    x0 = from_pair(
        PartitionPair(
            DyadicPartition.from_strings(["0", "1/2", "3/4", "1"]),
            DyadicPartition.from_strings(["0", "1/4", "1/2", "1"]),
        )
    )
    x1 = from_pair(
        PartitionPair(
            DyadicPartition.from_strings(["0", "1/2", "3/4", "7/8", "1"]),
            DyadicPartition.from_strings(["0", "1/2", "5/8", "3/4", "1"]),
        )
    )
    return {"x0": x0, "x1": x1, "x0^-1": invert(x0), "x1^-1": invert(x1)}


def generators() -> tuple[FElement, FElement, FElement, FElement]:
    """(x0, x1, x0^-1, x1^-1); "generator" downstream always means these four."""
    table = generator_table()
    return tuple(table[name] for name in GENERATOR_NAMES)  # type: ignore[return-value]


def act_marked(f: FElement, X: MarkedSet, side: Side = "left") -> MarkedSet:
    """Pointwise image of a marked set: f.X under f, X.f under f^-1.

    The side conventions make both versions genuine actions:
    (X.f).g = X.(fg) and f.(g.X) = (fg).X.
    """
    mapper = f.apply if side == "left" else f.apply_inverse
    return MarkedSet(mapper(x) for x in X.points)


def act_partition(g: FElement, T: DyadicPartition) -> DyadicPartition:
    """Partial left action on standard dyadic partitions.

    Defined only when the domain of g's minimal pair is contained in T;
    the image is then again standard.
    """
    if not to_minimal_pair(g).domain.issubset(T):
        raise DomainNotContained(
            "the minimal domain partition of g is not contained in T"
        )
    return DyadicPartition(g.apply(t) for t in T.points)


def f_of_partition(T: DyadicPartition) -> FElement:
    """The element represented by (base, T) with the size-matched base partition."""
    if len(T) < 3:
        raise TooFewPoints("the correspondence needs |T| >= 3")
    return from_pair(PartitionPair(i_n(len(T) - 3), T))


def canonical_key(f: FElement) -> bytes:
    return f.canonical_key


def evaluate_word(names: Iterable[str]) -> FElement:
    """Product of named generators, left to right (rightmost applied first)."""
    table = generator_table()
    try:
        elems = [table[name] for name in names]
    except KeyError as exc:
        raise InvalidElement(f"unknown generator {exc.args[0]!r}") from None
    return reduce(compose, elems, identity())
