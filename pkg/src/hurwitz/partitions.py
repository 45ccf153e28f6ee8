"""Integer partitions and candidate branching data.

Everything downstream works with two immutable values: a :class:`Partition`
(the multiset of local degrees over one branch point, stored as a
non-increasing tuple) and a :class:`CandidateDatum` (a degree together with
the nontrivial partitions over all branch points).  This module owns
parsing, normalization, the sphere branch-balance check, and the
split/merge algebra that the degree reductions run on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator


class DatumParseError(ValueError):
    """Malformed datum text.  ``position`` is a 0-based offset into the input."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at offset {position})")
        self.position = position


@dataclass(frozen=True)
class Partition:
    """A multiset of positive integers, kept sorted non-increasing."""

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.parts:
            raise ValueError("a partition needs at least one part")
        prev = None
        for p in self.parts:
            if not isinstance(p, int) or p < 1:
                raise ValueError(f"parts must be positive integers, got {p!r}")
            if prev is not None and p > prev:
                raise ValueError("parts must be non-increasing; use Partition.of()")
            prev = p

    @classmethod
    def of(cls, parts: Iterable[int]) -> "Partition":
        """Build a partition from any iterable of positive integers."""
        return cls(tuple(sorted(parts, reverse=True)))

    @property
    def total(self) -> int:
        return sum(self.parts)

    @property
    def trivial(self) -> bool:
        """True iff every part equals 1 (an unbranched fiber)."""
        return self.parts[0] == 1

    def gcd(self) -> int:
        return math.gcd(*self.parts)

    def scaled(self, k: int) -> "Partition":
        return Partition(tuple(p * k for p in self.parts))

    def divided(self, s: int) -> "Partition":
        """Divide every part by ``s``; every part must be divisible."""
        for p in self.parts:
            if p % s:
                raise ValueError(f"part {p} is not divisible by {s}")
        return Partition(tuple(p // s for p in self.parts))

    @property
    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        """Canonical order used everywhere: length first, then lexicographic."""
        return (len(self.parts), self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __str__(self) -> str:
        return "[" + ",".join(str(p) for p in self.parts) + "]"


@dataclass(frozen=True)
class CandidateDatum:
    """A degree with the multiset of nontrivial partitions over its branch points.

    Instances are canonical: partitions are sorted by :attr:`Partition.sort_key`
    and trivial partitions are never stored, so equal data compare equal.
    """

    degree: int
    partitions: tuple[Partition, ...]

    def __post_init__(self) -> None:
        if self.degree < 1:
            raise ValueError("degree must be positive")
        prev = None
        for p in self.partitions:
            if p.trivial:
                raise ValueError(f"trivial partition {p} must be dropped")
            if p.total != self.degree:
                raise ValueError(f"partition {p} sums to {p.total}, expected degree {self.degree}")
            if prev is not None and p.sort_key < prev:
                raise ValueError("partitions out of canonical order; use CandidateDatum.make()")
            prev = p.sort_key

    @classmethod
    def make(cls, degree: int, partitions: Iterable[Partition | Iterable[int]]) -> "CandidateDatum":
        """Normalize and build: sort parts, drop trivial partitions, sort the datum."""
        norm = []
        for p in partitions:
            part = p if isinstance(p, Partition) else Partition.of(p)
            if not part.trivial:
                norm.append(part)
        norm.sort(key=lambda p: p.sort_key)
        return cls(degree, tuple(norm))

    def render(self) -> str:
        """Canonical text form, reparseable by :func:`parse_datum`."""
        body = " ".join(str(p) for p in self.partitions)
        return f"{self.degree}: {body}" if body else f"{self.degree}:"

    def __str__(self) -> str:
        return self.render()


def rh_defect(datum: CandidateDatum) -> int:
    """Branch balance for sphere-to-sphere covers: (n-2)d + 2 - sum of lengths.

    Zero exactly when the datum is a valid candidate; trivial partitions
    (which are never stored) would contribute nothing.
    """
    n = len(datum.partitions)
    return (n - 2) * datum.degree + 2 - sum(len(p) for p in datum.partitions)


def parse_datum(text: str) -> CandidateDatum:
    """Parse ``"degree: [a,b] [c,d] ..."`` into a normalized datum.

    Grammar: ``datum := degree ":" partition+`` with
    ``partition := "[" int ("," int)* "]"``; integers are base-10 and
    positive.  Errors report a 0-based offset into the input.
    """
    i = 0
    n = len(text)

    def skip_ws() -> None:
        nonlocal i
        while i < n and text[i].isspace():
            i += 1

    def read_int(what: str) -> int:
        nonlocal i
        start = i
        while i < n and text[i].isdigit():
            i += 1
        if i == start:
            raise DatumParseError(f"expected {what}", start)
        value = int(text[start:i])
        if value == 0:
            raise DatumParseError(f"{what} must be positive, got 0", start)
        return value

    skip_ws()
    degree_pos = i
    degree = read_int("a degree")
    if degree < 1:
        raise DatumParseError("degree must be at least 1", degree_pos)
    skip_ws()
    if i >= n or text[i] != ":":
        raise DatumParseError("expected ':' after the degree", i)
    i += 1
    skip_ws()
    if i >= n:
        raise DatumParseError("expected at least one partition", i)

    collected: list[tuple[int, list[int]]] = []
    while i < n:
        if text[i] != "[":
            raise DatumParseError("expected '['", i)
        part_pos = i
        i += 1
        parts = []
        skip_ws()
        parts.append(read_int("a part"))
        skip_ws()
        while i < n and text[i] == ",":
            i += 1
            skip_ws()
            parts.append(read_int("a part"))
            skip_ws()
        if i >= n or text[i] != "]":
            raise DatumParseError("expected ',' or ']'", i)
        i += 1
        collected.append((part_pos, parts))
        skip_ws()

    for pos, parts in collected:
        total = sum(parts)
        if total != degree:
            raise DatumParseError(
                f"partition {Partition.of(parts)} sums to {total}, expected degree {degree}", pos
            )
    return CandidateDatum.make(degree, (parts for _, parts in collected))


@dataclass(frozen=True)
class Decomposition:
    """An unordered split of ``source`` into sub-partitions of equal sums."""

    source: Partition
    groups: tuple[Partition, ...]

    def __post_init__(self) -> None:
        joined = sorted(p for g in self.groups for p in g.parts)
        if joined != sorted(self.source.parts):
            raise ValueError("groups do not reassemble the source partition")


def merged(partitions: Iterable[Partition]) -> Partition:
    """Multiset union of several partitions."""
    parts: list[int] = []
    for p in partitions:
        parts.extend(p.parts)
    return Partition.of(parts)


def decompose(partition: Partition, count: int, total: int) -> tuple[Decomposition, ...]:
    """All distinct unordered splits of ``partition`` into ``count`` groups summing to ``total``.

    Groups may be trivial (all ones).  Returns the empty tuple when no split
    exists, e.g. when some part exceeds ``total``.  Two symmetry rules prune
    the search (a part never goes into a group whose current content and
    remaining capacity duplicate an earlier group's, and a run of equal
    parts is placed with non-decreasing group indices); label swaps that
    slip past both rules are removed at emission, so the result is
    duplicate-free.
    """
    if count < 1 or total < 1:
        raise ValueError("count and total must be positive")
    if count * total != partition.total:
        raise ValueError(f"{count} groups of {total} cannot reassemble a total of {partition.total}")

    parts = partition.parts
    contents: list[list[int]] = [[] for _ in range(count)]
    remaining = [total] * count
    found: list[Decomposition] = []
    emitted: set[tuple[tuple[int, ...], ...]] = set()

    def place(idx: int, min_group: int) -> None:
        if idx == len(parts):
            groups = tuple(
                sorted((Partition(tuple(c)) for c in contents), key=lambda p: p.sort_key)
            )
            key = tuple(g.parts for g in groups)
            if key in emitted:
                return
            emitted.add(key)
            found.append(Decomposition(partition, groups))
            return
        part = parts[idx]
        same_next = idx + 1 < len(parts) and parts[idx + 1] == part
        seen: set[tuple[tuple[int, ...], int]] = set()
        for g in range(min_group, count):
            if remaining[g] < part:
                continue
            sig = (tuple(contents[g]), remaining[g])
            if sig in seen:
                continue
            seen.add(sig)
            contents[g].append(part)
            remaining[g] -= part
            place(idx + 1, g if same_next else 0)
            contents[g].pop()
            remaining[g] += part

    place(0, 0)
    return tuple(found)


def partitions_of(total: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """All partitions of ``total`` as non-increasing tuples, in descending-lex order."""
    cap = total if max_part is None else min(max_part, total)

    def gen(remaining: int, bound: int, prefix: list[int]) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield tuple(prefix)
            return
        for p in range(min(bound, remaining), 0, -1):
            prefix.append(p)
            yield from gen(remaining - p, p, prefix)
            prefix.pop()

    yield from gen(total, cap, [])


def nontrivial_partitions(total: int) -> list[Partition]:
    """Nontrivial partitions of ``total``, sorted in the canonical datum order."""
    out = [Partition(t) for t in partitions_of(total) if t[0] > 1]
    out.sort(key=lambda p: p.sort_key)
    return out


def enumerate_candidates(degree: int, branch_points: int) -> Iterator[CandidateDatum]:
    """Every candidate datum with the given degree and number of branch points.

    Yields each balanced multiset of nontrivial partitions exactly once, in
    canonical order.  A running length budget prunes the chooser: the total
    length of all partitions must equal (n-2)d + 2.
    """
    if degree < 2:
        raise ValueError("degree must be at least 2")
    if branch_points < 1:
        raise ValueError("need at least one branch point")
    target = (branch_points - 2) * degree + 2
    options = nontrivial_partitions(degree)
    if not options or target < branch_points:
        return
    lengths = [len(p) for p in options]
    longest = lengths[-1]
    chosen: list[Partition] = []

    def rec(start: int, slots: int, budget: int) -> Iterator[CandidateDatum]:
        if slots == 0:
            if budget == 0:
                yield CandidateDatum(degree, tuple(chosen))
            return
        for idx in range(start, len(options)):
            length = lengths[idx]
            rest = budget - length
            if rest < (slots - 1) * length:
                break  # options are sorted by length; later ones are no shorter
            if rest > (slots - 1) * longest:
                continue
            chosen.append(options[idx])
            yield from rec(idx, slots - 1, rest)
            chosen.pop()

    yield from rec(0, branch_points, target)
