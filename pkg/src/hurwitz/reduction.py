"""Degree-reducing equivalences over structured data.

Each transformation takes a datum with a divisible pair and produces the
strictly smaller candidate data whose realizability is equivalent to the
parent's:

  thm1  pair divisible by s: quotient the pair by s and split every other
        partition into s partitions of d' = d/s; child degree d'.
  thm2  pair divisible by 2 plus a partition divisible by t (t | d',
        d' = d/2): child degree d'/t, assembled from splitting the third
        partition (divided by t) in two, each half-pair (divided by 2)
        into t groups, and every remaining partition into 2t groups.
  thm3  pair divisible by 3 plus an all-even partition with 4 | d'
        (d' = d/3): child degree d'/4, from splitting the even partition
        (halved) into six groups, each pair member (divided by 3) into
        four, and every remaining partition into twelve.

A :class:`ReductionStep` records enough to replay the transformation, so a
chain of steps ending in a witness (or in the trivial degree-1 datum) is an
independently checkable realizability certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Iterator

from .criteria import StructureMatch
from .oracle import ConstellationWitness
from .partitions import CandidateDatum, Partition, decompose, merged, rh_defect

ROLE_PAIR = "pair"
ROLE_THIRD = "third"
ROLE_OTHER = "other"

# per theorem: role -> (scale to rebuild the source, expected piece count)
_ARITY = {
    "thm1": {ROLE_PAIR: ("s", 1), ROLE_OTHER: (1, "s")},
    "thm2": {ROLE_PAIR: (2, "t"), ROLE_THIRD: ("t", 2), ROLE_OTHER: (1, "2t")},
    "thm3": {ROLE_PAIR: (3, 4), ROLE_THIRD: (2, 6), ROLE_OTHER: (1, 12)},
}


class StepReplayError(ValueError):
    """A reduction step is internally inconsistent (e.g. tampered pieces)."""


@dataclass(frozen=True)
class SplitRecord:
    """How one parent partition was fed into the child datum."""

    index: int
    role: str
    scale: int
    source: Partition
    pieces: tuple[Partition, ...]

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "role": self.role,
            "scale": self.scale,
            "source": list(self.source.parts),
            "pieces": [list(p.parts) for p in self.pieces],
        }


@dataclass(frozen=True)
class ReductionStep:
    theorem: str
    s: int
    t: int | None
    pair: tuple[int, int]
    records: tuple[SplitRecord, ...]
    child: CandidateDatum

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "s": self.s,
            "t": self.t,
            "pair_indices": list(self.pair),
            "decompositions": [r.to_json() for r in self.records],
            "child": {
                "degree": self.child.degree,
                "partitions": [list(p.parts) for p in self.child.partitions],
            },
        }


@dataclass(frozen=True)
class ReductionChain:
    """Steps from the original datum down to a base certificate.

    ``base`` is a witness for the final child, or None when the chain ends
    at the trivial degree-1 datum.
    """

    steps: tuple[ReductionStep, ...]
    base: ConstellationWitness | None

    def to_json(self) -> dict:
        return {
            "type": "chain",
            "steps": [s.to_json() for s in self.steps],
            "base": self.base.to_json() if self.base is not None else {"type": "trivial"},
        }

    def render(self) -> str:
        hops = " -> ".join(
            f"{s.theorem}(s={s.s}{f',t={s.t}' if s.t else ''}) d={s.child.degree}" for s in self.steps
        )
        tail = "identity cover" if self.base is None else f"witness {self.base.render()}"
        return f"{hops}; base: {tail}" if hops else f"base: {tail}"


def _expected(value, s: int, t: int | None) -> int:
    if value == "s":
        return s
    if value == "t":
        return t  # type: ignore[return-value]
    if value == "2t":
        return 2 * t  # type: ignore[operator]
    return value


def replay(step: ReductionStep) -> CandidateDatum:
    """Rebuild and return the parent datum, validating every record.

    Raises :class:`StepReplayError` on any inconsistency: wrong piece
    counts, pieces that do not reassemble their source, or a child that
    does not match the recorded pieces.
    """
    arity = _ARITY.get(step.theorem)
    if arity is None:
        raise StepReplayError(f"unknown theorem {step.theorem!r}")
    u = step.child.degree
    sources = []
    all_pieces: list[Partition] = []
    third_count = 0
    for rec in step.records:
        if rec.role not in arity:
            raise StepReplayError(f"role {rec.role!r} not allowed in {step.theorem}")
        scale, count = arity[rec.role]
        scale = _expected(scale, step.s, step.t)
        count = _expected(count, step.s, step.t)
        if rec.scale != scale:
            raise StepReplayError(f"record {rec.index}: scale {rec.scale}, expected {scale}")
        if len(rec.pieces) != count:
            raise StepReplayError(f"record {rec.index}: {len(rec.pieces)} pieces, expected {count}")
        for piece in rec.pieces:
            if piece.total != u:
                raise StepReplayError(f"record {rec.index}: piece {piece} does not sum to {u}")
        if merged(rec.pieces).scaled(rec.scale) != rec.source:
            raise StepReplayError(f"record {rec.index}: pieces do not reassemble {rec.source}")
        if rec.role == ROLE_PAIR and rec.index not in step.pair:
            raise StepReplayError(f"record {rec.index}: pair role outside pair indices")
        if rec.role == ROLE_THIRD:
            third_count += 1
        sources.append(rec.source)
        all_pieces.extend(rec.pieces)
    if sorted(r.index for r in step.records) != list(range(len(step.records))):
        raise StepReplayError("records do not cover the parent partitions exactly once")
    if step.theorem in ("thm2", "thm3") and third_count != 1:
        raise StepReplayError(f"{step.theorem} needs exactly one third-role record")
    if CandidateDatum.make(u, all_pieces) != step.child:
        raise StepReplayError("child datum does not match the recorded pieces")
    degrees = {p.total for p in sources}
    if len(degrees) != 1:
        raise StepReplayError("sources disagree on the parent degree")
    parent = CandidateDatum.make(degrees.pop(), sources)
    if rh_defect(parent) != 0 or rh_defect(step.child) != 0:
        raise StepReplayError("replayed data are not balanced")
    return parent


def _emit(theorem, s, t, pair, fixed_records, others, option_lists, child_degree, datum, seen):
    """Yield deduplicated steps over the cartesian product of the splits."""
    for combo in iproduct(*option_lists):
        records = dict(fixed_records)
        pieces = [p for rec in fixed_records.values() for p in rec.pieces]
        for (m, role, scale), dec in zip(others, combo):
            records[m] = SplitRecord(m, role, scale, datum.partitions[m], dec.groups)
            pieces.extend(dec.groups)
        child = CandidateDatum.make(child_degree, pieces)
        if child in seen:
            continue
        seen.add(child)
        ordered = tuple(records[m] for m in sorted(records))
        step = ReductionStep(theorem, s, t, pair, ordered, child)
        assert rh_defect(child) == 0
        yield step


def children_thm1(datum: CandidateDatum, match: StructureMatch) -> Iterator[ReductionStep]:
    """Children of degree d/s for an s-divisible pair; empty when some other
    partition admits no split into s partitions of d'."""
    if rh_defect(datum) != 0:
        raise ValueError("datum must be balanced")
    s = match.divisor
    if s < 2:
        raise ValueError("pair divisor must be at least 2")
    sub = match.subdegree
    i, j = match.pair
    ps = datum.partitions
    fixed = {
        i: SplitRecord(i, ROLE_PAIR, s, ps[i], (ps[i].divided(s),)),
        j: SplitRecord(j, ROLE_PAIR, s, ps[j], (ps[j].divided(s),)),
    }
    others = [(m, ROLE_OTHER, 1) for m, _ in match.other_gcds]
    option_lists = [decompose(ps[m], s, sub) for m, _, _ in others]
    if any(not opts for opts in option_lists):
        return
    yield from _emit("thm1", s, None, match.pair, fixed, others, option_lists, sub, datum, set())


def children_thm2(
    datum: CandidateDatum, match: StructureMatch, third: int, t: int
) -> Iterator[ReductionStep]:
    """Children of degree d'/t for a 2-divisible pair and a t-divisible third."""
    if rh_defect(datum) != 0:
        raise ValueError("datum must be balanced")
    if match.divisor != 2:
        raise ValueError("the pair must be divisible by exactly 2 for this reduction")
    if t < 2:
        raise ValueError("t must be at least 2")
    i, j = match.pair
    if third in (i, j) or not 0 <= third < len(datum.partitions):
        raise ValueError("third partition must be outside the pair")
    ps = datum.partitions
    if any(p % t for p in ps[third].parts):
        raise ValueError(f"every part of {ps[third]} must be divisible by {t}")
    dp = match.subdegree
    if dp % t:
        raise ValueError(f"t={t} must divide d'={dp}")
    u = dp // t
    # pair and third pieces vary too: fold them into the product as well
    others = [(i, ROLE_PAIR, 2), (j, ROLE_PAIR, 2), (third, ROLE_THIRD, t)]
    option_lists = [
        decompose(ps[i].divided(2), t, u),
        decompose(ps[j].divided(2), t, u),
        decompose(ps[third].divided(t), 2, u),
    ]
    for m, _ in match.other_gcds:
        if m == third:
            continue
        others.append((m, ROLE_OTHER, 1))
        option_lists.append(decompose(ps[m], 2 * t, u))
    if any(not opts for opts in option_lists):
        return
    yield from _emit("thm2", 2, t, match.pair, {}, others, option_lists, u, datum, set())


def children_thm3(datum: CandidateDatum, match: StructureMatch, third: int) -> Iterator[ReductionStep]:
    """Children of degree d'/4 for a 3-divisible pair and an all-even third."""
    if rh_defect(datum) != 0:
        raise ValueError("datum must be balanced")
    if match.divisor != 3:
        raise ValueError("the pair must be divisible by exactly 3 for this reduction")
    i, j = match.pair
    if third in (i, j) or not 0 <= third < len(datum.partitions):
        raise ValueError("third partition must be outside the pair")
    ps = datum.partitions
    if any(p % 2 for p in ps[third].parts):
        raise ValueError(f"every part of {ps[third]} must be even")
    dp = match.subdegree
    if dp % 4:
        raise ValueError(f"4 must divide d'={dp}")
    u = dp // 4
    others = [(i, ROLE_PAIR, 3), (j, ROLE_PAIR, 3), (third, ROLE_THIRD, 2)]
    option_lists = [
        decompose(ps[i].divided(3), 4, u),
        decompose(ps[j].divided(3), 4, u),
        decompose(ps[third].divided(2), 6, u),
    ]
    for m, _ in match.other_gcds:
        if m == third:
            continue
        others.append((m, ROLE_OTHER, 1))
        option_lists.append(decompose(ps[m], 12, u))
    if any(not opts for opts in option_lists):
        return
    yield from _emit("thm3", 3, None, match.pair, {}, others, option_lists, u, datum, set())
