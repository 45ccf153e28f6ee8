"""Ground-truth realizability by exhaustive search over permutation tuples.

A datum of degree d with partitions A_1..A_n is realizable exactly when
there are permutations s_1..s_n in S_d with the prescribed cycle types,
product equal to the identity, and a transitive joint action.  The search
here is complete:

  * the factor whose conjugacy class is largest is pinned to the canonical
    representative of its type (conjugating a whole tuple preserves all
    three conditions, so this loses nothing),
  * the factor with the second-largest class is never enumerated; it is
    forced by the product condition and checked by cycle type,
  * the remaining factors are built cycle by cycle, smallest class first,
    under a union-find orbit bound: a branch dies when the cycles still to
    be placed cannot merge the current orbits into one.

One backtrack node is charged per assigned cycle; exceeding the node
budget aborts the search with an ``unknown`` verdict, never a wrong one.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .partitions import CandidateDatum, rh_defect
from .perms import (
    Perm,
    canonical_of_type,
    class_size,
    compose,
    cycle_string,
    cycle_type,
    identity,
    inverse,
    is_perm,
    is_transitive,
)
from .verdicts import (
    EXCEPTIONAL,
    LIMIT_BUDGET,
    LIMIT_DEGREE,
    REALIZABLE,
    UNKNOWN,
    DecisionStats,
    Verdict,
)


@dataclass(frozen=True)
class SearchBudget:
    """Resource limits for the exhaustive search."""

    max_degree: int = 12
    max_nodes: int = 100_000_000
    deterministic: bool = True

    def __post_init__(self) -> None:
        if self.max_degree < 1 or self.max_nodes < 1:
            raise ValueError("budget limits must be positive")


@dataclass(frozen=True)
class ConstellationWitness:
    """A tuple of permutations certifying realizability."""

    degree: int
    perms: tuple[Perm, ...]

    def to_json(self) -> dict:
        return {
            "type": "witness",
            "degree": self.degree,
            "perms": [list(p) for p in self.perms],
        }

    def render(self) -> str:
        return " | ".join(cycle_string(p) for p in self.perms)


def check_witness(datum: CandidateDatum, witness: ConstellationWitness) -> bool:
    """Re-verify a witness from scratch: types, identity product, transitivity."""
    if witness.degree != datum.degree:
        return False
    if len(witness.perms) != len(datum.partitions):
        return False
    for p in witness.perms:
        if len(p) != datum.degree or not is_perm(p):
            return False
    for p, part in zip(witness.perms, datum.partitions):
        if cycle_type(p) != part:
            return False
    acc = identity(datum.degree)
    for p in witness.perms:
        acc = compose(acc, p)
    if acc != identity(datum.degree):
        return False
    return is_transitive(witness.perms, datum.degree)


class BudgetExhausted(Exception):
    pass


class _Found(Exception):
    pass


class _TupleSearch:
    """Backtracking enumeration of witness tuples for one datum."""

    def __init__(self, datum: CandidateDatum, budget: SearchBudget) -> None:
        self.degree = d = datum.degree
        self.types = [p.parts for p in datum.partitions]
        n = len(self.types)
        sizes = [class_size(p) for p in datum.partitions]
        order = sorted(range(n), key=lambda i: (sizes[i], i))
        self.fixed_pos = order[-1]
        self.forced_pos = order[-2]
        self.middles = order[:-2]
        self.forced_type = self.types[self.forced_pos]

        self.images: list[list[int] | None] = [None] * n
        fixed = list(canonical_of_type(datum.partitions[self.fixed_pos]))
        self.images[self.fixed_pos] = fixed

        # union-find over points, seeded with the pinned factor's cycles
        self.parent = list(range(d))
        self.weight = [1] * d
        self.orbits = d
        self.trail: list[int] = []
        for x in range(d):
            self._union(x, fixed[x])

        # merge capacity of everything scheduled after middle mi (forced last)
        forced_cap = d - len(self.forced_type)
        caps = [d - len(self.types[p]) for p in self.middles]
        self.future_cap = [sum(caps[mi + 1:]) + forced_cap for mi in range(len(caps) + 1)]

        self.nodes = 0
        self.max_nodes = budget.max_nodes
        self.witness: ConstellationWitness | None = None

    # -- union-find with rollback (no path compression) --

    def _find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            x = parent[x]
        return x

    def _union(self, a: int, b: int) -> None:
        ra, rb = self._find(a), self._find(b)
        if ra == rb:
            return
        if self.weight[ra] < self.weight[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.weight[ra] += self.weight[rb]
        self.orbits -= 1
        self.trail.append(rb)

    def _rollback(self, mark: int) -> None:
        trail = self.trail
        while len(trail) > mark:
            rb = trail.pop()
            ra = self.parent[rb]
            self.parent[rb] = rb
            self.weight[ra] -= self.weight[rb]
            self.orbits += 1

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise BudgetExhausted

    # -- search --

    def run(self) -> tuple[str, ConstellationWitness | None]:
        try:
            self._enter_middle(0)
        except _Found:
            return (REALIZABLE, self.witness)
        return (EXCEPTIONAL, None)

    def _enter_middle(self, mi: int) -> None:
        if mi == len(self.middles):
            self._leaf()
            return
        pos = self.middles[mi]
        counts: dict[int, int] = {}
        for c in self.types[pos]:
            counts[c] = counts.get(c, 0) + 1
        img = [-1] * self.degree
        used = [False] * self.degree
        self.images[pos] = img
        cap = self.degree - len(self.types[pos])
        self._place_cycle(mi, img, used, counts, cap, 0)
        self.images[pos] = None

    def _place_cycle(self, mi, img, used, counts, cap, scan_from) -> None:
        leader = scan_from
        degree = self.degree
        while leader < degree and used[leader]:
            leader += 1
        if leader == degree:
            self._enter_middle(mi + 1)
            return
        fut = self.future_cap[mi]
        for length in sorted(counts, reverse=True):
            left = counts[length]
            if not left:
                continue
            counts[length] = left - 1
            used[leader] = True
            if length == 1:
                img[leader] = leader
                self._tick()
                if self.orbits - 1 <= cap + fut:
                    self._place_cycle(mi, img, used, counts, cap, leader + 1)
                img[leader] = -1
            else:
                self._extend_cycle(mi, img, used, counts, cap - (length - 1), leader, leader, length - 1)
            used[leader] = False
            counts[length] = left

    def _extend_cycle(self, mi, img, used, counts, cap_after, leader, tip, left) -> None:
        if left == 0:
            img[tip] = leader
            self._tick()
            mark = len(self.trail)
            x = leader
            while True:
                y = img[x]
                self._union(x, y)
                x = y
                if x == leader:
                    break
            if self.orbits - 1 <= cap_after + self.future_cap[mi]:
                self._place_cycle(mi, img, used, counts, cap_after, leader + 1)
            self._rollback(mark)
            img[tip] = -1
            return
        for nxt in range(self.degree):
            if used[nxt]:
                continue
            used[nxt] = True
            img[tip] = nxt
            self._extend_cycle(mi, img, used, counts, cap_after, leader, nxt, left - 1)
            img[tip] = -1
            used[nxt] = False

    def _leaf(self) -> None:
        d = self.degree
        k = self.forced_pos
        n = len(self.types)
        # the forced factor is (R o L)^-1, where L is the product of the
        # factors before position k and R the product after, in datum order;
        # its cycle type therefore equals the type of R o L
        left = None
        for pos in range(k - 1, -1, -1):
            src = self.images[pos]
            left = src if left is None else [src[x] for x in left]
        right = None
        for pos in range(n - 1, k, -1):
            src = self.images[pos]
            right = src if right is None else [src[x] for x in right]
        if left is None:
            prod = list(right) if right is not None else list(range(d))
        elif right is None:
            prod = list(left)
        else:
            prod = [right[left[x]] for x in range(d)]

        want: dict[int, int] = {}
        for c in self.forced_type:
            want[c] = want.get(c, 0) + 1
        seen = bytearray(d)
        for start in range(d):
            if seen[start]:
                continue
            length = 1
            seen[start] = 1
            x = prod[start]
            while x != start:
                seen[x] = 1
                length += 1
                x = prod[x]
            have = want.get(length, 0)
            if not have:
                return
            want[length] = have - 1

        mark = len(self.trail)
        for x in range(d):
            self._union(x, prod[x])
        transitive = self.orbits == 1
        self._rollback(mark)
        if not transitive:
            return

        perms = []
        for pos in range(n):
            if pos == k:
                perms.append(inverse(tuple(prod)))
            else:
                perms.append(tuple(self.images[pos]))
        self.witness = ConstellationWitness(d, tuple(perms))
        raise _Found


def decide(datum: CandidateDatum, budget: SearchBudget | None = None) -> Verdict:
    """Complete search verdict: realizable with witness, exceptional, or unknown.

    Requires a balanced datum.  Degrees above ``budget.max_degree`` return
    unknown("degree-limit") without searching; running out of nodes returns
    unknown("budget").  An exceptional verdict means the search space was
    exhausted.
    """
    budget = budget or SearchBudget()
    if rh_defect(datum) != 0:
        raise ValueError("oracle requires a balanced datum (rh_defect == 0)")
    if datum.degree > budget.max_degree:
        return Verdict(UNKNOWN, "oracle", limit=LIMIT_DEGREE)

    start = time.perf_counter()
    n = len(datum.partitions)
    if n == 0:
        # balanced with no branch points means degree 1: the identity cover
        witness = ConstellationWitness(datum.degree, ())
        return Verdict(REALIZABLE, "oracle", certificate=witness,
                       stats=_stats(0, start))
    if n == 1:
        # a single nontrivial factor cannot multiply to the identity
        return Verdict(EXCEPTIONAL, "oracle", stats=_stats(0, start))

    search = _TupleSearch(datum, budget)
    try:
        status, witness = search.run()
    except BudgetExhausted:
        return Verdict(UNKNOWN, "oracle", limit=LIMIT_BUDGET, stats=_stats(search.nodes, start))
    if status == REALIZABLE:
        if witness is None or not check_witness(datum, witness):
            raise RuntimeError(f"search produced an invalid witness for {datum}")
        return Verdict(REALIZABLE, "oracle", certificate=witness, stats=_stats(search.nodes, start))
    return Verdict(EXCEPTIONAL, "oracle", stats=_stats(search.nodes, start))


def _stats(nodes: int, start: float) -> DecisionStats:
    return DecisionStats(nodes=nodes, millis=int((time.perf_counter() - start) * 1000))
