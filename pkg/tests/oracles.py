"""Independent reference implementations used to cross-check the package.

These deliberately share no code path with the implementations they check:
cycle lengths and orbits are recomputed inline, splits are enumerated over
labeled groups and the labels forgotten afterwards, and the tuple search
enumerates whole conjugacy classes outright with no canonical pinning, no
cycle-by-cycle construction, and no pruning.
"""

from __future__ import annotations

import itertools

from hurwitz.partitions import CandidateDatum


def naive_cycle_lengths(perm: tuple[int, ...]) -> tuple[int, ...]:
    degree = len(perm)
    seen = [False] * degree
    lengths = []
    for start in range(degree):
        if seen[start]:
            continue
        length = 1
        seen[start] = True
        x = perm[start]
        while x != start:
            seen[x] = True
            length += 1
            x = perm[x]
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


def naive_splits(parts: tuple[int, ...], count: int, total: int) -> set[tuple[tuple[int, ...], ...]]:
    """All ways to drop parts into ``count`` labeled groups of sum ``total``,
    with the labels forgotten at the end."""
    results: set[tuple[tuple[int, ...], ...]] = set()
    groups: list[list[int]] = [[] for _ in range(count)]
    remaining = [total] * count

    def assign(idx: int) -> None:
        if idx == len(parts):
            canonical = sorted(
                (tuple(sorted(g, reverse=True)) for g in groups), key=lambda g: (len(g), g)
            )
            results.add(tuple(canonical))
            return
        part = parts[idx]
        for g in range(count):
            if remaining[g] < part:
                continue
            groups[g].append(part)
            remaining[g] -= part
            assign(idx + 1)
            groups[g].pop()
            remaining[g] += part

    assign(0)
    return results


_class_cache: dict[tuple[int, tuple[int, ...]], list[tuple[int, ...]]] = {}


def class_elements(degree: int, parts: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Every permutation of the given cycle type, by filtering all of S_d."""
    key = (degree, parts)
    if key not in _class_cache:
        want = tuple(sorted(parts, reverse=True))
        _class_cache[key] = [
            p for p in itertools.permutations(range(degree)) if naive_cycle_lengths(p) == want
        ]
    return _class_cache[key]


def reference_decide(datum: CandidateDatum) -> str:
    """Zero-optimization search: iterate full classes, force one factor by the
    product condition, check its type and the joint orbit."""
    degree = datum.degree
    types = [p.parts for p in datum.partitions]
    n = len(types)
    if n == 0:
        return "realizable" if degree == 1 else "exceptional"
    if n == 1:
        return "exceptional"

    sizes = [len(class_elements(degree, t)) for t in types]
    forced = max(range(n), key=lambda i: (sizes[i], i))
    others = [i for i in range(n) if i != forced]
    want = tuple(sorted(types[forced], reverse=True))

    for combo in itertools.product(*[class_elements(degree, types[i]) for i in others]):
        perms: list[tuple[int, ...] | None] = [None] * n
        for i, p in zip(others, combo):
            perms[i] = p
        before = tuple(range(degree))
        for i in range(forced - 1, -1, -1):
            src = perms[i]
            before = tuple(src[before[x]] for x in range(degree))
        after = tuple(range(degree))
        for i in range(n - 1, forced, -1):
            src = perms[i]
            after = tuple(src[after[x]] for x in range(degree))
        prod = tuple(after[before[x]] for x in range(degree))
        if naive_cycle_lengths(prod) != want:
            continue
        inv = [0] * degree
        for a, b in enumerate(prod):
            inv[b] = a
        perms[forced] = tuple(inv)
        seen = [False] * degree
        seen[0] = True
        stack = [0]
        reached = 1
        while stack:
            x = stack.pop()
            for p in perms:
                y = p[x]
                if not seen[y]:
                    seen[y] = True
                    reached += 1
                    stack.append(y)
        if reached == degree:
            return "realizable"
    return "exceptional"
