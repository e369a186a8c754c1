"""Generalized exact cover with per-item required multiplicities.

An instance asks for a sub-collection R of blocks such that every item u is
covered exactly alpha(u) times, where a block covers each of its items once
(an incidence may carry an integer weight, in which case that block covers
the item weight times).  Items with alpha = 0 are handled at build time by
discarding every block that would touch them.

The solver does binary include/exclude branching on a candidate block of the
most constrained item, with unit propagation:

* include b: decrement the remaining need of every item of b; items whose
  need reaches 0 retire all their other candidate blocks;
* exclude b: retire b alone;
* prune whenever some unsatisfied item has fewer remaining candidate
  contributions than its remaining need.

Blocks are canonicalized (sorted by payload) when the instance is built, so
two runs over the same instance emit identical solution sequences.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence


@dataclass(frozen=True)
class CoverSolution:
    """Indices of the chosen blocks, in increasing order."""

    chosen: tuple[int, ...]


@dataclass
class CoverInstance:
    """A built instance: items with multiplicities and canonicalized blocks.

    ``blocks[j]`` is a tuple of (item index, weight) incidences; ``payloads``
    parallel the blocks.  ``infeasible`` is set at build time when some item
    already cannot reach its multiplicity.
    """

    item_ids: tuple[Hashable, ...]
    alpha: tuple[int, ...]
    blocks: tuple[tuple[tuple[int, int], ...], ...]
    payloads: tuple[Hashable, ...]
    infeasible: bool = False
    item_index: dict = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        items: dict,
        blocks: Iterable[tuple[Hashable, Sequence[Hashable]]],
    ) -> "CoverInstance":
        """Build from {item id: alpha} and (payload, item ids) pairs.

        A repeated item id inside one block is an incidence of higher weight.
        Blocks touching an item with alpha = 0 are dropped; blocks referencing
        undeclared items are an error.
        """
        item_ids = tuple(items.keys())
        index = {u: i for i, u in enumerate(item_ids)}
        alpha = tuple(int(items[u]) for u in item_ids)
        if any(a < 0 for a in alpha):
            raise ValueError("item multiplicities must be nonnegative")

        cooked: list[tuple[Hashable, tuple[tuple[int, int], ...]]] = []
        for payload, ids in blocks:
            counts: dict[int, int] = {}
            for u in ids:
                if u not in index:
                    raise ValueError(f"block {payload!r} references undeclared item {u!r}")
                i = index[u]
                counts[i] = counts.get(i, 0) + 1
            if any(alpha[i] == 0 for i in counts):
                continue
            cooked.append((payload, tuple(sorted(counts.items()))))
        cooked.sort(key=lambda pb: repr(pb[0]))

        inst = cls(
            item_ids=item_ids,
            alpha=alpha,
            blocks=tuple(b for _, b in cooked),
            payloads=tuple(p for p, _ in cooked),
            item_index=index,
        )
        # per-item capacity: total weight available over all remaining blocks
        cap = [0] * len(item_ids)
        for blk in inst.blocks:
            for i, w in blk:
                cap[i] += w
        inst.infeasible = any(c < a for c, a in zip(cap, alpha))
        return inst

    @property
    def n_items(self) -> int:
        return len(self.item_ids)

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def verify(self, solution: CoverSolution) -> bool:
        """Independent check that a solution covers every item exactly alpha times."""
        got = [0] * self.n_items
        for j in solution.chosen:
            for i, w in self.blocks[j]:
                got[i] += w
        return all(g == a for g, a in zip(got, self.alpha))


def solve_all(
    inst: CoverInstance,
    emit: Callable[[CoverSolution], None] | None = None,
) -> int:
    """Enumerate every solution exactly once; returns the count.

    The consumer is called from the solver's own control flow; a ``None``
    consumer counts without materializing (``count_all``).
    """
    n_items = inst.n_items
    n_blocks = inst.n_blocks
    if inst.infeasible:
        return 0

    need = list(inst.alpha)
    # static incidence: item -> list of (block, weight)
    by_item: list[list[tuple[int, int]]] = [[] for _ in range(n_items)]
    for j, blk in enumerate(inst.blocks):
        for i, w in blk:
            by_item[i].append((j, w))
    cap = [sum(w for _, w in lst) for lst in by_item]
    cand = [len(lst) for lst in by_item]
    active = [True] * n_blocks
    chosen: list[int] = []
    count = 0

    unsatisfied = sum(1 for a in need if a > 0)

    def retire(j: int, trail: list[int]) -> bool:
        """Deactivate block j; returns False on a dead end."""
        active[j] = False
        trail.append(j)
        ok = True
        for i, w in inst.blocks[j]:
            cap[i] -= w
            cand[i] -= 1
            if cap[i] < need[i]:
                ok = False
        return ok

    def restore(trail: list[int]) -> None:
        for j in reversed(trail):
            active[j] = True
            for i, w in inst.blocks[j]:
                cap[i] += w
                cand[i] += 1

    def pick_item() -> int:
        best = -1
        best_score = None
        for i in range(n_items):
            if need[i] > 0:
                score = cand[i] - need[i]
                if best_score is None or score < best_score:
                    best, best_score = i, score
                    if score <= 0:
                        break
        return best

    def include(j: int, trail: list[int]) -> bool:
        nonlocal unsatisfied
        ok = True
        active[j] = False
        trail.append(~j)  # marker: j removed as "taken", not retired
        for i, w in inst.blocks[j]:
            cap[i] -= w
            cand[i] -= 1
            if w > need[i]:
                ok = False
            need[i] -= w
            if need[i] == 0:
                unsatisfied -= 1
        if not ok:
            return False
        # items just satisfied refuse any further coverage
        for i, _ in inst.blocks[j]:
            if need[i] == 0:
                for k, _w in by_item[i]:
                    if active[k]:
                        if not retire(k, trail):
                            ok = False
            elif cap[i] < need[i]:
                ok = False
        return ok

    def undo_include(j: int, trail: list[int]) -> None:
        nonlocal unsatisfied
        while trail:
            t = trail.pop()
            if t >= 0:
                active[t] = True
                for i, w in inst.blocks[t]:
                    cap[i] += w
                    cand[i] += 1
            else:
                k = ~t
                active[k] = True
                for i, w in inst.blocks[k]:
                    if need[i] == 0:
                        unsatisfied += 1
                    need[i] += w
                    cap[i] += w
                    cand[i] += 1

    def search() -> None:
        nonlocal count
        if unsatisfied == 0:
            count += 1
            if emit is not None:
                emit(CoverSolution(tuple(sorted(chosen))))
            return
        i = pick_item()
        if cap[i] < need[i] or cand[i] == 0:
            return
        # branch on the lowest-index active candidate block of item i
        j = next(k for k, _ in by_item[i] if active[k])

        trail: list[int] = []
        chosen.append(j)
        if include(j, trail):
            search()
        chosen.pop()
        undo_include(j, trail)

        trail = []
        ok = retire(j, trail)
        if ok:
            search()
        restore(trail)

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * n_blocks + 1000))
    try:
        search()
    finally:
        sys.setrecursionlimit(old_limit)
    return count


def count_all(inst: CoverInstance) -> int:
    """Solution count by the same traversal as :func:`solve_all`, no emission."""
    return solve_all(inst, None)


def parse_instance(text: str) -> CoverInstance:
    """Plain-text format: one ``item <id> <alpha>`` or ``block <id> <item ids...>`` per line."""
    items: dict[str, int] = {}
    blocks: list[tuple[str, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "item":
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected 'item <id> <alpha>'")
            items[parts[1]] = int(parts[2])
        elif parts[0] == "block":
            if len(parts) < 2:
                raise ValueError(f"line {lineno}: expected 'block <id> <item ids...>'")
            blocks.append((parts[1], parts[2:]))
        else:
            raise ValueError(f"line {lineno}: unknown directive {parts[0]!r}")
    return CoverInstance.build(items, blocks)


def format_instance(inst: CoverInstance) -> str:
    lines = [f"item {u} {a}" for u, a in zip(inst.item_ids, inst.alpha)]
    for payload, blk in zip(inst.payloads, inst.blocks):
        ids = []
        for i, w in blk:
            ids.extend([str(inst.item_ids[i])] * w)
        lines.append(f"block {payload} {' '.join(ids)}")
    return "\n".join(lines) + "\n"
