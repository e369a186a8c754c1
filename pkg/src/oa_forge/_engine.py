"""Canonical labeling of coordinate-incidence structures.

An object here is a multiset of binary words over n coordinates, each word
carrying an integer color, together with an initial coloring of the
coordinates.  The symmetry group is the set of coordinate permutations that
preserve the coordinate coloring; words are never relabeled independently,
their images are induced by the coordinate permutation.

Canonization runs the usual individualization-refinement search:

* refinement alternates word signatures (own color + multiset of coordinate
  colors on the support) and coordinate signatures (own color + multiset of
  word colors through the coordinate) until both colorings stabilize;
* the branching target is the smallest non-singleton coordinate class;
* search nodes are ordered by the refinement trace along the path, leaves by
  their relabeled certificate; the canonical leaf is the minimum;
* leaves with certificates equal to the best one yield automorphisms, which
  prune sibling branches through orbit representatives.

The certificate is a deterministic byte string, stable across processes, so
it can be hashed into persistent keys.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Sequence

_EQ = 0
_LT = 1


def _rank(keys: list) -> tuple[list[int], tuple]:
    """Rank arbitrary comparable keys; returns ranks and the (key, count) histogram."""
    order = sorted(set(keys))
    idx = {k: r for r, k in enumerate(order)}
    ranks = [idx[k] for k in keys]
    counts = [0] * len(order)
    for r in ranks:
        counts[r] += 1
    hist = tuple((k, c) for k, c in zip(order, counts))
    return ranks, hist


def _digest(obj) -> bytes:
    return hashlib.blake2b(repr(obj).encode(), digest_size=12).digest()


@dataclass
class CanonResult:
    """Outcome of canonizing one incidence structure."""

    cert: bytes
    labeling: tuple[int, ...]  # coordinate -> canonical position, 0-based
    generators: list[tuple[int, ...]]  # coordinate permutations, 0-based images
    aut_order: int


class _Search:
    def __init__(
        self,
        n: int,
        words: Sequence[int],
        word_colors: Sequence[int],
        coord_colors: Sequence[int],
    ):
        if len(set(words)) != len(words):
            raise ValueError("words must be distinct; fold multiplicity into colors")
        self.n = n
        self.words = tuple(words)
        self.m = len(words)
        self.supports = tuple(
            tuple(j for j in range(n) if w >> j & 1) for w in self.words
        )
        members: list[list[int]] = [[] for _ in range(n)]
        for k, supp in enumerate(self.supports):
            for j in supp:
                members[j].append(k)
        self.members = tuple(tuple(ms) for ms in members)
        self.wcol0, _ = _rank(list(word_colors))
        self.ccol0, _ = _rank(list(coord_colors))
        self.base_multiset = sorted(zip(self.wcol0, self.words))

        self.best_cert: bytes | None = None
        self.best_traces: list[bytes] = []
        self.best_labeling: tuple[int, ...] | None = None
        self.auts: list[tuple[int, ...]] = []
        self.path_traces: list[bytes] = []
        self.path_states: list[int] = []
        self.prefix: list[int] = []

    # -- refinement ---------------------------------------------------------

    def refine(self, ccol: list[int]) -> tuple[list[int], list[int], bytes]:
        wcol = self.wcol0
        rounds = []
        while True:
            wsigs = [
                (wcol[k], tuple(sorted(ccol[j] for j in self.supports[k])))
                for k in range(self.m)
            ]
            wcol2, whist = _rank(wsigs)
            csigs = []
            for i in range(self.n):
                counts: dict[int, int] = {}
                for k in self.members[i]:
                    c = wcol2[k]
                    counts[c] = counts.get(c, 0) + 1
                csigs.append((ccol[i], tuple(sorted(counts.items()))))
            ccol2, chist = _rank(csigs)
            rounds.append((whist, chist))
            if ccol2 == ccol and wcol2 == wcol:
                break
            ccol, wcol = ccol2, wcol2
        return ccol, wcol, _digest(rounds)

    # -- leaves -------------------------------------------------------------

    def _leaf_cert(self, ccol: list[int]) -> tuple[bytes, tuple[int, ...]]:
        pos = ccol  # discrete: color ranks are positions
        relabeled = sorted(
            (self.wcol0[k], sum(1 << pos[j] for j in self.supports[k]))
            for k in range(self.m)
        )
        inv = [0] * self.n
        for i, p in enumerate(pos):
            inv[p] = i
        coord_init = tuple(self.ccol0[inv[p]] for p in range(self.n))
        cert = repr((self.n, coord_init, relabeled)).encode()
        return cert, tuple(pos)

    def _try_automorphism(self, labeling: tuple[int, ...]) -> None:
        assert self.best_labeling is not None
        inv_best = [0] * self.n
        for i, p in enumerate(self.best_labeling):
            inv_best[p] = i
        g = tuple(inv_best[labeling[i]] for i in range(self.n))
        if g == tuple(range(self.n)):
            return
        image = sorted(
            (self.wcol0[k], sum(1 << g[j] for j in self.supports[k]))
            for k in range(self.m)
        )
        if image == self.base_multiset and all(
            self.ccol0[g[i]] == self.ccol0[i] for i in range(self.n)
        ):
            if g not in self.auts:
                self.auts.append(g)

    # -- search -------------------------------------------------------------

    def _orbit_of(self, done: set[int]) -> set[int]:
        gens = [
            g
            for g in self.auts
            if all(g[p] == p for p in self.prefix)
        ]
        orbit = set(done)
        frontier = list(done)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = g[x]
                if y not in orbit:
                    orbit.add(y)
                    frontier.append(y)
        return orbit

    def _node(self, ccol: list[int], depth: int) -> None:
        ccol, wcol, trace = self.refine(ccol)
        parent_state = self.path_states[depth - 1] if depth else _EQ
        if self.best_cert is None:
            state = _LT
        elif parent_state == _LT:
            state = _LT
        else:
            ref = self.best_traces[depth] if depth < len(self.best_traces) else None
            if ref is None or trace < ref:
                state = _LT
            elif trace > ref:
                return
            else:
                state = _EQ
        self.path_traces.append(trace)
        self.path_states.append(state)
        try:
            classes: dict[int, list[int]] = {}
            for i, c in enumerate(ccol):
                classes.setdefault(c, []).append(i)
            target = None
            for c in sorted(classes):
                if len(classes[c]) > 1:
                    if target is None or len(classes[c]) < len(classes[target]):
                        target = c
            if target is None:
                cert, labeling = self._leaf_cert(ccol)
                if (
                    self.best_cert is None
                    or state == _LT
                    or cert < self.best_cert
                ):
                    self.best_cert = cert
                    self.best_labeling = labeling
                    self.best_traces = list(self.path_traces)
                    for d in range(len(self.path_states)):
                        self.path_states[d] = _EQ
                elif cert == self.best_cert:
                    self._try_automorphism(labeling)
                return
            done: set[int] = set()
            for v in classes[target]:
                if done and v in self._orbit_of(done):
                    continue
                # individualize v: rank (color, tag) so v precedes its old classmates
                child = _rank([(ccol[i], 0 if i == v else 1) for i in range(self.n)])[0]
                self.prefix.append(v)
                self._node(child, depth + 1)
                self.prefix.pop()
                done.add(v)
        finally:
            self.path_traces.pop()
            self.path_states.pop()

    def run(self) -> CanonResult:
        self._node(list(self.ccol0), 0)
        assert self.best_cert is not None and self.best_labeling is not None
        order = group_order(self.auts, self.n)
        return CanonResult(
            cert=self.best_cert,
            labeling=self.best_labeling,
            generators=list(self.auts),
            aut_order=order,
        )


def canonize_incidence(
    n: int,
    words: Sequence[int],
    word_colors: Sequence[int] | None = None,
    coord_colors: Sequence[int] | None = None,
) -> CanonResult:
    """Canonize a colored word multiset under color-preserving coordinate permutations."""
    if word_colors is None:
        word_colors = [0] * len(words)
    if coord_colors is None:
        coord_colors = [0] * n
    if len(coord_colors) != n:
        raise ValueError("coordinate coloring has wrong length")
    if len(word_colors) != len(words):
        raise ValueError("word coloring has wrong length")
    return _Search(n, words, word_colors, coord_colors).run()


def refinement_trace(
    n: int,
    words: Sequence[int],
    word_colors: Sequence[int] | None = None,
    coord_colors: Sequence[int] | None = None,
) -> bytes:
    """Trace of the refinement-only pass; an invariant cheaper than full canonization."""
    if word_colors is None:
        word_colors = [0] * len(words)
    if coord_colors is None:
        coord_colors = [0] * n
    s = _Search(n, words, word_colors, coord_colors)
    _, _, trace = s.refine(list(s.ccol0))
    return trace


# -- permutation group order ------------------------------------------------


def _compose(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """(a o b)[i] = a[b[i]]."""
    return tuple(a[j] for j in b)


def _inverse(a: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(a)
    for i, ai in enumerate(a):
        inv[ai] = i
    return tuple(inv)


def group_order(gens: Iterable[Sequence[int]], n: int) -> int:
    """Exact order of the permutation group generated by gens (degree n)."""
    ident = tuple(range(n))
    gen_set = [tuple(g) for g in gens]
    gen_set = [g for g in gen_set if g != ident]
    if not gen_set:
        return 1
    b = min(i for g in gen_set for i in range(n) if g[i] != i)
    orbit: dict[int, tuple[int, ...]] = {b: ident}
    queue = [b]
    while queue:
        x = queue.pop()
        ux = orbit[x]
        for g in gen_set:
            y = g[x]
            if y not in orbit:
                orbit[y] = _compose(g, ux)
                queue.append(y)
    stab: set[tuple[int, ...]] = set()
    for x, ux in orbit.items():
        for g in gen_set:
            uy_inv = _inverse(orbit[g[x]])
            s = _compose(uy_inv, _compose(g, ux))
            if s != ident:
                stab.add(s)
    return len(orbit) * group_order(stab, n)


def permutation_orbits(gens: Iterable[Sequence[int]], n: int) -> list[list[int]]:
    """Orbits of points 0..n-1 under the generated group."""
    gen_set = [tuple(g) for g in gens]
    seen = [False] * n
    orbits = []
    for start in range(n):
        if seen[start]:
            continue
        orb = [start]
        seen[start] = True
        queue = [start]
        while queue:
            x = queue.pop()
            for g in gen_set:
                y = g[x]
                if not seen[y]:
                    seen[y] = True
                    orb.append(y)
                    queue.append(y)
        orbits.append(sorted(orb))
    return orbits
