"""Canonical forms, equivalence tests and automorphism groups for vertex sets.

Three symmetry regimes are supported:

* ``coord_perm``: the n! coordinate permutations;
* ``coord_perm_fix_first``: the (n-1)! permutations fixing coordinate 1;
* ``full_aut``: the full automorphism group of Q_n, translations composed
  with coordinate permutations, of order 2**n * n!.

Under the coordinate-permutation regimes a set is canonized directly as a
coordinate-incidence structure (see :mod:`oa_forge._engine`).  Under
``full_aut`` the key minimizes the coordinate-permutation certificate over an
invariantly selected class of translates: the translate classes are ordered
by (class size, distance-distribution vector, refinement trace) and only the
minimal class is searched.  Every element of the full group factors as
x -> pi(x) + v, so the stabilizer of a set C decomposes along the orbit of
the zero word: |Aut(C)| = |K| * |Aut_perm(C)| with
K = { w : C + w is coordinate-equivalent to C }.

Keys embed the dimension, the group kind and an encoding version, and
serialize as lowercase hex.
"""

from __future__ import annotations

import hashlib
import math
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from oa_forge import _engine
from oa_forge.cube import VertexSet, walsh_hadamard, weight_table, xor_convolve

_ENCODING_VERSION = 1

FULL_AUT = "full_aut"
COORD_PERM = "coord_perm"
COORD_PERM_FIX_FIRST = "coord_perm_fix_first"

_KIND_BYTE = {FULL_AUT: b"F", COORD_PERM: b"P", COORD_PERM_FIX_FIRST: b"X"}


@dataclass(frozen=True)
class SymmetryGroup:
    """A declared symmetry regime over Q_n."""

    kind: str
    n: int

    def __post_init__(self) -> None:
        if self.kind not in _KIND_BYTE:
            raise ValueError(f"unknown group kind {self.kind!r}")

    def order(self) -> int:
        if self.kind == FULL_AUT:
            return (1 << self.n) * math.factorial(self.n)
        if self.kind == COORD_PERM:
            return math.factorial(self.n)
        return math.factorial(self.n - 1)

    @classmethod
    def full_aut(cls, n: int) -> "SymmetryGroup":
        return cls(FULL_AUT, n)

    @classmethod
    def coord_perm(cls, n: int) -> "SymmetryGroup":
        return cls(COORD_PERM, n)

    @classmethod
    def coord_perm_fix_first(cls, n: int) -> "SymmetryGroup":
        return cls(COORD_PERM_FIX_FIRST, n)


@dataclass(frozen=True)
class CanonicalKey:
    """Opaque canonical key; equal keys mean equivalent objects."""

    data: bytes

    @property
    def hex(self) -> str:
        return self.data.hex()

    def __str__(self) -> str:
        return self.hex


def _key_from_cert(group: SymmetryGroup, cert: bytes, extra: bytes = b"") -> CanonicalKey:
    header = (
        b"OAF"
        + bytes([_ENCODING_VERSION])
        + _KIND_BYTE[group.kind]
        + bytes([group.n])
        + extra
    )
    return CanonicalKey(header + hashlib.sha256(cert).digest())


def _coord_colors(group: SymmetryGroup) -> list[int]:
    cc = [0] * group.n
    if group.kind == COORD_PERM_FIX_FIRST:
        cc[0] = 1
    return cc


def _set_words_colors(s: VertexSet) -> tuple[list[int], list[int]]:
    words = np.flatnonzero(s.mult)
    return words.tolist(), s.mult[words].tolist()


def canonize_set_coordperm(s: VertexSet, group: SymmetryGroup) -> _engine.CanonResult:
    words, colors = _set_words_colors(s)
    return _engine.canonize_incidence(s.n, words, colors, _coord_colors(group))


# -- translate selection for the full group ----------------------------------


def distance_distributions(s: VertexSet) -> np.ndarray:
    """Row u holds the distances histogram from u to the multiset; shape (2**n, n+1)."""
    n = s.n
    wt = weight_table(n)
    rows = np.empty((1 << n, n + 1), dtype=np.int64)
    for d in range(n + 1):
        sphere = (wt == d).astype(np.int64)
        rows[:, d] = xor_convolve(s.mult, sphere)
    return rows


def translate_invariant_classes(s: VertexSet) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Group all 2**n translates of s by a permutation-invariant profile.

    The profile of a translate s+u combines its weight distribution with the
    sorted per-coordinate weight profiles (for each coordinate i, the weight
    histogram of the members of s+u having a one at i), all obtained from
    batched XOR convolutions.  Returns (labels, counts, keys) where labels[u]
    is the class id of u, counts the class sizes, and keys[c] the class
    profile bytes (usable as an invariant total order on classes).
    """
    n = s.n
    wt = weight_table(n)
    fh = walsh_hadamard(s.mult).coef
    rows = np.empty((1 << n, n + 1), dtype=np.int64)
    prof = np.empty((1 << n, n, n + 1), dtype=np.int64)
    for d in range(n + 1):
        sphere = (wt == d).astype(np.int64)
        gh = walsh_hadamard(sphere).coef
        rows[:, d] = walsh_hadamard(fh * gh).coef >> n
        for i in range(n):
            gi = sphere * ((np.arange(1 << n) >> i) & 1)
            gih = walsh_hadamard(gi.astype(np.int64)).coef
            prof[:, i, d] = walsh_hadamard(fh * gih).coef >> n
    # rank the (n+1)-vectors, then sort each translate's coordinate profile ranks
    flat = prof.reshape(-1, n + 1)
    _, inv = np.unique(flat, axis=0, return_inverse=True)
    ranks = np.sort(inv.reshape(1 << n, n), axis=1)
    combined = np.concatenate([rows, ranks], axis=1)
    uniq, labels, counts = np.unique(
        combined, axis=0, return_inverse=True, return_counts=True
    )
    keys = np.array([row.tobytes() for row in uniq], dtype=object)
    return labels.ravel(), counts, keys


def _minimal_translate_class(s: VertexSet) -> list[int]:
    """Translates u in the invariantly minimal profile class (smallest, then lowest key)."""
    labels, counts, keys = translate_invariant_classes(s)
    best = min(range(len(counts)), key=lambda c: (int(counts[c]), keys[c]))
    return np.flatnonzero(labels == best).tolist()


def _translate_fingerprint(s: VertexSet, u: int) -> bytes:
    table = s.mult[np.arange(1 << s.n, dtype=np.intp) ^ u]
    return hashlib.blake2b(table.tobytes(), digest_size=16).digest()


def _full_aut_cert(s: VertexSet) -> bytes:
    """Minimal coordinate-permutation certificate over the selected translate class."""
    if s.size == 0:
        return b"empty"
    candidates = _minimal_translate_class(s)
    perm_group = SymmetryGroup.coord_perm(s.n)
    # distinct translate sets only
    by_fp: dict[bytes, int] = {}
    for u in candidates:
        fp = _translate_fingerprint(s, u)
        by_fp.setdefault(fp, u)
    reps = sorted(by_fp.values())
    # second-stage invariant: refinement trace
    traces: dict[int, bytes] = {}
    for u in reps:
        t = s.translate(u)
        words, colors = _set_words_colors(t)
        traces[u] = _engine.refinement_trace(s.n, words, colors, _coord_colors(perm_group))
    tmin = min(traces.values())
    best: bytes | None = None
    for u in reps:
        if traces[u] != tmin:
            continue
        cert = canonize_set_coordperm(s.translate(u), perm_group).cert
        if best is None or cert < best:
            best = cert
    assert best is not None
    return best


# -- cache --------------------------------------------------------------------


_memo: dict[tuple, CanonicalKey] = {}


def _cache_lookup(tag: tuple) -> CanonicalKey | None:
    if tag in _memo:
        return _memo[tag]
    root = os.environ.get("OA_FORGE_CACHE")
    if root:
        path = os.path.join(root, tag[-1].hex() if isinstance(tag[-1], bytes) else str(tag[-1]))
        if os.path.exists(path):
            with open(path, "rb") as fh:
                key = CanonicalKey(bytes.fromhex(fh.read().decode().strip()))
            _memo[tag] = key
            return key
    return None


def _cache_store(tag: tuple, key: CanonicalKey) -> None:
    _memo[tag] = key
    root = os.environ.get("OA_FORGE_CACHE")
    if root:
        os.makedirs(root, exist_ok=True)
        path = os.path.join(root, tag[-1].hex() if isinstance(tag[-1], bytes) else str(tag[-1]))
        with open(path, "w") as fh:
            fh.write(key.hex)


# -- public api ---------------------------------------------------------------


def canonical_form(obj, group: SymmetryGroup) -> CanonicalKey:
    """Canonical key of a VertexSet (or local partition) under the declared group."""
    if isinstance(obj, VertexSet):
        if obj.n != group.n:
            raise ValueError(f"dimension mismatch: set has n={obj.n}, group n={group.n}")
        if group.kind == FULL_AUT:
            tag = (
                group.kind,
                group.n,
                hashlib.blake2b(obj.mult.tobytes(), digest_size=16).digest(),
            )
            hit = _cache_lookup(tag)
            if hit is not None:
                return hit
            key = _key_from_cert(group, _full_aut_cert(obj))
            _cache_store(tag, key)
            return key
        return _key_from_cert(group, canonize_set_coordperm(obj, group).cert)
    # local partitions canonize only under the first-coordinate stabilizer
    if hasattr(obj, "p_plus_words") and hasattr(obj, "r0"):
        if group.kind != COORD_PERM_FIX_FIRST:
            raise ValueError("local partitions are canonized under coord_perm_fix_first only")
        if obj.n != group.n:
            raise ValueError("dimension mismatch")
        return local_partition_key(obj.n, obj.r0, obj.r1, obj.p_plus_words)
    raise TypeError(f"cannot canonize object of type {type(obj).__name__}")


def local_partition_key(
    n: int, r0: int, r1: int, p_plus_words: Sequence[int]
) -> CanonicalKey:
    """Key of an (r0, r1)-local partition; the level is embedded in the key."""
    res = _engine.canonize_incidence(
        n, list(p_plus_words), None, [1] + [0] * (n - 1)
    )
    group = SymmetryGroup.coord_perm_fix_first(n)
    return _key_from_cert(group, res.cert, extra=bytes([r0, r1]))


def local_partition_canon(
    n: int, p_plus_words: Sequence[int]
) -> _engine.CanonResult:
    """Raw canonization result (certificate, generators, stabilizer order)."""
    return _engine.canonize_incidence(n, list(p_plus_words), None, [1] + [0] * (n - 1))


def are_equivalent(a: VertexSet, b: VertexSet, group: SymmetryGroup) -> bool:
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")
    if a.size != b.size:
        return False
    return canonical_form(a, group) == canonical_form(b, group)


@dataclass
class AutGroupReport:
    """Exact stabilizer data of a vertex set under a declared group.

    Generators are (coordinate permutation, translation) pairs: the element
    maps x to pi(x) + v where pi is given 1-based (pi[i-1] is the image of
    coordinate i).
    """

    group: SymmetryGroup
    order: int
    generators: list[tuple[tuple[int, ...], int]]
    orbits_on_set: list[list[int]]
    orbits_on_complement: list[list[int]]

    @property
    def orbit_sizes_on_set(self) -> list[int]:
        return sorted(len(o) for o in self.orbits_on_set)

    @property
    def orbit_sizes_on_complement(self) -> list[int]:
        return sorted(len(o) for o in self.orbits_on_complement)

    def coordinate_orbits(self) -> list[list[int]]:
        """Orbits of the 1-based coordinates under the permutation parts."""
        perms0 = [tuple(p - 1 for p in perm) for perm, _ in self.generators]
        n = self.group.n
        return [[i + 1 for i in orb] for orb in _engine.permutation_orbits(perms0, n)]


def _word_action(n: int, perm0: tuple[int, ...], v: int) -> np.ndarray:
    """Dense action table x -> pi(x) ^ v for a 0-based coordinate permutation."""
    arr = np.arange(1 << n, dtype=np.intp)
    out = np.zeros(1 << n, dtype=np.intp)
    for i, pi in enumerate(perm0):
        out |= ((arr >> i) & 1) << pi
    return out ^ v


def _orbits_under(n: int, actions: list[np.ndarray], mask: np.ndarray) -> list[list[int]]:
    visited = np.zeros(1 << n, dtype=bool)
    orbits = []
    for start in np.flatnonzero(mask):
        if visited[start]:
            continue
        visited[start] = True
        frontier = np.array([start], dtype=np.intp)
        members = [int(start)]
        while frontier.size:
            if actions:
                imgs = np.unique(np.concatenate([a[frontier] for a in actions]))
            else:
                imgs = np.empty(0, dtype=np.intp)
            new = imgs[~visited[imgs]]
            visited[new] = True
            members.extend(int(x) for x in new)
            frontier = new
        orbits.append(sorted(members))
    return orbits


def automorphism_group(s: VertexSet, group: SymmetryGroup) -> AutGroupReport:
    """Exact order, generators and orbit decomposition of the stabilizer of s."""
    if not s.simple:
        raise ValueError("automorphism reports require a simple set")
    if s.n != group.n:
        raise ValueError("dimension mismatch")
    n = s.n

    if group.kind in (COORD_PERM, COORD_PERM_FIX_FIRST):
        res = canonize_set_coordperm(s, group)
        gens0 = [tuple(g) for g in res.generators]
        order = res.aut_order
        generators = [(tuple(p + 1 for p in g), 0) for g in gens0]
        actions = [_word_action(n, g, 0) for g in gens0]
    else:
        base = canonize_set_coordperm(s, SymmetryGroup.coord_perm(n))
        stab_gens0 = [tuple(g) for g in base.generators]
        stab_order = base.aut_order
        # candidate translations: those sharing the invariant profile of u = 0
        labels, _, _ = translate_invariant_classes(s)
        cands = np.flatnonzero(labels == labels[0]).tolist()
        by_fp: dict[bytes, list[int]] = {}
        for w in cands:
            by_fp.setdefault(_translate_fingerprint(s, w), []).append(w)
        base_trace = _set_refinement_trace(s, 0)
        translations: list[tuple[int, tuple[int, ...]]] = []
        for ws in by_fp.values():
            if _set_refinement_trace(s, ws[0]) != base_trace:
                continue
            t = s.translate(ws[0])
            res_t = canonize_set_coordperm(t, SymmetryGroup.coord_perm(n))
            if res_t.cert != base.cert:
                continue
            # mediating permutation tau with tau(s + w) = s
            inv_base = [0] * n
            for i, p in enumerate(base.labeling):
                inv_base[p] = i
            tau = tuple(inv_base[res_t.labeling[i]] for i in range(n))
            for w in ws:
                translations.append((w, tau))
        k = len(translations)
        order = k * stab_order
        gens0_full: list[tuple[tuple[int, ...], int]] = [
            (g, 0) for g in stab_gens0
        ]
        for w, tau in translations:
            if w == 0:
                continue
            v = 0
            for i in range(n):
                if w >> i & 1:
                    v |= 1 << tau[i]
            gens0_full.append((tau, v))
        generators = [(tuple(p + 1 for p in g), v) for g, v in gens0_full]
        actions = [_word_action(n, g, v) for g, v in gens0_full]

    # verify every generator stabilizes the set
    for a in actions:
        if not (s.mult[a] == s.mult).all():
            raise AssertionError("reported generator does not stabilize the set")
    if group.order() % order:
        raise AssertionError("stabilizer order does not divide the ambient group order")

    set_mask = s.mult > 0
    orbits_set = _orbits_under(n, actions, set_mask)
    orbits_comp = _orbits_under(n, actions, ~set_mask)
    assert sum(len(o) for o in orbits_set) == int(set_mask.sum())
    return AutGroupReport(
        group=group,
        order=order,
        generators=generators,
        orbits_on_set=orbits_set,
        orbits_on_complement=orbits_comp,
    )
