import numpy as np
import pytest

from oa_forge.cube import (
    SpectrumVector,
    VertexSet,
    Word,
    all_ones,
    apply_coord_perm,
    flip_index,
    format_word,
    neighbor_ints,
    neighbors,
    parse_word,
    pattern_counts,
    subcube_count,
    walsh_hadamard,
    weight_table,
    xor_convolve,
)

RNG = np.random.default_rng(20240811)


def test_word_invariants():
    w = Word(0b101, 3)
    assert w.weight == 2
    assert w.coord(1) == 1 and w.coord(2) == 0 and w.coord(3) == 1
    with pytest.raises(ValueError):
        Word(8, 3)
    with pytest.raises(ValueError):
        Word(0, 0)


def test_word_format_roundtrip():
    assert format_word(0b001, 3) == "100"
    assert parse_word("100") == 0b001
    for _ in range(50):
        n = int(RNG.integers(1, 16))
        bits = int(RNG.integers(0, 1 << n))
        assert parse_word(format_word(bits, n)) == bits


def test_neighbors_basic():
    ws = neighbors(Word(0, 3))
    assert [w.bits for w in ws] == [0b001, 0b010, 0b100]
    assert [w.bits for w in neighbors(Word(0, 1))] == [1]
    deg13 = neighbors(Word(0, 13))
    assert len(deg13) == 13
    assert all(w.weight == 1 for w in deg13)


def test_neighbors_symmetry():
    n = 6
    for _ in range(100):
        u = int(RNG.integers(0, 1 << n))
        w = int(RNG.integers(0, 1 << n))
        assert (w in neighbor_ints(u, n)) == (u in neighbor_ints(w, n))


def test_walsh_hadamard_small_examples():
    f = [0] * 4
    f[0b00] = 1
    f[0b11] = 1
    assert walsh_hadamard(f).coef.tolist() == [2, 0, 0, 2]
    assert walsh_hadamard([1, 1, 1, 1]).coef.tolist() == [4, 0, 0, 0]
    with pytest.raises(ValueError):
        walsh_hadamard([1, 2, 3])


@pytest.mark.parametrize("n", range(1, 11))
def test_walsh_hadamard_involution_parseval_linearity(n):
    for _ in range(max(4, 100 // (n + 1))):
        f = RNG.integers(-8, 9, size=1 << n).astype(np.int64)
        g = RNG.integers(-8, 9, size=1 << n).astype(np.int64)
        tf = walsh_hadamard(f)
        # involution: transforming twice scales by 2**n
        assert (walsh_hadamard(tf.coef).coef == f * (1 << n)).all()
        # Parseval
        assert (tf.coef**2).sum() == (1 << n) * (f**2).sum()
        # linearity
        assert (
            walsh_hadamard(f + g).coef == tf.coef + walsh_hadamard(g).coef
        ).all()


def test_walsh_hadamard_matches_direct_definition():
    n = 5
    f = RNG.integers(-5, 6, size=1 << n).astype(np.int64)
    coef = walsh_hadamard(f).coef
    for y in range(1 << n):
        direct = sum(
            int(f[x]) * (-1) ** ((x & y).bit_count()) for x in range(1 << n)
        )
        assert coef[y] == direct


def test_vertex_set_size_tracking():
    s = VertexSet(4)
    for w in [3, 3, 7, 0]:
        s.add(w)
    assert s.size == 4 == s.recount()
    assert not s.simple
    s.discard(3)
    assert s.size == 3 == s.recount()
    assert 3 in s and 7 in s and 1 not in s


def test_vertex_set_complement():
    s = VertexSet.from_words(3, [0, 7])
    c = s.complement()
    assert c.size == 6
    assert c.complement() == s
    s.add(0)
    with pytest.raises(ValueError):
        s.complement()


def test_vertex_set_dense_gate():
    with pytest.raises(ValueError):
        VertexSet(26)


def test_translate_and_permute():
    s = VertexSet.from_words(3, [0b001, 0b011])
    t = s.translate(0b001)
    assert sorted(t.words()) == [0b000, 0b010]
    p = s.permute_coords([2, 1, 3])  # swap coordinates 1 and 2
    assert sorted(p.words()) == [0b010, 0b011]
    assert apply_coord_perm(0b001, [2, 1, 3]) == 0b010


def test_subcube_count_examples():
    full = VertexSet.full_cube(3)
    assert subcube_count(full, [1], 0) == 4
    assert subcube_count(VertexSet(3), [2], 1) == 0


@pytest.mark.parametrize("n", [3, 5, 8])
def test_subcube_count_sums_to_size(n):
    for _ in range(20):
        mult = RNG.integers(0, 3, size=1 << n).astype(np.int64)
        s = VertexSet(n, mult)
        k = int(RNG.integers(1, n + 1))
        coords = sorted(RNG.choice(np.arange(1, n + 1), size=k, replace=False).tolist())
        total = 0
        for pat in range(1 << k):
            fixed = 0
            for j, i in enumerate(coords):
                if pat >> j & 1:
                    fixed |= 1 << (i - 1)
            total += subcube_count(s, coords, fixed)
        assert total == s.size
        assert pattern_counts(s, coords).sum() == s.size


def test_xor_convolve_matches_brute_force():
    n = 4
    f = RNG.integers(0, 4, size=1 << n).astype(np.int64)
    g = RNG.integers(0, 4, size=1 << n).astype(np.int64)
    h = xor_convolve(f, g)
    for u in range(1 << n):
        assert h[u] == sum(int(f[x]) * int(g[u ^ x]) for x in range(1 << n))


def test_weight_table_and_flip_index():
    n = 6
    wt = weight_table(n)
    assert wt[0] == 0 and wt[all_ones(n)] == n
    idx = flip_index(n, 2)
    assert idx[0] == 0b100
    assert (idx[idx] == np.arange(1 << n)).all()


def test_spectrum_vector_validation():
    with pytest.raises(ValueError):
        SpectrumVector(3, np.zeros(4, dtype=np.int64))
