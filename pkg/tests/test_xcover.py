from itertools import combinations

import numpy as np
import pytest

from oa_forge.xcover import (
    CoverInstance,
    CoverSolution,
    count_all,
    format_instance,
    parse_instance,
    solve_all,
)

RNG = np.random.default_rng(7)


def brute_force_count(inst: CoverInstance) -> list[tuple[int, ...]]:
    sols = []
    for r in range(inst.n_blocks + 1):
        for combo in combinations(range(inst.n_blocks), r):
            if inst.verify(CoverSolution(combo)):
                sols.append(combo)
    return sols


def collect(inst: CoverInstance) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    solve_all(inst, lambda s: out.append(s.chosen))
    return out


def test_two_blocks_one_item():
    inst = CoverInstance.build({"a": 1}, [("B1", ["a"]), ("B2", ["a"])])
    sols = collect(inst)
    assert len(sols) == 2
    assert sorted(sols) == [(0,), (1,)]


def test_multiplicity_two():
    inst = CoverInstance.build(
        {"a": 2, "b": 1},
        [("B1", ["a", "b"]), ("B2", ["a"]), ("B3", ["b"])],
    )
    sols = collect(inst)
    assert sols == [(0, 1)]
    assert [tuple(sorted(s)) for s in brute_force_count(inst)] == [(0, 1)]


def test_empty_instance_has_empty_solution():
    inst = CoverInstance.build({}, [])
    assert count_all(inst) == 1


def test_unsatisfiable_item():
    inst = CoverInstance.build({"a": 1}, [])
    assert inst.infeasible
    assert count_all(inst) == 0


def test_alpha_zero_prunes_blocks():
    inst = CoverInstance.build(
        {"a": 0, "b": 1},
        [("B1", ["a", "b"]), ("B2", ["b"])],
    )
    # B1 touches the forbidden item and is discarded at build time
    assert inst.n_blocks == 1
    assert collect(inst) == [(0,)]


def test_weighted_incidence():
    # one block covering item a twice
    inst = CoverInstance.build({"a": 2}, [("B1", ["a", "a"]), ("B2", ["a"])])
    sols = collect(inst)
    assert sols == [(0,)]


def test_undeclared_item_rejected():
    with pytest.raises(ValueError):
        CoverInstance.build({"a": 1}, [("B1", ["a", "zz"])])


def random_instance(n_items: int, n_blocks: int) -> CoverInstance:
    items = {f"i{u}": int(RNG.integers(0, 3)) for u in range(n_items)}
    blocks = []
    for j in range(n_blocks):
        k = int(RNG.integers(1, min(4, n_items) + 1))
        ids = RNG.choice(n_items, size=k, replace=False)
        blocks.append((f"b{j:02d}", [f"i{u}" for u in ids]))
    return CoverInstance.build(items, blocks)


@pytest.mark.parametrize("trial", range(60))
def test_random_instances_match_brute_force(trial):
    n_items = int(RNG.integers(1, 7))
    n_blocks = int(RNG.integers(0, 13))
    inst = random_instance(n_items, n_blocks)
    sols = collect(inst)
    brute = [tuple(sorted(c)) for c in brute_force_count(inst)]
    assert sorted(sols) == sorted(brute)
    assert count_all(inst) == len(brute)
    for s in sols:
        assert inst.verify(CoverSolution(s))


def test_determinism():
    inst = random_instance(6, 12)
    assert collect(inst) == collect(inst)


def test_text_format_roundtrip():
    inst = CoverInstance.build(
        {"a": 2, "b": 1},
        [("B1", ["a", "b"]), ("B2", ["a", "a"]), ("B3", ["b"])],
    )
    text = format_instance(inst)
    inst2 = parse_instance(text)
    assert inst2.alpha == inst.alpha
    assert inst2.blocks == inst.blocks
    assert count_all(inst2) == count_all(inst)


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_instance("item a\n")
    with pytest.raises(ValueError):
        parse_instance("frobnicate a b\n")
