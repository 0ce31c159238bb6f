import random

import pytest

from sqdepth.corpus import generate_instance, mono, paper_example
from sqdepth.monomials import Instance, MonomialIdeal
from sqdepth.stanley import (
    IntervalPartition, brute_force_sdepth, build_poset, poset_from_masks, sdepth,
    sdepth_decision, verify_partition,
)


def small_posets(count, seed=0, limit=12):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(2, 5)
        top = MonomialIdeal.from_masks(n, [rng.randrange(1, 1 << n) for _ in range(rng.randint(1, 3))])
        bot = MonomialIdeal.from_masks(n, [m | rng.randrange(1 << n) for m in top.masks
                                           for _ in range(rng.randint(0, 2))])
        masks = [m for m in range(1 << n) if top.contains_mask(m) and not bot.contains_mask(m)]
        if 0 < len(masks) <= limit:
            out.append(poset_from_masks(masks))
    return out


def test_e2_poset():
    p = build_poset(paper_example("e2").instance)
    assert len(p) == 10
    res = sdepth(p)
    assert res.exact and res.value == brute_force_sdepth(p) == 3
    assert not sdepth_decision(p, res.value + 1)
    assert verify_partition(p, res.certificate, res.value).ok


def test_trivial_posets():
    p = build_poset(Instance.from_lists(2, [[1]], [[1, 2]]))
    assert p.elements == [mono(1)]
    assert sdepth(p).value == 1 and brute_force_sdepth(p) == 1
    chain = poset_from_masks([0b1, 0b11])
    assert brute_force_sdepth(chain) == 2 == sdepth(chain).value
    empty = poset_from_masks([])
    assert sdepth_decision(empty, 7)


def test_not_interval_closed():
    with pytest.raises(AssertionError):
        poset_from_masks([0b1, 0b111])


def test_singleton_partition():
    p = build_poset(paper_example("e2").instance)
    part = IntervalPartition.from_masks((m, m) for m in p.masks)
    assert verify_partition(p, part, 2).ok
    assert not verify_partition(p, part, 3).ok


def test_overlap_reported():
    p = build_poset(paper_example("e2").instance)
    part = IntervalPartition.from_masks([(0b11, 0b111), (0b111, 0b111)])
    v = verify_partition(p, part, 2)
    assert not v.disjoint and any("overlap at x1*x2*x3" in d for d in v.diagnostics)


def test_invalid_interval():
    p = build_poset(paper_example("e2").instance)
    v = verify_partition(p, IntervalPartition.from_masks([(0b11, 0b10011)]), 2)
    assert not v.valid_intervals


def test_oracle_equivalence():
    for p in small_posets(80, seed=1):
        res = sdepth(p)
        assert res.exact
        assert res.value == brute_force_sdepth(p) == sdepth(p, exact_tops=False).value
        assert verify_partition(p, res.certificate, res.value).ok


def test_budget_timeout():
    p = build_poset(paper_example("e").instance)
    d = sdepth_decision(p, 4, budget=3)
    assert d.status == "timeout" and not d
    res = sdepth(p, budget=3)
    assert res.timed_out and res.value == 2


def test_sdepth_at_least_depth_on_small_pathological():
    from sqdepth.homology import depth_of
    for seed in range(15):
        inst, _ = generate_instance(5, 2, 4, seed, "pathological")
        res = sdepth(build_poset(inst))
        assert res.exact and res.value >= depth_of(inst)
