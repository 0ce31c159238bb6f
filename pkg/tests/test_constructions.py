import random
from itertools import combinations

import pytest

from sqdepth.constructions import (
    InapplicableQuestion, c_meets_w, check_theorem_hypotheses, degree_up_count, derive_sets,
    family_ideal, gamma_analysis, gcd_family, is_pathological, lemma_l4_check, lcm_pairs,
    pathologize, question_hypothesis, questionize,
)
from sqdepth.corpus import generate_instance, mono, paper_example
from sqdepth.monomials import Instance, InstanceError

E2_F = [mono(1, 2), mono(1, 3), mono(1, 4), mono(2, 3), mono(3, 5)]


def test_e2_sets():
    ds = derive_sets(paper_example("e2").instance)
    assert list(ds.B) == [mono(1, 2, 3), mono(1, 2, 4), mono(1, 3, 4), mono(1, 3, 5), mono(2, 3, 5)]
    assert ds.s == 5 and len(ds.W) == 10


def test_e_B_size():
    assert derive_sets(paper_example("e").instance).s == 27


def test_single_generator():
    inst = Instance.from_lists(4, [[1, 2]], [[1, 2, 3]])
    ds = derive_sets(inst)
    assert ds.W == () and list(ds.B) == [mono(1, 2, 4)]


def test_set_invariants():
    for seed in range(30):
        inst, _ = generate_instance(6, 2, 4, seed, "generic")
        ds = derive_sets(inst)
        I, J = inst.I, inst.J
        for b in ds.B:
            assert b.degree == inst.d + 1 and I.contains_mask(b.mask) and not J.contains_mask(b.mask)
        for c in ds.C:
            assert c.degree == inst.d + 2 and I.contains_mask(c.mask) and not J.contains_mask(c.mask)
        assert len(ds.W) == inst.r * (inst.r - 1) // 2
        for (i, j), w in ds.W:
            assert w.mask == inst.F[i - 1].mask | inst.F[j - 1].mask
        assert set(ds.C3) <= set(ds.C)


def test_pathological_flags():
    assert is_pathological(paper_example("e2").instance)
    assert not is_pathological(paper_example("e4").instance)
    # r = 1 and B inside (f1) empty: vacuous
    assert is_pathological(Instance.from_lists(3, [[1, 2]], [[1, 2, 3]]))


def test_hypotheses():
    assert check_theorem_hypotheses(pathologize(E2_F, 5)).theorem_applicable
    assert not check_theorem_hypotheses(paper_example("e4").instance).pathological
    # w = x1x2x3x4 has degree d+2 and is left out of J, so it stays in C
    inst = Instance.from_lists(5, [[1, 2], [3, 4]], [[1, 2, 5], [3, 4, 5]])
    h = check_theorem_hypotheses(inst)
    assert not h.c_w_empty and any("x1*x2*x3*x4" in note for note in h.notes)


def test_gcd_family_examples():
    ex = paper_example("e2")
    fam = gcd_family(ex.instance)
    assert fam.u == (mono(1), mono(2), mono(3))
    assert fam.U == (frozenset({1, 2, 3}), frozenset({1, 4}), frozenset({2, 4, 5}))
    e = paper_example("e")
    fam = gcd_family(e.instance)
    labels = {u: {lab for lab, m in e.labels.items() if e.instance.F.index(m) + 1 in U}
              for u, U in zip(fam.u, fam.U)}
    assert labels[mono(12)] == {f"f{k}" for k in range(1, 7)}
    assert labels[mono(6)] == {f"f{k}" for k in range(6, 12)}
    assert gcd_family(paper_example("e3").instance).e == 5


def test_family_pairwise_meet():
    for seed in range(40):
        inst, _ = generate_instance(7, 3, 5, seed, "generic")
        fam = gcd_family(inst)
        for a, b in combinations(fam.U, 2):
            assert len(a & b) <= 1
        for u, U in zip(fam.u, fam.U):
            assert u.degree == inst.d - 1 and len(U) >= 2


def test_l4_examples():
    assert lemma_l4_check(paper_example("e").instance) == (True, True)
    premise, _ = lemma_l4_check(paper_example("e3").instance)
    assert not premise


def test_pathologize_e2():
    inst = pathologize(E2_F, 5)
    assert inst.J == paper_example("e2").instance.J


def test_pathologize_small():
    inst = pathologize([mono(1, 2)], 4)
    assert derive_sets(inst).B == ()
    inst = pathologize([mono(1, 2), mono(3, 4)], 4)
    assert [w for _, w in lcm_pairs(inst.F)] == [mono(1, 2, 3, 4)]
    with pytest.raises(InstanceError):
        pathologize([mono(1, 2), mono(1, 2, 3)], 4)


def test_pathologize_property():
    rng = random.Random(3)
    for _ in range(40):
        n = rng.randint(4, 7)
        d = rng.randint(1, 3)
        pool = [sum(1 << t for t in c) for c in combinations(range(n), d)]
        F = [mono(*(t + 1 for t in range(n) if m >> t & 1)) for m in rng.sample(pool, min(len(pool), rng.randint(1, 5)))]
        try:
            inst = pathologize(F, n)
        except InstanceError:
            continue
        assert check_theorem_hypotheses(inst).theorem_applicable


def test_question_hypothesis():
    assert question_hypothesis(paper_example("e2").instance, 1)
    assert not question_hypothesis(paper_example("e4").instance, 1)
    with pytest.raises(InapplicableQuestion):
        question_hypothesis(paper_example("e2").instance, 5)
    inst = Instance.from_lists(2, [[1], [2]], [[1, 2]])
    assert question_hypothesis(inst, 1)  # nothing of degree 2 survives
    for i in (1, 2):
        inst = questionize(E2_F, 5, i)
        assert question_hypothesis(inst, i)


def test_gamma_analysis_counts():
    checked = 0
    for seed in range(80):
        inst, _ = generate_instance(6, 2, 5, seed, "pathological")
        fam = gcd_family(inst)
        for k, Ue in enumerate(fam.U):
            for r_idx in sorted(Ue):
                iprime = family_ideal(inst, Ue - {r_idx})
                g = gamma_analysis(inst, r_idx, iprime)
                assert g.family == k or r_idx in fam.U[g.family]
                assert g.gamma <= frozenset(range(1, inst.n + 1))
                if not g.A:
                    assert not g.gamma
                fr = inst.F[r_idx - 1].mask
                strict = gamma_analysis(inst, r_idx, iprime, exclude_fr_families=True)
                for cls in strict.classes:
                    assert len({fr | inst.F[t - 1].mask for t in cls}) == 1
                if len(strict.classes) == 1:
                    assert len(strict.gamma) <= 1
                checked += 1
                # degree-up count is never below |Gamma|
                assert degree_up_count(inst, r_idx, iprime) >= len(g.gamma)
    assert checked > 50


def test_gamma_plain_relation_can_merge_distinct_lcms():
    # f1=x1x6, f4=x3x6, f5=x4x6 share x6; with f_r = f4 and U_e = {x2x3, x3x6}
    # the plain relation merges f1 and f5 although w_41 != w_45
    inst = generate_instance(6, 2, 5, 1, "pathological")[0]
    assert [str(f) for f in inst.F] == ["x1*x6", "x2*x3", "x2*x4", "x3*x6", "x4*x6"]
    iprime = family_ideal(inst, {2})
    plain = gamma_analysis(inst, 4, iprime)
    strict = gamma_analysis(inst, 4, iprime, exclude_fr_families=True)
    assert len(plain.classes) == 1 and len(plain.gamma) == 2
    assert len(strict.classes) == 2 and strict.gamma == plain.gamma


def test_c_meets_w_agrees_with_flag():
    for seed in range(30):
        inst, _ = generate_instance(6, 2, 4, seed, "generic")
        assert (not c_meets_w(inst)) == check_theorem_hypotheses(inst).c_w_empty
