import json

import pytest

from sqdepth.constructions import check_theorem_hypotheses, derive_sets, gcd_family
from sqdepth.corpus import (
    LEMMA_IDS, AuditFailure, audit_example, generate_instance, mono,
    paper_e_partition, paper_example, random_instance, search_question, verify_lemma,
    verify_theorem_t,
)
from sqdepth.monomials import FieldSpec, InstanceError, quotient_monomials


@pytest.mark.parametrize("ex", ["e2", "e4", "e3"])
def test_audits_pass(ex):
    rep = audit_example(ex)
    assert rep.passed and rep.claims


def test_audit_gf2_reports_depths():
    rep = audit_example("e2", FieldSpec(2))
    assert rep.passed
    assert all(c.policy == "report" for c in rep.claims if c.quantity.startswith("depth"))


def test_e2_q_discrepancy_is_reported():
    rep = audit_example("e2")
    q = [c for c in rep.claims if c.quantity == "q=|C|"][0]
    assert q.policy == "report" and q.claimed == 2 and q.computed == 0


def test_e4_witness_list():
    rep = audit_example("e4")
    assert any("x1*x3*x5" in note and "x2*x3*x5" in note for note in rep.notes)


def test_strict_audit_raises(monkeypatch):
    import sqdepth.corpus as corpus

    def broken(ex, rep, field, budget):
        rep.claims.append(corpus.Claim("x", 1, 2, "assert", "forced"))

    monkeypatch.setitem(corpus.audit_example.__globals__, "_audit_e2", broken)
    with pytest.raises(AuditFailure):
        audit_example("e2")


def test_unknown_example():
    with pytest.raises(KeyError):
        paper_example("nope")


def test_printed_partition_shape():
    part = paper_e_partition()
    assert len(part.intervals) == 16
    assert all(v.degree == 4 for _, v in part.intervals)


class TestVerifyLemma:
    def test_d_on_e4(self):
        inst = paper_example("e4").instance
        B = list(derive_sets(inst).B)
        v = verify_lemma(inst, "d", choice=B.index(mono(1, 3, 5)) + 1)
        assert v.status == "holds"

    def test_dprime_on_e2_f5(self):
        ex = paper_example("e2")
        v = verify_lemma(ex.instance, "dprime", choice=ex.gen_index("f5"))
        assert v.status == "holds"

    def test_pr_on_e(self):
        assert verify_lemma(paper_example("e").instance, "pr").status == "holds"

    def test_theorem_on_e2(self):
        assert verify_theorem_t(paper_example("e2").instance).status == "holds"
        assert verify_theorem_t(paper_example("e4").instance).status == "inapplicable"

    @pytest.mark.parametrize("lemma", LEMMA_IDS)
    def test_no_counterexamples(self, lemma):
        for seed in range(12):
            inst, _ = generate_instance(6, 2, 4, seed, "pathological")
            assert verify_lemma(inst, lemma).status in ("holds", "inapplicable")

    def test_unknown_lemma(self):
        with pytest.raises(KeyError):
            verify_lemma(paper_example("e2").instance, "zz")


class TestGeneration:
    def test_pathological_example(self):
        inst = random_instance(5, 2, 5, 1, "pathological")
        assert check_theorem_hypotheses(inst).theorem_applicable

    def test_infeasible(self):
        with pytest.raises(InstanceError) as exc:
            random_instance(4, 2, 7, 0)
        assert exc.value.rule == "infeasible"

    @pytest.mark.parametrize("mode", ["generic", "pathological", "common-generator", "question"])
    def test_deterministic(self, mode):
        assert random_instance(6, 2, 4, 11, mode) == random_instance(6, 2, 4, 11, mode)

    def test_common_generator(self):
        for seed in range(20):
            inst = random_instance(7, 3, 4, seed, "common-generator")
            fam = gcd_family(inst)
            assert fam.e >= 2 and fam.common()

    def test_no_room_rejected(self):
        for seed in range(10):
            inst, _ = generate_instance(5, 2, 3, seed, "generic")
            assert any(m.degree > inst.d for m in quotient_monomials(inst))


class TestSearch:
    def test_records_reproducible(self):
        a = list(search_question(6, 2, 4, 1, range(5)))
        b = list(search_question(6, 2, 4, 1, range(5)))
        assert json.dumps(a) == json.dumps(b)
        assert all(r["status"] == "holds" for r in a if r["hypothesis"])

    def test_theorem_regime(self):
        for rec in search_question(6, 2, 4, 1, range(10), mode="pathological"):
            assert rec["status"] == "holds" and rec["depth"] <= 3

    def test_inapplicable_i(self):
        rec = next(search_question(5, 2, 2, 3, [0]))
        assert rec["status"] == "inapplicable" and "conclusion" not in rec

    def test_timing_opt_in(self):
        rec = next(search_question(5, 2, 3, 1, [0], timing=True))
        assert "seconds" in rec
        assert "seconds" not in next(search_question(5, 2, 3, 1, [0]))
