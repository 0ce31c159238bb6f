"""Worked examples, claim audits, lemma/theorem checks and random campaigns.

Every check returns a :class:`Verdict` whose status is one of
``inapplicable`` (premise not met), ``holds`` or ``counterexample``.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Callable, Iterator, Optional

from .constructions import (
    InapplicableQuestion,
    c_meets_w,
    check_theorem_hypotheses,
    degree_up_count,
    derive_sets,
    family_ideal,
    gamma_analysis,
    gcd_family,
    lemma_l4_check,
    multiples_of_degree,
    pathological_witnesses,
    pathologize,
    question_hypothesis,
    questionize,
)
from .formats import dump_instance, instance_digest
from .homology import depth, depth_mod, depth_of
from .monomials import (
    QQ,
    FieldSpec,
    Instance,
    InstanceError,
    MonomialIdeal,
    SqMonomial,
    ideal_intersect,
    ideal_sum,
    popcount,
    principal,
)
from .stanley import IntervalPartition, build_poset, sdepth, verify_partition

log = logging.getLogger(__name__)

EXAMPLE_IDS = ("e2", "e4", "e", "e3")


def mono(*indices: int) -> SqMonomial:
    return SqMonomial.of(*indices)


@dataclass
class PaperExample:
    id: str
    instance: Instance
    labels: dict[str, SqMonomial]
    description: str

    def gen(self, label: str) -> SqMonomial:
        return self.labels[label]

    def gen_index(self, label: str) -> int:
        """1-based position of a labelled generator in the canonical order."""
        return self.instance.F.index(self.labels[label]) + 1


def _instance(n: int, F: list[SqMonomial], J: list[SqMonomial], char: int = 0) -> Instance:
    return Instance(
        n,
        MonomialIdeal.from_masks(n, (f.mask for f in F)),
        MonomialIdeal.from_masks(n, (g.mask for g in J)),
        FieldSpec(char),
    )


def _e2_gens():
    return [mono(1, 2), mono(1, 3), mono(1, 4), mono(2, 3), mono(3, 5)]


def _e_gens():
    return [mono(12, i) for i in range(1, 7)] + [mono(6, k) for k in range(7, 12)]


def paper_example(id: str, char: int = 0) -> PaperExample:
    if id == "e2":
        F = _e2_gens()
        J = [mono(1, 2, 5), mono(1, 4, 5), mono(2, 3, 4), mono(3, 4, 5)]
        return PaperExample("e2", _instance(5, F, J, char),
                            {f"f{k}": f for k, f in enumerate(F, 1)},
                            "n=5, r=5, d=2; five quadrics and four cubics in J")
    if id == "e4":
        F = _e2_gens()[:4]
        J = [mono(1, 2, 5), mono(1, 4, 5), mono(2, 3, 4)]
        return PaperExample("e4", _instance(5, F, J, char),
                            {f"f{k}": f for k, f in enumerate(F, 1)},
                            "the first four generators of e2 with J' = J cap I'")
    if id == "e":
        F = _e_gens()
        J = [f.mask | 1 << (k - 1) for f in F[:5] for k in range(7, 12)]
        J += [f.mask | 1 << (k - 1) for f in F[6:] for k in range(1, 6)]
        J += [F[5].mask | 1 << (k - 1) for k in range(9, 12)]
        inst = Instance(12, MonomialIdeal.from_masks(12, (f.mask for f in F)),
                        MonomialIdeal.from_masks(12, J), FieldSpec(char))
        return PaperExample("e", inst, {f"f{k}": f for k, f in enumerate(F, 1)},
                            "n=12, r=11, two stars of quadrics glued along x6*x12")
    if id == "e3":
        F = [mono(1, 2), mono(1, 3), mono(1, 4), mono(2, 3), mono(3, 5),
             mono(2, 6), mono(3, 6), mono(4, 6)]
        J = [mono(1, 2, 5), mono(1, 3, 6), mono(1, 4, 5), mono(1, 4, 6), mono(2, 3, 4),
             mono(2, 5, 6), mono(3, 4, 5), mono(3, 5, 6), mono(4, 5, 6)]
        return PaperExample("e3", _instance(6, F, J, char),
                            {f"f{k}": f for k, f in enumerate(F, 1)},
                            "n=6, r=8, d=2; e2 extended by x6")
    raise KeyError(f"unknown example {id!r}; known: {', '.join(EXAMPLE_IDS)}")


def paper_e_partition() -> IntervalPartition:
    """The sixteen intervals printed for example ``e``."""
    f = {k: g for k, g in enumerate(_e_gens(), 1)}

    def w(i, j):
        return SqMonomial(f[i].mask | f[j].mask)

    def times(x, m):
        return SqMonomial(m.mask | 1 << (x - 1))

    tops = {
        1: times(6, w(1, 2)), 2: times(6, w(2, 3)), 3: times(6, w(3, 4)),
        4: times(6, w(4, 5)), 5: times(6, w(1, 5)), 6: times(8, w(6, 7)),
        7: times(9, w(7, 8)), 8: times(10, w(8, 9)), 9: times(11, w(9, 10)),
        10: times(7, w(10, 11)), 11: times(7, w(8, 11)),
    }
    intervals = [(f[i], tops[i]) for i in range(1, 12)]
    intervals += [
        (w(1, 3), times(4, w(1, 3))), (w(1, 4), times(5, w(1, 4))),
        (w(2, 4), times(6, w(2, 4))), (w(2, 5), times(3, w(2, 5))),
        (w(3, 5), times(6, w(3, 5))),
    ]
    return IntervalPartition(tuple(intervals))


def paper_e_c_list() -> list[SqMonomial]:
    return sorted({v for _, v in paper_e_partition().intervals})


# ---------------------------------------------------------------------------
# audits


@dataclass
class Claim:
    quantity: str
    claimed: Any
    computed: Any
    policy: str  # "assert" | "report"
    anchor: str
    ok: Optional[bool] = None

    def __post_init__(self):
        if self.ok is None:
            self.ok = self.claimed == self.computed


@dataclass
class AuditReport:
    id: str
    field: FieldSpec
    claims: list[Claim] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def failures(self) -> list[Claim]:
        return [c for c in self.claims if c.policy == "assert" and not c.ok]

    @property
    def passed(self) -> bool:
        return not self.failures


class AuditFailure(AssertionError):
    def __init__(self, report: AuditReport):
        names = ", ".join(c.quantity for c in report.failures)
        super().__init__(f"{report.id}: asserted claims failed: {names}")
        self.report = report


def audit_example(id: str, field: FieldSpec = QQ, sdepth_budget: int = 10**6,
                  strict: bool = True) -> AuditReport:
    """Recompute every numeric claim attached to a worked example.

    Depth values printed for ``e2``/``e4`` were obtained in characteristic 0;
    in other characteristics they are reported rather than asserted.
    """
    ex = paper_example(id, field.characteristic)
    report = AuditReport(id, field)
    auditor = {"e2": _audit_e2, "e4": _audit_e4, "e": _audit_e, "e3": _audit_e3}[id]
    auditor(ex, report, field, sdepth_budget)
    if strict and not report.passed:
        raise AuditFailure(report)
    return report


def _char0_policy(field: FieldSpec) -> str:
    return "assert" if field.characteristic == 0 else "report"


def _audit_e2(ex: PaperExample, rep: AuditReport, field: FieldSpec, budget: int):
    inst = ex.instance
    ds = derive_sets(inst)
    pol = _char0_policy(field)
    add = rep.claims.append
    add(Claim("n,r,d", (5, 5, 2), (inst.n, inst.r, inst.d), "assert", "e2 parameters"))
    printed_B = sorted([mono(1, 2, 3), mono(1, 2, 4), mono(1, 3, 4), mono(1, 3, 5), mono(2, 3, 5)])
    add(Claim("B", printed_B, list(ds.B), "assert", "e2 listed B"))
    add(Claim("s=|B|", 5, ds.s, "assert", "e2 s=|B|=r=5"))
    add(Claim("B subset W", True, not pathological_witnesses(inst, ds), "assert", "e2 B inside W"))
    add(Claim("q=|C|", 2, ds.q, "report", "e2 q=|C|=2<r=5"))
    add(Claim("depth I/J", 3, depth_of(inst, "I/J", field), pol, "e2 depth I/J = 3"))
    add(Claim("depth S/J", 3, depth_of(inst, "S/J", field), pol, "e2 depth S/J = 3"))
    add(Claim("depth S/I", 2, depth_of(inst, "S/I", field), pol, "e2 depth S/I = 2"))
    for b in ds.B:
        add(Claim(f"depth I/(J,{b})", 2, depth_mod(inst, principal(b, inst.n), field), pol,
                  "e2 depth I/(J,b) = 2 for every b in B"))
    fam = gcd_family(inst)
    rep.notes.append("gcd family: " + "; ".join(
        f"{u} -> {_labels(ex, U)}" for u, U in zip(fam.u, fam.U)))


def _labels(ex: PaperExample, members) -> list[str]:
    F = ex.instance.F
    inverse = {m: lab for lab, m in ex.labels.items()}
    return sorted((inverse[F[k - 1]] for k in members), key=lambda s: int(s[1:]))


def _audit_e4(ex: PaperExample, rep: AuditReport, field: FieldSpec, budget: int):
    inst = ex.instance
    n = inst.n
    big = paper_example("e2", field.characteristic).instance
    pol = _char0_policy(field)
    add = rep.claims.append
    jprime = ideal_intersect(big.J, inst.I)
    add(Claim("J' = J cap I'", list(inst.J.gens), list(jprime.gens), "assert", "e4 J'=J cap I'"))
    ds = derive_sets(inst)
    wit = pathological_witnesses(inst, ds)
    add(Claim("pathological", False, not wit, "assert", "e4 not pathological"))
    add(Claim("x2x3x5 is a witness", True, mono(2, 3, 5) in wit, "assert",
              "e4 x2x3x5 in B' minus W'"))
    rep.notes.append("witnesses of non-pathology: " + ", ".join(map(str, wit)))
    b1, b2 = mono(1, 3, 5), mono(2, 3, 5)
    both = MonomialIdeal(n, (b1, b2))
    d1 = depth_mod(inst, principal(b1, n), field)
    d2 = depth_mod(inst, principal(b2, n), field)
    d12 = depth_mod(inst, both, field)
    add(Claim("depth I'/(J',x1x3x5)", 2, d1, pol, "e4"))
    add(Claim("depth I'/(J',x2x3x5)", 3, d2, pol, "e4"))
    add(Claim("depth I'/(J',x1x3x5,x2x3x5)", 2, d12, pol, "e4"))
    dprime = depth_of(inst, "I/J", field)
    add(Claim("depth I'/J' > 2", True, dprime > 2, pol, "e4 injection into e2"))
    add(Claim("depth I'/J' <= 3", True, dprime <= 3, "assert", "e4 descent through b'=x1x3x5"))
    f5 = principal(mono(3, 5), big.n)
    dbig = depth_mod(big, f5, field)
    add(Claim("depth I/(J,f5)", 2, dbig, pol, "e4 remark: depth I/(J,f5)=2"))
    add(Claim("depth I/(J,f5) = depth I'/(J',x1x3x5,x2x3x5)", True, dbig == d12, "assert",
              "e4 isomorphism"))


def _audit_e(ex: PaperExample, rep: AuditReport, field: FieldSpec, budget: int):
    inst = ex.instance
    n = inst.n
    ds = derive_sets(inst)
    add = rep.claims.append
    f = {int(k[1:]): m for k, m in ex.labels.items()}

    def w(i, j):
        return SqMonomial(f[i].mask | f[j].mask)

    printed_B = {w(i, j) for i, j in combinations(range(1, 6), 2)}
    printed_B |= {w(k, t) for k, t in combinations(range(7, 12), 2)}
    printed_B |= {w(i, 6) for i in range(1, 9) if i != 6}
    add(Claim("s=|B|", 27, ds.s, "assert", "e s=|B|=27"))
    add(Claim("B", sorted(printed_B), list(ds.B), "assert", "e listed B"))
    c_list = paper_e_c_list()
    add(Claim("q=|C|", 16, ds.q, "report", "e q=|C|=16"))
    add(Claim("C equals the listed monomials", sorted(c_list), list(ds.C), "report",
              "e 'these are all monomials of C'"))
    missing = sorted(set(ds.C) - set(c_list))
    if missing:
        rep.notes.append(f"C has {len(missing)} elements beyond the printed list: "
                         + ", ".join(map(str, missing)))
    add(Claim("s = q + r", True, ds.s == ds.q + inst.r, "report", "e s=q+r"))

    add(Claim("depth S/J", 2, depth_of(inst, "S/J", field), "assert", "e depth S/J = 2"))
    add(Claim("depth S/I", 6, depth_of(inst, "S/I", field), "assert", "e depth S/I = 6"))
    add(Claim("depth I/J", 2, depth_of(inst, "I/J", field), "assert", "e depth I/J = 2 = d"))
    x = lambda *ix: MonomialIdeal.from_masks(n, (1 << (i - 1) for i in ix))  # noqa: E731
    prod = _product(_product(x(12, 6), x(7, 8, 9, 10, 11)), x(1, 2, 3, 4, 5))
    jp = MonomialIdeal.from_masks(n, [f[i].mask | 1 << (k - 1) for i in range(1, 6) for k in range(7, 12)]
                                  + [f[i].mask | 1 << (k - 1) for i in range(7, 12) for k in range(1, 6)])
    add(Claim("J' = (x12,x6)(x7..x11)(x1..x5)", list(prod.gens), list(jp.gens), "assert", "e J'"))
    add(Claim("depth S/J'", 2, depth(MonomialIdeal.unit(n), jp, field), "assert", "e depth S/J' = 2"))
    i6 = MonomialIdeal(n, tuple(sorted(f[i] for i in range(1, 7))))
    add(Claim("depth S/I_6", 6, depth(MonomialIdeal.unit(n), i6, field), "assert", "e depth S/I_6 = 6"))

    fam = gcd_family(inst)
    got = {(u, frozenset(_labels(ex, U))) for u, U in zip(fam.u, fam.U)}
    want = {(mono(12), frozenset(f"f{k}" for k in range(1, 7))),
            (mono(6), frozenset(f"f{k}" for k in range(6, 12)))}
    add(Claim("gcd family", _fam_str(want), _fam_str(got), "assert", "e u1=x12, u2=x6"))

    poset = build_poset(inst)
    part = paper_e_partition()
    verdict = verify_partition(poset, part, 4)
    add(Claim("printed intervals valid", True, verdict.valid_intervals, "assert", "e partition"))
    add(Claim("printed intervals disjoint", True, verdict.disjoint, "assert", "e partition"))
    add(Claim("printed tops have degree 4", True, all(v.degree == 4 for _, v in part.intervals),
              "assert", "e partition with sdepth 4"))
    add(Claim("printed intervals cover the poset", True, verdict.covering, "report", "e partition"))
    if not verdict.covering:
        rep.notes.append(f"printed partition leaves {len(verdict.uncovered)} of {len(poset)} "
                         "poset elements uncovered")
    res = sdepth(poset, budget)
    if res.exact:
        add(Claim("sdepth I/J", 4, res.value, "assert", "e sdepth = d+2"))
    else:
        add(Claim("sdepth I/J >= 4", True, res.value >= 4, "report", "e sdepth = d+2"))
        rep.notes.append(f"sdepth search hit the budget; lower bound {res.value}")
    cert_ok = verify_partition(poset, res.certificate, res.value).ok
    add(Claim("engine certificate verifies", True, cert_ok, "assert", "e sdepth certificate"))
    v = verify_lemma(inst, "pr", field)
    add(Claim("common generator bound", "holds", v.status, "assert", "e f6 in U1 cap U2"))


def _fam_str(fam) -> list[str]:
    return sorted(f"{u}:{','.join(sorted(U, key=lambda s: int(s[1:])))}" for u, U in fam)


def _product(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    # only used on ideals in disjoint sets of variables, where lcm is the product
    return MonomialIdeal.from_masks(a.n, (g | h for g in a.masks for h in b.masks))


def _audit_e3(ex: PaperExample, rep: AuditReport, field: FieldSpec, budget: int):
    inst = ex.instance
    add = rep.claims.append
    fam = gcd_family(inst)
    got = {(u, frozenset(_labels(ex, U))) for u, U in zip(fam.u, fam.U)}
    printed = {
        (mono(1), ("f1", "f2", "f3")), (mono(3), ("f2", "f4", "f5", "f7")),
        (mono(6), ("f6", "f7", "f8")), (mono(2), ("f1", "f4", "f6")), (mono(4), ("f3", "f8")),
    }
    want = {(u, frozenset(U)) for u, U in printed}
    add(Claim("gcd family", _fam_str(want), _fam_str(got), "assert", "e3 U_1..U_5"))
    add(Claim("e", 5, fam.e, "assert", "e3 e=5"))
    u3 = [U for u, U in zip(fam.u, fam.U) if u == mono(6)][0]
    iprime = family_ideal(inst, u3)
    d_peel = depth(inst.I, ideal_sum(inst.J, iprime), field)
    add(Claim("depth I/(J,(U3)) <= 3", True, d_peel <= 3, "assert", "e3 via e2"))
    e2_depth = depth_of(paper_example("e2", field.characteristic).instance, "I/J", field)
    add(Claim("depth I/(J,(U3)) = depth of e2", e2_depth, d_peel, "report", "e3 isomorphism with e2"))
    d = depth_of(inst, "I/J", field)
    add(Claim("depth I/J <= 3", True, d <= 3, "assert", "e3 depth I/J <= 3"))
    rep.notes.append(f"depth I/J = {d}")


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class Verdict:
    check: str
    status: str  # "inapplicable" | "holds" | "counterexample"
    detail: str = ""
    dump: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.status == "counterexample"


def _counterexample(check: str, inst: Instance, detail: str) -> Verdict:
    dump = dump_instance(inst)
    log.error("counterexample for %s: %s\n%s", check, detail, dump)
    return Verdict(check, "counterexample", detail, dump)


def verify_theorem_t(inst: Instance, field: Optional[FieldSpec] = None) -> Verdict:
    field = field or inst.field
    hyp = check_theorem_hypotheses(inst)
    if not hyp.theorem_applicable:
        why = []
        if not hyp.pathological:
            why.append("not pathological")
        if not hyp.c_w_empty:
            why.append("C meets W")
        return Verdict("theorem", "inapplicable", ", ".join(why))
    dep = depth_of(inst, "I/J", field)
    detail = f"depth={dep} d={inst.d}"
    if dep <= inst.d + 1:
        return Verdict("theorem", "holds", detail)
    return _counterexample("theorem", inst, detail)


LEMMA_IDS = ("d", "dprime", "l2", "l3", "l4", "pr")


def _standing(inst: Instance) -> Optional[str]:
    """Standing hypotheses of the gcd-family arguments: E empty and B inside W."""
    if inst.E:
        return "E is not empty"
    if not check_theorem_hypotheses(inst).pathological:
        return "B is not inside W"
    return None


def verify_lemma(inst: Instance, lemma: str, field: Optional[FieldSpec] = None,
                 choice: Optional[int] = None) -> Verdict:
    """Check one lemma's implication on ``inst``.

    ``choice`` optionally pins the element the lemma quantifies over (a
    1-based index into ``B`` for ``d``, into ``F`` for ``dprime``/``l2``, into
    the gcd family for ``l3``); otherwise every choice is tried.
    """
    field = field or inst.field
    if lemma not in LEMMA_IDS:
        raise KeyError(f"unknown lemma {lemma!r}; known: {', '.join(LEMMA_IDS)}")
    return _LEMMAS[lemma](inst, field, choice)


def _lemma_d(inst, field, choice):
    if inst.E:
        return Verdict("d", "inapplicable", "E is not empty")
    ds = derive_sets(inst)
    bs = list(ds.B) if choice is None else [ds.B[choice - 1]]
    used = [b for b in bs if depth_mod(inst, principal(b, inst.n), field) == inst.d]
    if not used:
        return Verdict("d", "inapplicable", "no b in B with depth I/(J,b) = d")
    dep = depth_of(inst, "I/J", field)
    detail = f"b={used[0]} depth={dep} d={inst.d}"
    if dep <= inst.d + 1:
        return Verdict("d", "holds", detail)
    return _counterexample("d", inst, detail)


def _lemma_dprime(inst, field, choice):
    if inst.r < 2:
        return Verdict("dprime", "inapplicable", "r < 2")
    idx = range(inst.r) if choice is None else [choice - 1]
    used = [k for k in idx if depth_mod(inst, principal(inst.F[k], inst.n), field) == inst.d]
    if not used:
        return Verdict("dprime", "inapplicable", "no generator f with depth I/(J,f) = d")
    dep = depth_of(inst, "I/J", field)
    detail = f"f={inst.F[used[0]]} depth={dep} d={inst.d}"
    if dep <= inst.d + 1:
        return Verdict("dprime", "holds", detail)
    return _counterexample("dprime", inst, detail)


def _lemma_l2(inst, field, choice):
    why = _standing(inst)
    if why is None and not check_theorem_hypotheses(inst).c_w_empty:
        why = "C meets W"
    if why:
        return Verdict("l2", "inapplicable", why)
    fam = gcd_family(inst)
    if fam.e < 2:
        return Verdict("l2", "inapplicable", "e < 2")
    ds = derive_sets(inst)
    bset = {b.mask for b in ds.B}
    tried = 0
    rs = range(1, inst.r + 1) if choice is None else [choice]
    for r_idx in rs:
        fr = inst.F[r_idx - 1]
        for k, Ue in enumerate(fam.U):
            if r_idx not in Ue:
                continue
            iprime = family_ideal(inst, Ue - {r_idx})
            others = set().union(*(U for j, U in enumerate(fam.U) if j != k)) - Ue
            if not any((fr.mask | inst.F[t - 1].mask) in bset
                       and not iprime.contains_mask(fr.mask | inst.F[t - 1].mask) for t in others):
                continue
            bottom = ideal_sum(inst.J, iprime)
            if depth(inst.I, ideal_sum(bottom, principal(fr, inst.n)), field) < inst.d + 1:
                continue
            tried += 1
            dep = depth(inst.I, bottom, field)
            g = gamma_analysis(inst, r_idx, family=k, fam=fam, ds=ds)
            count = degree_up_count(inst, r_idx, iprime)
            detail = f"f={fr} family={fam.u[k]} depth I/(J,I')={dep} |Gamma|={len(g.gamma)}"
            if dep != inst.d + 1 or count != len(g.gamma):
                return _counterexample("l2", inst, detail + f" degree-up count={count}")
    if not tried:
        return Verdict("l2", "inapplicable", "no (f_r, U_e) meets the premise")
    return Verdict("l2", "holds", f"{tried} choice(s) checked")


def _lemma_l3(inst, field, choice):
    why = _standing(inst)
    if why is None and not check_theorem_hypotheses(inst).c_w_empty:
        why = "C meets W"
    if why:
        return Verdict("l3", "inapplicable", why)
    fam = gcd_family(inst)
    if fam.e < 2:
        return Verdict("l3", "inapplicable", "e < 2")
    ks = range(fam.e) if choice is None else [choice - 1]
    used = [k for k in ks
            if depth(inst.I, ideal_sum(inst.J, family_ideal(inst, fam.U[k])), field) <= inst.d + 1]
    if not used:
        return Verdict("l3", "inapplicable", "no family with depth I/(J,(U_e)) <= d+1")
    dep = depth_of(inst, "I/J", field)
    detail = f"family={fam.u[used[0]]} depth={dep} d={inst.d}"
    if dep <= inst.d + 1:
        return Verdict("l3", "holds", detail)
    return _counterexample("l3", inst, detail)


def _lemma_l4(inst, field, choice):
    why = _standing(inst)
    if why:
        return Verdict("l4", "inapplicable", why)
    fam = gcd_family(inst)
    if fam.e < 1:
        return Verdict("l4", "inapplicable", "empty gcd family")
    premise, conclusion = lemma_l4_check(inst, fam)
    if not premise:
        return Verdict("l4", "inapplicable", "families have no common generator")
    if conclusion:
        return Verdict("l4", "holds", f"e={fam.e}")
    bad = ", ".join(map(str, c_meets_w(inst)))
    return _counterexample("l4", inst, f"C meets W at {bad}")


def _lemma_pr(inst, field, choice):
    why = _standing(inst)
    if why:
        return Verdict("pr", "inapplicable", why)
    fam = gcd_family(inst)
    if fam.e < 1 or not fam.common():
        return Verdict("pr", "inapplicable", "families have no common generator")
    dep = depth_of(inst, "I/J", field)
    detail = f"common={sorted(fam.common())} depth={dep} d={inst.d}"
    if dep <= inst.d + 1:
        return Verdict("pr", "holds", detail)
    return _counterexample("pr", inst, detail)


_LEMMAS: dict[str, Callable] = {
    "d": _lemma_d, "dprime": _lemma_dprime, "l2": _lemma_l2,
    "l3": _lemma_l3, "l4": _lemma_l4, "pr": _lemma_pr,
}


# ---------------------------------------------------------------------------
# random instances

MODES = ("generic", "pathological", "common-generator", "question")
MAX_ATTEMPTS = 200


def _d_subsets(n: int, d: int) -> list[int]:
    return [sum(1 << t for t in c) for c in combinations(range(n), d)]


def _rng(seed: int, attempt: int) -> random.Random:
    # rejected draws are retried with the derived seed "seed:attempt"
    return random.Random(f"{seed}:{attempt}")


def _has_room(inst: Instance) -> bool:
    ttab = inst.I.membership_table()
    btab = inst.J.membership_table()
    return any(ttab[m] and not btab[m] and popcount(m) > inst.d for m in range(1 << inst.n))


def _draw(rng: random.Random, n: int, d: int, r: int, mode: str, i: int, char: int) -> Instance:
    if mode == "common-generator":
        return _draw_common(rng, n, d, r, char)
    F = [SqMonomial(m) for m in rng.sample(_d_subsets(n, d), r)]
    if mode == "generic":
        J = [m for m in multiples_of_degree(F, n, d + 1) if rng.random() < 0.5]
        J += [m for m in multiples_of_degree(F, n, d + 2) if rng.random() < 0.5]
        return Instance(n, MonomialIdeal.from_masks(n, (f.mask for f in F)),
                        MonomialIdeal.from_masks(n, J), FieldSpec(char))
    extra_p = rng.choice((0.0, 0.1, 0.3))
    extra = [SqMonomial(m) for m in multiples_of_degree(F, n, d + 2) if rng.random() < extra_p]
    if mode == "pathological":
        return pathologize(F, n, extra, char)
    if mode == "question":
        extra = [SqMonomial(m) for m in multiples_of_degree(F, n, d + i + 1) if rng.random() < extra_p]
        return questionize(F, n, i, extra, char)
    raise ValueError(f"unknown mode {mode!r}; known: {', '.join(MODES)}")


def _draw_common(rng: random.Random, n: int, d: int, r: int, char: int) -> Instance:
    if d < 2:
        raise InstanceError("infeasible", "common-generator mode needs d >= 2")
    pool = _d_subsets(n, d)
    g = rng.choice(pool)
    near = [m for m in pool if popcount(m & g) == d - 1]
    far = [m for m in pool if m != g and popcount(m & g) < d - 1]
    rng.shuffle(near)
    rng.shuffle(far)
    F = [g]
    for m in near + far:
        if len(F) == r:
            break
        # every degree-(d-1) gcd must divide g, so that g lies in every U_i
        if all(popcount(m & f) != d - 1 or (m & f) & ~g == 0 for f in F):
            F.append(m)
    if len(F) < r:
        raise _Reject("not enough compatible generators")
    gens = [SqMonomial(m) for m in F]
    wset = {a | b for a, b in combinations(F, 2)}
    J = [m for m in multiples_of_degree(gens, n, d + 1) if m not in wset]
    J += [m for m in multiples_of_degree(gens, n, d + 2) if rng.random() < 0.5]
    return Instance(n, MonomialIdeal.from_masks(n, F), MonomialIdeal.from_masks(n, J),
                    FieldSpec(char))


class _Reject(Exception):
    pass


def _check_feasible(n: int, d: int, r: int, mode: str):
    from math import comb
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; known: {', '.join(MODES)}")
    if d < 1 or r < 1 or n < d + 1:
        raise InstanceError("infeasible", f"need d >= 1, r >= 1, n > d (n={n}, d={d}, r={r})")
    if r > comb(n, d):
        raise InstanceError("infeasible", f"r={r} exceeds C({n},{d})={comb(n, d)}")


def generate_instance(n: int, d: int, r: int, seed: int, mode: str = "generic", i: int = 1,
                      char: int = 0) -> tuple[Instance, int]:
    """Like :func:`random_instance` but also returns the number of rejected draws."""
    _check_feasible(n, d, r, mode)
    for attempt in range(MAX_ATTEMPTS):
        rng = _rng(seed, attempt)
        try:
            inst = _draw(rng, n, d, r, mode, i, char)
        except (_Reject, InstanceError) as exc:
            log.debug("seed %s attempt %d rejected: %s", seed, attempt, exc)
            continue
        if not _has_room(inst):
            log.debug("seed %s attempt %d rejected: nothing above degree d", seed, attempt)
            continue
        if mode == "common-generator" and gcd_family(inst).e < 2:
            log.debug("seed %s attempt %d rejected: e < 2", seed, attempt)
            continue
        if attempt:
            log.info("seed %s: %d rejected draw(s)", seed, attempt)
        return inst, attempt
    raise InstanceError("infeasible", f"no acceptable instance after {MAX_ATTEMPTS} draws")


def random_instance(n: int, d: int, r: int, seed: int, mode: str = "generic", i: int = 1,
                    char: int = 0) -> Instance:
    return generate_instance(n, d, r, seed, mode, i, char)[0]


# ---------------------------------------------------------------------------
# question search


def search_question(n: int, d: int, r: int, i: int, seeds, sdepth_budget: int = 0,
                    timing: bool = False, mode: str = "question") -> Iterator[dict]:
    """One record per seed; ``conclusion`` is ``depth <= d+i`` when the hypothesis holds."""
    for seed in seeds:
        start = time.perf_counter()
        inst, rejected = generate_instance(n, d, r, seed, mode, i)
        record: dict[str, Any] = {
            "seed": seed, "digest": instance_digest(inst),
            "params": {"n": n, "d": d, "r": r, "i": i, "mode": mode},
            "rejected": rejected,
        }
        try:
            hyp = question_hypothesis(inst, i)
        except InapplicableQuestion as exc:
            record.update(hypothesis=None, status="inapplicable", reason=str(exc))
            yield record
            continue
        hyps = check_theorem_hypotheses(inst)
        record["hypothesis"] = hyp
        record["theorem_applicable"] = hyps.theorem_applicable
        if not hyp:
            record["status"] = "inapplicable"
        else:
            dep = depth_of(inst)
            record["depth"] = dep
            record["conclusion"] = dep <= d + i
            record["status"] = "holds" if dep <= d + i else "counterexample"
            if sdepth_budget:
                res = sdepth(build_poset(inst), sdepth_budget)
                record["sdepth"] = res.value
                record["sdepth_exact"] = res.exact
            if record["status"] == "counterexample":
                record["instance"] = dump_instance(inst)
        if timing:
            record["seconds"] = round(time.perf_counter() - start, 6)
        yield record
