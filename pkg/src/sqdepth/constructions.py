"""Combinatorial data attached to an instance ``J < I``.

With ``f_1, ..., f_r`` the degree-``d`` generators of ``I``:

* ``B`` / ``C``: squarefree monomials of ``I \\ J`` in degree ``d+1`` / ``d+2``;
* ``W``: the lcms ``w_ij`` of generator pairs, kept with their pair;
* ``C3``: the elements of ``C`` in ``(F)`` whose degree-``(d+1)`` divisors from
  ``B \\ E`` are all lcms of pairs;
* the gcd family: the distinct degree-``(d-1)`` gcds ``u_i`` of generator pairs
  and the sets ``U_i`` of generators each one divides.

Generator indices exposed here are 1-based, matching ``f_1, ..., f_r``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

from .monomials import (
    FieldSpec,
    Instance,
    InstanceError,
    MonomialIdeal,
    SqMonomial,
    ideal_subset,
    ideal_sum,
    mask_key,
    minimal_masks,
    popcount,
    quotient_masks,
)


@dataclass(frozen=True)
class DerivedSets:
    B: tuple[SqMonomial, ...]
    C: tuple[SqMonomial, ...]
    W: tuple[tuple[tuple[int, int], SqMonomial], ...]
    C3: tuple[SqMonomial, ...]

    @property
    def s(self) -> int:
        return len(self.B)

    @property
    def q(self) -> int:
        return len(self.C)

    @property
    def w_masks(self) -> frozenset[int]:
        return frozenset(w.mask for _, w in self.W)


def _f_ideal(inst: Instance) -> MonomialIdeal:
    return MonomialIdeal(inst.n, inst.F)


def lcm_pairs(F: Sequence[SqMonomial]) -> list[tuple[tuple[int, int], SqMonomial]]:
    return [((i + 1, j + 1), SqMonomial(F[i].mask | F[j].mask))
            for i, j in combinations(range(len(F)), 2)]


def derive_sets(inst: Instance) -> DerivedSets:
    d = inst.d
    ground = quotient_masks(inst.n, inst.I, inst.J)
    B = [m for m in ground if popcount(m) == d + 1]
    C = [m for m in ground if popcount(m) == d + 2]
    W = lcm_pairs(inst.F)
    wset = {w.mask for _, w in W}
    fideal = _f_ideal(inst)
    e_masks = {g.mask for g in inst.E}
    b_minus_e = set(B) - e_masks
    C3 = []
    for c in C:
        if not fideal.contains_mask(c):
            continue
        divisors = (c & ~(1 << t) for t in range(inst.n) if c >> t & 1)
        if all(b in wset for b in divisors if b in b_minus_e):
            C3.append(c)
    return DerivedSets(
        B=tuple(SqMonomial(m) for m in B),
        C=tuple(SqMonomial(m) for m in C),
        W=tuple(W),
        C3=tuple(SqMonomial(m) for m in C3),
    )


def pathological_witnesses(inst: Instance, ds: DerivedSets) -> list[SqMonomial]:
    """Elements of ``B`` inside ``(F)`` that are not an lcm of two generators."""
    fideal = _f_ideal(inst)
    wset = ds.w_masks
    return [b for b in ds.B if b.mask not in wset and fideal.contains_mask(b.mask)]


def is_pathological(inst: Instance, ds: Optional[DerivedSets] = None) -> bool:
    ds = ds or derive_sets(inst)
    return not pathological_witnesses(inst, ds)


@dataclass
class HypothesisReport:
    pathological: bool
    c_w_empty: bool
    c_in_c3: bool
    notes: list[str] = field(default_factory=list)

    @property
    def theorem_applicable(self) -> bool:
        return self.pathological and self.c_w_empty


def check_theorem_hypotheses(inst: Instance, ds: Optional[DerivedSets] = None) -> HypothesisReport:
    ds = ds or derive_sets(inst)
    notes = []
    witnesses = pathological_witnesses(inst, ds)
    for b in witnesses:
        notes.append(f"B element {b} lies in (F) but is not an lcm of two generators")
    wset = ds.w_masks
    c_w = [c for c in ds.C if c.mask in wset]
    for c in c_w:
        pairs = [f"w{i},{j}" for (i, j), w in ds.W if w == c]
        notes.append(f"C element {c} equals {', '.join(pairs)}")
    fideal = _f_ideal(inst)
    c3 = set(ds.C3)
    outside = [c for c in ds.C if fideal.contains_mask(c.mask) and c not in c3]
    for c in outside:
        notes.append(f"C element {c} lies in (F) but not in C3")
    return HypothesisReport(
        pathological=not witnesses,
        c_w_empty=not c_w,
        c_in_c3=not outside,
        notes=notes,
    )


@dataclass(frozen=True)
class GcdFamily:
    u: tuple[SqMonomial, ...]
    U: tuple[frozenset[int], ...]

    @property
    def e(self) -> int:
        return len(self.u)

    def common(self) -> frozenset[int]:
        if not self.U:
            return frozenset()
        return frozenset.intersection(*self.U)


def gcd_family(inst: Instance) -> GcdFamily:
    d = inst.d
    F = inst.F
    if d < 1:
        raise InstanceError("d_positive", "gcd family needs d >= 1")
    us = {F[i].mask & F[j].mask for i, j in combinations(range(len(F)), 2)}
    us = sorted((u for u in us if popcount(u) == d - 1), key=mask_key)
    U = tuple(frozenset(k + 1 for k, f in enumerate(F) if u & ~f.mask == 0) for u in us)
    for a, b in combinations(range(len(U)), 2):
        assert len(U[a] & U[b]) <= 1, "two gcd families share two generators"
    return GcdFamily(tuple(SqMonomial(u) for u in us), U)


def c_meets_w(inst: Instance, ds: Optional[DerivedSets] = None) -> list[SqMonomial]:
    ds = ds or derive_sets(inst)
    wset = ds.w_masks
    return [c for c in ds.C if c.mask in wset]


def lemma_l4_check(inst: Instance, fam: Optional[GcdFamily] = None,
                   ds: Optional[DerivedSets] = None) -> tuple[bool, bool]:
    """``(common generator exists, C and W are disjoint)``."""
    fam = fam or gcd_family(inst)
    premise = fam.e >= 1 and bool(fam.common())
    return premise, not c_meets_w(inst, ds)


@dataclass(frozen=True)
class GammaAnalysis:
    A: frozenset[int]
    classes: tuple[frozenset[int], ...]
    gamma: frozenset[int]
    family: int


def family_ideal(inst: Instance, members) -> MonomialIdeal:
    return MonomialIdeal(inst.n, tuple(sorted(inst.F[k - 1] for k in members)))


def gamma_analysis(inst: Instance, r_idx: int, iprime: Optional[MonomialIdeal] = None,
                   family: Optional[int] = None, fam: Optional[GcdFamily] = None,
                   ds: Optional[DerivedSets] = None,
                   exclude_fr_families: bool = False) -> GammaAnalysis:
    """Neighbours of ``f_r`` outside its designated family ``U_e``.

    ``r_idx`` is 1-based.  ``family`` is the 0-based index of ``U_e`` in the
    gcd family; when omitted it is inferred from ``iprime``, which must then be
    the ideal generated by ``U_e`` minus ``f_r``.  Two elements of ``A`` are
    related when some other family contains both; ``gamma`` collects the
    variables ``x`` with ``w_{r,t} = x * f_r`` and ``w_{r,t}`` outside
    ``(J, I')``.

    With ``exclude_fr_families`` only families not containing ``f_r`` link
    elements of ``A``; then every class determines a single ``w_{r,t}``.  The
    plain relation can merge ``f_t, f_t'`` sharing a family with ``f_r``,
    whose ``w_{r,t}`` differ.
    """
    F = inst.F
    if not 1 <= r_idx <= len(F):
        raise IndexError(f"generator index {r_idx} out of range 1..{len(F)}")
    fam = fam or gcd_family(inst)
    ds = ds or derive_sets(inst)
    if family is None:
        if iprime is None:
            raise ValueError("give either the family index or I'")
        for k, Uk in enumerate(fam.U):
            if r_idx in Uk and family_ideal(inst, Uk - {r_idx}) == iprime:
                family = k
                break
        else:
            raise ValueError("I' is not U_e minus f_r for any family containing f_r")
    Ue = fam.U[family]
    if r_idx not in Ue:
        raise ValueError(f"f_{r_idx} is not in the designated family")
    if iprime is None:
        iprime = family_ideal(inst, Ue - {r_idx})
    if not ideal_subset(iprime, inst.I):
        raise ValueError("I' is not contained in I")
    others = [Uk for k, Uk in enumerate(fam.U) if k != family]
    outside = set().union(*others) - Ue if others else set()
    fr = F[r_idx - 1].mask
    bset = {b.mask for b in ds.B}
    A = frozenset(t for t in outside
                  if (fr | F[t - 1].mask) in bset and not iprime.contains_mask(fr | F[t - 1].mask))

    parent = {t: t for t in A}

    def find(t):
        while parent[t] != t:
            parent[t] = parent[parent[t]]
            t = parent[t]
        return t

    for Uk in others:
        if exclude_fr_families and r_idx in Uk:
            continue
        members = sorted(A & Uk)
        for t in members[1:]:
            parent[find(t)] = find(members[0])
    groups: dict[int, set[int]] = {}
    for t in A:
        groups.setdefault(find(t), set()).add(t)
    classes = tuple(sorted((frozenset(g) for g in groups.values()), key=min))

    jip = ideal_sum(inst.J, iprime)
    gamma = set()
    for t in A:
        w = fr | F[t - 1].mask
        if not jip.contains_mask(w):
            gamma.add((w & ~fr).bit_length())
    return GammaAnalysis(A, classes, frozenset(gamma), family)


def degree_up_count(inst: Instance, r_idx: int, iprime: MonomialIdeal) -> int:
    """Number of degree-``(d+1)`` squarefree monomials in ``(f_r)`` outside ``(J, I')``."""
    fr = inst.F[r_idx - 1].mask
    jip = ideal_sum(inst.J, iprime)
    return sum(1 for t in range(inst.n)
               if not fr >> t & 1 and not jip.contains_mask(fr | 1 << t))


def multiples_of_degree(F: Sequence[SqMonomial], n: int, deg: int) -> list[int]:
    """Squarefree masks of degree ``deg`` divisible by some element of ``F``."""
    out = set()
    full = (1 << n) - 1
    for f in F:
        free = full & ~f.mask
        need = deg - f.degree
        if need < 0:
            continue
        bits = [1 << t for t in range(n) if free >> t & 1]
        for extra in combinations(bits, need):
            out.add(f.mask | sum(extra))
    return sorted(out, key=mask_key)


def _check_generators(F: Sequence[SqMonomial], n: int) -> int:
    if not F:
        raise InstanceError("F_nonempty", "need at least one generator")
    degs = {f.degree for f in F}
    if len(degs) != 1:
        raise InstanceError("F_equal_degree", "generators must share one degree")
    d = degs.pop()
    if d < 1:
        raise InstanceError("no_unit_generator", "generators must have degree >= 1")
    if len({f.mask for f in F}) != len(F):
        raise InstanceError("F_antichain", "generators must be distinct")
    return d


def pathologize(F: Sequence[SqMonomial], n: int, extra: Sequence[SqMonomial] = (),
                char: int = 0) -> Instance:
    """Canonical ``J`` putting ``I = (F)`` into the theorem's regime.

    ``J`` is generated by the degree-``(d+1)`` multiples of ``F`` that are not
    lcms of two generators, together with every lcm of degree ``d+2``.  Extra
    generators (degree >= d+1, inside ``I``) may be appended; they only shrink
    ``B`` and ``C`` so the hypotheses persist.
    """
    d = _check_generators(F, n)
    wset = {w.mask for _, w in lcm_pairs(F)}
    gens = [m for m in multiples_of_degree(F, n, d + 1) if m not in wset]
    gens += [w for w in wset if popcount(w) == d + 2]
    gens += [g.mask for g in extra]
    I = MonomialIdeal.from_masks(n, (f.mask for f in F))
    J = MonomialIdeal.from_masks(n, gens)
    if ideal_subset(I, J):
        raise InstanceError("J_proper", "pathologized J equals I")
    return Instance(n, I, J, FieldSpec(char))


def lcm_of_subsets(F: Sequence[SqMonomial], size: int) -> set[int]:
    out = set()
    for combo in combinations(F, size):
        m = 0
        for f in combo:
            m |= f.mask
        out.add(m)
    return out


def question_hypothesis(inst: Instance, i: int) -> bool:
    """Every squarefree monomial of ``I \\ J`` of degree ``d+i`` is an lcm of ``i+1`` generators."""
    if inst.E:
        raise InapplicableQuestion("the question assumes I has no generators of degree > d")
    if not 1 <= i <= inst.r - 1:
        raise InapplicableQuestion(f"i must lie in [1, r-1] = [1, {inst.r - 1}]")
    target = inst.d + i
    lcms = lcm_of_subsets(inst.F, i + 1)
    ground = quotient_masks(inst.n, inst.I, inst.J)
    return all(m in lcms for m in ground if popcount(m) == target)


class InapplicableQuestion(ValueError):
    pass


def questionize(F: Sequence[SqMonomial], n: int, i: int, extra: Sequence[SqMonomial] = (),
                char: int = 0) -> Instance:
    """``J`` killing every degree-``(d+i)`` multiple of ``F`` that is not an lcm of ``i+1`` generators."""
    d = _check_generators(F, n)
    lcms = lcm_of_subsets(F, i + 1)
    gens = [m for m in multiples_of_degree(F, n, d + i) if m not in lcms]
    gens += [g.mask for g in extra]
    I = MonomialIdeal.from_masks(n, (f.mask for f in F))
    J = MonomialIdeal.from_masks(n, minimal_masks(gens))
    if ideal_subset(I, J):
        raise InstanceError("J_proper", "J equals I")
    return Instance(n, I, J, FieldSpec(char))
