"""Stanley depth of ``I/J`` through interval partitions of its squarefree poset.

Search strategy
---------------
``sdepth >= k`` is decided by backtracking over exact covers.  At each node
the least uncovered element ``u`` of degree ``< k`` (canonical order) is taken;
any interval covering it must start at ``u`` because a smaller bottom would be
a smaller uncovered element.  Elements of degree ``>= k`` left over at the
end become singleton intervals.

By default only tops of degree exactly ``k`` are tried.  Nothing is lost: the
part of an interval ``[u, v]`` lying in degrees ``<= k`` is a truncated
Boolean lattice, which splits into intervals with tops of rank exactly ``k``
(induct on ``|v - u|`` by splitting on one variable), and whatever lies above
degree ``k`` can be covered by singletons.  ``exact_tops=False`` tries every
top of degree ``>= k`` instead; the two modes must agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

from .monomials import Instance, SqMonomial, mask_key, popcount, quotient_masks, submasks

DEFAULT_BUDGET = 10**7
BRUTE_FORCE_LIMIT = 14


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Poset:
    """Squarefree monomials of ``I \\ J`` ordered by divisibility."""

    masks: tuple[int, ...]

    def __post_init__(self):
        present = set(self.masks)
        for u in self.masks:
            for v in self.masks:
                if u & ~v == 0 and u != v:
                    for w in submasks(v & ~u):
                        if (u | w) not in present:
                            raise AssertionError("poset is not interval closed")

    @property
    def elements(self) -> list[SqMonomial]:
        return [SqMonomial(m) for m in self.masks]

    def __len__(self) -> int:
        return len(self.masks)

    @property
    def min_degree(self) -> int:
        return min(popcount(m) for m in self.masks)

    @property
    def max_degree(self) -> int:
        return max(popcount(m) for m in self.masks)


def build_poset(inst: Instance) -> Poset:
    return Poset(tuple(quotient_masks(inst.n, inst.I, inst.J)))


def poset_from_masks(masks) -> Poset:
    return Poset(tuple(sorted(set(masks), key=mask_key)))


@dataclass(frozen=True)
class IntervalPartition:
    intervals: tuple[tuple[SqMonomial, SqMonomial], ...]

    @property
    def value(self) -> Optional[int]:
        if not self.intervals:
            return None
        return min(v.degree for _, v in self.intervals)

    @classmethod
    def from_masks(cls, pairs) -> "IntervalPartition":
        return cls(tuple((SqMonomial(u), SqMonomial(v)) for u, v in pairs))


@dataclass
class PartitionVerdict:
    valid_intervals: bool
    disjoint: bool
    covering: bool
    value: Optional[int]
    meets_k: bool
    diagnostics: list[str] = field(default_factory=list)
    uncovered: list[SqMonomial] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.valid_intervals and self.disjoint and self.covering and self.meets_k


def verify_partition(p: Poset, part: IntervalPartition, k: int) -> PartitionVerdict:
    present = set(p.masks)
    diag = []
    valid = True
    owner: dict[int, int] = {}
    disjoint = True
    for idx, (u, v) in enumerate(part.intervals):
        if u.mask & ~v.mask:
            valid = False
            diag.append(f"bad interval #{idx}: {u} does not divide {v}")
            continue
        missing = [u.mask | w for w in submasks(v.mask & ~u.mask) if (u.mask | w) not in present]
        if missing:
            valid = False
            w = min(missing, key=mask_key)
            diag.append(f"bad interval #{idx} [{u}, {v}]: {SqMonomial(w)} is not in the poset")
        for w in submasks(v.mask & ~u.mask):
            m = u.mask | w
            if m not in present:
                continue
            if m in owner:
                disjoint = False
                diag.append(f"overlap at {SqMonomial(m)}: intervals #{owner[m]} and #{idx}")
            else:
                owner[m] = idx
    uncovered = sorted((m for m in present if m not in owner), key=mask_key)
    for m in uncovered:
        diag.append(f"uncovered {SqMonomial(m)}")
    value = part.value
    meets = value is None or value >= k
    if not meets:
        diag.append(f"value {value} < {k}")
    return PartitionVerdict(
        valid_intervals=valid, disjoint=disjoint, covering=not uncovered,
        value=value, meets_k=meets, diagnostics=diag,
        uncovered=[SqMonomial(m) for m in uncovered],
    )


@dataclass
class Decision:
    status: str  # "true" | "false" | "timeout"
    k: int
    nodes: int
    certificate: Optional[IntervalPartition] = None

    def __bool__(self) -> bool:
        return self.status == "true"


def sdepth_decision(p: Poset, k: int, budget: int = DEFAULT_BUDGET,
                    exact_tops: bool = True) -> Decision:
    """Does the poset admit an interval partition with every top of degree >= k?"""
    masks = list(p.masks)
    index = {m: i for i, m in enumerate(masks)}
    low = [i for i, m in enumerate(masks) if popcount(m) < k]
    if not low:
        cert = IntervalPartition.from_masks((m, m) for m in masks)
        return Decision("true", k, 0, cert)

    def admissible(m: int) -> bool:
        return popcount(m) == k if exact_tops else popcount(m) >= k

    tops: dict[int, list[tuple[int, tuple[int, ...]]]] = {}
    for i in low:
        u = masks[i]
        cand = []
        for v in masks:
            if u & ~v == 0 and admissible(v):
                members = tuple(index[u | w] for w in submasks(v & ~u))
                cand.append((v, members))
        tops[i] = cand

    covered = bytearray(len(masks))
    chosen: list[tuple[int, int]] = []
    nodes = 0

    def search(pos: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded
        while pos < len(low) and covered[low[pos]]:
            pos += 1
        if pos == len(low):
            return True
        i = low[pos]
        for v, members in tops[i]:
            if any(covered[t] for t in members):
                continue
            for t in members:
                covered[t] = 1
            chosen.append((masks[i], v))
            if search(pos + 1):
                return True
            chosen.pop()
            for t in members:
                covered[t] = 0
        return False

    try:
        found = search(0)
    except BudgetExceeded:
        return Decision("timeout", k, nodes)
    if not found:
        return Decision("false", k, nodes)
    pairs = list(chosen) + [(m, m) for i, m in enumerate(masks) if not covered[i]]
    pairs.sort(key=lambda uv: mask_key(uv[0]))
    return Decision("true", k, nodes, IntervalPartition.from_masks(pairs))


@dataclass
class SdepthResult:
    value: int
    certificate: IntervalPartition
    exact: bool
    decisions: list[Decision] = field(default_factory=list)

    @property
    def timed_out(self) -> bool:
        return not self.exact


def sdepth(p: Poset, budget: int = DEFAULT_BUDGET, exact_tops: bool = True) -> SdepthResult:
    """Largest ``k`` with a partition of value ``>= k``.

    On a timeout the result carries the best ``k`` established so far with
    ``exact=False``; it is a lower bound only.
    """
    if not p.masks:
        raise ValueError("sdepth of an empty poset is undefined")
    k = p.min_degree
    best = sdepth_decision(p, k, budget, exact_tops)
    decisions = [best]
    assert best, "singleton partition must exist"
    while k < p.max_degree:
        nxt = sdepth_decision(p, k + 1, budget, exact_tops)
        decisions.append(nxt)
        if nxt.status == "timeout":
            return SdepthResult(k, best.certificate, False, decisions)
        if nxt.status == "false":
            break
        k, best = k + 1, nxt
    return SdepthResult(k, best.certificate, True, decisions)


def brute_force_sdepth(p: Poset) -> int:
    """Exhaustive oracle: memoized search over covered-sets, top-down.

    Works on bit masks over poset positions and always removes the interval
    containing the highest-positioned remaining element, so it shares no
    selection rule with :func:`sdepth_decision`.
    """
    masks = list(p.masks)
    size = len(masks)
    if size > BRUTE_FORCE_LIMIT:
        raise ValueError(f"poset has {size} elements, oracle limit is {BRUTE_FORCE_LIMIT}")
    if not size:
        raise ValueError("empty poset")
    intervals: list[tuple[int, int]] = []  # (member bitset, top degree)
    for a, u in enumerate(masks):
        for b, v in enumerate(masks):
            if u & ~v == 0:
                bits = 0
                for c, w in enumerate(masks):
                    if u & ~w == 0 and w & ~v == 0:
                        bits |= 1 << c
                intervals.append((bits, popcount(v)))
    containing = [[iv for iv in intervals if iv[0] >> c & 1] for c in range(size)]
    inf = 10**9

    @lru_cache(maxsize=None)
    def best(remaining: int) -> int:
        if not remaining:
            return inf
        top = remaining.bit_length() - 1
        out = -1
        for bits, deg in containing[top]:
            if bits & ~remaining == 0:
                rest = best(remaining & ~bits)
                if rest >= 0:
                    out = max(out, min(deg, rest))
        return out

    return best((1 << size) - 1)


def partition_intervals_as_lists(part: IntervalPartition) -> list:
    return [[list(u.support), list(v.support)] for u, v in part.intervals]


def partition_from_lists(data: Sequence) -> IntervalPartition:
    return IntervalPartition(tuple(
        (SqMonomial.from_indices(u), SqMonomial.from_indices(v)) for u, v in data))
