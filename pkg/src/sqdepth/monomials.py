"""Squarefree monomials and squarefree monomial ideals.

A squarefree monomial is stored as an integer bit mask: bit ``t - 1`` is set
when ``x_t`` divides it.  Divisibility is subset containment, lcm is union and
gcd is intersection, so everything here is cheap integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

MAX_VARS = 63


class InstanceError(ValueError):
    """Raised when an instance violates one of the normalization rules.

    ``rule`` is a short stable identifier such as ``"J_subset_of_I"``.
    """

    def __init__(self, rule: str, message: str):
        super().__init__(f"{rule}: {message}")
        self.rule = rule


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for t in indices:
        if t < 1:
            raise ValueError(f"variable index must be >= 1, got {t}")
        m |= 1 << (t - 1)
    return m


def indices_of(mask: int) -> tuple[int, ...]:
    out = []
    t = 1
    while mask:
        if mask & 1:
            out.append(t)
        mask >>= 1
        t += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_key(mask: int) -> tuple[int, tuple[int, ...]]:
    """Canonical sort key: degree first, then the sorted index list."""
    return (popcount(mask), indices_of(mask))


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` (including 0 and ``mask`` itself)."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@dataclass(frozen=True)
class SqMonomial:
    """A squarefree monomial, identified with its support."""

    mask: int

    @classmethod
    def of(cls, *indices: int) -> "SqMonomial":
        return cls(mask_of(indices))

    @classmethod
    def from_indices(cls, indices: Iterable[int]) -> "SqMonomial":
        return cls(mask_of(indices))

    @property
    def support(self) -> tuple[int, ...]:
        return indices_of(self.mask)

    @property
    def degree(self) -> int:
        return popcount(self.mask)

    def sort_key(self):
        return mask_key(self.mask)

    def __lt__(self, other: "SqMonomial") -> bool:
        return self.sort_key() < other.sort_key()

    def __le__(self, other: "SqMonomial") -> bool:
        return self.sort_key() <= other.sort_key()

    def __gt__(self, other: "SqMonomial") -> bool:
        return self.sort_key() > other.sort_key()

    def __ge__(self, other: "SqMonomial") -> bool:
        return self.sort_key() >= other.sort_key()

    def __str__(self) -> str:
        if not self.mask:
            return "1"
        return "*".join(f"x{t}" for t in self.support)

    def __repr__(self) -> str:
        return f"SqMonomial({self})"


ONE = SqMonomial(0)


def divides(a: SqMonomial, b: SqMonomial) -> bool:
    return a.mask & ~b.mask == 0


def lcm(a: SqMonomial, b: SqMonomial) -> SqMonomial:
    return SqMonomial(a.mask | b.mask)


def gcd(a: SqMonomial, b: SqMonomial) -> SqMonomial:
    return SqMonomial(a.mask & b.mask)


def minimal_masks(masks: Iterable[int]) -> list[int]:
    """Divisibility-minimal elements of ``masks``, deduplicated, canonically sorted."""
    ordered = sorted(set(masks), key=mask_key)
    kept: list[int] = []
    for m in ordered:
        # anything dividing m has degree <= deg m and so was seen earlier
        if not any(g & ~m == 0 for g in kept):
            kept.append(m)
    return kept


@dataclass(frozen=True)
class MonomialIdeal:
    """A squarefree monomial ideal in ``K[x_1, ..., x_n]``.

    ``gens`` is always the canonically sorted antichain of minimal generators;
    build instances through :func:`minimalize` or :meth:`from_masks`.
    The unit ideal (the whole ring) has the single generator ``1``.
    """

    n: int
    gens: tuple[SqMonomial, ...] = ()
    _masks: tuple[int, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VARS:
            raise InstanceError("n_range", f"n must lie in [0, {MAX_VARS}], got {self.n}")
        full = (1 << self.n) - 1
        for g in self.gens:
            if g.mask & ~full:
                raise ValueError(f"generator {g} uses a variable outside [1, {self.n}]")
        object.__setattr__(self, "_masks", tuple(g.mask for g in self.gens))

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int]) -> "MonomialIdeal":
        return cls(n, tuple(SqMonomial(m) for m in minimal_masks(masks)))

    @classmethod
    def zero(cls, n: int) -> "MonomialIdeal":
        return cls(n, ())

    @classmethod
    def unit(cls, n: int) -> "MonomialIdeal":
        return cls(n, (ONE,))

    @property
    def masks(self) -> tuple[int, ...]:
        return self._masks

    def is_zero(self) -> bool:
        return not self.gens

    def contains_mask(self, m: int) -> bool:
        return any(g & ~m == 0 for g in self._masks)

    def __contains__(self, m: SqMonomial) -> bool:
        return self.contains_mask(m.mask)

    def membership_table(self) -> bytearray:
        """Indicator of membership for all ``2**n`` squarefree monomials."""
        return _membership_table(self.n, self._masks)

    def __str__(self) -> str:
        return "(" + ", ".join(str(g) for g in self.gens) + ")"


_TABLE_CACHE: dict[tuple[int, tuple[int, ...]], bytearray] = {}


def _membership_table(n: int, masks: tuple[int, ...]) -> bytearray:
    key = (n, masks)
    tab = _TABLE_CACHE.get(key)
    if tab is not None:
        return tab
    size = 1 << n
    tab = bytearray(size)
    for g in masks:
        tab[g] = 1
    # upward closure, one variable at a time
    for t in range(n):
        bit = 1 << t
        for m in range(size):
            if tab[m] and not m & bit:
                tab[m | bit] = 1
    if len(_TABLE_CACHE) > 256:
        _TABLE_CACHE.clear()
    _TABLE_CACHE[key] = tab
    return tab


def minimalize(gens: Iterable[SqMonomial], n: int) -> MonomialIdeal:
    return MonomialIdeal.from_masks(n, (g.mask for g in gens))


def contains(ideal: MonomialIdeal, m: SqMonomial) -> bool:
    return ideal.contains_mask(m.mask)


def _same_ring(a: MonomialIdeal, b: MonomialIdeal) -> int:
    if a.n != b.n:
        raise ValueError(f"ideals live in different rings (n={a.n} vs n={b.n})")
    return a.n


def ideal_sum(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    n = _same_ring(a, b)
    return MonomialIdeal.from_masks(n, a.masks + b.masks)


def ideal_intersect(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    n = _same_ring(a, b)
    return MonomialIdeal.from_masks(n, (g | h for g in a.masks for h in b.masks))


def ideal_colon(j: MonomialIdeal, u: SqMonomial) -> MonomialIdeal:
    """The colon ideal ``(J : u)``: generator-wise removal of ``u``'s support."""
    return MonomialIdeal.from_masks(j.n, (g & ~u.mask for g in j.masks))


def ideal_subset(a: MonomialIdeal, b: MonomialIdeal) -> bool:
    """True iff ``a`` is contained in ``b``."""
    return all(b.contains_mask(g) for g in a.masks)


def ideal_equal(a: MonomialIdeal, b: MonomialIdeal) -> bool:
    return a.n == b.n and a.masks == b.masks


def principal(m: SqMonomial, n: int) -> MonomialIdeal:
    return MonomialIdeal(n, (m,))


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: characteristic 0 (the rationals) or a prime ``p``."""

    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if p < 0 or (p != 0 and not is_prime(p)):
            raise InstanceError("char_prime", f"characteristic must be 0 or a prime, got {p}")

    def __str__(self) -> str:
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"


QQ = FieldSpec(0)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Instance:
    """A pair ``J`` strictly inside ``I`` of squarefree monomial ideals.

    Validation is strict: ``J`` must be a proper subideal of ``I`` and be
    generated in degrees at least ``d + 1`` where ``d`` is the least generator
    degree of ``I``.
    """

    n: int
    I: MonomialIdeal
    J: MonomialIdeal
    field: FieldSpec = QQ

    def __post_init__(self):
        I, J = self.I, self.J
        if I.n != self.n or J.n != self.n:
            raise InstanceError("n_mismatch", "I and J must live in the ring with n variables")
        if I.is_zero():
            raise InstanceError("I_nonzero", "I must have at least one generator")
        if any(g.mask == 0 for g in I.gens + J.gens):
            raise InstanceError("no_unit_generator", "the monomial 1 cannot generate I or J")
        if not ideal_subset(J, I):
            bad = next(g for g in J.gens if g not in I)
            raise InstanceError("J_subset_of_I", f"generator {bad} of J is not in I")
        if ideal_subset(I, J):
            raise InstanceError("J_proper", "J equals I")
        d = self.d
        for g in J.gens:
            if g.degree < d + 1:
                raise InstanceError(
                    "J_degree_normalization",
                    f"generator {g} of J has degree {g.degree} < d+1 = {d + 1}",
                )

    @classmethod
    def from_lists(cls, n: int, I: Sequence[Sequence[int]], J: Sequence[Sequence[int]],
                   char: int = 0) -> "Instance":
        return cls(
            n,
            MonomialIdeal.from_masks(n, (mask_of(g) for g in I)),
            MonomialIdeal.from_masks(n, (mask_of(g) for g in J)),
            FieldSpec(char),
        )

    @cached_property
    def d(self) -> int:
        return min(g.degree for g in self.I.gens)

    @cached_property
    def F(self) -> tuple[SqMonomial, ...]:
        return tuple(g for g in self.I.gens if g.degree == self.d)

    @cached_property
    def E(self) -> tuple[SqMonomial, ...]:
        return tuple(g for g in self.I.gens if g.degree > self.d)

    @property
    def r(self) -> int:
        return len(self.F)

    def with_field(self, field: FieldSpec) -> "Instance":
        return Instance(self.n, self.I, self.J, field)


def quotient_masks(n: int, top: MonomialIdeal, bottom: MonomialIdeal) -> list[int]:
    """Masks of squarefree monomials in ``top`` but not ``bottom``, canonically sorted."""
    ttab = top.membership_table()
    btab = bottom.membership_table()
    return sorted((m for m in range(1 << n) if ttab[m] and not btab[m]), key=mask_key)


def quotient_monomials(inst: Instance) -> list[SqMonomial]:
    return [SqMonomial(m) for m in quotient_masks(inst.n, inst.I, inst.J)]


def used_variables(inst: Instance) -> int:
    used = 0
    for g in inst.I.masks + inst.J.masks:
        used |= g
    return used


def _remap(mask: int, old_to_new: dict[int, int]) -> int:
    return mask_of(old_to_new[t] for t in indices_of(mask))


def restrict_support(inst: Instance) -> tuple[Instance, tuple[int, ...]]:
    """Drop variables that divide no generator of ``I`` or ``J``.

    Returns the instance over the smaller ring and ``index_map`` with
    ``index_map[k - 1]`` the original index of new variable ``x_k``.  The
    depth of the new quotient is the old depth minus the number of dropped
    variables (each dropped variable is a free regular element).
    """
    index_map = indices_of(used_variables(inst))
    old_to_new = {old: new for new, old in enumerate(index_map, start=1)}
    m = len(index_map)
    I = MonomialIdeal.from_masks(m, (_remap(g, old_to_new) for g in inst.I.masks))
    J = MonomialIdeal.from_masks(m, (_remap(g, old_to_new) for g in inst.J.masks))
    return Instance(m, I, J, inst.field), index_map
