"""Depth and projective dimension of squarefree quotients via Koszul homology.

For a module ``M = top/bottom`` of squarefree monomial ideals the Koszul
complex ``K(x; M)`` is multigraded, and only squarefree multidegrees carry
homology.  In the squarefree degree ``a`` the complex has basis
``m * e_A`` with ``A`` a subset of ``a`` and ``m = x^(a minus A)`` nonzero in
``M``; the homological index is ``|A|``.  So the whole computation reduces to
ranks of small sparse matrices, one complex per subset of ``[n]``.

``hochster_depth_oracle`` recomputes ``depth S/J`` on a completely separate
route (reduced homology of restrictions of the Stanley-Reisner complex, dense
elimination) and is only used for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .linalg import dense_rank, nullspace, sparse_rank
from .monomials import (
    QQ,
    FieldSpec,
    Instance,
    MonomialIdeal,
    ideal_subset,
    ideal_sum,
    indices_of,
    mask_key,
    popcount,
    principal,
    submasks,
)

INFINITE_DEPTH = math.inf
MAX_KOSZUL_VARS = 20


class InapplicableError(ValueError):
    """A lemma or construction was invoked outside its hypotheses."""


@dataclass(frozen=True)
class SqModule:
    """The quotient ``top / bottom`` restricted to squarefree multidegrees.

    Use ``MonomialIdeal.unit(n)`` as ``top`` to describe ``S/J``.
    """

    n: int
    top: MonomialIdeal
    bottom: MonomialIdeal

    def __post_init__(self):
        if self.top.n != self.n or self.bottom.n != self.n:
            raise ValueError("top and bottom must live in the ring with n variables")
        if not ideal_subset(self.bottom, self.top):
            raise ValueError("bottom is not contained in top")

    @classmethod
    def ring_mod(cls, J: MonomialIdeal) -> "SqModule":
        return cls(J.n, MonomialIdeal.unit(J.n), J)

    def indicator_table(self) -> bytearray:
        ttab = self.top.membership_table()
        btab = self.bottom.membership_table()
        return bytearray(t & (1 - b) for t, b in zip(ttab, btab))

    def is_zero(self) -> bool:
        return ideal_subset(self.top, self.bottom)


@dataclass
class KoszulReport:
    """Koszul homology dimensions of a squarefree module.

    ``betti`` maps ``(a_mask, i)`` to ``dim H_i(x; M)_a`` for the nonzero
    entries only.
    """

    n: int
    field: FieldSpec
    betti: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def pd(self) -> Optional[int]:
        if not self.betti:
            return None
        return max(i for _, i in self.betti)

    @property
    def depth(self):
        pd = self.pd
        return INFINITE_DEPTH if pd is None else self.n - pd

    def total_betti(self, i: int) -> int:
        return sum(v for (_, k), v in self.betti.items() if k == i)

    def triples(self) -> list[tuple[tuple[int, ...], int, int]]:
        """Stable list of ``(a as sorted indices, i, dim)``."""
        items = sorted(self.betti.items(), key=lambda kv: (mask_key(kv[0][0]), kv[0][1]))
        return [(indices_of(a), i, dim) for (a, i), dim in items]


def _sign(j: int, A: int) -> int:
    """``(-1)^{#{k in A : k < j}}`` with ``j`` given as a single-bit mask."""
    return -1 if popcount(A & (j - 1)) % 2 else 1


def koszul_component(a: int, ind: bytearray, verify: bool = False):
    """Basis and differentials of ``K(x; M)`` in squarefree degree ``a``.

    Returns ``(basis, diffs)`` where ``basis[i]`` lists the monomial parts
    ``B`` (so ``A = a - B``) in homological index ``i`` and ``diffs[i]`` is the
    list of sparse rows of the map ``K_i -> K_{i-1}`` indexed by position in
    ``basis[i - 1]``.
    """
    size = popcount(a)
    basis: list[list[int]] = [[] for _ in range(size + 1)]
    for B in submasks(a):
        if ind[B]:
            basis[size - popcount(B)].append(B)
    pos = [{B: k for k, B in enumerate(lvl)} for lvl in basis]
    diffs: list[list[dict[int, int]]] = [[] for _ in range(size + 1)]
    for i in range(1, size + 1):
        target = pos[i - 1]
        rows = []
        for B in basis[i]:
            A = a & ~B
            row = {}
            rest = A
            while rest:
                j = rest & -rest
                rest ^= j
                Bj = B | j
                if ind[Bj]:
                    row[target[Bj]] = _sign(j, A)
            rows.append(row)
        diffs[i] = rows
    if verify:
        for i in range(2, size + 1):
            _assert_square_zero(diffs[i], diffs[i - 1])
    return basis, diffs


def _assert_square_zero(upper, lower):
    for row in upper:
        acc: dict[int, int] = {}
        for k, v in row.items():
            for c, w in lower[k].items():
                acc[c] = acc.get(c, 0) + v * w
        if any(acc.values()):
            raise AssertionError("Koszul differential does not square to zero")


def koszul_homology(M: SqModule, field: FieldSpec = QQ, verify: bool = False) -> KoszulReport:
    """All nonzero ``dim H_i(x; M)_a`` over squarefree degrees ``a``.

    Every one of the ``2**n`` degrees is scanned; the projective dimension is
    the largest ``i`` seen.  ``verify=True`` additionally checks that each
    assembled differential squares to zero.
    """
    if M.n > MAX_KOSZUL_VARS:
        raise ValueError(f"n={M.n} exceeds the practical bound {MAX_KOSZUL_VARS}")
    ind = M.indicator_table()
    p = field.characteristic
    report = KoszulReport(M.n, field)
    for a in range(1 << M.n):
        basis, diffs = koszul_component(a, ind, verify)
        ranks = [0] * (len(basis) + 1)
        for i in range(1, len(basis)):
            if basis[i] and basis[i - 1]:
                ranks[i] = sparse_rank(diffs[i], p)
        for i, lvl in enumerate(basis):
            dim = len(lvl) - ranks[i] - ranks[i + 1]
            if dim:
                report.betti[(a, i)] = dim
    return report


def module_depth(M: SqModule, field: FieldSpec = QQ):
    return koszul_homology(M, field).depth


def depth(top: MonomialIdeal, bottom: MonomialIdeal, field: FieldSpec = QQ):
    """Depth of ``top / bottom`` (``top`` may be the unit ideal)."""
    return module_depth(SqModule(top.n, top, bottom), field)


def instance_module(inst: Instance, which: str = "I/J") -> SqModule:
    n = inst.n
    if which == "I/J":
        return SqModule(n, inst.I, inst.J)
    if which == "S/J":
        return SqModule.ring_mod(inst.J)
    if which == "S/I":
        return SqModule.ring_mod(inst.I)
    raise ValueError(f"unknown quotient {which!r}")


def depth_of(inst: Instance, which: str = "I/J", field: Optional[FieldSpec] = None):
    return module_depth(instance_module(inst, which), field or inst.field)


def depth_mod(inst: Instance, extra: MonomialIdeal, field: Optional[FieldSpec] = None):
    """Depth of ``I / (J, extra)``; ``extra`` must lie in ``I``."""
    return depth(inst.I, ideal_sum(inst.J, extra), field or inst.field)


# ---------------------------------------------------------------------------
# independent oracle


def reduced_homology_dims(faces: list[int], p: int) -> dict[int, int]:
    """Reduced simplicial homology of a complex given by all its faces.

    The empty face is included, so the complex ``{empty}`` has
    ``H_{-1} = 1``.
    """
    by_dim: dict[int, list[int]] = {}
    for F in faces:
        by_dim.setdefault(popcount(F) - 1, []).append(F)
    index = {k: {F: i for i, F in enumerate(v)} for k, v in by_dim.items()}
    ranks: dict[int, int] = {}
    for k, cells in by_dim.items():
        if k < 0 or (k - 1) not in by_dim:
            continue
        lower = index[k - 1]
        matrix = [[0] * len(cells) for _ in range(len(lower))]
        for col, F in enumerate(cells):
            verts = indices_of(F)
            for pos, v in enumerate(verts):
                matrix[lower[F & ~(1 << (v - 1))]][col] = -1 if pos % 2 else 1
        ranks[k] = dense_rank(matrix, p)
    dims = {}
    for k, cells in by_dim.items():
        h = len(cells) - ranks.get(k, 0) - ranks.get(k + 1, 0)
        if h:
            dims[k] = h
    return dims


def hochster_depth_oracle(J: MonomialIdeal, field: FieldSpec = QQ) -> int:
    """``depth S/J`` from the reduced homology of the restrictions ``Delta_J|_a``.

    ``beta_{i,a}(S/J) = dim H~_{|a|-i-1}(Delta_J|_a)`` where ``Delta_J`` is the
    complex of non-members of ``J``.
    """
    n = J.n
    if J.contains_mask(0):
        raise ValueError("J is the unit ideal")
    p = field.characteristic
    nonmembers = [m for m in range(1 << n) if not J.contains_mask(m)]
    pd = 0
    for a in range(1 << n):
        faces = [F for F in nonmembers if F & ~a == 0]
        size = popcount(a)
        for k in reduced_homology_dims(faces, p):
            pd = max(pd, size - k - 1)
    return n - pd


# ---------------------------------------------------------------------------
# cycle descent witness


@dataclass
class WitnessReport:
    """Outcome of the cycle descent.

    ``z_j`` maps the support of each monomial coefficient to its scalar.
    ``unsigned_is_cycle`` records whether the same sum taken without the
    contraction signs would also have been a cycle (in general it is not).
    """

    r_idx: int
    field: FieldSpec
    y: dict[int, object]
    m_idx: int
    j: int
    z_j: dict[int, object]
    boundary_zero: bool
    nonzero: bool
    nonzero_in_homology: bool
    unsigned_is_cycle: bool

    @property
    def ok(self) -> bool:
        return self.boundary_zero and self.nonzero


def _apply_differential(chain: dict[int, object], a: int, ind: bytearray, p: int) -> dict[int, object]:
    """Boundary of ``sum c_B x^B e_{a - B}`` in degree ``a``; keys are the monomial parts."""
    out: dict[int, object] = {}
    for B, c in chain.items():
        A = a & ~B
        rest = A
        while rest:
            j = rest & -rest
            rest ^= j
            Bj = B | j
            if ind[Bj]:
                out[Bj] = out.get(Bj, 0) + _sign(j, A) * c
    if p:
        return {k: v % p for k, v in out.items() if v % p}
    return {k: v for k, v in out.items() if v}


def witness_cycle_descent(inst: Instance, r_idx: int, field: Optional[FieldSpec] = None) -> WitnessReport:
    """Build the explicit lower-degree cycle from a top Koszul class.

    ``r_idx`` is the 0-based position in ``inst.F`` of the generator playing
    the role of the one added to ``J``.  Requires ``depth I/(J, f) = d``.
    """
    field = field or inst.field
    p = field.characteristic
    n, d, F = inst.n, inst.d, inst.F
    if len(F) < 2:
        raise InapplicableError("needs at least two degree-d generators")
    if not 0 <= r_idx < len(F):
        raise IndexError(f"generator index {r_idx} out of range")
    fr = F[r_idx]
    reduced = SqModule(n, inst.I, ideal_sum(inst.J, principal(fr, n)))
    dep = module_depth(reduced, field)
    if dep != d:
        raise InapplicableError(f"depth I/(J,f) = {dep} != d = {d}")

    # pd = n - d forces the class into degree [n]; nothing maps into K_{n-d}
    full = (1 << n) - 1
    ind_red = reduced.indicator_table()
    cols = [B for B in (f.mask for f in F) if ind_red[B]]
    rows_idx: dict[int, int] = {}
    entries = []
    for ci, B in enumerate(cols):
        for Bj, v in _apply_differential({B: 1}, full, ind_red, 0).items():
            r = rows_idx.setdefault(Bj, len(rows_idx))
            entries.append((r, ci, v))
    matrix = [[0] * len(cols) for _ in range(len(rows_idx))]
    for r, ci, v in entries:
        matrix[r][ci] = v
    kernel = nullspace(matrix, len(cols), p)
    if not kernel:
        raise AssertionError("no top-degree cycle although depth equals d")
    vec = kernel[0]
    if not p:
        scale = math.lcm(*(x.denominator for x in vec))
        vec = [int(x * scale) for x in vec]
    gen_pos = {f.mask: k for k, f in enumerate(F)}
    y = {gen_pos[B]: c for B, c in zip(cols, vec) if c}

    m_idx = min(y)
    fm = F[m_idx]
    choices = indices_of(fr.mask & ~fm.mask)
    if not choices:
        raise AssertionError("no variable of f_r outside f_m")
    j = choices[0]
    jbit = 1 << (j - 1)
    a = full & ~jbit
    # contraction of z with e_j: dropping e_j from e_A costs the sign of its position
    z_j = {F[k].mask: c * _sign(jbit, full & ~F[k].mask)
           for k, c in y.items() if not F[k].mask & jbit}
    unsigned = {F[k].mask: c for k, c in y.items() if not F[k].mask & jbit}

    ind = SqModule(n, inst.I, inst.J).indicator_table()
    boundary = _apply_differential(z_j, a, ind, p)
    nonzero = any(ind[B] and c for B, c in z_j.items())
    in_hom = nonzero and _not_a_boundary(z_j, a, ind, p)
    return WitnessReport(
        r_idx=r_idx, field=field, y=y, m_idx=m_idx, j=j,
        z_j={indices_of(B): c for B, c in z_j.items()},
        boundary_zero=not boundary, nonzero=nonzero, nonzero_in_homology=in_hom,
        unsigned_is_cycle=not _apply_differential(unsigned, a, ind, p),
    )


def _not_a_boundary(chain: dict[int, object], a: int, ind: bytearray, p: int) -> bool:
    deg = popcount(next(iter(chain)))
    sources = [B for B in submasks(a) if ind[B] and popcount(B) == deg - 1]
    rows = [_apply_differential({B: 1}, a, ind, p) for B in sources]
    target = {B: c for B, c in chain.items() if (c % p if p else c)}
    keys = sorted({k for r in rows for k in r} | set(target))
    col = {k: i for i, k in enumerate(keys)}
    image = [{col[k]: v for k, v in r.items()} for r in rows]
    with_z = image + [{col[k]: v for k, v in target.items()}]
    return sparse_rank(with_z, p) > sparse_rank(image, p)
