"""Exact rank and kernel computations.

Two independent routes are kept on purpose:

* :func:`sparse_rank` reduces rows given as ``{column: value}`` dicts into an
  echelon table keyed by leading column.  Over the rationals it never divides:
  rows are combined as ``a*row - b*pivot`` and then scaled down by their
  content, so every entry stays an integer.
* :func:`dense_rank` is textbook Bareiss elimination (characteristic 0) or
  Gauss-Jordan mod ``p`` on a dense list-of-lists.

No floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Row = dict[int, int]


def _content_normalize(row: Row) -> Row:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


def sparse_rank(rows: Sequence[Row], p: int = 0) -> int:
    """Rank of the matrix whose rows are ``rows``; ``p = 0`` means over QQ."""
    pivots: dict[int, Row] = {}
    rank = 0
    for src in rows:
        if not src:
            continue
        if p:
            row = {c: v % p for c, v in src.items() if v % p}
        else:
            row = dict(src)
        while row:
            lead = min(row)
            piv = pivots.get(lead)
            if piv is None:
                if p:
                    inv = pow(row[lead], -1, p)
                    row = {c: v * inv % p for c, v in row.items()}
                else:
                    row = _content_normalize(row)
                pivots[lead] = row
                rank += 1
                break
            a = row[lead]
            if p:
                # pivot rows are monic
                for c, v in piv.items():
                    nv = (row.get(c, 0) - a * v) % p
                    if nv:
                        row[c] = nv
                    else:
                        row.pop(c, None)
            else:
                b = piv[lead]
                g = gcd(a, b)
                fa, fb = b // g, a // g
                new = {c: fa * v for c, v in row.items()} if fa != 1 else row
                for c, v in piv.items():
                    nv = new.get(c, 0) - fb * v
                    if nv:
                        new[c] = nv
                    else:
                        new.pop(c, None)
                row = _content_normalize(new)
    return rank


def dense_rank(matrix: Sequence[Sequence[int]], p: int = 0) -> int:
    """Rank of a dense integer matrix; Bareiss for ``p = 0``, Gauss mod ``p`` otherwise."""
    m = [list(r) for r in matrix]
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    if p:
        m = [[v % p for v in r] for r in m]
    rank = 0
    prev = 1
    for col in range(ncols):
        pr = next((i for i in range(rank, nrows) if m[i][col]), None)
        if pr is None:
            continue
        m[rank], m[pr] = m[pr], m[rank]
        piv = m[rank][col]
        if p:
            inv = pow(piv, -1, p)
            m[rank] = [v * inv % p for v in m[rank]]
            for i in range(rank + 1, nrows):
                f = m[i][col]
                if f:
                    ri, rr = m[i], m[rank]
                    m[i] = [(ri[k] - f * rr[k]) % p for k in range(ncols)]
        else:
            for i in range(rank + 1, nrows):
                ri, rr = m[i], m[rank]
                f = ri[col]
                # Bareiss step: the division by the previous pivot is exact
                m[i] = [(piv * ri[k] - f * rr[k]) // prev for k in range(ncols)]
            prev = piv
        rank += 1
        if rank == nrows:
            break
    return rank


def nullspace(matrix: Sequence[Sequence[int]], ncols: int, p: int = 0) -> list[list]:
    """Basis of ``{y : matrix @ y = 0}``.

    Entries are ``Fraction`` over QQ (``p = 0``) or ints in ``[0, p)``.
    """
    if p:
        m = [[v % p for v in r] for r in matrix]
        zero, one = 0, 1

        def div(a, b):
            return a * pow(b, -1, p) % p

        def red(v):
            return v % p
    else:
        m = [[Fraction(v) for v in r] for r in matrix]
        zero, one = Fraction(0), Fraction(1)

        def div(a, b):
            return a / b

        def red(v):
            return v

    pivot_cols: list[int] = []
    row = 0
    for col in range(ncols):
        pr = next((i for i in range(row, len(m)) if m[i][col]), None)
        if pr is None:
            continue
        m[row], m[pr] = m[pr], m[row]
        piv = m[row][col]
        m[row] = [div(v, piv) for v in m[row]]
        for i in range(len(m)):
            if i != row and m[i][col]:
                f = m[i][col]
                m[i] = [red(a - f * b) for a, b in zip(m[i], m[row])]
        pivot_cols.append(col)
        row += 1
    free = [c for c in range(ncols) if c not in set(pivot_cols)]
    basis = []
    for fc in free:
        y = [zero] * ncols
        y[fc] = one
        for r, pc in enumerate(pivot_cols):
            y[pc] = red(-m[r][fc])
        basis.append(y)
    return basis
