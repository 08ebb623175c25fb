"""Exact linear algebra over Q and over GF(p).

The rational routines run fraction-free (Bareiss) elimination on integer
matrices obtained by clearing row denominators, so every intermediate value
stays an exact integer; back-substitution is done with Fractions on the
integer echelon form.  The GF(p) routines use plain modular elimination.
All pivot choices are first-nonzero, making results deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import List, Optional, Sequence, Tuple


def _integer_rows(rows) -> List[List[int]]:
    out = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        mult = lcm(*(f.denominator for f in fr)) if fr else 1
        out.append([int(f * mult) for f in fr])
    return out


def _bareiss(mat: List[List[int]]) -> Tuple[List[List[int]], List[int]]:
    """In-place fraction-free row echelon; returns (matrix, pivot columns)."""
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        pr = next((i for i in range(r, nrows) if mat[i][c]), None)
        if pr is None:
            continue
        if pr != r:
            mat[r], mat[pr] = mat[pr], mat[r]
        piv = mat[r][c]
        for i in range(r + 1, nrows):
            mic = mat[i][c]
            row_i = mat[i]
            row_r = mat[r]
            for j in range(c + 1, ncols):
                row_i[j] = (piv * row_i[j] - mic * row_r[j]) // prev
            row_i[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return mat, pivots


def _normalize_vector(vec: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    """Scale to a primitive integer vector whose first nonzero entry is positive."""
    mult = lcm(*(f.denominator for f in vec)) if vec else 1
    ints = [int(f * mult) for f in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    lead = next((x for x in ints if x), 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(Fraction(x) for x in ints)


def nullspace_rational(rows) -> List[Tuple[Fraction, ...]]:
    """Basis of the right nullspace of a rational matrix.

    Returns ncols - rank vectors, one per free column, each in primitive
    integer form.  An empty row list means every vector is in the nullspace.
    """
    rows = [list(r) for r in rows]
    if not rows:
        return []
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise ValueError("matrix is not rectangular")
    mat, pivots = _bareiss(_integer_rows(rows))
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r in range(len(pivots) - 1, -1, -1):
            c = pivots[r]
            s = sum((Fraction(mat[r][j]) * x[j] for j in range(c + 1, ncols)),
                    Fraction(0))
            x[c] = -s / mat[r][c]
        basis.append(_normalize_vector(x))
    return basis


def rank_rational(rows) -> int:
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    _, pivots = _bareiss(_integer_rows(rows))
    return len(pivots)


def solve_rational(rows, rhs) -> Optional[List[Fraction]]:
    """One exact solution of A x = b (free variables set to 0), or None."""
    rows = [list(r) + [b] for r, b in zip(rows, rhs)]
    if not rows:
        return []
    ncols = len(rows[0]) - 1
    mat, pivots = _bareiss(_integer_rows(rows))
    if pivots and pivots[-1] == ncols:
        return None  # pivot in the augmented column: inconsistent
    x = [Fraction(0)] * ncols
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        s = sum((Fraction(mat[r][j]) * x[j] for j in range(c + 1, ncols)),
                Fraction(0))
        x[c] = (Fraction(mat[r][ncols]) - s) / mat[r][c]
    return x


def rref_rational(rows) -> List[Tuple[Fraction, ...]]:
    """Nonzero rows of the reduced row echelon form (canonical spanning set)."""
    mat = [[Fraction(x) for x in r] for r in rows]
    if not mat:
        return []
    ncols = len(mat[0])
    r = 0
    for c in range(ncols):
        if r >= len(mat):
            break
        pr = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        piv = mat[r][c]
        mat[r] = [v / piv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        r += 1
    return [tuple(row) for row in mat[:r] if any(row)]


# -- GF(p) ------------------------------------------------------------------


def _modp_echelon(mat: List[List[int]], p: int) -> Tuple[List[List[int]], List[int]]:
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        pr = next((i for i in range(r, nrows) if mat[i][c] % p), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = pow(mat[r][c], -1, p)
        mat[r] = [(v * inv) % p for v in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c] % p:
                f = mat[i][c]
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    return mat, pivots


def nullspace_modp(rows, p: int) -> List[Tuple[int, ...]]:
    rows = [[int(x) % p for x in r] for r in rows]
    if not rows:
        return []
    ncols = len(rows[0])
    mat, pivots = _modp_echelon(rows, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for r, c in enumerate(pivots):
            x[c] = (-sum(mat[r][j] * x[j] for j in range(c + 1, ncols))) % p
        basis.append(tuple(x))
    return basis


def solve_modp(rows, rhs, p: int) -> Optional[List[int]]:
    aug = [[int(x) % p for x in r] + [int(b) % p] for r, b in zip(rows, rhs)]
    if not aug:
        return []
    ncols = len(aug[0]) - 1
    mat, pivots = _modp_echelon(aug, p)
    if pivots and pivots[-1] == ncols:
        return None
    x = [0] * ncols
    for r, c in enumerate(pivots):
        x[c] = (mat[r][ncols] - sum(mat[r][j] * x[j] for j in range(c + 1, ncols))) % p
    return x


def rref_modp(rows, p: int) -> List[Tuple[int, ...]]:
    rows = [[int(x) % p for x in r] for r in rows]
    if not rows:
        return []
    mat, pivots = _modp_echelon(rows, p)
    return [tuple(row) for row in mat[:len(pivots)]]
