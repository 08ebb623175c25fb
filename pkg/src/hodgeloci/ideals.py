"""Degree-bounded ideal membership and bounded duals of 1-form modules.

Membership is decided by exact linear algebra on monomial coefficients with
cofactor degrees capped by the caller, so a positive answer is a certificate
(YES) while failure of the bounded search is only UNKNOWN, never a disproof.
The same linear-algebra reduction computes degree-bounded generating sets of
the annihilator of a list of 1-forms, optionally relative to an ideal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from hodgeloci import linalg
from hodgeloci.forms import OneForm, PolyContext, VectorField
from hodgeloci.modp import ModPoly
from hodgeloci.series import SparseSeries

YES = "YES"
UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class IdealGens:
    """A finite list of polynomial generators of an ideal."""

    ctx: PolyContext
    gens: Tuple[object, ...]

    def __post_init__(self):
        object.__setattr__(self, "gens",
                           tuple(g for g in self.gens if not g.is_zero()))

    @property
    def is_zero_ideal(self) -> bool:
        return not self.gens

    def max_degree(self) -> int:
        return max((g.degree() for g in self.gens), default=0)


def monomials_upto(nvars: int, deg: int) -> List[Tuple[int, ...]]:
    """All exponent vectors of total degree <= deg, graded-lex order."""
    out = []

    def descend(i, prefix, rem):
        if i == nvars:
            out.append(tuple(prefix))
            return
        for v in range(rem + 1):
            descend(i + 1, prefix + [v], rem - v)

    descend(0, [], deg)
    out.sort(key=lambda e: (sum(e), e))
    return out


def _field_of(polys) -> Optional[int]:
    """None for rational coefficients, p for GF(p)."""
    for f in polys:
        if isinstance(f, ModPoly):
            return f.p
    return None


def _zero_scalar(p):
    return 0 if p else Fraction(0)


def _reject_laurent(polys):
    for f in polys:
        for e in f.terms:
            if any(x < 0 for x in e):
                raise ValueError("degree-bounded search does not support Laurent exponents")


def ideal_membership_bounded(f, gens: IdealGens, deg: int) -> str:
    """YES iff f = sum c_i g_i has a solution with cofactor degrees <= deg."""
    if deg < 0:
        raise ValueError("degree bound must be non-negative")
    if gens.is_zero_ideal:
        return YES if f.is_zero() else UNKNOWN
    if f.is_zero():
        return YES
    _reject_laurent([f, *gens.gens])
    nv = f.nvars
    p = _field_of([f, *gens.gens])
    cof_monos = monomials_upto(nv, deg)
    rowdeg = max(f.degree(), deg + gens.max_degree())
    row_monos = monomials_upto(nv, rowdeg)
    cols = [(j, m) for j in range(len(gens.gens)) for m in cof_monos]
    a_rows = []
    b = []
    for rm in row_monos:
        row = []
        for j, m in cols:
            shifted = tuple(x - y for x, y in zip(rm, m))
            if any(x < 0 for x in shifted):
                row.append(_zero_scalar(p))
            else:
                row.append(gens.gens[j].coefficient(shifted))
        a_rows.append(row)
        b.append(f.coefficient(rm))
    sol = linalg.solve_modp(a_rows, b, p) if p else linalg.solve_rational(a_rows, b)
    return YES if sol is not None else UNKNOWN


def dual_theta_bounded(omega_gens: Sequence[OneForm], deg: Optional[int] = None,
                       ibar: Optional[IdealGens] = None,
                       cofactor_deg: Optional[int] = None) -> List[VectorField]:
    """Degree-bounded generating set of the fields annihilating every listed
    1-form — or, when ``ibar`` is given, contracting into that ideal.

    Unknown field components of degree <= deg (default: twice the maximal
    generator degree) and, with ibar, unknown ideal cofactors of degree
    <= cofactor_deg make a homogeneous linear system on monomial
    coefficients; the nullspace, projected to the field unknowns and
    reduced, is returned as vector fields.
    """
    if not omega_gens:
        raise ValueError("need at least one 1-form generator")
    ctx = omega_gens[0].ctx
    if any(w.ctx != ctx for w in omega_gens):
        raise ValueError("context mismatch")
    if deg is None:
        deg = 2 * max(1, max(c.degree() for w in omega_gens for c in w.comps))
    nv = ctx.nvars
    all_polys = [c for w in omega_gens for c in w.comps]
    ideal_gens: Tuple = ()
    if ibar is not None and not ibar.is_zero_ideal:
        ideal_gens = ibar.gens
        all_polys += list(ideal_gens)
    p = _field_of(all_polys)
    if p is None:
        _reject_laurent(all_polys)

    omega_deg = max((c.degree() for w in omega_gens for c in w.comps), default=0)
    if cofactor_deg is None:
        cofactor_deg = deg + omega_deg
    v_monos = monomials_upto(nv, deg)
    v_cols = [(i, m) for i in range(nv) for m in v_monos]
    cof_monos = monomials_upto(nv, cofactor_deg) if ideal_gens else []
    h_cols = [(wi, j, m) for wi in range(len(omega_gens))
              for j in range(len(ideal_gens)) for m in cof_monos]

    rowdeg = deg + omega_deg
    if ideal_gens:
        rowdeg = max(rowdeg, cofactor_deg + max(g.degree() for g in ideal_gens))
    row_monos = monomials_upto(nv, rowdeg)

    rows = []
    for wi, w in enumerate(omega_gens):
        for rm in row_monos:
            row = []
            for i, m in v_cols:
                shifted = tuple(x - y for x, y in zip(rm, m))
                if any(x < 0 for x in shifted):
                    row.append(_zero_scalar(p))
                else:
                    row.append(w.comps[i].coefficient(shifted))
            for hwi, j, m in h_cols:
                if hwi != wi:
                    row.append(_zero_scalar(p))
                    continue
                shifted = tuple(x - y for x, y in zip(rm, m))
                if any(x < 0 for x in shifted):
                    row.append(_zero_scalar(p))
                else:
                    row.append(-ideal_gens[j].coefficient(shifted))
            rows.append(row)

    null = linalg.nullspace_modp(rows, p) if p else linalg.nullspace_rational(rows)
    nval = len(v_cols)
    v_parts = [vec[:nval] for vec in null if any(vec[:nval])]
    reduced = linalg.rref_modp(v_parts, p) if p else linalg.rref_rational(v_parts)

    fields = []
    for vec in reduced:
        comps = []
        for i in range(nv):
            terms = {}
            for ci, (vi, m) in enumerate(v_cols):
                if vi == i and vec[ci]:
                    terms[m] = vec[ci]
            if p:
                comps.append(ModPoly(p, nv, terms))
            else:
                comps.append(SparseSeries(nv, terms, laurent=ctx.laurent))
        fields.append(VectorField(ctx, tuple(comps)))
    return fields


def tangency_check(v: VectorField, omega_gens: Sequence[OneForm],
                   ibar: IdealGens, deg: int) -> str:
    """YES iff every contraction omega(v) lies in the ideal within the degree
    bound; a zero ideal means the contraction must vanish identically."""
    for w in omega_gens:
        if w.ctx != v.ctx:
            raise ValueError("context mismatch")
        contraction = w.contract(v)
        if ibar is None or ibar.is_zero_ideal:
            if not contraction.is_zero():
                return UNKNOWN
        elif ideal_membership_bounded(contraction, ibar, deg) != YES:
            return UNKNOWN
    return YES
