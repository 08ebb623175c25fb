"""Vector fields and differential forms with polynomial coefficients.

Components may be exact rational polynomials (SparseSeries, truncation None
or finite) or GF(p) polynomials (ModPoly); the operations only assume ring
arithmetic plus ``diff``.  Two-form components are stored on ordered index
pairs i < j only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from hodgeloci.series import SparseSeries, total_degree


@dataclass(frozen=True)
class PolyContext:
    """Ordered variable names with per-variable Laurent flags, shared by all
    objects in a computation."""

    names: Tuple[str, ...]
    laurent: Tuple[bool, ...] = ()

    def __post_init__(self):
        names = tuple(self.names)
        lau = tuple(self.laurent) if self.laurent else (False,) * len(names)
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        if len(lau) != len(names):
            raise ValueError("laurent flag count does not match variable count")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "laurent", lau)

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ValueError(f"unknown variable {name!r}") from None

    # polynomial constructors over this context
    def zero(self) -> SparseSeries:
        return SparseSeries.zero(self.nvars, laurent=self.laurent)

    def one(self) -> SparseSeries:
        return SparseSeries.constant(self.nvars, 1, laurent=self.laurent)

    def constant(self, c) -> SparseSeries:
        return SparseSeries.constant(self.nvars, c, laurent=self.laurent)

    def var(self, which) -> SparseSeries:
        i = which if isinstance(which, int) else self.index(which)
        return SparseSeries.variable(self.nvars, i, laurent=self.laurent)

    def monomial(self, e, c=1) -> SparseSeries:
        return SparseSeries.monomial(self.nvars, e, c, laurent=self.laurent)

    def extend(self, extra_names: Sequence[str],
               extra_laurent: Optional[Sequence[bool]] = None) -> "PolyContext":
        lau = tuple(extra_laurent) if extra_laurent is not None else (False,) * len(extra_names)
        return PolyContext(self.names + tuple(extra_names), self.laurent + lau)

    def embed(self, poly: SparseSeries, into: "PolyContext") -> SparseSeries:
        """Re-express a polynomial of this context over a context that contains
        the same names (matched by name)."""
        positions = [into.index(n) for n in self.names]
        return poly.embed(into.nvars, positions, laurent=into.laurent)


def _check_ctx(a, b):
    if a.ctx != b.ctx:
        raise ValueError("context mismatch")


def _as_comps(ctx: PolyContext, comps) -> tuple:
    comps = tuple(comps)
    if len(comps) != ctx.nvars:
        raise ValueError(f"expected {ctx.nvars} components, got {len(comps)}")
    if any(c.nvars != ctx.nvars for c in comps):
        raise ValueError("component variable count does not match context")
    return comps


class VectorField:
    """Derivation sum_i c_i d/dx_i with polynomial components."""

    __slots__ = ("ctx", "comps")

    def __init__(self, ctx: PolyContext, comps):
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "comps", _as_comps(ctx, comps))

    def __setattr__(self, name, value):
        raise AttributeError("VectorField is immutable")

    def apply(self, f):
        """v(f) = sum_i c_i * df/dx_i."""
        out = None
        for i, c in enumerate(self.comps):
            term = c * f.diff(i)
            out = term if out is None else out + term
        return out if out is not None else f.ring_zero()

    def evaluate(self, point) -> tuple:
        """The tangent vector at a point: componentwise evaluation."""
        return tuple(c.eval_exact(point) for c in self.comps)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def __add__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        _check_ctx(self, other)
        return VectorField(self.ctx, tuple(a + b for a, b in zip(self.comps, other.comps)))

    def __neg__(self):
        return VectorField(self.ctx, tuple(-c for c in self.comps))

    def __sub__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self + (-other)

    def scale(self, f):
        return VectorField(self.ctx, tuple(f * c for c in self.comps))

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.ctx == other.ctx and self.comps == other.comps

    def __hash__(self):
        return hash((self.ctx, self.comps))

    def __repr__(self):
        return f"VectorField({list(self.comps)!r})"


class OneForm:
    """Differential 1-form sum_i c_i dx_i with polynomial components."""

    __slots__ = ("ctx", "comps")

    def __init__(self, ctx: PolyContext, comps):
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "comps", _as_comps(ctx, comps))

    def __setattr__(self, name, value):
        raise AttributeError("OneForm is immutable")

    @classmethod
    def zero(cls, ctx: PolyContext, like=None):
        z = like.ring_zero() if like is not None else ctx.zero()
        return cls(ctx, (z,) * ctx.nvars)

    def contract(self, v: VectorField):
        """The pairing omega(v) = sum_i omega_i * v_i."""
        _check_ctx(self, v)
        out = None
        for a, b in zip(self.comps, v.comps):
            term = a * b
            out = term if out is None else out + term
        return out

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def __add__(self, other):
        if not isinstance(other, OneForm):
            return NotImplemented
        _check_ctx(self, other)
        return OneForm(self.ctx, tuple(a + b for a, b in zip(self.comps, other.comps)))

    def __neg__(self):
        return OneForm(self.ctx, tuple(-c for c in self.comps))

    def __sub__(self, other):
        if not isinstance(other, OneForm):
            return NotImplemented
        return self + (-other)

    def scale(self, f):
        """Multiply by a polynomial (or scalar) coefficient."""
        return OneForm(self.ctx, tuple(f * c for c in self.comps))

    def __eq__(self, other):
        if not isinstance(other, OneForm):
            return NotImplemented
        return self.ctx == other.ctx and self.comps == other.comps

    def __hash__(self):
        return hash((self.ctx, self.comps))

    def __repr__(self):
        return f"OneForm({list(self.comps)!r})"


class TwoForm:
    """Differential 2-form; components stored on ordered pairs i < j."""

    __slots__ = ("ctx", "comps")

    def __init__(self, ctx: PolyContext, comps: Dict[Tuple[int, int], object]):
        clean = {}
        for (i, j), c in comps.items():
            if i >= j:
                raise ValueError("two-form components must be indexed i < j")
            if not c.is_zero():
                clean[(i, j)] = c
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "comps", clean)

    def __setattr__(self, name, value):
        raise AttributeError("TwoForm is immutable")

    @classmethod
    def zero(cls, ctx: PolyContext):
        return cls(ctx, {})

    def component(self, i: int, j: int):
        """Coefficient of dx_i ^ dx_j for any i != j (antisymmetry applied)."""
        if i < j:
            c = self.comps.get((i, j))
            return c if c is not None else self.ctx.zero()
        c = self.comps.get((j, i))
        return -c if c is not None else self.ctx.zero()

    def is_zero(self) -> bool:
        return not self.comps

    def __add__(self, other):
        if not isinstance(other, TwoForm):
            return NotImplemented
        _check_ctx(self, other)
        out = dict(self.comps)
        for k, c in other.comps.items():
            s = out.get(k)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return TwoForm(self.ctx, out)

    def __neg__(self):
        return TwoForm(self.ctx, {k: -c for k, c in self.comps.items()})

    def __sub__(self, other):
        if not isinstance(other, TwoForm):
            return NotImplemented
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, TwoForm):
            return NotImplemented
        return self.ctx == other.ctx and self.comps == other.comps

    def __hash__(self):
        return hash((self.ctx, tuple(sorted(self.comps.items(), key=lambda t: t[0]))))

    def __repr__(self):
        return f"TwoForm({self.comps!r})"


# -- exterior calculus ---------------------------------------------------------


def d_poly(f, ctx: PolyContext) -> OneForm:
    """Exterior derivative of a polynomial: sum_i df/dx_i dx_i."""
    return OneForm(ctx, tuple(f.diff(i) for i in range(ctx.nvars)))


def d_oneform(w: OneForm) -> TwoForm:
    """d(sum w_i dx_i) = sum_{i<j} (dw_j/dx_i - dw_i/dx_j) dx_i ^ dx_j."""
    n = w.ctx.nvars
    comps = {}
    for i in range(n):
        for j in range(i + 1, n):
            c = w.comps[j].diff(i) - w.comps[i].diff(j)
            if not c.is_zero():
                comps[(i, j)] = c
    return TwoForm(w.ctx, comps)


def wedge(a: OneForm, b: OneForm) -> TwoForm:
    """(a ^ b)_{ij} = a_i b_j - a_j b_i for i < j."""
    _check_ctx(a, b)
    n = a.ctx.nvars
    comps = {}
    for i in range(n):
        for j in range(i + 1, n):
            c = a.comps[i] * b.comps[j] - a.comps[j] * b.comps[i]
            if not c.is_zero():
                comps[(i, j)] = c
    return TwoForm(a.ctx, comps)


def pairing_eval(w: OneForm, v: Sequence, t: Sequence) -> Fraction:
    """Evaluate the bilinear pairing of a 1-form with a tangent vector at t."""
    if len(v) != w.ctx.nvars or len(t) != w.ctx.nvars:
        raise ValueError("vector/point length does not match context")
    total = Fraction(0)
    for c, vi in zip(w.comps, v):
        total += c.eval_exact(t) * Fraction(vi)
    return total


# -- matrices of 1-forms ---------------------------------------------------------


class FormMatrix:
    """Rectangular matrix of 1-forms over a shared context."""

    __slots__ = ("ctx", "entries")

    def __init__(self, ctx: PolyContext, entries):
        entries = tuple(tuple(row) for row in entries)
        if entries:
            w = len(entries[0])
            if any(len(row) != w for row in entries):
                raise ValueError("matrix is not rectangular")
        for row in entries:
            for f in row:
                if not isinstance(f, OneForm) or f.ctx != ctx:
                    raise ValueError("entries must be 1-forms over the shared context")
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("FormMatrix is immutable")

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.entries), len(self.entries[0]) if self.entries else 0)

    @classmethod
    def zeros(cls, ctx: PolyContext, rows: int, cols: int):
        z = OneForm.zero(ctx)
        return cls(ctx, [[z] * cols for _ in range(rows)])

    def d(self) -> List[List[TwoForm]]:
        return [[d_oneform(f) for f in row] for row in self.entries]

    def wedge_mul(self, other: "FormMatrix") -> List[List[TwoForm]]:
        """(A ^ B)_{ik} = sum_j A_{ij} ^ B_{jk}."""
        r, m = self.shape
        m2, c = other.shape
        if m != m2:
            raise ValueError("shape mismatch")
        out = []
        for i in range(r):
            row = []
            for k in range(c):
                acc = TwoForm.zero(self.ctx)
                for j in range(m):
                    acc = acc + wedge(self.entries[i][j], other.entries[j][k])
                row.append(acc)
            out.append(row)
        return out

    def mul_poly_vec(self, xs: Sequence) -> List[OneForm]:
        """Matrix of 1-forms times a column of polynomials."""
        r, c = self.shape
        if len(xs) != c:
            raise ValueError("length mismatch")
        out = []
        for i in range(r):
            acc = None
            for j in range(c):
                term = self.entries[i][j].scale(xs[j])
                acc = term if acc is None else acc + term
            out.append(acc if acc is not None else OneForm.zero(self.ctx))
        return out

    def mul_poly_mat(self, s: Sequence[Sequence]) -> "FormMatrix":
        """B * S with S a matrix of polynomials."""
        r, c = self.shape
        if len(s) != c:
            raise ValueError("shape mismatch")
        cols = len(s[0])
        out = []
        for i in range(r):
            row = []
            for k in range(cols):
                acc = None
                for j in range(c):
                    term = self.entries[i][j].scale(s[j][k])
                    acc = term if acc is None else acc + term
                row.append(acc)
            out.append(row)
        return FormMatrix(self.ctx, out)

    def pre_mul_poly_mat(self, s: Sequence[Sequence]) -> "FormMatrix":
        """S * B with S a matrix of polynomials."""
        r, c = self.shape
        rows = len(s)
        if len(s[0]) != r:
            raise ValueError("shape mismatch")
        out = []
        for i in range(rows):
            row = []
            for k in range(c):
                acc = None
                for j in range(r):
                    term = self.entries[j][k].scale(s[i][j])
                    acc = term if acc is None else acc + term
                row.append(acc)
            out.append(row)
        return FormMatrix(self.ctx, out)

    def __add__(self, other):
        if not isinstance(other, FormMatrix):
            return NotImplemented
        _check_ctx(self, other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return FormMatrix(self.ctx, [[a + b for a, b in zip(r1, r2)]
                                     for r1, r2 in zip(self.entries, other.entries)])

    def __neg__(self):
        return FormMatrix(self.ctx, [[-f for f in row] for row in self.entries])

    def __eq__(self, other):
        if not isinstance(other, FormMatrix):
            return NotImplemented
        return self.ctx == other.ctx and self.entries == other.entries

    def __repr__(self):
        return f"FormMatrix(shape={self.shape})"


def _shared_truncation(matrices) -> Optional[int]:
    shared = None
    for rows in matrices:
        for row in rows:
            for tf in row:
                for comp in tf.comps.values():
                    shared = SparseSeries._min_trunc(shared, comp.truncation)
    return shared


def _terms_at(comp, shared):
    if comp is None:
        return {}
    if shared is None:
        return comp.terms
    return {e: c for e, c in comp.terms.items() if total_degree(e) <= shared}


def integrability_check(b: FormMatrix) -> bool:
    """Exact entrywise equality of dB and B ^ B (square matrices).

    Exterior derivatives of truncated series are known one degree less than
    wedge products of the same input, so with truncated coefficients the two
    sides are compared at the shared truncation order.
    """
    r, c = b.shape
    if r != c:
        raise ValueError("integrability is defined for square matrices")
    db = b.d()
    bb = b.wedge_mul(b)
    shared = _shared_truncation([db, bb])
    for i in range(r):
        for j in range(c):
            keys = set(db[i][j].comps) | set(bb[i][j].comps)
            for key in keys:
                if _terms_at(db[i][j].comps.get(key), shared) != \
                        _terms_at(bb[i][j].comps.get(key), shared):
                    return False
    return True


def wedge_matvec(a: FormMatrix, forms: Sequence[OneForm]) -> List[TwoForm]:
    """(A ^ w)_i = sum_j A_{ij} ^ w_j for a column of 1-forms."""
    r, c = a.shape
    if len(forms) != c:
        raise ValueError("length mismatch")
    out = []
    for i in range(r):
        acc = TwoForm.zero(a.ctx)
        for j in range(c):
            acc = acc + wedge(a.entries[i][j], forms[j])
        out.append(acc)
    return out


# -- polynomial matrices ----------------------------------------------------------


def poly_mat_identity(ctx: PolyContext, n: int) -> List[List[SparseSeries]]:
    one, zero = ctx.one(), ctx.zero()
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def poly_mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> List[List]:
    rows, inner, cols = len(a), len(b), len(b[0])
    if len(a[0]) != inner:
        raise ValueError("shape mismatch")
    out = []
    for i in range(rows):
        row = []
        for k in range(cols):
            acc = None
            for j in range(inner):
                term = a[i][j] * b[j][k]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def poly_mat_sub(a, b) -> List[List]:
    return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(a, b)]


def poly_mat_d(s: Sequence[Sequence], ctx: PolyContext) -> FormMatrix:
    """Entrywise exterior derivative of a polynomial matrix."""
    return FormMatrix(ctx, [[d_poly(f, ctx) for f in row] for row in s])


def unipotent_inverse(y: Sequence[Sequence], ctx: PolyContext) -> List[List]:
    """Inverse of a unipotent matrix via the finite Neumann series
    (I - N + N^2 - ...), N = Y - I nilpotent."""
    n = len(y)
    ident = poly_mat_identity(ctx, n)
    nil = poly_mat_sub(y, ident)
    out = [row[:] for row in ident]
    power = ident
    for k in range(1, n):
        power = poly_mat_mul(power, nil)
        sign = -1 if k & 1 else 1
        out = [[a + (sign * b) for a, b in zip(r1, r2)] for r1, r2 in zip(out, power)]
    return out


def poly_mat_eval(s: Sequence[Sequence], point) -> List[List[Fraction]]:
    return [[f.eval_exact(point) for f in row] for row in s]
