"""Sparse linear operators with exact Gaussian-rational or complex entries.

A LinOp is a square operator on a labeled basis, stored as a dict of
nonzero entries.  Exact mode keeps (a, b, d) integer triples (see
howedual.scalar); float mode keeps Python complex.  Compose/add/scale stay
exact in exact mode; converting exact -> float is explicit and one-way.
"""
from __future__ import annotations

from fractions import Fraction

from . import _backend as K
from .errors import HowedualError
from .scalar import (
    QQi,
    Q3_ONE,
    as_scalar,
    q3_abs2,
    q3_div,
    q3_from_fractions,
    q3_mul,
    q3_neg,
    q3_str,
    q3_sub,
    q3_to_complex,
)


def _coerce_value(v, exact):
    if exact:
        if isinstance(v, QQi):
            return v.t
        if isinstance(v, (int, Fraction)):
            return q3_from_fractions(v)
        if isinstance(v, tuple) and len(v) == 3:
            return v
        raise TypeError(f"not an exact scalar: {v!r}")
    if isinstance(v, QQi):
        return complex(v)
    return complex(v)


class LinOp:
    __slots__ = ("dim", "exact", "data")

    def __init__(self, dim, data=None, exact=True):
        self.dim = dim
        self.exact = exact
        self.data = data if data is not None else {}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zeros(cls, dim, exact=True):
        return cls(dim, {}, exact)

    @classmethod
    def identity(cls, dim, exact=True):
        if exact:
            return cls(dim, {(i, i): Q3_ONE for i in range(dim)}, True)
        return cls(dim, {(i, i): 1 + 0j for i in range(dim)}, False)

    @classmethod
    def from_entries(cls, dim, entries, exact=True):
        data = {}
        for (r, c), v in entries.items():
            w = _coerce_value(v, exact)
            if exact:
                if w[0] == 0 and w[1] == 0:
                    continue
            elif w == 0:
                continue
            data[(r, c)] = w
        return cls(dim, data, exact)

    @classmethod
    def diagonal(cls, values, exact=True):
        entries = {(i, i): v for i, v in enumerate(values)}
        return cls.from_entries(len(values), entries, exact)

    # -- conversions -------------------------------------------------------

    def to_float(self):
        if not self.exact:
            return self
        return LinOp(self.dim,
                     {k: q3_to_complex(v) for k, v in self.data.items()},
                     exact=False)

    def entry(self, r, c):
        v = self.data.get((r, c))
        if v is None:
            return QQi(0) if self.exact else 0j
        return QQi.from_triple(v) if self.exact else v

    def copy(self):
        return LinOp(self.dim, dict(self.data), self.exact)

    # -- algebra -----------------------------------------------------------

    def _pair(self, other):
        if self.dim != other.dim:
            raise HowedualError(
                f"dimension mismatch: {self.dim} vs {other.dim}")
        if self.exact == other.exact:
            return self, other
        return self.to_float(), other.to_float()

    def __matmul__(self, other):
        a, b = self._pair(other)
        if a.exact:
            return LinOp(a.dim, K.mat_mul_exact(a.data, b.data), True)
        return LinOp(a.dim, K.mat_mul_float(a.data, b.data), False)

    def __add__(self, other):
        a, b = self._pair(other)
        if a.exact:
            return LinOp(a.dim, K.mat_add_exact(a.data, b.data), True)
        return LinOp(a.dim, K.mat_add_float(a.data, b.data), False)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, s):
        s = as_scalar(s)
        if self.exact and isinstance(s, QQi):
            return LinOp(self.dim, K.mat_scale_exact(self.data, s.t), True)
        a = self.to_float()
        return LinOp(a.dim, K.mat_scale_float(a.data, complex(s)), False)

    def __mul__(self, s):
        return self.scale(s)

    __rmul__ = __mul__

    def commutator(self, other):
        return self @ other - other @ self

    def anticommutator(self, other):
        return self @ other + other @ self

    def pow(self, k):
        out = LinOp.identity(self.dim, self.exact)
        for _ in range(k):
            out = out @ self
        return out

    def kron(self, other):
        """Tensor product; index of (i1, i2) is i1*other.dim + i2."""
        a, b = (self, other) if self.exact == other.exact else (
            self.to_float(), other.to_float())
        d2 = b.dim
        data = {}
        if a.exact:
            for (r1, c1), v1 in a.data.items():
                for (r2, c2), v2 in b.data.items():
                    data[(r1 * d2 + r2, c1 * d2 + c2)] = q3_mul(v1, v2)
        else:
            for (r1, c1), v1 in a.data.items():
                for (r2, c2), v2 in b.data.items():
                    data[(r1 * d2 + r2, c1 * d2 + c2)] = v1 * v2
        return LinOp(a.dim * d2, data, a.exact)

    def scale_columns(self, factor_of_col):
        """Multiply column c by factor_of_col(c); factors must match mode."""
        data = {}
        if self.exact:
            for (r, c), v in self.data.items():
                f = factor_of_col(c)
                t = f.t if isinstance(f, QQi) else q3_from_fractions(f)
                if t[0] == 0 and t[1] == 0:
                    continue
                data[(r, c)] = q3_mul(v, t)
        else:
            for (r, c), v in self.data.items():
                w = v * complex(factor_of_col(c))
                if w != 0:
                    data[(r, c)] = w
        return LinOp(self.dim, data, self.exact)

    # -- predicates / norms --------------------------------------------------

    def is_zero(self):
        return not self.data

    def nnz(self):
        return len(self.data)

    def max_abs(self):
        """Max |entry| as a float (0.0 for the zero operator)."""
        if not self.data:
            return 0.0
        if self.exact:
            return max(abs(q3_to_complex(v)) for v in self.data.values())
        return max(abs(v) for v in self.data.values())

    def max_entry_str(self):
        """Exact wire string of a maximal-modulus entry ("0" if zero)."""
        if not self.data:
            return "0"
        if self.exact:
            v = max(self.data.values(), key=q3_abs2)
            return q3_str(v)
        v = max(self.data.values(), key=abs)
        return repr(v)

    def equals(self, other):
        d = self - other
        if d.exact:
            return d.is_zero()
        return d.max_abs() == 0.0

    # -- dense solves --------------------------------------------------------

    def dense(self):
        if self.exact:
            rows = [[(0, 0, 1)] * self.dim for _ in range(self.dim)]
        else:
            rows = [[0j] * self.dim for _ in range(self.dim)]
        for (r, c), v in self.data.items():
            rows[r][c] = v
        return rows

    def inverse(self):
        """Gauss-Jordan inverse; exact in exact mode."""
        n = self.dim
        if self.exact:
            a = self.dense()
            inv = LinOp.identity(n, True).dense()
            for col in range(n):
                piv = None
                for r in range(col, n):
                    if a[r][col][0] != 0 or a[r][col][1] != 0:
                        piv = r
                        break
                if piv is None:
                    raise HowedualError("singular operator")
                a[col], a[piv] = a[piv], a[col]
                inv[col], inv[piv] = inv[piv], inv[col]
                p = a[col][col]
                for c in range(n):
                    a[col][c] = q3_div(a[col][c], p)
                    inv[col][c] = q3_div(inv[col][c], p)
                for r in range(n):
                    if r == col:
                        continue
                    f = a[r][col]
                    if f[0] == 0 and f[1] == 0:
                        continue
                    for c in range(n):
                        a[r][c] = q3_sub(a[r][c], q3_mul(f, a[col][c]))
                        inv[r][c] = q3_sub(inv[r][c], q3_mul(f, inv[col][c]))
            entries = {}
            for r in range(n):
                for c in range(n):
                    v = inv[r][c]
                    if v[0] != 0 or v[1] != 0:
                        entries[(r, c)] = v
            return LinOp(n, entries, True)

        a = self.dense()
        inv = LinOp.identity(n, False).dense()
        for col in range(n):
            piv = max(range(col, n), key=lambda r: abs(a[r][col]))
            if abs(a[piv][col]) == 0:
                raise HowedualError("singular operator")
            a[col], a[piv] = a[piv], a[col]
            inv[col], inv[piv] = inv[piv], inv[col]
            p = a[col][col]
            a[col] = [x / p for x in a[col]]
            inv[col] = [x / p for x in inv[col]]
            for r in range(n):
                if r == col or a[r][col] == 0:
                    continue
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
        entries = {(r, c): inv[r][c]
                   for r in range(n) for c in range(n) if inv[r][c] != 0}
        return LinOp(n, entries, False)

    def __repr__(self):
        kind = "exact" if self.exact else "float"
        return f"LinOp(dim={self.dim}, {kind}, nnz={len(self.data)})"


def neumann_inverse(op, max_terms=None):
    """(I + N)^-1 = sum (-N)^k for nilpotent N = op - I."""
    n = op.dim
    N = op - LinOp.identity(n, op.exact)
    out = LinOp.identity(n, op.exact)
    term = LinOp.identity(n, op.exact)
    limit = max_terms if max_terms is not None else n + 1
    for _ in range(limit):
        term = (term @ N).scale(-1)
        if term.is_zero():
            return out
        out = out + term
    raise HowedualError("operator - I is not nilpotent; use .inverse()")


def exp_nilpotent(op):
    """exp of a nilpotent operator as the finite exact series."""
    out = LinOp.identity(op.dim, op.exact)
    term = LinOp.identity(op.dim, op.exact)
    k = 1
    while True:
        term = (term @ op).scale(Fraction(1, k) if op.exact else 1.0 / k)
        if term.is_zero():
            return out
        out = out + term
        k += 1
        if k > op.dim + 2:
            raise HowedualError("exp_nilpotent: operator is not nilpotent")


def exact_nullspace(rows, ncols):
    """Nullspace basis of an exact system given as sparse rows.

    rows: iterable of dicts col -> triple.  Returns a list of basis vectors,
    each a dict col -> QQi triple, from the reduced row echelon form.
    """
    work = [dict(r) for r in rows if r]
    pivots = {}  # col -> row dict (normalized, eliminated)
    for row in work:
        # eliminate known pivots
        for col in sorted(row):
            p = pivots.get(col)
            if p is None:
                continue
            f = row[col]
            for c2, v2 in p.items():
                cur = row.get(c2)
                w = q3_sub(cur, q3_mul(f, v2)) if cur is not None \
                    else q3_neg(q3_mul(f, v2))
                if w[0] == 0 and w[1] == 0:
                    row.pop(c2, None)
                else:
                    row[c2] = w
        if not row:
            continue
        col = min(row)
        inv = q3_div(Q3_ONE, row[col])
        row = {c: q3_mul(v, inv) for c, v in row.items()}
        # back-substitute into existing pivots
        for pcol, p in pivots.items():
            f = p.get(col)
            if f is None:
                continue
            for c2, v2 in row.items():
                cur = p.get(c2)
                w = q3_sub(cur, q3_mul(f, v2)) if cur is not None \
                    else q3_neg(q3_mul(f, v2))
                if w[0] == 0 and w[1] == 0:
                    p.pop(c2, None)
                else:
                    p[c2] = w
        pivots[col] = row
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = {fc: Q3_ONE}
        for pcol, p in pivots.items():
            v = p.get(fc)
            if v is not None:
                vec[pcol] = q3_neg(v)
        basis.append(vec)
    return basis
