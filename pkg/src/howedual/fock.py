"""Fermionic Fock space on labeled modes, with (row, column) grid views.

Basis states are bitmasks over k modes; a set bit means the variable is
present, and monomials are written with ascending mode index.  For grid
spaces the flat index of variable x_{i,alpha} is alpha*n + i (column-major),
the single frozen convention every factorization and sign below derives
from.

Operators on a tensor factor (one row, one column, or a pair of rows or
columns) embed into the full space through the regrouping isomorphism that
sorts a monomial into factor blocks; its sign is computed explicitly, so no
parity assumption on the embedded operator is needed.
"""
from __future__ import annotations

import json
from fractions import Fraction
from math import comb

from .errors import HowedualError
from .linop import LinOp
from .scalar import QQi, q3_from_fractions

_NEG_ONE = (-1, 0, 1)
_ONE = (1, 0, 1)


def popcount_below(mask, mode):
    return (mask & ((1 << mode) - 1)).bit_count()


class FockSpace:
    """Exterior algebra on n_modes labeled fermionic modes."""

    def __init__(self, n_modes, grid=None):
        if grid is not None:
            n, m = grid
            if n * m != n_modes:
                raise HowedualError("grid does not match mode count")
        self.n_modes = n_modes
        self.grid = grid
        self.dim = 1 << n_modes

    def mode(self, i, alpha):
        """Flat index of x_{i,alpha} (0-based row i, column alpha)."""
        n, m = self._grid()
        if not (0 <= i < n and 0 <= alpha < m):
            raise HowedualError("grid index out of range")
        return alpha * n + i

    def _grid(self):
        if self.grid is None:
            raise HowedualError("space has no grid structure")
        return self.grid

    def row_modes(self, i):
        n, m = self._grid()
        return [alpha * n + i for alpha in range(m)]

    def col_modes(self, alpha):
        n, m = self._grid()
        return [alpha * n + i for i in range(n)]

    def factor_groups(self, axis):
        """Ordered mode groups for the tensor factorization along axis."""
        n, m = self._grid()
        if axis == "rows":
            return [self.row_modes(i) for i in range(n)]
        if axis == "cols":
            return [self.col_modes(a) for a in range(m)]
        raise HowedualError(f"unknown axis {axis!r}")

    def basis_label(self, mask):
        if mask == 0:
            return "1"
        names = []
        for mode in range(self.n_modes):
            if (mask >> mode) & 1:
                if self.grid is not None:
                    n, _ = self.grid
                    names.append(f"x{mode % n + 1}{mode // n + 1}")
                else:
                    names.append(f"x{mode + 1}")
        return " ".join(names)

    def basis_labels(self):
        return [self.basis_label(mask) for mask in range(self.dim)]

    # -- generators ----------------------------------------------------------

    def create(self, mode):
        """Left multiplication by x_mode with the Koszul sign."""
        self._check_mode(mode)
        bit = 1 << mode
        data = {}
        for mask in range(self.dim):
            if mask & bit:
                continue
            sign = _NEG_ONE if popcount_below(mask, mode) & 1 else _ONE
            data[(mask | bit, mask)] = sign
        return LinOp(self.dim, data, exact=True)

    def annihilate(self, mode):
        """Left superderivation with respect to x_mode."""
        self._check_mode(mode)
        bit = 1 << mode
        data = {}
        for mask in range(self.dim):
            if not mask & bit:
                continue
            sign = _NEG_ONE if popcount_below(mask, mode) & 1 else _ONE
            data[(mask & ~bit, mask)] = sign
        return LinOp(self.dim, data, exact=True)

    def number(self, mode):
        self._check_mode(mode)
        bit = 1 << mode
        return LinOp(self.dim,
                     {(m, m): _ONE for m in range(self.dim) if m & bit},
                     exact=True)

    def deg(self):
        return LinOp(self.dim,
                     {(m, m): (m.bit_count(), 0, 1)
                      for m in range(self.dim) if m},
                     exact=True)

    def identity(self, exact=True):
        return LinOp.identity(self.dim, exact)

    def _check_mode(self, mode):
        if not (0 <= mode < self.n_modes):
            raise HowedualError(f"mode {mode} out of range")

    # -- regrouping ----------------------------------------------------------

    def regroup(self, mask, groups):
        """Split a monomial into per-group local masks plus the sort sign.

        groups is a list of ordered mode lists partitioning the modes.  The
        sign is that of the permutation taking the globally ascending
        monomial to the concatenation of the group blocks (each block in its
        own listed order).
        """
        group_of = {}
        pos_in_group = {}
        for g, modes in enumerate(groups):
            for p, mode in enumerate(modes):
                group_of[mode] = g
                pos_in_group[mode] = p
        seq = [m for m in range(self.n_modes) if (mask >> m) & 1]
        keyed = [(group_of[m], pos_in_group[m]) for m in seq]
        inversions = 0
        for a in range(len(keyed)):
            for b in range(a + 1, len(keyed)):
                if keyed[a] > keyed[b]:
                    inversions += 1
        locals_ = []
        for modes in groups:
            lm = 0
            for p, mode in enumerate(modes):
                if (mask >> mode) & 1:
                    lm |= 1 << p
            locals_.append(lm)
        return locals_, (-1 if inversions & 1 else 1)

    def _recombine(self, locals_, groups):
        mask = 0
        for lm, modes in zip(locals_, groups):
            for p, mode in enumerate(modes):
                if (lm >> p) & 1:
                    mask |= 1 << mode
        return mask

    def embed(self, op, groups, acting):
        """Embed op (on the product of the `acting` groups) into this space.

        groups partitions the modes; acting lists group indices, and op is a
        LinOp on the Fock space whose modes are the concatenation of those
        groups' mode lists.  All regrouping Koszul signs are computed here.
        """
        act_modes = []
        for g in acting:
            act_modes.extend(groups[g])
        sub_dim = 1 << len(act_modes)
        if op.dim != sub_dim:
            raise HowedualError("operator does not match the acting factors")
        rest = [g for g in range(len(groups)) if g not in acting]
        two_groups = [act_modes, [m for g in rest for m in groups[g]]]

        cols = {}
        for (r, c), v in op.data.items():
            cols.setdefault(c, []).append((r, v))

        data = {}
        exact = op.exact
        for mask in range(self.dim):
            (loc_act, loc_rest), sign_in = self.regroup(mask, two_groups)
            hits = cols.get(loc_act)
            if not hits:
                continue
            for r, v in hits:
                new_mask = self._recombine([r, loc_rest], two_groups)
                _, sign_out = self.regroup(new_mask, two_groups)
                s = sign_in * sign_out
                if exact:
                    a, b, d = v
                    w = (a * s, b * s, d)
                else:
                    w = v * s
                key = (new_mask, mask)
                if key in data:
                    raise HowedualError("embed produced a duplicate entry")
                data[key] = w
        return LinOp(self.dim, data, exact)

    def factor_permutation(self, axis, a, b):
        """Plain (non-super) swap of tensor factors a, b along axis."""
        groups = self.factor_groups(axis)
        if a == b or not (0 <= a < len(groups) and 0 <= b < len(groups)):
            raise HowedualError("need two distinct factor indices")
        data = {}
        for mask in range(self.dim):
            locals_, sign_in = self.regroup(mask, groups)
            swapped = list(locals_)
            swapped[a], swapped[b] = swapped[b], swapped[a]
            new_mask = self._recombine(swapped, groups)
            _, sign_out = self.regroup(new_mask, groups)
            s = sign_in * sign_out
            data[(new_mask, mask)] = (s, 0, 1)
        return LinOp(self.dim, data, exact=True)

    def berezin_fourier(self, j):
        """Odd Fourier transform acting on the j-th row factor."""
        n, m = self._grid()
        if not 0 <= j < n:
            raise HowedualError("row factor out of range")
        local = berezin_fourier_local(m)
        groups = self.factor_groups("rows")
        return self.embed(local, groups, [j])

    # -- interchange format ----------------------------------------------------

    def op_to_json(self, op):
        trips = []
        for (r, c), v in sorted(op.data.items()):
            if op.exact:
                a, b, d = v
                re = Fraction(a, d)
                im = Fraction(b, d)
                trips.append([r, c, re.numerator, re.denominator,
                              im.numerator, im.denominator])
            else:
                raise HowedualError("interchange format is exact-only")
        return {"dim": op.dim, "basis_labels": self.basis_labels(),
                "triplets": trips}

    def op_from_json(self, doc):
        entries = {}
        for r, c, rn, rd, imn, imd in doc["triplets"]:
            entries[(r, c)] = QQi(Fraction(rn, rd), Fraction(imn, imd))
        return LinOp.from_entries(doc["dim"], entries, exact=True)


def berezin_fourier_local(m):
    """tau on the m-mode factor: f(x) -> integral of e^{sum x_a y_a} f(y) dy.

    Computed in the exterior algebra on 2m modes (x = 0..m-1, y = m..2m-1);
    the Berezin integral keeps the coefficient of y_m...y_1 (descending
    order), i.e. of the ascending monomial times (-1)^{m(m-1)/2}.
    """
    def mul(term1, term2):
        mask1, s1 = term1
        mask2, s2 = term2
        if mask1 & mask2:
            return None
        sign = 1
        for mode in range(2 * m):
            if (mask2 >> mode) & 1:
                above = mask1 >> (mode + 1)
                if above.bit_count() & 1:
                    sign = -sign
        return (mask1 | mask2, s1 * s2 * sign)

    full_y = ((1 << m) - 1) << m
    eps = -1 if (m * (m - 1) // 2) & 1 else 1

    # expansion of prod_a (1 + x_a y_a): each subset J contributes x_J y_J
    kernel_terms = []
    for J in range(1 << m):
        term = (0, 1)
        for a in range(m):
            if (J >> a) & 1:
                term = mul(term, (1 << a, 1))        # x_a
                term = mul(term, (1 << (m + a), 1))  # y_a
        kernel_terms.append(term)

    data = {}
    for I in range(1 << m):
        y_I = (I << m, 1)  # substitute x -> y, ascending order kept
        for kt in kernel_terms:
            prod = mul(kt, y_I)
            if prod is None:
                continue
            mask, sign = prod
            if mask & full_y == full_y:
                out_mask = mask & ((1 << m) - 1)
                # move the x-block out front: x's already precede y's here
                key = (out_mask, I)
                if key in data:
                    raise HowedualError("berezin kernel produced duplicates")
                data[key] = (sign * eps, 0, 1)
    return LinOp(1 << m, data, exact=True)


def op_dump(space, op, path):
    with open(path, "w") as fh:
        json.dump(space.op_to_json(op), fh)


def op_load(space, path):
    with open(path) as fh:
        return space.op_from_json(json.load(fh))


def binomial_spectrum(k):
    """Expected multiplicity of deg eigenvalue j on a k-mode space."""
    return {j: comb(k, j) for j in range(k + 1)}
