"""Boundary (dynamical) Weyl machinery.

Scalar side: A(x, lambda) in its Beta-function form with the explicit
(-2i)-branch, the integral-lambda product form, and the even/odd divided
power series, dynamical and not.  Operator side: triple-exponential Weyl
operators, exp(pi b/2) boundary operators, the B-operator series for g,
Beta-function boundary B-operators, sine operators, and the braid /
closed-R-matrix verifiers driving the rank-2 suites.

Exponent convention: the Beta form of A carries (-2i)^(lambda+1); the
variant printed with (-2i)^lambda is one knob away (A_EXPONENT_OFFSET).
Only the +1 convention reproduces A(x, 0) = x and the integral product
form, so it is the default.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction

from .errors import HowedualError, PoleHit
from .fusion import lam_is_exact
from .liealg import (
    spectral_apply,
    weyl_g,
    weyl_k,
    weyl_k_renormalized,
)
from .linop import LinOp
from .scalar import (
    QQi,
    inv_beta_c,
    pow_minus_two_i,
    sine_pi_half,
)

A_EXPONENT_OFFSET = 1


def _factorial_qqi(n):
    out = 1
    for j in range(2, n + 1):
        out *= j
    return QQi(out)


def a_scalar(x, lam):
    """A(x, lambda): exact when lambda is a nonnegative integer and x is
    exact; Beta-function float evaluation otherwise."""
    exact_lam = isinstance(lam, (int, Fraction)) and \
        Fraction(lam).denominator == 1 and lam >= 0
    if exact_lam and isinstance(x, QQi):
        n = int(lam)
        prod = QQi(1)
        for j in range(n + 1):
            prod = prod * (x + QQi(0, 2 * j - n))
        out = prod / _factorial_qqi(n + 1)
        if A_EXPONENT_OFFSET != 1:
            out = out / pow_minus_two_i(QQi(1 - A_EXPONENT_OFFSET))
        return out
    xf = complex(x)
    lf = complex(lam)
    pref = pow_minus_two_i(lf + A_EXPONENT_OFFSET)
    if abs(lf + 1) < 1e-12:
        raise PoleHit("A(x, lambda) prefactor pole at lambda = -1")
    return pref / (lf + 1) * inv_beta_c((1j * xf - lf) / 2, lf + 1)


def boundary_b_scalar(x, t):
    """(-2i)^t / (pi t) * Beta((t + ix)/2, (t - ix)/2), float."""
    xf = complex(x)
    tf = complex(t)
    if abs(tf) < 1e-12:
        raise PoleHit("boundary B-operator pole at t = 0")
    from .scalar import beta_c
    return pow_minus_two_i(tf) / (math.pi * tf) * \
        beta_c((tf + 1j * xf) / 2, (tf - 1j * xf) / 2)


# ---------------------------------------------------------------------------
# divided powers and the simplified series


def divided_power_even(x, k):
    """x_0^(2k) = (x^2 - (2k-2)^2)(x^2 - (2k-4)^2)...(x^2 - 0^2)/(2k)!"""
    x = Fraction(x)
    num = Fraction(1)
    for j in range(k):
        num *= x * x - (2 * j) ** 2
    return num / math.factorial(2 * k)


def divided_power_odd(x, k):
    """x_1^(2k+1) = (x^2 - (2k-1)^2)...(x^2 - 1^2) x/(2k+1)!"""
    x = Fraction(x)
    num = x
    for j in range(1, k + 1):
        num *= x * x - (2 * j - 1) ** 2
    return num / math.factorial(2 * k + 1)


def divided_series(x, lam=None):
    """The finite divided-power series s_0/s_1 at integral x.

    Without lambda this is the series representing the boundary Weyl
    operator value; with lambda, the dynamical series equal to the ratio
    a_0/a_1 of A-values.  Parity of x selects the series.
    """
    x = Fraction(x)
    if x.denominator != 1:
        raise HowedualError("divided series needs integral x")
    n = int(x)
    even = n % 2 == 0
    total = Fraction(0)
    k = 0
    while True:
        term = divided_power_even(n, k) if even else divided_power_odd(n, k)
        if k > 0 and term == 0:
            break
        if lam is not None:
            lamf = Fraction(lam)
            coeff = Fraction(1)
            if even:
                for j in range(k):
                    coeff *= (lamf + 1 - 2 * j) / (lamf - 2 * j)
            else:
                for j in range(k):
                    coeff *= (lamf - 2 * j) / (lamf - 1 - 2 * j)
            term *= coeff
        total += term if k % 2 == 0 else -term
        k += 1
        if 2 * k > abs(n) + 2:
            break
    return total


def a_ratio_product(x, lam):
    """Product forms a_0(x, lam) (x even) and a_1(x, lam) (x odd)."""
    x = int(x)
    lam = Fraction(lam)
    if x < 0:
        val = a_ratio_product(-x, lam)
        return val if x % 2 == 0 else -val
    out = Fraction(1)
    top = x
    floor = 2 if x % 2 == 0 else 3
    while top >= floor:
        out *= (top + lam) / (top - 2 - lam)
        top -= 2
    return out


def boundary_weyl_value(k):
    """exp(-i pi k / 2), the boundary Weyl operator on C_{-ik}, exact."""
    return (QQi(1), QQi(0, -1), QQi(-1), QQi(0, 1))[k % 4]


# ---------------------------------------------------------------------------
# operator families


def b_op_g(e, f, h, t_of_col, max_terms=None):
    """B-operator series sum_k f^k e^k / k! prod_j (t - h - j)^{-1}.

    h must be diagonal; t_of_col maps a column index to the (scalar)
    argument, which lets dynamical h-shifts evaluate blockwise.  Exact at
    exact arguments; PoleHit surfaces only if a vanishing denominator is
    actually hit by a nonzero column.
    """
    dim = e.dim
    if any(r != c for (r, c) in h.data):
        raise HowedualError("B-series needs a diagonal Cartan operator")
    hvals = [h.entry(v, v) for v in range(dim)]
    if callable(t_of_col):
        tcol = t_of_col
    else:
        tcol = lambda c: t_of_col
    out = LinOp.identity(dim, e.exact)
    ek = LinOp.identity(dim, e.exact)
    fk = LinOp.identity(dim, e.exact)
    k = 0
    fact = 1
    while True:
        k += 1
        fact *= k
        ek = ek @ e
        fk = fk @ f
        if ek.is_zero():
            return out
        core = fk @ ek

        def col_factor(c, k=k, fact=fact):
            t = tcol(c)
            exact = isinstance(t, (int, Fraction)) and core.exact
            den = QQi(Fraction(fact)) if exact else complex(fact)
            hv = hvals[c]
            for j in range(k):
                step = (QQi(t) - hv - j) if exact else \
                    (complex(t) - complex(hv) - j)
                if exact and isinstance(step, QQi) and step.is_zero():
                    raise PoleHit(f"B-series pole at column {c}, j={j}")
                if not exact and abs(step) < 1e-12:
                    raise PoleHit(f"B-series pole at column {c}, j={j}")
                den = den * step
            return (QQi(1) / den) if exact else (1.0 / den)

        out = out + core.scale_columns(col_factor)
        if max_terms is not None and k >= max_terms:
            return out


def a_op_g(module, i, lam):
    """A-operator s~_i B_i(<lambda, alpha_i^vee>) on a g-module."""
    root = module.datum.simple_root(i)
    t = module.datum.pair_coroot(tuple(lam), root)
    s = weyl_g(module, root)
    B = b_op_g(module.e(root), module.f(root), module.h_of_root(root), t)
    return s @ B


def a_op_k(kmod, i, lam, datum):
    """Boundary A-operator: a_scalar of b_{alpha_i} at <lambda, alpha_i^vee>."""
    root = datum.simple_root(i)
    t = datum.pair_coroot(tuple(lam), root)
    if isinstance(t, Fraction) and t.denominator == 1 and t >= 0:
        t = int(t)
    else:
        t = float(t) if isinstance(t, Fraction) else t
    b = kmod.b(root)
    return spectral_apply(b, kmod.eigs(root), lambda x: a_scalar(x, t))


def b_op_k(kmod, root, t):
    """Boundary B-operator: Beta-function scalar of b_root (float)."""
    b = kmod.b(root)
    return spectral_apply(b, kmod.eigs(root),
                          lambda x: boundary_b_scalar(x, t))


def sine_op(kmod, i, lam, datum):
    """S_i(lambda) = sin(pi(<lambda - rho, alpha_i^vee> - i b_i)/2)."""
    root = datum.simple_root(i)
    if lam_is_exact(lam):
        lam_rho = tuple(Fraction(x) - 1 for x in lam)
        mu = datum.pair_coroot(lam_rho, root)
    else:
        lam_rho = tuple(x - 1 for x in lam)
        mu = _pair_float(datum, lam_rho, root)
    b = kmod.b(root)

    def fn(x):
        if isinstance(mu, Fraction) and isinstance(x, QQi):
            return sine_pi_half(QQi(mu) - QQi(0, 1) * x)
        return cmath.sin(math.pi * (complex(mu) - 1j * complex(x)) / 2)

    return spectral_apply(b, kmod.eigs(root), fn)


def _pair_float(datum, lam, root):
    C = datum._inv_cartan_T()
    fw = datum.root_fw(root)
    total = 0.0
    for i in range(datum.rank):
        for j in range(datum.rank):
            total += float(lam[i]) * float(fw[j]) * float(C[i][j] * datum.d[j])
    return 2 * total / float(datum.root_norm2(root))


# ---------------------------------------------------------------------------
# braid and closed-R verifiers


def braid_words(datum, i, j):
    """Index words of both sides of the rank-2 braid relation."""
    m = datum.braid_order(i, j)
    left = [(i if k % 2 == 0 else j) for k in range(m)]
    right = [(j if k % 2 == 0 else i) for k in range(m)]
    return left, right


def braid_side(datum, family, word, lam, action="dot"):
    """Product family(x_{m-1}, w_{m-1}.lam) ... family(x_0, lam)."""
    ops = []
    cur = tuple(lam)
    for k, idx in enumerate(word):
        ops.append(family(idx, cur))
        if action == "dot":
            cur = datum.dot(idx, cur)
        elif action == "plain":
            cur = datum.reflect(idx, cur)
        else:
            raise HowedualError(f"unknown action {action!r}")
    out = ops[-1]
    for op in reversed(ops[:-1]):
        out = out @ op
    return out


def braid_residual(datum, family, lam, i=0, j=1, action="dot"):
    left, right = braid_words(datum, i, j)
    lhs = braid_side(datum, family, left, lam, action)
    rhs = braid_side(datum, family, right, lam, action)
    return lhs - rhs


def closed_r_residual(datum, family, lam, sequence):
    """Residual of prod_seq G^gamma(lam) = reversed product.

    family(root, lam) builds G^gamma(lam); it owns the coroot pairing so
    that shifted g-side arguments can be evaluated blockwise.
    """
    ops = [family(root, tuple(lam)) for root in sequence]
    lhs = ops[0]
    for op in ops[1:]:
        lhs = lhs @ op
    rhs = ops[-1]
    for op in reversed(ops[:-1]):
        rhs = rhs @ op
    return lhs - rhs


def b_op_k_closed_family(kmod, datum):
    """Boundary closed-R family: G^gamma(lam) = B^k_gamma(<lam, gamma^vee>)."""
    def fam(root, lam):
        t = datum.pair_coroot(lam, root)
        return b_op_k(kmod, root, float(t) if isinstance(t, Fraction) else t)
    return fam


def b_op_g_closed_family(module):
    """g-side closed-R family with the lam - rho + h/2 argument shift.

    G^gamma(lam) = B^g_gamma evaluated per weight column at
    <lam - rho, gamma^vee> + <mu_col, gamma^vee>/2.
    """
    datum = module.datum

    def fam(root, lam):
        base = datum.pair_coroot(
            tuple(Fraction(x) - 1 for x in lam), root)
        half = [datum.pair_coroot(w, root) / 2 for w in module.weights]

        def t_of_col(c):
            return base + half[c]

        return b_op_g(module.e(root), module.f(root),
                      module.h_of_root(root), t_of_col)
    return fam


def a2_renormalized_braid_residual(z1, z2):
    """Exact polynomial form of the A2 dynamical braid on the 2-dim rep.

    After clearing the Beta prefactors with z_j = exp(i pi lambda_j), the
    relation becomes a matrix identity over polynomials in z_1, z_2,
    checked here at exact Gaussian-rational sample points.
    """
    z1 = z1 if isinstance(z1, QQi) else QQi(z1)
    z2 = z2 if isinstance(z2, QQi) else QQi(z2)
    ii = QQi(0, 1)
    S = LinOp.from_entries(2, {(0, 0): 1, (0, 1): -1, (1, 0): 1, (1, 1): 1})
    Sinv = S.inverse()

    def D(z):
        return LinOp.from_entries(2, {(0, 0): ii * z + 1, (1, 1): z + ii})

    z12 = z1 * z2
    lhs = S @ D(z2) @ Sinv @ D(z12) @ S @ D(z1) @ Sinv
    rhs = D(z1) @ S @ D(z12) @ Sinv @ D(z2)
    return lhs - rhs


def boundary_tensor_compat_residual(X, V, i, lam):
    """Residual of the boundary A-operator tensor compatibility:
    A_{X(x)V}(lam) = G_{X,V}(s_i . lam) (A_X(lam - h|_V) (x) A_V(lam))
    G_{X,V}(lam)^{-1}."""
    from .fusion import abrr_solve_G
    from .linop import neumann_inverse
    from .liealg import restrict_to_k, tensor_k_g
    from .tensor import dyn_shifted, embed_plain

    datum = V.datum
    lam = tuple(lam)
    XV = tensor_k_g(X, restrict_to_k(V))
    lhs = a_op_k(XV, i, lam, datum)
    if lam_is_exact(lam):
        slam = datum.dot(i, lam)
    else:
        shifted = tuple(x + 1 for x in lam)
        refl = tuple(shifted[j] - shifted[i] * datum.cartan[j][i]
                     for j in range(datum.rank))
        slam = tuple(x - 1 for x in refl)
    G_s = abrr_solve_G(X, V, slam).operator
    G = abrr_solve_G(X, V, lam).operator
    Ginv = neumann_inverse(G)
    dims = [X.dim, V.dim]
    shifted_ax = dyn_shifted(lambda l: a_op_k(X, i, l, datum),
                             dims, [0], 1, V.weights, lam)
    av = embed_plain(a_op_g(V, i, lam), dims, [1])
    rhs = G_s @ (av @ shifted_ax) @ Ginv
    return lhs.to_float() - rhs.to_float() if not lam_is_exact(lam) \
        else lhs - rhs


def weyl_family(kmod, datum, renormalized=False):
    """family(i, lam) for the non-dynamical boundary Weyl operators."""
    if renormalized:
        def fam(i, lam):
            root = datum.simple_root(i)
            M, _ = weyl_k_renormalized(kmod.b(root), kmod.eigs(root))
            return M
        return fam

    def fam(i, lam):
        root = datum.simple_root(i)
        return weyl_k(kmod.b(root), kmod.eigs(root))
    return fam


def a_op_k_family(kmod, datum):
    return lambda i, lam: a_op_k(kmod, i, lam, datum)


def a_op_g_family(module):
    return lambda i, lam: a_op_g(module, i, lam)


def sine_family(kmod, datum):
    return lambda i, lam: sine_op(kmod, i, lam, datum)
