"""Fusion and boundary fusion operators via the ladder recursions.

Both operators are produced at parameter points, never symbolically: the
defining commutation equation is solved degree by degree in the weight
filtration of the second tensor slot, dividing by the gamma-eigenvalue gap
at each rung.  The solved operator is unitriangular, so its inverse is a
finite Neumann series.  Residuals of the defining equations are returned
with every solve and are exactly zero in exact mode.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import HowedualError, ResonantLambda
from .liealg import restrict_to_k, tensor_g, tensor_k_g
from .linop import LinOp, neumann_inverse
from .scalar import QQi

FLOAT_GAP_GUARD = 1e-8


def lam_is_exact(lam):
    return all(isinstance(x, (int, Fraction)) for x in lam)


def gamma_weight_scalar(datum, lam, mu):
    """Scalar by which gamma(lambda) acts on the weight-mu space:
    (lambda + rho, mu) - (mu, mu)/2, in fundamental-weight coordinates."""
    if lam_is_exact(lam):
        lam_rho = tuple(Fraction(x) + 1 for x in lam)
        return datum.form(lam_rho, mu) - datum.form(mu, mu) / 2
    # float lambda: bilinearity through the exact Gram data
    C = datum._inv_cartan_T()
    total = 0.0
    for i in range(datum.rank):
        for j in range(datum.rank):
            total += (lam[i] + 1) * float(mu[j]) * float(C[i][j] * datum.d[j])
    return total - float(datum.form(mu, mu)) / 2


class FusionResult:
    """Solved (boundary) fusion operator with its ladder and residual."""

    def __init__(self, operator, lam, components, residual):
        self.operator = operator
        self.lam = lam
        self.components = components  # root-coordinate tuple -> LinOp
        self.residual = residual

    @property
    def residual_max(self):
        return self.residual.max_abs()

    def residual_is_zero(self):
        return self.residual.is_zero()

    def inverse(self):
        return neumann_inverse(self.operator)


def _fw_to_root_coords(datum, fw):
    """Solve beta_fw = A^T-free conversion: fw_i = sum_j a_{ij} c_j."""
    icT = datum._inv_cartan_T()  # (A^T)^{-1}, i.e. (A^{-1})^T
    n = datum.rank
    out = []
    for j in range(n):
        c = sum(Fraction(icT[i][j]) * Fraction(fw[i]) for i in range(n))
        out.append(c)
    return tuple(out)


def _cone_differences(datum, weights):
    """Root-coordinate tuples of weight differences lying in the cone."""
    seen = set()
    for wa in weights:
        for wb in weights:
            diff = tuple(Fraction(a) - Fraction(b) for a, b in zip(wa, wb))
            c = _fw_to_root_coords(datum, diff)
            if all(x.denominator == 1 and x >= 0 for x in c) and any(c):
                seen.add(tuple(int(x) for x in c))
    return seen


def _ladder_solve(datum, dim_first, second, terms, lam):
    """Shared ladder: solve [S, 1 (x) gamma(lam)] = T * S, S_0 = Id.

    terms: list of (root_step, LinOp on first (x) second); root_step is the
    root-coordinate increment of the second-slot weight.  Returns the
    component dict keyed by root-coordinate tuples.
    """
    exact = lam_is_exact(lam)
    dim_v = second.dim
    total_dim = dim_first * dim_v
    wt_cols = [second.weights[c % dim_v] for c in range(total_dim)]

    gaps = {}

    def gap(mu, beta_fw):
        key = (mu, beta_fw)
        if key not in gaps:
            g1 = gamma_weight_scalar(datum, lam, mu)
            mu2 = tuple(Fraction(a) + b for a, b in zip(mu, beta_fw))
            g2 = gamma_weight_scalar(datum, lam, mu2)
            gaps[key] = g1 - g2
        return gaps[key]

    diffs = _cone_differences(datum, second.weights)
    max_h = max((sum(c) for c in diffs), default=0)
    zero = tuple(0 for _ in range(datum.rank))
    components = {zero: LinOp.identity(total_dim, exact)}
    by_height = {0: [zero]}
    for h in range(1, max_h + 1):
        level = {}
        for step, op in terms:
            prev_h = h - sum(step)
            for beta_prev in by_height.get(prev_h, []):
                comp = components[beta_prev]
                beta = tuple(a + b for a, b in zip(beta_prev, step))
                contrib = op @ comp
                if contrib.is_zero():
                    continue
                if beta in level:
                    level[beta] = level[beta] + contrib
                else:
                    level[beta] = contrib
        kept = []
        for beta, num in level.items():
            if num.is_zero():
                continue
            beta_fw = datum.root_fw(beta)

            def col_factor(c, beta_fw=beta_fw):
                den = gap(wt_cols[c], beta_fw)
                if exact:
                    if den == 0:
                        raise ResonantLambda(
                            f"gamma gap vanishes at weight {wt_cols[c]}")
                    return QQi(Fraction(1) / den)
                if abs(den) < FLOAT_GAP_GUARD:
                    raise ResonantLambda(
                        f"gamma gap below guard at weight {wt_cols[c]}")
                return 1.0 / den

            components[beta] = num.scale_columns(col_factor)
            kept.append(beta)
        if kept:
            by_height[h] = kept
    return components


def _gamma_diag(datum, second, dim_first, lam):
    exact = lam_is_exact(lam)
    dim_v = second.dim
    vals = []
    for c in range(dim_first * dim_v):
        g = gamma_weight_scalar(datum, lam, second.weights[c % dim_v])
        vals.append(QQi(g) if exact else complex(g))
    return LinOp.diagonal(vals, exact=exact)


def abrr_solve_J(W, V, lam):
    """Fusion operator J_{W,V}(lambda) on W (x) V from its commutation
    equation [J, 1 (x) gamma] = (sum_a F_a (x) E_a) J."""
    datum = W.datum
    lam = tuple(lam)
    exact = lam_is_exact(lam)
    terms = []
    T_total = LinOp.zeros(W.dim * V.dim, True)
    for root in datum.positive_roots:
        op = W.f(root).kron(V.e(root))
        T_total = T_total + op
        if not exact:
            op = op.to_float()
        terms.append((root, op))
    components = _ladder_solve(datum, W.dim, V, terms, lam)
    J = LinOp.zeros(W.dim * V.dim, exact)
    for op in components.values():
        J = J + op
    gamma = _gamma_diag(datum, V, W.dim, lam)
    T = T_total if exact else T_total.to_float()
    residual = J @ gamma - gamma @ J - T @ J
    return FusionResult(J, lam, components, residual)


def abrr_solve_G(X, V, lam):
    """Boundary fusion operator G_{X,V}(lambda) on X (x) V from
    [G, 1 (x) gamma] = (sum_a B_a (x) E_a - 1 (x) E_a^2) G."""
    datum = V.datum
    lam = tuple(lam)
    exact = lam_is_exact(lam)
    idx = LinOp.identity(X.dim, True)
    terms = []
    T_total = LinOp.zeros(X.dim * V.dim, True)
    for root in datum.positive_roots:
        e_v = V.e(root)
        op1 = X.b(root).kron(e_v)
        op2 = idx.kron(e_v @ e_v).scale(-1)
        T_total = T_total + op1 + op2
        if not exact:
            op1, op2 = op1.to_float(), op2.to_float()
        double = tuple(2 * c for c in root)
        terms.append((root, op1))
        terms.append((double, op2))
    components = _ladder_solve(datum, X.dim, V, terms, lam)
    G = LinOp.zeros(X.dim * V.dim, exact)
    for op in components.values():
        G = G + op
    gamma = _gamma_diag(datum, V, X.dim, lam)
    T = T_total if exact else T_total.to_float()
    residual = G @ gamma - gamma @ G - T @ G
    return FusionResult(G, lam, components, residual)


def mp_eval(b_op, lam, k):
    """p_k(b, lambda) by the three-term recurrence, exact at exact inputs.

    p_0 = 1, p_1 = b, (k+1) p_{k+1} = b p_k + (lambda - k + 1) p_{k-1}.
    """
    if k < 0:
        raise HowedualError("k must be nonnegative")
    ident = LinOp.identity(b_op.dim, b_op.exact)
    if k == 0:
        return ident
    exact = b_op.exact and isinstance(lam, (int, Fraction))
    if not exact:
        b_op = b_op.to_float()
        ident = ident.to_float()
    prev, cur = ident, b_op
    for j in range(1, k):
        coeff = (Fraction(lam) - j + 1) if exact else (complex(lam) - j + 1)
        scl = Fraction(1, j + 1) if exact else 1.0 / (j + 1)
        nxt = (b_op @ cur + prev.scale(coeff)).scale(scl)
        prev, cur = cur, nxt
    return cur


# ---------------------------------------------------------------------------
# twist equations


def check_dynamical_twist(V, W, U, lam):
    """Residual of J_{V(x)W,U}(lam) (J_{V,W}(lam - h|_U) (x) 1) =
    J_{V,W(x)U}(lam) (1 (x) J_{W,U}(lam))."""
    from .tensor import dyn_shifted, embed_plain

    dims = [V.dim, W.dim, U.dim]
    VW = tensor_g(V, W)
    WU = tensor_g(W, U)
    left_outer = abrr_solve_J(VW, U, lam).operator
    right_outer = abrr_solve_J(V, WU, lam).operator

    def fam(l):
        return abrr_solve_J(V, W, l).operator

    shifted = dyn_shifted(fam, dims, [0, 1], 2, U.weights, lam)
    inner_right = embed_plain(abrr_solve_J(W, U, lam).operator, dims, [1, 2])
    lhs = left_outer @ shifted
    rhs = right_outer @ inner_right
    return lhs - rhs


def check_boundary_twist(X, V, W, lam):
    """Residual of G_{X(x)V,W}(lam) (G_{X,V}(lam - h|_W) (x) 1) =
    G_{X,V(x)W}(lam) (1 (x) J_{V,W}(lam))."""
    from .tensor import dyn_shifted, embed_plain

    dims = [X.dim, V.dim, W.dim]
    XV = tensor_k_g(X, restrict_to_k(V))
    VW = tensor_g(V, W)
    left_outer = abrr_solve_G(XV, W, lam).operator
    right_outer = abrr_solve_G(X, VW, lam).operator

    def fam(l):
        return abrr_solve_G(X, V, l).operator

    shifted = dyn_shifted(fam, dims, [0, 1], 2, W.weights, lam)
    inner_right = embed_plain(abrr_solve_J(V, W, lam).operator, dims, [1, 2])
    lhs = left_outer @ shifted
    rhs = right_outer @ inner_right
    return lhs - rhs
