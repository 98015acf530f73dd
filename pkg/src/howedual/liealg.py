"""Root data and concrete Lie algebra actions on Fock and matrix modules.

Weights are held in fundamental-weight coordinates throughout: the i-th
coordinate of lambda is <lambda, alpha_i^vee>, so rho = (1,...,1) and the
simple reflections act through the Cartan matrix.  Roots are coefficient
tuples over the simple roots.

Structure constants of the concrete actions are fixed by the matrix-unit
realizations: E_ij for gl, M_ij = E_ij - E_{-j,-i} for so_2n (through the
Clifford action on skew polynomials), never by an abstract Chevalley basis.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import HowedualError, SpectrumViolation
from .fock import FockSpace
from .linop import LinOp, exp_nilpotent
from .scalar import QQi

CAP_NM = 16


class CapExceeded(HowedualError):
    pass


# ---------------------------------------------------------------------------
# root data


class RootDatum:
    """Rank-2 and type-A root data in fundamental-weight coordinates."""

    def __init__(self, tag, cartan, d, positive_roots, w0_word):
        self.tag = tag
        self.rank = len(cartan)
        self.cartan = cartan          # cartan[i][j] = <alpha_j, alpha_i^vee>
        self.d = d                    # (alpha_i, alpha_i)/2
        self.positive_roots = [tuple(r) for r in positive_roots]
        self.w0_word = list(w0_word)
        self.rho = tuple(Fraction(1) for _ in range(self.rank))

    # roots are coefficient tuples c with gamma = sum c_j alpha_j

    def simple_root(self, i):
        c = [0] * self.rank
        c[i] = 1
        return tuple(c)

    def root_fw(self, root):
        """Fundamental-weight coordinates of a root."""
        return tuple(
            sum(Fraction(self.cartan[i][j]) * root[j]
                for j in range(self.rank))
            for i in range(self.rank))

    def form(self, lam, mu):
        """Invariant form with (alpha_short, alpha_short) = 2, fw inputs."""
        # (omega_i, omega_j) = c_{ij} d_j where C = A^{-T}
        C = self._inv_cartan_T()
        total = Fraction(0)
        for i in range(self.rank):
            for j in range(self.rank):
                total += Fraction(lam[i]) * Fraction(mu[j]) * C[i][j] * self.d[j]
        return total

    def _inv_cartan_T(self):
        if not hasattr(self, "_icT"):
            n = self.rank
            a = [[Fraction(self.cartan[j][i]) for j in range(n)]
                 for i in range(n)]  # A^T
            inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
            for col in range(n):
                piv = next(r for r in range(col, n) if a[r][col] != 0)
                a[col], a[piv] = a[piv], a[col]
                inv[col], inv[piv] = inv[piv], inv[col]
                p = a[col][col]
                a[col] = [x / p for x in a[col]]
                inv[col] = [x / p for x in inv[col]]
                for r in range(n):
                    if r != col and a[r][col] != 0:
                        f = a[r][col]
                        a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                        inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
            self._icT = inv
        return self._icT

    def root_norm2(self, root):
        fw = self.root_fw(root)
        return self.form(fw, fw)

    def pair_coroot(self, lam, root):
        """<lambda, gamma^vee> = 2 (lambda, gamma) / (gamma, gamma)."""
        fw = self.root_fw(root)
        return 2 * self.form(lam, fw) / self.root_norm2(root)

    def reflect(self, i, lam):
        """Plain action of s_i in fw coordinates."""
        li = lam[i]
        return tuple(lam[j] - li * self.cartan[j][i]
                     for j in range(self.rank))

    def dot(self, i, lam):
        """Dot action s_i . lambda = s_i(lambda + rho) - rho."""
        shifted = tuple(Fraction(x) + 1 for x in lam)
        out = self.reflect(i, shifted)
        return tuple(x - 1 for x in out)

    def reflect_root(self, i, root):
        pairing = sum(self.cartan[i][j] * root[j] for j in range(self.rank))
        out = list(root)
        out[i] -= pairing
        return tuple(out)

    def braid_order(self, i, j):
        prod = self.cartan[i][j] * self.cartan[j][i]
        return {0: 2, 1: 3, 2: 4, 3: 6}[prod]


_RANK2 = {
    "A1": RootDatum("A1", [[2]], [Fraction(1)], [(1,)], [0]),
    "A1xA1": RootDatum("A1xA1", [[2, 0], [0, 2]], [Fraction(1), Fraction(1)],
                       [(1, 0), (0, 1)], [0, 1]),
    "A2": RootDatum("A2", [[2, -1], [-1, 2]], [Fraction(1), Fraction(1)],
                    [(1, 0), (1, 1), (0, 1)], [0, 1, 0]),
    # alpha = short simple, beta = long simple
    "C2": RootDatum("C2", [[2, -2], [-1, 2]], [Fraction(1), Fraction(2)],
                    [(1, 0), (1, 1), (2, 1), (0, 1)], [0, 1, 0, 1]),
    "G2": RootDatum("G2", [[2, -3], [-1, 2]], [Fraction(1), Fraction(3)],
                    [(1, 0), (1, 1), (2, 1), (3, 1), (3, 2), (0, 1)],
                    [0, 1, 0, 1, 0, 1]),
}


def root_datum(tag, rank=None):
    """Catalog lookup; ("A", r) builds the A_r datum for sl_{r+1}."""
    if tag in _RANK2:
        return _RANK2[tag]
    if tag == "A":
        r = rank
        cartan = [[2 if i == j else (-1 if abs(i - j) == 1 else 0)
                   for j in range(r)] for i in range(r)]
        pos = []
        for i in range(r):
            for j in range(i, r):
                c = [0] * r
                for k in range(i, j + 1):
                    c[k] = 1
                pos.append(tuple(c))
        # longest element: (s_0 s_1 ... s_{r-1})(s_0 ... s_{r-2}) ...
        word = []
        for k in range(r, 0, -1):
            word.extend(range(k))
        return RootDatum(f"A{r}", cartan, [Fraction(1)] * r, pos, word)
    raise HowedualError(f"unknown root datum {tag!r}")


# closed R-matrix relation words (positive roots in path order, alpha side
# first); the relation is product == reversed product.
CLOSED_R_SEQUENCES = {
    "A1xA1": [(1, 0), (0, 1)],
    "A2": [(1, 0), (1, 1), (0, 1)],
    # C2: long simple is beta here, path order from long to short
    "C2": [(0, 1), (1, 1), (2, 1), (1, 0)],
    "G2": [(1, 0), (3, 1), (2, 1), (3, 2), (1, 1), (0, 1)],
}


# ---------------------------------------------------------------------------
# matrix modules for the ABRR machinery


class GModule:
    """Finite-dimensional module with weight basis and root generators."""

    def __init__(self, datum, weights, e_ops, f_ops, name=""):
        self.datum = datum
        self.dim = len(weights)
        self.weights = [tuple(Fraction(x) for x in w) for w in weights]
        self._e = dict(e_ops)
        self._f = dict(f_ops)
        self.name = name

    def e(self, root):
        return self._e[tuple(root)]

    def f(self, root):
        return self._f[tuple(root)]

    def b(self, root):
        return self._f[tuple(root)] - self._e[tuple(root)]

    def coroot(self, i):
        vals = [self.weights[v][i] for v in range(self.dim)]
        return LinOp.diagonal(vals, exact=True)

    def h_of_root(self, root):
        vals = [self.datum.pair_coroot(self.weights[v], root)
                for v in range(self.dim)]
        return LinOp.diagonal(vals, exact=True)

    def weight_indices(self):
        blocks = {}
        for v, w in enumerate(self.weights):
            blocks.setdefault(w, []).append(v)
        return blocks


class KModule:
    """Integrable module of the fixed subalgebra: only b-operators.

    eigs: optional dict root -> candidate spectrum of b_root (QQi values in
    i*(1/2)Z); integrable modules always have one, and the spectral calculus
    validates it against the minimal polynomial.
    """

    def __init__(self, dim, b_ops, eigs=None, name=""):
        self.dim = dim
        self._b = {tuple(k): v for k, v in b_ops.items()}
        self._eigs = {tuple(k): v for k, v in (eigs or {}).items()}
        self.name = name

    def b(self, root):
        return self._b[tuple(root)]

    def eigs(self, root):
        root = tuple(root)
        if root in self._eigs:
            return self._eigs[root]
        # default guess: integer spectrum bounded by the dimension
        bound = self.dim
        return [QQi(0, k) for k in range(-bound, bound + 1)]

    def set_eigs(self, root, eigs):
        self._eigs[tuple(root)] = list(eigs)

    def roots(self):
        return list(self._b)


def tensor_g(V, W):
    """V (x) W as a module; index of (v, w) is v*W.dim + w."""
    if V.datum is not W.datum:
        raise HowedualError("tensor factors over different root data")
    dim_w = W.dim
    weights = [tuple(a + b for a, b in zip(wv, ww))
               for wv in V.weights for ww in W.weights]
    idv = LinOp.identity(V.dim)
    idw = LinOp.identity(dim_w)
    e_ops = {}
    f_ops = {}
    for root in V._e:
        e_ops[root] = V.e(root).kron(idw) + idv.kron(W.e(root))
        f_ops[root] = V.f(root).kron(idw) + idv.kron(W.f(root))
    return GModule(V.datum, weights, e_ops, f_ops,
                   name=f"{V.name}(x){W.name}")


def tensor_k_g(X, V):
    """X (x) V as an integrable k-module (b acts by the coproduct).

    X is a KModule; V may be a GModule (restricted through b = f - e) or a
    KModule carrying its own spectra.
    """
    idx = LinOp.identity(X.dim)
    idv = LinOp.identity(V.dim)
    b_ops = {}
    eigs = {}
    name = getattr(V, "name", "")
    for root in X.roots():
        vb_op = V.b(root)
        b_ops[root] = X.b(root).kron(idv) + idx.kron(vb_op)
        if isinstance(V, KModule):
            vb = V.eigs(root)
        else:
            vb = _module_b_eigs(V, root)
        cand = {(ex + ev).t for ex in X.eigs(root) for ev in vb}
        eigs[root] = [QQi.from_triple(t) for t in sorted(cand)]
    return KModule(X.dim * V.dim, b_ops, eigs=eigs,
                   name=f"{X.name}(x){name}")


def _module_b_eigs(V, root):
    """Candidate b_root spectrum of a g-module: i<mu, root^vee>-grid."""
    pairings = {V.datum.pair_coroot(w, root) for w in V.weights}
    return [QQi(0, p) for p in sorted(pairings)]


def restrict_to_k(V):
    """A g-module viewed as a k-module through b = f - e."""
    b_ops = {root: V.b(root) for root in V._e}
    eigs = {root: _module_b_eigs(V, root) for root in V._e}
    return KModule(V.dim, b_ops, eigs=eigs, name=V.name)


def sl2_module(k):
    """Irreducible sl_2 module V(k), weight basis v_0 (highest) .. v_k."""
    datum = root_datum("A1")
    weights = [(Fraction(k - 2 * j),) for j in range(k + 1)]
    e = {(j - 1, j): Fraction(k - j + 1) for j in range(1, k + 1)}
    f = {(j + 1, j): Fraction(j + 1) for j in range(k)}
    root = (1,)
    return GModule(datum, weights,
                   {root: LinOp.from_entries(k + 1, e)},
                   {root: LinOp.from_entries(k + 1, f)},
                   name=f"V({k})")


def c_line(x):
    """One-dimensional so_2-module C_x with b acting by the scalar x."""
    value = x if isinstance(x, QQi) else QQi(x)
    b = LinOp.from_entries(1, {(0, 0): value})
    return KModule(1, {(1,): b}, eigs={(1,): [value]}, name=f"C_{x}")


def sl3_vector():
    """Vector representation C^3 of sl_3 with matrix-unit generators."""
    datum = root_datum("A2")
    weights = [(1, 0), (-1, 1), (0, -1)]

    def unit(i, j):
        return LinOp.from_entries(3, {(i, j): 1})

    e_ops = {(1, 0): unit(0, 1), (0, 1): unit(1, 2), (1, 1): unit(0, 2)}
    f_ops = {(1, 0): unit(1, 0), (0, 1): unit(2, 1), (1, 1): unit(2, 0)}
    return GModule(datum, weights, e_ops, f_ops, name="C3")


def sl3_adjoint():
    """Adjoint module of sl_3; returns (module, sigma) with sigma the
    diagram-involution operator intertwining the flipped action."""
    datum = root_datum("A2")
    # basis: E12 E23 E13 E21 E32 E31 H1 H2

    def mat(entries):
        m = [[Fraction(0)] * 3 for _ in range(3)]
        for (i, j), v in entries.items():
            m[i][j] = Fraction(v)
        return m

    basis = [mat({(0, 1): 1}), mat({(1, 2): 1}), mat({(0, 2): 1}),
             mat({(1, 0): 1}), mat({(2, 1): 1}), mat({(2, 0): 1}),
             mat({(0, 0): 1, (1, 1): -1}), mat({(1, 1): 1, (2, 2): -1})]
    weights = [(2, -1), (-1, 2), (1, 1), (-2, 1), (1, -2), (-1, -1),
               (0, 0), (0, 0)]

    def expand(m):
        """Coefficients of a traceless matrix in the basis above."""
        coeffs = [m[0][1], m[1][2], m[0][2], m[1][0], m[2][1], m[2][0],
                  m[0][0], m[0][0] + m[1][1]]
        return coeffs

    def matmul3(a, b):
        return [[sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)]
                for i in range(3)]

    def ad_op(x):
        entries = {}
        for col, bmat in enumerate(basis):
            ab = matmul3(x, bmat)
            ba = matmul3(bmat, x)
            comm = [[ab[i][j] - ba[i][j] for j in range(3)] for i in range(3)]
            for row, c in enumerate(expand(comm)):
                if c:
                    entries[(row, col)] = c
        return LinOp.from_entries(8, entries)

    e_ops = {(1, 0): ad_op(basis[0]), (0, 1): ad_op(basis[1]),
             (1, 1): ad_op(basis[2])}
    f_ops = {(1, 0): ad_op(basis[3]), (0, 1): ad_op(basis[4]),
             (1, 1): ad_op(basis[5])}
    module = GModule(datum, weights, e_ops, f_ops, name="ad(sl3)")

    # diagram involution: e1<->e2, f1<->f2, E13 -> -E13, H1<->H2
    sigma = LinOp.from_entries(8, {
        (1, 0): 1, (0, 1): 1, (2, 2): -1,
        (4, 3): 1, (3, 4): 1, (5, 5): -1,
        (7, 6): 1, (6, 7): 1})
    return module, sigma


# ---------------------------------------------------------------------------
# rank-2 boundary catalog (explicit small matrices)


def _mat2(a, b, c, d):
    return LinOp.from_entries(2, {(0, 0): a, (0, 1): b, (1, 0): c, (1, 1): d})


def rank2_boundary_rep(tag, which, k=None):
    """Catalog of integrable k-modules used by the rank-2 braid suites.

    A2 -> "V1" (2-dim so_3 rep); C2 -> "detk" (needs k); G2 -> "first"
    (V(1) box C) and "second" (C box V(1)).
    """
    I2 = QQi(0, Fraction(1, 2))
    half = [I2, -I2]
    threehalf = [QQi(0, Fraction(3, 2)), QQi(0, Fraction(-3, 2))]
    if tag == "A2" and which == "V1":
        b_alpha = _mat2(QQi(0), I2, I2, QQi(0))
        b_beta = _mat2(I2, QQi(0), QQi(0), -I2)
        b_ab = _mat2(QQi(0), QQi(Fraction(-1, 2)), QQi(Fraction(1, 2)), QQi(0))
        return KModule(2, {(1, 0): b_alpha, (0, 1): b_beta, (1, 1): b_ab},
                       eigs={(1, 0): half, (0, 1): half, (1, 1): half},
                       name="A2/V(1)")
    if tag == "C2" and which == "detk":
        if k is None:
            raise HowedualError("C2 catalog entry det^k needs k")
        zero = LinOp.from_entries(1, {})
        val = QQi(0, -Fraction(k))
        b_beta = LinOp.from_entries(1, {(0, 0): val})
        return KModule(1, {(1, 0): zero, (0, 1): b_beta},
                       eigs={(1, 0): [QQi(0)], (0, 1): [val]},
                       name=f"C2/det^{k}")
    if tag == "G2" and which == "first":
        # V(1) box C: b_alpha = -3 J_0, b_beta = J_2
        b_alpha = _mat2(threehalf[0], QQi(0), QQi(0), threehalf[1])
        b_beta = _mat2(QQi(0), -I2, -I2, QQi(0))
        return KModule(2, {(1, 0): b_alpha, (0, 1): b_beta},
                       eigs={(1, 0): threehalf, (0, 1): half},
                       name="G2/V1xC")
    if tag == "G2" and which == "second":
        # C box V(1): b_alpha = J'_0, b_beta = J'_2
        b_alpha = _mat2(-I2, QQi(0), QQi(0), I2)
        b_beta = _mat2(QQi(0), -I2, -I2, QQi(0))
        return KModule(2, {(1, 0): b_alpha, (0, 1): b_beta},
                       eigs={(1, 0): half, (0, 1): half},
                       name="G2/CxV1")
    raise HowedualError(f"unknown catalog entry {tag}/{which}")


# ---------------------------------------------------------------------------
# Fock-space actions


class GLFockAction:
    """Total and per-factor gl actions on P_{nm} (rows: gl_n, cols: gl_m)."""

    def __init__(self, n, m, side="rows", cap=None):
        if n * m > (cap or CAP_NM):
            raise CapExceeded(f"nm = {n * m} exceeds cap")
        self.n, self.m, self.side = n, m, side
        self.space = FockSpace(n * m, grid=(n, m))
        self.size = n if side == "rows" else m
        self._cache = {}

    def _modes(self, index, factor):
        # side == rows: E_ij acts on x_{i,alpha} per column alpha
        if self.side == "rows":
            return self.space.mode(index, factor)
        return self.space.mode(factor, index)

    def E_factor(self, factor, i, j):
        key = ("Ef", factor, i, j)
        if key not in self._cache:
            sp = self.space
            op = sp.create(self._modes(i, factor)) @ \
                sp.annihilate(self._modes(j, factor))
            self._cache[key] = op
        return self._cache[key]

    def E(self, i, j):
        key = ("E", i, j)
        if key not in self._cache:
            nfac = self.m if self.side == "rows" else self.n
            total = LinOp.zeros(self.space.dim)
            for f in range(nfac):
                total = total + self.E_factor(f, i, j)
            self._cache[key] = total
        return self._cache[key]

    def B(self, i, j):
        """Boundary generator E_ji - E_ij of the theta-fixed subalgebra."""
        return self.E(j, i) - self.E(i, j)

    def n_factors(self):
        return self.m if self.side == "rows" else self.n


class SOFockAction:
    """Total so_2n action on P_{nm} through the Clifford realization.

    Index convention: p, q in {1..n} union {-1..-n}; M(p, q) is the image
    of E_{p,q} - E_{-q,-p}.  Per-column generators via M_factor.
    """

    def __init__(self, n, m, cap=None):
        if n * m > (cap or CAP_NM):
            raise CapExceeded(f"nm = {n * m} exceeds cap")
        self.n, self.m = n, m
        self.space = FockSpace(n * m, grid=(n, m))
        self._cache = {}

    def M_factor(self, alpha, p, q):
        key = (alpha, p, q)
        if key in self._cache:
            return self._cache[key]
        sp = self.space
        n = self.n
        cr = lambda i: sp.create(sp.mode(i - 1, alpha))
        an = lambda i: sp.annihilate(sp.mode(i - 1, alpha))
        if p > 0 and q > 0:
            op = cr(p) @ an(q)
            if p == q:
                op = op - LinOp.identity(sp.dim).scale(Fraction(1, 2))
        elif p > 0 and q < 0:
            # [gamma+_p, gamma+_{-q}]/2 = gamma+_p gamma+_{-q} (p != -q)
            if p == -q:
                op = LinOp.zeros(sp.dim)
            else:
                op = cr(p) @ cr(-q)
        elif p < 0 and q > 0:
            if -p == q:
                op = LinOp.zeros(sp.dim)
            else:
                op = an(-p) @ an(q)
        else:
            raise HowedualError("M indices must have signs (+,+),(+,-),(-,+)")
        self._cache[key] = op
        return op

    def M(self, p, q):
        key = ("tot", p, q)
        if key in self._cache:
            return self._cache[key]
        total = LinOp.zeros(self.space.dim)
        for alpha in range(self.m):
            total = total + self.M_factor(alpha, p, q)
        self._cache[key] = total
        return total

    def positive_root_triple(self, kind, i, j):
        """(e, f, h) for the root eps_i - eps_j (kind "minus", i<j) or
        eps_i + eps_j (kind "plus")."""
        if kind == "minus":
            e, f = self.M(i, j), self.M(j, i)
            h = self.M(i, i) - self.M(j, j)
        elif kind == "plus":
            e, f = self.M(i, -j), self.M(-j, i)
            h = self.M(i, i) + self.M(j, j)
        else:
            raise HowedualError(f"unknown root kind {kind!r}")
        return e, f, h


def gl_action(n, m, side="rows", cap=None):
    return GLFockAction(n, m, side, cap)


def so2n_action(n, m, cap=None):
    return SOFockAction(n, m, cap)


def so_m_boundary_ops(glm):
    """All B_{ab} = E_ba - E_ab for the column gl_m action (a < b)."""
    out = {}
    m = glm.size
    for a in range(m):
        for b in range(a + 1, m):
            out[(a, b)] = glm.B(a, b)
    return out


def _a_type_root_to_pair(root):
    """Positive A_{m-1} root sum(alpha_a..alpha_{b-1}) -> index pair (a, b)."""
    nz = [k for k, c in enumerate(root) if c]
    if not nz or any(root[k] != 1 for k in nz) or \
            nz != list(range(nz[0], nz[-1] + 1)):
        raise HowedualError(f"not a positive A-type root: {root}")
    return nz[0], nz[-1] + 1


def fock_k_module(n, m, cap=None):
    """so_m inside gl_m acting on P_{nm}, as a KModule over the A_{m-1}
    datum: b_gamma = B_{ab} with integer spectrum bounded by n."""
    glm = gl_action(n, m, "cols", cap)
    datum = root_datum("A", rank=m - 1)
    b_ops = {}
    eigs = {}
    grid = [QQi(0, k) for k in range(-n, n + 1)]
    for root in datum.positive_roots:
        a, b = _a_type_root_to_pair(root)
        b_ops[root] = glm.B(a, b)
        eigs[root] = grid
    mod = KModule(glm.space.dim, b_ops, eigs=eigs, name=f"P_{n}x{m}")
    mod.space = glm.space
    mod.gl = glm
    return mod


# ---------------------------------------------------------------------------
# spectral calculus


def spectral_projectors(op, eigs):
    """Exact Lagrange projectors of op onto the candidate eigenvalues.

    eigs: QQi (or coercible) candidate eigenvalues; the minimal polynomial
    of op must divide prod (op - e).  Raises SpectrumViolation otherwise.
    """
    eigs = [e if isinstance(e, QQi) else QQi(e) for e in eigs]
    if len(set(e.t for e in eigs)) != len(eigs):
        raise HowedualError("candidate eigenvalues must be distinct")
    n = len(eigs)
    dim = op.dim
    ident = LinOp.identity(dim, op.exact)
    shifts = []
    for e in eigs:
        if op.exact:
            shifts.append(op - ident.scale(e))
        else:
            shifts.append(op - ident.scale(complex(e)))
    prefix = [ident]
    for s in shifts:
        prefix.append(prefix[-1] @ s)
    if not prefix[-1].is_zero():
        if op.exact or prefix[-1].max_abs() > 1e-8:
            raise SpectrumViolation(
                "minimal polynomial does not divide the candidate product")
    suffix = [ident] * (n + 1)
    for k in range(n - 1, -1, -1):
        suffix[k] = shifts[k] @ suffix[k + 1]
    projectors = []
    for k in range(n):
        num = prefix[k] @ suffix[k + 1]
        den = QQi(1)
        for j in range(n):
            if j != k:
                den = den * (eigs[k] - eigs[j])
        projectors.append(num.scale(QQi(1) / den if op.exact
                                    else 1 / complex(den)))
    return eigs, projectors


def spectral_apply(op, eigs, f):
    """f(op) = sum f(e_k) P_k with exact Lagrange projectors P_k."""
    eigs, projectors = spectral_projectors(op, eigs)
    values = [f(e) for e in eigs]
    exact = op.exact and all(isinstance(v, QQi) for v in values)
    out = LinOp.zeros(op.dim, exact)
    for v, P in zip(values, projectors):
        P = P if exact else P.to_float()
        if isinstance(v, QQi) and not exact:
            v = complex(v)
        out = out + P.scale(v)
    return out


def integer_spectrum(bound, half=False):
    """Candidate b-spectrum i*k for |k| <= bound (k half-integral if half)."""
    if half:
        return [QQi(0, Fraction(k, 2)) for k in range(-2 * bound, 2 * bound + 1)
                if k % 2]
    return [QQi(0, k) for k in range(-bound, bound + 1)]


def weyl_g(module, root):
    """Triple exponential exp(-e) exp(f) exp(-e) for a simple root."""
    e = module.e(root)
    f = module.f(root)
    a = exp_nilpotent(-e)
    return a @ exp_nilpotent(f) @ a


def weyl_k(b_op, eigs):
    """exp(pi b / 2) by spectral calculus; exact for integer spectra."""
    def fn(e):
        # e = i*k: exp(pi*e/2) = exp(i pi k / 2) = i^k, exact for integer k
        if isinstance(e, QQi) and e.re == 0 and e.im.denominator == 1:
            k = int(e.im) % 4
            return (QQi(1), QQi(0, 1), QQi(-1), QQi(0, -1))[k]
        import cmath
        import math
        return cmath.exp(math.pi * complex(e) / 2)
    return spectral_apply(b_op, eigs, fn)


def weyl_k_renormalized(b_op, eigs, inverse=False):
    """sqrt(2)-cleared boundary Weyl operator for half-integer spectra.

    Returns (M, p) with exp(+-pi b/2) = M / sqrt(2)^p, M exact; p = 0 when
    every eigenvalue i*k has integer k, p = 1 when every k is half-integral.
    """
    halves = set()
    for e in eigs:
        e = e if isinstance(e, QQi) else QQi(e)
        if e.re != 0:
            raise HowedualError("b-spectrum must be imaginary")
        halves.add(e.im.denominator)
    if halves <= {1}:
        p = 0
    elif halves <= {2}:
        p = 1
    else:
        raise HowedualError("mixed integer/half-integer b-spectrum")
    sign = -1 if inverse else 1

    def fn(e):
        k2 = int(2 * e.im * sign) % 8  # exp(i pi k/2) = exp(i pi k2/4)
        if p == 0:
            return (QQi(1), None, QQi(0, 1), None, QQi(-1), None,
                    QQi(0, -1), None)[k2]
        # sqrt(2) exp(i pi k2/4) for odd k2
        return {1: QQi(1, 1), 3: QQi(-1, 1), 5: QQi(-1, -1),
                7: QQi(1, -1)}[k2]

    return spectral_apply(b_op, eigs, fn), p
