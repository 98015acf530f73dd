"""Pure-Python sparse kernels over Gaussian-rational triples and complex.

Matrices are dicts mapping (row, col) to a value; exact values are int
triples (a, b, d) meaning (a + b*i)/d with d > 0 and gcd(a, b, d) == 1,
float values are Python complex.  Exact zeros are never stored.

howedual._backend swaps these functions for the compiled versions in
howedual._sparse_cy when the extension is importable.
"""
from math import gcd

BACKEND = "python"


def _norm(a, b, d):
    if d < 0:
        a, b, d = -a, -b, -d
    g = gcd(gcd(a, b), d)
    if g > 1:
        a //= g
        b //= g
        d //= g
    return (a, b, d)


def mat_mul_exact(A, B):
    brows = {}
    for (k, c), v in B.items():
        brows.setdefault(k, []).append((c, v))
    out = {}
    for (r, k), (a1, b1, d1) in A.items():
        row = brows.get(k)
        if row is None:
            continue
        for c, (a2, b2, d2) in row:
            a = a1 * a2 - b1 * b2
            b = a1 * b2 + b1 * a2
            d = d1 * d2
            key = (r, c)
            cur = out.get(key)
            if cur is None:
                out[key] = (a, b, d)
            else:
                a0, b0, d0 = cur
                if d0 == d:
                    out[key] = (a0 + a, b0 + b, d0)
                else:
                    out[key] = (a0 * d + a * d0, b0 * d + b * d0, d0 * d)
    clean = {}
    for key, (a, b, d) in out.items():
        if a == 0 and b == 0:
            continue
        clean[key] = _norm(a, b, d) if d != 1 else (a, b, 1)
    return clean


def mat_add_exact(A, B):
    out = dict(A)
    for key, (a2, b2, d2) in B.items():
        cur = out.get(key)
        if cur is None:
            out[key] = (a2, b2, d2)
            continue
        a1, b1, d1 = cur
        if d1 == d2:
            a, b, d = a1 + a2, b1 + b2, d1
        else:
            a, b, d = a1 * d2 + a2 * d1, b1 * d2 + b2 * d1, d1 * d2
        if a == 0 and b == 0:
            del out[key]
        else:
            out[key] = _norm(a, b, d)
    return out


def mat_scale_exact(A, s):
    sa, sb, sd = s
    if sa == 0 and sb == 0:
        return {}
    out = {}
    for key, (a, b, d) in A.items():
        out[key] = _norm(a * sa - b * sb, a * sb + b * sa, d * sd)
    return out


def mat_mul_float(A, B):
    brows = {}
    for (k, c), v in B.items():
        brows.setdefault(k, []).append((c, v))
    out = {}
    for (r, k), v1 in A.items():
        row = brows.get(k)
        if row is None:
            continue
        for c, v2 in row:
            key = (r, c)
            out[key] = out.get(key, 0j) + v1 * v2
    return {k: v for k, v in out.items() if v != 0}


def mat_add_float(A, B):
    out = dict(A)
    for key, v in B.items():
        w = out.get(key, 0j) + v
        if w == 0:
            out.pop(key, None)
        else:
            out[key] = w
    return out


def mat_scale_float(A, s):
    if s == 0:
        return {}
    return {k: v * s for k, v in A.items()}
