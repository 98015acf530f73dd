# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled sparse kernels; same contract as howedual._sparse_py.

Values stay arbitrary-precision Python ints -- only the loop structure,
dict plumbing and gcd normalization run at C speed.
"""
from math import gcd

BACKEND = "cython"


cdef inline tuple _norm(object a, object b, object d):
    cdef object g
    if d < 0:
        a, b, d = -a, -b, -d
    g = gcd(gcd(a, b), d)
    if g > 1:
        a //= g
        b //= g
        d //= g
    return (a, b, d)


def mat_mul_exact(dict A, dict B):
    cdef dict brows = {}
    cdef dict out = {}
    cdef dict clean = {}
    cdef tuple key, cur, val
    cdef list row
    cdef Py_ssize_t i, n
    cdef object a, b, d, a0, b0, d0, a1, b1, d1, a2, b2, d2, r, k, c, v

    for key, val in B.items():
        k = key[0]
        row = <list> brows.get(k)
        if row is None:
            brows[k] = [(key[1], val)]
        else:
            row.append((key[1], val))

    for key, val in A.items():
        r = key[0]
        row = <list> brows.get(key[1])
        if row is None:
            continue
        a1 = val[0]; b1 = val[1]; d1 = val[2]
        n = len(row)
        for i in range(n):
            cur = <tuple> row[i]
            c = cur[0]
            v = cur[1]
            a2 = (<tuple> v)[0]; b2 = (<tuple> v)[1]; d2 = (<tuple> v)[2]
            a = a1 * a2 - b1 * b2
            b = a1 * b2 + b1 * a2
            d = d1 * d2
            key2 = (r, c)
            prev = out.get(key2)
            if prev is None:
                out[key2] = (a, b, d)
            else:
                a0 = (<tuple> prev)[0]; b0 = (<tuple> prev)[1]; d0 = (<tuple> prev)[2]
                if d0 == d:
                    out[key2] = (a0 + a, b0 + b, d0)
                else:
                    out[key2] = (a0 * d + a * d0, b0 * d + b * d0, d0 * d)

    for key, val in out.items():
        a = val[0]; b = val[1]; d = val[2]
        if a == 0 and b == 0:
            continue
        if d == 1:
            clean[key] = val
        else:
            clean[key] = _norm(a, b, d)
    return clean


def mat_add_exact(dict A, dict B):
    cdef dict out = dict(A)
    cdef tuple key, val
    cdef object a, b, d, a1, b1, d1, a2, b2, d2, prev
    for key, val in B.items():
        prev = out.get(key)
        if prev is None:
            out[key] = val
            continue
        a1 = (<tuple> prev)[0]; b1 = (<tuple> prev)[1]; d1 = (<tuple> prev)[2]
        a2 = val[0]; b2 = val[1]; d2 = val[2]
        if d1 == d2:
            a = a1 + a2; b = b1 + b2; d = d1
        else:
            a = a1 * d2 + a2 * d1; b = b1 * d2 + b2 * d1; d = d1 * d2
        if a == 0 and b == 0:
            del out[key]
        else:
            out[key] = _norm(a, b, d)
    return out


def mat_scale_exact(dict A, tuple s):
    cdef object sa = s[0], sb = s[1], sd = s[2]
    cdef dict out = {}
    cdef tuple key, val
    cdef object a, b, d
    if sa == 0 and sb == 0:
        return out
    for key, val in A.items():
        a = val[0]; b = val[1]; d = val[2]
        out[key] = _norm(a * sa - b * sb, a * sb + b * sa, d * sd)
    return out


def mat_mul_float(dict A, dict B):
    cdef dict brows = {}
    cdef dict out = {}
    cdef tuple key, cur
    cdef list row
    cdef Py_ssize_t i, n
    for key, val in B.items():
        row = <list> brows.get(key[0])
        if row is None:
            brows[key[0]] = [(key[1], val)]
        else:
            row.append((key[1], val))
    for key, val in A.items():
        row = <list> brows.get(key[1])
        if row is None:
            continue
        n = len(row)
        for i in range(n):
            cur = <tuple> row[i]
            key2 = (key[0], cur[0])
            out[key2] = out.get(key2, 0j) + val * cur[1]
    return {k: v for k, v in out.items() if v != 0}


def mat_add_float(dict A, dict B):
    cdef dict out = dict(A)
    for key, val in B.items():
        w = out.get(key, 0j) + val
        if w == 0:
            out.pop(key, None)
        else:
            out[key] = w
    return out


def mat_scale_float(dict A, s):
    if s == 0:
        return {}
    return {k: v * s for k, v in A.items()}
