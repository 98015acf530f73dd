"""Plain tensor-product plumbing for matrix modules.

Full-space indices are row-major over the slot list: index = sum of
idx_s * stride_s with stride_s the product of the dimensions after slot s.
Dynamical shifts follow the block-evaluation rule: OP(lambda - h|_T) is
the sum over weights nu of T of OP(lambda - nu) composed with the weight
projector of slot T on the right (the weight operator acts first).
"""
from __future__ import annotations

from .errors import HowedualError
from .linop import LinOp


def strides(dims):
    out = [1] * len(dims)
    for s in range(len(dims) - 2, -1, -1):
        out[s] = out[s + 1] * dims[s + 1]
    return out


def full_dim(dims):
    d = 1
    for x in dims:
        d *= x
    return d


def decompose(index, dims):
    st = strides(dims)
    return tuple((index // st[s]) % dims[s] for s in range(len(dims)))


def embed_plain(op, dims, slots):
    """Embed op acting on the listed slots (in that order) into the product.

    op.dim must equal the product of dims[s] for s in slots; the remaining
    slots carry the identity.
    """
    sub_dims = [dims[s] for s in slots]
    if op.dim != full_dim(sub_dims):
        raise HowedualError("operator does not match the selected slots")
    st = strides(dims)
    sub_st = strides(sub_dims)
    rest = [s for s in range(len(dims)) if s not in slots]

    def sub_to_offsets(idx):
        parts = decompose(idx, sub_dims)
        return sum(p * st[s] for p, s in zip(parts, slots))

    offsets_in = {}
    offsets_out = {}
    data = {}
    rest_dims = [dims[s] for s in rest]
    rest_count = full_dim(rest_dims)
    rest_st = strides(rest_dims) if rest else []
    rest_offsets = []
    for rid in range(rest_count):
        parts = decompose(rid, rest_dims) if rest else ()
        rest_offsets.append(sum(p * st[s] for p, s in zip(parts, rest)))
    for (r, c), v in op.data.items():
        ro = offsets_out.get(r)
        if ro is None:
            ro = offsets_out[r] = sub_to_offsets(r)
        co = offsets_in.get(c)
        if co is None:
            co = offsets_in[c] = sub_to_offsets(c)
        for off in rest_offsets:
            data[(ro + off, co + off)] = v
    return LinOp(full_dim(dims), data, op.exact)


def weight_projector(dims, slot, indices, exact=True):
    """Projector onto the span of the given slot-indices of one slot."""
    st = strides(dims)
    d = full_dim(dims)
    wanted = set(indices)
    data = {}
    for idx in range(d):
        if (idx // st[slot]) % dims[slot] in wanted:
            data[(idx, idx)] = (1, 0, 1) if exact else 1 + 0j
    return LinOp(d, data, exact)


def flip_two(dims, a, b, exact=True):
    """Plain swap of two equal-dimensional slots."""
    if dims[a] != dims[b]:
        raise HowedualError("can only flip slots of equal dimension")
    d = full_dim(dims)
    st = strides(dims)
    data = {}
    for idx in range(d):
        parts = list(decompose(idx, dims))
        parts[a], parts[b] = parts[b], parts[a]
        out = sum(p * st[s] for s, p in enumerate(parts))
        data[(out, idx)] = (1, 0, 1) if exact else 1 + 0j
    return LinOp(d, data, exact)


def dyn_shifted(family, dims, acting, shift_slot, shift_weights, lam,
                minus=True):
    """OP(lambda -+ h|_{shift_slot}) embedded into the product space.

    family: weight-tuple -> LinOp on the product of the acting slots.
    shift_weights: per-index weight tuples of the shift slot.  The value is
    sum_nu embed(family(lambda -+ nu)) @ P_nu with the projector composed on
    the right (h acts first).
    """
    blocks = {}
    for idx, w in enumerate(shift_weights):
        blocks.setdefault(tuple(w), []).append(idx)
    total = None
    for nu, indices in blocks.items():
        if minus:
            lshift = tuple(a - b for a, b in zip(lam, nu))
        else:
            lshift = tuple(a + b for a, b in zip(lam, nu))
        op = embed_plain(family(lshift), dims, acting)
        proj = weight_projector(dims, shift_slot, indices, exact=op.exact)
        term = op @ proj
        total = term if total is None else total + term
    return total
