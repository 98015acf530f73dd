"""Exact Gaussian-rational arithmetic and the special-function evaluators.

Every operator entry in this package is either a Gaussian rational
(a + bi)/d held exactly, or a complex float.  The exact side is stored as a
plain triple of Python ints ``(a, b, d)`` with d > 0 and gcd(a, b, d) == 1;
the triple form is what the sparse kernels consume.  ``QQi`` wraps a triple
with operator overloads for the non-hot code paths.

Special functions: Gamma-shift products (exact when the ratio telescopes),
the principal branch of (-2i)^t, and sin(pi*u/2).  Float evaluation goes
through scipy's complex log-Gamma.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction

from scipy.special import loggamma as _loggamma

from .errors import NonTelescoping, PoleHit

# ---------------------------------------------------------------------------
# triple layer: (a, b, d) <-> (a + b*i)/d, d > 0, gcd(a, b, d) == 1

Q3_ZERO = (0, 0, 1)
Q3_ONE = (1, 0, 1)
Q3_I = (0, 1, 1)


def q3_normalize(a, b, d):
    if d == 0:
        raise ZeroDivisionError("Gaussian rational with zero denominator")
    if d < 0:
        a, b, d = -a, -b, -d
    g = math.gcd(math.gcd(a, b), d)
    if g > 1:
        a //= g
        b //= g
        d //= g
    return (a, b, d)


def q3_add(x, y):
    a1, b1, d1 = x
    a2, b2, d2 = y
    if d1 == d2:
        return q3_normalize(a1 + a2, b1 + b2, d1)
    return q3_normalize(a1 * d2 + a2 * d1, b1 * d2 + b2 * d1, d1 * d2)


def q3_sub(x, y):
    a1, b1, d1 = x
    a2, b2, d2 = y
    if d1 == d2:
        return q3_normalize(a1 - a2, b1 - b2, d1)
    return q3_normalize(a1 * d2 - a2 * d1, b1 * d2 - b2 * d1, d1 * d2)


def q3_mul(x, y):
    a1, b1, d1 = x
    a2, b2, d2 = y
    a = a1 * a2 - b1 * b2
    b = a1 * b2 + b1 * a2
    d = d1 * d2
    if d == 1:
        return (a, b, 1)
    return q3_normalize(a, b, d)


def q3_neg(x):
    a, b, d = x
    return (-a, -b, d)


def q3_div(x, y):
    a2, b2, d2 = y
    n = a2 * a2 + b2 * b2
    if n == 0:
        raise ZeroDivisionError("division by zero Gaussian rational")
    a1, b1, d1 = x
    # x / y = x * conj(y) * d2 / (d1-part handled by q3_mul) / |y|^2
    a = (a1 * a2 + b1 * b2) * d2
    b = (b1 * a2 - a1 * b2) * d2
    return q3_normalize(a, b, d1 * n)


def q3_from_fractions(re, im=0):
    re = Fraction(re)
    im = Fraction(im)
    d = math.lcm(re.denominator, im.denominator)
    return q3_normalize(re.numerator * (d // re.denominator),
                        im.numerator * (d // im.denominator), d)


def q3_to_complex(x):
    a, b, d = x
    return complex(a / d, b / d)


def q3_abs2(x):
    """|x|^2 as a Fraction."""
    a, b, d = x
    return Fraction(a * a + b * b, d * d)


def q3_str(x):
    """Serialize as "p/q+(r/s)i" (the exact-residual wire format)."""
    a, b, d = x
    re = Fraction(a, d)
    im = Fraction(b, d)
    return f"{re}+({im})i"


class QQi:
    """Immutable Gaussian rational (a + b*i)/d."""

    __slots__ = ("t",)

    def __init__(self, re=0, im=0):
        if isinstance(re, QQi):
            t = re.t
            if im:
                t = q3_add(t, q3_from_fractions(0, im))
            object.__setattr__(self, "t", t)
            return
        object.__setattr__(self, "t", q3_from_fractions(re, im))

    @classmethod
    def from_triple(cls, t):
        obj = object.__new__(cls)
        object.__setattr__(obj, "t", t)
        return obj

    def __setattr__(self, *args):
        raise AttributeError("QQi is immutable")

    @property
    def re(self):
        a, _, d = self.t
        return Fraction(a, d)

    @property
    def im(self):
        _, b, d = self.t
        return Fraction(b, d)

    def is_zero(self):
        return self.t[0] == 0 and self.t[1] == 0

    def is_real(self):
        return self.t[1] == 0

    def __complex__(self):
        return q3_to_complex(self.t)

    def __bool__(self):
        return not self.is_zero()

    def _coerce(self, other):
        if isinstance(other, QQi):
            return other.t
        if isinstance(other, (int, Fraction)):
            return q3_from_fractions(other)
        return NotImplemented

    def __add__(self, other):
        t = self._coerce(other)
        if t is NotImplemented:
            return NotImplemented
        return QQi.from_triple(q3_add(self.t, t))

    __radd__ = __add__

    def __sub__(self, other):
        t = self._coerce(other)
        if t is NotImplemented:
            return NotImplemented
        return QQi.from_triple(q3_sub(self.t, t))

    def __rsub__(self, other):
        t = self._coerce(other)
        if t is NotImplemented:
            return NotImplemented
        return QQi.from_triple(q3_sub(t, self.t))

    def __mul__(self, other):
        t = self._coerce(other)
        if t is NotImplemented:
            return NotImplemented
        return QQi.from_triple(q3_mul(self.t, t))

    __rmul__ = __mul__

    def __truediv__(self, other):
        t = self._coerce(other)
        if t is NotImplemented:
            return NotImplemented
        return QQi.from_triple(q3_div(self.t, t))

    def __rtruediv__(self, other):
        t = self._coerce(other)
        if t is NotImplemented:
            return NotImplemented
        return QQi.from_triple(q3_div(t, self.t))

    def __neg__(self):
        return QQi.from_triple(q3_neg(self.t))

    def __eq__(self, other):
        t = self._coerce(other)
        if t is NotImplemented:
            return NotImplemented
        return self.t == t

    def __hash__(self):
        return hash(self.t)

    def __repr__(self):
        return f"QQi({q3_str(self.t)})"

    def __str__(self):
        return q3_str(self.t)

    def conj(self):
        a, b, d = self.t
        return QQi.from_triple((a, -b, d))


QQI_ZERO = QQi.from_triple(Q3_ZERO)
QQI_ONE = QQi.from_triple(Q3_ONE)
QQI_I = QQi.from_triple(Q3_I)


def as_scalar(x):
    """Coerce int/Fraction/complex/QQi into a QQi or complex."""
    if isinstance(x, (QQi, complex)):
        return x
    if isinstance(x, (int, Fraction)):
        return QQi(x)
    if isinstance(x, float):
        return complex(x)
    raise TypeError(f"cannot interpret {x!r} as a scalar")


def is_exact(x):
    return isinstance(x, QQi)


def scalar_to_complex(x):
    return complex(x)


# ---------------------------------------------------------------------------
# float special functions (scipy log-Gamma; poles guarded)

_POLE_EPS = 1e-9


def _near_nonpositive_integer(z: complex) -> bool:
    if abs(z.imag) > _POLE_EPS:
        return False
    r = round(z.real)
    return r <= 0 and abs(z.real - r) <= _POLE_EPS


def gamma_c(z) -> complex:
    """Gamma(z) for complex z, raising PoleHit at nonpositive integers."""
    z = complex(z)
    if _near_nonpositive_integer(z):
        raise PoleHit(f"Gamma pole at {z}")
    return cmath.exp(_loggamma(z))


def rgamma_c(z) -> complex:
    """1/Gamma(z); zero at the poles of Gamma."""
    z = complex(z)
    if _near_nonpositive_integer(z):
        return 0.0 + 0.0j
    return cmath.exp(-_loggamma(z))


def beta_c(z1, z2) -> complex:
    """Euler Beta(z1, z2) = Gamma(z1)Gamma(z2)/Gamma(z1+z2), float."""
    z1, z2 = complex(z1), complex(z2)
    p1 = _near_nonpositive_integer(z1)
    p2 = _near_nonpositive_integer(z2)
    p12 = _near_nonpositive_integer(z1 + z2)
    if (p1 or p2) and not p12:
        raise PoleHit(f"Beta pole at ({z1}, {z2})")
    if p12 and not (p1 or p2):
        return 0.0 + 0.0j
    if p1 or p2:
        # pole over pole: cancel one Gamma by the recurrence around it
        raise PoleHit(f"Beta indeterminate at ({z1}, {z2})")
    return cmath.exp(_loggamma(z1) + _loggamma(z2) - _loggamma(z1 + z2))


def inv_beta_c(z1, z2) -> complex:
    """1/Beta(z1, z2); zero where Gamma(z1) or Gamma(z2) has a pole."""
    z1, z2 = complex(z1), complex(z2)
    p1 = _near_nonpositive_integer(z1)
    p2 = _near_nonpositive_integer(z2)
    p12 = _near_nonpositive_integer(z1 + z2)
    if p12 and not (p1 or p2):
        raise PoleHit(f"1/Beta pole at ({z1}, {z2})")
    if (p1 or p2) and not p12:
        return 0.0 + 0.0j
    if p1 or p2:
        raise PoleHit(f"1/Beta indeterminate at ({z1}, {z2})")
    return cmath.exp(_loggamma(z1 + z2) - _loggamma(z1) - _loggamma(z2))


# ---------------------------------------------------------------------------
# spec'd operations


def gamma_shift_product(base, shifts_num, shifts_den):
    """Prod_j Gamma(base+s_j) / Prod_k Gamma(base+t_k).

    With an exact base the ratio must telescope: the shift lists need equal
    length so every Gamma(base+min) cancels, leaving a finite product of
    linear factors.  A zero factor left in the denominator is a pole; one in
    the numerator makes the ratio exactly zero.
    """
    if not shifts_num or not shifts_den:
        raise ValueError("shift lists must be nonempty")
    if any(int(s) != s for s in list(shifts_num) + list(shifts_den)):
        raise ValueError("shifts must be integers")
    shifts_num = [int(s) for s in shifts_num]
    shifts_den = [int(s) for s in shifts_den]
    base = as_scalar(base)

    if isinstance(base, QQi):
        if len(shifts_num) != len(shifts_den):
            raise NonTelescoping(
                "unbalanced Gamma ratio leaves a residual Gamma factor")
        m = min(shifts_num + shifts_den)
        # Gamma(base+s) = Gamma(base+m) * prod_{j=m}^{s-1} (base+j)
        factors = {}
        for s in shifts_num:
            for j in range(m, s):
                factors[j] = factors.get(j, 0) + 1
        for t in shifts_den:
            for j in range(m, t):
                factors[j] = factors.get(j, 0) - 1
        num = QQI_ONE
        den = QQI_ONE
        for j, e in factors.items():
            f = base + j
            if e > 0:
                for _ in range(e):
                    num = num * f
            elif e < 0:
                for _ in range(-e):
                    den = den * f
        if den.is_zero():
            raise PoleHit("Gamma ratio pole (zero factor in denominator)")
        return num / den

    z = complex(base)
    try:
        val = 0.0 + 0.0j
        for s in shifts_num:
            val += _loggamma(z + s)
        for t in shifts_den:
            val -= _loggamma(z + t)
    except Exception:  # scipy raises on exact poles
        raise PoleHit(f"Gamma pole near base {z}")
    for s in shifts_num:
        if _near_nonpositive_integer(z + s):
            raise PoleHit(f"Gamma pole at {z + s}")
    for t in shifts_den:
        if _near_nonpositive_integer(z + t):
            return 0.0 + 0.0j
    return cmath.exp(val)


def pow_minus_two_i(t):
    """(-2i)^t on the branch exp((-i*pi/2 + log 2) * t); exact for integer t."""
    t = as_scalar(t)
    if isinstance(t, QQi) and t.is_real() and t.re.denominator == 1:
        k = t.re.numerator
        base = QQi(0, -2)
        if k >= 0:
            out = QQI_ONE
            for _ in range(k):
                out = out * base
            return out
        out = QQI_ONE
        for _ in range(-k):
            out = out / base
        return out
    z = complex(t)
    return cmath.exp((-1j * math.pi / 2 + math.log(2)) * z)


def sine_pi_half(u):
    """sin(pi*u/2); exact (0 or +-1) when u is an integer."""
    u = as_scalar(u)
    if isinstance(u, QQi) and u.is_real() and u.re.denominator == 1:
        k = u.re.numerator % 4
        return (QQI_ZERO, QQI_ONE, QQI_ZERO, -QQI_ONE)[k]
    return cmath.sin(math.pi * complex(u) / 2)
