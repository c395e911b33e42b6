"""Exact coefficients in Q(zeta8) = Q[s]/(s**4 + 1), with s = sqrt(i).

Every coefficient appearing in the hierarchy lives here: rationals, i = s**2,
and sqrt(i) = s itself.  Arithmetic is exact and zero testing is decidable,
which is what makes canonical-form equality of expressions meaningful.
"""

from __future__ import annotations

import cmath
import re
from fractions import Fraction

from smkdv import kernel as _k


class Scalar:
    """Immutable element c0 + c1*s + c2*s**2 + c3*s**3 with rational ci."""

    __slots__ = ("t",)

    def __init__(self, t=_k.S_ZERO):
        self.t = t

    @staticmethod
    def make(n0, n1, n2, n3, den=1) -> "Scalar":
        return Scalar(_k.s_make(n0, n1, n2, n3, den))

    @staticmethod
    def rational(p, q=1) -> "Scalar":
        if isinstance(p, Fraction):
            q2 = p.denominator * q
            return Scalar(_k.s_make(p.numerator, 0, 0, 0, q2))
        return Scalar(_k.s_make(p, 0, 0, 0, q))

    @staticmethod
    def coerce(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, int):
            return Scalar((x, 0, 0, 0, 1)) if x else ZERO
        if isinstance(x, Fraction):
            return Scalar(_k.s_make(x.numerator, 0, 0, 0, x.denominator))
        raise TypeError(f"cannot coerce {type(x)!r} to Scalar")

    def __add__(self, other):
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        return Scalar(_k.s_add(self.t, Scalar.coerce(other).t))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        return Scalar(_k.s_sub(self.t, Scalar.coerce(other).t))

    def __rsub__(self, other):
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        return Scalar(_k.s_sub(Scalar.coerce(other).t, self.t))

    def __neg__(self):
        return Scalar(_k.s_neg(self.t))

    def __mul__(self, other):
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        return Scalar(_k.s_mul(self.t, Scalar.coerce(other).t))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * Scalar.coerce(other).inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.t == Scalar.coerce(other).t
        return NotImplemented

    def __hash__(self):
        return hash(self.t)

    def __bool__(self):
        return not _k.s_is_zero(self.t)

    @property
    def is_zero(self) -> bool:
        return _k.s_is_zero(self.t)

    @property
    def is_rational(self) -> bool:
        return self.t[1] == 0 and self.t[2] == 0 and self.t[3] == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return Fraction(self.t[0], self.t[4])

    def components(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        d = self.t[4]
        return tuple(Fraction(n, d) for n in self.t[:4])

    def inverse(self) -> "Scalar":
        """Exact inverse via the 4x4 multiplication matrix of self."""
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero scalar")
        c = self.components()
        # columns are self * s**j reduced mod s**4 = -1
        m = [
            [c[0], -c[3], -c[2], -c[1]],
            [c[1], c[0], -c[3], -c[2]],
            [c[2], c[1], c[0], -c[3]],
            [c[3], c[2], c[1], c[0]],
        ]
        rhs = [Fraction(1), Fraction(0), Fraction(0), Fraction(0)]
        x = _solve4(m, rhs)
        den = 1
        for f in x:
            den = den * f.denominator // _gcd(den, f.denominator)
        nums = [int(f * den) for f in x]
        return Scalar.make(nums[0], nums[1], nums[2], nums[3], den)

    def conj_i(self) -> "Scalar":
        """Galois map s -> -s (fixes rationals, sends i -> i)."""
        n0, n1, n2, n3, d = self.t
        return Scalar((n0, -n1, n2, -n3, d))

    def to_complex(self) -> complex:
        s = cmath.exp(1j * cmath.pi / 4)
        n0, n1, n2, n3, d = self.t
        return (n0 + n1 * s + n2 * s * s + n3 * s ** 3) / d

    def render(self) -> str:
        """Rendering "a + b*si + c*i + d*i*si" with si = sqrt(i)."""
        d = self.t[4]
        parts = []
        for n, tag in zip(self.t[:4], ("", "si", "i", "i*si")):
            if n == 0:
                continue
            q = Fraction(n, d)
            if tag:
                parts.append(f"{q}*{tag}")
            else:
                parts.append(f"{q}")
        if not parts:
            return "0"
        return " + ".join(parts)

    @staticmethod
    def parse(text: str) -> "Scalar":
        acc = Scalar.zero()
        text = text.strip()
        if text == "0":
            return acc
        for part in re.split(r"\s*\+\s*", text):
            m = re.fullmatch(r"(-?\d+(?:/\d+)?)(?:\*(si|i|i\*si))?", part.strip())
            if not m:
                raise ValueError(f"bad scalar fragment {part!r}")
            q = Fraction(m.group(1))
            tag = m.group(2)
            idx = {None: 0, "si": 1, "i": 2, "i*si": 3}[tag]
            comp = [0, 0, 0, 0]
            comp[idx] = q.numerator
            acc = acc + Scalar.make(*comp, den=q.denominator)
        return acc

    @staticmethod
    def zero() -> "Scalar":
        return ZERO

    @staticmethod
    def one() -> "Scalar":
        return ONE

    def __repr__(self):
        return f"Scalar({self.render()})"


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _solve4(m, rhs):
    """Gaussian elimination for a 4x4 exact rational system."""
    n = 4
    a = [row[:] + [rhs[i]] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular scalar inverse system")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


ZERO = Scalar(_k.S_ZERO)
ONE = Scalar(_k.S_ONE)
I = Scalar((0, 0, 1, 0, 1))
SQRT_I = Scalar((0, 1, 0, 0, 1))
# 1/sqrt(i) = -s**3 since s * s**3 = s**4 = -1
INV_SQRT_I = Scalar((0, 0, 0, -1, 1))
HALF = Scalar((1, 0, 0, 0, 2))
