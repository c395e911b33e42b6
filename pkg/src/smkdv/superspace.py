"""Superfield layer: one Grassmann coordinate theta, D = d_theta + theta*d_x.

A SuperExpr stores the two theta components structurally (body + theta*soul,
theta written on the left), so theta**2 = 0 and d_theta need no sign
bookkeeping of their own; all Grassmann signs live in the component Exprs.
Functions of superfields with nilpotent soul expand exactly:
f(b + theta*s) = f(b) + theta*s*f'(b).
"""

from __future__ import annotations

from fractions import Fraction

from smkdv.expr import Expr, exp_of
from smkdv.scalar import INV_SQRT_I, SQRT_I, Scalar


class SuperExpr:
    __slots__ = ("body", "soul")

    def __init__(self, body: Expr, soul: Expr):
        self.body = body
        self.soul = soul

    @staticmethod
    def zero() -> "SuperExpr":
        return SuperExpr(Expr.zero(), Expr.zero())

    @staticmethod
    def const(c) -> "SuperExpr":
        return SuperExpr(Expr.const(c), Expr.zero())

    @staticmethod
    def lift(body: Expr, soul: Expr) -> "SuperExpr":
        return SuperExpr(body, soul)

    def __add__(self, other) -> "SuperExpr":
        other = _coerce(other)
        return SuperExpr(self.body + other.body, self.soul + other.soul)

    __radd__ = __add__

    def __sub__(self, other) -> "SuperExpr":
        other = _coerce(other)
        return SuperExpr(self.body - other.body, self.soul - other.soul)

    def __rsub__(self, other) -> "SuperExpr":
        return _coerce(other) - self

    def __neg__(self) -> "SuperExpr":
        return SuperExpr(-self.body, -self.soul)

    def __mul__(self, other) -> "SuperExpr":
        """Graded product; theta-bilinear terms vanish.

        (b1 + th*s1)(b2 + th*s2) = b1*b2 + th*((-1)^{|b1|} b1*s2 + s1*b2);
        mixed-parity factors are split so the sign is well defined.
        """
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        other = _coerce(other)
        out_body = self.body * other.body
        out_soul = Expr.zero()
        for b1, s1, parity in _parity_split(self):
            if not b1.is_zero or not s1.is_zero:
                signed = other.soul if parity == 0 else -other.soul
                out_soul = out_soul + b1 * signed + s1 * other.body
        return SuperExpr(out_body, out_soul)

    def __rmul__(self, other) -> "SuperExpr":
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        return _coerce(other) * self

    def scale(self, c) -> "SuperExpr":
        return SuperExpr(self.body.scale(c), self.soul.scale(c))

    def __eq__(self, other):
        other = _coerce(other)
        return self.body == other.body and self.soul == other.soul

    __hash__ = None

    @property
    def is_zero(self) -> bool:
        return self.body.is_zero and self.soul.is_zero

    def parity(self) -> int | None:
        pb = self.body.parity()
        ps = self.soul.parity()
        if pb is None and ps is None:
            return None
        if pb is None:
            return 1 - ps
        if ps is None or ps == 1 - pb:
            return pb
        return None

    def D(self) -> "SuperExpr":
        """Covariant super derivative: D(b + th*s) = s + th*d_x(b)."""
        return SuperExpr(self.soul, self.body.d_dx())

    def Dn(self, n: int) -> "SuperExpr":
        out = self
        for _ in range(n):
            out = out.D()
        return out

    def d_dx(self) -> "SuperExpr":
        return SuperExpr(self.body.d_dx(), self.soul.d_dx())

    def d_dt(self, flow: str) -> "SuperExpr":
        return SuperExpr(self.body.d_dt(flow), self.soul.d_dt(flow))

    def components(self) -> tuple[Expr, Expr]:
        return self.body, self.soul

    def map(self, f) -> "SuperExpr":
        return SuperExpr(f(self.body), f(self.soul))

    def __repr__(self):
        return f"SuperExpr(body={self.body!r}, soul={self.soul!r})"


def _coerce(x) -> SuperExpr:
    if isinstance(x, SuperExpr):
        return x
    if isinstance(x, Expr):
        return SuperExpr(x, Expr.zero())
    if isinstance(x, (int, Fraction, Scalar)):
        return SuperExpr.const(x)
    raise TypeError(f"cannot coerce {type(x)!r} to SuperExpr")


def _parity_split(se: SuperExpr):
    """Yield (body_part, soul_part, parity) pieces of definite parity."""
    b0, b1 = _split(se.body)
    s0, s1 = _split(se.soul)
    # an even superfield has even body and odd soul
    yield b0, s1, 0
    yield b1, s0, 1


def _split(e: Expr) -> tuple[Expr, Expr]:
    ev, od = {}, {}
    for key, c in e.terms.items():
        (ev if len(key[4]) % 2 == 0 else od)[key] = c
    return Expr(ev), Expr(od)


# -- standard superfields ----------------------------------------------------


def superfield_phi(phi: str, psib: str) -> SuperExpr:
    """Bosonic superfield with components (phi, psibar): phi - sqrt(i)*theta*psibar."""
    from smkdv.expr import A

    return SuperExpr(A(phi, 0), -(SQRT_I * A(psib, 0)))


def superfield_sigma() -> SuperExpr:
    """Fermionic defect superfield: -f1/sqrt(i) + theta*b1."""
    from smkdv.expr import A

    return SuperExpr(-(INV_SQRT_I * A("f1", 0)), A("b1", 0))


def exp_linear(se: SuperExpr, k: Fraction | int = 1) -> SuperExpr:
    """exp(k * se) for a superfield whose body is linear in order-0 fields.

    exp(k(b + th*s)) = e^{kb} (1 + th*k*s), exact because theta*s is nilpotent.
    """
    k = Fraction(k)
    coeffs: dict[str, Fraction] = {}
    for key, c in se.body.terms.items():
        z, w, evens, exps, odds = key
        if z or w or exps or odds or len(evens) != 1 or evens[0][1] != 1:
            raise ValueError("exp of a non-linear superfield body")
        code = evens[0][0]
        from smkdv import atoms

        if atoms.order_of(code) != 0 or atoms.kind_of(code) != atoms.KIND_JET:
            raise ValueError("exp of a non-field body atom")
        sc = Scalar(c)
        coeffs[atoms.label_of(code)] = sc.as_fraction() * k
    body = exp_of(coeffs) if coeffs else Expr.one()
    return SuperExpr(body, se.soul.scale(k) * body)


def sinh_super(se: SuperExpr, k: Fraction | int = 1) -> SuperExpr:
    p = exp_linear(se, k)
    m = exp_linear(se, -Fraction(k))
    return (p - m).scale(Fraction(1, 2))


def cosh_super(se: SuperExpr, k: Fraction | int = 1) -> SuperExpr:
    p = exp_linear(se, k)
    m = exp_linear(se, -Fraction(k))
    return (p + m).scale(Fraction(1, 2))
