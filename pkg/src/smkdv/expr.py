"""Canonical graded differential polynomials.

An Expr is a finite sum of monomials in: bosonic jets, exponentials of
bosonic fields with quarter-integer exponents, ordered Grassmann-odd jets,
powers of the spectral root z (lambda = z**2) and of the Backlund parameter
omega.  Two Exprs are equal iff their canonical term maps are equal, so an
identity holds exactly iff its residual is the empty sum.

Sign conventions: odd atoms in a monomial are kept strictly sorted under the
global atom order; transposing them during multiplication contributes the
Koszul sign, and a repeated odd atom annihilates the monomial.

Hyperbolic functions are not primitive.  sinh/cosh of (k/2)*phi are expanded
into exponential atoms at construction time (`sinh_of`, `cosh_of`), so
identities mixing polynomial and hyperbolic pieces canonicalize to a single
form.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from smkdv import atoms
from smkdv import kernel as _k
from smkdv.scalar import ONE, Scalar

_EMPTY = ()
_KEY_ONE = (0, 0, _EMPTY, _EMPTY, _EMPTY)


class Expr:
    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        # terms maps monomial key -> kernel scalar tuple; owned, not copied
        self.terms = terms if terms is not None else {}

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "Expr":
        return Expr({})

    @staticmethod
    def one() -> "Expr":
        return Expr({_KEY_ONE: _k.S_ONE})

    @staticmethod
    def const(c) -> "Expr":
        c = Scalar.coerce(c)
        if c.is_zero:
            return Expr({})
        return Expr({_KEY_ONE: c.t})

    @staticmethod
    def atom(code: int) -> "Expr":
        if atoms.is_odd_atom(code):
            return Expr({(0, 0, _EMPTY, _EMPTY, (code,)): _k.S_ONE})
        return Expr({(0, 0, ((code, 1),), _EMPTY, _EMPTY): _k.S_ONE})

    @staticmethod
    def z_pow(n: int) -> "Expr":
        return Expr({(n, 0, _EMPTY, _EMPTY, _EMPTY): _k.S_ONE})

    @staticmethod
    def w_pow(n: int) -> "Expr":
        return Expr({(0, n, _EMPTY, _EMPTY, _EMPTY): _k.S_ONE})

    @staticmethod
    def from_terms(pairs: Iterable[tuple[dict, Scalar]]) -> "Expr":
        acc = Expr.zero()
        for e, c in pairs:
            acc = acc + Expr.const(c) * e
        return acc

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "Expr":
        other = _coerce(other)
        out = dict(self.terms)
        _k.expr_iadd(out, other.terms)
        return Expr(out)

    __radd__ = __add__

    def __sub__(self, other) -> "Expr":
        other = _coerce(other)
        out = dict(self.terms)
        _k.expr_iadd(out, other.terms, _k.s_neg(_k.S_ONE))
        return Expr(out)

    def __rsub__(self, other) -> "Expr":
        return _coerce(other) - self

    def __neg__(self) -> "Expr":
        return Expr({key: _k.s_neg(c) for key, c in self.terms.items()})

    def __mul__(self, other) -> "Expr":
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        if not isinstance(other, Expr):
            return NotImplemented
        if len(self.terms) == 1:
            ((key, c),) = self.terms.items()
            return Expr(_prepend_key(key, c, other.terms))
        if len(other.terms) == 1:
            ((key, c),) = other.terms.items()
            return Expr(_k.expr_mul_key(self.terms, key, c))
        return Expr(_k.expr_mul(self.terms, other.terms))

    def __rmul__(self, other) -> "Expr":
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "Expr":
        if n < 0:
            raise ValueError("negative Expr power")
        out = Expr.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def scale(self, c) -> "Expr":
        c = Scalar.coerce(c)
        if c.is_zero:
            return Expr.zero()
        if c == ONE:
            return self
        return Expr({k: _k.s_mul(c.t, v) for k, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = Expr.const(other)
        if not isinstance(other, Expr):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self):
        if len(self.terms) > 8:
            return f"Expr<{len(self.terms)} terms>"
        return f"Expr({self.to_text()})"

    # -- structure ---------------------------------------------------------

    def parity(self) -> int | None:
        """0 (even), 1 (odd) or None when the expression is mixed/zero."""
        seen = {len(key[4]) & 1 for key in self.terms}
        if len(seen) == 1:
            return seen.pop()
        return None

    def atom_codes(self) -> set[int]:
        out = set()
        for _, _, evens, _, odds in self.terms:
            out.update(code for code, _ in evens)
            out.update(odds)
        return out

    def max_order(self, label: str) -> int:
        lid = atoms.LABEL_ID[label]
        best = -1
        for _, _, evens, _, odds in self.terms:
            for code, _ in evens:
                if atoms.label_id_of(code) == lid:
                    best = max(best, atoms.order_of(code))
            for code in odds:
                if atoms.label_id_of(code) == lid:
                    best = max(best, atoms.order_of(code))
        return best

    def subs_zero(self, labels: Iterable[str]) -> "Expr":
        """Set the given fields identically to zero (their exponentials to 1)."""
        ids = {atoms.LABEL_ID[l] for l in labels}
        out: dict = {}
        for key, c in self.terms.items():
            z, w, evens, exps, odds = key
            if any(atoms.label_id_of(code) in ids for code, _ in evens):
                continue
            if any(atoms.label_id_of(code) in ids for code in odds):
                continue
            exps2 = tuple((lid, e) for lid, e in exps if lid not in ids)
            _k.expr_iadd(out, {(z, w, evens, exps2, odds): c})
        return Expr(out)

    def coefficient_of_z(self, zpow: int) -> "Expr":
        return Expr({(0,) + key[1:]: c for key, c in self.terms.items()
                     if key[0] == zpow})

    def z_range(self) -> tuple[int, int] | None:
        if not self.terms:
            return None
        zs = [key[0] for key in self.terms]
        return min(zs), max(zs)

    # -- calculus ----------------------------------------------------------

    def d_dx(self, n: int = 1) -> "Expr":
        e = self
        for _ in range(n):
            e = _d_dx_once(e)
        return e

    def d_dt(self, flow: str) -> "Expr":
        return _d_dt(self, flow)

    def derive(self, atom_map: Callable[[int], "Expr | None"],
               exp_map: Callable[[int], "Expr | None"] | None = None) -> "Expr":
        """Generic even derivation defined by images of atoms.

        ``atom_map`` gives the image of a jet atom (None means annihilated);
        ``exp_map`` gives the image of the order-0 field of an exponential
        label, used through the chain rule.  Parity of each image must equal
        the parity of its atom, which is what makes the derivation even and
        keeps the Leibniz rule sign-free.
        """
        out: dict = {}
        for key, c in self.terms.items():
            z, w, evens, exps, odds = key
            # even atoms: placement of the (even) image is irrelevant
            for idx, (code, p) in enumerate(evens):
                img = atom_map(code)
                if img is None or img.is_zero:
                    continue
                if p == 1:
                    rest = evens[:idx] + evens[idx + 1:]
                else:
                    rest = evens[:idx] + ((code, p - 1),) + evens[idx + 1:]
                coeff = _k.s_mul(c, (p, 0, 0, 0, 1))
                _k.expr_iadd(out, _k.expr_mul_key(
                    img.terms, (z, w, rest, exps, odds), coeff))
            # exponential factors
            if exps and exp_map is not None:
                for lid, num4 in exps:
                    img = exp_map(lid)
                    if img is None or img.is_zero:
                        continue
                    coeff = _k.s_mul(c, _k.s_make(num4, 0, 0, 0, 4))
                    _k.expr_iadd(out, _k.expr_mul_key(
                        img.terms, key, coeff))
            # odd atoms: odd image must sit exactly where the atom was
            for i, code in enumerate(odds):
                img = atom_map(code)
                if img is None or img.is_zero:
                    continue
                left = (z, w, evens, exps, odds[:i])
                right = (0, 0, _EMPTY, _EMPTY, odds[i + 1:])
                mid = _k.expr_mul_key(img.terms, right, _k.S_ONE)
                _k.expr_iadd(out, _prepend_key(left, c, mid))
        return Expr(out)

    # -- linear solving ----------------------------------------------------

    def split_linear(self, code: int) -> tuple["Expr", "Expr"]:
        """Write self = A*a + B for atom a, a moved to the right end.

        Raises ValueError if any monomial contains the atom nonlinearly.
        """
        a_terms: dict = {}
        b_terms: dict = {}
        odd = atoms.is_odd_atom(code)
        for key, c in self.terms.items():
            z, w, evens, exps, odds = key
            if odd:
                if code not in odds:
                    b_terms[key] = c
                    continue
                i = odds.index(code)
                sign = -1 if ((len(odds) - 1 - i) & 1) else 1
                rest = odds[:i] + odds[i + 1:]
                kk = (z, w, evens, exps, rest)
                a_terms[kk] = c if sign > 0 else _k.s_neg(c)
            else:
                hit = [(j, p) for j, (cc, p) in enumerate(evens) if cc == code]
                if not hit:
                    b_terms[key] = c
                    continue
                j, p = hit[0]
                if p != 1:
                    raise ValueError("atom occurs nonlinearly")
                kk = (z, w, evens[:j] + evens[j + 1:], exps, odds)
                a_terms[kk] = c
        return Expr(a_terms), Expr(b_terms)

    def solve_for(self, code: int) -> "Expr":
        """Solve self == 0 for the given atom; its cofactor must be invertible."""
        a, b = self.split_linear(code)
        if a.is_zero:
            raise ValueError("atom absent; nothing to solve")
        inv = a.invert_monomial()
        return -(inv * b)

    def invert_monomial(self) -> "Expr":
        """Inverse of a single-term expression with no jet content."""
        if len(self.terms) != 1:
            raise ValueError(f"not a monomial ({len(self.terms)} terms)")
        ((key, c),) = self.terms.items()
        z, w, evens, exps, odds = key
        if evens or odds:
            raise ValueError("monomial with jet atoms is not invertible")
        cinv = Scalar(c).inverse()
        return Expr({(-z, -w, _EMPTY, tuple((l, -e) for l, e in exps), _EMPTY):
                     cinv.t})

    # -- rendering ---------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key, c in self.sorted_terms():
            z, w, evens, exps, odds = key
            factors = [f"({Scalar(c).render()})"]
            if z:
                factors.append(f"z^{z}")
            if w:
                factors.append(f"w^{w}")
            if exps:
                inner = ",".join(f"{atoms.LABELS[lid]}:{Fraction(n, 4)}"
                                 for lid, n in exps)
                factors.append("e{" + inner + "}")
            for code, p in evens:
                nm = atoms.atom_name(code)
                factors.append(nm if p == 1 else f"{nm}^{p}")
            for code in odds:
                factors.append(atoms.atom_name(code))
            parts.append("*".join(factors))
        return " + ".join(parts)

    @staticmethod
    def from_text(text: str) -> "Expr":
        return _parse_expr(text)


def _coerce(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction, Scalar)):
        return Expr.const(x)
    raise TypeError(f"cannot coerce {type(x)!r} to Expr")


def _prepend_key(key, coeff, terms):
    """dict for (coeff*key) * terms, keeping the key's odds on the left."""
    out = {}
    z1, w1, ev1, ex1, od1 = key
    for k2, c2 in terms.items():
        od2 = k2[4]
        if od1 and od2:
            merged = _k.odd_merge(od1, od2)
            if merged is None:
                continue
            odds, sign = merged
        else:
            odds = od1 or od2
            sign = 1
        k = (z1 + k2[0], w1 + k2[1], _k.assoc_merge_add(ev1, k2[2]),
             _k.assoc_merge_add(ex1, k2[3]), odds)
        c = _k.s_mul(coeff, c2)
        if sign < 0:
            c = _k.s_neg(c)
        c0 = out.get(k)
        if c0 is None:
            out[k] = c
            continue
        cs = _k.s_add(c0, c)
        if _k.s_is_zero(cs):
            del out[k]
        else:
            out[k] = cs
    return out


def _d_dx_once(e: Expr) -> Expr:
    out: dict = {}
    for key, c in e.terms.items():
        z, w, evens, exps, odds = key
        for idx, (code, p) in enumerate(evens):
            if atoms.is_constant(code) or atoms.order_of(code) >= atoms.MAX_ORDER:
                if atoms.is_constant(code):
                    continue
                raise OverflowError("jet order overflow")
            up = ((code + 1, 1),)
            if p == 1:
                rest = evens[:idx] + evens[idx + 1:]
            else:
                rest = evens[:idx] + ((code, p - 1),) + evens[idx + 1:]
            kk = (z, w, _k.assoc_merge_add(rest, up), exps, odds)
            _k.expr_iadd(out, {kk: _k.s_mul(c, (p, 0, 0, 0, 1))})
        if exps:
            for lid, num4 in exps:
                code = (lid << 16)  # order-0 plain jet of the label
                kk = (z, w, _k.assoc_merge_add(evens, ((code + 1, 1),)), exps,
                      odds)
                _k.expr_iadd(out, {kk: _k.s_mul(c, _k.s_make(num4, 0, 0, 0, 4))})
        for i, code in enumerate(odds):
            if atoms.is_constant(code):
                continue
            nxt = code + 1
            # adjacent codes: the incremented atom stays in slot i unless it
            # collides with its right neighbour (then the term dies)
            if i + 1 < len(odds) and odds[i + 1] == nxt:
                continue
            kk = (z, w, evens, exps, odds[:i] + (nxt,) + odds[i + 1:])
            _k.expr_iadd(out, {kk: c})
    return Expr(out)


def _d_dt(e: Expr, flow: str) -> Expr:
    fbits = (1 << 12) | (atoms.FLOW_ID[flow] << 8)
    out: dict = {}
    for key, c in e.terms.items():
        z, w, evens, exps, odds = key
        for idx, (code, p) in enumerate(evens):
            if atoms.kind_of(code) == atoms.KIND_TJET:
                raise ValueError("nested time derivative")
            if atoms.is_constant(code):
                continue
            if p == 1:
                rest = evens[:idx] + evens[idx + 1:]
            else:
                rest = evens[:idx] + ((code, p - 1),) + evens[idx + 1:]
            kk = (z, w, _k.assoc_merge_add(rest, ((code | fbits, 1),)), exps,
                  odds)
            _k.expr_iadd(out, {kk: _k.s_mul(c, (p, 0, 0, 0, 1))})
        if exps:
            for lid, num4 in exps:
                code = (lid << 16) | fbits
                kk = (z, w, _k.assoc_merge_add(evens, ((code, 1),)), exps, odds)
                _k.expr_iadd(out, {kk: _k.s_mul(c, _k.s_make(num4, 0, 0, 0, 4))})
        for i, code in enumerate(odds):
            if atoms.kind_of(code) == atoms.KIND_TJET:
                raise ValueError("nested time derivative")
            if atoms.is_constant(code):
                continue
            new = code | fbits
            rest = odds[:i] + odds[i + 1:]
            merged = _k.odd_merge((new,), rest)
            if merged is None:
                continue
            tup, sign = merged
            sign = sign if (i & 1) == 0 else -sign
            kk = (z, w, evens, exps, tup)
            _k.expr_iadd(out, {kk: c if sign > 0 else _k.s_neg(c)})
    return Expr(out)


# -- builders ---------------------------------------------------------------


def A(label: str, order: int = 0) -> Expr:
    """Jet atom as an expression; A("phi", 2) is the second x-derivative."""
    return Expr.atom(atoms.jet(label, order))


def At(flow: str, label: str, order: int = 0) -> Expr:
    return Expr.atom(atoms.tjet(flow, label, order))


def exp_of(coeffs: Mapping[str, Fraction | int] | str,
           k: Fraction | int = 1) -> Expr:
    """exp(sum_l c_l * l) as a single exponential monomial.

    ``exp_of("phip", Fraction(1,2))`` is exp(phip/2); a mapping argument
    builds multi-field exponents such as exp(phi1 + phi2).
    """
    if isinstance(coeffs, str):
        coeffs = {coeffs: k}
    entries = []
    for label, cf in sorted(coeffs.items(), key=lambda kv: atoms.LABEL_ID[kv[0]]):
        num4 = Fraction(cf) * 4
        if num4.denominator != 1:
            raise ValueError(f"exponent {cf} not a quarter-integer")
        if num4:
            entries.append((atoms.LABEL_ID[label], int(num4)))
    return Expr({(0, 0, _EMPTY, tuple(entries), _EMPTY): _k.S_ONE})


def _pm_exp(coeffs, k) -> tuple[Expr, Expr]:
    if isinstance(coeffs, str):
        coeffs = {coeffs: k}
    plus = exp_of(coeffs)
    minus = exp_of({l: -Fraction(c) for l, c in coeffs.items()})
    return plus, minus


def sinh_of(coeffs, k: Fraction | int = 1) -> Expr:
    p, m = _pm_exp(coeffs, k)
    return (p - m).scale(Fraction(1, 2))


def cosh_of(coeffs, k: Fraction | int = 1) -> Expr:
    p, m = _pm_exp(coeffs, k)
    return (p + m).scale(Fraction(1, 2))


# -- parser ------------------------------------------------------------------

_TERM_SPLIT = re.compile(r" \+ (?=\()")


def _parse_expr(text: str) -> Expr:
    text = text.strip()
    if text == "0":
        return Expr.zero()
    acc = Expr.zero()
    for term in _TERM_SPLIT.split(text):
        acc = acc + _parse_term(term)
    return acc


def _parse_term(term: str) -> Expr:
    m = re.match(r"\(([^)]*)\)(?:\*(.*))?$", term.strip())
    if not m:
        raise ValueError(f"bad term {term!r}")
    out = Expr.const(Scalar.parse(m.group(1)))
    rest = m.group(2)
    if not rest:
        return out
    for factor in rest.split("*"):
        factor = factor.strip()
        if factor.startswith("z^"):
            out = out * Expr.z_pow(int(factor[2:]))
        elif factor.startswith("w^"):
            out = out * Expr.w_pow(int(factor[2:]))
        elif factor.startswith("e{"):
            inner = factor[2:-1]
            coeffs = {}
            for piece in inner.split(","):
                lbl, frac = piece.split(":")
                coeffs[lbl] = Fraction(frac)
            out = out * exp_of(coeffs)
        else:
            if "^" in factor:
                name, p = factor.split("^")
                p = int(p)
            else:
                name, p = factor, 1
            out = out * Expr.atom(atoms.parse_atom(name)) ** p
    return out
