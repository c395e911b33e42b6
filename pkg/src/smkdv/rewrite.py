"""Oriented substitution systems over the jet ring.

A RewriteSystem maps target atoms (jets, odd jets, symbolic time
derivatives) to replacement expressions.  Rules are closed against each
other on first use, and prolonged on demand: a rule for d_x(f1) induces the
rule for d_x^k(f1) by differentiating the reduced right-hand side.  A
linear label map (e.g. phi1 -> (phip + phim)/2) applies uniformly to jets,
time jets and exponential atoms, which is how changes of field basis are
expressed.

After closure no replacement contains a target atom, so rewriting a
monomial strictly decreases its count of target occurrences and terminates.
A cycle among rules (mis-oriented system) raises NonTerminating instead.
"""

from __future__ import annotations

from fractions import Fraction

from smkdv import atoms
from smkdv import kernel as _k
from smkdv.expr import Expr, _prepend_key


class NonTerminating(Exception):
    """Rule closure recursed into itself or exceeded the order bound."""


class RewriteError(Exception):
    pass


class RewriteSystem:
    def __init__(self, name: str = "", max_order: int = 64):
        self.name = name
        self.max_order = max_order
        self._base: dict[int, Expr] = {}
        self._family_min: dict[tuple[int, int, int], int] = {}
        self._label_map: dict[int, tuple[tuple[int, Fraction], ...]] = {}
        self._closed: dict[int, Expr | None] = {}
        self._in_progress: set[int] = set()

    def add(self, code: int, rhs: Expr) -> "RewriteSystem":
        if code in self._base:
            raise RewriteError(f"duplicate rule for {atoms.atom_name(code)}")
        lid = atoms.label_id_of(code)
        if lid in self._label_map:
            raise RewriteError("rule target collides with label map")
        self._base[code] = rhs
        fam = (lid, atoms.kind_of(code),
               atoms.FLOW_ID[atoms.flow_of(code)])
        k = atoms.order_of(code)
        if fam not in self._family_min or k < self._family_min[fam]:
            self._family_min[fam] = k
        self._closed.clear()
        return self

    def add_label_map(self, src: str, images: list[tuple[str, Fraction | int]]
                      ) -> "RewriteSystem":
        sid = atoms.LABEL_ID[src]
        for dst, _ in images:
            if atoms.LABEL_ID[dst] in self._label_map:
                raise RewriteError("chained label maps are not supported")
        self._label_map[sid] = tuple(
            (atoms.LABEL_ID[dst], Fraction(c)) for dst, c in images)
        self._closed.clear()
        return self

    @staticmethod
    def union(name: str, *systems: "RewriteSystem") -> "RewriteSystem":
        out = RewriteSystem(name=name)
        for sys_ in systems:
            for code, rhs in sys_._base.items():
                out.add(code, rhs)
            for sid, images in sys_._label_map.items():
                out._label_map[sid] = images
        return out

    def targets(self) -> list[int]:
        return sorted(self._base)

    def base_rule(self, code: int) -> Expr:
        return self._base[code]

    # -- resolution ---------------------------------------------------------

    def lookup(self, code: int) -> Expr | None:
        """Fully reduced replacement for an atom, or None if it is free."""
        hit = self._closed.get(code, _MISS)
        if hit is not _MISS:
            return hit
        lid = atoms.label_id_of(code)
        raw = None
        if code in self._base:
            raw = self._base[code]
        elif lid in self._label_map:
            raw = Expr.zero()
            for dst, c in self._label_map[lid]:
                # same kind, flow and order bits under the new label
                raw = raw + Expr.atom((dst << 16) | (code & 0xFFFF)).scale(c)
        else:
            fam = (lid, atoms.kind_of(code),
                   atoms.FLOW_ID[atoms.flow_of(code)])
            k0 = self._family_min.get(fam)
            k = atoms.order_of(code)
            if k0 is None or k <= k0:
                self._closed[code] = None
                return None
            if k > self.max_order:
                raise NonTerminating(
                    f"prolongation past order {self.max_order}")
            prev = self.lookup(code - 1)
            if prev is None:
                self._closed[code] = None
                return None
            raw = prev.d_dx()
        if code in self._in_progress:
            raise NonTerminating(
                f"cyclic rules through {atoms.atom_name(code)}")
        self._in_progress.add(code)
        try:
            closed = self.rewrite(raw)
        finally:
            self._in_progress.discard(code)
        self._closed[code] = closed
        return closed

    # -- rewriting ----------------------------------------------------------

    def rewrite(self, e: Expr) -> Expr:
        if not (self._base or self._label_map):
            return e
        out: dict = {}
        work = list(e.terms.items())
        while work:
            key, coeff = work.pop()
            z, w, evens, exps, odds = key
            if exps and self._label_map:
                new_exps = self._subst_exps(exps)
                if new_exps is not None:
                    _push(work, {(z, w, evens, new_exps, odds): coeff})
                    continue
            hit = None
            for idx, (code, p) in enumerate(evens):
                rhs = self.lookup(code)
                if rhs is not None:
                    hit = ("even", idx, code, p, rhs)
                    break
            if hit is None:
                for i, code in enumerate(odds):
                    rhs = self.lookup(code)
                    if rhs is not None:
                        hit = ("odd", i, code, 0, rhs)
                        break
            if hit is None:
                _k.expr_iadd(out, {key: coeff})
                continue
            kind, i, code, p, rhs = hit
            if kind == "even":
                if p == 1:
                    rest = evens[:i] + evens[i + 1:]
                else:
                    rest = evens[:i] + ((code, p - 1),) + evens[i + 1:]
                produced = _k.expr_mul_key(rhs.terms, (z, w, rest, exps, odds),
                                           coeff)
            else:
                left = (z, w, evens, exps, odds[:i])
                mid = _k.expr_mul_key(rhs.terms,
                                      (0, 0, (), (), odds[i + 1:]), _k.S_ONE)
                produced = _prepend_key(left, coeff, mid)
            work.extend(produced.items())
        return Expr(out)

    def _subst_exps(self, exps):
        if not any(lid in self._label_map for lid, _ in exps):
            return None
        acc: dict[int, Fraction] = {}
        for lid, num4 in exps:
            images = self._label_map.get(lid)
            if images is None:
                acc[lid] = acc.get(lid, Fraction(0)) + Fraction(num4)
            else:
                for dst, c in images:
                    acc[dst] = acc.get(dst, Fraction(0)) + num4 * c
        entries = []
        for lid in sorted(acc):
            v = acc[lid]
            if v == 0:
                continue
            if v.denominator != 1:
                raise RewriteError(f"exponent {v}/4 leaves the quarter lattice")
            entries.append((lid, int(v)))
        return tuple(entries)

    def __repr__(self):
        return (f"RewriteSystem({self.name!r}, {len(self._base)} rules, "
                f"{len(self._label_map)} label maps)")


_MISS = object()


def _push(work, terms):
    work.extend(terms.items())
