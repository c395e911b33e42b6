"""Exact x-antiderivatives in the jet ring.

Given e, decide whether some F with d_dx(F) = e exists inside the span of
candidate monomials, and return it.  Candidates are generated from each
monomial of e by decrementing exactly one jet's derivative order, plus the
exponential-absorption move (dropping one d_x(phi) factor next to an
exponential of phi).  The resulting exact linear system over Q(zeta8) is
solved by sparse Gaussian elimination; inconsistency means "no
antiderivative in the candidate span" and returns None.
"""

from __future__ import annotations

from smkdv import atoms
from smkdv import kernel as _k
from smkdv.expr import Expr
from smkdv.scalar import Scalar


def candidate_keys(e: Expr) -> list:
    cands = set()
    for key in e.terms:
        z, w, evens, exps, odds = key
        for idx, (code, p) in enumerate(evens):
            if atoms.order_of(code) < 1:
                continue
            if p == 1:
                rest = evens[:idx] + evens[idx + 1:]
            else:
                rest = evens[:idx] + ((code, p - 1),) + evens[idx + 1:]
            cands.add((z, w, _k.assoc_merge_add(rest, ((code - 1, 1),)),
                       exps, odds))
        for i, code in enumerate(odds):
            if atoms.order_of(code) < 1 or atoms.is_constant(code):
                continue
            dec = code - 1
            if i > 0 and odds[i - 1] == dec:
                continue
            cands.add((z, w, evens, exps, odds[:i] + (dec,) + odds[i + 1:]))
        if exps:
            for lid, _ in exps:
                d1 = (lid << 16) | 1
                for idx, (code, p) in enumerate(evens):
                    if code != d1:
                        continue
                    if p == 1:
                        rest = evens[:idx] + evens[idx + 1:]
                    else:
                        rest = evens[:idx] + ((code, p - 1),) + evens[idx + 1:]
                    cands.add((z, w, rest, exps, odds))
    return sorted(cands)


def antiderivative_x(e: Expr) -> Expr | None:
    if e.is_zero:
        return Expr.zero()
    cols = candidate_keys(e)
    if not cols:
        return None
    col_ix = {key: j for j, key in enumerate(cols)}
    # row index: monomial key appearing in e or in some d_dx(candidate)
    rows: dict = {}

    def row_for(key):
        r = rows.get(key)
        if r is None:
            r = {}
            rows[key] = r
        return r

    for j, key in enumerate(cols):
        dk = Expr({key: _k.S_ONE}).d_dx()
        for mk, c in dk.terms.items():
            row = row_for(mk)
            c0 = row.get(j)
            row[j] = _k.s_add(c0, c) if c0 is not None else c
    rhs = {key: c for key, c in e.terms.items()}
    for key in rhs:
        row_for(key)

    # sparse Gaussian elimination, deterministic row order
    pivot_rows: list[tuple[int, dict, tuple]] = []  # (pivot col, row, rhs)
    pivot_cols: dict[int, int] = {}
    for key in sorted(rows):
        row = dict(rows[key])
        b = rhs.get(key, _k.S_ZERO)
        for pcol, prow, pb in pivot_rows:
            f = row.get(pcol)
            if f is None:
                continue
            fneg = _k.s_neg(f)
            for c2, v in prow.items():
                c0 = row.get(c2)
                nv = _k.s_add(c0, _k.s_mul(fneg, v)) if c0 is not None \
                    else _k.s_mul(fneg, v)
                if _k.s_is_zero(nv):
                    row.pop(c2, None)
                else:
                    row[c2] = nv
            b = _k.s_add(b, _k.s_mul(fneg, pb))
        if not row:
            if not _k.s_is_zero(b):
                return None
            continue
        pcol = min(row)
        inv = Scalar(row[pcol]).inverse().t
        row = {c2: _k.s_mul(inv, v) for c2, v in row.items()}
        b = _k.s_mul(inv, b)
        pivot_rows.append((pcol, row, b))
        pivot_cols[pcol] = len(pivot_rows) - 1

    x = {j: _k.S_ZERO for j in range(len(cols))}
    for pcol, row, b in reversed(pivot_rows):
        acc = b
        for c2, v in row.items():
            if c2 == pcol:
                continue
            acc = _k.s_sub(acc, _k.s_mul(v, x[c2]))
        x[pcol] = acc

    out: dict = {}
    for j, key in enumerate(cols):
        if not _k.s_is_zero(x[j]):
            out[key] = x[j]
    f = Expr(out)
    # the elimination above treats free columns as zero, which can mask an
    # inconsistent system only if some row was never processed; verify.
    if f.d_dx() != e:
        return None
    return f
