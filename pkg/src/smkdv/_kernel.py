"""Hot arithmetic kernel: Q(zeta8) scalars and monomial products.

This is the pure-Python reference implementation.  A Cython twin with the
identical API lives in ``_kernel_cy.pyx``; ``smkdv.kernel`` picks whichever
is importable.  Everything here operates on plain tuples so both backends
stay byte-compatible.

Scalar representation
---------------------
A scalar is a 5-tuple ``(n0, n1, n2, n3, den)`` of ints encoding

    (n0 + n1*s + n2*s**2 + n3*s**3) / den

in Q[s]/(s**4 + 1), where s stands for sqrt(i), so s**2 = i.  Invariants:
``den > 0`` and ``gcd(n0, n1, n2, n3, den) == 1``.

Monomial representation
-----------------------
A monomial key is a 5-tuple ``(zpow, wpow, evens, exps, odds)``:

* ``zpow``  -- integer power of the spectral root z (lambda = z**2),
* ``wpow``  -- integer power of the Backlund parameter omega,
* ``evens`` -- sorted tuple of (atom_code, power) for commuting jet atoms,
* ``exps``  -- sorted tuple of (label_id, 4*exponent) for exponential atoms,
* ``odds``  -- strictly increasing tuple of anticommuting atom codes.

Products of odd atoms pick up the Koszul sign counted by merge inversions;
a repeated odd atom kills the monomial (nilpotency).
"""

from math import gcd

S_ZERO = (0, 0, 0, 0, 1)
S_ONE = (1, 0, 0, 0, 1)


def s_make(n0, n1, n2, n3, den):
    if den == 0:
        raise ZeroDivisionError("scalar with zero denominator")
    if den < 0:
        n0, n1, n2, n3, den = -n0, -n1, -n2, -n3, -den
    g = gcd(gcd(gcd(abs(n0), abs(n1)), gcd(abs(n2), abs(n3))), den)
    if g > 1:
        return (n0 // g, n1 // g, n2 // g, n3 // g, den // g)
    return (n0, n1, n2, n3, den)


def s_add(a, b):
    da = a[4]
    db = b[4]
    if da == db:
        return s_make(a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3], da)
    return s_make(a[0] * db + b[0] * da, a[1] * db + b[1] * da,
                  a[2] * db + b[2] * da, a[3] * db + b[3] * da, da * db)


def s_neg(a):
    return (-a[0], -a[1], -a[2], -a[3], a[4])


def s_sub(a, b):
    return s_add(a, s_neg(b))


def s_mul(a, b):
    a0, a1, a2, a3, da = a
    b0, b1, b2, b3, db = b
    # convolution mod s**4 = -1
    r0 = a0 * b0 - a1 * b3 - a2 * b2 - a3 * b1
    r1 = a0 * b1 + a1 * b0 - a2 * b3 - a3 * b2
    r2 = a0 * b2 + a1 * b1 + a2 * b0 - a3 * b3
    r3 = a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0
    return s_make(r0, r1, r2, r3, da * db)


def s_is_zero(a):
    return a[0] == 0 and a[1] == 0 and a[2] == 0 and a[3] == 0


def odd_merge(a, b):
    """Merge two strictly sorted odd-atom tuples.

    Returns ``(merged, sign)`` or ``None`` when an atom repeats.
    """
    la = len(a)
    lb = len(b)
    if la == 0:
        return b, 1
    if lb == 0:
        return a, 1
    out = []
    i = 0
    j = 0
    sign = 1
    while i < la and j < lb:
        x = a[i]
        y = b[j]
        if x == y:
            return None
        if x < y:
            out.append(x)
            i += 1
        else:
            out.append(y)
            j += 1
            if (la - i) & 1:
                sign = -sign
    if i < la:
        out.extend(a[i:])
    else:
        out.extend(b[j:])
    return tuple(out), sign


def assoc_merge_add(a, b):
    """Merge sorted (key, value) tuples adding values, dropping zeros."""
    la = len(a)
    lb = len(b)
    if la == 0:
        return b
    if lb == 0:
        return a
    out = []
    i = 0
    j = 0
    while i < la and j < lb:
        ka, va = a[i]
        kb, vb = b[j]
        if ka == kb:
            v = va + vb
            if v != 0:
                out.append((ka, v))
            i += 1
            j += 1
        elif ka < kb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_mul(k1, k2):
    """Product of two monomial keys: ``(key, sign)`` or ``None`` if it dies."""
    odds1 = k1[4]
    odds2 = k2[4]
    if odds1 and odds2:
        merged = odd_merge(odds1, odds2)
        if merged is None:
            return None
        odds, sign = merged
    else:
        odds = odds1 or odds2
        sign = 1
    return (k1[0] + k2[0], k1[1] + k2[1],
            assoc_merge_add(k1[2], k2[2]),
            assoc_merge_add(k1[3], k2[3]), odds), sign


def expr_iadd(acc, terms, scale=S_ONE):
    """In-place ``acc += scale * terms`` on term dicts."""
    if scale == S_ONE:
        for k, c in terms.items():
            c0 = acc.get(k)
            if c0 is None:
                acc[k] = c
            else:
                c1 = s_add(c0, c)
                if c1[0] == 0 and c1[1] == 0 and c1[2] == 0 and c1[3] == 0:
                    del acc[k]
                else:
                    acc[k] = c1
    else:
        for k, c in terms.items():
            c = s_mul(scale, c)
            c0 = acc.get(k)
            if c0 is None:
                acc[k] = c
                continue
            c1 = s_add(c0, c)
            if c1[0] == 0 and c1[1] == 0 and c1[2] == 0 and c1[3] == 0:
                del acc[k]
            else:
                acc[k] = c1
    return acc


def expr_mul(t1, t2):
    """Product of two term dicts, fully canonicalized."""
    out = {}
    for k1, c1 in t1.items():
        z1, w1, ev1, ex1, od1 = k1
        for k2, c2 in t2.items():
            od2 = k2[4]
            if od1 and od2:
                merged = odd_merge(od1, od2)
                if merged is None:
                    continue
                odds, sign = merged
            else:
                odds = od1 or od2
                sign = 1
            key = (z1 + k2[0], w1 + k2[1], assoc_merge_add(ev1, k2[2]),
                   assoc_merge_add(ex1, k2[3]), odds)
            c = s_mul(c1, c2)
            if sign < 0:
                c = (-c[0], -c[1], -c[2], -c[3], c[4])
            c0 = out.get(key)
            if c0 is None:
                out[key] = c
                continue
            cs = s_add(c0, c)
            if cs[0] == 0 and cs[1] == 0 and cs[2] == 0 and cs[3] == 0:
                del out[key]
            else:
                out[key] = cs
    return out


def expr_mul_key(terms, key, coeff):
    """Product ``terms * (coeff * key)`` for a single monomial multiplier."""
    z2, w2, ev2, ex2, od2 = key
    out = {}
    for k1, c1 in terms.items():
        od1 = k1[4]
        if od1 and od2:
            merged = odd_merge(od1, od2)
            if merged is None:
                continue
            odds, sign = merged
        else:
            odds = od1 or od2
            sign = 1
        k = (k1[0] + z2, k1[1] + w2, assoc_merge_add(k1[2], ev2),
             assoc_merge_add(k1[3], ex2), odds)
        c = s_mul(c1, coeff)
        if sign < 0:
            c = (-c[0], -c[1], -c[2], -c[3], c[4])
        c0 = out.get(k)
        if c0 is None:
            out[k] = c
            continue
        cs = s_add(c0, c)
        if cs[0] == 0 and cs[1] == 0 and cs[2] == 0 and cs[3] == 0:
            del out[k]
        else:
            out[k] = cs
    return out
