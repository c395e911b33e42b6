"""sl(2,1) loop-algebra representation: 3x3 supermatrices over the jet ring.

Generators follow the standard matrix images with lambda = z**2; the
odd-block entries (1,3),(2,3),(3,1),(3,2) carry Grassmann-odd field content
whenever fields are attached.  The bracket is the plain matrix commutator:
Grassmann statistics live in the entries, so no separate super-bracket is
needed.

The principal grade of a z-monomial entry is zpow + eta_ij with

    2*eta = [[0, 2, 1], [-2, 0, -1], [-1, 1, 0]],

and a matrix is grade homogeneous when all its entries are.  Grade-by-grade
projection and expansion in the generator basis is what the recursive flow
solver consumes.
"""

from __future__ import annotations

from fractions import Fraction

from smkdv.expr import Expr
from smkdv.rewrite import RewriteSystem
from smkdv.scalar import Scalar

ETA2 = ((0, 2, 1), (-2, 0, -1), (-1, 1, 0))


class SMat:
    __slots__ = ("m",)

    def __init__(self, rows):
        self.m = tuple(tuple(rows[i][j] for j in range(3)) for i in range(3))

    @staticmethod
    def zero() -> "SMat":
        z = Expr.zero()
        return SMat([[z, z, z], [z, z, z], [z, z, z]])

    def __add__(self, other: "SMat") -> "SMat":
        return SMat([[self.m[i][j] + other.m[i][j] for j in range(3)]
                     for i in range(3)])

    def __sub__(self, other: "SMat") -> "SMat":
        return SMat([[self.m[i][j] - other.m[i][j] for j in range(3)]
                     for i in range(3)])

    def __neg__(self) -> "SMat":
        return SMat([[-self.m[i][j] for j in range(3)] for i in range(3)])

    def __matmul__(self, other: "SMat") -> "SMat":
        out = []
        for i in range(3):
            row = []
            for j in range(3):
                acc = Expr.zero()
                for k in range(3):
                    a = self.m[i][k]
                    b = other.m[k][j]
                    if a.is_zero or b.is_zero:
                        continue
                    acc = acc + a * b
                row.append(acc)
            out.append(row)
        return SMat(out)

    def scale(self, c) -> "SMat":
        return SMat([[self.m[i][j].scale(c) for j in range(3)]
                     for i in range(3)])

    def mul_expr(self, e: Expr, left: bool = True) -> "SMat":
        if left:
            return SMat([[e * self.m[i][j] for j in range(3)]
                         for i in range(3)])
        return SMat([[self.m[i][j] * e for j in range(3)] for i in range(3)])

    def __eq__(self, other):
        return isinstance(other, SMat) and all(
            self.m[i][j] == other.m[i][j] for i in range(3) for j in range(3))

    __hash__ = None

    @property
    def is_zero(self) -> bool:
        return all(self.m[i][j].is_zero for i in range(3) for j in range(3))

    def map(self, f) -> "SMat":
        return SMat([[f(self.m[i][j]) for j in range(3)] for i in range(3)])

    def d_dx(self) -> "SMat":
        return self.map(lambda e: e.d_dx())

    def d_dt(self, flow: str) -> "SMat":
        return self.map(lambda e: e.d_dt(flow))

    def rewrite(self, rs: RewriteSystem) -> "SMat":
        return self.map(rs.rewrite)

    def subs_zero(self, labels) -> "SMat":
        return self.map(lambda e: e.subs_zero(labels))

    def grade_project(self, g2: int) -> "SMat":
        """Entries restricted to principal grade g2/2."""
        out = []
        for i in range(3):
            row = []
            for j in range(3):
                zneed2 = g2 - ETA2[i][j]
                if zneed2 % 2:
                    row.append(Expr.zero())
                else:
                    row.append(self.m[i][j].coefficient_of_z(zneed2 // 2)
                               * Expr.z_pow(zneed2 // 2))
            out.append(row)
        return SMat(out)

    def grade_range(self) -> tuple[int, int] | None:
        lo, hi = None, None
        for i in range(3):
            for j in range(3):
                zr = self.m[i][j].z_range()
                if zr is None:
                    continue
                a = 2 * zr[0] + ETA2[i][j]
                b = 2 * zr[1] + ETA2[i][j]
                lo = a if lo is None else min(lo, a)
                hi = b if hi is None else max(hi, b)
        if lo is None:
            return None
        return lo, hi

    def pretty(self, width: int = 38) -> str:
        rows = []
        for i in range(3):
            cells = []
            for j in range(3):
                t = self.m[i][j].to_text()
                if len(t) > width:
                    t = t[: width - 3] + "..."
                cells.append(t.ljust(width))
            rows.append(" | ".join(cells))
        return "\n".join(rows)

    def __repr__(self):
        n = sum(len(self.m[i][j]) for i in range(3) for j in range(3))
        return f"SMat<{n} terms>"


def commutator(a: SMat, b: SMat) -> SMat:
    return (a @ b) - (b @ a)


def _zmono(p2: int) -> Expr:
    """lambda**(p2/2) = z**p2 as an Expr; p2 counts z powers."""
    return Expr.z_pow(p2)


def generator(name: str, n: int) -> SMat:
    """Matrix image of a mode-n generator; grade follows the name pattern."""
    z = Expr.zero()
    l0 = _zmono(2 * n)          # lambda^n
    lh = _zmono(2 * n + 1)      # lambda^(n+1/2)
    l1 = _zmono(2 * n + 2)      # lambda^(n+1)
    if name == "K1":
        return SMat([[z, -l0, z], [-l1, z, z], [z, z, z]])
    if name == "K2":
        return SMat([[lh, z, z], [z, lh, z], [z, z, lh.scale(2)]])
    if name == "M1":
        return SMat([[z, -l0, z], [l1, z, z], [z, z, z]])
    if name == "M2":
        return SMat([[l0, z, z], [z, -l0, z], [z, z, z]])
    if name == "F1":
        return SMat([[z, z, lh], [z, z, -l1], [l1, -lh, z]])
    if name == "F2":
        return SMat([[z, z, -l0], [z, z, lh], [lh, -l0, z]])
    if name == "G1":
        return SMat([[z, z, l0], [z, z, lh], [lh, l0, z]])
    if name == "G2":
        return SMat([[z, z, -lh], [z, z, -l1], [l1, lh, z]])
    raise ValueError(f"unknown generator {name!r}")


def generator_grade2(name: str, n: int) -> int:
    """Twice the principal grade of the mode-n generator."""
    return {"K1": 4 * n + 2, "K2": 4 * n + 2, "M1": 4 * n + 2,
            "M2": 4 * n, "F2": 4 * n + 1, "G1": 4 * n + 1,
            "F1": 4 * n + 3, "G2": 4 * n + 3}[name]


def basis_at_grade(g2: int) -> list[tuple[str, int, SMat]]:
    """Generator basis of the grade-(g2/2) subspace."""
    r = g2 % 4
    if r == 2:
        n = (g2 - 2) // 4
        names = ("K1", "K2", "M1")
    elif r == 0:
        if g2 == 0:
            names = ("M2",)
            n = 0
        else:
            n = g2 // 4
            names = ("M2",)
    elif r == 1:
        n = (g2 - 1) // 4
        names = ("F2", "G1")
    else:
        n = (g2 - 3) // 4
        names = ("F1", "G2")
    return [(nm, n, generator(nm, n)) for nm in names]


def E1() -> SMat:
    """Constant grade-one element: K1^(1) + K2^(1)."""
    return generator("K1", 0) + generator("K2", 0)


def EN(n_odd: int) -> SMat:
    """E^(N) = z^(N-1) E^(1) for odd N (positive or negative)."""
    if n_odd % 2 == 0:
        raise ValueError("E^(N) defined for odd N")
    return E1().mul_expr(Expr.z_pow(n_odd - 1))


def expand_in_basis(mat: SMat, g2: int) -> dict[str, Expr]:
    """Write a grade-homogeneous matrix over the generator basis.

    Returns {generator name: Expr coefficient}.  Raises ValueError when the
    matrix has content outside the span (a transcription error upstream).
    """
    basis = basis_at_grade(g2)
    # coordinates: (i, j, zpow) -> column of rational coefficients
    coords: dict[tuple[int, int, int], list[Fraction]] = {}
    for col, (_, _, gen) in enumerate(basis):
        for i in range(3):
            for j in range(3):
                for key, c in gen.m[i][j].terms.items():
                    sc = Scalar(c)
                    coords.setdefault((i, j, key[0]),
                                      [Fraction(0)] * len(basis))[col] = \
                        sc.as_fraction()
    rhs: dict[tuple[int, int, int], Expr] = {}
    for i in range(3):
        for j in range(3):
            e = mat.m[i][j]
            if e.is_zero:
                continue
            zr = e.z_range()
            for zp in range(zr[0], zr[1] + 1):
                comp = e.coefficient_of_z(zp)
                if not comp.is_zero:
                    rhs[(i, j, zp)] = comp
    rows = []
    for pos in sorted(set(coords) | set(rhs)):
        rows.append((coords.get(pos, [Fraction(0)] * len(basis)),
                     rhs.get(pos, Expr.zero())))
    ncols = len(basis)
    # exact Gauss-Jordan; the systems have at most 3 unknowns
    pivots: dict[int, int] = {}  # column -> row index
    used = [False] * len(rows)
    for col in range(ncols):
        piv = next((r for r in range(len(rows))
                    if not used[r] and rows[r][0][col] != 0), None)
        if piv is None:
            continue
        used[piv] = True
        pivots[col] = piv
        pc, pe = rows[piv]
        inv = 1 / pc[col]
        pc = [v * inv for v in pc]
        pe = pe.scale(inv)
        rows[piv] = (pc, pe)
        for r in range(len(rows)):
            if r == piv:
                continue
            f = rows[r][0][col]
            if f:
                rc = [a - f * b for a, b in zip(rows[r][0], pc)]
                re = rows[r][1] - pe.scale(f)
                rows[r] = (rc, re)
    out = {}
    for col, r in pivots.items():
        out[basis[col][0]] = rows[r][1]
    for r, (rc, re) in enumerate(rows):
        if not used[r] and not re.is_zero:
            raise ValueError(f"matrix has content outside grade-{g2}/2 span")
    for nm, _, _ in basis:
        out.setdefault(nm, Expr.zero())
    return out


def assemble(g2: int, coeffs: dict[str, Expr]) -> SMat:
    """Inverse of expand_in_basis: sum coeff * generator at grade g2/2."""
    out = SMat.zero()
    for nm, n, gen in basis_at_grade(g2):
        c = coeffs.get(nm)
        if c is not None and not c.is_zero:
            out = out + gen.mul_expr(c, left=True)
    return out
