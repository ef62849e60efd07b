"""Charge lattices, divisor classes, preferred bases and effective classes."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor

from .closed_geometry import StackyFan4
from .cones import cone_contains
from .lattice import kernel_basis, matvec, rational_inverse, rational_rank, rational_solve
from .open_geometry import BoxElement, GeometryError, StackyFan3


class ChargeError(ValueError):
    pass


class NoValidBasis(ChargeError):
    pass


class UserBasisInvalid(ChargeError):
    pass


class UnboundedDegree(ChargeError):
    pass


def _frac(x: Fraction) -> Fraction:
    return x - floor(x)


@dataclass
class ChargeData:
    R: int
    Rp: int
    a: int
    L_basis: list             # integer vectors in Z^R
    Ltilde_basis: list        # integer vectors in Z^(R+2); the first R-3 extend L_basis by zeros
    D: list                   # D[i-1] = coordinates of D_i in the dual basis
    Dtilde: list
    s_coeffs: list            # s[a][i-4], i = 4..R
    m: list                   # m[i-1][a]
    mtilde: list
    w: tuple                  # (w0, w2, w3)
    shifts: tuple = ()        # Htilde_a = sum s_ai Dtilde_i + shifts[a] Dtilde_{R+1}
    mtilde_structural: list = None

    @property
    def nL(self):
        return len(self.L_basis)

    def H_degree(self, pairings) -> tuple:
        """(<H_a, beta>)_a from the vector of pairings <D_i, beta>, i = 1..R."""
        return tuple(sum(s * pairings[i + 3] for i, s in enumerate(row)) for row in self.s_coeffs)

    def Htilde_degree(self, pairings, structural: bool = False) -> tuple:
        base = self.H_degree(pairings)
        if not structural:
            base = tuple(x + t * pairings[self.R] for x, t in zip(base, self.shifts))
        return base + (self.a * pairings[self.R],)

    def Htilde_coords(self, structural: bool = False) -> list:
        out = []
        for row, t in zip(self.s_coeffs, self.shifts):
            t = 0 if structural else t
            out.append(tuple(sum(si * self.Dtilde[i + 3][k] for i, si in enumerate(row))
                             + t * self.Dtilde[self.R][k] for k in range(self.nL + 1)))
        out.append(tuple(self.a * x for x in self.Dtilde[self.R]))
        return out

    @property
    def shifted(self) -> bool:
        return any(self.shifts)

    def identity_check(self) -> dict:
        """Structural identities relating the closed and open charge matrices."""
        R, n = self.R, self.nL
        mt = self.mtilde_structural
        inv_a = Fraction(1, self.a)
        w0, w2, w3 = self.w
        row_ok = (list(mt[R]) == [0] * n + [inv_a]
                  and list(mt[R + 1]) == [0] * n + [-inv_a])
        col = [mt[i][n] for i in range(R + 2)]
        col_target = [w0, w2, w3] + [0] * (R - 3) + [inv_a, -inv_a]
        restrict = all(mt[i][k] == self.mtilde[i][k] == self.m[i][k]
                       for i in range(R) for k in range(n))
        cy = all(sum(self.D[i][k] for i in range(R)) == 0 for k in range(n)) and \
            all(sum(self.Dtilde[i][k] for i in range(R + 2)) == 0 for k in range(n + 1))
        return {"extra_rows": row_ok, "open_column": col == col_target,
                "restriction": restrict, "w_sum_zero": w0 + w2 + w3 == 0,
                "calabi_yau": cy, "open_column_value": col}


@dataclass(frozen=True)
class EffClass:
    cone: tuple
    k: tuple
    pairings: tuple           # <D_j, beta> for all j
    v: BoxElement
    degree: tuple

    @property
    def total_degree(self):
        return sum(self.degree)


@dataclass(frozen=True)
class OpenClass:
    beta_pairings: tuple      # <D_i, beta>, i = 1..R
    d: int
    eps2: Fraction
    eps3: Fraction
    ktilde: int
    tilde: EffClass = field(compare=False)

    @property
    def degree(self):
        return self.tilde.degree


def _dual_coords(basis, R):
    # <D_i, eps_a> = (eps_a)_i
    return [tuple(Fraction(vec[i]) for vec in basis) for i in range(R)]


def _extend_basis(fan4: StackyFan4, L_basis):
    """A Z-basis of the closed charge lattice extending the open one."""
    R = fan4.R
    K = kernel_basis([[fan4.bt[i][r] for i in range(R + 2)] for r in range(4)])
    ext = [list(v) + [0, 0] for v in L_basis]
    # pick an element with <D_{R+1}, .> = 1; the gcd of that entry over K is 1
    from .lattice import ext_gcd
    g, combo = 0, [0] * (R + 2)
    for v in K:
        if v[R] == 0:
            continue
        g2, x, y = ext_gcd(g, v[R])
        combo = [x * c + y * e for c, e in zip(combo, v)]
        g = g2
    if g != 1:
        raise GeometryError("closed charge lattice has no element with unit open pairing")
    if combo[R] != 1:
        combo = [-c for c in combo]
    ext.append(combo)
    # sanity: same lattice as K (compare determinants of coordinate matrices)
    M = rational_solve_many(ext, K)
    assert all(x.denominator == 1 for row in M for x in row)
    return ext


def rational_solve_many(basis, vectors):
    """Coordinates of each vector in ``basis`` (rows), asserting solvability."""
    cols = [[Fraction(basis[j][i]) for j in range(len(basis))] for i in range(len(basis[0]))]
    out = []
    for v in vectors:
        x = rational_solve(cols, v)
        if x is None:
            raise GeometryError("vector outside the span of the basis")
        out.append(x)
    return out


def fixed_point_w(fan3: StackyFan3):
    r, s, m = fan3.r, fan3.s, fan3.m
    f = fan3.framing
    return (Fraction(1, r), (s + r * f) / (r * m), -(m + s + r * f) / (r * m))


def _nef_cones(D, cones, N):
    """Per maximal cone, generators D_i for i in the complement I_sigma."""
    return [[D[i - 1] for i in range(1, N + 1) if i not in c] for c in cones]


def _in_all(cones_gens, x) -> bool:
    return all(cone_contains(gens, x) for gens in cones_gens)


def build_charges(fan3: StackyFan3, fan4: StackyFan4, user_H=None, bound: int = 6) -> ChargeData:
    R, Rp = fan3.R, fan3.Rp
    L = kernel_basis([[fan3.b[i][r] for i in range(R)] for r in range(3)])
    # orient each generator so that its last nonzero entry is positive
    L = [v if next(x for x in reversed(v) if x) > 0 else [-x for x in v] for v in L]
    Lt = _extend_basis(fan4, L)
    D = _dual_coords(L, R)
    Dt = _dual_coords(Lt, R + 2)
    n = len(L)

    nef3 = _nef_cones(D, fan3.cones3, R)
    nef4 = _nef_cones(Dt, fan4.cones4, R + 2)

    def combo(coords, s):
        return tuple(sum(si * coords[i + 3][k] for i, si in enumerate(s)) for k in range(len(coords[0])))

    def nef_open(s):
        return _in_all(nef3, combo(D, s))

    forced = [[int(j == i) for j in range(R - 3)] for i in range(Rp - 3, R - 3)]
    twisted = [D[i - 1] for i in range(Rp + 1, R + 1)]

    def kirwan_rank(rows):
        return rational_rank([combo(D, s) for s in rows] + twisted)

    if user_H is not None:
        s_rows = [list(r) for r in user_H]
        if len(s_rows) != Rp - 3 or any(len(r) != R - 3 for r in s_rows):
            raise UserBasisInvalid(f"expected {Rp - 3} rows of length {R - 3}")
        if any(not isinstance(x, int) or x < 0 for r in s_rows for x in r):
            raise UserBasisInvalid("s_{ai} ∈ ℤ_{≥0}")
        for r in s_rows:
            if not nef_open(r):
                raise UserBasisInvalid(f"H = {r} is not in the extended nef cone")
        if kirwan_rank(s_rows) != n:
            raise UserBasisInvalid("images under the Kirwan map are not a basis")
    else:
        s_rows = []
        cands = sorted((s for s in itertools.product(range(bound + 1), repeat=R - 3) if any(s)),
                       key=lambda s: (sum(s), tuple(-x for x in s)))
        target = len(twisted) and rational_rank(twisted)
        for s in cands:
            if len(s_rows) == Rp - 3:
                break
            if kirwan_rank(s_rows + [list(s)]) != target + len(s_rows) + 1:
                continue
            if nef_open(s):
                s_rows.append(list(s))
        if len(s_rows) != Rp - 3:
            raise NoValidBasis(f"no nef basis with coefficients <= {bound}")
    s_rows = s_rows + forced

    H = [combo(D, s) for s in s_rows]
    if n and rational_rank(H) != n:
        raise NoValidBasis("chosen H is not a basis")
    top = tuple(fan4.a * x for x in Dt[R])
    if not _in_all(nef4, top):
        raise NoValidBasis("the open divisor class is not nef on the closed geometry")
    shifts = []
    for srow in s_rows:
        base = combo(Dt, srow)
        for t in sorted(range(-bound, bound + 1), key=lambda t: (abs(t), -t)):
            if _in_all(nef4, tuple(x + t * y for x, y in zip(base, Dt[R]))):
                shifts.append(t)
                break
        else:
            raise NoValidBasis(f"no nef lift of H = {srow} within shift {bound}")
    mm = _express(D, H, n)
    ch = ChargeData(R, Rp, fan4.a, L, Lt, D, Dt, s_rows, mm, None, fixed_point_w(fan3),
                    tuple(shifts))
    ch.mtilde = _express(Dt, ch.Htilde_coords(), n + 1)
    ch.mtilde_structural = _express(Dt, ch.Htilde_coords(structural=True), n + 1)
    return ch


def _express(D, H, n):
    if n == 0:
        return [() for _ in D]
    cols = [[H[a][k] for a in range(n)] for k in range(n)]
    inv = rational_inverse(cols)
    return [tuple(sum(inv[a][k] * Di[k] for k in range(n)) for a in range(n)) for Di in D]


# ------------------------------------------------------------- enumeration

def _box_of(vectors, cone, pairings) -> BoxElement:
    coeffs = {i: Fraction(ceil(pairings[i - 1])) - pairings[i - 1] for i in cone}
    dim = len(vectors[0])
    v = tuple(int(sum(coeffs[i] * vectors[i - 1][t] for i in cone)) for t in range(dim))
    return BoxElement(v, tuple(i for i in cone if coeffs[i]), coeffs, sum(coeffs.values(), Fraction(0)))


def enumerate_eff(ch: ChargeData, vectors, cone, degree_bound, tilde: bool) -> list[EffClass]:
    """Classes in K_eff(cone) with total H-degree <= degree_bound."""
    N = len(vectors)
    cone = tuple(sorted(cone))
    I = [i for i in range(1, N + 1) if i not in cone]
    B = [list(vectors[i - 1]) for i in cone]
    Binv = rational_inverse([list(r) for r in zip(*B)])   # columns b_i -> coefficients

    def pairings_of(k):
        rhs = [-sum(ki * vectors[i - 1][t] for ki, i in zip(k, I)) for t in range(len(B[0]))]
        sol = matvec(Binv, rhs)
        p = [Fraction(0)] * N
        for ki, i in zip(k, I):
            p[i - 1] = Fraction(ki)
        for x, i in zip(sol, cone):
            p[i - 1] = x
        return tuple(p)

    deg = ch.Htilde_degree if tilde else ch.H_degree
    gens = [deg(pairings_of(tuple(int(i == j) for j in I))) for i in I]
    for i, g in zip(I, gens):
        if any(x < 0 for x in g) or sum(g) <= 0:
            raise UnboundedDegree(f"H-degree of generator at D_{i} is {g}")
    tot = [sum(g) for g in gens]
    out = []

    def rec(pos, k, used):
        if pos == len(I):
            p = pairings_of(tuple(k))
            out.append(EffClass(cone, tuple(k), p, _box_of(vectors, cone, p), deg(p)))
            return
        c = 0
        while used + c * tot[pos] <= degree_bound:
            rec(pos + 1, k + [c], used + c * tot[pos])
            c += 1

    rec(0, [], Fraction(0))
    out.sort(key=lambda e: (e.total_degree, e.k))
    return out


def enumerate_open(ch: ChargeData, fan4: StackyFan4, degree_bound) -> list[OpenClass]:
    """Open classes (beta, d) via their closed counterparts over the brane cone."""
    R = ch.R
    toric = fan4.toric()
    sigma0 = fan4.sigma0
    box = toric.box(sigma0)
    pos = {e.v: k for k, e in enumerate(box)}
    w = (ch.w[0], ch.w[1], ch.w[2])
    out = []
    for e in enumerate_eff(ch, fan4.bt, sigma0, degree_bound, tilde=True):
        d = ch.a * e.pairings[R]
        if d == 0:
            continue
        assert d.denominator == 1
        d = int(d)
        beta = list(e.pairings[:R])
        for j in range(3):
            beta[j] -= d * w[j]
        out.append(OpenClass(tuple(beta), d, _frac(e.pairings[1]), _frac(e.pairings[2]),
                             pos[e.v.v], e))
    return out


def sector_ages(fan4: StackyFan4) -> list:
    return [e.age for e in fan4.toric().box(fan4.sigma0)]


def open_bijection_audit(ch: ChargeData, classes) -> bool:
    for c in classes:
        x = c.beta_pairings[0] + c.d * ch.w[0]
        if x.denominator != 1 or x < 0 or c.d == 0:
            return False
        if c.tilde.pairings[ch.R] != -c.tilde.pairings[ch.R + 1]:
            return False
    return True


def charges_summary(ch: ChargeData) -> dict:
    from .coefficients import fmt_q
    q = lambda row: [fmt_q(x) for x in row]
    return {
        "L_basis": ch.L_basis, "Ltilde_basis": ch.Ltilde_basis,
        "s_coeffs": ch.s_coeffs,
        "m": [q(r) for r in ch.m], "mtilde": [q(r) for r in ch.mtilde],
        "w": q(ch.w),
        "nef_shifts": list(ch.shifts),
        "mtilde_structural": [q(r) for r in ch.mtilde_structural],
        "identities": {k: (q(v) if isinstance(v, list) else v) for k, v in ch.identity_check().items()},
    }


def in_lattice(basis, v) -> bool:
    """Is the integer vector v in the Z-span of ``basis``?"""
    try:
        x = rational_solve_many(basis, [v])[0]
    except GeometryError:
        return False
    return all(t.denominator == 1 for t in x)
