"""I-functions by localization, mirror maps, the disk function and their comparison.

Equivariant classes are stored by their restrictions to the twisted fixed
points (cone, sector).  Equivariant parameters are specialized along a line
through a formal eps so that every limit becomes an eps^0 extraction.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import ceil, factorial, floor, gcd

from .charges import ChargeData, enumerate_eff, enumerate_open
from .closed_geometry import StackyFan4
from .coefficients import EpsLaurent, LogSeries, PoleError
from .open_geometry import StackyFan3
from .toric import ToricFan

CY_AXIS = 2          # the coordinate dual to the Calabi-Yau hyperplane
Z_DEPTH = 2          # I is kept through z^{-2}


class SingularDirection(ArithmeticError):
    pass


class OpenMapContaminated(AssertionError):
    pass


class NonIntegralTailGap(ArithmeticError):
    pass


class PoleAtRestriction(ArithmeticError):
    pass


# ------------------------------------------------------------ gamma factor

class YPoly:
    """Polynomial in y = 1/z truncated after y^2."""

    __slots__ = ("c",)

    def __init__(self, c):
        c = list(c)[: Z_DEPTH + 1]
        self.c = c + [0] * (Z_DEPTH + 1 - len(c))

    def __mul__(self, other):
        if not isinstance(other, YPoly):
            return YPoly([x * other for x in self.c])
        out = [0] * (Z_DEPTH + 1)
        for i, a in enumerate(self.c):
            if not a:
                continue
            for j in range(Z_DEPTH + 1 - i):
                if other.c[j]:
                    out[i + j] = out[i + j] + a * other.c[j]
        return YPoly(out)

    def shift(self, k: int):
        return YPoly([0] * k + self.c)

    def lowest(self):
        return next((k for k, x in enumerate(self.c) if x), None)


@dataclass(frozen=True)
class GammaFactor:
    """prod_{m >= ceil(c)} (u + c - m) / prod_{m >= 0} (u + c - m) as a finite product."""

    c: Fraction

    @property
    def top(self) -> int:
        return ceil(self.c)

    def value(self, u):
        out = Fraction(1)
        if self.top > 0:
            for m in range(self.top):
                out = out / (u + self.c - m)
        else:
            for m in range(self.top, 0):
                out = out * (u + self.c - m)
        return out

    def series(self, w) -> YPoly:
        """Expansion in y with u = w*y; w may be zero (then constants only)."""
        out = YPoly([1])
        if self.top > 0:
            for m in range(self.top):
                a = self.c - m                  # nonzero: m < c
                inv = 1 / Fraction(a)
                out = out * YPoly([inv, -w * inv * inv, w * w * inv * inv * inv])
        else:
            for m in range(self.top, 0):
                out = out * YPoly([self.c - m, w])
        return out


# ------------------------------------------------------------ parameters

def equivariant_params(f: Fraction, delta2=7, delta4=13, p: int = 2) -> dict:
    """u1 = 1, u2 = f + eps d2, u4 = eps^p d4 (the restriction to the framing subtorus)."""
    return {0: EpsLaurent.const(1), 1: EpsLaurent([Fraction(f), delta2]),
            3: EpsLaurent.monomial(delta4, p)}


def nonequivariant_params(dim: int, deltas=(5, 7, 13)) -> dict:
    axes = [k for k in range(dim) if k != CY_AXIS]
    return {k: EpsLaurent.monomial(d, 1) for k, d in zip(axes, deltas)}


def _redraw(dim: int, attempt: int):
    rng = random.Random(1000 + attempt)
    return tuple(rng.randint(2, 97) for _ in range(dim - 1))


# ------------------------------------------------------------ setups

@dataclass
class Setup:
    """A toric CY orbifold prepared for localization."""

    toric: ToricFan
    nvars: int
    degree: object                    # pairings -> H-degree tuple
    enumerate: object                 # (cone, bound) -> list[EffClass]
    lifts: dict                       # a -> {label: coeff}, untwisted basis classes
    base_cone: tuple                  # lifts restrict to zero here
    twisted_units: dict               # a -> sector vector, for twisted basis classes
    check_cones: tuple = ()           # further cones where the open-sector lifts vanish
    open_index: int | None = None     # the extra closed variable, exempt from check_cones
    shifted: tuple = ()               # lifts moved off the structural choice (also exempt)

    @property
    def dim(self):
        return self.toric.dim


def closed_setup(fan4: StackyFan4, ch: ChargeData) -> Setup:
    R, Rp = ch.R, ch.Rp
    t = fan4.toric()
    lifts = {}
    for a, (row, sh) in enumerate(zip(ch.s_coeffs, ch.shifts)):
        if a >= Rp - 3:
            break
        cl = {i + 4: Fraction(x) for i, x in enumerate(row) if x and i + 4 <= Rp}
        if sh:
            cl[R + 1] = Fraction(sh)
        lifts[a] = cl
    lifts[ch.nL] = {R + 1: Fraction(ch.a)}
    tw = {a: tuple(fan4.bt[a + 3]) for a in range(Rp - 3, R - 3)}
    iota_sigma0 = tuple(sorted((1, 2, 3, R + 2)))
    return Setup(t, ch.nL + 1, ch.Htilde_degree,
                 lambda cone, bound: enumerate_eff(ch, fan4.bt, cone, bound, tilde=True),
                 lifts, fan4.sigma0, tw, (iota_sigma0,), ch.nL,
                 tuple(a for a, t in enumerate(ch.shifts) if t))


def open_setup(fan3: StackyFan3, ch: ChargeData) -> Setup:
    Rp = ch.Rp
    t = ToricFan({i + 1: v for i, v in enumerate(fan3.b)}, fan3.cones3,
                 tuple(range(1, Rp + 1)))
    lifts = {}
    for a, row in enumerate(ch.s_coeffs[: Rp - 3]):
        lifts[a] = {i + 4: Fraction(x) for i, x in enumerate(row) if x and i + 4 <= Rp}
    tw = {a: tuple(fan3.b[a + 3]) for a in range(Rp - 3, ch.R - 3)}
    return Setup(t, ch.nL, ch.H_degree,
                 lambda cone, bound: enumerate_eff(ch, fan3.b, cone, bound, tilde=False),
                 lifts, tuple(fan3.sigma0), tw)


# ------------------------------------------------------------ classes

@dataclass
class EquivClass:
    """Restrictions to (cone, sector) pairs; missing keys are zero."""

    values: dict
    untwisted: bool = True
    degree: Fraction = Fraction(0)

    def __mul__(self, other):
        if isinstance(other, EquivClass):
            if self.untwisted:
                a, b = self, other
            elif other.untwisted:
                a, b = other, self
            else:
                raise NotImplementedError("product of two twisted classes")
            vals = {}
            for (cone, s), v in b.values.items():
                u = a.values.get((cone, _zero(s)))
                if u is not None:
                    vals[(cone, s)] = u * v
            return EquivClass(vals, b.untwisted, a.degree + b.degree)
        return EquivClass({k: v * other for k, v in self.values.items()}, self.untwisted,
                          self.degree)

    __rmul__ = __mul__

    def __add__(self, other):
        vals = dict(self.values)
        for k, v in other.values.items():
            vals[k] = vals[k] + v if k in vals else v
        return EquivClass(vals, self.untwisted and other.untwisted, self.degree)

    def at(self, cone, s):
        return self.values.get((cone, s), 0)


def _zero(s):
    return tuple(0 for _ in s)


class Localizer:
    """Fixed-point data of a setup under an eps-specialization of the torus."""

    def __init__(self, setup: Setup, params: dict):
        self.setup = setup
        self.t = setup.toric
        self.params = params
        self._w = {}
        for cone in self.t.maxcones:
            for i, vec in self.t.weights(cone).items():
                val = EpsLaurent([])
                for k, x in enumerate(vec):
                    if k != CY_AXIS and x:
                        val = val + params[k] * x
                if val.is_exact_zero():
                    raise SingularDirection(f"weight of D_{i} vanishes at {cone}")
                self._w[(cone, i)] = val

    # fixed-point data -------------------------------------------------
    def weight(self, cone, i):
        return self._w.get((cone, i), 0)

    @cached_property
    def boxes(self) -> dict:
        return {c: self.t.box(c) for c in self.t.maxcones}

    @cached_property
    def zero(self):
        return tuple(0 for _ in range(self.t.dim))

    def sector_coeffs(self, cone, s):
        return self.t.coefficients_in(s, cone)

    def inverse(self, cone, s):
        co = self.sector_coeffs(cone, s)
        vecs = self.t.vectors
        out = [Fraction(0)] * self.t.dim
        for i, c in co.items():
            if c:
                for k in range(self.t.dim):
                    out[k] += (1 - c) * vecs[i][k]
        return tuple(int(x) for x in out)

    def euler(self, cone, s):
        """|G_cone| times the Euler class of the tangent space of the fixed sector."""
        co = self.sector_coeffs(cone, s)
        e = EpsLaurent.const(self.t.order(cone))
        for i in cone:
            if co[i] == 0:
                e = e * self.weight(cone, i)
        return e

    def fixed_point_weights(self, cone, s=None):
        s = self.zero if s is None else tuple(s)
        return {"weights": {i: self.weight(cone, i) for i in cone},
                "euler": self.euler(cone, s)}

    # classes ----------------------------------------------------------
    def divisor(self, i) -> EquivClass:
        vals = {}
        for cone in self.t.maxcones:
            if i in cone:
                for e in self.boxes[cone]:
                    vals[(cone, e.v)] = self.weight(cone, i)
        cl = EquivClass({k: v for k, v in vals.items() if k[1] == self.zero}, True, Fraction(1))
        return cl

    def character(self, value) -> EquivClass:
        return EquivClass({(c, self.zero): value for c in self.t.maxcones}, True, Fraction(1))

    def unit(self, s=None) -> EquivClass:
        s = self.zero if s is None else tuple(s)
        vals = {}
        for cone in self.t.maxcones:
            if any(e.v == s for e in self.boxes[cone]):
                vals[(cone, s)] = EpsLaurent.const(1)
        age = next((e.age for c in self.t.maxcones for e in self.boxes[c] if e.v == s), 0)
        return EquivClass(vals, s == self.zero, Fraction(age))

    def linear(self, coeffs: dict) -> EquivClass:
        out = EquivClass({}, True, Fraction(1))
        for i, x in coeffs.items():
            out = out + self.divisor(i) * x
        return out

    @cached_property
    def lift_classes(self) -> dict:
        """Equivariant lifts of the untwisted basis classes, zero at the base cone."""
        out = {}
        for a, co in self.setup.lifts.items():
            cl = self.linear(co)
            lam = -cl.at(self.setup.base_cone, self.zero)
            out[a] = cl + self.character(lam)
        return out

    def lift_check(self) -> dict:
        res = {}
        for a, cl in self.lift_classes.items():
            exempt = a == self.setup.open_index or a in self.setup.shifted
            extra = () if exempt else self.setup.check_cones
            vals = [cl.at(c, self.zero) for c in (self.setup.base_cone,) + extra]
            res[a] = all(_is_zero(v) for v in vals)
        return res

    def basis_class(self, a) -> EquivClass:
        if a in self.lift_classes:
            return self.lift_classes[a]
        return self.unit(self.setup.twisted_units[a])

    # I-function ---------------------------------------------------------
    def i_at(self, cone, bound) -> dict:
        """sector -> [I_0, I_1, I_2] (LogSeries with eps coefficients) at a fixed point."""
        n = self.setup.nvars
        N = len(self.t.vectors)
        rays = set(self.t.rays)
        S = {}
        for e in self.setup.enumerate(cone, bound):
            if e.v.age > Z_DEPTH:
                continue
            term = YPoly([1])
            dead = False
            for j in range(1, N + 1):
                c = e.pairings[j - 1]
                w = self.weight(cone, j) if (j in cone and j in rays) else 0
                if not w and c.denominator == 1 and c < 0:
                    dead = True
                    break
                term = term * GammaFactor(c).series(w)
            if dead:
                continue
            age = int(e.v.age)
            assert age == e.v.age, "non-integral age in a Calabi-Yau sector"
            term = term.shift(age)
            if term.lowest() is None:
                continue
            slot = S.setdefault(e.v.v, [LogSeries.zero(n) for _ in range(Z_DEPTH + 1)])
            for k, x in enumerate(term.c):
                if x:
                    slot[k] = slot[k] + _mono(e.degree, x)
        # prefactor exp(y sum_a u_a log q_a)
        L = LogSeries.zero(n)
        for a, cl in self.lift_classes.items():
            v = cl.at(cone, self.zero)
            if not _is_zero(v):
                L = L + LogSeries.log(n, a) * v
        out = {}
        for s, (S0, S1, S2) in S.items():
            out[s] = [S0, S1 + L * S0, S2 + L * S1 + L * L * S0 * Fraction(1, 2)]
        return out

    def i_function(self, bound) -> dict:
        return {c: self.i_at(c, bound) for c in self.t.maxcones}

    def pair(self, I: dict, gamma: EquivClass, n: int) -> LogSeries:
        """[z^-n] of the equivariant pairing (I, gamma)."""
        total = LogSeries.zero(self.setup.nvars)
        for (cone, s), g in gamma.values.items():
            if _is_zero(g):
                continue
            si = self.inverse(cone, s)
            comp = I[cone].get(si)
            if comp is None or comp[n].is_zero():
                continue
            total = total + comp[n] * (g / self.euler(cone, s))
        return total

    def pair_classes(self, alpha: EquivClass, gamma: EquivClass):
        """Equivariant pairing of two classes (eps-series)."""
        total = EpsLaurent([])
        for (cone, s), g in gamma.values.items():
            a = alpha.values.get((cone, self.inverse(cone, s)))
            if a is None or _is_zero(a) or _is_zero(g):
                continue
            total = total + a * g / self.euler(cone, s)
        return total

    # compact classes ----------------------------------------------------
    def compact_classes(self, degree=None) -> list:
        """1_j times the divisors of tau minus the support of j, for compact tau."""
        out = []
        seen = set()
        for cone in self.t.maxcones:
            for e in self.boxes[cone]:
                key = e.v
                if key in seen:
                    continue
                seen.add(key)
                supp = set(e.cone)
                for tau in self.t.faces:
                    if not supp <= set(tau) or not self.t.is_compact(tau):
                        continue
                    deg = e.age + len(tau) - len(supp)
                    if degree is not None and deg != degree:
                        continue
                    cl = self.unit(e.v)
                    for i in sorted(set(tau) - supp):
                        cl = self.divisor(i) * cl
                    out.append(((e.v, tau), cl))
        return out


def _mono(exps, coeff) -> LogSeries:
    exps = [Fraction(x) for x in exps]
    den = 1
    for x in exps:
        den = den * x.denominator // gcd(den, x.denominator)
    return LogSeries.monomial(exps, coeff, den=den)


def _is_zero(v) -> bool:
    if isinstance(v, EpsLaurent):
        return v.is_exact_zero()
    return v == 0


def eps0(series: LogSeries) -> LogSeries:
    """Finite part of an eps-valued series; raises if a pole survives."""
    terms = {}
    for e, poly in series.terms.items():
        out = {}
        for k, v in poly.items():
            try:
                x = v.finite_part() if isinstance(v, EpsLaurent) else Fraction(v)
            except PoleError as err:
                raise PoleAtRestriction(str(err)) from None
            if x:
                out[k] = x
        if out:
            terms[e] = out
    return LogSeries(series.n, terms, series.den, series.bound)


def make_localizer(setup: Setup, params=None, attempts: int = 20) -> Localizer:
    if params is not None:
        return Localizer(setup, params)
    deltas = (5, 7, 13)
    for k in range(attempts):
        try:
            return Localizer(setup, nonequivariant_params(setup.dim, deltas))
        except SingularDirection:
            deltas = _redraw(setup.dim, k)
    raise SingularDirection("no generic direction found")


# ------------------------------------------------------------ non-equivariant I

@dataclass
class IFunction:
    """Non-equivariant I through z^-2, presented by pairings with compact classes."""

    loc: Localizer
    bound: object
    pairings: dict = field(default_factory=dict)    # (n, class key) -> LogSeries

    @property
    def nvars(self):
        return self.loc.setup.nvars

    def components(self):
        return sorted(self.pairings.items(), key=lambda kv: (kv[0][0], str(kv[0][1])))


def i_function(setup: Setup, order, loc: Localizer | None = None) -> IFunction:
    loc = loc or make_localizer(setup)
    I = loc.i_function(order)
    out = IFunction(loc, order)
    dim = setup.dim
    for n in range(Z_DEPTH + 1):
        for key, cl in loc.compact_classes(degree=dim - n):
            out.pairings[(n, key)] = eps0(loc.pair(I, cl, n)).truncate(order)
    return out


def expand_in_basis(loc: Localizer, ifun: IFunction, n: int, basis: list):
    """Coefficient series c_k with [z^-n] I = sum c_k basis_k (basis: EquivClass list).

    Uses the compact pairings; returns None for unresolved directions.
    """
    keys = [k for (m, k) in ifun.pairings if m == n]
    dim = loc.setup.dim
    cls = dict(loc.compact_classes(degree=dim - n))
    M = [[loc.pair_classes(b, cls[k]).finite_part() for k in keys] for b in basis]
    # pick independent columns (classes) greedily
    from .lattice import rational_rank, rational_inverse
    cols = []
    for j in range(len(keys)):
        trial = cols + [j]
        if rational_rank([[M[r][c] for r in range(len(basis))] for c in trial]) == len(trial):
            cols = trial
        if len(cols) == len(basis):
            break
    if len(cols) < len(basis):
        raise ValueError("basis classes are not independent against compact classes")
    sq = [[M[r][c] for c in cols] for r in range(len(basis))]   # basis x chosen
    inv = rational_inverse(sq)                                   # chosen x basis
    out = []
    for a in range(len(basis)):
        s = LogSeries.zero(ifun.nvars)
        for t, c in enumerate(cols):
            x = inv[t][a]
            if x:
                s = s + ifun.pairings[(n, keys[c])] * x
        out.append(s)
    return out


def mirror_maps(setup: Setup, ifun: IFunction) -> dict:
    """tau_a with [z^-1] I = sum_a tau_a u_a."""
    loc = ifun.loc
    order = sorted(set(setup.lifts) | set(setup.twisted_units))
    if not order:
        return {}
    basis = [loc.basis_class(a) for a in order]
    taus = expand_in_basis(loc, ifun, 1, basis)
    return dict(zip(order, taus))


def open_mirror_map(setup: Setup, ch: ChargeData, taus: dict) -> LogSeries:
    """tau_{R-2} in (q, x) coordinates; must be log x plus a series in q only."""
    a_open = ch.nL
    tau = taus[a_open]
    for a, t in enumerate(ch.shifts):
        if t and a in taus:
            tau = tau + taus[a] * Fraction(t, ch.a)
    tau = closed_to_qx(ch, tau)
    rest = tau - LogSeries.log(setup.nvars, a_open)
    for e, poly in rest.terms.items():
        if e[a_open] != 0:
            raise OpenMapContaminated(f"open mirror map depends on x at exponent {e}")
        if any(k[a_open] for k in poly):
            raise OpenMapContaminated("open mirror map has a stray log x term")
    return tau


# ------------------------------------------------------------ disk function

def _tail_ratio(A: Fraction, B: Fraction) -> Fraction:
    """prod_{m>=1} (A - m) / prod_{m>=0} (B - m) for A - 1 - B integral."""
    n = A - 1 - B
    if n.denominator != 1:
        raise NonIntegralTailGap(f"A - 1 - B = {n}")
    n = int(n)
    out = Fraction(1)
    if n >= 0:
        for m in range(1, n + 1):
            out *= A - m
    else:
        for m in range(0, -n):
            f = B - m
            if f == 0:
                raise ZeroDivisionError("pole in the disk-function tail")
            out /= f
    return out


def disk_term(ch: ChargeData, fan3: StackyFan3, oc) -> Fraction:
    R = ch.R
    p = oc.tilde.pairings
    d = oc.d
    w3 = ch.w[2]
    c1, c2, c3 = p[0], p[1], p[2]
    assert c1.denominator == 1 and c1 >= 0
    sign = (-1) ** ((floor(d * w3 - oc.eps3) + ceil(Fraction(d, ch.a))) % 2)
    den = fan3.m * d * factorial(int(c1))
    for i in range(4, R + 1):
        den *= factorial(int(p[i - 1]))
    return sign * _tail_ratio(-c3, c2) / den


def disk_function(ch: ChargeData, fan3: StackyFan3, fan4: StackyFan4, ktilde: int, order,
                  coords: str = "qx") -> LogSeries:
    """W_k(q, x) through total degree ``order``.

    coords="qx": exponents (<H_a, beta>, d); coords="closed": the closed H~-degrees.
    """
    n = ch.nL + 1
    out = LogSeries.zero(n)
    # a nef shift adds t_a * d / a to the closed degree, so enumerate further and filter
    bound = order if coords != "qx" else order * (1 + sum(abs(t) for t in ch.shifts))
    for oc in enumerate_open(ch, fan4, bound):
        if oc.ktilde != ktilde:
            continue
        if coords == "qx":
            exps = ch.H_degree(oc.beta_pairings) + (oc.d,)
            if sum(exps) > order:
                continue
        else:
            exps = oc.degree
        t = disk_term(ch, fan3, oc)
        if t:
            out = out + _mono(exps, t)
    return out


def closed_to_qx(ch: ChargeData, s: LogSeries) -> LogSeries:
    """Re-express a series in the closed (nef) variables through (q, x)."""
    if not ch.shifted:
        return s
    n = s.n
    a_open = n - 1
    out = LogSeries.zero(n)
    for e, k, v in s.items():
        exps = list(e)
        for a, t in enumerate(ch.shifts):
            exps[a] -= Fraction(t, ch.a) * e[a_open]
        term = _mono(exps, v)
        for a, p in enumerate(k):
            base = LogSeries.log(n, a)
            if a == a_open:
                for b, t in enumerate(ch.shifts):
                    if t:
                        base = base - LogSeries.log(n, b) * Fraction(t, ch.a)
            for _ in range(p):
                term = term * base
        out = out + term
    return out


# ------------------------------------------------------------ correspondence

def gamma_classes(loc: Localizer, ch: ChargeData, fan3: StackyFan3, fan4: StackyFan4) -> dict:
    """The insertions paired against I for each sector of the brane cone."""
    R = ch.R
    sigma0 = fan4.sigma0
    box = loc.boxes[sigma0]
    p = loc.params
    f = fan3.framing
    m = fan3.m
    den = p[0] * (f / m) - p[1] * Fraction(1, m) - p[3]
    out = {}
    for k, e in enumerate(box):
        if e.age == 0:
            cl = loc.divisor(2) * loc.divisor(3) * loc.divisor(R + 1)
            out[k] = cl * (1 / den) if not _is_zero(den) else None
            if out[k] is None:
                raise SingularDirection("gamma denominator vanishes")
            continue
        inv = loc.inverse(sigma0, e.v)
        if e.age == 1:
            out[k] = loc.divisor(R + 1) * loc.unit(inv)
        else:
            out[k] = loc.unit(inv)
    return out


def hypercorr_check(ch: ChargeData, fan3: StackyFan3, fan4: StackyFan4, order,
                    sectors=None, p: int = 2, deltas=(7, 13)) -> dict:
    """Compare [z^-2](I, gamma_k) under the framing specialization with W_k."""
    setup = closed_setup(fan4, ch)
    loc = Localizer(setup, equivariant_params(fan3.framing, deltas[0], deltas[1], p))
    box = loc.boxes[fan4.sigma0]
    sectors = range(len(box)) if sectors is None else sectors
    gam = gamma_classes(loc, ch, fan3, fan4)
    needed = {c for k in sectors for (c, _) in gam[k].values}
    I = {c: loc.i_at(c, order) for c in needed}
    report = {"order": order, "sectors": {}, "passed": True, "p": p}
    for k in sectors:
        entry = {"age": str(box[k].age)}
        try:
            lhs = eps0(loc.pair(I, gam[k], 2))
        except PoleAtRestriction as err:
            entry.update(passed=False, error=str(err))
            report["sectors"][k] = entry
            report["passed"] = False
            continue
        rhs = disk_function(ch, fan3, fan4, k, order, coords="closed")
        diff = lhs - rhs
        entry["passed"] = diff.is_zero()
        entry["terms"] = len(rhs.terms)
        if not diff.is_zero():
            entry["mismatch"] = [(list(map(str, e)), list(kk), str(v)) for e, kk, v in diff.items()[:4]]
        report["sectors"][k] = entry
        report["passed"] = report["passed"] and entry["passed"]
    return report
