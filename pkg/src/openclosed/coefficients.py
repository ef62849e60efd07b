"""Exact coefficient arithmetic.

CycNumber
    Elements of Q(zeta) with zeta = exp(pi i / a), stored as coefficient
    vectors modulo the 2a-th cyclotomic polynomial.
EpsLaurent
    Truncated Laurent series in one formal variable eps with rational
    coefficients; tracks valuation and absolute precision.
LogSeries
    Truncated multivariate series in q_1..q_n with rational exponents whose
    coefficients are polynomials in the formal symbols log q_1..log q_n.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, inf
from numbers import Rational


# ---------------------------------------------------------------- cyclotomic

def _pdivmod(num, den):
    num = list(num)
    q = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
    while len(num) >= len(den) and any(num):
        shift = len(num) - len(den)
        f = num[-1] / den[-1]
        q[shift] = f
        for i, d in enumerate(den):
            num[shift + i] -= f * d
        num.pop()
    return q, num


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple:
    """Coefficients (low degree first) of the n-th cyclotomic polynomial."""
    poly = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly, r = _pdivmod(poly, list(cyclotomic_poly(d)))
            assert not any(r)
    while poly and poly[-1] == 0:
        poly.pop()
    return tuple(int(c) for c in poly)


class CycNumber:
    """Element of Q(zeta_n) for n = 2a; for a = 1 this is just Q."""

    __slots__ = ("n", "c")

    def __init__(self, coeffs, n: int = 2):
        self.n = n
        phi = cyclotomic_poly(n)
        deg = len(phi) - 1
        c = [Fraction(x) for x in coeffs]
        # reduce modulo the monic cyclotomic polynomial
        while len(c) > deg:
            top = c.pop()
            if top:
                s = len(c) - deg
                for i in range(deg):
                    c[s + i] -= top * phi[i]
        c += [Fraction(0)] * (deg - len(c))
        self.c = tuple(c)

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> "CycNumber":
        k %= n
        return cls([0] * k + [1], n)

    @classmethod
    def of(cls, x, n: int = 2) -> "CycNumber":
        if isinstance(x, CycNumber):
            return x
        return cls([x], n)

    def _coerce(self, other):
        if isinstance(other, CycNumber):
            if other.n != self.n:
                raise ValueError("mixed cyclotomic fields")
            return other
        if isinstance(other, (int, Rational)):
            return CycNumber([other], self.n)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycNumber([a + b for a, b in zip(self.c, o.c)], self.n)

    __radd__ = __add__

    def __neg__(self):
        return CycNumber([-a for a in self.c], self.n)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out = [Fraction(0)] * (2 * len(self.c))
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    if b:
                        out[i + j] += a * b
        return CycNumber(out, self.n)

    __rmul__ = __mul__

    def mult_matrix(self):
        """Matrix of multiplication by self on the power basis."""
        deg = len(self.c)
        cols = [(self * CycNumber.zeta(self.n, j)).c if deg > 1 else self.c
                for j in range(deg)]
        return [[cols[j][i] for j in range(deg)] for i in range(deg)]

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("CycNumber zero")
        if len(self.c) == 1:
            return CycNumber([1 / self.c[0]], self.n)
        from .lattice import rational_solve
        M = self.mult_matrix()
        e = [1] + [0] * (len(self.c) - 1)
        return CycNumber(rational_solve(M, e), self.n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return CycNumber.of(other, self.n) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = CycNumber([1], self.n), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return not any(self.c)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, CycNumber) or other.n == self.n else None
        if o is None or o is NotImplemented:
            return False
        return self.c == o.c

    def __hash__(self):
        if all(x == 0 for x in self.c[1:]):
            return hash(self.c[0])
        return hash((self.n, self.c))

    def rational(self) -> Fraction:
        if any(self.c[1:]):
            raise ValueError(f"{self} is not rational")
        return self.c[0]

    def to_complex(self) -> complex:
        import cmath
        z = cmath.exp(1j * cmath.pi * 2 / self.n)
        return sum(float(a) * z ** i for i, a in enumerate(self.c))

    def __repr__(self):
        return f"CycNumber({fmt_cyc(self)})"

    def __str__(self):
        return fmt_cyc(self)


def fmt_q(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_cyc(x: CycNumber) -> str:
    parts = []
    for i in range(len(x.c) - 1, -1, -1):
        a = x.c[i]
        if not a:
            continue
        mono = "" if i == 0 else ("ζ" if i == 1 else f"ζ^{i}")
        if not mono:
            parts.append(fmt_q(a))
        elif a == 1:
            parts.append(mono)
        elif a == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{fmt_q(a)}·{mono}")
    if not parts:
        return "0"
    s = parts[0]
    for p in parts[1:]:
        s += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
    return s


def fmt_exact(x) -> str:
    if isinstance(x, CycNumber):
        return fmt_cyc(x)
    return fmt_q(x)


# ------------------------------------------------------------------ epsilon

DEFAULT_EPS_PREC = 10


class PoleError(ArithmeticError):
    pass


class EpsLaurent:
    """Truncated Laurent series sum c_k eps^(val+k) + O(eps^prec).

    ``prec = inf`` marks an exact value (finite Laurent polynomial).
    """

    __slots__ = ("val", "c", "prec")

    def __init__(self, coeffs, val: int = 0, prec=inf):
        c = [Fraction(x) for x in coeffs]
        if prec != inf:
            c = c[: max(prec - val, 0)]
        while c and c[0] == 0:
            c.pop(0)
            val += 1
        while c and c[-1] == 0 and prec == inf:
            c.pop()
        if not c:
            val = prec
        self.val, self.c, self.prec = val, tuple(c), prec

    @classmethod
    def const(cls, x):
        return cls([x])

    @classmethod
    def linear(cls, a, b):
        """a + b eps."""
        return cls([a, b])

    @classmethod
    def monomial(cls, a, k: int):
        """a eps^k."""
        return cls([a], k)

    def is_exact_zero(self):
        return not self.c and self.prec == inf

    def __bool__(self):
        return not self.is_exact_zero()

    def __add__(self, other):
        if not isinstance(other, EpsLaurent):
            other = EpsLaurent.const(other)
        if self.is_exact_zero():
            return other
        if other.is_exact_zero():
            return self
        prec = min(self.prec, other.prec)
        lo = min(self.val if self.c else prec, other.val if other.c else prec)
        if lo == inf:
            return EpsLaurent([], 0, inf)
        hi = max(s.val + len(s.c) for s in (self, other) if s.c) if (self.c or other.c) else lo
        if prec != inf:
            hi = min(hi, prec)
        out = [Fraction(0)] * max(int(hi - lo), 0)
        for s in (self, other):
            for k, a in enumerate(s.c):
                e = s.val + k - lo
                if 0 <= e < len(out):
                    out[e] += a
        return EpsLaurent(out, int(lo), prec)

    __radd__ = __add__

    def __neg__(self):
        return EpsLaurent([-a for a in self.c], self.val, self.prec)

    def __sub__(self, other):
        if not isinstance(other, EpsLaurent):
            other = EpsLaurent.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _relprec(self):
        return inf if self.prec == inf else self.prec - self.val

    def __mul__(self, other):
        if not isinstance(other, EpsLaurent):
            if other == 0:
                return EpsLaurent([], 0, inf)
            other = Fraction(other)
            return EpsLaurent([a * other for a in self.c], self.val, self.prec)
        if self.is_exact_zero() or other.is_exact_zero():
            return EpsLaurent([], 0, inf)
        if not self.c or not other.c:
            # unknown zero times something
            v = (self.prec if not self.c else self.val) + (other.prec if not other.c else other.val)
            return EpsLaurent([], v, v)
        rel = min(self._relprec(), other._relprec())
        n = len(self.c) + len(other.c) - 1
        if rel != inf:
            n = min(n, rel)
        out = [Fraction(0)] * n
        for i, a in enumerate(self.c):
            if i >= n:
                break
            for j, b in enumerate(other.c):
                if i + j >= n:
                    break
                out[i + j] += a * b
        v = self.val + other.val
        return EpsLaurent(out, v, inf if rel == inf else v + rel)

    __rmul__ = __mul__

    def inverse(self, relprec: int = DEFAULT_EPS_PREC):
        if not self.c:
            raise ZeroDivisionError("inverse of an eps-series with no known nonzero term")
        rel = min(self._relprec(), relprec)
        c0 = self.c[0]
        out = [1 / c0]
        for k in range(1, rel):
            s = Fraction(0)
            for j in range(1, min(k, len(self.c) - 1) + 1):
                s += self.c[j] * out[k - j]
            out.append(-s / c0)
        if len(self.c) == 1:
            return EpsLaurent(out[:1], -self.val, inf)
        return EpsLaurent(out, -self.val, -self.val + rel)

    def __truediv__(self, other):
        if not isinstance(other, EpsLaurent):
            return self * (1 / Fraction(other))
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def coeff(self, k: int) -> Fraction:
        if k >= self.prec:
            raise ValueError(f"coefficient eps^{k} beyond precision {self.prec}")
        i = k - self.val
        return self.c[i] if 0 <= i < len(self.c) else Fraction(0)

    def order(self):
        """Valuation (lowest known nonzero exponent), or the precision if none."""
        return self.val

    def finite_part(self) -> Fraction:
        """The eps^0 coefficient, refusing if a pole survives."""
        if self.c and self.val < 0:
            raise PoleError(f"negative eps-power survives: {self!r}")
        return self.coeff(0)

    def __repr__(self):
        terms = " + ".join(f"{fmt_q(a)}ε^{self.val + k}" for k, a in enumerate(self.c) if a)
        tail = "" if self.prec == inf else f" + O(ε^{self.prec})"
        return (terms or "0") + tail


# --------------------------------------------------------------- log series

class LogSeries:
    """Truncated series  sum_e q^(e/den) * P_e(log q)  in n variables.

    ``terms`` maps an integer exponent tuple e (actual exponent e/den) to a
    dict {log-power tuple: coefficient}.  Terms whose total degree exceeds
    ``bound`` are dropped.
    """

    __slots__ = ("n", "den", "bound", "terms")

    def __init__(self, n: int, terms=None, den: int = 1, bound=inf):
        self.n = n
        self.den = den
        self.bound = bound
        self.terms = {}
        for e, poly in (terms or {}).items():
            if self._keep(e):
                clean = {k: v for k, v in poly.items() if v}
                if clean:
                    self.terms[tuple(e)] = clean

    # constructors -----------------------------------------------------
    @classmethod
    def one(cls, n, den=1, bound=inf):
        return cls(n, {(0,) * n: {(0,) * n: Fraction(1)}}, den, bound)

    @classmethod
    def zero(cls, n, den=1, bound=inf):
        return cls(n, {}, den, bound)

    @classmethod
    def monomial(cls, exps, coeff=1, logs=None, den=1, bound=inf):
        """coeff * q^exps * prod log(q_a)^logs[a]; exps may be rationals."""
        n = len(exps)
        e = []
        for x in exps:
            x = Fraction(x) * den
            if x.denominator != 1:
                raise ValueError("exponent not representable with this denominator")
            e.append(int(x))
        logs = tuple(logs) if logs else (0,) * n
        return cls(n, {tuple(e): {logs: coeff}}, den, bound)

    @classmethod
    def log(cls, n, a, den=1, bound=inf):
        logs = [0] * n
        logs[a] = 1
        return cls(n, {(0,) * n: {tuple(logs): Fraction(1)}}, den, bound)

    # helpers ------------------------------------------------------------
    def _keep(self, e):
        return self.bound == inf or Fraction(sum(e), self.den) <= self.bound

    def _align(self, other):
        if not isinstance(other, LogSeries):
            other = LogSeries(self.n, {(0,) * self.n: {(0,) * self.n: other}}, self.den)
        if other.n != self.n:
            raise ValueError("variable count mismatch")
        if other.den == self.den:
            return self, other
        d = self.den * other.den // gcd(self.den, other.den)
        return self.rescale(d), other.rescale(d)

    def rescale(self, den: int) -> "LogSeries":
        k, r = divmod(den, self.den)
        assert r == 0
        return LogSeries(self.n, {tuple(x * k for x in e): p for e, p in self.terms.items()},
                         den, self.bound)

    def exponents(self):
        return {e: tuple(Fraction(x, self.den) for x in e) for e in self.terms}

    def coefficient(self, exps, logs=None):
        e = tuple(int(Fraction(x) * self.den) for x in exps)
        logs = tuple(logs) if logs else (0,) * self.n
        return self.terms.get(e, {}).get(logs, 0)

    def truncate(self, bound) -> "LogSeries":
        return LogSeries(self.n, self.terms, self.den, min(bound, self.bound))

    def is_zero(self):
        return not self.terms

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        a, b = self._align(other)
        out = {e: dict(p) for e, p in a.terms.items()}
        for e, p in b.terms.items():
            tgt = out.setdefault(e, {})
            for k, v in p.items():
                tgt[k] = tgt.get(k, 0) + v
        return LogSeries(self.n, out, a.den, min(a.bound, b.bound))

    __radd__ = __add__

    def __neg__(self):
        return LogSeries(self.n, {e: {k: -v for k, v in p.items()} for e, p in self.terms.items()},
                         self.den, self.bound)

    def __sub__(self, other):
        return self + (-other if isinstance(other, LogSeries) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        return LogSeries(self.n, {e: {k: v * c for k, v in p.items()} for e, p in self.terms.items()},
                         self.den, self.bound)

    def __mul__(self, other):
        if not isinstance(other, LogSeries):
            return self.scale(other)
        a, b = self._align(other)
        bound = min(a.bound, b.bound)
        out = {}
        lim = None if bound == inf else bound * a.den
        for e1, p1 in a.terms.items():
            s1 = sum(e1)
            for e2, p2 in b.terms.items():
                if lim is not None and s1 + sum(e2) > lim:
                    continue
                e = tuple(x + y for x, y in zip(e1, e2))
                tgt = out.setdefault(e, {})
                for k1, v1 in p1.items():
                    for k2, v2 in p2.items():
                        k = tuple(x + y for x, y in zip(k1, k2))
                        tgt[k] = tgt.get(k, 0) + v1 * v2
        return LogSeries(self.n, out, a.den, bound)

    __rmul__ = __mul__

    def shift(self, exps) -> "LogSeries":
        """Multiply by the monomial q^exps (rational exponents)."""
        e0 = []
        for x in exps:
            x = Fraction(x) * self.den
            if x.denominator != 1:
                return self.rescale(self.den * x.denominator).shift(exps)
            e0.append(int(x))
        return LogSeries(self.n, {tuple(a + b for a, b in zip(e, e0)): p
                                  for e, p in self.terms.items()}, self.den, self.bound)

    def theta(self, a: int) -> "LogSeries":
        """q_a d/dq_a, acting by the product rule on q^e log-polynomials."""
        out = {}
        for e, p in self.terms.items():
            tgt = {}
            ea = Fraction(e[a], self.den)
            for k, v in p.items():
                if ea:
                    tgt[k] = tgt.get(k, 0) + ea * v
                if k[a]:
                    k2 = k[:a] + (k[a] - 1,) + k[a + 1:]
                    tgt[k2] = tgt.get(k2, 0) + k[a] * v
            out[e] = tgt
        return LogSeries(self.n, out, self.den, self.bound)

    def substitute_logs_zero(self) -> "LogSeries":
        """Power-series part (all log symbols set to zero)."""
        z = (0,) * self.n
        return LogSeries(self.n, {e: {z: p[z]} for e, p in self.terms.items() if z in p},
                         self.den, self.bound)

    def __eq__(self, other):
        if not isinstance(other, LogSeries):
            if other == 0:
                return self.is_zero()
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return id(self)

    def items(self):
        """Sorted (exponent tuple, log tuple, coefficient) triples."""
        out = []
        for e in sorted(self.terms):
            for k in sorted(self.terms[e]):
                out.append((tuple(Fraction(x, self.den) for x in e), k, self.terms[e][k]))
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, k, v in self.items()[:12]:
            mono = "·".join([f"q{i+1}^{fmt_q(x)}" for i, x in enumerate(e) if x] +
                            [f"log(q{i+1})^{p}" for i, p in enumerate(k) if p])
            parts.append(f"{fmt_exact(v)}" + (f"·{mono}" if mono else ""))
        more = " + ..." if len(self.items()) > 12 else ""
        return " + ".join(parts) + more
