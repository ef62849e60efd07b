"""Floating-point checks on the mirror curve H0(Y0, q, x) = 0."""
from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import sympy

from .batyrev import LaurentPoly
from .charges import ChargeData
from .closed_geometry import StackyFan4
from .coefficients import CycNumber, LogSeries, cyclotomic_poly


class NonSimpleRoots(ArithmeticError):
    pass


class NoMatchingRoot(AssertionError):
    pass


@dataclass
class RootSet:
    roots: list
    multiplicities: list
    residual: float
    separation: float

    def __len__(self):
        return sum(self.multiplicities)


# ------------------------------------------------------------ root finding

def aberth(coeffs, tol: float = 1e-14, maxiter: int = 500, use_mp: bool = False):
    """All roots of sum coeffs[k] * y^k by Aberth-Ehrlich iteration.

    Returns (roots, max |p(root)| relative to the coefficient size).
    """
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    n = len(coeffs) - 1
    if n < 1:
        return [], 0.0
    C = mpmath.mpc if use_mp else complex
    c = [C(x) for x in coeffs]
    absf = abs
    lead = c[-1]
    c = [x / lead for x in c]
    dc = [k * c[k] for k in range(1, n + 1)]

    def horner(p, z):
        acc = C(0)
        for a in reversed(p):
            acc = acc * z + a
        return acc

    # initial points on a circle of the Cauchy-type radius, slightly rotated
    rad = 1 + max(absf(x) for x in c[:-1])
    z = [C(rad * cmath.exp(1j * (2 * cmath.pi * k / n + 0.4))) for k in range(n)]
    for _ in range(maxiter):
        moved = 0.0
        for i in range(n):
            p = horner(c, z[i])
            if p == 0:
                continue
            ratio = p / horner(dc, z[i])
            s = sum(1 / (z[i] - z[j]) for j in range(n) if j != i)
            w = ratio / (1 - ratio * s)
            z[i] -= w
            moved = max(moved, float(absf(w)))
        if moved < tol:
            break
    scale = sum(float(absf(x)) for x in c)
    resid = max(float(absf(horner(c, zi))) for zi in z) / scale
    return z, resid


def _cleared(F: LaurentPoly):
    lo = min(e[0] for e in F.terms)
    hi = max(e[0] for e in F.terms)
    coeffs = [0j] * (hi - lo + 1)
    for (e,), c in F.terms.items():
        coeffs[e - lo] += c.to_complex()
    return coeffs, lo


def h0_roots(H0: LaurentPoly, precision: int = 12) -> RootSet:
    """Roots of Y0^(-lo) H0 with simplicity asserted by pairwise separation."""
    coeffs, _ = _cleared(H0)
    use_mp = precision > 14
    ctx = mpmath.workdps(precision + 10) if use_mp else _null()
    with ctx:
        roots, resid = aberth(coeffs, tol=10.0 ** (-precision - 2), use_mp=use_mp)
        if resid > 10.0 ** (-precision):
            raise ArithmeticError(f"root residual {resid} above 1e-{precision}")
        sep = min((float(abs(a - b)) for a, b in itertools.combinations(roots, 2)),
                  default=float("inf"))
    if sep <= 10.0 ** (-precision / 2):
        raise NonSimpleRoots(f"roots closer than {sep}")
    return RootSet(list(roots), [1] * len(roots), resid, sep)


class _null:
    def __enter__(self):
        return self

    def __exit__(self, *a):
        return False


# ------------------------------------------------------------ open mirror comparison

def h0_terms(ch: ChargeData, fan4: StackyFan4, q):
    """(Y0 exponent, x exponent, coefficient without x) for every term of H0."""
    from .batyrev import _monomial_value
    A, B = fan4.a, fan4.b
    n = 2 * A
    out = []
    for i, (m, k) in enumerate((v[:2] for v in fan4.fan3.b), 1):
        c = CycNumber.zeta(n, m) * _monomial_value(ch, q, i)
        out.append((A * k - B * m, m, c.to_complex()))
    return out


def log_derivative(terms, x: float, y: complex) -> complex:
    """x Y'(x) / Y along a root branch, by implicit differentiation of H0(Y, x) = 0."""
    xh = sum(mx * c * x ** mx * y ** e for e, mx, c in terms)
    yh = sum(e * c * x ** mx * y ** e for e, mx, c in terms)
    return -xh / yh


def theta_eval(W: LogSeries, point, k: int) -> complex:
    """(x d/dx)^k W at the given point; x is the last variable."""
    total = 0j
    for e, logs, v in W.items():
        if any(logs):
            raise ValueError("W carries logarithms")
        val = complex(float(v))
        for xi, ei in zip(point, e):
            val *= complex(xi) ** float(ei)
        total += val * float(e[-1]) ** k
    return total


def open_mirror_numeric_check(W: LogSeries, ch: ChargeData, fan4: StackyFan4, q, x_eval,
                              tol: float = 1e-8, theta_power: int = 3, signed: bool = False) -> dict:
    """Compare (x d/dx)^theta_power W with x Y_p'/Y_p over single roots and root differences.

    ``signed`` also admits the negatives of those candidates.
    """
    from .batyrev import build_laurent
    x_eval = Fraction(x_eval)
    H0 = build_laurent(ch, fan4, q, x_eval)[2]
    roots = h0_roots(H0).roots
    terms = h0_terms(ch, fan4, q)
    xf = float(x_eval)
    lhs = theta_eval(W, tuple(float(v) for v in q) + (xf,), theta_power)
    contrib = [log_derivative(terms, xf, complex(y)) for y in roots]
    candidates = [((p,), contrib[p]) for p in range(len(roots))]
    candidates += [((p, r), contrib[p] - contrib[r])
                   for p, r in itertools.permutations(range(len(roots)), 2)]
    if signed:
        candidates += [(("-",) + a, -v) for a, v in candidates]
    scored = sorted(((abs(lhs - v), a, v) for a, v in candidates), key=lambda t: t[0])
    best_res, best_a, best_v = scored[0]
    report = {
        "theta_power": theta_power,
        "x": str(x_eval),
        "lhs": [lhs.real, lhs.imag],
        "roots": [[complex(y).real, complex(y).imag] for y in roots],
        "best_assignment": list(best_a),
        "best_value": [best_v.real, best_v.imag],
        "residual": best_res,
        "tol": tol,
        "passed": best_res <= tol,
    }
    if not report["passed"]:
        raise NoMatchingRoot(report)
    return report


# ------------------------------------------------------------ low-dimensional regularity

def _cyc_poly_gcd_degree(p, q) -> int:
    """Degree of gcd of two univariate polynomials over Q(zeta) (low degree first)."""
    def trim(a):
        a = list(a)
        while a and a[-1].is_zero():
            a.pop()
        return a
    a, b = trim(p), trim(q)
    while b:
        a = list(a)
        inv = b[-1].inverse()
        while len(a) >= len(b):
            f = a[-1] * inv
            s = len(a) - len(b)
            for i, c in enumerate(b):
                a[s + i] = a[s + i] - f * c
            a = trim(a)
            if not a:
                break
        a, b = b, a
    return len(a) - 1


def _sympy_face(F: LaurentPoly, terms):
    zeta = sympy.Symbol("zeta")
    X = sympy.symbols(f"v0:{F.nvars}")
    expr = 0
    for e, c in terms.items():
        coef = sum(sympy.Rational(v.numerator, v.denominator) * zeta ** j for j, v in enumerate(c.c))
        mono = 1
        for xi, ei in zip(X, e):
            mono *= xi ** ei
        expr += coef * mono
    return expr, X, zeta


def regularity_low_dim(F: LaurentPoly) -> bool:
    """No common torus zeros of each face polynomial and its Euler derivatives (dim <= 2)."""
    r = F.nvars
    if r == 1:
        lo = min(e[0] for e in F.terms)
        hi = max(e[0] for e in F.terms)
        P = [F.terms.get((k,), CycNumber.of(0, F.field)) for k in range(lo, hi + 1)]
        dP = [c * k for k, c in enumerate(P)][1:]
        return _cyc_poly_gcd_degree(P, dP) == 0
    if r != 2:
        raise ValueError("regularity_low_dim handles dimensions 1 and 2")
    P = F.newton
    faces = [dict(F.terms)]
    for n, c in P.facets:
        faces.append({e: v for e, v in F.terms.items()
                      if sum(a * b for a, b in zip(n, e)) + c == 0})
    mp = cyclotomic_poly(F.field)
    for terms in faces:
        expr, X, zeta = _sympy_face(F, terms)
        T = sympy.Symbol("T")
        eqs = [expr] + [xi * sympy.diff(expr, xi) for xi in X]
        den = 1
        for xi in X:
            den *= xi ** max(0, -min(e[X.index(xi)] for e in terms))
        eqs = [sympy.expand(e * den) for e in eqs]
        eqs.append(sum(a * zeta ** j for j, a in enumerate(mp)))
        eqs.append(1 - T * sympy.Mul(*X))
        G = sympy.groebner(eqs, *X, T, zeta, order="grevlex")
        if list(G.exprs) != [1]:
            return False
    return True
