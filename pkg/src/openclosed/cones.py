"""Exact feasibility of small linear systems by Fourier-Motzkin elimination.

Used for cone membership tests and for the strict height system that
certifies regularity of a triangulation.  Sizes are desk scale (a handful
of variables), so no redundancy pruning beyond deduplication is done.
"""
from __future__ import annotations

from fractions import Fraction


def _normalize(row, rhs, strict):
    # scale so the first nonzero coefficient has absolute value 1
    for a in row:
        if a:
            s = abs(a)
            return tuple(x / s for x in row), rhs / s, strict
    return tuple(row), rhs, strict


def fm_feasible(ineqs, eqs=()) -> bool:
    """Decide if {x : a.x >= b (or > b if strict), c.x == d} is nonempty.

    ineqs: iterable of (coeffs, rhs, strict); eqs: iterable of (coeffs, rhs).
    """
    ineqs = [(tuple(Fraction(x) for x in a), Fraction(b), bool(s)) for a, b, s in ineqs]
    eqs = [(list(Fraction(x) for x in a), Fraction(b)) for a, b in eqs]
    n = len(ineqs[0][0]) if ineqs else (len(eqs[0][0]) if eqs else 0)

    # substitute equalities away
    while eqs:
        a, b = eqs.pop()
        j = next((k for k, x in enumerate(a) if x), None)
        if j is None:
            if b != 0:
                return False
            continue
        piv = a[j]
        # x_j = (b - sum_{k != j} a_k x_k) / piv
        def sub(row, rhs):
            f = row[j] / piv
            if not f:
                return list(row), rhs
            new = [r - f * ak for r, ak in zip(row, a)]
            new[j] = Fraction(0)
            return new, rhs - f * b
        eqs = [tuple(sub(r, c)) for r, c in eqs]
        ineqs = [(tuple(sub(r, c)[0]), sub(r, c)[1], s) for r, c, s in ineqs]

    system = {_normalize(a, b, s) for a, b, s in ineqs}
    for j in range(n):
        pos, neg, rest = [], [], []
        for a, b, s in system:
            (pos if a[j] > 0 else neg if a[j] < 0 else rest).append((a, b, s))
        new = set(rest)
        for ap, bp, sp in pos:
            for an, bn, sn in neg:
                fp, fn = -an[j], ap[j]
                row = tuple(fp * x + fn * y for x, y in zip(ap, an))
                new.add(_normalize(row, fp * bp + fn * bn, sp or sn))
        system = new
    for a, b, s in system:
        # all coefficients are zero now: need 0 > b or 0 >= b
        if (s and not 0 > b) or (not s and not 0 >= b):
            return False
    return True


def cone_contains(generators, point) -> bool:
    """Is ``point`` a nonnegative real combination of ``generators``?"""
    k = len(generators)
    if k == 0:
        return all(x == 0 for x in point)
    dim = len(point)
    eqs = [([g[r] for g in generators], point[r]) for r in range(dim)]
    ineqs = [([int(i == j) for j in range(k)], 0, False) for i in range(k)]
    return fm_feasible(ineqs, eqs)


def strict_homogeneous_feasible(rows) -> bool:
    """Is there x with r.x > 0 for every row?"""
    return fm_feasible([(r, 0, True) for r in rows])
