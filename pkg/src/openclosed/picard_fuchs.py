"""Picard-Fuchs operators of the charge lattices and annihilation checks."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .charges import ChargeData
from .coefficients import LogSeries
from .lattice import rational_rank


class NonIntegralPairing(ValueError):
    pass


class OrderTooSmall(ValueError):
    pass


@dataclass(frozen=True)
class PFOperator:
    """q^beta * prod_left (P_i - m)  -  prod_right (P_i - m)."""

    beta: tuple               # pairings <D_i, beta>
    monomial: tuple           # q-exponents of q^beta
    left: tuple               # ((i, m), ...)
    right: tuple
    m: tuple                  # m[i-1][a], the structure coefficients

    @property
    def nvars(self):
        return len(self.monomial)

    def describe(self) -> str:
        def fac(i, k):
            coeffs = self.m[i - 1]
            lin = " + ".join(f"{c}θ{a + 1}" for a, c in enumerate(coeffs) if c) or "0"
            return f"({lin}{f' - {k}' if k else ''})"
        mono = "·".join(f"q{a + 1}^{e}" for a, e in enumerate(self.monomial) if e)
        left = "".join(fac(i, k) for i, k in self.left)
        right = "".join(fac(i, k) for i, k in self.right)
        return f"{mono or '1'}·{left or '1'} - {right or '1'}"


def make_operator(beta, ch: ChargeData, tilde: bool = True) -> PFOperator:
    """Operator of a lattice element given by its pairings <D_i, beta>."""
    beta = tuple(Fraction(x) for x in beta)
    if any(x.denominator != 1 for x in beta):
        raise NonIntegralPairing(f"{beta} is not a lattice element")
    m = ch.mtilde if tilde else ch.m
    if len(beta) != len(m):
        raise ValueError("pairing vector has the wrong length")
    mono = ch.Htilde_degree(beta) if tilde else ch.H_degree(beta)
    left = tuple((i + 1, k) for i, c in enumerate(beta) if c < 0 for k in range(int(-c)))
    right = tuple((i + 1, k) for i, c in enumerate(beta) if c > 0 for k in range(int(c)))
    return PFOperator(beta, tuple(mono), left, right, tuple(tuple(r) for r in m))


def _apply_factor(op: PFOperator, i: int, k: int, F: LogSeries) -> LogSeries:
    out = F * Fraction(-k) if k else LogSeries.zero(F.n, F.den, F.bound)
    for a, c in enumerate(op.m[i - 1]):
        if c:
            out = out + F.theta(a) * c
    return out


def apply(op: PFOperator, F: LogSeries, safe_order=None) -> LogSeries:
    """op F, exact through total degree ``safe_order`` (default: as far as F allows)."""
    shift = sum(op.monomial)
    avail = F.bound
    if safe_order is None:
        safe_order = avail + min(shift, 0) if avail != float("inf") else avail
    if avail != float("inf") and safe_order > avail + min(shift, 0):
        raise OrderTooSmall(f"need F through {safe_order - min(shift, 0)}, have {avail}")
    G = F
    for i, k in op.left:
        G = _apply_factor(op, i, k, G)
    G = G.shift(op.monomial)
    H = F
    for i, k in op.right:
        H = _apply_factor(op, i, k, H)
    out = G - H
    return LogSeries(out.n, out.terms, out.den, safe_order)


def test_betas(basis) -> list:
    """Basis vectors, their negatives and pairwise sums of those."""
    gens = [tuple(v) for v in basis] + [tuple(-x for x in v) for v in basis]
    out = list(gens)
    for u, v in itertools.combinations(gens, 2):
        w = tuple(a + b for a, b in zip(u, v))
        if any(w) and w not in out:
            out.append(w)
    return out


def annihilation_report(ops, solutions, safe_order) -> dict:
    rows = []
    ok = True
    for name, F in solutions:
        for op in ops:
            G = apply(op, F.truncate(F.bound), safe_order)
            good = G.is_zero()
            ok = ok and good
            rows.append({"solution": name, "beta": [str(x) for x in op.beta], "zero": good})
    return {"passed": ok, "checks": rows}


def embed_open(F: LogSeries, nvars: int) -> LogSeries:
    """Read a series in q_1..q_{R-3} as a series in the closed variables."""
    pad = nvars - F.n
    terms = {tuple(e) + (0,) * pad: {tuple(k) + (0,) * pad: v for k, v in p.items()}
             for e, p in F.terms.items()}
    return LogSeries(nvars, terms, F.den, F.bound)


def verify_extension(ch: ChargeData, open_solutions, safe_order) -> dict:
    """Every open Picard-Fuchs solution, read in closed variables, solves the closed system."""
    closed_basis = [tuple(v) for v in ch.Ltilde_basis]
    ops = [make_operator(b, ch, tilde=True) for b in test_betas(closed_basis)]
    sols = [(name, embed_open(F, ch.nL + 1)) for name, F in open_solutions]
    return annihilation_report(ops, sols, safe_order)


def solution_rank(solutions, safe_order=None) -> tuple[int, list]:
    """Rank of the coefficient vectors of the given series and a greedy basis."""
    keys = set()
    for _, F in solutions:
        for e, k, v in F.items():
            if safe_order is None or sum(e) <= safe_order:
                keys.add((e, k))
    keys = sorted(keys)
    rows, chosen = [], []
    for name, F in solutions:
        vec = [Fraction(F.coefficient(e, k)) for e, k in keys]
        trial = rows + [vec]
        if rational_rank(trial) == len(trial):
            rows = trial
            chosen.append(name)
    return len(rows), chosen
