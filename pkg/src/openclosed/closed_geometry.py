"""The closed 4-orbifold and the bridge surface built from a framed outer brane."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .open_geometry import (GeometryError, GeometryInput, StackyFan3, normalize_flag,
                            _apply)
from .toric import ToricFan


class DegenerateFraming(GeometryError):
    pass


class BraneNotOnChain(GeometryError):
    pass


@dataclass(frozen=True)
class ExtraConeData:
    s: int
    i2: int
    i3: int
    order: int
    c_prev: int
    c_cur: int
    box_ages: tuple


@dataclass
class SurfaceData:
    interval: tuple            # (c_S, c_0)
    subdivision: list          # c_0 > c_1 > ... > c_S

    @property
    def volume(self) -> int:
        return self.interval[1] - self.interval[0]

    def cone_volumes(self):
        c = self.subdivision
        return [c[k - 1] - c[k] for k in range(1, len(c))]


@dataclass
class StackyFan4:
    fan3: StackyFan3
    a: int
    b: int
    bt: list                   # R+2 vectors in Z^4
    iota_cones: list           # iota(sigma) for sigma in Sigma(3)
    extra: list                # ExtraConeData, s = 1..S
    surface: SurfaceData
    cvalues: dict              # boundary ray -> c_i

    @property
    def R(self):
        return self.fan3.R

    @property
    def S(self):
        return len(self.extra)

    def extra_cone(self, s):
        e = self.extra[s - 1]
        return tuple(sorted((e.i2, e.i3, self.R + 1, self.R + 2)))

    @property
    def extra_cones(self):
        return [self.extra_cone(s) for s in range(1, self.S + 1)]

    @property
    def sigma0(self):
        return tuple(sorted((2, 3, self.R + 1, self.R + 2)))

    @property
    def s0(self) -> int:
        for e in self.extra:
            if (e.i2, e.i3) == (2, 3):
                return e.s
        raise BraneNotOnChain("the brane edge is not on the chain")

    @property
    def cones4(self):
        return sorted(self.iota_cones + self.extra_cones)

    def toric(self) -> ToricFan:
        rays = tuple(range(1, self.fan3.Rp + 1)) + (self.R + 1, self.R + 2)
        return ToricFan({i + 1: v for i, v in enumerate(self.bt)}, self.cones4, rays)

    def volume_identity_check(self):
        t = self.toric()
        vol3 = self.fan3.normalized_volume()
        by_cones = sum(t.order(c) for c in self.cones4)
        vol0 = self.surface.volume
        return vol3, by_cones, vol0, by_cones == vol3 + vol0


def fan3_toric(fan3: StackyFan3) -> ToricFan:
    return ToricFan({i + 1: v for i, v in enumerate(fan3.b)}, fan3.cones3,
                    tuple(range(1, fan3.Rp + 1)))


def extend(fan3: StackyFan3, a: int | None = None, b: int | None = None) -> StackyFan4:
    """Build the closed geometry for framing b/a (defaults to the fan's framing)."""
    if a is None:
        a, b = fan3.a, fan3.bb
    if a <= 0 or gcd(a, b) != 1:
        raise GeometryError("framing must be b/a with a > 0 and gcd(a, b) = 1")
    R = fan3.R
    bt = [(v[0], v[1], 1, 0) for v in fan3.b] + [(-a, -b, 1, 1), (0, 0, 1, 1)]
    cval = {i: a * fan3.b[i - 1][1] - b * fan3.b[i - 1][0] for i in fan3.boundary}
    cyc = fan3.boundary
    n = len(cyc)
    cmax, cmin = max(cval.values()), min(cval.values())
    # start at the max vertex whose ccw successor is strictly smaller
    start = next(k for k in range(n) if cval[cyc[k]] == cmax and cval[cyc[(k + 1) % n]] < cmax)
    chain = [cyc[start]]
    k = start
    while cval[chain[-1]] != cmin:
        k = (k + 1) % n
        chain.append(cyc[k])
    toric_tmp = ToricFan({i + 1: v for i, v in enumerate(bt)}, [], ())
    extra = []
    for s in range(1, len(chain)):
        i2, i3 = chain[s - 1], chain[s]
        cp, cc = cval[i2], cval[i3]
        if cp == cc:
            raise DegenerateFraming(f"chain edge {(i2, i3)} has constant c = {cp}")
        cone = tuple(sorted((i2, i3, R + 1, R + 2)))
        order = toric_tmp.order(cone)
        ages = tuple(sorted(e.age for e in toric_tmp.box(cone)))
        extra.append(ExtraConeData(s, i2, i3, order, cp, cc, ages))
    if not any((e.i2, e.i3) == (2, 3) for e in extra):
        raise BraneNotOnChain("brane edge (2, 3) is not among the chain edges")
    iota = sorted(tuple(sorted(c + (R + 2,))) for c in fan3.cones3)
    cs = [cval[chain[0]]] + [e.c_cur for e in extra]
    surf = SurfaceData((cs[-1], cs[0]), cs)
    fan4 = StackyFan4(fan3, a, b, bt, iota, extra, surf, cval)
    _check(fan4)
    return fan4


def _check(fan4: StackyFan4):
    for e in fan4.extra:
        if e.order != e.c_prev - e.c_cur:
            raise GeometryError(f"extra cone {e.s}: index {e.order} != c difference")
    assert all(v[2] == 1 for v in fan4.bt)


def box_age_check(fan4: StackyFan4) -> list[dict]:
    """Box elements of age <= 1 are the edge stabilizer; all others have age 2."""
    out = []
    for e in fan4.extra:
        p, q = fan4.fan3.b[e.i2 - 1], fan4.fan3.b[e.i3 - 1]
        g = gcd(p[0] - q[0], p[1] - q[1])
        low = sum(1 for x in e.box_ages if x <= 1)
        rest_ok = all(x == 2 for x in e.box_ages if x > 1)
        out.append({"s": e.s, "edge_length": g, "low_age_count": low,
                    "others_age_2": rest_ok, "holds": low == g and rest_ok})
    return out


def neighbor_framings(fan4: StackyFan4) -> list[tuple]:
    """(s, a_s, b_s, f_s) obtained by renormalizing at each chain flag."""
    fan3 = fan4.fan3
    pts = [(v[0], v[1]) for v in fan3.b]
    out = []
    for e in fan4.extra:
        _, A, _, _ = normalize_flag(pts, fan3.cones3, (e.i2, e.i3))
        a_s, b_s = _apply(A, (fan4.a, fan4.b))
        if a_s <= 0:
            raise DegenerateFraming(f"renormalized framing at s={e.s} has a_s = {a_s}")
        out.append((e.s, a_s, b_s, Fraction(b_s, a_s)))
    return out


def neighbor_input(fan4: StackyFan4, s: int) -> GeometryInput:
    """Geometry input describing the brane on the chain edge s with framing f_s."""
    fan3 = fan4.fan3
    e = fan4.extra[s - 1]
    fs = dict((t[0], t[3]) for t in neighbor_framings(fan4))[s]
    return GeometryInput(tuple((v[0], v[1]) for v in fan3.b), fan3.Rp,
                         tuple(fan3.cones3), (e.i2, e.i3), fs)


def exact_volume_3d(fan4: StackyFan4) -> int:
    """Normalized volume of the closed polytope from its convex hull (float check)."""
    from scipy.spatial import ConvexHull
    pts = [(v[0], v[1], v[3]) for v in fan4.bt]
    return round(6 * ConvexHull(pts).volume)


def closed_summary(fan4: StackyFan4) -> dict:
    vol3, volt, vol0, holds = fan4.volume_identity_check()
    return {
        "bt": [list(v) for v in fan4.bt],
        "extra_cones": [{"s": e.s, "I_prime": list(fan4.extra_cone(e.s)), "order": e.order,
                         "c_prev": e.c_prev, "c_cur": e.c_cur,
                         "box_ages": [str(x) for x in e.box_ages]} for e in fan4.extra],
        "S": fan4.S, "sigma0_tilde": list(fan4.sigma0),
        "Delta0": list(fan4.surface.interval), "c_subdivision": fan4.surface.subdivision,
        "volumes": {"Delta": vol3, "Delta_tilde": volt, "Delta0": vol0, "identity_holds": holds},
        "neighbor_framings": [{"s": s, "a": a, "b": b, "f": f"{f.numerator}/{f.denominator}"}
                              for s, a, b, f in neighbor_framings(fan4)],
    }
