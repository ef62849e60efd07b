"""Toric data of the 3-orbifold and its normalization along the brane flag."""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .cones import strict_homogeneous_feasible
from .lattice import det, smith_normal_form, rational_solve, unimodular_complete


class GeometryError(ValueError):
    pass


class NotOuterBrane(GeometryError):
    pass


class MissingLatticePoint(GeometryError):
    pass


class NotATriangulation(GeometryError):
    pass


class IrregularTriangulationWarning(UserWarning):
    pass


def parse_rational(s) -> Fraction:
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    s = str(s).strip().replace("−", "-")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise GeometryError(f"not an exact rational: {s!r}") from exc


@dataclass(frozen=True)
class GeometryInput:
    points: tuple
    rays: int
    triangulation: tuple
    brane_edge: tuple
    framing: Fraction

    @classmethod
    def from_dict(cls, doc: dict) -> "GeometryInput":
        try:
            pts = tuple(tuple(int(c) for c in p) for p in doc["points"])
            rays = int(doc["rays"])
            tri = tuple(tuple(int(i) for i in t) for t in doc["triangulation"])
            edge = tuple(int(i) for i in doc["brane"]["edge"])
            f = parse_rational(doc["brane"]["framing"])
        except (KeyError, TypeError) as exc:
            raise GeometryError(f"malformed geometry input: {exc}") from exc
        return cls(pts, rays, tri, edge, f)

    def to_dict(self) -> dict:
        f = self.framing
        return {"points": [list(p) for p in self.points], "rays": self.rays,
                "triangulation": [list(t) for t in self.triangulation],
                "brane": {"edge": list(self.brane_edge),
                          "framing": f"{f.numerator}/{f.denominator}"}}


@dataclass(frozen=True)
class BoxElement:
    v: tuple
    cone: tuple            # indices with nonzero coefficient (minimal cone)
    coeffs: dict = field(compare=False, hash=False)
    age: Fraction = field(compare=False, default=Fraction(0))

    def inverse_coeffs(self):
        return {i: (1 - c) for i, c in self.coeffs.items() if c}


def lattice_index(vectors) -> int:
    """Index of the span of ``vectors`` in its saturation (product of SNF factors)."""
    d = smith_normal_form([list(v) for v in vectors]).diagonal
    out = 1
    for x in d:
        if x == 0:
            raise GeometryError("cone generators are linearly dependent")
        out *= x
    return out


def box_elements(vectors, indices) -> list[BoxElement]:
    """Box of the simplicial cone spanned by ``vectors`` (labelled by ``indices``)."""
    vectors = [tuple(v) for v in vectors]
    k, dim = len(vectors), len(vectors[0])
    N = lattice_index(vectors)
    out = []
    for num in itertools.product(range(N), repeat=k):
        v = [Fraction(0)] * dim
        for c, b in zip(num, vectors):
            if c:
                for t in range(dim):
                    v[t] += Fraction(c, N) * b[t]
        if all(x.denominator == 1 for x in v):
            coeffs = {i: Fraction(c, N) for i, c in zip(indices, num)}
            out.append(BoxElement(tuple(int(x) for x in v),
                                  tuple(i for i in indices if coeffs[i]),
                                  coeffs, sum(coeffs.values(), Fraction(0))))
    out.sort(key=lambda e: (e.age, tuple(-e.coeffs[i] for i in indices)))
    assert len(out) == N
    return out


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points):
    """Counterclockwise hull vertices (Andrew's monotone chain)."""
    pts = sorted(set(points))
    if len(pts) < 3:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _in_hull(hull, p):
    n = len(hull)
    return all(_cross(hull[i], hull[(i + 1) % n], p) >= 0 for i in range(n))


def _on_hull_boundary(hull, p, q):
    n = len(hull)
    for i in range(n):
        a, b = hull[i], hull[(i + 1) % n]
        if _cross(a, b, p) == 0 and _cross(a, b, q) == 0:
            return True
    return False


def polygon_area2(hull) -> int:
    n = len(hull)
    return abs(sum(hull[i][0] * hull[(i + 1) % n][1] - hull[(i + 1) % n][0] * hull[i][1]
                   for i in range(n)))


@dataclass
class StackyFan3:
    b: list                      # R vectors (m, n, 1)
    R: int
    Rp: int
    cones3: list                 # sorted index triples (1-based)
    cones2: list
    r: int
    s: int
    m: int
    boundary: list               # ccw cycle of boundary ray indices
    perm: list                   # perm[new_index - 1] = input index (1-based)
    framing: Fraction
    tau0: tuple = (2, 3)
    sigma0: tuple = (1, 2, 3)
    regular: bool = True

    @property
    def a(self) -> int:
        return self.framing.denominator

    @property
    def bb(self) -> int:
        return self.framing.numerator

    def vec(self, i):
        return self.b[i - 1]

    def stabilizer_order(self, cone) -> int:
        return stabilizer_order([self.vec(i) for i in cone])

    def box(self, cone) -> list[BoxElement]:
        return box_elements([self.vec(i) for i in cone], list(cone))

    def normalized_volume(self) -> int:
        return sum(self.stabilizer_order(c) for c in self.cones3)

    def cone_containing_edge(self, edge):
        e = set(edge)
        return [c for c in self.cones3 if e <= set(c)]

    def is_boundary_edge(self, edge) -> bool:
        return len(self.cone_containing_edge(edge)) == 1


def stabilizer_order(vectors) -> int:
    """|G_sigma|: |det| for full cones, lattice length for 2-cones, etc."""
    return lattice_index(vectors)


def _validate(inp: GeometryInput):
    pts = [tuple(p) for p in inp.points]
    if any(len(p) != 2 for p in pts):
        raise GeometryError("points must be 2-dimensional")
    if len(set(pts)) != len(pts):
        raise GeometryError("points are not distinct")
    Rp = inp.rays
    if not 3 <= Rp <= len(pts):
        raise GeometryError("ray count out of range")
    if inp.framing.denominator <= 0:
        raise GeometryError("framing denominator must be positive")
    hull = convex_hull(pts)
    if len(hull) < 3:
        raise GeometryError("polytope is not 2-dimensional")
    # completeness of the lattice point list
    xs, ys = [p[0] for p in pts], [p[1] for p in pts]
    have = set(pts)
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            if _in_hull(hull, (x, y)) and (x, y) not in have:
                raise MissingLatticePoint(f"lattice point {(x, y)} of the polytope is missing")
    # triangulation bookkeeping
    tris = []
    for t in inp.triangulation:
        if len(t) != 3 or len(set(t)) != 3 or not all(1 <= i <= Rp for i in t):
            raise NotATriangulation(f"bad triangle {t}")
        a2 = abs(_cross(pts[t[0] - 1], pts[t[1] - 1], pts[t[2] - 1]))
        if a2 == 0:
            raise NotATriangulation(f"degenerate triangle {t}")
        tris.append(tuple(sorted(t)))
    if len(set(tris)) != len(tris):
        raise NotATriangulation("repeated triangle")
    total = sum(abs(_cross(pts[t[0] - 1], pts[t[1] - 1], pts[t[2] - 1])) for t in tris)
    if total != polygon_area2(hull):
        raise NotATriangulation(f"triangle areas sum to {total}, polytope has {polygon_area2(hull)}")
    edges = {}
    for t in tris:
        for e in itertools.combinations(t, 2):
            edges.setdefault(e, []).append(t)
    for e, ts in edges.items():
        p, q = pts[e[0] - 1], pts[e[1] - 1]
        bnd = _on_hull_boundary(hull, p, q)
        if bnd and len(ts) != 1:
            raise NotATriangulation(f"boundary edge {e} in {len(ts)} triangles")
        if not bnd:
            if len(ts) != 2:
                raise NotATriangulation(f"interior edge {e} in {len(ts)} triangles")
            o1 = [i for i in ts[0] if i not in e][0]
            o2 = [i for i in ts[1] if i not in e][0]
            if _cross(p, q, pts[o1 - 1]) * _cross(p, q, pts[o2 - 1]) >= 0:
                raise NotATriangulation(f"triangles overlap along edge {e}")
    used = {i for t in tris for i in t}
    if used != set(range(1, Rp + 1)):
        raise NotATriangulation("some ray is not a vertex of the triangulation")
    return pts, hull, tris, edges


def _regularity(pts, tris, edges, Rp) -> bool:
    """Strict local-convexity height system (extra points must lie above)."""
    n = len(pts)
    rows = []
    for e, ts in edges.items():
        if len(ts) != 2:
            continue
        i, j = e
        k = [x for x in ts[0] if x not in e][0]
        l = [x for x in ts[1] if x not in e][0]
        rows.append(_fold_row(pts, (i, j, k), l, n))
    for p in range(Rp + 1, n + 1):
        for t in tris:
            if _point_in_triangle(pts, t, pts[p - 1]):
                rows.append(_fold_row(pts, t, p, n))
                break
    if not rows:
        return True
    return strict_homogeneous_feasible(rows)


def _point_in_triangle(pts, t, p):
    a, b, c = (pts[i - 1] for i in t)
    s = [_cross(a, b, p), _cross(b, c, p), _cross(c, a, p)]
    return all(x >= 0 for x in s) or all(x <= 0 for x in s)


def _fold_row(pts, tri, l, n):
    # h_l - (affine interpolation of h on tri at point l) > 0
    A = [[pts[i - 1][0] for i in tri], [pts[i - 1][1] for i in tri], [1, 1, 1]]
    target = [pts[l - 1][0], pts[l - 1][1], 1]
    lam = rational_solve(A, target)
    row = [Fraction(0)] * n
    row[l - 1] += 1
    for i, c in zip(tri, lam):
        row[i - 1] -= c
    return row


def normalize_flag(pts, tris, edge, inp_order=None):
    """Unimodular affine change of coordinates for the flag (edge, its triangle).

    Returns (labels, A, t) where labels = (i1, i2, i3) are input indices of
    b1, b2, b3 and the new coordinates are A (p - t).
    """
    e = tuple(sorted(edge))
    owners = [t for t in tris if set(e) <= set(t)]
    if len(owners) != 1:
        raise NotOuterBrane(f"edge {edge} lies in {len(owners)} triangles")
    t = owners[0]
    v = [i for i in t if i not in e][0]
    P, Q = e
    if _cross(pts[v - 1], pts[P - 1], pts[Q - 1]) > 0:
        i2, i3 = P, Q
    else:
        i2, i3 = Q, P
    p1, p2, p3 = pts[v - 1], pts[i2 - 1], pts[i3 - 1]
    ed = (p2[0] - p3[0], p2[1] - p3[1])
    g = gcd(*ed)
    prim = (ed[0] // g, ed[1] // g)
    # A0 with det 1 sending prim to (0, 1):  C = [w, prim] has det 1, A0 = [[0,1],[-1,0]] C^{-1}
    C = unimodular_complete(prim)          # first column prim
    C = [[C[0][1], C[0][0]], [C[1][1], C[1][0]]]  # columns (w, prim)
    if det(C) < 0:
        C = [[-C[0][0], C[0][1]], [-C[1][0], C[1][1]]]
    # C^{-1} for det 1
    Ci = [[C[1][1], -C[0][1]], [-C[1][0], C[0][0]]]
    A0 = Ci  # sends prim -> (0,1), w -> (1,0); det 1
    x, y = _apply(A0, (p1[0] - p3[0], p1[1] - p3[1]))
    assert x > 0, "orientation bookkeeping failed"
    s = (-y) % x
    k = (-y - s) // x
    shear = [[1, 0], [k, 1]]
    A = _mul2(shear, A0)
    return (v, i2, i3), A, p3, g


def _apply(A, p):
    return (A[0][0] * p[0] + A[0][1] * p[1], A[1][0] * p[0] + A[1][1] * p[1])


def _mul2(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2)] for i in range(2)]


def build_fan(inp: GeometryInput) -> StackyFan3:
    """Validate the input and normalize it to the preferred basis of the brane flag."""
    pts, hull, tris, edges = _validate(inp)
    Rp = inp.rays
    e = tuple(inp.brane_edge)
    if len(e) != 2 or not all(1 <= i <= Rp for i in e):
        raise NotOuterBrane("brane edge must be a pair of ray indices")
    key = tuple(sorted(e))
    if key not in edges:
        raise NotOuterBrane(f"brane edge {e} is not an edge of the triangulation")
    if len(edges[key]) != 1 or not _on_hull_boundary(hull, pts[key[0] - 1], pts[key[1] - 1]):
        raise NotOuterBrane(f"brane edge {e} is interior")
    (i1, i2, i3), A, t, mlen = normalize_flag(pts, tris, e)
    order = [i1, i2, i3] + [i for i in range(1, Rp + 1) if i not in (i1, i2, i3)] \
        + list(range(Rp + 1, len(pts) + 1))
    new_of = {old: new + 1 for new, old in enumerate(order)}
    b = []
    for old in order:
        p = pts[old - 1]
        q = _apply(A, (p[0] - t[0], p[1] - t[1]))
        b.append((q[0], q[1], 1))
    r, ms = b[0][0], b[0][1]
    m = b[1][1]
    assert b[2] == (0, 0, 1) and b[1][0] == 0 and m == mlen and 0 <= -ms < r
    cones3 = sorted(tuple(sorted(new_of[i] for i in tr)) for tr in tris)
    cones2 = sorted({tuple(sorted(c)) for tr in cones3 for c in itertools.combinations(tr, 2)})
    # ccw boundary cycle of rays in new coordinates
    newpts = [(v[0], v[1]) for v in b]
    nh = convex_hull(newpts)
    bnd = []
    n = len(nh)
    for k in range(n):
        a_, c_ = nh[k], nh[(k + 1) % n]
        on = [i for i in range(1, Rp + 1) if _cross(a_, c_, newpts[i - 1]) == 0
              and min(a_[0], c_[0]) <= newpts[i - 1][0] <= max(a_[0], c_[0])
              and min(a_[1], c_[1]) <= newpts[i - 1][1] <= max(a_[1], c_[1])]
        dx, dy = c_[0] - a_[0], c_[1] - a_[1]
        on.sort(key=lambda i: (newpts[i - 1][0] - a_[0]) * dx + (newpts[i - 1][1] - a_[1]) * dy)
        bnd.extend(on[:-1])
    regular = _regularity(newpts, [tuple(new_of[i] for i in tr) for tr in tris],
                          {tuple(sorted(new_of[i] for i in k)): [tuple(new_of[i] for i in tt) for tt in v]
                           for k, v in edges.items()}, Rp)
    if not regular:
        warnings.warn("triangulation is not regular (no strictly convex height function)",
                      IrregularTriangulationWarning)
    fan = StackyFan3(b=b, R=len(b), Rp=Rp, cones3=cones3, cones2=cones2, r=r, s=-ms, m=m,
                     boundary=bnd, perm=order, framing=inp.framing, regular=regular)
    _check_fan(fan)
    return fan


def _check_fan(fan: StackyFan3):
    b1, b2, b3 = fan.b[:3]
    assert b1 == (fan.r, -fan.s, 1) and b2 == (0, fan.m, 1) and b3 == (0, 0, 1)
    assert all(v[2] == 1 for v in fan.b)
    area = (b2[0] - b1[0]) * (b3[1] - b1[1]) - (b2[1] - b1[1]) * (b3[0] - b1[0])
    assert area > 0
    assert (1, 2, 3) in fan.cones3


def normalized_volume(fan: StackyFan3) -> int:
    return fan.normalized_volume()


def fan_summary(fan: StackyFan3) -> dict:
    return {"b": [list(v) for v in fan.b], "R": fan.R, "R_prime": fan.Rp,
            "r": fan.r, "s": fan.s, "m": fan.m, "cones": [list(c) for c in fan.cones3],
            "boundary_ccw": fan.boundary, "input_order": fan.perm, "regular": fan.regular,
            "volume": fan.normalized_volume()}
