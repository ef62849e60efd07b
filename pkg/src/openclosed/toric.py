"""Simplicial fan bookkeeping shared by the 3- and 4-dimensional geometries."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .lattice import rational_inverse
from .open_geometry import box_elements, lattice_index


@dataclass
class ToricFan:
    """Vectors b_i (1-based labels) and maximal simplicial cones."""

    vectors: dict          # label -> integer tuple
    maxcones: list         # sorted label tuples
    rays: tuple            # labels that are rays of the fan

    @property
    def dim(self) -> int:
        return len(next(iter(self.vectors.values())))

    def order(self, cone) -> int:
        if not cone:
            return 1
        return lattice_index([self.vectors[i] for i in cone])

    def box(self, cone):
        return box_elements([self.vectors[i] for i in cone], list(cone))

    @cached_property
    def faces(self) -> list:
        out = set()
        for c in self.maxcones:
            for k in range(len(c) + 1):
                out.update(itertools.combinations(c, k))
        return sorted(out, key=lambda t: (len(t), t))

    @cached_property
    def boundary_faces(self) -> set:
        """Faces lying in the boundary of the support (non-compact orbit closures)."""
        d = self.dim
        count = {}
        for c in self.maxcones:
            for f in itertools.combinations(c, d - 1):
                count[f] = count.get(f, 0) + 1
        walls = [f for f, k in count.items() if k == 1]
        out = set()
        for w in walls:
            for k in range(len(w) + 1):
                out.update(itertools.combinations(w, k))
        return out

    def is_compact(self, cone) -> bool:
        return tuple(sorted(cone)) not in self.boundary_faces

    def cones_containing(self, cone):
        s = set(cone)
        return [c for c in self.maxcones if s <= set(c)]

    def weights(self, cone) -> dict:
        """Dual basis w_i in M_Q with <w_i, b_j> = delta_ij over the maximal cone."""
        B = [list(self.vectors[i]) for i in cone]       # rows b_j
        Binv = rational_inverse(B)                       # B Binv = I
        # w_i = column i of Binv, as a vector in M (coordinates dual to N)
        return {i: tuple(Binv[k][col] for k in range(len(cone)))
                for col, i in enumerate(cone)}

    @cached_property
    def box_index(self) -> dict:
        """Every box element (as a lattice vector) -> (minimal cone, element)."""
        out = {}
        for c in self.maxcones:
            for e in self.box(c):
                out.setdefault(e.v, e)
        return out

    def minimal_cone_of(self, v):
        e = self.box_index[tuple(v)]
        return e.cone

    def coefficients_in(self, v, cone) -> dict:
        """Coordinates of the vector v in terms of the generators of ``cone``."""
        B = [list(self.vectors[i]) for i in cone]
        Binv = rational_inverse(B)
        # v = sum c_j b_j  ->  c = v Binv (row vector times matrix)
        return {i: sum(Fraction(v[k]) * Binv[k][col] for k in range(len(v)))
                for col, i in enumerate(cone)}
