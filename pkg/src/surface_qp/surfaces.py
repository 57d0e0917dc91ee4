"""Fundamental polygon model of a bordered surface of genus g with b boundary
components, cut along the standard generator system.

The polygon has N = 1 + 3(b-1) + 4g sides read counterclockwise in the order

    beta_1, alpha_2, beta_2, alpha_2^-1, ..., alpha_b, beta_b, alpha_b^-1,
    gamma_1, delta_1, gamma_1^-1, delta_1^-1, ..., delta_g^-1

with the beta sides free (boundary) and the others glued in inverse pairs.
Vertices are exact rational approximations of the regular N-gon; convexity is
checked exactly, and all downstream geometry is exact on these vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import math
from typing import Dict, List, Optional, Tuple

from .geometry import Point, centroid, cross, dot, lerp, orient, sub
from .words import Word, generator_endpoints

VERTEX_DENOM = 1 << 20


@dataclass(frozen=True)
class SurfaceSpec:
    genus: int
    boundary_count: int

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError("genus must be non-negative")
        if self.boundary_count < 1:
            raise ValueError("need at least one boundary component")

    @property
    def is_disk(self) -> bool:
        return self.genus == 0 and self.boundary_count == 1

    @property
    def n_sides(self) -> int:
        return 1 + 3 * (self.boundary_count - 1) + 4 * self.genus

    @property
    def rank(self) -> int:
        """Number of free groupoid generators (= coordinate slots)."""
        return 2 * (self.boundary_count - 1) + 2 * self.genus

    def word(self, text: str) -> Word:
        return Word.from_string(text, self.genus, self.boundary_count)

    def make_word(self, letters) -> Word:
        return Word.make(letters, self.genus, self.boundary_count)


def side_labels(spec: SurfaceSpec) -> List[Tuple[str, int]]:
    labels: List[Tuple[str, int]] = [("B1", 1)]
    for i in range(2, spec.boundary_count + 1):
        labels += [("A%d" % i, 1), ("B%d" % i, 1), ("A%d" % i, -1)]
    for j in range(1, spec.genus + 1):
        c, d = "C%d" % j, "D%d" % j
        labels += [(c, 1), (d, 1), (c, -1), (d, -1)]
    return labels


@dataclass(frozen=True)
class Side:
    index: int
    label: Tuple[str, int]
    start: int
    end: int
    partner: Optional[int]  # None for boundary sides


@dataclass
class PolygonModel:
    spec: SurfaceSpec
    vertices: List[Point]
    sides: List[Side]
    corner_word: List[Word]
    corner_marked: List[int]
    links: Dict[int, List[int]]          # marked point -> corners in ccw link order
    link_pos: Dict[int, Tuple[int, int]]  # corner -> (marked point, position)
    letter_to_side: Dict[Tuple[str, int], int]
    center: Point = field(default=None)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def side_vec(self, k: int) -> Point:
        s = self.sides[k]
        return sub(self.vertices[s.end], self.vertices[s.start])

    def side_point(self, k: int, t) -> Point:
        s = self.sides[k]
        return lerp(self.vertices[s.start], self.vertices[s.end], t)

    def side_param(self, k: int, p: Point) -> Fraction:
        s = self.sides[k]
        d = self.side_vec(k)
        return dot(sub(p, self.vertices[s.start]), d) / dot(d, d)

    def identify(self, k: int, p: Point) -> Point:
        """Carry a point on glued side k to the partner side (t -> 1-t)."""
        s = self.sides[k]
        if s.partner is None:
            raise ValueError("side %d is a boundary side" % k)
        t = self.side_param(k, p)
        return self.side_point(s.partner, 1 - t)

    def transition(self, k: int) -> Word:
        """Groupoid word picked up when a diagram exits through glued side k."""
        s = self.sides[k]
        if s.partner is None:
            raise ValueError("cannot cross a boundary side")
        p = self.sides[s.partner]
        return self.corner_word[s.start].concat(self.corner_word[p.end].inverse())

    def wedge_contains(self, c: int, v: Point) -> bool:
        """Does direction v at corner c point strictly into the polygon?"""
        n = self.n
        e_out = sub(self.vertices[(c + 1) % n], self.vertices[c])
        e_in = sub(self.vertices[(c - 1) % n], self.vertices[c])
        return cross(e_out, v) > 0 and cross(v, e_in) > 0


def _regular_vertices(n: int) -> List[Point]:
    verts = []
    for k in range(n):
        ang = 2.0 * math.pi * k / n + 0.5 / n
        x = Fraction(round(math.cos(ang) * VERTEX_DENOM), VERTEX_DENOM)
        y = Fraction(round(math.sin(ang) * VERTEX_DENOM), VERTEX_DENOM)
        verts.append((x, y))
    for k in range(n):
        if orient(verts[k], verts[(k + 1) % n], verts[(k + 2) % n]) <= 0:
            raise ValueError("rational polygon approximation not strictly convex")
    return verts


def polygon_model(spec: SurfaceSpec) -> PolygonModel:
    if spec.is_disk:
        return PolygonModel(spec, [], [], [], [1], {1: []}, {}, {})
    labels = side_labels(spec)
    n = len(labels)
    verts = _regular_vertices(n)

    partner: List[Optional[int]] = [None] * n
    where: Dict[Tuple[str, int], int] = {}
    for k, lab in enumerate(labels):
        where[lab] = k
    for k, (sym, sgn) in enumerate(labels):
        if sym.startswith("B"):
            continue
        partner[k] = where[(sym, -sgn)]
    sides = [Side(k, labels[k], k, (k + 1) % n, partner[k]) for k in range(n)]

    g, b = spec.genus, spec.boundary_count
    cw = [Word.make([], g, b)]
    marked = [1]
    for k in range(n - 1):
        cw.append(cw[-1].concat(Word.make([labels[k]], g, b)))
        sym, sgn = labels[k]
        s, t = generator_endpoints(sym)
        if sgn == -1:
            s, t = t, s
        marked.append(t)
    closing = cw[-1].concat(Word.make([labels[n - 1]], g, b))
    if len(closing.letters):
        raise AssertionError("polygon boundary word does not reduce to identity")

    links: Dict[int, List[int]] = {}
    link_pos: Dict[int, Tuple[int, int]] = {}
    starts = [c for c in range(n) if sides[c].partner is None]
    seen = set()
    for c0 in starts:
        p = marked[c0]
        chain = [c0]
        c = c0
        for _ in range(n):
            inc = sides[(c - 1) % n]
            if inc.partner is None:
                break
            c = sides[inc.partner].start
            chain.append(c)
        else:
            raise AssertionError("vertex link walk did not terminate")
        links[p] = chain
        for pos, c in enumerate(chain):
            link_pos[c] = (p, pos)
        seen.update(chain)
    if len(seen) != n or any(marked[c] != pp for c, (pp, _) in link_pos.items()):
        raise AssertionError("vertex links do not partition the polygon corners")

    return PolygonModel(spec, verts, sides, cw, marked, links, link_pos, dict(where),
                        center=centroid(verts))


@dataclass(frozen=True)
class Piece:
    """One factor of the canonical splitting: an annulus or one-holed torus."""
    kind: str            # "annulus" | "torus"
    index: int           # boundary index i (annulus) or handle index j (torus)
    spec: SurfaceSpec
    slots: Tuple[str, str]  # coordinate slot names, in (a, b) order

    def coordinate_map(self) -> Dict[str, str]:
        """Rep-space coordinates in terms of the piece's double coordinates."""
        if self.kind == "annulus":
            i = self.index
            return {"u%d" % i: "a", "v%d" % i: "b a"}
        return {"a%d" % self.index: "a", "b%d" % self.index: "b"}


def split_canonical(spec: SurfaceSpec) -> List[Piece]:
    """Split into b-1 annuli and g one-holed tori, in fusion order."""
    if spec.is_disk:
        raise ValueError("disk admits no canonical splitting")
    pieces = []
    for i in range(2, spec.boundary_count + 1):
        pieces.append(Piece("annulus", i, SurfaceSpec(0, 2), ("A%d" % i, "B%d" % i)))
    for j in range(1, spec.genus + 1):
        pieces.append(Piece("torus", j, SurfaceSpec(1, 1), ("C%d" % j, "D%d" % j)))
    return pieces
