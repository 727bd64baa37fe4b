"""Stanley-Reisner arithmetic, toric face restriction, kinks and monoid presentations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import (FanMismatch, MonomialUnsupported, NotAFace, NotPiecewiseLinear,
                     NotPointed)
from .lattice import Cone, det2, dot, primitive


# --- Stanley-Reisner ring ----------------------------------------------------

class SRElement:
    """Element of ``Q[fan]``: a finite sum of ``c * z^m`` with each ``m`` in ``|fan|``."""

    def __init__(self, fan, terms=None):
        self.fan = fan
        clean = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if not fan.in_support(m):
                raise MonomialUnsupported(f"exponent {m} lies outside the fan support")
            c = Fraction(c)
            if c:
                clean[m] = clean.get(m, 0) + c
                if not clean[m]:
                    del clean[m]
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def one(cls, fan):
        return cls(fan, {(0,) * fan.rank: 1})

    @classmethod
    def monomial(cls, fan, m, c=1):
        return cls(fan, {tuple(m): c})

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if self.fan != other.fan:
            raise FanMismatch("operands live over different fans")
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return SRElement(self.fan, out)

    def __mul__(self, other):
        return sr_product(self.fan, self, other)

    def __eq__(self, other):
        return isinstance(other, SRElement) and self.fan == other.fan and self.terms == other.terms

    def __repr__(self):
        return f"SRElement({self.terms})"


def sr_multiply(f, m1, m2):
    """``z^m1 * z^m2``: the monomial ``z^(m1+m2)`` if one cone holds both, else 0."""
    m1, m2 = tuple(m1), tuple(m2)
    c1 = set(f.containing(m1))
    if not c1:
        raise MonomialUnsupported(f"{m1} lies outside the fan support")
    c2 = set(f.containing(m2))
    if not c2:
        raise MonomialUnsupported(f"{m2} lies outside the fan support")
    if c1 & c2:
        return SRElement.monomial(f, tuple(x + y for x, y in zip(m1, m2)))
    return SRElement(f)


def sr_product(f, a, b):
    if a.fan != f or b.fan != f:
        raise FanMismatch("operands live over different fans")
    out = {}
    for m1, c1 in a.terms.items():
        for m2, c2 in b.terms.items():
            prod = sr_multiply(f, m1, m2)
            for m, c in prod.terms.items():
                out[m] = out.get(m, 0) + c1 * c2 * c
    return SRElement(f, out)


# --- restriction to toric strata ---------------------------------------------

def orthant(n, coords=None):
    """The cone spanned by the unit vectors with indices in ``coords`` (default all)."""
    coords = range(n) if coords is None else coords
    return Cone(tuple(tuple(int(i == j) for j in range(n)) for i in coords), n)


def face_restrict(p, face, chart, chart_variables=None):
    """Keep the terms of ``p`` whose chart exponent lies in the span of ``face``.

    ``chart_variables`` names the coordinates of the cones' lattice inside
    ``p.variables``; any other variable (a symbolic coefficient) is carried along.
    """
    if not face.is_face_of(chart):
        raise NotAFace("face is not a face of the chart cone")
    names = tuple(chart_variables) if chart_variables is not None else p.variables
    if len(names) != chart.rank:
        raise ValueError("chart variables do not match the cone rank")
    q = p.with_variables(tuple(names) + tuple(v for v in p.variables if v not in names))
    k = len(names)
    for e in q.terms:
        if not chart.contains(e[:k]):
            raise MonomialUnsupported(f"term with exponent {e[:k]} is not supported on the chart")
    return q.truncate(lambda e: face.in_span(e[:k]))


def restrict_to_coordinates(p, chart_variables, keep):
    """Restrict a polynomial on the affine chart ``chart_variables`` to the
    coordinate stratum where every variable outside ``keep`` vanishes.

    The result no longer mentions the vanishing chart variables.
    """
    chart_variables = tuple(chart_variables)
    keep_idx = [i for i, v in enumerate(chart_variables) if v in set(keep)]
    n = len(chart_variables)
    r = face_restrict(p, orthant(n, keep_idx), orthant(n), chart_variables)
    dropped = [v for v in chart_variables if v not in set(keep)]
    return r.with_variables([v for v in r.variables if v not in dropped])


# --- piecewise linear functions and kinks ------------------------------------

def _solve_affine(points, values):
    """Affine ``(a1, a2, b)`` with ``a.p + b = value`` on every point, or None."""
    pts = list(points)
    base = None
    for i, j, k in itertools.combinations(range(len(pts)), 3):
        if det2(tuple(x - y for x, y in zip(pts[j], pts[i])),
                tuple(x - y for x, y in zip(pts[k], pts[i]))) != 0:
            base = (i, j, k)
            break
    if base is None:
        raise NotPiecewiseLinear("face has no three affinely independent vertices")
    i, j, k = base
    (x0, y0), (x1, y1), (x2, y2) = pts[i], pts[j], pts[k]
    v0, v1, v2 = (Fraction(values[t]) for t in base)
    det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)
    a1 = ((v1 - v0) * (y2 - y0) - (v2 - v0) * (y1 - y0)) / det
    a2 = ((x1 - x0) * (v2 - v0) - (x2 - x0) * (v1 - v0)) / det
    b = v0 - a1 * x0 - a2 * y0
    for p, v in zip(pts, values):
        if a1 * p[0] + a2 * p[1] + b != v:
            return None
    return (a1, a2, b)


def _solve_linear(r1, r2, v1, v2):
    det = det2(r1, r2)
    a1 = Fraction(v1 * r2[1] - v2 * r1[1], det)
    a2 = Fraction(r1[0] * v2 - r2[0] * v1, det)
    return (a1, a2, Fraction(0))


@dataclass
class PLFunction:
    """Integral piecewise linear function on a 2D polyhedral complex or rank-2 fan.

    ``faces`` are vertex-index tuples (complex) or ray-index pairs (fan);
    ``representatives`` maps each face to its affine function ``(a1, a2, b)``.
    """

    kind: str
    points: tuple
    faces: tuple
    values: tuple
    representatives: dict

    @classmethod
    def from_complex(cls, vertices, faces, values):
        vertices = tuple(tuple(v) for v in vertices)
        faces = tuple(tuple(f) for f in faces)
        reps = {}
        for f in faces:
            rep = _solve_affine([vertices[i] for i in f], [values[i] for i in f])
            if rep is None:
                raise NotPiecewiseLinear(f"values on face {f} are not affine")
            reps[f] = rep
        pl = cls("complex", vertices, faces, tuple(values), reps)
        pl._check_edges()
        return pl

    @classmethod
    def from_fan(cls, fan, values):
        """``values`` maps each ray generator to an integer."""
        from .lattice import cyclic_ray_order
        order = cyclic_ray_order(fan)
        vals = tuple(values[r] for r in order)
        faces = tuple((i, (i + 1) % len(order)) for i in range(len(order)))
        reps = {f: _solve_linear(order[f[0]], order[f[1]], vals[f[0]], vals[f[1]]) for f in faces}
        return cls("fan", tuple(order), faces, vals, reps)

    def _check_edges(self):
        for e in self.interior_walls():
            p, q = self._adjacent(e)
            for v in e:
                pt = self.points[v]
                if _evaluate(self.representatives[p], pt) != _evaluate(self.representatives[q], pt):
                    raise NotPiecewiseLinear(f"faces {p} and {q} disagree on edge {e}")

    def edges_of(self, face):
        if self.kind == "fan":
            return [(face[0],), (face[1],)]
        n = len(face)
        return [tuple(sorted((face[i], face[(i + 1) % n]))) for i in range(n)]

    def interior_walls(self):
        counts = {}
        for f in self.faces:
            for e in self.edges_of(f):
                counts.setdefault(e, []).append(f)
        return sorted(e for e, fs in counts.items() if len(fs) == 2)

    def _adjacent(self, wall):
        wall = tuple(sorted(wall)) if self.kind == "complex" else tuple(wall)
        fs = [f for f in self.faces if wall in self.edges_of(f)]
        if len(fs) != 2:
            raise NotPiecewiseLinear(f"{wall} is not an interior wall")
        return fs[0], fs[1]

    def wall_by_points(self, a, b=None):
        """Wall index tuple from vertex coordinates (complex) or a ray (fan)."""
        if self.kind == "fan":
            return (self.points.index(primitive(a)),)
        return tuple(sorted((self.points.index(tuple(a)), self.points.index(tuple(b)))))


def _evaluate(rep, p):
    return rep[0] * p[0] + rep[1] * p[1] + rep[2]


def _face_interior_point(pl, face, wall):
    # a vertex/ray of the face that is off the wall line
    for i in face:
        if i not in wall:
            return pl.points[i]
    raise NotPiecewiseLinear("degenerate face")


def kink(pl, wall):
    """Integer ``k`` with ``n' - n = k * delta`` across an interior wall.

    ``delta`` is the primitive integral affine function vanishing on the wall
    and positive on the second face; the value does not depend on the order.
    """
    if pl.kind == "complex":
        wall = tuple(sorted(wall))
    p, q = pl._adjacent(wall)
    n, n2 = pl.representatives[p], pl.representatives[q]
    if pl.kind == "complex":
        a, b = (pl.points[i] for i in wall)
        normal = primitive((-(b[1] - a[1]), b[0] - a[0]))
        const = -dot(normal, a)
    else:
        normal = primitive((-pl.points[wall[0]][1], pl.points[wall[0]][0]))
        const = 0
    probe = _face_interior_point(pl, q, wall)
    if dot(normal, probe) + const < 0:
        normal = (-normal[0], -normal[1])
        const = -const
    diff = tuple(x - y for x, y in zip(n2, n))
    if normal[0]:
        k = diff[0] / normal[0]
    else:
        k = diff[1] / normal[1]
    if diff != (k * normal[0], k * normal[1], k * const):
        raise NotPiecewiseLinear(f"difference across {wall} is not a multiple of the wall function")
    return int(k) if k.denominator == 1 else k


def is_strictly_convex(pl):
    walls = pl.interior_walls()
    return bool(walls) and all(kink(pl, w) > 0 for w in walls)


# --- monoid presentations ----------------------------------------------------

def _in_sublattice(m, congruences):
    return all(dot(f, m) % mod == 0 for mod, f in congruences)


def sublattice_index(rank, congruences):
    if not congruences:
        return 1
    n = 1
    for mod, _ in congruences:
        n = n * mod // gcd(n, mod)
    count = sum(1 for m in itertools.product(range(n), repeat=rank)
                if _in_sublattice(m, congruences))
    return n ** rank // count


@dataclass
class MonoidPresentation:
    generators: list
    relations: list  # pairs of exponent vectors over the generators

    def binomials(self, names=None):
        """Relations as strings ``lhs - rhs``; names default to x0, x1, ..."""
        names = names or [f"x{i}" for i in range(len(self.generators))]

        def mono(e):
            parts = [n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k]
            return "*".join(parts) or "1"
        return [f"{mono(a)} - {mono(b)}" for a, b in self.relations]


def monoid_presentation(cone, congruences):
    """Hilbert basis of ``cone & L`` and its minimal binomial relations.

    ``L`` is cut out by ``<f, m> = 0 mod modulus`` for each ``(modulus, f)``.
    The search box is ``index * sum |g|`` over the primitive ray generators.
    """
    if cone.dim == 0 or not cone.contains_strictly_convex():
        raise NotPointed("cone must be pointed and nonzero")
    congruences = [(int(mod), tuple(f)) for mod, f in congruences]
    r = cone.rank
    index = sublattice_index(r, congruences)
    bound = [index * sum(abs(g[j]) for g in cone.rays) for j in range(r)]
    pts = [m for m in itertools.product(*(range(-b, b + 1) for b in bound))
           if any(m) and cone.contains(m) and _in_sublattice(m, congruences)]
    pts.sort(key=lambda m: (sum(abs(x) for x in m), m))
    pset = set(pts)
    hilbert = []
    for m in pts:
        if not any(tuple(x - y for x, y in zip(m, h)) in pset for h in hilbert):
            hilbert.append(m)
    extremal = [h for h in hilbert if any(primitive(h) == g for g in cone.rays)]
    rest = [h for h in hilbert if h not in extremal]
    gens = sorted(extremal, reverse=True) + sorted(rest, reverse=True)
    max_deg = 2 * index
    k = len(gens)
    by_value = {}
    for total in range(1, max_deg + 1):
        for combo in itertools.combinations_with_replacement(range(k), total):
            e = [0] * k
            for i in combo:
                e[i] += 1
            val = tuple(sum(e[i] * gens[i][j] for i in range(k)) for j in range(r))
            by_value.setdefault(val, []).append(tuple(e))
    candidates = []
    for exps in by_value.values():
        for a, b in itertools.combinations(sorted(exps), 2):
            if all(not (x and y) for x, y in zip(a, b)):
                if sum(a) > sum(b) or (sum(a) == sum(b) and a < b):
                    a, b = b, a
                candidates.append((a, b))
    candidates.sort(key=lambda ab: (sum(ab[0]) + sum(ab[1]), ab))
    relations = []
    for a, b in candidates:
        dominated = any(
            (all(x <= y for x, y in zip(a2, a)) and all(x <= y for x, y in zip(b2, b)))
            or (all(x <= y for x, y in zip(a2, b)) and all(x <= y for x, y in zip(b2, a)))
            for a2, b2 in relations)
        if not dominated:
            relations.append((a, b))
    return MonoidPresentation(gens, relations)


def generated_by(points, generators, bound):
    """True iff every point is an N-combination of ``generators`` (brute force)."""
    reachable = {tuple(0 for _ in generators[0])}
    frontier = list(reachable)
    limit = set(points)
    while frontier:
        nxt = []
        for p in frontier:
            for g in generators:
                q = tuple(x + y for x, y in zip(p, g))
                if q not in reachable and all(abs(x) <= b for x, b in zip(q, bound)):
                    reachable.add(q)
                    nxt.append(q)
        frontier = nxt
    return limit <= reachable
