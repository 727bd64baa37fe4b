"""Exact lattice and fan calculus for rational polyhedral fans of rank <= 4.

Vectors are tuples of ints. A :class:`Fan` stores its rays once and each cone
as a frozenset of ray indices; :class:`Cone` objects carry both generators and
facet inequalities, cross-checked on construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd

from . import snf
from .errors import (ConeNotInFan, InvalidFan, NonAdjacentRays, NotCompleteRank2,
                     RankUnsupported, ZeroVector)


def primitive(v):
    """Divide ``v`` by the gcd of its entries."""
    v = tuple(int(x) for x in v)
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise ZeroVector(f"zero vector {v} has no primitive direction")
    return tuple(x // g for x in v)


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def det2(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _kernel_in_span(rows, span_basis):
    """The 1-dimensional space of ``c @ span_basis`` orthogonal to ``rows``."""
    if not rows:
        # span has dimension 1
        return span_basis[0]
    a = [[dot(r, b) for b in span_basis] for r in rows]
    _, d, v, _ = snf.smith_normal_form(a)
    s = sum(1 for i in range(min(len(d), len(d[0]))) if d[i][i])
    if len(span_basis) - s != 1:
        return None
    c = [v[i][s] for i in range(len(span_basis))]
    return tuple(sum(c[k] * span_basis[k][j] for k in range(len(c)))
                 for j in range(len(span_basis[0])))


@dataclass(frozen=True)
class Cone:
    """A rational polyhedral cone given by primitive ray generators.

    ``facets`` holds inward normals ``n`` (``<n, x> >= 0`` on the cone) and
    ``equations`` spans the orthogonal complement of the linear span.
    """

    rays: tuple
    rank: int
    facets: tuple = field(init=False)
    equations: tuple = field(init=False)
    dim: int = field(init=False)

    def __post_init__(self):
        rays = tuple(primitive(r) for r in self.rays)
        if any(len(r) != self.rank for r in rays):
            raise InvalidFan("ray of the wrong length")
        object.__setattr__(self, "rays", rays)
        if self.rank > 4 or len(rays) > 12:
            raise RankUnsupported("brute-force duals need rank <= 4 and <= 12 rays")
        span, complement = snf.saturation_basis(rays, self.rank)
        dim = len(span)
        # equations: integer kernel of the span, i.e. vectors orthogonal to all rays
        eqs = _orthogonal_complement(span, self.rank)
        facets = []
        if dim > 0:
            for subset in itertools.combinations(rays, dim - 1):
                if dim > 1 and snf.rank([list(r) for r in subset]) != dim - 1:
                    continue
                n = _kernel_in_span(list(subset), span)
                if n is None or not any(n):
                    continue
                n = primitive(n)
                vals = [dot(n, r) for r in rays]
                if all(x >= 0 for x in vals):
                    pass
                elif all(x <= 0 for x in vals):
                    n = tuple(-x for x in n)
                else:
                    continue
                if n not in facets:
                    facets.append(n)
        object.__setattr__(self, "facets", tuple(sorted(facets)))
        object.__setattr__(self, "equations", tuple(eqs))
        object.__setattr__(self, "dim", dim)
        self._cross_validate()

    def _cross_validate(self):
        for r in self.rays:
            if not self.contains(r):
                raise InvalidFan(f"generator {r} violates a facet inequality")
        for n in self.facets:
            on = [r for r in self.rays if dot(n, r) == 0]
            if self.dim > 1 and snf.rank([list(r) for r in on]) != self.dim - 1:
                raise InvalidFan(f"facet normal {n} does not cut out a facet")
        if self.dim >= 1 and not self.facets and len(self.rays) > 0:
            raise InvalidFan("cone has generators but no facets (not pointed)")

    def contains(self, v):
        v = tuple(v)
        return (all(dot(e, v) == 0 for e in self.equations)
                and all(dot(n, v) >= 0 for n in self.facets))

    def in_span(self, v):
        return all(dot(e, v) == 0 for e in self.equations)

    def is_face_of(self, other):
        """True iff this cone is a face of ``other`` (both given by rays)."""
        if not set(self.rays) <= set(other.rays):
            return False
        if not self.rays:
            return True
        tight = [n for n in other.facets if all(dot(n, r) == 0 for r in self.rays)]
        face_rays = {r for r in other.rays if all(dot(n, r) == 0 for n in tight)}
        return face_rays == set(self.rays)

    def faces(self):
        """All faces as sets of rays, including the zero cone and the cone itself."""
        out = {frozenset(self.rays), frozenset()}
        for k in range(1, len(self.facets) + 1):
            for combo in itertools.combinations(self.facets, k):
                rs = frozenset(r for r in self.rays if all(dot(n, r) == 0 for n in combo))
                out.add(rs)
        return out

    def contains_strictly_convex(self):
        return all(any(dot(n, r) > 0 for n in self.facets) for r in self.rays)


def _orthogonal_complement(span, rank):
    if not span:
        return [tuple(int(i == j) for j in range(rank)) for i in range(rank)]
    _, d, v, _ = snf.smith_normal_form([list(r) for r in span])
    s = sum(1 for i in range(min(len(d), len(d[0]))) if d[i][i])
    return [tuple(v[i][j] for i in range(rank)) for j in range(s, rank)]


class Fan:
    """A finite face-closed collection of cones in ``Z^rank``."""

    def __init__(self, rank, rays, cones, check=True):
        self.rank = int(rank)
        self.rays = tuple(primitive(r) for r in rays)
        if len(set(self.rays)) != len(self.rays):
            raise InvalidFan("duplicate rays")
        if any(len(r) != self.rank for r in self.rays):
            raise InvalidFan("ray length differs from the fan rank")
        cone_sets = []
        for c in cones:
            s = frozenset(int(i) for i in c)
            if any(i < 0 or i >= len(self.rays) for i in s):
                raise InvalidFan(f"cone {sorted(s)} uses an unknown ray index")
            if s in cone_sets:
                raise InvalidFan(f"cone {sorted(s)} listed twice")
            cone_sets.append(s)
        if frozenset() not in cone_sets:
            cone_sets.append(frozenset())
        self.cones = tuple(sorted(cone_sets, key=lambda s: (len(s), sorted(s))))
        self._cone_objs = {s: Cone(tuple(self.rays[i] for i in sorted(s)), self.rank)
                           for s in self.cones}
        if check:
            self._check()

    def _check(self):
        for s in self.cones:
            c = self._cone_objs[s]
            if not c.contains_strictly_convex() and s:
                raise InvalidFan(f"cone {sorted(s)} is not strongly convex")
            for face in c.faces():
                idx = frozenset(self.rays.index(r) for r in face)
                if idx not in self._cone_objs:
                    raise InvalidFan(f"face {sorted(idx)} of cone {sorted(s)} missing")
        box = range(-3, 4)
        points = list(itertools.product(box, repeat=self.rank)) if self.rank <= 3 else []
        for a, b in itertools.combinations(self.cones, 2):
            common = a & b
            ca, cb = self._cone_objs[a], self._cone_objs[b]
            cc = self._cone_objs.get(common)
            if cc is None or not cc.is_face_of(ca) or not cc.is_face_of(cb):
                raise InvalidFan(f"cones {sorted(a)} and {sorted(b)} meet badly")
            for p in points:
                if ca.contains(p) and cb.contains(p) and not cc.contains(p):
                    raise InvalidFan(f"cones {sorted(a)} and {sorted(b)} overlap at {p}")

    def cone(self, s):
        s = frozenset(s)
        if s not in self._cone_objs:
            raise ConeNotInFan(f"no cone with rays {sorted(s)}")
        return self._cone_objs[s]

    def cone_index(self, rays):
        """Ray-index set of the cone spanned by the given primitive rays."""
        try:
            s = frozenset(self.rays.index(primitive(r)) for r in rays)
        except ValueError as exc:
            raise ConeNotInFan(str(exc)) from None
        if s not in self._cone_objs:
            raise ConeNotInFan(f"rays {rays} do not span a cone")
        return s

    def dim(self, s):
        return self.cone(s).dim

    def maximal_cones(self):
        return [s for s in self.cones if not any(s < t for t in self.cones)]

    def cones_of_dim(self, k):
        return [s for s in self.cones if self._cone_objs[s].dim == k]

    def is_face(self, a, b):
        return self.cone(a).is_face_of(self.cone(b))

    def containing(self, v):
        """Cones (as ray sets) that contain the lattice point ``v``."""
        return [s for s in self.cones if self._cone_objs[s].contains(v)]

    def minimal_cone(self, v):
        cs = self.containing(v)
        if not cs:
            return None
        return min(cs, key=len)

    def in_support(self, v):
        return bool(self.containing(v))

    def signature(self):
        """Canonical description: sorted rays and sorted cones as ray tuples."""
        return (self.rank, tuple(sorted(self.rays)),
                tuple(sorted(tuple(sorted(self.rays[i] for i in s)) for s in self.cones)))

    def __eq__(self, other):
        return isinstance(other, Fan) and self.signature() == other.signature()

    def __hash__(self):
        return hash(self.signature())

    def __repr__(self):
        return f"Fan(rank={self.rank}, rays={list(self.rays)}, cones={[sorted(s) for s in self.cones]})"


def apply_matrix(p, v):
    return tuple(dot(row, v) for row in p)


def quotient_fan(f, t):
    """Quotient of ``f`` by the cone ``t``; returns ``(fan, projection)``.

    The projection is an integer matrix onto ``M / <t>`` (saturated), and the
    cones of the result are the images of the cones of ``f`` having ``t`` as a face.
    """
    t = frozenset(t)
    tc = f.cone(t)
    proj = snf.quotient_projection([list(r) for r in tc.rays], f.rank)
    new_rank = f.rank - tc.dim
    images = []
    for s in f.cones:
        if not tc.is_face_of(f.cone(s)):
            continue
        rays = set()
        for i in s:
            w = apply_matrix(proj, f.rays[i])
            if any(w):
                rays.add(primitive(w))
        images.append(frozenset(rays))
    all_rays = sorted(set().union(*images)) if images else []
    cones = {frozenset(all_rays.index(r) for r in im) for im in images}
    return Fan(new_rank, all_rays, sorted(cones, key=lambda s: (len(s), sorted(s)))), proj


def _half(v):
    # 0 for angles in [0, pi), 1 for [pi, 2pi)
    x, y = v
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def angle_key_less(a, b):
    """Exact comparison of the counterclockwise angles of ``a`` and ``b`` in [0, 2pi)."""
    ha, hb = _half(a), _half(b)
    if ha != hb:
        return ha < hb
    return det2(a, b) > 0


def _sort_by_angle(vs):
    import functools

    def cmp(a, b):
        if a == b:
            return 0
        return -1 if angle_key_less(a, b) else 1
    return sorted(vs, key=functools.cmp_to_key(cmp))


class CompletenessResult:
    """Outcome of :func:`is_complete` with the kind of check that was run."""

    def __init__(self, complete, level):
        self.complete = complete
        self.level = level

    def __bool__(self):
        return self.complete

    def __repr__(self):
        return f"CompletenessResult({self.complete}, {self.level!r})"


def is_complete(f):
    """Decide completeness; rank 3 runs a partial (facet pairing) check."""
    if f.rank > 3:
        raise RankUnsupported(f"completeness for rank {f.rank} is not implemented")
    if f.rank == 0:
        return CompletenessResult(True, "exact")
    if f.rank == 1:
        return CompletenessResult(set(f.rays) == {(1,), (-1,)}, "exact")
    if f.rank == 2:
        return CompletenessResult(_complete_rank2(f), "exact")
    return CompletenessResult(_facet_pairing(f), "facet-pairing+connectedness")


def _complete_rank2(f):
    if len(f.rays) < 3:
        return False
    order = _sort_by_angle(list(f.rays))
    maxc = [s for s in f.cones if f.cone(s).dim == 2]
    if len(maxc) != len(order):
        return False
    for a, b in zip(order, order[1:] + order[:1]):
        if det2(a, b) <= 0:
            return False
        s = frozenset((f.rays.index(a), f.rays.index(b)))
        if s not in f.cones:
            return False
    return True


def _facet_pairing(f):
    maxc = [s for s in f.cones if f.cone(s).dim == f.rank]
    if not maxc or any(f.cone(s).dim != f.rank for s in f.maximal_cones()):
        return False
    count = {}
    adj = {s: set() for s in maxc}
    for s in maxc:
        c = f.cone(s)
        for n in c.facets:
            face = frozenset(i for i in s if dot(n, f.rays[i]) == 0)
            count.setdefault(face, []).append(s)
    for face, owners in count.items():
        if len(owners) != 2:
            return False
        a, b = owners
        adj[a].add(b)
        adj[b].add(a)
    seen = {maxc[0]}
    stack = [maxc[0]]
    while stack:
        s = stack.pop()
        for t in adj[s] - seen:
            seen.add(t)
            stack.append(t)
    return len(seen) == len(maxc)


def cyclic_ray_order(f):
    """Rays counterclockwise, starting at the lexicographically smallest one."""
    if f.rank != 2 or not _complete_rank2(f):
        raise NotCompleteRank2("cyclic order needs a complete rank-2 fan")
    order = _sort_by_angle(list(f.rays))
    k = order.index(min(order))
    return order[k:] + order[:k]


def primitive_normal(f, ray_i, ray_next):
    """Primitive ``d`` with ``<d, ray_i> = 0`` and ``<d, ray_next> > 0``."""
    order = cyclic_ray_order(f)
    ray_i, ray_next = primitive(ray_i), primitive(ray_next)
    if ray_i not in order or ray_next not in order:
        raise NonAdjacentRays(f"{ray_i} or {ray_next} is not a ray of the fan")
    k = order.index(ray_i)
    if order[(k + 1) % len(order)] != ray_next:
        raise NonAdjacentRays(f"{ray_next} does not follow {ray_i}")
    d = primitive((-ray_i[1], ray_i[0]))
    if dot(d, ray_next) < 0:
        d = (-d[0], -d[1])
    return d


def is_smooth(f):
    if f.rank != 2:
        raise RankUnsupported("is_smooth is implemented for rank 2")
    for s in f.cones:
        if len(s) == 2:
            a, b = (f.rays[i] for i in sorted(s))
            if abs(det2(a, b)) != 1:
                return False
    return True


def complete_fan_from_rays(rays):
    """The complete rank-2 fan whose maximal cones join angularly adjacent rays."""
    order = _sort_by_angle([primitive(r) for r in rays])
    n = len(order)
    cones = [(i,) for i in range(n)] + [(i, (i + 1) % n) for i in range(n)]
    return Fan(2, order, cones)


def complete_rank1():
    return Fan(1, [(1,), (-1,)], [(0,), (1,)])


def zero_fan():
    return Fan(0, [], [])
