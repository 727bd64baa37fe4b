"""The stratified-space model: strata, fan sheaf, generization maps and divisor system.

A :class:`GtcSpace` is a finite poset of strata. Each stratum carries a complete
fan of rank equal to its codimension (cones live on the character side, so a
larger cone is a larger, more generic stratum). For every comparable pair
``lower < upper`` we store the cone of ``Sigma_lower`` naming ``upper`` and the
projection ``M_lower -> M_upper``. The divisor system assigns to each component
and each stratum below it a linear map from characters to formal divisors on
the component, given by its values on generators of the component's cone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import jsonio, qlinalg, snf
from .divisors import DivisorClass
from .errors import (FanSheafError, InvalidFan, LogtcError, NoSuchStratum, NotAComplex,
                     NotInCone, RankUnsupported, SchemaError)
from .lattice import Fan, det2, dot, is_complete, primitive, zero_fan
from .polynomial import format_fraction

SCHEMA = "logtc-gtc/1"


@dataclass(frozen=True)
class Stratum:
    id: str
    codim: int
    fan: Fan
    chart_vars: tuple = ()

    def __post_init__(self):
        if self.fan.rank != self.codim:
            raise FanSheafError(f"stratum {self.id}: fan rank {self.fan.rank} != codim {self.codim}")

    @property
    def chart_lattice(self):
        """Character lattice of the stratum's toric chart, named by its coordinates."""
        return self.chart_vars


@dataclass(frozen=True)
class Generization:
    cone: frozenset
    projection: tuple  # rows of an integer matrix M_lower -> M_upper


@dataclass(frozen=True)
class DivisorMap:
    """Values of ``mu`` on generators ``m`` of a component's cone at a stratum."""

    component: str
    stratum: str
    values: tuple  # of (m, DivisorClass)

    @cached_property
    def names(self):
        return sorted({n for _, d in self.values for n in d.entries})

    @cached_property
    def matrix(self):
        """Rows indexed by ``names``: the linear extension of mu, or None."""
        if not self.values:
            return None
        ms = [list(m) for m, _ in self.values]
        imgs = [[d.mult(n) for n in self.names] for _, d in self.values]
        return qlinalg.solve_linear_map(ms, imgs)

    def evaluate(self, m):
        if self.matrix is None:
            raise FanSheafError(f"divisor data of {self.component} at {self.stratum} is not linear")
        vals = qlinalg.apply(self.matrix, m)
        return DivisorClass(self.component, dict(zip(self.names, vals)))


@dataclass(frozen=True)
class NormalBundle:
    trivial: bool = False
    degree: Fraction | None = None


@dataclass(frozen=True)
class Exceptional:
    """An exceptional divisor registered by a blow-up.

    ``kind`` is "center" for the divisor over a blown-up piece of a wall's
    vanishing locus and "induced" for the exceptional curve cut on another wall
    where the center crosses a joint. ``points`` lists ``(joint, point label)``
    pairs where the center meets joints; ``degree`` is the degree of the piece.
    """

    name: str
    component: str
    wall: str
    kind: str
    factor: str
    points: tuple = ()
    degree: int = 1


@dataclass(frozen=True, eq=False)
class GtcSpace:
    dimension: int
    strata: tuple
    poset: frozenset  # strict relations (lower, upper), transitively closed
    generization: dict
    divisor_data: dict  # (component, stratum) -> DivisorMap
    normal_bundles: dict = field(default_factory=dict)  # (component, wall) -> NormalBundle
    name: str = ""
    exceptionals: tuple = ()
    annotations: dict = field(default_factory=dict)

    def __post_init__(self):
        ids = [s.id for s in self.strata]
        if len(set(ids)) != len(ids):
            raise FanSheafError("duplicate stratum ids")

    @cached_property
    def by_id(self):
        return {s.id: s for s in self.strata}

    def stratum(self, sid):
        if isinstance(sid, Stratum):
            sid = sid.id
        try:
            return self.by_id[sid]
        except KeyError:
            raise NoSuchStratum(f"unknown stratum {sid!r}") from None

    def le(self, a, b):
        a, b = self.stratum(a).id, self.stratum(b).id
        return a == b or (a, b) in self.poset

    def of_codim(self, c):
        return [s for s in self.strata if s.codim == c]

    @property
    def components(self):
        return self.of_codim(0)

    @property
    def walls(self):
        return self.of_codim(1)

    @property
    def joints(self):
        return self.of_codim(2)

    def above(self, sid):
        sid = self.stratum(sid).id
        return [s for s in self.strata if (sid, s.id) in self.poset]

    def below(self, sid):
        sid = self.stratum(sid).id
        return [s for s in self.strata if (s.id, sid) in self.poset]

    def adjacent_components(self, wall):
        return sorted(s.id for s in self.above(wall) if s.codim == 0)

    def cone_of(self, lower, upper):
        """Ray-index set of the cone of ``Sigma_lower`` naming ``upper``."""
        lower, upper = self.stratum(lower).id, self.stratum(upper).id
        if lower == upper:
            return frozenset()
        g = self.generization.get((lower, upper))
        if g is None:
            raise NoSuchStratum(f"{upper} is not above {lower}")
        return g.cone

    def cone_obj(self, lower, upper):
        return self.stratum(lower).fan.cone(self.cone_of(lower, upper))

    def projection(self, lower, upper):
        lower, upper = self.stratum(lower).id, self.stratum(upper).id
        if lower == upper:
            n = self.stratum(lower).codim
            return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        return self.generization[(lower, upper)].projection

    def ray_of(self, joint, wall):
        """The ray of ``Sigma_joint`` naming ``wall``."""
        (i,) = self.cone_of(joint, wall)
        return self.stratum(joint).fan.rays[i]

    def wall_of_ray(self, joint, ray):
        ray = primitive(ray)
        for s in self.above(joint):
            if s.codim == self.stratum(joint).codim - 1 and self.ray_of(joint, s.id) == ray:
                return s.id
        raise NoSuchStratum(f"no stratum above {joint} for ray {ray}")

    def component_at(self, joint, cone):
        cone = frozenset(cone)
        for s in self.above(joint):
            if s.codim == 0 and self.cone_of(joint, s.id) == cone:
                return s.id
        raise NoSuchStratum(f"no component above {joint} for cone {sorted(cone)}")

    def normal_bundle(self, component, wall):
        return self.normal_bundles.get((component, wall))

    def replace(self, **changes):
        data = dict(dimension=self.dimension, strata=self.strata, poset=self.poset,
                    generization=self.generization, divisor_data=self.divisor_data,
                    normal_bundles=self.normal_bundles, name=self.name,
                    exceptionals=self.exceptionals, annotations=self.annotations)
        data.update(changes)
        return GtcSpace(**data)


def open_star(space, s):
    """All strata ``t >= s``, including ``s`` itself."""
    sid = space.stratum(s).id
    return {t.id for t in space.strata if space.le(sid, t.id)}


def _closure(pairs):
    rel = set(pairs)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(rel), repeat=2):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    return frozenset(rel)


# ---------------------------------------------------------------------------
# divisor system queries


def _default_stratum(space, component, m):
    comp = space.stratum(component)
    cands = [t.id for t in space.below(comp.id) if t.codim == len(m)
             and (comp.id, t.id) in space.divisor_data]
    if len(cands) != 1:
        raise NoSuchStratum(f"{len(cands)} strata of codim {len(m)} carry divisor data for "
                            f"{comp.id}; pass `at`")
    return cands[0]


def divisor_of_character(space, component, m, at=None):
    """Linear extension of ``mu`` to all of ``M_at``; may be non-effective."""
    comp = space.stratum(component).id
    at = _default_stratum(space, comp, m) if at is None else space.stratum(at).id
    dm = space.divisor_data.get((comp, at))
    if dm is None:
        raise NoSuchStratum(f"no divisor data for {comp} at {at}")
    m = tuple(m)
    if len(m) != space.stratum(at).codim:
        raise NotInCone(f"{m} has the wrong rank for {at}")
    return dm.evaluate(m)


def divisor_of_monomial(space, component, m, at=None):
    """The effective divisor ``mu(m)`` of a character ``m`` in the component's cone."""
    comp = space.stratum(component).id
    at = _default_stratum(space, comp, m) if at is None else space.stratum(at).id
    cone = space.cone_obj(at, comp)
    if len(tuple(m)) != cone.rank or not cone.contains(tuple(m)):
        raise NotInCone(f"{tuple(m)} is not in the cone of {comp} at {at}")
    return divisor_of_character(space, comp, m, at)


def intersection_at(space, joint, wall_a, wall_b):
    """Intersection number of two walls inside a component near a codim-2 joint.

    Both are boundary divisors of the component's toric chart at the joint,
    whose cone has rays ``u_a, u_b``; the number is ``1/|det(u_a, u_b)|``.
    """
    if space.stratum(joint).codim != 2:
        raise RankUnsupported("intersections are modelled at codimension-2 joints only")
    ua, ub = space.ray_of(joint, wall_a), space.ray_of(joint, wall_b)
    return Fraction(1, abs(det2(ua, ub)))


def normal_symbol(component, wall):
    return f"N[{component}/{wall}]"


def restrict_to_wall(space, cls, at, wall):
    """Restrict a divisor class on a component (near stratum ``at``) to ``wall``.

    The wall itself becomes its normal-bundle symbol; another wall through a
    codim-2 joint ``at`` becomes the joint with the intersection multiplicity.
    """
    comp = cls.stratum
    out = {}
    for name, mult in cls.entries.items():
        if name == wall:
            sym = normal_symbol(comp, wall)
            out[sym] = out.get(sym, 0) + mult
        elif space.stratum(at).codim == 2 and space.le(at, name):
            j = space.stratum(at).id
            out[j] = out.get(j, 0) + mult * intersection_at(space, at, wall, name)
        elif space.stratum(at).codim > 2:
            raise RankUnsupported("restriction through strata of codim > 2")
    return DivisorClass(wall, out)


# ---------------------------------------------------------------------------
# validation


@dataclass
class Check:
    name: str
    passed: bool
    witness: str = ""


@dataclass
class ValidationReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def add(self, name, passed, witness=""):
        self.checks.append(Check(name, bool(passed), witness))

    def to_json(self):
        return {"passed": self.passed,
                "checks": [{"name": c.name, "passed": c.passed, "witness": c.witness}
                           for c in self.checks]}


def _matmul(a, b):
    if not a:
        return ()
    if not b:
        return tuple(() for _ in a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0])))
                 for i in range(len(a)))


def _image_rays(p, rays):
    out = set()
    for r in rays:
        w = tuple(dot(row, r) for row in p)
        if any(w):
            out.add(primitive(w))
    return out


def _check_poset(space, rep):
    ok, witness = True, ""
    for a, b in space.poset:
        if (b, a) in space.poset:
            ok, witness = False, f"cycle between {a} and {b}"
            break
        if space.stratum(a).codim <= space.stratum(b).codim:
            ok, witness = False, f"{a} < {b} but codim does not drop"
            break
    if ok and space.poset != _closure(space.poset):
        ok, witness = False, "relation is not transitively closed"
    rep.add("poset", ok, witness)
    for s in space.strata:
        ok = s.fan.rank == s.codim
        rep.add(f"rank:{s.id}", ok, "" if ok else f"rank {s.fan.rank} codim {s.codim}")
        try:
            comp = bool(is_complete(s.fan)) if s.codim else True
        except RankUnsupported:
            comp = True
        rep.add(f"complete:{s.id}", comp, "" if comp else f"fan of {s.id} is not complete")


def _check_identification(space, rep):
    for lo in space.strata:
        above = [s.id for s in space.above(lo.id)]
        missing = [u for u in above if (lo.id, u) not in space.generization]
        if missing:
            rep.add(f"c1-identification:{lo.id}", False, f"no generization data for {lo.id} < {missing[0]}")
            continue
        assigned = {space.cone_of(lo.id, u): u for u in above}
        assigned[frozenset()] = lo.id
        cones = set(lo.fan.cones)
        ok = len(assigned) == len(above) + 1 and set(assigned) == cones
        witness = ""
        if not ok:
            extra = sorted(map(sorted, cones - set(assigned)))
            witness = f"cones of Sigma_{lo.id} without a stratum: {extra}" if extra else \
                f"strata above {lo.id} share a cone"
        else:
            for c1, c2 in itertools.permutations(cones, 2):
                u1, u2 = assigned[c1], assigned[c2]
                if lo.fan.is_face(c1, c2) != space.le(u1, u2):
                    ok, witness = False, f"face order of {u1},{u2} disagrees with the poset"
                    break
        rep.add(f"c1-identification:{lo.id}", ok, witness)


def _check_quotients(space, rep):
    for (lo, up) in sorted(space.poset):
        if (lo, up) not in space.generization:
            continue
        p = space.projection(lo, up)
        lo_s, up_s = space.stratum(lo), space.stratum(up)
        tau = space.cone_obj(lo, up)
        name = f"c1-quotient:{lo}<{up}"
        if len(p) != up_s.codim or any(len(r) != lo_s.codim for r in p):
            rep.add(name, False, f"projection shape {len(p)}x{len(p[0]) if p else 0}")
            continue
        if any(any(dot(row, r) for row in p) for r in tau.rays):
            rep.add(name, False, f"projection does not kill the cone {list(tau.rays)}")
            continue
        if p and (snf.rank([list(r) for r in p]) != len(p)
                  or any(x != 1 for x in snf.elementary_divisors([list(r) for r in p]))):
            rep.add(name, False, "projection is not surjective onto Z^%d" % len(p))
            continue
        if len(p) != lo_s.codim - tau.dim:
            rep.add(name, False, f"quotient rank {len(p)} != {lo_s.codim} - {tau.dim}")
            continue
        bad = None
        for mu in space.above(up) + [up_s]:
            img = _image_rays(p, space.cone_obj(lo, mu.id).rays)
            want = set(space.cone_obj(up, mu.id).rays)
            if img != want:
                bad = f"cone of {mu.id} maps to {sorted(img)}, expected {sorted(want)}"
                break
        rep.add(name, bad is None, bad or "")


def _check_triples(space, rep):
    for (a, b) in sorted(space.poset):
        for c in sorted(u.id for u in space.above(b)):
            if not all(k in space.generization for k in ((a, b), (b, c), (a, c))):
                continue
            lhs = tuple(map(tuple, space.projection(a, c)))
            rhs = _matmul(space.projection(b, c), space.projection(a, b))
            if space.stratum(c).codim == 0:
                ok = True
            else:
                ok = lhs == rhs
            rep.add(f"c1-commute:{a}<{b}<{c}", ok, "" if ok else f"P({a},{c}) = {lhs} but composite = {rhs}")


def _check_divisor_data(space, rep):
    for (comp, at), dm in sorted(space.divisor_data.items()):
        name = f"mdc-local:{comp}@{at}"
        if not space.le(at, comp) or comp == at or space.stratum(comp).codim != 0:
            rep.add(name, False, f"{at} is not a proper stratum of component {comp}")
            continue
        cone = space.cone_obj(at, comp)
        allowed = {s.id for s in space.above(at) if s.codim == 1 and space.le(s.id, comp)}
        allowed |= {at} if space.stratum(at).codim == 1 else set()
        bad = [n for n in dm.names if n not in allowed]
        if bad:
            rep.add(name, False, f"divisor {bad[0]} is not a wall of {comp} through {at}")
            continue
        outside = [m for m, _ in dm.values if not cone.contains(m)]
        if outside:
            rep.add(name, False, f"generator {outside[0]} lies outside the cone of {comp}")
            continue
        mat = dm.matrix
        if mat is None:
            rep.add(name, False, "generator values are not the restriction of a linear map")
            continue
        if qlinalg.rank(mat) != space.stratum(at).codim:
            rep.add(name, False, "mu is not injective")
            continue
        witness = ""
        for r in cone.rays:
            if any(v < 0 for v in qlinalg.apply(mat, r)):
                witness = f"mu({r}) is not effective"
        for i in range(cone.rank):
            e = [int(i == j) for j in range(cone.rank)]
            if any(v.denominator != 1 for v in qlinalg.apply(mat, e)):
                witness = f"mu(e_{i}) is not integral"
        for k, wall in enumerate(dm.names):
            face = space.cone_obj(at, wall) if wall != at else space.cone_obj(at, at)
            if any(qlinalg.apply([mat[k]], r)[0] for r in face.rays):
                witness = f"the {wall}-coefficient does not vanish on the face of {wall}"
        rep.add(name, not witness, witness)


def _check_mdc_generization(space, rep):
    for (comp, lo), dm in sorted(space.divisor_data.items()):
        for (comp2, up), dm2 in sorted(space.divisor_data.items()):
            if comp2 != comp or up == lo or (lo, up) not in space.poset:
                continue
            if dm.matrix is None or dm2.matrix is None:
                continue
            p = space.projection(lo, up)
            keep = [n for n in set(dm.names) | set(dm2.names) if space.le(up, n)]
            bad = None
            for i in range(space.stratum(lo).codim):
                e = [int(i == j) for j in range(space.stratum(lo).codim)]
                a = dm.evaluate(e)
                b = dm2.evaluate([dot(row, e) for row in p])
                for n in keep:
                    if a.mult(n) != b.mult(n):
                        bad = f"e_{i}: mult of {n} is {a.mult(n)} at {lo}, {b.mult(n)} at {up}"
                        break
                if bad:
                    break
            rep.add(f"mdc-generization:{comp}:{lo}<{up}", bad is None, bad or "")


def _check_mdc_joints(space, rep):
    for j in space.joints:
        for wall in sorted(s.id for s in space.above(j.id) if s.codim == 1):
            comps = [c for c in space.adjacent_components(wall) if (c, j.id) in space.divisor_data]
            if len(comps) != 2:
                continue
            u = space.ray_of(j.id, wall)
            try:
                res = [restrict_to_wall(space, divisor_of_character(space, c, u, j.id), j.id, wall)
                       for c in comps]
            except LogtcError as exc:
                rep.add(f"mdc-joint:{j.id}/{wall}", False, str(exc))
                continue
            ok = res[0].entries == res[1].entries
            rep.add(f"mdc-joint:{j.id}/{wall}", ok,
                    "" if ok else f"mu({u}) restricts to {res[0]} from {comps[0]} but {res[1]} from {comps[1]}")


def validate_gtc(space):
    """Run all combinatorial consistency checks; failures carry witnesses."""
    rep = ValidationReport()
    _check_poset(space, rep)
    _check_identification(space, rep)
    _check_quotients(space, rep)
    _check_triples(space, rep)
    _check_divisor_data(space, rep)
    _check_mdc_generization(space, rep)
    _check_mdc_joints(space, rep)
    rep.add("viability", True, "assumed: divisor names are global divisors on their components")
    return rep


# ---------------------------------------------------------------------------
# JSON


def _mult_to_json(m):
    m = Fraction(m)
    return m.numerator if m.denominator == 1 else format_fraction(m)


def _mult_from_json(x, path):
    if isinstance(x, bool):
        raise SchemaError(path, "expected a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            pass
    raise SchemaError(path, "expected an integer or a 'p/q' string")


def to_json(space):
    strata = []
    for s in space.strata:
        strata.append({
            "id": s.id, "codim": s.codim,
            "fan": {"rank": s.fan.rank, "rays": [list(r) for r in s.fan.rays],
                    "cones": [sorted(c) for c in s.fan.cones if c]},
            "chart_vars": list(s.chart_vars)})
    doc = {"schema": SCHEMA}
    if space.name:
        doc["name"] = space.name
    doc.update({
        "dimension": space.dimension,
        "strata": strata,
        "poset": [list(p) for p in sorted(space.poset)],
        "generization": [{"lower": lo, "upper": up, "cone": sorted(g.cone),
                          "projection": [list(r) for r in g.projection]}
                         for (lo, up), g in sorted(space.generization.items())],
        "divisor_data": [{"component": c, "stratum": t,
                          "map": [{"m": list(m), "divisor": [{"name": n, "mult": _mult_to_json(x)}
                                                           for n, x in d.entries.items()]}
                                  for m, d in dm.values]}
                         for (c, t), dm in sorted(space.divisor_data.items())],
    })
    if space.normal_bundles:
        doc["normal_bundles"] = [
            {"component": c, "wall": w, "trivial": nb.trivial,
             "degree": None if nb.degree is None else _mult_to_json(nb.degree)}
            for (c, w), nb in sorted(space.normal_bundles.items())]
    if space.exceptionals:
        doc["exceptionals"] = [
            {"name": e.name, "component": e.component, "wall": e.wall, "kind": e.kind,
             "factor": e.factor, "points": [list(p) for p in e.points], "degree": e.degree}
            for e in space.exceptionals]
    if space.annotations:
        doc["annotations"] = space.annotations
    return doc


def serialize(space):
    return jsonio.dumps(to_json(space))


def _parse_fan(obj, path):
    rank = jsonio.require(obj, "rank", int, path)
    rays = [jsonio.int_vector(r, f"{path}.rays[{i}]", rank)
            for i, r in enumerate(jsonio.require(obj, "rays", list, path))]
    cones = [jsonio.int_vector(c, f"{path}.cones[{i}]")
             for i, c in enumerate(jsonio.require(obj, "cones", list, path))]
    try:
        return Fan(rank, rays, cones) if rank else zero_fan()
    except (InvalidFan, RankUnsupported) as exc:
        raise FanSheafError(f"{path}: {exc}") from None


def from_json(data):
    dim = jsonio.require(data, "dimension", int, "$")
    strata = []
    for i, s in enumerate(jsonio.require(data, "strata", list, "$")):
        p = f"$.strata[{i}]"
        sid = jsonio.require(s, "id", str, p)
        codim = jsonio.require(s, "codim", int, p)
        fan = _parse_fan(jsonio.require(s, "fan", dict, p), f"{p}.fan")
        cv = jsonio.require(s, "chart_vars", list, p)
        if any(not isinstance(v, str) for v in cv):
            raise SchemaError(f"{p}.chart_vars", "expected names")
        strata.append(Stratum(sid, codim, fan, tuple(cv)))
    ids = {s.id for s in strata}
    pairs = []
    for i, pr in enumerate(jsonio.require(data, "poset", list, "$")):
        if not (isinstance(pr, list) and len(pr) == 2 and all(x in ids for x in pr)):
            raise SchemaError(f"$.poset[{i}]", "expected a pair of stratum ids")
        pairs.append(tuple(pr))
    gen = {}
    for i, g in enumerate(jsonio.require(data, "generization", list, "$")):
        p = f"$.generization[{i}]"
        lo, up = jsonio.require(g, "lower", str, p), jsonio.require(g, "upper", str, p)
        if lo not in ids or up not in ids:
            raise SchemaError(p, "unknown stratum")
        cone = frozenset(jsonio.int_vector(jsonio.require(g, "cone", list, p), f"{p}.cone"))
        proj = tuple(jsonio.int_vector(r, f"{p}.projection[{k}]")
                     for k, r in enumerate(jsonio.require(g, "projection", list, p)))
        gen[(lo, up)] = Generization(cone, proj)
    ddata = {}
    for i, d in enumerate(jsonio.require(data, "divisor_data", list, "$")):
        p = f"$.divisor_data[{i}]"
        comp, at = jsonio.require(d, "component", str, p), jsonio.require(d, "stratum", str, p)
        values = []
        for k, e in enumerate(jsonio.require(d, "map", list, p)):
            q = f"{p}.map[{k}]"
            m = jsonio.int_vector(jsonio.require(e, "m", list, q), f"{q}.m")
            ent = {}
            for t, x in enumerate(jsonio.require(e, "divisor", list, q)):
                r = f"{q}.divisor[{t}]"
                ent[jsonio.require(x, "name", str, r)] = _mult_from_json(x.get("mult"), f"{r}.mult")
            values.append((m, DivisorClass(comp, ent)))
        ddata[(comp, at)] = DivisorMap(comp, at, tuple(values))
    nbs = {}
    for i, nb in enumerate(data.get("normal_bundles", [])):
        p = f"$.normal_bundles[{i}]"
        c, w = jsonio.require(nb, "component", str, p), jsonio.require(nb, "wall", str, p)
        deg = nb.get("degree")
        nbs[(c, w)] = NormalBundle(bool(nb.get("trivial", False)),
                                   None if deg is None else _mult_from_json(deg, f"{p}.degree"))
    excs = []
    for i, e in enumerate(data.get("exceptionals", [])):
        p = f"$.exceptionals[{i}]"
        pts = tuple(tuple(x) for x in jsonio.require(e, "points", list, p))
        excs.append(Exceptional(*(jsonio.require(e, k, str, p)
                                  for k in ("name", "component", "wall", "kind", "factor")),
                                pts, jsonio.require(e, "degree", int, p)))
    ann = data.get("annotations", {})
    if not isinstance(ann, dict):
        raise SchemaError("$.annotations", "expected an object")
    return GtcSpace(dim, tuple(strata), _closure(pairs), gen, ddata, nbs, data.get("name", ""),
                    tuple(excs), ann)


def parse_gtc(text):
    """Parse a ``logtc-gtc/1`` document."""
    return from_json(jsonio.loads(text, SCHEMA))


# ---------------------------------------------------------------------------
# moment complexes


def _area2(pts):
    return sum(det2(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts)))


def _ccw(face, vertices):
    pts = [vertices[i] for i in face]
    a = _area2(pts)
    if a == 0:
        raise NotAComplex(f"face {list(face)} is degenerate")
    face = list(face) if a > 0 else list(reversed(face))
    pts = [vertices[i] for i in face]
    n = len(pts)
    for i in range(n):
        e1 = tuple(pts[(i + 1) % n][k] - pts[i][k] for k in range(2))
        e2 = tuple(pts[(i + 2) % n][k] - pts[(i + 1) % n][k] for k in range(2))
        if det2(e1, e2) <= 0:
            raise NotAComplex(f"face {face} is not a strictly convex polygon")
    return face


def _inside(pt, face, vertices):
    """-1 outside, 0 on the boundary, 1 in the interior (ccw convex face)."""
    sign = 1
    n = len(face)
    for i in range(n):
        a, b = vertices[face[i]], vertices[face[(i + 1) % n]]
        s = det2((b[0] - a[0], b[1] - a[1]), (pt[0] - a[0], pt[1] - a[1]))
        if s < 0:
            return -1
        if s == 0:
            sign = 0
    return sign


def _interiors_disjoint(f, g, vertices):
    for face, other in ((f, g), (g, f)):
        n = len(face)
        for i in range(n):
            a, b = vertices[face[i]], vertices[face[(i + 1) % n]]
            # outward normal of edge a->b of a ccw polygon
            nrm = (b[1] - a[1], a[0] - b[0])
            lim = dot(nrm, a)
            if all(dot(nrm, vertices[k]) >= lim for k in other):
                return True
    return False


def _check_complex(vertices, faces):
    if len(set(map(tuple, vertices))) != len(vertices):
        raise NotAComplex("repeated vertex coordinates")
    for f, g in itertools.combinations(range(len(faces)), 2):
        a, b = faces[f], faces[g]
        if not _interiors_disjoint(a, b, vertices):
            raise NotAComplex(f"faces {f} and {g} overlap")
        touch_a = {k for k in a if _inside(vertices[k], b, vertices) >= 0}
        touch_b = {k for k in b if _inside(vertices[k], a, vertices) >= 0}
        if touch_a != touch_b:
            raise NotAComplex(f"faces {f} and {g} meet in a non-face")
        common = touch_a
        if len(common) > 2:
            raise NotAComplex(f"faces {f} and {g} share more than an edge")
        if len(common) == 2:
            i, j = sorted(common)
            if not (_is_edge(a, i, j) and _is_edge(b, i, j)):
                raise NotAComplex(f"faces {f} and {g} meet in a non-face")


def _is_edge(face, i, j):
    n = len(face)
    return any({face[k], face[(k + 1) % n]} == {i, j} for k in range(n))


def _toric_self_intersection(face, k, vertices):
    """Self-intersection of the curve of edge ``k`` in the toric surface of a polygon."""
    n = len(face)

    def normal(e):
        a, b = vertices[face[e % n]], vertices[face[(e + 1) % n]]
        return primitive((a[1] - b[1], b[0] - a[0]))  # inward for ccw polygons

    prev, cur, nxt = normal(k - 1), normal(k), normal(k + 1)
    return Fraction(-det2(prev, nxt), det2(prev, cur) * det2(cur, nxt))


def from_moment_complex(vertices, faces, *, vertex_labels=None, face_names=None,
                        wall_names=None, wall_chart_vars=None, name=""):
    """Build the toric-model space of a pure 2-dimensional lattice polygon complex.

    Args:
        vertices: integer points ``(x, y)``.
        faces: vertex-index cycles, one per polygon (either orientation).
        vertex_labels: names for vertices; joints are named by their label.
        face_names: component ids (default ``F0, F1, ...``).
        wall_names: map from a frozenset of the two endpoint labels to a wall id.
        wall_chart_vars: map from wall id to its chart variable names.
    """
    vertices = [tuple(int(x) for x in v) for v in vertices]
    labels = list(vertex_labels or [f"v{i}" for i in range(len(vertices))])
    faces = [_ccw(f, vertices) for f in faces]
    _check_complex(vertices, faces)
    fnames = list(face_names or [f"F{i}" for i in range(len(faces))])
    wall_names = dict(wall_names or {})
    wall_chart_vars = dict(wall_chart_vars or {})

    edge_faces = {}
    for fi, f in enumerate(faces):
        for k in range(len(f)):
            e = frozenset((f[k], f[(k + 1) % len(f)]))
            edge_faces.setdefault(e, []).append(fi)
    if any(len(v) > 2 for v in edge_faces.values()):
        raise NotAComplex("an edge lies on more than two faces")
    interior = {e: fs for e, fs in edge_faces.items() if len(fs) == 2}
    joints = []
    for vi in range(len(vertices)):
        incident = [e for e in edge_faces if vi in e]
        if incident and all(e in interior for e in incident):
            joints.append(vi)

    def wall_id(e):
        i, j = sorted(e)
        key = frozenset((labels[i], labels[j]))
        return wall_names.get(key, f"E_{labels[i]}{labels[j]}")

    def direction(v, e):
        (w,) = e - {v}
        return primitive((vertices[w][0] - vertices[v][0], vertices[w][1] - vertices[v][1]))

    def edge_normal(e):
        i, j = sorted(e)
        n = primitive((vertices[i][1] - vertices[j][1], vertices[j][0] - vertices[i][0]))
        f0 = faces[min(interior[e])]
        inner = [vertices[k] for k in f0 if k not in e][0]
        if dot(n, (inner[0] - vertices[i][0], inner[1] - vertices[i][1])) < 0:
            n = (-n[0], -n[1])
        return n

    strata, gen, ddata, nbs = [], {}, {}, {}
    for fi, f in enumerate(faces):
        strata.append(Stratum(fnames[fi], 0, zero_fan(), ()))
    for e, fs in sorted(interior.items(), key=lambda kv: wall_id(kv[0])):
        wid = wall_id(e)
        if wid in wall_chart_vars:
            cv = tuple(wall_chart_vars[wid])
        else:
            ends = sorted(e, key=lambda k: (k in joints, labels[k]))
            cv = (labels[ends[0]],)
        strata.append(Stratum(wid, 1, Fan(1, [(1,), (-1,)], [(0,), (1,)]), cv))
        lo, hi = sorted(fs)
        gen[(wid, fnames[lo])] = Generization(frozenset({0}), ())
        gen[(wid, fnames[hi])] = Generization(frozenset({1}), ())
        ddata[(fnames[lo], wid)] = DivisorMap(fnames[lo], wid, (((1,), DivisorClass(fnames[lo], {wid: 1})),))
        ddata[(fnames[hi], wid)] = DivisorMap(fnames[hi], wid, (((-1,), DivisorClass(fnames[hi], {wid: 1})),))
        for fi in fs:
            f = faces[fi]
            k = next(k for k in range(len(f)) if frozenset((f[k], f[(k + 1) % len(f)])) == e)
            nbs[(fnames[fi], wid)] = NormalBundle(False, _toric_self_intersection(f, k, vertices))
    for vi in joints:
        jid = labels[vi]
        inc = sorted((e for e in interior if vi in e), key=wall_id)
        rays = [direction(vi, e) for e in inc]
        cones = [(i,) for i in range(len(rays))]
        corner = {}
        for fi, f in enumerate(faces):
            if vi not in f:
                continue
            k = f.index(vi)
            ea = frozenset((vi, f[(k + 1) % len(f)]))
            eb = frozenset((vi, f[k - 1]))
            ia, ib = inc.index(ea), inc.index(eb)
            cones.append((ia, ib))
            corner[fi] = (ea, eb)
        try:
            fan = Fan(2, rays, cones)
        except InvalidFan as exc:
            raise NotAComplex(f"star of {jid}: {exc}") from None
        strata.append(Stratum(jid, 2, fan, ()))
        for e in inc:
            gen[(jid, wall_id(e))] = Generization(frozenset({inc.index(e)}), (edge_normal(e),))
        for fi, (ea, eb) in corner.items():
            gen[(jid, fnames[fi])] = Generization(frozenset({inc.index(ea), inc.index(eb)}), ())
            values = []
            for e_ray, e_other in ((ea, eb), (eb, ea)):
                u = direction(vi, e_ray)
                n = primitive((-direction(vi, e_other)[1], direction(vi, e_other)[0]))
                if dot(n, u) < 0:
                    n = (-n[0], -n[1])
                values.append((u, DivisorClass(fnames[fi], {wall_id(e_other): dot(n, u)})))
            ddata[(fnames[fi], jid)] = DivisorMap(fnames[fi], jid, tuple(values))
    pairs = set()
    for (lo, up) in gen:
        pairs.add((lo, up))
    return GtcSpace(2, tuple(strata), _closure(pairs), gen, ddata, nbs, name)
