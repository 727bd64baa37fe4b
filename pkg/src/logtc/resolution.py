"""Divisor-level log resolutions: blow-up plans, transforms of wall bundles and sections.

A blow-up event removes the vanishing divisor of one wall function by blowing
up its pieces inside one adjacent component. Wall-bundle classes transform as
``L -> f*(L) - f*(Z)`` and sections by strict transform. Where a center crosses
a joint, every other wall of that component through the crossing point acquires
an exceptional point (or curve) ``Xi``; a later center through that point picks
up ``Xi`` in its total transform with the center's multiplicity there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import jsonio, symbolic
from .divisors import DivisorClass
from .errors import CenterNotInSection, FactorizationUnsupported, SchemaError
from .gtc import Exceptional, NormalBundle, normal_symbol
from .ls import check_ls_section, vanishing_factors, wall_bundle
from .monoid import restrict_to_coordinates
from .polynomial import LaurentPolynomial, format_fraction, product

PLAN_SCHEMA = "logtc-plan/1"
PULLBACK = "f*"


@dataclass(frozen=True)
class BlowUpEvent:
    """Blow up the pieces of ``center`` (a divisor on ``wall``) inside ``component``.

    ``new_exceptional`` names one exceptional divisor per piece, in the order of
    ``center.support()``.
    """

    component: str
    wall: str
    center: DivisorClass
    new_exceptional: tuple

    def __post_init__(self):
        if not self.center.is_effective():
            raise ValueError(f"center {self.center} is not effective")
        if len(self.new_exceptional) != len(self.center.support()):
            raise ValueError("need one exceptional name per center piece")

    def pieces(self):
        return list(zip(self.center.support(), self.new_exceptional))

    def to_json(self):
        return {"component": self.component, "wall": self.wall,
                "center": [{"factor": n, "mult": int(self.center.mult(n))}
                           for n in self.center.support()],
                "exceptional": list(self.new_exceptional)}


@dataclass
class ResolutionPlan:
    events: list = field(default_factory=list)

    def __len__(self):
        return len(self.events)

    def to_json(self):
        return {"schema": PLAN_SCHEMA, "events": [e.to_json() for e in self.events]}


def serialize_plan(plan):
    return jsonio.dumps(plan.to_json())


def parse_plan(text):
    data = jsonio.loads(text, PLAN_SCHEMA)
    events = []
    for i, e in enumerate(jsonio.require(data, "events", list, "$")):
        p = f"$.events[{i}]"
        wall = jsonio.require(e, "wall", str, p)
        center = {}
        for k, c in enumerate(jsonio.require(e, "center", list, p)):
            center[jsonio.require(c, "factor", str, f"{p}.center[{k}]")] = \
                jsonio.require(c, "mult", int, f"{p}.center[{k}]")
        names = jsonio.require(e, "exceptional", list, p)
        try:
            events.append(BlowUpEvent(jsonio.require(e, "component", str, p), wall,
                                      DivisorClass(wall, center), tuple(names)))
        except ValueError as exc:
            raise SchemaError(p, str(exc)) from None
    return ResolutionPlan(events)


# ---------------------------------------------------------------------------
# divisors on walls


def vanishing_divisor(space, wall, poly):
    """The vanishing divisor of a wall function, named by its normalized factors."""
    _, facs = vanishing_factors(space, wall, poly)
    return DivisorClass(wall, {str(h): k for h, k in facs})


def _piece(space, wall, name):
    return LaurentPolynomial.parse(name, space.stratum(wall).chart_vars)


def _is_exceptional(space, wall, name):
    return any(x.name == name and x.wall == wall for x in space.exceptionals)


def pullback(space, cls):
    """``f*`` of a class: non-exceptional names gain the ``f*`` prefix (idempotent)."""
    def rn(n):
        if n.startswith(PULLBACK) or _is_exceptional(space, cls.stratum, n):
            return n
        return PULLBACK + n
    return cls.rename(rn)


def _pieces_intersect(space, wall, names):
    """Whether two pieces of a center meet (linear forms that are not parallel)."""
    cv = space.stratum(wall).chart_vars
    if len(names) < 2 or len(cv) < 2:
        return False
    polys = [_piece(space, wall, n).with_variables(cv) for n in names]
    lin = []
    for p in polys:
        if p.degree(cv) != 1:
            return True
        lin.append([p.terms.get(tuple(int(i == k) for i in range(len(cv))), Fraction(0))
                    for k in range(len(cv))])
    for i in range(len(lin)):
        for j in range(i + 1, len(lin)):
            a, b = lin[i], lin[j]
            if any(a[s] * b[t] != a[t] * b[s] for s in range(len(cv)) for t in range(len(cv))):
                return True
    return False


def _side(space, wall, overrides):
    if wall in overrides:
        comp = overrides[wall]
        if comp not in space.adjacent_components(wall):
            raise ValueError(f"{comp} is not adjacent to {wall}")
        return comp
    return max(space.adjacent_components(wall))


def _exceptional_name(space, comp, wall, factor, taken):
    name = f"E_{comp}({factor})"
    if name in taken or any(x.name == name for x in space.exceptionals):
        name = f"E_{comp}/{wall}({factor})"
    taken.add(name)
    return name


def plan_resolution(space, section, overrides=None):
    """Blow-up events removing every wall function's vanishing divisor.

    Each wall is blown up in one adjacent component: the override if given,
    else the lexicographically larger id. Events are grouped by component;
    within a component, centers whose pieces are disjoint come before centers
    whose pieces meet, then walls in id order.
    """
    overrides = dict(overrides or {})
    keyed = []
    for w in section.walls:
        z = vanishing_divisor(space, w, section[w])
        if z.is_zero():
            continue
        comp = _side(space, w, overrides)
        keyed.append(((comp, _pieces_intersect(space, w, z.support()), w), comp, w, z))
    keyed.sort(key=lambda t: t[0])
    taken = set()
    events = []
    for _, comp, w, z in keyed:
        names = tuple(_exceptional_name(space, comp, w, n, taken) for n in z.support())
        events.append(BlowUpEvent(comp, w, z, names))
    return ResolutionPlan(events)


# ---------------------------------------------------------------------------
# points where centers cross joints


def _point_label(coords):
    return ",".join(f"{v}={format_fraction(c)}" for v, c in sorted(coords.items()))


def _parse_label(label):
    out = {}
    for part in label.split(","):
        v, c = part.split("=")
        out[v] = Fraction(c)
    return out


def center_points(space, wall, name):
    """``[(joint, label)]`` where the piece ``name`` meets the joints below ``wall``."""
    w = space.stratum(wall)
    h = _piece(space, wall, name).with_variables(w.chart_vars)
    out = []
    for j in sorted(space.below(wall), key=lambda s: s.id):
        if j.codim != w.codim + 1:
            continue
        r = restrict_to_coordinates(h, w.chart_vars, j.chart_vars).trimmed()
        if r.is_zero():
            raise FactorizationUnsupported(f"center {name} on {wall} contains the joint {j.id}")
        if r.is_constant():
            continue
        if len(j.chart_vars) != 1:
            raise FactorizationUnsupported(f"center {name} meets {j.id} in a higher-dimensional set")
        (v,) = j.chart_vars
        _, facs = symbolic.factor(r.with_variables((v,)))
        for g, _ in facs:
            g = g.with_variables((v,))
            if g.degree((v,)) != 1:
                raise FactorizationUnsupported(f"center {name} meets {j.id} at irrational points")
            root = -g.terms.get((0,), Fraction(0)) / g.terms[(1,)]
            out.append((j.id, _point_label({v: root})))
    return sorted(set(out))


def _translate(h, coords):
    """``h(x + a)`` for the point ``a`` given by ``coords`` (missing coordinates are 0)."""
    cv = h.variables
    shifted = [LaurentPolynomial.var(v, cv) + LaurentPolynomial.constant(coords.get(v, 0), cv)
               for v in cv]
    acc = LaurentPolynomial.constant(0, cv)
    for e, c in h.terms.items():
        acc = acc + product([shifted[i] ** k for i, k in enumerate(e)]
                            + [LaurentPolynomial.constant(c, cv)])
    return acc.with_variables(cv)


def multiplicity_at(space, wall, cls, joint, label):
    """Multiplicity at a joint point of the scheme defined by a center divisor."""
    w = space.stratum(wall)
    coords = _parse_label(label)
    total = 0
    for name, k in cls.entries.items():
        h = _piece(space, wall, name).with_variables(w.chart_vars)
        moved = _translate(h, coords)
        if moved.is_zero():
            raise FactorizationUnsupported(f"piece {name} vanishes identically")
        total += k * min(sum(e) for e in moved.terms)
    return total


# ---------------------------------------------------------------------------
# transforms


def total_transform(space, event):
    """``f*(Z)`` for the event's center, against the exceptionals registered so far."""
    out = {}
    for name, ename in event.pieces():
        out[ename] = event.center.mult(name)
    for x in space.exceptionals:
        if x.kind == "induced" and x.wall == event.wall:
            (joint, label), = x.points
            m = multiplicity_at(space, event.wall, event.center, joint, label)
            if m:
                out[x.name] = out.get(x.name, 0) + m
    return DivisorClass(event.wall, out)


def _strict_transform(space, wall, poly, center):
    cv = space.stratum(wall).chart_vars
    divisor = product([_piece(space, wall, n).with_variables(cv) ** int(k)
                       for n, k in center.entries.items()])
    try:
        q = symbolic.divide_exact(poly, divisor)
    except ValueError:
        raise CenterNotInSection(f"{center} does not divide f_{wall} = {poly}") from None
    extra = tuple(sorted(set(q.used_variables()) - set(cv)))
    return q.with_variables(tuple(cv) + extra)


def apply_blowup(space, section, bundles, e):
    """Apply one event; returns the new ``(space, section, bundles)``.

    Raises CenterNotInSection unless the center is at most the current
    vanishing divisor of the wall function.
    """
    if e.center.is_zero():
        return space, section, dict(bundles)
    current = vanishing_divisor(space, e.wall, section[e.wall])
    if not e.center.le(current):
        raise CenterNotInSection(f"center {e.center} is not contained in the vanishing "
                                 f"divisor {current} of f_{e.wall}")
    tt = total_transform(space, e)
    new_bundles = {w: pullback(space, c) for w, c in bundles.items()}
    new_bundles[e.wall] = new_bundles[e.wall] - tt
    new_section = section.replace(e.wall, _strict_transform(space, e.wall, section[e.wall],
                                                            e.center))
    cv = space.stratum(e.wall).chart_vars
    excs = list(space.exceptionals)
    for name, ename in e.pieces():
        pts = center_points(space, e.wall, name)
        deg = _piece(space, e.wall, name).degree(cv)
        excs.append(Exceptional(ename, e.component, e.wall, "center", name, tuple(pts), deg))
    for name, _ in e.pieces():
        for joint, label in center_points(space, e.wall, name):
            for other in sorted(space.above(joint), key=lambda s: s.id):
                if other.codim != 1 or other.id == e.wall or not space.le(other.id, e.component):
                    continue
                if any(x.wall == other.id and x.kind == "center" and x.component == e.component
                       and (joint, label) in x.points for x in excs):
                    continue
                if any(x.wall == other.id and x.kind == "induced" and x.points == ((joint, label),)
                       for x in excs):
                    continue
                excs.append(Exceptional(f"Xi_{joint}({label})", e.component, other.id,
                                        "induced", f"{joint}:{label}", ((joint, label),), 1))
    nbs = dict(space.normal_bundles)
    if space.dimension == 2:
        nb = nbs.get((e.component, e.wall))
        deg = sum(int(k) * _piece(space, e.wall, n).degree(cv) for n, k in e.center.entries.items())
        if nb is None or nb.trivial or nb.degree is None:
            nbs[(e.component, e.wall)] = NormalBundle(False, None)
        else:
            nbs[(e.component, e.wall)] = NormalBundle(False, nb.degree - deg)
    return space.replace(exceptionals=tuple(excs), normal_bundles=nbs), new_section, new_bundles


def initial_bundles(space):
    return {w.id: wall_bundle(space, w.id) for w in space.walls}


@dataclass
class ResolutionResult:
    space: object
    section: object
    bundles: dict
    plan: ResolutionPlan


def apply_plan(space, section, plan, bundles=None):
    bundles = initial_bundles(space) if bundles is None else dict(bundles)
    for e in plan.events:
        space, section, bundles = apply_blowup(space, section, bundles, e)
    return ResolutionResult(space, section, bundles, plan)


# ---------------------------------------------------------------------------
# verification


@dataclass
class WallIdentity:
    """The transform identity ``L_new = f*(L) - f*(Z)`` on one wall, computed two ways."""

    wall: str
    before: DivisorClass
    center: DivisorClass
    pulled_back_center: DivisorClass
    incremental: DivisorClass
    direct: DivisorClass
    degree: Fraction | None = None
    zero_count: int | None = None

    @property
    def holds(self):
        expected = self.before_pullback - self.pulled_back_center
        ok = self.incremental == expected == self.direct
        if self.degree is not None and self.zero_count is not None:
            ok = ok and self.degree == self.zero_count
        return ok

    @property
    def before_pullback(self):
        return self.before.rename(lambda n: n if n.startswith(PULLBACK) else PULLBACK + n)

    def to_json(self):
        out = {"wall": self.wall, "before": str(self.before), "center": str(self.center),
               "pulled_back_center": str(self.pulled_back_center),
               "after": str(self.incremental), "direct": str(self.direct), "holds": self.holds}
        if self.degree is not None:
            out["degree"] = format_fraction(self.degree)
            out["zero_count"] = self.zero_count
        return out


def _side_count(space, wall, joint, label):
    """Adjacent components of ``wall`` in which a center on another wall passes the point."""
    comps = set()
    for x in space.exceptionals:
        if x.kind == "center" and x.wall != wall and (joint, label) in x.points \
                and space.le(wall, x.component):
            comps.add(x.component)
    return len(comps)


def bundle_degree(space0, space, cls):
    """Degree of a transformed class on a complete curve wall, or None."""
    if space.dimension != 2:
        return None
    wall = cls.stratum
    nbs = [nb for (c, w), nb in space0.normal_bundles.items() if w == wall]
    if len(nbs) != 2 or any(nb.trivial or nb.degree is None for nb in nbs):
        return None
    weights = {}
    for (c, w), nb in space0.normal_bundles.items():
        if w == wall:
            weights[PULLBACK + normal_symbol(c, w)] = nb.degree
    for j in space0.below(wall):
        weights[PULLBACK + j.id] = 1
    for x in space.exceptionals:
        if x.wall == wall:
            weights[x.name] = x.degree
    if any(n not in weights for n in cls.entries):
        return None
    return cls.degree(weights)


def transform_identities(space0, section0, result):
    """Check ``new class = f*(old class) - f*(Z)`` on every wall.

    The incremental class comes from :func:`apply_blowup`. The direct class
    subtracts from ``f*(old class)`` the exceptional divisors over the wall's own
    center, plus ``Xi`` once for each adjacent component that blew up a center
    through ``Xi``'s point on another wall. ``f*(Z)`` itself uses the center's
    multiplicity at that point, so agreement is a real check.
    """
    space = result.space
    bundles0 = initial_bundles(space0)
    out = {}
    for w in sorted(bundles0):
        z = vanishing_divisor(space0, w, section0[w]) if w in section0.assignments \
            else DivisorClass(w, {})
        before = bundles0[w]
        direct = pullback(space0, before)
        fz = {}
        for e in result.plan.events:
            if e.wall != w:
                continue
            for name, ename in e.pieces():
                direct = direct - DivisorClass(w, {ename: e.center.mult(name)})
                fz[ename] = fz.get(ename, 0) + e.center.mult(name)
        for x in space.exceptionals:
            if x.kind == "induced" and x.wall == w:
                (joint, label), = x.points
                direct = direct - DivisorClass(w, {x.name: _side_count(space, w, joint, label)})
                m = multiplicity_at(space0, w, z, joint, label) if not z.is_zero() else 0
                if m:
                    fz[x.name] = fz.get(x.name, 0) + m
        after = pullback(space, result.bundles[w])
        zeros = None
        if w in result.section.assignments:
            cv = space.stratum(w).chart_vars
            p = result.section[w]
            if len(cv) == 1 and p.is_polynomial() and not set(p.used_variables()) - set(cv):
                zeros = p.degree(cv)
        out[w] = WallIdentity(w, before, z, DivisorClass(w, fz), after, direct,
                              bundle_degree(space0, space, after), zeros)
    return out


def verify_log_smooth(space, section):
    """``(True, report)`` iff the section lies in the unit subsheaf."""
    report = check_ls_section(space, section)
    return report.is_unit, report


@dataclass
class ResolveReport:
    plan: ResolutionPlan
    identities: dict
    before: object
    after: object
    result: ResolutionResult

    @property
    def log_smooth(self):
        return self.after.is_unit

    @property
    def identities_hold(self):
        return all(i.holds for i in self.identities.values())

    def to_json(self):
        return {"plan": self.plan.to_json()["events"],
                "before": self.before.classification,
                "identities": [i.to_json() for _, i in sorted(self.identities.items())],
                "after": self.after.classification,
                "log_smooth": self.log_smooth}


def resolve(space, section, overrides=None):
    """Plan, apply and verify a resolution of ``section``."""
    before = check_ls_section(space, section)
    plan = plan_resolution(space, section, overrides)
    result = apply_plan(space, section, plan)
    identities = transform_identities(space, section, result)
    _, after = verify_log_smooth(result.space, result.section)
    return ResolveReport(plan, identities, before, after, result)
