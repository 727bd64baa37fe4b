"""Wall bundles, the joint compatibility condition and sections of the log-structure sheaf.

A section assigns a polynomial ``f_rho`` on each wall's chart. At a joint with
walls ``rho_1..rho_n`` in counterclockwise order and primitive normals ``d_i``
the section is compatible iff, for each basis vector ``e`` of ``M_joint``,

    prod_i (f_i restricted to the joint) ** <e, d_i> == 1,

decided exactly by cross-multiplying numerator and denominator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import jsonio, qlinalg, symbolic
from .divisors import DivisorClass
from .errors import (BadJointFan, FactorizationUnsupported, InconsistentSection, LogtcError,
                     NonRestrictableChoice, NotCompleteRank2, RankUnsupported, SchemaError,
                     SectionVanishesOnJoint)
from .gtc import divisor_of_character, normal_symbol, restrict_to_wall
from .lattice import cyclic_ray_order, dot, is_complete, primitive, primitive_normal
from .monoid import restrict_to_coordinates
from .polynomial import LaurentPolynomial, poly_from_json, poly_to_json, product

SECTION_SCHEMA = "logtc-section/1"


# ---------------------------------------------------------------------------
# sections


@dataclass(frozen=True, eq=False)
class LSSection:
    """One polynomial per wall, on the wall's chart coordinates."""

    assignments: dict

    def __getitem__(self, wall):
        return self.assignments[wall]

    @property
    def walls(self):
        return sorted(self.assignments)

    def replace(self, wall, poly):
        out = dict(self.assignments)
        out[wall] = poly
        return LSSection(out)

    def substitute(self, values):
        return LSSection({w: p.substitute(values).trimmed() for w, p in self.assignments.items()})

    def parameters(self, space):
        out = set()
        for w, p in self.assignments.items():
            out |= set(p.used_variables()) - set(space.stratum(w).chart_vars)
        return sorted(out)

    def __eq__(self, other):
        return isinstance(other, LSSection) and self.assignments == other.assignments


def identity_section(space):
    return LSSection({w.id: LaurentPolynomial.constant(1, w.chart_vars) for w in space.walls})


def section_to_json(space, section):
    return {"schema": SECTION_SCHEMA,
            "walls": [{"id": w, "poly": poly_to_json(section[w], space.stratum(w).chart_vars)}
                      for w in section.walls]}


def serialize_section(space, section):
    return jsonio.dumps(section_to_json(space, section))


def section_from_json(data, space):
    walls = jsonio.require(data, "walls", list, "$")
    out = {}
    for i, w in enumerate(walls):
        p = f"$.walls[{i}]"
        wid = jsonio.require(w, "id", str, p)
        if wid not in space.by_id or space.stratum(wid).codim != 1:
            raise SchemaError(f"{p}.id", f"{wid!r} is not a wall of the space")
        out[wid] = poly_from_json(jsonio.require(w, "poly", list, p),
                                  space.stratum(wid).chart_vars, f"{p}.poly")
    return LSSection(out)


def parse_section(text, space):
    return section_from_json(jsonio.loads(text, SECTION_SCHEMA), space)


# ---------------------------------------------------------------------------
# wall bundles


def _adjacent(space, wall):
    comps = space.adjacent_components(wall)
    if len(comps) != 2:
        raise NonRestrictableChoice(f"wall {wall} has {len(comps)} adjacent components")
    return comps


def _unit_solution(d):
    """Some integer ``v`` with ``<d, v> = 1`` (``d`` primitive)."""
    # extended Euclid on the two entries
    a, b = d
    old_r, r, old_s, s, old_t, t = a, b, 1, 0, 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return (old_s, old_t)


def _side_normal(space, joint, wall, comp):
    """Primitive ``d`` vanishing on the wall's ray and positive on ``comp``'s cone."""
    u = space.ray_of(joint, wall)
    d = primitive((-u[1], u[0]))
    cone = space.cone_obj(joint, comp)
    if any(dot(d, r) < 0 for r in cone.rays):
        d = (-d[0], -d[1])
    return d


def _bundle_at_joint(space, wall, joint, sigma, sigma2, v):
    left = divisor_of_character(space, sigma2, tuple(-x for x in v), joint)
    right = divisor_of_character(space, sigma, v, joint)
    return (restrict_to_wall(space, left, joint, wall)
            + restrict_to_wall(space, right, joint, wall))


def wall_bundle(space, wall, *, swap=False, shift=0):
    """Divisor class of the wall bundle of ``wall``.

    Near the wall's generic point the class is the sum of the two normal-bundle
    symbols; near each codim-2 joint a lattice point ``v`` at distance one from
    the wall on the first component's side contributes the restrictions of the
    other boundary divisors. ``swap`` exchanges the roles of the two sides and
    ``shift`` moves ``v`` along the wall; the class does not depend on either,
    which is re-checked on every call.
    """
    wid = space.stratum(wall).id
    sigma, sigma2 = _adjacent(space, wid)
    if swap:
        sigma, sigma2 = sigma2, sigma
    total = DivisorClass(wid, {normal_symbol(sigma, wid): 1, normal_symbol(sigma2, wid): 1})
    for j in sorted(s.id for s in space.below(wid)):
        if (sigma, j) not in space.divisor_data or (sigma2, j) not in space.divisor_data:
            continue
        if space.stratum(j).codim != 2:
            raise RankUnsupported(f"wall bundles near {j} (codim {space.stratum(j).codim})")
        u = space.ray_of(j, wid)
        d = _side_normal(space, j, wid, sigma)
        v0 = _unit_solution(d)
        found = None
        for k in sorted(range(-4, 5), key=abs):
            v = tuple(v0[i] + (k + shift) * u[i] for i in range(2))
            try:
                a = _bundle_at_joint(space, wid, j, sigma, sigma2, v)
            except LogtcError:
                continue
            b = _bundle_at_joint(space, wid, j, sigma, sigma2, tuple(v[i] + u[i] for i in range(2)))
            if a != b:
                raise NonRestrictableChoice(f"wall bundle of {wid} at {j} changes under v -> v + u: "
                                            f"{a} vs {b}")
            found = a
            break
        if found is None:
            raise NonRestrictableChoice(f"no admissible v for {wid} at {j}")
        local_n = {n: m for n, m in found.entries.items() if n.startswith("N[")}
        if local_n != {normal_symbol(sigma, wid): 1, normal_symbol(sigma2, wid): 1}:
            raise NonRestrictableChoice(f"normal part at {j} is {local_n}")
        total = total + found.without(local_n)
    trivial = [normal_symbol(c, wid) for c in (sigma, sigma2)
               if (nb := space.normal_bundle(c, wid)) is not None and nb.trivial]
    return total.without(trivial)


def class_degree(space, cls):
    """Degree of a class on a curve wall, using recorded normal-bundle degrees.

    Joint points count 1. Returns None when a degree is unknown or the wall is
    not a curve.
    """
    if space.dimension != 2:
        return None
    weights = {}
    for (comp, w), nb in space.normal_bundles.items():
        if w == cls.stratum:
            weights[normal_symbol(comp, w)] = 0 if nb.trivial else nb.degree
    for j in space.below(cls.stratum):
        weights[j.id] = 1
    if any(v is None for v in weights.values()):
        return None
    return cls.degree(weights)


# ---------------------------------------------------------------------------
# joints


def joint_frame(space, joint):
    """Walls around a joint in counterclockwise order with their primitive normals."""
    j = space.stratum(joint)
    if j.codim != 2:
        raise BadJointFan(f"{j.id} has codim {j.codim}, not 2")
    try:
        if not is_complete(j.fan):
            raise BadJointFan(f"fan of {j.id} is not complete")
        order = cyclic_ray_order(j.fan)
    except NotCompleteRank2 as exc:
        raise BadJointFan(str(exc)) from None
    n = len(order)
    return [(space.wall_of_ray(j.id, order[i]),
             primitive_normal(j.fan, order[i], order[(i + 1) % n])) for i in range(n)]


def restrict_to_joint(space, section, wall, joint):
    w, j = space.stratum(wall), space.stratum(joint)
    return restrict_to_coordinates(section[w.id], w.chart_vars, j.chart_vars).trimmed()


@dataclass
class JointReport:
    joint: str
    walls: list
    normals: list
    restricted: dict
    residuals: list  # one (numerator, denominator) pair per basis vector
    passed: bool
    basis: list = field(default_factory=lambda: [(1, 0), (0, 1)])
    constraints: list = field(default_factory=list)
    note: str = ""

    def residual_strings(self):
        out = []
        for num, den in self.residuals:
            if den.is_constant():
                out.append(str(num.scale(1 / den.constant_term())))
            else:
                out.append(f"({num})/({den})")
        return out

    def to_json(self):
        return {"joint": self.joint, "walls": self.walls,
                "normals": [list(d) for d in self.normals],
                "restricted": {w: str(p) for w, p in sorted(self.restricted.items())},
                "residuals": [{"basis": list(e), "numerator": str(n), "denominator": str(d)}
                              for e, (n, d) in zip(self.basis, self.residuals)],
                "passed": self.passed, "constraints": self.constraints, "note": self.note}


def _residual(polys, exps):
    """Reduced ``(num, den)`` of ``prod polys[i]**exps[i]`` and whether it equals 1."""
    pos = [[p, k] for p, k in zip(polys, exps) if k > 0]
    neg = [[p, -k] for p, k in zip(polys, exps) if k < 0]
    for a in pos:
        for b in neg:
            if a[0] == b[0]:
                c = min(a[1], b[1])
                a[1] -= c
                b[1] -= c
    num = product([p ** k for p, k in pos if k])
    den = product([p ** k for p, k in neg if k])
    ok = num == den  # cross-multiplied identity
    if ok:
        one = LaurentPolynomial.constant(1)
        return one, one, True
    if num.is_monomial() and den.is_monomial():
        ratio = num * den.inverse()
        content = ratio.monomial_content()
        c = ratio.leading_coefficient()
        pos_part = {v: k for v, k in content.items() if k > 0}
        neg_part = {v: -k for v, k in content.items() if k < 0}
        return (LaurentPolynomial.monomial(pos_part, c.numerator),
                LaurentPolynomial.monomial(neg_part, c.denominator), False)
    try:
        num, den = symbolic.cancel(num, den)
    except (ValueError, TypeError):
        pass
    return num, den, False


def _constraints(polys, normals, basis, chart_vars):
    """Monomial equations on the parameters under which the residuals become 1.

    Only produced when every restricted function is a single term.
    """
    if not all(p.is_monomial() for p in polys):
        return []
    names = sorted({v for p in polys for v in p.used_variables()})
    rows = []
    for e in basis:
        vec = {v: 0 for v in names}
        const = Fraction(1)
        for p, d in zip(polys, normals):
            k = dot(e, d)
            (exp, c), = p.with_variables(names).terms.items()
            for v, x in zip(names, exp):
                vec[v] += k * x
            const *= Fraction(c) ** k
        rows.append((vec, const))
    # fraction-free elimination; pivots on parameters in descending name order,
    # chart variables last
    order = sorted([v for v in names if v not in chart_vars], reverse=True) + \
        sorted(v for v in names if v in chart_vars)
    pivots = []
    rows = [r for r in rows if any(r[0].values()) or r[1] != 1]
    done = []
    for col in order:
        cand = [r for r in rows if r[0][col]]
        if not cand:
            continue
        piv = cand[0]
        rows.remove(piv)
        vec, const = piv
        if vec[col] < 0:
            vec, const = {v: -x for v, x in vec.items()}, 1 / const
        new_rows = []
        for r in rows + done:
            if r[0][col]:
                a, b = vec[col], r[0][col]
                rv = {v: a * r[0][v] - b * vec[v] for v in names}
                rc = r[1] ** a / const ** b
                r = (rv, rc)
            new_rows.append(r)
        rows, done = new_rows[:len(rows)], new_rows[len(rows):]
        done.append((vec, const))
        pivots.append(col)
    out = []
    for vec, const in done + rows:
        lead = next((v for v in order if vec[v]), None)
        if lead is None:
            if const != 1:
                out.append(f"unsatisfiable: {const} = 1")
            continue
        if lead in chart_vars:
            out.append(f"unsatisfiable: residual depends on {lead}")
            continue
        rhs = {v: -x for v, x in vec.items() if v != lead and x}
        lhs = lead if vec[lead] == 1 else f"{lead}^{vec[lead]}"
        rhs_poly = LaurentPolynomial.monomial(rhs, 1 / const) if rhs else \
            LaurentPolynomial.constant(1 / const)
        out.append(f"{lhs} = {rhs_poly}")
    return sorted(out)


def joint_check(space, section, joint, *, basis=None, rotate=0, reflect=False):
    """Evaluate the joint compatibility condition at one joint.

    Args:
        basis: two vectors forming a basis of ``M_joint`` (default standard).
        rotate: start the cyclic enumeration at another wall.
        reflect: enumerate clockwise instead (all normals change sign).
    """
    jid = space.stratum(joint).id
    frame = joint_frame(space, jid)
    if reflect:
        frame = [(w, (-d[0], -d[1])) for w, d in reversed(frame)]
    frame = frame[rotate % len(frame):] + frame[:rotate % len(frame)]
    basis = [tuple(e) for e in (basis or [(1, 0), (0, 1)])]
    walls = [w for w, _ in frame]
    normals = [d for _, d in frame]
    missing = [w for w in walls if w not in section.assignments]
    if missing:
        raise SchemaError(f"section.{missing[0]}", "no polynomial for this wall")
    restricted = {w: restrict_to_joint(space, section, w, jid) for w in walls}
    zero = [w for w in walls if restricted[w].is_zero()]
    if zero:
        raise SectionVanishesOnJoint(f"f_{zero[0]} vanishes identically on {jid}")
    polys = [restricted[w] for w in walls]
    residuals, passed = [], True
    for e in basis:
        num, den, ok = _residual(polys, [dot(e, d) for d in normals])
        residuals.append((num, den))
        passed = passed and ok
    cons = [] if passed else _constraints(polys, normals, basis, space.stratum(jid).chart_vars)
    return JointReport(jid, walls, normals, restricted, residuals, passed, basis, cons)


# ---------------------------------------------------------------------------
# whole sections


@dataclass
class SectionReport:
    classification: str  # "LS^x", "LS" or "not a section"
    joints: dict
    walls: dict  # wall -> "nowhere vanishing" | "vanishes" | "undecided at boundary"
    witnesses: list
    expected_zero_count: int | None = None

    @property
    def is_section(self):
        return self.classification != "not a section"

    @property
    def is_unit(self):
        return self.classification == "LS^x"

    def to_json(self):
        return {"classification": self.classification,
                "joints": {j: r.to_json() if isinstance(r, JointReport) else r
                           for j, r in sorted(self.joints.items())},
                "walls": dict(sorted(self.walls.items())),
                "witnesses": self.witnesses,
                "expected_zero_count": self.expected_zero_count}


def wall_status(space, wall, poly):
    cv = space.stratum(wall).chart_vars
    if poly.is_zero():
        return "zero"
    if poly.is_constant(cv):
        return "nowhere vanishing"
    if any(e[i] < 0 for e in poly.terms for i, v in enumerate(poly.variables) if v in cv):
        return "undecided at boundary"
    return "vanishes"


def check_ls_section(space, section):
    """Classify a section: unit section, section, or not a section, with witnesses."""
    witnesses = []
    walls = {}
    for w in space.walls:
        if w.id not in section.assignments:
            walls[w.id] = "missing"
            witnesses.append(f"no polynomial for wall {w.id}")
            continue
        walls[w.id] = wall_status(space, w.id, section[w.id])
        if walls[w.id] == "zero":
            witnesses.append(f"f_{w.id} is identically zero")
        elif walls[w.id] == "vanishes":
            witnesses.append(f"f_{w.id} = {section[w.id]} vanishes on {w.id}")
    joints = {}
    ok = all(s not in ("zero", "missing") for s in walls.values())
    for j in space.joints:
        try:
            rep = joint_check(space, section, j.id)
        except (SectionVanishesOnJoint, SchemaError) as exc:
            joints[j.id] = {"passed": False, "error": exc.code, "message": str(exc)}
            witnesses.append(str(exc))
            ok = False
            continue
        joints[j.id] = rep
        if not rep.passed:
            ok = False
            witnesses.append(f"joint {j.id}: residuals {rep.residual_strings()}"
                             + (f", holds iff {', '.join(rep.constraints)}" if rep.constraints else ""))
    if not ok:
        cls = "not a section"
    elif all(s == "nowhere vanishing" for s in walls.values()):
        cls = "LS^x"
    else:
        cls = "LS"
    count = None
    if all(len(space.stratum(w).chart_vars) == 1 for w in section.walls):
        count = sum(section[w].degree(space.stratum(w).chart_vars) for w in section.walls)
    return SectionReport(cls, joints, walls, witnesses, count)


# ---------------------------------------------------------------------------
# singular loci


def _normalize_factor(space, wall, g):
    """Scale a factor so its restriction to a joint on the wall is monic, else
    so its leading coefficient is 1."""
    w = space.stratum(wall)
    for j in sorted(space.below(w.id), key=lambda s: s.id):
        if j.codim != w.codim + 1:
            continue
        r = restrict_to_coordinates(g.with_variables(w.chart_vars), w.chart_vars, j.chart_vars)
        if r.is_monomial():
            return g.scale(1 / r.leading_coefficient())
    return g.scale(1 / g.leading_coefficient())


def vanishing_factors(space, wall, poly):
    """``(unit, [(factor, multiplicity)])`` with ``poly = unit * prod factor**mult``.

    Raises FactorizationUnsupported for symbolic coefficients, Laurent terms or
    multivariate polynomials that are not products of linear forms.
    """
    cv = space.stratum(wall).chart_vars
    params = [v for v in poly.used_variables() if v not in cv]
    if params:
        raise FactorizationUnsupported(f"f_{wall} has symbolic coefficients {params}")
    if not poly.is_polynomial():
        raise FactorizationUnsupported(f"f_{wall} has negative exponents")
    if poly.is_zero():
        raise FactorizationUnsupported(f"f_{wall} is zero")
    const, facs = symbolic.factor(poly)
    used = poly.used_variables()
    out = []
    for g, k in facs:
        if len(used) > 1 and g.degree() != 1:
            raise FactorizationUnsupported(f"f_{wall}: factor {g} is not linear")
        out.append((_normalize_factor(space, wall, g), k))
    out.sort(key=lambda gk: str(gk[0]))
    prod = product([h ** k for h, k in out])
    unit = poly.leading_coefficient() / prod.with_variables(poly.variables).leading_coefficient()
    if poly != prod.scale(unit):
        raise FactorizationUnsupported(f"factorization of f_{wall} does not multiply back")
    return unit, out


def singular_locus(space, section):
    """Vanishing divisor of every wall function, as a sum of named irreducible factors."""
    out = {}
    for w in section.walls:
        _, facs = vanishing_factors(space, w, section[w])
        out[w] = DivisorClass(w, {str(h): k for h, k in facs})
    return out


def locus_degree(space, cls):
    """Total degree of a vanishing divisor (points counted with multiplicity on curves)."""
    cv = space.stratum(cls.stratum).chart_vars
    return sum(m * LaurentPolynomial.parse(n, cv).degree(cv) for n, m in cls.entries.items())


# ---------------------------------------------------------------------------
# chart synthesis


def _atoms(p):
    """``(constant, {atom name: exponent})`` factorization into monomials and
    irreducible non-monomial factors."""
    content = p.monomial_content()
    q = p * LaurentPolynomial.monomial({v: -k for v, k in content.items()}) if content else p
    atoms = dict(content)
    const, facs = symbolic.factor(q.trimmed())
    for g, k in facs:
        if g.leading_coefficient() < 0:
            g, const = -g, const * (-1) ** k
        atoms[str(g)] = atoms.get(str(g), 0) + k
    return Fraction(const), atoms


@dataclass
class ChartSystem:
    rays: list
    normals: list
    frames: list  # per maximal cone: {atom: functional on M}
    transitions: list
    residual: dict  # atom -> functional
    constant_residual: tuple  # per basis vector

    @property
    def consistent(self):
        return not self.residual and all(c == 1 for c in self.constant_residual)

    def residual_string(self, e=(1, 0)):
        parts = {a: dot(e, f) for a, f in self.residual.items() if dot(e, f)}
        mono = LaurentPolynomial.monomial(parts) if parts else LaurentPolynomial.constant(1)
        c = Fraction(1)
        for k, ei in enumerate(e):
            c *= self.constant_residual[k] ** ei
        return str(mono.scale(c))


def synthesize_local_charts(fan, values):
    """Propagate monomial frames counterclockwise around a complete rank-2 fan.

    Args:
        fan: the joint's fan.
        values: map from ray to the wall function restricted to the joint.

    Crossing the wall of ray ``r_i`` multiplies the frame of ``z^m`` by
    ``f_i ** <d_i, m>``. Returns the transition system; raises
    InconsistentSection when the frame does not close up.
    """
    order = cyclic_ray_order(fan)
    n = len(order)
    normals = [primitive_normal(fan, order[i], order[(i + 1) % n]) for i in range(n)]
    vals = {primitive(r): p for r, p in values.items()}
    atoms = [_atoms(vals[r]) for r in order]
    frames = [{}]
    transitions = []
    const = [Fraction(1), Fraction(1)]
    # start in the cone <r_0, r_1>; cross r_1, r_2, ..., r_{n-1}, then r_0
    for step in range(1, n + 1):
        i = step % n
        c, at = atoms[i]
        d = normals[i]
        frame = {a: tuple(x) for a, x in frames[-1].items()}
        for a, k in at.items():
            old = frame.get(a, (0, 0))
            frame[a] = (old[0] + k * d[0], old[1] + k * d[1])
        frame = {a: f for a, f in frame.items() if any(f)}
        for b in range(2):
            const[b] *= c ** d[b]
        transitions.append({"wall_ray": order[i], "normal": d, "function": str(vals[order[i]])})
        frames.append(frame)
    residual = frames.pop()
    sysm = ChartSystem(order, normals, frames, transitions, residual, tuple(const))
    if not sysm.consistent:
        raise InconsistentSection(
            f"frames do not close up: residual {sysm.residual_string((1, 0))} for e1, "
            f"{sysm.residual_string((0, 1))} for e2", sysm)
    return sysm


def joint_values(space, section, joint):
    """Restricted wall functions keyed by the joint's rays."""
    return {space.ray_of(joint, w): restrict_to_joint(space, section, w, joint)
            for w, _ in joint_frame(space, joint)}


# ---------------------------------------------------------------------------
# class-level joint identity


def joint_class_identity(space, joint):
    """Check the telescoping identity behind the canonical joint isomorphism.

    Writes ``a_i = mu_{sigma_{i-1}}(-v_i) + mu_{sigma_i}(v_i)`` in the free group on
    (component, boundary divisor) symbols and verifies that
    ``sum_i <e, d_i> a_i`` lies in the span of the gluing relations
    ``mu_{sigma_{i-1}}(u_i) - mu_{sigma_i}(u_i)``. Returns ``(ok, residuals)``.
    """
    jid = space.stratum(joint).id
    frame = joint_frame(space, jid)
    n = len(frame)
    rays = [space.ray_of(jid, w) for w, _ in frame]
    fan = space.stratum(jid).fan
    comps = []
    for i in range(n):
        comps.append(space.component_at(jid, fan.cone_index([rays[i], rays[(i + 1) % n]])))
    symbols = []

    def vec(cls):
        out = {}
        for name, m in cls.entries.items():
            key = (cls.stratum, name)
            if key not in symbols:
                symbols.append(key)
            out[key] = m
        return out

    a = []
    relations = []
    for i, (w, d) in enumerate(frame):
        before, after = comps[i - 1], comps[i]
        v = _unit_solution(d)
        ai = {}
        for cls in (divisor_of_character(space, before, tuple(-x for x in v), jid),
                    divisor_of_character(space, after, v, jid)):
            for k, m in vec(cls).items():
                ai[k] = ai.get(k, 0) + m
        a.append(ai)
        rel = vec(divisor_of_character(space, before, rays[i], jid))
        for k, m in vec(divisor_of_character(space, after, rays[i], jid)).items():
            rel[k] = rel.get(k, 0) - m
        relations.append(rel)
    ok, residuals = True, []
    for e in ((1, 0), (0, 1)):
        total = {}
        for ai, (_, d) in zip(a, frame):
            for k, m in ai.items():
                total[k] = total.get(k, 0) + dot(e, d) * m
        dense = [total.get(s, 0) for s in symbols]
        rels = [[r.get(s, 0) for s in symbols] for r in relations]
        inside = qlinalg.in_span(rels, dense)
        ok = ok and inside
        residuals.append({f"{c}:{nm}": m for (c, nm), m in total.items() if m})
    return ok, residuals
