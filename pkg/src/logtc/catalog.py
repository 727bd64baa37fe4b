"""The worked-example catalog: four small spaces with their sections and expected outcomes."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import symbolic
from .divisors import DivisorClass
from .gtc import (DivisorMap, Generization, GtcSpace, NormalBundle, Stratum, _closure,
                  from_moment_complex)
from .lattice import Cone, Fan, zero_fan
from .ls import LSSection
from .monoid import monoid_presentation
from .polynomial import LaurentPolynomial

P = LaurentPolynomial.parse

# vertices of the moment complex of the reducible quartic del Pezzo surface
DP4_VERTICES = {"x": (-1, -1), "y": (1, -1), "z": (0, 1), "u": (0, 0)}
DP4_FACES = {"X1": ("x", "y", "u"), "X2": ("y", "z", "u"), "X3": ("x", "z", "u")}
DP4_POLARIZATION = {"x": 1, "y": 1, "z": 0, "u": 0}


@dataclass
class CatalogEntry:
    name: str
    space: GtcSpace
    section: LSSection
    expected: dict = field(default_factory=dict)
    overrides: dict = field(default_factory=dict)  # wall -> component to blow up in


def _two_sided(name, comps, wall, chart, *, trivial=False, annotations=None):
    a, b = comps
    strata = (Stratum(a, 0, zero_fan()), Stratum(b, 0, zero_fan()),
              Stratum(wall, 1, Fan(1, [(1,), (-1,)], [(0,), (1,)]), tuple(chart)))
    gen = {(wall, a): Generization(frozenset({0}), ()),
           (wall, b): Generization(frozenset({1}), ())}
    ddata = {(a, wall): DivisorMap(a, wall, (((1,), DivisorClass(a, {wall: 1})),)),
             (b, wall): DivisorMap(b, wall, (((-1,), DivisorClass(b, {wall: 1})),))}
    nbs = {(c, wall): NormalBundle(True, 0) for c in comps} if trivial else {}
    return GtcSpace(2, strata, _closure(gen), gen, ddata, nbs, name,
                    annotations=annotations or {})


def two_components(r=1):
    """Two components glued along a wall; ``r`` only enters the local monoid."""
    if r < 1:
        raise ValueError("r must be a positive integer")
    pres = monoid_presentation(Cone(((1, 0), (0, 1)), 2), [(r, (1, -1))])
    names = ["x", "y", "t"][:len(pres.generators)]
    ann = {"r": r, "monoid": {"generators": [list(g) for g in pres.generators],
                              "names": names, "relations": pres.binomials(names)}}
    space = _two_sided("two-components", ("Y1", "Y2"), "D", ["s"], annotations=ann)
    section = LSSection({"D": LaurentPolynomial.constant(1, ("s",))})
    expected = {"wall_bundle": {"D": "N[Y1/D] + N[Y2/D]"}, "classification": "LS^x",
                "plan": []}
    return CatalogEntry("two-components", space, section, expected)


def a1_surface():
    """Two planes meeting in a line, with wall function ``u``."""
    space = _two_sided("a1-surface", ("X1", "X2"), "S", ["u"], trivial=True)
    section = LSSection({"S": P("u", ("u",))})
    expected = {"classification": "LS", "singular_points": 1,
                "plan": [{"component": "X2", "wall": "S", "center": "u"}],
                "resolved": "LS^x"}
    return CatalogEntry("a1-surface", space, section, expected, {"S": "X2"})


def _dp4_space(name="dp4"):
    labels = list(DP4_VERTICES)
    verts = [DP4_VERTICES[v] for v in labels]
    faces = [[labels.index(v) for v in DP4_FACES[f]] for f in sorted(DP4_FACES)]
    walls = {frozenset(("u", v)): f"rho_{v}" for v in "xyz"}
    charts = {f"rho_{v}": [v] for v in "xyz"}
    space = from_moment_complex(verts, faces, vertex_labels=labels, face_names=sorted(DP4_FACES),
                                wall_names=walls, wall_chart_vars=charts, name=name)
    ann = {"moment_complex": {"vertices": {k: list(v) for k, v in DP4_VERTICES.items()},
                              "faces": {k: list(v) for k, v in DP4_FACES.items()},
                              "polarization": dict(DP4_POLARIZATION)}}
    return space.replace(annotations=ann)


def dp4_symbolic_section():
    return LSSection({"rho_x": P("a0 + a1*x + a2*x^2", ("x",)),
                      "rho_y": P("b0 + b1*y + b2*y^2", ("y",)),
                      "rho_z": P("c0 + c1*z + c2*z^2 + c3*z^3 + c4*z^4", ("z",))})


_DP4_GENERIC = {"rho_x": "1 + 3*x + 2*x^2", "rho_y": "1 - 5*y + 6*y^2",
                "rho_z": "1 + z + z^2 + z^3 + z^4"}


def _squarefree_nonvanishing_at_zero(p, var):
    _, facs = symbolic.factor(p)
    return p.constant_term() != 0 and all(k == 1 for _, k in facs) and p.degree((var,)) > 0


def dp4_numeric_section(seed=None):
    """Compliant coefficients (``a0 = b0 = c0 = 1``), fixed or drawn from ``seed``.

    Seeded draws are integers in ``[-9, 9]`` with nonzero leading terms, redrawn
    until every wall function is squarefree, so the singular count stays 8.
    """
    if seed is None:
        return LSSection({w: P(s, (w[-1],)) for w, s in _DP4_GENERIC.items()})
    rng = random.Random(seed)
    out = {}
    for w, deg in (("rho_x", 2), ("rho_y", 2), ("rho_z", 4)):
        v = w[-1]
        while True:
            coeffs = [1] + [rng.randint(-9, 9) for _ in range(deg)]
            if coeffs[-1] == 0:
                continue
            p = LaurentPolynomial((v,), {(k,): c for k, c in enumerate(coeffs) if c})
            if _squarefree_nonvanishing_at_zero(p, v):
                out[w] = p
                break
    return LSSection(out)


def dp4():
    space = _dp4_space()
    expected = {"constraints": ["b0 = a0", "c0 = a0^2"], "singular_points": 8,
                "wall_bundle_degrees": {"rho_x": 2, "rho_y": 2, "rho_z": 4},
                "kinks": {"rho_x": 1, "rho_y": 1, "rho_z": 2},
                "plan": [{"component": "X2", "wall": "rho_y"},
                         {"component": "X3", "wall": "rho_x"},
                         {"component": "X3", "wall": "rho_z"}],
                "resolved": "LS^x"}
    overrides = {"rho_y": "X2", "rho_x": "X3", "rho_z": "X3"}
    return CatalogEntry("dp4", space, dp4_symbolic_section(), expected, overrides)


def a1_threefold():
    """Three components meeting pairwise in surfaces along a common line (the u-axis)."""
    base = _dp4_space("a1-threefold")
    rename = {"rho_x": "S2", "rho_y": "S3", "rho_z": "S1", "u": "uaxis"}
    charts = {"S1": ("z", "u"), "S2": ("x", "u"), "S3": ("y", "u"), "uaxis": ("u",)}

    def rn(s):
        return rename.get(s, s)

    strata = tuple(Stratum(rn(s.id), s.codim, s.fan, charts.get(rn(s.id), s.chart_vars))
                   for s in base.strata)
    gen = {(rn(a), rn(b)): g for (a, b), g in base.generization.items()}
    ddata = {(c, rn(t)): DivisorMap(c, rn(t), tuple((m, d.rename(rn)) for m, d in dm.values))
             for (c, t), dm in base.divisor_data.items()}
    space = GtcSpace(3, strata, _closure(gen), gen, ddata, {}, "a1-threefold")
    section = LSSection({"S1": P("u^2 - z^2", ("z", "u")), "S2": P("u", ("x", "u")),
                         "S3": P("u", ("y", "u"))})
    expected = {"classification": "LS", "joint": "uaxis",
                "plan": [{"component": "X2", "wall": "S3"},
                         {"component": "X3", "wall": "S2"},
                         {"component": "X3", "wall": "S1"}],
                "total_transform": {"S1": "E_X3(u + z) + E_X3(u - z) + 2*Xi_uaxis(u=0)"},
                "resolved": "LS^x"}
    overrides = {"S3": "X2", "S2": "X3", "S1": "X3"}
    return CatalogEntry("a1-threefold", space, section, expected, overrides)


BUILDERS = {"two-components": two_components, "a1-surface": a1_surface, "dp4": dp4,
            "a1-threefold": a1_threefold}


def names():
    return list(BUILDERS)


def entry(name, **kwargs):
    try:
        builder = BUILDERS[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; available: {', '.join(BUILDERS)}") from None
    return builder(**kwargs)
