import random
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from logtc import catalog
from logtc.divisors import DivisorClass
from logtc.errors import BadJointFan, FactorizationUnsupported, InconsistentSection, \
    SectionVanishesOnJoint
from logtc.ls import (LSSection, check_ls_section, identity_section, joint_check,
                      joint_class_identity, joint_frame, joint_values, locus_degree, parse_section,
                      serialize_section, singular_locus, synthesize_local_charts, vanishing_factors,
                      wall_bundle)
from logtc.polynomial import LaurentPolynomial

P = LaurentPolynomial.parse
GOLDEN = Path(__file__).parent / "golden"


# --- wall bundles -------------------------------------------------------------

@pytest.mark.parametrize("r", [1, 2, 3])
def test_two_components_wall_bundle(r):
    space = catalog.two_components(r).space
    assert wall_bundle(space, "D") == DivisorClass("D", {"N[Y1/D]": 1, "N[Y2/D]": 1})


def test_a1_surface_wall_bundle_is_trivial(a1_surface):
    assert wall_bundle(a1_surface.space, "S").is_zero()


def test_dp4_wall_bundles(dp4):
    got = {w.id: str(wall_bundle(dp4.space, w.id)) for w in dp4.space.walls}
    assert got == {"rho_x": "N[X1/rho_x] + N[X3/rho_x] + 1/2*u",
                   "rho_y": "N[X1/rho_y] + N[X2/rho_y] + 1/2*u",
                   "rho_z": "N[X2/rho_z] + N[X3/rho_z] + 2*u"}


@pytest.mark.parametrize("name", catalog.names())
@pytest.mark.parametrize("shift", [-2, -1, 1, 3])
def test_wall_bundle_choice_invariance(name, shift):
    space = catalog.entry(name).space
    for w in space.walls:
        base = wall_bundle(space, w.id)
        assert wall_bundle(space, w.id, shift=shift) == base
        assert wall_bundle(space, w.id, swap=True) == base


@pytest.mark.parametrize("name", ["dp4", "a1-threefold"])
def test_joint_class_identity(name):
    space = catalog.entry(name).space
    for j in space.joints:
        ok, _ = joint_class_identity(space, j.id)
        assert ok


# --- joint frames and checks ----------------------------------------------------

def test_dp4_joint_frame(dp4):
    assert joint_frame(dp4.space, "u") == [("rho_x", (1, -1)), ("rho_y", (1, 1)), ("rho_z", (-1, 0))]


def test_threefold_joint_frame_matches_dp4(threefold, dp4):
    assert [d for _, d in joint_frame(threefold.space, "uaxis")] == \
        [d for _, d in joint_frame(dp4.space, "u")]


def test_square_joint_normals(square_fan):
    sysm = synthesize_local_charts(square_fan, {r: LaurentPolynomial.constant(1) for r in
                                                square_fan.rays})
    assert sorted(sysm.normals) == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    for r, d in zip(sysm.rays, sysm.normals):
        assert r[0] * d[0] + r[1] * d[1] == 0


def test_joint_frame_rejects_walls(dp4):
    with pytest.raises(BadJointFan):
        joint_frame(dp4.space, "rho_x")


def test_dp4_symbolic_joint_constraints(dp4):
    rep = joint_check(dp4.space, dp4.section, "u")
    assert not rep.passed
    assert rep.residual_strings() == ["(a0*b0)/(c0)", "(b0)/(a0)"]
    assert rep.constraints == ["b0 = a0", "c0 = a0^2"]


def test_dp4_compliant_symbolic_section_passes(dp4):
    sec = dp4.section.substitute({"b0": P("a0"), "c0": P("a0^2")})
    assert joint_check(dp4.space, sec, "u").passed


def test_threefold_joint_passes(threefold):
    rep = joint_check(threefold.space, threefold.section, "uaxis")
    assert rep.passed
    assert {w: str(p) for w, p in rep.restricted.items()} == {"S1": "u^2", "S2": "u", "S3": "u"}


@pytest.mark.parametrize("name", catalog.names())
def test_identity_section_is_unit(name):
    space = catalog.entry(name).space
    assert check_ls_section(space, identity_section(space)).classification == "LS^x"


def test_vanishing_on_joint(dp4):
    sec = dp4_numeric().replace("rho_x", P("x", ("x",)))
    with pytest.raises(SectionVanishesOnJoint):
        joint_check(dp4.space, sec, "u")
    assert check_ls_section(dp4.space, sec).classification == "not a section"


def dp4_numeric():
    return catalog.dp4_numeric_section()


unimodular = st.sampled_from([((1, 0), (0, 1)), ((0, 1), (1, 0)), ((1, 1), (0, 1)),
                              ((2, 1), (1, 1)), ((1, -3), (0, -1)), ((-1, 2), (1, -1))])


def _random_dp4_section(rng, compliant):
    syms = ["a", "b", "c"]

    def mono():
        e = {s: rng.randint(0, 2) for s in syms}
        return LaurentPolynomial.monomial(e, rng.choice([1, 2, -3]))
    g = mono()
    fx, fy, fz = (g, g, g * g) if compliant else (mono(), mono(), mono())
    return LSSection({"rho_x": fx + P("x", ("x",)), "rho_y": fy + P("5*y^2", ("y",)),
                      "rho_z": fz + P("z^3", ("z",))})


@given(st.integers(0, 10 ** 6), st.booleans(), st.integers(0, 5), st.booleans(), unimodular)
def test_joint_check_invariances(seed, compliant, rot, refl, basis):
    space = catalog.dp4().space
    sec = _random_dp4_section(random.Random(seed), compliant)
    base = joint_check(space, sec, "u").passed
    if compliant:
        assert base
    assert joint_check(space, sec, "u", rotate=rot).passed == base
    assert joint_check(space, sec, "u", reflect=refl, rotate=rot).passed == base
    assert joint_check(space, sec, "u", basis=basis).passed == base


def test_reflection_inverts_residuals(dp4):
    a = joint_check(dp4.space, dp4.section, "u")
    b = joint_check(dp4.space, dp4.section, "u", reflect=True)
    assert [(n, d) for n, d in b.residuals] == [(d, n) for n, d in a.residuals]


# --- classification and singular loci ---------------------------------------------

def test_dp4_generic_section_has_eight_points(dp4):
    rep = check_ls_section(dp4.space, dp4_numeric())
    assert rep.classification == "LS"
    locus = singular_locus(dp4.space, dp4_numeric())
    degrees = {w: locus_degree(dp4.space, c) for w, c in locus.items()}
    assert degrees == {"rho_x": 2, "rho_y": 2, "rho_z": 4}
    assert sum(degrees.values()) == 8 == rep.expected_zero_count


def test_a1_surface_singular_at_origin(a1_surface):
    assert check_ls_section(a1_surface.space, a1_surface.section).classification == "LS"
    assert singular_locus(a1_surface.space, a1_surface.section) == {"S": DivisorClass("S", {"u": 1})}


def test_threefold_locus_splits(threefold):
    locus = singular_locus(threefold.space, threefold.section)
    assert locus["S1"] == DivisorClass("S1", {"u + z": 1, "u - z": 1})


def test_irreducible_quartic_is_one_piece(dp4):
    locus = singular_locus(dp4.space, dp4_numeric())["rho_z"]
    assert locus == DivisorClass("rho_z", {"1 + z + z^2 + z^3 + z^4": 1})


def test_constant_has_empty_locus(dp4):
    assert vanishing_factors(dp4.space, "rho_x", P("7", ("x",)))[1] == []


def test_symbolic_locus_unsupported(dp4):
    with pytest.raises(FactorizationUnsupported):
        singular_locus(dp4.space, dp4.section)


def test_multivariate_nonlinear_unsupported(threefold):
    with pytest.raises(FactorizationUnsupported):
        vanishing_factors(threefold.space, "S1", P("u^2 - z^3", ("z", "u")))


univariate = st.lists(st.integers(-5, 5), min_size=1, max_size=4).filter(any).map(
    lambda cs: LaurentPolynomial(("x",), {(k,): c for k, c in enumerate(cs)}))


@given(univariate, univariate)
def test_locus_degree_is_additive(f, g):
    space = catalog.dp4().space
    if f.degree(("x",)) < 0 or g.degree(("x",)) < 0:
        return

    def deg(p):
        _, facs = vanishing_factors(space, "rho_x", p)
        return sum(k * h.degree(("x",)) for h, k in facs)
    assert deg(f * g) == deg(f) + deg(g)


# --- chart synthesis ----------------------------------------------------------------

def test_synthesis_consistent_for_compliant_dp4(dp4):
    sec = dp4.section.substitute({"b0": P("a0"), "c0": P("a0^2")})
    sysm = synthesize_local_charts(dp4.space.stratum("u").fan, joint_values(dp4.space, sec, "u"))
    assert sysm.consistent and len(sysm.transitions) == 3


def test_synthesis_residual_for_free_c0(dp4):
    sec = dp4.section.substitute({"b0": P("a0")})
    with pytest.raises(InconsistentSection) as exc:
        synthesize_local_charts(dp4.space.stratum("u").fan, joint_values(dp4.space, sec, "u"))
    residual = exc.value.residuals.residual_string((1, 0))
    assert residual == "a0^2*c0^-1"
    raw = dp4.section
    with pytest.raises(InconsistentSection) as exc:
        synthesize_local_charts(dp4.space.stratum("u").fan, joint_values(dp4.space, raw, "u"))
    assert exc.value.residuals.residual_string((1, 0)) == "a0*b0*c0^-1"
    assert exc.value.residuals.residual_string((0, 1)) == "a0^-1*b0"


def test_synthesis_all_ones_is_trivial(p2_fan):
    sysm = synthesize_local_charts(p2_fan, {r: LaurentPolynomial.constant(1) for r in p2_fan.rays})
    assert sysm.consistent and all(not f for f in sysm.frames)


@pytest.mark.parametrize("seed", range(50))
def test_synthesis_agrees_with_joint_check(seed):
    space = catalog.dp4().space
    rng = random.Random(seed)
    sec = _random_dp4_section(rng, compliant=rng.random() < 0.5)
    passed = joint_check(space, sec, "u").passed
    try:
        synthesize_local_charts(space.stratum("u").fan, joint_values(space, sec, "u"))
        consistent = True
    except InconsistentSection:
        consistent = False
    assert consistent == passed


# --- section documents ------------------------------------------------------------

@pytest.mark.parametrize("name", catalog.names())
def test_section_round_trip(name):
    space = catalog.entry(name).space
    for path in sorted(GOLDEN.glob(f"{name}*.section")):
        text = path.read_text()
        assert serialize_section(space, parse_section(text, space)) == text
