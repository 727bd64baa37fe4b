import pytest

from logtc import catalog
from logtc.divisors import DivisorClass
from logtc.errors import CenterNotInSection, SchemaError
from logtc.ls import identity_section, wall_bundle
from logtc.resolution import (BlowUpEvent, ResolutionPlan, apply_blowup, apply_plan,
                              initial_bundles, multiplicity_at, parse_plan, plan_resolution,
                              resolve, serialize_plan, total_transform, vanishing_divisor,
                              verify_log_smooth)


def _events(plan):
    return [(e.component, e.wall, str(e.center)) for e in plan.events]


def test_dp4_plan_follows_configured_sides(dp4):
    plan = plan_resolution(dp4.space, catalog.dp4_numeric_section(), dp4.overrides)
    assert [(c, w) for c, w, _ in _events(plan)] == \
        [(p["component"], p["wall"]) for p in dp4.expected["plan"]]
    assert [len(e.new_exceptional) for e in plan.events] == [2, 2, 1]


def test_a1_surface_plan(a1_surface):
    plan = plan_resolution(a1_surface.space, a1_surface.section, a1_surface.overrides)
    assert _events(plan) == [("X2", "S", "u")]


def test_default_side_is_larger_component(a1_surface):
    plan = plan_resolution(a1_surface.space, a1_surface.section)
    assert plan.events[0].component == "X2"
    plan = plan_resolution(a1_surface.space, a1_surface.section, {"S": "X1"})
    assert plan.events[0].component == "X1"


def test_override_must_be_adjacent(a1_surface):
    with pytest.raises(ValueError):
        plan_resolution(a1_surface.space, a1_surface.section, {"S": "Y9"})


@pytest.mark.parametrize("name", catalog.names())
def test_unit_section_has_empty_plan(name):
    space = catalog.entry(name).space
    assert len(plan_resolution(space, identity_section(space))) == 0


def test_threefold_plan_is_three_stages(threefold):
    plan = plan_resolution(threefold.space, threefold.section, threefold.overrides)
    assert _events(plan) == [("X2", "S3", "u"), ("X3", "S2", "u"),
                             ("X3", "S1", "(u + z) + (u - z)")]
    assert plan.events[-1].new_exceptional == ("E_X3(u + z)", "E_X3(u - z)")


def test_a1_surface_blowup(a1_surface):
    space, sec = a1_surface.space, a1_surface.section
    bundles = initial_bundles(space)
    e = plan_resolution(space, sec, a1_surface.overrides).events[0]
    space2, sec2, bundles2 = apply_blowup(space, sec, bundles, e)
    assert sec2["S"] == 1
    assert vanishing_divisor(space2, "S", sec2["S"]).is_zero()
    assert bundles2["S"] == DivisorClass("S", {"E_X2(u)": -1})
    assert verify_log_smooth(space2, sec2)[0]


def test_threefold_total_transform(threefold):
    rep = resolve(threefold.space, threefold.section, threefold.overrides)
    s1 = rep.identities["S1"]
    assert str(s1.pulled_back_center) == threefold.expected["total_transform"]["S1"]
    assert str(s1.incremental) == ("f*N[X2/S1] + f*N[X3/S1] + 2*f*uaxis - E_X3(u + z) "
                                   "- E_X3(u - z) - 2*Xi_uaxis(u=0)")
    assert s1.holds and rep.identities_hold and rep.log_smooth


def test_multiplicity_of_center_at_joint_point(threefold):
    z1 = DivisorClass("S1", {"u + z": 1, "u - z": 1})
    assert multiplicity_at(threefold.space, "S1", z1, "uaxis", "u=0") == 2
    assert multiplicity_at(threefold.space, "S1", DivisorClass("S1", {"u + z": 1}),
                           "uaxis", "u=0") == 1


@pytest.mark.parametrize("name", catalog.names())
def test_transform_identity_and_log_smoothness(name):
    e = catalog.entry(name)
    sec = catalog.dp4_numeric_section() if name == "dp4" else e.section
    rep = resolve(e.space, sec, e.overrides)
    assert rep.identities_hold
    assert rep.log_smooth
    assert rep.after.classification == "LS^x"


def test_dp4_degree_bookkeeping(dp4):
    rep = resolve(dp4.space, catalog.dp4_numeric_section(), dp4.overrides)
    for w, ident in rep.identities.items():
        assert ident.degree == ident.zero_count == 0
    before = {w.id: wall_bundle(dp4.space, w.id) for w in dp4.space.walls}
    assert {w: str(c) for w, c in before.items()} != {w: str(i.incremental)
                                                     for w, i in rep.identities.items()}


def test_dp4_before_resolution_is_singular(dp4):
    ok, report = verify_log_smooth(dp4.space, catalog.dp4_numeric_section())
    assert not ok
    assert report.expected_zero_count == 8
    assert len(report.witnesses) == 3


def test_section_divisor_coherence(threefold):
    space, sec = threefold.space, threefold.section
    plan = plan_resolution(space, sec, threefold.overrides)
    original = {w: vanishing_divisor(space, w, sec[w]) for w in sec.walls}
    applied = {w: DivisorClass(w, {}) for w in sec.walls}
    bundles = initial_bundles(space)
    for e in plan.events:
        space, sec, bundles = apply_blowup(space, sec, bundles, e)
        applied[e.wall] = applied[e.wall] + e.center
        for w in sec.walls:
            now = vanishing_divisor(space, w, sec[w])
            assert now == original[w] - applied[w]
            assert now.is_effective()


def test_resolution_is_idempotent(threefold):
    rep = resolve(threefold.space, threefold.section, threefold.overrides)
    again = plan_resolution(rep.result.space, rep.result.section, threefold.overrides)
    assert len(again) == 0


def test_empty_center_is_identity(a1_surface):
    space, sec = a1_surface.space, a1_surface.section
    bundles = initial_bundles(space)
    e = BlowUpEvent("X2", "S", DivisorClass("S", {}), ())
    assert apply_blowup(space, sec, bundles, e) == (space, sec, bundles)


def test_center_must_be_in_section(a1_surface):
    space = a1_surface.space
    e = BlowUpEvent("X2", "S", DivisorClass("S", {"u": 2}), ("E",))
    with pytest.raises(CenterNotInSection):
        apply_blowup(space, a1_surface.section, initial_bundles(space), e)


def test_event_invariants():
    with pytest.raises(ValueError):
        BlowUpEvent("X2", "S", DivisorClass("S", {"u": -1}), ("E",))
    with pytest.raises(ValueError):
        BlowUpEvent("X2", "S", DivisorClass("S", {"u": 1}), ())


def test_total_transform_without_earlier_blowups(a1_surface):
    e = plan_resolution(a1_surface.space, a1_surface.section).events[0]
    assert total_transform(a1_surface.space, e) == DivisorClass("S", {"E_X2(u)": 1})


def test_plan_round_trip(threefold):
    plan = plan_resolution(threefold.space, threefold.section, threefold.overrides)
    text = serialize_plan(plan)
    again = parse_plan(text)
    assert [e.to_json() for e in again.events] == [e.to_json() for e in plan.events]
    assert serialize_plan(again) == text


def test_plan_schema_errors():
    with pytest.raises(SchemaError):
        parse_plan('{"schema": "logtc-plan/1", "events": [{"wall": "S"}]}')
    bad = ('{"schema": "logtc-plan/1", "events": [{"component": "X", "wall": "S", '
           '"center": [{"factor": "u", "mult": 1}], "exceptional": []}]}')
    with pytest.raises(SchemaError) as exc:
        parse_plan(bad)
    assert exc.value.path == "$.events[0]"


def test_apply_plan_matches_resolve(threefold):
    plan = plan_resolution(threefold.space, threefold.section, threefold.overrides)
    res = apply_plan(threefold.space, threefold.section, ResolutionPlan(list(plan.events)))
    rep = resolve(threefold.space, threefold.section, threefold.overrides)
    assert res.bundles == rep.result.bundles
