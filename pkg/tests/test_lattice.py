import pytest
from hypothesis import given, strategies as st

from logtc.errors import (ConeNotInFan, InvalidFan, NonAdjacentRays, NotCompleteRank2,
                          RankUnsupported, ZeroVector)
from logtc.lattice import (Cone, Fan, complete_fan_from_rays, cyclic_ray_order, is_complete,
                           is_smooth, primitive, primitive_normal, quotient_fan)

vectors = st.lists(st.integers(-50, 50), min_size=1, max_size=4).filter(any)


@pytest.mark.parametrize("v, expected", [
    ((2, -4), (1, -2)),
    ((1, 1), (1, 1)),
    ((0, -6, 3), (0, -2, 1)),
])
def test_primitive_examples(v, expected):
    assert primitive(v) == expected


def test_primitive_rejects_zero():
    with pytest.raises(ZeroVector):
        primitive((0, 0))


@given(vectors, st.integers(1, 20))
def test_primitive_is_scale_invariant(v, k):
    p = primitive(v)
    assert primitive(tuple(k * x for x in v)) == p
    assert primitive(p) == p


def test_quotient_by_ray_gives_complete_line(p2_fan):
    ray = p2_fan.rays.index((1, 0))
    q, proj = quotient_fan(p2_fan, [ray])
    assert q.rank == 1
    assert set(q.rays) == {(1,), (-1,)}
    assert is_complete(q)
    assert len(proj) == 1


def test_quotient_by_zero_cone_is_identity(p2_fan):
    q, proj = quotient_fan(p2_fan, [])
    assert q.signature() == p2_fan.signature()
    assert [list(r) for r in proj] == [[1, 0], [0, 1]]


def test_quotient_by_maximal_cone_is_zero_fan(p2_fan):
    q, _ = quotient_fan(p2_fan, p2_fan.maximal_cones()[0])
    assert q.rank == 0 and q.rays == ()


def test_quotient_rejects_foreign_cone(p2_fan):
    with pytest.raises(ConeNotInFan):
        quotient_fan(p2_fan, [0, 1, 2])


def test_is_complete_examples(p2_fan):
    assert is_complete(p2_fan)
    quadrant = Fan(2, [(1, 0), (0, 1)], [(0,), (1,), (0, 1)])
    assert not is_complete(quadrant)
    two_rays = Fan(2, [(1, 0), (0, 1)], [(0,), (1,)])
    assert not is_complete(two_rays)


def test_is_complete_rank_limit():
    rays = [tuple(int(i == j) for j in range(4)) for i in range(4)]
    with pytest.raises(RankUnsupported):
        is_complete(Fan(4, rays, [(i,) for i in range(4)]))


def test_is_complete_rank3_partial_check():
    rays = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)]
    cones = [c for c in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]]
    faces = {tuple(sorted(s)) for c in cones for s in
             [(c[0],), (c[1],), (c[2],), (c[0], c[1]), (c[0], c[2]), (c[1], c[2])]}
    res = is_complete(Fan(3, rays, sorted(faces) + cones))
    assert res and res.level != "exact"


def test_cyclic_order_examples(p2_fan, dp4_vertex_fan):
    assert cyclic_ray_order(p2_fan) == [(-1, -1), (1, 0), (0, 1)]
    assert cyclic_ray_order(dp4_vertex_fan) == [(-1, -1), (1, -1), (0, 1)]


def test_cyclic_order_two_half_planes():
    f = Fan(2, [(1, 0), (-1, 0)], [(0,), (1,)], check=False)
    with pytest.raises(NotCompleteRank2):
        cyclic_ray_order(f)


def test_cyclic_order_rejects_incomplete():
    with pytest.raises(NotCompleteRank2):
        cyclic_ray_order(Fan(2, [(1, 0), (0, 1)], [(0,), (1,), (0, 1)]))


@pytest.mark.parametrize("ray, nxt, d", [
    ((0, 1), (-1, -1), (-1, 0)),
    ((-1, -1), (1, -1), (1, -1)),
    ((1, -1), (0, 1), (1, 1)),
])
def test_primitive_normal_examples(dp4_vertex_fan, ray, nxt, d):
    assert primitive_normal(dp4_vertex_fan, ray, nxt) == d


def test_primitive_normal_needs_consecutive_rays(dp4_vertex_fan):
    with pytest.raises(NonAdjacentRays):
        primitive_normal(dp4_vertex_fan, (0, 1), (1, -1))


def test_is_smooth_examples(p2_fan, square_fan):
    assert is_smooth(p2_fan)
    assert is_smooth(square_fan)
    singular = complete_fan_from_rays([(1, 0), (1, 2), (-1, 0), (0, -1)])
    assert not is_smooth(singular)


def test_cone_facets_cross_validate():
    c = Cone(((1, 0), (1, 2)), 2)
    assert set(c.facets) == {(0, 1), (2, -1)}
    assert c.contains((1, 1)) and not c.contains((0, 1))


def test_fan_rejects_overlapping_cones():
    with pytest.raises(InvalidFan):
        Fan(2, [(1, 0), (0, 1), (1, 1)], [(0,), (1,), (2,), (0, 1), (0, 2)])


def test_fan_rejects_missing_face():
    with pytest.raises(InvalidFan):
        Fan(2, [(1, 0), (0, 1), (-1, 0)], [(0,), (1,), (0, 1), (1, 2)])


@given(st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6)).filter(any),
                min_size=3, max_size=8))
def test_cyclic_order_consistent_with_normals(raw):
    rays = sorted({primitive(r) for r in raw})
    try:
        f = complete_fan_from_rays(rays)
    except InvalidFan:
        return
    if not is_complete(f):
        return
    order = cyclic_ray_order(f)
    assert order[0] == min(order)
    for a, b in zip(order, order[1:] + order[:1]):
        d = primitive_normal(f, a, b)
        assert d[0] * a[0] + d[1] * a[1] == 0
        assert d[0] * b[0] + d[1] * b[1] > 0
