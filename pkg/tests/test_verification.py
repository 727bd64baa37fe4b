import random
import time

import pytest
from hypothesis import given, strategies as st

from logtc.errors import ConeNotInFan, NotAComplex, NotSmooth
from logtc.lattice import complete_fan_from_rays
from logtc.verification import (ChainComplex, PLHom, catalog_ghost_checks,
                                check_ghost_resolution, expected_chain_counts, fuzz_joint_lemma,
                                ghost_resolution_complex, homology, joint_lemma_trial,
                                stellar_fan, surjections)


def test_homology_of_multiplication_by_two():
    assert homology(ChainComplex([["a"], ["b"]], [[[2]]])) == [(0, [2]), (0, [])]


def test_homology_of_zero_map():
    assert homology(ChainComplex([["a"], ["b"]], [[[0]]])) == [(1, []), (1, [])]


def test_homology_rejects_non_complex():
    c = ChainComplex([["a"], ["b"], ["c"]], [[[1]], [[1]]])
    with pytest.raises(NotAComplex):
        homology(c)


def test_ghost_complex_at_maximal_cone(p2_fan):
    sigma = p2_fan.maximal_cones()[0]
    c = ghost_resolution_complex(p2_fan, sigma)
    c.check()
    # M, then <r1> + <r2> + <sigma>, then the two chains sigma > r_i
    assert c.ranks() == [2, 4, 2]
    assert homology(c) == [(0, []), (0, []), (0, [])]
    assert check_ghost_resolution(p2_fan, sigma)


def test_ghost_complex_at_generic_point(p2_fan):
    c = ghost_resolution_complex(p2_fan, [])
    assert c.ranks() == [2]
    assert homology(c) == [(2, [])]
    assert check_ghost_resolution(p2_fan, [])


def test_ghost_complex_at_wall_point(p2_fan):
    c = ghost_resolution_complex(p2_fan, [0])
    assert c.ranks() == [2, 1]
    assert homology(c) == [(1, []), (0, [])]


def test_ghost_complex_rejects_foreign_cone(p2_fan):
    with pytest.raises(ConeNotInFan):
        ghost_resolution_complex(p2_fan, [0, 1, 2])


def test_corrupted_differential_fails(p2_fan):
    sigma = p2_fan.maximal_cones()[0]
    assert not check_ghost_resolution(p2_fan, sigma, corrupt=True)


def test_every_catalog_stalk_is_exact():
    start = time.perf_counter()
    rows = catalog_ghost_checks()
    assert rows and all(ok for *_, ok in rows)
    assert time.perf_counter() - start < 5


@pytest.mark.parametrize("rays", [
    [(1, 0), (0, 1), (-1, -1)],
    [(1, 0), (1, 1), (0, 1), (-1, 0), (0, -1)],
    [(1, 0), (1, 2), (-1, 0), (0, -1)],
])
def test_chain_counts_match_closed_formula(rays):
    f = complete_fan_from_rays(rays)
    for sigma in f.cones:
        c = ghost_resolution_complex(f, sigma)
        dim = len(sigma)
        assert [len(ch) for ch in c.chains] == (expected_chain_counts(dim) if dim else [])


def test_surjection_counts():
    assert [surjections(3, k) for k in range(1, 4)] == [1, 6, 6]
    assert expected_chain_counts(2) == [3, 2]


# --- the joint telescope -------------------------------------------------------

def test_globally_linear_map_has_no_residual(p2_fan):
    lin = lambda r: (2 * r[0] - r[1], r[0] + 3 * r[1])  # noqa: E731
    h = PLHom(p2_fan, {r: lin(r) for r in p2_fan.rays})
    assert joint_lemma_trial(h) == ((0, 0), (0, 0))


def test_p2_with_basis_values(p2_fan):
    h = PLHom(p2_fan, {(1, 0): (1, 0, 0), (0, 1): (0, 1, 0), (-1, -1): (0, 0, 1)})
    assert h.check_agreement()
    assert joint_lemma_trial(h) == ((0, 0, 0), (0, 0, 0))


def test_hand_evaluated_square_fan(square_fan):
    h = PLHom(square_fan, {(1, 0): (5,), (0, 1): (-3,), (-1, 0): (7,), (0, -1): (2,)})
    assert joint_lemma_trial(h, 1) == ((0,), (0,))
    assert joint_lemma_trial(h, 1, shift=4) == ((0,), (0,))


def test_plhom_needs_smooth_fan():
    f = complete_fan_from_rays([(1, 0), (1, 2), (-1, 0), (0, -1)])
    with pytest.raises(NotSmooth):
        PLHom(f, {r: (1,) for r in f.rays})


@given(st.integers(0, 2 ** 32), st.integers(-6, 6), st.integers(1, 4))
def test_telescope_vanishes_on_stellar_fans(seed, shift, k):
    rng = random.Random(seed)
    fan = stellar_fan(rng, 12)
    h = PLHom(fan, {r: tuple(rng.randint(-50, 50) for _ in range(k)) for r in fan.rays})
    zero = ((0,) * k,) * 2
    assert joint_lemma_trial(h) == zero == joint_lemma_trial(h, shift=shift)


def test_fuzzer_seed_zero():
    rep = fuzz_joint_lemma(0, 100)
    assert rep.passed and len(rep.lines()) == 100
    assert all(line.endswith("pass") for line in rep.lines())
    assert max(t.rays for t in rep.trials) <= 12


def test_fuzzer_is_deterministic():
    assert fuzz_joint_lemma(7, 5).to_json() == fuzz_joint_lemma(7, 5).to_json()


def test_fuzzer_rejects_zero_trials():
    with pytest.raises(ValueError):
        fuzz_joint_lemma(0, 0)
