"""Tests for the parametrized collineations and their group machinery."""
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unital_forge import gf
from unital_forge import collineation as co
from unital_forge.errors import BudgetExceeded, InvalidParameters, NotClosed
from unital_forge.nearfield import build_nearfield, nm_mul
from unital_forge.plane import build_plane, id_line, id_point, incident, point_id


PL3 = build_plane(build_nearfield(2, 3))


@pytest.fixture(scope="module")
def pl3():
    return PL3


@pytest.fixture(scope="module")
def pl5():
    return build_plane(build_nearfield(2, 5))


def random_maps(pl, count, seed):
    rng = random.Random(seed)
    Q = pl.Q
    nfrob = co.automorphism_count(pl.N)
    return [
        co.Collineation(rng.randrange(2), rng.randrange(1, Q), rng.randrange(1, Q),
                        rng.randrange(Q), rng.randrange(Q), rng.randrange(nfrob))
        for _ in range(count)
    ]


def test_worked_example(pl3):
    # phi(2, 1+i) sends (1, 1, 1) to (1*2, 1*(1+i), 1) = (2, 1+i, 1)
    F = pl3.N.F
    one_plus_i = F.add_table[1][F.encode((0, 1))]
    k = co.phi_map(2, one_plus_i)
    assert co.apply(pl3, k, (1, 1, 1)) == (2, one_plus_i, 1)
    assert co.apply(pl3, k, (0, 0, 1)) == (0, 0, 1)
    # the swap map exchanges the coordinates before scaling
    s = co.swap_map(2, 1, 0, 0)
    x = F.encode((0, 1))
    assert co.apply(pl3, s, (x, 1, 1)) == (nm_mul(pl3.N, 1, 2), x, 1)


def test_special_points_and_lines(pl3):
    for k in random_maps(pl3, 30, 11):
        if k.kind == 0:
            assert co.apply(pl3, k, (0, 1, 0)) == (0, 1, 0)
        else:
            assert co.apply(pl3, k, (0, 1, 0)) == (1, 0, 0)
            assert co.apply(pl3, k, (1, 0, 0)) == (0, 1, 0)
        assert co.apply_line(pl3, k, (0, 0, 1)) == (0, 0, 1)


def test_incidence_preserved_exhaustive(pl3):
    n = pl3.n_points
    points = [id_point(pl3, i) for i in range(n)]
    lines = [id_line(pl3, i) for i in range(n)]
    for k in random_maps(pl3, 12, 23):
        imgs = [co.apply(pl3, k, P) for P in points]
        limgs = [co.apply_line(pl3, k, L) for L in lines]
        assert len(set(imgs)) == n
        assert len(set(limgs)) == n
        for P, iP in zip(points, imgs):
            for L, iL in zip(lines, limgs):
                assert incident(pl3, P, L) == incident(pl3, iP, iL)


def test_frobenius_applies_first(pl3):
    F = pl3.N.F
    g = F.gamma
    k = co.Collineation(0, 2, 1, 1, 0, 1)
    want_x = F.add_table[nm_mul(pl3.N, gf.frob(F, g, 1), 2)][1]
    assert co.apply(pl3, k, (g, 0, 1))[0] == want_x


def test_compose_certified_and_associative(pl3):
    maps = random_maps(pl3, 25, 37)
    rng = random.Random(5)
    for _ in range(250):
        a, b = rng.choice(maps), rng.choice(maps)
        ab = co.compose(pl3, a, b)
        P = (rng.randrange(9), rng.randrange(9), 1)
        assert co.apply(pl3, ab, P) == co.apply(pl3, b, co.apply(pl3, a, P))
    for _ in range(60):
        a, b, c = rng.choice(maps), rng.choice(maps), rng.choice(maps)
        left = co.compose(pl3, co.compose(pl3, a, b), c)
        right = co.compose(pl3, a, co.compose(pl3, b, c))
        assert left.key() == right.key()
    ident = co.identity()
    for a in maps:
        assert co.compose(pl3, a, ident).key() == a.key()
        assert co.compose(pl3, ident, a).key() == a.key()


def test_inverse_roundtrip(pl3):
    for k in random_maps(pl3, 40, 41):
        ki = co.inverse(pl3, k)
        assert co.compose(pl3, k, ki).key() == co.identity().key()
        assert co.compose(pl3, ki, k).key() == co.identity().key()


def test_canonicalize_action(pl3):
    maps = random_maps(pl3, 40, 43)
    for k in maps:
        rec = co.canonicalize_action(pl3, lambda P, kk=k: co.apply(pl3, kk, P))
        assert rec.key() == k.key()
    with pytest.raises(InvalidParameters):
        co.canonicalize_action(pl3, lambda P: (0, 0, 1))


def test_action_faithful_sampled(pl3):
    points = [id_point(pl3, i) for i in range(pl3.n_points)]
    maps = random_maps(pl3, 120, 47)
    sigs = {}
    for k in maps:
        sig = tuple(co.apply(pl3, k, P) for P in points)
        if sig in sigs:
            assert sigs[sig] == k.key()
        sigs[sig] = k.key()
    assert len(sigs) == len({k.key() for k in maps})


def test_linear_group_order_and_closure(pl3):
    Q = pl3.Q
    G = co.linear_group(pl3)
    assert len(G) == 2 * Q * Q * (Q - 1) * (Q - 1)
    H = co.generate_group(pl3, co.linear_generators(pl3))
    assert len(H) == len(G)
    assert {k.key() for k in H} == {k.key() for k in G}


def test_standard_group_size(pl3):
    S = co.standard_group(pl3)
    assert len(S) == 2 * len(co.linear_group(pl3))
    arr = co.standard_array(pl3)
    assert arr.shape == (len(S), 6)
    assert {tuple(int(t) for t in row) for row in arr} == {k.key() for k in S}


def test_translation_identities(pl3):
    N = pl3.N
    Q = pl3.Q
    T = co.translation_subgroup(pl3)
    assert len(T) == Q * Q
    rng = random.Random(59)
    # conjugating a vertical translation by phi(c,d,0,0) rescales it by d
    for _ in range(200):
        c, d = rng.randrange(1, Q), rng.randrange(1, Q)
        w = rng.randrange(Q)
        rho = co.phi_map(c, d)
        got = co.conjugate(pl3, co.phi_map(1, 1, 0, w), rho)
        assert got.key() == co.phi_map(1, 1, 0, nm_mul(N, w, d)).key()
    # vertical lines move by the first scale only
    for _ in range(100):
        c, d = rng.randrange(1, Q), rng.randrange(1, Q)
        v, z = rng.randrange(Q), rng.randrange(Q)
        k = co.phi_map(c, d, 0, v)
        assert co.apply_line(pl3, k, (1, 0, z)) == (1, 0, nm_mul(N, z, c))
    # translations are closed and normal in the linear group
    for _ in range(150):
        t = co.phi_map(1, 1, rng.randrange(Q), rng.randrange(Q))
        k = co.Collineation(rng.randrange(2), rng.randrange(1, Q),
                            rng.randrange(1, Q), rng.randrange(Q), rng.randrange(Q), 0)
        assert co.conjugate(pl3, t, k) in T


def test_central_classification(pl3):
    trans = co.phi_map(1, 1, 1, 0)
    res = co.central_classification(pl3, trans)
    assert res is not None
    assert res["kind"] == "elation"
    assert res["axis"] == (0, 0, 1)
    assert incident(pl3, res["center"], res["axis"])

    hom = co.phi_map(2, 1)
    res = co.central_classification(pl3, hom)
    assert res is not None
    assert res["kind"] == "homology"
    assert res["axis"] == (1, 0, 0)
    assert res["center"] == (1, 0, 0)
    assert not incident(pl3, res["center"], res["axis"])

    assert co.central_classification(pl3, co.identity()) is None
    # a generic map with no full axis is not central
    assert co.central_classification(pl3, co.swap_map(2, 1, 1, 2)) is None


def inline_norm_unital(pl):
    F = pl.N.F
    q = pl.N.q
    eps = gf.constants(F)["epsilon"]
    U = {(0, 1, 0)}
    for x in range(pl.Q):
        nx = gf.norm(F, x)
        for t in range(q):
            te = gf.mul(F, F.encode((t, 0)), eps)
            U.add((x, F.add_table[nx][te], 1))
    return U


def test_stabilizer_paths_agree(pl3):
    U = inline_norm_unital(pl3)
    assert len(U) == 28
    arr_lin = co.stabilizer_in_standard(pl3, U, linear_only=True)
    arr_std = co.stabilizer_in_standard(pl3, U)
    assert len(arr_lin) == 24
    assert len(arr_std) == 48
    G = co.standard_group(pl3)
    grp_std = co.stabilizer(G, U)
    assert {k.key() for k in grp_std} == {k.key() for k in arr_std}
    for k in arr_std:
        imgs = {co.apply(pl3, k, P) for P in U}
        assert imgs == U


def test_stabilizer_order_q5(pl5):
    U = inline_norm_unital(pl5)
    assert len(U) == 126
    stab = co.stabilizer_in_standard(pl5, U, linear_only=True)
    assert len(stab) == 120


def test_apply_probe_kernel_matches(pl3):
    from unital_forge._kernels import apply_probe

    maps = random_maps(pl3, 50, 61)
    elems = np.array([k.key() for k in maps], dtype=np.int32)
    FROB = co.frobenius_table(pl3.N)
    rng = random.Random(67)
    for _ in range(10):
        px, py = rng.randrange(9), rng.randrange(9)
        want = np.array(
            [point_id(pl3, co.apply(pl3, k, (px, py, 1))) for k in maps],
            dtype=np.int64)
        for backend in ("numba", "numpy"):
            try:
                got = apply_probe(elems, pl3.N, FROB, px, py, backend=backend)
            except InvalidParameters:
                continue
            assert np.array_equal(got, want)


def test_element_order(pl3):
    assert co.element_order(pl3, co.identity()) == 1
    assert co.element_order(pl3, co.phi_map(1, 1, 1, 0)) == 3
    assert co.element_order(pl3, co.swap_map(1, 1)) == 2
    with pytest.raises(BudgetExceeded):
        co.element_order(pl3, co.phi_map(2, 1), cap=1)


def test_generate_group_budget(pl3):
    with pytest.raises(BudgetExceeded):
        co.generate_group(pl3, co.linear_generators(pl3), budget=100)


def test_bad_parameters(pl3):
    with pytest.raises(InvalidParameters):
        co.phi_map(0, 1)
    with pytest.raises(InvalidParameters):
        co.swap_map(1, 0)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 1), st.integers(1, 8), st.integers(1, 8),
       st.integers(0, 8), st.integers(0, 8), st.integers(0, 1))
def test_inverse_is_involution(kind, c, d, u, v, f):
    k = co.Collineation(kind, c, d, u, v, f)
    assert co.inverse(PL3, co.inverse(PL3, k)).key() == k.key()


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_translations_commute(u1, v1, u2, v2):
    a = co.phi_map(1, 1, u1, v1)
    b = co.phi_map(1, 1, u2, v2)
    assert co.compose(PL3, a, b).key() == co.compose(PL3, b, a).key()
