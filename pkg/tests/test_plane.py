"""Plane layer: incidence oracles, joins, meets, axiom certification."""
from __future__ import annotations

import pytest

from unital_forge import nearfield as nf
from unital_forge import plane as pl
from unital_forge.errors import InvalidParameters, SamePoint


@pytest.fixture(scope="module")
def P3():
    return pl.build_plane(nf.build_nearfield(2, 3))


def test_incidence_oracle(P3):
    assert pl.incident(P3, (1, 1, 1), (2, 1, 0))
    assert not pl.incident(P3, (1, 2, 1), (2, 1, 0))


def test_join_oracles(P3):
    assert pl.line_through(P3, (0, 0, 1), (1, 1, 1)) == (2, 1, 0)
    assert pl.line_through(P3, (0, 0, 1), (0, 1, 1)) == (1, 0, 0)
    assert pl.line_through(P3, (0, 1, 0), (1, 0, 0)) == (0, 0, 1)
    with pytest.raises(SamePoint):
        pl.line_through(P3, (1, 1, 1), (1, 1, 1))


def test_join_symmetry_exhaustive(P3):
    pts = [pl.id_point(P3, pid) for pid in range(P3.n_points)]
    for a in range(0, len(pts), 7):
        for b in range(a + 1, len(pts), 5):
            L1 = pl.line_through(P3, pts[a], pts[b])
            L2 = pl.line_through(P3, pts[b], pts[a])
            assert L1 == L2
            assert pl.incident(P3, pts[a], L1) and pl.incident(P3, pts[b], L1)


def test_points_on_line_order_and_content(P3):
    pts = pl.points_on_line(P3, (2, 1, 0))
    assert len(pts) == 10
    assert pts[-1] == (1, 1, 0)                    # infinite point last
    affine = pts[:-1]
    assert [p[0] for p in affine] == list(range(9))  # ascending x
    assert all(pl.incident(P3, p, (2, 1, 0)) for p in pts)

    vert = pl.points_on_line(P3, (1, 0, 2))
    assert vert[-1] == (0, 1, 0)
    assert all(p[0] == 1 for p in vert[:-1])       # x = -2 = 1
    assert [p[1] for p in vert[:-1]] == list(range(9))

    inf = pl.points_on_line(P3, (0, 0, 1))
    assert inf[-1] == (0, 1, 0)
    assert inf[:-1] == [(1, y, 0) for y in range(9)]


def test_class_incidence_facts(P3):
    # verticals all pass through (0,1,0); obliques never do
    for t in range(9):
        assert pl.incident(P3, (0, 1, 0), (1, 0, t))
        for s in range(9):
            assert not pl.incident(P3, (0, 1, 0), (s, 1, t))
    # infinite points never sit on verticals
    for y in range(9):
        for t in range(9):
            assert not pl.incident(P3, (1, y, 0), (1, 0, t))
    # the infinite line carries exactly the points at infinity
    on = [pl.id_point(P3, pid) for pid in range(P3.n_points)
          if pl.incident(P3, pl.id_point(P3, pid), (0, 0, 1))]
    assert len(on) == 10
    assert all(p[2] == 0 for p in on)


def test_meet(P3):
    assert pl.meet(P3, (1, 0, 0), (0, 0, 1)) == (0, 1, 0)
    assert pl.meet(P3, (2, 1, 0), (1, 0, 0)) == (0, 0, 1)
    with pytest.raises(SamePoint):
        pl.meet(P3, (2, 1, 0), (2, 1, 0))
    # meet inverts join on a sample
    for lid1 in range(0, P3.n_points, 11):
        for lid2 in range(lid1 + 1, P3.n_points, 13):
            L1, L2 = pl.id_line(P3, lid1), pl.id_line(P3, lid2)
            P = pl.meet(P3, L1, L2)
            assert pl.incident(P3, P, L1) and pl.incident(P3, P, L2)


def test_lines_through_point_matches_incidence(P3):
    for pid in range(P3.n_points):
        P = pl.id_point(P3, pid)
        pencil = pl.lines_through_point(P3, P)
        assert len(pencil) == 10
        assert len(set(pencil)) == 10
        for L in pencil:
            assert pl.incident(P3, P, L)


def test_id_codecs_roundtrip(P3):
    for pid in range(P3.n_points):
        assert pl.point_id(P3, pl.id_point(P3, pid)) == pid
    for lid in range(P3.n_points):
        assert pl.line_id(P3, pl.id_line(P3, lid)) == lid
    with pytest.raises(InvalidParameters):
        pl.point_id(P3, (2, 3, 2))
    with pytest.raises(InvalidParameters):
        pl.id_point(P3, 91)


def test_axioms_q3_q5_both_backends():
    for q in (3, 5):
        P = pl.build_plane(nf.build_nearfield(2, q))
        rep_nb = pl.verify_plane_axioms(P)
        rep_np = pl.verify_plane_axioms(P, backend="numpy")
        assert rep_nb["ok"], rep_nb
        assert rep_nb == rep_np
        assert rep_nb["n_points"] == q ** 4 + q ** 2 + 1
        assert rep_nb["points_per_line"] == q ** 2 + 1


def test_axioms_desarguesian_control():
    # N(1,9) gives the classical plane of order 9
    P = pl.build_plane(nf.build_nearfield(1, 9))
    rep = pl.verify_plane_axioms(P)
    assert rep["ok"]
    assert rep["n_points"] == 91


def test_rendering(P3):
    assert pl.point_str(P3, (4, 7, 1)) == "(1+i, 1+2i, 1)"
    assert pl.line_str(P3, (2, 1, 0)) == "[2, 1, 0]"
    assert pl.line_class((2, 1, 0)) == "oblique"
    assert pl.line_class((1, 0, 5)) == "vertical"
    assert pl.line_class((0, 0, 1)) == "infinite"
