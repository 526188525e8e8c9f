"""The projective plane coordinatized by a nearfield.

Points are (x, y, 1) for x, y in N, (1, y, 0) for y in N, and (0, 1, 0).
Lines are [s, 1, t] for s, t in N ("oblique"), [1, 0, t] ("vertical"),
and [0, 0, 1] (the line at infinity).  A point (x, y, z) lies on a line
[s, u, t] exactly when x*s + y*u + z*t = 0 in the nearfield.

Interning: affine (x, y, 1) gets id x*Q + y, infinite (1, y, 0) gets
Q*Q + y, and (0, 1, 0) gets Q*Q + Q; lines mirror this with [s, 1, t]
at s*Q + t, [1, 0, t] at Q*Q + t, and [0, 0, 1] at Q*Q + Q.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gf
from .errors import InvalidParameters, SamePoint
from .nearfield import Nearfield, nm_mul, nm_inv


@dataclass
class Plane:
    N: Nearfield
    Q: int
    n_points: int
    _line_pts_cache: dict = field(default_factory=dict, repr=False)
    _pencil_cache: dict = field(default_factory=dict, repr=False)
    _line_table: np.ndarray = field(default=None, repr=False)

    def name(self) -> str:
        return f"NP({self.N.name()})"


def build_plane(N: Nearfield) -> Plane:
    Q = N.Q
    return Plane(N=N, Q=Q, n_points=Q * Q + Q + 1)


# -- coordinate plumbing -------------------------------------------------------


def _norm_point(P) -> tuple[int, int, int]:
    if len(P) != 3:
        raise InvalidParameters(f"point must have 3 coordinates, got {P!r}")
    return (int(P[0]), int(P[1]), int(P[2]))


def point_id(plane: Plane, P) -> int:
    x, y, z = _norm_point(P)
    Q = plane.Q
    if z == 1:
        return x * Q + y
    if z == 0 and x == 1:
        return Q * Q + y
    if z == 0 and x == 0 and y == 1:
        return Q * Q + Q
    raise InvalidParameters(f"point {P!r} is not in normalized form")


def id_point(plane: Plane, pid: int) -> tuple[int, int, int]:
    Q = plane.Q
    if pid < Q * Q:
        return (pid // Q, pid % Q, 1)
    if pid < Q * Q + Q:
        return (1, pid - Q * Q, 0)
    if pid == Q * Q + Q:
        return (0, 1, 0)
    raise InvalidParameters(f"point id {pid} out of range")


def line_id(plane: Plane, L) -> int:
    s, u, t = _norm_point(L)
    Q = plane.Q
    if u == 1:
        return s * Q + t
    if u == 0 and s == 1:
        return Q * Q + t
    if u == 0 and s == 0 and t == 1:
        return Q * Q + Q
    raise InvalidParameters(f"line {L!r} is not in normalized form")


def id_line(plane: Plane, lid: int) -> tuple[int, int, int]:
    Q = plane.Q
    if lid < Q * Q:
        return (lid // Q, 1, lid % Q)
    if lid < Q * Q + Q:
        return (1, 0, lid - Q * Q)
    if lid == Q * Q + Q:
        return (0, 0, 1)
    raise InvalidParameters(f"line id {lid} out of range")


def line_class(L) -> str:
    s, u, t = L
    if u == 1:
        return "oblique"
    if s == 1:
        return "vertical"
    return "infinite"


def point_str(plane: Plane, P) -> str:
    F = plane.N.F
    x, y, z = _norm_point(P)
    return f"({gf.element_str(F, x)}, {gf.element_str(F, y)}, {z})"


def line_str(plane: Plane, L) -> str:
    F = plane.N.F
    s, u, t = _norm_point(L)
    return f"[{gf.element_str(F, s)}, {u}, {gf.element_str(F, t)}]"


# -- incidence and joins -------------------------------------------------------


def incident(plane: Plane, P, L) -> bool:
    """x*s + y*u + z*t = 0, evaluated through the nearfield tables."""
    x, y, z = _norm_point(P)
    s, u, t = _norm_point(L)
    N = plane.N
    A = N.F.add_table
    M = N.mul
    return A[A[M[x][s]][M[y][u]]][M[z][t]] == 0


def line_through(plane: Plane, P1, P2) -> tuple[int, int, int]:
    """The unique line joining two distinct points, post-verified."""
    p1 = _norm_point(P1)
    p2 = _norm_point(P2)
    if p1 == p2:
        raise SamePoint(p1)
    N = plane.N
    F = N.F
    A = F.add_table
    NEG = F.neg_table

    if p1[2] == 0 and p2[2] == 0:
        L = (0, 0, 1)
    elif p1[2] == 1 and p2[2] == 1:
        x1, y1, _ = p1
        x2, y2, _ = p2
        if x1 == x2:
            L = (1, 0, NEG[x1])
        else:
            a = A[x1][NEG[x2]]
            b = A[y2][NEG[y1]]
            s = nm_mul(N, nm_inv(N, a), b)
            t = NEG[A[nm_mul(N, x1, s)][y1]]
            L = (s, 1, t)
    else:
        aff, inf = (p1, p2) if p1[2] == 1 else (p2, p1)
        x1, y1, _ = aff
        if inf == (0, 1, 0):
            L = (1, 0, NEG[x1])
        else:
            s = NEG[inf[1]]
            t = NEG[A[nm_mul(N, x1, s)][y1]]
            L = (s, 1, t)

    if not (incident(plane, p1, L) and incident(plane, p2, L)):
        raise InvalidParameters(
            f"join formula produced a non-incident line {L} for {p1}, {p2}"
        )
    return L


def points_on_line(plane: Plane, L) -> list[tuple[int, int, int]]:
    """All Q+1 points of a line: affine ascending by id, then infinite."""
    s, u, t = _norm_point(L)
    N = plane.N
    Q = plane.Q
    NEG = N.F.neg_table
    A = N.F.add_table
    out = []
    if u == 1:
        for x in range(Q):
            y = NEG[A[nm_mul(N, x, s)][t]]
            out.append((x, y, 1))
        out.append((1, NEG[s], 0))
    elif s == 1:
        x = NEG[t]
        for y in range(Q):
            out.append((x, y, 1))
        out.append((0, 1, 0))
    else:
        for y in range(Q):
            out.append((1, y, 0))
        out.append((0, 1, 0))
    return out


def line_points_ids(plane: Plane, lid: int) -> np.ndarray:
    cached = plane._line_pts_cache.get(lid)
    if cached is None:
        pts = points_on_line(plane, id_line(plane, lid))
        cached = np.array([point_id(plane, P) for P in pts], dtype=np.int32)
        plane._line_pts_cache[lid] = cached
    return cached


def line_point_table(plane: Plane) -> np.ndarray:
    """Dense (n_lines, Q+1) table of point ids per line."""
    if plane._line_table is None:
        n = plane.n_points
        tab = np.empty((n, plane.Q + 1), dtype=np.int32)
        for lid in range(n):
            tab[lid] = line_points_ids(plane, lid)
        plane._line_table = tab
    return plane._line_table


def lines_through_point(plane: Plane, P) -> list[tuple[int, int, int]]:
    """All Q+1 lines through a point, deterministic order."""
    x, y, z = _norm_point(P)
    N = plane.N
    Q = plane.Q
    NEG = N.F.neg_table
    A = N.F.add_table
    out = []
    if z == 1:
        for s in range(Q):
            t = NEG[A[nm_mul(N, x, s)][y]]
            out.append((s, 1, t))
        out.append((1, 0, NEG[x]))
    elif (x, y) == (0, 1):
        for t in range(Q):
            out.append((1, 0, t))
        out.append((0, 0, 1))
    else:
        s = NEG[y]
        for t in range(Q):
            out.append((s, 1, t))
        out.append((0, 0, 1))
    return out


def meet(plane: Plane, L1, L2) -> tuple[int, int, int]:
    """The unique common point of two distinct lines, by direct scan."""
    l1 = _norm_point(L1)
    l2 = _norm_point(L2)
    if l1 == l2:
        raise SamePoint(l1)
    pts2 = set(points_on_line(plane, l2))
    hits = [P for P in points_on_line(plane, l1) if P in pts2]
    if len(hits) != 1:
        raise InvalidParameters(f"lines {l1} and {l2} meet in {len(hits)} points")
    return hits[0]


# -- axiom certification -------------------------------------------------------


def verify_plane_axioms(plane: Plane, backend: str | None = None,
                        meet_samples: int = 20000) -> dict:
    """Certify the projective plane axioms.

    Point pairs are joined constructively and every join is re-checked
    through the incidence form (exhaustive, all classes).  Exact counts
    then force uniqueness of joins and of meets: with every line carrying
    Q+1 points and every point carrying Q+1 lines, the identity
    sum_L C(|L|, 2) = C(n_points, 2) leaves no room for a second line
    through any pair, and dually for meets.  Line pairs are additionally
    met by direct scan, all of them when the plane is small, a seeded
    sample otherwise.
    """
    from ._kernels import affine_join_check

    N = plane.N
    Q = plane.Q
    n = plane.n_points
    report = {"plane": plane.name(), "order": Q, "n_points": n, "n_lines": n}

    tab = line_point_table(plane)
    per_line_ok = tab.shape == (n, Q + 1)
    flat = tab.ravel()
    counts = np.bincount(flat, minlength=n)
    per_point_ok = bool((counts == Q + 1).all())
    distinct_ok = all(len(set(tab[lid].tolist())) == Q + 1 for lid in range(n))
    report["points_per_line"] = Q + 1 if per_line_ok and distinct_ok else None
    report["lines_per_point"] = Q + 1 if per_point_ok else None

    # affine-affine joins, the bulk, run on the selected kernel backend
    bad_pairs, first_witness = affine_join_check(N, backend=backend)
    report["affine_pairs_checked"] = Q * Q * (Q * Q - 1) // 2
    report["affine_join_failures"] = int(bad_pairs)
    if bad_pairs:
        report["join_witness"] = first_witness

    # pairs with at least one point at infinity, pure loop (O(Q^3))
    mixed_fail = 0
    inf_pts = [(1, y, 0) for y in range(Q)] + [(0, 1, 0)]
    for xi in range(Q):
        for yi in range(Q):
            P1 = (xi, yi, 1)
            for P2 in inf_pts:
                L = line_through(plane, P1, P2)
                if not (incident(plane, P1, L) and incident(plane, P2, L)):
                    mixed_fail += 1
    for a in range(len(inf_pts)):
        for b in range(a + 1, len(inf_pts)):
            L = line_through(plane, inf_pts[a], inf_pts[b])
            if not (incident(plane, inf_pts[a], L) and incident(plane, inf_pts[b], L)):
                mixed_fail += 1
    report["mixed_pairs_checked"] = Q * Q * (Q + 1) + (Q + 1) * Q // 2
    report["mixed_join_failures"] = mixed_fail

    pair_total = n * (n - 1) // 2
    double_count = n * (Q + 1) * Q // 2  # n lines, C(Q+1, 2) pairs each
    report["join_double_count_ok"] = bool(double_count == pair_total)
    report["meet_double_count_ok"] = bool(
        per_point_ok and n * (Q + 1) * Q // 2 == pair_total
    )

    # direct meet scans
    rng = np.random.default_rng(20260819)
    if n <= 100:
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    else:
        pairs = set()
        while len(pairs) < meet_samples:
            a, b = rng.integers(0, n, size=2)
            if a != b:
                pairs.add((min(int(a), int(b)), max(int(a), int(b))))
        pairs = sorted(pairs)
    meet_fail = 0
    for a, b in pairs:
        common = np.intersect1d(tab[a], tab[b])
        if len(common) != 1:
            meet_fail += 1
    report["meet_pairs_checked"] = len(pairs)
    report["meet_failures"] = meet_fail

    quad = [(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)]
    joins = {}
    quad_ok = True
    for a in range(4):
        for b in range(a + 1, 4):
            joins[(a, b)] = line_through(plane, quad[a], quad[b])
    quad_ok = len(set(joins.values())) == 6
    for (a, b), L in joins.items():
        others = [quad[k] for k in range(4) if k not in (a, b)]
        if any(incident(plane, P, L) for P in others):
            quad_ok = False
    report["quadrangle"] = quad if quad_ok else None

    report["ok"] = bool(
        per_line_ok and distinct_ok and per_point_ok
        and bad_pairs == 0 and mixed_fail == 0
        and report["join_double_count_ok"] and report["meet_double_count_ok"]
        and meet_fail == 0 and quad_ok
    )
    return report
