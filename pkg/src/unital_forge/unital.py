"""Unital candidates in nearfield planes and their certification.

Constructors build literal point sets and never assert unital-hood;
verify_unital certifies the line-intersection profile separately. The
structural report extracts the translation stabilizer, the scalar data
(C, D, delta, r) and certifies each clause independently.
"""
from __future__ import annotations

from math import isqrt

import numpy as np

from . import gf
from . import collineation as co
from .errors import (
    HypothesisFailed, InvalidParameters, PointInUnital, SizeMismatch,
)
from .nearfield import build_nearfield, nm_mul, nm_inv
from .plane import (
    Plane, build_plane, id_line, line_point_table, line_class, line_id,
    lines_through_point, point_id, points_on_line,
)

_PLANES: dict[tuple[int, int], Plane] = {}


def ambient_plane(n: int, q: int) -> Plane:
    if (n, q) not in _PLANES:
        _PLANES[(n, q)] = build_plane(build_nearfield(n, q))
    return _PLANES[(n, q)]


class Unital:
    """A point set in a plane, with cached ids and secant blocks."""

    def __init__(self, plane: Plane, points, family: str = "custom",
                 params: dict | None = None):
        self.plane = plane
        self.points = frozenset(points)
        self.family = family
        self.params = dict(params or {})
        self.ids = frozenset(point_id(plane, P) for P in self.points)
        self.m = isqrt(plane.Q)
        self._blocks = None

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, P) -> bool:
        return tuple(P) in self.points

    def member_mask(self) -> np.ndarray:
        mask = np.zeros(self.plane.n_points, dtype=bool)
        mask[list(self.ids)] = True
        return mask

    def blocks(self) -> list[tuple[int, int, int]]:
        """Lines meeting the set in at least 2 points, in line-id order."""
        if self._blocks is None:
            counts = line_point_counts(self.plane, self.member_mask())
            self._blocks = [id_line(self.plane, int(i))
                            for i in np.nonzero(counts >= 2)[0]]
        return self._blocks

    def to_dict(self) -> dict:
        return {
            "q": self.m,
            "family": self.family,
            "params": self.params,
            "points": sorted(self.points, key=lambda P: point_id(self.plane, P)),
        }


def line_point_counts(plane: Plane, mask: np.ndarray) -> np.ndarray:
    """Number of masked points on each line, indexed by line id."""
    table = line_point_table(plane)
    return mask[table].sum(axis=1)


def make_hermitian(q: int) -> Unital:
    """Points of x^(q+1) = y^q + y in the field plane over GF(q^2)."""
    pl = ambient_plane(1, q * q)
    F = pl.N.F
    pts = {(0, 1, 0)}
    for x in range(F.q):
        for y in range(F.q):
            if gf.norm(F, x) == gf.trace(F, y):
                pts.add((x, y, 1))
    return Unital(pl, pts, family="hermitian", params={"q": q})


def make_wantz(q: int, a: int, b: int) -> Unital:
    """Candidate {(x, a x^2 + b x^(q+1) + t eps, 1)} + {(0,1,0)}.

    Field arithmetic throughout; validity is deliberately not enforced
    here, that is wantz_condition's and verify_unital's job.
    """
    pl = ambient_plane(2, q)
    F = pl.N.F
    eps = gf.constants(F)["epsilon"]
    scalars = gf.subfield_elements(F)
    pts = {(0, 1, 0)}
    for x in range(F.q):
        base = F.add_table[gf.mul(F, a, gf.mul(F, x, x))][
            gf.mul(F, b, gf.pow(F, x, q + 1))]
        for t in scalars:
            pts.add((x, F.add_table[base][gf.mul(F, t, eps)], 1))
    return Unital(pl, pts, family="wantz", params={"q": q, "a": a, "b": b})


def wantz_condition(q: int, a: int, b: int) -> bool:
    """Exact unitality test for the (a, b) coefficients of make_wantz.

    Membership of an affine point (x, y) depends only on Tr(y); the
    candidate is a unital exactly when the scalar-valued quadratic form
    x -> Tr(a x^2 + b x^(q+1)) vanishes only at x = 0, which reduces to
    Tr(b)^2 - 4 Nm(a) being a nonzero square of GF(q).  For a, b already
    in GF(q) this is the classical condition b^2 - a^2 in the nonzero
    squares; for coefficients outside GF(q) the classical expression is
    wrong and this form is the one verify_unital agrees with.
    """
    pl = ambient_plane(2, q)
    F = pl.N.F
    t = gf.trace(F, b)
    four = 0
    for _ in range(4):
        four = gf.add(F, four, 1)
    v = gf.sub(F, gf.mul(F, t, t), gf.mul(F, four, gf.norm(F, a)))
    return v != 0 and gf.pow(F, v, (q - 1) // 2) == 1


def make_U(q: int, b: int, j: int) -> Unital:
    """Candidate {(x, b Nm(x)^j + t eps, 1)} + {(0,1,0)}, b nonzero scalar."""
    pl = ambient_plane(2, q)
    F = pl.N.F
    if b == 0 or not gf.in_subfield(F, b):
        raise InvalidParameters(f"b={b} is not a nonzero subfield scalar")
    eps = gf.constants(F)["epsilon"]
    scalars = gf.subfield_elements(F)
    pts = {(0, 1, 0)}
    for x in range(F.q):
        base = gf.mul(F, b, gf.pow(F, gf.norm(F, x), j))
        for t in scalars:
            pts.add((x, F.add_table[base][gf.mul(F, t, eps)], 1))
    return Unital(pl, pts, family="U", params={"q": q, "b": b, "j": j})


def make_V(q: int, j: int) -> set:
    """The square-supported set {(x, x^(j(q+1)/2) + t eps, 1)}."""
    if q % 4 != 3:
        raise InvalidParameters(f"q={q} is not 3 mod 4")
    pl = ambient_plane(2, q)
    F = pl.N.F
    eps = gf.constants(F)["epsilon"]
    scalars = gf.subfield_elements(F)
    k = j * (q + 1) // 2
    pts = set()
    for x in range(1, F.q):
        if not gf.is_square(F, x):
            continue
        base = gf.pow(F, x, k)
        for t in scalars:
            pts.add((x, F.add_table[base][gf.mul(F, t, eps)], 1))
    return pts


def make_B(q: int, a: int, b: int) -> set:
    """The affine block {(x, y, 1) : Nm(x) = a and Tr(y) = b}."""
    pl = ambient_plane(2, q)
    F = pl.N.F
    if not (gf.in_subfield(F, a) and gf.in_subfield(F, b)):
        raise InvalidParameters(f"B({a},{b}) needs subfield parameters")
    pts = set()
    for x in range(F.q):
        if gf.norm(F, x) != a:
            continue
        for y in range(F.q):
            if gf.trace(F, y) == b:
                pts.add((x, y, 1))
    return pts


def verify_unital(plane: Plane, S) -> dict:
    """Certify the line-intersection profile of a point set.

    A set of size m^3+1 is a unital iff every line meets it in 1 or m+1
    points; the report carries the full histogram and a witness line for
    failures.
    """
    m = isqrt(plane.Q)
    pts = {tuple(P) for P in S}
    if len(pts) != m ** 3 + 1:
        raise SizeMismatch("unital point count", m ** 3 + 1, len(pts))
    mask = np.zeros(plane.n_points, dtype=bool)
    mask[[point_id(plane, P) for P in pts]] = True
    counts = line_point_counts(plane, mask)

    hist = {}
    for c in np.bincount(counts).nonzero()[0]:
        hist[int(c)] = int((counts == c).sum())
    legal = {1, m + 1}
    bad = [int(i) for i in np.nonzero(~np.isin(counts, list(legal)))[0]]
    witness = None
    if bad:
        lid = bad[0]
        witness = {"line": id_line(plane, lid), "count": int(counts[lid])}
    is_unital = not bad

    tangents_ok = None
    if is_unital:
        assert hist == {1: m ** 3 + 1, m + 1: m * m * (m * m - m + 1)}
        per_point = np.zeros(plane.n_points, dtype=np.int64)
        table = line_point_table(plane)
        tangent_rows = np.nonzero(counts == 1)[0]
        for row in tangent_rows:
            per_point[table[row]] += 1
        tangents_ok = bool((per_point[mask] == 1).all())

    inf_count = int(counts[line_id(plane, (0, 0, 1))])
    profile = {1: "parabolic", m + 1: "hyperbolic"}.get(inf_count, "other")
    inf_point = None
    if profile == "parabolic":
        inf_point = next(P for P in points_on_line(plane, (0, 0, 1)) if P in pts)
    return {
        "order": m,
        "size": len(pts),
        "is_unital": is_unital,
        "histogram": hist,
        "tangent_count_per_point_ok": tangents_ok,
        "witness": witness,
        "infinity_profile": profile,
        "infinity_point": inf_point,
        "checked_lines": int(len(counts)),
    }


def tangency_points(U: Unital, P) -> list:
    """The unital point on each tangent line through an external point."""
    P = tuple(P)
    if P in U.points:
        raise PointInUnital(P)
    plane = U.plane
    out = []
    for L in lines_through_point(plane, P):
        hits = [T for T in points_on_line(plane, L) if T in U.points]
        if len(hits) == 1:
            out.append(hits[0])
    out.sort(key=lambda T: point_id(plane, T))
    return out


def _multiplicative_closure_ok(N, elems: set) -> bool:
    if 1 not in elems or 0 in elems:
        return False
    for a in elems:
        if nm_inv(N, a) not in elems:
            return False
        for b in elems:
            if nm_mul(N, a, b) not in elems:
                return False
    return True


def _scalar_field_order(F: gf.Field, W: set, q: int, p: int, e: int) -> int:
    """Largest subfield of GF(q) whose scalars fix W setwise."""
    best = 1
    for d in range(1, e + 1):
        if e % d:
            continue
        qd = p ** d
        step = (F.q - 1) // (qd - 1)
        scalars = [0] + [F.exp[k * step] for k in range(qd - 1)]
        if all(gf.mul(F, lam, w) in W for lam in scalars for w in W):
            best = qd
    return best


def structure_report(U: Unital, backend: str | None = None) -> dict:
    """Clause-by-clause structural certification of a unital's stabilizer.

    Extracts H = G meet translations, the parameter subspace W, the
    scalar sets C and D with the map delta between them, and certifies
    each claim independently; flags are booleans, never assumptions.
    """
    plane = U.plane
    N = plane.N
    F = N.F
    q = U.m
    p, e = N.p, N.e

    G = co.stabilizer_in_standard(plane, U.points, linear_only=True,
                                  backend=backend)
    o_G = len(G)
    if o_G % q != 0:
        raise HypothesisFailed(f"stabilizer order {o_G} lacks the q={q} part")

    H = [k for k in G if k.kind == 0 and k.c == 1 and k.d == 1]
    nontrivial = [h for h in H if (h.u, h.v) != (0, 0)]
    if all(h.u == 0 for h in H):
        branch = "vertical"
    elif all(h.u == h.v for h in H):
        branch = "diagonal"
    else:
        raise HypothesisFailed("translation stabilizer is not in one"
                               " elation family")

    W = sorted(h.v if branch == "vertical" else h.u for h in H)
    Wset = set(W)
    w_subspace = (0 in Wset
                  and all(F.add_table[a][b] in Wset for a in Wset for b in Wset))

    flags = {}
    report = {
        "q": q,
        "branch": branch,
        "o_G": o_G,
        "o_H": len(H),
        "W": W,
    }

    if branch == "vertical":
        # (i) parabolic with the vertex on the unital
        mask = U.member_mask()
        counts = line_point_counts(plane, mask)
        flags["i_parabolic"] = ((0, 1, 0) in U.points
                                and int(counts[line_id(plane, (0, 0, 1))]) == 1)
        # (ii) W is a subspace of size q with its scalar field
        q0 = _scalar_field_order(F, Wset, q, p, e)
        flags["ii_subspace"] = w_subspace and len(Wset) == q
        report["q0"] = q0
        flags["ii_scalar_field"] = q0 >= p
        # (iii) the vertical axis meets U in the W-column, which is also
        # the affine tangency set of (1,0,0)
        col = {P for P in U.points if P[2] == 1 and P[0] == 0}
        flags["iii_column"] = col == {(0, w, 1) for w in Wset}
        aff_tang = [T for T in tangency_points(U, (1, 0, 0)) if T[2] == 1]
        flags["iii_tangency"] = (len(aff_tang) == q
                                 and set(aff_tang) == col)
        # (iv) G = H G1 with the q-part present and o(G) | q(q^2-1)
        G1 = [k for k in G if k.u == 0 and k.v == 0 and k.kind == 0]
        keys = {k.key() for k in G}
        prod = {co.compose(plane, h, g1, certify=False).key()
                for h in H for g1 in G1}
        flags["iv_decomposition"] = (prod == keys
                                     and all(k.kind == 0 for k in G)
                                     and o_G % q == 0
                                     and (q * (q * q - 1)) % o_G == 0)
        # (v) H normal in G
        h_keys = {x.key() for x in H}
        flags["v_normal"] = all(
            co.conjugate(plane, h, g).key() in h_keys
            for h in H for g in G)
        # (vi) o(G1) = o(G)/q
        flags["vi_index"] = len(G1) * q == o_G
        # (vii) C is a multiplicative subgroup of the nearfield
        C = {k.c for k in G1}
        flags["vii_subgroup"] = (len(C) == len(G1)
                                 and _multiplicative_closure_ok(N, C))
        # (viii) D is a subgroup of the scalar field's units
        D = {k.d for k in G1}
        in_scalar = all(gf.in_subfield(F, d) for d in D)
        flags["viii_subgroup"] = (in_scalar
                                  and _multiplicative_closure_ok(N, D))
        # (ix) delta: C -> D functional, onto, r-to-1 homomorphism
        delta = {}
        functional = True
        for k in G1:
            if k.c in delta and delta[k.c] != k.d:
                functional = False
            delta[k.c] = k.d
        hom = all(delta[nm_mul(N, c1, c2)] == nm_mul(N, delta[c1], delta[c2])
                  for c1 in delta for c2 in delta)
        onto = set(delta.values()) == D
        r = len(C) // len(D) if D else 0
        kernel = {c for c, d in delta.items() if d == 1}
        fibers_ok = all(
            sum(1 for c in delta if delta[c] == d) == r for d in D)
        flags["ix_delta"] = (functional and hom and onto and fibers_ok
                             and len(kernel) == r and (q + 1) % r == 0)
        report["C"] = sorted(C)
        report["D"] = sorted(D)
        report["delta"] = {c: delta[c] for c in sorted(delta)}
        report["r"] = r
        report["kernel"] = sorted(kernel)
    else:
        # the diagonal branch: the anchor line meets U in exactly the
        # diagonal W-points and the stabilizer reduces to H alone
        diag = {P for P in U.points if P[2] == 1 and P[0] == P[1]}
        want = {(w, w, 1) for w in Wset}
        flags["diag_points"] = diag == want
        flags["iv_G_equals_H"] = {k.key() for k in G} == {k.key() for k in H}

    report["nontrivial_translations"] = len(nontrivial)
    report["clause_flags"] = flags
    report["all_pass"] = all(flags.values())
    return report
