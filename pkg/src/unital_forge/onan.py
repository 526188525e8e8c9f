"""O'Nan configurations: collinearity identities, constrained search, obstructions.

A configuration is four distinct blocks meeting in six distinct unital
points. Searches are deterministic serial enumerations so an empty
result is a replayable certificate of absence.
"""
from __future__ import annotations

from math import gcd

from . import gf
from .errors import (
    DegenerateTriple, HypothesisFailed, InvalidParameters, NoObstructionFound,
)
from .nearfield import nm_inv, nm_mul
from .plane import incident, line_through, meet, point_id, points_on_line
from .unital import Unital, ambient_plane, make_B, make_V


def _matches_class(L, cls: str) -> bool:
    s, u, t = L
    if cls == "vertical":
        return u == 0 and s == 1
    if cls == "horizontal":
        return s == 0 and u == 1
    if cls == "oblique":
        return u == 1 and s != 0
    if cls == "infinite":
        return (s, u, t) == (0, 0, 1)
    raise InvalidParameters(f"unknown line class {cls!r}")


class OnanConfig:
    """Four blocks and their six pairwise meets, certified on construction."""

    def __init__(self, plane, lines, points, path: str = "search"):
        lines = [tuple(L) for L in lines]
        points = sorted((tuple(P) for P in points),
                        key=lambda P: point_id(plane, P))
        if len(set(lines)) != 4:
            raise InvalidParameters(f"need 4 distinct lines, got {lines}")
        if len(set(points)) != 6:
            raise InvalidParameters(f"need 6 distinct points, got {points}")
        for L in lines:
            if sum(1 for P in points if incident(plane, P, L)) != 3:
                raise InvalidParameters(f"line {L} does not carry 3 points")
        for P in points:
            if sum(1 for L in lines if incident(plane, P, L)) != 2:
                raise InvalidParameters(f"point {P} is not on exactly 2 lines")
        self.plane = plane
        self.lines = tuple(sorted(lines))
        self.points = tuple(points)
        self.path = path

    def key(self):
        return self.lines

    def to_dict(self) -> dict:
        return {
            "lines": [list(L) for L in self.lines],
            "points": [list(P) for P in self.points],
            "path": self.path,
        }


def collinear_oblique(N, P, P1, P2) -> bool:
    """Ratio test (x-x2)*(x-x1)^-1 == (y-y2)*(y-y1)^-1 for affine triples."""
    P, P1, P2 = tuple(P), tuple(P1), tuple(P2)
    pts = (P, P1, P2)
    if any(len(T) != 3 or T[2] != 1 for T in pts):
        raise DegenerateTriple(pts, "all three points must be affine")
    if len(set(pts)) != 3:
        raise DegenerateTriple(pts, "points must be pairwise distinct")
    F = N.F
    x, y = P[0], P[1]
    x1, y1 = P1[0], P1[1]
    x2, y2 = P2[0], P2[1]
    if x == x1:
        raise DegenerateTriple(pts, "x = x1 puts the pair on a vertical line")
    if y == y1:
        raise DegenerateTriple(pts, "y = y1 puts the pair on a horizontal line")
    lhs = nm_mul(N, gf.sub(F, x, x2), nm_inv(N, gf.sub(F, x, x1)))
    rhs = nm_mul(N, gf.sub(F, y, y2), nm_inv(N, gf.sub(F, y, y1)))
    return lhs == rhs


def _allowed_blocks(U: Unital, forbid_line_class, blocks):
    out = list(blocks) if blocks is not None else U.blocks()
    if forbid_line_class is not None:
        out = [L for L in out if not _matches_class(L, forbid_line_class)]
    return out


def _anchored_search(U: Unital, P0, blocks, first_only):
    plane = U.plane
    S = U.points
    if P0 not in S:
        return []
    axis_cands = [L for L in blocks if incident(plane, P0, L)]
    axis_bit = {L: i for i, L in enumerate(axis_cands)}
    cross = {L for L in blocks if not incident(plane, P0, L)}
    join_bit = {}
    for P in S:
        if P == P0:
            continue
        L = line_through(plane, P0, P)
        join_bit[P] = axis_bit.get(L)
    on_cross = {}
    for L in cross:
        members = [P for P in points_on_line(plane, L) if P in S]
        for P in members:
            on_cross.setdefault(P, []).append((L, members))
    found = []
    seen = set()
    for P0p in sorted(S - {P0}, key=lambda P: point_id(plane, P)):
        through = sorted(on_cross.get(P0p, ()), key=lambda t: t[0])
        masks = []
        for L, members in through:
            bits = 0
            for P in members:
                if P == P0p:
                    continue
                b = join_bit[P]
                if b is not None and not incident(plane, P0p, axis_cands[b]):
                    bits |= 1 << b
            masks.append((L, bits))
        for i in range(len(masks)):
            L1, m1 = masks[i]
            if not m1:
                continue
            for k in range(i + 1, len(masks)):
                L2, m2 = masks[k]
                common = m1 & m2
                if common.bit_count() < 2:
                    continue
                bits = [b for b in range(common.bit_length())
                        if common >> b & 1]
                for a in range(len(bits)):
                    for b in range(a + 1, len(bits)):
                        A1 = axis_cands[bits[a]]
                        A2 = axis_cands[bits[b]]
                        key = tuple(sorted((A1, A2, L1, L2)))
                        if key in seen:
                            continue
                        seen.add(key)
                        pts = [P0, P0p,
                               meet(plane, A1, L1), meet(plane, A1, L2),
                               meet(plane, A2, L1), meet(plane, A2, L2)]
                        if len(set(pts)) != 6 or any(P not in S for P in pts):
                            continue
                        found.append(OnanConfig(plane, key, pts))
                        if first_only:
                            return found
    return found


def _full_search(U: Unital, blocks, first_only):
    plane = U.plane
    S = U.points
    n = len(blocks)
    adj = [0] * n
    meets = {}
    # two lines meet once, so block pairs through each point of S are
    # exactly the pairs whose meet lies in S
    for P in S:
        through = [i for i in range(n) if incident(plane, P, blocks[i])]
        for a, i in enumerate(through):
            for j in through[a + 1:]:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
                meets[(i, j)] = P
    found = []
    for i in range(n):
        for j in range(i + 1, n):
            if not adj[i] >> j & 1:
                continue
            ij = meets[(i, j)]
            common = adj[i] & adj[j] >> (j + 1) << (j + 1)
            k = j
            rest = common
            while rest:
                k = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                ik, jk = meets[(i, k)], meets[(j, k)]
                if len({ij, ik, jk}) != 3:
                    continue
                ext = common & adj[k] >> (k + 1) << (k + 1)
                while ext:
                    l = (ext & -ext).bit_length() - 1
                    ext &= ext - 1
                    pts = [ij, ik, jk,
                           meets[(i, l)], meets[(j, l)], meets[(k, l)]]
                    if len(set(pts)) != 6:
                        continue
                    found.append(OnanConfig(
                        plane, [blocks[i], blocks[j], blocks[k], blocks[l]],
                        pts))
                    if first_only:
                        return found
    return found


def find_onan(U: Unital, must_contain=None, forbid_line_class=None,
              first_only: bool = False, blocks=None) -> list:
    """All configurations in U under the constraints, deterministic order.

    An empty result is an exhaustiveness certificate. must_contain anchors
    the search at one point; forbid_line_class drops a whole line class
    from the candidate blocks.
    """
    allowed = _allowed_blocks(U, forbid_line_class, blocks)
    if must_contain is not None:
        return _anchored_search(U, tuple(must_contain), allowed, first_only)
    return _full_search(U, allowed, first_only)


def check_forced_line(U: Unital) -> bool:
    """True iff every configuration through (0,1,0) uses a [0,1,z] line.

    Requires the vertex on the set and invariance under the trace-zero
    translations; both hypotheses are certified before searching.
    """
    plane = U.plane
    F = plane.N.F
    if (0, 1, 0) not in U.points:
        raise HypothesisFailed("(0,1,0) is not on the candidate")
    eps = gf.constants(F)["epsilon"]
    for t in gf.subfield_elements(F):
        if t == 0:
            continue
        w = gf.mul(F, t, eps)
        shifted = {(P[0], F.add_table[P[1]][w], 1) if P[2] == 1 else P
                   for P in U.points}
        if shifted != U.points:
            raise HypothesisFailed(
                f"translation by {w} along the trace-zero axis moves the set")
    hits = find_onan(U, must_contain=(0, 1, 0),
                     forbid_line_class="horizontal", first_only=True)
    return not hits


def _hk_in_subfield(F, k: int, x: int) -> int:
    acc = 1 if k >= 0 else 0
    for _ in range(k):
        acc = F.add_table[gf.mul(F, acc, x)][1]
    return acc


def _nonzero_collision(F, k: int):
    """First pair of E = GF(q) minus {0,1} sharing a nonzero h_(k-1) value."""
    E = [d for d in gf.subfield_elements(F) if d not in (0, 1)]
    vals = {d: _hk_in_subfield(F, k - 1, d) for d in E}
    for i, d1 in enumerate(E):
        for d2 in E[i + 1:]:
            if vals[d1] == vals[d2] and vals[d1] != 0:
                return (d1, d2)
    return None


def admissible_exponents(q: int) -> list:
    """Exponents j for which the square-supported family is defined."""
    return [j for j in range(1, q - 1)
            if j % 2 == 1 and gcd(j, (q - 1) // 2) == 1]


def vj_obstruction(q: int, j: int) -> OnanConfig:
    """A certified configuration inside V(j) + {(0,1,0)} with no [0,1,z] line.

    Tries the explicit collision construction first; if its hypotheses
    fail, falls back to the exhaustive anchored search. The returned
    config records which path produced it.
    """
    if q % 4 != 3:
        raise InvalidParameters(f"q={q} is not 3 mod 4")
    if j not in admissible_exponents(q):
        raise InvalidParameters(f"j={j} is not an admissible exponent for q={q}")
    plane = ambient_plane(2, q)
    F = plane.N.F
    # the zero-norm column is pinned next to V(j) in any candidate unital,
    # so its points are fair game for the witness
    S = make_V(q, j) | make_B(q, 0, 0) | {(0, 1, 0)}
    k = (j * (q + 1) // 2) % (q - 1)
    cfg = None
    pair = _nonzero_collision(F, k)
    if pair:
        cfg = _build_collision_config(plane, F, S, k, pair)
    if cfg is None:
        # only configurations through (0,1,0) contradict the forced-line
        # theorem, so the fallback search stays anchored there
        cand = Unital(plane, S, family="V", params={"q": q, "j": j})
        hits = find_onan(cand, must_contain=(0, 1, 0),
                         forbid_line_class="horizontal", first_only=True)
        if not hits:
            raise NoObstructionFound(
                q, j, "collision construction inapplicable and the anchored"
                " search found nothing")
        cfg = hits[0]
        cfg.path = "search"
    return cfg


def _build_collision_config(plane, F, S, k, pair):
    d1, d2 = pair
    eps = gf.constants(F)["epsilon"]
    delta1 = gf.pow(F, d1, k)
    delta2 = gf.pow(F, d2, k)
    tt = gf.mul(F, gf.sub(F, d2, 1), gf.inv(F, gf.sub(F, d1, 1)))
    Q0 = (0, 1, 0)
    Pp = (1, 1, 1)
    R1 = (d1, delta1, 1)
    R2 = (d2, delta2, 1)
    R1p = (d1, F.add_table[delta1][eps], 1)
    R2p = (d2, F.add_table[delta2][gf.mul(F, tt, eps)], 1)
    pts = [Q0, Pp, R1, R2, R1p, R2p]
    if any(P not in S for P in pts):
        return None
    A1 = line_through(plane, Q0, R1)
    A2 = line_through(plane, Q0, R2)
    B1 = line_through(plane, Pp, R1)
    B2 = line_through(plane, Pp, R1p)
    if not (incident(plane, R2, B1) and incident(plane, R2p, B2)):
        return None
    if any(_matches_class(L, "horizontal") for L in (A1, A2, B1, B2)):
        return None
    return OnanConfig(plane, [A1, A2, B1, B2], pts, path="construction")
