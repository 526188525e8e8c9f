"""Collineations of the nearfield plane in standard parametrized form.

Every map handled here is stored as (kind, c, d, u, v, frob) with c, d
nonzero, frob in [0, 2e), encoding

    kind 0:  (x, y, 1) -> (T(x)*c + u, T(y)*d + v, 1)
    kind 1:  (x, y, 1) -> (T(y)*c + u, T(x)*d + v, 1)

where T is the Frobenius x -> x^(p^frob), applied before the linear
part.  Kind 0 fixes (0, 1, 0); kind 1 swaps it with (1, 0, 0).  Actions
on the three line classes follow the case tables in apply_line.

Composition and inversion work on parameters and are certified pointwise
on a fixed probe set; a mismatch raises NotClosed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf
from .errors import BudgetExceeded, InvalidParameters, NotClosed
from .nearfield import Nearfield, nm_inv, nm_mul
from .plane import (
    Plane, id_line, id_point, incident, line_id, lines_through_point,
    point_id, points_on_line,
)

PROBES = ((0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1), (0, 1, 0), (1, 0, 0))


@dataclass(frozen=True)
class Collineation:
    kind: int
    c: int
    d: int
    u: int
    v: int
    frob: int = 0

    def key(self) -> tuple[int, int, int, int, int, int]:
        return (self.kind, self.c, self.d, self.u, self.v, self.frob)


def identity() -> Collineation:
    return Collineation(0, 1, 1, 0, 0, 0)


def phi_map(c: int, d: int, u: int = 0, v: int = 0, frob: int = 0) -> Collineation:
    if c == 0 or d == 0:
        raise InvalidParameters("collineation scale parameters must be nonzero")
    return Collineation(0, c, d, u, v, frob)


def swap_map(c: int, d: int, u: int = 0, v: int = 0, frob: int = 0) -> Collineation:
    if c == 0 or d == 0:
        raise InvalidParameters("collineation scale parameters must be nonzero")
    return Collineation(1, c, d, u, v, frob)


def automorphism_count(N: Nearfield) -> int:
    """Order of the Frobenius group acting on the carrier: n * e."""
    return N.n * N.e


def _tau(N: Nearfield, x: int, f: int) -> int:
    return gf.frob(N.F, x, f)


def apply(plane: Plane, k: Collineation, P) -> tuple[int, int, int]:
    """Image of a point under the collineation."""
    N = plane.N
    A = N.F.add_table
    x, y, z = int(P[0]), int(P[1]), int(P[2])
    f = k.frob
    if z == 1:
        tx, ty = _tau(N, x, f), _tau(N, y, f)
        if k.kind == 0:
            return (A[nm_mul(N, tx, k.c)][k.u], A[nm_mul(N, ty, k.d)][k.v], 1)
        return (A[nm_mul(N, ty, k.c)][k.u], A[nm_mul(N, tx, k.d)][k.v], 1)
    if (x, y) == (0, 1):
        return (0, 1, 0) if k.kind == 0 else (1, 0, 0)
    ty = _tau(N, y, f)
    if k.kind == 0:
        return (1, nm_mul(N, nm_mul(N, nm_inv(N, k.c), ty), k.d), 0)
    if ty == 0:
        return (0, 1, 0)
    # image of the slope point of [s,1,t] is the slope point of the image
    # line [c^-1 * s^-1 * d, 1, *], so the c and d roles do not swap here
    return (1, nm_mul(N, nm_mul(N, nm_inv(N, k.c), nm_inv(N, ty)), k.d), 0)


def apply_line(plane: Plane, k: Collineation, L) -> tuple[int, int, int]:
    """Image of a line under the collineation."""
    N = plane.N
    A = N.F.add_table
    NEG = N.F.neg_table
    s, u_coef, t = int(L[0]), int(L[1]), int(L[2])
    f = k.frob
    c, d, u, v = k.c, k.d, k.u, k.v
    if u_coef == 1:
        ts, tt = _tau(N, s, f), _tau(N, t, f)
        if k.kind == 0:
            s2 = nm_mul(N, nm_mul(N, nm_inv(N, c), ts), d)
            t2 = A[A[nm_mul(N, tt, d)][NEG[nm_mul(N, u, s2)]]][NEG[v]]
            return (s2, 1, t2)
        if ts == 0:
            return (1, 0, A[nm_mul(N, tt, c)][NEG[u]])
        si = nm_inv(N, ts)
        s2 = nm_mul(N, nm_mul(N, nm_inv(N, c), si), d)
        t2 = A[A[nm_mul(N, nm_mul(N, tt, si), d)][NEG[nm_mul(N, u, s2)]]][NEG[v]]
        return (s2, 1, t2)
    if s == 1 and u_coef == 0:
        tt = _tau(N, t, f)
        if k.kind == 0:
            return (1, 0, A[nm_mul(N, tt, c)][NEG[u]])
        return (0, 1, A[nm_mul(N, tt, d)][NEG[v]])
    return (0, 0, 1)


def _tau_params(N: Nearfield, k: Collineation, f: int) -> Collineation:
    """Push a Frobenius power through the linear parameters."""
    if f == 0:
        return k
    return Collineation(
        k.kind,
        _tau(N, k.c, f), _tau(N, k.d, f), _tau(N, k.u, f), _tau(N, k.v, f),
        k.frob,
    )


def compose(plane: Plane, k1: Collineation, k2: Collineation,
            certify: bool = True) -> Collineation:
    """k1 followed by k2, computed on parameters.

    Certified pointwise on the probe set unless certify is False.
    """
    N = plane.N
    A = N.F.add_table
    nfrob = automorphism_count(N)
    a = _tau_params(N, k1, k2.frob)
    c1, d1, u1, v1 = a.c, a.d, a.u, a.v
    if k2.kind == 1:
        c1, d1 = d1, c1
        u1, v1 = v1, u1
    out = Collineation(
        k1.kind ^ k2.kind,
        nm_mul(N, c1, k2.c),
        nm_mul(N, d1, k2.d),
        A[nm_mul(N, u1, k2.c)][k2.u],
        A[nm_mul(N, v1, k2.d)][k2.v],
        (k1.frob + k2.frob) % nfrob,
    )
    if certify:
        for P in PROBES:
            want = apply(plane, k2, apply(plane, k1, P))
            got = apply(plane, out, P)
            if want != got:
                raise NotClosed({"probe": P, "expected": want, "got": got})
    return out


def inverse(plane: Plane, k: Collineation, certify: bool = True) -> Collineation:
    N = plane.N
    NEG = N.F.neg_table
    nfrob = automorphism_count(N)
    ci, di = nm_inv(N, k.c), nm_inv(N, k.d)
    if k.kind == 0:
        lin = Collineation(0, ci, di, NEG[nm_mul(N, k.u, ci)], NEG[nm_mul(N, k.v, di)], 0)
    else:
        lin = Collineation(1, di, ci, NEG[nm_mul(N, k.v, di)], NEG[nm_mul(N, k.u, ci)], 0)
    fi = (-k.frob) % nfrob
    out = _tau_params(N, lin, fi)
    out = Collineation(out.kind, out.c, out.d, out.u, out.v, fi)
    if certify:
        ident = identity()
        chk = compose(plane, k, out, certify=False)
        for P in PROBES:
            if apply(plane, chk, P) != P:
                raise NotClosed({"probe": P, "got": apply(plane, chk, P)})
        if chk.key() != ident.key():
            raise NotClosed({"composite_key": chk.key()})
    return out


def canonicalize_action(plane: Plane, action, frob_bound: int | None = None) -> Collineation:
    """Recover (kind, c, d, u, v, frob) from a point action.

    The probe images pin the linear parameters; the Frobenius exponent is
    separated by probing at the carrier generator, whose coordinates the
    small probes cannot see.
    """
    N = plane.N
    F = N.F
    A = F.add_table
    NEG = F.neg_table
    if frob_bound is None:
        frob_bound = automorphism_count(N)
    img_vertex = action((0, 1, 0))
    if img_vertex == (0, 1, 0):
        kind = 0
    elif img_vertex == (1, 0, 0):
        kind = 1
    else:
        raise InvalidParameters(f"(0,1,0) maps to {img_vertex}, not a standard map")
    iu, iv, _ = action((0, 0, 1))
    if kind == 0:
        c = A[action((1, 0, 1))[0]][NEG[iu]]
        d = A[action((0, 1, 1))[1]][NEG[iv]]
    else:
        c = A[action((0, 1, 1))[0]][NEG[iu]]
        d = A[action((1, 0, 1))[1]][NEG[iv]]
    if c == 0 or d == 0:
        raise InvalidParameters("degenerate scale recovered from action")
    g = F.gamma
    want = action((g, 0, 1))
    for f in range(frob_bound):
        k = Collineation(kind, c, d, iu, iv, f)
        if apply(plane, k, (g, 0, 1)) == want:
            for P in PROBES:
                if apply(plane, k, P) != action(P):
                    raise InvalidParameters("action disagrees with standard form")
            return k
    raise InvalidParameters("no Frobenius exponent matches the action")


# -- groups --------------------------------------------------------------------


class CollineationGroup:
    """A finite set of collineations closed under composition."""

    def __init__(self, plane: Plane, elements: list[Collineation]):
        self.plane = plane
        self.elements = elements
        self.index = {k.key(): i for i, k in enumerate(elements)}
        if len(self.index) != len(elements):
            raise InvalidParameters("duplicate elements in group carrier")
        self._np = None

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, k: Collineation) -> bool:
        return k.key() in self.index

    def __iter__(self):
        return iter(self.elements)

    def as_array(self) -> np.ndarray:
        if self._np is None:
            self._np = np.array([k.key() for k in self.elements], dtype=np.int32)
        return self._np


def frobenius_table(N: Nearfield) -> np.ndarray:
    nfrob = automorphism_count(N)
    tab = np.empty((nfrob, N.Q), dtype=np.int32)
    for f in range(nfrob):
        for x in range(N.Q):
            tab[f, x] = gf.frob(N.F, x, f)
    return tab


def generate_group(plane: Plane, generators, budget: int = 1 << 22) -> CollineationGroup:
    """Closure of the generators under composition, breadth first."""
    gens = list(generators)
    for g in gens:
        inverse(plane, g)  # certifies invertibility up front
    ident = identity()
    seen = {ident.key(): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = compose(plane, a, g, certify=False)
                if b.key() not in seen:
                    seen[b.key()] = b
                    nxt.append(b)
                    if len(seen) > budget:
                        raise BudgetExceeded(len(seen), budget)
        frontier = nxt
    elements = sorted(seen.values(), key=lambda k: k.key())
    return CollineationGroup(plane, elements)


def linear_group(plane: Plane, certify_closure: bool = False) -> CollineationGroup:
    """All maps (kind, c, d, u, v) with frob = 0, both kinds.

    Enumerated directly from the parametrization; optionally certified
    closed under composition by full pairwise products (small planes).
    """
    Q = plane.Q
    elements = []
    for kind in (0, 1):
        for c in range(1, Q):
            for d in range(1, Q):
                for u in range(Q):
                    for v in range(Q):
                        elements.append(Collineation(kind, c, d, u, v, 0))
    G = CollineationGroup(plane, elements)
    if certify_closure:
        for a in elements:
            for b in elements:
                if compose(plane, a, b, certify=False) not in G:
                    raise NotClosed({"a": a.key(), "b": b.key()})
    return G


def standard_group(plane: Plane) -> CollineationGroup:
    """The linear maps extended by the Frobenius powers."""
    Q = plane.Q
    nfrob = automorphism_count(plane.N)
    elements = []
    for f in range(nfrob):
        for kind in (0, 1):
            for c in range(1, Q):
                for d in range(1, Q):
                    for u in range(Q):
                        for v in range(Q):
                            elements.append(Collineation(kind, c, d, u, v, f))
    return CollineationGroup(plane, elements)


def translation_subgroup(plane: Plane) -> CollineationGroup:
    Q = plane.Q
    elements = [Collineation(0, 1, 1, u, v, 0) for u in range(Q) for v in range(Q)]
    return CollineationGroup(plane, elements)


def linear_generators(plane: Plane) -> list[Collineation]:
    """A compact generating set for the linear group."""
    g = plane.N.F.gamma
    g2 = gf.mul(plane.N.F, g, g)
    F = plane.N.F
    i_elt = F.encode((0, 1) + (0,) * (F.n - 2)) if F.n >= 2 else 1
    gens = [
        phi_map(g, 1), phi_map(g2, 1), phi_map(1, g), phi_map(1, g2),
        phi_map(1, 1, 1, 0), phi_map(1, 1, 0, 1),
        phi_map(1, 1, i_elt, 0), phi_map(1, 1, 0, i_elt),
        swap_map(1, 1),
    ]
    return gens


def standard_array(plane: Plane, linear_only: bool = False) -> np.ndarray:
    """Parameter rows (kind, c, d, u, v, frob) of the whole standard group.

    Built with meshgrids so large planes never materialize per-element
    Python objects.
    """
    Q = plane.Q
    nfrob = 1 if linear_only else automorphism_count(plane.N)
    kind = np.arange(2, dtype=np.int32)
    c = np.arange(1, Q, dtype=np.int32)
    d = np.arange(1, Q, dtype=np.int32)
    u = np.arange(Q, dtype=np.int32)
    v = np.arange(Q, dtype=np.int32)
    f = np.arange(nfrob, dtype=np.int32)
    grids = np.meshgrid(kind, c, d, u, v, f, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def stabilizer_in_standard(plane: Plane, point_set, linear_only: bool = False,
                           probes=None, backend: str | None = None) -> list[Collineation]:
    """Standard-group stabilizer of a point set, via array filtering.

    Probe images cut the candidate array down by kernel gathers; the few
    survivors are then verified on the whole set exactly.
    """
    from ._kernels import apply_probe

    N = plane.N
    ids = {point_id(plane, P) for P in point_set}
    member = np.zeros(plane.n_points, dtype=bool)
    member[list(ids)] = True

    affine = sorted((P for P in point_set if P[2] == 1),
                    key=lambda P: point_id(plane, P))
    if probes is None:
        step = max(1, len(affine) // 8)
        probes = affine[::step][:8]

    elems = standard_array(plane, linear_only=linear_only)
    FROB = frobenius_table(N)
    alive = np.ones(len(elems), dtype=bool)
    for P in probes:
        idx = np.nonzero(alive)[0]
        if len(idx) == 0:
            break
        imgs = apply_probe(elems[idx], N, FROB, int(P[0]), int(P[1]), backend=backend)
        alive[idx[~member[imgs]]] = False

    out = []
    pts = sorted(point_set, key=lambda P: point_id(plane, P))
    for row in elems[alive]:
        k = Collineation(*(int(t) for t in row))
        if all(point_id(plane, apply(plane, k, P)) in ids for P in pts):
            out.append(k)
    return out


def stabilizer(group: CollineationGroup, point_set, probes=None,
               backend: str | None = None) -> list[Collineation]:
    """Elements of the group preserving a point set, exact.

    Kernel-filtered on a few probe points of the set, then every survivor
    is verified on the whole set.
    """
    from ._kernels import apply_probe

    plane = group.plane
    N = plane.N
    Q = plane.Q
    ids = {point_id(plane, P) for P in point_set}
    member = np.zeros(plane.n_points, dtype=bool)
    member[list(ids)] = True

    affine_probes = [P for P in point_set if P[2] == 1]
    affine_probes.sort(key=lambda P: point_id(plane, P))
    if probes is None:
        step = max(1, len(affine_probes) // 5)
        probes = affine_probes[::step][:5]

    elems = group.as_array()
    FROB = frobenius_table(N)
    alive = np.ones(len(elems), dtype=bool)
    for P in probes:
        idx = np.nonzero(alive)[0]
        if len(idx) == 0:
            break
        imgs = apply_probe(elems[idx], N, FROB, int(P[0]), int(P[1]), backend=backend)
        ok = member[imgs]
        alive[idx[~ok]] = False

    out = []
    pts = sorted(point_set, key=lambda P: point_id(plane, P))
    for i in np.nonzero(alive)[0]:
        k = group.elements[int(i)]
        if all(point_id(plane, apply(plane, k, P)) in ids for P in pts):
            out.append(k)
    return out


def element_order(plane: Plane, k: Collineation, cap: int = 10 ** 6) -> int:
    ident = identity().key()
    acc = k
    n = 1
    while acc.key() != ident:
        acc = compose(plane, acc, k, certify=False)
        n += 1
        if n > cap:
            raise BudgetExceeded(n, cap)
    return n


def conjugate(plane: Plane, a: Collineation, by: Collineation) -> Collineation:
    return compose(plane, compose(plane, inverse(plane, by), a, certify=False), by,
                   certify=False)


def central_classification(plane: Plane, k: Collineation) -> dict | None:
    """Center/axis structure of a collineation, by direct scan.

    Returns {"center": point, "axis": line, "kind": "elation"|"homology"}
    when the map is a non-identity central collineation, else None.
    """
    if k.key() == identity().key():
        return None
    n = plane.n_points
    fixed_pts = set()
    for pid in range(n):
        P = id_point(plane, pid)
        if apply(plane, k, P) == P:
            fixed_pts.add(pid)
    fixed_lines = set()
    for lid in range(n):
        L = id_line(plane, lid)
        if apply_line(plane, k, L) == L:
            fixed_lines.add(lid)

    axes = []
    for lid in fixed_lines:
        if all(point_id(plane, P) in fixed_pts
               for P in points_on_line(plane, id_line(plane, lid))):
            axes.append(lid)
    centers = []
    for pid in fixed_pts:
        P = id_point(plane, pid)
        if all(line_id(plane, L) in fixed_lines
               for L in lines_through_point(plane, P)):
            centers.append(pid)
    if len(axes) != 1 or len(centers) != 1:
        return None
    axis = id_line(plane, axes[0])
    center = id_point(plane, centers[0])
    kind = "elation" if incident(plane, center, axis) else "homology"
    return {"center": center, "axis": axis, "kind": kind}
