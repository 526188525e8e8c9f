"""Hot loops, each with a numba kernel and a numpy fallback.

The two implementations are independent routes to the same answer; the
benchmark script and the test suite compare them.
"""
from __future__ import annotations

import numpy as np

from ._backend import have_numba, select_backend

if have_numba():
    from numba import njit
else:  # pragma: no cover - exercised only without numba installed
    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        return wrap


# -- affine-affine join certification ------------------------------------------


@njit(cache=True)
def _nb_affine_join_check(MUL, ADD, NEG, INV, Q):
    fails = 0
    wx1 = wy1 = wx2 = wy2 = -1
    for x1 in range(Q):
        # same column: the vertical [1, 0, -x1] carries every (x1, *)
        t = NEG[x1]
        if ADD[x1, t] != 0:
            fails += Q * (Q - 1) // 2
            if wx1 < 0:
                wx1, wy1, wx2, wy2 = x1, 0, x1, 1
        for y1 in range(Q):
            for x2 in range(x1 + 1, Q):
                a = ADD[x1, NEG[x2]]
                ia = INV[a]
                for y2 in range(Q):
                    s = MUL[ia, ADD[y2, NEG[y1]]]
                    t2 = NEG[ADD[MUL[x1, s], y1]]
                    c1 = ADD[ADD[MUL[x1, s], y1], t2]
                    c2 = ADD[ADD[MUL[x2, s], y2], t2]
                    if c1 != 0 or c2 != 0:
                        fails += 1
                        if wx1 < 0:
                            wx1, wy1, wx2, wy2 = x1, y1, x2, y2
    return fails, wx1, wy1, wx2, wy2


def _np_affine_join_check(MUL, ADD, NEG, INV, Q):
    fails = 0
    witness = None
    ys = np.arange(Q)
    for x1 in range(Q):
        if ADD[x1, NEG[x1]] != 0:
            fails += Q * (Q - 1) // 2
            witness = witness or (x1, 0, x1, 1)
        x2s = np.arange(x1 + 1, Q)
        if len(x2s) == 0:
            continue
        a = ADD[x1, NEG[x2s]]                       # (X2,)
        ia = INV[a][None, :, None]                  # (1, X2, 1)
        b = ADD[ys[None, None, :], NEG[ys][:, None, None]]  # (Y1, 1, Y2)
        s = MUL[ia, b]                              # (Y1, X2, Y2)
        xs1 = MUL[x1, s]
        t = NEG[ADD[xs1, ys[:, None, None]]]
        c1 = ADD[ADD[xs1, ys[:, None, None]], t]
        c2 = ADD[ADD[MUL[x2s[None, :, None], s], ys[None, None, :]], t]
        bad = (c1 != 0) | (c2 != 0)
        nbad = int(bad.sum())
        if nbad:
            fails += nbad
            if witness is None:
                y1i, x2i, y2i = (int(v) for v in np.argwhere(bad)[0])
                witness = (x1, y1i, int(x2s[x2i]), y2i)
    return fails, witness


def affine_join_check(N, backend: str | None = None):
    """Certify joins over all unordered affine point pairs.

    Returns (failure count, witness tuple or None).
    """
    be = select_backend(backend)
    MUL = N.mul_np
    ADD = N.add_np
    NEG = N.neg_np
    INV = np.array(N.inv, dtype=np.int32)
    if be == "numba":
        fails, a, b, c, d = _nb_affine_join_check(MUL, ADD, NEG, INV, N.Q)
        witness = None if a < 0 else (int(a), int(b), int(c), int(d))
        return int(fails), witness
    return _np_affine_join_check(MUL, ADD, NEG, INV, N.Q)


# -- membership filtering for stabilizer scans ---------------------------------


@njit(cache=True)
def _nb_apply_probe(elems, MUL, ADD, FROB, px, py, Q):
    """Images of the affine probe (px, py) under each standard map.

    elems rows are (kind, c, d, u, v, frob); returns point ids x*Q + y.
    """
    m = elems.shape[0]
    out = np.empty(m, dtype=np.int64)
    for i in range(m):
        kind = elems[i, 0]
        c = elems[i, 1]
        d = elems[i, 2]
        u = elems[i, 3]
        v = elems[i, 4]
        fr = elems[i, 5]
        x = FROB[fr, px]
        y = FROB[fr, py]
        if kind == 0:
            nx = ADD[MUL[x, c], u]
            ny = ADD[MUL[y, d], v]
        else:
            nx = ADD[MUL[y, c], u]
            ny = ADD[MUL[x, d], v]
        out[i] = nx * Q + ny
    return out


def _np_apply_probe(elems, MUL, ADD, FROB, px, py, Q):
    kind = elems[:, 0]
    c = elems[:, 1]
    d = elems[:, 2]
    u = elems[:, 3]
    v = elems[:, 4]
    fr = elems[:, 5]
    x = FROB[fr, px]
    y = FROB[fr, py]
    swap = kind == 1
    ax = np.where(swap, y, x)
    ay = np.where(swap, x, y)
    nx = ADD[MUL[ax, c], u]
    ny = ADD[MUL[ay, d], v]
    return nx.astype(np.int64) * Q + ny.astype(np.int64)


def apply_probe(elems, N, FROB, px, py, backend: str | None = None):
    """Image point ids of one affine probe point under every element."""
    be = select_backend(backend)
    if be == "numba":
        return _nb_apply_probe(elems, N.mul_np, N.add_np, FROB, px, py, N.Q)
    return _np_apply_probe(elems, N.mul_np, N.add_np, FROB, px, py, N.Q)


def warmup(N) -> None:
    """Compile the numba kernels on a tiny input so timings stay honest."""
    if not have_numba():
        return
    affine_join_check(N, backend="numba")
    elems = np.zeros((2, 6), dtype=np.int32)
    elems[:, 1] = 1
    elems[:, 2] = 1
    FROB = np.zeros((1, N.Q), dtype=np.int32)
    FROB[0] = np.arange(N.Q, dtype=np.int32)
    _nb_apply_probe(elems, N.mul_np, N.add_np, FROB, 0, 0, N.Q)
