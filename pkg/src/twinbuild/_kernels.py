"""Hot integer kernels, each in a numba and a pure-numpy flavour.

The backend is chosen once at import time.  Set ``TWINBUILD_NO_NUMBA=1`` to
force the numpy path (also used automatically when numba is missing).  Both
flavours are importable under explicit names (``*_nb`` / ``*_np``) so tests
and the benchmark can compare them directly.

Conventions shared by all kernels:

* distance tables are ``int32`` arrays of group element ids;
* chamber/element index arrays are ``int64``;
* a kernel that looks for a counterexample returns the first one in
  row-major order as an ``int64`` array, filled with ``-1`` when none exists.
"""

from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised implicitly
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("TWINBUILD_NO_NUMBA", "").lower() not in ("1", "true", "yes")
BACKEND = "numba" if USE_NUMBA else "numpy"


def _njit(fn):
    if HAVE_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


# ---------------------------------------------------------------------------
# distance reconstruction from panel adjacency
#
# error codes: 1 = two minimal galleries give different elements,
#              2 = gallery type is not reduced, 3 = chamber unreachable
# after an error the table is only partly filled and should not be read.


@_njit
def bfs_distances_nb(nbr_ptr, nbr_idx, nbr_gen, right_mul, length, n):
    D = np.full((n, n), -1, dtype=np.int32)
    err = np.full(3, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for x in range(n):
        D[x, x] = 0
        queue[0] = x
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            w = D[x, u]
            lw = length[w]
            for k in range(nbr_ptr[u], nbr_ptr[u + 1]):
                y = nbr_idx[k]
                c = right_mul[w, nbr_gen[k]]
                if D[x, y] == -1:
                    if length[c] != lw + 1:
                        err[0] = x
                        err[1] = y
                        err[2] = 2
                        return D, err
                    D[x, y] = c
                    queue[tail] = y
                    tail += 1
                elif length[D[x, y]] == lw + 1 and D[x, y] != c:
                    err[0] = x
                    err[1] = y
                    err[2] = 1
                    return D, err
        if tail < n:
            for y in range(n):
                if D[x, y] == -1:
                    err[0] = x
                    err[1] = y
                    err[2] = 3
                    return D, err
    return D, err


def bfs_distances_np(nbr_ptr, nbr_idx, nbr_gen, right_mul, length, n):
    D = np.full((n, n), -1, dtype=np.int32)
    err = np.full(3, -1, dtype=np.int64)
    idx = np.arange(n)
    D[idx, idx] = 0
    fx, fu = idx.copy(), idx.copy()
    level = 0
    deg_all = np.diff(nbr_ptr)
    while fx.size:
        deg = deg_all[fu]
        total = int(deg.sum())
        if total == 0:
            break
        xs = np.repeat(fx, deg)
        us = np.repeat(fu, deg)
        offs = np.arange(total) - np.repeat(np.cumsum(deg) - deg, deg)
        k = np.repeat(nbr_ptr[fu], deg) + offs
        ys = nbr_idx[k]
        cand = right_mul[D[xs, us], nbr_gen[k]]
        cur = D[xs, ys]
        fresh = cur == -1
        # a second parent on the same level must agree
        same_level = (~fresh) & (length[np.where(fresh, 0, cur)] == level + 1)
        bad = same_level & (cur != cand)
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            err[:] = (xs[i], ys[i], 1)
            return D, err
        xs, ys, cand = xs[fresh], ys[fresh], cand[fresh]
        if xs.size == 0:
            break
        badlen = length[cand] != level + 1
        if badlen.any():
            i = int(np.flatnonzero(badlen)[0])
            err[:] = (xs[i], ys[i], 2)
            return D, err
        key = xs * n + ys
        order = np.lexsort((cand, key))
        key, cand = key[order], cand[order]
        dup = key[1:] == key[:-1]
        clash = dup & (cand[1:] != cand[:-1])
        if clash.any():
            i = int(np.flatnonzero(clash)[0])
            err[:] = (key[i] // n, key[i] % n, 1)
            return D, err
        keep = np.ones(key.size, dtype=bool)
        keep[1:] = ~dup
        key, cand = key[keep], cand[keep]
        fx, fu = key // n, key % n
        D[fx, fu] = cand
        level += 1
    missing = np.argwhere(D == -1)
    if missing.size:
        err[:] = (missing[0, 0], missing[0, 1], 3)
    return D, err


# ---------------------------------------------------------------------------
# (Bu2)/(Tw2): for every row x and every ordered pair (y, z) of distinct
# chambers in a common s-panel, constrain T[x, z] from w = T[x, y].
# mode 0: building rule   T[x,z] in {w, ws}, and = ws when l(ws) > l(w)
# mode 1: twinning rule   T[x,z] = ws when l(ws) < l(w)


@_njit
def pair_scan_nb(T, right_mul, length, U, V, S, mode):
    out = np.full(4, -1, dtype=np.int64)
    for x in range(T.shape[0]):
        for e in range(U.shape[0]):
            w = T[x, U[e]]
            ws = right_mul[w, S[e]]
            dz = T[x, V[e]]
            if mode == 0:
                bad = (dz != w and dz != ws) or (length[ws] > length[w] and dz != ws)
            else:
                bad = length[ws] < length[w] and dz != ws
            if bad:
                out[0] = x
                out[1] = U[e]
                out[2] = V[e]
                out[3] = S[e]
                return out
    return out


def pair_scan_np(T, right_mul, length, U, V, S, mode):
    out = np.full(4, -1, dtype=np.int64)
    if U.size == 0:
        return out
    W = T[:, U]
    WS = right_mul[W, S[None, :]]
    DZ = T[:, V]
    if mode == 0:
        bad = ((DZ != W) & (DZ != WS)) | ((length[WS] > length[W]) & (DZ != WS))
    else:
        bad = (length[WS] < length[W]) & (DZ != WS)
    hits = np.argwhere(bad)
    if hits.size:
        x, e = hits[0]
        out[:] = (x, U[e], V[e], S[e])
    return out


# (Bu3)/(Tw3): for every row x, chamber y and generator s there must be z in
# the s-panel of y, z != y, with T[x, z] = T[x, y] * s.  Groups are the pairs
# (y, s); grp_z[grp_ptr[g]:grp_ptr[g+1]] lists the candidate z's.


@_njit
def exists_scan_nb(T, right_mul, grp_y, grp_s, grp_ptr, grp_z):
    out = np.full(3, -1, dtype=np.int64)
    for x in range(T.shape[0]):
        for g in range(grp_y.shape[0]):
            target = right_mul[T[x, grp_y[g]], grp_s[g]]
            found = False
            for k in range(grp_ptr[g], grp_ptr[g + 1]):
                if T[x, grp_z[k]] == target:
                    found = True
                    break
            if not found:
                out[0] = x
                out[1] = grp_y[g]
                out[2] = grp_s[g]
                return out
    return out


def exists_scan_np(T, right_mul, grp_y, grp_s, grp_ptr, grp_z):
    out = np.full(3, -1, dtype=np.int64)
    G = grp_y.size
    sizes = np.diff(grp_ptr)
    target = right_mul[T[:, grp_y], grp_s[None, :]]  # (rows, G)
    ok = np.zeros(target.shape, dtype=bool)
    if grp_z.size:
        owner = np.repeat(np.arange(G), sizes)
        hit = T[:, grp_z] == target[:, owner]
        nonempty = np.flatnonzero(sizes)
        ok[:, nonempty] = np.logical_or.reduceat(hit, grp_ptr[nonempty], axis=1)
    hits = np.argwhere(~ok)
    if hits.size:
        x, g = hits[0]
        out[:] = (x, grp_y[g], grp_s[g])
    return out


# ---------------------------------------------------------------------------
# isometry validation: first (i, j) with Dt[img i, img j] != Ds[dom i, dom j]


@_njit
def isometry_scan_nb(Ds, Dt, dom, img):
    out = np.full(2, -1, dtype=np.int64)
    n = dom.shape[0]
    for i in range(n):
        a = dom[i]
        b = img[i]
        for j in range(n):
            if Dt[b, img[j]] != Ds[a, dom[j]]:
                out[0] = i
                out[1] = j
                return out
    return out


def isometry_scan_np(Ds, Dt, dom, img):
    out = np.full(2, -1, dtype=np.int64)
    if dom.size == 0:
        return out
    bad = Ds[np.ix_(dom, dom)] != Dt[np.ix_(img, img)]
    hits = np.argwhere(bad)
    if hits.size:
        out[:] = hits[0]
    return out


# ---------------------------------------------------------------------------
# backtracking extension of a partial isometry
#
# ``dom -> img`` is the fixed part.  Variables ``todo`` are assigned in the
# given order, values are tried in ``pool`` order; a value must be unused,
# carry the variable's sign and reproduce every distance to the chambers
# assigned so far.  Returns (number of solutions found, capped at
# max_solutions; array of the solutions found).


@_njit
def extend_search_nb(Ds, Dt, dom, img, todo, todo_sign, pool, pool_sign, max_solutions):
    nd = dom.shape[0]
    nt = todo.shape[0]
    npool = pool.shape[0]
    sols = np.full((max_solutions, nt), -1, dtype=np.int64)
    src = np.empty(nd + nt, dtype=np.int64)
    tgt = np.empty(nd + nt, dtype=np.int64)
    used = np.zeros(Dt.shape[0], dtype=np.bool_)
    for i in range(nd):
        src[i] = dom[i]
        tgt[i] = img[i]
        used[img[i]] = True
    for i in range(nt):
        src[nd + i] = todo[i]
    choice = np.full(nt + 1, -1, dtype=np.int64)
    count = 0
    depth = 0
    while depth >= 0:
        if depth == nt:
            for i in range(nt):
                sols[count, i] = tgt[nd + i]
            count += 1
            if count >= max_solutions:
                break
            depth -= 1
            continue
        a = todo[depth]
        if choice[depth] >= 0:
            used[pool[choice[depth]]] = False
        j = choice[depth] + 1
        found = -1
        while j < npool:
            b = pool[j]
            if (not used[b]) and pool_sign[j] == todo_sign[depth]:
                ok = True
                for k in range(nd + depth):
                    if Dt[tgt[k], b] != Ds[src[k], a]:
                        ok = False
                        break
                if ok:
                    found = j
                    break
            j += 1
        if found < 0:
            choice[depth] = -1
            depth -= 1
            continue
        choice[depth] = found
        used[pool[found]] = True
        tgt[nd + depth] = pool[found]
        depth += 1
    return count, sols[:count]


def extend_search_np(Ds, Dt, dom, img, todo, todo_sign, pool, pool_sign, max_solutions):
    nt = todo.shape[0]
    sols = []
    src = list(dom)
    tgt = list(img)
    used = np.zeros(Dt.shape[0], dtype=bool)
    used[img] = True

    def rec(depth):
        if depth == nt:
            sols.append(tgt[len(dom):].copy())
            return len(sols) >= max_solutions
        a = todo[depth]
        ok = (~used[pool]) & (pool_sign == todo_sign[depth])
        if src:
            ok &= np.all(Dt[np.ix_(np.asarray(tgt), pool)] == Ds[np.asarray(src), a][:, None], axis=0)
        for j in np.flatnonzero(ok):
            b = pool[j]
            src.append(a)
            tgt.append(b)
            used[b] = True
            stop = rec(depth + 1)
            used[b] = False
            src.pop()
            tgt.pop()
            if stop:
                return True
        return False

    rec(0)
    arr = np.array(sols, dtype=np.int64).reshape(len(sols), nt)
    return len(sols), arr


_IMPLS = {
    "bfs_distances": (bfs_distances_nb, bfs_distances_np),
    "pair_scan": (pair_scan_nb, pair_scan_np),
    "exists_scan": (exists_scan_nb, exists_scan_np),
    "isometry_scan": (isometry_scan_nb, isometry_scan_np),
    "extend_search": (extend_search_nb, extend_search_np),
}

bfs_distances = bfs_distances_nb if USE_NUMBA else bfs_distances_np
pair_scan = pair_scan_nb if USE_NUMBA else pair_scan_np
exists_scan = exists_scan_nb if USE_NUMBA else exists_scan_np
isometry_scan = isometry_scan_nb if USE_NUMBA else isometry_scan_np
extend_search = extend_search_nb if USE_NUMBA else extend_search_np


def implementations(name: str):
    """Return ``(numba_version, numpy_version)`` of a kernel."""
    return _IMPLS[name]
