# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer kernels (int64 fast path).

Semantics, including argmin tie-breaking, must match ``_pure`` bit for bit;
the dispatch layer routes inputs whose scaled couplings could overflow int64
to the pure backend instead.
"""

import numpy as np

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    #define EA_POPCOUNTLL(x) __builtin_popcountll((unsigned long long)(x))
    #else
    static int EA_POPCOUNTLL(unsigned long long x)
    { int c = 0; while (x) { x &= x - 1; ++c; } return c; }
    #endif
    """
    int EA_POPCOUNTLL(unsigned long long x) nogil

cdef long long _INF = <long long>1 << 62


def antialign_table(int n_sites, bonds):
    """Per spin configuration (site 0 fixed +1), bitmask of antialigned bonds."""
    cdef Py_ssize_t nb = len(bonds)
    bi = np.array([pair[0] for pair in bonds], dtype=np.int64)
    bj = np.array([pair[1] for pair in bonds], dtype=np.int64)
    cdef long long[::1] vi = bi
    cdef long long[::1] vj = bj
    cdef long long n = <long long>1 << (n_sites - 1)
    out = np.zeros(n, dtype=np.int64)
    cdef long long[::1] o = out
    cdef long long k, m, t
    cdef Py_ssize_t b
    with nogil:
        for k in range(n):
            m = k << 1
            t = 0
            for b in range(nb):
                if ((m >> vi[b]) ^ (m >> vj[b])) & 1:
                    t |= (<long long>1) << b
            o[k] = t
    return out


def pm_minima(table, int n_bonds):
    """Ground energies (units of J) and argmin spin masks for all coupling masks."""
    tab = np.ascontiguousarray(table, dtype=np.int64)
    cdef long long[::1] T = tab
    cdef long long nk = T.shape[0]
    cdef long long nmask = <long long>1 << n_bonds
    energies = np.zeros(nmask, dtype=np.int64)
    argmins = np.zeros(nmask, dtype=np.int64)
    cdef long long[::1] E = energies
    cdef long long[::1] A = argmins
    cdef long long mask, k, best, barg
    cdef int p
    with nogil:
        for mask in range(nmask):
            best = -1
            barg = 0
            for k in range(nk):
                p = EA_POPCOUNTLL(<unsigned long long>(mask ^ T[k]))
                if p > best:
                    best = p
                    barg = k
            E[mask] = n_bonds - 2 * best
            A[mask] = barg << 1
    return energies, argmins


def pm_min_single(table, int n_bonds, long long mask):
    tab = np.ascontiguousarray(table, dtype=np.int64)
    cdef long long[::1] T = tab
    cdef long long nk = T.shape[0]
    cdef long long k, best = -1, barg = 0
    cdef int p
    with nogil:
        for k in range(nk):
            p = EA_POPCOUNTLL(<unsigned long long>(mask ^ T[k]))
            if p > best:
                best = p
                barg = k
    return n_bonds - 2 * best, barg << 1


def cell_min_scaled(table, j_scaled):
    tab = np.ascontiguousarray(table, dtype=np.int64)
    js = np.ascontiguousarray(j_scaled, dtype=np.int64)
    cdef long long[::1] T = tab
    cdef long long[::1] J = js
    cdef long long nk = T.shape[0]
    cdef Py_ssize_t nb = J.shape[0], b
    cdef long long total = 0, k, tt, acc, e, best = _INF, barg = 0
    for b in range(nb):
        total += J[b]
    with nogil:
        for k in range(nk):
            acc = 0
            tt = T[k]
            b = 0
            while tt:
                if tt & 1:
                    acc += J[b]
                tt >>= 1
                b += 1
            e = total - 2 * acc
            if e < best:
                best = e
                barg = k << 1
    return best, barg


cdef long long _dp_chain(long long r0_start, long long r0_count, bint periodic,
                         bint record, int width, int height,
                         long long[:, ::1] rc, long long[:, ::1] vt,
                         long long[::1] vs, long long[:, ::1] parents,
                         long long* dpbuf, long long* newbuf,
                         long long* out_r0, long long* out_rl) nogil:
    # One DP sweep over candidate first rows.  For the free case call with
    # r0_count == 1 and periodic False: the initial dp covers every first row.
    cdef long long nstates = (<long long>1) << width
    cdef long long best_e = _INF, best_r0 = 0, best_rl = 0
    cdef long long r0, rp, r, b, ba, c, rl
    cdef int y
    cdef long long* dp
    cdef long long* nw
    cdef long long* sw
    for r0 in range(r0_start, r0_start + r0_count):
        dp = dpbuf
        nw = newbuf
        if periodic:
            for rp in range(nstates):
                dp[rp] = _INF
            dp[r0] = rc[0, r0]
        else:
            for rp in range(nstates):
                dp[rp] = rc[0, rp]
        for y in range(1, height):
            for rp in range(nstates):
                b = _INF
                ba = 0
                for r in range(nstates):
                    c = dp[r] + vs[y - 1] - 2 * vt[y - 1, r ^ rp]
                    if c < b:
                        b = c
                        ba = r
                nw[rp] = b + rc[y, rp]
                if record:
                    parents[y, rp] = ba
            sw = dp
            dp = nw
            nw = sw
        for rl in range(nstates):
            c = dp[rl]
            if periodic:
                c += vs[height - 1] - 2 * vt[height - 1, rl ^ r0]
            if c < best_e:
                best_e = c
                best_r0 = r0
                best_rl = rl
    out_r0[0] = best_r0
    out_rl[0] = best_rl
    return best_e


def dp2d_ground(int width, int height, jh, jv, bint periodic):
    """Row-DP exact 2D ground state; see the pure twin for the layout contract."""
    cdef long long nstates = <long long>1 << width
    cdef Py_ssize_t nvrows = len(jv)

    rc_np = np.zeros((height, nstates), dtype=np.int64)
    cdef long long[:, ::1] rc = rc_np
    jh_np = np.ascontiguousarray(jh, dtype=np.int64)
    cdef long long[:, ::1] JH = jh_np
    cdef Py_ssize_t nh = JH.shape[1]
    cdef long long r, e
    cdef int x, xn, y, si, sj
    for y in range(height):
        for r in range(nstates):
            e = 0
            for x in range(nh):
                xn = x + 1 if x + 1 < width else 0
                si = 1 - 2 * ((r >> x) & 1)
                sj = 1 - 2 * ((r >> xn) & 1)
                e += JH[y, x] * si * sj
            rc[y, r] = e

    vt_np = np.zeros((nvrows, nstates), dtype=np.int64)
    cdef long long[:, ::1] vt = vt_np
    jv_np = np.ascontiguousarray(jv, dtype=np.int64)
    cdef long long[:, ::1] JV = jv_np
    vs_np = jv_np.sum(axis=1)
    cdef long long[::1] vs = vs_np
    cdef long long m, low
    cdef int bitpos
    for y in range(nvrows):
        for m in range(1, nstates):
            low = m & (-m)
            bitpos = 0
            while (low >> bitpos) != 1:
                bitpos += 1
            vt[y, m] = vt[y, m ^ low] + JV[y, bitpos]

    parents_np = np.zeros((height, nstates), dtype=np.int64)
    cdef long long[:, ::1] parents = parents_np
    dp_np = np.zeros(nstates, dtype=np.int64)
    new_np = np.zeros(nstates, dtype=np.int64)
    cdef long long[::1] dpv = dp_np
    cdef long long[::1] newv = new_np

    cdef long long best_e, check_e, best_r0 = 0, best_rl = 0
    if periodic:
        best_e = _dp_chain(0, nstates >> 1, True, False, width, height,
                           rc, vt, vs, parents, &dpv[0], &newv[0],
                           &best_r0, &best_rl)
        check_e = _dp_chain(best_r0, 1, True, True, width, height,
                            rc, vt, vs, parents, &dpv[0], &newv[0],
                            &best_r0, &best_rl)
        if check_e != best_e:
            raise AssertionError("periodic DP passes disagree")
    else:
        best_e = _dp_chain(0, 1, False, True, width, height,
                           rc, vt, vs, parents, &dpv[0], &newv[0],
                           &best_r0, &best_rl)

    rows_np = np.zeros(height, dtype=np.int64)
    cdef long long[::1] rows = rows_np
    rows[height - 1] = best_rl
    for y in range(height - 1, 0, -1):
        rows[y - 1] = parents[y, rows[y]]
    cdef object mask = 0
    for y in range(height):
        mask |= int(rows[y]) << (width * y)
    return int(best_e), mask


def exhaustive_ground(int n_sites, bonds, j_scaled):
    """Gray-code exhaustive ground state; site n_sites-1 held at +1."""
    cdef Py_ssize_t nb = len(bonds)
    deg_np = np.zeros(n_sites, dtype=np.int64)
    for (i, k) in bonds:
        deg_np[i] += 1
        deg_np[k] += 1
    off_np = np.zeros(n_sites + 1, dtype=np.int64)
    off_np[1:] = np.cumsum(deg_np)
    nbr_np = np.zeros(2 * nb, dtype=np.int64)
    nbj_np = np.zeros(2 * nb, dtype=np.int64)
    fill = off_np[0:n_sites].copy()
    js = np.ascontiguousarray(j_scaled, dtype=np.int64)
    for b, (i, k) in enumerate(bonds):
        nbr_np[fill[i]] = k
        nbj_np[fill[i]] = js[b]
        fill[i] += 1
        nbr_np[fill[k]] = i
        nbj_np[fill[k]] = js[b]
        fill[k] += 1
    cdef long long[::1] off = off_np
    cdef long long[::1] nbr = nbr_np
    cdef long long[::1] nbj = nbj_np
    spins_np = np.ones(n_sites, dtype=np.int64)
    cdef long long[::1] spins = spins_np
    cdef long long energy = int(js.sum())
    cdef long long best = energy, best_mask = 0, mask = 0
    cdef long long t, steps = <long long>1 << (n_sites - 1)
    cdef long long site, field, p
    with nogil:
        for t in range(1, steps):
            site = 0
            while not (t >> site) & 1:
                site += 1
            field = 0
            for p in range(off[site], off[site + 1]):
                field += nbj[p] * spins[nbr[p]]
            energy -= 2 * spins[site] * field
            spins[site] = -spins[site]
            mask ^= (<long long>1) << site
            if energy < best:
                best = energy
                best_mask = mask
    return int(best), int(best_mask)
