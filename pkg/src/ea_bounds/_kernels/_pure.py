"""Pure-Python integer kernels.

Reference implementation of the hot enumeration loops.  Arbitrary-precision
(Python ints throughout), so it is also the overflow fallback for inputs whose
scaled couplings do not fit int64.  The compiled backend in ``_core.pyx``
must produce bit-identical results, including argmin tie-breaking.

Conventions shared by both backends:

* spin bitmask: bit ``k`` set  <=>  spin at site ``k`` is -1;
* coupling bitmask: bit ``b`` set  <=>  bond ``b`` carries -J;
* spin configurations are scanned with site 0 fixed to +1, i.e. in
  ascending order of even masks ``2*k`` (global flip symmetry); the first
  minimizer found is therefore the smallest spin bitmask.
"""

from __future__ import annotations

_INF = 1 << 62


def antialign_table(n_sites, bonds):
    """Per spin configuration, the bitmask of bonds whose endpoints differ.

    Returns a list of length ``2**(n_sites-1)``; entry ``k`` corresponds to
    the spin mask ``2*k``.
    """
    table = []
    for k in range(1 << (n_sites - 1)):
        m = k << 1
        t = 0
        for b, (i, j) in enumerate(bonds):
            if ((m >> i) ^ (m >> j)) & 1:
                t |= 1 << b
        table.append(t)
    return table


def pm_minima(table, n_bonds):
    """Ground-state energies for every +-J coupling mask.

    For coupling mask M the energy in units of J is
    ``n_bonds - 2 * max_k popcount(M ^ table[k])``.  Returns
    ``(energies, argmin_spin_masks)`` over all ``2**n_bonds`` masks.
    """
    nmask = 1 << n_bonds
    energies = [0] * nmask
    argmins = [0] * nmask
    for mask in range(nmask):
        best = -1
        barg = 0
        for k, t in enumerate(table):
            p = (mask ^ t).bit_count()
            if p > best:
                best = p
                barg = k
        energies[mask] = n_bonds - 2 * best
        argmins[mask] = barg << 1
    return energies, argmins


def pm_min_single(table, n_bonds, mask):
    """Ground state for one +-J coupling mask: ``(energy, spin_mask)``."""
    best = -1
    barg = 0
    for k, t in enumerate(table):
        p = (mask ^ t).bit_count()
        if p > best:
            best = p
            barg = k
    return n_bonds - 2 * best, barg << 1


def cell_min_scaled(table, j_scaled):
    """Ground state for integer-scaled couplings: ``(energy, spin_mask)``.

    Energy of configuration k is ``sum(j) - 2 * sum(j[b] for b in table[k])``.
    """
    total = sum(j_scaled)
    best = _INF
    barg = 0
    for k, t in enumerate(table):
        acc = 0
        tt = t
        while tt:
            low = tt & -tt
            acc += j_scaled[low.bit_length() - 1]
            tt ^= low
        e = total - 2 * acc
        if e < best:
            best = e
            barg = k << 1
    return best, barg


def _rowcost_table(width, jh_row):
    """Energies of the horizontal bonds within one row, for all row masks."""
    n = 1 << width
    out = [0] * n
    for r in range(n):
        e = 0
        for x, j in enumerate(jh_row):
            xn = x + 1 if x + 1 < width else 0
            si = 1 - 2 * ((r >> x) & 1)
            sj = 1 - 2 * ((r >> xn) & 1)
            e += j * si * sj
        out[r] = e
    return out


def _subset_table(width, jv_row):
    """subset sums: entry m = sum of jv_row[x] over set bits x of m."""
    n = 1 << width
    out = [0] * n
    for m in range(1, n):
        low = m & -m
        out[m] = out[m ^ low] + jv_row[low.bit_length() - 1]
    return out


def dp2d_ground(width, height, jh, jv, periodic):
    """Exact 2D ground state by row dynamic programming.

    ``jh[y]`` holds the horizontal couplings of row y (length ``width`` when
    periodic, else ``width - 1``); ``jv[y]`` the vertical couplings between
    rows y and y+1 (mod height), length ``width``.  Vertical wrap is handled
    by conditioning on the first row, with its top bit fixed by global flip
    symmetry.  Returns ``(energy, site_mask)`` with site ``x + width * y``.
    """
    nstates = 1 << width
    rc = [_rowcost_table(width, jh[y]) for y in range(height)]
    vt = [_subset_table(width, row) for row in jv]
    vs = [sum(row) for row in jv]

    def sweep(first_states, close, record):
        # One DP pass.  ``close`` conditions on the first row (one run per
        # candidate, vertical wrap added at the end); otherwise a single run
        # starts from every first row at once.  Record parents only when the
        # pass runs a single candidate, else backtracking would mix runs.
        parents = [[0] * nstates for _ in range(height)] if record else None
        best = (_INF, 0, 0)
        for r0 in first_states:
            if close:
                dp = [_INF] * nstates
                dp[r0] = rc[0][r0]
            else:
                dp = list(rc[0])
            for y in range(1, height):
                vty = vt[y - 1]
                vsy = vs[y - 1]
                rcy = rc[y]
                new = [0] * nstates
                for rp in range(nstates):
                    b = _INF
                    ba = 0
                    for r in range(nstates):
                        c = dp[r] + vsy - 2 * vty[r ^ rp]
                        if c < b:
                            b = c
                            ba = r
                    new[rp] = b + rcy[rp]
                    if record:
                        parents[y][rp] = ba
                dp = new
            for rl in range(nstates):
                e = dp[rl]
                if close:
                    e += vs[height - 1] - 2 * vt[height - 1][rl ^ r0]
                if e < best[0]:
                    best = (e, r0, rl)
        return best, parents

    if periodic:
        # pass 1 finds the optimal conditioning row, pass 2 rebuilds parents
        (energy, r0, rl), _ = sweep(range(1 << (width - 1)), True, False)
        (energy2, r0b, rl2), parents = sweep([r0], True, True)
        assert (energy2, r0b, rl2) == (energy, r0, rl)
    else:
        (energy, r0, rl), parents = sweep([0], False, True)

    rows = [0] * height
    rows[height - 1] = rl
    for y in range(height - 1, 0, -1):
        rows[y - 1] = parents[y][rows[y]]
    mask = 0
    for y, r in enumerate(rows):
        mask |= r << (width * y)
    return energy, mask


def exhaustive_ground(n_sites, bonds, j_scaled):
    """Exact ground state by Gray-code enumeration over 2**(n_sites-1) states.

    Site ``n_sites - 1`` is held at +1 (global flip symmetry).  Returns
    ``(energy, spin_mask)``; the argmin is the first minimizer in Gray order.
    """
    adj = [[] for _ in range(n_sites)]
    for (i, k), val in zip(bonds, j_scaled):
        adj[i].append((k, val))
        adj[k].append((i, val))
    spins = [1] * n_sites
    energy = sum(j_scaled)
    best = energy
    best_mask = 0
    mask = 0
    for t in range(1, 1 << (n_sites - 1)):
        site = (t & -t).bit_length() - 1
        field = 0
        for nb, val in adj[site]:
            field += val * spins[nb]
        energy -= 2 * spins[site] * field
        spins[site] = -spins[site]
        mask ^= 1 << site
        if energy < best:
            best = energy
            best_mask = mask
    return best, best_mask
