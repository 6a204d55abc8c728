"""Fused hot path for the subtile search.

Enumerates column windows over the (already transposed-if-needed) parent
rectangle, maintains the per-row count vectors incrementally, and runs the
border-list scan on every window for both polarities. Ties across windows
break by the lexicographic order (cost, c, d, a, b, polarity), which makes
the result independent of how the window range is chunked across workers.

Compiled with numba when available; the plain-Python definitions are kept
callable so the package still works (slowly) without it.
"""

from __future__ import annotations

import math

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def wrap(func):
            return func

        return wrap


@njit(cache=True, nogil=True)
def _entropy_pair(p, n):
    t = p + n
    if t <= 0:
        return 0.0
    bits = 0.0
    if p > 0:
        bits -= p * math.log2(p / t)
    if n > 0:
        bits -= n * math.log2(n / t)
    return bits


@njit(cache=True, nogil=True)
def _freq_le(u1, v1, u2, v2):
    # u1/(u1+v1) <= u2/(u2+v2) with zero-mass segments as frequency 0.
    if u1 + v1 == 0:
        return True
    if u2 + v2 == 0:
        return u1 == 0
    return u1 * (u2 + v2) <= u2 * (u1 + v1)


@njit(cache=True, nogil=True)
def _scan_window(pp, pn, g, m, o, z, tfu, tfv, tstack, bstack, cstack):
    """Border-list scan over local rows 1..m starting at 0-based row g.

    pp/pn are prefix sums over the whole parent's current window counts, so
    cnt(x, y) over local rows = pp[g + y] - pp[g + x - 1]. Returns
    (found, cost, a, b) with a, b local 1-based.
    """
    tfu[m + 1] = 0
    tfv[m + 1] = 0
    tlen = 0
    for a in range(m, 0, -1):
        tstack[tlen] = a
        tlen += 1
        while tlen > 1:
            t1 = tstack[tlen - 1]
            t2 = tstack[tlen - 2]
            if _freq_le(
                pp[g + t1] - pp[g + a - 1],
                pn[g + t1] - pn[g + a - 1],
                pp[g + t2] - pp[g + t1],
                pn[g + t2] - pn[g + t1],
            ):
                tlen -= 1
            else:
                break
        t1 = tstack[tlen - 1]
        tfu[a] = pp[g + t1] - pp[g + a - 1]
        tfv[a] = pn[g + t1] - pn[g + a - 1]

    found = False
    best_cost = np.inf
    best_a = 0
    best_b = 0
    blen = 0
    clen = 0
    oz = o + z
    for b in range(1, m + 1):
        bstack[blen] = b
        blen += 1
        cstack[clen] = b
        clen += 1
        while blen > 1:
            b1 = bstack[blen - 1]
            b2 = bstack[blen - 2]
            if _freq_le(
                pp[g + b] - pp[g + b1 - 1],
                pn[g + b] - pn[g + b1 - 1],
                pp[g + b1 - 1] - pp[g + b2 - 1],
                pn[g + b1 - 1] - pn[g + b2 - 1],
            ):
                if clen > 0 and cstack[clen - 1] == b1:
                    clen -= 1
                blen -= 1
            else:
                break
        while clen > 1:
            c1 = cstack[clen - 1]
            c2 = cstack[clen - 2]
            # freq(C2, C1-1) >= tfreq(b+1)
            if _freq_le(
                tfu[b + 1],
                tfv[b + 1],
                pp[g + c1 - 1] - pp[g + c2 - 1],
                pn[g + c1 - 1] - pn[g + c2 - 1],
            ):
                u = pp[g + b] - pp[g + c1 - 1]
                v = pn[g + b] - pn[g + c1 - 1]
                if u * oz > o * (u + v):
                    cost = _entropy_pair(u, v) + _entropy_pair(o - u, z - v)
                    if cost < best_cost:
                        best_cost = cost
                        best_a = c1
                        best_b = b
                        found = True
                clen -= 1
            else:
                break
        c1 = cstack[clen - 1]
        u = pp[g + b] - pp[g + c1 - 1]
        v = pn[g + b] - pn[g + c1 - 1]
        if u * oz > o * (u + v):
            cost = _entropy_pair(u, v) + _entropy_pair(o - u, z - v)
            if cost < best_cost:
                best_cost = cost
                best_a = c1
                best_b = b
                found = True
    return found, best_cost, best_a, best_b


@njit(cache=True, nogil=True)
def _lex_better(cost, a, b, c, d, pol, best_cost, ba, bb, bc, bd, bpol):
    # lexicographic (cost, c, d, a, b, polarity)
    if cost != best_cost:
        return cost < best_cost
    if c != bc:
        return c < bc
    if d != bd:
        return d < bd
    if a != ba:
        return a < ba
    if b != bb:
        return b < bb
    return pol < bpol


@njit(cache=True, nogil=True)
def find_best_subtile(ones_cells, zero_cells, o, z, siblings, disjoint, c_lo, c_hi):
    """Best subtile over column windows [c, d] with c in [c_lo, c_hi].

    ones_cells/zero_cells mark the parent's unclaimed 1s and 0s per cell;
    `siblings` holds existing-child rectangles (rows 0-based inclusive,
    then columns) used only when `disjoint` forbids geometric overlap.
    Returns (found, cost, a, b, c, d, polarity) with 0-based local
    coordinates; polarity 0 = denser than the parent, 1 = sparser.
    """
    n_rows, n_cols = ones_cells.shape
    p = np.zeros(n_rows, np.int64)
    n = np.zeros(n_rows, np.int64)
    pp = np.zeros(n_rows + 1, np.int64)
    pn = np.zeros(n_rows + 1, np.int64)
    tfu = np.zeros(n_rows + 2, np.int64)
    tfv = np.zeros(n_rows + 2, np.int64)
    tstack = np.zeros(n_rows + 1, np.int64)
    bstack = np.zeros(n_rows + 1, np.int64)
    cstack = np.zeros(n_rows + 1, np.int64)
    blocked = np.zeros(n_rows, np.uint8)
    n_sib = siblings.shape[0]

    best_found = False
    best_cost = np.inf
    best_a = -1
    best_b = -1
    best_c = -1
    best_d = -1
    best_pol = -1

    for c in range(c_lo, c_hi + 1):
        for i in range(n_rows):
            p[i] = 0
            n[i] = 0
        for d in range(c, n_cols):
            acc_p = 0
            acc_n = 0
            for i in range(n_rows):
                p[i] += ones_cells[i, d]
                n[i] += zero_cells[i, d]
                acc_p += p[i]
                acc_n += n[i]
                pp[i + 1] = acc_p
                pn[i + 1] = acc_n

            if disjoint and n_sib > 0:
                for i in range(n_rows):
                    blocked[i] = 0
                for k in range(n_sib):
                    if siblings[k, 2] <= d and siblings[k, 3] >= c:
                        for r in range(siblings[k, 0], siblings[k, 1] + 1):
                            blocked[r] = 1
                i = 0
                while i < n_rows:
                    if blocked[i] == 1:
                        i += 1
                        continue
                    g = i
                    while i < n_rows and blocked[i] == 0:
                        i += 1
                    h = i - 1
                    m = h - g + 1
                    ok, cost, a, b = _scan_window(
                        pp, pn, g, m, o, z, tfu, tfv, tstack, bstack, cstack
                    )
                    if ok and (
                        not best_found
                        or _lex_better(
                            cost, g + a - 1, g + b - 1, c, d, 0,
                            best_cost, best_a, best_b, best_c, best_d, best_pol,
                        )
                    ):
                        best_found = True
                        best_cost = cost
                        best_a = g + a - 1
                        best_b = g + b - 1
                        best_c = c
                        best_d = d
                        best_pol = 0
                    ok, cost, a, b = _scan_window(
                        pn, pp, g, m, z, o, tfu, tfv, tstack, bstack, cstack
                    )
                    if ok and (
                        not best_found
                        or _lex_better(
                            cost, g + a - 1, g + b - 1, c, d, 1,
                            best_cost, best_a, best_b, best_c, best_d, best_pol,
                        )
                    ):
                        best_found = True
                        best_cost = cost
                        best_a = g + a - 1
                        best_b = g + b - 1
                        best_c = c
                        best_d = d
                        best_pol = 1
            else:
                ok, cost, a, b = _scan_window(
                    pp, pn, 0, n_rows, o, z, tfu, tfv, tstack, bstack, cstack
                )
                if ok and (
                    not best_found
                    or _lex_better(
                        cost, a - 1, b - 1, c, d, 0,
                        best_cost, best_a, best_b, best_c, best_d, best_pol,
                    )
                ):
                    best_found = True
                    best_cost = cost
                    best_a = a - 1
                    best_b = b - 1
                    best_c = c
                    best_d = d
                    best_pol = 0
                ok, cost, a, b = _scan_window(
                    pn, pp, 0, n_rows, z, o, tfu, tfv, tstack, bstack, cstack
                )
                if ok and (
                    not best_found
                    or _lex_better(
                        cost, a - 1, b - 1, c, d, 1,
                        best_cost, best_a, best_b, best_c, best_d, best_pol,
                    )
                ):
                    best_found = True
                    best_cost = cost
                    best_a = a - 1
                    best_b = b - 1
                    best_c = c
                    best_d = d
                    best_pol = 1

    return best_found, best_cost, best_a, best_b, best_c, best_d, best_pol
