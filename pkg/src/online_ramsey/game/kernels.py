"""Hot loops of the Monte Carlo games.

The functions are compiled with numba unless ``ONLINE_RAMSEY_DISABLE_NUMBA``
is set; the same bodies then run as plain Python.  All inputs are numpy
arrays and integers so both paths see identical data.
"""

from __future__ import annotations

import numpy as np

from .._accel import jit

EMPTY = -1


@jit
def single_edge_vertex_game(ptr, idx, n, r, achlioptas, avoid):
    """Vertex game with target K_2.  Returns the losing step (1-based) or 0.

    Balanced: colour j goes to block position (j + k) mod r for the first k
    that creates no monochromatic edge (k = 0 if none does or ``avoid`` is
    off).  Achlioptas: the first vertex without a chosen older neighbour.
    """
    colour = np.full(n, -1, dtype=np.int64)
    masks = np.zeros(r, dtype=np.int64)
    for step in range(n // r):
        base = step * r
        for a in range(r):
            m = 0
            for t in range(ptr[base + a], ptr[base + a + 1]):
                u = idx[t]
                if u < base and colour[u] >= 0:
                    m |= 1 << colour[u]
            masks[a] = m
        if achlioptas:
            pick = -1
            if avoid:
                for a in range(r):
                    if masks[a] & 1 == 0:
                        pick = a
                        break
            if pick < 0:
                pick = 0
            colour[base + pick] = 0
            if masks[pick] & 1:
                return step + 1
            continue
        chosen = -1
        if avoid:
            for k in range(r):
                clean = True
                for j in range(r):
                    if masks[(j + k) % r] >> j & 1:
                        clean = False
                        break
                if clean:
                    chosen = k
                    break
        if chosen < 0:
            chosen = 0
        lose = False
        for j in range(r):
            colour[base + (j + chosen) % r] = j
            if masks[(j + chosen) % r] >> j & 1:
                lose = True
        if lose:
            return step + 1
    return 0


@jit
def _insert_pair(table, key):
    """Insert ``key`` into the open-addressing set; False if it was present."""
    size = table.shape[0]
    slot = key & (size - 1)
    while True:
        current = table[slot]
        if current == EMPTY:
            table[slot] = key
            return True
        if current == key:
            return False
        slot = (slot + 1) & (size - 1)


@jit
def star_edge_game(pairs, cursor, n, k, r, achlioptas, perms, counts, degree, table, state, us, vs):
    """Advance an edge star game until loss, budget end, or exhausted draws.

    ``pairs`` holds uniform vertex pairs consumed from ``cursor``; loops and
    previously offered pairs are skipped.  ``state`` = [step, budget,
    loss_step, star_step, pending] is updated in place, where ``pending``
    counts the pairs of an unfinished step already stored in ``us``/``vs``.
    Balanced: ``counts[v*r + c]`` are monochromatic ray counts and the colour
    permutation minimizing the largest resulting count is used (first in
    ``perms`` on ties).  Achlioptas:
    ``counts[v]`` is the chosen degree and the first edge minimizing the
    larger resulting endpoint degree is kept.  ``degree`` tracks total degree
    for the pigeonhole check.  Returns the new cursor; when it equals the
    number of draws the caller must supply a fresh batch and call again.
    """
    forced = r * (k - 1) + 1
    total = pairs.shape[0]
    while state[0] < state[1] and state[2] == 0:
        got = state[4]
        while got < r:
            if cursor >= total:
                state[4] = got
                return cursor
            a = pairs[cursor, 0]
            b = pairs[cursor, 1]
            cursor += 1
            if a == b:
                continue
            if a > b:
                a, b = b, a
            if not _insert_pair(table, a * n + b):
                continue
            us[got] = a
            vs[got] = b
            got += 1
        state[4] = 0
        state[0] += 1
        step = state[0]
        for i in range(r):
            degree[us[i]] += 1
            degree[vs[i]] += 1
            if state[3] == 0 and (degree[us[i]] >= forced or degree[vs[i]] >= forced):
                state[3] = step
        if achlioptas:
            best = -1
            best_value = 0
            for i in range(r):
                value = max(counts[us[i]], counts[vs[i]]) + 1
                if best < 0 or value < best_value:
                    best = i
                    best_value = value
            counts[us[best]] += 1
            counts[vs[best]] += 1
            if best_value >= k:
                state[2] = step
        else:
            best = -1
            best_value = 0
            for p in range(perms.shape[0]):
                value = 0
                for i in range(r):
                    c = perms[p, i]
                    value = max(value, max(counts[us[i] * r + c], counts[vs[i] * r + c]) + 1)
                if best < 0 or value < best_value:
                    best = p
                    best_value = value
            for i in range(r):
                c = perms[best, i]
                counts[us[i] * r + c] += 1
                counts[vs[i] * r + c] += 1
            if best_value >= k:
                state[2] = step
    return cursor


def table_size(entries):
    size = 1
    while size < 4 * entries:
        size *= 2
    return size
