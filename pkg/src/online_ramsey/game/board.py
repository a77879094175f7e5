"""Random boards for the vertex games.

Vertices are revealed in label order, ``r`` per step.  Every pair of vertices
is an edge independently with probability ``p``; the sample is stored as, for
each vertex, the sorted list of its older neighbours (CSR arrays).
"""

from __future__ import annotations

import math

import numpy as np


def edge_probability(n, theta):
    """p = n^-theta, computed in floating point for sampling only."""
    return min(1.0, math.exp(-float(theta) * math.log(n)))


def sample_older_neighbours(n, p, rng):
    """CSR arrays (ptr, idx) of each vertex's older neighbours in G(n, p)."""
    older = np.arange(n, dtype=np.int64)
    counts = rng.binomial(older, p)
    owners = np.repeat(older, counts)
    draws = np.floor(rng.random(owners.size) * owners).astype(np.int64)
    dense = counts * 2 > older
    if dense.any():
        keep = ~dense[owners]
        owners, draws = owners[keep], draws[keep]
        extra_owners, extra_draws = [], []
        for t in np.flatnonzero(dense):
            picked = rng.choice(t, size=counts[t], replace=False)
            extra_owners.append(np.full(picked.size, t, dtype=np.int64))
            extra_draws.append(picked.astype(np.int64))
        owners = np.concatenate([owners, *extra_owners])
        draws = np.concatenate([draws, *extra_draws])
    while True:
        order = np.lexsort((draws, owners))
        owners, draws = owners[order], draws[order]
        repeated = np.zeros(owners.size, dtype=bool)
        if owners.size > 1:
            repeated[1:] = (owners[1:] == owners[:-1]) & (draws[1:] == draws[:-1])
        if not repeated.any():
            break
        draws[repeated] = np.floor(rng.random(int(repeated.sum())) * owners[repeated]).astype(np.int64)
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=ptr[1:])
    return ptr, draws
