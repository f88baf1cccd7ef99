"""Inner loops for walking and counting long state sequences.

Both kernels exist twice: a numba-compiled version and a plain numpy
version. The compiled path is used when numba imports cleanly, unless the
environment variable RESPCHAIN_NO_NUMBA is set to a truthy value (1, true,
yes, on). Everything downstream calls ``walk`` and ``pair_counts`` and
never needs to know which path is active; the two paths return identical
arrays, bit for bit, because all randomness is drawn before the kernel
runs and the kernels themselves are deterministic.

States are 1-based integers throughout, matching how responses are written
in data files.
"""

import os

import numpy as np


def _env_truthy(name):
    return os.environ.get(name, "").strip().lower() in ("1", "true", "yes", "on")


NUMBA_DISABLED = _env_truthy("RESPCHAIN_NO_NUMBA")

try:
    if NUMBA_DISABLED:
        raise ImportError("numba disabled by RESPCHAIN_NO_NUMBA")
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False


def _pair_counts_numpy(states, n_states):
    """Count adjacent (from, to) pairs into an n_states x n_states matrix."""
    counts = np.zeros((n_states, n_states), dtype=np.int64)
    np.add.at(counts, (states[:-1] - 1, states[1:] - 1), 1)
    return counts


def _walk_numpy(cum_rows, first_state, uniforms):
    """Walk a chain from first_state using pre-drawn uniforms.

    cum_rows holds the row-wise cumulative sums of the transition matrix.
    Each step picks the first column whose cumulative mass exceeds the
    uniform draw; the comparison is identical to the compiled scan below,
    so both paths emit the same integer sequence for the same draws.
    """
    k = cum_rows.shape[1]
    out = np.empty(uniforms.shape[0] + 1, dtype=np.int64)
    out[0] = first_state
    s = first_state - 1
    for t in range(uniforms.shape[0]):
        j = int(np.searchsorted(cum_rows[s], uniforms[t], side="right"))
        if j > k - 1:
            j = k - 1
        s = j
        out[t + 1] = j + 1
    return out


if HAS_NUMBA:

    @njit(cache=True)
    def _pair_counts_nb(states, n_states):
        counts = np.zeros((n_states, n_states), dtype=np.int64)
        for t in range(states.shape[0] - 1):
            counts[states[t] - 1, states[t + 1] - 1] += 1
        return counts

    @njit(cache=True)
    def _walk_nb(cum_rows, first_state, uniforms):
        k = cum_rows.shape[1]
        out = np.empty(uniforms.shape[0] + 1, dtype=np.int64)
        out[0] = first_state
        s = first_state - 1
        for t in range(uniforms.shape[0]):
            u = uniforms[t]
            j = 0
            while j < k - 1 and u >= cum_rows[s, j]:
                j += 1
            s = j
            out[t + 1] = j + 1
        return out

    pair_counts = _pair_counts_nb
    walk = _walk_nb
else:
    pair_counts = _pair_counts_numpy
    walk = _walk_numpy
