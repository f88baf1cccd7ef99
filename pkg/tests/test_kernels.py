"""The two kernel paths must agree bit for bit and survive numba's absence."""

import importlib
import sys
from unittest import mock

import numpy as np
import pytest

import respchain._kernels as kernels


def brute_force_counts(states, k):
    out = np.zeros((k, k), dtype=np.int64)
    for a, b in zip(states[:-1], states[1:]):
        out[a - 1, b - 1] += 1
    return out


def reference_walk(cum_rows, first_state, uniforms):
    """Direct translation of the sampling rule, no kernel shared code."""
    k = cum_rows.shape[1]
    out = [first_state]
    s = first_state - 1
    for u in uniforms:
        j = 0
        while j < k - 1 and u >= cum_rows[s, j]:
            j += 1
        s = j
        out.append(j + 1)
    return np.array(out, dtype=np.int64)


@pytest.fixture
def cum_rows():
    rng = np.random.default_rng(19)
    rows = rng.dirichlet(np.ones(5), size=5)
    return np.cumsum(rows, axis=1)


class TestPairCounts:
    def test_matches_brute_force(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            states = rng.integers(1, 6, size=100).astype(np.int64)
            got = kernels.pair_counts(states, 5)
            assert np.array_equal(got, brute_force_counts(states, 5))

    def test_numpy_path_matches_brute_force(self):
        rng = np.random.default_rng(2)
        states = rng.integers(1, 4, size=500).astype(np.int64)
        got = kernels._pair_counts_numpy(states, 3)
        assert np.array_equal(got, brute_force_counts(states, 3))

    def test_single_transition(self):
        got = kernels.pair_counts(np.array([2, 5], dtype=np.int64), 5)
        assert got[1, 4] == 1
        assert got.sum() == 1


class TestWalk:
    def test_numpy_path_matches_reference(self, cum_rows):
        rng = np.random.default_rng(3)
        u = rng.random(200)
        got = kernels._walk_numpy(cum_rows, 3, u)
        assert np.array_equal(got, reference_walk(cum_rows, 3, u))

    def test_active_path_matches_reference(self, cum_rows):
        rng = np.random.default_rng(4)
        u = rng.random(200)
        got = kernels.walk(cum_rows, 2, u)
        assert np.array_equal(got, reference_walk(cum_rows, 2, u))

    def test_draw_exactly_on_boundary_moves_on(self):
        # u equal to a cumulative edge belongs to the next column
        cum = np.cumsum([[0.5, 0.5]], axis=1)
        cum = np.vstack([cum, cum])
        out = kernels._walk_numpy(cum, 1, np.array([0.5]))
        assert out[1] == 2

    def test_top_cell_absorbs_rounding(self):
        # cumulative sums can fall a hair short of 1; a draw above the
        # last edge must still land in the final state, not overflow
        rows = np.array([[0.3, 0.3, 0.4 - 1e-12], [0.2, 0.3, 0.5]])
        cum = np.cumsum(rows, axis=1)
        out = kernels._walk_numpy(cum, 1, np.array([1.0 - 1e-14]))
        assert out[1] == 3


@pytest.mark.skipif(not kernels.HAS_NUMBA, reason="numba not importable here")
class TestCompiledAgreement:
    def test_walk_bit_identical(self, cum_rows):
        rng = np.random.default_rng(5)
        for _ in range(10):
            u = rng.random(1000)
            first = int(rng.integers(1, 6))
            a = kernels._walk_nb(cum_rows, first, u)
            b = kernels._walk_numpy(cum_rows, first, u)
            assert np.array_equal(a, b)

    def test_pair_counts_identical(self):
        rng = np.random.default_rng(6)
        states = rng.integers(1, 6, size=5000).astype(np.int64)
        assert np.array_equal(
            kernels._pair_counts_nb(states, 5),
            kernels._pair_counts_numpy(states, 5),
        )


class TestFallbackSelection:
    def test_env_flag_parsing(self):
        assert kernels._env_truthy.__name__  # present
        for value, expected in (
            ("1", True), ("true", True), ("YES", True), (" on ", True),
            ("0", False), ("", False), ("no", False), ("off", False),
        ):
            with mock.patch.dict("os.environ", {"PROBE": value}):
                assert kernels._env_truthy("PROBE") is expected

    def test_env_flag_forces_numpy_path(self, monkeypatch):
        monkeypatch.setenv("RESPCHAIN_NO_NUMBA", "1")
        try:
            mod = importlib.reload(kernels)
            assert mod.NUMBA_DISABLED
            assert not mod.HAS_NUMBA
            assert mod.walk is mod._walk_numpy
            assert mod.pair_counts is mod._pair_counts_numpy
        finally:
            monkeypatch.delenv("RESPCHAIN_NO_NUMBA")
            importlib.reload(kernels)

    def test_import_survives_missing_numba(self):
        with mock.patch.dict(sys.modules, {"numba": None}):
            try:
                mod = importlib.reload(kernels)
                assert not mod.HAS_NUMBA
                states = np.array([1, 2, 2, 1], dtype=np.int64)
                got = mod.pair_counts(states, 2)
                assert got[0, 1] == 1 and got[1, 1] == 1 and got[1, 0] == 1
            finally:
                pass
        importlib.reload(kernels)
