import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fastncut.errors import ConsistencyError, EmptyCluster, InputError
from fastncut.graph import from_edges
from fastncut.solver import (
    Labeling,
    SolverConfig,
    apply_move,
    best_candidate,
    cluster_affinity,
    init_state,
    ncut_objective,
    score_candidates,
    solve,
    sweep,
)
from fastncut.synthetic import random_graph, sparse_block_graph

OPT = 40.0 / 21.0


def lab(labels, c=None):
    return Labeling.from_labels(labels, c)


def test_init_state_g4(g4):
    st_ = init_state(g4, lab([0, 0, 1, 1]))
    np.testing.assert_allclose(st_.s, [2.0, 2.0], rtol=1e-15)
    np.testing.assert_allclose(st_.v, [2.1, 2.1], rtol=1e-15)
    assert st_.objective == pytest.approx(OPT, abs=1e-12)
    st_ = init_state(g4, lab([0, 0, 0, 1]))
    np.testing.assert_allclose(st_.s, [2.2, 0.0], rtol=1e-15)
    np.testing.assert_allclose(st_.v, [3.2, 1.0], rtol=1e-15)
    assert st_.objective == pytest.approx(0.6875, abs=1e-12)


def test_single_cluster_objective_is_one(g4):
    assert init_state(g4, lab([0, 0, 0, 0])).objective == pytest.approx(1.0, abs=1e-15)
    assert ncut_objective(g4, [0, 0, 0, 0]) == pytest.approx(1.0, abs=1e-15)


def test_empty_cluster_rejected(g4):
    with pytest.raises(EmptyCluster) as exc:
        init_state(g4, Labeling(np.array([0, 0, 2, 2]), 3))
    assert exc.value.cluster == 1
    with pytest.raises(EmptyCluster):
        solve(g4, Labeling(np.array([0, 0, 0, 0]), 2))


def test_labels_out_of_range():
    with pytest.raises(InputError):
        Labeling(np.array([0, 2]), 2)


def test_cluster_affinity(g4):
    b, d = cluster_affinity(g4, lab([0, 0, 0, 1]), 2)
    np.testing.assert_allclose(b, [0.1, 1.0])
    assert d == pytest.approx(1.1)
    b, d = cluster_affinity(g4, lab([0, 0, 1, 1]), 0)
    np.testing.assert_allclose(b, [1.0, 0.0])
    assert d == 1.0


def test_scores_first_example(g4):
    labeling = lab([0, 0, 0, 1])
    state = init_state(g4, labeling)
    b, d = cluster_affinity(g4, labeling, 2)
    L = score_candidates(state, b, d, 0)
    assert L[0] == pytest.approx(2.2 / 3.2 - 2.0 / 2.1, abs=1e-12)
    assert L[0] == pytest.approx(-0.264881, abs=1e-6)
    assert L[1] == pytest.approx(0.952381, abs=1e-6)
    assert best_candidate(L, 0) == 1


def test_scores_second_example(g4):
    labeling = lab([0, 0, 1, 1])
    state = init_state(g4, labeling)
    b, d = cluster_affinity(g4, labeling, 0)
    L = score_candidates(state, b, d, 0)
    assert L[0] == pytest.approx(0.952381, abs=1e-6)
    # 2.0/3.1 - 2.0/2.1
    assert L[1] == pytest.approx(-0.307220, abs=1e-6)
    assert best_candidate(L, 0) == 0


def test_optimum_prefers_own_cluster_everywhere(g4):
    labeling = lab([0, 0, 1, 1])
    state = init_state(g4, labeling)
    for m in range(4):
        p = labeling.labels[m]
        b, d = cluster_affinity(g4, labeling, m)
        L = score_candidates(state, b, d, p)
        assert all(L[p] > L[k] for k in range(2) if k != p)


def test_best_candidate_ties():
    assert best_candidate(np.array([0.5, 0.5, 0.5]), 1) == 1
    assert best_candidate(np.array([0.2, 0.7, 0.7]), 0) == 1


def test_apply_move_g4(g4):
    labeling = lab([0, 0, 0, 1])
    state = init_state(g4, labeling)
    b, d = cluster_affinity(g4, labeling, 2)
    L = score_candidates(state, b, d, 0)
    apply_move(state, labeling, 2, 0, 1, b, d, L)
    np.testing.assert_allclose(state.s, [2.0, 2.0], rtol=1e-12)
    np.testing.assert_allclose(state.v, [2.1, 2.1], rtol=1e-12)
    assert labeling.labels.tolist() == [0, 0, 1, 1]
    assert state.sizes.tolist() == [2, 2]
    assert L[1] - L[0] == pytest.approx(1.217262, abs=1e-6)
    assert state.objective == pytest.approx(OPT, abs=1e-12)
    fresh = init_state(g4, labeling)
    np.testing.assert_allclose(state.s, fresh.s, rtol=1e-9)
    np.testing.assert_allclose(state.v, fresh.v, rtol=1e-9)


def test_apply_move_same_cluster_is_noop(g4):
    labeling = lab([0, 0, 0, 1])
    state = init_state(g4, labeling)
    s, v = state.s.copy(), state.v.copy()
    apply_move(state, labeling, 2, 0, 0, np.zeros(2), 1.1)
    assert np.array_equal(state.s, s) and np.array_equal(state.v, v)


@pytest.mark.parametrize("debug", [False, True])
def test_sweep_g4(g4, debug):
    labeling = lab([0, 0, 0, 1])
    state = init_state(g4, labeling)
    assert sweep(g4, state, labeling, debug=debug) == 1
    assert labeling.labels.tolist() == [0, 0, 1, 1]
    assert state.objective == pytest.approx(OPT, abs=1e-12)
    assert sweep(g4, state, labeling, debug=debug) == 0


def test_singleton_row_skipped():
    # node 3 alone would prefer cluster 0, but its cluster must survive
    g = from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 5.0)])
    labeling = lab([0, 0, 0, 1])
    state = init_state(g, labeling)
    sweep(g, state, labeling, debug=True)
    assert labeling.sizes.min() >= 1
    assert labeling.labels[3] == 1 or labeling.sizes[1] >= 1


def test_solve_g4_trace(g4):
    res = solve(g4, lab([0, 0, 0, 1]))
    assert res.labels.tolist() == [0, 0, 1, 1]
    assert abs(res.objective - OPT) <= 1e-12
    assert res.sweeps == 2
    assert res.moves == [1, 0]
    assert res.initial_objective == pytest.approx(0.6875)


def test_solve_from_optimum(g4):
    res = solve(g4, lab([0, 0, 1, 1]))
    assert res.labels.tolist() == [0, 0, 1, 1]
    assert res.sweeps == 1 and res.moves == [0]


def test_solve_single_cluster(g4):
    res = solve(g4, lab([0, 0, 0, 0]))
    assert res.objective == pytest.approx(1.0, abs=1e-15)
    assert res.moves == [0]


def test_solve_does_not_mutate_input(g4):
    init = lab([0, 0, 0, 1])
    solve(g4, init)
    assert init.labels.tolist() == [0, 0, 0, 1]


def test_max_outer_cap():
    g, _ = sparse_block_graph(300, 5, 8, seed=0)
    init = Labeling(np.arange(300) % 5, 5)
    res = solve(g, init, SolverConfig(max_outer=1))
    assert res.sweeps == 1


def test_config_validation():
    with pytest.raises(InputError):
        SolverConfig(max_outer=0)
    with pytest.raises(InputError):
        SolverConfig(rel_tol=0.0)


def _random_case(seed, n, c):
    g = random_graph(n, 0.5, seed=seed)
    rng = np.random.default_rng(seed + 1)
    labels = np.concatenate((np.arange(c), rng.integers(0, c, n - c)))
    rng.shuffle(labels)
    return g, Labeling(labels, c)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(4, 25), st.integers(2, 4))
def test_kernel_matches_reference_path(seed, n, c):
    g, init = _random_case(seed, n, c)
    fast = solve(g, init)
    slow = solve(g, init, SolverConfig(debug=True))
    assert np.array_equal(fast.labels, slow.labels)
    assert fast.moves == slow.moves
    assert fast.trace == slow.trace


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(4, 25), st.integers(2, 4))
def test_solver_invariants(seed, n, c):
    g, init = _random_case(seed, n, c)
    gains = []
    res = solve(g, init, SolverConfig(debug=True), on_move=lambda m, p, r, gain: gains.append(gain))
    assert all(x > 0 for x in gains)
    trace = [res.initial_objective] + res.trace
    assert all(b >= a for a, b in zip(trace, trace[1:]))
    assert np.bincount(res.labels, minlength=c).min() >= 1
    assert 0 <= res.objective <= c + 1e-12
    assert res.objective == pytest.approx(ncut_objective(g, res.labels), abs=1e-9)
    state = init_state(g, Labeling(res.labels, c))
    assert ((state.s / state.v) >= -1e-15).all() and ((state.s / state.v) <= 1 + 1e-15).all()


def test_debug_detects_drift(g4, monkeypatch):
    import fastncut.solver as solver_mod

    real = solver_mod.apply_move

    def broken(state, labeling, m, p, r, b, d_mm, scores=None):
        out = real(state, labeling, m, p, r, b, d_mm, scores)
        state.s[r] += 0.5
        return out

    monkeypatch.setattr(solver_mod, "apply_move", broken)
    with pytest.raises(ConsistencyError):
        solve(g4, lab([0, 0, 0, 1]), SolverConfig(debug=True))


def test_deterministic():
    g, _ = sparse_block_graph(500, 5, 10, seed=3)
    init = Labeling(np.arange(500) % 5, 5)
    a, b = solve(g, init), solve(g, init)
    assert np.array_equal(a.labels, b.labels) and a.trace == b.trace
