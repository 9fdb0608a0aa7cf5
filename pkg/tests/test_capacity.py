"""Multistart searches for entangling capacity and their cross-checks."""

import numpy as np
import pytest

from entcap import (
    BipartiteOperator,
    BracketInversionError,
    LayoutError,
    ProductStateParam,
    SearchConfig,
    SubsystemLayout,
    apply_channel,
    assisted_capacity_lower,
    capacity_bracket,
    dual_capacity_bound,
    gate_family,
    pure_log_negativity,
    random_kraus_channel,
    unassisted_capacity,
    unitary_channel,
)
from entcap.channels import embedded_kraus
from entcap.core import PureState

SMALL = SearchConfig(restarts=12, seed=0)
TINY = SearchConfig(restarts=4, seed=0)


def phase_channel(phi):
    return unitary_channel(gate_family("phase", phi=phi))


def test_interaction_phase_gate_reaches_one_ebit():
    est = unassisted_capacity(phase_channel(np.pi / 4), SMALL)
    assert abs(est.value - 1.0) < 1e-6
    assert est.kind == "unassisted"
    assert est.monotone == "log-negativity"
    assert est.trace.shape == (SMALL.restarts,)
    assert est.value == est.trace.max()
    assert est.evaluations > 0


def test_identity_channel_clamps_to_exact_zero():
    ch = unitary_channel(BipartiteOperator(np.eye(4), SubsystemLayout.bipartite(2, 2)))
    assert unassisted_capacity(ch, TINY).value == 0.0
    assert assisted_capacity_lower(ch, TINY, warm_start=False).value == 0.0
    assert dual_capacity_bound(ch, TINY, warm_start=False).value == 0.0


def test_search_is_deterministic():
    a = unassisted_capacity(phase_channel(0.6), SMALL)
    b = unassisted_capacity(phase_channel(0.6), SMALL)
    assert a.value == b.value
    assert np.array_equal(a.trace, b.trace)
    assert np.array_equal(a.argmax.state_a.amplitudes, b.argmax.state_a.amplitudes)
    assert np.array_equal(a.argmax.state_b.amplitudes, b.argmax.state_b.amplitudes)


def test_more_restarts_never_hurt():
    ch = phase_channel(0.9)
    small = unassisted_capacity(ch, SearchConfig(restarts=4, seed=0))
    large = unassisted_capacity(ch, SearchConfig(restarts=16, seed=0))
    assert large.value >= small.value - 1e-12
    # the first restarts share trajectories, so the traces nest
    assert np.array_equal(large.trace[:4], small.trace)


def test_workers_do_not_change_the_result():
    ch = phase_channel(0.7)
    serial = unassisted_capacity(ch, SMALL, workers=1)
    threaded = unassisted_capacity(ch, SMALL, workers=2)
    assert serial.value == threaded.value
    assert np.array_equal(serial.trace, threaded.trace)


def test_budget_factor_scales_restarts_only():
    cfg = SearchConfig(restarts=10, seed=3)
    big = cfg.with_budget_factor(4)
    assert big.restarts == 40
    assert (big.max_iters, big.seed, big.convergence_tol) == (
        cfg.max_iters,
        cfg.seed,
        cfg.convergence_tol,
    )


def test_warm_started_searches_floor_at_product_value():
    ch = phase_channel(0.5)
    un = unassisted_capacity(ch, SMALL)
    probe = assisted_capacity_lower(ch, SMALL, warm_start=un.argmax)
    dual = dual_capacity_bound(ch, SMALL, warm_start=un.argmax)
    assert probe.value >= un.value - 1e-9
    assert dual.value >= un.value - 1e-9
    assert probe.kind == "assisted-probe"
    assert dual.kind == "dual-bound"


def test_reported_value_matches_reevaluated_argmax():
    ch = phase_channel(np.pi / 4)
    est = unassisted_capacity(ch, SMALL)
    psi = est.argmax.combined()
    k = embedded_kraus(ch, psi.layout, targets=(0, 2))[0]
    out = PureState.from_vector(k @ psi.amplitudes, psi.layout)
    assert abs(float(pure_log_negativity(out)) - est.value) < 1e-10


def test_ancilla_override():
    # the phase gate needs no ancillas to reach its capacity
    cfg = SearchConfig(restarts=12, seed=0, ancilla_dims=(1, 1))
    est = unassisted_capacity(phase_channel(np.pi / 4), cfg)
    assert abs(est.value - 1.0) < 1e-6
    assert est.argmax.state_a.layout.dims == (2, 1)
    with pytest.raises(ValueError):
        unassisted_capacity(phase_channel(0.3), SearchConfig(ancilla_dims=(0, 2)))


def test_dual_bound_covers_unassisted_value():
    ch = phase_channel(0.6)
    un = unassisted_capacity(ch, SMALL)
    dual = dual_capacity_bound(ch, SMALL, warm_start=un.argmax)
    assert dual.value >= un.value - 1e-6


def test_bracket_on_interaction_phase_gate():
    report = capacity_bracket(phase_channel(np.pi / 4), SMALL, description="quarter turn")
    assert abs(report.lower - 1.0) < 1e-6
    assert abs(report.upper - 1.0) < 1e-6
    assert report.lower <= report.upper + 1e-6
    assert abs(report.thm2_upper - 1.0) < 1e-9
    assert abs(report.choi_lower - 1.0) < 1e-9
    assert report.description == "quarter turn"
    d = report.to_dict()
    assert set(d) == {
        "description",
        "unassisted",
        "assisted_probe",
        "dual_bound",
        "thm2_upper",
        "choi_lower",
        "lower",
        "upper",
    }
    assert d["unassisted"]["config"]["restarts"] == SMALL.restarts


def test_bracket_inversion_is_detected(monkeypatch):
    monkeypatch.setattr("entcap.capacity.thm2_upper_bound", lambda ch: -1.0)
    with pytest.raises(BracketInversionError):
        capacity_bracket(phase_channel(0.4), TINY)


def test_search_input_validation():
    four = SubsystemLayout(((2, "A"), (2, "A"), (2, "B"), (2, "B")))
    ch = random_kraus_channel(four, kraus_rank=1, seed=77)
    with pytest.raises(LayoutError):
        unassisted_capacity(ch, TINY)
    noisy = random_kraus_channel(SubsystemLayout.bipartite(2, 2), kraus_rank=2, seed=79)
    with pytest.raises(ValueError):
        unassisted_capacity(noisy, TINY, monotone="von-neumann")
    with pytest.raises(TypeError):
        dual_capacity_bound(phase_channel(0.3), TINY, warm_start=np.zeros(8))


def test_von_neumann_search_on_unitary():
    est = unassisted_capacity(phase_channel(np.pi / 4), SMALL, monotone="von-neumann")
    assert abs(est.value - 1.0) < 1e-6
    assert est.monotone == "von-neumann"


def test_noisy_channel_bracket_sane():
    ch = random_kraus_channel(SubsystemLayout.bipartite(2, 2), kraus_rank=2, seed=83)
    cfg = SearchConfig(restarts=6, seed=0)
    report = capacity_bracket(ch, cfg)
    assert report.lower <= report.upper + 1e-6
    assert np.isfinite(report.lower) and np.isfinite(report.upper)
