"""Negativity-family monotones and entanglement production of channels."""

import numpy as np
import pytest

from entcap import (
    BipartiteOperator,
    PureState,
    SubsystemLayout,
    entanglement_delta,
    gate_family,
    haar_unitary,
    log_negativity,
    log_ppt_monotone,
    log_robustness,
    max_entangled_pair,
    negativity,
    pure_log_negativity,
    random_kraus_channel,
    unitary_channel,
    von_neumann,
)

TWO_QUBITS = SubsystemLayout.bipartite(2, 2)


def bell_state():
    return PureState(np.array([1, 0, 0, 1]) / np.sqrt(2), TWO_QUBITS)


def random_pure(rng, layout):
    n = layout.total_dim
    vec = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return PureState.from_vector(vec, layout)


def test_bell_values():
    psi = bell_state()
    assert abs(float(negativity(psi.density())) - 0.5) < 1e-12
    assert abs(float(log_negativity(psi.density())) - 1.0) < 1e-12
    assert abs(float(pure_log_negativity(psi)) - 1.0) < 1e-12
    assert abs(float(von_neumann(psi)) - 1.0) < 1e-12


def test_product_state_is_exactly_zero():
    psi = PureState(np.array([1, 0, 0, 0], dtype=complex), TWO_QUBITS)
    assert float(negativity(psi.density())) == 0.0
    assert float(log_negativity(psi.density())) == 0.0
    assert float(pure_log_negativity(psi)) == 0.0
    assert float(von_neumann(psi)) < 1e-12


def test_partially_entangled_closed_form():
    # amplitudes sqrt(1/3), sqrt(2/3): E_N = 2 log2(sum s), E_vN = H(1/3)
    vec = np.array([np.sqrt(1 / 3), 0, 0, np.sqrt(2 / 3)])
    psi = PureState(vec, TWO_QUBITS)
    s_sum = np.sqrt(1 / 3) + np.sqrt(2 / 3)
    assert abs(float(pure_log_negativity(psi)) - 2 * np.log2(s_sum)) < 1e-12
    assert abs(float(von_neumann(psi)) - 0.9182958340544896) < 1e-12
    assert abs(float(negativity(psi.density())) - (s_sum**2 - 1) / 2) < 1e-12


def test_pure_and_dense_routes_agree():
    rng = np.random.default_rng(45)
    for da, db in ((2, 2), (2, 3), (3, 3)):
        layout = SubsystemLayout.bipartite(da, db)
        for _ in range(5):
            psi = random_pure(rng, layout)
            a = float(pure_log_negativity(psi))
            b = float(log_negativity(psi.density()))
            assert abs(a - b) < 1e-10


def test_separable_mixture_clamps_to_zero():
    rng = np.random.default_rng(47)
    acc = np.zeros((4, 4), dtype=complex)
    for _ in range(6):
        va = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        vb = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        v = np.kron(va / np.linalg.norm(va), vb / np.linalg.norm(vb))
        acc += rng.uniform(0.1, 1.0) * np.outer(v, v.conj())
    rho = BipartiteOperator(acc / np.trace(acc).real, TWO_QUBITS)
    assert float(log_negativity(rho)) == 0.0
    assert float(negativity(rho)) == 0.0


def test_monotone_input_validation():
    bad_trace = BipartiteOperator(2 * np.eye(4), TWO_QUBITS)
    with pytest.raises(ValueError):
        log_negativity(bad_trace)
    herm_violation = np.eye(4, dtype=complex)
    herm_violation[0, 1] = 1.0
    herm_violation[0, 0] = 0.0
    with pytest.raises(ValueError):
        negativity(BipartiteOperator(herm_violation, TWO_QUBITS))


def test_additivity_and_local_unitary_invariance():
    from entcap import tensor_product, permute_subsystems

    rng = np.random.default_rng(49)
    for _ in range(10):
        psi = random_pure(rng, TWO_QUBITS)
        chi = random_pure(rng, TWO_QUBITS)
        pair = permute_subsystems(tensor_product(psi, chi), (0, 2, 1, 3))
        total = float(pure_log_negativity(pair))
        parts = float(pure_log_negativity(psi)) + float(pure_log_negativity(chi))
        assert abs(total - parts) < 1e-10
        ua = haar_unitary(2, rng)
        ub = haar_unitary(2, rng)
        rotated = PureState(np.kron(ua, ub) @ psi.amplitudes, TWO_QUBITS)
        assert abs(float(pure_log_negativity(rotated)) - float(pure_log_negativity(psi))) < 1e-10


def test_delta_zero_for_identity_channel():
    rng = np.random.default_rng(51)
    ch = unitary_channel(BipartiteOperator(np.eye(4), TWO_QUBITS))
    for _ in range(5):
        psi = random_pure(rng, TWO_QUBITS)
        assert abs(entanglement_delta(ch, psi)) < 1e-12


def test_delta_of_interaction_phase_gate():
    # exp(i pi/4 Z x Z) turns |+,+> into a maximally entangled state
    plus = np.ones(4) / 2.0
    psi = PureState(plus, TWO_QUBITS)
    ch = unitary_channel(gate_family("phase", phi=np.pi / 4))
    delta = entanglement_delta(ch, psi)
    assert abs(delta - 1.0) < 1e-12
    delta_vn = entanglement_delta(ch, psi, monotone="von-neumann")
    assert abs(delta_vn - 1.0) < 1e-12
    delta_neg = entanglement_delta(ch, psi, monotone="negativity")
    assert abs(delta_neg - 0.5) < 1e-12


def test_delta_sign_depends_on_pair_arrangement():
    # swap on (a, b) converts local pairs (a,a'), (b,b') into two pairs
    # crossing the cut, and undoes the crossed arrangement back to local
    layout = SubsystemLayout(((2, "A"), (2, "A"), (2, "B"), (2, "B")))
    ch = unitary_channel(gate_family("swap", d=2))
    local = max_entangled_pair(layout)
    gained = entanglement_delta(ch, local, targets=(0, 2))
    assert abs(gained - 2.0) < 1e-12
    crossed = np.zeros(16)
    for a in range(2):
        for ap in range(2):
            crossed[((a * 2 + ap) * 2 + ap) * 2 + a] = 0.5  # pairs (a,b') and (a',b)
    psi = PureState(crossed, layout)
    assert abs(float(pure_log_negativity(psi)) - 2.0) < 1e-12
    lost = entanglement_delta(ch, psi, targets=(0, 2))
    assert abs(lost + 2.0) < 1e-12


def test_delta_validation():
    psi = bell_state()
    ch = random_kraus_channel(TWO_QUBITS, kraus_rank=2, seed=53)
    with pytest.raises(ValueError):
        entanglement_delta(ch, psi, monotone="von-neumann")
    with pytest.raises(ValueError):
        entanglement_delta(ch, psi, monotone="no-such-monotone")


def test_value_kinds_and_float_protocol():
    psi = bell_state()
    v = log_negativity(psi.density())
    assert v.kind == "log-negativity"
    assert float(v) == v.value
    assert negativity(psi.density()).kind == "negativity"
    assert von_neumann(psi).kind == "von-neumann"


def test_unimplemented_monotones_say_so():
    rho = bell_state().density()
    with pytest.raises(NotImplementedError):
        log_robustness(rho)
    with pytest.raises(NotImplementedError):
        log_ppt_monotone(rho)
