"""Kraus channels, gates, Choi states, and the measure-and-prepare map."""

import numpy as np
import pytest

from entcap import (
    BipartiteOperator,
    KrausChannel,
    LayoutError,
    PureState,
    SubsystemLayout,
    apply_channel,
    choi_state,
    embedded_kraus,
    gate_family,
    haar_unitary,
    lambda1_channel,
    max_entangled_pair,
    partial_trace,
    random_kraus_channel,
    unitary_channel,
)

TWO_QUBITS = SubsystemLayout.bipartite(2, 2)


def random_density(rng, n):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    p = z @ z.conj().T
    return p / np.trace(p).real


def test_kraus_channel_validation():
    with pytest.raises(ValueError):
        KrausChannel((2.0 * np.eye(4),), TWO_QUBITS)
    with pytest.raises(LayoutError):
        KrausChannel((np.eye(3),), TWO_QUBITS)
    with pytest.raises(ValueError):
        KrausChannel((), TWO_QUBITS)
    ch = KrausChannel((np.eye(4),), TWO_QUBITS)
    assert ch.kraus_rank == 1
    assert ch.is_unitary
    assert ch.preserves_dimension


def test_unitary_channel_rejects_non_unitary():
    with pytest.raises(ValueError):
        unitary_channel(BipartiteOperator(np.diag([1.0, 1.0, 1.0, 0.5]), TWO_QUBITS))


def test_phase_gate_matrix():
    u0 = gate_family("phase", phi=0.0)
    assert np.abs(u0.matrix - np.eye(4)).max() < 1e-12
    phi = np.pi / 4
    u = gate_family("phase", phi=phi)
    expected = np.diag(np.exp(1j * phi * np.array([1, -1, -1, 1])))
    assert np.abs(u.matrix - expected).max() < 1e-12


def test_swap_gate_action():
    d = 3
    u = gate_family("swap", d=d)
    for a in range(d):
        for b in range(d):
            vec = np.zeros(d * d)
            vec[a * d + b] = 1.0
            out = u.matrix @ vec
            assert abs(out[b * d + a] - 1.0) < 1e-12
            assert abs(np.linalg.norm(out) - 1.0) < 1e-12


def test_controlled_shift_matrix():
    # target is shifted exactly when the control sits in level 0
    u = gate_family("cnot_d", d=2)
    expected = np.array(
        [
            [0, 1, 0, 0],
            [1, 0, 0, 0],
            [0, 0, 1, 0],
            [0, 0, 0, 1],
        ],
        dtype=complex,
    )
    assert np.abs(u.matrix - expected).max() < 1e-12
    u3 = gate_family("cnot_d", d=3)
    vec = np.zeros(9)
    vec[0 * 3 + 2] = 1.0
    out = u3.matrix @ vec
    assert abs(out[0 * 3 + 0] - 1.0) < 1e-12
    vec = np.zeros(9)
    vec[1 * 3 + 2] = 1.0
    out = u3.matrix @ vec
    assert abs(out[1 * 3 + 2] - 1.0) < 1e-12


def test_pauli_x_cycles_levels():
    x = gate_family("pauli_x", d=4)
    for j in range(4):
        vec = np.zeros(4)
        vec[j] = 1.0
        out = x.matrix @ vec
        assert abs(out[(j + 1) % 4] - 1.0) < 1e-12


def test_gate_family_errors():
    with pytest.raises(ValueError):
        gate_family("phase")
    with pytest.raises(ValueError):
        gate_family("cnot_d", d=1)
    with pytest.raises(ValueError):
        gate_family("no_such_gate")


def test_haar_unitary_deterministic_and_unitary():
    a = haar_unitary(9, seed=42)
    b = haar_unitary(9, seed=42)
    c = haar_unitary(9, seed=43)
    assert np.abs(a - b).max() == 0.0
    assert np.abs(a - c).max() > 1e-3
    assert np.abs(a.conj().T @ a - np.eye(9)).max() < 1e-12


def test_random_kraus_channel_properties():
    layout = SubsystemLayout.bipartite(2, 3)
    ch = random_kraus_channel(layout, kraus_rank=3, seed=5)
    assert ch.kraus_rank == 3
    assert ch.target_layout is layout
    gram = sum(k.conj().T @ k for k in ch.kraus_ops)
    assert np.abs(gram - np.eye(6)).max() < 1e-10
    again = random_kraus_channel(layout, kraus_rank=3, seed=5)
    assert all(np.abs(x - y).max() == 0.0 for x, y in zip(ch.kraus_ops, again.kraus_ops))


def test_apply_channel_unitary_conjugation():
    rng = np.random.default_rng(17)
    u = BipartiteOperator(haar_unitary(4, rng), TWO_QUBITS)
    ch = unitary_channel(u)
    rho = BipartiteOperator(random_density(rng, 4), TWO_QUBITS)
    out = apply_channel(ch, rho)
    expected = u.matrix @ rho.matrix @ u.matrix.conj().T
    assert np.abs(out.matrix - expected).max() < 1e-12


def test_apply_channel_preserves_trace_and_positivity():
    rng = np.random.default_rng(19)
    layout = SubsystemLayout.bipartite(2, 2)
    ch = random_kraus_channel(layout, kraus_rank=4, seed=23)
    for _ in range(5):
        rho = BipartiteOperator(random_density(rng, 4), layout)
        out = apply_channel(ch, rho)
        assert abs(out.trace() - 1.0) < 1e-12
        assert np.linalg.eigvalsh(out.matrix)[0] > -1e-10


def test_embedded_kraus_matches_manual_kron():
    rng = np.random.default_rng(29)
    ch = random_kraus_channel(TWO_QUBITS, kraus_rank=2, seed=31)
    layout = SubsystemLayout(((2, "A"), (2, "B"), (3, "B")))
    ops = embedded_kraus(ch, layout, targets=(0, 1))
    for k_wide, k in zip(ops, ch.kraus_ops):
        assert np.abs(k_wide - np.kron(k, np.eye(3))).max() < 1e-12
    rho = BipartiteOperator(random_density(rng, 12), layout)
    out = apply_channel(ch, rho, targets=(0, 1))
    manual = sum(k @ rho.matrix @ k.conj().T for k in ops)
    assert np.abs(out.matrix - manual).max() < 1e-12


def test_embedded_kraus_rejects_bad_targets():
    ch = random_kraus_channel(TWO_QUBITS, kraus_rank=2, seed=37)
    layout = SubsystemLayout(((2, "A"), (2, "A"), (2, "B"), (2, "B")))
    with pytest.raises(LayoutError):
        embedded_kraus(ch, layout, targets=(0, 1))  # both slots on party A
    with pytest.raises(LayoutError):
        embedded_kraus(ch, layout, targets=(0, 0))
    with pytest.raises(LayoutError):
        embedded_kraus(ch, layout, targets=(0, 7))
    wide = SubsystemLayout(((2, "A"), (3, "B")))
    with pytest.raises(LayoutError):
        embedded_kraus(ch, wide, targets=(0, 1))  # dim mismatch on B


def test_max_entangled_pair_structure():
    layout = SubsystemLayout(((2, "A"), (2, "A"), (3, "B"), (3, "B")))
    phi = max_entangled_pair(layout)
    expected = np.kron(np.eye(2).reshape(-1) / np.sqrt(2), np.eye(3).reshape(-1) / np.sqrt(3))
    assert np.abs(phi.amplitudes - expected).max() < 1e-12
    # every single subsystem is maximally mixed on its own
    rho = phi.density()
    for k, d in enumerate(layout.dims):
        red = partial_trace(rho, keep=(k,))
        assert np.abs(red.matrix - np.eye(d) / d).max() < 1e-12
    with pytest.raises(LayoutError):
        max_entangled_pair(SubsystemLayout(((2, "A"), (2, "B"), (2, "A"), (2, "B"))))
    with pytest.raises(LayoutError):
        max_entangled_pair(SubsystemLayout(((2, "A"), (3, "A"), (2, "B"), (2, "B"))))


def test_choi_state_identity_channel():
    ch = unitary_channel(BipartiteOperator(np.eye(4), TWO_QUBITS))
    choi = choi_state(ch)
    assert choi.is_pure
    phi = max_entangled_pair(choi.layout)
    assert np.abs(choi.state.amplitudes - phi.amplitudes).max() < 1e-12


def test_choi_state_rank_two_channel():
    ch = random_kraus_channel(TWO_QUBITS, kraus_rank=2, seed=41)
    choi = choi_state(ch)
    assert not choi.is_pure
    rho = choi.density()
    assert abs(rho.trace() - 1.0) < 1e-10
    assert np.linalg.eigvalsh(rho.matrix)[0] > -1e-10
    assert choi.layout.parties == ("A", "A", "B", "B")


def test_lambda1_channel_prepares_target_state():
    rng = np.random.default_rng(7)
    out_layout = SubsystemLayout.bipartite(2, 3)
    rho1 = BipartiteOperator(random_density(rng, 6), out_layout)
    ch = lambda1_channel(rho1, input_dims=(2, 2))
    gram = sum(k.conj().T @ k for k in ch.kraus_ops)
    assert np.abs(gram - np.eye(4)).max() < 1e-10
    # |0,0> input comes out as rho1
    e00 = np.zeros(4)
    e00[0] = 1.0
    sigma = BipartiteOperator(np.outer(e00, e00), SubsystemLayout.bipartite(2, 2))
    out = apply_channel(ch, sigma)
    assert np.abs(out.matrix - rho1.matrix).max() < 1e-10
    # any orthogonal input comes out maximally mixed
    e_perp = np.zeros(4)
    e_perp[2] = 1.0
    sigma_perp = BipartiteOperator(np.outer(e_perp, e_perp), SubsystemLayout.bipartite(2, 2))
    out_perp = apply_channel(ch, sigma_perp)
    assert np.abs(out_perp.matrix - np.eye(6) / 6).max() < 1e-10


def test_lambda1_channel_mixes_by_overlap():
    rng = np.random.default_rng(11)
    rho1 = BipartiteOperator(random_density(rng, 4), TWO_QUBITS)
    ch = lambda1_channel(rho1, input_dims=(2, 2))
    vec = np.array([1.0, 1.0, 0.0, 0.0]) / np.sqrt(2)
    sigma = BipartiteOperator(np.outer(vec, vec), TWO_QUBITS)
    out = apply_channel(ch, sigma)
    expected = 0.5 * rho1.matrix + 0.5 * np.eye(4) / 4
    assert np.abs(out.matrix - expected).max() < 1e-10


def test_lambda1_channel_rejects_non_density():
    bad = BipartiteOperator(2 * np.eye(4), TWO_QUBITS)
    with pytest.raises(ValueError):
        lambda1_channel(bad, input_dims=(2, 2))
