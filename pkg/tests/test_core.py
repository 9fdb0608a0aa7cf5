"""Layout bookkeeping, partial operations, and norm primitives."""

import numpy as np
import pytest

from entcap import (
    BipartiteOperator,
    LayoutError,
    PureState,
    SubsystemLayout,
    hs_inner,
    is_density_matrix,
    is_hermitian,
    is_positive_semidefinite,
    is_unitary,
    operator_norm,
    partial_trace,
    partial_transpose,
    permute_subsystems,
    tensor_product,
    trace_norm,
)


def bell_state():
    layout = SubsystemLayout.bipartite(2, 2)
    return PureState(np.array([1, 0, 0, 1]) / np.sqrt(2), layout)


def random_hermitian(rng, layout):
    n = layout.total_dim
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return BipartiteOperator((z + z.conj().T) / 2, layout)


def test_layout_dims_and_parties():
    layout = SubsystemLayout(((2, "A"), (3, "A"), (2, "B"), (5, "B")))
    assert layout.dims == (2, 3, 2, 5)
    assert layout.total_dim == 60
    assert layout.party_indices("A") == (0, 1)
    assert layout.party_dim("A") == 6
    assert layout.party_dim("B") == 10


def test_layout_rejects_bad_input():
    with pytest.raises(LayoutError):
        SubsystemLayout(((0, "A"),))
    with pytest.raises(LayoutError):
        SubsystemLayout(((2, "C"),))
    with pytest.raises(LayoutError):
        SubsystemLayout(())


def test_ancilla_extension_order():
    layout = SubsystemLayout.bipartite(2, 3).extended_with_ancillas((4, 5))
    assert layout.subsystems == ((2, "A"), (4, "A"), (3, "B"), (5, "B"))
    with pytest.raises(LayoutError):
        SubsystemLayout(((2, "A"), (2, "B"), (2, "B"))).extended_with_ancillas((2, 2))


def test_partial_transpose_explicit_matrix():
    # row-major two-qubit indexing: transposing party B swaps the column
    # index of each 2x2 sub-block
    layout = SubsystemLayout.bipartite(2, 2)
    rho = BipartiteOperator(np.arange(16, dtype=float).reshape(4, 4), layout)
    expected = np.array(
        [
            [0, 4, 2, 6],
            [1, 5, 3, 7],
            [8, 12, 10, 14],
            [9, 13, 11, 15],
        ],
        dtype=float,
    )
    assert np.max(np.abs(partial_transpose(rho, "B").matrix - expected)) < 1e-12
    # party A transposition moves whole blocks instead
    expected_a = np.array(
        [
            [0, 1, 8, 9],
            [4, 5, 12, 13],
            [2, 3, 10, 11],
            [6, 7, 14, 15],
        ],
        dtype=float,
    )
    assert np.max(np.abs(partial_transpose(rho, "A").matrix - expected_a)) < 1e-12


def test_partial_transpose_involution_and_trace():
    rng = np.random.default_rng(11)
    layout = SubsystemLayout(((2, "A"), (3, "B"), (2, "B")))
    for _ in range(10):
        h = random_hermitian(rng, layout)
        pt = partial_transpose(h, "B")
        assert np.max(np.abs(partial_transpose(pt, "B").matrix - h.matrix)) < 1e-12
        assert abs(pt.trace() - h.trace()) < 1e-12
        assert is_hermitian(pt.matrix)


def test_partial_transpose_bell_trace_norm():
    rho = bell_state().density()
    assert abs(trace_norm(partial_transpose(rho, "B")) - 2.0) < 1e-12


def test_partial_trace_of_bell_is_maximally_mixed():
    rho = bell_state().density()
    for keep in ((0,), (1,)):
        red = partial_trace(rho, keep)
        assert np.max(np.abs(red.matrix - np.eye(2) / 2)) < 1e-12


def test_partial_trace_keeps_order():
    rng = np.random.default_rng(3)
    layout = SubsystemLayout(((2, "A"), (3, "B"), (2, "A")))
    h = random_hermitian(rng, layout)
    red = partial_trace(h, keep=(2, 0))
    assert red.layout.subsystems == ((2, "A"), (2, "A"))
    # tracing in two steps agrees with one step
    step = partial_trace(h, keep=(0, 2))
    swapped = permute_subsystems(step, (1, 0))
    assert np.max(np.abs(red.matrix - swapped.matrix)) < 1e-12


def test_permute_subsystems_roundtrip():
    rng = np.random.default_rng(5)
    layout = SubsystemLayout(((2, "A"), (3, "B"), (4, "A")))
    h = random_hermitian(rng, layout)
    perm = (2, 0, 1)
    inverse = (1, 2, 0)
    back = permute_subsystems(permute_subsystems(h, perm), inverse)
    assert back.layout.subsystems == layout.subsystems
    assert np.max(np.abs(back.matrix - h.matrix)) < 1e-12


def test_tensor_product_concatenates_layouts():
    a = BipartiteOperator(np.array([[1, 2], [3, 4]], dtype=complex), SubsystemLayout(((2, "A"),)))
    b = BipartiteOperator(np.array([[0, 1], [1, 0]], dtype=complex), SubsystemLayout(((2, "B"),)))
    prod = tensor_product(a, b)
    assert prod.layout.subsystems == ((2, "A"), (2, "B"))
    assert np.max(np.abs(prod.matrix - np.kron(a.matrix, b.matrix))) < 1e-12


def test_norms_match_eigendecomposition():
    rng = np.random.default_rng(7)
    layout = SubsystemLayout.bipartite(3, 2)
    for _ in range(10):
        h = random_hermitian(rng, layout)
        w = np.linalg.eigvalsh(h.matrix)
        assert abs(trace_norm(h) - np.abs(w).sum()) < 1e-10
        assert abs(operator_norm(h) - np.abs(w).max()) < 1e-10


def test_hs_inner_conjugate_linearity():
    rng = np.random.default_rng(9)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert abs(hs_inner(a, b) - np.conj(hs_inner(b, a))) < 1e-12
    assert abs(hs_inner(1j * a, b) - (-1j) * hs_inner(a, b)) < 1e-12


def test_pure_state_normalization_and_phase():
    layout = SubsystemLayout.bipartite(2, 2)
    vec = np.exp(1j * 0.8) * np.array([1, 0, 0, 1]) / np.sqrt(2)
    psi = PureState(vec, layout)
    # leading amplitude made real positive, so the phase is stripped
    assert abs(psi.amplitudes[0] - 1 / np.sqrt(2)) < 1e-12
    with pytest.raises(ValueError):
        PureState(np.array([1, 0, 0, 1]), layout)
    with pytest.raises(LayoutError):
        PureState(np.array([1, 0, 0]), layout)
    again = PureState.from_vector(np.array([3.0, 0, 0, 3.0]), layout)
    assert abs(np.linalg.norm(again.amplitudes) - 1) < 1e-12


def test_predicates():
    rng = np.random.default_rng(13)
    layout = SubsystemLayout.bipartite(2, 2)
    h = random_hermitian(rng, layout)
    assert is_hermitian(h.matrix)
    assert not is_hermitian(h.matrix + 1j * np.eye(4))
    p = h.matrix @ h.matrix.conj().T
    assert is_positive_semidefinite(p)
    assert not is_positive_semidefinite(-p - np.eye(4))
    assert is_unitary(np.eye(4))
    assert not is_unitary(2 * np.eye(4))
    rho = p / np.trace(p).real
    assert is_density_matrix(rho)
    assert not is_density_matrix(2 * rho)


def test_operator_shape_checked_against_layout():
    layout = SubsystemLayout.bipartite(2, 2)
    with pytest.raises(LayoutError):
        BipartiteOperator(np.eye(3), layout)
