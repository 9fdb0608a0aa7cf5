"""Quantum channels in Kraus form, gate constructors, and Choi states.

A channel is a tuple of Kraus operators sharing an input layout; the output
layout may differ (measure-and-prepare maps can change dimension).  Trace
preservation sum_i K_i^dag K_i = I is certified at construction time to
1e-10.  Channels act on operators either directly or embedded on selected
subsystems of a larger layout, with identity on the rest.

Haar-random unitaries are drawn by QR-decomposing a complex Ginibre matrix
and absorbing the R-diagonal phases, which makes the distribution exactly
invariant; the generator is always an explicit argument, never shared
module state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .core import (
    BipartiteOperator,
    LayoutError,
    PureState,
    SubsystemLayout,
    is_unitary,
    permute_subsystems,
)

TP_TOL = 1e-10


def _as_rng(seed: Union[int, np.random.Generator]) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(int(seed))


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Completely positive trace-preserving map sum_i K_i . K_i^dag.

    ``kraus_ops`` are dense matrices of shape (out_dim, in_dim) where
    in_dim matches ``target_layout`` and out_dim matches ``output_layout``
    (equal to the input layout unless stated otherwise).
    """

    kraus_ops: tuple
    target_layout: SubsystemLayout
    output_layout: SubsystemLayout

    def __init__(
        self,
        kraus_ops: Sequence[np.ndarray],
        target_layout: SubsystemLayout,
        output_layout: Optional[SubsystemLayout] = None,
    ) -> None:
        if output_layout is None:
            output_layout = target_layout
        d_in = target_layout.total_dim
        d_out = output_layout.total_dim
        ops = []
        for k in kraus_ops:
            arr = np.array(k, dtype=np.complex128)
            if arr.shape != (d_out, d_in):
                raise LayoutError(
                    f"Kraus operator shape {arr.shape} does not match ({d_out}, {d_in})"
                )
            arr.setflags(write=False)
            ops.append(arr)
        if not ops:
            raise ValueError("channel needs at least one Kraus operator")
        gram = sum(k.conj().T @ k for k in ops)
        dev = float(np.max(np.abs(gram - np.eye(d_in))))
        if dev > TP_TOL:
            raise ValueError(f"Kraus operators violate trace preservation by {dev:.3e}")
        object.__setattr__(self, "kraus_ops", tuple(ops))
        object.__setattr__(self, "target_layout", target_layout)
        object.__setattr__(self, "output_layout", output_layout)

    @property
    def kraus_rank(self) -> int:
        return len(self.kraus_ops)

    @property
    def is_unitary(self) -> bool:
        return self.kraus_rank == 1 and is_unitary(self.kraus_ops[0])

    @property
    def preserves_dimension(self) -> bool:
        return self.target_layout.dims == self.output_layout.dims


def unitary_channel(u: BipartiteOperator, tol: float = 1e-10) -> KrausChannel:
    """Wrap a unitary as a single-Kraus channel."""
    if not is_unitary(u.matrix, tol=tol):
        raise ValueError("matrix is not unitary within tolerance")
    return KrausChannel((u.matrix,), u.layout)


def embedded_kraus(
    ch: KrausChannel, layout: SubsystemLayout, targets: Sequence[int]
) -> tuple:
    """Kraus operators extended by identity to act on ``layout``.

    ``targets[i]`` names the subsystem of ``layout`` playing the role of
    channel subsystem ``i``.  Requires a dimension-preserving channel.
    """
    if not ch.preserves_dimension:
        raise LayoutError("only dimension-preserving channels can be embedded")
    targets = tuple(int(t) for t in targets)
    n = len(layout)
    if len(targets) != len(ch.target_layout) or len(set(targets)) != len(targets):
        raise LayoutError(f"targets {targets} do not match channel arity")
    for i, t in enumerate(targets):
        if t < 0 or t >= n:
            raise LayoutError(f"target index {t} out of range")
        if layout.subsystems[t][0] != ch.target_layout.dims[i]:
            raise LayoutError(
                f"subsystem {t} has dim {layout.subsystems[t][0]}, channel wants "
                f"{ch.target_layout.dims[i]}"
            )
        if layout.subsystems[t][1] != ch.target_layout.parties[i]:
            raise LayoutError(f"subsystem {t} belongs to the wrong party for the channel")
    rest = tuple(i for i in range(n) if i not in targets)
    front = targets + rest
    front_layout = layout.restricted(front)
    back = tuple(front.index(i) for i in range(n))
    rest_dim = int(np.prod([layout.dims[i] for i in rest], dtype=np.int64)) if rest else 1
    eye_rest = np.eye(rest_dim)
    out = []
    for k in ch.kraus_ops:
        wide = BipartiteOperator(np.kron(k, eye_rest), front_layout)
        out.append(permute_subsystems(wide, back).matrix)
    return tuple(out)


def apply_channel(
    ch: KrausChannel,
    rho: BipartiteOperator,
    targets: Optional[Sequence[int]] = None,
) -> BipartiteOperator:
    """Apply a channel to a density operator, optionally on a sub-layout.

    With ``targets=None`` the operator must live on the channel's input
    layout and the result lives on its output layout.  With targets given,
    the channel is embedded with identity on the remaining subsystems.
    """
    if targets is None:
        if rho.layout.dims != ch.target_layout.dims:
            raise LayoutError(
                f"operator dims {rho.layout.dims} do not match channel input "
                f"{ch.target_layout.dims}"
            )
        acc = np.zeros((ch.output_layout.total_dim,) * 2, dtype=complex)
        for k in ch.kraus_ops:
            acc += k @ rho.matrix @ k.conj().T
        return BipartiteOperator(acc, ch.output_layout)
    ops = embedded_kraus(ch, rho.layout, targets)
    acc = np.zeros_like(rho.matrix)
    for k in ops:
        acc = acc + k @ rho.matrix @ k.conj().T
    return BipartiteOperator(acc, rho.layout)


def max_entangled_pair(layout: SubsystemLayout) -> PureState:
    """|Phi_A> (x) |Phi_B> on a four-subsystem layout (a, a', b, b').

    Each party holds one maximally entangled pair between its two local
    factors, so the state is a product across the A|B cut and carries no
    entanglement between the parties.
    """
    if len(layout) != 4 or layout.parties != ("A", "A", "B", "B"):
        raise LayoutError("expected layout (a:A, a':A, b:B, b':B)")
    da, da2, db, db2 = layout.dims
    if da != da2 or db != db2:
        raise LayoutError("each party's two factors must have equal dimension")
    phi_a = np.eye(da, dtype=complex).reshape(-1) / np.sqrt(da)
    phi_b = np.eye(db, dtype=complex).reshape(-1) / np.sqrt(db)
    return PureState(np.kron(phi_a, phi_b), layout)


@dataclass(frozen=True, eq=False)
class ChoiState:
    """State obtained by sending half of |Phi_A>|Phi_B> through a channel.

    ``state`` is a PureState when the channel has a single Kraus operator
    and a density operator otherwise; both live on the four-subsystem
    layout (a, a', b, b') with the channel applied to (a, b).
    """

    state: object
    source: str

    @property
    def is_pure(self) -> bool:
        return isinstance(self.state, PureState)

    @property
    def layout(self) -> SubsystemLayout:
        return self.state.layout

    def density(self) -> BipartiteOperator:
        if self.is_pure:
            return self.state.density()
        return self.state


def choi_state(ch: KrausChannel) -> ChoiState:
    """Choi state of a channel with a bipartite (a: A, b: B) input layout."""
    if len(ch.target_layout) != 2 or ch.target_layout.parties != ("A", "B"):
        raise LayoutError("Choi construction expects a two-subsystem (A, B) channel")
    if not ch.preserves_dimension:
        raise LayoutError("Choi construction expects a dimension-preserving channel")
    da, db = ch.target_layout.dims
    full = ch.target_layout.extended_with_ancillas((da, db))
    phi = max_entangled_pair(full)
    ops = embedded_kraus(ch, full, targets=(0, 2))
    if len(ops) == 1:
        vec = ops[0] @ phi.amplitudes
        return ChoiState(PureState(vec, full), source="single-kraus")
    acc = np.zeros((full.total_dim,) * 2, dtype=complex)
    for k in ops:
        v = k @ phi.amplitudes
        acc += np.outer(v, v.conj())
    return ChoiState(BipartiteOperator(acc, full), source=f"kraus-rank-{len(ops)}")


def haar_unitary(dim: int, seed: Union[int, np.random.Generator]) -> np.ndarray:
    """Draw a dim x dim unitary from the Haar measure.

    QR of a complex Ginibre matrix, with the R diagonal's phases absorbed
    into Q so the factorization is unique and the law exactly invariant.
    """
    rng = _as_rng(seed)
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z / np.sqrt(2.0))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_kraus_channel(
    target_layout: SubsystemLayout,
    kraus_rank: int,
    seed: Union[int, np.random.Generator],
) -> KrausChannel:
    """Random channel from a Haar isometry into a rank-``kraus_rank`` environment.

    The first d columns of a Haar unitary on C^(d*r) form an isometry
    V: C^d -> C^d (x) C^r; tracing the environment gives Kraus operators
    K_i[m, n] = V[(m, i), n].
    """
    if kraus_rank < 1:
        raise ValueError("kraus_rank must be >= 1")
    d = target_layout.total_dim
    big = haar_unitary(d * kraus_rank, seed)
    v = big[:, :d]
    ops = [v[i::kraus_rank, :] for i in range(kraus_rank)]
    return KrausChannel(tuple(ops), target_layout)


def gate_family(name: str, **params) -> BipartiteOperator:
    """Construct a named gate.

    - ``phase`` (phi): diagonal two-qubit gate exp(i*phi Z (x) Z).
    - ``swap`` (d): exchange of two d-level systems.
    - ``cnot_d`` (d): cyclic shift on the target controlled on the first
      level of the control, the qudit generalization of CNOT.
    - ``pauli_x`` (d): single-system cyclic shift |j> -> |j+1 mod d>.
    """
    if name == "phase":
        if "phi" not in params:
            raise ValueError("phase gate needs parameter phi")
        phi = float(params["phi"])
        diag = np.exp(1j * phi * np.array([1.0, -1.0, -1.0, 1.0]))
        return BipartiteOperator(np.diag(diag), SubsystemLayout.bipartite(2, 2))
    if name == "swap":
        d = int(params.get("d", 2))
        m = np.zeros((d * d, d * d), dtype=complex)
        for a in range(d):
            for b in range(d):
                m[b * d + a, a * d + b] = 1.0
        return BipartiteOperator(m, SubsystemLayout.bipartite(d, d))
    if name == "cnot_d":
        if "d" not in params:
            raise ValueError("cnot_d gate needs parameter d")
        d = int(params["d"])
        if d < 2:
            raise ValueError("cnot_d needs d >= 2")
        shift = _cyclic_shift(d)
        proj0 = np.zeros((d, d), dtype=complex)
        proj0[0, 0] = 1.0
        m = np.kron(np.eye(d) - proj0, np.eye(d)) + np.kron(proj0, shift)
        return BipartiteOperator(m, SubsystemLayout.bipartite(d, d))
    if name == "pauli_x":
        if "d" not in params:
            raise ValueError("pauli_x gate needs parameter d")
        d = int(params["d"])
        return BipartiteOperator(_cyclic_shift(d), SubsystemLayout(((d, "A"),)))
    raise ValueError(f"unknown gate family {name!r}")


def _cyclic_shift(d: int) -> np.ndarray:
    m = np.zeros((d, d), dtype=complex)
    for j in range(d):
        m[(j + 1) % d, j] = 1.0
    return m


def lambda1_channel(
    rho1: BipartiteOperator, input_dims=(2, 2), tol: float = 1e-10
) -> KrausChannel:
    """Measure-and-prepare map: project onto |0,0>, prepare rho1 or noise.

    The channel measures whether the input sits in |0,0><0,0|; on success it
    prepares ``rho1``, otherwise the maximally mixed state on rho1's space:

        sigma -> <0,0|sigma|0,0> rho1 + (1 - <0,0|sigma|0,0>) I/d.

    Kraus operators: sqrt(q_r) |phi_r><0,0| from the eigenpairs of rho1,
    plus (1/sqrt(d)) |r><s| for every output level r and input level s > 0.
    The input and output spaces may have different dimensions.
    """
    in_layout = SubsystemLayout.bipartite(*input_dims)
    d_in = in_layout.total_dim
    d_out = rho1.layout.total_dim
    if abs(np.trace(rho1.matrix) - 1.0) > 1e-8:
        raise ValueError("rho1 must have unit trace")
    evals, evecs = np.linalg.eigh(rho1.matrix)
    if evals[0] < -tol:
        raise ValueError("rho1 must be positive semidefinite")
    ops = []
    for q, vec in zip(evals, evecs.T):
        if q <= 1e-14:
            continue
        k = np.zeros((d_out, d_in), dtype=complex)
        k[:, 0] = np.sqrt(q) * vec
        ops.append(k)
    for r in range(d_out):
        for s in range(1, d_in):
            k = np.zeros((d_out, d_in), dtype=complex)
            k[r, s] = 1.0 / np.sqrt(d_out)
            ops.append(k)
    return KrausChannel(tuple(ops), in_layout, rho1.layout)
