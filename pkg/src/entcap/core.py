"""Dense linear algebra on multipartite qudit systems with a fixed A|B split.

Composite indices are row-major: subsystem 0 varies slowest.  A layout is an
ordered list of (dimension, party) pairs, party being "A" or "B", and every
operator and state in this package carries one.  All partial operations
(transpose, trace, permutation) are expressed through reshapes of dense
complex arrays; norms go through full singular value decompositions rather
than iterative eigensolvers, so results are deterministic down to BLAS
rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

PARTIES = ("A", "B")

#: Magnitude below which an amplitude counts as zero when fixing global phase.
PHASE_EPS = 1e-12

#: Default tolerance for hermiticity and unitarity predicates.
HERM_TOL = 1e-10

#: Eigenvalues above this (negative) floor count as nonnegative.
PSD_FLOOR = -1e-10


class LayoutError(ValueError):
    """Raised when an operation receives incompatible subsystem layouts."""


@dataclass(frozen=True)
class SubsystemLayout:
    """Ordered collection of local factors, each assigned to party A or B.

    Parameters
    ----------
    subsystems:
        Tuple of ``(dimension, party)`` pairs.  Dimensions must be positive
        integers; dimension 1 is allowed as a trivial placeholder.  Parties
        must be ``"A"`` or ``"B"``.
    """

    subsystems: tuple

    def __init__(self, subsystems: Iterable) -> None:
        subs = tuple((int(d), str(p)) for d, p in subsystems)
        if not subs:
            raise LayoutError("layout needs at least one subsystem")
        for d, p in subs:
            if d < 1:
                raise LayoutError(f"subsystem dimension must be >= 1, got {d}")
            if p not in PARTIES:
                raise LayoutError(f"party must be 'A' or 'B', got {p!r}")
        object.__setattr__(self, "subsystems", subs)

    @classmethod
    def bipartite(cls, dim_a: int, dim_b: int) -> "SubsystemLayout":
        """One subsystem per party: ``[(dim_a, A), (dim_b, B)]``."""
        return cls(((dim_a, "A"), (dim_b, "B")))

    @property
    def dims(self) -> tuple:
        return tuple(d for d, _ in self.subsystems)

    @property
    def parties(self) -> tuple:
        return tuple(p for _, p in self.subsystems)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64))

    def party_indices(self, party: str) -> tuple:
        """Positions of the subsystems belonging to ``party``."""
        return tuple(i for i, p in enumerate(self.parties) if p == party)

    def party_dim(self, party: str) -> int:
        dims = [self.dims[i] for i in self.party_indices(party)]
        return int(np.prod(dims, dtype=np.int64)) if dims else 1

    def restricted(self, indices: Sequence[int]) -> "SubsystemLayout":
        """Sub-layout containing only the listed subsystems, in that order."""
        return SubsystemLayout(tuple(self.subsystems[i] for i in indices))

    def extended_with_ancillas(self, ancilla_dims) -> "SubsystemLayout":
        """Mirror each party's subsystem with a local ancilla.

        A bipartite target ``[(da, A), (db, B)]`` with ancilla dims
        ``(ea, eb)`` becomes ``[(da, A), (ea, A), (db, B), (eb, B)]``, so
        each party holds its original factor followed by its ancilla.
        """
        if len(self.subsystems) != 2 or self.parties != ("A", "B"):
            raise LayoutError("ancilla extension expects a two-subsystem A,B layout")
        ea, eb = (int(x) for x in ancilla_dims)
        da, db = self.dims
        return SubsystemLayout(((da, "A"), (ea, "A"), (db, "B"), (eb, "B")))

    def __len__(self) -> int:
        return len(self.subsystems)

    def __repr__(self) -> str:
        inner = ",".join(f"{d}{p}" for d, p in self.subsystems)
        return f"SubsystemLayout({inner})"


def _frozen_array(values, shape_check=None) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128)
    if shape_check is not None and arr.shape != shape_check:
        raise LayoutError(f"array shape {arr.shape} does not match layout {shape_check}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class BipartiteOperator:
    """A square matrix together with the subsystem layout it acts on."""

    matrix: np.ndarray
    layout: SubsystemLayout

    def __post_init__(self) -> None:
        n = self.layout.total_dim
        arr = _frozen_array(self.matrix, shape_check=(n, n))
        object.__setattr__(self, "matrix", arr)

    @property
    def dim(self) -> int:
        return self.layout.total_dim

    def dagger(self) -> "BipartiteOperator":
        return BipartiteOperator(self.matrix.conj().T, self.layout)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector with a fixed subsystem layout.

    The Euclidean norm must be 1 within 1e-12.  The global phase is
    canonicalized so that the first amplitude of magnitude above
    ``PHASE_EPS`` is real and nonnegative; two vectors differing only by a
    global phase therefore compare equal entrywise.
    """

    amplitudes: np.ndarray
    layout: SubsystemLayout

    def __post_init__(self) -> None:
        arr = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if arr.shape != (self.layout.total_dim,):
            raise LayoutError(
                f"state has {arr.shape[0]} amplitudes, layout wants {self.layout.total_dim}"
            )
        norm = float(np.linalg.norm(arr))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state norm {norm!r} deviates from 1 by more than 1e-12")
        nonzero = np.flatnonzero(np.abs(arr) > PHASE_EPS)
        if nonzero.size:
            lead = arr[nonzero[0]]
            arr = arr * (lead.conjugate() / abs(lead))
            arr[nonzero[0]] = arr[nonzero[0]].real
        arr.setflags(write=False)
        object.__setattr__(self, "amplitudes", arr)

    @classmethod
    def from_vector(cls, vec, layout: SubsystemLayout) -> "PureState":
        """Normalize an arbitrary nonzero vector and wrap it."""
        arr = np.asarray(vec, dtype=np.complex128).reshape(-1)
        norm = float(np.linalg.norm(arr))
        if norm <= 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(arr / norm, layout)

    def density(self) -> BipartiteOperator:
        """Rank-one projector |psi><psi| as an operator on the same layout."""
        return BipartiteOperator(np.outer(self.amplitudes, self.amplitudes.conj()), self.layout)


OperatorLike = Union[BipartiteOperator, np.ndarray]


def _as_matrix(m: OperatorLike) -> np.ndarray:
    if isinstance(m, BipartiteOperator):
        return m.matrix
    return np.asarray(m, dtype=np.complex128)


def tensor_product(x, y):
    """Kronecker product of two operators or two states; layouts concatenate.

    The left factor's subsystems come first, so composite indices follow the
    same row-major rule as everywhere else.
    """
    layout = SubsystemLayout(x.layout.subsystems + y.layout.subsystems)
    if isinstance(x, BipartiteOperator) and isinstance(y, BipartiteOperator):
        return BipartiteOperator(np.kron(x.matrix, y.matrix), layout)
    if isinstance(x, PureState) and isinstance(y, PureState):
        return PureState(np.kron(x.amplitudes, y.amplitudes), layout)
    raise TypeError("tensor_product expects two operators or two states")


def partial_transpose(op: BipartiteOperator, party: str = "B") -> BipartiteOperator:
    """Transpose all subsystems of one party jointly, leaving the other alone.

    With row and column multi-indices split per subsystem, the matrix is
    reshaped to one axis pair per subsystem and the row/column axes of every
    subsystem belonging to ``party`` are swapped.  Applying the map twice
    returns the input; the spectrum of the result is what the negativity
    measures are built from.
    """
    if party not in PARTIES:
        raise LayoutError(f"party must be 'A' or 'B', got {party!r}")
    dims = op.layout.dims
    n = len(dims)
    tensor = op.matrix.reshape(dims + dims)
    axes = list(range(2 * n))
    for k in op.layout.party_indices(party):
        axes[k], axes[n + k] = axes[n + k], axes[k]
    out = tensor.transpose(axes).reshape(op.matrix.shape)
    return BipartiteOperator(out, op.layout)


def partial_trace(op: BipartiteOperator, keep: Sequence[int]) -> BipartiteOperator:
    """Trace out every subsystem not listed in ``keep``.

    ``keep`` holds subsystem positions in the operator's layout; the result
    keeps them in the order given.
    """
    dims = op.layout.dims
    n = len(dims)
    keep = tuple(int(k) for k in keep)
    if len(set(keep)) != len(keep) or any(k < 0 or k >= n for k in keep):
        raise LayoutError(f"keep indices {keep} invalid for {n} subsystems")
    traced = [i for i in range(n) if i not in keep]
    tensor = op.matrix.reshape(dims + dims)
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    if 2 * n > len(letters):
        raise LayoutError("too many subsystems for partial trace")
    row = list(letters[:n])
    col = list(letters[n : 2 * n])
    for i in traced:
        col[i] = row[i]
    out_sub = "".join(row[k] for k in keep) + "".join(col[k] for k in keep)
    spec = "".join(row) + "".join(col) + "->" + out_sub
    reduced = np.einsum(spec, tensor)
    new_layout = op.layout.restricted(keep)
    d = new_layout.total_dim
    return BipartiteOperator(reduced.reshape(d, d), new_layout)


def permute_subsystems(x, perm: Sequence[int]):
    """Reorder subsystems: slot ``i`` of the result holds old subsystem ``perm[i]``.

    Example: a layout ``(a, b, a', b')`` becomes ``(a, a', b, b')`` under
    ``perm = (0, 2, 1, 3)``.  Works for operators and pure states.
    """
    n = len(x.layout)
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(n)):
        raise LayoutError(f"perm {perm} is not a permutation of 0..{n - 1}")
    dims = x.layout.dims
    new_layout = x.layout.restricted(perm)
    if isinstance(x, PureState):
        arr = x.amplitudes.reshape(dims).transpose(perm).reshape(-1)
        return PureState(arr, new_layout)
    if isinstance(x, BipartiteOperator):
        axes = list(perm) + [n + p for p in perm]
        arr = x.matrix.reshape(dims + dims).transpose(axes).reshape(x.matrix.shape)
        return BipartiteOperator(arr, new_layout)
    raise TypeError("permute_subsystems expects an operator or a state")


def group_parties(x):
    """Permute so all A subsystems precede all B subsystems, preserving relative order.

    Returns ``(permuted, perm)`` where ``perm`` is the permutation applied.
    """
    idx_a = x.layout.party_indices("A")
    idx_b = x.layout.party_indices("B")
    perm = idx_a + idx_b
    if perm == tuple(range(len(x.layout))):
        return x, perm
    return permute_subsystems(x, perm), perm


def trace_norm(m: OperatorLike) -> float:
    """Sum of singular values, computed by a full dense SVD."""
    return float(np.linalg.svd(_as_matrix(m), compute_uv=False).sum())


def operator_norm(m: OperatorLike) -> float:
    """Largest singular value, computed by a full dense SVD."""
    return float(np.linalg.svd(_as_matrix(m), compute_uv=False)[0])


def hs_inner(m: OperatorLike, n: OperatorLike) -> complex:
    """Hilbert-Schmidt inner product tr(M^dag N), conjugate-linear in M."""
    a = _as_matrix(m)
    b = _as_matrix(n)
    if a.shape != b.shape:
        raise LayoutError(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def is_hermitian(m: OperatorLike, tol: float = HERM_TOL) -> bool:
    a = _as_matrix(m)
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


def is_positive_semidefinite(m: OperatorLike, tol: float = -PSD_FLOOR) -> bool:
    """Hermitian with smallest eigenvalue above ``-tol``."""
    a = _as_matrix(m)
    if not is_hermitian(a):
        return False
    return bool(np.linalg.eigvalsh(a)[0] >= -tol)

def is_unitary(m: OperatorLike, tol: float = HERM_TOL) -> bool:
    a = _as_matrix(m)
    gram = a.conj().T @ a
    return bool(np.max(np.abs(gram - np.eye(a.shape[0]))) <= tol)


def is_density_matrix(m: OperatorLike, tol: float = 1e-8) -> bool:
    """Hermitian, positive semidefinite, unit trace within ``tol``."""
    a = _as_matrix(m)
    if abs(np.trace(a) - 1.0) > tol:
        return False
    return is_positive_semidefinite(a)
