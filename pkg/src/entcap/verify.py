"""Self-check suites: every mathematical identity the package relies on.

Each group bundles the invariants of one module into a seeded, repeatable
battery: partial-transpose algebra, norm oracles, Schmidt reconstruction,
channel certificates, monotone properties, the maximally-entangled Gram
identity, bound ordering, and the search cross-checks.  A group runs to
completion and reports every violation it finds rather than stopping at
the first, so a failure report localizes the bug.

The partial-transpose group takes the map under test as an argument, which
lets the test suite hand it a deliberately broken version and confirm the
battery catches it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .bounds import basic_closed_form, choi_lower_bound, thm2_upper_bound
from .capacity import SearchConfig, dual_capacity_bound, unassisted_capacity
from .channels import (
    KrausChannel,
    apply_channel,
    choi_state,
    gate_family,
    haar_unitary,
    max_entangled_pair,
    random_kraus_channel,
    unitary_channel,
)
from .core import (
    BipartiteOperator,
    PureState,
    SubsystemLayout,
    partial_trace,
    partial_transpose,
    tensor_product,
    trace_norm,
    operator_norm,
)
from .monotones import (
    entanglement_delta,
    log_negativity,
    negativity,
    pure_log_negativity,
)
from .schmidt import check_basic, operator_schmidt, pure_schmidt, two_qubit_basic

GROUP_NAMES = (
    "partial-transpose",
    "norm-oracles",
    "reductions",
    "schmidt",
    "channels",
    "monotones",
    "gram-identity",
    "bound-ordering",
    "search-consistency",
)


@dataclass(frozen=True)
class GroupResult:
    """Outcome of one invariant battery.

    ``checks`` counts individual assertions evaluated; ``failures`` holds a
    message per violated assertion; ``worst`` is the largest deviation seen
    across the group's toleranced comparisons, for gauging margins.
    """

    name: str
    passed: bool
    checks: int
    failures: tuple
    worst: float
    wall_time: float

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "failures": list(self.failures),
            "worst_deviation": self.worst,
            "wall_time": self.wall_time,
        }


class _Recorder:
    """Collects check results for one group."""

    def __init__(self) -> None:
        self.checks = 0
        self.failures = []
        self.worst = 0.0

    def within(self, dev: float, tol: float, label: str) -> None:
        dev = float(dev)
        self.checks += 1
        if dev > self.worst:
            self.worst = dev
        if not dev <= tol:
            self.failures.append(f"{label}: deviation {dev:.3e} exceeds {tol:.1e}")

    def holds(self, ok: bool, label: str) -> None:
        self.checks += 1
        if not ok:
            self.failures.append(label)


def _finish(name: str, rec: _Recorder, t0: float) -> GroupResult:
    return GroupResult(
        name=name,
        passed=not rec.failures,
        checks=rec.checks,
        failures=tuple(rec.failures),
        worst=rec.worst,
        wall_time=time.perf_counter() - t0,
    )


def _random_hermitian(rng: np.random.Generator, layout: SubsystemLayout) -> BipartiteOperator:
    n = layout.total_dim
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return BipartiteOperator((z + z.conj().T) / 2.0, layout)


def _random_density(rng: np.random.Generator, layout: SubsystemLayout) -> BipartiteOperator:
    n = layout.total_dim
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    m = z @ z.conj().T
    return BipartiteOperator(m / np.trace(m).real, layout)


def _random_layout(rng: np.random.Generator) -> SubsystemLayout:
    da = int(rng.integers(2, 4))
    db = int(rng.integers(2, 4))
    return SubsystemLayout.bipartite(da, db)


def check_partial_transpose(
    seed: int = 0,
    samples: int = 50,
    pt_fn: Callable = partial_transpose,
) -> GroupResult:
    """Linearity, involution, and trace/hermiticity preservation of the map.

    ``pt_fn`` is the implementation under test; substituting a broken one
    must flip the group to failing.
    """
    t0 = time.perf_counter()
    rec = _Recorder()
    rng = np.random.default_rng(seed)
    for i in range(samples):
        layout = _random_layout(rng)
        h = _random_hermitian(rng, layout)
        g = _random_hermitian(rng, layout)
        ph = pt_fn(h, "B")
        rec.within(
            np.max(np.abs(pt_fn(ph, "B").matrix - h.matrix)),
            1e-12,
            f"involution sample {i}",
        )
        rec.within(abs(ph.trace() - h.trace()), 1e-12, f"trace sample {i}")
        rec.within(
            np.max(np.abs(ph.matrix - ph.matrix.conj().T)),
            1e-12,
            f"hermiticity sample {i}",
        )
        a, b = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        combo = BipartiteOperator(a * h.matrix + b * g.matrix, layout)
        rec.within(
            np.max(
                np.abs(
                    pt_fn(combo, "B").matrix
                    - a * ph.matrix
                    - b * pt_fn(g, "B").matrix
                )
            ),
            1e-12,
            f"linearity sample {i}",
        )
    return _finish("partial-transpose", rec, t0)


def check_norm_oracles(seed: int = 0, samples: int = 50) -> GroupResult:
    """SVD-based norms against eigendecompositions; PT trace-norm floor."""
    t0 = time.perf_counter()
    rec = _Recorder()
    rng = np.random.default_rng(seed)
    for i in range(samples):
        layout = _random_layout(rng)
        h = _random_hermitian(rng, layout)
        w = np.linalg.eigvalsh(h.matrix)
        rec.within(
            abs(trace_norm(h) - np.abs(w).sum()), 1e-10, f"trace norm sample {i}"
        )
        rec.within(
            abs(operator_norm(h) - np.abs(w).max()), 1e-10, f"operator norm sample {i}"
        )
        rho = _random_density(rng, layout)
        tn = trace_norm(partial_transpose(rho, "B"))
        rec.holds(tn >= 1.0 - 1e-12, f"PT trace norm {tn!r} below 1 at sample {i}")
    return _finish("norm-oracles", rec, t0)


def check_reductions(seed: int = 0) -> GroupResult:
    """Partial traces of |Phi_A>|Phi_B> land on the exact known reductions.

    Dropping party B leaves party A's pair intact and pure; dropping
    everything but one subsystem leaves that subsystem maximally mixed.
    """
    t0 = time.perf_counter()
    rec = _Recorder()
    for da in (2, 3):
        for db in (2, 3):
            layout = SubsystemLayout.bipartite(da, db).extended_with_ancillas((da, db))
            phi = max_entangled_pair(layout)
            rho = phi.density()
            pair_a = np.eye(da, dtype=complex).reshape(-1) / np.sqrt(da)
            rec.within(
                np.max(
                    np.abs(
                        partial_trace(rho, keep=(0, 1)).matrix
                        - np.outer(pair_a, pair_a.conj())
                    )
                ),
                1e-12,
                f"pair reduction ({da},{db})",
            )
            for slot, d in zip((0, 1, 2, 3), (da, da, db, db)):
                rec.within(
                    np.max(
                        np.abs(
                            partial_trace(rho, keep=(slot,)).matrix - np.eye(d) / d
                        )
                    ),
                    1e-12,
                    f"single-subsystem reduction ({da},{db}) slot {slot}",
                )
    return _finish("reductions", rec, t0)


def check_schmidt(seed: int = 0, samples: int = 20) -> GroupResult:
    """Reconstruction, factor orthonormality, and the two-qubit closed form."""
    t0 = time.perf_counter()
    rec = _Recorder()
    rng = np.random.default_rng(seed)
    for i in range(samples):
        layout = _random_layout(rng)
        n = layout.total_dim
        z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        op = BipartiteOperator(z, layout)
        dec = operator_schmidt(op)
        rec.within(
            np.max(np.abs(dec.reconstruct().matrix - op.matrix)),
            1e-8,
            f"reconstruction sample {i}",
        )
        for ops in (dec.left_ops, dec.right_ops):
            gram = np.array(
                [[np.vdot(x, y) for y in ops] for x in ops]
            )
            rec.within(
                np.max(np.abs(gram - np.eye(len(ops)))),
                1e-8,
                f"factor gram sample {i}",
            )
    for i in range(samples):
        u = BipartiteOperator(haar_unitary(4, rng), SubsystemLayout.bipartite(2, 2))
        _, dec = two_qubit_basic(u)
        verdict = check_basic(dec)
        rec.holds(
            verdict.status.value == "basic",
            f"two-qubit canonical decomposition not basic at sample {i}",
        )
        plain = operator_schmidt(u)
        a = np.sort(dec.coefficients)
        b = np.sort(plain.coefficients)
        rec.holds(
            a.shape == b.shape and bool(np.max(np.abs(a - b)) <= 1e-8),
            f"coefficient multiset mismatch at sample {i}",
        )
        # basic factors make O_A collapse to a multiple of the identity
        o_a = sum(
            lam * (f.conj().T @ f) for lam, f in zip(dec.coefficients, dec.left_ops)
        )
        total = float(np.sum(dec.coefficients))
        rec.within(
            operator_norm(o_a - (total / 2.0) * np.eye(2)),
            1e-8 * total,
            f"O_A collapse sample {i}",
        )
    for da in (2, 3):
        for db in (2, 3):
            layout = SubsystemLayout.bipartite(da, db).extended_with_ancillas((da, db))
            s = pure_schmidt(max_entangled_pair(layout))
            rec.holds(
                s.shape == (1,) or bool(np.max(s[1:]) <= 1e-12),
                f"paired maximal entanglement not product across the cut ({da},{db})",
            )
            rec.within(abs(s[0] - 1.0), 1e-12, f"leading coefficient ({da},{db})")
    return _finish("schmidt", rec, t0)


def check_channels(seed: int = 0, haar_samples: int = 500) -> GroupResult:
    """Trace-preservation certificates, Choi separability, positivity, Haar moment."""
    t0 = time.perf_counter()
    rec = _Recorder()
    rng = np.random.default_rng(seed)
    layouts = [SubsystemLayout.bipartite(2, 2), SubsystemLayout.bipartite(2, 3)]
    channels = []
    for i, layout in enumerate(layouts):
        channels.append(random_kraus_channel(layout, kraus_rank=2, seed=rng))
        channels.append(
            unitary_channel(
                BipartiteOperator(haar_unitary(layout.total_dim, rng), layout)
            )
        )
    for i, ch in enumerate(channels):
        gram = sum(k.conj().T @ k for k in ch.kraus_ops)
        rec.within(
            np.max(np.abs(gram - np.eye(ch.target_layout.total_dim))),
            1e-10,
            f"trace preservation channel {i}",
        )
        if ch.preserves_dimension:
            da, db = ch.target_layout.dims
            full = ch.target_layout.extended_with_ancillas((da, db))
            phi = max_entangled_pair(full)
            rec.within(
                float(pure_log_negativity(phi)),
                1e-10,
                f"probe pair carries cross entanglement, channel {i}",
            )
            rho = _random_density(rng, full)
            out = apply_channel(ch, rho, targets=(0, 2))
            rec.holds(
                float(np.linalg.eigvalsh(out.matrix)[0]) >= -1e-9,
                f"output lost positivity, channel {i}",
            )
    trs = np.array(
        [abs(np.trace(haar_unitary(9, rng))) ** 2 for _ in range(haar_samples)]
    )
    se = trs.std(ddof=1) / np.sqrt(haar_samples)
    rec.holds(
        abs(trs.mean() - 1.0) <= 3.0 * se,
        f"Haar moment mean {trs.mean():.4f} off 1 beyond 3 standard errors ({se:.4f})",
    )
    return _finish("channels", rec, t0)


def check_monotones(seed: int = 0, samples: int = 100) -> GroupResult:
    """Additivity, local-unitary invariance, pure/dense agreement, PPT zero."""
    t0 = time.perf_counter()
    rec = _Recorder()
    rng = np.random.default_rng(seed)
    layout = SubsystemLayout.bipartite(2, 2)
    for i in range(samples):
        r1 = _random_density(rng, layout)
        r2 = _random_density(rng, layout)
        joint = tensor_product(r1, r2)
        rec.within(
            abs(
                float(log_negativity(joint))
                - float(log_negativity(r1))
                - float(log_negativity(r2))
            ),
            1e-9,
            f"additivity sample {i}",
        )
    for i in range(samples):
        rho = _random_density(rng, layout)
        ua = haar_unitary(2, rng)
        ub = haar_unitary(2, rng)
        local = np.kron(ua, ub)
        rotated = BipartiteOperator(local @ rho.matrix @ local.conj().T, layout)
        rec.within(
            abs(float(log_negativity(rotated)) - float(log_negativity(rho))),
            1e-9,
            f"local invariance sample {i}",
        )
    for i in range(20):
        big = SubsystemLayout.bipartite(3, 3)
        z = rng.standard_normal(9) + 1j * rng.standard_normal(9)
        psi = PureState.from_vector(z, big)
        rec.within(
            abs(float(pure_log_negativity(psi)) - float(log_negativity(psi.density()))),
            1e-9,
            f"pure/dense agreement sample {i}",
        )
    found = 0
    attempts = 0
    while found < 20 and attempts < 400:
        attempts += 1
        rho = _random_density(rng, layout)
        gamma = partial_transpose(rho, "B")
        if np.linalg.eigvalsh(gamma.matrix)[0] < 0.0:
            continue
        # gamma is then itself a density matrix with positive partial transpose
        rec.within(
            abs(float(negativity(gamma))), 0.0, f"PPT negativity sample {found}"
        )
        found += 1
    rec.holds(found >= 20, f"only {found} PPT samples found in {attempts} draws")
    return _finish("monotones", rec, t0)


def check_gram_identity(seed: int = 0, sets: int = 50) -> GroupResult:
    """Orthonormal operators map one maximally entangled pair to orthonormal states.

    For an operator set {A_k} orthonormal under the Hilbert-Schmidt inner
    product, the vectors sqrt(d) (A_k (x) 1)|Phi> are orthonormal: the Gram
    matrix reduces to the trace inner product evaluated entrywise in the
    computational basis.
    """
    t0 = time.perf_counter()
    rec = _Recorder()
    rng = np.random.default_rng(seed)
    for i in range(sets):
        d = int(rng.integers(2, 4))
        z = rng.standard_normal((d * d, d * d)) + 1j * rng.standard_normal((d * d, d * d))
        q, _ = np.linalg.qr(z)
        ops = [q[:, k].reshape(d, d) for k in range(d * d)]
        phi = np.eye(d, dtype=complex).reshape(-1) / np.sqrt(d)
        vecs = [np.sqrt(d) * (np.kron(a, np.eye(d)) @ phi) for a in ops]
        gram = np.array([[np.vdot(x, y) for y in vecs] for x in vecs])
        rec.within(
            np.max(np.abs(gram - np.eye(d * d))), 1e-10, f"gram set {i} (d={d})"
        )
    return _finish("gram-identity", rec, t0)


def check_bound_ordering(
    seed: int = 0,
    samples: int = 3,
    config: Optional[SearchConfig] = None,
) -> GroupResult:
    """Achievable value sits between the Choi lower and the product upper bound."""
    t0 = time.perf_counter()
    rec = _Recorder()
    rng = np.random.default_rng(seed)
    cfg = config if config is not None else SearchConfig(seed=seed)
    layout = SubsystemLayout.bipartite(2, 2)
    for i in range(samples):
        u = BipartiteOperator(haar_unitary(4, rng), layout)
        ch = unitary_channel(u)
        upper = thm2_upper_bound(ch)
        choi = choi_lower_bound(ch)
        _, dec = two_qubit_basic(u)
        closed = basic_closed_form(dec)
        rec.within(abs(upper - closed), 1e-9, f"upper vs closed form sample {i}")
        rec.within(abs(choi - closed), 1e-9, f"choi vs closed form sample {i}")
        searched = unassisted_capacity(ch, cfg).value
        rec.holds(
            choi - 1e-6 <= searched <= upper + 1e-6,
            f"ordering violated at sample {i}: "
            f"choi {choi:.9f}, searched {searched:.9f}, upper {upper:.9f}",
        )
    # widening identity-padded Kraus operators must not move the bound
    for i in range(3):
        u = BipartiteOperator(haar_unitary(4, rng), layout)
        ch = unitary_channel(u)
        wide_layout = SubsystemLayout.bipartite(4, 4)
        perm = np.kron(np.eye(2), np.kron(gate_family("swap", d=2).matrix, np.eye(2)))
        wide = perm @ np.kron(u.matrix, np.eye(4)) @ perm.conj().T
        ch_wide = unitary_channel(BipartiteOperator(wide, wide_layout))
        rec.within(
            abs(thm2_upper_bound(ch_wide) - thm2_upper_bound(ch)),
            1e-10,
            f"bound moved under identity padding, sample {i}",
        )
    return _finish("bound-ordering", rec, t0)


def check_search_consistency(
    seed: int = 0,
    delta_samples: int = 100,
    config: Optional[SearchConfig] = None,
) -> GroupResult:
    """Cross-checks between the searches and the closed-form bounds.

    Covers the gain-versus-dual inequality on random inputs, monotonicity
    of the reported value in the restart budget, determinism under a fixed
    seed, the unassisted-below-dual ordering, and consistency with the
    Choi lower bound.
    """
    t0 = time.perf_counter()
    rec = _Recorder()
    rng = np.random.default_rng(seed)
    cfg = config if config is not None else SearchConfig(seed=seed)
    layout = SubsystemLayout.bipartite(2, 2)

    ch = random_kraus_channel(layout, kraus_rank=2, seed=rng)
    dual = dual_capacity_bound(ch, cfg)
    full = layout.extended_with_ancillas((2, 2))
    for i in range(delta_samples):
        z = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        psi = PureState.from_vector(z, full)
        delta = entanglement_delta(ch, psi, targets=(0, 2))
        rec.holds(
            delta <= dual.value + 1e-6,
            f"gain {delta:.9f} exceeds dual bound {dual.value:.9f} at input {i}",
        )

    gate = gate_family("phase", phi=0.9)
    uch = unitary_channel(gate)
    small = SearchConfig(restarts=8, seed=seed)
    lo = unassisted_capacity(uch, small)
    hi = unassisted_capacity(uch, small.with_budget_factor(2))
    rec.holds(
        hi.value >= lo.value,
        f"doubling restarts lowered the value: {lo.value!r} -> {hi.value!r}",
    )
    again = unassisted_capacity(uch, small)
    rec.holds(
        again.value == lo.value and np.array_equal(again.trace, lo.trace),
        "repeated run with identical config diverged",
    )

    u = BipartiteOperator(haar_unitary(4, rng), layout)
    hch = unitary_channel(u)
    un = unassisted_capacity(hch, cfg)
    du = dual_capacity_bound(hch, cfg, warm_start=un.argmax)
    rec.holds(
        un.value <= du.value + 1e-6,
        f"unassisted {un.value:.9f} above dual {du.value:.9f}",
    )
    rec.holds(
        un.value >= choi_lower_bound(hch) - 1e-6,
        f"unassisted {un.value:.9f} below the Choi value {choi_lower_bound(hch):.9f}",
    )
    return _finish("search-consistency", rec, t0)


def run_invariant_groups(
    seed: int = 0,
    groups: Optional[Sequence[str]] = None,
    pt_fn: Callable = partial_transpose,
    config: Optional[SearchConfig] = None,
) -> list:
    """Run the named groups (all by default) and return their results.

    ``pt_fn`` is forwarded to the partial-transpose group; ``config``
    overrides the search budget of the two search-based groups.
    """
    runners = {
        "partial-transpose": lambda: check_partial_transpose(seed, pt_fn=pt_fn),
        "norm-oracles": lambda: check_norm_oracles(seed),
        "reductions": lambda: check_reductions(seed),
        "schmidt": lambda: check_schmidt(seed),
        "channels": lambda: check_channels(seed),
        "monotones": lambda: check_monotones(seed),
        "gram-identity": lambda: check_gram_identity(seed),
        "bound-ordering": lambda: check_bound_ordering(seed, config=config),
        "search-consistency": lambda: check_search_consistency(seed, config=config),
    }
    names = list(groups) if groups is not None else list(GROUP_NAMES)
    for name in names:
        if name not in runners:
            raise ValueError(f"unknown invariant group {name!r}")
    return [runners[name]() for name in names]
