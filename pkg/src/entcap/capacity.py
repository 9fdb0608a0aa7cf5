"""Monte Carlo estimation of entangling capacities and their dual bounds.

Three searches share one engine, random-restart stochastic hill climbing on
a unit sphere of real parameters (real and imaginary parts of the state
amplitudes):

- unassisted: maximize E(Lambda(sigma)) over product pure inputs
  |psi_A> (x) |psi_B>, each party holding its target plus a local ancilla;
- assisted probe: maximize E(Lambda(sigma)) - E(sigma) over all pure inputs
  on the same four-subsystem layout, a lower bound on the assisted capacity;
- dual bound: maximize E(Lambda(sigma)) over sigma = (|psi><psi|)^Gamma,
  the extreme points of the unit trace-norm ball of the partial-transpose
  cone.  By duality this dominates the assisted capacity, so a converged
  value is an upper estimate for it.

Each restart owns a generator seeded as ``seed + restart_index``, proposes
Gaussian perturbations scaled by a step size, accepts improvements beyond
``convergence_tol``, and decays the step after a run of rejections.  A
restart ends when the step falls below a floor or the iteration cap hits.
Restarts are independent, so results are identical whether they run
serially or on a thread pool, and a larger restart count extends (never
replaces) the set explored for a fixed seed: reported values are monotone
in the budget.

The assisted and dual objectives have maximizer ridges with conical
cross-sections where random-restart climbing alone stalls, so those two
searches warm-start restart 0 from the best product input (see the
function docstrings); the climb never accepts a decrease, so the warm
value survives as a floor while the other restarts stay fully random.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np
from scipy.linalg import lapack as _lapack

from .bounds import choi_lower_bound, thm2_upper_bound
from .channels import KrausChannel, embedded_kraus
from .core import LayoutError, PureState, SubsystemLayout, tensor_product
from .monotones import CLAMP_WINDOW

#: Rejections in a row before the step size decays.
STALL_PATIENCE = 8

#: Stall patience for the dual search.  Its objective costs an order of
#: magnitude more per evaluation (a dense eigendecomposition on the full
#: ancilla-extended space), and on such landscapes random restarts end
#: budget-truncated mid-climb whatever the patience, while the search's
#: accuracy floor comes from the warm start.  Decaying sooner buys the
#: same truncated exploration at a fraction of the cost.
DUAL_STALL_PATIENCE = 3

#: A restart stops once its step size drops below this.
STEP_FLOOR = 1e-8

#: Squared Schmidt coefficients below this are dropped from entropies.
_SPECTRUM_CUTOFF = 1e-12


@dataclass(frozen=True)
class SearchConfig:
    """Budget and reproducibility knobs shared by all searches.

    ``ancilla_dims`` of None mirrors the channel's target dimensions, which
    is always enough for the monotones used here.  Restart r draws from
    ``default_rng(seed + r)``, so configs differing only in ``restarts``
    explore nested sets of trajectories.
    """

    restarts: int = 64
    max_iters: int = 2000
    initial_step: float = 0.3
    step_decay: float = 0.7
    convergence_tol: float = 1e-9
    seed: int = 0
    ancilla_dims: Optional[tuple] = None

    def with_budget_factor(self, factor: int) -> "SearchConfig":
        """Same trajectories plus new ones: scales the restart count."""
        return replace(self, restarts=int(self.restarts) * int(factor))


@dataclass(frozen=True, eq=False)
class ProductStateParam:
    """A pure input that is product across the A|B cut."""

    state_a: PureState
    state_b: PureState

    def combined(self) -> PureState:
        return tensor_product(self.state_a, self.state_b)

    def to_dict(self) -> dict:
        return {
            "state_a": _vec_json(self.state_a.amplitudes),
            "state_b": _vec_json(self.state_b.amplitudes),
        }


@dataclass(frozen=True, eq=False)
class CapacityEstimate:
    """Outcome of one multistart search.

    ``trace`` holds each restart's final value in restart order, so the
    reported ``value`` is its maximum (ties go to the lowest index).
    ``wall_time`` is informational; everything else is a pure function of
    the channel and config.
    """

    value: float
    kind: str
    monotone: str
    argmax: object
    trace: np.ndarray
    evaluations: int
    wall_time: float
    config: SearchConfig

    def to_dict(self) -> dict:
        if isinstance(self.argmax, ProductStateParam):
            argmax = self.argmax.to_dict()
        else:
            argmax = _vec_json(self.argmax.amplitudes)
        return {
            "value": self.value,
            "kind": self.kind,
            "monotone": self.monotone,
            "argmax": argmax,
            "trace": [float(t) for t in self.trace],
            "evaluations": self.evaluations,
            "wall_time": self.wall_time,
            "config": {
                "restarts": self.config.restarts,
                "max_iters": self.config.max_iters,
                "initial_step": self.config.initial_step,
                "step_decay": self.config.step_decay,
                "convergence_tol": self.config.convergence_tol,
                "seed": self.config.seed,
                "ancilla_dims": list(self.config.ancilla_dims)
                if self.config.ancilla_dims
                else None,
            },
        }


class BracketInversionError(RuntimeError):
    """Lower bound exceeded upper bound beyond tolerance: an optimizer or bound bug."""


@dataclass(frozen=True, eq=False)
class BracketReport:
    """Joint lower/upper enclosure of the assisted entangling capacity."""

    description: str
    unassisted: CapacityEstimate
    assisted_probe: CapacityEstimate
    dual_bound: CapacityEstimate
    thm2_upper: float
    choi_lower: Optional[float]
    lower: float
    upper: float

    def to_dict(self) -> dict:
        return {
            "description": self.description,
            "unassisted": self.unassisted.to_dict(),
            "assisted_probe": self.assisted_probe.to_dict(),
            "dual_bound": self.dual_bound.to_dict(),
            "thm2_upper": self.thm2_upper,
            "choi_lower": self.choi_lower,
            "lower": self.lower,
            "upper": self.upper,
        }


def _vec_json(arr: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in arr]


def _clamped(value: float) -> float:
    """Report results within the package-wide zero window as exactly 0.

    All three objectives are nonnegative up to floating-point noise, so a
    value this small means "nothing created"; clamping keeps it comparable
    against the monotones' own zero convention.
    """
    return 0.0 if abs(value) <= CLAMP_WINDOW else value


class _Problem:
    """Embedded Kraus operators and dimensions for one channel + ancilla choice."""

    def __init__(self, ch: KrausChannel, cfg: SearchConfig) -> None:
        if not ch.preserves_dimension:
            raise LayoutError("capacity search needs a dimension-preserving channel")
        if len(ch.target_layout) != 2 or ch.target_layout.parties != ("A", "B"):
            raise LayoutError("capacity search expects a two-subsystem (A, B) channel")
        da, db = ch.target_layout.dims
        anc = cfg.ancilla_dims if cfg.ancilla_dims is not None else (da, db)
        if len(anc) != 2 or any(int(a) < 1 for a in anc):
            raise ValueError(f"ancilla_dims must be two positive ints, got {anc!r}")
        self.full: SubsystemLayout = ch.target_layout.extended_with_ancillas(anc)
        self.dim_a = da * int(anc[0])
        self.dim_b = db * int(anc[1])
        self.dim = self.dim_a * self.dim_b
        self.kraus = embedded_kraus(ch, self.full, targets=(0, 2))
        self.single = len(self.kraus) == 1
        # For a single Kraus operator the dual objective skips the embedded
        # matrix entirely and contracts the target-space operator against
        # the small index legs; keep what that path needs.
        self.target_kraus = ch.kraus_ops[0] if self.single else None
        self.split_dims = (da, int(anc[0]), db, int(anc[1]))

    def layout_a(self) -> SubsystemLayout:
        return self.full.restricted((0, 1))

    def layout_b(self) -> SubsystemLayout:
        return self.full.restricted((2, 3))


def _output_pt_abs_sum(kraus, rho: np.ndarray, da: int, db: int) -> float:
    """Trace norm of the partial transpose of sum_i K_i rho K_i^dag.

    The eigenvalues come from a direct LAPACK call: this sits inside the
    search's innermost loop.  The partial transpose lands in row-major
    memory, and reading that buffer column-major yields the conjugate of a
    Hermitian matrix, which shares its (real) spectrum, so the ``.T`` view
    feeds LAPACK without another copy.
    """
    out = None
    for k in kraus:
        t = k @ rho @ k.conj().T
        out = t if out is None else out + t
    n = da * db
    pt = out.reshape(da, db, da, db).transpose(0, 3, 2, 1).reshape(n, n)
    w, _, info = _lapack.zheev(pt.T, compute_v=0, overwrite_a=1)
    if info != 0:
        raise np.linalg.LinAlgError(f"eigenvalue solve failed (info={info})")
    return float(np.abs(w).sum())


def _pure_output_log_negativity(kraus, psi: np.ndarray, da: int, db: int, single: bool):
    if single:
        s = np.linalg.svd((kraus[0] @ psi).reshape(da, db), compute_uv=False)
        return 2.0 * np.log2(float(s.sum()))
    rho = np.outer(psi, psi.conj())
    return float(np.log2(_output_pt_abs_sum(kraus, rho, da, db)))


def _product_objective(prob: _Problem, monotone: str):
    da, db = prob.dim_a, prob.dim_b
    kraus, single = prob.kraus, prob.single
    if monotone == "von-neumann":
        if not single:
            raise ValueError("von Neumann search needs a single-Kraus channel")
        u = kraus[0]

        def objective(x):
            va = x[:da] + 1j * x[da : 2 * da]
            vb = x[2 * da : 2 * da + db] + 1j * x[2 * da + db :]
            va = va / np.linalg.norm(va)
            vb = vb / np.linalg.norm(vb)
            psi = (va[:, None] * vb[None, :]).ravel()
            s = np.linalg.svd((u @ psi).reshape(da, db), compute_uv=False)
            p = s * s
            p = p[p > _SPECTRUM_CUTOFF]
            return float(-(p * np.log2(p)).sum())

        return objective

    def objective(x):
        va = x[:da] + 1j * x[da : 2 * da]
        vb = x[2 * da : 2 * da + db] + 1j * x[2 * da + db :]
        va = va / np.linalg.norm(va)
        vb = vb / np.linalg.norm(vb)
        psi = (va[:, None] * vb[None, :]).ravel()
        return _pure_output_log_negativity(kraus, psi, da, db, single)

    return objective


def _assisted_objective(prob: _Problem):
    da, db = prob.dim_a, prob.dim_b
    n = prob.dim
    kraus, single = prob.kraus, prob.single

    def objective(x):
        v = x[:n] + 1j * x[n:]
        v = v / np.linalg.norm(v)
        s_in = np.linalg.svd(v.reshape(da, db), compute_uv=False)
        before = 2.0 * np.log2(float(s_in.sum()))
        after = _pure_output_log_negativity(kraus, v, da, db, single)
        return after - before

    return objective


def _dual_objective(prob: _Problem):
    da, db = prob.dim_a, prob.dim_b
    n = prob.dim
    kraus = prob.kraus

    if prob.single:
        # Single Kraus operator K on the targets: build the partially
        # transposed output straight from the generator's matrix without
        # 81-dim intermediates.  With m = psi as a (target_a, anc_a,
        # target_b, anc_b) tensor, sigma = (psi psi*)^Gamma followed by
        # K . K^dag followed by the output partial transpose contracts to
        #   X = sum_xy K4[a,d,x,y] m4[x,a',z,b'] conj(m4[w,c',y,d'])
        #              conj(K4[c,b,w,z])
        # because the transpose moves K's output-B leg to the column side.
        # Two small tensordots plus one 9-dim contraction replace a pair
        # of full-dimension matrix products; the saving is about a third
        # of each evaluation.
        ta, aa, tb, ab = prob.split_dims
        k4 = np.ascontiguousarray(prob.target_kraus.reshape(ta, tb, ta, tb))
        k4c = k4.conj()

        def objective(x):
            v = x[:n] + 1j * x[n:]
            v = v / np.linalg.norm(v)
            m4 = v.reshape(ta, aa, tb, ab)
            g = np.tensordot(k4, m4, axes=([2], [0]))
            h = np.tensordot(k4c, m4.conj(), axes=([2], [0]))
            pt = np.tensordot(g, h, axes=([2, 4], [4, 2]))
            pt = pt.transpose(0, 2, 5, 3, 4, 6, 1, 7).reshape(n, n)
            w, _, info = _lapack.zheev(pt.T, compute_v=0, overwrite_a=1)
            if info != 0:
                raise np.linalg.LinAlgError(f"eigenvalue solve failed (info={info})")
            return float(np.log2(np.abs(w).sum()))

        return objective

    def objective(x):
        v = x[:n] + 1j * x[n:]
        v = v / np.linalg.norm(v)
        m = v.reshape(da, db)
        # (|psi><psi|)^Gamma assembled entrywise: sigma[(a,b),(c,d)] = m[a,d] conj(m[c,b])
        sigma = (m[:, None, None, :] * m.conj().T[None, :, :, None]).reshape(n, n)
        return float(np.log2(_output_pt_abs_sum(kraus, sigma, da, db)))

    return objective


def _sphere_climb(
    objective,
    n_params: int,
    rng: np.random.Generator,
    cfg: SearchConfig,
    start: Optional[np.ndarray] = None,
    patience: int = STALL_PATIENCE,
):
    if start is None:
        x = rng.standard_normal(n_params)
        x /= np.linalg.norm(x)
    else:
        x = start / np.linalg.norm(start)
    best = objective(x)
    evals = 1
    step = cfg.initial_step
    stall = 0
    it = 0
    while it < cfg.max_iters and step > STEP_FLOOR:
        prop = x + step * rng.standard_normal(n_params)
        prop /= np.linalg.norm(prop)
        val = objective(prop)
        evals += 1
        it += 1
        if val > best + cfg.convergence_tol:
            x = prop
            best = val
            stall = 0
        else:
            stall += 1
            if stall >= patience:
                step *= cfg.step_decay
                stall = 0
    return best, x, evals


def _multistart(
    objective,
    n_params: int,
    cfg: SearchConfig,
    workers: int = 1,
    warm_start: Optional[np.ndarray] = None,
    patience: int = STALL_PATIENCE,
):
    """Independent restarts, merged by best value with ties to the lowest index.

    ``warm_start`` replaces restart 0's random initial point.  The climb
    only ever accepts improvements, so the warm value is a floor on the
    result; all other restarts explore from scratch.
    """
    t0 = time.perf_counter()

    def one(r: int):
        rng = np.random.default_rng(cfg.seed + r)
        start = warm_start if (r == 0 and warm_start is not None) else None
        return _sphere_climb(objective, n_params, rng, cfg, start=start, patience=patience)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, range(cfg.restarts)))
    else:
        results = [one(r) for r in range(cfg.restarts)]
    trace = np.array([r[0] for r in results])
    winner = int(np.argmax(trace))
    best, x, _ = results[winner]
    evaluations = int(sum(r[2] for r in results))
    return best, x, trace, evaluations, time.perf_counter() - t0


def unassisted_capacity(
    ch: KrausChannel,
    config: Optional[SearchConfig] = None,
    monotone: str = "log-negativity",
    workers: int = 1,
) -> CapacityEstimate:
    """Best entanglement created from a product pure input with local ancillas.

    Product inputs carry no A|B entanglement, so no subtraction is needed:
    the objective is the monotone evaluated on the channel output.
    ``monotone`` may also be "von-neumann" for unitary channels, where the
    output stays pure.
    """
    cfg = config if config is not None else SearchConfig()
    prob = _Problem(ch, cfg)
    objective = _product_objective(prob, monotone)
    n_params = 2 * (prob.dim_a + prob.dim_b)
    best, x, trace, evals, wall = _multistart(objective, n_params, cfg, workers)
    da = prob.dim_a
    va = x[:da] + 1j * x[da : 2 * da]
    vb = x[2 * da : 2 * da + prob.dim_b] + 1j * x[2 * da + prob.dim_b :]
    argmax = ProductStateParam(
        PureState.from_vector(va, prob.layout_a()),
        PureState.from_vector(vb, prob.layout_b()),
    )
    return CapacityEstimate(
        value=_clamped(best),
        kind="unassisted",
        monotone=monotone,
        argmax=argmax,
        trace=trace,
        evaluations=evals,
        wall_time=wall,
        config=cfg,
    )


def _warm_vector(
    warm: Union[bool, ProductStateParam, None],
    prob: _Problem,
    ch: KrausChannel,
    cfg: SearchConfig,
    workers: int,
    conjugate_b: bool,
) -> Optional[np.ndarray]:
    """Parameter vector for restart 0, or None for a fully random start.

    True means "find the best product input first and start there"; a
    ``ProductStateParam`` is used as given.  With ``conjugate_b`` the B
    factor is conjugated, which turns the partial transpose of the product
    state back into the product density matrix.
    """
    if warm is None or warm is False:
        return None
    if warm is True:
        warm = unassisted_capacity(ch, cfg, workers=workers).argmax
    if not isinstance(warm, ProductStateParam):
        raise TypeError(f"warm_start must be bool or ProductStateParam, got {type(warm)!r}")
    va = warm.state_a.amplitudes
    vb = warm.state_b.amplitudes
    if conjugate_b:
        vb = vb.conj()
    psi = (va[:, None] * vb[None, :]).ravel()
    if psi.size != prob.dim:
        raise LayoutError(
            f"warm start lives on dimension {psi.size}, search needs {prob.dim}"
        )
    return np.concatenate([psi.real, psi.imag])


def assisted_capacity_lower(
    ch: KrausChannel,
    config: Optional[SearchConfig] = None,
    workers: int = 1,
    warm_start: Union[bool, ProductStateParam] = True,
) -> CapacityEstimate:
    """Best single-shot gain E(output) - E(input) over arbitrary pure inputs.

    Any particular input certifies an achievable gain, so this is a lower
    bound on the assisted capacity (and can exceed the unassisted value).

    The gain landscape is only piecewise smooth: its maximizers sit on
    ridges where the objective falls off linearly in every direction and a
    hill climber's acceptance region shrinks to nothing.  Restart 0
    therefore starts from the best product input, which is itself a legal
    probe with zero input entanglement, so its gain is already achievable
    and the accept-only climb can only improve on it.  ``warm_start=True``
    runs the product search internally; pass a ``ProductStateParam`` to
    reuse one already computed, or False for fully random restarts.
    """
    cfg = config if config is not None else SearchConfig()
    prob = _Problem(ch, cfg)
    warm = _warm_vector(warm_start, prob, ch, cfg, workers, conjugate_b=False)
    objective = _assisted_objective(prob)
    best, x, trace, evals, wall = _multistart(
        objective, 2 * prob.dim, cfg, workers, warm_start=warm
    )
    argmax = PureState.from_vector(x[: prob.dim] + 1j * x[prob.dim :], prob.full)
    return CapacityEstimate(
        value=_clamped(best),
        kind="assisted-probe",
        monotone="log-negativity",
        argmax=argmax,
        trace=trace,
        evaluations=evals,
        wall_time=wall,
        config=cfg,
    )


def dual_capacity_bound(
    ch: KrausChannel,
    config: Optional[SearchConfig] = None,
    workers: int = 1,
    warm_start: Union[bool, ProductStateParam] = True,
) -> CapacityEstimate:
    """Search over normalized partial transposes of pure states.

    The unit ball of the trace norm composed with partial transposition has
    these operators as extreme points, and the supremum of E(Lambda(sigma))
    over them bounds the assisted capacity from above.  The reported number
    is a lower estimate of that supremum; once converged it sandwiches the
    capacity against the achievable searches.

    Like the assisted probe, this landscape has ridge maximizers, so
    restart 0 starts warm: for phi = psi_A (x) conj(psi_B) the operator
    (|phi><phi|)^Gamma is exactly the product density matrix, and the dual
    objective there equals the unassisted value.  Set ``warm_start=False``
    for fully random restarts.
    """
    cfg = config if config is not None else SearchConfig()
    prob = _Problem(ch, cfg)
    warm = _warm_vector(warm_start, prob, ch, cfg, workers, conjugate_b=True)
    objective = _dual_objective(prob)
    best, x, trace, evals, wall = _multistart(
        objective, 2 * prob.dim, cfg, workers, warm_start=warm,
        patience=DUAL_STALL_PATIENCE,
    )
    argmax = PureState.from_vector(x[: prob.dim] + 1j * x[prob.dim :], prob.full)
    return CapacityEstimate(
        value=_clamped(best),
        kind="dual-bound",
        monotone="log-negativity",
        argmax=argmax,
        trace=trace,
        evaluations=evals,
        wall_time=wall,
        config=cfg,
    )


def capacity_bracket(
    ch: KrausChannel,
    config: Optional[SearchConfig] = None,
    workers: int = 1,
    description: str = "",
) -> BracketReport:
    """Run all three searches plus the closed-form bounds and cross-check them.

    lower = max(unassisted, assisted probe, Choi value);
    upper = min(closed-form upper bound, dual search value).
    A lower bound exceeding the upper by more than 1e-6 raises
    BracketInversionError: it means a search or bound implementation broke,
    since the mathematics forbids it.
    """
    cfg = config if config is not None else SearchConfig()
    un = unassisted_capacity(ch, cfg, workers=workers)
    probe = assisted_capacity_lower(ch, cfg, workers=workers, warm_start=un.argmax)
    dual = dual_capacity_bound(ch, cfg, workers=workers, warm_start=un.argmax)
    upper_closed = thm2_upper_bound(ch)
    choi = choi_lower_bound(ch) if ch.preserves_dimension else None
    lower = max(un.value, probe.value, choi if choi is not None else float("-inf"))
    upper = min(upper_closed, dual.value)
    if lower > upper + 1e-6:
        raise BracketInversionError(
            f"lower bound {lower:.9g} exceeds upper bound {upper:.9g}"
        )
    return BracketReport(
        description=description or f"kraus-rank-{ch.kraus_rank}",
        unassisted=un,
        assisted_probe=probe,
        dual_bound=dual,
        thm2_upper=upper_closed,
        choi_lower=choi,
        lower=lower,
        upper=upper,
    )
