"""Entanglement monotones built on the partial transpose and pure-state spectra.

All logarithms are base 2, so every value is in ebits.  Trace norms within
1e-10 of 1 are treated as exactly 1 (PPT states report exactly zero), which
keeps downstream comparisons free of spurious 1e-16 noise.

Negativity here accepts any Hermitian unit-trace operator, not only
positive ones: the dual-bound search feeds it partial transposes of pure
states, which are valid normalized Hermitian operators that may fail
positivity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import BipartiteOperator, PureState, is_hermitian, trace_norm
from .channels import KrausChannel, apply_channel
from .schmidt import pure_schmidt
from .core import partial_transpose

#: Trace norms within this window of 1 are clamped to exactly 1.
CLAMP_WINDOW = 1e-10

#: Squared Schmidt coefficients below this are dropped from entropies.
SPECTRUM_CUTOFF = 1e-12

KINDS = ("negativity", "log-negativity", "von-neumann")


@dataclass(frozen=True)
class EntanglementValue:
    """A monotone value in ebits (or dimensionless for plain negativity)."""

    value: float
    kind: str

    def __float__(self) -> float:
        return self.value

    def __repr__(self) -> str:
        return f"EntanglementValue({self.value:.12g}, {self.kind})"


def _checked_trace_norm_pt(rho: BipartiteOperator) -> float:
    if abs(complex(np.trace(rho.matrix)).real - 1.0) > 1e-8:
        raise ValueError("operator must have unit trace")
    if not is_hermitian(rho.matrix):
        raise ValueError("operator must be Hermitian")
    return trace_norm(partial_transpose(rho, "B"))


def negativity(rho: BipartiteOperator) -> EntanglementValue:
    """(||rho^Gamma||_1 - 1) / 2: the weight of the negative spectrum."""
    tn = _checked_trace_norm_pt(rho)
    val = 0.0 if abs(tn - 1.0) <= CLAMP_WINDOW else (tn - 1.0) / 2.0
    return EntanglementValue(val, "negativity")


def log_negativity(rho: BipartiteOperator) -> EntanglementValue:
    """log2 ||rho^Gamma||_1 in ebits; exactly 0.0 for PPT inputs."""
    tn = _checked_trace_norm_pt(rho)
    val = 0.0 if abs(tn - 1.0) <= CLAMP_WINDOW else float(np.log2(tn))
    return EntanglementValue(val, "log-negativity")


def pure_log_negativity(psi: PureState) -> EntanglementValue:
    """2 log2 (sum of Schmidt coefficients), the pure-state log-negativity.

    For |psi> with Schmidt coefficients s_k the partial transpose of the
    projector has trace norm (sum_k s_k)^2, so this agrees with
    log_negativity(psi.density()) while staying linear-algebra cheap.
    """
    s = pure_schmidt(psi)
    total = float(s.sum())
    val = 0.0 if abs(total - 1.0) <= CLAMP_WINDOW else float(2.0 * np.log2(total))
    return EntanglementValue(val, "log-negativity")


def von_neumann(psi: PureState) -> EntanglementValue:
    """Entropy of entanglement -sum p log2 p over the squared Schmidt spectrum."""
    p = pure_schmidt(psi) ** 2
    p = p[p > SPECTRUM_CUTOFF]
    return EntanglementValue(float(-(p * np.log2(p)).sum()), "von-neumann")


def entanglement_delta(
    ch: KrausChannel,
    psi: PureState,
    monotone: str = "log-negativity",
    targets=None,
) -> float:
    """Entanglement produced by one use of a channel on a pure input.

    Returns E(Lambda(|psi><psi|)) - E(|psi><psi|).  For a single-Kraus
    channel the output stays pure and the fast pure-state formulas apply;
    otherwise the output density is formed explicitly.  The von Neumann
    monotone is defined only where the output is pure.
    """
    if monotone not in ("log-negativity", "negativity", "von-neumann"):
        raise ValueError(f"unknown monotone {monotone!r}")
    if monotone == "von-neumann":
        before = von_neumann(psi)
    elif monotone == "negativity":
        before = negativity(psi.density())
    else:
        before = pure_log_negativity(psi)

    if ch.kraus_rank == 1:
        if targets is None:
            k = ch.kraus_ops[0]
            out_layout = ch.output_layout
        else:
            from .channels import embedded_kraus

            k = embedded_kraus(ch, psi.layout, targets)[0]
            out_layout = psi.layout
        out_psi = PureState.from_vector(k @ psi.amplitudes, out_layout)
        if monotone == "von-neumann":
            after = von_neumann(out_psi)
        elif monotone == "negativity":
            after = negativity(out_psi.density())
        else:
            after = pure_log_negativity(out_psi)
    else:
        if monotone == "von-neumann":
            raise ValueError("von Neumann delta needs a pure output (single-Kraus channel)")
        out = apply_channel(ch, psi.density(), targets)
        after = negativity(out) if monotone == "negativity" else log_negativity(out)
    return float(after) - float(before)


def log_robustness(rho: BipartiteOperator) -> EntanglementValue:
    """Log-robustness of entanglement. Not computed by this package.

    Evaluating it requires a convex optimization over separable states,
    which is outside the scope of the dense linear algebra kept here.  The
    function exists so callers porting code that expects the full log-family
    of monotones get a loud, documented failure instead of a silent gap.
    """
    raise NotImplementedError(
        "log-robustness needs an optimization over the separable set; "
        "use log_negativity for the computable member of the family"
    )


def log_ppt_monotone(rho: BipartiteOperator) -> EntanglementValue:
    """Log-monotone over positive-with-positive-partial-transpose decompositions.

    Not computed by this package: the defining optimization runs over the
    PPT-and-positive set and has no closed form.  Present as a documented
    stub for API completeness.
    """
    raise NotImplementedError(
        "the PPT-set monotone needs an optimization over PPT operators; "
        "use log_negativity for the computable member of the family"
    )
