"""Dual-rail teleportation from flat space to a near-horizon observer.

Alice holds an unknown dual-rail qubit alpha |1,0> + beta |0,1> on a mode
pair (X1, X2) and half of a dual-rail Bell pair on (A1, A2).  Bob's half of
the Bell pair lives near the horizon, so each of his logical basis states
is the channel embedding of a photon-number state across region I and
region II (modes B1I, B1II, B2I, B2II).  Alice measures (X1, X2, A1, A2)
in the dual-rail Bell basis, Bob applies the outcome's correction unitary
to his accessible region-I rails, and region II is traced out.

The post-correction fidelity against the ideal dual-rail state obeys the
closed form F = 1 / cosh^6 r for every outcome and every input; the
brute-force pipeline here exists to verify that law numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import channel
from .channel import RegionPair, SqueezeParams
from .fock import (
    DEFAULT_TOLERANCES,
    DensityOperator,
    FockVector,
    ModeLayout,
    apply_local_map,
    basis_state,
    project,
    reduced_density,
    tensor,
)

__all__ = [
    "DualRailQubit",
    "TeleportOutcome",
    "ProtocolConfig",
    "OUTCOME_LABELS",
    "DEGENERATE_PROBABILITY",
    "ALICE_ANCILLA",
    "BOB_PAIRS",
    "resource_layout",
    "bell_resource",
    "bell_basis",
    "correction",
    "run_protocol",
    "fidelity_analytic",
    "premeasure_weight",
    "average_fidelity",
]

OUTCOME_LABELS = ("00", "01", "10", "11")

# outcomes with less weight than this are flagged instead of renormalized
DEGENERATE_PROBABILITY = 1e-14

ALICE_ANCILLA = ("A1", "A2")
BOB_PAIRS = (RegionPair("B1I", "B1II"), RegionPair("B2I", "B2II"))


@dataclass(frozen=True)
class DualRailQubit:
    """Logical qubit alpha |1,0> + beta |0,1> on a named mode pair."""

    alpha: complex
    beta: complex
    mode_pair: tuple[str, str] = ("X1", "X2")

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        object.__setattr__(self, "mode_pair", tuple(self.mode_pair))
        if len(self.mode_pair) != 2 or self.mode_pair[0] == self.mode_pair[1]:
            raise ValueError("mode_pair must be two distinct labels")
        norm_sq = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm_sq - 1.0) > DEFAULT_TOLERANCES.norm:
            raise ValueError(f"qubit not normalized: |alpha|^2 + |beta|^2 = {norm_sq!r}")

    def state(self, cutoff: int = 1) -> FockVector:
        """The qubit as a Fock vector on its mode pair."""
        layout = ModeLayout.uniform(self.mode_pair, cutoff)
        return (
            self.alpha * basis_state(layout, (1, 0))
            + self.beta * basis_state(layout, (0, 1))
        )


@dataclass(frozen=True)
class TeleportOutcome:
    """One Bell result: its probability, Bob's post-trace conditional state
    on the region-I pair, and the post-correction fidelity.

    A probability below DEGENERATE_PROBABILITY is flagged "degenerate" and
    the fidelity reported as NaN (not applicable), never divided through.
    """

    label: str
    probability: float
    conditional_state: DensityOperator
    fidelity: float
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class ProtocolConfig:
    """One teleportation run.

    ``n_max_bob`` fixes the cutoff of Bob's four squeezed modes; when None
    it is derived as required_cutoff(params, epsilon_trunc), which meets
    the tail budget by construction.  An explicit cutoff overrides the
    budget (the loss is then observable as 1 - sum of outcome
    probabilities).
    """

    params: SqueezeParams
    input: DualRailQubit
    epsilon_trunc: float = 1e-10
    n_max_bob: int | None = None

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon_trunc <= 0.1:
            raise ValueError(
                f"epsilon_trunc must lie in (0, 0.1], got {self.epsilon_trunc!r}"
            )
        if self.n_max_bob is not None and self.n_max_bob < 1:
            raise ValueError(f"n_max_bob must be >= 1, got {self.n_max_bob!r}")
        reserved = ALICE_ANCILLA + tuple(
            m for pair in BOB_PAIRS for m in pair.modes
        )
        if set(self.input.mode_pair) & set(reserved):
            raise ValueError(f"input mode labels collide with {reserved}")

    def bob_cutoff(self) -> int:
        if self.n_max_bob is not None:
            return self.n_max_bob
        return channel.required_cutoff(self.params, self.epsilon_trunc)


def resource_layout(n_max: int) -> ModeLayout:
    """Standard six-mode layout of the shared resource: Alice's ancilla
    pair at cutoff 1, then Bob's two (region I, region II) pairs."""
    bob_modes = tuple(m for pair in BOB_PAIRS for m in pair.modes)
    return ModeLayout(ALICE_ANCILLA + bob_modes, (1, 1) + (n_max,) * 4)


def bell_resource(
    params: SqueezeParams,
    layout: ModeLayout,
    n_max: int,
    epsilon_trunc: float | None = None,
) -> FockVector:
    """The shared entangled resource, Bob's half pushed through the channel.

    (|0L>_A (one on rail 1)(zero on rail 2) +
     |1L>_A (zero on rail 1)(one on rail 2)) / sqrt(2)

    Positional layout contract: modes[0:2] are Alice's dual-rail ancilla at
    cutoff 1, modes[2:4] and modes[4:6] are Bob's rails as (region I,
    region II) pairs at cutoff ``n_max``.  At r = 0 this is the flat
    dual-rail Bell state with region II in vacuum.
    """
    if layout.mode_count != 6:
        raise ValueError("resource layout needs 6 modes (ancilla pair + two rails)")
    if layout.cutoffs[:2] != (1, 1):
        raise ValueError("Alice's ancilla modes must have cutoff 1")
    if layout.cutoffs[2:] != (n_max,) * 4:
        raise ValueError(f"Bob's modes must all have cutoff {n_max}")

    ancilla = ModeLayout.uniform(layout.modes[:2], 1)
    pair1 = RegionPair(layout.modes[2], layout.modes[3])
    pair2 = RegionPair(layout.modes[4], layout.modes[5])

    one_1, tail1 = channel.embed_one(params, pair1, n_max)
    zero_1, tail0 = channel.embed_zero(params, pair1, n_max)
    one_2, _ = channel.embed_one(params, pair2, n_max)
    zero_2, _ = channel.embed_zero(params, pair2, n_max)
    loss = 1.0 - (1.0 - tail0) * (1.0 - tail1)
    if epsilon_trunc is not None and loss > epsilon_trunc:
        raise channel.TruncationBudgetExceeded(loss, epsilon_trunc)

    branch0 = tensor(basis_state(ancilla, (1, 0)), tensor(one_1, zero_2))
    branch1 = tensor(basis_state(ancilla, (0, 1)), tensor(zero_1, one_2))
    return (branch0 + branch1) * (1.0 / math.sqrt(2.0))


def bell_basis(
    mode_labels: tuple[str, str, str, str] = ("X1", "X2", "A1", "A2"),
) -> dict[str, FockVector]:
    """The four dual-rail Bell states on two logical qubits (four modes).

    Outcome labels are assigned so that projecting the full protocol state
    yields Bob's conditional logical amplitudes (alpha, beta), (beta,
    alpha), (alpha, -beta), (-beta, alpha) for 00, 01, 10, 11.
    """
    layout = ModeLayout.uniform(tuple(mode_labels), 1)
    zz = basis_state(layout, (1, 0, 1, 0))  # |0L 0L>
    oo = basis_state(layout, (0, 1, 0, 1))  # |1L 1L>
    zo = basis_state(layout, (1, 0, 0, 1))  # |0L 1L>
    oz = basis_state(layout, (0, 1, 1, 0))  # |1L 0L>
    s = 1.0 / math.sqrt(2.0)
    return {
        "00": s * (zz + oo),
        "01": s * (zo + oz),
        "10": s * (zz - oo),
        "11": s * (zo - oz),
    }


def correction(label: str, cutoff: int = 1) -> np.ndarray:
    """Bob's correction unitary for a Bell outcome, on his region-I pair.

    00: identity.  01: dual-rail bit flip, i.e. swap of the two rails.
    10: dual-rail phase flip, a pi phase per photon on the second rail.
    11: flip then phase.  Each maps the outcome's conditional logical
    amplitudes back to (alpha, beta).  The matrix acts on the joint basis
    of the pair, row-major (second mode fastest), at the given cutoff.
    """
    d = cutoff + 1
    dim = d * d
    idx = np.arange(dim)
    n1, n2 = idx // d, idx % d
    if label == "00":
        return np.eye(dim, dtype=np.complex128)
    if label == "01":
        swap = np.zeros((dim, dim), dtype=np.complex128)
        swap[n2 * d + n1, idx] = 1.0
        return swap
    if label == "10":
        return np.diag(np.where(n2 % 2 == 0, 1.0, -1.0).astype(np.complex128))
    if label == "11":
        return correction("10", cutoff) @ correction("01", cutoff)
    raise ValueError(f"unknown outcome label {label!r}")


def fidelity_analytic(params: SqueezeParams) -> float:
    """Closed-form post-correction fidelity 1 / cosh^6 r = (1 - tanh^2 r)^3."""
    return (1.0 - params.tanh_r**2) ** 3


def _degenerate_outcome(label: str, pair_layout: ModeLayout, probability: float) -> TeleportOutcome:
    """Outcome that (numerically) cannot occur: zero state, NaN fidelity."""
    zero = np.zeros((pair_layout.dim, pair_layout.dim), dtype=np.complex128)
    rho = DensityOperator(pair_layout, zero, trace_expected=0.0, flags=("degenerate",))
    return TeleportOutcome(
        label=label,
        probability=probability,
        conditional_state=rho,
        fidelity=math.nan,
        flags=("degenerate",),
    )


def run_protocol(config: ProtocolConfig) -> list[TeleportOutcome]:
    """Brute-force teleportation: compose, project, correct, trace, score.

    Builds the full eight-mode state (input qubit tensor resource),
    projects each Bell outcome of Alice's four modes, applies Bob's
    correction to his region-I rails, traces out region II, and evaluates
    F = <phi| rho_I |phi> against the ideal dual-rail state.  Returns the
    four outcomes in label order 00, 01, 10, 11.
    """
    qubit = config.input
    n_max = config.bob_cutoff()
    budget = config.epsilon_trunc if config.n_max_bob is None else None

    resource = bell_resource(
        config.params, resource_layout(n_max), n_max, epsilon_trunc=budget
    )
    full = tensor(qubit.state(), resource)
    basis = bell_basis(qubit.mode_pair + ALICE_ANCILLA)

    projections = [project(full, [basis[label]]) for label in OUTCOME_LABELS]
    del full, resource  # the heavy arrays are not needed past this point

    region_i = (BOB_PAIRS[0].region_I_mode, BOB_PAIRS[1].region_I_mode)
    pair_layout = ModeLayout.uniform(region_i, n_max)
    target = (
        qubit.alpha * basis_state(pair_layout, (1, 0))
        + qubit.beta * basis_state(pair_layout, (0, 1))
    )

    outcomes = []
    for label, (probability, conditional) in zip(OUTCOME_LABELS, projections):
        if probability < DEGENERATE_PROBABILITY:
            outcomes.append(_degenerate_outcome(label, pair_layout, probability))
            continue
        # corrections are exact signed permutations, unitary by construction,
        # so the U†U re-check (a full matmul at this size) is skipped
        corrected = apply_local_map(
            conditional, region_i, correction(label, n_max), check_unitary=False
        )
        rho = reduced_density(corrected, region_i)
        fidelity = float(
            np.vdot(target.amplitudes, rho.matrix @ target.amplitudes).real
        )
        outcomes.append(
            TeleportOutcome(
                label=label,
                probability=probability,
                conditional_state=rho,
                fidelity=fidelity,
            )
        )
    return outcomes


def premeasure_weight(config: ProtocolConfig) -> tuple[float, float]:
    """Single-excitation weight of Bob's region-I pair before measurement.

    Reduces the shared resource to the region-I rails and measures the
    weight of the ideal one-photon manifold span{|1,0>, |0,1>}.  Returns
    (measured, claimed) where claimed is the closed form 1 / cosh^6 r; the
    two are reported side by side for diagnostics and deliberately not
    asserted equal by this operation.
    """
    n_max = config.bob_cutoff()
    budget = config.epsilon_trunc if config.n_max_bob is None else None
    resource = bell_resource(
        config.params, resource_layout(n_max), n_max, epsilon_trunc=budget
    )
    region_i = (BOB_PAIRS[0].region_I_mode, BOB_PAIRS[1].region_I_mode)
    rho = reduced_density(resource, region_i)
    i10 = rho.layout.flat_index((1, 0))
    i01 = rho.layout.flat_index((0, 1))
    measured = float(rho.matrix[i10, i10].real + rho.matrix[i01, i01].real)
    claimed = fidelity_analytic(config.params)
    return measured, claimed


def average_fidelity(outcomes: list[TeleportOutcome]) -> float:
    """Probability-weighted fidelity over the non-degenerate outcomes."""
    weights = [o.probability for o in outcomes if "degenerate" not in o.flags]
    values = [o.fidelity for o in outcomes if "degenerate" not in o.flags]
    total = sum(weights)
    if total == 0.0:
        raise ValueError("all outcomes degenerate; no average fidelity")
    return sum(w * f for w, f in zip(weights, values)) / total
