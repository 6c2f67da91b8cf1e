"""Finite-statistics and imperfection emulation of the loop experiment.

Losses in the loop are position-independent to first order, so they
rescale the event budget rather than the distribution shape; the optional
asymmetric right-move loss knob models the residual long/short path
imbalance. All randomness flows through explicit seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np

from .errors import DomainError
from .measure import shannon_entropy, similarity
from .state import CoinOp, CoinProgram, WalkerState
from .walk import run_program


@dataclass(frozen=True)
class NoiseModel:
    round_trip_survival: float = 0.43  # detection probability per round trip
    outcoupling_fraction: float = 0.01  # tap ratio toward the detector
    coin_angle_jitter_rad: float = 0.0
    dephasing_gamma: float = 1.0  # off-diagonal retention per analysis
    right_move_loss: float = 0.0  # asymmetric per-right-move loss, off by default
    seed: int = 0

    def __post_init__(self):
        for name in ("round_trip_survival", "outcoupling_fraction",
                     "dephasing_gamma", "right_move_loss"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {v!r}")
        if self.coin_angle_jitter_rad < 0:
            raise DomainError("coin_angle_jitter_rad must be >= 0")


def expected_counts(
    p: CoinProgram, nm: NoiseModel, step: int, total_events: int
) -> dict[int, float]:
    """Ideal P(x, step) scaled to ``total_events`` detected events.

    Flat losses rescale the budget, not the shape, so the shape here is
    the noiseless one; see detected_event_budget for the budget itself.
    """
    if total_events < 0:
        raise DomainError("total_events must be >= 0")
    dist = run_program(p)[step].distribution
    if nm.right_move_loss > 0.0:
        dist = lossy_distribution(p, step, nm.right_move_loss)
    return {x: prob * total_events for x, prob in dist.items()}


def detected_event_budget(nm: NoiseModel, launches: float, step: int) -> float:
    """Expected detections at a step: launches * survival^step * tap ratio.

    Whether the per-round-trip survival already includes the tap is
    ambiguous in practice; the two knobs are exposed separately so either
    reading can be configured.
    """
    return launches * nm.round_trip_survival ** step * nm.outcoupling_fraction


def lossy_distribution(p: CoinProgram, step: int, right_move_loss: float) -> dict[int, float]:
    """Distribution at a step with amplitude damping on every right-move,
    renormalized at detection."""
    damp = math.sqrt(1.0 - right_move_loss)
    s = p.initial
    for t in range(step):
        amps = {}
        for x, pair in s.amplitudes.items():
            amps[x] = p.cells[(t, x)].apply(pair)
        shifted: dict[int, list[complex]] = {}
        for x, (a, b) in amps.items():
            shifted.setdefault(x + 1, [0j, 0j])[0] = damp * a
            shifted.setdefault(x - 1, [0j, 0j])[1] = b
        s = WalkerState(
            step=t + 1,
            amplitudes={x: (a, b) for x, (a, b) in shifted.items()},
            require_normalized=False,
        )
    raw = {x: abs(a) ** 2 + abs(b) ** 2 for x, (a, b) in sorted(s.amplitudes.items())}
    total = sum(raw.values())
    return {x: v / total for x, v in raw.items()}


def sample_counts(p: Mapping[int, float], n: int, seed: int) -> dict[int, int]:
    """Multinomial draw of n events from a distribution, reproducible per seed."""
    if n < 0:
        raise DomainError("n must be >= 0")
    xs = sorted(p)
    probs = np.array([p[x] for x in xs], dtype=float)
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(n, probs)
    return {x: int(c) for x, c in zip(xs, counts)}


@dataclass(frozen=True)
class BootstrapResult:
    sigma_p: dict[int, float]
    sigma_entropy: float
    sigma_similarity: float | None


def bootstrap_errorbars(
    counts: Mapping[int, int],
    resamples: int,
    seed: int,
    theory: Mapping[int, float] | None = None,
) -> BootstrapResult:
    """Multinomial-resampled standard deviations of P(x), entropy, and,
    when a theory distribution is given, the similarity against it."""
    if resamples < 100:
        raise DomainError("resamples must be >= 100")
    n = int(sum(counts.values()))
    if n < 1:
        raise DomainError("counts must contain at least one event")
    xs = sorted(counts)
    phat = np.array([counts[x] for x in xs], dtype=float) / n
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(n, phat, size=resamples) / n
    sigma_p = {x: float(s) for x, s in zip(xs, draws.std(axis=0))}
    entropies = np.array([shannon_entropy(dict(zip(xs, row))) for row in draws])
    sigma_f = None
    if theory is not None:
        sims = np.array([similarity(dict(zip(xs, row)), dict(theory)) for row in draws])
        sigma_f = float(sims.std())
    return BootstrapResult(
        sigma_p=sigma_p,
        sigma_entropy=float(entropies.std()),
        sigma_similarity=sigma_f,
    )


def perturb_program(p: CoinProgram, nm: NoiseModel) -> CoinProgram:
    """Jitter every stepped coin angle by the model's std-dev, clamped to
    [0, pi]; the initial state and final layer are left untouched."""
    if nm.coin_angle_jitter_rad == 0.0:
        return p
    rng = np.random.default_rng(nm.seed)
    cells = {}
    for key in sorted(p.cells):
        theta = p.cells[key].theta + rng.normal(0.0, nm.coin_angle_jitter_rad)
        cells[key] = CoinOp(min(max(theta, 0.0), math.pi))
    return replace(p, cells=cells)
