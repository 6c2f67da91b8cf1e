"""Analysis of walk outcomes: overlap, entropy, purity, bit extraction.

The purity check follows the two-position tomography route: for each pair
of neighboring occupied positions {x, x+2}, the 2x2 reduced density matrix
must satisfy |rho_{x,x+2}|^2 = rho_{x,x} rho_{x+2,x+2} for a coherent
(pure) multi-path state. The matrix can be built directly from amplitudes
or through an emulation of the merged-pulse polarization tomography.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import DomainError, MustDisentangleError, NormalizationError
from .state import WalkerState

DIST_TOL = 1e-9


def _check_distribution(p: Mapping[int, float], name: str) -> None:
    total = 0.0
    for x, v in p.items():
        if v < -DIST_TOL:
            raise NormalizationError(f"{name}[{x}] = {v!r} is negative")
        total += v
    if abs(total - 1.0) > DIST_TOL:
        raise NormalizationError(f"{name} sums to {total!r}, expected 1")


def similarity(p: Mapping[int, float], q: Mapping[int, float]) -> float:
    """Bhattacharyya overlap sum_x sqrt(p_x q_x) over the union support.

    Equals 1 exactly when the distributions match and 0 when their
    supports are disjoint.
    """
    _check_distribution(p, "p")
    _check_distribution(q, "q")
    f = sum(
        math.sqrt(max(p.get(x, 0.0), 0.0) * max(q.get(x, 0.0), 0.0))
        for x in set(p) | set(q)
    )
    return min(f, 1.0)


def shannon_entropy(p: Mapping[int, float]) -> float:
    """Entropy -sum p log2 p in bits, with 0 log 0 = 0."""
    _check_distribution(p, "p")
    total = 0.0
    for v in p.values():
        if v > 0.0:
            total += v * math.log2(v)
    return -total


@dataclass(frozen=True)
class PairDensity:
    """Reduced density matrix over the basis {|x>, |x+2>}, unnormalized:
    diagonal entries are the two position populations."""

    x: int
    rho: np.ndarray


def _walker_amplitudes(source) -> dict[int, complex]:
    if isinstance(source, WalkerState):
        amps = {}
        for x, (a, b) in source.amplitudes.items():
            if abs(b) > 1e-9:
                raise MustDisentangleError(
                    f"coin amplitude |b({x})| = {abs(b)!r}; apply the "
                    f"disentangling layer before purity analysis"
                )
            amps[x] = a
        return amps
    return {int(x): complex(a) for x, a in source.items()}


def pair_density(source, x: int, gamma: float = 1.0, via: str = "direct") -> PairDensity:
    """Density matrix of the pair {x, x+2} of a disentangled state.

    ``source`` is a WalkerState with the coin factored to |0>, or a map
    from position to walker amplitude. ``gamma`` scales the off-diagonal
    coherence (1 = pure, the ensemble-averaged dephasing factor
    otherwise). ``via`` selects the construction: "direct" algebra or the
    "tomography" emulation of the merged-pulse polarization measurement.
    """
    amps = _walker_amplitudes(source)
    if x not in amps and x + 2 not in amps:
        raise DomainError(f"neither {x} nor {x + 2} is occupied")
    c1 = amps.get(x, 0j)
    c2 = amps.get(x + 2, 0j)
    if via == "direct":
        rho = np.array(
            [
                [abs(c1) ** 2, gamma * c1 * c2.conjugate()],
                [gamma * c2 * c1.conjugate(), abs(c2) ** 2],
            ]
        )
    elif via == "tomography":
        rho = _tomography_pair_density(c1, c2, gamma)
    else:
        raise DomainError(f"unknown construction {via!r}")
    return PairDensity(x=x, rho=rho)


def _tomography_pair_density(c1: complex, c2: complex, gamma: float) -> np.ndarray:
    """Reconstruct the pair density matrix from four projection outcomes.

    Emulates the experimental route: a NOT on the earlier pulse maps
    |x> to the V polarization and |x+2> stays H, the shift merges both
    into one pulse, and polarization tomography on the four bases
    {H, V, H+V, H-iV} recovers the matrix.
    """
    # Polarization-encoded pair state: alpha_H carries x+2, alpha_V carries x.
    rho_hh = abs(c2) ** 2
    rho_vv = abs(c1) ** 2
    rho_hv = gamma * c2 * c1.conjugate()
    s = rho_hh + rho_vv
    # Born-rule outcomes of the four projections (unnormalized counts).
    p_h = rho_hh
    p_v = rho_vv
    p_d = 0.5 * s + rho_hv.real  # project onto (|H> + |V>)/sqrt(2)
    p_l = 0.5 * s + rho_hv.imag  # project onto (|H> - i|V>)/sqrt(2)
    # Invert: the four outcomes determine the polarization matrix.
    off = (p_d - 0.5 * s) + 1j * (p_l - 0.5 * s)
    return np.array([[p_v, off.conjugate()], [off, p_h]])


@dataclass(frozen=True)
class PurityRecord:
    """One pair of the purity criterion: lhs = |rho_{x,x+2}|^2 against
    rhs = rho_{x,x} rho_{x+2,x+2}."""

    x: int
    lhs: float
    rhs: float
    passed: bool


def purity_criterion(
    source,
    gamma: float = 1.0,
    tol: float = 1e-9,
    via: str = "direct",
) -> list[PurityRecord]:
    """Evaluate the pairwise purity equality over all neighboring pairs.

    A pair passes when lhs >= rhs - tol (lhs never exceeds rhs, so the
    one-sided test captures equality). ``tol`` should be widened to three
    propagated standard errors when the matrix comes from finite counts.
    """
    amps = _walker_amplitudes(source)
    records = []
    for x in sorted(amps)[:-1]:
        if x + 2 not in amps:
            continue
        pd = pair_density(amps, x, gamma=gamma, via=via)
        lhs = float(abs(pd.rho[0, 1]) ** 2)
        rhs = float(abs(pd.rho[0, 0]) * abs(pd.rho[1, 1]))
        records.append(PurityRecord(x=x, lhs=lhs, rhs=rhs, passed=lhs >= rhs - tol))
    return records


@dataclass(frozen=True)
class BitExtraction:
    bits: str
    bits_per_sample: int
    n_accepted: int
    n_rejected: int


def extract_bits(samples: Iterable[int], t: int) -> BitExtraction:
    """Map measured positions of a t-step walk to fixed-width bit strings.

    Positions index ascending from -t. When t+1 is a power of two every
    sample yields log2(t+1) bits; otherwise samples with index at or
    above the largest power of two are rejected (unbiased, no
    post-processing on accepted samples).
    """
    if t < 1:
        raise DomainError(f"step count must be >= 1, got {t}")
    width = int(math.floor(math.log2(t + 1)))
    cap = 1 << width
    chunks = []
    rejected = 0
    for x in samples:
        if abs(x) > t or (x - t) % 2 != 0:
            raise DomainError(f"position {x} outside the step-{t} support")
        idx = (x + t) // 2
        if idx >= cap:
            rejected += 1
            continue
        chunks.append(format(idx, f"0{width}b"))
    return BitExtraction(
        bits="".join(chunks),
        bits_per_sample=width,
        n_accepted=len(chunks),
        n_rejected=rejected,
    )
