"""Quantum structure of the motion.

Each nonzero block of the decomposed field tensor quantizes into an evenly
spaced oscillator ladder; the free directions contribute a continuum.  The
energy spectrum is therefore fully discrete exactly when the blocks exhaust
every dimension, which cannot happen in odd dimension.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .canonical import CanonicalForm
from .tensors import MetricTensor, PhysicalConstants, _frozen

__all__ = [
    "SpectrumReport",
    "cyclotron_frequencies",
    "landau_level",
    "classify_spectrum",
    "level_listing",
]


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    """Frequencies and discreteness classification of one field configuration.

    ``fully_discrete`` is ``None`` when the dynamical metric has mixed
    signature: the oscillator reading of the blocks presumes a definite kinetic
    form, so the discrete/continuous label is not applicable there.
    """

    frequencies: np.ndarray
    free_count: int
    fully_discrete: bool | None
    ground_energy: float
    metric_definite: bool = True

    def __post_init__(self) -> None:
        freqs = np.array(self.frequencies, dtype=float).reshape(-1)
        object.__setattr__(self, "frequencies", _frozen(freqs))

    @property
    def num_blocks(self) -> int:
        return int(self.frequencies.size)


def cyclotron_frequencies(form: CanonicalForm,
                          constants: PhysicalConstants) -> np.ndarray:
    """Angular frequency ``|q| s / (m c)`` of each block, descending."""
    return (abs(constants.charge) / (constants.mass * constants.light_speed)) * form.strengths


def landau_level(form: CanonicalForm, constants: PhysicalConstants,
                 quantum_numbers) -> float:
    """Ladder energy ``sum_l hbar w_l (n_l + 1/2)`` for one multi-index."""
    numbers = list(quantum_numbers)
    if len(numbers) != form.num_blocks:
        raise ValueError(f"expected {form.num_blocks} quantum numbers, got {len(numbers)}")
    if any(int(n) != n or n < 0 for n in numbers):
        raise ValueError("quantum numbers must be non-negative integers")
    omegas = cyclotron_frequencies(form, constants)
    return float(constants.hbar * np.sum(omegas * (np.asarray(numbers, dtype=float) + 0.5)))


def classify_spectrum(form: CanonicalForm, constants: PhysicalConstants | None = None,
                      metric: MetricTensor | None = None) -> SpectrumReport:
    """Classify the energy spectrum of one decomposed configuration.

    Discrete ladders come one per block; the remaining directions carry a
    continuum, so the spectrum is fully discrete exactly when there are no
    free directions.  With an indefinite metric the classification is marked
    not applicable instead of being forced to a boolean.
    """
    constants = constants or PhysicalConstants()
    omegas = cyclotron_frequencies(form, constants)
    definite = metric is None or metric.is_definite
    return SpectrumReport(
        frequencies=omegas,
        free_count=form.free_dims,
        fully_discrete=(form.free_dims == 0) if definite else None,
        ground_energy=float(constants.hbar * omegas.sum() / 2.0),
        metric_definite=definite,
    )


def level_listing(form: CanonicalForm, constants: PhysicalConstants,
                  count: int) -> list[dict]:
    """The ``count`` lowest ladder energies with their quantum numbers.

    Best-first search over multi-indices; ties resolve lexicographically so the
    listing is deterministic.  Empty when there are no blocks.
    """
    if form.num_blocks == 0 or count <= 0:
        return []
    omegas = cyclotron_frequencies(form, constants)
    start = (0,) * form.num_blocks
    heap = [(landau_level(form, constants, start), start)]
    seen = {start}
    out: list[dict] = []
    while heap and len(out) < count:
        energy, numbers = heapq.heappop(heap)
        out.append({"energy": energy, "quantum_numbers": list(numbers)})
        for l in range(form.num_blocks):
            succ = numbers[:l] + (numbers[l] + 1,) + numbers[l + 1:]
            if succ not in seen:
                seen.add(succ)
                heapq.heappush(heap, (energy + float(constants.hbar * omegas[l]), succ))
    return out
