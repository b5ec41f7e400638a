"""Classical motion in a constant magnetic field.

The momentum obeys a linear equation ``p' = K p`` with a constant matrix, so
the flow has a closed form through the matrix exponential; a classical
Runge-Kutta integrator is kept alongside as an independent cross-check.  The
dual momentum ``p - (q/c) H x`` is an integral of the motion for every metric,
and in the block basis it locates the centers of the cyclotron orbits.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .canonical import CanonicalForm, to_canonical
from .tensors import FieldTensor, MetricTensor, PhysicalConstants, _frozen

__all__ = [
    "ParticleState",
    "DynamicsMatrix",
    "OrbitDecomposition",
    "dynamics_matrix",
    "evolve_exact",
    "evolve_exact_trajectory",
    "evolve_rk4",
    "dual_momentum_value",
    "kinetic_energy",
    "orbit_decomposition",
    "write_trajectory_csv",
]


@dataclass(frozen=True, eq=False)
class ParticleState:
    """Position, covariant kinetic momentum, and time of one classical particle."""

    position: np.ndarray
    momentum: np.ndarray
    time: float = 0.0

    def __post_init__(self) -> None:
        x = np.array(self.position, dtype=float).reshape(-1)
        p = np.array(self.momentum, dtype=float).reshape(-1)
        if x.size != p.size:
            raise ValueError("position and momentum must have the same dimension")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(p)) and np.isfinite(self.time)):
            raise ValueError("particle state entries must be finite")
        object.__setattr__(self, "position", _frozen(x))
        object.__setattr__(self, "momentum", _frozen(p))
        object.__setattr__(self, "time", float(self.time))

    @property
    def n(self) -> int:
        return self.position.size


@dataclass(frozen=True, eq=False)
class DynamicsMatrix:
    """Generator ``K = (q / m c) H g^{-1}`` of the momentum flow ``p' = K p``."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"dynamics matrix must be square, got shape {m.shape}")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class OrbitDecomposition:
    """Split of one state into orbit centers, relative coordinates, and free motion.

    ``centers`` and ``relatives`` hold one coordinate pair per block, expressed
    in the decomposition basis and carrying the same ``c/q`` rescaling as the
    block equations; their sum reproduces the in-block canonical position.
    Energies are physical (no rescaling) and sum to the kinetic energy whenever
    the metric is the identity.
    """

    centers: np.ndarray
    relatives: np.ndarray
    free_velocity: np.ndarray
    block_energies: np.ndarray
    free_energy: float

    def __post_init__(self) -> None:
        for name, width in (("centers", 2), ("relatives", 2)):
            arr = np.array(getattr(self, name), dtype=float).reshape(-1, width)
            object.__setattr__(self, name, _frozen(arr))
        for name in ("free_velocity", "block_energies"):
            arr = np.array(getattr(self, name), dtype=float).reshape(-1)
            object.__setattr__(self, name, _frozen(arr))
        object.__setattr__(self, "free_energy", float(self.free_energy))

    @property
    def num_blocks(self) -> int:
        return self.centers.shape[0]


def dynamics_matrix(field: FieldTensor, metric: MetricTensor,
                    constants: PhysicalConstants) -> DynamicsMatrix:
    """Assemble ``K = (q / m c) H g^{-1}`` so that ``p' = K p``, ``x' = g^{-1} p / m``."""
    if field.n != metric.n:
        raise ValueError(f"field is {field.n}x{field.n} but the metric is {metric.n}x{metric.n}")
    factor = constants.charge / (constants.mass * constants.light_speed)
    return DynamicsMatrix(factor * (field.matrix @ metric.inverse))


def _step_maps(kmat: np.ndarray, dt: float) -> tuple[np.ndarray, np.ndarray]:
    # Van Loan augmented exponential: the top-right block of
    # expm(dt * [[K, I], [0, 0]]) is the integral of expm(s K) over [0, dt].
    # No inverse of K appears, so singular K (free directions) needs no care.
    n = kmat.shape[0]
    aug = np.zeros((2 * n, 2 * n))
    aug[:n, :n] = dt * kmat
    aug[:n, n:] = dt * np.eye(n)
    full = expm(aug)
    return full[:n, :n], full[:n, n:]


def evolve_exact(state: ParticleState, k: DynamicsMatrix, metric: MetricTensor,
                 constants: PhysicalConstants, dt: float) -> ParticleState:
    """Advance a state by ``dt`` using the closed-form flow.

    Exact up to matrix-exponential accuracy; there is no step-size error, and
    ``dt`` may be negative.
    """
    if not np.isfinite(dt):
        raise ValueError("dt must be finite")
    prop, integral = _step_maps(k.matrix, dt)
    new_p = prop @ state.momentum
    new_x = state.position + metric.inverse @ (integral @ state.momentum) / constants.mass
    return ParticleState(new_x, new_p, state.time + dt)


def evolve_exact_trajectory(state: ParticleState, k: DynamicsMatrix, metric: MetricTensor,
                            constants: PhysicalConstants, dt: float,
                            steps: int) -> list[ParticleState]:
    """Sample the closed-form flow at ``steps`` uniform increments of ``dt``.

    The propagator is built once and iterated, so each sample costs one
    matrix-vector product pair.  Returns ``steps + 1`` states, the input first.
    """
    if not np.isfinite(dt):
        raise ValueError("dt must be finite")
    if steps < 1:
        raise ValueError("steps must be at least 1")
    prop, integral = _step_maps(k.matrix, dt)
    ginv_over_m = metric.inverse / constants.mass
    out = [state]
    x, p = state.position, state.momentum
    for i in range(steps):
        x = x + ginv_over_m @ (integral @ p)
        p = prop @ p
        out.append(ParticleState(x, p, state.time + (i + 1) * dt))
    return out


def evolve_rk4(state: ParticleState, k: DynamicsMatrix, metric: MetricTensor,
               constants: PhysicalConstants, dt: float, steps: int) -> list[ParticleState]:
    """Classic fourth-order Runge-Kutta reference trajectory.

    Returns ``steps + 1`` states including the initial one.  Kept independent
    of :func:`evolve_exact` so the two can cross-validate each other.
    """
    if not (np.isfinite(dt) and dt > 0):
        raise ValueError("dt must be positive")
    if steps < 1:
        raise ValueError("steps must be at least 1")
    kmat = k.matrix
    ginv_over_m = metric.inverse / constants.mass
    x, p = state.position, state.momentum
    out = [state]
    for i in range(steps):
        k1p = kmat @ p
        k1x = ginv_over_m @ p
        p2 = p + 0.5 * dt * k1p
        k2p = kmat @ p2
        k2x = ginv_over_m @ p2
        p3 = p + 0.5 * dt * k2p
        k3p = kmat @ p3
        k3x = ginv_over_m @ p3
        p4 = p + dt * k3p
        k4p = kmat @ p4
        k4x = ginv_over_m @ p4
        x = x + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        p = p + (dt / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        out.append(ParticleState(x, p, state.time + (i + 1) * dt))
    return out


def dual_momentum_value(state: ParticleState, field: FieldTensor,
                        constants: PhysicalConstants) -> np.ndarray:
    """Conserved dual momentum ``p - (q/c) H x`` of a classical state."""
    return state.momentum - constants.coupling * (field.matrix @ state.position)


def kinetic_energy(state: ParticleState, metric: MetricTensor,
                   constants: PhysicalConstants) -> float:
    """Kinetic energy ``g^{jk} p_j p_k / 2m``."""
    p = state.momentum
    return float(p @ metric.inverse @ p) / (2.0 * constants.mass)


def orbit_decomposition(state: ParticleState, form: CanonicalForm, field: FieldTensor,
                        constants: PhysicalConstants) -> OrbitDecomposition:
    """Split a state into orbit centers, relative coordinates, and free motion.

    Per block the center comes from the conserved dual momentum pair and the
    relative coordinate from the kinetic one, each rotated a quarter turn and
    divided by the block strength; the geometric reading (fixed center, rigidly
    rotating relative vector) holds when the dynamical metric equals the form
    the decomposition was orthonormalized against.  The formulas are evaluated
    verbatim regardless, so callers decide how to label the result.
    """
    coords = to_canonical(form, state, field, constants)
    raw = form.basis.T @ state.momentum  # physical momenta, no c/q rescaling
    nb = form.num_blocks
    mass = constants.mass
    centers = np.zeros((nb, 2))
    relatives = np.zeros((nb, 2))
    block_energies = np.zeros(nb)
    for l, s in enumerate(form.strengths):
        lead, trail = 2 * l, 2 * l + 1
        centers[l] = (coords.dual_momentum[trail] / s, -coords.dual_momentum[lead] / s)
        relatives[l] = (-coords.momentum[trail] / s, coords.momentum[lead] / s)
        block_energies[l] = (raw[lead] ** 2 + raw[trail] ** 2) / (2.0 * mass)
    tail = raw[2 * nb:]
    return OrbitDecomposition(
        centers=centers,
        relatives=relatives,
        free_velocity=tail / mass,
        block_energies=block_energies,
        free_energy=float(tail @ tail) / (2.0 * mass),
    )


def write_trajectory_csv(states: list[ParticleState], field: FieldTensor,
                         metric: MetricTensor, constants: PhysicalConstants,
                         stream) -> None:
    """Write a trajectory as CSV: ``t, x1..xn, p1..pn, pT1..pTn, E_total``.

    Numbers are rendered with 17 significant digits so the file round-trips
    bit-faithfully.
    """
    n = states[0].n if states else 0
    header = (["t"] + [f"x{i + 1}" for i in range(n)] + [f"p{i + 1}" for i in range(n)]
              + [f"pT{i + 1}" for i in range(n)] + ["E_total"])
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    for st in states:
        dual = dual_momentum_value(st, field, constants)
        energy = kinetic_energy(st, metric, constants)
        row = np.concatenate(([st.time], st.position, st.momentum, dual, [energy]))
        writer.writerow([f"{value:.17g}" for value in row])
