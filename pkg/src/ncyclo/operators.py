"""Exact calculus of affine differential operators.

An operator here is ``scalar + position_coeff . x + momentum_coeff . (-i hbar grad)``.
The commutator of two such operators is a plain number, so it is evaluated in
closed form from the coefficient vectors; no grid, truncation, or operator
application is involved anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensors import FieldTensor, GaugeMatrix, PhysicalConstants

__all__ = [
    "AffineOperator",
    "canonical_momentum",
    "dual_momentum",
    "commutator",
    "translation_phase",
]


@dataclass(frozen=True, eq=False)
class AffineOperator:
    """First-order operator ``scalar + position . x + momentum . (-i hbar grad)``."""

    scalar: complex
    position: np.ndarray
    momentum: np.ndarray
    hbar: float = 1.0

    def __post_init__(self) -> None:
        pos = np.array(self.position, dtype=complex).reshape(-1)
        mom = np.array(self.momentum, dtype=complex).reshape(-1)
        if pos.size != mom.size:
            raise ValueError("position and momentum coefficient vectors differ in length")
        if not (np.isfinite(self.hbar) and self.hbar > 0):
            raise ValueError("hbar must be positive and finite")
        pos.setflags(write=False)
        mom.setflags(write=False)
        object.__setattr__(self, "scalar", complex(self.scalar))
        object.__setattr__(self, "position", pos)
        object.__setattr__(self, "momentum", mom)

    @property
    def n(self) -> int:
        return self.position.size

    def _like(self, other: "AffineOperator") -> None:
        if self.n != other.n:
            raise ValueError(f"operators act on different dimensions ({self.n} vs {other.n})")
        if self.hbar != other.hbar:
            raise ValueError("operators carry different values of hbar")

    def __add__(self, other: "AffineOperator") -> "AffineOperator":
        self._like(other)
        return AffineOperator(self.scalar + other.scalar,
                              self.position + other.position,
                              self.momentum + other.momentum, self.hbar)

    def __sub__(self, other: "AffineOperator") -> "AffineOperator":
        self._like(other)
        return AffineOperator(self.scalar - other.scalar,
                              self.position - other.position,
                              self.momentum - other.momentum, self.hbar)

    def __neg__(self) -> "AffineOperator":
        return AffineOperator(-self.scalar, -self.position, -self.momentum, self.hbar)

    def __mul__(self, factor: complex) -> "AffineOperator":
        return AffineOperator(factor * self.scalar, factor * self.position,
                              factor * self.momentum, self.hbar)

    __rmul__ = __mul__


def canonical_momentum(gauge: GaugeMatrix, constants: PhysicalConstants,
                       index: int) -> AffineOperator:
    """Kinetic momentum component ``-i hbar d_j - (q/c) A[k, j] x^k`` (0-based ``j``)."""
    if not 0 <= index < gauge.n:
        raise IndexError(f"component {index} out of range for dimension {gauge.n}")
    deriv = np.zeros(gauge.n)
    deriv[index] = 1.0
    return AffineOperator(0.0, -constants.coupling * gauge.matrix[:, index],
                          deriv, constants.hbar)


def dual_momentum(gauge: GaugeMatrix, constants: PhysicalConstants,
                  index: int) -> AffineOperator:
    """Conserved dual of :func:`canonical_momentum`.

    Built from the transposed gauge, ``-i hbar d_j - (q/c) A[j, k] x^k``; it
    equals the kinetic momentum minus ``(q/c) H[j, k] x^k`` componentwise and
    generates magnetic translations.
    """
    if not 0 <= index < gauge.n:
        raise IndexError(f"component {index} out of range for dimension {gauge.n}")
    deriv = np.zeros(gauge.n)
    deriv[index] = 1.0
    return AffineOperator(0.0, -constants.coupling * gauge.matrix[index, :],
                          deriv, constants.hbar)


def commutator(op1: AffineOperator, op2: AffineOperator) -> complex:
    """Central value of ``[O1, O2]`` for affine operators.

    Only the cross terms between a position coefficient and an elementary
    momentum survive, giving the exact scalar
    ``i hbar (position1 . momentum2 - momentum1 . position2)``.
    """
    op1._like(op2)
    return 1j * op1.hbar * complex(op1.position @ op2.momentum - op1.momentum @ op2.position)


def translation_phase(x, y, field: FieldTensor, constants: PhysicalConstants) -> float:
    """Composition phase of two magnetic translations.

    The translations are the unitaries generated by the conserved dual momenta.
    Because the generators' commutators are plain numbers, the
    Baker-Campbell-Hausdorff series terminates after the first bracket, and
    composing translations by ``x`` and ``y`` equals the translation by
    ``x + y`` times ``exp(i phi)`` with ``phi = (q / (2 hbar c)) x . H . y``.
    Antisymmetric in its arguments.
    """
    xv = np.asarray(x, dtype=float).reshape(-1)
    yv = np.asarray(y, dtype=float).reshape(-1)
    if xv.size != field.n or yv.size != field.n:
        raise ValueError("translation vectors must match the field dimension")
    return float(constants.charge / (2.0 * constants.hbar * constants.light_speed)
                 * (xv @ field.matrix @ yv))
