"""Two-qubit pure states, Pauli-X observables and x-basis measurement.

Basis order is |00>, |01>, |10>, |11> with Alice's qubit first.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

import numpy as np

INV_SQRT2 = 1.0 / math.sqrt(2.0)
NORM_TOL = 1e-12
MEASURE_NORM_TOL = 1e-9
HERMITIAN_TOL = 1e-12

# Order of the joint x-basis outcomes; index k <-> (a, b).
X_OUTCOMES: Tuple[Tuple[int, int], ...] = ((1, 1), (1, -1), (-1, 1), (-1, -1))


class NormalizationError(ValueError):
    """State amplitudes do not have unit norm."""


class Site(Enum):
    A = "A"
    B = "B"
    JOINT = "joint"


def _check_amplitudes(amps: Sequence[complex]) -> Tuple[complex, ...]:
    values = tuple(complex(z) for z in amps)
    if len(values) != 4:
        raise ValueError(f"two-qubit state needs 4 amplitudes, got {len(values)}")
    for z in values:
        if not (cmath.isfinite(z)):
            raise ValueError(f"non-finite amplitude {z!r}")
    return values


def _norm_sq(amps: Sequence[complex]) -> float:
    return sum(z.real * z.real + z.imag * z.imag for z in amps)


@dataclass(frozen=True)
class StateVector:
    """Normalized two-qubit pure state."""

    amps: Tuple[complex, ...]
    label: Optional[str] = None

    def __post_init__(self):
        amps = _check_amplitudes(self.amps)
        object.__setattr__(self, "amps", amps)
        if abs(_norm_sq(amps) - 1.0) > NORM_TOL:
            raise NormalizationError(f"state norm^2 {_norm_sq(amps)!r} is not 1")

    @classmethod
    def from_unnormalized(cls, amps: Sequence[complex], label: Optional[str] = None) -> "StateVector":
        values = _check_amplitudes(amps)
        norm = math.sqrt(_norm_sq(values))
        if norm == 0.0:
            raise NormalizationError("zero vector cannot be normalized")
        return cls(tuple(z / norm for z in values), label)

    def as_array(self) -> np.ndarray:
        return np.array(self.amps, dtype=complex)

    def norm(self) -> float:
        return math.sqrt(_norm_sq(self.amps))


@dataclass(frozen=True)
class OutcomePair:
    a: int
    b: int

    def __post_init__(self):
        for v in (self.a, self.b):
            if v not in (1, -1):
                raise ValueError(f"outcome must be +1 or -1, got {v!r}")


class TwoQubitObservable:
    """Hermitian 4x4 operator. The matrix is stored read-only."""

    __slots__ = ("matrix", "name")

    def __init__(self, matrix, name: str = ""):
        m = np.array(matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("observable has non-finite entries")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise ValueError("observable is not Hermitian")
        m.setflags(write=False)
        self.matrix = m
        self.name = name

    def __add__(self, other: "TwoQubitObservable") -> "TwoQubitObservable":
        return TwoQubitObservable(self.matrix + other.matrix, f"{self.name}+{other.name}")

    def __matmul__(self, other: "TwoQubitObservable") -> "TwoQubitObservable":
        # Product of two Hermitian operators is Hermitian only if they commute.
        return TwoQubitObservable(self.matrix @ other.matrix, f"{self.name}*{other.name}")

    def __repr__(self):
        return f"TwoQubitObservable({self.name!r})"


_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_I2 = np.eye(2, dtype=complex)


def singlet_state() -> StateVector:
    return StateVector((0.0, INV_SQRT2, -INV_SQRT2, 0.0), "singlet")


def phi_plus_state() -> StateVector:
    return StateVector((INV_SQRT2, 0.0, 0.0, INV_SQRT2), "phi_plus")


def basis_state(index: int) -> StateVector:
    amps = [0.0] * 4
    amps[index] = 1.0
    return StateVector(tuple(amps), format(index, "02b"))


def pauli_x_observable(site: Union[Site, str]) -> TwoQubitObservable:
    site = Site(site)
    if site is Site.A:
        return TwoQubitObservable(np.kron(_SX, _I2), "sx_A")
    if site is Site.B:
        return TwoQubitObservable(np.kron(_I2, _SX), "sx_B")
    return TwoQubitObservable(np.kron(_SX, _SX), "sx_A*sx_B")


def apply(obs: TwoQubitObservable, state: StateVector) -> np.ndarray:
    return obs.matrix @ state.as_array()


def overlap(left: StateVector, right: StateVector) -> complex:
    """Inner product <left|right>."""
    return sum(l.conjugate() * r for l, r in zip(left.amps, right.amps))


def expectation(obs: TwoQubitObservable, state: StateVector) -> float:
    return float(np.vdot(state.as_array(), apply(obs, state)).real)


def eigen_residual(obs: TwoQubitObservable, state: StateVector, eigenvalue: float) -> float:
    return float(np.linalg.norm(apply(obs, state) - eigenvalue * state.as_array()))


def is_eigenstate(obs: TwoQubitObservable, state: StateVector, eigenvalue: float, tol: float = NORM_TOL) -> bool:
    if not tol > 0:
        raise ValueError("tol must be positive")
    return eigen_residual(obs, state, eigenvalue) <= tol


def x_basis_amplitudes(state: StateVector) -> Tuple[complex, ...]:
    """Amplitudes <s_a s_b|state> in the X_OUTCOMES order.

    <s|i> = s**i / sqrt(2) for s = +-1, so each amplitude is
    (1/2) * sum_ij s_a**i s_b**j psi_ij.
    """
    p00, p01, p10, p11 = state.amps
    return tuple(
        0.5 * (p00 + sb * p01 + sa * p10 + sa * sb * p11) for sa, sb in X_OUTCOMES
    )


def x_born_probabilities(state: StateVector) -> Tuple[float, ...]:
    return tuple(z.real * z.real + z.imag * z.imag for z in x_basis_amplitudes(state))


def x_product_state(a: int, b: int, label: Optional[str] = None) -> StateVector:
    """|s_a> (x) |s_b> for x-eigenvalues a, b."""
    return StateVector((0.5, 0.5 * b, 0.5 * a, 0.5 * a * b), label)


def x_plus_probability(state: StateVector, site: Union[Site, str]) -> float:
    """Probability that a local sigma_x measurement at ``site`` gives +1."""
    site = Site(site)
    pp, pm, mp, mm = x_born_probabilities(state)
    if site is Site.A:
        return pp + pm
    if site is Site.B:
        return pp + mp
    raise ValueError("local measurement needs site A or B")


def collapse_x(state: StateVector, site: Union[Site, str], outcome: int) -> StateVector:
    """Post-measurement state after ``site`` observed ``outcome`` in the x basis."""
    site = Site(site)
    if outcome not in (1, -1):
        raise ValueError(f"outcome must be +1 or -1, got {outcome!r}")
    amps = dict(zip(X_OUTCOMES, x_basis_amplitudes(state)))
    if site is Site.A:
        kept = {pair: z for pair, z in amps.items() if pair[0] == outcome}
    elif site is Site.B:
        kept = {pair: z for pair, z in amps.items() if pair[1] == outcome}
    else:
        raise ValueError("local measurement needs site A or B")
    weight = sum(abs(z) ** 2 for z in kept.values())
    if weight == 0.0:
        raise ValueError(f"outcome {outcome:+d} at site {site.value} has zero probability")
    scale = 1.0 / math.sqrt(weight)
    # Back to the computational basis: |s_a s_b> = (1, s_b, s_a, s_a s_b) / 2.
    out = [0j] * 4
    for (sa, sb), z in kept.items():
        z = z * scale
        out[0] += 0.5 * z
        out[1] += 0.5 * sb * z
        out[2] += 0.5 * sa * z
        out[3] += 0.5 * sa * sb * z
    return StateVector.from_unnormalized(out, state.label)


def _pick(probs: Sequence[float], u: float) -> int:
    acc = 0.0
    for k, p in enumerate(probs):
        acc += p
        if u < acc:
            return k
    # u landed past a total a rounding error below 1
    return max(k for k, p in enumerate(probs) if p > 0.0)


def measure_x_pair(state, rng) -> Tuple[OutcomePair, StateVector]:
    """Jointly measure sigma_x on both qubits.

    ``state`` may be a :class:`StateVector` or a raw sequence of four
    amplitudes; raw input whose norm is off by more than 1e-9 is rejected.
    ``rng`` needs a ``random()`` method returning a float in [0, 1).
    """
    if not isinstance(state, StateVector):
        amps = _check_amplitudes(state)
        if abs(math.sqrt(_norm_sq(amps)) - 1.0) > MEASURE_NORM_TOL:
            raise NormalizationError(f"state norm {math.sqrt(_norm_sq(amps))!r} is not 1")
        state = StateVector.from_unnormalized(amps)
    probs = x_born_probabilities(state)
    a, b = X_OUTCOMES[_pick(probs, float(rng.random()))]
    return OutcomePair(a, b), x_product_state(a, b)


def random_state(rng) -> StateVector:
    """Haar-ish random state from four complex Gaussians (used by tests and demos)."""
    z = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    return StateVector.from_unnormalized(z)
