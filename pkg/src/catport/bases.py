"""Measurement-basis families over qudit registers.

Four building blocks: generalized Bell pairs, the single-qudit Fourier
("pi") basis, three-slot GHZ states, and barred variants in which one slot
is a block of repeated digits. Families that only span a digit-string
sector (barred, block-GHZ) are completed to a full orthonormal basis by
appending the computational kets outside that sector; those kets are
already orthonormal and orthogonal to the sector, so no re-orthogonalization
step is needed.

All phases follow the single convention exp(+2*pi*i*x/d); conjugations
enter only through inner products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Union

import numpy as np

from .core import (
    PureState,
    RangeError,
    RegisterShape,
    digit_table,
    tensor,
    unit_phase,
)


def _check_component(value: int, d: int, name: str) -> int:
    if not 0 <= value < d:
        raise RangeError(f"{name}={value} outside [0, {d})")
    return value


@dataclass(frozen=True)
class BellLabel:
    """Two-qudit Bell outcome: phase index ``n`` and digit shift ``m``."""

    n: int
    m: int

    def __post_init__(self):
        if self.n < 0 or self.m < 0:
            raise RangeError(f"negative label component in {self}")

    def sort_key(self) -> tuple:
        return (0, self.n, self.m)

    def to_json(self) -> dict:
        return {"kind": "bell", "n": self.n, "m": self.m}

    def __str__(self):
        return f"bell({self.n},{self.m})"


@dataclass(frozen=True)
class PiLabel:
    """Single-qudit Fourier-basis outcome."""

    alpha: int

    def __post_init__(self):
        if self.alpha < 0:
            raise RangeError(f"negative label component in {self}")

    def sort_key(self) -> tuple:
        return (0, self.alpha)

    def to_json(self) -> dict:
        return {"kind": "pi", "alpha": self.alpha}

    def __str__(self):
        return f"pi({self.alpha})"


@dataclass(frozen=True)
class GhzLabel:
    """Three-slot GHZ outcome with slot shifts ``n``, ``m`` and phase index ``k``."""

    n: int
    m: int
    k: int

    def __post_init__(self):
        if self.n < 0 or self.m < 0 or self.k < 0:
            raise RangeError(f"negative label component in {self}")

    def sort_key(self) -> tuple:
        return (0, self.n, self.m, self.k)

    def to_json(self) -> dict:
        return {"kind": "ghz", "n": self.n, "m": self.m, "k": self.k}

    def __str__(self):
        return f"ghz({self.n},{self.m},{self.k})"


@dataclass(frozen=True)
class ComplementLabel:
    """A computational ket completing a sector family to a full basis."""

    digits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(q) for q in self.digits))
        if any(q < 0 for q in self.digits):
            raise RangeError(f"negative digit in {self}")

    def sort_key(self) -> tuple:
        return (1, *self.digits)

    def to_json(self) -> dict:
        return {"kind": "complement", "digits": list(self.digits)}

    def __str__(self):
        return "ket(" + ",".join(str(q) for q in self.digits) + ")"


@dataclass(frozen=True)
class JointLabel:
    """Product outcome: per-qudit Fourier results followed by a collective block."""

    alphas: tuple[int, ...]
    tail: Union[BellLabel, ComplementLabel]

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(int(a) for a in self.alphas))
        if any(a < 0 for a in self.alphas):
            raise RangeError(f"negative Fourier outcome in {self}")

    def sort_key(self) -> tuple:
        return (*self.tail.sort_key(), *self.alphas)

    def to_json(self) -> dict:
        return {"kind": "joint", "alphas": list(self.alphas), "tail": self.tail.to_json()}

    def __str__(self):
        pis = "*".join(f"pi({a})" for a in self.alphas)
        return f"{pis}*{self.tail}" if pis else str(self.tail)


BasisLabel = Union[BellLabel, PiLabel, GhzLabel, ComplementLabel, JointLabel]


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    """Ordered family of labeled states covering a register.

    Construction checks cardinality and shapes only; numeric certification
    of orthonormality and completeness is the job of
    :func:`verify_orthonormal_complete` (so deliberately corrupted bases can
    be built and diagnosed).
    """

    shape: RegisterShape
    states: tuple[tuple[BasisLabel, PureState], ...]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        if len(self.states) != self.shape.total:
            raise ValueError(
                f"basis needs {self.shape.total} states, got {len(self.states)}"
            )
        for _, state in self.states:
            if state.shape != self.shape:
                raise ValueError("basis state shape disagrees with basis register")

    def labels(self) -> list[BasisLabel]:
        return [label for label, _ in self.states]

    def matrix(self) -> np.ndarray:
        """States stacked as rows: (count, dim)."""
        return np.stack([s.amps for _, s in self.states])


@dataclass(frozen=True)
class BasisReport:
    max_gram_error: float
    max_completeness_error: float


def bell_basis_state(d: int, label: BellLabel) -> PureState:
    """Two-qudit state with amplitude exp(2*pi*i*j*n/d)/sqrt(d) on (j, j+m)."""
    n = _check_component(label.n, d, "n")
    m = _check_component(label.m, d, "m")
    shape = RegisterShape(d, 2)
    amps = np.zeros(shape.total, dtype=np.complex128)
    for j in range(d):
        amps[j * d + (j + m) % d] = unit_phase(j * n, d) / math.sqrt(d)
    return PureState(shape, amps)


def pi_basis_state(d: int, label: PiLabel) -> PureState:
    """Fourier basis state with amplitude exp(2*pi*i*alpha*beta/d)/sqrt(d) on |beta>."""
    alpha = _check_component(label.alpha, d, "alpha")
    shape = RegisterShape(d, 1)
    amps = np.array(
        [unit_phase(alpha * beta, d) / math.sqrt(d) for beta in range(d)],
        dtype=np.complex128,
    )
    return PureState(shape, amps)


def ghz_basis_state(d: int, label: GhzLabel) -> PureState:
    """Three-qudit state on digits (j, j+n, j+m) with phase exp(2*pi*i*j*(n+k)/d)."""
    return block_ghz_basis_state(d, 2, label)


def block_ghz_basis_state(d: int, m: int, label: GhzLabel) -> PureState:
    """GHZ state whose middle slot is a block of ``m - 1`` repeated digits.

    Lives on ``m + 1`` qudits: digits (j, (j+n)*(m-1 times), (j+m_shift)),
    each with phase exp(2*pi*i*j*(n+k)/d)/sqrt(d). For ``m = 2`` this is the
    plain three-slot GHZ state.
    """
    if m < 2:
        raise ValueError(f"block GHZ states need m >= 2, got {m}")
    n = _check_component(label.n, d, "n")
    m_shift = _check_component(label.m, d, "m")
    k = _check_component(label.k, d, "k")
    shape = RegisterShape(d, m + 1)
    amps = np.zeros(shape.total, dtype=np.complex128)
    for j in range(d):
        digits = (j,) + ((j + n) % d,) * (m - 1) + ((j + m_shift) % d,)
        index = 0
        for q in digits:
            index = index * d + q
        amps[index] = unit_phase(j * (n + k), d) / math.sqrt(d)
    return PureState(shape, amps)


def barred_bell_basis_state(d: int, m: int, label: BellLabel) -> PureState:
    """Bell state whose first slot is a block of ``m`` repeated digits.

    Lives on ``m + 1`` qudits: amplitude exp(2*pi*i*j*n/d)/sqrt(d) on
    (j, ..., j, (j+m_shift) mod d). For ``m = 1`` it coincides with
    :func:`bell_basis_state`.
    """
    if m < 1:
        raise ValueError(f"barred Bell states need m >= 1, got {m}")
    n = _check_component(label.n, d, "n")
    m_shift = _check_component(label.m, d, "m")
    shape = RegisterShape(d, m + 1)
    amps = np.zeros(shape.total, dtype=np.complex128)
    for j in range(d):
        digits = (j,) * m + ((j + m_shift) % d,)
        index = 0
        for q in digits:
            index = index * d + q
        amps[index] = unit_phase(j * n, d) / math.sqrt(d)
    return PureState(shape, amps)


class BasisFamily(Enum):
    BELL = "bell"
    PI = "pi"
    GHZ = "ghz"
    BELL_PROTOCOL_JOINT = "bell_protocol_joint"
    GHZ_PROTOCOL_JOINT = "ghz_protocol_joint"
    BARRED = "barred"


def _complement_kets(shape: RegisterShape, block_axes: slice):
    """Computational kets whose block digits are not all equal, in lex order.

    These are exactly the kets outside the repeated-digit sector, so they
    are orthonormal and orthogonal to every sector state; appending them is
    the (here trivial) Gram-Schmidt completion.
    """
    digits, _ = digit_table(shape.d, shape.num_qudits)
    out = []
    for index in range(shape.total):
        block = digits[index, block_axes]
        if np.all(block == block[0]):
            continue
        amps = np.zeros(shape.total, dtype=np.complex128)
        amps[index] = 1.0
        out.append((ComplementLabel(tuple(int(q) for q in digits[index])), PureState(shape, amps)))
    return out


def _barred_block(d: int, m: int) -> list[tuple[BasisLabel, PureState]]:
    """Barred Bell family over m+1 qudits plus its computational complement."""
    states: list[tuple[BasisLabel, PureState]] = [
        (BellLabel(n, ms), barred_bell_basis_state(d, m, BellLabel(n, ms)))
        for n, ms in product(range(d), repeat=2)
    ]
    shape = RegisterShape(d, m + 1)
    states.extend(_complement_kets(shape, slice(0, m)))
    states.sort(key=lambda item: item[0].sort_key())
    return states


def _ghz_joint_block(d: int, m: int) -> list[tuple[BasisLabel, PureState]]:
    """Block-GHZ family over m+1 qudits plus its computational complement."""
    states: list[tuple[BasisLabel, PureState]] = [
        (GhzLabel(n, ms, k), block_ghz_basis_state(d, m, GhzLabel(n, ms, k)))
        for n, ms, k in product(range(d), repeat=3)
    ]
    shape = RegisterShape(d, m + 1)
    if m >= 3:
        states.extend(_complement_kets(shape, slice(1, m)))
    states.sort(key=lambda item: item[0].sort_key())
    return states


def joint_pi_barred_basis(d: int, num_pi: int, barred_m: int) -> MeasurementBasis:
    """Product family: ``num_pi`` Fourier slots, then a barred Bell block.

    Covers ``num_pi + barred_m + 1`` qudits. Labels are :class:`JointLabel`
    with the block outcome (Bell or complement ket) as tail.
    """
    block = _barred_block(d, barred_m)
    if num_pi == 0:
        states = [(JointLabel((), label), state) for label, state in block]
    else:
        pi_states = [pi_basis_state(d, PiLabel(a)) for a in range(d)]
        states = []
        for alphas in product(range(d), repeat=num_pi):
            prefix = pi_states[alphas[0]]
            for a in alphas[1:]:
                prefix = tensor(prefix, pi_states[a])
            for label, state in block:
                states.append((JointLabel(alphas, label), tensor(prefix, state)))
    states.sort(key=lambda item: item[0].sort_key())
    shape = RegisterShape(d, num_pi + barred_m + 1)
    return MeasurementBasis(shape, tuple(states))


def build_basis(family: BasisFamily, d: int, m: int | None = None) -> MeasurementBasis:
    """Construct a complete family with deterministic label ordering.

    ``m`` is the particle count of the repeated-digit block and is required
    for the joint and barred families, and must be omitted for the
    fixed-size ones.
    """
    fixed = family in (BasisFamily.BELL, BasisFamily.PI, BasisFamily.GHZ)
    if fixed and m is not None:
        raise ValueError(f"{family.value} takes no particle count")
    if not fixed and (m is None or m < 1):
        raise ValueError(f"{family.value} needs a particle count m >= 1")

    if family is BasisFamily.BELL:
        states = [
            (BellLabel(n, ms), bell_basis_state(d, BellLabel(n, ms)))
            for n, ms in product(range(d), repeat=2)
        ]
        return MeasurementBasis(RegisterShape(d, 2), tuple(states))
    if family is BasisFamily.PI:
        states = [(PiLabel(a), pi_basis_state(d, PiLabel(a))) for a in range(d)]
        return MeasurementBasis(RegisterShape(d, 1), tuple(states))
    if family is BasisFamily.GHZ:
        states = [
            (GhzLabel(n, ms, k), ghz_basis_state(d, GhzLabel(n, ms, k)))
            for n, ms, k in product(range(d), repeat=3)
        ]
        return MeasurementBasis(RegisterShape(d, 3), tuple(states))
    if family is BasisFamily.BELL_PROTOCOL_JOINT:
        return joint_pi_barred_basis(d, m - 1, 1)
    if family is BasisFamily.GHZ_PROTOCOL_JOINT:
        if m < 2:
            raise ValueError("the GHZ joint family needs m >= 2")
        return MeasurementBasis(RegisterShape(d, m + 1), tuple(_ghz_joint_block(d, m)))
    if family is BasisFamily.BARRED:
        return MeasurementBasis(RegisterShape(d, m + 1), tuple(_barred_block(d, m)))
    raise ValueError(f"unknown basis family {family!r}")


def verify_orthonormal_complete(basis: MeasurementBasis) -> BasisReport:
    """Certify a family numerically; reports errors, never raises.

    ``max_gram_error`` is max |<v_i|v_j> - delta_ij|; ``max_completeness_error``
    is the largest entry of |sum_i |v_i><v_i| - identity|.
    """
    v = basis.matrix()
    eye = np.eye(v.shape[0])
    gram = v.conj() @ v.T
    completeness = v.T @ v.conj()
    return BasisReport(
        max_gram_error=float(np.abs(gram - eye).max()),
        max_completeness_error=float(np.abs(completeness - np.eye(v.shape[1])).max()),
    )
