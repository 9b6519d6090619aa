"""End-to-end teleportation protocols for cat-like states.

A protocol run composes the unknown cat state with the shared maximally
entangled chain, measures the sender's ``m + 1`` qudits in a family chosen
by the protocol kind, and applies an outcome-dependent monomial correction
on the receiver's ``m`` qudits.

Protocol kinds and their sender measurements:

* ``BELL``    - per-qudit Fourier measurements on particles 1..m-1 plus a
  Bell-pair measurement on particles (m, m+1).
* ``GHZ``     - one collective block-GHZ measurement on all m+1 particles.
* ``BARRED``  - one collective barred-Bell measurement on all m+1 particles
  (the block-GHZ family folded onto its reachable sector).
* ``HYBRID``  - Fourier measurements on particles 1..k-2 plus a barred-Bell
  measurement on the remaining m-k+3 particles; k=2 reproduces BARRED and
  k=m+1 reproduces BELL.

Every correction has the same shape: shift every receiver digit down by the
outcome's ``m`` index and rephase the repeated-digit sector by the outcome's
total phase exponent. Branch states only ever occupy that sector, so the
off-sector extension (a plain digit shift) is unobservable but keeps the
operator unitary on the whole space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional

import numpy as np

from . import bases
from .bases import (
    BasisLabel,
    BellLabel,
    ComplementLabel,
    GhzLabel,
    JointLabel,
    MeasurementBasis,
)
from .core import (
    DEFAULT_MAX_DIM,
    CatState,
    PureState,
    RegisterShape,
    ShapeMismatchError,
    cat_sector_indices,
    cat_to_pure_state,
    digit_table,
    inner,
    tensor,
    uniform_superposition_chain,
)

PROB_FLOOR = 1e-12


class ProtocolKind(Enum):
    BELL = "bell"
    GHZ = "ghz"
    BARRED = "barred"
    HYBRID = "hybrid"


_KIND_ORDER = {
    ProtocolKind.BELL: 0,
    ProtocolKind.GHZ: 1,
    ProtocolKind.BARRED: 2,
    ProtocolKind.HYBRID: 3,
}


@dataclass(frozen=True)
class ProtocolSpec:
    """Which protocol to run, for which local dimension and particle count."""

    kind: ProtocolKind
    d: int
    m: int
    hybrid_k: Optional[int] = None

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"local dimension must be >= 2, got {self.d}")
        if self.m < 1:
            raise ValueError(f"need at least one particle, got {self.m}")
        if self.kind is ProtocolKind.HYBRID:
            if self.hybrid_k is None:
                raise ValueError("hybrid protocols need hybrid_k")
            if not 2 <= self.hybrid_k <= self.m + 1:
                raise ValueError(
                    f"hybrid_k={self.hybrid_k} outside [2, {self.m + 1}]"
                )
        elif self.hybrid_k is not None:
            raise ValueError(f"{self.kind.value} takes no hybrid_k")
        if self.kind is ProtocolKind.GHZ and self.m < 2:
            raise ValueError("the GHZ protocol needs m >= 2")


class MonomialOperator:
    """Unitary with one nonzero unit-modulus entry per row and column.

    Acts as ``U|s> = exp(2*pi*i*phase_exp[s]/d) |perm[s]>``. The permutation
    and the integer phase exponents fully determine the operator, so
    adjoints and compositions are computed in exact integer arithmetic.
    """

    __slots__ = ("d", "num_qudits", "perm", "phase_exp", "_factors")

    def __init__(self, d: int, num_qudits: int, perm, phase_exp):
        perm = np.asarray(perm, dtype=np.int64)
        phase_exp = np.mod(np.asarray(phase_exp, dtype=np.int64), d)
        total = d ** num_qudits
        if perm.shape != (total,) or phase_exp.shape != (total,):
            raise ShapeMismatchError("permutation/phase tables must cover the register")
        if perm.min() < 0 or perm.max() >= total:
            raise ValueError("digit map targets outside the register")
        if np.bincount(perm, minlength=total).max() != 1:
            raise ValueError("digit map is not a bijection")
        perm.setflags(write=False)
        phase_exp.setflags(write=False)
        self.d = d
        self.num_qudits = num_qudits
        self.perm = perm
        self.phase_exp = phase_exp
        self._factors = np.exp(2j * np.pi * (phase_exp / d))
        self._factors.setflags(write=False)

    @classmethod
    def identity(cls, d: int, num_qudits: int) -> "MonomialOperator":
        total = d ** num_qudits
        return cls(d, num_qudits, np.arange(total), np.zeros(total, dtype=np.int64))

    def apply(self, state: PureState) -> PureState:
        if state.shape.d != self.d or state.shape.num_qudits != self.num_qudits:
            raise ShapeMismatchError(f"operator acts on (d={self.d}, n={self.num_qudits})")
        out = np.zeros_like(state.amps)
        out[self.perm] = state.amps * self._factors
        return PureState(state.shape, out, normalized=state.normalized)

    def adjoint(self) -> "MonomialOperator":
        inverse = np.empty_like(self.perm)
        inverse[self.perm] = np.arange(self.perm.size)
        phases = np.zeros_like(self.phase_exp)
        phases[self.perm] = -self.phase_exp
        return MonomialOperator(self.d, self.num_qudits, inverse, phases)

    def __matmul__(self, other: "MonomialOperator") -> "MonomialOperator":
        """Composition: ``(a @ b)`` applies ``b`` first."""
        if (self.d, self.num_qudits) != (other.d, other.num_qudits):
            raise ShapeMismatchError("cannot compose operators on different registers")
        return MonomialOperator(
            self.d,
            self.num_qudits,
            self.perm[other.perm],
            other.phase_exp + self.phase_exp[other.perm],
        )

    def is_identity(self) -> bool:
        """Exact structural check, independent of floating point."""
        return bool(
            np.array_equal(self.perm, np.arange(self.perm.size))
            and not self.phase_exp.any()
        )

    def matrix(self) -> np.ndarray:
        total = self.perm.size
        mat = np.zeros((total, total), dtype=np.complex128)
        mat[self.perm, np.arange(total)] = self._factors
        return mat

    def __repr__(self):
        return f"MonomialOperator(d={self.d}, n={self.num_qudits})"


def shift_operator(d: int, amount: int) -> MonomialOperator:
    """Single-qudit shift X**amount: |j> -> |j + amount mod d>."""
    src = np.arange(d)
    return MonomialOperator(d, 1, (src + amount) % d, np.zeros(d, dtype=np.int64))


def clock_operator(d: int, power: int) -> MonomialOperator:
    """Single-qudit clock Z**power: |j> -> exp(2*pi*i*j*power/d) |j>."""
    src = np.arange(d)
    return MonomialOperator(d, 1, src, (src * power) % d)


def monomial_tensor(a: MonomialOperator, b: MonomialOperator) -> MonomialOperator:
    """Tensor product of monomial operators; ``a`` takes the leading qudits."""
    if a.d != b.d:
        raise ShapeMismatchError("cannot tensor operators with different d")
    nb = b.perm.size
    perm = (a.perm[:, None] * nb + b.perm[None, :]).reshape(-1)
    phases = (a.phase_exp[:, None] + b.phase_exp[None, :]).reshape(-1)
    return MonomialOperator(a.d, a.num_qudits + b.num_qudits, perm, phases)


def cat_sector_correction(
    d: int, num_qudits: int, phase_power: int, shift: int
) -> MonomialOperator:
    """Correction mapping |(j+shift)...(j+shift)> to exp(2*pi*i*j*phase_power/d)|j...j>.

    Off the repeated-digit sector the operator shifts every digit down with
    no phase, which keeps it monomial and unitary everywhere.
    """
    digits, powers = digit_table(d, num_qudits)
    target = (digits - shift) % d
    perm = target @ powers
    constant = (digits == digits[:, :1]).all(axis=1)
    phases = np.where(constant, (phase_power * target[:, 0]) % d, 0)
    return MonomialOperator(d, num_qudits, perm, phases)


@dataclass(frozen=True, eq=False)
class OutcomeRecord:
    """One measurement outcome with everything the receiver does about it."""

    label: BasisLabel
    probability: float
    bob_pre_correction: PureState
    correction: MonomialOperator
    bob_post_correction: PureState
    fidelity: float


@dataclass(frozen=True)
class EquivalenceReport:
    max_prob_delta: float
    max_state_delta: float


def compose_joint_state(
    cat: CatState, spec: ProtocolSpec, *, max_dim: int = DEFAULT_MAX_DIM
) -> PureState:
    """Cat state on particles 1..m tensored with the entangled chain on m+1..2m+1.

    The sender holds particles 1..m+1, the receiver m+2..2m+1.
    """
    if (cat.d, cat.m) != (spec.d, spec.m):
        raise ValueError(
            f"cat state (d={cat.d}, m={cat.m}) does not match "
            f"protocol (d={spec.d}, m={spec.m})"
        )
    RegisterShape(spec.d, 2 * spec.m + 1, max_dim=max_dim)
    return tensor(
        cat_to_pure_state(cat, max_dim=max_dim),
        uniform_superposition_chain(spec.d, spec.m + 1, max_dim=max_dim),
    )


@lru_cache(maxsize=32)
def _family_cached(
    kind: ProtocolKind, d: int, m: int, hybrid_k: Optional[int]
) -> MeasurementBasis:
    if kind is ProtocolKind.BELL:
        return bases.build_basis(bases.BasisFamily.BELL_PROTOCOL_JOINT, d, m)
    if kind is ProtocolKind.GHZ:
        return bases.build_basis(bases.BasisFamily.GHZ_PROTOCOL_JOINT, d, m)
    if kind is ProtocolKind.BARRED:
        return bases.build_basis(bases.BasisFamily.BARRED, d, m)
    return bases.joint_pi_barred_basis(d, hybrid_k - 2, m - hybrid_k + 2)


def measurement_family(spec: ProtocolSpec) -> MeasurementBasis:
    """The complete orthonormal family measured on the sender's m+1 qudits."""
    return _family_cached(spec.kind, spec.d, spec.m, spec.hybrid_k)


def _shift_and_phase(spec: ProtocolSpec, label: BasisLabel) -> Optional[tuple[int, int]]:
    """Extract (digit shift, total phase exponent) from an outcome label.

    Returns None for complement outcomes, which occur with probability zero
    and need no correction. Raises if the label cannot belong to the
    protocol's measurement family.
    """
    d = spec.d

    def _bell(tail: BellLabel, extra: int) -> tuple[int, int]:
        if tail.n >= d or tail.m >= d:
            raise ValueError(f"label {tail} outside dimension {d}")
        return tail.m, (tail.n + extra) % d

    if spec.kind is ProtocolKind.GHZ:
        if not isinstance(label, (GhzLabel, ComplementLabel)):
            raise ValueError(f"label {label} does not belong to a GHZ measurement")
        if isinstance(label, ComplementLabel):
            return None
        if max(label.n, label.m, label.k) >= d:
            raise ValueError(f"label {label} outside dimension {d}")
        return label.m, label.k

    if spec.kind is ProtocolKind.BARRED:
        if not isinstance(label, (BellLabel, ComplementLabel)):
            raise ValueError(f"label {label} does not belong to a barred measurement")
        if isinstance(label, ComplementLabel):
            return None
        return _bell(label, 0)

    expected_alphas = spec.m - 1 if spec.kind is ProtocolKind.BELL else spec.hybrid_k - 2
    if not isinstance(label, JointLabel) or len(label.alphas) != expected_alphas:
        raise ValueError(
            f"label {label} does not belong to a {spec.kind.value} measurement"
        )
    if any(a >= d for a in label.alphas):
        raise ValueError(f"label {label} outside dimension {d}")
    if isinstance(label.tail, ComplementLabel):
        return None
    return _bell(label.tail, sum(label.alphas))


@lru_cache(maxsize=200_000)
def correction_for(spec: ProtocolSpec, label: BasisLabel) -> MonomialOperator:
    """Receiver-side unitary for one outcome.

    Complement outcomes never occur, so they get the identity; any unitary
    would do there. Results are memoized; operators are immutable and safe
    to share.
    """
    params = _shift_and_phase(spec, label)
    if params is None:
        return MonomialOperator.identity(spec.d, spec.m)
    shift, phase_power = params
    return cat_sector_correction(spec.d, spec.m, phase_power, shift)


def apply_correction(record: OutcomeRecord) -> PureState:
    """The receiver's state after applying the outcome's correction."""
    return record.correction.apply(record.bob_pre_correction)


def enumerate_outcomes(
    cat: CatState, spec: ProtocolSpec, *, max_dim: int = DEFAULT_MAX_DIM
) -> list[OutcomeRecord]:
    """One record per measurement outcome, in the family's label order.

    Probabilities are squared norms of the projected branches; outcomes at
    or below the probability floor carry a zero pre-correction state and
    fidelity 0.
    """
    joint = compose_joint_state(cat, spec, max_dim=max_dim)
    family = measurement_family(spec)
    target = cat_to_pure_state(cat, max_dim=max_dim)
    bob_shape = RegisterShape(spec.d, spec.m, max_dim=max_dim)

    joint_block = joint.amps.reshape(family.shape.total, bob_shape.total)
    branches = family.matrix().conj() @ joint_block
    probabilities = np.einsum("ij,ij->i", branches.conj(), branches).real

    records = []
    for (label, _), branch, probability in zip(family.states, branches, probabilities):
        correction = correction_for(spec, label)
        if probability > PROB_FLOOR:
            pre = PureState(bob_shape, branch / math.sqrt(probability))
            post = correction.apply(pre)
            fidelity = abs(inner(target, post)) ** 2
        else:
            pre = PureState(bob_shape, np.zeros(bob_shape.total), normalized=False)
            post = pre
            fidelity = 0.0
        records.append(
            OutcomeRecord(
                label=label,
                probability=float(probability),
                bob_pre_correction=pre,
                correction=correction,
                bob_post_correction=post,
                fidelity=float(fidelity),
            )
        )
    return records


def run_protocol(
    cat: CatState, spec: ProtocolSpec, seed: int, *, max_dim: int = DEFAULT_MAX_DIM
) -> OutcomeRecord:
    """Sample one outcome by inverse CDF over the label-ordered records.

    Deterministic for a fixed seed; zero-probability outcomes are never
    sampled.
    """
    records = enumerate_outcomes(cat, spec, max_dim=max_dim)
    u = float(np.random.default_rng(seed).random())
    acc = 0.0
    for record in records:
        if record.probability <= 0.0:
            continue
        acc += record.probability
        if u < acc:
            return record
    return next(r for r in reversed(records) if r.probability > 0.0)


def _sector_view(state: PureState) -> tuple[np.ndarray, float]:
    """Amplitudes on the repeated-digit sector plus the leaked off-sector mass."""
    idx = cat_sector_indices(state.shape.d, state.shape.num_qudits)
    on_sector = state.amps[idx]
    mask = np.ones(state.shape.total, dtype=bool)
    mask[idx] = False
    return on_sector, float(np.linalg.norm(state.amps[mask]))


def barred_equivalence_check(
    cat: CatState, d: int, m: int, *, max_dim: int = DEFAULT_MAX_DIM
) -> EquivalenceReport:
    """Compare the collective protocol on m particles against teleporting a
    single d-level particle with the same coefficients.

    Nonzero outcomes map one-to-one: the GHZ label (n=0, m, k) plays the
    role of the single-particle Bell outcome (n=k, m). Probabilities and
    post-correction states (folded through the repeated-digit
    identification) must agree. For m=1 both sides are the same protocol
    and the deltas vanish identically.
    """
    if (cat.d, cat.m) != (d, m):
        raise ValueError(f"cat state is (d={cat.d}, m={cat.m}), asked for ({d}, {m})")

    if m >= 2:
        many_spec = ProtocolSpec(ProtocolKind.GHZ, d, m)
    else:
        many_spec = ProtocolSpec(ProtocolKind.BARRED, d, 1)
    single_spec = ProtocolSpec(ProtocolKind.BELL, d, 1)
    single_cat = CatState(d, 1, cat.coeffs)

    many: dict[tuple[int, int], OutcomeRecord] = {}
    for record in enumerate_outcomes(cat, many_spec, max_dim=max_dim):
        if record.probability <= PROB_FLOOR:
            continue
        if isinstance(record.label, GhzLabel):
            key = (record.label.k, record.label.m)
        else:
            key = (record.label.n, record.label.m)
        many[key] = record

    max_prob_delta = 0.0
    max_state_delta = 0.0
    for record in enumerate_outcomes(single_cat, single_spec, max_dim=max_dim):
        assert isinstance(record.label, JointLabel)
        key = (record.label.tail.n, record.label.tail.m)
        partner = many.pop(key, None)
        if partner is None:
            max_prob_delta = max(max_prob_delta, record.probability)
            max_state_delta = 1.0
            continue
        max_prob_delta = max(
            max_prob_delta, abs(record.probability - partner.probability)
        )
        folded, leaked = _sector_view(partner.bob_post_correction)
        delta = np.abs(folded - record.bob_post_correction.amps).max()
        max_state_delta = max(max_state_delta, float(delta), leaked)
    for leftover in many.values():
        max_prob_delta = max(max_prob_delta, leftover.probability)
        max_state_delta = 1.0
    return EquivalenceReport(max_prob_delta, max_state_delta)
