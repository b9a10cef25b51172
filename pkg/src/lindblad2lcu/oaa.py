"""Segments of r channel-LCU steps, amplified by oblivious amplitude amplification.

A segment runs r copies of the W gadget on separate indicator and purifier
registers but the same system register. Call the combined isometry W-hat and
the prepared input |Psi> = |0-hat>|mu-hat>|psi>. Projecting every indicator
onto |0> leaves

    P_0 W-hat |Psi> = sqrt(kappa) sum_J |J> A_J |psi>,   A_J = A_{j_0} ... A_{j_{r-1}}

with kappa = p^r. The step size delta is chosen so that kappa = 1/4, where a
single round of amplification

    F = -W-hat (I - 2 P_1) W-hat^dag (I - 2 P_0) W-hat

maps |Psi> onto the normalized good part |Phi> up to O(1/r). A final segment
that is shorter than the others has kappa > 1/4 and is diluted back to 1/4 by
one extra rotated qubit.

Two evaluation strategies are provided:

- "statevector" applies W-hat register by register to a dense state of shape
  (2,)? + (q_dim, m_dim) * r + (2^n,). This is exact, supports Hamming-weight
  truncation of the ancillas, and grows exponentially in r.
- "reduced" uses closed forms in terms of Q = kappa (E^dag)^r(I), where E is
  the first-order step channel, and G, the trace preserving single-step
  channel of W. These are exact for untruncated segments at any r.
"""

from __future__ import annotations

import dataclasses
from functools import reduce
import itertools
import logging
import math
from typing import ClassVar
from typing import Literal
from typing import TYPE_CHECKING

import numpy as np
from typing_extensions import TypeAlias

from lindblad2lcu._internal.numerics import dagger
from lindblad2lcu._internal.numerics import DimensionMismatchError
from lindblad2lcu._internal.numerics import NotNormalizedError
from lindblad2lcu._internal.numerics import spectral_norm
from lindblad2lcu.channels import ChoiMatrix
from lindblad2lcu.channels import choi_to_superop
from lindblad2lcu.channels import compose_all
from lindblad2lcu.channels import diamond_bounds
from lindblad2lcu.channels import DiamondBounds
from lindblad2lcu.channels import exact_evolution
from lindblad2lcu.channels import kraus_to_superop
from lindblad2lcu.channels import NegativeTimeError
from lindblad2lcu.channels import Superoperator
from lindblad2lcu.lcu import build_gadget
from lindblad2lcu.lcu import m_delta_kraus
from lindblad2lcu.lcu import m_delta_lcu
from lindblad2lcu.lcu import single_step_channel
from lindblad2lcu.pauli import pauli_norm

if TYPE_CHECKING:
    from typing import Sequence

    import numpy.typing as npt

    from lindblad2lcu._internal.numerics import ComplexMatrix
    from lindblad2lcu._internal.numerics import StateVector
    from lindblad2lcu.channels import KrausChannel
    from lindblad2lcu.lcu import ChannelLCU
    from lindblad2lcu.lcu import LcuGadget
    from lindblad2lcu.pauli import LindbladSpec

_LOG = logging.getLogger(__name__)

TARGET_P = 0.25
MAX_ENUMERATION = 4096
MAX_STATE_DIM = 2**22

Method: TypeAlias = Literal["auto", "statevector", "reduced"]


class Error(Exception):
    """The top-level class for errors produced by this module."""


class InvalidIterationsError(Error, ValueError):
    """The number of steps per segment was not a positive integer."""


class ZeroNormError(Error, ValueError):
    """The spec has pauli_norm 0, so no step size solves p^r = 1/4."""


class DilutionError(Error, ValueError):
    """A success parameter cannot be diluted to the requested target."""


class SegmentTooLongError(Error, ValueError):
    """The per-segment success parameter is already below 1/4."""


class EnumerationTooLargeError(Error):
    """Enumerating (m+1)^r Kraus products would exceed the guard."""


class StateTooLargeError(Error):
    """A dense ancilla state would exceed the dimension limit."""


class LimitsExceededError(Error):
    """A simulation request is outside the configured limits."""


class EpsilonUnachievableError(Error):
    """No segment length within the limits reaches the requested precision.

    Attributes:
        achieved: The best certified lower bound on the total diamond
            distance that was reached.
        r: The largest number of steps per segment that was tried.
    """

    def __init__(self, msg: str, *, achieved: float, r: int) -> None:
        super().__init__(msg)
        self.achieved = achieved
        self.r = r


def _p_coefficients(spec: LindbladSpec) -> tuple[float, float]:
    c0 = spec.hamiltonian.weight
    jump_sq = math.fsum(j.weight**2 for j in spec.jumps)
    return c0 + jump_sq, (0.5 * jump_sq + c0) ** 2


def success_parameter(spec: LindbladSpec, delta: float) -> float:
    """p(delta) = 1 / sum_j s_j^2 in closed form.

    1/p = 1 + 2 delta P + delta^2 (c_0 + sum_j c_j^2 / 2)^2 with P = pauli_norm.
    """
    big_p, a = _p_coefficients(spec)
    return 1.0 / (1.0 + 2.0 * delta * big_p + a * delta * delta)


def solve_delta(spec: LindbladSpec, r: int) -> float:
    """The positive step size with p(delta)^r = 1/4.

    Raises:
        InvalidIterationsError: If r < 1.
        ZeroNormError: If pauli_norm(spec) is 0.
    """
    if r < 1:
        msg = f"a segment needs at least one step, got r={r}"
        raise InvalidIterationsError(msg)
    big_p, a = _p_coefficients(spec)
    if big_p <= 0:
        msg = "pauli_norm is zero; there is no step size with p^r = 1/4"
        raise ZeroNormError(msg)
    # 1/p = 4^(1/r) = 1 + u; the root is written to avoid cancellation
    u = math.expm1(math.log(4.0) / r)
    delta = u / (big_p + math.sqrt(big_p * big_p + a * u))
    _LOG.debug("solved delta=%.12g for r=%d", delta, r)
    return delta


def dilute(p_actual: float, p_target: float) -> float:
    """The angle of the extra rotated qubit that lowers p_actual to p_target.

    The qubit is rotated to cos(phi)|0> + sin(phi)|1> and joins the
    projectors, so the success parameter becomes p_actual cos^2(phi).

    Raises:
        DilutionError: If not 0 < p_target <= p_actual <= 1.
    """
    slack = 1e-12
    if not 0.0 < p_target <= p_actual * (1.0 + slack) or p_actual > 1.0 + slack:
        msg = f"cannot dilute a success parameter of {p_actual} to {p_target}"
        raise DilutionError(msg)
    return math.acos(min(1.0, math.sqrt(p_target / p_actual)))


@dataclasses.dataclass(frozen=True)
class SegmentPlan:
    """One segment of r steps of size delta.

    Attributes:
        r: Steps per segment.
        delta: Step size.
        p: Per-step success parameter of the LCU.
        lcu: The (merged) LCU of one step.
        h: If set, ancillas are projected onto Hamming weight at most h.
        dilution: If set, the angle of the extra rotated qubit.
    """

    TARGET_P_TOTAL: ClassVar[float] = TARGET_P

    r: int
    delta: float
    p: float
    lcu: ChannelLCU = dataclasses.field(repr=False, compare=False)
    h: int | None = None
    dilution: float | None = None

    def __post_init__(self) -> None:
        if self.r < 1:
            msg = f"a segment needs at least one step, got r={self.r}"
            raise InvalidIterationsError(msg)
        if self.h is not None and not 0 <= self.h <= self.r:
            msg = f"truncation weight must be in [0, {self.r}], got {self.h}"
            raise ValueError(msg)

    @property
    def q_dim(self) -> int:
        return self.lcu.max_row_length

    @property
    def m_dim(self) -> int:
        return len(self.lcu.rows)

    @property
    def sys_dim(self) -> int:
        return self.lcu.dim

    @property
    def duration(self) -> float:
        """The evolution time r * delta covered by this segment."""
        return self.r * self.delta

    @property
    def kappa(self) -> float:
        """The success parameter of the whole segment, after dilution."""
        c = 1.0 if self.dilution is None else math.cos(self.dilution) ** 2
        return self.p**self.r * c

    @property
    def dims(self) -> tuple[int, ...]:
        """Register dimensions, most significant first."""
        head = () if self.dilution is None else (2,)
        return (*head, *((self.q_dim, self.m_dim) * self.r), self.sys_dim)

    @property
    def state_dim(self) -> int:
        return math.prod(self.dims)


def plan_segment(
    spec: LindbladSpec, r: int, *, delta: float | None = None, h: int | None = None
) -> SegmentPlan:
    """Plans a segment, diluting when p(delta)^r exceeds 1/4.

    Args:
        spec: The Lindbladian.
        r: Steps per segment.
        delta: The step size. Defaults to solve_delta(spec, r).
        h: Optional Hamming-weight truncation.

    Raises:
        SegmentTooLongError: If p(delta)^r < 1/4.
    """
    if delta is None:
        delta = solve_delta(spec, r)
    lcu = m_delta_lcu(spec, delta).merged()
    total = lcu.p**r
    dilution = None
    if total > TARGET_P * (1.0 + 1e-12):
        dilution = dilute(total, TARGET_P)
    elif total < TARGET_P * (1.0 - 1e-9):
        msg = f"p^r = {total:.6g} is below {TARGET_P} for delta={delta}, r={r}"
        raise SegmentTooLongError(msg)
    return SegmentPlan(r=r, delta=delta, p=lcu.p, lcu=lcu, h=h, dilution=dilution)


def plan_evolution(
    spec: LindbladSpec, t: float, r: int, *, h: int | None = None
) -> list[SegmentPlan]:
    """Covers time t with full segments and at most one shorter, diluted one.

    Raises:
        NegativeTimeError: If t < 0.
    """
    if t < 0:
        msg = f"evolution time must be non-negative, got {t}"
        raise NegativeTimeError(msg)
    if t == 0:
        return []
    full = plan_segment(spec, r, h=h)
    count = math.floor(t / full.duration + 1e-9)
    plans = [full] * count
    remainder = t - count * full.duration
    if remainder > 1e-12 * max(1.0, t):
        plans.append(plan_segment(spec, r, delta=remainder / r, h=h))
    _LOG.debug(
        "t=%.6g r=%d: %d full segments of %.6g, remainder %.3g",
        t,
        r,
        count,
        full.duration,
        max(remainder, 0.0),
    )
    return plans


@dataclasses.dataclass(frozen=True)
class IsometryState:
    """A dense state over the registers of a segment.

    Attributes:
        dims: Register dimensions, as SegmentPlan.dims.
        amplitudes: An array of shape dims.
    """

    dims: tuple[int, ...]
    amplitudes: npt.NDArray[np.complex128] = dataclasses.field(repr=False)

    def __post_init__(self) -> None:
        if self.amplitudes.shape != self.dims:
            msg = f"amplitudes of shape {self.amplitudes.shape} for dims {self.dims}"
            raise DimensionMismatchError(msg)

    @property
    def vector(self) -> StateVector:
        return self.amplitudes.reshape(-1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def __add__(self, other: IsometryState) -> IsometryState:
        return IsometryState(self.dims, self.amplitudes + other.amplitudes)

    def __sub__(self, other: IsometryState) -> IsometryState:
        return IsometryState(self.dims, self.amplitudes - other.amplitudes)

    def __mul__(self, factor: complex) -> IsometryState:
        return IsometryState(self.dims, self.amplitudes * factor)

    __rmul__ = __mul__


def _check_gadget(plan: SegmentPlan, gadget: LcuGadget) -> None:
    if gadget.dims != (plan.q_dim, plan.m_dim, plan.sys_dim):
        msg = f"gadget dims {gadget.dims} do not match the plan"
        raise DimensionMismatchError(msg)


def segment_gadget(plan: SegmentPlan) -> LcuGadget:
    """The W gadget of the plan's LCU."""
    return build_gadget(plan.lcu)


def _offset(plan: SegmentPlan) -> int:
    return 0 if plan.dilution is None else 1


def _rotation(angle: float, *, adjoint: bool) -> ComplexMatrix:
    c, s = math.cos(angle), math.sin(angle)
    if adjoint:
        s = -s
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def _apply_pair(
    amps: npt.NDArray[np.complex128], op4: ComplexMatrix, axes: tuple[int, int]
) -> npt.NDArray[np.complex128]:
    # op4[a, b, c, d] maps register pair (c, d) to (a, b)
    moved = np.moveaxis(amps, axes, (-2, -1))
    out = np.einsum("abcd,...cd->...ab", op4, moved)
    return np.moveaxis(out, (-2, -1), axes)


def _apply_controlled(
    amps: npt.NDArray[np.complex128], blocks: ComplexMatrix, axes: tuple[int, int]
) -> npt.NDArray[np.complex128]:
    # blocks[k, j] acts on the system axis, which is always last
    moved = np.moveaxis(amps, axes, (-3, -2))
    out = np.einsum("kjxy,...kjy->...kjx", blocks, moved)
    return np.moveaxis(out, (-3, -2), axes)


def _hamming_mask(plan: SegmentPlan, h: int) -> npt.NDArray[np.bool_]:
    # per-position weight is 0 only for (k, j) = (0, 0)
    single = np.ones((plan.q_dim, plan.m_dim), dtype=np.int64)
    single[0, 0] = 0
    weight = reduce(np.add.outer, [single] * plan.r)
    return np.asarray(weight <= h)


def _check_state(plan: SegmentPlan, state: IsometryState) -> None:
    if state.dims != plan.dims:
        msg = f"state dims {state.dims} do not match segment dims {plan.dims}"
        raise DimensionMismatchError(msg)


def apply_w_hat(
    plan: SegmentPlan,
    gadget: LcuGadget,
    state: IsometryState,
    *,
    adjoint: bool = False,
) -> IsometryState:
    """Applies W-hat (or its adjoint) register by register.

    W-hat = W_0 W_1 ... W_{r-1}, so position r-1 acts on the system first.
    All multi-B layers commute with the multi-U gates of other positions, so
    this runs as: every multi-B, the optional Hamming-weight projection,
    every multi-U (or multi-U^dag in reverse order), every multi-B^dag.

    Raises:
        DimensionMismatchError: If the state or gadget does not fit the plan.
    """
    _check_gadget(plan, gadget)
    _check_state(plan, state)
    q, m = plan.q_dim, plan.m_dim
    off = _offset(plan)
    b4 = gadget.multi_b.reshape(q, m, q, m)
    b4_dag = dagger(gadget.multi_b).reshape(q, m, q, m)
    amps = state.amplitudes
    if plan.dilution is not None:
        rot = _rotation(plan.dilution, adjoint=adjoint)
        amps = np.tensordot(rot, amps, axes=(1, 0))
    positions = [(off + 2 * i, off + 2 * i + 1) for i in range(plan.r)]
    for axes in positions:
        amps = _apply_pair(amps, b4, axes)
    if plan.h is not None:
        mask = _hamming_mask(plan, plan.h)
        amps = amps * mask.reshape((1,) * off + mask.shape + (1,))
    if adjoint:
        blocks = np.swapaxes(gadget.u_blocks.conj(), -1, -2)
        order = positions
    else:
        blocks = gadget.u_blocks
        order = positions[::-1]
    for axes in order:
        amps = _apply_controlled(amps, blocks, axes)
    for axes in positions:
        amps = _apply_pair(amps, b4_dag, axes)
    return IsometryState(state.dims, np.asarray(amps, dtype=np.complex128))


def prepared_state(
    plan: SegmentPlan, gadget: LcuGadget, psi: npt.ArrayLike
) -> IsometryState:
    """|0>_dilution |0>|mu> ... |0>|mu> |psi>, without normalizing psi."""
    _check_gadget(plan, gadget)
    vector = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if vector.shape != (plan.sys_dim,):
        msg = f"system state of size {vector.size}, expected {plan.sys_dim}"
        raise DimensionMismatchError(msg)
    if plan.state_dim > MAX_STATE_DIM:
        msg = f"segment state dimension {plan.state_dim} exceeds {MAX_STATE_DIM}"
        raise StateTooLargeError(msg)
    e0 = np.zeros(plan.q_dim, dtype=np.complex128)
    e0[0] = 1.0
    position = np.outer(e0, gadget.mu)
    factors: list[npt.NDArray[np.complex128]] = []
    if plan.dilution is not None:
        factors.append(np.array([1.0, 0.0], dtype=np.complex128))
    factors.extend([position] * plan.r)
    factors.append(vector)
    amps = reduce(np.multiply.outer, factors)
    return IsometryState(plan.dims, np.asarray(amps, dtype=np.complex128))


def _zero_index(plan: SegmentPlan) -> tuple[int | slice, ...]:
    head: tuple[int | slice, ...] = () if plan.dilution is None else (0,)
    return (*head, *((0, slice(None)) * plan.r), slice(None))


def project_p0(plan: SegmentPlan, state: IsometryState) -> IsometryState:
    """P_0: every indicator (and the dilution qubit) reads 0."""
    _check_state(plan, state)
    index = _zero_index(plan)
    out = np.zeros_like(state.amplitudes)
    out[index] = state.amplitudes[index]
    return IsometryState(state.dims, out)


def prepared_component(
    plan: SegmentPlan, gadget: LcuGadget, state: IsometryState
) -> StateVector:
    """The system vector c with P_1 |state> = |0-hat>|mu-hat>|c>."""
    _check_state(plan, state)
    block = state.amplitudes[_zero_index(plan)]
    for _ in range(plan.r):
        block = np.tensordot(gadget.mu.conj(), block, axes=(0, 0))
    return np.asarray(block, dtype=np.complex128)


def project_p1(
    plan: SegmentPlan, gadget: LcuGadget, state: IsometryState
) -> IsometryState:
    """P_1: P_0, and every purifier in |mu>."""
    return prepared_state(plan, gadget, prepared_component(plan, gadget, state))


def apply_f_operator(
    plan: SegmentPlan, gadget: LcuGadget, state: IsometryState
) -> IsometryState:
    """F = -W-hat (I - 2 P_1) W-hat^dag (I - 2 P_0) W-hat on any state."""
    a = apply_w_hat(plan, gadget, state)
    a = a - 2.0 * project_p0(plan, a)
    a = apply_w_hat(plan, gadget, a, adjoint=True)
    a = a - 2.0 * project_p1(plan, gadget, a)
    return -1.0 * apply_w_hat(plan, gadget, a)


def apply_f(plan: SegmentPlan, gadget: LcuGadget, psi: npt.ArrayLike) -> IsometryState:
    """F|Psi> = (2 P_0 W-hat + W-hat - 4 W-hat P_1 W-hat^dag P_0 W-hat)|Psi>.

    Raises:
        NotNormalizedError: If psi is not a unit vector.
    """
    vector = _unit(psi)
    w_psi = apply_w_hat(plan, gadget, prepared_state(plan, gadget, vector))
    good = project_p0(plan, w_psi)
    back = apply_w_hat(plan, gadget, good, adjoint=True)
    reflected = apply_w_hat(plan, gadget, project_p1(plan, gadget, back))
    return 2.0 * good + w_psi - 4.0 * reflected


def _unit(psi: npt.ArrayLike) -> StateVector:
    vector = np.asarray(psi, dtype=np.complex128).reshape(-1)
    norm = float(np.linalg.norm(vector))
    if abs(norm - 1.0) > 1e-9:  # noqa: PLR2004
        msg = f"expected a unit system state, got norm {norm}"
        raise NotNormalizedError(msg)
    return vector


def target_state(
    plan: SegmentPlan, gadget: LcuGadget, psi: npt.ArrayLike
) -> IsometryState:
    """|Phi> = kappa^(-1/2) P_0 W-hat |Psi> = |0-hat> sum_J |J> A_J |psi>."""
    w_psi = apply_w_hat(plan, gadget, prepared_state(plan, gadget, _unit(psi)))
    return project_p0(plan, w_psi) * (1.0 / math.sqrt(plan.kappa))


def enumerate_segment_kraus(kraus: KrausChannel, r: int) -> list[ComplexMatrix]:
    """Every product A_{j_0} ... A_{j_{r-1}}, in lexicographic order of J.

    Raises:
        EnumerationTooLargeError: If (m+1)^r exceeds 4096.
    """
    ops = kraus.operators
    if len(ops) ** r > MAX_ENUMERATION:
        msg = f"{len(ops)}^{r} Kraus products exceed the guard of {MAX_ENUMERATION}"
        raise EnumerationTooLargeError(msg)
    return [
        reduce(np.matmul, combo, np.eye(kraus.dim, dtype=np.complex128))
        for combo in itertools.product(ops, repeat=r)
    ]


def segment_kraus_sum(kraus: KrausChannel, r: int) -> ComplexMatrix:
    """sum_J A_J^dag A_J = (E^dag)^r (I), by iterating the adjoint map."""
    out = np.eye(kraus.dim, dtype=np.complex128)
    for _ in range(r):
        out = np.asarray(
            sum(dagger(a) @ out @ a for a in kraus.operators), dtype=np.complex128
        )
    return out


def tp_defect_segment(spec: LindbladSpec, plan: SegmentPlan) -> float:
    """||sum_J A_J^dag A_J - I|| for the plan's step size.

    The sum comes from iterating the adjoint map r times, never from the
    (m+1)^r products, so no enumeration guard applies and any r is allowed.
    """
    total = segment_kraus_sum(m_delta_kraus(spec, plan.delta), plan.r)
    return spectral_norm(total - np.eye(total.shape[0]))


def q_operator(plan: SegmentPlan, gadget: LcuGadget) -> ComplexMatrix:
    """Q = <0-hat mu-hat| W-hat^dag P_0 W-hat |0-hat mu-hat> = kappa (E^dag)^r(I)."""
    _check_gadget(plan, gadget)
    return plan.kappa * segment_kraus_sum(gadget.lcu.kraus(), plan.r)


def _expect(a: ComplexMatrix, v: StateVector) -> float:
    return max(0.0, float(np.real(np.vdot(v, a @ v))))


def oaa_error(
    plan: SegmentPlan,
    gadget: LcuGadget,
    psi: npt.ArrayLike,
    *,
    method: Method = "auto",
) -> float:
    """||F|Psi> - |Phi>||.

    The reduced form is sqrt(<u|Q|u> + <w|(I - Q)|w>) with
    u = (3I - 4Q - kappa^(-1/2)) psi and w = (I - 4Q) psi.
    """
    vector = _unit(psi)
    if _resolve(plan, method) == "statevector":
        diff = apply_f(plan, gadget, vector) - target_state(plan, gadget, vector)
        return diff.norm()
    q = q_operator(plan, gadget)
    eye = np.eye(q.shape[0], dtype=np.complex128)
    u = (3.0 * eye - 4.0 * q - eye / math.sqrt(plan.kappa)) @ vector
    w = (eye - 4.0 * q) @ vector
    return math.sqrt(_expect(q, u) + _expect(eye - q, w))


def perp_residual(
    plan: SegmentPlan,
    gadget: LcuGadget,
    psi: npt.ArrayLike,
    *,
    method: Method = "auto",
) -> float:
    """||P_1 |Psi-perp>|| where W-hat|Psi-perp> = (sqrt3/2)|Phi> - (1/2)|Phi-perp>.

    |Phi> and |Phi-perp> are the normalized P_0 and (1 - P_0) parts of
    W-hat|Psi>, and |Psi-perp> is their exact preimage under W-hat.
    """
    vector = _unit(psi)
    root3 = math.sqrt(3.0)
    if _resolve(plan, method) == "statevector":
        w_psi = apply_w_hat(plan, gadget, prepared_state(plan, gadget, vector))
        good = project_p0(plan, w_psi)
        bad = w_psi - good
        image = good * (0.5 * root3 / good.norm()) - bad * (0.5 / bad.norm())
        preimage = apply_w_hat(plan, gadget, image, adjoint=True)
        return float(np.linalg.norm(prepared_component(plan, gadget, preimage)))
    q = q_operator(plan, gadget)
    eye = np.eye(q.shape[0], dtype=np.complex128)
    good_norm = math.sqrt(_expect(q, vector))
    bad_norm = math.sqrt(_expect(eye - q, vector))
    out = (0.5 * root3 / good_norm) * (q @ vector) - (0.5 / bad_norm) * (
        (eye - q) @ vector
    )
    return float(np.linalg.norm(out))


def _resolve(plan: SegmentPlan, method: Method) -> Literal["statevector", "reduced"]:
    if method == "auto":
        return "statevector" if plan.h is not None else "reduced"
    if method == "reduced" and plan.h is not None:
        msg = "the reduced form does not apply to truncated segments"
        raise ValueError(msg)
    return method


def _statevector_channel(plan: SegmentPlan, gadget: LcuGadget) -> Superoperator:
    d = plan.sys_dim
    outputs = []
    for i in range(d):
        basis = np.zeros(d, dtype=np.complex128)
        basis[i] = 1.0
        out = apply_f(plan, gadget, basis)
        outputs.append(out.amplitudes.reshape(-1, d))
    o = np.stack(outputs)
    choi = np.einsum("iax,jay->xiyj", o, o.conj()).reshape(d * d, d * d)
    return choi_to_superop(ChoiMatrix(d, np.asarray(choi, dtype=np.complex128)))


def _reduced_channel(plan: SegmentPlan, gadget: LcuGadget) -> Superoperator:
    q = q_operator(plan, gadget)
    eye = np.eye(q.shape[0], dtype=np.complex128)
    x = Superoperator.conjugation(3.0 * eye - 4.0 * q)
    y = Superoperator.conjugation(eye - 4.0 * q)
    steps = kraus_to_superop(gadget.lcu.kraus()).power(plan.r)
    single = single_step_channel(gadget).power(plan.r)
    kappa = plan.kappa
    return kappa * (steps @ x) + single @ y - kappa * (steps @ y)


def extract_channel(
    plan: SegmentPlan, gadget: LcuGadget, *, method: Method = "auto"
) -> Superoperator:
    """The channel N that F implements once the ancillas are traced out.

    The statevector method applies F to each system basis state and builds
    the Choi matrix from the outputs. The reduced method evaluates

        N(rho) = kappa E^r(X rho X^dag) + G^r(Y rho Y^dag) - kappa E^r(Y rho Y^dag)

    with X = 3I - 4Q and Y = I - 4Q. "auto" picks statevector only for
    truncated segments.
    """
    _check_gadget(plan, gadget)
    if _resolve(plan, method) == "statevector":
        return _statevector_channel(plan, gadget)
    return _reduced_channel(plan, gadget)


@dataclasses.dataclass(frozen=True)
class SimulationLimits:
    """Guards for simulate().

    Attributes:
        max_qubits: Largest system size accepted.
        max_r: Largest number of steps per segment tried.
        restarts: Random restarts of each diamond norm ascent.
        iterations: Ascent steps per restart.
    """

    max_qubits: int = 3
    max_r: int = 4096
    restarts: int = 20
    iterations: int = 50


@dataclasses.dataclass(frozen=True)
class SimulationResult:
    """The output of simulate().

    Attributes:
        channel: The composed channel over all segments.
        r: Steps per segment.
        plans: One plan per segment, in time order.
        segment_bounds: Diamond bounds of N - e^{L T} for each plan.
        total: Diamond bounds of the composed channel against e^{L t}.
    """

    channel: Superoperator = dataclasses.field(repr=False)
    r: int
    plans: tuple[SegmentPlan, ...]
    segment_bounds: tuple[DiamondBounds, ...]
    total: DiamondBounds

    @property
    def segments(self) -> int:
        return len(self.plans)


def _segment_channels(
    spec: LindbladSpec,
    plans: Sequence[SegmentPlan],
    limits: SimulationLimits,
    rng: np.random.Generator,
) -> tuple[list[Superoperator], list[DiamondBounds]]:
    cache: dict[int, tuple[Superoperator, DiamondBounds]] = {}
    channels = []
    bounds = []
    for plan in plans:
        if id(plan) not in cache:
            channel = extract_channel(plan, segment_gadget(plan))
            err = channel - exact_evolution(spec, plan.duration)
            cache[id(plan)] = (
                channel,
                diamond_bounds(
                    err,
                    rng=rng,
                    restarts=limits.restarts,
                    iterations=limits.iterations,
                ),
            )
        channel, bound = cache[id(plan)]
        channels.append(channel)
        bounds.append(bound)
    return channels, bounds


def simulate(
    spec: LindbladSpec,
    t: float,
    eps: float,
    *,
    limits: SimulationLimits | None = None,
    rng: np.random.Generator | None = None,
) -> SimulationResult:
    """Approximates e^{tL} by amplified segments to diamond precision eps.

    Starting from r = 1, r is doubled until every segment's certified lower
    bound is within eps / segments and the composed channel's lower bound is
    within eps.

    Raises:
        NegativeTimeError: If t < 0.
        LimitsExceededError: If spec has more than limits.max_qubits qubits.
        EpsilonUnachievableError: If r would exceed limits.max_r.
    """
    limits = limits if limits is not None else SimulationLimits()
    rng = rng if rng is not None else np.random.default_rng(0)
    if t < 0:
        msg = f"evolution time must be non-negative, got {t}"
        raise NegativeTimeError(msg)
    if spec.n > limits.max_qubits:
        msg = f"{spec.n} qubits exceeds the limit of {limits.max_qubits}"
        raise LimitsExceededError(msg)
    if t == 0 or pauli_norm(spec) == 0:
        identity = Superoperator.identity(spec.dim)
        zero = DiamondBounds(0.0, 0.0)
        if t > 0:
            zero = diamond_bounds(identity - exact_evolution(spec, t), rng=rng)
        return SimulationResult(identity, 0, (), (), zero)
    r = 1
    achieved = math.inf
    while r <= limits.max_r:
        plans = plan_evolution(spec, t, r)
        channels, bounds = _segment_channels(spec, plans, limits, rng)
        budget = eps / len(plans)
        worst = max(b.lower for b in bounds)
        _LOG.info(
            "r=%d: %d segments, worst segment lower bound %.3g (budget %.3g)",
            r,
            len(plans),
            worst,
            budget,
        )
        if worst <= budget:
            channel = compose_all(channels, spec.dim)
            total = diamond_bounds(
                channel - exact_evolution(spec, t),
                rng=rng,
                restarts=limits.restarts,
                iterations=limits.iterations,
            )
            achieved = min(achieved, total.lower)
            if total.lower <= eps:
                return SimulationResult(
                    channel, r, tuple(plans), tuple(bounds), total
                )
        else:
            achieved = min(achieved, sum(b.lower for b in bounds))
        r *= 2
    msg = (
        f"no r <= {limits.max_r} reaches eps={eps}; best certified lower bound "
        f"{achieved:.3g}"
    )
    raise EpsilonUnachievableError(msg, achieved=achieved, r=r // 2)
