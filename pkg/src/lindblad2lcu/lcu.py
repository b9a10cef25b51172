"""The channel-LCU gadget for one first-order step M_delta.

One step of the Lindblad evolution is approximated by the completely positive
map M_delta with Kraus operators

    A_0 = I - (delta/2) sum_j L_j^dag L_j - i delta H
    A_j = sqrt(delta) L_j                                (j = 1..m)

Each A_j is written as a linear combination of unitaries sum_k alpha_jk U_jk
with alpha_jk >= 0 and row sums s_j. The W gadget acts on three registers,
indicator (x) purifier (x) system, and satisfies

    (<0| (x) I) W (|0> (x) |mu> (x) |psi>) = sqrt(p) sum_j |j> (x) A_j |psi>

with |mu> proportional to sum_j s_j |j> and p = 1 / sum_j s_j^2. W is
built as multiB^dag multiU multiB, where multiB prepares the coefficient state
of row j on the indicator (controlled on the purifier reading j) and multiU
applies U_jk controlled on both registers.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from typing import NamedTuple
from typing import TYPE_CHECKING

import numpy as np

from lindblad2lcu._internal.numerics import dagger
from lindblad2lcu._internal.numerics import spectral_norm
from lindblad2lcu._internal.numerics import unitary_from_first_column
from lindblad2lcu.channels import KrausChannel
from lindblad2lcu.channels import kraus_to_superop
from lindblad2lcu.channels import Superoperator
from lindblad2lcu.pauli import pauli_multiply
from lindblad2lcu.pauli import PauliString

if TYPE_CHECKING:
    from typing import Sequence

    import numpy.typing as npt

    from lindblad2lcu._internal.numerics import ComplexMatrix
    from lindblad2lcu._internal.numerics import StateVector
    from lindblad2lcu.pauli import LindbladSpec

_LOG = logging.getLogger(__name__)

UNITARY_ATOL = 1e-10


class Error(Exception):
    """The top-level class for errors produced by this module."""


class ZeroWeightsError(Error, ValueError):
    """Row weights were all zero, or negative."""


class NonUnitaryError(Error, ValueError):
    """An LCU term is not unitary."""


class InvalidDeltaError(Error, ValueError):
    """The step size delta was negative."""


@dataclasses.dataclass(frozen=True)
class LcuTerm:
    """One term alpha * U of an LCU row.

    Attributes:
        alpha: The non-negative coefficient.
        unitary: The dense unitary.
        label: The phased Pauli string of the unitary, when it is one. Terms
            with equal labels are interchangeable, which merged() relies on.
    """

    alpha: float
    unitary: ComplexMatrix = dataclasses.field(repr=False, compare=False)
    label: PauliString | None = None

    @classmethod
    def of_pauli(cls, alpha: float, pauli: PauliString) -> LcuTerm:
        """A term whose unitary is a phased Pauli string."""
        return cls(alpha, pauli.to_matrix(), pauli)


@dataclasses.dataclass(frozen=True)
class ChannelLCU:
    """LCU decompositions of the Kraus operators of one channel.

    Attributes:
        rows: rows[j] decomposes A_j. Row 0 of an M_delta decomposition
            starts with the identity slot (alpha = 1, U = I).
        c: The Pauli coefficient sums c_0..c_m of the spec this was built
            from, or empty.
    """

    rows: tuple[tuple[LcuTerm, ...], ...]
    c: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if not self.rows or not any(self.rows):
            msg = "an LCU needs at least one term"
            raise ZeroWeightsError(msg)
        for row in self.rows:
            for term in row:
                if not term.alpha >= 0.0:
                    msg = f"LCU coefficients must be non-negative, got {term.alpha}"
                    raise ZeroWeightsError(msg)

    @property
    def dim(self) -> int:
        """The system dimension."""
        return next(int(t.unitary.shape[0]) for row in self.rows for t in row)

    @property
    def s(self) -> tuple[float, ...]:
        """Row sums s_j = sum_k alpha_jk."""
        return tuple(math.fsum(t.alpha for t in row) for row in self.rows)

    @property
    def p(self) -> float:
        """The success probability parameter 1 / sum_j s_j^2."""
        return 1.0 / math.fsum(s * s for s in self.s)

    @property
    def max_row_length(self) -> int:
        """The number of terms in the longest row."""
        return max(len(row) for row in self.rows)

    def kraus(self) -> KrausChannel:
        """The channel whose Kraus operators are the row sums sum_k alpha U."""
        d = self.dim
        ops = []
        for row in self.rows:
            a = np.zeros((d, d), dtype=np.complex128)
            for term in row:
                a += term.alpha * term.unitary
            ops.append(a)
        return KrausChannel(tuple(ops))

    def merged(self) -> ChannelLCU:
        """Coalesces terms of a row with equal Pauli labels.

        Row sums, p and the position of the first term of each row are
        unchanged. Terms without a label are left alone.
        """
        rows = []
        for row in self.rows:
            merged: list[LcuTerm] = []
            index: dict[PauliString, int] = {}
            for term in row:
                if term.label is not None and term.label in index:
                    i = index[term.label]
                    merged[i] = dataclasses.replace(
                        merged[i], alpha=merged[i].alpha + term.alpha
                    )
                    continue
                if term.label is not None:
                    index[term.label] = len(merged)
                merged.append(term)
            rows.append(tuple(merged))
        return ChannelLCU(tuple(rows), self.c)


def m_delta_kraus(spec: LindbladSpec, delta: float) -> KrausChannel:
    """The Kraus operators A_0..A_m of M_delta.

    Raises:
        InvalidDeltaError: If delta < 0.
    """
    _check_delta(delta)
    d = spec.dim
    jumps = spec.jump_matrices()
    k = sum((dagger(j) @ j for j in jumps), np.zeros((d, d), dtype=np.complex128))
    a0 = np.eye(d, dtype=np.complex128) - 0.5 * delta * k - 1j * delta * spec.h_matrix()
    root = math.sqrt(delta)
    return KrausChannel((a0, *(root * j for j in jumps)))


def m_delta_lcu(spec: LindbladSpec, delta: float) -> ChannelLCU:
    """The LCU decomposition of M_delta's Kraus operators.

    Row 0 holds, in order: the identity with alpha = 1; for every jump j and
    term pair (k, l), alpha = (delta/2) beta_jk beta_jl with
    U = -V_jk^dag V_jl; and for every Hamiltonian term k, alpha = delta beta_0k
    with U = -i V_0k. Row j holds alpha = sqrt(delta) beta_jk with U = V_jk.
    So s_0 = 1 + (delta/2) sum_j c_j^2 + delta c_0 and s_j = sqrt(delta) c_j.

    Raises:
        InvalidDeltaError: If delta < 0.
    """
    _check_delta(delta)
    identity = PauliString("I" * spec.n)
    row0 = [LcuTerm.of_pauli(1.0, identity)]
    for jump in spec.jumps:
        for tk in jump.terms:
            for tl in jump.terms:
                product = pauli_multiply(tk.pauli.adjoint(), tl.pauli)
                row0.append(
                    LcuTerm.of_pauli(
                        0.5 * delta * tk.beta * tl.beta, product.with_extra_phase(2)
                    )
                )
    for term in spec.hamiltonian.terms:
        row0.append(LcuTerm.of_pauli(delta * term.beta, term.pauli.with_extra_phase(3)))
    root = math.sqrt(delta)
    rows = [tuple(row0)]
    rows.extend(
        tuple(LcuTerm.of_pauli(root * t.beta, t.pauli) for t in jump.terms)
        for jump in spec.jumps
    )
    c = tuple(row.weight for row in spec.rows)
    return ChannelLCU(tuple(rows), c)


def _check_delta(delta: float) -> None:
    if not delta >= 0.0:
        msg = f"delta must be non-negative, got {delta}"
        raise InvalidDeltaError(msg)


def mu_state(s: Sequence[float]) -> StateVector:
    """The purifier state sum_j s_j |j> / sqrt(sum_j s_j^2).

    Raises:
        ZeroWeightsError: If every s_j is zero or any is negative.
    """
    weights = np.asarray(s, dtype=np.float64)
    if np.any(weights < 0) or not np.any(weights > 0):
        msg = f"purifier weights must be non-negative and not all zero: {list(s)}"
        raise ZeroWeightsError(msg)
    return np.asarray(weights / np.linalg.norm(weights), dtype=np.complex128)


def _check_q_dim(lcu: ChannelLCU, q_dim: int | None) -> int:
    if q_dim is None:
        return lcu.max_row_length
    if q_dim < lcu.max_row_length:
        msg = f"indicator dimension {q_dim} is shorter than an LCU row"
        raise ValueError(msg)
    return q_dim


def build_multi_b(lcu: ChannelLCU, q_dim: int | None = None) -> ComplexMatrix:
    """The multiplexed coefficient-state preparation on indicator (x) purifier.

    Block j maps |0> to sum_k sqrt(alpha_jk / s_j) |k>. A row with s_j = 0
    gets the identity block.
    """
    q = _check_q_dim(lcu, q_dim)
    m = len(lcu.rows)
    out = np.zeros((q * m, q * m), dtype=np.complex128)
    for j, (row, s) in enumerate(zip(lcu.rows, lcu.s)):
        if s > 0:
            v = np.zeros(q, dtype=np.complex128)
            for k, term in enumerate(row):
                v[k] = math.sqrt(term.alpha / s)
            block = unitary_from_first_column(v / np.linalg.norm(v))
        else:
            block = np.eye(q, dtype=np.complex128)
        # indicator is the more significant index
        out[j::m, j::m] = block
    return out


def multi_u_blocks(lcu: ChannelLCU, q_dim: int | None = None) -> ComplexMatrix:
    """U_jk as an array indexed [k, j], padded with identities.

    Raises:
        NonUnitaryError: If some U_jk fails a 1e-10 unitarity check.
    """
    q = _check_q_dim(lcu, q_dim)
    d = lcu.dim
    blocks = np.zeros((q, len(lcu.rows), d, d), dtype=np.complex128)
    blocks[:, :] = np.eye(d, dtype=np.complex128)
    for j, row in enumerate(lcu.rows):
        for k, term in enumerate(row):
            defect = spectral_norm(dagger(term.unitary) @ term.unitary - np.eye(d))
            if defect > UNITARY_ATOL:
                msg = f"term ({j}, {k}) is not unitary (defect {defect:.3g})"
                raise NonUnitaryError(msg)
            blocks[k, j] = term.unitary
    return blocks


def build_multi_u(lcu: ChannelLCU, q_dim: int | None = None) -> ComplexMatrix:
    """sum_{k,j} |k><k| (x) |j><j| (x) U_jk on the full space."""
    blocks = multi_u_blocks(lcu, q_dim)
    q, m, d, _ = blocks.shape
    out = np.zeros((q * m * d, q * m * d), dtype=np.complex128)
    for k in range(q):
        for j in range(m):
            start = (k * m + j) * d
            out[start : start + d, start : start + d] = blocks[k, j]
    return out


@dataclasses.dataclass(frozen=True)
class LcuGadget:
    """The W gadget for a ChannelLCU.

    Attributes:
        lcu: The decomposition this was built from.
        q_dim: Indicator dimension (the longest row, shorter rows padded).
        m_dim: Purifier dimension m + 1.
        sys_dim: System dimension 2^n.
        multi_b: On indicator (x) purifier.
        u_blocks: U_jk indexed [k, j].
        w: multiB^dag multiU multiB on the full space.
        mu: The purifier state.
    """

    lcu: ChannelLCU
    q_dim: int
    m_dim: int
    sys_dim: int
    multi_b: ComplexMatrix = dataclasses.field(repr=False)
    u_blocks: ComplexMatrix = dataclasses.field(repr=False)
    w: ComplexMatrix = dataclasses.field(repr=False)
    mu: StateVector = dataclasses.field(repr=False)

    @property
    def n(self) -> int:
        """The number of system qubits."""
        return self.sys_dim.bit_length() - 1

    @property
    def p(self) -> float:
        """The success probability parameter."""
        return self.lcu.p

    @property
    def dims(self) -> tuple[int, int, int]:
        """(indicator, purifier, system) dimensions."""
        return (self.q_dim, self.m_dim, self.sys_dim)


def build_gadget(lcu: ChannelLCU, q_dim: int | None = None) -> LcuGadget:
    """Assembles multiB, multiU and W for an LCU."""
    q = _check_q_dim(lcu, q_dim)
    m = len(lcu.rows)
    d = lcu.dim
    multi_b = build_multi_b(lcu, q)
    multi_u = build_multi_u(lcu, q)
    b_full = np.kron(multi_b, np.eye(d, dtype=np.complex128))
    w = dagger(b_full) @ multi_u @ b_full
    _LOG.debug("built W gadget with q_dim=%d m_dim=%d sys_dim=%d", q, m, d)
    return LcuGadget(
        lcu=lcu,
        q_dim=q,
        m_dim=m,
        sys_dim=d,
        multi_b=multi_b,
        u_blocks=multi_u_blocks(lcu, q),
        w=w,
        mu=mu_state(lcu.s),
    )


class WResult(NamedTuple):
    """The indicator-0 block of W|0>|mu>|psi>, over purifier (x) system."""

    success_part: StateVector
    p: float


def apply_w(gadget: LcuGadget, psi: npt.ArrayLike) -> WResult:
    """Applies W to |0>|mu>|psi> and projects the indicator onto |0>."""
    q, m, d = gadget.dims
    vector = np.asarray(psi, dtype=np.complex128).reshape(-1)
    indicator = np.zeros(q, dtype=np.complex128)
    indicator[0] = 1.0
    out = gadget.w @ np.kron(np.kron(indicator, gadget.mu), vector)
    return WResult(out[: m * d], gadget.p)


def purified_image(channel: KrausChannel, psi: npt.ArrayLike) -> StateVector:
    """sum_j |j> (x) A_j |psi>."""
    vector = np.asarray(psi, dtype=np.complex128).reshape(-1)
    return np.concatenate([a @ vector for a in channel.operators])


def lemma1_residual(gadget: LcuGadget, psi: npt.ArrayLike) -> float:
    """|| success_part - sqrt(p) sum_j |j> A_j |psi> ||."""
    success, p = apply_w(gadget, psi)
    expected = math.sqrt(p) * purified_image(gadget.lcu.kraus(), psi)
    return float(np.linalg.norm(success - expected))


def single_step_channel(gadget: LcuGadget) -> Superoperator:
    """sigma -> Tr_anc[W (|0><0| (x) |mu><mu| (x) sigma) W^dag].

    This channel is trace preserving because W is unitary.
    """
    q, m, d = gadget.dims
    w = gadget.w.reshape(q, m, d, q, m, d)
    # columns of W restricted to the input |0>|mu>
    isometry = np.einsum("kjxlt,l->kjxt", w[:, :, :, 0, :, :], gadget.mu)
    kraus = KrausChannel(tuple(isometry.reshape(q * m, d, d)))
    return kraus_to_superop(kraus)


def standard_lcu_success(alphas: Sequence[float]) -> float:
    """1 / (sum_k alpha_k)^2, the success probability of a standard LCU.

    Raises:
        ZeroWeightsError: If the coefficients sum to zero.
    """
    total = math.fsum(alphas)
    if total <= 0:
        msg = "LCU coefficients sum to zero"
        raise ZeroWeightsError(msg)
    return 1.0 / total**2


def stinespring_alphas(delta: float) -> tuple[float, float, float, float]:
    """Coefficients of the amplitude damping Kraus operators over I, Z, X, iY.

    A_0 = |0><0| + sqrt(1 - delta)|1><1| = a00 I + a01 Z
    A_1 = sqrt(delta)|0><1| = a10 X + a11 iY
    """
    if not 0.0 <= delta <= 1.0:
        msg = f"damping probability must be in [0, 1], got {delta}"
        raise InvalidDeltaError(msg)
    root = math.sqrt(1.0 - delta)
    half = 0.5 * math.sqrt(delta)
    return (0.5 * (1.0 + root), 0.5 * (1.0 - root), half, half)


def amplitude_damping_lcu(delta: float) -> ChannelLCU:
    """The exactly trace preserving LCU of stinespring_alphas()."""
    a00, a01, a10, a11 = stinespring_alphas(delta)
    return ChannelLCU(
        (
            (
                LcuTerm.of_pauli(a00, PauliString("I")),
                LcuTerm.of_pauli(a01, PauliString("Z")),
            ),
            (
                LcuTerm.of_pauli(a10, PauliString("X")),
                LcuTerm.of_pauli(a11, PauliString("Y", quarter=1)),
            ),
        )
    )


class SuccessComparison(NamedTuple):
    """Success probabilities of one LCU over all terms versus per Kraus row."""

    standard: float
    new: float


def stinespring_comparison(delta: float) -> SuccessComparison:
    """Amplitude damping: 1/(1 + sqrt(delta))^2 versus 1/(1 + delta)."""
    lcu = amplitude_damping_lcu(delta)
    return SuccessComparison(
        standard=standard_lcu_success(stinespring_alphas(delta)), new=lcu.p
    )


def redundant_unitary_lcu(u: PauliString, weight: float) -> ChannelLCU:
    """A single-row LCU of the unitary channel rho -> u rho u^dag with s_0 = weight.

    The row is (weight/2) e^{i phi} u + (weight/2) e^{-i phi} u with
    cos(phi) = 1/weight, which sums to u. The channel is exactly trace
    preserving and p = 1/weight^2.
    """
    if weight < 1.0:
        msg = f"a unitary row needs weight at least 1, got {weight}"
        raise ZeroWeightsError(msg)
    phi = math.acos(1.0 / weight)
    matrix = u.to_matrix()
    return ChannelLCU(
        (
            (
                LcuTerm(0.5 * weight, np.exp(1j * phi) * matrix),
                LcuTerm(0.5 * weight, np.exp(-1j * phi) * matrix),
            ),
        )
    )
