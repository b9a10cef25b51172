"""Lindblad evolution by repeated ancilla reset and joint Hamiltonian evolution.

With an ancilla of dimension m + 1, the Hermitian block matrix

    J = sum_j |0><j| (x) L_j^dag + |j><0| (x) L_j

generates the dissipative part: resetting the ancilla to |0>, evolving by
e^{-iJ sqrt(tau)} and tracing the ancilla out is e^{tau L} up to O(tau^2).
Repeating this N times approximates e^{tL}, but the error only falls like
a power of 1/N, and the total joint evolution time N sqrt(t/N) grows like
sqrt(N). This module measures both effects.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from typing import NamedTuple
from typing import TYPE_CHECKING

import numpy as np

from lindblad2lcu._internal.numerics import dagger
from lindblad2lcu._internal.numerics import expm
from lindblad2lcu._internal.numerics import spectral_norm
from lindblad2lcu._internal.numerics import trace_norm
from lindblad2lcu.channels import diamond_bounds
from lindblad2lcu.channels import exact_evolution
from lindblad2lcu.channels import induced_trace_norm_lower
from lindblad2lcu.channels import KrausChannel
from lindblad2lcu.channels import kraus_to_superop
from lindblad2lcu.channels import NegativeTimeError
from lindblad2lcu.channels import Superoperator
from lindblad2lcu.channels import superop_to_choi

if TYPE_CHECKING:
    from lindblad2lcu._internal.numerics import ComplexMatrix
    from lindblad2lcu.channels import DiamondBounds
    from lindblad2lcu.pauli import LindbladSpec

_LOG = logging.getLogger(__name__)

HERMITIAN_ATOL = 1e-10
NORM_ATOL = 1e-9


class Error(Exception):
    """The top-level class for errors produced by this module."""


class NonHermitianError(Error, ValueError):
    """A dilation Hamiltonian is not Hermitian."""


class NotNormalizedHamiltonianError(Error, ValueError):
    """A joint Hamiltonian does not have spectral norm 1."""


class InvalidStagesError(Error, ValueError):
    """The number of stages was not a positive integer."""


class NoPassingDeltaError(Error):
    """No evolution time per stage passes the discretization check."""


@dataclasses.dataclass(frozen=True)
class DilationSpec:
    """The J matrix of a Lindbladian and its system Hamiltonian.

    Attributes:
        system_dim: 2^n.
        ancilla_dim: m + 1.
        j: J on ancilla (x) system.
        h_sys: The system Hamiltonian.
    """

    system_dim: int
    ancilla_dim: int
    j: ComplexMatrix = dataclasses.field(repr=False)
    h_sys: ComplexMatrix = dataclasses.field(repr=False)

    def __post_init__(self) -> None:
        for name, m in (("J", self.j), ("H", self.h_sys)):
            if np.max(np.abs(m - dagger(m)), initial=0.0) > HERMITIAN_ATOL:
                msg = f"{name} is not Hermitian"
                raise NonHermitianError(msg)

    @property
    def dims(self) -> tuple[int, int]:
        return (self.ancilla_dim, self.system_dim)


def build_j(spec: LindbladSpec) -> DilationSpec:
    """The Hermitian J of a spec.

    Its first block row is (0, L_1^dag, ..., L_m^dag), its first block column
    is (0, L_1, ..., L_m), and every other block is zero.
    """
    d = spec.dim
    a = spec.m + 1
    j = np.zeros((a * d, a * d), dtype=np.complex128)
    for k, jump in enumerate(spec.jump_matrices(), start=1):
        j[0:d, k * d : (k + 1) * d] = dagger(jump)
        j[k * d : (k + 1) * d, 0:d] = jump
    return DilationSpec(system_dim=d, ancilla_dim=a, j=j, h_sys=spec.h_matrix())


def _reset_and_trace(
    joint_unitary: ComplexMatrix, dims: tuple[int, int]
) -> list[ComplexMatrix]:
    # Kraus operators (<a| (x) I) U (|0> (x) I)
    a, s = dims
    blocks = joint_unitary.reshape(a, s, a, s)
    return [np.asarray(blocks[k, :, 0, :], dtype=np.complex128) for k in range(a)]


def dilation_channel(
    h_joint: ComplexMatrix, dims: tuple[int, int], delta: float
) -> Superoperator:
    """N_{H delta}: rho -> Tr_anc[e^{-iH delta} (|0><0| (x) rho) e^{iH delta}]."""
    unitary = expm(-1j * delta * np.asarray(h_joint, dtype=np.complex128))
    return kraus_to_superop(KrausChannel(tuple(_reset_and_trace(unitary, dims))))


def fig1_step(d: DilationSpec, tau: float) -> Superoperator:
    """One stage: reset, e^{-iJ sqrt(tau)}, e^{-iH tau}, trace out the ancilla."""
    if tau < 0:
        msg = f"stage time must be non-negative, got {tau}"
        raise NegativeTimeError(msg)
    joint = expm(-1j * math.sqrt(tau) * d.j)
    system = expm(-1j * tau * d.h_sys)
    ops = tuple(system @ k for k in _reset_and_trace(joint, d.dims))
    return kraus_to_superop(KrausChannel(ops))


def fig1_evolve(d: DilationSpec, t: float, stages: int) -> Superoperator:
    """stages repetitions of fig1_step(d, t / stages).

    Raises:
        InvalidStagesError: If stages < 1.
        NegativeTimeError: If t < 0.
    """
    if stages < 1:
        msg = f"need at least one stage, got {stages}"
        raise InvalidStagesError(msg)
    return fig1_step(d, t / stages).power(stages)


@dataclasses.dataclass(frozen=True)
class DiscretizationResult:
    """Per-stage comparison of (N_{H delta})^k against e^{(kT/N) L}.

    Attributes:
        stages: N.
        delta: Joint evolution time per stage, in units where ||H|| = 1.
        per_stage_errors: Diamond bounds for k = 1..N.
        eps: The precision checked against.
    """

    stages: int
    delta: float
    per_stage_errors: tuple[DiamondBounds, ...]
    eps: float

    @property
    def total_time(self) -> float:
        return self.stages * self.delta

    @property
    def passed(self) -> bool:
        """Every upper bound is within eps."""
        return all(b.upper <= self.eps for b in self.per_stage_errors)

    @property
    def certified_fail(self) -> bool:
        """Some lower bound exceeds eps."""
        return any(b.lower > self.eps for b in self.per_stage_errors)

    @property
    def worst_upper(self) -> float:
        return max(b.upper for b in self.per_stage_errors)


def normalized_j(d: DilationSpec) -> tuple[ComplexMatrix, float]:
    """(J / ||J||, ||J||), or (J, 0) when J = 0."""
    norm = spectral_norm(d.j)
    if norm == 0:
        return d.j, 0.0
    return d.j / norm, norm


def discretization_check(
    d: DilationSpec,
    spec: LindbladSpec,
    t: float,
    stages: int,
    delta: float,
    eps: float,
    *,
    refine: bool = False,
    restarts: int = 20,
    iterations: int = 50,
) -> DiscretizationResult:
    """Checks ||(N_{H delta})^k - e^{(kt/N) L}||_diamond <= eps for k = 1..N.

    H = J / ||J||. If the system Hamiltonian is nonzero, each stage is
    followed by e^{-iH_sys t/N}.

    Every stage gets the Choi sandwich. With refine, the stage with the
    largest upper bound above eps also gets the ascent lower bound, unless
    some stage is already certified to fail.

    Raises:
        InvalidStagesError: If stages < 1.
    """
    if stages < 1:
        msg = f"need at least one stage, got {stages}"
        raise InvalidStagesError(msg)
    if delta < 0:
        msg = f"delta must be non-negative, got {delta}"
        raise ValueError(msg)
    h_joint, _ = normalized_j(d)
    stage = dilation_channel(h_joint, d.dims, delta)
    if np.any(d.h_sys):
        stage = Superoperator.conjugation(expm(-1j * (t / stages) * d.h_sys)) @ stage
    exact = exact_evolution(spec, t / stages)
    approx_k = Superoperator.identity(d.system_dim)
    exact_k = Superoperator.identity(d.system_dim)
    diffs = []
    for _ in range(stages):
        approx_k = stage @ approx_k
        exact_k = exact @ exact_k
        diffs.append(approx_k - exact_k)
    errors = [diamond_bounds(diff, refine=False) for diff in diffs]
    result = DiscretizationResult(stages, delta, tuple(errors), eps)
    if not refine or result.certified_fail:
        return result
    worst = max(range(stages), key=lambda k: errors[k].upper)
    if errors[worst].upper <= eps:
        return result
    errors[worst] = diamond_bounds(
        diffs[worst], restarts=restarts, iterations=iterations
    )
    return DiscretizationResult(stages, delta, tuple(errors), eps)


class ScanResult(NamedTuple):
    """The bracket of a bisection scan around the least passing delta.

    Attributes:
        delta_star: The smallest delta found that is certified to pass.
        delta_fail: The largest delta below delta_star found that is
            certified to fail, or 0 if not even delta = 0 is.
        total_time: stages * delta_star.
        stages: N.
        total_time_fail: stages * delta_fail.
    """

    delta_star: float
    delta_fail: float
    total_time: float
    stages: int
    total_time_fail: float = 0.0


def min_delta_scan(
    spec: LindbladSpec,
    t: float,
    stages: int,
    eps: float,
    *,
    rtol: float = 1e-4,
    max_expansions: int = 40,
    restarts: int = 20,
    iterations: int = 50,
) -> ScanResult:
    """Brackets the least per-stage joint evolution time that passes.

    The search starts at delta = sqrt(t/N) ||J||, the time that reproduces
    one reset-interleaved step, and doubles it until the check passes. A
    bisection on the upper bounds then finds delta_star. A second bisection
    on [0, delta_star] with refined lower bounds finds delta_fail, so that
    every delta reported as failing is certified to fail.

    Raises:
        NoPassingDeltaError: If no delta in the bracket passes.
    """
    d = build_j(spec)

    def passes(delta: float) -> bool:
        return discretization_check(d, spec, t, stages, delta, eps).passed

    def fails(delta: float) -> bool:
        return discretization_check(
            d,
            spec,
            t,
            stages,
            delta,
            eps,
            refine=True,
            restarts=restarts,
            iterations=iterations,
        ).certified_fail

    if passes(0.0):
        return ScanResult(0.0, 0.0, 0.0, stages)
    _, norm = normalized_j(d)
    if norm == 0:
        msg = "J is zero and delta = 0 does not pass"
        raise NoPassingDeltaError(msg)
    lo = 0.0
    hi = math.sqrt(t / stages) * norm
    for _ in range(max_expansions):
        if passes(hi):
            break
        lo, hi = hi, 2.0 * hi
    else:
        msg = f"no delta up to {hi:.3g} passes for N={stages}, eps={eps}"
        raise NoPassingDeltaError(msg)
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if passes(mid):
            hi = mid
        else:
            lo = mid
    delta_star = hi
    if not fails(0.0):
        _LOG.warning("N=%d: not even delta = 0 is certified to fail", stages)
        return ScanResult(delta_star, 0.0, stages * delta_star, stages)
    lo, hi = 0.0, delta_star
    while hi - lo > rtol * delta_star:
        mid = 0.5 * (lo + hi)
        if fails(mid):
            lo = mid
        else:
            hi = mid
    _LOG.debug("N=%d: delta in (%.6g, %.6g]", stages, lo, delta_star)
    return ScanResult(delta_star, lo, stages * delta_star, stages, stages * lo)


class LocalApproxResult(NamedTuple):
    """The distance between N_{H delta} and the system-only N_{G delta}.

    Attributes:
        dist: A lower bound on the induced trace norm distance.
        g: The (0, 0) block of H.
        choi_upper: The Choi trace norm upper bound on the diamond distance.
    """

    dist: float
    g: ComplexMatrix
    choi_upper: float


def local_approx_compare(
    h_joint: ComplexMatrix,
    dims: tuple[int, int],
    delta: float,
    *,
    rng: np.random.Generator | None = None,
) -> LocalApproxResult:
    """Compares the dilation channel with evolution by its (0, 0) block.

    Raises:
        NotNormalizedHamiltonianError: If ||h_joint|| differs from 1.
    """
    h = np.asarray(h_joint, dtype=np.complex128)
    norm = spectral_norm(h)
    if abs(norm - 1.0) > NORM_ATOL:
        msg = f"the joint Hamiltonian must have norm 1, got {norm}"
        raise NotNormalizedHamiltonianError(msg)
    a, s = dims
    g = np.asarray(h.reshape(a, s, a, s)[0, :, 0, :], dtype=np.complex128)
    diff = dilation_channel(h, dims, delta) - Superoperator.conjugation(
        expm(-1j * delta * g)
    )
    upper = trace_norm(superop_to_choi(diff).matrix)
    dist = 0.0 if upper == 0 else induced_trace_norm_lower(diff, rng=rng)
    return LocalApproxResult(dist, g, upper)


def random_joint_hamiltonian(
    rng: np.random.Generator, dims: tuple[int, int]
) -> ComplexMatrix:
    """A random Hermitian matrix on ancilla (x) system with spectral norm 1."""
    size = dims[0] * dims[1]
    z = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    h = 0.5 * (z + dagger(z))
    return np.asarray(h / spectral_norm(h), dtype=np.complex128)
