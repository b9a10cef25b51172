"""Ancilla truncation and the gate counting model.

Within a segment, each of the r (indicator, purifier) register pairs reads
(0, 0) after multi-B with probability s_0 / sum_j s_j^2. The number of pairs
that do not is binomial, and for large r it is close to Poisson with mean
3/2. Keeping only ancilla states of Hamming weight at most h therefore costs
a Poisson tail, and h = O(log(1/eps) / log log(1/eps)) suffices.

The counting model charges every multiplexed gate and register with unit
constants. It is meant to be audited, not to predict wall-clock cost.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from typing import Any
from typing import TYPE_CHECKING

from scipy import stats

from lindblad2lcu.pauli import pauli_norm

if TYPE_CHECKING:
    from lindblad2lcu.oaa import SegmentPlan
    from lindblad2lcu.pauli import LindbladSpec

_LOG = logging.getLogger(__name__)

POISSON_LAMBDA = 1.5
# unit cost of one controlled Pauli inside a multiplexed-U gate
C_U = 1


class Error(Exception):
    """The top-level class for errors produced by this module."""


class InvalidPrecisionError(Error, ValueError):
    """A precision outside (0, 1) was requested."""


class TruncationError(Error, ValueError):
    """A truncation weight outside [0, r] was requested."""


def poisson_tail(h: int, lam: float = POISSON_LAMBDA) -> float:
    """P[K > h] for K ~ Poisson(lam)."""
    return float(stats.poisson.sf(h, lam))


def poisson_h(eps: float, lam: float = POISSON_LAMBDA) -> int:
    """The smallest h with poisson_tail(h) <= eps.

    Raises:
        InvalidPrecisionError: If eps is not in (0, 1).
    """
    if not 0.0 < eps < 1.0:
        msg = f"precision must be in (0, 1), got {eps}"
        raise InvalidPrecisionError(msg)
    h = 0
    while poisson_tail(h, lam) > eps:
        h += 1
    return h


def _row_sums(spec: LindbladSpec, delta: float) -> tuple[float, float]:
    c0 = spec.hamiltonian.weight
    jump_sq = math.fsum(j.weight**2 for j in spec.jumps)
    s0 = 1.0 + 0.5 * delta * jump_sq + delta * c0
    return s0, s0 * s0 + delta * jump_sq


def not00_probability(spec: LindbladSpec, delta: float) -> float:
    """1 - s_0 / sum_j s_j^2, the chance a register pair leaves (0, 0)."""
    if delta < 0:
        msg = f"delta must be non-negative, got {delta}"
        raise ValueError(msg)
    s0, total = _row_sums(spec, delta)
    return 1.0 - s0 / total


def not00_bound(spec: LindbladSpec, delta: float) -> float:
    """(3/2) delta P + (delta P)^2, an upper bound on not00_probability()."""
    dp = delta * pauli_norm(spec)
    return 1.5 * dp + dp * dp


def truncate_ancilla(plan: SegmentPlan, h: int) -> SegmentPlan:
    """The same segment, restricted to ancilla Hamming weight at most h.

    Raises:
        TruncationError: If h is not in [0, plan.r].
    """
    if not 0 <= h <= plan.r:
        msg = f"truncation weight must be in [0, {plan.r}], got {h}"
        raise TruncationError(msg)
    return dataclasses.replace(plan, h=h)


def truncation_mass(plan: SegmentPlan) -> float:
    """The squared amplitude discarded by truncating the multi-B output.

    The multi-B layer prepares a product state, so the weight is
    Binomial(r, 1 - s_0 / sum_j s_j^2).
    """
    if plan.h is None:
        return 0.0
    s = plan.lcu.s
    leave = 1.0 - s[0] / math.fsum(x * x for x in s)
    return float(stats.binom.sf(plan.h, plan.r, leave))


@dataclasses.dataclass(frozen=True)
class CostReport:
    """Register widths and gate counts for simulating e^{tL} to precision eps.

    Attributes:
        n: System qubits.
        m: Jump operators.
        q: Largest term count of a row.
        t: Evolution time.
        eps: Target precision.
        tau: t * pauli_norm.
        segments: ceil(tau / ln 2), at least 1.
        r: Steps per segment, ceil(2 segments / eps).
        h: Truncation weight, poisson_h(eps / (2 segments)).
        q_dim: Indicator alphabet size 1 + q + m q^2.
        register_bits: (a, b, c): widths of the compressed encoding of the
            positions, indicator values and purifier values of the h
            nonzero register pairs.
        multi_u_occurrences: multi-U gates per segment after compression.
        total_multi_u: multi-U gates over all segments.
        gate_count: Unit-cost gate count over all segments.
        truncation_eps: The Poisson tail that h was chosen against.
    """

    n: int
    m: int
    q: int
    t: float
    eps: float
    tau: float
    segments: int
    r: int
    h: int
    q_dim: int
    register_bits: tuple[int, int, int]
    multi_u_occurrences: int
    total_multi_u: int
    gate_count: int
    truncation_eps: float

    def to_dict(self) -> dict[str, Any]:
        """A flat mapping with the model constants named."""
        a, b, c = self.register_bits
        out = dataclasses.asdict(self)
        del out["register_bits"]
        out.update(
            {
                "bits_positions": a,
                "bits_indicator": b,
                "bits_purifier": c,
                "C_U": C_U,
                "poisson_lambda": POISSON_LAMBDA,
            }
        )
        return out


def _clog2(x: int) -> int:
    return math.ceil(math.log2(max(1, x)))


def cost_report(spec: LindbladSpec, t: float, eps: float) -> CostReport:
    """Counts the resources of simulating spec for time t to precision eps.

    Per segment, h multi-U gates each cost q_dim (ceil(log2 (m q_dim)) + n)
    C_U, and the encoder plus the two reflections cost 2 (a + b + c).

    Raises:
        InvalidPrecisionError: If eps is not in (0, 1).
    """
    if not 0.0 < eps < 1.0:
        msg = f"precision must be in (0, 1), got {eps}"
        raise InvalidPrecisionError(msg)
    if t < 0:
        msg = f"evolution time must be non-negative, got {t}"
        raise ValueError(msg)
    tau = t * pauli_norm(spec)
    segments = max(1, math.ceil(tau / math.log(2)))
    r = math.ceil(2 * segments / eps)
    truncation_eps = eps / (2 * segments)
    h = poisson_h(truncation_eps)
    q_dim = 1 + spec.q + spec.m * spec.q**2
    bits = (_clog2(r + 1) * h, _clog2(q_dim) * h, _clog2(spec.m + 1) * h)
    per_multi_u = q_dim * (_clog2(spec.m * q_dim) + spec.n) * C_U
    gate_count = segments * (h * per_multi_u + 2 * sum(bits))
    _LOG.debug(
        "cost for tau=%.4g eps=%.3g: %d segments, r=%d, h=%d, %d gates",
        tau,
        eps,
        segments,
        r,
        h,
        gate_count,
    )
    return CostReport(
        n=spec.n,
        m=spec.m,
        q=spec.q,
        t=t,
        eps=eps,
        tau=tau,
        segments=segments,
        r=r,
        h=h,
        q_dim=q_dim,
        register_bits=bits,
        multi_u_occurrences=h,
        total_multi_u=h * segments,
        gate_count=gate_count,
        truncation_eps=truncation_eps,
    )
