"""Quantum channels as Kraus operators, superoperators and Choi matrices.

Conventions:

- Operators are vectorized by stacking columns: vec(|i><j|) = e_{i + d*j}.
  With this convention vec(A X B) = (B^T (x) A) vec(X), so a Kraus channel
  {A_k} has the superoperator sum_k conj(A_k) (x) A_k.
- The Choi matrix is unnormalized, output factor first:
  J(T) = sum_ij T(|i><j|) (x) |i><j|.

Diamond norms are never computed exactly. diamond_bounds() returns a sandwich
lower <= ||T||_diamond <= upper, with the upper bound from the trace norm of
the Choi matrix and the lower bound from a seeded ascent over entangled pure
inputs.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from typing import NamedTuple
from typing import TYPE_CHECKING

import numpy as np
from typing_extensions import Self

from lindblad2lcu._internal.numerics import as_matrix
from lindblad2lcu._internal.numerics import check_square
from lindblad2lcu._internal.numerics import dagger
from lindblad2lcu._internal.numerics import DimensionMismatchError
from lindblad2lcu._internal.numerics import expm
from lindblad2lcu._internal.numerics import partial_trace
from lindblad2lcu._internal.numerics import spectral_norm
from lindblad2lcu._internal.numerics import trace_norm

if TYPE_CHECKING:
    from typing import Iterable
    from typing import Sequence

    import numpy.typing as npt

    from lindblad2lcu._internal.numerics import ComplexMatrix
    from lindblad2lcu.pauli import LindbladSpec

_LOG = logging.getLogger(__name__)

TP_ATOL = 1e-10
# ||T||_diamond <= (1 + 4(e - 2)) (delta * ops_norm)^2 for T = M_delta - e^{delta L}
M_DELTA_CONSTANT = 1.0 + 4.0 * (math.e - 2.0)
# ||T||_diamond <= (e - 2) (2 delta ops_norm)^2 for T = e^{delta L} - (1 + delta L)
FIRST_ORDER_CONSTANT = 4.0 * (math.e - 2.0)


class Error(Exception):
    """The top-level class for errors produced by this module."""


class NegativeTimeError(Error, ValueError):
    """An evolution time was negative."""


def vec(rho: npt.ArrayLike) -> npt.NDArray[np.complex128]:
    """Column-stacking vectorization."""
    return as_matrix(rho).reshape(-1, order="F")


def unvec(v: npt.ArrayLike, dim: int) -> ComplexMatrix:
    """Inverse of vec()."""
    return np.asarray(v, dtype=np.complex128).reshape(dim, dim, order="F")


@dataclasses.dataclass(frozen=True)
class Superoperator:
    """A linear map on d x d operators, acting on column-stacked vectors."""

    dim: int
    matrix: ComplexMatrix = dataclasses.field(repr=False)

    def __post_init__(self) -> None:
        if self.matrix.shape != (self.dim**2, self.dim**2):
            msg = (
                f"superoperator on dimension {self.dim} needs a "
                f"{self.dim**2}x{self.dim**2} matrix, got {self.matrix.shape}"
            )
            raise DimensionMismatchError(msg)

    @classmethod
    def identity(cls, dim: int) -> Self:
        """The identity map."""
        return cls(dim, np.eye(dim * dim, dtype=np.complex128))

    @classmethod
    def conjugation(cls, u: npt.ArrayLike) -> Self:
        """The map rho -> u rho u^dagger."""
        a = as_matrix(u)
        return cls(check_square(a), np.kron(a.conj(), a))

    def _check_compatible(self, other: Superoperator) -> None:
        if other.dim != self.dim:
            msg = f"cannot combine superoperators on {self.dim} and {other.dim}"
            raise DimensionMismatchError(msg)

    def __add__(self, other: Superoperator) -> Superoperator:
        self._check_compatible(other)
        return Superoperator(self.dim, self.matrix + other.matrix)

    def __sub__(self, other: Superoperator) -> Superoperator:
        self._check_compatible(other)
        return Superoperator(self.dim, self.matrix - other.matrix)

    def __mul__(self, factor: complex) -> Superoperator:
        return Superoperator(self.dim, self.matrix * factor)

    __rmul__ = __mul__

    def __matmul__(self, other: Superoperator) -> Superoperator:
        """Composition: (self @ other)(rho) = self(other(rho))."""
        self._check_compatible(other)
        return Superoperator(self.dim, self.matrix @ other.matrix)

    def power(self, k: int) -> Superoperator:
        """k-fold composition."""
        return Superoperator(self.dim, np.linalg.matrix_power(self.matrix, k))

    def apply(self, rho: npt.ArrayLike) -> ComplexMatrix:
        """The image of an operator."""
        return unvec(self.matrix @ vec(rho), self.dim)

    def adjoint_apply(self, x: npt.ArrayLike) -> ComplexMatrix:
        """The image under the Hilbert-Schmidt adjoint map."""
        return unvec(self.matrix.conj().T @ vec(x), self.dim)

    def tp_defect(self) -> float:
        """||T^dagger(I) - I||; zero for a trace preserving map."""
        identity = np.eye(self.dim, dtype=np.complex128)
        return spectral_norm(self.adjoint_apply(identity) - identity)


@dataclasses.dataclass(frozen=True)
class KrausChannel:
    """A completely positive map rho -> sum_k A_k rho A_k^dagger."""

    operators: tuple[ComplexMatrix, ...]

    def __post_init__(self) -> None:
        if not self.operators:
            msg = "a Kraus channel needs at least one operator"
            raise DimensionMismatchError(msg)
        dims = {check_square(a) for a in self.operators}
        if len(dims) != 1:
            msg = f"Kraus operators have different dimensions: {sorted(dims)}"
            raise DimensionMismatchError(msg)

    @classmethod
    def of(cls, operators: Iterable[npt.ArrayLike]) -> Self:
        """Builds a channel from array-likes."""
        return cls(tuple(as_matrix(a) for a in operators))

    @property
    def dim(self) -> int:
        """The system dimension."""
        return int(self.operators[0].shape[0])

    def kraus_sum(self) -> ComplexMatrix:
        """sum_k A_k^dagger A_k."""
        return np.asarray(
            sum(dagger(a) @ a for a in self.operators), dtype=np.complex128
        )

    def tp_defect(self) -> float:
        """||sum_k A_k^dagger A_k - I||."""
        return spectral_norm(self.kraus_sum() - np.eye(self.dim))

    def is_trace_preserving(self, atol: float = TP_ATOL) -> bool:
        """Whether tp_defect() is within atol."""
        return self.tp_defect() <= atol

    def apply(self, rho: npt.ArrayLike) -> ComplexMatrix:
        """The image of an operator."""
        r = as_matrix(rho)
        return np.asarray(
            sum(a @ r @ dagger(a) for a in self.operators), dtype=np.complex128
        )


@dataclasses.dataclass(frozen=True)
class ChoiMatrix:
    """J(T) = sum_ij T(|i><j|) (x) |i><j|, output factor first."""

    dim: int
    matrix: ComplexMatrix = dataclasses.field(repr=False)

    def is_hermitian(self, atol: float = 1e-10) -> bool:
        """Whether J is Hermitian, i.e. T preserves Hermiticity."""
        return bool(np.max(np.abs(self.matrix - dagger(self.matrix))) <= atol)

    def min_eigenvalue(self) -> float:
        """The least eigenvalue of the Hermitian part of J."""
        h = 0.5 * (self.matrix + dagger(self.matrix))
        return float(np.linalg.eigvalsh(h)[0])

    def is_completely_positive(self, atol: float = 1e-10) -> bool:
        """Whether J is positive semidefinite."""
        return self.is_hermitian(atol) and self.min_eigenvalue() >= -atol

    def tp_defect(self) -> float:
        """||Tr_out J - I||; zero for a trace preserving map."""
        reduced = partial_trace(self.matrix, (self.dim, self.dim), keep=(1,))
        return spectral_norm(reduced - np.eye(self.dim))


def kraus_to_superop(c: KrausChannel) -> Superoperator:
    """sum_k conj(A_k) (x) A_k."""
    matrix = np.asarray(
        sum(np.kron(a.conj(), a) for a in c.operators), dtype=np.complex128
    )
    return Superoperator(c.dim, matrix)


def kraus_to_choi(c: KrausChannel) -> ChoiMatrix:
    """sum_k |A_k>><<A_k| with |A>> = sum_i A|i> (x) |i>."""
    d = c.dim
    matrix = np.zeros((d * d, d * d), dtype=np.complex128)
    for a in c.operators:
        v = a.reshape(-1)
        matrix += np.outer(v, v.conj())
    return ChoiMatrix(d, matrix)


def superop_to_choi(s: Superoperator) -> ChoiMatrix:
    """Reshuffles a superoperator into its Choi matrix."""
    d = s.dim
    # s.matrix[b*d + a, j*d + i] = <a| T(|i><j|) |b>
    tensor = s.matrix.reshape(d, d, d, d)
    return ChoiMatrix(d, tensor.transpose(1, 3, 0, 2).reshape(d * d, d * d))


def choi_to_superop(j: ChoiMatrix) -> Superoperator:
    """Inverse of superop_to_choi()."""
    d = j.dim
    tensor = j.matrix.reshape(d, d, d, d)
    return Superoperator(d, tensor.transpose(2, 0, 3, 1).reshape(d * d, d * d))


def lindblad_superop(spec: LindbladSpec) -> Superoperator:
    """The generator L as a superoperator.

    L = -i(I (x) H - H^T (x) I)
        + sum_j [conj(L_j) (x) L_j - 1/2 (I (x) L_j^dag L_j)
                 - 1/2 ((L_j^dag L_j)^T (x) I)]
    """
    d = spec.dim
    eye = np.eye(d, dtype=np.complex128)
    h = spec.h_matrix()
    matrix = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for jump in spec.jump_matrices():
        k = dagger(jump) @ jump
        matrix = matrix + np.kron(jump.conj(), jump)
        matrix = matrix - 0.5 * (np.kron(eye, k) + np.kron(k.T, eye))
    return Superoperator(d, np.asarray(matrix, dtype=np.complex128))


def exact_evolution(spec: LindbladSpec, t: float) -> Superoperator:
    """e^{tL}.

    Raises:
        NegativeTimeError: If t < 0.
    """
    if t < 0:
        msg = f"evolution time must be non-negative, got {t}"
        raise NegativeTimeError(msg)
    generator = lindblad_superop(spec)
    return Superoperator(generator.dim, expm(t * generator.matrix))


def first_order_map(spec: LindbladSpec, delta: float) -> Superoperator:
    """1 + delta L."""
    generator = lindblad_superop(spec)
    return Superoperator.identity(generator.dim) + generator * delta


def trace_distance(rho: npt.ArrayLike, sigma: npt.ArrayLike) -> float:
    """1/2 ||rho - sigma||_1."""
    return 0.5 * trace_norm(as_matrix(rho) - as_matrix(sigma))


class DiamondBounds(NamedTuple):
    """A certified interval lower <= ||T||_diamond <= upper."""

    lower: float
    upper: float


def _hermitian_part(x: ComplexMatrix) -> ComplexMatrix:
    return 0.5 * (x + dagger(x))


def _sign_projector(x: ComplexMatrix) -> ComplexMatrix:
    values, vectors = np.linalg.eigh(_hermitian_part(x))
    projector = (vectors * np.sign(values)) @ dagger(vectors)
    return np.asarray(projector, dtype=np.complex128)


def _top_eigenvector(g: ComplexMatrix) -> npt.NDArray[np.complex128]:
    _, vectors = np.linalg.eigh(_hermitian_part(g))
    return np.asarray(vectors[:, -1], dtype=np.complex128)


class _StabilizedObjective:
    # psi is a d x d amplitude matrix over (system, reference)
    def __init__(self, s: Superoperator) -> None:
        d = s.dim
        self.dim = d
        # tensor[x, y, a, b] = <x| T(|a><b|) |y>
        self.tensor = s.matrix.reshape(d, d, d, d, order="F")

    def output(self, psi: npt.NDArray[np.complex128]) -> ComplexMatrix:
        d = self.dim
        out = np.einsum("ai,bj,xyab->xiyj", psi, psi.conj(), self.tensor)
        return np.asarray(out.reshape(d * d, d * d), dtype=np.complex128)

    def gradient(self, sign: ComplexMatrix) -> ComplexMatrix:
        d = self.dim
        sign4 = sign.reshape(d, d, d, d)
        g = np.einsum("yjxi,xyab->bjai", sign4, self.tensor)
        return np.asarray(g.reshape(d * d, d * d), dtype=np.complex128)


def _ascend(
    value_of: _StabilizedObjective | _PlainObjective,
    start: npt.NDArray[np.complex128],
    iterations: int,
) -> float:
    psi = start / np.linalg.norm(start)
    shape = psi.shape
    best = 0.0
    for _ in range(iterations):
        out = value_of.output(psi)
        value = trace_norm(out)
        if value <= best + 1e-14 * max(1.0, best):
            best = max(best, value)
            break
        best = value
        psi = _top_eigenvector(value_of.gradient(_sign_projector(out))).reshape(shape)
    return best


class _PlainObjective:
    def __init__(self, s: Superoperator) -> None:
        self.superop = s

    def output(self, psi: npt.NDArray[np.complex128]) -> ComplexMatrix:
        return self.superop.apply(np.outer(psi, psi.conj()))

    def gradient(self, sign: ComplexMatrix) -> ComplexMatrix:
        return self.superop.adjoint_apply(sign)


def _random_start(
    rng: np.random.Generator, shape: tuple[int, ...]
) -> npt.NDArray[np.complex128]:
    z = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    return np.asarray(z, dtype=np.complex128)


def diamond_bounds(
    s: Superoperator,
    *,
    rng: np.random.Generator | None = None,
    restarts: int = 20,
    iterations: int = 50,
    refine: bool = True,
) -> DiamondBounds:
    """Sandwich bounds on the diamond norm of a superoperator.

    The upper bound is ||J(T)||_1, the lower bound starts at ||J(T)||_1 / d
    (the maximally entangled input) and is refined by an ascent over
    entangled pure inputs: each step replaces the input by the top
    eigenvector of (T^dagger (x) 1)(sign(output)). Every step evaluates the
    objective at a valid input, so the result remains a certified lower bound.

    Args:
        s: The superoperator. Typically a difference of two channels.
        rng: The source of random restarts. Defaults to a generator seeded
            with 0, so that results are reproducible.
        restarts: Number of random starting inputs.
        iterations: Maximum ascent steps per start.
        refine: If false, skip the ascent and return the sandwich only.

    Returns:
        A DiamondBounds with lower <= upper.
    """
    d = s.dim
    upper = trace_norm(superop_to_choi(s).matrix)
    lower = upper / d
    if not refine or upper == 0.0:
        return DiamondBounds(min(lower, upper), upper)
    rng = rng if rng is not None else np.random.default_rng(0)
    objective = _StabilizedObjective(s)
    starts = [np.eye(d, dtype=np.complex128)]
    starts += [_random_start(rng, (d, d)) for _ in range(restarts)]
    for start in starts:
        lower = max(lower, _ascend(objective, start, iterations))
    lower = min(lower, upper)
    _LOG.debug("diamond bounds on d=%d: [%.6g, %.6g]", d, lower, upper)
    return DiamondBounds(lower, upper)


def induced_trace_norm_lower(
    s: Superoperator,
    *,
    rng: np.random.Generator | None = None,
    restarts: int = 20,
    iterations: int = 50,
) -> float:
    """A lower bound on max ||T(rho)||_1 over density matrices (no reference)."""
    rng = rng if rng is not None else np.random.default_rng(0)
    objective = _PlainObjective(s)
    best = 0.0
    starts = [np.eye(s.dim, dtype=np.complex128)[:, i] for i in range(s.dim)]
    starts += [_random_start(rng, (s.dim,)) for _ in range(restarts)]
    for start in starts:
        best = max(best, _ascend(objective, start, iterations))
    return best


def compose_all(maps: Sequence[Superoperator], dim: int) -> Superoperator:
    """maps[-1] @ ... @ maps[0], i.e. maps[0] is applied first."""
    out = Superoperator.identity(dim)
    for m in maps:
        out = m @ out
    return out
