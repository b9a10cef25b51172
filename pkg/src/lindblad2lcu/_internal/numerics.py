"""Dense linear algebra helpers.

Everything in lindblad2lcu is represented as dense numpy arrays of complex128.
Operators are square matrices, states are 1-d arrays, and composite systems are
ordered left to right (the first factor of a tensor product is the most
significant index), matching numpy.kron.
"""

from __future__ import annotations

from functools import reduce
import math
from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt
from scipy.linalg import svdvals
from typing_extensions import TypeAlias

if TYPE_CHECKING:
    from typing import Iterable
    from typing import Sequence

ComplexMatrix: TypeAlias = npt.NDArray[np.complex128]
"""A dense complex matrix."""
StateVector: TypeAlias = npt.NDArray[np.complex128]
"""A dense complex vector."""

MIN_FIT_POINTS = 3


class Error(Exception):
    """The top-level class for errors produced by this module."""


class NonSquareError(Error, ValueError):
    """A square matrix was required."""


class DimensionMismatchError(Error, ValueError):
    """Declared tensor factor dimensions do not match an operand."""


class NotNormalizedError(Error, ValueError):
    """A unit vector was required."""


class NonPositiveDataError(Error, ValueError):
    """Log-log fitting was given data that is not strictly positive."""


class TooFewPointsError(Error, ValueError):
    """Log-log fitting was given fewer than MIN_FIT_POINTS distinct x values."""


def as_matrix(m: npt.ArrayLike) -> ComplexMatrix:
    """Returns a complex128 copy of a 2-d array."""
    return np.array(m, dtype=np.complex128, ndmin=2)


def check_square(m: npt.NDArray[np.generic]) -> int:
    """Returns the dimension of a square matrix.

    Raises:
        NonSquareError: If the argument is not a square 2-d array.
    """
    if m.ndim != 2 or m.shape[0] != m.shape[1]:  # noqa: PLR2004
        msg = f"expected a square matrix, got shape {m.shape}"
        raise NonSquareError(msg)
    return int(m.shape[0])


def kron(*factors: npt.ArrayLike) -> ComplexMatrix:
    """Tensor product of any number of factors, first factor most significant."""
    return reduce(np.kron, (as_matrix(f) for f in factors), as_matrix(1.0))


def dagger(m: ComplexMatrix) -> ComplexMatrix:
    """Conjugate transpose."""
    return m.conj().T


def expm(m: npt.ArrayLike, tol: float = 1e-12) -> ComplexMatrix:
    """Matrix exponential by truncated Taylor series with scaling and squaring.

    The matrix is scaled by 2**-s until its spectral norm is at most 1/2, the
    Taylor series is summed until the next term's Frobenius norm drops below
    tol * 2**-s, and the result is squared s times.

    Args:
        m: A square matrix.
        tol: Truncation tolerance for the Taylor series.

    Returns:
        exp(m).

    Raises:
        NonSquareError: If m is not square.
    """
    a = as_matrix(m)
    dim = check_square(a)
    norm = spectral_norm(a)
    s = 0 if norm <= 0.5 else math.ceil(math.log2(norm / 0.5))  # noqa: PLR2004
    a = a / (2.0**s)
    result = np.eye(dim, dtype=np.complex128)
    term = np.eye(dim, dtype=np.complex128)
    threshold = tol * 2.0**-s
    for k in range(1, 200):
        term = term @ a / k
        result = result + term
        if np.linalg.norm(term) < threshold:
            break
    for _ in range(s):
        result = result @ result
    return result


def spectral_norm(m: npt.ArrayLike) -> float:
    """The largest singular value."""
    a = as_matrix(m)
    if a.size == 0:
        return 0.0
    return float(svdvals(a)[0])


def trace_norm(m: npt.ArrayLike) -> float:
    """The sum of singular values."""
    a = as_matrix(m)
    if a.size == 0:
        return 0.0
    return float(np.sum(svdvals(a)))


def partial_trace(
    m: npt.ArrayLike, dims: Sequence[int], keep: Iterable[int]
) -> ComplexMatrix:
    """Trace out every tensor factor not listed in keep.

    Args:
        m: An operator on the product space with factor dimensions dims.
        dims: The dimension of each tensor factor, most significant first.
        keep: Indexes (into dims) of the factors to keep. The kept factors
            retain their relative order.

    Returns:
        The reduced operator on the kept factors.

    Raises:
        DimensionMismatchError: If the factor dimensions do not multiply to
            the dimension of m, or keep names a factor that does not exist.
    """
    a = as_matrix(m)
    dim = check_square(a)
    if math.prod(dims) != dim:
        msg = f"factor dimensions {tuple(dims)} do not multiply to {dim}"
        raise DimensionMismatchError(msg)
    kept = sorted(set(keep))
    if any(i < 0 or i >= len(dims) for i in kept):
        msg = f"cannot keep factors {kept} of {len(dims)}"
        raise DimensionMismatchError(msg)
    n = len(dims)
    tensor = a.reshape(tuple(dims) * 2)
    row = list(range(n))
    col = [i if i not in kept else n + i for i in range(n)]
    out = kept + [n + i for i in kept]
    reduced = np.einsum(tensor, row + col, out)
    kept_dim = math.prod(dims[i] for i in kept)
    return np.asarray(reduced, dtype=np.complex128).reshape(kept_dim, kept_dim)


def unitary_from_first_column(v: npt.ArrayLike, atol: float = 1e-10) -> ComplexMatrix:
    """Complete a unit vector to a unitary whose first column is that vector.

    This uses a single Householder reflection, times a global phase.

    Raises:
        NotNormalizedError: If v is not a unit vector to within atol.
    """
    vec = np.array(v, dtype=np.complex128).reshape(-1)
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > atol:
        msg = f"expected a unit vector, got norm {norm}"
        raise NotNormalizedError(msg)
    dim = vec.shape[0]
    phase = vec[0] / abs(vec[0]) if abs(vec[0]) > 0 else 1.0
    # y is v with the phase of its first entry removed, so y[0] is real
    y = vec * np.conj(phase)
    u = -y
    u[0] += 1.0
    u_norm = float(np.linalg.norm(u))
    if u_norm < 1e-15:  # noqa: PLR2004
        return phase * np.eye(dim, dtype=np.complex128)
    u = u / u_norm
    householder = np.eye(dim, dtype=np.complex128) - 2.0 * np.outer(u, u.conj())
    return phase * householder


def slope_fit(points: Iterable[tuple[float, float]]) -> tuple[float, float]:
    """Least-squares line through (log x, log y).

    Returns:
        (slope, intercept) of the fitted line.

    Raises:
        NonPositiveDataError: If any coordinate is not strictly positive.
        TooFewPointsError: If fewer than MIN_FIT_POINTS distinct x values
            are given.
    """
    data = np.array(list(points), dtype=np.float64).reshape(-1, 2)
    if np.any(data <= 0) or not np.all(np.isfinite(data)):
        msg = f"log-log fit needs strictly positive finite data, got {data.tolist()}"
        raise NonPositiveDataError(msg)
    distinct = len(np.unique(data[:, 0]))
    if distinct < MIN_FIT_POINTS:
        msg = f"log-log fit needs {MIN_FIT_POINTS} distinct x values, got {distinct}"
        raise TooFewPointsError(msg)
    slope, intercept = np.polyfit(np.log(data[:, 0]), np.log(data[:, 1]), 1)
    return float(slope), float(intercept)


def random_unit_vector(rng: np.random.Generator, dim: int) -> StateVector:
    """A Haar-random unit vector."""
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return np.asarray(v / np.linalg.norm(v), dtype=np.complex128)
