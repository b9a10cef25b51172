"""Pauli strings, their linear combinations, and Lindbladian specs.

A Lindbladian is given by a Hamiltonian H and jump operators L_1..L_m, each a
linear combination of Pauli strings with non-negative coefficients beta and a
phase folded into the Pauli string:

    H   = sum_k beta_0k * V_0k
    L_j = sum_k beta_jk * V_jk

where each V is a phased Pauli string e^{i theta} P_1 (x) ... (x) P_n.

Phases are stored exactly as a multiple of pi/2 (the "quarter") plus a residual
angle in [0, pi/2). Pauli products only ever produce multiples of pi/2, so
products and adjoints of unphased strings stay exact.

The spec file format is a JSON document:

    {"n": 1,
     "H": [{"beta": 0.5, "pauli": "Z"}],
     "L": [[{"beta": 0.5, "pauli": "X"},
            {"beta": 0.5, "pauli": "Y", "phase": 1.5707963267948966}]]}
"""

from __future__ import annotations

import dataclasses
from functools import reduce
import json
import logging
import math
from pathlib import Path
from typing import Any
from typing import cast
from typing import NamedTuple
from typing import TYPE_CHECKING
from typing import TypedDict

from cfgv import Array
from cfgv import check_int
from cfgv import check_string
from cfgv import check_type
from cfgv import Map
from cfgv import Optional
from cfgv import Required
from cfgv import RequiredRecurse
from cfgv import validate
from cfgv import ValidationError
import numpy as np
from typing_extensions import Self

from lindblad2lcu._internal.numerics import spectral_norm

if TYPE_CHECKING:
    from os import PathLike
    from typing import Iterable

    from lindblad2lcu._internal.numerics import ComplexMatrix

_LOG = logging.getLogger(__name__)

_QUARTER = math.pi / 2
# phases this close to a multiple of pi/2 are snapped to it
_SNAP = 1e-9
HERMITIAN_ATOL = 1e-10

_PHASES = (1.0 + 0j, 1j, -1.0 + 0j, -1j)

_LETTER_MATRICES = {
    "I": np.array([[1, 0], [0, 1]], dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}

# (a, b) -> (quarter, c) such that a @ b = i^quarter * c
_LETTER_PRODUCTS: dict[tuple[str, str], tuple[int, str]] = {
    ("X", "Y"): (1, "Z"),
    ("Y", "Z"): (1, "X"),
    ("Z", "X"): (1, "Y"),
    ("Y", "X"): (3, "Z"),
    ("Z", "Y"): (3, "X"),
    ("X", "Z"): (3, "Y"),
}


class Error(Exception):
    """The top-level class for errors produced by this module."""


class InvalidSpecError(Error, ValueError):
    """A Lindbladian spec is malformed or violates an invariant."""


class SpecSyntaxError(InvalidSpecError):
    """A spec document is not valid JSON."""

    def __init__(self, msg: str, *, line: int, column: int) -> None:
        """Constructs a SpecSyntaxError at the given 1-based position."""
        super().__init__(msg)
        self.line = line
        self.column = column


class NegativeBetaError(InvalidSpecError):
    """A coefficient beta was negative."""


class NonHermitianError(InvalidSpecError):
    """The Hamiltonian row is not Hermitian."""


class QubitCountError(InvalidSpecError):
    """Pauli strings of different lengths were combined."""


def _split_phase(theta: float) -> tuple[int, float]:
    turns = theta / _QUARTER
    nearest = round(turns)
    if abs(turns - nearest) * _QUARTER <= _SNAP:
        return nearest % 4, 0.0
    quarter = math.floor(turns)
    return quarter % 4, theta - quarter * _QUARTER


@dataclasses.dataclass(frozen=True)
class PauliString:
    """A phased Pauli string e^{i phase} P_1 (x) ... (x) P_n.

    Attributes:
        letters: One of "IXYZ" per qubit, qubit 0 first (most significant).
        quarter: The phase as a multiple of pi/2, in 0..3.
        residual: The remaining phase angle, in [0, pi/2).
    """

    letters: str
    quarter: int = 0
    residual: float = 0.0

    def __post_init__(self) -> None:
        if not self.letters:
            msg = "a Pauli string needs at least one qubit"
            raise ValueError(msg)
        if set(self.letters) - set(_LETTER_MATRICES):
            msg = f"invalid Pauli letters: {self.letters!r}"
            raise ValueError(msg)
        if self.quarter not in range(4):
            msg = f"quarter must be in 0..3, got {self.quarter}"
            raise ValueError(msg)
        if not 0.0 <= self.residual < _QUARTER:
            msg = f"residual phase must be in [0, pi/2), got {self.residual}"
            raise ValueError(msg)

    @classmethod
    def from_phase(cls, letters: str, phase: float = 0.0) -> Self:
        """Constructs a PauliString with an arbitrary real phase angle."""
        quarter, residual = _split_phase(phase)
        return cls(letters, quarter, residual)

    @property
    def n(self) -> int:
        """The number of qubits."""
        return len(self.letters)

    @property
    def phase(self) -> float:
        """The phase angle in [0, 2pi)."""
        return self.quarter * _QUARTER + self.residual

    @property
    def scalar(self) -> complex:
        """The phase factor e^{i phase}."""
        rotation = complex(math.cos(self.residual), math.sin(self.residual))
        return _PHASES[self.quarter] * rotation

    def adjoint(self) -> PauliString:
        """The conjugate transpose. Pauli letters are Hermitian."""
        if self.residual == 0.0:
            return PauliString(self.letters, (-self.quarter) % 4)
        quarter, residual = _split_phase(-self.residual)
        return PauliString(self.letters, (quarter - self.quarter) % 4, residual)

    def with_extra_phase(self, quarter: int) -> PauliString:
        """Returns this string multiplied by i^quarter."""
        return PauliString(self.letters, (self.quarter + quarter) % 4, self.residual)

    def to_matrix(self) -> ComplexMatrix:
        """The dense 2^n x 2^n matrix."""
        m = reduce(np.kron, (_LETTER_MATRICES[c] for c in self.letters))
        return np.asarray(m * self.scalar, dtype=np.complex128)

    def __str__(self) -> str:
        if self.quarter == 0 and self.residual == 0.0:
            return self.letters
        return f"e^(i{self.phase:.6g}){self.letters}"


def pauli_multiply(a: PauliString, b: PauliString) -> PauliString:
    """The product a @ b, with the phase tracked exactly.

    Raises:
        QubitCountError: If a and b act on different numbers of qubits.
    """
    if a.n != b.n:
        msg = f"cannot multiply Pauli strings on {a.n} and {b.n} qubits"
        raise QubitCountError(msg)
    quarter = a.quarter + b.quarter
    letters = []
    for x, y in zip(a.letters, b.letters):
        if x == "I":
            letters.append(y)
        elif y == "I":
            letters.append(x)
        elif x == y:
            letters.append("I")
        else:
            q, c = _LETTER_PRODUCTS[(x, y)]
            quarter += q
            letters.append(c)
    extra_quarter, residual = _split_phase(a.residual + b.residual)
    return PauliString("".join(letters), (quarter + extra_quarter) % 4, residual)


class Term(NamedTuple):
    """One term beta * V of a linear combination of Pauli strings."""

    beta: float
    pauli: PauliString


@dataclasses.dataclass(frozen=True)
class LinearCombinationOfPaulis:
    """sum_k beta_k V_k with beta_k >= 0 and phased Pauli strings V_k."""

    n: int
    terms: tuple[Term, ...] = ()

    def __post_init__(self) -> None:
        if self.n < 1:
            msg = f"qubit count must be positive, got {self.n}"
            raise QubitCountError(msg)
        for term in self.terms:
            if term.pauli.n != self.n:
                msg = (
                    f"term {term.pauli} acts on {term.pauli.n} qubits, "
                    f"expected {self.n}"
                )
                raise QubitCountError(msg)
            if not term.beta >= 0.0:
                msg = f"coefficients must be non-negative, got {term.beta}"
                raise NegativeBetaError(msg)

    @classmethod
    def of(cls, n: int, *terms: tuple[float, PauliString | str]) -> Self:
        """Shorthand constructor accepting plain letter strings."""
        return cls(
            n,
            tuple(
                Term(float(beta), p if isinstance(p, PauliString) else PauliString(p))
                for beta, p in terms
            ),
        )

    @property
    def weight(self) -> float:
        """The coefficient sum c = sum_k beta_k."""
        return math.fsum(term.beta for term in self.terms)

    def scaled(self, factor: float) -> LinearCombinationOfPaulis:
        """Multiplies every coefficient by a non-negative factor."""
        return LinearCombinationOfPaulis(
            self.n, tuple(Term(t.beta * factor, t.pauli) for t in self.terms)
        )

    def canonicalize(self) -> LinearCombinationOfPaulis:
        """Drops terms with beta = 0."""
        return LinearCombinationOfPaulis(
            self.n, tuple(t for t in self.terms if t.beta != 0.0)
        )

    def to_matrix(self) -> ComplexMatrix:
        """The dense matrix sum_k beta_k V_k (the zero matrix if empty)."""
        return lcp_to_matrix(self)


def lcp_to_matrix(c: LinearCombinationOfPaulis) -> ComplexMatrix:
    """The dense matrix of a linear combination of Pauli strings."""
    dim = 2**c.n
    out = np.zeros((dim, dim), dtype=np.complex128)
    for term in c.terms:
        out += term.beta * term.pauli.to_matrix()
    return out


@dataclasses.dataclass(frozen=True)
class LindbladSpec:
    """A Lindbladian given as Pauli decompositions of H and L_1..L_m.

    Attributes:
        n: The number of system qubits.
        hamiltonian: The j = 0 row. Must be Hermitian.
        jumps: The jump operators, rows j = 1..m. Each must be nonempty.
    """

    n: int
    hamiltonian: LinearCombinationOfPaulis
    jumps: tuple[LinearCombinationOfPaulis, ...] = ()

    def __post_init__(self) -> None:
        for row in (self.hamiltonian, *self.jumps):
            if row.n != self.n:
                msg = f"row acts on {row.n} qubits, spec declares {self.n}"
                raise QubitCountError(msg)
        for j, jump in enumerate(self.jumps, start=1):
            if not jump.terms:
                msg = f"jump operator {j} has no terms"
                raise InvalidSpecError(msg)
        h = self.hamiltonian.to_matrix()
        if np.max(np.abs(h - h.conj().T), initial=0.0) > HERMITIAN_ATOL:
            msg = "the Hamiltonian is not Hermitian"
            raise NonHermitianError(msg)

    @property
    def m(self) -> int:
        """The number of jump operators."""
        return len(self.jumps)

    @property
    def q(self) -> int:
        """The maximum term count over all rows."""
        return max((len(row.terms) for row in self.rows), default=0)

    @property
    def rows(self) -> tuple[LinearCombinationOfPaulis, ...]:
        """The Hamiltonian followed by the jumps."""
        return (self.hamiltonian, *self.jumps)

    @property
    def dim(self) -> int:
        """The system Hilbert space dimension 2^n."""
        return 2**self.n

    def h_matrix(self) -> ComplexMatrix:
        """The dense Hamiltonian."""
        return self.hamiltonian.to_matrix()

    def jump_matrices(self) -> list[ComplexMatrix]:
        """The dense jump operators, in order."""
        return [jump.to_matrix() for jump in self.jumps]

    def scaled(self, factor: float) -> LindbladSpec:
        """The spec of factor * L: H scales by factor, each L_j by sqrt(factor).

        Every norm in this module scales linearly under this operation.
        """
        if factor < 0:
            msg = f"scale factor must be non-negative, got {factor}"
            raise ValueError(msg)
        root = math.sqrt(factor)
        return LindbladSpec(
            self.n,
            self.hamiltonian.scaled(factor),
            tuple(jump.scaled(root) for jump in self.jumps),
        )

    def canonicalize(self) -> LindbladSpec:
        """Drops beta = 0 terms, and then jumps with no terms left."""
        jumps = tuple(j.canonicalize() for j in self.jumps)
        return LindbladSpec(
            self.n, self.hamiltonian.canonicalize(), tuple(j for j in jumps if j.terms)
        )


def pauli_norm(spec: LindbladSpec) -> float:
    """sum_k beta_0k + sum_j (sum_k beta_jk)^2."""
    return spec.hamiltonian.weight + math.fsum(j.weight**2 for j in spec.jumps)


def local_norm(spec: LindbladSpec) -> float:
    """sum_k beta_0k ||V_0k|| + sum_j ||L_j||^2, between ops_norm and pauli_norm."""
    return spec.hamiltonian.weight + math.fsum(
        spectral_norm(m) ** 2 for m in spec.jump_matrices()
    )


def ops_norm(spec: LindbladSpec) -> float:
    """||H|| + sum_j ||L_j||^2 in spectral norm."""
    return spectral_norm(spec.h_matrix()) + math.fsum(
        spectral_norm(m) ** 2 for m in spec.jump_matrices()
    )


class _TermDoc(TypedDict):
    beta: float
    pauli: str
    phase: float


class _SpecDoc(TypedDict):
    n: int
    H: list[_TermDoc]
    L: list[list[_TermDoc]]


_TERM_SCHEMA = Map(
    "Term",
    None,
    Required("beta", check_type((int, float), typename="number")),
    Required("pauli", check_string),
    Optional("phase", check_type((int, float), typename="number"), 0.0),
)

_SCHEMA = Map(
    "LindbladSpec",
    None,
    Required("n", check_int),
    RequiredRecurse("H", Array(_TERM_SCHEMA)),
    RequiredRecurse("L", Array(Array(_TERM_SCHEMA))),
)


def _term_from_doc(doc: _TermDoc) -> Term:
    try:
        pauli = PauliString.from_phase(doc["pauli"], float(doc.get("phase", 0.0)))
    except ValueError as ex:
        msg = f"invalid Pauli string {doc['pauli']!r}: {ex}"
        raise InvalidSpecError(msg) from ex
    return Term(float(doc["beta"]), pauli)


def _row_from_doc(n: int, docs: Iterable[_TermDoc]) -> LinearCombinationOfPaulis:
    return LinearCombinationOfPaulis(n, tuple(_term_from_doc(d) for d in docs))


def parse_spec(text: str) -> LindbladSpec:
    """Parses and validates a spec document.

    Args:
        text: The JSON text of the spec.

    Returns:
        A validated LindbladSpec. beta = 0 terms are retained; use
        LindbladSpec.canonicalize to drop them.

    Raises:
        SpecSyntaxError: If the text is not valid JSON.
        InvalidSpecError: If the document does not describe a valid spec.
            Subclasses identify negative coefficients, a non-Hermitian
            Hamiltonian and inconsistent qubit counts.
    """
    try:
        data: Any = json.loads(text)
    except json.JSONDecodeError as ex:
        msg = f"line {ex.lineno} column {ex.colno}: {ex.msg}"
        raise SpecSyntaxError(msg, line=ex.lineno, column=ex.colno) from ex
    try:
        validate(data, _SCHEMA)
    except ValidationError as ex:
        raise InvalidSpecError(str(ex)) from ex
    doc = cast(_SpecDoc, data)
    n = doc["n"]
    if n < 1:
        msg = f"qubit count must be positive, got {n}"
        raise QubitCountError(msg)
    for row in (doc["H"], *doc["L"]):
        for term in row:
            if len(term["pauli"]) != n:
                msg = f"Pauli string {term['pauli']!r} does not act on n={n} qubits"
                raise QubitCountError(msg)
    spec = LindbladSpec(
        n,
        _row_from_doc(n, doc["H"]),
        tuple(_row_from_doc(n, row) for row in doc["L"]),
    )
    _LOG.debug("parsed spec with n=%d m=%d q=%d", spec.n, spec.m, spec.q)
    return spec


def load_spec(path: str | PathLike[str]) -> LindbladSpec:
    """Reads and parses a UTF-8 spec file."""
    return parse_spec(Path(path).read_text(encoding="utf-8"))


def _term_to_doc(term: Term) -> dict[str, Any]:
    doc: dict[str, Any] = {"beta": term.beta, "pauli": term.pauli.letters}
    if term.pauli.quarter or term.pauli.residual:
        doc["phase"] = term.pauli.phase
    return doc


def dump_spec(spec: LindbladSpec) -> str:
    """Serializes a spec to deterministic JSON text accepted by parse_spec."""
    doc = {
        "n": spec.n,
        "H": [_term_to_doc(t) for t in spec.hamiltonian.terms],
        "L": [[_term_to_doc(t) for t in jump.terms] for jump in spec.jumps],
    }
    return json.dumps(doc, indent=2) + "\n"


def amplitude_damping(gamma: float = 1.0) -> LindbladSpec:
    """Single-qubit amplitude damping, L = sqrt(gamma) |0><1|, H = 0.

    |0><1| = (X + iY) / 2.
    """
    beta = 0.5 * math.sqrt(gamma)
    jump = LinearCombinationOfPaulis(
        1, (Term(beta, PauliString("X")), Term(beta, PauliString("Y", quarter=1)))
    )
    return LindbladSpec(1, LinearCombinationOfPaulis(1), (jump,))


def _random_letters(rng: np.random.Generator, n: int) -> str:
    return "".join(rng.choice(list("IXYZ"), size=n))


def random_spec(
    rng: np.random.Generator,
    *,
    n: int,
    m: int,
    q: int,
    ops_norm_at_most: float | None = None,
) -> LindbladSpec:
    """Samples a spec with q terms per row.

    Hamiltonian terms get phase 0 or pi, so H is Hermitian. Jump terms get
    uniformly random phases. If ops_norm_at_most is given, the spec is scaled
    so that ops_norm equals a uniformly random value in (0, ops_norm_at_most].
    """
    h_terms = tuple(
        Term(
            float(rng.uniform(0.1, 1.0)),
            PauliString(_random_letters(rng, n), quarter=2 * int(rng.integers(2))),
        )
        for _ in range(q)
    )
    jumps = tuple(
        LinearCombinationOfPaulis(
            n,
            tuple(
                Term(
                    float(rng.uniform(0.1, 1.0)),
                    PauliString.from_phase(
                        _random_letters(rng, n), float(rng.uniform(0, 2 * math.pi))
                    ),
                )
                for _ in range(q)
            ),
        )
        for _ in range(m)
    )
    spec = LindbladSpec(n, LinearCombinationOfPaulis(n, h_terms), jumps)
    if ops_norm_at_most is not None:
        norm = ops_norm(spec)
        if norm > 0:
            target = float(rng.uniform(0.1, 1.0)) * ops_norm_at_most
            spec = spec.scaled(target / norm)
    return spec


def describe(spec: LindbladSpec) -> dict[str, Any]:
    """A small summary used in logs and reports."""
    return {
        "n": spec.n,
        "m": spec.m,
        "q": spec.q,
        "pauli_norm": pauli_norm(spec),
        "ops_norm": ops_norm(spec),
    }
