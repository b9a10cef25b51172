from __future__ import annotations

import json
import math
from typing import Any
from typing import TYPE_CHECKING

from lindblad2lcu.pauli import amplitude_damping
from lindblad2lcu.pauli import dump_spec
from lindblad2lcu.pauli import InvalidSpecError
from lindblad2lcu.pauli import LinearCombinationOfPaulis
from lindblad2lcu.pauli import LindbladSpec
from lindblad2lcu.pauli import load_spec
from lindblad2lcu.pauli import NegativeBetaError
from lindblad2lcu.pauli import NonHermitianError
from lindblad2lcu.pauli import parse_spec
from lindblad2lcu.pauli import PauliString
from lindblad2lcu.pauli import QubitCountError
from lindblad2lcu.pauli import SpecSyntaxError
import pytest

if TYPE_CHECKING:
    from pathlib import Path


def _doc(**kwargs: Any) -> str:
    doc: dict[str, Any] = {"n": 1, "H": [], "L": []}
    doc.update(kwargs)
    return json.dumps(doc)


def test_fixture(ad_spec: LindbladSpec, ad_spec_path: Path) -> None:
    assert load_spec(ad_spec_path) == ad_spec


def test_phases() -> None:
    spec = parse_spec(
        _doc(
            n=2,
            H=[{"beta": 0.25, "pauli": "ZZ", "phase": 3.141592653589793}],
            L=[[{"beta": 1, "pauli": "XI", "phase": 0.5}]],
        )
    )
    assert spec.hamiltonian.terms[0].pauli == PauliString("ZZ", 2)
    jump = spec.jumps[0].terms[0]
    assert jump.beta == 1.0
    assert jump.pauli.quarter == 0
    assert jump.pauli.residual == pytest.approx(0.5)


def test_keeps_zero_beta() -> None:
    spec = parse_spec(_doc(H=[{"beta": 0, "pauli": "Z"}]))
    assert len(spec.hamiltonian.terms) == 1
    assert spec.canonicalize().hamiltonian.terms == ()


def test_dump() -> None:
    spec = LindbladSpec(
        2,
        LinearCombinationOfPaulis.of(2, (0.5, "ZI"), (0.25, PauliString("XX", 2))),
        (LinearCombinationOfPaulis.of(2, (1.0, PauliString.from_phase("YZ", 0.3))),),
    )
    assert parse_spec(dump_spec(spec)) == spec


def test_dump_amplitude_damping() -> None:
    doc = json.loads(dump_spec(amplitude_damping()))
    assert doc == {
        "n": 1,
        "H": [],
        "L": [
            [
                {"beta": 0.5, "pauli": "X"},
                {"beta": 0.5, "pauli": "Y", "phase": 1.5707963267948966},
            ]
        ],
    }


def test_syntax_error() -> None:
    with pytest.raises(SpecSyntaxError) as info:
        parse_spec('{"n": 1,\n "H": [],\n x}')
    assert info.value.line == 3
    assert info.value.column == 2


@pytest.mark.parametrize(
    ("text", "error"),
    [
        (_doc(H=[{"beta": -0.1, "pauli": "Z"}]), NegativeBetaError),
        (
            _doc(H=[{"beta": 1, "pauli": "X", "phase": math.pi / 2}]),
            NonHermitianError,
        ),
        (_doc(n=2, L=[[{"beta": 1, "pauli": "X"}]]), QubitCountError),
        (_doc(n=0), QubitCountError),
        (_doc(L=[[]]), InvalidSpecError),
        (_doc(H=[{"beta": 1, "pauli": "Q"}]), InvalidSpecError),
        (_doc(n="1"), InvalidSpecError),
        (json.dumps({"n": 1, "H": []}), InvalidSpecError),
        (_doc(H=[{"pauli": "Z"}]), InvalidSpecError),
        ("[]", InvalidSpecError),
    ],
)
def test_invalid(text: str, error: type[Exception]) -> None:
    with pytest.raises(error):
        parse_spec(text)


def test_missing_file(tmp_path: Path) -> None:
    with pytest.raises(OSError, match="nope"):
        load_spec(tmp_path / "nope.json")
