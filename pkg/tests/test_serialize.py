from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hermsolve import __version__
from hermsolve.exact import I, Matrix
from hermsolve.serialize import (
    MatrixFileError,
    Report,
    dump_matrix,
    dumps_matrix,
    format_rational,
    inputs_digest,
    load_matrix,
    loads_matrix,
    parse_rational,
)
from hermsolve.solutions import sample_matrix

INPUTS = Path(__file__).parent / "golden" / "inputs"


def test_parse_rational():
    assert parse_rational("3") == 3
    assert parse_rational("-6/4") == Fraction(-3, 2)
    assert parse_rational("0/5") == 0
    for bad in ("1/0", "1.5", "1e3", "+1", "", " 1", "1/-2", "i", 2):
        with pytest.raises(MatrixFileError):
            parse_rational(bad)


def test_format_rational():
    assert format_rational(Fraction(4, 2)) == "2"
    assert format_rational(Fraction(-3, 6)) == "-1/2"


def test_known_file_contents():
    M = Matrix([[1, I], [Fraction(-1, 2), 3 * I]])
    assert dumps_matrix(M) == (
        '{"cols":2,"entries":[["1","0"],["0","1"],["-1/2","0"],["0","3"]],"rows":2}\n'
    )


def test_non_canonical_input_parses():
    M = loads_matrix('{"rows": 1, "cols": 2, "entries": [["2/4", "0"], ["-0", "3/1"]]}')
    assert M == Matrix([[Fraction(1, 2), 3 * I]])


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[]",
        '{"rows": 1, "cols": 1}',
        '{"rows": 1, "cols": 2, "entries": [["1", "0"]]}',
        '{"rows": -1, "cols": 0, "entries": []}',
        '{"rows": true, "cols": 1, "entries": [["1", "0"]]}',
        '{"rows": 1, "cols": 1, "entries": [["1"]]}',
        '{"rows": 1, "cols": 1, "entries": [[1, 0]]}',
    ],
)
def test_malformed_files(text):
    with pytest.raises(MatrixFileError):
        loads_matrix(text)


@pytest.mark.parametrize("path", sorted(p.name for p in INPUTS.glob("*.json") if p.name != "bad_rational.json"))
def test_golden_inputs_round_trip_byte_exact(path, tmp_path):
    src = INPUTS / path
    M = load_matrix(src)
    out = tmp_path / path
    dump_matrix(M, out)
    assert out.read_bytes() == src.read_bytes()


def test_bad_rational_golden_rejected():
    with pytest.raises(MatrixFileError):
        load_matrix(INPUTS / "bad_rational.json")


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32), m=st.integers(0, 5), n=st.integers(0, 5), bound=st.integers(1, 50))
def test_matrix_round_trip(seed, m, n, bound):
    M = sample_matrix(seed, m, n, bound)
    text = dumps_matrix(M)
    assert loads_matrix(text) == M
    assert dumps_matrix(loads_matrix(text)) == text


def test_digest_depends_on_inputs_and_params():
    A = Matrix([[1, 2]])
    d = inputs_digest({"A": A}, {"seed": 0})
    assert d == inputs_digest({"A": Matrix([[1, 2]])}, {"seed": 0})
    assert d != inputs_digest({"A": A}, {"seed": 1})
    assert d != inputs_digest({"A": Matrix([[1, 3]])}, {"seed": 0})
    assert len(d) == 64


def test_report_round_trip():
    r = Report(["order", "x"], "ab" * 32, {"verdict": {"holds": True, "evidence": {"r(A)": 2}}}, exit_code=3)
    text = r.to_json()
    back = Report.from_json(text)
    assert back == r and back.to_json() == text
    assert back.version == __version__
