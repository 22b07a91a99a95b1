"""JSON matrix files and report containers.

A matrix file looks like::

    {"cols":2,"entries":[["1","0"],["-1/2","3"]],"rows":1}

Entries are row-major ``[re, im]`` pairs of rational strings ``"p/q"`` or
``"p"``.  Canonical form has reduced fractions, no ``"/1"`` and compact
sorted-key JSON followed by a newline; :func:`dump_matrix` always writes it.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Union

from . import __version__
from .exact import GaussianRational, Matrix

_RATIONAL = re.compile(r"-?[0-9]+(/[0-9]+)?")


class MatrixFileError(ValueError):
    """Malformed matrix file."""


def parse_rational(text: Any) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` exactly.

    Raises:
        MatrixFileError: Not a string, not of that form, or zero denominator.
    """
    if not isinstance(text, str) or not _RATIONAL.fullmatch(text):
        raise MatrixFileError(f"not a rational string: {text!r}")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise MatrixFileError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def matrix_to_obj(M: Matrix) -> dict:
    entries = []
    for z in M.entries:
        z = GaussianRational.coerce(z)
        entries.append([format_rational(z.re), format_rational(z.im)])
    return {"rows": M.rows, "cols": M.cols, "entries": entries}


def matrix_from_obj(obj: Any) -> Matrix:
    if not isinstance(obj, dict):
        raise MatrixFileError("matrix file must hold a JSON object")
    missing = {"rows", "cols", "entries"} - obj.keys()
    if missing:
        raise MatrixFileError(f"missing fields: {', '.join(sorted(missing))}")
    rows, cols, entries = obj["rows"], obj["cols"], obj["entries"]
    for name, v in (("rows", rows), ("cols", cols)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise MatrixFileError(f"{name} must be a nonnegative integer")
    if not isinstance(entries, list) or len(entries) != rows * cols:
        raise MatrixFileError(f"expected {rows * cols} entries")
    vals = []
    for e in entries:
        if not isinstance(e, list) or len(e) != 2:
            raise MatrixFileError(f"entry must be a [re, im] pair, got {e!r}")
        vals.append(GaussianRational(parse_rational(e[0]), parse_rational(e[1])))
    return Matrix.from_entries(rows, cols, vals)


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def dumps_matrix(M: Matrix) -> str:
    return canonical_json(matrix_to_obj(M))


def loads_matrix(text: str) -> Matrix:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFileError(f"invalid JSON: {exc}") from exc
    return matrix_from_obj(obj)


def dump_matrix(M: Matrix, path: Union[str, Path]) -> None:
    Path(path).write_bytes(dumps_matrix(M).encode("utf-8"))


def load_matrix(path: Union[str, Path]) -> Matrix:
    try:
        text = Path(path).read_bytes().decode("utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise MatrixFileError(f"cannot read {path}: {exc}") from exc
    return loads_matrix(text)


def inputs_digest(matrices: dict[str, Matrix], params: dict[str, Any] | None = None) -> str:
    """sha256 over the canonical form of every named input and parameter."""
    payload = {name: matrix_to_obj(M) for name, M in matrices.items()}
    if params:
        payload["_params"] = params
    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()


@dataclass
class Report:
    """What every CLI command prints in ``--output json`` mode."""

    command: list[str]
    inputs_digest: str
    results: dict[str, Any]
    version: str = __version__
    exit_code: int = 0
    extra: dict[str, Any] = field(default_factory=dict)

    def to_obj(self) -> dict:
        obj = {
            "command": list(self.command),
            "inputs_digest": self.inputs_digest,
            "results": self.results,
            "version": self.version,
            "exit_code": self.exit_code,
        }
        if self.extra:
            obj["extra"] = self.extra
        return obj

    def to_json(self) -> str:
        return canonical_json(self.to_obj())

    @classmethod
    def from_json(cls, text: str) -> "Report":
        obj = json.loads(text)
        return cls(
            command=obj["command"],
            inputs_digest=obj["inputs_digest"],
            results=obj["results"],
            version=obj["version"],
            exit_code=obj.get("exit_code", 0),
            extra=obj.get("extra", {}),
        )
