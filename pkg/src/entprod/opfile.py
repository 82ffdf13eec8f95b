"""Reading and writing operator files.

An operator file is JSON with one matrix row per line::

    {"structure": [2, 2],
     "matrix": [
      [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
      ...
     ]}

Each entry is a ``[re, im]`` pair.
"""
import json
import math

import numpy as np

from .errors import DomainError
from .space import OperatorOnSpace, SpaceStructure


class OperatorFileError(DomainError):
    def __init__(self, path, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f"{path}"
        if line is not None:
            where += f":{line}:{column}"
        super().__init__(f"{where}: {message}")


def _entry(value, path, r, c) -> complex:
    if (
        not isinstance(value, list)
        or len(value) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)
    ):
        raise OperatorFileError(path, f"matrix[{r}][{c}] must be a [re, im] pair of numbers")
    re, im = value
    if not (math.isfinite(re) and math.isfinite(im)):
        raise OperatorFileError(path, f"matrix[{r}][{c}] is not finite")
    return complex(re, im)


def parse_operator(text: str, path="<string>") -> OperatorOnSpace:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise OperatorFileError(path, exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or "structure" not in doc or "matrix" not in doc:
        raise OperatorFileError(path, "expected an object with 'structure' and 'matrix'")
    dims = doc["structure"]
    if not isinstance(dims, list) or not dims or not all(
        isinstance(d, int) and not isinstance(d, bool) and d >= 1 for d in dims
    ):
        raise OperatorFileError(path, "'structure' must be a non-empty list of positive integers")
    structure = SpaceStructure(tuple(dims))
    rows = doc["matrix"]
    n = structure.total_dim
    if not isinstance(rows, list) or len(rows) != n:
        raise OperatorFileError(path, f"'matrix' must have {n} rows")
    m = np.empty((n, n), dtype=np.complex128)
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise OperatorFileError(path, f"matrix row {r} must have {n} entries")
        for c, value in enumerate(row):
            m[r, c] = _entry(value, path, r, c)
    return OperatorOnSpace(m, structure)


def read_operator_file(path) -> OperatorOnSpace:
    with open(path, encoding="utf-8") as fh:
        return parse_operator(fh.read(), str(path))


def format_operator(op: OperatorOnSpace) -> str:
    rows = []
    for row in op.matrix:
        entries = ", ".join(f"[{repr(float(z.real))}, {repr(float(z.imag))}]" for z in row)
        rows.append(f"  [{entries}]")
    dims = ", ".join(str(d) for d in op.structure.local_dims)
    return '{"structure": [' + dims + '],\n "matrix": [\n' + ",\n".join(rows) + "\n ]}\n"


def write_operator_file(path, op: OperatorOnSpace) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_operator(op))
