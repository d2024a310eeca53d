"""Text serialization for complex matrices.

Format: first line "m n", then m lines each holding n whitespace-separated
"re,im" pairs. The writer emits 17 significant digits so float64 values
round-trip exactly.
"""

import io as _io

import numpy as np

from .dense import as_matrix
from .errors import InvalidInputError


def format_complex(z):
    z = complex(z)
    return f"{z.real:.17g},{z.imag:.17g}"


def parse_complex(token):
    parts = token.split(",")
    if len(parts) != 2:
        raise InvalidInputError(f"expected 're,im' pair, got {token!r}")
    return complex(float(parts[0]), float(parts[1]))


def write_matrix(target, m):
    """Write a matrix to a path or text file object."""
    a = as_matrix(m)
    if hasattr(target, "write"):
        _write_matrix_stream(target, a)
    else:
        with open(target, "w") as f:
            _write_matrix_stream(f, a)


def _write_matrix_stream(f, a):
    f.write(f"{a.shape[0]} {a.shape[1]}\n")
    for row in a:
        f.write(" ".join(format_complex(z) for z in row) + "\n")


def read_matrix(source):
    """Read a matrix from a path or text file object."""
    if hasattr(source, "read"):
        return _read_matrix_stream(source)
    with open(source) as f:
        return _read_matrix_stream(f)


def _read_matrix_stream(f):
    header = f.readline().split()
    if len(header) != 2:
        raise InvalidInputError(f"bad matrix header: {header!r}")
    rows, cols = int(header[0]), int(header[1])
    if rows <= 0 or cols <= 0:
        raise InvalidInputError(f"bad matrix dimensions {rows} x {cols}")
    out = np.empty((rows, cols), dtype=np.complex128)
    for i in range(rows):
        tokens = f.readline().split()
        if len(tokens) != cols:
            raise InvalidInputError(f"row {i} has {len(tokens)} entries, expected {cols}")
        out[i] = [parse_complex(t) for t in tokens]
    return out


def matrix_to_text(m):
    buf = _io.StringIO()
    write_matrix(buf, m)
    return buf.getvalue()


def matrix_from_text(text):
    return read_matrix(_io.StringIO(text))
