"""Plain-text sparse matrix exchange format.

Line 1 is ``%%LSM <rows> <cols> <ring>``; every further line is
``<row> <col> <entry>`` with 0-based indices, one per nonzero, sorted by
column then row.  Entries use the ``exp:num/den`` comma form.
"""

import io

from .errors import ParseError
from .fields import field_from_tag
from .salvetti import LAURENT, SparseMatrix


def ring_from_tag(tag):
    return LAURENT if tag == "laurent" else field_from_tag(tag)


def write_matrix(matrix, sink):
    ring = matrix.ring
    sink.write(f"%%LSM {matrix.nrows} {matrix.ncols} {ring.tag}\n")
    for j, col in enumerate(matrix.columns):
        for i in sorted(col):
            sink.write(f"{i} {j} {ring.to_text(col[i])}\n")


def dump_matrix(complex_, degree, sink=None):
    """Write ``d_degree`` of ``complex_``; returns the text when ``sink`` is None."""
    if sink is None:
        buf = io.StringIO()
        write_matrix(complex_.matrix(degree), buf)
        return buf.getvalue()
    write_matrix(complex_.matrix(degree), sink)
    return None


def load_matrix(source):
    """Parse LSM text (a string or a readable text stream)."""
    if isinstance(source, str):
        source = io.StringIO(source)
    header = source.readline()
    parts = header.split()
    if len(parts) != 4 or parts[0] != "%%LSM":
        raise ParseError("missing %%LSM header", 1)
    try:
        nrows, ncols = int(parts[1]), int(parts[2])
    except ValueError:
        raise ParseError("bad matrix dimensions", 1) from None
    if nrows < 0 or ncols < 0:
        raise ParseError("negative matrix dimensions", 1)
    ring = ring_from_tag(parts[3])
    columns = [dict() for _ in range(ncols)]
    for lineno, line in enumerate(source, start=2):
        if not line.strip():
            continue
        fields = line.split()
        if len(fields) != 3:
            raise ParseError(f"expected 'row col entry', got {line.strip()!r}", lineno)
        try:
            i, j = int(fields[0]), int(fields[1])
        except ValueError:
            raise ParseError("bad index", lineno) from None
        if not (0 <= i < nrows and 0 <= j < ncols):
            raise ParseError(f"index ({i}, {j}) out of range", lineno)
        if i in columns[j]:
            raise ParseError(f"duplicate entry ({i}, {j})", lineno)
        value = ring.from_text(fields[2], lineno)
        if ring.is_zero(value):
            raise ParseError("explicit zero entry", lineno)
        columns[j][i] = value
    return SparseMatrix(nrows, ncols, ring, columns)
