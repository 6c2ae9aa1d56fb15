"""Ranks over fields by sparse elimination.

Everything here goes through ``reduce_complex``: over a field every nonzero
entry is a unit, so cancelling pairs until none are left is sparse Gaussian
elimination with Markowitz pivoting, and the number of cancelled pairs
between two degrees is the rank of the map between them.
"""

from .reduction import reduce_complex
from .salvetti import ChainComplex, SparseMatrix


def complex_ranks(cx):
    """``(dims, ranks)`` of a complex over a field.

    ``dims[h]`` is the homology dimension in degree ``h`` (only meaningful
    up to ``cx.valid_top``) and ``ranks[h]`` the rank of ``d_h``, counting
    any cancellations already done on ``cx`` before specialization.
    """
    reduced = reduce_complex(cx)
    return reduced.sizes(), list(reduced.meta["pairs_by_degree"])


def matrix_rank(matrix, upper=None):
    """Rank of a ``SparseMatrix`` over a field, stopping once ``upper`` is hit."""
    if matrix.nrows == 0 or matrix.ncols == 0:
        return 0
    cx = ChainComplex([list(range(matrix.nrows)), list(range(matrix.ncols))],
                      [[], matrix.columns], matrix.ring)
    if upper is None:
        upper = min(matrix.nrows, matrix.ncols)
    reduced = reduce_complex(cx, max_pairs=upper)
    return reduced.meta["pairs_by_degree"][1]


def specialize_matrix(matrix, field):
    """Entry-wise image of a Laurent ``SparseMatrix`` in ``field``."""
    conv = field.from_poly
    cols = []
    for col in matrix.columns:
        new = {}
        for i, v in col.items():
            x = conv(v)
            if not field.is_zero(x):
                new[i] = x
        cols.append(new)
    return SparseMatrix(matrix.nrows, matrix.ncols, field, cols)
