"""Pure-Python fallback for the dot-product scan kernel.

Accumulation order is identical to the compiled kernel (left to right,
one rounding per multiply and per add), so results are bit-identical.
"""


def dot_block(query, flat, dim, out):
    """Write dot(query, row_i) into out[i] for every dim-sized row of flat."""
    n = len(out)
    for i in range(n):
        off = i * dim
        s = 0.0
        for j in range(dim):
            s += query[j] * flat[off + j]
        out[i] = s


def backend_name():
    return "python"
