# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled dot-product scan over a flat row-major vector block.

Arithmetic contract: one multiply and one add per element, accumulated
left to right in double precision. This matches _scan_py.dot_block
operation for operation, so both kernels return bit-identical scores.
"""


def dot_block(const double[::1] query, const double[::1] flat,
              Py_ssize_t dim, double[::1] out):
    """Write dot(query, row_i) into out[i] for every dim-sized row of flat."""
    cdef Py_ssize_t n = out.shape[0]
    cdef Py_ssize_t i, j, off
    cdef double s
    for i in range(n):
        off = i * dim
        s = 0.0
        for j in range(dim):
            s += query[j] * flat[off + j]
        out[i] = s


def backend_name():
    return "c"
