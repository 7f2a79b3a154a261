# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled pairwise similarity kernel.

Keep the loop structure identical to _kernels_py.similarity_fill: both
backends must produce bit-identical doubles.
"""

BACKEND = "cython"


def similarity_fill(const int[::1] indptr, const int[::1] concept_idx,
                    const double[:, ::1] corr, double[:, ::1] out):
    """Fill the directed shot-to-shot similarity matrix in place."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t a, b, i, j, a0, a1, b0, b1, row
    cdef double acc, best, w
    for a in range(n):
        a0 = indptr[a]
        a1 = indptr[a + 1]
        for b in range(n):
            b0 = indptr[b]
            b1 = indptr[b + 1]
            acc = 0.0
            for i in range(a0, a1):
                row = concept_idx[i]
                best = 0.0
                for j in range(b0, b1):
                    w = corr[row, concept_idx[j]]
                    if w > best:
                        best = w
                acc += best
            out[a, b] = acc / (a1 - a0)
