"""Pure-Python fallback for the pairwise similarity kernel.

Mirrors _kernels.pyx operation for operation so both backends produce
bit-identical doubles. Used when the compiled extension is unavailable.
"""

BACKEND = "python"


def similarity_fill(indptr, concept_idx, corr, out):
    """Fill the directed shot-to-shot similarity matrix in place.

    indptr/concept_idx hold the per-shot concept index lists in CSR layout
    (indices point into the correlation matrix rows). Every shot slice must
    be non-empty. out must be a (n, n) float64 array.
    """
    n = len(indptr) - 1
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
