"""Dense complex linear algebra for small multi-qubit operators.

All values are plain ``numpy.ndarray`` objects.  Operators live on n-qubit
Hilbert spaces with n <= 7 (matrices up to 128 x 128), so dense storage is
always appropriate.  Qubits are numbered 1..n, with qubit 1 occupying the
slowest-varying (most significant) position of the basis index: the bit of
qubit q in basis index i is ``(i >> (n - q)) & 1``.
"""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

__all__ = ["matmul", "kron", "dagger", "trace", "partial_trace"]

_LETTERS = "abcdefghijklmnop"


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product with an explicit conformability check."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[-1] != b.shape[0]:
        raise ValueError(f"cannot multiply shapes {a.shape} and {b.shape}")
    return a @ b


def kron(*factors: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more factors; the first varies slowest."""
    out = np.asarray(factors[0])
    for f in factors[1:]:
        out = np.kron(out, np.asarray(f))
    return out


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(a).conj().T


def trace(a: np.ndarray) -> complex:
    """Sum of the diagonal; raises for non-square input."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"trace needs a square matrix, got shape {a.shape}")
    return complex(np.trace(a))


def partial_trace(rho: np.ndarray, n_total: int, traced_qubits: Iterable[int]) -> np.ndarray:
    """Trace out ``traced_qubits`` (1-based) of an ``n_total``-qubit operator.

    Returns the reduced operator on the remaining qubits, in their original
    relative order.  The total trace is preserved.
    """
    rho = np.asarray(rho)
    dim = 2**n_total
    if rho.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} matrix for {n_total} qubits, got {rho.shape}")
    traced = set(traced_qubits)
    if not traced <= set(range(1, n_total + 1)):
        bad = sorted(traced - set(range(1, n_total + 1)))
        raise ValueError(f"traced qubit indices {bad} outside 1..{n_total}")

    row = [_LETTERS[q] for q in range(n_total)]
    col = [row[q] if (q + 1) in traced else _LETTERS[n_total + q] for q in range(n_total)]
    keep = [q for q in range(n_total) if (q + 1) not in traced]
    out = "".join(row[q] for q in keep) + "".join(col[q] for q in keep)
    subscripts = "".join(row) + "".join(col) + "->" + out
    reduced = np.einsum(subscripts, rho.reshape((2,) * (2 * n_total)))
    d = 2 ** len(keep)
    return reduced.reshape(d, d)
