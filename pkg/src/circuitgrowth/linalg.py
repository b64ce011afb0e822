"""Dense complex linear algebra for the continuous half of the laboratory.

Matrices are plain ``numpy`` arrays (complex128). Qubit 0 is the most
significant bit of a computational-basis index.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

DEFAULT_REL_TOL = 1e-7


def is_unitary(u: np.ndarray, tol: float = 1e-10) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])) <= tol)


def is_hermitian(h: np.ndarray, tol: float = 1e-12) -> bool:
    h = np.asarray(h)
    return h.ndim == 2 and h.shape[0] == h.shape[1] and bool(np.max(np.abs(h - h.conj().T), initial=0.0) <= tol)


def is_traceless(h: np.ndarray, tol: float = 1e-12) -> bool:
    return bool(abs(np.trace(h)) <= tol)


def _gell_mann(d: int) -> list[np.ndarray]:
    mats = []
    for j in range(d):
        for k in range(j + 1, d):
            sym = np.zeros((d, d), dtype=complex)
            sym[j, k] = sym[k, j] = 1.0
            anti = np.zeros((d, d), dtype=complex)
            anti[j, k] = -1j
            anti[k, j] = 1j
            mats.extend([sym, anti])
    for l in range(1, d):
        diag = np.zeros(d, dtype=complex)
        diag[:l] = 1.0
        diag[l] = -l
        mats.append(np.diag(diag) * np.sqrt(2.0 / (l * (l + 1))))
    return mats


@lru_cache(maxsize=None)
def _basis_cached(d: int) -> np.ndarray:
    # Gram-Schmidt under Re Tr(A^dag B); Gell-Mann matrices are already
    # orthogonal, so this only fixes normalization and rounding.
    out: list[np.ndarray] = []
    for m in _gell_mann(d):
        v = m.copy()
        for b in out:
            v = v - np.real(np.vdot(b, v)) * b
        v = v / np.sqrt(np.real(np.vdot(v, v)))
        out.append(v)
    arr = np.array(out)
    arr.setflags(write=False)
    return arr


def generator_basis(d: int) -> np.ndarray:
    """Orthonormal traceless Hermitian basis of su(d), shape ``(d*d - 1, d, d)``.

    Built from the generalized Gell-Mann matrices and normalized to unit
    Hilbert-Schmidt norm, so ``Tr(B_a B_b) = delta_ab``.
    """
    if int(d) != d or d < 2:
        raise ValueError(f"generator basis needs d >= 2, got {d}")
    return _basis_cached(int(d))


def su_coordinates(h: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Real coordinates of Hermitian matrices ``h`` in an orthonormal Hermitian basis.

    ``h`` may be a single matrix or a stack with leading batch axes.
    """
    d = basis.shape[-1]
    flat_b = basis.reshape(basis.shape[0], d * d)
    flat_h = np.asarray(h).reshape(-1, d * d)
    # Tr(B h) = sum_ij B_ij h_ji = conj(vec B) . vec h   (B Hermitian)
    coords = np.real(flat_b.conj() @ flat_h.T)
    return coords.T.reshape(np.asarray(h).shape[:-2] + (basis.shape[0],))


def expm_antihermitian(a: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Matrix exponential of an anti-Hermitian matrix via the spectral theorem."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if np.max(np.abs(a + a.conj().T), initial=0.0) > tol:
        raise ValueError("matrix is not anti-Hermitian")
    h = -1j * a
    h = 0.5 * (h + h.conj().T)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)) @ v.conj().T


def haar_random_su(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random element of SU(d).

    QR of a complex Ginibre matrix with the diagonal phases of R moved into
    Q, then divided by the principal d-th root of the determinant.
    """
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    q = q * (diag / np.abs(diag))
    det = np.linalg.det(q)
    return q / det ** (1.0 / d)


def numerical_rank(m: np.ndarray, rel_tol: float = DEFAULT_REL_TOL) -> int:
    """Number of singular values above ``rel_tol * sigma_max``."""
    return rank_from_singular_values(singular_values(m), rel_tol)


def singular_values(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m)
    if m.size == 0:
        raise ValueError("empty matrix")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite values")
    return np.linalg.svd(m, compute_uv=False)


def rank_from_singular_values(sv: np.ndarray, rel_tol: float = DEFAULT_REL_TOL) -> int:
    if not 0.0 < rel_tol < 1.0:
        raise ValueError(f"rel_tol must lie in (0, 1), got {rel_tol}")
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > rel_tol * sv[0]))


def _embed(u: np.ndarray, pair: tuple[int, int], n: int) -> np.ndarray:
    i, j = pair
    rest = [q for q in range(n) if q not in (i, j)]
    order = [i, j] + rest
    full = np.kron(u, np.eye(2 ** (n - 2))) if n > 2 else np.asarray(u, dtype=complex)
    inv = list(np.argsort(order))
    t = full.reshape((2,) * (2 * n)).transpose(inv + [n + x for x in inv])
    return t.reshape(2**n, 2**n)


def check_pair(pair: tuple[int, int], n: int) -> None:
    i, j = pair
    if i == j:
        raise ValueError(f"slot indices must differ, got {pair}")
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"slot {pair} out of range for n={n}")


def embed_two_qubit(u: np.ndarray, pair: tuple[int, int], n: int) -> np.ndarray:
    """Lift a 4x4 operator on the ordered qubit pair ``pair`` to ``n`` qubits.

    The first tensor factor of ``u`` acts on ``pair[0]``.
    """
    check_pair(pair, n)
    u = np.asarray(u, dtype=complex)
    if u.shape != (4, 4):
        raise ValueError(f"expected a 4x4 gate, got {u.shape}")
    if not is_unitary(u, 1e-9):
        raise ValueError("gate is not unitary")
    return _embed(u, pair, n)


def embed_operator(h: np.ndarray, pair: tuple[int, int], n: int) -> np.ndarray:
    """Like :func:`embed_two_qubit` but for arbitrary 4x4 operators (e.g. generators)."""
    check_pair(pair, n)
    return _embed(np.asarray(h, dtype=complex), pair, n)


SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
