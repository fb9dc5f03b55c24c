"""Dense complex matrix kernels for small unitary groups (dim 2..16).

Everything here operates on plain ``numpy.ndarray`` matrices.  The sizes are
tiny (2**n for n <= 4), so exact structure and reproducibility matter far
more than asymptotics: exponentials and logarithms go through explicit
eigendecompositions, which are exact for the normal matrices that appear in
this problem domain.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import NumericalFailure, PreconditionError

__all__ = [
    "is_unitary",
    "is_special",
    "is_symmetric",
    "is_real",
    "is_hermitian",
    "is_antihermitian",
    "expm",
    "eig_hermitian",
    "diag_symmetric_unitary",
    "log_special_orthogonal",
    "frobenius_distance",
    "haar_random_special_unitary",
    "project_special",
]


def _as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise PreconditionError(f"expected a square matrix, got shape {m.shape}")
    return m


def is_unitary(m, tol: float = 1e-10) -> bool:
    m = _as_matrix(m)
    eye = np.eye(m.shape[0])
    return np.linalg.norm(m.conj().T @ m - eye) <= tol


def is_special(m, tol: float = 1e-10) -> bool:
    """|det(m) - 1| <= tol."""
    return abs(np.linalg.det(_as_matrix(m)) - 1.0) <= tol


def is_symmetric(m, tol: float = 1e-10) -> bool:
    m = _as_matrix(m)
    return np.linalg.norm(m - m.T) <= tol


def is_real(m, tol: float = 1e-10) -> bool:
    return np.linalg.norm(np.imag(_as_matrix(m))) <= tol


def is_hermitian(m, tol: float = 1e-10) -> bool:
    m = _as_matrix(m)
    return np.linalg.norm(m - m.conj().T) <= tol


def is_antihermitian(m, tol: float = 1e-10) -> bool:
    m = _as_matrix(m)
    return np.linalg.norm(m + m.conj().T) <= tol


def expm(x) -> np.ndarray:
    """Exponential of an anti-Hermitian matrix, via eigendecomposition of i*x.

    Exact (to rounding) for these normal inputs; the result is unitary.
    """
    x = _as_matrix(x)
    if not is_antihermitian(x, 1e-10):
        raise PreconditionError("expm requires an anti-Hermitian input")
    # x = -i*h with h Hermitian, so e^x = v diag(e^{-i w}) v^+.
    w, v = np.linalg.eigh(1j * x)
    return (v * np.exp(-1j * w)) @ v.conj().T


def eig_hermitian(h) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors of a Hermitian matrix."""
    h = _as_matrix(h)
    if not is_hermitian(h, 1e-10):
        raise PreconditionError("eig_hermitian requires a Hermitian input")
    return np.linalg.eigh(h)


def frobenius_distance(u, v, mod_global_phase: bool = False) -> float:
    """Frobenius distance ||u - v||_F, optionally minimized over a global phase.

    The minimizing phase is the argument of tr(u^+ v), so the quotient
    distance is still closed-form.
    """
    u = _as_matrix(u)
    v = _as_matrix(v)
    if u.shape != v.shape:
        raise PreconditionError(f"dimension mismatch: {u.shape} vs {v.shape}")
    if mod_global_phase:
        overlap = np.trace(u.conj().T @ v)
        if abs(overlap) > 0.0:
            v = v * (overlap.conjugate() / abs(overlap))
    return float(np.linalg.norm(u - v))


def haar_random_special_unitary(n: int, seed: int) -> np.ndarray:
    """Haar-random element of SU(n), deterministic for a fixed seed.

    Ginibre + QR with the usual phase fix gives Haar on U(n); dividing by the
    principal n-th root of the determinant lands in SU(n).
    """
    if n < 2:
        raise PreconditionError("dimension must be at least 2")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return project_special(q)[0]


def project_special(u) -> tuple[np.ndarray, float]:
    """Divide a unitary by the principal N-th root of its determinant.

    Returns the SU(N) representative together with the removed phase angle
    (the argument of that root).
    """
    u = _as_matrix(u)
    det = np.linalg.det(u)
    if abs(abs(det) - 1.0) > 1e-8:
        raise PreconditionError("matrix is not unitary (|det| != 1)")
    phase = np.angle(det) / u.shape[0]
    return u * np.exp(-1j * phase), float(phase)


# -- simultaneous diagonalization of a symmetric unitary ----------------------

def _refine_clusters(o: np.ndarray, values: np.ndarray, other: np.ndarray,
                     gap: float) -> np.ndarray:
    """Rotate eigenvector columns inside degenerate clusters of ``values`` so
    they also diagonalize ``other`` (which commutes with the first matrix)."""
    order = np.argsort(values, kind="stable")
    o = o[:, order]
    values = values[order]
    start = 0
    n = len(values)
    while start < n:
        stop = start + 1
        while stop < n and values[stop] - values[stop - 1] < gap:
            stop += 1
        if stop - start > 1:
            block = o[:, start:stop]
            sub = block.T @ other @ block
            sub = (sub + sub.T) / 2.0
            _, rot = np.linalg.eigh(sub)
            o[:, start:stop] = block @ rot
        start = stop
    return o


def diag_symmetric_unitary(msym, tol: float = 1e-8) -> tuple[np.ndarray, np.ndarray]:
    """Diagonalize a complex-symmetric unitary with a real orthogonal frame.

    Returns ``(o, e)`` with ``o`` real special orthogonal and ``e`` the vector
    of unit-modulus eigenvalues, such that ``msym = o @ diag(e) @ o.T``.

    A symmetric unitary splits into commuting real-symmetric parts
    ``re(msym)`` and ``im(msym)``; a random real combination of the two is
    diagonalized, with per-cluster refinement when that combination is
    accidentally degenerate.  The combination coefficient sequence is fixed,
    so the routine is deterministic.
    """
    msym = _as_matrix(msym)
    if not is_unitary(msym, 1e-8):
        raise PreconditionError("input is not unitary")
    if not is_symmetric(msym, 1e-8):
        raise PreconditionError("input is not complex-symmetric")

    re, im = np.real(msym).copy(), np.imag(msym).copy()
    re = (re + re.T) / 2.0
    im = (im + im.T) / 2.0
    rng = np.random.default_rng(0x5D1A6)
    best_residual = np.inf
    eye_gap = 1e-7 * max(1.0, np.linalg.norm(msym))
    for attempt in range(60):
        c = 1.0 if attempt == 0 else rng.uniform(0.25, 4.0) * rng.choice([-1.0, 1.0])
        w, o = np.linalg.eigh(re + c * im)
        o = _refine_clusters(o, w, im, eye_gap)
        e = np.einsum("ji,jk,ki->i", o, msym, o)
        residual = np.linalg.norm(o @ (e[:, None] * o.T) - msym)
        if residual <= tol:
            if np.linalg.det(o) < 0:
                o[:, 0] = -o[:, 0]
            e = e / np.abs(e)
            return o, e
        best_residual = min(best_residual, residual)
    raise NumericalFailure(
        "failed to diagonalize symmetric unitary with a real orthogonal frame",
        residual=best_residual,
    )


# -- real logarithm of a special orthogonal matrix ----------------------------

def log_special_orthogonal(o) -> np.ndarray:
    """Real antisymmetric logarithm of a real special orthogonal matrix.

    Planar rotation angles are taken in (-pi, pi].  Eigenvalue -1 always has
    even multiplicity here (det +1); such eigenvalues are paired into explicit
    rotation-by-pi planes.
    """
    o = np.asarray(o)
    if np.iscomplexobj(o):
        if np.linalg.norm(o.imag) > 1e-8:
            raise PreconditionError("input is not real")
        o = o.real
    o = np.asarray(o, dtype=float)
    n = o.shape[0]
    if np.linalg.norm(o.T @ o - np.eye(n)) > 1e-8:
        raise PreconditionError("input is not orthogonal")
    if np.linalg.det(o) < 0:
        raise PreconditionError("input has determinant -1")

    t, q = scipy.linalg.schur(o, output="real")
    x = np.zeros((n, n))
    minus_ones = []
    i = 0
    while i < n:
        if i + 1 < n and abs(t[i + 1, i]) > 1e-12:
            # 2x2 rotation block; average the redundant entries for robustness.
            c = (t[i, i] + t[i + 1, i + 1]) / 2.0
            s = (t[i + 1, i] - t[i, i + 1]) / 2.0
            theta = np.arctan2(s, c)
            x[i, i + 1] = -theta
            x[i + 1, i] = theta
            i += 2
        else:
            if t[i, i] < 0.0:
                minus_ones.append(i)
            i += 1
    if len(minus_ones) % 2 != 0:
        raise NumericalFailure(
            "odd multiplicity of eigenvalue -1 in a det +1 orthogonal matrix",
            residual=float(len(minus_ones)),
        )
    # A rotation by pi in the (i, j) plane exponentiates to -1 on both axes.
    for i, j in zip(minus_ones[::2], minus_ones[1::2]):
        x[i, j] = -np.pi
        x[j, i] = np.pi
    x = q @ x @ q.T
    return (x - x.T) / 2.0
