"""Dense complex matrix kernel.

Hermitian eigendecomposition by cyclic Jacobi rotations, rotated Hermitian
parts, and seeded Haar-random unitaries / frames / projections.  Everything
here is a pure function of its arguments; random sampling builds a fresh
Philox generator from the explicit seed on every call, so results are
bit-reproducible per platform and safe to invoke concurrently.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import BadRank, InputFormatError, NoConvergence, NotHermitian

HERMITICITY_TOL = 1e-10
# Stop once the off-diagonal Frobenius mass drops below this times ||H||_F.
JACOBI_REL_TOL = 1e-13
JACOBI_MAX_SWEEPS = 64


def generator(seed) -> np.random.Generator:
    """Counter-based RNG (Philox 4x64) keyed by an explicit integer seed.

    Philox is chosen over the default PCG64 because its counter-based design
    lets callers derive independent streams for parallel chunks while keeping
    the seed -> stream map documented and stable.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))


def chunk_generators(seed, n_chunks) -> list[np.random.Generator]:
    """Independent per-chunk generators derived from one master seed."""
    children = np.random.SeedSequence(int(seed)).spawn(int(n_chunks))
    return [np.random.Generator(np.random.Philox(c)) for c in children]


def as_matrix(a) -> np.ndarray:
    """Validate and return a square complex matrix (copy, complex128)."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputFormatError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] < 1:
        raise InputFormatError("matrix must be at least 1x1")
    if not np.all(np.isfinite(m.view(np.float64))):
        raise InputFormatError("matrix entries must be finite")
    return m


def matrix_from_json(obj) -> np.ndarray:
    """Parse the matrix JSON format {"n": int, "re": [[...]], "im": [[...]]}.

    `im` is optional and defaults to zero.  Row-major.
    """
    try:
        n = int(obj["n"])
        re = np.array(obj["re"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"bad matrix JSON: {exc}") from exc
    if re.shape != (n, n):
        raise InputFormatError(f"'re' has shape {re.shape}, expected ({n}, {n})")
    im = np.zeros((n, n))
    if "im" in obj and obj["im"] is not None:
        im = np.array(obj["im"], dtype=float)
        if im.shape != (n, n):
            raise InputFormatError(f"'im' has shape {im.shape}, expected ({n}, {n})")
    return as_matrix(re + 1j * im)


def matrix_to_json(a) -> dict:
    m = as_matrix(a)
    return {
        "n": m.shape[0],
        "re": m.real.tolist(),
        "im": m.imag.tolist(),
    }


def load_matrix(path) -> np.ndarray:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputFormatError(f"cannot read matrix from {path}: {exc}") from exc
    return matrix_from_json(obj)


@dataclass
class SpectralDecomposition:
    """Hermitian eigensystem: eigenvalues sorted non-increasing, eigenvector
    columns orthonormal and aligned with the eigenvalue order."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def projection(self, k) -> np.ndarray:
        """Spectral projection onto the top-k eigenvectors."""
        if not 1 <= k <= self.n:
            raise BadRank(f"k={k} outside 1..{self.n}")
        v = self.eigenvectors[:, :k]
        return v @ v.conj().T

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def hermitian_deviation(a) -> float:
    """Max entrywise deviation of a from its adjoint."""
    return float(np.abs(a - a.conj().T).max())


def _jacobi_rotate(a, v, p, q):
    """Zero a[p,q] with a unitary plane rotation; update a and v in place."""
    apq = a[p, q]
    r = abs(apq)
    if r == 0.0:
        return
    w = apq / r  # unit-modulus phase of the off-diagonal entry
    alpha = a[p, p].real
    beta = a[q, q].real
    tau = (beta - alpha) / (2.0 * r)
    if tau >= 0.0:
        t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
    else:
        t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    # 2x2 unitary M = diag(1, conj(w)) @ [[c, s], [-s, c]]
    cw = np.conj(w)
    col_p = a[:, p].copy()
    col_q = a[:, q].copy()
    a[:, p] = c * col_p - (cw * s) * col_q
    a[:, q] = s * col_p + (cw * c) * col_q
    row_p = a[p, :].copy()
    row_q = a[q, :].copy()
    a[p, :] = c * row_p - (w * s) * row_q
    a[q, :] = s * row_p + (w * c) * row_q
    # Enforce exact zeros and a real diagonal where the rotation guarantees them.
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real
    col_p = v[:, p].copy()
    col_q = v[:, q].copy()
    v[:, p] = c * col_p - (cw * s) * col_q
    v[:, q] = s * col_p + (cw * c) * col_q


def _offdiag_norm(a) -> float:
    off = a - np.diag(np.diagonal(a))
    return float(np.linalg.norm(off))


def hermitian_eig(h, *, check=True) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Raises NotHermitian if max |h - h†| exceeds 1e-10; the input is then
    symmetrized before iterating.  Converges when the off-diagonal Frobenius
    mass falls below 1e-13 * ||h||_F.  Eigenvalues are returned non-increasing
    with ties broken by original column index, which makes the output a
    deterministic function of the input.
    """
    a = as_matrix(h)
    if check and hermitian_deviation(a) > HERMITICITY_TOL:
        raise NotHermitian(
            f"max |H - H†| = {hermitian_deviation(a):.3e} exceeds {HERMITICITY_TOL}"
        )
    a = (a + a.conj().T) / 2.0
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    stop = JACOBI_REL_TOL * np.linalg.norm(a)
    sweeps = 0
    while True:
        off = _offdiag_norm(a)
        if off <= stop:
            break
        if sweeps >= JACOBI_MAX_SWEEPS:
            raise NoConvergence(sweeps, off)
        for p in range(n - 1):
            for q in range(p + 1, n):
                _jacobi_rotate(a, v, p, q)
        sweeps += 1
    lam = np.diagonal(a).real.copy()
    order = np.argsort(-lam, kind="stable")
    return SpectralDecomposition(lam[order], np.ascontiguousarray(v[:, order]))


def rotated_hermitian_part(a, theta) -> np.ndarray:
    """Hermitian part of e^{-i theta} * a: (e^{-i t} a + e^{i t} a†) / 2.

    Satisfies Re(e^{-i t} tr(a q)) = tr(result @ q) for every Hermitian q.
    """
    m = as_matrix(a)
    phase = np.exp(-1j * float(theta))
    return (phase * m + np.conj(phase) * m.conj().T) / 2.0


def haar_unitaries(n, count, seed) -> np.ndarray:
    """Batch of Haar-distributed n x n unitaries, shape (count, n, n).

    QR of a standard complex Gaussian with the diagonal of R phase-normalized,
    which corrects the raw QR factor to the Haar distribution.
    """
    if n < 1:
        raise BadRank(f"dimension must be >= 1, got {n}")
    rng = generator(seed)
    z = rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))
    q, r = np.linalg.qr(z / np.sqrt(2.0))
    d = np.diagonal(r, axis1=-2, axis2=-1).copy()
    d[d == 0] = 1.0
    return q * (d / np.abs(d))[:, None, :]


def haar_unitary(n, seed) -> np.ndarray:
    """Single Haar-random unitary for an explicit seed."""
    return haar_unitaries(n, 1, seed)[0]


def haar_frames(n, k, count, seed) -> np.ndarray:
    """Batch of orthonormal k-frames in C^n: first k columns of Haar unitaries."""
    if not 1 <= k <= n:
        raise BadRank(f"k={k} outside 1..{n}")
    return haar_unitaries(n, count, seed)[:, :, :k]


def random_rank_k_projection(n, k, seed) -> np.ndarray:
    """Haar-random rank-k orthogonal projection in M_n."""
    if not 1 <= k <= n:
        raise BadRank(f"k={k} outside 1..{n}")
    x = haar_frames(n, k, 1, seed)[0]
    return x @ x.conj().T
