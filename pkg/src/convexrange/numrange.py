"""Planar ranges of complex matrices via eigenvalue support functions.

Two families are covered: averaged compressions onto orthonormal k-frames
(mode "k") and weighted unitary orbits for a real non-increasing weight
vector (mode "c").  Boundaries come from the support function in each
direction theta: rotate the Hermitian part, take the top eigenvalue sum
paired with the weights, and record the attaining projection or unitary as a
witness.  Monte Carlo samples of the defining map act as an independent
oracle; certification checks every sample (and random midpoints) against the
half-plane description of the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import matrices as mat
from .errors import BadRank, LengthMismatch, MissingWitness, Unsorted

FLAT_GAP_TOL = 1e-9
DEFAULT_ANGLES = 720
SAMPLE_CHUNK = 32768


class SupportPointK(NamedTuple):
    h: float
    z: np.ndarray          # point of R^2
    projection: np.ndarray
    flat: bool


class SupportPointC(NamedTuple):
    h: float
    z: np.ndarray
    unitary: np.ndarray
    flat: bool


def _as_weights(c, n) -> np.ndarray:
    """Normalize the weight argument: a real non-increasing vector, or a
    Hermitian matrix reduced to its sorted eigenvalue list."""
    arr = np.asarray(c)
    if arr.ndim == 2:
        dec = mat.hermitian_eig(arr)
        w = dec.eigenvalues
    else:
        if np.iscomplexobj(arr) and np.abs(arr.imag).max() > 0:
            raise Unsorted("weight vector must be real")
        w = np.asarray(arr, dtype=float)
        if np.any(np.diff(w) > 0):
            raise Unsorted("weight vector must be sorted non-increasing")
    if len(w) != n:
        raise LengthMismatch(f"weight vector has length {len(w)}, matrix is {n}x{n}")
    return w


def _point(zc) -> np.ndarray:
    """Complex number to R^2, fixed as z -> (Re z, Im z)."""
    return np.array([zc.real, zc.imag])


def support_point_k(b, k, theta) -> SupportPointK:
    """Support data of the k-frame range of b in direction theta.

    h is the mean of the k largest eigenvalues of the rotated Hermitian part;
    the witness is the spectral projection onto those eigenvectors, and z is
    the trace of b against it, divided by k.
    """
    bm = mat.as_matrix(b)
    n = bm.shape[0]
    if not 1 <= k <= n:
        raise BadRank(f"k={k} outside 1..{n}")
    dec = mat.hermitian_eig(mat.rotated_hermitian_part(bm, theta), check=False)
    return _support_k_from_eig(bm, k, dec)


def _support_k_from_eig(bm, k, dec) -> SupportPointK:
    lam = dec.eigenvalues
    h = float(np.sum(lam[:k]) / k)
    p = dec.projection(k)
    z = _point(np.trace(bm @ p) / k)
    flat = bool(k < len(lam) and lam[k - 1] - lam[k] < FLAT_GAP_TOL)
    return SupportPointK(h, z, p, flat)


def support_point_c(b, c, theta) -> SupportPointC:
    """Support data of the weighted unitary-orbit range in direction theta.

    With both the weights and the eigenvalues of the rotated Hermitian part
    sorted non-increasing, the support value is their inner product and the
    eigenvector matrix is an attaining unitary.
    """
    bm = mat.as_matrix(b)
    w = _as_weights(c, bm.shape[0])
    dec = mat.hermitian_eig(mat.rotated_hermitian_part(bm, theta), check=False)
    return _support_c_from_eig(bm, w, dec)


def _support_c_from_eig(bm, w, dec) -> SupportPointC:
    lam = dec.eigenvalues
    h = float(lam @ w)
    u = dec.eigenvectors
    conj = u.conj().T @ bm @ u
    z = _point(np.diagonal(conj) @ w)
    gaps = -np.diff(lam)
    wgaps = np.abs(np.diff(w))
    flat = bool(np.any((gaps < FLAT_GAP_TOL) & (wgaps > 0)))
    return SupportPointC(h, z, u, flat)


@dataclass
class BoundarySupportCurve:
    """Sampled support function of a planar matrix range.

    Angles are a uniform grid on [0, 2pi); support_points lie on their
    supporting lines; witnesses are the attaining projections (mode "k") or
    unitaries (mode "c").  The intersection of the recorded half-planes is an
    outer approximation of the range that contains every attainable point.
    """

    matrix: np.ndarray
    mode: str                      # "k" or "c"
    param: object                  # int k, or weight vector
    angles: np.ndarray
    support_values: np.ndarray
    support_points: np.ndarray     # (m, 2)
    witnesses: Optional[list]
    flat: np.ndarray

    @property
    def directions(self) -> np.ndarray:
        return np.column_stack([np.cos(self.angles), np.sin(self.angles)])

    def violations(self, points, chunk=8192) -> np.ndarray:
        """Max signed violation of the half-plane constraints per point."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        dirs = self.directions.T  # (2, m)
        out = np.empty(len(pts))
        for lo in range(0, len(pts), chunk):
            block = pts[lo:lo + chunk]
            proj = block @ dirs
            out[lo:lo + chunk] = (proj - self.support_values).max(axis=1)
        return out

    def diameter(self) -> float:
        """Max coordinate extent of the recorded support points (within a
        factor sqrt(2) of the true diameter; used for tolerance scaling)."""
        p = self.support_points
        return float(
            max(np.ptp(p[:, 0]), np.ptp(p[:, 1]), 1e-30)
        )

    def polygon_area(self) -> float:
        """Shoelace area of the closed support-point polygon."""
        x = self.support_points[:, 0]
        y = self.support_points[:, 1]
        return float(0.5 * abs(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)))

    def write_csv(self, path):
        with open(path, "w") as fh:
            fh.write("theta,h,x,y,flat\n")
            for th, h, (x, y), fl in zip(self.angles, self.support_values,
                                         self.support_points, self.flat):
                fh.write(f"{th:.17g},{h:.17g},{x:.17g},{y:.17g},{int(fl)}\n")


def boundary_polygon(b, mode, param, m_angles=DEFAULT_ANGLES) -> BoundarySupportCurve:
    """Sweep the support function on a uniform angle grid.

    Each angle is an independent eigenproblem of the rotated Hermitian part;
    results are assembled in angle order, so the sweep can be distributed
    without changing the output.
    """
    if m_angles < 8:
        raise ValueError("need at least 8 angles")
    bm = mat.as_matrix(b)
    n = bm.shape[0]
    if mode == "k":
        k = int(param)
        if not 1 <= k <= n:
            raise BadRank(f"k={k} outside 1..{n}")
        weights = None
    elif mode == "c":
        weights = _as_weights(param, n)
        k = None
    else:
        raise ValueError(f"mode must be 'k' or 'c', got {mode!r}")
    angles = 2.0 * np.pi * np.arange(m_angles) / m_angles
    hs = np.empty(m_angles)
    zs = np.empty((m_angles, 2))
    flats = np.zeros(m_angles, dtype=bool)
    wits = []
    for i, th in enumerate(angles):
        dec = mat.hermitian_eig(mat.rotated_hermitian_part(bm, th), check=False)
        if mode == "k":
            sp = _support_k_from_eig(bm, k, dec)
            wits.append(sp.projection)
        else:
            sp = _support_c_from_eig(bm, weights, dec)
            wits.append(sp.unitary)
        hs[i] = sp.h
        zs[i] = sp.z
        flats[i] = sp.flat
    return BoundarySupportCurve(
        matrix=bm, mode=mode, param=(k if mode == "k" else weights),
        angles=angles, support_values=hs, support_points=zs,
        witnesses=wits, flat=flats,
    )


def boundary_polygon_family(b, ks, m_angles=DEFAULT_ANGLES) -> dict:
    """Mode-k curves for several ranks in one sweep.

    The rotated Hermitian part is eigendecomposed once per angle and shared
    across all requested ranks, so a family costs the same as one curve.
    """
    bm = mat.as_matrix(b)
    n = bm.shape[0]
    ks = [int(k) for k in ks]
    for k in ks:
        if not 1 <= k <= n:
            raise BadRank(f"k={k} outside 1..{n}")
    angles = 2.0 * np.pi * np.arange(m_angles) / m_angles
    data = {k: ([], [], [], []) for k in ks}
    for th in angles:
        dec = mat.hermitian_eig(mat.rotated_hermitian_part(bm, th), check=False)
        for k in ks:
            sp = _support_k_from_eig(bm, k, dec)
            hs, zs, ws, fl = data[k]
            hs.append(sp.h)
            zs.append(sp.z)
            ws.append(sp.projection)
            fl.append(sp.flat)
    out = {}
    for k in ks:
        hs, zs, ws, fl = data[k]
        out[k] = BoundarySupportCurve(
            matrix=bm, mode="k", param=k, angles=angles,
            support_values=np.array(hs), support_points=np.array(zs),
            witnesses=ws, flat=np.array(fl, dtype=bool),
        )
    return out


def sample_range(b, mode, param, n_samples, seed) -> np.ndarray:
    """Monte Carlo samples of the range map, as an (n_samples, 2) array.

    Mode "k": Haar frames x, value = tr(x† b x) / k.  Mode "c": Haar
    unitaries u, value = tr([c] u† b u).  Chunks of fixed size draw from
    generators spawned off the master seed, so output is deterministic per
    seed and chunks may be evaluated concurrently.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    bm = mat.as_matrix(b)
    n = bm.shape[0]
    if mode == "k":
        k = int(param)
        if not 1 <= k <= n:
            raise BadRank(f"k={k} outside 1..{n}")
    elif mode == "c":
        weights = _as_weights(param, n)
    else:
        raise ValueError(f"mode must be 'k' or 'c', got {mode!r}")
    n_chunks = (n_samples + SAMPLE_CHUNK - 1) // SAMPLE_CHUNK
    gens = mat.chunk_generators(seed, n_chunks)
    out = np.empty((n_samples, 2))
    pos = 0
    for g in gens:
        count = min(SAMPLE_CHUNK, n_samples - pos)
        z = g.standard_normal((count, n, n)) + 1j * g.standard_normal((count, n, n))
        q, r = np.linalg.qr(z / np.sqrt(2.0))
        d = np.diagonal(r, axis1=-2, axis2=-1).copy()
        d[d == 0] = 1.0
        u = q * (d / np.abs(d))[:, None, :]
        if mode == "k":
            x = u[:, :, :k]
            vals = np.einsum("snk,nm,smk->s", x.conj(), bm, x) / k
        else:
            diag = np.einsum("sni,nm,smi->si", u.conj(), bm, u)
            vals = diag @ weights
        out[pos:pos + count, 0] = vals.real
        out[pos:pos + count, 1] = vals.imag
        pos += count
    return out


@dataclass
class RegionReport:
    """Certification record for sample-vs-boundary containment."""

    n_samples: int
    n_outside: int
    max_violation: float
    midpoint_defect: float
    n_midpoint_pairs: int
    tol: float

    @property
    def passed(self) -> bool:
        return self.n_outside == 0 and self.midpoint_defect <= self.tol

    def to_json(self) -> dict:
        return {
            "n_samples": self.n_samples,
            "n_outside": self.n_outside,
            "max_violation": self.max_violation,
            "midpoint_defect": self.midpoint_defect,
            "n_midpoint_pairs": self.n_midpoint_pairs,
            "tol": self.tol,
            "pass": self.passed,
        }


def certify_convexity(samples, curve, tol, n_pairs=10000, seed=0) -> RegionReport:
    """Check every sample, and random sample midpoints, against the curve.

    Violations are measured as the largest signed excess over the supporting
    half-planes (0 means inside).  Failures are recorded, not raised.
    """
    pts = np.asarray(samples, dtype=float)
    viol = curve.violations(pts)
    n_outside = int(np.count_nonzero(viol > tol))
    max_violation = float(max(viol.max(), 0.0))
    rng = mat.generator(seed)
    n_pairs = int(n_pairs)
    idx = rng.integers(0, len(pts), size=(n_pairs, 2))
    mids = 0.5 * (pts[idx[:, 0]] + pts[idx[:, 1]])
    mid_viol = curve.violations(mids)
    midpoint_defect = float(max(mid_viol.max(), 0.0))
    return RegionReport(
        n_samples=len(pts),
        n_outside=n_outside,
        max_violation=max_violation,
        midpoint_defect=midpoint_defect,
        n_midpoint_pairs=n_pairs,
        tol=float(tol),
    )


def attainment_check(curve, tol=1e-10, witness_tol=1e-8) -> bool:
    """Re-evaluate every stored witness and confirm it reproduces its
    boundary point and is a genuine extreme point (rank-k projection or
    unitary).  Raises MissingWitness when the curve has no witnesses."""
    if curve.witnesses is None or any(w is None for w in curve.witnesses):
        raise MissingWitness("curve carries no attaining witnesses")
    bm = curve.matrix
    n = bm.shape[0]
    for z, w in zip(curve.support_points, curve.witnesses):
        if curve.mode == "k":
            k = curve.param
            if np.abs(w @ w - w).max() > witness_tol:
                return False
            if np.abs(w - w.conj().T).max() > witness_tol:
                return False
            if abs(np.trace(w).real - k) > witness_tol:
                return False
            znew = np.trace(bm @ w) / k
        else:
            if np.abs(w.conj().T @ w - np.eye(n)).max() > witness_tol:
                return False
            conj = w.conj().T @ bm @ w
            znew = np.diagonal(conj) @ curve.param
        if abs(znew.real - z[0]) > tol or abs(znew.imag - z[1]) > tol:
            return False
    return True


def certification_run(b, mode, param, n_samples, seed, m_angles=DEFAULT_ANGLES,
                      tol=1e-8, n_pairs=10000):
    """Boundary sweep + sampling oracle + convexity certificate in one call.

    Returns (curve, samples, report, attained).
    """
    curve = boundary_polygon(b, mode, param, m_angles)
    samples = sample_range(b, mode, param, n_samples, seed)
    report = certify_convexity(samples, curve, tol, n_pairs=n_pairs,
                               seed=int(seed) + 1)
    attained = attainment_check(curve)
    return curve, samples, report, attained
