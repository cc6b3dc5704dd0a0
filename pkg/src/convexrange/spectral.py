"""Majorization, pinching sequences, and faces of the matrix interval.

The matrix interval is {a Hermitian : 0 <= a <= 1}; its faces are parametrized
by a pair of orthogonal projections (lower corner p, inner block r) as
p + r*interval*r.  Slicing by a trace hyperplane gives the convex body whose
extreme points are the rank-k projections; minimal-face dimensions there are
never 1 or 2, which is what the pinch-face witness construction certifies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matrices as mat
from .errors import (
    BadRank,
    DegeneratePinch,
    IndexOutOfRange,
    LengthMismatch,
    NotInTraceSlice,
    NotInUnitInterval,
    NotMajorized,
    Unsorted,
)

# Eigenvalues within this of {0, 1} are clustered onto the endpoint when
# assigning face data.  Declared band; face assignment is discontinuous.
CLUSTER_EPS = 1e-7
INTERVAL_TOL = 1e-9
TRACE_TOL = 1e-8
EXTREME_TOL = 1e-8


def _check_sorted(v, name):
    w = np.asarray(v, dtype=float)
    if w.ndim != 1:
        raise Unsorted(f"{name} must be a 1-d vector")
    if np.any(np.diff(w) > 0):
        raise Unsorted(f"{name} must be sorted non-increasing")
    return w


def majorizes(b, c, tol=1e-10) -> bool:
    """True when b is majorized by c: every prefix sum of b is at most the
    matching prefix sum of c, with equal totals (within tol)."""
    bw = _check_sorted(b, "b")
    cw = _check_sorted(c, "c")
    if len(bw) != len(cw):
        raise LengthMismatch(f"lengths {len(bw)} and {len(cw)} differ")
    pb = np.cumsum(bw)
    pc = np.cumsum(cw)
    if abs(pb[-1] - pc[-1]) > tol:
        return False
    return bool(np.all(pb[:-1] <= pc[:-1] + tol))


@dataclass
class PinchingStep:
    """Replace components i, j by their mixtures with weight lam in [0, 1]."""

    i: int
    j: int
    lam: float

    def __post_init__(self):
        if self.i == self.j:
            raise IndexOutOfRange("pinching needs two distinct indices")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda {self.lam} outside [0, 1]")


def apply_pinching(v, step: PinchingStep) -> np.ndarray:
    """Apply one pinching step to a raw vector.

    Only the two named components change.  The floating-point pair sum is
    preserved exactly: the second component is the compensated difference,
    rebalanced by at most one ulp so that (new_i + new_j) reproduces
    (w_i + w_j) bit for bit.  The endpoint weights 0 and 1 short-circuit to
    an exact swap / identity.
    """
    w = np.array(v, dtype=float)
    n = len(w)
    if not (0 <= step.i < n and 0 <= step.j < n):
        raise IndexOutOfRange(f"indices ({step.i}, {step.j}) out of range for n={n}")
    wi, wj = w[step.i], w[step.j]
    if step.lam == 1.0:
        return w
    if step.lam == 0.0:
        w[step.i], w[step.j] = wj, wi
        return w
    s = wi + wj
    new_i = step.lam * wi + (1.0 - step.lam) * wj
    new_j = s - new_i
    # rebalance: nudge by the coarsest ulp that still lands strictly inside
    # the rounding window of s (steps of a full window can bounce across it
    # forever on round-half-even ties)
    half_window = 0.5 * np.spacing(abs(s))
    for _ in range(256):
        cur = new_i + new_j
        if cur == s:
            break
        direction = np.inf if cur < s else -np.inf
        si, sj = np.spacing(abs(new_i)), np.spacing(abs(new_j))
        fitting = [x for x in (si, sj) if x <= half_window]
        use_i = (si == max(fitting)) if fitting else (si <= sj)
        if use_i:
            new_i = np.nextafter(new_i, direction)
        else:
            new_j = np.nextafter(new_j, direction)
    w[step.i] = new_i
    w[step.j] = new_j
    return w


def pinching_sequence(c, b, tol=1e-10) -> list:
    """Steps transforming c into b (both sorted non-increasing, b majorized
    by c), with at most n-1 steps.

    Classic transfer construction: take the largest index i with current
    value above target and the smallest index j > i with value below target,
    and pinch just enough to land one of the two exactly on its target.  The
    working vector stays sorted throughout, so recorded indices apply to the
    raw vector unchanged.
    """
    cw = _check_sorted(c, "c")
    bw = _check_sorted(b, "b")
    if len(cw) != len(bw):
        raise LengthMismatch(f"lengths {len(cw)} and {len(bw)} differ")
    if not majorizes(bw, cw, tol=tol):
        raise NotMajorized("target is not majorized by the source")
    w = cw.copy()
    steps = []
    n = len(w)
    for _ in range(n):
        resid = w - bw
        over = np.nonzero(resid > tol)[0]
        under = np.nonzero(resid < -tol)[0]
        if len(over) == 0 or len(under) == 0:
            break
        i = int(over[-1])
        after = under[under > i]
        if len(after) == 0:
            raise NotMajorized("transfer construction stalled; inputs inconsistent")
        j = int(after[0])
        delta = min(w[i] - bw[i], bw[j] - w[j])
        lam = 1.0 - delta / (w[i] - w[j])
        step = PinchingStep(i, j, float(lam))
        steps.append(step)
        w = apply_pinching(w, step)
    return steps


# ---------------------------------------------------------------------------
# pinch-face witnesses
# ---------------------------------------------------------------------------

@dataclass
class PinchFaceWitnesses:
    """Six Hermitian matrices showing that a once-pinched diagonal sits on a
    face of dimension at least 3 inside the unitary orbit hull.

    The two diagonal members carry the original values (in both orders) at
    the chosen slots; the four off-diagonal members place +/- real and +/-
    imaginary couplings there.  Every member has the same spectrum, and the
    mean of each off-diagonal pair is the pinched matrix itself.
    """

    diagonal: np.ndarray
    diagonal_swapped: np.ndarray
    real_plus: np.ndarray
    real_minus: np.ndarray
    imag_plus: np.ndarray
    imag_minus: np.ndarray

    def matrices(self) -> list:
        return [self.diagonal, self.diagonal_swapped, self.real_plus,
                self.real_minus, self.imag_plus, self.imag_minus]

    def midpoint_real(self) -> np.ndarray:
        return (self.real_plus + self.real_minus) / 2.0

    def midpoint_imag(self) -> np.ndarray:
        return (self.imag_plus + self.imag_minus) / 2.0

    def affine_rank(self, threshold=1e-8) -> int:
        """Dimension of the affine span of the six members, via singular
        values of the vectorized differences from the first."""
        mats = self.matrices()
        base = mats[0].ravel()
        stack = np.stack([m.ravel() - base for m in mats[1:]])
        rows = np.concatenate([stack.real, stack.imag], axis=1)
        sv = np.linalg.svd(rows, compute_uv=False)
        return int(np.count_nonzero(sv > threshold * max(sv.max(), 1e-300)))


def pinch_face_witnesses(a, i, j, t, unitary) -> PinchFaceWitnesses:
    """Build the six face witnesses for values a (raw vector), slot pair
    (i, j), mixing weight t in (0, 1), and a conjugating unitary.

    Requires a[i] != a[j]; every returned matrix is u† M u for M equal to
    diag(a) outside the 2x2 block at (i, j).
    """
    vals = np.asarray(a, dtype=float)
    n = len(vals)
    if not (0 <= i < n and 0 <= j < n) or i == j:
        raise IndexOutOfRange(f"bad slot pair ({i}, {j}) for n={n}")
    if not 0.0 < t < 1.0:
        raise DegeneratePinch(f"t={t} must lie strictly inside (0, 1)")
    if vals[i] == vals[j]:
        raise DegeneratePinch("equal values at the chosen slots")
    u = mat.as_matrix(unitary)
    if u.shape[0] != n:
        raise LengthMismatch("unitary size does not match the value vector")
    off = np.sqrt(t - t * t) * (vals[i] - vals[j])
    hi = t * vals[i] + (1.0 - t) * vals[j]
    lo = (1.0 - t) * vals[i] + t * vals[j]

    def build(aii, ajj, oij):
        m = np.diag(vals).astype(complex)
        m[i, i] = aii
        m[j, j] = ajj
        m[i, j] = oij
        m[j, i] = np.conj(oij)
        return u.conj().T @ m @ u

    return PinchFaceWitnesses(
        diagonal=build(vals[i], vals[j], 0.0),
        diagonal_swapped=build(vals[j], vals[i], 0.0),
        real_plus=build(hi, lo, off),
        real_minus=build(hi, lo, -off),
        imag_plus=build(hi, lo, 1j * off),
        imag_minus=build(hi, lo, -1j * off),
    )


def pinched_matrix(a, i, j, t, unitary) -> np.ndarray:
    """u† diag(pinched a) u: the common midpoint of both witness pairs."""
    vals = apply_pinching(np.asarray(a, dtype=float), PinchingStep(i, j, t))
    u = mat.as_matrix(unitary)
    return u.conj().T @ np.diag(vals).astype(complex) @ u


# ---------------------------------------------------------------------------
# faces of the matrix interval and its trace slice
# ---------------------------------------------------------------------------

@dataclass
class IntervalFaceDescriptor:
    """Face of the interval {0 <= a <= 1} containing a given point: the
    lower-corner projection p, the inner projection r orthogonal to it, and
    the real dimension (rank r)^2 of the face p + r*interval*r."""

    p: np.ndarray
    r: np.ndarray
    n: int
    rank_r: int

    @property
    def dim(self) -> int:
        return self.rank_r * self.rank_r


def _interval_eig(a):
    am = mat.as_matrix(a)
    dec = mat.hermitian_eig(am)
    lam = dec.eigenvalues
    if lam.min() < -INTERVAL_TOL or lam.max() > 1.0 + INTERVAL_TOL:
        raise NotInUnitInterval(
            f"eigenvalues in [{lam.min():.3e}, {lam.max():.3e}] leave [0, 1]"
        )
    return am, dec


def minimal_interval_face(a) -> IntervalFaceDescriptor:
    """Smallest face of the interval {0 <= a <= 1} containing a.

    Eigenvalues within CLUSTER_EPS of 1 feed the lower corner p; those within
    CLUSTER_EPS of 0 are dropped; the rest span the inner block r.
    """
    am, dec = _interval_eig(a)
    lam = dec.eigenvalues
    v = dec.eigenvectors
    ones = lam >= 1.0 - CLUSTER_EPS
    inner = (~ones) & (lam > CLUSTER_EPS)
    vp = v[:, ones]
    vr = v[:, inner]
    p = vp @ vp.conj().T
    r = vr @ vr.conj().T
    n = am.shape[0]
    # sanity: a acts as the identity on ran p and vanishes off ran(p + r)
    q = p + r
    if np.abs(p @ am - p).max() > 10 * CLUSTER_EPS * n:
        raise NotInUnitInterval("face assignment failed: p-block deviates from 1")
    if np.abs(am @ q - am).max() > 10 * CLUSTER_EPS * n:
        raise NotInUnitInterval("face assignment failed: mass outside p + r")
    return IntervalFaceDescriptor(p=p, r=r, n=n, rank_r=int(np.count_nonzero(inner)))


def _check_trace(a, k):
    am, dec = _interval_eig(a)
    tr = float(np.trace(am).real)
    if abs(tr - k) > TRACE_TOL:
        raise NotInTraceSlice(f"trace {tr} is not {k} within {TRACE_TOL}")
    return am, dec


def is_trace_slice_extreme(a, k) -> bool:
    """Is a an extreme point of {0 <= a <= 1, tr a = k}?

    Extreme points are exactly the rank-k projections, so the test is
    idempotency plus a count of eigenvalues above 1/2.
    """
    am, dec = _check_trace(a, int(k))
    if np.abs(am @ am - am).max() > EXTREME_TOL:
        return False
    return int(np.count_nonzero(dec.eigenvalues >= 0.5)) == int(k)


def trace_slice_face_dimension(a, k) -> int:
    """Dimension of the smallest face of the trace slice containing a.

    0 for extreme points; otherwise (rank r)^2 - 1, the interval face cut by
    the trace hyperplane.  Values 1 and 2 cannot occur.
    """
    _check_trace(a, int(k))
    face = minimal_interval_face(a)
    if face.rank_r == 0:
        return 0
    return face.rank_r * face.rank_r - 1


def random_trace_slice_point(n, k, seed, interior_slots=None,
                             margin=0.05) -> np.ndarray:
    """Random member of {0 <= a <= 1, tr a = k} with a controlled number of
    strictly interior eigenvalues (0 disables them, i.e. a projection).

    Interior eigenvalues are kept at least `margin` away from {0, 1} so face
    assignment is unambiguous.  Used by the facial-dimension sweeps.
    """
    if not 1 <= k <= n:
        raise BadRank(f"k={k} outside 1..{n}")
    rng = mat.generator(seed)
    if interior_slots is None:
        choices = [m for m in range(n + 1) if m != 1 and m <= n]
        interior_slots = int(choices[rng.integers(0, len(choices))])
    m = int(interior_slots)
    if m == 1 or m > n:
        raise ValueError("interior slot count must be 0 or in 2..n")
    if m == 0:
        ones = k
        inner = np.empty(0)
    else:
        lo = max(0, k - m + 1)      # need 0 < k - ones < m
        hi = min(n - m, k - 1)
        if lo > hi:
            raise ValueError(f"no valid split for n={n}, k={k}, interior={m}")
        ones = int(rng.integers(lo, hi + 1))
        target = k - ones
        while True:
            inner = rng.dirichlet(np.ones(m)) * target
            if np.all(inner > margin) and np.all(inner < 1.0 - margin):
                break
    lam = np.concatenate([np.ones(ones), inner, np.zeros(n - ones - m)])
    u = mat.haar_unitary(n, int(rng.integers(0, 2**63)))
    return (u * lam) @ u.conj().T
