"""Discretized vector measures: ranges, constraints, refinement, vertices.

A measure is a finite list of atoms with positive masses, a k-row table of
target densities (the vector measure being imaged) and an n-row table of
constraint densities with target values.  Ranges are enumerated exhaustively
over all 2^N atom subsets (guarded), so every statement about them is checked
against an explicit witness list rather than an approximation.  Refinement
splits atoms in half, which is the discrete stand-in for non-atomicity: the
midpoint convexity defect of the range shrinks with the largest atom.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from . import matrices as mat
from .errors import (
    BadRank,
    Infeasible,
    InputFormatError,
    TooFewPoints,
    TooManyAtoms,
)
from .numrange import boundary_polygon

MAX_ATOMS = 22
VERTEX_CAP = 10**6


@dataclass
class DiscreteVectorMeasure:
    masses: np.ndarray              # (N,) positive
    target_densities: np.ndarray    # (k, N)
    constraint_densities: np.ndarray  # (n, N)
    constraint_values: np.ndarray   # (n,)

    def __post_init__(self):
        self.masses = np.asarray(self.masses, dtype=float)
        self.target_densities = np.atleast_2d(
            np.asarray(self.target_densities, dtype=float))
        cd = np.asarray(self.constraint_densities, dtype=float)
        self.constraint_densities = cd.reshape(0, self.n_atoms) if cd.size == 0 \
            else np.atleast_2d(cd)
        self.constraint_values = np.asarray(self.constraint_values, dtype=float)
        if self.masses.ndim != 1 or np.any(self.masses <= 0):
            raise InputFormatError("masses must be a 1-d positive vector")
        if not np.all(np.isfinite(self.masses)):
            raise InputFormatError("masses must be finite")
        if self.target_densities.shape[1] != self.n_atoms:
            raise InputFormatError("target density columns != atom count")
        if self.constraint_densities.shape[1] != self.n_atoms:
            raise InputFormatError("constraint density columns != atom count")
        if len(self.constraint_values) != self.n_constraints:
            raise InputFormatError("constraint value count mismatch")
        for tab in (self.target_densities, self.constraint_densities):
            if not np.all(np.isfinite(tab)):
                raise InputFormatError("densities must be finite")

    @property
    def n_atoms(self) -> int:
        return len(self.masses)

    @property
    def k(self) -> int:
        return self.target_densities.shape[0]

    @property
    def n_constraints(self) -> int:
        return self.constraint_densities.shape[0]

    def target_weights(self) -> np.ndarray:
        """Per-atom target increments: masses * densities, shape (k, N)."""
        return self.target_densities * self.masses

    def constraint_weights(self) -> np.ndarray:
        return self.constraint_densities * self.masses

    def measure_of(self, mask) -> np.ndarray:
        """Target value of the atom subset encoded by the bitmask."""
        sel = _mask_bits(int(mask), self.n_atoms)
        return self.target_weights()[:, sel].sum(axis=1)

    def total(self) -> np.ndarray:
        return self.target_weights().sum(axis=1)

    def to_json(self) -> dict:
        return {
            "masses": self.masses.tolist(),
            "target": self.target_densities.tolist(),
            "constraints": self.constraint_densities.tolist(),
            "z": self.constraint_values.tolist(),
        }

    @classmethod
    def from_json(cls, obj):
        try:
            masses = obj["masses"]
            target = obj["target"]
        except (KeyError, TypeError) as exc:
            raise InputFormatError(f"bad measure JSON: {exc}") from exc
        constraints = obj.get("constraints") or []
        z = obj.get("z") or []
        n_atoms = len(masses)
        cd = np.asarray(constraints, dtype=float)
        if cd.size == 0:
            cd = np.zeros((0, n_atoms))
        return cls(masses, target, cd, z)


def load_measure(path) -> DiscreteVectorMeasure:
    try:
        with open(path) as fh:
            return DiscreteVectorMeasure.from_json(json.load(fh))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputFormatError(f"cannot read measure from {path}: {exc}") from exc


def _mask_bits(mask, n) -> np.ndarray:
    return np.array([(mask >> a) & 1 for a in range(n)], dtype=bool)


def _subset_sums(weights) -> np.ndarray:
    """All subset sums of the columns of weights (r, N) -> (2^N, r).

    Row index doubles as the subset bitmask (atom a <-> bit a), which makes
    the witness for every point implicit in its position.
    """
    r, n = weights.shape
    out = np.zeros((1, r))
    for a in range(n):
        out = np.concatenate([out, out + weights[:, a]], axis=0)
    return out


@dataclass
class RangeSample:
    """Attained points of a (possibly constrained) discretized range."""

    points: np.ndarray            # (M, k)
    subsets: np.ndarray           # (M,) uint64 bitmask witnesses
    provenance: str               # "exhaustive" | "filtered" | "lp_vertex"
    eta: float = 0.0
    measure: Optional[DiscreteVectorMeasure] = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.points)

    def write_csv(self, path):
        with open(path, "w") as fh:
            for row in self.points:
                fh.write(",".join(f"{x:.17g}" for x in row) + "\n")


def _guard_atoms(m: DiscreteVectorMeasure):
    if m.n_atoms > MAX_ATOMS:
        raise TooManyAtoms(
            f"{m.n_atoms} atoms exceed the 2^N enumeration guard of {MAX_ATOMS}"
        )


def range_bruteforce(m: DiscreteVectorMeasure) -> RangeSample:
    """Every attainable value, one point per atom subset (including the empty
    set and the full set)."""
    _guard_atoms(m)
    pts = _subset_sums(m.target_weights())
    masks = np.arange(len(pts), dtype=np.uint64)
    return RangeSample(pts, masks, "exhaustive", 0.0, m)


def constrained_range(m: DiscreteVectorMeasure, eta) -> RangeSample:
    """Subsets whose constraint values all land within eta of their targets.

    Atoms generically cannot hit a constraint exactly, so the tolerance eta
    is the caller's discretization allowance; the result may be empty.
    """
    _guard_atoms(m)
    pts = _subset_sums(m.target_weights())
    if m.n_constraints == 0:
        keep = np.ones(len(pts), dtype=bool)
    else:
        cons = _subset_sums(m.constraint_weights())
        keep = np.all(
            np.abs(cons - m.constraint_values) <= float(eta), axis=1
        )
    masks = np.nonzero(keep)[0].astype(np.uint64)
    return RangeSample(pts[keep], masks, "filtered", float(eta), m)


def default_eta(m: DiscreteVectorMeasure) -> float:
    """Largest single-atom constraint increment: the natural matching slack."""
    if m.n_constraints == 0:
        return 0.0
    return float(np.abs(m.constraint_weights()).max())


def convexity_defect(sample: RangeSample, n_pairs, seed) -> float:
    """Largest distance from a random pair midpoint to the attained set.

    Zero for convex attained sets; bounded by the atom granularity for
    refined discretizations.  Deterministic per seed.
    """
    pts = sample.points
    if len(pts) < 2:
        raise TooFewPoints("need at least two attained points")
    rng = mat.generator(seed)
    idx = rng.integers(0, len(pts), size=(int(n_pairs), 2))
    mids = 0.5 * (pts[idx[:, 0]] + pts[idx[:, 1]])
    tree = cKDTree(pts)
    dist, _ = tree.query(mids, k=1)
    return float(dist.max())


def refine(m: DiscreteVectorMeasure, rounds) -> DiscreteVectorMeasure:
    """Split every atom into two half-mass copies, `rounds` times.

    Densities are duplicated, so all totals are preserved exactly; the guard
    on downstream enumeration is the consumer's concern.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    masses = m.masses
    target = m.target_densities
    cons = m.constraint_densities
    for _ in range(int(rounds)):
        masses = np.repeat(masses * 0.5, 2)
        target = np.repeat(target, 2, axis=1)
        cons = np.repeat(cons, 2, axis=1)
    return DiscreteVectorMeasure(masses, target, cons, m.constraint_values)


# ---------------------------------------------------------------------------
# vertices of the relaxed (functional) feasible set
# ---------------------------------------------------------------------------

@dataclass
class ExtremeSolutions:
    vertices: list                # of (N,) float arrays in [0,1]^N
    complete: bool                # False when the candidate cap was hit

    def __len__(self) -> int:
        return len(self.vertices)


def extreme_solutions(m: DiscreteVectorMeasure, cap=VERTEX_CAP,
                      tol=1e-9) -> ExtremeSolutions:
    """Vertices of {g in [0,1]^N : sum_a g_a * mass_a * density_{j,a} = z_j}.

    At a vertex at most n coordinates are strictly inside (0, 1): the
    finite-dimensional shadow of extreme solutions being indicator-like.
    Enumerates fractional-support candidates (subsets of <= n coordinates
    with independent columns) against all 0/1 assignments elsewhere; the
    candidate budget is capped, returning a flagged partial list beyond it.
    """
    W = m.constraint_weights()        # (n, N)
    z = m.constraint_values
    n_cons, N = W.shape
    scale = 1.0 + float(np.abs(z).sum() + np.abs(W).sum())
    res_tol = 1e-9 * scale
    found = {}
    complete = True
    budget = int(cap)

    def record(g):
        key = tuple(np.round(g, 9))
        if key not in found:
            found[key] = g.copy()

    if n_cons == 0:
        total = 2**N
        if total > budget:
            complete = False
            total = budget
        for mask in range(total):
            g = _mask_bits(mask, N).astype(float)
            record(g)
        return _finish(found, complete)

    for size in range(0, n_cons + 1):
        for support in itertools.combinations(range(N), size):
            comp = [a for a in range(N) if a not in support]
            n_assign = 2 ** len(comp)
            if budget <= 0:
                complete = False
                break
            take = min(n_assign, budget)
            budget -= take
            if take < n_assign:
                complete = False
            Ws = W[:, support]                      # (n, size)
            if size and np.linalg.matrix_rank(Ws, tol=1e-12 * scale) < size:
                continue
            assigns = _subset_sums(W[:, comp]) if comp else np.zeros((1, n_cons))
            assigns = assigns[:take]
            rhs = z[None, :] - assigns              # (take, n)
            if size:
                sol, res, *_ = np.linalg.lstsq(Ws, rhs.T, rcond=None)
                resid = np.abs(Ws @ sol - rhs.T).max(axis=0)
                ok = (resid <= res_tol) & np.all(sol >= -tol, axis=0) \
                    & np.all(sol <= 1.0 + tol, axis=0)
            else:
                sol = np.zeros((0, take))
                ok = np.abs(rhs).max(axis=1) <= res_tol
            for col in np.nonzero(ok)[0]:
                g = np.zeros(N)
                bits = _mask_bits(int(col), len(comp))
                for b, atom in zip(bits, comp):
                    g[atom] = float(b)
                for s_idx, atom in enumerate(support):
                    g[atom] = min(max(sol[s_idx, col], 0.0), 1.0)
                record(g)
        if not complete:
            break
    if not found:
        raise Infeasible("no vertex of the constrained unit box exists")
    return _finish(found, complete)


def _finish(found, complete):
    verts = [found[k] for k in sorted(found.keys())]
    return ExtremeSolutions(verts, complete)


def fractional_count(g, tol=1e-9) -> int:
    """Number of coordinates strictly inside (0, 1), band [tol, 1-tol]."""
    g = np.asarray(g, dtype=float)
    return int(np.count_nonzero((g >= tol) & (g <= 1.0 - tol)))


# ---------------------------------------------------------------------------
# normalized-trace projection range (matrix specialization)
# ---------------------------------------------------------------------------

@dataclass
class ContainmentReport:
    n_samples: int
    n_outside: int
    max_violation: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.n_outside == 0

    def to_json(self) -> dict:
        return {
            "n_samples": self.n_samples,
            "n_outside": self.n_outside,
            "max_violation": self.max_violation,
            "tol": self.tol,
            "pass": self.passed,
        }


def projection_trace_range(b, k, n_samples, seed, tol=1e-8, m_angles=720):
    """Sample tr(p b)/n over Haar rank-k projections and check containment in
    the (k/n)-scaled k-frame support polygon.

    With the normalized trace, the attainable set at trace level k/n is the
    k-frame range scaled by k/n, so every sampled point must satisfy the
    scaled half-plane constraints.  Returns (points, report, curve).
    """
    bm = mat.as_matrix(b)
    n = bm.shape[0]
    if not 1 <= k <= n:
        raise BadRank(f"k={k} outside 1..{n}")
    curve = boundary_polygon(bm, "k", k, m_angles)
    n_chunks = (int(n_samples) + 32768 - 1) // 32768
    gens = mat.chunk_generators(seed, n_chunks)
    pts = np.empty((int(n_samples), 2))
    pos = 0
    for g in gens:
        count = min(32768, int(n_samples) - pos)
        zm = g.standard_normal((count, n, n)) + 1j * g.standard_normal((count, n, n))
        q, r = np.linalg.qr(zm / np.sqrt(2.0))
        d = np.diagonal(r, axis1=-2, axis2=-1).copy()
        d[d == 0] = 1.0
        u = q * (d / np.abs(d))[:, None, :]
        x = u[:, :, :k]
        vals = np.einsum("snk,nm,smk->s", x.conj(), bm, x) / n
        pts[pos:pos + count, 0] = vals.real
        pts[pos:pos + count, 1] = vals.imag
        pos += count
    scale = k / n
    dirs = curve.directions.T
    viol = np.empty(len(pts))
    for lo in range(0, len(pts), 8192):
        block = pts[lo:lo + 8192]
        viol[lo:lo + 8192] = (block @ dirs - scale * curve.support_values).max(axis=1)
    report = ContainmentReport(
        n_samples=len(pts),
        n_outside=int(np.count_nonzero(viol > tol)),
        max_violation=float(max(viol.max(), 0.0)),
        tol=float(tol),
    )
    return pts, report, curve


# ---------------------------------------------------------------------------
# random measures for studies and tests
# ---------------------------------------------------------------------------

def random_measure(n_atoms, k, n_constraints, seed, dyadic=True) -> DiscreteVectorMeasure:
    """Random measure with masses in (0, 1] and densities in [-1, 1].

    With dyadic=True all data are 12-bit dyadic rationals, so subset sums at
    the guard scale are exact in double precision and the additivity laws
    hold with equality, not just within rounding.
    """
    rng = mat.generator(seed)
    if dyadic:
        q = 4096.0
        masses = rng.integers(1, int(q) + 1, size=n_atoms) / q
        target = rng.integers(-int(q), int(q) + 1, size=(k, n_atoms)) / q
        cons = rng.integers(-int(q), int(q) + 1, size=(n_constraints, n_atoms)) / q
    else:
        masses = rng.uniform(0.0, 1.0, size=n_atoms) + 1e-9
        target = rng.uniform(-1.0, 1.0, size=(k, n_atoms))
        cons = rng.uniform(-1.0, 1.0, size=(n_constraints, n_atoms))
    z = np.zeros(n_constraints)
    m = DiscreteVectorMeasure(masses, target, cons.reshape(n_constraints, n_atoms), z)
    if n_constraints:
        # aim constraints at an attainable subset so filtering stays nonempty
        mask = int(rng.integers(1, 2**n_atoms))
        sel = _mask_bits(mask, n_atoms)
        z = m.constraint_weights()[:, sel].sum(axis=1)
        m = DiscreteVectorMeasure(masses, target, m.constraint_densities, z)
    return m


def refinement_study(m: DiscreteVectorMeasure, rounds, n_pairs, seed,
                     eta=None) -> list:
    """Convexity defect of the (optionally constrained) range per refinement
    round, stopping early when enumeration would exceed the atom guard.

    Returns a list of dicts with round, atoms, max_mass, defect and (when
    constraints are present) the constrained defect and point count.
    """
    out = []
    current = m
    for r in range(int(rounds) + 1):
        if current.n_atoms > MAX_ATOMS:
            break
        entry = {
            "round": r,
            "atoms": current.n_atoms,
            "max_mass": float(current.masses.max()),
        }
        sample = range_bruteforce(current)
        entry["defect"] = convexity_defect(sample, n_pairs, seed)
        if current.n_constraints:
            e = default_eta(current) if eta is None else float(eta)
            constrained = constrained_range(current, e)
            entry["eta"] = e
            entry["constrained_points"] = len(constrained)
            if len(constrained) >= 2:
                entry["constrained_defect"] = convexity_defect(
                    constrained, n_pairs, seed)
        out.append(entry)
        if r < rounds:
            current = refine(current, 1)
    return out
