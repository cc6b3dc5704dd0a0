"""Exact finite-dimensional convex geometry over the rationals.

V-polytopes, affine subspaces, minimal faces, exhaustive face enumeration,
and the face-identity checker for intersections with affine subspaces.  All
arithmetic is exact (gmpy2.mpq, falling back to fractions.Fraction), because
the face identity G(K, F) ∩ H = F is an exact set equality and floating point
would manufacture spurious failures.

Minimal faces follow the dilation characterization: w belongs to the smallest
face of K containing v exactly when (1+λ)v - λw stays in K for some λ > 0.
The default implementation answers that query with an exact rational simplex
LP per vertex; a facet-based fast path (identical answers, used by the bulk
randomized suite) is available once the H-representation has been computed.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputFormatError, NotInPolytope, Singleton, TooLarge

try:
    from gmpy2 import mpq
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as mpq

_ZERO = mpq(0)
_ONE = mpq(1)

FACES_MAX_VERTICES = 20
FACES_MAX_DIM = 6


def _q(x) -> mpq:
    """Exact rational from int or 'p/q' string."""
    if isinstance(x, bool):
        raise InputFormatError("booleans are not rational coordinates")
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, str):
        try:
            return mpq(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputFormatError(f"bad rational literal {x!r}") from exc
    if isinstance(x, (np.integer,)):
        return mpq(int(x))
    try:
        return mpq(x)
    except TypeError as exc:
        raise InputFormatError(f"cannot interpret {x!r} as a rational") from exc


def _qvec(xs) -> tuple:
    return tuple(_q(x) for x in xs)


# ---------------------------------------------------------------------------
# exact linear algebra
# ---------------------------------------------------------------------------

def _rref(rows):
    """Reduced row echelon form. Returns (rref rows, pivot column list)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = _ONE / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def _rank(rows) -> int:
    return len(_rref(rows)[0])


def _nullspace(rows, ncols):
    """Basis of {x : rows @ x = 0} as a list of tuples."""
    red, pivots = _rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [_ZERO] * ncols
        v[f] = _ONE
        for i, p in enumerate(pivots):
            v[p] = -red[i][f]
        basis.append(tuple(v))
    return basis


def _solve_affine(rows, rhs, nunk):
    """Solve rows @ u = rhs exactly.

    Returns ("unique", u) / ("none", None) / ("many", None).
    """
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = _rref(aug)
    for row in red:
        if all(x == 0 for x in row[:nunk]) and row[nunk] != 0:
            return "none", None
    piv_unk = [p for p in pivots if p < nunk]
    if len(piv_unk) < nunk:
        return "many", None
    u = [_ZERO] * nunk
    for i, p in enumerate(pivots):
        if p < nunk:
            u[p] = red[i][nunk]
    return "unique", tuple(u)


def _dot(a, b):
    s = _ZERO
    for x, y in zip(a, b):
        if x != 0 and y != 0:
            s += x * y
    return s


def _affine_rank(points) -> int:
    """Dimension of the affine hull of a point list."""
    if len(points) <= 1:
        return 0
    p0 = points[0]
    diffs = [[x - y for x, y in zip(p, p0)] for p in points[1:]]
    return _rank(diffs)


def _primitive(vec, rhs):
    """Scale (vec, rhs) by a positive rational so vec is a primitive int tuple."""
    dens = [x.denominator for x in vec] + [rhs.denominator]
    l = math.lcm(*[int(d) for d in dens])
    ints = [int(x * l) for x in vec]
    r = int(rhs * l)
    g = math.gcd(*[abs(v) for v in ints], abs(r))
    if g > 1:
        ints = [v // g for v in ints]
        r //= g
    return tuple(mpq(v) for v in ints), mpq(r)


# ---------------------------------------------------------------------------
# exact simplex (Bland's rule)
# ---------------------------------------------------------------------------

def _lp_pivot(T, basis, row, col):
    piv = T[row][col]
    T[row] = [x / piv for x in T[row]]
    pivrow = T[row]
    for r in range(len(T)):
        if r != row and T[r][col] != 0:
            f = T[r][col]
            T[r] = [a - f * b for a, b in zip(T[r], pivrow)]
    basis[row] = col


def _lp_iterate(T, basis, cvec, ncols):
    """Run simplex to optimality on tableau T (maximize). Bland's rule."""
    m = len(T)
    while True:
        # reduced costs c_j - c_B . T[:, j]
        enter = -1
        for j in range(ncols):
            if j in basis:
                continue
            rc = cvec[j]
            for i in range(m):
                cb = cvec[basis[i]]
                if cb != 0 and T[i][j] != 0:
                    rc -= cb * T[i][j]
            if rc > 0:
                enter = j
                break
        if enter < 0:
            return "optimal"
        leave = -1
        best = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][-1] / T[i][enter]
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            return "unbounded"
        _lp_pivot(T, basis, leave, enter)


def lp_maximize(A, b, c):
    """Maximize c.x subject to A x = b, x >= 0, exactly.

    Returns (status, value, x) with status "optimal" | "infeasible" |
    "unbounded".  Small dense tableau with Bland's rule, intended for the
    desk-scale systems arising from polytope membership and dilation queries.
    """
    m = len(A)
    n = len(c)
    rows = []
    rhs = []
    for i in range(m):
        if b[i] < 0:
            rows.append([-x for x in A[i]])
            rhs.append(-b[i])
        else:
            rows.append(list(A[i]))
            rhs.append(b[i])
    ncols = n + m
    T = [
        rows[i] + [_ONE if j == i else _ZERO for j in range(m)] + [rhs[i]]
        for i in range(m)
    ]
    basis = [n + i for i in range(m)]
    phase1 = [_ZERO] * n + [-_ONE] * m
    _lp_iterate(T, basis, phase1, ncols)
    art_value = sum(T[i][-1] for i in range(m) if basis[i] >= n)
    if art_value != 0:
        return "infeasible", None, None
    # drive surviving artificials out of the basis (degenerate rows)
    drop = []
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is None:
                drop.append(i)
            else:
                _lp_pivot(T, basis, i, col)
    for i in sorted(drop, reverse=True):
        del T[i]
        del basis[i]
    T = [row[:n] + [row[-1]] for row in T]
    phase2 = list(c)
    status = _lp_iterate(T, basis, phase2, n)
    if status == "unbounded":
        return "unbounded", None, None
    x = [_ZERO] * n
    for i, bi in enumerate(basis):
        x[bi] = T[i][-1]
    value = _dot(c, x)
    return "optimal", value, tuple(x)


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass
class VPolytope:
    """Polytope given by an irredundant list of exact rational vertices."""

    d: int
    vertices: list
    _hrep: object = field(default=None, repr=False, compare=False)

    @classmethod
    def from_points(cls, d, points):
        """Build from an arbitrary point list: dedupes and drops redundant
        points (decided by exact membership LPs)."""
        pts = []
        seen = set()
        for p in points:
            t = _qvec(p)
            if len(t) != d:
                raise InputFormatError(f"point {p} has dimension {len(t)} != {d}")
            if t not in seen:
                seen.add(t)
                pts.append(t)
        keep = []
        for i, p in enumerate(pts):
            others = pts[:i] + pts[i + 1:]
            if not others or not _contains_lp(others, p):
                keep.append(p)
        return cls(d, keep)

    def __post_init__(self):
        self.vertices = [_qvec(v) for v in self.vertices]
        for v in self.vertices:
            if len(v) != self.d:
                raise InputFormatError("vertex dimension mismatch")

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def is_empty(self) -> bool:
        return not self.vertices

    def hrep(self):
        if self._hrep is None:
            self._hrep = _build_hrep(self)
        return self._hrep

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "vertices": [[str(x) for x in v] for v in self.vertices],
        }

    @classmethod
    def from_json(cls, obj):
        try:
            d = int(obj["d"])
            verts = obj["vertices"]
        except (KeyError, TypeError) as exc:
            raise InputFormatError(f"bad polytope JSON: {exc}") from exc
        return cls.from_points(d, verts)


@dataclass
class AffineSubspace:
    """Affine subspace {x : A x = b} with exact rational data."""

    d: int
    A: list
    b: list

    def __post_init__(self):
        self.A = [_qvec(row) for row in self.A]
        self.b = [_q(x) for x in self.b]
        if len(self.A) != len(self.b):
            raise InputFormatError("A and b row counts differ")
        for row in self.A:
            if len(row) != self.d:
                raise InputFormatError("equation width mismatch")

    def reduced(self):
        """Independent equations as (rows, rhs); None when inconsistent."""
        aug = [list(r) + [c] for r, c in zip(self.A, self.b)]
        red, _ = _rref(aug)
        rows = []
        rhs = []
        for row in red:
            if all(x == 0 for x in row[: self.d]):
                if row[self.d] != 0:
                    return None
                continue
            rows.append(tuple(row[: self.d]))
            rhs.append(row[self.d])
        return rows, rhs

    @property
    def codim(self) -> int:
        red = self.reduced()
        return len(red[0]) if red else 0

    def is_empty(self) -> bool:
        return self.reduced() is None

    def contains(self, point) -> bool:
        p = _qvec(point)
        return all(_dot(row, p) == c for row, c in zip(self.A, self.b))

    def to_json(self) -> dict:
        return {
            "A": [[str(x) for x in row] for row in self.A],
            "b": [str(x) for x in self.b],
        }

    @classmethod
    def from_json(cls, obj, d=None):
        try:
            A = obj["A"]
            b = obj["b"]
        except (KeyError, TypeError) as exc:
            raise InputFormatError(f"bad subspace JSON: {exc}") from exc
        if d is None:
            if not A:
                raise InputFormatError("cannot infer dimension from empty A")
            d = len(A[0])
        return cls(d, A, b)


@dataclass
class PolytopeFace:
    """Face of a parent polytope, recorded as a vertex-index subset."""

    parent: VPolytope
    vertex_indices: tuple
    dim: int

    @property
    def vertices(self) -> list:
        return [self.parent.vertices[i] for i in self.vertex_indices]

    def barycenter(self) -> tuple:
        pts = self.vertices
        m = mpq(len(pts))
        return tuple(sum(col, _ZERO) / m for col in zip(*pts))


# ---------------------------------------------------------------------------
# H-representation: chart into the affine hull + facet inequalities
# ---------------------------------------------------------------------------

class _HRep:
    """Facet description of a V-polytope, expressed in affine-hull coordinates.

    chart: x = origin + sum_i t_i basis[i]; tcoords[i] are the vertices in
    t-space; facets are (normal, rhs, incidence-bitmask) with normal.t <= rhs
    valid for the whole polytope and tight exactly on the incidence set.
    """

    def __init__(self, origin, basis, piv_cols, inv_rows, eqs, tcoords, facets):
        self.origin = origin
        self.basis = basis          # list of r d-vectors
        self.piv_cols = piv_cols    # r coordinate indices used for inversion
        self.inv_rows = inv_rows    # r x r exact inverse (rows)
        self.eqs = eqs              # affine-hull equations [(normal, rhs)]
        self.tcoords = tcoords
        self.facets = facets        # [(normal(t), rhs, incidence bitmask)]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def to_t(self, x):
        """Affine-hull coordinates of x; None if x is outside the hull."""
        x = _qvec(x)
        delta = [a - b for a, b in zip(x, self.origin)]
        restricted = [delta[c] for c in self.piv_cols]
        t = tuple(_dot(row, restricted) for row in self.inv_rows)
        # verify the chart actually reproduces x (membership in the hull)
        for c in range(len(x)):
            s = _ZERO
            for ti, bvec in zip(t, self.basis):
                s += ti * bvec[c]
            if s != delta[c]:
                return None
        return t

    def to_x(self, t):
        out = list(self.origin)
        for ti, bvec in zip(t, self.basis):
            for c in range(len(out)):
                out[c] += ti * bvec[c]
        return tuple(out)

    def tight_mask(self, t) -> int:
        mask = 0
        for i, (normal, rhs, _) in enumerate(self.facets):
            if _dot(normal, t) == rhs:
                mask |= 1 << i
        return mask

    def inside(self, t) -> bool:
        return all(_dot(normal, t) <= rhs for normal, rhs, _ in self.facets)


def _build_hrep(K: VPolytope) -> _HRep:
    verts = K.vertices
    if not verts:
        raise NotInPolytope("empty polytope has no H-representation")
    origin = verts[0]
    diffs = [[x - y for x, y in zip(v, origin)] for v in verts[1:]]
    red, piv = _rref(diffs)
    r = len(red)
    # pick r linearly independent difference vectors as the chart basis
    basis = []
    rows_so_far = []
    for dvec in diffs:
        if len(basis) == r:
            break
        if _rank(rows_so_far + [dvec]) > len(rows_so_far):
            basis.append(tuple(dvec))
            rows_so_far.append(dvec)
    # invert the basis restricted to its pivot coordinates
    piv_cols = []
    for c in range(K.d):
        if len(piv_cols) == r:
            break
        rows = [[basis[i][cc] for i in range(r)] for cc in piv_cols + [c]]
        if _rank(rows) > len(piv_cols):
            piv_cols.append(c)
    mat = [[basis[i][c] for i in range(r)] for c in piv_cols]  # r x r
    inv_rows = _invert(mat) if r else []
    # affine-hull equations: nullspace of the basis span
    eq_normals = _nullspace(basis, K.d)
    eqs = [(nv, _dot(nv, origin)) for nv in eq_normals]
    tcoords = []
    for v in verts:
        delta = [a - b for a, b in zip(v, origin)]
        restricted = [delta[c] for c in piv_cols]
        tcoords.append(tuple(_dot(row, restricted) for row in inv_rows))
    facets = _enumerate_facets(tcoords, r)
    return _HRep(origin, basis, piv_cols, inv_rows, eqs, tcoords, facets)


def _invert(mat):
    n = len(mat)
    aug = [list(mat[i]) + [_ONE if j == i else _ZERO for j in range(n)] for i in range(n)]
    red, piv = _rref(aug)
    if len(red) < n or piv != list(range(n)):
        raise InputFormatError("chart basis not invertible (internal error)")
    return [tuple(row[n:]) for row in red]


def _enumerate_facets(tcoords, r):
    """All facets of conv(tcoords) in R^r by brute force over r-subsets."""
    m = len(tcoords)
    if r == 0 or m <= 1:
        return []
    seen = {}
    for subset in itertools.combinations(range(m), r):
        base = tcoords[subset[0]]
        rows = [
            [tcoords[i][c] - base[c] for c in range(r)] for i in subset[1:]
        ]
        ns = _nullspace(rows, r)
        if len(ns) != 1:
            continue
        normal = ns[0]
        rhs = _dot(normal, base)
        lo = hi = False
        for t in tcoords:
            val = _dot(normal, t)
            if val > rhs:
                hi = True
            elif val < rhs:
                lo = True
            if lo and hi:
                break
        if lo and hi:
            continue
        if hi:  # flip so the polytope satisfies normal.t <= rhs
            normal = tuple(-x for x in normal)
            rhs = -rhs
        normal, rhs = _primitive(normal, rhs)
        key = (normal, rhs)
        if key in seen:
            continue
        inc = 0
        for i, t in enumerate(tcoords):
            if _dot(normal, t) == rhs:
                inc |= 1 << i
        seen[key] = (normal, rhs, inc)
    return list(seen.values())


def _face_lattice_masks(hrep, n_vertices) -> set:
    """All nonempty faces as vertex bitmasks (closure of facet incidences)."""
    full = (1 << n_vertices) - 1
    faces = {full}
    frontier = [full]
    incidences = [inc for _, _, inc in hrep.facets]
    while frontier:
        nxt = []
        for f in frontier:
            for inc in incidences:
                g = f & inc
                if g and g not in faces:
                    faces.add(g)
                    nxt.append(g)
        frontier = nxt
    return faces


def _mask_to_indices(mask) -> tuple:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


# ---------------------------------------------------------------------------
# membership and minimal faces
# ---------------------------------------------------------------------------

def _contains_lp(vertices, point) -> bool:
    """Exact membership of point in conv(vertices) via a feasibility LP."""
    if not vertices:
        return False
    d = len(point)
    m = len(vertices)
    A = [[vertices[j][i] for j in range(m)] for i in range(d)]
    A.append([_ONE] * m)
    b = list(point) + [_ONE]
    status, _, _ = lp_maximize(A, b, [_ZERO] * m)
    return status == "optimal"


def polytope_contains(K: VPolytope, point) -> bool:
    """Exact membership test, decided by rational linear programming."""
    return _contains_lp(K.vertices, _qvec(point))


def _dilation_positive(K: VPolytope, v, w) -> bool:
    """Does (1+λ)v - λw stay in K for some λ > 0?  Exact λ-LP."""
    m = K.n_vertices
    d = K.d
    # variables: u_0..u_{m-1}, lam, slack ; maximize lam, lam + slack = 1
    nvar = m + 2
    A = []
    b = []
    for i in range(d):
        row = [K.vertices[j][i] for j in range(m)] + [w[i] - v[i], _ZERO]
        A.append(row)
        b.append(v[i])
    A.append([_ONE] * m + [_ZERO, _ZERO])
    b.append(_ONE)
    A.append([_ZERO] * m + [_ONE, _ONE])
    b.append(_ONE)
    c = [_ZERO] * m + [_ONE, _ZERO]
    status, value, _ = lp_maximize(A, b, c)
    if status != "optimal":
        raise NotInPolytope("dilation LP infeasible: base point outside polytope")
    return value > 0


def minimal_face(K: VPolytope, point, *, method="auto") -> PolytopeFace:
    """Smallest face of K containing the given point.

    method "lp" runs one exact λ-dilation LP per vertex; "facets" reads the
    answer off the facet inequalities tight at the point (identical result,
    much faster in bulk); "auto" uses facets when the H-representation is
    already cached on K.
    """
    v = _qvec(point)
    if len(v) != K.d:
        raise InputFormatError("point dimension mismatch")
    if method == "auto":
        method = "facets" if K._hrep is not None else "lp"
    if method == "lp":
        if not polytope_contains(K, v):
            raise NotInPolytope(f"point {point} is not in the polytope")
        idx = [
            j for j in range(K.n_vertices)
            if _dilation_positive(K, v, K.vertices[j])
        ]
    elif method == "facets":
        hrep = K.hrep()
        t = hrep.to_t(v)
        if t is None or not hrep.inside(t):
            raise NotInPolytope(f"point {point} is not in the polytope")
        tight = hrep.tight_mask(t)
        mask = (1 << K.n_vertices) - 1
        for i, (_, _, inc) in enumerate(hrep.facets):
            if tight & (1 << i):
                mask &= inc
        idx = list(_mask_to_indices(mask))
    else:
        raise ValueError(f"unknown method {method!r}")
    pts = [K.vertices[j] for j in idx]
    return PolytopeFace(K, tuple(idx), _affine_rank(pts))


def minimal_face_of_set(K: VPolytope, points, *, method="auto",
                        check_membership=True) -> PolytopeFace:
    """Smallest face of K containing every point of a finite set.

    Computed as the minimal face at the barycenter, which is a weak internal
    point of the convex hull of the set, so any face containing it contains
    the whole set.
    """
    pts = [_qvec(p) for p in points]
    if not pts:
        raise InputFormatError("need at least one point")
    if check_membership:
        for p in pts:
            if not polytope_contains(K, p):
                raise NotInPolytope(f"point {p} is not in the polytope")
    m = mpq(len(pts))
    bary = tuple(sum(col, _ZERO) / m for col in zip(*pts))
    return minimal_face(K, bary, method=method)


# ---------------------------------------------------------------------------
# faces, intersection, and the face-identity checker
# ---------------------------------------------------------------------------

def faces_of(K: VPolytope) -> list:
    """Every nonempty face of K (vertices, edges, ..., K itself).

    Guarded to <= 20 vertices and ambient dimension <= 6.
    """
    if K.n_vertices > FACES_MAX_VERTICES or K.d > FACES_MAX_DIM:
        raise TooLarge(
            f"face enumeration guarded to {FACES_MAX_VERTICES} vertices and "
            f"dimension {FACES_MAX_DIM}"
        )
    return _faces_unguarded(K)


def _faces_unguarded(K: VPolytope) -> list:
    if K.is_empty():
        return []
    hrep = K.hrep()
    masks = _face_lattice_masks(hrep, K.n_vertices)
    faces = []
    for mask in masks:
        idx = _mask_to_indices(mask)
        pts = [K.vertices[i] for i in idx]
        faces.append(PolytopeFace(K, idx, _affine_rank(pts)))
    faces.sort(key=lambda f: (f.dim, f.vertex_indices))
    return faces


def facial_dimension(K: VPolytope) -> int:
    """Minimum dimension over nonsingleton faces of K."""
    if K.n_vertices < 2:
        raise Singleton("facial dimension needs at least two vertices")
    dims = [f.dim for f in faces_of(K) if len(f.vertex_indices) >= 2]
    return min(dims)


def intersect_affine(K: VPolytope, H: AffineSubspace) -> VPolytope:
    """Exact V-representation of K ∩ H (possibly empty).

    Every point of K sits in the relative interior of exactly one face; it is
    a vertex of K ∩ H precisely when the affine hull of that face meets H in
    that point alone.  Scanning the face lattice therefore yields every vertex
    exactly once.
    """
    if K.is_empty():
        return VPolytope(K.d, [])
    if H.d != K.d:
        raise InputFormatError("ambient dimensions differ")
    red = H.reduced()
    if red is None:
        return VPolytope(K.d, [])
    rows, rhs = red
    hrep = K.hrep()
    r = hrep.dim
    # H in chart coordinates: (row . basis_i) t_i = rhs - row . origin
    eq_rows = []
    eq_rhs = []
    for row, c in zip(rows, rhs):
        eq_rows.append([_dot(row, bvec) for bvec in hrep.basis])
        eq_rhs.append(c - _dot(row, hrep.origin))
    masks = _face_lattice_masks(hrep, K.n_vertices)
    found = {}
    for mask in masks:
        idx = _mask_to_indices(mask)
        t0 = hrep.tcoords[idx[0]]
        fdiffs = []
        for i in idx[1:]:
            cand = [hrep.tcoords[i][c] - t0[c] for c in range(r)]
            if _rank(fdiffs + [cand]) > len(fdiffs):
                fdiffs.append(cand)
        rf = len(fdiffs)
        sys_rows = [[_dot(e, fb) for fb in fdiffs] for e in eq_rows]
        sys_rhs = [c - _dot(e, t0) for e, c in zip(eq_rows, eq_rhs)]
        kind, u = _solve_affine(sys_rows, sys_rhs, rf)
        if kind != "unique":
            continue
        tstar = list(t0)
        for ui, fb in zip(u, fdiffs):
            for c in range(r):
                tstar[c] += ui * fb[c]
        tstar = tuple(tstar)
        if not hrep.inside(tstar):
            continue
        # relative-interior test: tight facets of t* must be exactly the
        # facets containing the whole face
        face_facets = 0
        for i, (_, _, inc) in enumerate(hrep.facets):
            if inc & mask == mask:
                face_facets |= 1 << i
        if hrep.tight_mask(tstar) != face_facets:
            continue
        found[tstar] = hrep.to_x(tstar)
    verts = sorted(found.values())
    return VPolytope(K.d, verts)


@dataclass
class FaceCheck:
    face_dim: int
    g_dim: int
    passed: bool


@dataclass
class IntersectionReport:
    checks: list
    n_faces: int
    all_pass: bool
    empty_intersection: bool
    intersection_vertices: int

    def to_json(self) -> dict:
        return {
            "faces": [
                {"face_dim": c.face_dim, "g_dim": c.g_dim, "pass": c.passed}
                for c in self.checks
            ],
            "summary": {
                "n_faces": self.n_faces,
                "all_pass": self.all_pass,
                "empty_intersection": self.empty_intersection,
                "intersection_vertices": self.intersection_vertices,
            },
        }


CHECK_MAX_INTERSECTION_VERTICES = 48


def check_intersection_theorem(K: VPolytope, H: AffineSubspace) -> IntersectionReport:
    """For every face F of K ∩ H, verify exactly that G(K, F) ∩ H = F.

    G(K, F) is the smallest face of K containing F.  All comparisons are
    exact vertex-set identities in rational arithmetic.
    """
    P = intersect_affine(K, H)
    if P.is_empty():
        return IntersectionReport([], 0, True, True, 0)
    if P.n_vertices > CHECK_MAX_INTERSECTION_VERTICES:
        raise TooLarge(
            f"K ∩ H has {P.n_vertices} vertices, beyond the checker guard"
        )
    checks = []
    for F in _faces_unguarded(P):
        fverts = F.vertices
        G = minimal_face_of_set(K, fverts, method="facets", check_membership=False)
        gpoly = VPolytope(K.d, G.vertices)
        Q = intersect_affine(gpoly, H)
        passed = set(Q.vertices) == set(fverts)
        checks.append(FaceCheck(F.dim, G.dim, passed))
    return IntersectionReport(
        checks=checks,
        n_faces=len(checks),
        all_pass=all(c.passed for c in checks),
        empty_intersection=False,
        intersection_vertices=P.n_vertices,
    )


# ---------------------------------------------------------------------------
# randomized theorem suite
# ---------------------------------------------------------------------------

@dataclass
class SuiteReport:
    n_trials: int
    n_checked: int
    n_faces_checked: int
    n_skipped_empty: int
    n_skipped_large: int
    failures: list

    @property
    def all_pass(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "n_trials": self.n_trials,
            "n_checked": self.n_checked,
            "n_faces_checked": self.n_faces_checked,
            "n_skipped_empty": self.n_skipped_empty,
            "n_skipped_large": self.n_skipped_large,
            "n_failures": len(self.failures),
            "failures": self.failures,
            "all_pass": self.all_pass,
        }


def random_rational_polytope(rng, d, max_vertices=12, coord_bound=9) -> VPolytope:
    """Random integer-coordinate polytope: i.i.d. points in [-bound, bound]^d,
    deduplicated, redundant points removed."""
    npts = int(rng.integers(d + 1, max_vertices + 1))
    pts = rng.integers(-coord_bound, coord_bound + 1, size=(npts, d))
    return VPolytope.from_points(d, [tuple(int(x) for x in p) for p in pts])


def random_subspace_through(rng, K: VPolytope, codim) -> AffineSubspace:
    """Random affine subspace of the given codimension passing through a
    random rational point of K (so K ∩ H is never empty)."""
    d = K.d
    A = rng.integers(-4, 5, size=(codim, d))
    nv = K.n_vertices
    npick = int(rng.integers(1, min(3, nv) + 1))
    picks = rng.choice(nv, size=npick, replace=False)
    weights = [mpq(int(w)) for w in rng.integers(1, 6, size=npick)]
    total = sum(weights, _ZERO)
    x0 = [_ZERO] * d
    for w, pi in zip(weights, picks):
        vtx = K.vertices[int(pi)]
        for c in range(d):
            x0[c] += w * vtx[c]
    x0 = [x / total for x in x0]
    rows = [[mpq(int(a)) for a in row] for row in A]
    b = [_dot(row, x0) for row in rows]
    return AffineSubspace(d, rows, b)


def run_intersection_suite(n_trials=1000, seed=0, max_dim=5, max_vertices=12,
                           max_codim=3, progress=None) -> SuiteReport:
    """Randomized check of the face identity G(K, F) ∩ H = F.

    Per-trial seeds are derived as seed + trial index so trials can be
    distributed across workers and still reproduce.
    """
    n_checked = 0
    n_faces = 0
    skipped_empty = 0
    skipped_large = 0
    failures = []
    for trial in range(n_trials):
        rng = np.random.Generator(
            np.random.Philox(np.random.SeedSequence(int(seed) + trial))
        )
        d = int(rng.integers(2, max_dim + 1))
        K = random_rational_polytope(rng, d, max_vertices)
        codim = int(rng.integers(1, max_codim + 1))
        H = random_subspace_through(rng, K, codim)
        try:
            report = check_intersection_theorem(K, H)
        except TooLarge:
            skipped_large += 1
            continue
        if report.empty_intersection:
            skipped_empty += 1
            continue
        n_checked += 1
        n_faces += report.n_faces
        if not report.all_pass:
            failures.append({
                "trial": trial,
                "polytope": K.to_json(),
                "subspace": H.to_json(),
            })
        if progress is not None and (trial + 1) % 100 == 0:
            progress(trial + 1, n_trials)
    return SuiteReport(n_trials, n_checked, n_faces, skipped_empty,
                       skipped_large, failures)


def load_polytope(path) -> VPolytope:
    try:
        with open(path) as fh:
            return VPolytope.from_json(json.load(fh))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputFormatError(f"cannot read polytope from {path}: {exc}") from exc


def load_subspace(path, d=None) -> AffineSubspace:
    try:
        with open(path) as fh:
            return AffineSubspace.from_json(json.load(fh), d=d)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputFormatError(f"cannot read subspace from {path}: {exc}") from exc
