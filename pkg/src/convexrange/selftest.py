"""Bundled invariant suite: fast spot checks of every module's contracts.

Run via `convexrange selftest`.  Each check is small enough for interactive
use; the full acceptance evidence lives in the pytest suite.
"""

from __future__ import annotations

import numpy as np

from . import lyapunov as lyap
from . import matrices as mat
from . import numrange as nr
from . import polytopes as poly
from . import spectral as sp


def _random_hermitian(n, seed):
    rng = mat.generator(seed)
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (z + z.conj().T) / 2


def _random_complex(n, seed):
    rng = mat.generator(seed)
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def _checks():
    yield "eigensolver reconstruction", _check_eig
    yield "haar unitarity and determinism", _check_haar
    yield "rotated-part trace identity", _check_rotated
    yield "support reduction k-mode vs c-mode", _check_reduction
    yield "support containment chain", _check_chain
    yield "sampled range inside support polygon", _check_containment
    yield "square/cube minimal faces", _check_minimal_faces
    yield "face identity on random polytopes", _check_face_identity
    yield "majorization round trip", _check_majorization
    yield "pinch-face witnesses", _check_witnesses
    yield "trace-slice facial dimensions", _check_trace_slice
    yield "measure additivity and refinement", _check_measure
    yield "constrained-box vertices", _check_vertices


def _check_eig():
    for seed in (7, 8):
        h = _random_hermitian(5, seed)
        dec = mat.hermitian_eig(h)
        resid = np.abs(dec.reconstruct() - h).sum(axis=1).max()
        assert resid <= 1e-10 * (1 + np.abs(h).sum(axis=1).max())
        ortho = np.abs(dec.eigenvectors.conj().T @ dec.eigenvectors - np.eye(5)).max()
        assert ortho <= 1e-10


def _check_haar():
    u = mat.haar_unitary(4, 42)
    assert np.abs(u.conj().T @ u - np.eye(4)).max() <= 1e-10
    assert np.array_equal(u, mat.haar_unitary(4, 42))
    p = mat.random_rank_k_projection(3, 2, 1)
    lam = mat.hermitian_eig(p).eigenvalues
    assert np.abs(lam - [1, 1, 0]).max() <= 1e-10


def _check_rotated():
    a = _random_complex(4, 3)
    for theta in (0.0, 0.7, 2.0):
        h = mat.rotated_hermitian_part(a, theta)
        assert np.abs(h - h.conj().T).max() <= 1e-14
        lhs = np.trace(h).real
        rhs = (np.exp(-1j * theta) * np.trace(a)).real
        assert abs(lhs - rhs) <= 1e-12


def _check_reduction():
    b = _random_complex(4, 5)
    k = 2
    c = np.array([0.5, 0.5, 0.0, 0.0])
    for theta in np.linspace(0, 2 * np.pi, 17):
        pk = nr.support_point_k(b, k, theta)
        pc = nr.support_point_c(b, c, theta)
        assert abs(pk.h - pc.h) <= 1e-12
        assert np.abs(pk.z - pc.z).max() <= 1e-12


def _check_chain():
    b = _random_complex(5, 9)
    curves = {k: nr.boundary_polygon(b, "k", k, 64) for k in (1, 3, 5)}
    h1 = curves[1].support_values
    h3 = curves[3].support_values
    h5 = curves[5].support_values
    assert np.all(h5 <= h3 + 1e-10) and np.all(h3 <= h1 + 1e-10)


def _check_containment():
    b = _random_complex(4, 11)
    curve = nr.boundary_polygon(b, "k", 2, 128)
    samples = nr.sample_range(b, "k", 2, 5000, 123)
    report = nr.certify_convexity(samples, curve, 1e-8, n_pairs=2000, seed=7)
    assert report.n_outside == 0 and report.midpoint_defect <= 1e-8
    assert nr.attainment_check(curve)


def _check_minimal_faces():
    square = poly.VPolytope.from_points(2, [(0, 0), (1, 0), (1, 1), (0, 1)])
    f = poly.minimal_face(square, ("1/2", 0), method="lp")
    assert sorted(f.vertices) == [(0, 0), (1, 0)] and f.dim == 1
    cube = poly.VPolytope.from_points(
        3, [(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)])
    assert len(poly.faces_of(cube)) == 27
    assert poly.facial_dimension(cube) == 1


def _check_face_identity():
    report = poly.run_intersection_suite(n_trials=15, seed=2024)
    assert report.all_pass and report.n_checked >= 10


def _check_majorization():
    rng = mat.generator(31)
    for _ in range(25):
        n = int(rng.integers(2, 7))
        c = np.sort(rng.uniform(-2, 3, n))[::-1]
        b = c.copy()
        for _ in range(int(rng.integers(1, 5))):
            i, j = rng.choice(n, 2, replace=False)
            b = sp.apply_pinching(b, sp.PinchingStep(int(i), int(j),
                                                     float(rng.uniform())))
        b = np.sort(b)[::-1]
        assert sp.majorizes(b, c)
        steps = sp.pinching_sequence(c, b)
        assert len(steps) <= n - 1
        w = c.copy()
        for s in steps:
            w = sp.apply_pinching(w, s)
        assert np.abs(np.sort(w)[::-1] - b).max() <= 1e-9


def _check_witnesses():
    wit = sp.pinch_face_witnesses([1.0, 0.0], 0, 1, 0.5, np.eye(2))
    for m in wit.matrices():
        lam = np.sort(mat.hermitian_eig(m).eigenvalues)
        assert np.abs(lam - [0.0, 1.0]).max() <= 1e-10
    assert np.abs(wit.midpoint_real() - np.diag([0.5, 0.5])).max() <= 1e-12
    assert wit.affine_rank() >= 3


def _check_trace_slice():
    assert sp.is_trace_slice_extreme(np.diag([1.0, 1.0, 0.0]), 2)
    assert sp.trace_slice_face_dimension(np.diag([1.0, 0.5, 0.5, 0.0]), 2) == 3
    assert sp.trace_slice_face_dimension(np.diag([0.5] * 4), 2) == 15


def _check_measure():
    m = lyap.random_measure(8, 2, 0, seed=5)
    sample = lyap.range_bruteforce(m)
    full = (1 << 8) - 1
    assert np.array_equal(sample.points[full], m.total())
    rng = mat.generator(17)
    for _ in range(20):
        a = int(rng.integers(0, 2**8))
        bmask = int(rng.integers(0, 2**8)) & ~a
        lhs = sample.points[a | bmask]
        rhs = sample.points[a] + sample.points[bmask]
        assert np.array_equal(lhs, rhs)
    refined = lyap.refine(m, 1)
    assert np.array_equal(refined.total(), m.total())


def _check_vertices():
    m = lyap.DiscreteVectorMeasure(
        np.ones(3), np.ones((1, 3)), np.ones((1, 3)), np.array([1.5]))
    sols = lyap.extreme_solutions(m)
    assert sols.complete and len(sols) == 6
    for g in sols.vertices:
        assert lyap.fractional_count(g) <= 1


def run_selftest(verbose=True) -> bool:
    ok = True
    for name, fn in _checks():
        try:
            fn()
            status = "pass"
        except AssertionError:
            status = "FAIL"
            ok = False
        except Exception as exc:  # report, keep going
            status = f"ERROR ({type(exc).__name__}: {exc})"
            ok = False
        if verbose:
            print(f"[{'ok' if status == 'pass' else '!!'}] {name}: {status}")
    return ok
