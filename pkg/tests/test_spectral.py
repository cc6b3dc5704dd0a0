"""Majorization, pinching, face witnesses, and matrix-interval faces."""

import numpy as np
import pytest

from convexrange import matrices as mat
from convexrange import spectral as sp
from convexrange.errors import (
    DegeneratePinch,
    IndexOutOfRange,
    LengthMismatch,
    NotInTraceSlice,
    NotInUnitInterval,
    NotMajorized,
    Unsorted,
)


def test_majorizes_examples():
    assert sp.majorizes([2, 2], [3, 1])
    assert not sp.majorizes([3, 1], [2, 2])
    assert sp.majorizes([2, 1], [2, 1])
    with pytest.raises(LengthMismatch):
        sp.majorizes([1, 1], [2])
    with pytest.raises(Unsorted):
        sp.majorizes([1, 2], [2, 1])


def test_apply_pinching_examples():
    out = sp.apply_pinching([3.0, 1.0], sp.PinchingStep(0, 1, 0.5))
    assert np.array_equal(out, [2.0, 2.0])
    out = sp.apply_pinching([3.0, 1.0], sp.PinchingStep(0, 1, 1.0))
    assert np.array_equal(out, [3.0, 1.0])
    out = sp.apply_pinching([3.0, 1.0], sp.PinchingStep(0, 1, 0.0))
    assert np.array_equal(out, [1.0, 3.0])
    with pytest.raises(IndexOutOfRange):
        sp.apply_pinching([1.0, 2.0], sp.PinchingStep(0, 5, 0.5))


def test_apply_pinching_preserves_sum_exactly():
    rng = mat.generator(40)
    for _ in range(200):
        v = rng.uniform(-5, 5, 6)
        i, j = rng.choice(6, 2, replace=False)
        step = sp.PinchingStep(int(i), int(j), float(rng.uniform()))
        w = sp.apply_pinching(v, step)
        # untouched components identical, pinched pair sum exact
        keep = np.ones(6, dtype=bool)
        keep[[step.i, step.j]] = False
        assert np.array_equal(v[keep], w[keep])
        assert v[step.i] + v[step.j] == w[step.i] + w[step.j]


def test_pinching_sequence_examples():
    steps = sp.pinching_sequence([3.0, 1.0], [2.0, 2.0])
    assert len(steps) == 1
    assert (steps[0].i, steps[0].j) == (0, 1)
    assert steps[0].lam == pytest.approx(0.5, abs=1e-15)
    assert sp.pinching_sequence([3.0, 1.0], [3.0, 1.0]) == []
    # reconstruction oracle
    c, b = [4.0, 2.0, 0.0], [3.0, 2.0, 1.0]
    steps = sp.pinching_sequence(c, b)
    assert 1 <= len(steps) <= 2
    w = np.array(c)
    for s in steps:
        w = sp.apply_pinching(w, s)
    assert np.abs(np.sort(w)[::-1] - b).max() <= 1e-10
    with pytest.raises(NotMajorized):
        sp.pinching_sequence([2.0, 2.0], [3.0, 1.0])


def test_pinching_round_trip_random():
    rng = mat.generator(404)
    for trial in range(60):
        n = int(rng.integers(2, 8))
        c = np.sort(rng.uniform(-3, 4, n))[::-1]
        b = c.copy()
        for _ in range(int(rng.integers(1, 6))):
            i, j = rng.choice(n, 2, replace=False)
            b = sp.apply_pinching(
                b, sp.PinchingStep(int(i), int(j), float(rng.uniform())))
        b = np.sort(b)[::-1]
        assert sp.majorizes(b, c)
        steps = sp.pinching_sequence(c, b)
        assert len(steps) <= n - 1
        w = c.copy()
        for s in steps:
            w = sp.apply_pinching(w, s)
        assert np.abs(np.sort(w)[::-1] - b).max() <= 1e-9


def test_pinch_witnesses_two_by_two():
    wit = sp.pinch_face_witnesses([1.0, 0.0], 0, 1, 0.5, np.eye(2))
    assert np.array_equal(wit.real_plus.real, [[0.5, 0.5], [0.5, 0.5]])
    assert np.array_equal(wit.real_minus.real, [[0.5, -0.5], [-0.5, 0.5]])
    assert np.array_equal(wit.imag_plus.imag, [[0.0, 0.5], [-0.5, 0.0]])
    assert np.array_equal(wit.imag_minus.imag, [[0.0, -0.5], [0.5, 0.0]])
    for m in wit.matrices():
        lam = np.sort(mat.hermitian_eig(m).eigenvalues)
        assert np.abs(lam - [0.0, 1.0]).max() <= 1e-10
    assert np.abs(wit.midpoint_real() - np.diag([0.5, 0.5])).max() <= 1e-12
    assert np.abs(wit.midpoint_imag() - np.diag([0.5, 0.5])).max() <= 1e-12


def test_pinch_witnesses_degenerate_inputs():
    with pytest.raises(DegeneratePinch):
        sp.pinch_face_witnesses([1.0, 0.0], 0, 1, 0.0, np.eye(2))
    with pytest.raises(DegeneratePinch):
        sp.pinch_face_witnesses([1.0, 0.0], 0, 1, 1.0, np.eye(2))
    with pytest.raises(DegeneratePinch):
        sp.pinch_face_witnesses([1.0, 1.0], 0, 1, 0.5, np.eye(2))


def test_pinch_witnesses_random():
    rng = mat.generator(3)
    a = rng.uniform(-1.0, 2.0, 5)
    i, j, t = 1, 3, 0.37
    u = mat.haar_unitary(5, 12)
    wit = sp.pinch_face_witnesses(a, i, j, t, u)
    lam_a = np.sort(a)
    for m in wit.matrices():
        assert np.abs(m - m.conj().T).max() <= 1e-12
        lam = np.sort(mat.hermitian_eig(m).eigenvalues)
        assert np.abs(lam - lam_a).max() <= 1e-8
    mid = sp.pinched_matrix(a, i, j, t, u)
    assert np.abs(wit.midpoint_real() - mid).max() <= 1e-12
    assert np.abs(wit.midpoint_imag() - mid).max() <= 1e-12
    # block data survive conjugating back
    core = u @ wit.real_plus @ u.conj().T
    block = core[np.ix_([i, j], [i, j])]
    assert abs(np.trace(block).real - (a[i] + a[j])) <= 1e-10
    assert abs(np.linalg.det(block).real - a[i] * a[j]) <= 1e-10
    # the six witnesses span an affine space of dimension exactly 3
    assert wit.affine_rank() == 3


def test_trace_slice_extremes():
    assert sp.is_trace_slice_extreme(np.diag([1.0, 1.0, 0.0]), 2)
    assert not sp.is_trace_slice_extreme(np.diag([1.0, 0.5, 0.5]), 2)
    with pytest.raises(NotInTraceSlice):
        sp.is_trace_slice_extreme(np.diag([1.0, 1.0, 0.0]), 1)
    with pytest.raises(NotInUnitInterval):
        sp.is_trace_slice_extreme(np.diag([1.5, 0.5, 0.0]), 2)


def test_trace_slice_face_dimensions():
    assert sp.trace_slice_face_dimension(np.diag([1.0, 1.0, 0.0]), 2) == 0
    assert sp.trace_slice_face_dimension(np.diag([1.0, 0.5, 0.5, 0.0]), 2) == 3
    assert sp.trace_slice_face_dimension(np.diag([0.5] * 4), 2) == 15
    # conjugation invariance
    u = mat.haar_unitary(4, 19)
    a = (u * np.array([1.0, 0.5, 0.5, 0.0])) @ u.conj().T
    assert sp.trace_slice_face_dimension(a, 2) == 3


def test_interval_face_examples():
    f = sp.minimal_interval_face(np.diag([1.0, 0.0, 1.0]))
    assert f.rank_r == 0 and f.dim == 0
    f = sp.minimal_interval_face(np.diag([1.0, 0.5, 0.5, 0.0]))
    assert f.rank_r == 2 and f.dim == 4
    assert np.abs(f.p - np.diag([1.0, 0, 0, 0])).max() <= 1e-10
    f = sp.minimal_interval_face(0.5 * np.eye(3))
    assert f.dim == 9
    # p and r are orthogonal projections
    a = np.diag([1.0, 0.8, 0.2, 0.0])
    f = sp.minimal_interval_face(a)
    for proj in (f.p, f.r):
        assert np.abs(proj @ proj - proj).max() <= 1e-9
        assert np.abs(proj - proj.conj().T).max() <= 1e-9
    assert np.abs(f.p @ f.r).max() <= 1e-9


def test_facial_dimension_law_sampled():
    # dimensions are 0 or m^2 - 1 with m >= 2; never 1 or 2
    seen = set()
    rng = mat.generator(606)
    for i in range(60):
        n = 2 + (i % 5)
        k = 1 + int(rng.integers(0, max(n - 1, 1)))
        feasible = [0] + [
            m for m in range(2, n + 1)
            if max(0, k - m + 1) <= min(n - m, k - 1)
        ]
        slots = feasible[int(rng.integers(0, len(feasible)))]
        a = sp.random_trace_slice_point(n, k, seed=800 + i, interior_slots=slots)
        d = sp.trace_slice_face_dimension(a, k)
        seen.add(d)
        assert d in {0, 3, 8, 15, 24, 35}
        extreme = sp.is_trace_slice_extreme(a, k)
        assert extreme == (d == 0)
    assert 0 in seen and 3 in seen
