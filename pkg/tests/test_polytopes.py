"""Exact polytope geometry: minimal faces, intersections, the face identity."""

import numpy as np
import pytest

from convexrange import polytopes as poly
from convexrange.errors import NotInPolytope, Singleton, TooLarge
from convexrange.polytopes import mpq


def square():
    return poly.VPolytope.from_points(2, [(0, 0), (1, 0), (1, 1), (0, 1)])


def cube():
    return poly.VPolytope.from_points(
        3, [(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)])


def vertex_set(face):
    return set(face.vertices)


def test_membership_lp():
    K = square()
    assert poly.polytope_contains(K, ("1/2", "1/3"))
    assert poly.polytope_contains(K, (0, 1))
    assert not poly.polytope_contains(K, (2, 0))
    assert not poly.polytope_contains(K, ("1/2", "-1/100"))


def test_minimal_face_square_examples():
    K = square()
    whole = poly.minimal_face(K, ("1/2", "1/2"), method="lp")
    assert len(whole.vertex_indices) == 4 and whole.dim == 2
    edge = poly.minimal_face(K, ("1/2", 0), method="lp")
    assert vertex_set(edge) == {(0, 0), (1, 0)} and edge.dim == 1
    corner = poly.minimal_face(K, (0, 0), method="lp")
    assert vertex_set(corner) == {(0, 0)} and corner.dim == 0
    with pytest.raises(NotInPolytope):
        poly.minimal_face(K, (3, 3), method="lp")


def test_minimal_face_methods_agree():
    rng = np.random.Generator(np.random.Philox(123))
    for trial in range(10):
        d = int(rng.integers(2, 5))
        K = poly.random_rational_polytope(rng, d, max_vertices=8)
        # random rational point of K: convex combination of vertices
        w = [mpq(int(x)) for x in rng.integers(1, 5, size=K.n_vertices)]
        tot = sum(w, mpq(0))
        pt = tuple(
            sum((wi * v[c] for wi, v in zip(w, K.vertices)), mpq(0)) / tot
            for c in range(d)
        )
        f_lp = poly.minimal_face(K, pt, method="lp")
        f_facet = poly.minimal_face(K, pt, method="facets")
        assert f_lp.vertex_indices == f_facet.vertex_indices
        assert f_lp.dim == f_facet.dim


def test_minimal_face_idempotent_on_relative_interior():
    K = square()
    edge = poly.minimal_face(K, ("1/2", 0))
    again = poly.minimal_face(K, edge.barycenter())
    assert again.vertex_indices == edge.vertex_indices


def test_minimal_face_of_set_examples():
    K = square()
    f = poly.minimal_face_of_set(K, [(0, 0)])
    assert vertex_set(f) == {(0, 0)}
    f = poly.minimal_face_of_set(K, [(0, 0), (1, 0)])
    assert vertex_set(f) == {(0, 0), (1, 0)}
    f = poly.minimal_face_of_set(K, [(0, 0), ("1/2", "1/2")])
    assert len(f.vertex_indices) == 4
    with pytest.raises(NotInPolytope):
        poly.minimal_face_of_set(K, [(0, 0), (5, 5)])


def test_intersect_affine_cube_facet():
    K = cube()
    H = poly.AffineSubspace(3, [[0, 0, 1]], [0])
    P = poly.intersect_affine(K, H)
    assert set(P.vertices) == {(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)}


def test_intersect_affine_cube_hexagon():
    K = cube()
    H = poly.AffineSubspace(3, [[1, 1, 1]], ["3/2"])
    P = poly.intersect_affine(K, H)
    assert P.n_vertices == 6
    expected = {
        (mpq(1), mpq(1, 2), mpq(0)), (mpq(1), mpq(0), mpq(1, 2)),
        (mpq(1, 2), mpq(1), mpq(0)), (mpq(0), mpq(1), mpq(1, 2)),
        (mpq(1, 2), mpq(0), mpq(1)), (mpq(0), mpq(1, 2), mpq(1)),
    }
    assert set(P.vertices) == expected
    for v in P.vertices:
        assert sum(v, mpq(0)) == mpq(3, 2)


def test_intersect_affine_empty():
    K = square()
    H = poly.AffineSubspace(2, [[1, 0]], [2])
    assert poly.intersect_affine(K, H).is_empty()
    # inconsistent system is empty as well
    H2 = poly.AffineSubspace(2, [[1, 0], [1, 0]], [0, 1])
    assert poly.intersect_affine(K, H2).is_empty()


def test_faces_counts():
    seg = poly.VPolytope.from_points(1, [(0,), (1,)])
    assert len(poly.faces_of(seg)) == 3
    tri = poly.VPolytope.from_points(2, [(0, 0), (1, 0), (0, 1)])
    assert len(poly.faces_of(tri)) == 7
    assert len(poly.faces_of(cube())) == 27


def test_faces_guard():
    # 21 points in convex position exceed the guard
    pts = [(i, i * i) for i in range(21)]
    K = poly.VPolytope.from_points(2, pts)
    assert K.n_vertices == 21
    with pytest.raises(TooLarge):
        poly.faces_of(K)


def test_face_property_exact():
    # for each face F and all vertex pairs (u, w): midpoint in conv(F)
    # forces u, w in F
    rng = np.random.Generator(np.random.Philox(55))
    K = poly.random_rational_polytope(rng, 3, max_vertices=6)
    faces = poly.faces_of(K)
    for F in faces:
        fverts = F.vertices
        members = set(F.vertex_indices)
        for i in range(K.n_vertices):
            for j in range(i + 1, K.n_vertices):
                mid = tuple(
                    (a + b) / mpq(2)
                    for a, b in zip(K.vertices[i], K.vertices[j])
                )
                if poly._contains_lp(fverts, mid):
                    assert i in members and j in members


def test_facial_dimension():
    seg = poly.VPolytope.from_points(1, [(0,), (1,)])
    assert poly.facial_dimension(seg) == 1
    cube4 = poly.VPolytope.from_points(
        4, [(a, b, c, d) for a in (0, 1) for b in (0, 1)
            for c in (0, 1) for d in (0, 1)])
    assert poly.facial_dimension(cube4) == 1
    single = poly.VPolytope.from_points(2, [(1, 1)])
    with pytest.raises(Singleton):
        poly.facial_dimension(single)


def test_intersection_theorem_cube_hexagon_vertex():
    K = cube()
    H = poly.AffineSubspace(3, [[1, 1, 1]], ["3/2"])
    # the hexagon vertex (1, 1/2, 0) comes from the cube edge
    # (1,0,0)-(1,1,0); G of that vertex must be exactly this edge
    G = poly.minimal_face_of_set(K, [(1, "1/2", 0)])
    assert vertex_set(G) == {(1, 0, 0), (1, 1, 0)}
    Gpoly = poly.VPolytope(3, G.vertices)
    cut = poly.intersect_affine(Gpoly, H)
    assert set(cut.vertices) == {(mpq(1), mpq(1, 2), mpq(0))}
    report = poly.check_intersection_theorem(K, H)
    assert report.all_pass and report.n_faces == 13


def test_intersection_theorem_face_of_k():
    K = cube()
    H = poly.AffineSubspace(3, [[0, 0, 1]], [0])
    report = poly.check_intersection_theorem(K, H)
    assert report.all_pass
    assert report.n_faces == 9  # bottom square: 4 + 4 + 1


def test_intersection_theorem_whole_space():
    # H containing the affine hull: every face F of K has G(K, F) = F
    K = square()
    H = poly.AffineSubspace(2, [[0, 0]], [0])
    report = poly.check_intersection_theorem(K, H)
    assert report.all_pass
    assert report.n_faces == len(poly.faces_of(K))
    for c in report.checks:
        assert c.face_dim == c.g_dim


def test_monotonicity_of_minimal_faces():
    rng = np.random.Generator(np.random.Philox(77))
    for trial in range(6):
        d = int(rng.integers(2, 5))
        K = poly.random_rational_polytope(rng, d, max_vertices=8)
        H = poly.random_subspace_through(rng, K, int(rng.integers(1, 3)))
        P = poly.intersect_affine(K, H)
        if P.is_empty() or P.n_vertices > 12:
            continue
        faces = poly._faces_unguarded(P)
        for F in faces:
            for F2 in faces:
                if set(F.vertex_indices) <= set(F2.vertex_indices):
                    G = poly.minimal_face_of_set(
                        K, F.vertices, method="facets", check_membership=False)
                    G2 = poly.minimal_face_of_set(
                        K, F2.vertices, method="facets", check_membership=False)
                    assert set(G.vertex_indices) <= set(G2.vertex_indices)


def test_irredundant_construction():
    K = poly.VPolytope.from_points(
        2, [(0, 0), (2, 0), (0, 2), (1, 1), ("1/2", "1/2"), (0, 0)])
    assert set(K.vertices) == {(0, 0), (2, 0), (0, 2)}


def test_json_round_trip():
    K = poly.VPolytope.from_points(2, [("1/2", 0), (1, 1), (0, "2/3")])
    K2 = poly.VPolytope.from_json(K.to_json())
    assert set(K2.vertices) == set(K.vertices)
    H = poly.AffineSubspace(2, [["1/3", 1]], ["5/6"])
    H2 = poly.AffineSubspace.from_json(H.to_json())
    assert H2.A == H.A and H2.b == H.b


def test_randomized_suite_small():
    report = poly.run_intersection_suite(n_trials=40, seed=900)
    assert report.all_pass
    assert report.n_checked == 40
    assert report.n_faces_checked > 40
