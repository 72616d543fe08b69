import math

import numpy as np
import pytest

from convexlab.bodies import build_polytope_pair
from convexlab.grassmann import RngStream, Subspace, sample_haar_subspace
from convexlab.polykernel import (
    HPolytope,
    Polygon,
    PolytopeError,
    convex_hull_2d,
    enumerate_vertices,
    poly3_intrinsic_volumes,
    polygon_metrics,
    polytope_radial,
    projection_polygon,
    section_polygon,
)


@pytest.fixture(scope="module")
def pair():
    return build_polytope_pair([1.0, 1.2, 1.5], [1, 1, 1], [1, 1, -1])


# ---------------------------------------------------------------------------
# H-representation


def test_hpolytope_validation():
    with pytest.raises(PolytopeError):
        HPolytope(np.array([[2.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]),
                  np.ones(4))
    with pytest.raises(PolytopeError):
        HPolytope(np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]),
                  np.array([1.0, 1.0, 1.0, -1.0]))
    with pytest.raises(PolytopeError, match="duplicate"):
        HPolytope(np.array([[1.0, 0.0], [1.0, 0.0], [-1.0, 0.0], [0.0, 1.0],
                            [0.0, -1.0]]),
                  np.array([1.0, 1.0, 1.0, 1.0, 1.0]))


def test_box_helper_and_rotation():
    box = HPolytope.box([1.0, 2.0])
    assert box.normals.shape == (4, 2)
    q = np.array([[0.0, -1.0], [1.0, 0.0]])
    rot = box.rotated(q)
    v = enumerate_vertices(rot).vertices
    assert {tuple(np.round(w, 9)) for w in v} == {
        (-2.0, -1.0), (-2.0, 1.0), (2.0, -1.0), (2.0, 1.0)}


def test_enumerate_vertices_box():
    v = enumerate_vertices(HPolytope.box([1.0, 1.2, 1.5]))
    assert v.num_vertices == 8
    assert all(len(a) == 3 for a in v.active)


def test_enumerate_vertices_rejects_unbounded():
    half = HPolytope(np.array([[1.0, 0.0], [0.0, 1.0]]), np.array([1.0, 1.0]))
    with pytest.raises(PolytopeError, match="unbounded"):
        enumerate_vertices(half)


def test_polytope_radial_box():
    box = HPolytope.box([1.0, 1.2, 1.5])
    dirs = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    assert np.allclose(polytope_radial(box, dirs), [1.0, 1.2, 1.5])
    d = np.array([1.0, 1.0, 1.0]) / math.sqrt(3)
    assert polytope_radial(box, d[None, :])[0] == pytest.approx(math.sqrt(3.0))


def test_radial_boundary_points_on_facets(pair):
    rng = RngStream(31, 0).generator()
    dirs = rng.standard_normal((500, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    for body in (pair.body_K, pair.body_L):
        rho = polytope_radial(body, dirs)
        pts = rho[:, None] * dirs
        slack = (body.offsets[None, :] - pts @ body.normals.T).min(axis=1)
        assert np.allclose(slack, 0.0, atol=1e-10)


# ---------------------------------------------------------------------------
# sections and projections


def test_section_polygon_matches_radial(pair):
    rng = RngStream(32, 0)
    for j in range(10):
        sub = sample_haar_subspace(3, 2, rng.substream(j))
        q = section_polygon(pair.body_K, sub)
        angles = np.linspace(0.0, 2 * np.pi, 1001)[:-1]
        u2 = np.column_stack([np.cos(angles), np.sin(angles)])
        dirs = u2 @ sub.basis.T
        rho = polytope_radial(pair.body_K, dirs)
        # radial of the polygon from its vertex loop
        verts = q.vertices
        rho_poly = _polygon_radial(verts, u2)
        assert np.max(np.abs(rho - rho_poly)) < 1e-9


def _polygon_radial(verts, dirs):
    m = len(verts)
    nrm = []
    off = []
    for a in range(m):
        p, q = verts[a], verts[(a + 1) % m]
        e = q - p
        n = np.array([e[1], -e[0]])
        n /= np.linalg.norm(n)
        nrm.append(n)
        off.append(float(n @ p))
    nrm, off = np.array(nrm), np.array(off)
    dots = dirs @ nrm.T
    with np.errstate(divide="ignore"):
        ratios = np.where(dots > 1e-14, off[None, :] / dots, np.inf)
    return ratios.min(axis=1)


def test_section_polygon_through_far_plane_raises(pair):
    # a plane that misses the body entirely is rejected by construction;
    # here: central planes always hit, so shift has to be emulated with a
    # tiny polytope instead
    tiny = HPolytope.box([1e-6, 1e-6, 1e-6])
    sub = Subspace(np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]))
    q = section_polygon(tiny, sub)
    assert polygon_metrics(q)[0] == pytest.approx(4e-12, rel=1e-6)


def test_polygon_metrics_cases():
    assert polygon_metrics(Polygon(np.zeros((0, 2)))) == (0.0, 0.0)
    assert polygon_metrics(Polygon(np.array([[0.0, 0.0]]))) == (0.0, 0.0)
    seg = Polygon(np.array([[0.0, 0.0], [3.0, 4.0]]))
    assert polygon_metrics(seg) == (0.0, 10.0)
    tri = Polygon(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
    area, per = polygon_metrics(tri)
    assert area == pytest.approx(0.5)
    assert per == pytest.approx(2.0 + math.sqrt(2.0))


def test_polygon_rejects_clockwise_and_nonconvex():
    with pytest.raises(PolytopeError):
        Polygon(np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]))  # clockwise
    with pytest.raises(PolytopeError):
        Polygon(np.array([[0.0, 0.0], [2.0, 0.0], [2.0, 2.0],
                          [1.0, 0.5], [0.0, 2.0]]))  # reflex corner


def test_convex_hull_2d():
    rng = RngStream(33, 0).generator()
    pts = rng.standard_normal((200, 2))
    hull = convex_hull_2d(pts)
    # every input point is inside the hull
    m = len(hull.vertices)
    for a in range(m):
        p, q = hull.vertices[a], hull.vertices[(a + 1) % m]
        e = q - p
        cross = e[0] * (pts[:, 1] - p[1]) - e[1] * (pts[:, 0] - p[0])
        assert np.all(cross >= -1e-9)


def test_convex_hull_collinear_input():
    pts = np.column_stack([np.linspace(0, 1, 7), np.linspace(0, 2, 7)])
    hull = convex_hull_2d(pts)
    assert polygon_metrics(hull)[0] == pytest.approx(0.0, abs=1e-12)


def test_projection_polygon_box():
    v = enumerate_vertices(HPolytope.box([1.0, 1.2, 1.5]))
    sub = Subspace(np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]))
    q = projection_polygon(v, sub)
    area, per = polygon_metrics(q)
    assert area == pytest.approx(4.8)
    assert per == pytest.approx(8.8)


# ---------------------------------------------------------------------------
# intrinsic volumes of 3-polytopes


def test_box_fixture_5_8_4():
    got = poly3_intrinsic_volumes(HPolytope.box([0.5, 1.0, 1.0]))
    assert np.allclose(got, (5.0, 8.0, 4.0), atol=1e-12)


def test_box_fixture_6_12_8():
    got = poly3_intrinsic_volumes(HPolytope.box([1.0, 1.0, 1.0]))
    assert np.allclose(got, (6.0, 12.0, 8.0), atol=1e-12)


def test_box_general_closed_form():
    a, b, c = 2.0, 2.4, 3.0  # side lengths of box([1.0, 1.2, 1.5])
    got = poly3_intrinsic_volumes(HPolytope.box([1.0, 1.2, 1.5]))
    assert got[0] == pytest.approx(a + b + c, abs=1e-12)
    assert got[1] == pytest.approx(a * b + b * c + c * a, abs=1e-12)
    assert got[2] == pytest.approx(a * b * c, abs=1e-12)


def test_euler_formula_on_cut_bodies(pair):
    for body in (pair.body_K, pair.body_L):
        vrep = enumerate_vertices(body)
        nv = vrep.num_vertices
        # count facets with at least 3 vertices and edges shared by facet pairs
        members = {}
        for idx, act in enumerate(vrep.active):
            for f in act:
                members.setdefault(f, set()).add(idx)
        faces = [s for s in members.values() if len(s) >= 3]
        edges = set()
        fl = list(members.values())
        for a in range(len(fl)):
            for b in range(a + 1, len(fl)):
                shared = fl[a] & fl[b]
                if len(shared) == 2:
                    edges.add(frozenset(shared))
        assert nv - len(edges) + len(faces) == 2


def test_pair_intrinsic_volumes_match_exactly(pair):
    vk = poly3_intrinsic_volumes(pair.body_K, pair.vrep_K)
    vl = poly3_intrinsic_volumes(pair.body_L, pair.vrep_L)
    assert np.allclose(vk, vl, atol=1e-12)
    # and the cut removed volume relative to the box
    box = poly3_intrinsic_volumes(HPolytope.box([1.0, 1.2, 1.5]))
    assert vk[2] < box[2]


def test_redundant_facet_is_harmless():
    box = HPolytope.box([1.0, 1.0, 1.0])
    padded = box.with_facets(np.array([[0.0, 0.0, 1.0]]), [5.0])
    got = poly3_intrinsic_volumes(padded)
    assert np.allclose(got, (6.0, 12.0, 8.0), atol=1e-12)
