import math

import numpy as np
import pytest
from scipy.spatial import cKDTree

from msforge import geometry
from msforge.curve import DZ, INF, Z, make_curve
from msforge.families import (
    catenoid_data,
    catenoid_family,
    catenoid_point,
    even_family,
    genus_family,
)
from msforge.geometry import (
    GridSpec,
    SurfaceField,
    SurfaceMesh,
    TornMeshError,
    bjorling_geodesic_check,
    build_mesh,
    empty_mesh,
    end_orders,
    export_obj,
    gauss_curvature,
    group_elements,
    jorge_meeks_check,
    symmetry_check,
    symmetry_group_order,
    total_curvature,
)
from msforge.integrator import WeierstrassData, verify_periods
from msforge.periods import solve_a, solve_c
from msforge.symmetry import IDENTITY, SymmetryOp, rotation_z

A2 = 1.7796769192078385


@pytest.fixture(scope="module")
def genus1():
    return genus_family(1, solve_c(1))


@pytest.fixture(scope="module")
def even2():
    return even_family(2, solve_a(2))


@pytest.fixture(scope="module")
def cat_field():
    fam = catenoid_family()
    return SurfaceField(fam.data, fam.basepoint, GridSpec(64, 64, math.log(10.0)))


# curvature


def test_catenoid_curvature_on_unit_circle():
    d = catenoid_data()
    z = np.exp(1j * np.linspace(0, 2 * math.pi, 7))
    np.testing.assert_allclose(gauss_curvature(d, z, np.ones_like(z)), -0.25, rtol=1e-12)


def test_catenoid_curvature_closed_form():
    # for g = z, eta = dz / z^2: K = -4 |z|^4 / (1 + |z|^2)^4
    d = catenoid_data()
    z = np.array([0.3 + 0.1j, 2.0 - 1.5j, -4.0j])
    r2 = np.abs(z) ** 2
    np.testing.assert_allclose(gauss_curvature(d, z, np.ones_like(z)), -4 * r2 ** 2 / (1 + r2) ** 4, rtol=1e-12)


def test_curvature_is_nonpositive(genus1):
    rng = np.random.default_rng(1)
    z = rng.normal(size=500) + 1j * rng.normal(size=500)
    w = genus1.curve.sheet_values(z)[0]
    assert np.all(gauss_curvature(genus1.data, z, w) <= 0)


def test_constant_gauss_map_is_flat():
    curve = make_curve(1, [], [INF])
    d = WeierstrassData(Z(0, 0) * 0.5, DZ, curve)
    z = np.array([0.2 + 1j, 3.0])
    np.testing.assert_allclose(gauss_curvature(d, z, np.ones_like(z)), 0.0, atol=1e-15)


def test_total_curvature_catenoid():
    tc = total_curvature(catenoid_data())
    assert tc.expected == pytest.approx(4 * math.pi)
    assert tc.relative_error < 0.005


def test_total_curvature_genus_one(genus1):
    tc = total_curvature(genus1.data)
    assert tc.expected == pytest.approx(12 * math.pi)
    assert tc.relative_error < 0.01


# ends


def test_end_profiles(genus1, even2):
    assert sorted(end_orders(genus1.data).d) == [1, 3]
    assert end_orders(even2.data).d == (2, 2)
    rep = end_orders(catenoid_data())
    assert rep.d == (1, 1)
    assert all(e.kind == "embedded-catenoidal" for e in rep.ends)


def test_genus_one_embedded_end_is_planar(genus1):
    kinds = {e.d: e.kind for e in end_orders(genus1.data).ends}
    assert kinds[1] == "embedded-planar"
    assert kinds[3] == "higher"


@pytest.mark.parametrize("gamma,d,deg,lhs", [(1, (1, 3), 3, -6), (2, (2, 2), 4, -8), (0, (1, 1), 1, -2)])
def test_jorge_meeks(gamma, d, deg, lhs):
    jm = jorge_meeks_check(gamma, d, deg)
    assert jm.lhs == lhs == jm.rhs
    assert jm.equality
    assert jm.embedded_equality
    assert (jm.lhs == jm.bound) == all(x == 1 for x in d)


# symmetries


def test_group_orders(genus1, even2):
    assert symmetry_group_order(genus1.symmetries) == 8
    assert symmetry_group_order(even2.symmetries) == 12
    assert symmetry_group_order(catenoid_family().symmetries) == 8
    assert symmetry_group_order([genus1.symmetries[0]]) == 2


def test_non_closing_generator_hits_budget():
    rot = SymmetryOp("r", rotation_z(1.0))
    with pytest.raises(RuntimeError):
        symmetry_group_order([rot], budget=50)


@pytest.fixture(scope="module")
def genus1_field(genus1):
    return SurfaceField(genus1.data, genus1.basepoint)


@pytest.fixture(scope="module")
def even2_field(even2):
    return SurfaceField(even2.data, even2.basepoint)


def test_identity_has_zero_deviation(genus1_field):
    assert symmetry_check(genus1_field, IDENTITY, 200)["deviation"] < 1e-12


def test_genus_symmetries(genus1, genus1_field):
    for op in group_elements(genus1.symmetries):
        r = symmetry_check(genus1_field, op, 300, seed=2)
        assert r["deviation"] < 1e-6
        assert r["pullback"] < 1e-10


def test_even_symmetries(even2, even2_field):
    for op in group_elements(even2.symmetries):
        r = symmetry_check(even2_field, op, 300, seed=3)
        assert r["deviation"] < 1e-6


def test_non_automorphism_rejected(genus1_field):
    bogus = SymmetryOp("bogus", np.eye(3), alpha=2.0)
    with pytest.raises(ValueError):
        symmetry_check(genus1_field, bogus, 10)


# geodesic on the fixed curve


def test_bjorling_closes_only_at_the_solution(even2_field):
    good = bjorling_geodesic_check(even2_field, A2)
    assert good["x3_deviation"] < 1e-6
    assert good["closure_gap"] < 1e-6
    assert good["w_end_matches"]
    off = even_family(2, 1.01 * A2)
    bad = bjorling_geodesic_check(SurfaceField(off.data, off.basepoint), 1.01 * A2)
    assert bad["closure_gap"] > 10 * max(good["closure_gap"], 1e-12)


def test_bjorling_k4():
    a = solve_a(4)
    fam = even_family(4, a)
    r = bjorling_geodesic_check(SurfaceField(fam.data, fam.basepoint), a)
    assert r["x3_deviation"] < 1e-6
    assert r["closure_gap"] < 1e-6


# meshes


def test_empty_grid_gives_empty_mesh():
    mesh = empty_mesh()
    assert mesh.vertices.shape == (0, 3) and mesh.faces.shape == (0, 3)


def test_small_grid_rejected():
    with pytest.raises(ValueError):
        GridSpec(1, 8)


def test_catenoid_mesh_matches_closed_form(cat_field):
    fam = catenoid_family()
    mesh = build_mesh(fam.data, fam.basepoint, field_=cat_field)
    ref = np.array([catenoid_point(z) for z in cat_field.z.ravel()])
    # Hausdorff distance between the vertex set and the analytic points
    d1 = cKDTree(ref).query(mesh.vertices)[0].max()
    d2 = cKDTree(mesh.vertices).query(ref)[0].max()
    assert max(d1, d2) < 1e-2
    np.testing.assert_allclose(mesh.vertices, ref, atol=1e-9)


def test_mesh_invariants(genus1, genus1_field):
    mesh = build_mesh(genus1.data, genus1.basepoint, field_=genus1_field)
    assert len(mesh.faces) > 0
    np.testing.assert_allclose(np.linalg.norm(mesh.gauss_map, axis=1), 1.0, atol=1e-9)
    assert np.all(mesh.conformal_factor > 0)
    # gauss map is the stereographic lift of g
    z, s = mesh.domain_tag[7]
    w = genus1.curve.sheet_values(z)[s]
    g = complex(genus1.data.g.evaluate(np.array([z]), np.array([w]))[0])
    lift = np.array([2 * g.real, 2 * g.imag, abs(g) ** 2 - 1]) / (1 + abs(g) ** 2)
    np.testing.assert_allclose(mesh.gauss_map[7], lift, atol=1e-9)
    a, b, c = mesh.vertices[mesh.faces].transpose(1, 0, 2)
    assert np.all(np.linalg.norm(np.cross(b - a, c - a), axis=1) > 0)


def test_torn_mesh_aborts_without_force(genus1):
    bad = genus_family(1, 1.1 * solve_c(1))
    rep = verify_periods(bad.data, bad.generators)
    with pytest.raises(TornMeshError):
        build_mesh(bad.data, bad.basepoint, GridSpec(8, 8), rep)
    mesh = build_mesh(bad.data, bad.basepoint, GridSpec(8, 8), rep, force=True)
    assert len(mesh.vertices) == 8 * 8 * 2


def test_symmetric_mesh_is_invariant_as_a_set(genus1, genus1_field):
    mesh = build_mesh(genus1.data, genus1.basepoint, field_=genus1_field)
    tree = cKDTree(mesh.vertices)
    h = mesh.edge_length
    inner = np.abs(np.log(np.abs(genus1_field.z))) < 2.0
    pts = genus1_field.f[inner].reshape(-1, 3)
    for op in group_elements(genus1.symmetries):
        v = geometry.translation_for(genus1_field, op)
        img = pts @ op.matrix.T + v
        dist = tree.query(img)[0]
        assert np.max(dist) < 2 * h, op.name


def _max_mean_curvature(res):
    fam = catenoid_family()
    fld = SurfaceField(fam.data, fam.basepoint, GridSpec(res, res, 1.0))
    mesh = build_mesh(fam.data, fam.basepoint, field_=fld)
    v, f = mesh.vertices, mesh.faces
    lap = np.zeros_like(v)
    area = np.zeros(len(v))
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        a, b, c = v[f[:, i]], v[f[:, j]], v[f[:, k]]
        u1, u2 = b - a, c - a
        cot = np.einsum("ij,ij->i", u1, u2) / np.linalg.norm(np.cross(u1, u2), axis=1)
        # the angle at a weighs the opposite edge (b, c)
        np.add.at(lap, f[:, j], 0.5 * cot[:, None] * (c - b))
        np.add.at(lap, f[:, k], 0.5 * cot[:, None] * (b - c))
        np.add.at(area, f[:, i], np.linalg.norm(np.cross(u1, u2), axis=1) / 6)
    nu, nt = fld.z.shape
    rows = np.arange(len(v)).reshape(nu, nt, 1)[2:-2].ravel()
    return float(np.max(np.linalg.norm(lap[rows], axis=1) / area[rows]))


def test_discrete_mean_curvature_vanishes_under_refinement():
    coarse, fine = _max_mean_curvature(16), _max_mean_curvature(32)
    assert fine < coarse / 1.9


def test_obj_export(tmp_path):
    tri = SurfaceMesh(np.eye(3), [[0, 1, 2]], np.tile([0, 0, 1.0], (3, 1)), np.ones(3))
    path = tmp_path / "t.obj"
    export_obj(tri, path)
    lines = path.read_text().splitlines()
    assert sum(l.startswith("v ") for l in lines) == 3
    assert sum(l.startswith("f ") for l in lines) == 1
    export_obj(empty_mesh(), tmp_path / "e.obj")
    assert all(l.startswith("#") for l in (tmp_path / "e.obj").read_text().splitlines())


def _parse_obj(path):
    v, f = [], []
    for line in path.read_text().splitlines():
        parts = line.split()
        if parts and parts[0] == "v":
            v.append([float(x) for x in parts[1:]])
        elif parts and parts[0] == "f":
            f.append([int(p.split("/")[0]) - 1 for p in parts[1:]])
    return np.array(v), np.array(f)


def test_obj_round_trip(tmp_path, cat_field):
    fam = catenoid_family()
    mesh = build_mesh(fam.data, fam.basepoint, field_=cat_field)
    path = tmp_path / "c.obj"
    export_obj(mesh, path)
    v, f = _parse_obj(path)
    np.testing.assert_allclose(v, mesh.vertices, rtol=1e-10, atol=1e-10)
    np.testing.assert_array_equal(f, mesh.faces)


def test_ply_header(tmp_path, cat_field):
    fam = catenoid_family()
    mesh = build_mesh(fam.data, fam.basepoint, field_=cat_field)
    path = tmp_path / "c.ply"
    geometry.export_ply(mesh, path)
    raw = path.read_bytes()
    head = raw[: raw.index(b"end_header\n") + 11].decode()
    assert f"element vertex {len(mesh.vertices)}" in head
    assert len(raw) == len(head) + 48 * len(mesh.vertices) + 13 * len(mesh.faces)
