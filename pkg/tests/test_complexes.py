import numpy as np
import pytest

import fandiv as fd
from fandiv import complexes as cx, errors

EXACT_TOL = 1e-12
SEED = 4242


@pytest.fixture(scope="module")
def hexagon():
    s = fd.regular_simplex(2)
    return s, fd.build_zonotope(s)


@pytest.fixture(scope="module")
def tetra():
    s = fd.regular_simplex(3)
    return s, fd.build_zonotope(s)


# ---------------------------------------------------------------------------
# psi


def test_psi_center_is_barycenter(hexagon):
    s, z = hexagon
    assert np.linalg.norm(cx.psi(z, np.zeros(2))) < 1e-9


def test_psi_fixes_simplex_vertices(hexagon):
    # from the extreme point a_i all light lands on cone i, so psi(a_i) = a_i
    s, z = hexagon
    for i in range(3):
        assert np.linalg.norm(cx.psi(z, s.vertices[i]) - s.vertices[i]) < 1e-9


def test_psi_lands_in_simplex(hexagon):
    s, z = hexagon
    rng = np.random.default_rng(SEED)
    w = rng.dirichlet(np.ones(len(z.vertices)), size=60)
    for x in w @ z.vertices:
        b = s.barycentric(cx.psi(z, x))
        assert b.min() > -1e-9


def test_psi_distinct_on_sample(hexagon):
    s, z = hexagon
    rng = np.random.default_rng(SEED + 1)
    w = rng.dirichlet(np.ones(len(z.vertices)), size=150)
    pts = w @ z.vertices
    vals = np.array([cx.psi(z, x) for x in pts])
    gap = np.linalg.norm(vals[:, None] - vals[None, :], axis=2) + np.eye(len(vals))
    src = np.linalg.norm(pts[:, None] - pts[None, :], axis=2) + np.eye(len(pts))
    assert gap[src > 1e-3].min() > 1e-9  # separated inputs stay separated


# ---------------------------------------------------------------------------
# configuration points, weights, canonical colors


def test_weight_vector_b_kind_is_barycentric(hexagon):
    s, _ = hexagon
    rng = np.random.default_rng(SEED)
    b = rng.dirichlet(np.ones(3))
    p = cx.ConfigPoint("B", b @ s.vertices, (0, 1, 0))
    assert np.abs(cx.weight_vector(p, s) - b).max() < 1e-10


def test_weight_vector_a_kind_sums_to_one(hexagon):
    _, z = hexagon
    p = cx.ConfigPoint("A", np.array([0.2, -0.1]), (1, 0, 1))
    w = cx.weight_vector(p, z)
    assert abs(w.sum() - 1.0) < EXACT_TOL
    assert w.min() > 0


def test_canonicalize_hides_inactive_colors(hexagon):
    s, z = hexagon
    # on the simplex facet t_0 = 0 the 0-color is unobservable
    x = 0.5 * (s.vertices[1] + s.vertices[2])
    p = cx.canonicalize(cx.ConfigPoint("B", x, (1, 0, 1)), s)
    assert p.colors == (cx.SENTINEL, 0, 1)
    # A-kind: at the extreme point a_0 every cone but 0 goes dark
    q = cx.canonicalize(cx.ConfigPoint("A", s.vertices[0], (1, 0, 0)), z)
    assert q.colors == (1, cx.SENTINEL, cx.SENTINEL)


def test_config_equal_ignores_hidden_colors(hexagon):
    s, _ = hexagon
    x = 0.5 * (s.vertices[1] + s.vertices[2])
    p = cx.ConfigPoint("B", x, (1, 0, 1))
    q = cx.ConfigPoint("B", x.copy(), (0, 0, 1))
    r = cx.ConfigPoint("B", x.copy(), (0, 1, 1))
    assert cx.config_equal(p, q, s)
    assert not cx.config_equal(p, r, s)


# ---------------------------------------------------------------------------
# sphere chart


def test_sphere_chart_roundtrip_b_kind(hexagon):
    s, _ = hexagon
    rng = np.random.default_rng(SEED + 2)
    for _ in range(25):
        z = rng.normal(size=3)
        z /= np.abs(z).sum()
        p = cx.decode_sphere(z, "B", s)
        back = cx.sphere_chart(p, s)
        assert np.abs(back - z).max() < 1e-10


def test_sphere_chart_roundtrip_a_kind(hexagon):
    s, z_body = hexagon
    rng = np.random.default_rng(SEED + 3)
    for _ in range(6):
        z = rng.normal(size=3)
        z /= np.abs(z).sum()
        p = cx.decode_sphere(z, "A", z_body)
        back = cx.sphere_chart(p, z_body)
        assert np.abs(back - z).max() < 1e-6


def test_decode_zero_coordinate_gives_sentinel(hexagon):
    s, _ = hexagon
    p = cx.decode_sphere([0.5, -0.5, 0.0], "B", s)
    assert p.colors == (1, 0, cx.SENTINEL)


def test_decode_validates_norm(hexagon):
    s, _ = hexagon
    with pytest.raises(errors.InvalidBarycentric):
        cx.decode_sphere([0.5, 0.6, 0.0], "B", s)


def test_antipode_negates_chart(hexagon):
    s, _ = hexagon
    rng = np.random.default_rng(SEED + 4)
    for _ in range(25):
        z = rng.normal(size=3)
        z /= np.abs(z).sum()
        p = cx.decode_sphere(z, "B", s)
        flipped = cx.sphere_chart(cx.antipode(p), s)
        assert np.abs(flipped + cx.sphere_chart(p, s)).max() < EXACT_TOL


def test_big_psi_color_equivariance(hexagon):
    s, _ = hexagon
    p = cx.ConfigPoint("B", 0.2 * s.vertices[0] + 0.8 * np.array([0.0, -0.3]), (1, 0, 1))
    swapped = cx.permute_colors(p, [1, 0])
    jp, jps = cx.big_psi(p, s), cx.big_psi(swapped, s)
    assert np.array_equal(jp.weights, jps.weights)  # bit-exact: same x
    relabeled = tuple(1 - c if c != cx.SENTINEL else c for c in jp.colors)
    assert jps.colors == relabeled


def test_phi_b_rejects_a_kind(hexagon):
    s, z = hexagon
    with pytest.raises(errors.UnsupportedVariant):
        cx.phi_B(cx.ConfigPoint("A", np.zeros(2), (0, 1, 0)), s)


# ---------------------------------------------------------------------------
# psi inversion


@pytest.mark.parametrize("d", [2, 3])
def test_invert_psi_random_targets(d, hexagon, tetra):
    s, z = hexagon if d == 2 else tetra
    rng = np.random.default_rng(SEED + 10 * d)
    n = 12 if d == 2 else 5
    for _ in range(n):
        b = rng.dirichlet(np.ones(d + 1))
        target = b @ s.vertices
        x = cx.invert_psi(z, target)
        assert np.linalg.norm(cx.psi(z, x) - target) <= 1e-8 * s.diameter * 1.01
        assert z.contains(x)


def test_invert_psi_vertex_target(hexagon):
    s, z = hexagon
    x = cx.invert_psi(z, s.vertices[1] * (1 - 1e-9))
    assert np.linalg.norm(x - s.vertices[1]) < 1e-3


def test_invert_psi_rejects_outside_target(hexagon):
    _, z = hexagon
    with pytest.raises(errors.PointOutside):
        cx.invert_psi(z, np.array([2.0, 2.0]))


def test_invert_psi_budget_carries_best(hexagon):
    s, z = hexagon
    with pytest.raises(errors.InversionBudgetExceeded) as info:
        cx.invert_psi(z, 0.3 * s.vertices[0], tol=1e-300, max_steps=3, budget=40)
    best_x, best_r = info.value.best
    assert z.contains(best_x)
    assert best_r < 1e-2  # still made progress before the budget ran out


# ---------------------------------------------------------------------------
# allocations


def test_canonical_allocations_q2_match_partitions():
    for d in (1, 2, 3):
        allocs = cx.canonical_allocations(d, 2)
        assert len(allocs) == 2**d - 1
        assert all(a[0] == 0 for a in allocs)
        parts = {frozenset(i for i, c in enumerate(a) if c == 1) for a in allocs}
        assert parts == set(fd.canonical_partitions(d))


def test_canonical_allocations_q3():
    allocs = cx.canonical_allocations(2, 3)
    assert allocs == [(0, 1, 2)]
    allocs4 = cx.canonical_allocations(3, 3)
    assert len(allocs4) == 6  # stirling2(4,3) = 6 orbit representatives
    assert all(len(set(a)) == 3 for a in allocs4)
