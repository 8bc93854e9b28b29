import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import dense_matrix, rotation_number_mp
from polygonflow.errors import (
    DegeneratePolygon,
    DivisionPointOutOfRange,
    LengthMismatch,
    NonFiniteCoordinate,
    SchemeLengthMismatch,
    SizeMismatch,
    TooFewVertices,
)
from polygonflow.polygon import (
    PerSegment,
    Uniform,
    apply_transform,
    bounding_interval,
    build_transform,
    center_and_normalize,
    centroid,
    is_nested,
    iterate,
    make_polygon,
    random_polygon,
)

xi_open = st.floats(min_value=1e-3, max_value=1 - 1e-3)
coords = st.floats(min_value=-100, max_value=100, allow_nan=False)


@st.composite
def polygons(draw, min_n=3, max_n=40):
    n = draw(st.integers(min_n, max_n))
    xs = draw(st.lists(coords, min_size=n, max_size=n))
    ys = draw(st.lists(coords, min_size=n, max_size=n))
    return make_polygon(xs, ys)


# --- construction ---------------------------------------------------------


def test_make_polygon_square(unit_square):
    assert unit_square.n == 4
    assert list(unit_square.xs) == [1, -1, -1, 1]
    assert list(unit_square.ys) == [1, 1, -1, -1]


def test_make_polygon_guards():
    with pytest.raises(TooFewVertices):
        make_polygon([0, 1], [0, 1])
    with pytest.raises(LengthMismatch):
        make_polygon([0, 1, 2], [0, 1])
    with pytest.raises(NonFiniteCoordinate):
        make_polygon([0, 1, math.nan], [0, 1, 2])
    with pytest.raises(NonFiniteCoordinate):
        make_polygon([0, 1, 2], [0, math.inf, 2])


def test_polygon_is_immutable(unit_square):
    with pytest.raises(ValueError):
        unit_square.xs[0] = 5.0


def test_triangle_centroid():
    cx, cy = centroid(make_polygon([0, 1, 0], [0, 0, 2]))
    assert cx == pytest.approx(1 / 3, abs=1e-15)
    assert cy == pytest.approx(2 / 3, abs=1e-15)


def test_square_centroid(unit_square):
    assert centroid(unit_square) == (0.0, 0.0)


def test_random_polygon_deterministic():
    a = random_polygon(20, 42, 1.0)
    b = random_polygon(20, 42, 1.0)
    assert a.xs.tobytes() == b.xs.tobytes() and a.ys.tobytes() == b.ys.tobytes()


def test_random_polygon_seed_changes_output():
    a = random_polygon(20, 42, 1.0)
    b = random_polygon(20, 43, 1.0)
    assert not np.array_equal(a.xs, b.xs)
    assert not np.array_equal(a.ys, b.ys)


def test_random_polygon_range():
    p = random_polygon(50, 7, 1.0)
    assert np.all(np.abs(p.xs) <= 1.0) and np.all(np.abs(p.ys) <= 1.0)
    assert p.n == 50
    with pytest.raises(TooFewVertices):
        random_polygon(2, 1)


def test_centroid_matches_compensated_sum():
    p = random_polygon(20, 42, 1.0)
    cx, cy = centroid(p)
    assert cx == pytest.approx(math.fsum(p.xs) / 20, abs=1e-15)
    assert cy == pytest.approx(math.fsum(p.ys) / 20, abs=1e-15)


# --- normalization --------------------------------------------------------


def test_center_and_normalize_square(unit_square):
    q = center_and_normalize(unit_square)
    np.testing.assert_allclose(q.xs, [0.5, -0.5, -0.5, 0.5], atol=1e-15)
    np.testing.assert_allclose(q.ys, [0.5, 0.5, -0.5, -0.5], atol=1e-15)


def test_center_and_normalize_idempotent():
    q = center_and_normalize(random_polygon(17, 3))
    r = center_and_normalize(q)
    np.testing.assert_allclose(r.xs, q.xs, atol=1e-15)
    np.testing.assert_allclose(r.ys, q.ys, atol=1e-15)


def test_center_and_normalize_degenerate():
    with pytest.raises(DegeneratePolygon):
        center_and_normalize(make_polygon([1, 2, 3], [5, 5, 5]))


@given(polygons())
def test_center_and_normalize_contract(p):
    try:
        q = center_and_normalize(p)
    except DegeneratePolygon:
        return
    assert abs(q.xs.mean()) < 1e-12 and abs(q.ys.mean()) < 1e-12
    assert np.linalg.norm(q.xs) == pytest.approx(1.0, abs=1e-12)
    assert np.linalg.norm(q.ys) == pytest.approx(1.0, abs=1e-12)


# --- transform ------------------------------------------------------------


@pytest.mark.parametrize(
    "scheme, rows",
    [
        (Uniform(0.25), [[0.75, 0.25, 0], [0, 0.75, 0.25], [0.25, 0, 0.75]]),
        (Uniform(0.5), [[0.5, 0.5, 0], [0, 0.5, 0.5], [0.5, 0, 0.5]]),
        (PerSegment((0.5, 0.5, 0.25)), [[0.5, 0.5, 0], [0, 0.5, 0.5], [0.25, 0, 0.75]]),
    ],
)
def test_build_transform_rows(scheme, rows):
    np.testing.assert_array_equal(build_transform(3, scheme).dense(), rows)


def test_build_transform_guards():
    with pytest.raises(SchemeLengthMismatch):
        build_transform(4, PerSegment((0.5, 0.5, 0.5)))
    with pytest.raises(DivisionPointOutOfRange):
        build_transform(4, 1.0)
    with pytest.raises(DivisionPointOutOfRange):
        build_transform(4, 0.0)
    with pytest.raises(DivisionPointOutOfRange):
        PerSegment((0.5, -0.1, 0.5))
    with pytest.raises(TooFewVertices):
        build_transform(2, 0.5)


@given(st.integers(3, 64), st.lists(xi_open, min_size=64, max_size=64), st.booleans())
def test_row_and_column_sums(n, xis, uniform):
    scheme = Uniform(xis[0]) if uniform else PerSegment(tuple(xis[:n]))
    m = build_transform(n, scheme).dense()
    assert np.all(np.abs(m.sum(axis=1) - 1) <= 1e-15)
    assert np.all(np.count_nonzero(m, axis=1) == 2)
    cols_ok = bool(np.all(np.abs(m.sum(axis=0) - 1) <= 1e-15))
    assert cols_ok == (uniform or len(set(xis[:n])) == 1)


def test_apply_square_midpoints(unit_square, backend):
    q = apply_transform(build_transform(4, 0.5), unit_square)
    np.testing.assert_array_equal(q.xs, [0, -1, 0, 1])
    np.testing.assert_array_equal(q.ys, [1, 0, -1, 0])


def test_apply_size_mismatch(unit_square):
    with pytest.raises(SizeMismatch):
        apply_transform(build_transform(5, 0.5), unit_square)


def test_stencil_matches_dense_n64(backend):
    p = random_polygon(64, 11)
    T = build_transform(64, 0.3)
    q = apply_transform(T, p)
    M = dense_matrix(np.full(64, 0.3))
    np.testing.assert_allclose(q.xs, M @ p.xs, atol=1e-13, rtol=0)
    np.testing.assert_allclose(q.ys, M @ p.ys, atol=1e-13, rtol=0)


@settings(max_examples=60)
@given(st.integers(3, 256), st.integers(0, 2**32), st.lists(xi_open, min_size=1, max_size=1))
def test_stencil_dense_equivalence(n, seed, xi):
    rs = np.random.default_rng(seed)
    xis = rs.uniform(0.01, 0.99, n)
    p = make_polygon(rs.uniform(-1, 1, n), rs.uniform(-1, 1, n))
    q = apply_transform(build_transform(n, PerSegment(tuple(xis))), p)
    np.testing.assert_allclose(q.xs, dense_matrix(xis) @ p.xs, atol=1e-12, rtol=0)
    u = apply_transform(build_transform(n, xi[0]), p)
    np.testing.assert_allclose(u.ys, dense_matrix(np.full(n, xi[0])) @ p.ys, atol=1e-12, rtol=0)


@given(polygons(), xi_open)
def test_uniform_preserves_centroid(p, xi):
    c0 = centroid(p)
    c1 = centroid(apply_transform(build_transform(p.n, xi), p))
    assert abs(c1[0] - c0[0]) <= 1e-13 * max(1.0, np.abs(p.xs).max())
    assert abs(c1[1] - c0[1]) <= 1e-13 * max(1.0, np.abs(p.ys).max())


@given(polygons(), xi_open)
def test_bounding_interval_nests(p, xi):
    q = apply_transform(build_transform(p.n, xi), p)
    assert is_nested(bounding_interval(q), bounding_interval(p))


@given(polygons(max_n=12), st.lists(xi_open, min_size=12, max_size=12))
def test_bounding_interval_nests_per_segment(p, xis):
    q = apply_transform(build_transform(p.n, PerSegment(tuple(xis[:p.n]))), p)
    assert is_nested(bounding_interval(q), bounding_interval(p))


def test_bounding_interval_examples(unit_square):
    assert bounding_interval(unit_square) == ((-1, 1), (-1, 1))
    c = make_polygon([2.5] * 4, [-1.0] * 4)
    assert bounding_interval(c) == ((2.5, 2.5), (-1.0, -1.0))


def test_square_midpoint_step_does_not_contract_x(unit_square):
    # the midpoint square keeps its x-extent; nesting holds but not strictly
    q = apply_transform(build_transform(4, 0.5), unit_square)
    assert bounding_interval(q)[0] == bounding_interval(unit_square)[0]


# --- iteration ------------------------------------------------------------


def test_iterate_zero_steps(unit_square):
    t = iterate(unit_square, 0.3, 0, "unnormalized")
    assert len(t) == 1 and t.snapshot(0) == unit_square
    tn = iterate(unit_square, 0.3, 0, "normalized")
    assert tn.snapshot(0) == center_and_normalize(unit_square)


def test_iterate_normalized_invariants(backend):
    t = iterate(random_polygon(15, 5), 0.37, 60, "normalized")
    assert t.mode == "normalized" and t.steps == 60
    assert np.all(np.abs(t.xs.mean(axis=1)) <= 1e-12)
    assert np.all(np.abs(t.ys.mean(axis=1)) <= 1e-12)
    assert np.all(np.abs(np.linalg.norm(t.xs, axis=1) - 1) <= 1e-12)
    assert np.all(np.abs(np.linalg.norm(t.ys, axis=1) - 1) <= 1e-12)


def test_iterate_unnormalized_keeps_centroid(backend):
    p = random_polygon(23, 9)
    t = iterate(p, 0.21, 300, "unnormalized")
    c0 = centroid(p)
    drift = max(max(abs(t.xs[k].mean() - c0[0]), abs(t.ys[k].mean() - c0[1]))
                for k in range(len(t)))
    assert drift <= 1e-12


def test_iterate_decay_bound_n10(backend):
    # |vertex - centroid| shrinks at least like |z|^k times the initial spread
    # once the first harmonic dominates; with every other harmonic decaying
    # faster, the full centered vector obeys ||M^k x|| <= |z|^k ||x||.
    p = random_polygon(10, 42)
    t = iterate(p, 0.25, 100, "unnormalized")
    _, _, modulus, _ = rotation_number_mp(10, 0.25)
    cx, cy = centroid(p)
    d0 = math.hypot(np.linalg.norm(p.xs - cx), np.linalg.norm(p.ys - cy))
    d100 = np.max(np.hypot(t.xs[100] - cx, t.ys[100] - cy))
    assert d100 <= modulus**100 * d0


def test_iterate_degenerate_raises(backend):
    with pytest.raises(DegeneratePolygon):
        iterate(make_polygon([0, 1, 2, 3], [1, 1, 1, 1]), 0.5, 3, "normalized")


def test_iterate_collapse_raises(backend):
    # midpoint map kills the alternating (Nyquist) mode in one step
    with pytest.raises(DegeneratePolygon):
        iterate(make_polygon([1, -1, 1, -1], [0, 1, 0, -1]), 0.5, 2, "normalized")


def test_iterate_bad_arguments(unit_square):
    with pytest.raises(ValueError):
        iterate(unit_square, 0.5, -1)
    with pytest.raises(ValueError):
        iterate(unit_square, 0.5, 3, "sideways")


def test_contraction_ratio_tends_to_modulus(backend):
    for n in (5, 12, 20):
        p = random_polygon(n, 3)
        cx, cy = centroid(p)
        p = make_polygon(p.xs - cx, p.ys - cy)
        t = iterate(p, 0.5, 260, "unnormalized")
        ratio = t.norms[201:, 0] / t.norms[200:-1, 0]
        assert np.all(np.abs(ratio - math.cos(math.pi / n)) <= 1e-6)
