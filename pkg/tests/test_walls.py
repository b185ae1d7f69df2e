"""Tests for wall/cylinder/grid windows, snakes, the re-parameterization
isomorphism, and the coordinate Hamiltonian constructions."""
from __future__ import annotations

import pytest

from gqdham.walls import (
    HORIZONTAL,
    STRAIGHT,
    TWISTED,
    CoordDoubleRay,
    CylinderParams,
    column,
    cylinder_adjacent,
    cylinder_double_ray,
    cylinder_iso,
    cylinder_two_rays,
    cylinder_window,
    grid_adjacent,
    grid_double_ray,
    grid_two_rays,
    grid_window,
    pullback_ray,
    ray_window_edges,
    snake,
    staircase,
    vertex_to_staircase,
    wall_adjacent,
    wall_window,
    window_to_dot,
    window_to_json,
)

PARAM_SWEEP = [CylinderParams(k, l)
               for k in range(2, 9) for l in range(0, 11)
               if (k + l) % 2 == 0]


def check_spanning(rays, adjacent, n_lo, n_hi, inner_lo, inner_hi, height):
    """Joint exactly-once coverage + local adjacency, brute force on a window."""
    seen = {}
    for idx, ray in enumerate(rays):
        t_lo, t_hi = ray.index_range_covering(n_lo, n_hi)
        for t in range(t_lo, t_hi + 1):
            v = ray.vertex_at(t)
            w = ray.vertex_at(t + 1)
            assert adjacent(v, w) is not None, (idx, t, v, w)
            if n_lo <= v[0] <= n_hi:
                assert v not in seen, f"covered twice: {v}"
                seen[v] = idx
    for n in range(inner_lo, inner_hi + 1):
        for m in range(height):
            assert (n, m) in seen, f"missed: {(n, m)}"


def test_params_validation():
    with pytest.raises(ValueError):
        CylinderParams(1, 1)
    with pytest.raises(ValueError):
        CylinderParams(2, -2)
    with pytest.raises(ValueError):
        CylinderParams(3, 2)
    assert tuple(CylinderParams(4, 2)) == (4, 2)


def test_wall_height_one_is_bare_line():
    w = wall_window(1, -3, 3)
    assert all(lab == HORIZONTAL for _, _, lab in w.edges)
    assert len(w.edges) == 6


def test_wall_height_two_straight_edges():
    w = wall_window(2, 0, 2)
    straight = [(u, v) for u, v, lab in w.edges if lab == STRAIGHT]
    assert straight == [((0, 0), (0, 1)), ((2, 0), (2, 1))]


def test_wall_interior_degree_at_most_three():
    w = wall_window(4, -6, 6)
    for n in range(-4, 5):
        for m in range(4):
            assert w.degree((n, m)) <= 3


def test_wall_no_row_wraparound():
    # top and bottom rows connect only through twisted edges, never straight
    assert wall_adjacent(3, (0, 0), (0, 2)) is None
    w = wall_window(5, -4, 4)
    assert not any(abs(u[1] - v[1]) > 1 for u, v, _ in w.edges)


def test_cylinder_2_0_is_cubic():
    w = cylinder_window(CylinderParams(2, 0), -8, 8)
    for n in range(-7, 8):
        for m in range(2):
            assert w.degree((n, m)) == 3


def test_cylinder_4_4_twisted_pattern():
    p = CylinderParams(4, 4)
    w = cylinder_window(p, 0, 12)
    twisted = [(u, v) for u, v, lab in w.edges if lab == TWISTED]
    assert (((1, 3)), ((5, 0))) in twisted
    for u, v in twisted:
        top, bot = (u, v) if u[1] == 3 else (v, u)
        assert top[1] == 3 and bot[1] == 0
        assert top[0] % 2 == 1 and bot[0] == top[0] + 4


def test_cylinder_odd_twisted_start_even():
    p = CylinderParams(3, 3)
    w = cylinder_window(p, 0, 12)
    twisted = [(u, v) for u, v, lab in w.edges if lab == TWISTED]
    assert twisted
    for u, v in twisted:
        top = u if u[1] == 2 else v
        assert top[0] % 2 == 0


def test_interior_degree_three_everywhere():
    for p in [CylinderParams(2, 2), CylinderParams(3, 1), CylinderParams(5, 3)]:
        w = cylinder_window(p, -20, 20)
        for n in range(-8, 9):
            for m in range(p.k):
                assert w.degree((n, m)) == 3, (p, n, m)


def test_empty_range_rejected():
    with pytest.raises(ValueError):
        wall_window(3, 2, 1)
    with pytest.raises(ValueError):
        cylinder_window(CylinderParams(2, 2), 5, 0)


def test_snake_is_column_at_width_two():
    for p in [CylinderParams(4, 2), CylinderParams(3, 3), CylinderParams(5, 1)]:
        for i in (-2, 0, 3):
            assert snake(p, i, 2) == column(p, i)


def test_snake_endpoints_even_height():
    p = CylinderParams(4, 0)
    s = snake(p, 1, 4)
    assert s[0] == (3, 0)
    assert s[-1] == (3, 3)


def test_snake_endpoints_odd_height():
    p = CylinderParams(3, 1)
    s = snake(p, 1, 4)
    assert s[0] == (3, 0)
    assert s[-1] == (0, 2)


def test_snake_covers_block_and_is_path():
    for p in [CylinderParams(4, 2), CylinderParams(5, 3), CylinderParams(2, 2)]:
        for width in (2, 4, 6):
            s = snake(p, 0, width)
            assert len(s) == width * p.k
            assert len(set(s)) == len(s)
            cols = {n for n, _ in s}
            assert max(cols) - min(cols) + 1 == width
            for u, v in zip(s, s[1:]):
                assert wall_adjacent(p.k, u, v) is not None, (u, v)


def test_snake_width_validation():
    with pytest.raises(ValueError):
        snake(CylinderParams(2, 2), 0, 3)
    with pytest.raises(ValueError):
        snake(CylinderParams(2, 2), 0, 0)


def test_staircase_shape():
    for p in [CylinderParams(2, 0), CylinderParams(4, 2), CylinderParams(5, 1)]:
        for i in (-1, 0, 2):
            st = staircase(p, i)
            assert len(st) == 2 * p.k
            assert st[0] == (2 * i + 1, 0)
            assert st[-1] == (2 * i + 1 + p.k, p.k - 1)
            labs = [wall_adjacent(p.k, u, v) for u, v in zip(st, st[1:])]
            assert labs[0::2] == [HORIZONTAL] * p.k
            assert labs[1::2] == [STRAIGHT] * (p.k - 1)


def test_vertex_to_staircase_inverts():
    p = CylinderParams(4, 2)
    for i in range(-3, 4):
        for j, v in enumerate(staircase(p, i)):
            assert vertex_to_staircase(v) == (i, j)


def test_iso_parameter_map():
    iso = cylinder_iso(CylinderParams(4, 2))
    assert tuple(iso.target) == (3, 5)
    assert tuple(cylinder_iso(CylinderParams(4, 0)).target) == (2, 6)
    with pytest.raises(ValueError):
        cylinder_iso(CylinderParams(2, 0))  # target height would be 1


def test_iso_parameter_round_trip():
    applied = 0
    for p in PARAM_SWEEP:
        if (p.k + p.l) // 2 < 2 or (3 * p.k - p.l) // 2 < 0:
            continue
        back = cylinder_iso(cylinder_iso(p).target)
        assert tuple(back.target) == tuple(p)
        applied += 1
    assert applied > 10


@pytest.mark.parametrize("p", [CylinderParams(4, 0), CylinderParams(4, 2),
                               CylinderParams(3, 1), CylinderParams(3, 3),
                               CylinderParams(5, 1), CylinderParams(6, 2),
                               CylinderParams(5, 5), CylinderParams(2, 2)])
def test_iso_is_window_isomorphism(p):
    iso = cylinder_iso(p)
    w = cylinder_window(p, -10, 10)
    images = {}
    for v in w.vertices():
        fv = iso.forward(v)
        assert iso.inverse(fv) == v
        assert 0 <= fv[1] < iso.target.k
        assert fv not in images
        images[fv] = v
    # edges map to edges
    for u, v, _ in w.edges:
        assert cylinder_adjacent(iso.target, iso.forward(u),
                                 iso.forward(v)) is not None, (u, v)
    # and edges reflect: target edges pull back to source edges
    tw = cylinder_window(iso.target, -10, 10)
    for u, v, _ in tw.edges:
        assert iso.forward(iso.inverse(u)) == u
        assert cylinder_adjacent(p, iso.inverse(u),
                                 iso.inverse(v)) is not None, (u, v)


def test_iso_translate_rule():
    # shifting target columns by 2k pulls back to a 2*kappa column shift
    for p in [CylinderParams(4, 2), CylinderParams(3, 1), CylinderParams(5, 3)]:
        iso = cylinder_iso(p)
        for v in cylinder_window(p, -6, 6).vertices():
            n, m = iso.forward(v)
            src = iso.inverse((n - 2 * p.k, m))
            assert src == (v[0] + 2 * iso.target.k, v[1])


def test_double_ray_2_2_direct():
    ray = cylinder_double_ray(CylinderParams(2, 2))
    assert len(ray.motif) == 4
    assert ray.shift == 2


def test_double_ray_3_3_spans():
    ray = cylinder_double_ray(CylinderParams(3, 3))
    check_spanning([ray], lambda u, v: cylinder_adjacent(CylinderParams(3, 3), u, v),
                   -40, 40, -30, 30, 3)


def test_double_ray_4_0_via_iso():
    p = CylinderParams(4, 0)
    ray = cylinder_double_ray(p)
    assert abs(ray.shift) > 0
    check_spanning([ray], lambda u, v: cylinder_adjacent(p, u, v),
                   -40, 40, -30, 30, 4)


@pytest.mark.parametrize("p", PARAM_SWEEP)
def test_double_ray_sweep(p):
    ray = cylinder_double_ray(p)
    check_spanning([ray], lambda u, v: cylinder_adjacent(p, u, v),
                   -40, 40, -30, 30, p.k)


def test_two_rays_height_two_are_rows():
    r1, r2 = cylinder_two_rays(CylinderParams(2, 4))
    assert r1.motif == ((0, 0),) and r2.motif == ((0, 1),)


@pytest.mark.parametrize("p", PARAM_SWEEP)
def test_two_rays_sweep(p):
    rays = cylinder_two_rays(p)
    check_spanning(rays, lambda u, v: cylinder_adjacent(p, u, v),
                   -40, 40, -30, 30, p.k)


def test_grid_double_ray_heights():
    assert grid_double_ray(1).motif == ((0, 0),)
    ray = grid_double_ray(2)
    seen = set()
    t_lo, t_hi = ray.index_range_covering(-10, 10)
    for t in range(t_lo, t_hi + 1):
        v = ray.vertex_at(t)
        if -10 <= v[0] <= 10:
            assert v not in seen
            seen.add(v)
    assert len(seen) == 42
    for h in (1, 2, 5):
        check_spanning([grid_double_ray(h)],
                       lambda u, v: grid_adjacent(h, u, v),
                       -40, 40, -30, 30, h)


def test_grid_two_rays():
    with pytest.raises(ValueError):
        grid_two_rays(1)
    r1, r2 = grid_two_rays(2)
    assert r1.motif == ((0, 0),) and r2.motif == ((0, 1),)
    for h in (2, 3, 6):
        check_spanning(grid_two_rays(h),
                       lambda u, v: grid_adjacent(h, u, v),
                       -40, 40, -30, 30, h)


def test_coord_ray_validation():
    with pytest.raises(ValueError):
        CoordDoubleRay((), 1)
    with pytest.raises(ValueError):
        CoordDoubleRay(((0, 0),), 0)
    with pytest.raises(ValueError):
        CoordDoubleRay(((0, 0), (1, 0)), 1)  # translate collision


def test_pullback_respects_construction():
    p = CylinderParams(3, 1)
    iso = cylinder_iso(p)  # target (2, 4)
    inner = cylinder_double_ray(iso.target)
    ray = pullback_ray(iso, inner)
    check_spanning([ray], lambda u, v: cylinder_adjacent(p, u, v),
                   -40, 40, -30, 30, 3)


def test_exports():
    p = CylinderParams(2, 2)
    w = cylinder_window(p, -2, 2)
    ray = cylinder_double_ray(p)
    dot = window_to_dot(w, [ray])
    assert dot.startswith("graph {")
    assert "style=dashed" in dot
    assert "color=red" in dot
    assert '"0,0"' in dot
    import json
    doc = json.loads(window_to_json(w, [ray]))
    assert doc["height"] == 2 and doc["twist"] == 2
    assert {"u": [0, 0], "v": [1, 0], "label": HORIZONTAL} in doc["edges"]
    assert doc["rays"][0]["shift"] == 2
    edges = ray_window_edges(w, ray)
    assert edges and all(cylinder_adjacent(p, u, v) for u, v in edges)


def test_wall_window_vs_adjacency_oracle():
    # every claimed edge satisfies the predicate; every predicate pair is present
    w = wall_window(3, -3, 3)
    vs = w.vertices()
    claimed = {(u, v) for u, v, _ in w.edges}
    for a in vs:
        for b in vs:
            if a < b:
                lab = wall_adjacent(3, a, b)
                assert ((a, b) in claimed) == (lab is not None)


def test_cylinder_window_vs_adjacency_oracle():
    p = CylinderParams(3, 3)
    w = cylinder_window(p, -4, 4)
    vs = w.vertices()
    claimed = {(u, v): lab for u, v, lab in w.edges}
    for a in vs:
        for b in vs:
            if a < b:
                lab = cylinder_adjacent(p, a, b)
                assert claimed.get((a, b)) == lab
