"""Exact metric computations against brute-force oracles.

Every randomized comparison pins its seed; the sweep, the incremental
profile, and the vectorized covering scan are each checked against a
plain double-loop reference.
"""

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dyadnet import (
    GeneratorPair,
    Norm,
    PointSet,
    ResourceBudgetError,
    cell_coradius,
    covering_certified,
    distance_to_set,
    mesh_ratio,
    mesh_ratio_from_parts,
    prefix,
    separation,
    separation_naive,
    separation_profile,
)
from dyadnet.geometry import _covering_brute_max, _covering_grid_max

ALL_NORMS = (Norm.L1, Norm.L2, Norm.LINF)


def random_set(rng: random.Random, scale: int, size: int) -> PointSet:
    top = 1 << scale
    pairs = [(rng.randrange(top), rng.randrange(top)) for _ in range(size)]
    return PointSet.from_points(scale, pairs)


def test_norm_parse():
    assert Norm.parse(" LINF ") is Norm.LINF
    assert Norm.parse("l2") is Norm.L2
    with pytest.raises(ValueError):
        Norm.parse("l3")


# --- separation ------------------------------------------------------------


def test_two_point_examples():
    ps = PointSet.from_points(1, [(0, 0), (1, 1)])
    linf = separation(ps, Norm.LINF)
    assert linf.min_dist == Fraction(1, 2)
    assert linf.radius == Fraction(1, 4)
    assert separation(ps, Norm.L1).min_dist == 1
    assert separation(ps, Norm.L2).min_dist_sq == Fraction(1, 2)
    assert separation(ps, Norm.L2).min_dist is None


def test_frozen_scale3_separation():
    ps = prefix(GeneratorPair.sobol(3), 8)
    rep = separation(ps, Norm.LINF)
    assert rep.min_dist == Fraction(1, 8)
    assert rep.witness == (1, 6)
    p, q = ps.point(1), ps.point(6)
    assert max(abs(p.x - q.x), abs(p.y - q.y)) == Fraction(1, 8)


def test_scale6_separation_with_witness_distance():
    ps = prefix(GeneratorPair.sobol(6), 64)
    rep = separation(ps, Norm.LINF)
    assert rep.min_dist == Fraction(2, 64)
    assert rep.radius == Fraction(1, 64)
    a, b = ps.point(34), ps.point(60)
    assert max(abs(a.x - b.x), abs(a.y - b.y)) == Fraction(2, 64)


def test_duplicate_points_report_zero():
    ps = PointSet.from_points(2, [(1, 1), (3, 0), (1, 1)])
    for norm in ALL_NORMS:
        rep = separation(ps, norm)
        assert rep.key == 0
        assert rep.witness == (0, 2)


def test_separation_needs_two_points():
    lone = PointSet.from_points(1, [(0, 0)])
    for norm in ALL_NORMS:
        with pytest.raises(ValueError):
            separation(lone, norm)


def test_sweep_matches_naive_on_random_sets():
    rng = random.Random(501)
    for trial in range(120):
        scale = rng.randint(1, 8)
        size = rng.randint(2, 40)
        ps = random_set(rng, scale, size)
        for norm in ALL_NORMS:
            fast = separation(ps, norm)
            slow = separation_naive(ps, norm)
            assert fast.key == slow.key, (trial, norm)
            assert fast.witness == slow.witness, (trial, norm)


@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_sweep_matches_naive_property(seed):
    rng = random.Random(seed)
    ps = random_set(rng, rng.randint(1, 6), rng.randint(2, 24))
    for norm in ALL_NORMS:
        fast = separation(ps, norm)
        slow = separation_naive(ps, norm)
        assert (fast.key, fast.witness) == (slow.key, slow.witness)


def test_norm_ordering_on_real_values():
    # linf <= l2 <= l1 as real distances: compare linf^2 <= l2sq and
    # l2sq <= l1^2 on the integer keys, which share a scale.
    rng = random.Random(77)
    for _ in range(40):
        ps = random_set(rng, rng.randint(1, 7), rng.randint(2, 30))
        ki = separation(ps, Norm.LINF).key
        k2 = separation(ps, Norm.L2).key
        k1 = separation(ps, Norm.L1).key
        assert ki * ki <= k2 <= k1 * k1


def test_profile_matches_independent_runs():
    g = GeneratorPair.sobol(6)
    for norm in ALL_NORMS:
        rows = separation_profile(g, 64, norm)
        assert [r.n for r in rows] == list(range(2, 65))
        for r in rows[::7]:
            ind = separation(prefix(g, r.n), norm)
            assert (r.key, r.witness) == (ind.key, ind.witness)


def test_profile_is_nonincreasing():
    for norm in ALL_NORMS:
        rows = separation_profile(GeneratorPair.sobol(7), 128, norm)
        for prev, cur in zip(rows, rows[1:]):
            assert cur.key <= prev.key


def test_profile_on_random_generator_matrices():
    # Scrambling the second matrix must not break sweep agreement.
    rng = random.Random(9)
    from dyadnet import BitMatrix, is_nonsingular

    m = 6
    while True:
        rows = [[rng.randint(0, 1) for _ in range(m)] for _ in range(m)]
        c2 = BitMatrix.from_rows(rows)
        if is_nonsingular(c2):
            break
    g = GeneratorPair(m, GeneratorPair.sobol(m).c1, c2, label="random")
    prof = separation_profile(g, 64, Norm.L2)
    for r in prof[::11]:
        ind = separation_naive(prefix(g, r.n), Norm.L2)
        assert (r.key, r.witness) == (ind.key, ind.witness)


# --- covering --------------------------------------------------------------


def test_single_point_covering():
    lone = PointSet.from_points(1, [(1, 1)])
    for k in (3, 5, 7):
        cov = covering_certified(lone, Norm.LINF, k)
        assert cov.hi == Fraction(1, 2)
        assert cov.lo == Fraction(1, 2) - Fraction(1, 1 << (k + 1))
        assert cov.center == (1, 1)


def test_four_corner_covering():
    corners = PointSet.from_points(1, [(0, 0), (0, 1), (1, 0), (1, 1)])
    cov = covering_certified(corners, Norm.LINF, 4)
    assert cov.lo == Fraction(15, 32)
    assert cov.hi == Fraction(1, 2)


def test_covering_width_is_cell_coradius():
    rng = random.Random(31)
    for _ in range(12):
        ps = random_set(rng, rng.randint(1, 6), rng.randint(1, 20))
        for norm in ALL_NORMS:
            for k in (3, 5):
                cov = covering_certified(ps, norm, k)
                assert cov.width == cell_coradius(norm, k)


def test_covering_intervals_intersect_across_resolutions():
    # Every resolution certifies lo <= h <= hi for the same h, so the
    # intervals at different k must pairwise overlap.
    rng = random.Random(13)
    for _ in range(10):
        ps = random_set(rng, rng.randint(1, 6), rng.randint(1, 16))
        for norm in ALL_NORMS:
            covs = [covering_certified(ps, norm, k) for k in (3, 4, 5, 6)]
            for a in covs:
                for b in covs:
                    assert a.lo <= b.hi


def test_covering_lower_bound_is_attained_distance():
    rng = random.Random(47)
    for _ in range(10):
        ps = random_set(rng, rng.randint(1, 5), rng.randint(1, 12))
        for norm in ALL_NORMS:
            cov = covering_certified(ps, norm, 4)
            cx, cy = cov.center_point
            d = distance_to_set(ps, cx, cy, norm)
            if norm.squared:
                # d is the squared distance; lo floors its root and hi
                # bounds the covering radius from above.
                assert cov.lo**2 <= d <= cov.hi**2
            else:
                assert d == cov.lo


def test_vectorized_and_brute_covering_agree():
    rng = random.Random(99)
    for _ in range(16):
        scale = rng.randint(1, 6)
        ps = random_set(rng, scale, rng.randint(1, 14))
        for norm in ALL_NORMS:
            for k in (2, 4):
                s = max(ps.scale, k + 1)
                grid = _covering_grid_max(ps, norm, k, s)
                brute = _covering_brute_max(ps, norm, k, s)
                assert grid == brute, (ps.scale, len(ps), norm, k)


def test_covering_budget_is_enforced():
    ps = PointSet.from_points(1, [(0, 0)])
    with pytest.raises(ResourceBudgetError):
        covering_certified(ps, Norm.LINF, 14)


def test_covering_rejects_empty_resolution():
    ps = PointSet.from_points(1, [(0, 0)])
    with pytest.raises(ValueError):
        covering_certified(ps, Norm.LINF, 0)


def test_distance_to_set_examples():
    ps = PointSet.from_points(1, [(0, 0), (1, 1)])
    assert distance_to_set(ps, Fraction(1, 4), Fraction(1, 4), Norm.LINF) == Fraction(1, 4)
    assert distance_to_set(ps, Fraction(1, 4), 0, Norm.L1) == Fraction(1, 4)
    # Euclidean distances come back squared.
    assert distance_to_set(ps, Fraction(1, 4), Fraction(1, 4), Norm.L2) == Fraction(1, 8)


# --- mesh ratio ------------------------------------------------------------


def test_mesh_ratio_two_point_example():
    # Separation radius 1/4, covering radius exactly 1/2, ratio exactly 2.
    ps = PointSet.from_points(1, [(0, 0), (1, 1)])
    mesh = mesh_ratio(ps, Norm.LINF, 6)
    assert mesh.lo <= 2 <= mesh.hi
    assert mesh.hi - mesh.lo <= Fraction(1, 16)
    assert mesh.separation.radius == Fraction(1, 4)


def test_mesh_ratio_needs_distinct_points():
    ps = PointSet.from_points(1, [(0, 0), (0, 0)])
    with pytest.raises(ValueError):
        mesh_ratio(ps, Norm.LINF, 4)


def test_mesh_ratio_rejects_mixed_norms():
    ps = prefix(GeneratorPair.sobol(3), 8)
    sep = separation(ps, Norm.LINF)
    cov = covering_certified(ps, Norm.L1, 4)
    with pytest.raises(ValueError):
        mesh_ratio_from_parts(sep, cov)


def test_mesh_ratio_euclidean_enclosure():
    # The Euclidean ratio interval must contain the true value
    # h / (d/2); bound the truth by interval arithmetic with floats.
    ps = prefix(GeneratorPair.sobol(4), 16)
    mesh = mesh_ratio(ps, Norm.L2, 8)
    assert mesh.lo < mesh.hi
    import math

    d = math.sqrt(mesh.separation.key) / (1 << ps.scale)
    h_lo, h_hi = float(mesh.covering.lo), float(mesh.covering.hi)
    assert float(mesh.lo) <= h_hi / (d / 2) + 1e-9
    assert float(mesh.hi) >= h_lo / (d / 2) - 1e-9


def test_mesh_interval_narrows_with_resolution():
    ps = prefix(GeneratorPair.sobol(5), 32)
    widths = []
    for k in (4, 6, 8):
        mesh = mesh_ratio(ps, Norm.LINF, k)
        widths.append(mesh.hi - mesh.lo)
    assert widths[0] > widths[1] > widths[2]
