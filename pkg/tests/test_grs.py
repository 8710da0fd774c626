import itertools

import numpy as np
import pytest

from jplt import (
    ColumnAssignment,
    DimensionMismatch,
    ExtensionFailed,
    draw_distinct_points,
    draw_nonzero,
    FieldTooSmall,
    GrsSpec,
    NotGrs,
    NotMds,
    ParamInvalid,
    SpecInvalid,
    assemble_columns,
    extend_dual,
    generator_from_parity,
    grs_dual_multipliers,
    grs_from_matrix,
    grs_generator,
    is_mds,
    mat_mul,
    recovery_polynomials,
)

import golden
from conftest import StubRng


def test_spec_validation():
    GrsSpec(11, (1, 2), (0, 1), 1)
    with pytest.raises(SpecInvalid):
        GrsSpec(11, (1, 0), (0, 1), 1)  # zero multiplier
    with pytest.raises(SpecInvalid):
        GrsSpec(11, (1, 2), (3, 3), 1)  # repeated point
    with pytest.raises(SpecInvalid):
        GrsSpec(11, (1, 2), (0, 1), 3)  # dim > length
    with pytest.raises(SpecInvalid):
        GrsSpec(3, (1, 1, 1, 1), (0, 1, 2, 3), 2)  # length > p
    with pytest.raises(SpecInvalid):
        GrsSpec(1, (1,), (0,), 1)  # modulus below 2


def test_spec_allows_dim_zero():
    s = GrsSpec(11, (1, 2), (0, 1), 0)
    assert grs_generator(s).shape == (0, 2)


def test_generator_entries():
    s = GrsSpec(11, (2, 3, 5), (1, 4, 6), 3)
    g = grs_generator(s)
    for i in range(3):
        for j, (m, w) in enumerate(zip((2, 3, 5), (1, 4, 6))):
            assert g[i, j] == (m * pow(w, i, 11)) % 11
    assert is_mds(g, 11)


def test_generator_always_mds():
    rng = np.random.default_rng(8)
    for p in (5, 11, 101):
        for _ in range(20):
            n = int(rng.integers(1, min(p, 8)))
            k = int(rng.integers(0, n + 1))
            mults = rng.integers(1, p, size=n)
            pts = rng.choice(p, size=n, replace=False)
            g = grs_generator(GrsSpec(p, tuple(mults), tuple(pts), k))
            if k:
                assert is_mds(g, p)


def test_dual_multipliers_annihilate():
    rng = np.random.default_rng(9)
    for p in (3, 11, 101):
        for n in range(1, min(p, 7) + 1):
            for k in range(0, n):
                mults = tuple(int(v) for v in rng.integers(1, p, size=n))
                pts = tuple(int(v) for v in rng.choice(p, size=n, replace=False))
                s = GrsSpec(p, mults, pts, k)
                lam = grs_dual_multipliers(s)
                dual = GrsSpec(p, lam, pts, n - k)
                prod = mat_mul(grs_generator(s), grs_generator(dual).T, p)
                assert not np.any(prod)


def test_dual_gf2():
    s = GrsSpec(2, (1, 1), (0, 1), 1)
    assert grs_dual_multipliers(s) == (1, 1)


def test_dual_of_dual_is_identity():
    s = GrsSpec(13, (3, 1, 7, 2), (0, 5, 9, 11), 2)
    lam = grs_dual_multipliers(s)
    dual = GrsSpec(13, lam, s.eval_points, 2)
    assert grs_dual_multipliers(dual) == s.multipliers


def test_golden_dual_multipliers():
    s = GrsSpec(golden.P, golden.DEMAND_MULTIPLIERS, golden.DEMAND_POINTS, golden.L)
    assert grs_dual_multipliers(s) == golden.DUAL_MULTIPLIERS


def test_grs_from_matrix_round_trip():
    rng = np.random.default_rng(10)
    for p in (7, 101):
        for _ in range(25):
            n = int(rng.integers(2, min(p, 9)))
            k = int(rng.integers(2, n + 1))
            mults = tuple(int(v) for v in rng.integers(1, p, size=n))
            pts = tuple(int(v) for v in rng.choice(p, size=n, replace=False))
            g = grs_generator(GrsSpec(p, mults, pts, k))
            rec = grs_from_matrix(g, p)
            assert rec.multipliers == mults
            assert rec.eval_points == pts
            assert rec.dim == k


def test_grs_from_matrix_single_row():
    rec = grs_from_matrix(np.array([[4, 1, 9]]), 11)
    assert rec.multipliers == (4, 1, 9)
    assert rec.eval_points == (0, 1, 2)
    assert np.array_equal(grs_generator(rec), [[4, 1, 9]])


def test_grs_from_matrix_rejections():
    with pytest.raises(NotMds):
        grs_from_matrix(np.array([[1, 0], [0, 0]]), 11)
    # MDS but not of the multiplier/power shape
    m = np.array([[1, 1, 1, 1], [1, 2, 3, 4], [1, 4, 2, 5]])
    assert is_mds(m, 11)
    with pytest.raises(NotGrs):
        grs_from_matrix(m, 11)
    # single row longer than the field has distinct points
    with pytest.raises(NotGrs):
        grs_from_matrix(np.array([[1, 1, 1, 1]]), 3)


def test_extend_dual_golden_draws():
    spec = extend_dual(
        golden.P,
        golden.DUAL_MULTIPLIERS,
        golden.DEMAND_POINTS,
        golden.K,
        StubRng(golden.KEY_DRAWS),
        golden.D - golden.L,
    )
    assert spec.multipliers == golden.DUAL_MULTIPLIERS + golden.EXT_MULTIPLIERS
    assert spec.eval_points == golden.DEMAND_POINTS + golden.EXT_POINTS
    assert spec.dim == golden.D - golden.L


def test_extend_dual_rejection_draws():
    # zero multipliers and repeated points are redrawn, not errors
    draws = [0, 0, 5, 3, 3, 0, 7]
    spec = extend_dual(11, (2, 7), (3, 0), 3, StubRng(draws), 1)
    assert spec.multipliers == (2, 7, 5)
    assert spec.eval_points == (3, 0, 7)


def test_extend_dual_extension_preserves_mds():
    rng = np.random.default_rng(11)
    p = 13
    for _ in range(20):
        head_n = int(rng.integers(1, 5))
        total = int(rng.integers(head_n, 11))
        mults = tuple(int(v) for v in rng.integers(1, p, size=head_n))
        pts = tuple(int(v) for v in rng.choice(p, size=head_n, replace=False))
        dim = int(rng.integers(1, head_n + 1))
        spec = extend_dual(p, mults, pts, total, rng, dim)
        assert spec.multipliers[:head_n] == mults
        assert spec.eval_points[:head_n] == pts
        assert is_mds(grs_generator(spec), p)


def test_extend_dual_field_too_small():
    with pytest.raises(FieldTooSmall):
        extend_dual(3, (1,), (0,), 4, np.random.default_rng(0), 1)


def test_extend_dual_nothing_to_draw():
    # head already at full length: no draws, spec passes through
    spec = extend_dual(3, (1, 1, 1), (0, 1, 2), 3, np.random.default_rng(0), 1)
    assert spec.eval_points == (0, 1, 2)


def test_extend_dual_draw_cap():
    with pytest.raises(ExtensionFailed):
        extend_dual(3, (1, 1), (0, 1), 3, StubRng([1] + [0, 1] * 3000), 1)


def test_extend_dual_forced_complement():
    # p == total length forces the extension to use every unused point
    spec = extend_dual(7, (1, 2), (0, 3), 7, np.random.default_rng(12), 2)
    assert sorted(spec.eval_points) == list(range(7))


def test_column_assignment():
    ca = ColumnAssignment.from_support((1, 3), 4)
    assert ca.perm == (1, 3, 0, 2)
    assert ca.demand_positions == (1, 3)
    assert ca.complement_positions == (0, 2)
    with pytest.raises(SpecInvalid):
        ColumnAssignment((0, 0, 1), 1)


def test_assemble_columns_golden():
    full = GrsSpec(
        golden.P,
        golden.DUAL_MULTIPLIERS + golden.EXT_MULTIPLIERS,
        golden.DEMAND_POINTS + golden.EXT_POINTS,
        golden.D - golden.L,
    )
    placed = assemble_columns(full, ColumnAssignment(golden.PERM, golden.D))
    assert np.array_equal(grs_generator(placed), golden.H)


def test_generator_from_parity_golden():
    full = GrsSpec(
        golden.P,
        golden.DUAL_MULTIPLIERS + golden.EXT_MULTIPLIERS,
        golden.DEMAND_POINTS + golden.EXT_POINTS,
        golden.D - golden.L,
    )
    placed = assemble_columns(full, ColumnAssignment(golden.PERM, golden.D))
    g, gen_spec = generator_from_parity(placed)
    assert np.array_equal(g, golden.G)
    assert gen_spec.multipliers == golden.GEN_MULTIPLIERS_POSITION_ORDER
    assert gen_spec.dim == golden.K - golden.D + golden.L
    assert not np.any(mat_mul(g, golden.H.T, golden.P))


def test_generator_from_parity_random_annihilation():
    rng = np.random.default_rng(13)
    for p in (7, 101):
        for _ in range(20):
            n = int(rng.integers(2, min(p, 9)))
            r = int(rng.integers(1, n))
            mults = tuple(int(v) for v in rng.integers(1, p, size=n))
            pts = tuple(int(v) for v in rng.choice(p, size=n, replace=False))
            parity = GrsSpec(p, mults, pts, r)
            g, gen_spec = generator_from_parity(parity)
            assert g.shape == (n - r, n)
            assert not np.any(mat_mul(g, grs_generator(parity).T, p))
            assert gen_spec.eval_points == pts


def test_recovery_polynomials_golden():
    pts = [0] * golden.K
    for j, pos in enumerate(golden.PERM):
        pts[pos] = (golden.DEMAND_POINTS + golden.EXT_POINTS)[j]
    gen_spec = GrsSpec(golden.P, golden.GEN_MULTIPLIERS_POSITION_ORDER, tuple(pts),
                       golden.K - golden.D + golden.L)
    combs = recovery_polynomials(gen_spec, golden.EXT_POINTS, golden.L)
    assert np.array_equal(combs[0], golden.C1)
    assert np.array_equal(combs[1], golden.C2)


def test_recovery_polynomials_vanish_off_support():
    # the l-th combination applied to the generator must be zero at every
    # column whose point is excluded, and shifted rows share that property
    p = 13
    pts = (0, 1, 2, 3, 4, 5, 6, 7)
    mults = (1, 2, 3, 4, 5, 6, 1, 2)
    spec = GrsSpec(p, mults, pts, 6)
    g = grs_generator(spec)
    comp = (1, 4, 6)
    combs = recovery_polynomials(spec, comp, 3)
    prod = mat_mul(combs, g, p)
    comp_idx = [j for j, w in enumerate(pts) if w in comp]
    assert not np.any(prod[:, comp_idx])
    # rows are shifted copies: row l has l leading zeros, then the base poly
    for l in range(1, 3):
        assert not np.any(combs[l][:l])
        assert np.array_equal(combs[l][l:l + 4], combs[0][:4])


def test_recovery_polynomials_validation():
    spec = GrsSpec(11, (1, 2, 3), (0, 1, 2), 2)
    with pytest.raises(ParamInvalid):
        recovery_polynomials(spec, (5,), 0)
    with pytest.raises(DimensionMismatch):
        recovery_polynomials(spec, (5, 6), 2)  # 2 points + 2 rows != width 2


def test_assemble_columns_length_check():
    s = GrsSpec(11, (1, 2), (0, 1), 1)
    with pytest.raises(DimensionMismatch):
        assemble_columns(s, ColumnAssignment((0, 1, 2), 1))


def test_draw_nonzero_rejects_zero():
    assert draw_nonzero(11, 3, StubRng([0, 4, 0, 0, 9, 1])) == (4, 9, 1)


def test_draw_nonzero_cap():
    with pytest.raises(ExtensionFailed):
        draw_nonzero(11, 1, StubRng([0] * 5000))


def test_draw_distinct_points_rejects_seen_and_avoided():
    pts = draw_distinct_points(11, 2, StubRng([5, 2, 2, 7]), avoid=(5,))
    assert pts == (2, 7)


def test_draw_distinct_points_cap():
    with pytest.raises(ExtensionFailed):
        draw_distinct_points(11, 1, StubRng([3] * 5000), avoid=(3,))
