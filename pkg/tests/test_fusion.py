"""Decision-map semantics, the three fusers, and their invariants."""

import math

import numpy as np
import pytest

from momentfuse.filters import convolve3, high_boost_mask
from momentfuse.fusion import (
    AverageFuser,
    MomentFuser,
    PcaFuser,
    decision_map,
    local_moment_map,
    make_fuser,
    pca_weights,
)
from momentfuse.image import quantize, widen
from momentfuse.synthetic import complementary_blur_pair, random_texture
from momentfuse.validation import ShapeMismatchError


def closed_form_pca_weights(a, b):
    """Independent oracle: population covariance, quadratic-formula
    eigenvalue, explicit eigenvector of a symmetric 2x2 matrix."""
    u = a.astype(float).ravel()
    v = b.astype(float).ravel()
    suu = np.mean((u - u.mean()) ** 2)
    svv = np.mean((v - v.mean()) ** 2)
    suv = np.mean((u - u.mean()) * (v - v.mean()))
    half_trace = (suu + svv) / 2.0
    lam = half_trace + math.sqrt(((suu - svv) / 2.0) ** 2 + suv * suv)
    if suv != 0.0:
        e1, e2 = lam - svv, suv
    else:
        e1, e2 = (1.0, 0.0) if suu >= svv else (0.0, 1.0)
    total = e1 + e2
    if total < 0:
        e1, e2, total = -e1, -e2, -total
    return e1 / total, e2 / total


def test_decision_map_strict_and_tie_cases():
    mx = np.array([[5.0, 4.0, 2.0]])
    my = np.array([[3.0, 4.0, 7.0]])
    d = decision_map(mx, my)
    assert d.tolist() == [[True, True, False]]  # tie goes to the first source


def test_decision_map_rejects_mismatched_shapes():
    with pytest.raises(ShapeMismatchError):
        decision_map(np.zeros((2, 2)), np.zeros((2, 3)))


def test_decision_map_random_with_forced_ties():
    rng = np.random.default_rng(0)
    mx = rng.normal(size=(50, 50))
    my = rng.normal(size=(50, 50))
    tie_mask = rng.uniform(size=(50, 50)) < 0.25
    my[tie_mask] = mx[tie_mask]
    d = decision_map(mx, my)
    assert np.array_equal(d, mx >= my)
    assert np.all(d[tie_mask])


def test_self_fusion_returns_filtered_input_and_all_first():
    rng = np.random.default_rng(4)
    img = rng.integers(0, 256, size=(20, 20), dtype=np.uint8)
    result = MomentFuser().fuse(img, img)
    from momentfuse.filters import preprocess
    assert np.array_equal(result.fused_f, preprocess(img))
    assert bool(result.decision.all())
    assert np.array_equal(result.fused_u8, quantize(result.fused_f))


def test_selection_property_filtered_mode():
    rng = np.random.default_rng(12)
    fuser = MomentFuser()
    for _ in range(5):
        a = rng.integers(0, 256, size=(16, 16), dtype=np.uint8)
        b = rng.integers(0, 256, size=(16, 16), dtype=np.uint8)
        result = fuser.fuse(a, b)
        from momentfuse.filters import preprocess
        fa, fb = preprocess(a), preprocess(b)
        matches = (result.fused_f == fa) | (result.fused_f == fb)
        assert bool(matches.all())


def test_selection_property_original_mode():
    rng = np.random.default_rng(13)
    fuser = MomentFuser(source="original")
    a = rng.integers(0, 256, size=(16, 16), dtype=np.uint8)
    b = rng.integers(0, 256, size=(16, 16), dtype=np.uint8)
    result = fuser.fuse(a, b)
    matches = (result.fused_f == widen(a)) | (result.fused_f == widen(b))
    assert bool(matches.all())
    assert result.fused_u8.max() <= 255


def test_swap_relation_differs_only_at_ties():
    rng = np.random.default_rng(21)
    fuser = MomentFuser()
    for _ in range(3):
        a = rng.integers(0, 256, size=(14, 14), dtype=np.uint8)
        b = rng.integers(0, 256, size=(14, 14), dtype=np.uint8)
        fwd = fuser.fuse(a, b)
        rev = fuser.fuse(b, a)
        ties = fwd.moments_a == fwd.moments_b
        assert np.array_equal(fwd.fused_f[~ties], rev.fused_f[~ties])


def test_decision_invariant_under_joint_positive_scaling():
    # 0.5x and 2x are exact float scalings, so the comparison chain is
    # bit-stable; checked pre-quantization at the float level.
    rng = np.random.default_rng(30)
    mask = high_boost_mask()

    def pipeline_decision(xf, yf):
        mx = local_moment_map(convolve3(xf, mask))
        my = local_moment_map(convolve3(yf, mask))
        return decision_map(mx, my)

    for _ in range(5):
        x = widen(rng.integers(0, 256, size=(12, 12), dtype=np.uint8))
        y = widen(rng.integers(0, 256, size=(12, 12), dtype=np.uint8))
        base = pipeline_decision(x, y)
        assert np.array_equal(pipeline_decision(0.5 * x, 0.5 * y), base)
        assert np.array_equal(pipeline_decision(2.0 * x, 2.0 * y), base)


def test_moment_fuser_rejects_mismatched_pair():
    with pytest.raises(ShapeMismatchError):
        MomentFuser().fuse(np.zeros((2, 2), np.uint8), np.zeros((3, 2), np.uint8))


def test_moment_fuser_rejects_bad_source():
    fuser = MomentFuser(source="both")
    with pytest.raises(ValueError):
        fuser.fuse(np.zeros((2, 2), np.uint8), np.zeros((2, 2), np.uint8))


def test_complementary_blur_pair_decisions_follow_sharp_side():
    rng = np.random.default_rng(61)
    base = random_texture(128, 128, rng)
    seam = 64
    pair = complementary_blur_pair(base, seam, 2.0)
    decision = MomentFuser().fuse(pair.a, pair.b).decision
    left = decision[:, :seam - 3]
    right = decision[:, seam + 4:]
    # a is blurred left of the seam, so the left half should pick b.
    assert np.mean(~left) >= 0.9
    assert np.mean(right) >= 0.9


def test_average_constants():
    a = np.full((4, 4), 100, dtype=np.uint8)
    b = np.full((4, 4), 200, dtype=np.uint8)
    result = AverageFuser().fuse(a, b)
    assert np.all(result.fused_f == 150.0)
    assert np.all(result.fused_u8 == 150)
    assert result.decision is None


def test_average_idempotent_and_rounding():
    img = np.array([[0, 255]], dtype=np.uint8)
    assert np.array_equal(AverageFuser().fuse(img, img).fused_u8, img)
    swapped = np.array([[255, 0]], dtype=np.uint8)
    result = AverageFuser().fuse(img, swapped)
    assert result.fused_f.tolist() == [[127.5, 127.5]]
    assert result.fused_u8.tolist() == [[128, 128]]


def test_average_symmetric():
    rng = np.random.default_rng(39)
    a = rng.integers(0, 256, size=(9, 9), dtype=np.uint8)
    b = rng.integers(0, 256, size=(9, 9), dtype=np.uint8)
    assert np.array_equal(AverageFuser().fuse(a, b).fused_f,
                          AverageFuser().fuse(b, a).fused_f)


def test_pca_identical_sources_gives_half_weights():
    rng = np.random.default_rng(44)
    img = rng.integers(0, 256, size=(8, 8), dtype=np.uint8)
    result = PcaFuser().fuse(img, img)
    assert result.weights == pytest.approx((0.5, 0.5))
    assert not result.degenerate
    assert np.array_equal(result.fused_u8, img)


def test_pca_constant_second_source_puts_all_weight_on_first():
    rng = np.random.default_rng(45)
    a = rng.integers(0, 256, size=(8, 8), dtype=np.uint8)
    b = np.full((8, 8), 77, dtype=np.uint8)
    result = PcaFuser().fuse(a, b)
    assert result.weights == pytest.approx((1.0, 0.0), abs=1e-12)
    assert np.array_equal(result.fused_u8, a)


def test_pca_weights_match_closed_form_oracle():
    rng = np.random.default_rng(46)
    for _ in range(10):
        a = rng.integers(0, 256, size=(8, 8), dtype=np.uint8)
        b = rng.integers(0, 256, size=(8, 8), dtype=np.uint8)
        wa, wb, degenerate = pca_weights(a, b)
        oa, ob = closed_form_pca_weights(a, b)
        assert not degenerate
        assert wa == pytest.approx(oa, abs=1e-9)
        assert wb == pytest.approx(ob, abs=1e-9)


def test_pca_symmetric_up_to_sign_normalization():
    rng = np.random.default_rng(47)
    a = rng.integers(0, 256, size=(10, 10), dtype=np.uint8)
    b = rng.integers(0, 256, size=(10, 10), dtype=np.uint8)
    fwd = PcaFuser().fuse(a, b)
    rev = PcaFuser().fuse(b, a)
    assert fwd.weights[0] == pytest.approx(rev.weights[1], abs=1e-12)
    assert np.allclose(fwd.fused_f, rev.fused_f, atol=1e-9)


def test_pca_degenerate_constant_pair():
    a = np.full((5, 5), 100, dtype=np.uint8)
    b = np.full((5, 5), 200, dtype=np.uint8)
    result = PcaFuser().fuse(a, b)
    assert result.degenerate
    assert result.weights == (0.5, 0.5)
    assert np.all(result.fused_u8 == 150)


def test_pca_degenerate_anticorrelated_pair():
    a = np.array([[0, 200], [0, 200]], dtype=np.uint8)
    b = np.array([[200, 0], [200, 0]], dtype=np.uint8)
    wa, wb, degenerate = pca_weights(a, b)
    assert degenerate
    assert (wa, wb) == (0.5, 0.5)


def test_make_fuser_names_and_params():
    fuser = make_fuser("moment", p=2, q=0, window=5, source="original")
    assert isinstance(fuser, MomentFuser)
    params = fuser.get_params()
    assert params["p"] == 2 and params["q"] == 0 and params["window"] == 5
    assert isinstance(make_fuser("average", p=2), AverageFuser)  # extras ignored
    with pytest.raises(ValueError, match="unknown fusion method"):
        make_fuser("dwt")


def test_estimator_param_round_trip():
    fuser = MomentFuser()
    fuser.set_params(window=5, magnitude=False)
    assert fuser.get_params()["window"] == 5
    assert fuser.get_params()["magnitude"] is False
    with pytest.raises(ValueError):
        fuser.set_params(bogus=1)
    assert "window=5" in repr(fuser)
