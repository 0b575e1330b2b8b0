import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from conftest import distorted, textured_image
from lfiqa.imageio import LumaImage
from lfiqa.metrics import (GMSD, MS_SSIM, SSIM, DimensionError, Direction, MetricKind,
                           MetricScore, ScaleFallbackWarning, ScoreRangeError, ScoreSet,
                           SsimParams, downsample_factor, gms_map, gmsd, ingest_scores, ms_ssim,
                           ms_ssim_scales, normalize_direction, ssim)

planes = arrays(np.float64, st.tuples(st.integers(12, 30), st.integers(12, 30)),
                elements=st.floats(0, 255, allow_nan=False))


def _pair_like(x, seed):
    rng = np.random.default_rng(seed)
    return np.clip(x + rng.normal(0, 15, x.shape), 0, 255)


class TestSsim:
    def test_identity(self):
        x = textured_image((48, 40))
        score, _ = ssim(x, x)
        assert score.value == 1.0

    def test_constant_images_closed_form(self):
        a = np.full((32, 32), 100.0)
        b = np.full((32, 32), 110.0)
        c1 = (0.01 * 255) ** 2
        expected = (2 * 100 * 110 + c1) / (100 ** 2 + 110 ** 2 + c1)
        assert expected == pytest.approx(0.9954764440915066, abs=1e-15)
        score, wmap = ssim(a, b)
        assert score.value == pytest.approx(expected, abs=1e-12)
        assert wmap.shape == (22, 22)

    def test_pooling_consistency(self):
        x = textured_image((60, 50))
        score, wmap = ssim(x, distorted(x, 8))
        assert abs(score.value - float(np.mean(wmap))) <= 1e-12

    def test_accepts_luma_images(self):
        x = textured_image((20, 20))
        y = distorted(x, 5)
        assert ssim(LumaImage(x), LumaImage(y))[0].value == ssim(x, y)[0].value

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            ssim(np.zeros((20, 20)), np.zeros((20, 21)))

    def test_smaller_than_window(self):
        with pytest.raises(DimensionError):
            ssim(np.zeros((10, 40)), np.zeros((10, 40)))

    @pytest.mark.parametrize("shape,f", [((64, 64), 1), ((383, 512), 1), ((384, 512), 2),
                                         ((512, 512), 2), ((640, 900), 3)])
    def test_downsample_factor(self, shape, f):
        assert downsample_factor(*shape) == f

    def test_auto_downsample_pools_large_images(self):
        x = textured_image((512, 520), seed=4)
        y = distorted(x, 6)
        pooled = ssim(x, y)[0].value
        px, py = [a[:512, :520].reshape(256, 2, 260, 2).mean(axis=(1, 3)) for a in (x, y)]
        direct = ssim(px, py, SsimParams(auto_downsample=False))[0].value
        assert pooled == pytest.approx(direct, abs=1e-12)
        assert ssim(x, y, SsimParams(auto_downsample=False))[0].value != pooled

    def test_matches_oracle(self):
        x = textured_image((40, 36), seed=2)
        y = distorted(x, 12)
        score, wmap = ssim(x, y)
        ref_score, ref_map = oracles.ssim(x, y)
        assert score.value == pytest.approx(ref_score, abs=1e-9)
        np.testing.assert_allclose(wmap, ref_map, rtol=0, atol=1e-9)

    def test_params_validation(self):
        with pytest.raises(ValueError):
            SsimParams(window_size=10)
        with pytest.raises(ValueError):
            SsimParams(sigma=0)

    @settings(max_examples=40, deadline=None)
    @given(planes, st.integers(0, 2 ** 16))
    def test_properties(self, x, seed):
        y = _pair_like(x, seed)
        s_xy, wmap = ssim(x, y)
        s_yx, _ = ssim(y, x)
        assert s_xy.value == s_yx.value
        assert np.all(np.abs(wmap) <= 1.0 + 1e-12)
        assert abs(ssim(x, x)[0].value - 1.0) <= 1e-12
        assert ssim(x, y)[0].value == s_xy.value


class TestMsSsim:
    def test_identity(self):
        x = textured_image((192, 200))
        assert ms_ssim(x, x).value == 1.0

    def test_noisy_natural_like_image_in_unit_interval(self):
        x = textured_image((512, 512), seed=7)
        value = ms_ssim(x, distorted(x, 2.0)).value
        assert 0.0 < value < 1.0

    @pytest.mark.parametrize("shape,n", [((176, 176), 5), ((175, 400), 4), ((64, 64), 3),
                                         ((11, 11), 1), ((10, 50), 0)])
    def test_scale_count(self, shape, n):
        assert ms_ssim_scales(*shape) == n

    def test_fallback_warns_and_renormalises(self):
        x = textured_image((64, 64))
        y = distorted(x, 10)
        with pytest.warns(ScaleFallbackWarning, match="3 scale"):
            value = ms_ssim(x, y).value
        assert value == pytest.approx(oracles.ms_ssim(x, y), abs=1e-9)

    def test_five_scales_no_warning(self):
        x = textured_image((180, 180))
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            ms_ssim(x, distorted(x, 3))

    def test_too_small(self):
        with pytest.raises(DimensionError):
            ms_ssim(np.zeros((10, 10)), np.zeros((10, 10)))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            ms_ssim(np.zeros((200, 200)), np.zeros((200, 199)))

    @pytest.mark.slow
    def test_checkerboard_translate_matches_oracle(self):
        yy, xx = np.mgrid[0:353, 0:353]
        board = np.where(((yy // 16) + (xx // 16)) % 2 == 0, 200.0, 40.0)
        ref, shifted = board[:352, :352], board[1:, 1:]
        value = ms_ssim(ref, shifted).value
        assert 0.0 < value < 1.0
        assert value == pytest.approx(oracles.ms_ssim(ref, shifted), abs=1e-9)

    @settings(max_examples=15, deadline=None)
    @given(planes, st.integers(0, 2 ** 16))
    def test_symmetry_and_bounds(self, x, seed):
        y = _pair_like(x, seed)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ScaleFallbackWarning)
            a, b = ms_ssim(x, y).value, ms_ssim(y, x).value
            assert ms_ssim(x, x).value == pytest.approx(1.0, abs=1e-12)
        assert a == b
        assert 0.0 <= a <= 1.0


class TestGmsd:
    def test_identity(self):
        x = textured_image((40, 40))
        assert gmsd(x, x).value == 0.0
        assert gmsd(x, x).kind is GMSD

    def test_constant_images(self):
        assert gmsd(np.full((16, 16), 30.0), np.full((16, 16), 200.0)).value == 0.0

    def test_ramp_with_impulses_matches_oracle(self):
        rng = np.random.default_rng(99)
        ramp = np.tile(np.linspace(0, 255, 64), (64, 1))
        noisy = ramp.copy()
        hits = rng.random(ramp.shape) < 0.01
        noisy[hits] = rng.choice([0.0, 255.0], size=hits.sum())
        value = gmsd(ramp, noisy).value
        assert value > 0
        assert value == pytest.approx(oracles.gmsd(ramp, noisy), abs=1e-9)

    def test_too_small(self):
        with pytest.raises(DimensionError):
            gmsd(np.zeros((5, 20)), np.zeros((5, 20)))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            gmsd(np.zeros((20, 20)), np.zeros((21, 20)))

    @settings(max_examples=40, deadline=None)
    @given(planes, st.integers(0, 2 ** 16))
    def test_properties(self, x, seed):
        y = _pair_like(x, seed)
        assert gmsd(x, y).value == gmsd(y, x).value
        assert 0.0 <= gmsd(x, y).value <= 0.5
        gms = gms_map(x, y)
        assert np.all((gms > 0) & (gms <= 1.0 + 1e-15))
        assert gmsd(x, x).value <= 1e-12


def test_native_kinds():
    assert SSIM.direction is Direction.SIMILARITY
    assert MS_SSIM.direction is Direction.SIMILARITY
    assert GMSD.direction is Direction.DISTORTION
    with pytest.raises(ValueError):
        MetricKind("x", Direction.SIMILARITY, (1.0, 0.0))


def test_repeated_evaluation_is_bit_identical():
    x = textured_image((180, 190), seed=5)
    y = distorted(x, 4)
    assert ssim(x, y)[0].value == ssim(x, y)[0].value
    assert ms_ssim(x, y).value == ms_ssim(x, y).value
    assert gmsd(x, y).value == gmsd(x, y).value


class TestIngest:
    def _write(self, tmp_path, text):
        p = tmp_path / "scores.csv"
        p.write_text(text)
        return p

    def test_basic_row(self, tmp_path):
        p = self._write(tmp_path, "distorted_id,score\nclipA,93.1\n")
        s = ingest_scores(p, "vmaf", "similarity", (0, 100))
        assert s.entries == {"clipA": 93.1}
        assert s.direction is Direction.SIMILARITY

    def test_out_of_range_reports_row(self, tmp_path):
        p = self._write(tmp_path, "distorted_id,score\nclipA,93.1\nclipB,120\n")
        with pytest.raises(ScoreRangeError) as err:
            ingest_scores(p, "vmaf", "similarity", (0, 100))
        assert err.value.row == 3

    def test_three_row_round_trip(self, tmp_path):
        p = self._write(tmp_path, "distorted_id,score\na,0.5\nb,0.25\nc,1\n")
        s = ingest_scores(p, "vsi", "similarity-higher-better", (0, 1))
        assert {k: s.entries[k] for k in ("a", "b", "c")} == {"a": 0.5, "b": 0.25, "c": 1.0}
        assert len(s) == 3

    @pytest.mark.parametrize("text", ["id,score\na,1\n", "distorted_id,score\na,1,2\n",
                                      "distorted_id,score\na,x\n", "distorted_id,score\na,1\na,2\n"])
    def test_malformed(self, tmp_path, text):
        with pytest.raises(ScoreRangeError):
            ingest_scores(self._write(tmp_path, text), "m", "similarity", (0, 10))

    def test_native_label_rejected(self, tmp_path):
        p = self._write(tmp_path, "distorted_id,score\na,1\n")
        with pytest.raises(ValueError):
            ingest_scores(p, "ssim", "similarity", (0, 1))

    def test_score_set_is_read_only(self, tmp_path):
        s = ingest_scores(self._write(tmp_path, "distorted_id,score\na,1\n"), "m",
                          "distortion", (0, 5))
        with pytest.raises(TypeError):
            s.entries["b"] = 2.0

    def test_score_set_range_check(self):
        kind = MetricKind.ingested("m", "similarity", (0, 1))
        with pytest.raises(ScoreRangeError):
            ScoreSet(kind, {"a": 2.0})


class TestNormalize:
    def test_gmsd_zero_is_one(self):
        assert normalize_direction(MetricScore(GMSD, 0.0)).value == 1.0

    def test_gmsd_flips(self):
        assert normalize_direction(MetricScore(GMSD, 0.2)).value == pytest.approx(0.8)

    def test_vmaf_scale(self):
        kind = MetricKind.ingested("vmaf", "similarity", (0, 100))
        assert normalize_direction(MetricScore(kind, 100.0)).value == 1.0
        assert normalize_direction(MetricScore(kind, 93.1)).value == pytest.approx(0.931)

    def test_negative_ssim_clamps(self):
        assert normalize_direction(MetricScore(SSIM, -0.05)).value == 0.0

    def test_ssim_passes_through(self):
        assert normalize_direction(MetricScore(SSIM, 0.75)).value == 0.75

    def test_distortion_with_wider_range(self):
        kind = MetricKind.ingested("mad", "distortion", (0, 200))
        assert normalize_direction(MetricScore(kind, 50.0)).value == pytest.approx(0.75)
