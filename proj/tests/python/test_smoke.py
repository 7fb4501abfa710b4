import json

import numpy as np
import pytest

import dereverb as dr

FS = 8000.0


def noise(n, seed, scale=0.3):
    return scale * np.random.default_rng(seed).standard_normal(n)


def test_chirp_frozen_samples():
    c = dr.generate_chirp(20.0, 20000.0, 2.0, 3, 48000.0)
    assert c.shape == (3 * 96000,)
    assert c[0] == 0.0
    assert c[1] == pytest.approx(0.002631612589890137597, abs=1e-12)
    assert c[50000] == pytest.approx(-0.99946458747636564443, abs=1e-12)
    np.testing.assert_array_equal(c[:96000], c[96000:192000])


def test_convolve_matches_numpy():
    x = noise(300, 1)
    h = noise(40, 2)
    np.testing.assert_allclose(dr.convolve(x, h), np.convolve(x, h), atol=1e-12)


def test_estimate_ir_identity():
    x = noise(8000, 3)
    h = dr.estimate_ir(x, x, FS, 256)
    assert h[0] == pytest.approx(1.0, abs=1e-9)
    assert np.max(np.abs(h[1:])) < 1e-6


def test_t60_profile_shapes():
    s = noise(4000, 4) * np.exp(-np.arange(4000) / 400.0)
    prof = dr.t60_per_bin(s, FS, 128)
    assert prof["t60_paper_s"].shape == (128,)
    assert prof["censored"].shape == (128,)
    assert prof["n_frames"] > 0
    assert dr.t60_broadband(s, FS, 128) > 0.0


def test_identity_filter():
    h = np.zeros(64)
    h[0] = 1.0
    fb = dr.build_filterbank(h, FS)
    z = noise(2000, 5)
    out = dr.filter_signal(z, fb)
    np.testing.assert_allclose(out[: len(z)], z, atol=1e-9)


def test_metrics():
    z = noise(1000, 6)
    assert dr.lpa(z, 0.5 * z) == pytest.approx(-6.020599913279624, abs=1e-9)
    h = np.zeros(1000)
    h[0] = 1.0
    assert dr.d50(h, FS) == 100.0
    stats = dr.signal_stats(z, FS)
    assert stats["max_rms_db"] >= stats["avg_rms_db"] >= stats["min_rms_db"]


def test_simulate_direct_path():
    spec = dr.ChannelSpec.from_json(json.dumps({"direct_gain": 1.0, "length_s": 0.01}))
    dry = noise(500, 7)
    wet, ir = dr.simulate(dry, FS, spec)
    assert ir[0] == 1.0
    np.testing.assert_allclose(wet[: len(dry)], dry, atol=1e-12)


def test_exceptions():
    with pytest.raises(dr.ParameterError):
        dr.lpa(np.zeros(10), np.ones(10))
    with pytest.raises(dr.IoError):
        dr.read_wav("/nonexistent/file.wav")
    with pytest.raises(dr.IoError):
        dr.ChannelSpec.from_json("{not json")
    assert issubclass(dr.ParameterError, dr.Error)


def test_run_pipeline(tmp_path):
    x = dr.generate_chirp(20.0, 4000.0, 0.25, 3, FS)
    h = np.zeros(200)
    h[0] = 1.0
    h[120] = 0.4
    y = dr.convolve(x, h)
    z = dr.convolve(noise(2000, 8), h)
    for name, s in (("x", x), ("y", y), ("z", z)):
        dr.write_wav(tmp_path / f"{name}.wav", s, FS)
    cfg = json.dumps({"sample_rate": FS, "n_dft": 2000, "chirp": {"f1_hz": 4000.0,
                                                                  "duration_s": 0.25}})
    r = dr.run_pipeline(tmp_path / "x.wav", tmp_path / "y.wav", tmp_path / "z.wav",
                        tmp_path / "out", cfg)
    assert np.isfinite(r["lpa_db"])
    for f in ("ir.wav", "filtered.wav", "metrics.json", "config.json"):
        assert (tmp_path / "out" / f).exists()
