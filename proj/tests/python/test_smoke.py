import json
import math

import numpy as np
import pytest

import enose


def test_synthetic_pulse_shape():
    traces = enose.synth_single_pulse("EB", "C3")
    assert [t.sensor_id for t in traces] == [1, 2, 3]
    assert len(traces[0]) == 1200
    assert traces[0].times[0] == pytest.approx(-2.0)
    assert traces[0].samples.max() > traces[0].samples[0]


def test_filter_rejects_dc_and_passes_band():
    t = enose.SensorTrace(1, 100.0, 0.0, [3.0] * 2000)
    y = enose.bandpass_filter(t, 0.1, 1.0).samples
    assert np.max(np.abs(y[-100:])) < 1e-6
    mid = math.sqrt(0.1)
    assert enose.filter_gain(0.1, 1.0, 100.0, mid) == pytest.approx(1.0, abs=0.01)


def test_bout_slope_of_triangle():
    v = [0.0, 1.0, 2.0, 3.0, 2.0, 1.0]
    b = enose.locate_largest_bout(enose.SensorTrace(1, 10.0, 0.0, v), 0.0, 0.5)
    assert (b.min_index, b.max_index) == (0, 3)
    assert b.slope == pytest.approx(10.0)


def test_front_end_and_decoding():
    samples, labeled = [], []
    for level, pct in [("C1", 20.0), ("C3", 60.0), ("C5", 100.0)]:
        rec = enose.simulate_front_end(enose.synth_single_pulse("Eu", level))
        assert len(rec) == 1
        f = enose.extract_features(rec[0])
        assert f.complete()
        samples.append((pct, f))
        labeled.append(("Eu", f))
    curve = enose.fit_calibration("Eu", samples)
    assert curve.estimate(samples[1][1]).percent == pytest.approx(60.0)
    model = enose.fit_gas_model(labeled)
    assert model.classify(samples[0][1]).gas == "Eu"


def test_plume_replay_gives_two_records():
    traces = enose.synth_plume([-2, 0, 1, 5, 6], [0, 1, 0, 1, 0], "IA", duration_s=14.0)
    assert len(enose.simulate_front_end(traces, "plume_ungated")) == 2


def test_errors_surface_as_value_errors():
    with pytest.raises(ValueError):
        enose.bandpass_filter(enose.SensorTrace(1, 10.0, 0.0, [0.0] * 10), 0.1, 1.0)
    with pytest.raises(ValueError):
        enose.synth_single_pulse("EB", "C9")


def test_pipeline_writes_outputs(tmp_path):
    res = enose.run_pipeline(tmp_path, settings={"trials": "1"}, gases=["EB"], levels=[1, 5])
    assert (tmp_path / "manifest.json").exists()
    assert json.loads(res["manifest"])["seed"] == 1
    assert (tmp_path / "decode.csv").exists()
