"""Event-based electronic-nose signal chain (C++ core)."""

from ._enose import (  # noqa: F401
    Bout,
    CalibrationCurve,
    ConcentrationEstimate,
    EnoseError,
    EventRecord,
    FeatureVector,
    GasDecision,
    GasModel,
    ParseError,
    Pulse,
    SensorEvent,
    SensorTrace,
    __version__,
    bandpass_filter,
    extract_features,
    filter_gain,
    fit_calibration,
    fit_gas_model,
    locate_largest_bout,
    run_pipeline,
    simulate_front_end,
    synth_plume,
    synth_single_pulse,
)
