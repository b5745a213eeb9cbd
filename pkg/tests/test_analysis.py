from dataclasses import replace

import numpy as np
import pytest

from fsskit import (
    ExtractedCircuit,
    ResponseTable,
    Substrate,
    band_report,
    build_first_order,
    parametric_sweep,
    predict_resonances,
    smooth_response,
    sweep,
    sweep_at,
)
from fsskit.errors import (
    BandStructureError,
    EmptySweepError,
    InvalidParameterError,
    TruncatedBandError,
)


def _ref_stack(ref_circuit, ref_substrate):
    return build_first_order(ref_circuit, ref_substrate)


def test_sweep_endpoints(ref_circuit, ref_substrate):
    t = sweep(_ref_stack(ref_circuit, ref_substrate), 1e9, 8e9, 2)
    assert len(t) == 2
    assert t.frequency[0] == 1e9 and t.frequency[-1] == 8e9


def test_sweep_determinism(ref_circuit, ref_substrate):
    stack = _ref_stack(ref_circuit, ref_substrate)
    a = sweep(stack, 1e9, 8e9, 401)
    b = sweep(stack, 1e9, 8e9, 401)
    assert np.array_equal(a.s21, b.s21)
    assert np.array_equal(a.s11, b.s11)
    assert np.array_equal(a.frequency, b.frequency)


def test_sweep_log_spacing(ref_circuit, ref_substrate):
    t = sweep(_ref_stack(ref_circuit, ref_substrate), 1e9, 8e9, 31, spacing="log")
    ratios = t.frequency[1:] / t.frequency[:-1]
    assert np.allclose(ratios, ratios[0])


def test_sweep_validation(ref_circuit, ref_substrate):
    stack = _ref_stack(ref_circuit, ref_substrate)
    with pytest.raises(InvalidParameterError):
        sweep(stack, 8e9, 1e9, 100)
    with pytest.raises(InvalidParameterError):
        sweep(stack, 0.0, 1e9, 100)
    with pytest.raises(InvalidParameterError):
        sweep(stack, 1e9, 8e9, 1)
    with pytest.raises(InvalidParameterError):
        sweep(stack, 1e9, 8e9, 100, spacing="cubic")


def test_response_table_validation():
    with pytest.raises(InvalidParameterError):
        ResponseTable(np.array([1e9]), np.array([0j]), np.array([0j]))
    with pytest.raises(InvalidParameterError):
        ResponseTable(
            np.array([2e9, 1e9]), np.array([0j, 0j]), np.array([0j, 0j])
        )


def test_response_table_is_immutable():
    t = ResponseTable(
        np.array([1e9, 2e9]), np.array([0j, 0j]), np.array([1 + 0j, 1 + 0j])
    )
    with pytest.raises(ValueError):
        t.s21[0] = 0.5
    with pytest.raises(ValueError):
        t.frequency[0] = 5e8


def test_reference_stack_band_structure(ref_circuit, ref_substrate):
    # two passband maxima and one deep null on the standard display range
    t = sweep(_ref_stack(ref_circuit, ref_substrate), 1e9, 8e9, 1401)
    db = t.s21_db
    peaks = [
        i
        for i in range(1, len(t) - 1)
        if db[i] > db[i - 1] and db[i] >= db[i + 1] and db[i] > -3.0
    ]
    assert len(peaks) == 2
    between = db[peaks[0] : peaks[1]]
    assert between.min() < -30.0


def test_band_report_two_lorentzian_oracle():
    """Synthetic two-resonance trace; peak positions were located to sub-Hz
    by golden-section on the analytic magnitude."""
    fc1, w1, a1 = 2.4e9, 0.40e9, 1.0
    fc2, w2, a2 = 5.8e9, 1.20e9, 0.95
    f = np.linspace(1e9, 9e9, 1601)
    s21 = a1 / (1 + 2j * (f - fc1) / w1) + a2 / (1 + 2j * (f - fc2) / w2)
    rep = band_report(ResponseTable(f, np.zeros_like(s21), s21))
    assert rep.f_lower == pytest.approx(2371256569.5, rel=5e-4)
    assert rep.f_upper == pytest.approx(5834771813.6, rel=5e-4)


def test_band_report_null_position(ref_circuit, ref_substrate):
    t = sweep(_ref_stack(ref_circuit, ref_substrate), 1e9, 12e9, 2201)
    rep = band_report(t)
    f_zero = predict_resonances(ref_circuit).f_zero
    assert abs(rep.f_zero - f_zero) < 1e6


def test_band_report_lossless_collapsed_stack_has_zero_loss(ref_circuit):
    # with a vanishing line the sheet reaches full transmission at its poles
    circuit = replace(ref_circuit, L_parasitic=0.0)
    stack = build_first_order(circuit, Substrate(1e-9, 10.2))
    rep = band_report(sweep(stack, 1e9, 8e9, 2801))
    assert rep.il_lower_db < 0.01
    assert rep.il_upper_db < 0.01


def test_band_report_full_stack_loss_regression(ref_circuit, ref_substrate):
    # the finite line detunes the peaks from unity; pin the measured levels
    rep = band_report(sweep(_ref_stack(ref_circuit, ref_substrate), 1e9, 12e9, 2201))
    assert rep.il_lower_db == pytest.approx(0.0342, abs=0.02)
    assert rep.il_upper_db == pytest.approx(2.246, abs=0.02)


def test_band_report_requires_two_bands(ref_circuit, ref_substrate):
    t = sweep(_ref_stack(ref_circuit, ref_substrate), 1.5e9, 4.0e9, 801)
    with pytest.raises(BandStructureError) as info:
        band_report(t)
    assert info.value.band_count == 1


def test_band_report_truncated_band(ref_circuit, ref_substrate):
    # the upper band's high-side crossing lies beyond 8 GHz for this stack
    t = sweep(_ref_stack(ref_circuit, ref_substrate), 1e9, 8e9, 1401)
    with pytest.raises(TruncatedBandError) as info:
        band_report(t)
    assert info.value.side == "upper-high"


def test_band_report_grid_independence(ref_circuit, ref_substrate):
    stack = _ref_stack(ref_circuit, ref_substrate)
    a = band_report(sweep(stack, 1e9, 12e9, 1401))
    b = band_report(sweep(stack, 1e9, 12e9, 2801))
    for attr in ("f_lower", "f_zero", "f_upper"):
        assert getattr(a, attr) == pytest.approx(getattr(b, attr), rel=1e-3)


def test_refined_frequencies_inside_bracketing_interval(ref_circuit, ref_substrate):
    t = sweep(_ref_stack(ref_circuit, ref_substrate), 1e9, 12e9, 1401)
    rep = band_report(t)
    f = t.frequency
    for value in (rep.f_lower, rep.f_zero, rep.f_upper):
        i = np.searchsorted(f, value)
        assert 0 < i < len(f)
        assert f[i - 1] <= value <= f[i]


def test_parametric_sweep_error_propagation(nominal_geometry):
    # second value is geometrically impossible; the sweep must keep going
    points = parametric_sweep(
        nominal_geometry,
        "cross_slot",
        [0.15e-3, 9e-3, 0.3e-3],
        0.5e9,
        30e9,
        1401,
    )
    assert points[0].report is not None and points[0].error is None
    assert points[1].report is None and "invalid-geometry" in points[1].error
    assert points[2].report is not None


def test_parametric_sweep_validation(nominal_geometry):
    with pytest.raises(EmptySweepError):
        parametric_sweep(nominal_geometry, "cross_slot", [], 1e9, 10e9)
    with pytest.raises(InvalidParameterError):
        parametric_sweep(nominal_geometry, "bogus", [1e-3], 1e9, 10e9)


def test_parametric_sweep_band_separation_regression(nominal_geometry):
    """Pinned separations for the hat-length sweep; the spread over the
    sweep stays near 6.5 GHz."""
    pts = parametric_sweep(
        nominal_geometry,
        "hat_length",
        [1e-3, 2e-3, 3e-3, 4e-3],
        0.5e9,
        25e9,
        2401,
    )
    seps = [p.report.separation for p in pts]
    expected = [6793629488.8, 6378839740.7, 6559826417.4, 6768947497.3]
    assert seps == pytest.approx(expected, rel=1e-6)
    assert all(5.5e9 < s < 7.5e9 for s in seps)


def test_smooth_response_constant_trace():
    f = np.linspace(1e9, 2e9, 101)
    s = np.full(101, 0.5 + 0.1j)
    t = smooth_response(ResponseTable(f, s, s), 0.1e9)
    np.testing.assert_allclose(t.s21, s)


def test_smooth_response_reduces_ripple(rng):
    f = np.linspace(1e9, 2e9, 501)
    base = np.exp(-1j * f / 1e9)
    noisy = base + 0.05 * rng.standard_normal(501)
    t = ResponseTable(f, noisy, noisy)
    sm = smooth_response(t, 0.05e9)
    assert np.std(np.abs(sm.s21) - np.abs(base)) < 0.5 * np.std(
        np.abs(noisy) - np.abs(base)
    )
    with pytest.raises(InvalidParameterError):
        smooth_response(t, 0.0)
