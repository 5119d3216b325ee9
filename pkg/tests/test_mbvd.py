import dataclasses
import math

import numpy as np
import pytest
from scipy.optimize import brentq

from acoufilt import (
    MbvdParams,
    antiresonance,
    coupling_k2,
    mbvd_from_targets,
    perceived_resonance,
    q_at_antiresonance,
    resonator_admittance,
    series_resonance,
    summarize,
)
from acoufilt.errors import DomainError, InfeasibleCouplingError, SearchError
from acoufilt.mbvd import K2_MAX

# Resonator derived from (fs 20 GHz, k2 0.42, c0 50 fF, Q 40); the closed
# forms give cm 25.81 fF, lm 2.4537 nH, rm 7.709 ohm.
REF = mbvd_from_targets(20e9, 0.42, 50e-15, 40.0)


def test_admittance_at_fs_is_motional_conductance_plus_static_susceptance():
    # At fs the motional branch is purely resistive: Y = 1/rm + j*2*pi*f*c0.
    fs = series_resonance(REF)
    y = resonator_admittance(REF, [fs]).values[0]
    expected = 1.0 / REF.rm + 1j * 2.0 * math.pi * fs * REF.c0
    assert y == pytest.approx(expected, rel=1e-12)


def test_admittance_dc_blocking():
    fs = series_resonance(REF)
    y = resonator_admittance(REF, [fs / 1000.0, fs])
    assert abs(y.values[0]) < abs(y.values[1])


def test_series_inductance_lowers_admittance_peak():
    loaded = dataclasses.replace(REF, ls=100e-12)
    grid = np.geomspace(1e9, 30e9, 20000)
    mags = np.abs(resonator_admittance(loaded, grid).values)
    assert grid[np.argmax(mags)] < series_resonance(REF)


def test_admittance_rejects_bad_input():
    with pytest.raises(DomainError):
        resonator_admittance(REF, [0.0, 1e9])
    with pytest.raises(DomainError):
        resonator_admittance(REF, [2e9, 1e9])
    with pytest.raises(DomainError):
        MbvdParams(rm=math.nan, lm=1e-9, cm=1e-14, c0=1e-13)


def test_series_resonance_examples():
    p = MbvdParams(rm=0, lm=2.4545e-9, cm=25.80e-15, c0=50e-15)
    assert series_resonance(p) == pytest.approx(20.00e9, rel=5e-4)
    # Oracle: fs is the zero of the motional reactance.
    def motional_reactance(f):
        w = 2 * math.pi * f
        return w * p.lm - 1.0 / (w * p.cm)
    fs_oracle = brentq(motional_reactance, 1e9, 100e9, xtol=1e-3)
    assert series_resonance(p) == pytest.approx(fs_oracle, rel=1e-10)

    quadrupled = dataclasses.replace(p, lm=4 * p.lm)
    assert series_resonance(quadrupled) == pytest.approx(series_resonance(p) / 2, rel=1e-12)

    unit = MbvdParams(rm=0, lm=1.0, cm=1.0, c0=1.0)
    assert series_resonance(unit) == pytest.approx(1.0 / (2 * math.pi), rel=1e-14)


def test_antiresonance_examples():
    p = mbvd_from_targets(20.00e9, 0.42, 50e-15, math.inf)
    assert p.cm / p.c0 == pytest.approx(0.5160, rel=2e-3)
    assert antiresonance(p) == pytest.approx(24.63e9, rel=2e-4)

    tiny = MbvdParams(rm=0, lm=1e-9, cm=1e-20, c0=1e-13)
    assert antiresonance(tiny) == pytest.approx(series_resonance(tiny), rel=1e-6)

    p2 = MbvdParams(rm=0, lm=1e-9, cm=3e-13, c0=1e-13)
    assert antiresonance(p2) == pytest.approx(2 * series_resonance(p2), rel=1e-12)


def test_antiresonance_matches_numerical_admittance_zero():
    # Lossless, parasitic-free: Y is purely imaginary and crosses zero at fp.
    p = MbvdParams(rm=0, lm=2.45e-9, cm=25.8e-15, c0=50e-15)
    fs = series_resonance(p)

    def im_y(f):
        return resonator_admittance(p, [f]).values[0].imag

    fp_oracle = brentq(im_y, fs * 1.0001, fs * 3.0, xtol=1e-3)
    assert antiresonance(p) == pytest.approx(fp_oracle, rel=1e-9)


def test_coupling_examples():
    assert coupling_k2(REF) == pytest.approx(0.420, abs=5e-4)
    tiny = MbvdParams(rm=0, lm=1e-9, cm=1e-20, c0=1e-13)
    assert coupling_k2(tiny) == pytest.approx(0.0, abs=1e-6)
    # A representative measured-device coupling target is representable.
    p = mbvd_from_targets(23.5e9, 0.46, 50e-15, 50.0)
    assert coupling_k2(p) == pytest.approx(0.46, rel=1e-12)


def test_mbvd_from_targets_example_values():
    assert REF.cm == pytest.approx(25.80e-15, rel=5e-4)
    assert REF.lm == pytest.approx(2.4545e-9, rel=5e-4)
    assert REF.rm == pytest.approx(7.712, rel=5e-4)


def test_mbvd_from_targets_round_trip_identity():
    rng = np.random.default_rng(7)
    for _ in range(100):
        fs = rng.uniform(1e9, 60e9)
        k2 = rng.uniform(1e-3, 0.9)
        c0 = rng.uniform(5e-15, 5e-13)
        q = rng.uniform(5, 500)
        p = mbvd_from_targets(fs, k2, c0, q)
        assert series_resonance(p) == pytest.approx(fs, rel=1e-12)
        assert coupling_k2(p) == pytest.approx(k2, rel=1e-12)


def test_mbvd_from_targets_infinite_q_is_lossless():
    p = mbvd_from_targets(20e9, 0.42, 50e-15, math.inf)
    assert p.rm == 0.0


def test_mbvd_from_targets_rejects_excess_coupling():
    with pytest.raises(InfeasibleCouplingError):
        mbvd_from_targets(20e9, K2_MAX, 50e-15, 40.0)
    with pytest.raises(InfeasibleCouplingError):
        mbvd_from_targets(20e9, 1.3, 50e-15, 40.0)


def test_perceived_resonance_unloaded_lossless_equals_fs():
    p = mbvd_from_targets(20e9, 0.42, 50e-15, math.inf)
    assert perceived_resonance(p) == pytest.approx(20e9, rel=1e-6)


def test_perceived_resonance_unloaded_lossy_is_near_fs():
    # Motional loss nudges the |Y| peak slightly off the mechanical fs.
    assert perceived_resonance(REF) == pytest.approx(20e9, rel=1e-2)


def test_perceived_resonance_below_fs_with_routing_inductance():
    loaded = dataclasses.replace(REF, ls=100e-12)
    f = perceived_resonance(loaded)
    assert f < series_resonance(REF)
    # Dense-grid scan oracle.
    grid = np.geomspace(2e9, 21e9, 50000)
    mags = np.abs(resonator_admittance(loaded, grid).values)
    assert f == pytest.approx(grid[np.argmax(mags)], rel=1e-3)


def test_perceived_resonance_monotone_in_ls():
    values = [perceived_resonance(dataclasses.replace(REF, ls=ls))
              for ls in (0.0, 50e-12, 100e-12, 200e-12)]
    assert all(b <= a * (1 + 1e-9) for a, b in zip(values, values[1:]))


def test_perceived_resonance_no_interior_maximum():
    with pytest.raises(SearchError):
        perceived_resonance(REF, (1e6, 1e7))


def test_q_lossless_sentinel():
    p = mbvd_from_targets(20e9, 0.42, 50e-15, math.inf)
    assert q_at_antiresonance(p) == math.inf


def test_q_matches_dense_grid_phase_derivative_oracle():
    # Independent oracle: phase derivative of Z by np.gradient on a dense
    # grid, read at the grid |Z| maximum.
    fp = antiresonance(REF)
    grid = np.linspace(fp * 0.9, fp * 1.1, 400001)
    z = 1.0 / resonator_admittance(REF, grid).values
    phi = np.unwrap(np.angle(z))
    q_grid = 0.5 * grid * np.abs(np.gradient(phi, grid))
    q_oracle = q_grid[np.argmax(np.abs(z))]
    assert q_at_antiresonance(REF) == pytest.approx(q_oracle, rel=1e-3)
    # Frozen bracket from the oracle above.
    assert 48.0 < q_at_antiresonance(REF) < 50.0


def test_q_monotone_in_rm():
    values = [q_at_antiresonance(dataclasses.replace(REF, rm=rm))
              for rm in (2.0, 5.0, 10.0, 20.0)]
    assert all(b <= a for a, b in zip(values, values[1:]))


def test_real_admittance_nonnegative():
    rng = np.random.default_rng(11)
    grid = np.geomspace(1e8, 1e11, 400)
    for _ in range(50):
        p = MbvdParams(
            rm=rng.uniform(0, 20),
            lm=rng.uniform(1e-10, 1e-8),
            cm=rng.uniform(1e-15, 1e-13),
            c0=rng.uniform(1e-14, 1e-12),
            rs=rng.uniform(0, 2),
            ls=rng.uniform(0, 2e-10),
            r0=rng.uniform(0, 1),
        )
        y = resonator_admittance(p, grid).values
        assert np.all(y.real >= -1e-18)


def test_fp_identity_against_extremum_with_losses_removed():
    rng = np.random.default_rng(3)
    for _ in range(20):
        p = MbvdParams(rm=0, lm=rng.uniform(1e-10, 1e-8),
                       cm=rng.uniform(1e-15, 1e-13), c0=rng.uniform(1e-14, 1e-12))
        fs = series_resonance(p)

        def im_y(f):
            return resonator_admittance(p, [f]).values[0].imag

        fp_oracle = brentq(im_y, fs * (1 + 1e-9), fs * 50, xtol=1e-6)
        assert antiresonance(p) == pytest.approx(fp_oracle, rel=1e-9)


def test_summarize_consistency():
    s = summarize(REF)
    assert 0 < s.fs < s.fp
    assert 0 < s.k2 < 1
    assert s.q_antires > 0
    assert s.f_perceived <= s.fs * (1 + 1e-2)
