"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.
"""

import math
import time

import numpy as np
import pytest

import acoufilt
from acoufilt import (
    ComplexCurve,
    DesignSpec,
    ElementKind,
    LadderDesign,
    build_ladder_response,
    coupling_k2,
    fit_mbvd,
    initial_guess,
    mbvd_from_targets,
    passband_metrics,
    resonator_admittance,
    series_resonance,
    synthesize_ladder,
)
from acoufilt.io_formats import (
    TouchstoneHeader,
    read_ladder_design,
    read_touchstone,
    write_ladder_design,
    write_touchstone,
)
from acoufilt.cli import main


def _report(n, ok, detail):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {status} criterion {n}: {detail}")
    assert ok, f"criterion {n}: {detail}"


def test_criterion_1_design_reproduction():
    spec = DesignSpec(fc_target=23.5e9, fbw_target=0.16, z0=50.0,
                      oob_min_db=12.0, k2=0.46, q=50.0, il_max_db=1.6)
    t0 = time.time()
    result = synthesize_ladder(spec)
    elapsed = time.time() - t0
    m = result.metrics
    ok = (result.feasible
          and abs(m.il_db - 1.47) <= 0.5
          and abs(m.fc - 23.5e9) / 23.5e9 <= 0.005
          and abs(m.fbw3 - 0.16) <= 0.015
          and m.oob_rejection_db >= 12.0
          and elapsed < 60.0)
    _report(1, ok, f"il={m.il_db:.3f} dB fc={m.fc/1e9:.3f} GHz "
                   f"fbw={100*m.fbw3:.2f}% oob={m.oob_rejection_db:.1f} dB "
                   f"t={elapsed:.1f} s")


def test_criterion_2_wide_fbw_plausibility():
    # Fitted-level losses: Q 40, k2 0.42, with a documented parasitic set of
    # rs = 0.5 ohm routing resistance and ls = 30 pH routing inductance.
    spec = DesignSpec(fc_target=23.5e9, fbw_target=0.17, z0=50.0,
                      oob_min_db=10.0, k2=0.42, q=40.0,
                      rs=0.5, ls=30e-12, il_max_db=3.0)
    result = synthesize_ladder(spec)
    m = result.metrics
    ok = m.fbw3 >= 0.15 and m.il_db <= 3.0
    _report(2, ok, f"il={m.il_db:.3f} dB fbw={100*m.fbw3:.2f}% "
                   f"(measured device: 2.38 dB / 18.2%)")


def test_criterion_3_bvd_identities():
    rng = np.random.default_rng(123)
    worst_fp = 0.0
    worst_rt = 0.0
    for _ in range(100):
        fs = rng.uniform(1e9, 60e9)
        k2 = rng.uniform(1e-3, 0.9)
        c0 = rng.uniform(5e-15, 5e-13)
        q = rng.uniform(5, 500)
        p = mbvd_from_targets(fs, k2, c0, q)
        fp_formula = series_resonance(p) * math.sqrt(1 + p.cm / p.c0)
        worst_fp = max(worst_fp, abs(acoufilt.antiresonance(p) - fp_formula) / fp_formula)
        worst_rt = max(
            worst_rt,
            abs(series_resonance(p) - fs) / fs,
            abs(coupling_k2(p) - k2) / k2,
        )
    ok = worst_fp <= 1e-9 and worst_rt <= 1e-12
    _report(3, ok, f"fp identity worst {worst_fp:.2e} (<=1e-9), "
                   f"round-trip worst {worst_rt:.2e} (<=1e-12)")


def test_criterion_4_fit_round_trip():
    truth = mbvd_from_targets(20e9, 0.42, 50e-15, 40.0, rs=0.5, ls=100e-12)
    grid = np.geomspace(5e9, 100e9, 2001)
    curve = resonator_admittance(truth, grid)
    names = ("rm", "lm", "cm", "c0", "rs", "ls")

    t0 = time.time()
    clean = fit_mbvd(curve, initial_guess(curve))
    t_clean = time.time() - t0
    clean_err = max(abs(getattr(clean.params, k) - getattr(truth, k)) / getattr(truth, k)
                    for k in names)

    rng = np.random.default_rng(42)
    noise = 1.0 + 0.01 * (rng.standard_normal(grid.size)
                          + 1j * rng.standard_normal(grid.size))
    noisy_curve = ComplexCurve(grid, curve.values * noise)
    t0 = time.time()
    noisy = fit_mbvd(noisy_curve, initial_guess(noisy_curve))
    t_noisy = time.time() - t0
    noisy_err = max(abs(getattr(noisy.params, k) - getattr(truth, k)) / getattr(truth, k)
                    for k in names)
    k2_err = abs(noisy.summary.k2 - coupling_k2(truth))

    ok = (clean.converged and clean_err <= 1e-3 and t_clean < 5.0
          and noisy.converged and noisy_err <= 0.02 and k2_err <= 0.01
          and t_noisy < 5.0)
    _report(4, ok, f"noiseless worst {clean_err:.2e} (<=1e-3) in {t_clean:.2f} s; "
                   f"noisy worst {noisy_err:.2e} (<=2e-2), k2 off {k2_err:.4f} "
                   f"(<=0.01) in {t_noisy:.2f} s")


def _random_design(rng, lossless=False):
    n = int(rng.integers(1, 6))
    elements = []
    for _ in range(n):
        kind = ElementKind.SERIES if rng.random() < 0.5 else ElementKind.SHUNT
        p = mbvd_from_targets(
            fs=rng.uniform(5e9, 35e9),
            k2=rng.uniform(0.05, 0.8),
            c0=rng.uniform(2e-14, 3e-13),
            q=math.inf if lossless else rng.uniform(10, 300),
            rs=0.0 if lossless else rng.uniform(0, 1.5),
            ls=rng.uniform(0, 8e-11),
        )
        elements.append((kind, p))
    return LadderDesign(elements=tuple(elements), z0=50.0)


def test_criterion_5_network_properties():
    grid = np.linspace(1e9, 50e9, 301)
    rng = np.random.default_rng(7)
    worst_recip = 0.0
    worst_sv = 0.0
    for _ in range(50):
        s = build_ladder_response(_random_design(rng), grid)
        worst_recip = max(worst_recip, float(np.max(np.abs(s.s[:, 0, 1] - s.s[:, 1, 0]))))
        worst_sv = max(worst_sv, float(np.linalg.svd(s.s, compute_uv=False).max()))
    worst_energy = 0.0
    for _ in range(10):
        s = build_ladder_response(_random_design(rng, lossless=True), grid)
        power = np.abs(s.s[:, 0, 0]) ** 2 + np.abs(s.s[:, 1, 0]) ** 2
        worst_energy = max(worst_energy, float(np.max(np.abs(power - 1.0))))
    ok = worst_recip <= 1e-12 and worst_sv <= 1 + 1e-6 and worst_energy <= 1e-9
    _report(5, ok, f"reciprocity {worst_recip:.2e} (<=1e-12), "
                   f"max singular value {worst_sv:.8f} (<=1+1e-6), "
                   f"lossless energy defect {worst_energy:.2e} (<=1e-9)")


def test_criterion_6_metrics_oracle():
    f0, q = 10e9, 10.0
    f = np.linspace(0.3 * f0, 3.0 * f0, 16001)
    x = f / f0 - f0 / f
    m = passband_metrics(ComplexCurve(f, 1.0 / (1.0 + 1j * q * x)))
    bw3_err = abs(m.bw3_hz - f0 / q) / (f0 / q)
    sf_err = abs(m.shape_factor20 - math.sqrt(99.0)) / math.sqrt(99.0)
    ok = bw3_err <= 1e-4 and sf_err <= 5e-4
    _report(6, ok, f"bw3 err {bw3_err:.2e} (<=1e-4), "
                   f"shape factor err {sf_err:.2e} (<=5e-4)")


def test_criterion_7_format_round_trips():
    rng = np.random.default_rng(19)
    worst_ts = 0.0
    for i in range(20):
        n = int(rng.integers(3, 30))
        f = np.cumsum(rng.uniform(1e8, 1e9, n)) + 1e9
        s = 0.5 * (rng.standard_normal((n, 2, 2)) + 1j * rng.standard_normal((n, 2, 2)))
        block = acoufilt.SParameterBlock(f, s, z0=50.0)
        fmt = ("RI", "MA", "DB")[i % 3]
        back = read_touchstone(
            write_touchstone(block, TouchstoneHeader("GHz", "S", fmt, 50.0))
        ).to_block()
        worst_ts = max(worst_ts, float(np.max(np.abs(back.s - block.s))))
        # Cross-format consistency on the same data.
        for other_fmt in ("RI", "MA", "DB"):
            other = read_touchstone(
                write_touchstone(block, TouchstoneHeader("Hz", "S", other_fmt, 50.0))
            ).to_block()
            worst_ts = max(worst_ts, float(np.max(np.abs(other.s - back.s))))

    worst_kv = 0.0
    for _ in range(20):
        design = acoufilt.shunt_series_shunt(
            mbvd_from_targets(rng.uniform(5e9, 30e9), rng.uniform(0.1, 0.8),
                              rng.uniform(2e-14, 3e-13), rng.uniform(10, 300),
                              rs=rng.uniform(0, 1), ls=rng.uniform(0, 1e-10)),
            mbvd_from_targets(rng.uniform(5e9, 30e9), rng.uniform(0.1, 0.8),
                              rng.uniform(2e-14, 3e-13), rng.uniform(10, 300)),
            z0=50.0,
        )
        back = read_ladder_design(write_ladder_design(design))
        for (_, p0), (_, p1) in zip(design.elements, back.elements):
            for k in ("rm", "lm", "cm", "c0", "rs", "ls", "r0"):
                v0, v1 = getattr(p0, k), getattr(p1, k)
                if v0 != 0:
                    worst_kv = max(worst_kv, abs(v1 - v0) / abs(v0))
                else:
                    worst_kv = max(worst_kv, abs(v1))
    ok = worst_ts <= 1e-12 and worst_kv <= 1e-12
    _report(7, ok, f"touchstone worst {worst_ts:.2e}, design-file worst "
                   f"{worst_kv:.2e} (both <=1e-12)")


def test_criterion_8_cli_determinism(tmp_path):
    fc = 23.5e9
    fs_sh = fc * math.sqrt(1 - 0.46 / (math.pi**2 / 8))
    c0_sh = 1 / (2 * math.pi * fc * 50)
    design = acoufilt.shunt_series_shunt(
        mbvd_from_targets(fs_sh, 0.46, c0_sh, 50),
        mbvd_from_targets(fc, 0.46, c0_sh / 2, 50),
        z0=50.0,
    )
    design_kv = tmp_path / "design.kv"
    design_kv.write_text(write_ladder_design(design))

    truth = mbvd_from_targets(20e9, 0.42, 50e-15, 40, rs=0.3, ls=30e-12)
    res_kv = tmp_path / "res.kv"
    res_kv.write_text("[filter]\nz0 = 50\n\n"
                      + acoufilt.io_formats.write_resonator(truth, "series"))

    spec = DesignSpec(10e9, 0.10, 50.0, 10.0, 0.42, 200.0, 0.0, 0.0, 1.0)
    spec_kv = tmp_path / "spec.kv"
    spec_kv.write_text(acoufilt.io_formats.write_design_spec(spec))

    def run_all(tag):
        d = tmp_path / tag
        d.mkdir()
        cmds = [
            ["simulate", "--design", str(design_kv), "--grid", "1e9:4e10:801",
             "--out", str(d / "f.s2p"), "--metrics", str(d / "m.csv")],
            ["simulate", "--design", str(res_kv), "--grid", "5e9:1e11:1001",
             "--out", str(d / "r.s1p")],
            ["fit", "--input", str(d / "r.s1p"), "--out", str(d / "fit.kv"),
             "--report", str(d / "fit.csv")],
            ["synthesize", "--spec", str(spec_kv), "--grid", "5e9:1.8e10:801",
             "--out", str(d / "syn.kv"), "--touchstone", str(d / "syn.s2p"),
             "--metrics", str(d / "syn.csv")],
            ["metrics", "--input", str(d / "f.s2p"), "--out", str(d / "m2.csv"),
             "--svg", str(d / "p.svg")],
            ["sweep", "--design", str(design_kv), "--param", "shunt.c0",
             "--range", "5e-14:1.5e-13:3", "--grid", "1e9:4e10:801",
             "--out", str(d / "sw.csv")],
        ]
        for cmd in cmds:
            assert main(cmd) == 0, f"{tag}: {cmd[0]} failed"
        return {p.name: p.read_bytes() for p in sorted(d.iterdir())}

    first = run_all("run1")
    second = run_all("run2")
    ok = first == second
    _report(8, ok, f"{len(first)} output files byte-identical across repeated runs")
