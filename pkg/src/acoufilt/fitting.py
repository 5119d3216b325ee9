"""Extraction of MBVD parameters from a one-port admittance sweep.

A structure-based initial guess (resonance peak, anti-resonance dip, and the
EM self-resonance above it) seeds a damped Gauss-Newton search over
log-parameters, so positivity can never be violated.  Residuals are the
concatenated real and imaginary parts of the admittance, by default weighted
by 1/|Y| so the deep anti-resonance counts as much as the resonance peak.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from .curves import ComplexCurve
from .errors import DomainError, StructureError
from .mbvd import MbvdParams, ResonatorSummary, resonator_admittance, summarize

# Positive floor standing in for "exactly zero" in log-space.
_LOG_FLOOR = 1e-30
_JAC_REL_STEP = 1e-6
_RS_SEED_OHM = 0.5
_LS_SEED_H = 1e-13  # used when no EM self-resonance is visible in the sweep


@dataclass(frozen=True)
class FitOptions:
    max_iterations: int = 200
    relative_tolerance: float = 1e-10
    initial_damping: float = 1e-3
    weight_mode: str = "inverse-magnitude"  # or "uniform"
    fit_r0: bool = False

    def __post_init__(self):
        if self.max_iterations < 1:
            raise DomainError("max_iterations must be >= 1")
        if self.relative_tolerance <= 0 or self.initial_damping <= 0:
            raise DomainError("tolerances must be positive")
        if self.weight_mode not in ("inverse-magnitude", "uniform"):
            raise DomainError(f"unknown weight mode {self.weight_mode!r}")


@dataclass(frozen=True)
class FitResult:
    params: MbvdParams
    residual_norm: float
    iterations: int
    converged: bool
    summary: ResonatorSummary


def _peak_indices(mag: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    span = float(mag.max() - mag.min())
    prom = 0.01 * span
    peaks, _ = find_peaks(mag, prominence=prom)
    valleys, _ = find_peaks(-mag, prominence=prom)
    return peaks, valleys


def initial_guess(curve: ComplexCurve) -> MbvdParams:
    """Heuristic MBVD seed from the visible resonance structure of |Y|.

    Needs at least one |Y| maximum followed by one |Y| minimum; a further
    maximum above the anti-resonance, when present, seeds the routing
    inductance from the EM self-resonance against c0.
    """
    f = curve.freq_hz
    mag = curve.magnitude
    if f.size < 8:
        raise StructureError("too few samples to identify resonance structure")

    peaks, valleys = _peak_indices(mag)
    if peaks.size == 0:
        raise StructureError("no admittance maximum found (no resonance in band)")
    i_fs = int(peaks[0])
    later_valleys = valleys[valleys > i_fs]
    if later_valleys.size == 0:
        raise StructureError("no admittance minimum above the resonance peak")
    i_fp = int(later_valleys[0])

    fs = float(f[i_fs])
    fp = float(f[i_fp])

    # Well below resonance the one-port looks like c0 + cm in parallel; split
    # that total using the resonance spacing, since cm/c0 = (fp/fs)^2 - 1.
    n_low = max(f.size // 10, 2)
    c_total = float(np.median(curve.values[:n_low].imag / (2.0 * math.pi * f[:n_low])))
    if c_total <= 0:
        raise StructureError("low-frequency tail is not capacitive")

    ratio = (fp / fs) ** 2 - 1.0
    if ratio <= 0:
        raise StructureError("anti-resonance not above resonance")
    c0 = c_total / (1.0 + ratio)
    cm = c0 * ratio
    lm = 1.0 / ((2.0 * math.pi * fs) ** 2 * cm)
    rm = 1.0 / float(mag[i_fs])

    em_peaks = peaks[peaks > i_fp]
    if em_peaks.size:
        f_em = float(f[int(em_peaks[0])])
        ls = 1.0 / ((2.0 * math.pi * f_em) ** 2 * c0)
    else:
        # EM self-resonance above the sweep: its frequency exceeds the top of
        # the grid, which upper-bounds ls against c0.  Seed at half the bound.
        ls = max(0.5 / ((2.0 * math.pi * float(f[-1])) ** 2 * c0), _LS_SEED_H)
    return MbvdParams(rm=rm, lm=lm, cm=cm, c0=c0, rs=_RS_SEED_OHM, ls=ls)


def _pack(p: MbvdParams, fit_r0: bool) -> np.ndarray:
    vals = [p.rm, p.lm, p.cm, p.c0, p.rs, p.ls]
    if fit_r0:
        vals.append(p.r0)
    return np.log(np.maximum(np.asarray(vals, dtype=float), _LOG_FLOOR))


def _unpack(x: np.ndarray, fit_r0: bool) -> MbvdParams:
    v = np.exp(x)
    r0 = float(v[6]) if fit_r0 else 0.0
    return MbvdParams(rm=float(v[0]), lm=float(v[1]), cm=float(v[2]),
                      c0=float(v[3]), rs=float(v[4]), ls=float(v[5]), r0=r0)


# Log-parameter bounds keeping exp() finite; generous for any physical value.
_LOG_BOUND = 300.0


def _residual(x: np.ndarray, curve: ComplexCurve, w: np.ndarray, fit_r0: bool) -> np.ndarray:
    y = resonator_admittance(_unpack(x, fit_r0), curve.freq_hz).values
    d = y - curve.values
    return np.concatenate([d.real * w, d.imag * w])


def _try_cost(x, curve, w, fit_r0):
    """Residual and cost of a candidate, or (None, inf) if unevaluable."""
    if np.any(np.abs(x) > _LOG_BOUND):
        return None, math.inf
    r = _residual(x, curve, w, fit_r0)
    cost = float(r @ r)
    if not math.isfinite(cost):
        return None, math.inf
    return r, cost


def _jacobian(x, curve, w, fit_r0):
    n = x.size
    cols = []
    for j in range(n):
        h = _JAC_REL_STEP * max(abs(x[j]), 1.0)
        xp = x.copy()
        xm = x.copy()
        xp[j] += h
        xm[j] -= h
        cols.append((_residual(xp, curve, w, fit_r0) - _residual(xm, curve, w, fit_r0)) / (2 * h))
    return np.stack(cols, axis=1)


def fit_mbvd(curve: ComplexCurve, init: MbvdParams, opts: FitOptions = FitOptions()) -> FitResult:
    """Damped least-squares fit of the MBVD model to a complex admittance sweep.

    Accepted steps divide the damping by 10, rejected steps multiply it by
    10; the residual never increases across accepted iterations.  Returns a
    non-converged result (never raises) when damping saturates.
    """
    n_free = 7 if opts.fit_r0 else 6
    if len(curve) < n_free + 1:
        raise DomainError(f"need at least {n_free + 1} samples to fit {n_free} parameters")
    if opts.weight_mode == "inverse-magnitude":
        w = 1.0 / np.maximum(curve.magnitude, 1e-300)
    else:
        w = np.ones(len(curve))

    x = _pack(init, opts.fit_r0)
    r = _residual(x, curve, w, opts.fit_r0)
    cost = float(r @ r)
    # Residuals at the weighted-data noise floor cannot be polished further.
    floor = (1e-13 * float(np.linalg.norm(w * np.abs(curve.values)))) ** 2
    lam = opts.initial_damping
    converged = cost <= floor
    iterations = 0

    while not converged and iterations < opts.max_iterations:
        iterations += 1
        jac = _jacobian(x, curve, w, opts.fit_r0)
        jtj = jac.T @ jac
        jtr = jac.T @ r
        accepted = False
        any_solved = False
        while lam < 1e14:
            damped = jtj + lam * np.diag(np.maximum(np.diag(jtj), 1e-300))
            try:
                step = np.linalg.solve(damped, -jtr)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            any_solved = True
            x_new = x + step
            r_new, cost_new = _try_cost(x_new, curve, w, opts.fit_r0)
            if cost_new < cost:
                rel_drop = (cost - cost_new) / max(cost, 1e-300)
                x, r, cost = x_new, r_new, cost_new
                lam = max(lam / 10.0, 1e-15)
                accepted = True
                if rel_drop < opts.relative_tolerance or cost <= floor:
                    converged = True
                break
            lam *= 10.0
        if not accepted:
            # A stall with solvable normal equations means zero residual
            # change, which is below any tolerance; saturated damping with
            # singular equations is genuine non-convergence.
            converged = any_solved
            break

    params = _unpack(x, opts.fit_r0)
    return FitResult(
        params=params,
        residual_norm=math.sqrt(cost),
        iterations=iterations,
        converged=converged,
        summary=summarize(params),
    )
