"""Two-port ladder algebra: ABCD cascades and S-parameter conversion."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .curves import ComplexCurve, validate_grid
from .errors import DomainError, GridAlignmentError, SingularConversionError
from .mbvd import MbvdParams, resonator_admittance


class ElementKind(enum.Enum):
    SERIES = "series"
    SHUNT = "shunt"


@dataclass(frozen=True)
class AbcdBlock:
    """Per-frequency 2x2 chain (ABCD) matrices on a shared grid."""

    freq_hz: np.ndarray
    mats: np.ndarray  # shape (n, 2, 2), complex

    def __post_init__(self):
        f = validate_grid(self.freq_hz)
        m = np.asarray(self.mats, dtype=complex)
        if m.shape != (f.size, 2, 2):
            raise DomainError("ABCD matrices must have shape (n, 2, 2)")
        if not np.all(np.isfinite(m)):
            raise DomainError("ABCD matrices contain non-finite entries")
        object.__setattr__(self, "freq_hz", f)
        object.__setattr__(self, "mats", m)


@dataclass(frozen=True)
class SParameterBlock:
    """Per-frequency 2x2 scattering matrices with a real reference impedance."""

    freq_hz: np.ndarray
    s: np.ndarray  # shape (n, 2, 2), complex
    z0: float = 50.0

    def __post_init__(self):
        f = validate_grid(self.freq_hz)
        s = np.asarray(self.s, dtype=complex)
        if s.shape != (f.size, 2, 2):
            raise DomainError("S matrices must have shape (n, 2, 2)")
        if not self.z0 > 0:
            raise DomainError("reference impedance must be positive")
        object.__setattr__(self, "freq_hz", f)
        object.__setattr__(self, "s", s)

    def s21(self) -> ComplexCurve:
        return ComplexCurve(self.freq_hz, self.s[:, 1, 0], label="S21")

    def s11(self) -> ComplexCurve:
        return ComplexCurve(self.freq_hz, self.s[:, 0, 0], label="S11")


@dataclass(frozen=True)
class LadderDesign:
    """Ordered series/shunt elements, each referencing an MBVD record."""

    elements: tuple[tuple[ElementKind, MbvdParams], ...]
    z0: float = 50.0

    def __post_init__(self):
        if len(self.elements) == 0:
            raise DomainError("a ladder needs at least one element")
        for kind, p in self.elements:
            if not isinstance(kind, ElementKind) or not isinstance(p, MbvdParams):
                raise DomainError("elements must be (ElementKind, MbvdParams) pairs")
        if not self.z0 > 0:
            raise DomainError("port impedance must be positive")
        object.__setattr__(self, "elements", tuple(self.elements))


def shunt_series_shunt(shunt: MbvdParams, series: MbvdParams, z0: float = 50.0) -> LadderDesign:
    """The canonical three-resonator topology with identical shunts."""
    return LadderDesign(
        elements=(
            (ElementKind.SHUNT, shunt),
            (ElementKind.SERIES, series),
            (ElementKind.SHUNT, shunt),
        ),
        z0=z0,
    )


def element_abcd(kind: ElementKind, p: MbvdParams, freq_hz) -> AbcdBlock:
    """ABCD block of one resonator used as a series or shunt element."""
    y = resonator_admittance(p, freq_hz)
    n = len(y)
    mats = np.zeros((n, 2, 2), dtype=complex)
    mats[:, 0, 0] = 1.0
    mats[:, 1, 1] = 1.0
    if kind is ElementKind.SERIES:
        mats[:, 0, 1] = 1.0 / y.values
    elif kind is ElementKind.SHUNT:
        mats[:, 1, 0] = y.values
    else:
        raise DomainError(f"unknown element kind {kind!r}")
    return AbcdBlock(y.freq_hz, mats)


def identity_block(freq_hz) -> AbcdBlock:
    f = validate_grid(np.asarray(freq_hz, dtype=float))
    mats = np.broadcast_to(np.eye(2, dtype=complex), (f.size, 2, 2)).copy()
    return AbcdBlock(f, mats)


def cascade(blocks: Sequence[AbcdBlock], grid=None) -> AbcdBlock:
    """Left-to-right per-frequency matrix product of two-port blocks.

    All blocks must share one exact grid; no resampling is ever performed.
    An empty sequence needs an explicit grid and yields the identity.
    """
    blocks = list(blocks)
    if not blocks:
        if grid is None:
            raise DomainError("cascade of zero blocks requires an explicit grid")
        return identity_block(grid)
    ref = blocks[0].freq_hz
    for b in blocks[1:]:
        if b.freq_hz.shape != ref.shape or not np.array_equal(b.freq_hz, ref):
            raise GridAlignmentError("cascaded blocks are on different frequency grids")
    mats = blocks[0].mats
    for b in blocks[1:]:
        mats = mats @ b.mats
    return AbcdBlock(ref, mats)


def abcd_to_s(block: AbcdBlock, z0: float) -> SParameterBlock:
    """Convert chain matrices to scattering parameters at reference z0."""
    if not z0 > 0:
        raise DomainError("reference impedance must be positive")
    a = block.mats[:, 0, 0]
    b = block.mats[:, 0, 1]
    c = block.mats[:, 1, 0]
    d = block.mats[:, 1, 1]
    delta = a + b / z0 + c * z0 + d
    bad = np.flatnonzero(delta == 0)
    if bad.size:
        raise SingularConversionError(float(block.freq_hz[bad[0]]))
    s = np.empty_like(block.mats)
    s[:, 0, 0] = (a + b / z0 - c * z0 - d) / delta
    s[:, 0, 1] = 2.0 * (a * d - b * c) / delta
    s[:, 1, 0] = 2.0 / delta
    s[:, 1, 1] = (-a + b / z0 - c * z0 + d) / delta
    return SParameterBlock(block.freq_hz, s, z0=z0)


def build_ladder_response(design: LadderDesign, freq_hz) -> SParameterBlock:
    """Evaluate a ladder design to two-port S-parameters on a grid."""
    blocks = [element_abcd(kind, p, freq_hz) for kind, p in design.elements]
    return abcd_to_s(cascade(blocks), design.z0)


def one_port_s11(p: MbvdParams, freq_hz, z0: float = 50.0) -> ComplexCurve:
    """Reflection coefficient of a resonator measured as a one-port."""
    if not z0 > 0:
        raise DomainError("reference impedance must be positive")
    y = resonator_admittance(p, freq_hz)
    z = 1.0 / y.values
    return ComplexCurve(y.freq_hz, (z - z0) / (z + z0), label="S11")


def admittance_from_s11(s11: ComplexCurve, z0: float = 50.0) -> ComplexCurve:
    """Invert a one-port reflection measurement back to input admittance."""
    if not z0 > 0:
        raise DomainError("reference impedance must be positive")
    y = (1.0 - s11.values) / (1.0 + s11.values) / z0
    return ComplexCurve(s11.freq_hz, y, label="Y")
