"""Closed-form reference patterns for the two-slit and focused-spot systems.

These are the analytic laws the numerical pipeline must reproduce: fringe
profiles, somb/sinc focal-spot laws, the off-axis disk diffraction integral,
and the stage-by-stage fields of the pinhole-readout reconstruction trains
in their ideal point-source/delta-slit limit.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import j0, j1

from .errors import ConfigurationError, DomainError, QuadratureError, ShapeError


@dataclass(frozen=True)
class YoungParams:
    """Two-slit geometry: slit half-separation x1, lens focal length f."""

    x1: float
    f: float
    wavelength: float

    def __post_init__(self):
        for name in ("x1", "f", "wavelength"):
            if not getattr(self, name) > 0:
                raise ConfigurationError(f"{name} must be > 0, got {getattr(self, name)}")


@dataclass(frozen=True)
class FocusParams:
    """Focusing geometry: aperture diameter D, lens focal length f."""

    D: float
    f: float
    wavelength: float

    def __post_init__(self):
        for name in ("D", "f", "wavelength"):
            if not getattr(self, name) > 0:
                raise ConfigurationError(f"{name} must be > 0, got {getattr(self, name)}")


def _scalar_or_array(x, val):
    arr = np.asarray(val)
    return float(arr) if np.ndim(x) == 0 and arr.dtype.kind == "f" else arr


def somb(x):
    """Sombrero function J1(x)/x, with the removable value somb(0) = 1/2."""
    x = np.asarray(x, dtype=float)
    out = np.full(x.shape, 0.5)
    nz = x != 0
    out[nz] = j1(x[nz]) / x[nz]
    return float(out) if out.ndim == 0 else out


def sinc(x):
    """sin(x)/x with sinc(0) = 1 (unnormalized convention)."""
    val = np.sinc(np.asarray(x, dtype=float) / np.pi)
    return float(val) if np.ndim(x) == 0 else val


def young_two_photon(x0, p: YoungParams):
    """Pair-detection fringe (1 + cos(8 pi x1 x0/(f wl)))/2; period f*wl/(4*x1)."""
    val = 0.5 * (1 + np.cos(8 * np.pi * p.x1 * np.asarray(x0) / (p.f * p.wavelength)))
    return _scalar_or_array(x0, val)


def young_classical(x0, p: YoungParams):
    """One-photon fringe (1 + cos(4 pi x1 x0/(f wl)))/2; twice the pair period."""
    val = 0.5 * (1 + np.cos(4 * np.pi * p.x1 * np.asarray(x0) / (p.f * p.wavelength)))
    return _scalar_or_array(x0, val)


def _check_kind(kind: str) -> None:
    if kind not in ("classical", "two_photon"):
        raise ConfigurationError(f"kind must be 'classical' or 'two_photon', got {kind!r}")


def spot_lateral(r0, p: FocusParams, kind: str):
    """Peak-normalized focal-plane spot profile.

    somb^2 of 2 pi D|r0|/(f wl) for a photon pair, or of half that argument
    for a classical beam through the same aperture; the pair spot is half
    as wide.
    """
    _check_kind(kind)
    scale = 2 if kind == "two_photon" else 1
    u = scale * np.pi * p.D * np.abs(np.asarray(r0)) / (p.f * p.wavelength)
    val = (2 * somb(u)) ** 2
    return _scalar_or_array(r0, val)


def spot_axial(z0, p: FocusParams, kind: str):
    """On-axis response (f+z0)^4 sinc^2(pi D^2 z0 / (q f^2 wl)), q=4 or 8.

    Not normalized and not symmetric: the (f+z0)^4 prefactor tilts the
    curve. q=4 for a photon pair, q=8 for a classical beam. Valid only for
    |z0| < f (the displaced plane must stay on the detection side).
    """
    _check_kind(kind)
    z0 = np.asarray(z0, dtype=float)
    if np.any(np.abs(z0) >= p.f):
        raise DomainError(f"axial offset must satisfy |z0| < f = {p.f}")
    q = 4 if kind == "two_photon" else 8
    arg = np.pi * p.D**2 * z0 / (q * p.f**2 * p.wavelength)
    val = (p.f + z0) ** 4 * sinc(arg) ** 2
    return _scalar_or_array(z0, val)


# ---------------------------------------------------------------- disk integral

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def uniform_disk_transform(b: float, c: float, R: float, *, rtol: float = 1e-9,
                           atol: float = 1e-9, max_panels: int = 65536) -> complex:
    """Dimensionless chirped transform of a uniform disk of radius R.

    Evaluates J = (2/R^2) * integral_0^R rho J0(b rho) exp(-i c rho^2) d rho,
    the azimuthally reduced form of the disk integral
    (1/(pi R^2)) * integral_{|r|<=R} exp(-i c |r|^2 - i b x) dr.
    J(0, 0) = 1; J(b, 0) = 2 J1(bR)/(bR); J(0, c) with g = c R^2 is
    exp(-i g/2) sinc(g/2).

    Composite 8-point Gauss-Legendre panels, doubled from 256 until two
    refinements agree to atol + rtol*|J|.

    Raises
    ------
    QuadratureError
        If the doubling sequence hits ``max_panels`` without converging.
    """
    beta, gamma = b * R, c * R * R
    prev = None
    panels = 256
    while panels <= max_panels:
        half = 0.5 / panels
        centers = (2 * np.arange(panels) + 1) * half
        t = centers[:, None] + half * _GL_NODES[None, :]
        val = 2 * half * np.sum(_GL_WEIGHTS * t * j0(beta * t)
                                * np.exp(-1j * gamma * t * t))
        if prev is not None and abs(val - prev) <= atol + rtol * abs(val):
            return complex(val)
        prev = val
        panels *= 2
    raise QuadratureError(
        f"disk transform did not converge below {atol:.1e}+{rtol:.1e}*|J| "
        f"within {max_panels} panels (b={b:.3g}, c={c:.3g}, R={R:.3g})")


def spot_offaxis_two_photon(r0: float, z0: float, p: FocusParams, *,
                            rtol: float = 1e-9, atol: float = 1e-9) -> float:
    """Pair-detection probability at lateral r0, axial z0 near the focus.

    (f+z0)^4 |J|^2 with the disk transform J taken at b = 4 pi|r0|/(f wl),
    c = 2 pi z0/(f^2 wl), R = D/2. Scaled so the on-axis focal value is f^4:
    r0 = 0 recovers spot_axial and z0 = 0 recovers f^4 * spot_lateral, both
    for the pair case.
    """
    if abs(z0) >= p.f:
        raise DomainError(f"axial offset must satisfy |z0| < f = {p.f}")
    b = 4 * np.pi * abs(r0) / (p.f * p.wavelength)
    c = 2 * np.pi * z0 / (p.f**2 * p.wavelength)
    J = uniform_disk_transform(b, c, p.D / 2, rtol=rtol, atol=atol)
    return float((p.f + z0) ** 4 * abs(J) ** 2)


# ---------------------------------------------------------------- width estimate

def fwhm(x, y) -> float:
    """Full width at half maximum of a sampled curve.

    The half-max level is half the global peak; each crossing adjacent to
    the peak is located by linear interpolation between the bracketing
    samples.

    Raises
    ------
    ShapeError
        If the curve is too short, not on increasing coordinates, or has no
        half-max crossing on either side of the peak (e.g. monotone data).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape or x.size < 3:
        raise ShapeError("need matching 1-D arrays with at least 3 samples")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ShapeError("curve contains non-finite values")
    if np.any(np.diff(x) <= 0):
        raise ShapeError("coordinates must be strictly increasing")
    i = int(np.argmax(y))
    half = y[i] / 2

    def cross(j, k):
        # y[j] >= half > y[k]; interpolate between them.
        return x[j] + (y[j] - half) * (x[k] - x[j]) / (y[j] - y[k])

    left = None
    for j in range(i, 0, -1):
        if y[j - 1] < half:
            left = cross(j, j - 1)
            break
    right = None
    for j in range(i, x.size - 1):
        if y[j + 1] < half:
            right = cross(j, j + 1)
            break
    if left is None or right is None:
        raise ShapeError("no half-max crossing on both sides of the peak")
    return float(right - left)


# ---------------------------------------------------------------- staged fields

@dataclass(frozen=True)
class DeltaComb:
    """Ideal point sources: a field proportional to sum_i w_i delta(x - loc_i).

    ``locations`` holds floats (1-D planes) or (x, y) pairs (2-D planes).
    """

    locations: tuple
    weights: tuple

    def __post_init__(self):
        if len(self.locations) != len(self.weights):
            raise ConfigurationError("locations and weights must have equal length")


StageField = Union[complex, DeltaComb]


def _check_stage(stage: int, L1: float, L2: float) -> None:
    if stage not in range(6):
        raise ConfigurationError(f"stage must be 0..5, got {stage}")
    if not (L1 > 0 and L2 > 0):
        raise ConfigurationError(f"path lengths must be > 0, got L1={L1}, L2={L2}")


def young_stage_field(stage: int, x: float, x0: float, p: YoungParams,
                      L1: float, L2: float) -> StageField:
    """Closed-form field after each stage of the pinhole-readout slit train.

    Point source at x0, delta slits; constants are dropped. Stages:
    0 source, 1 slit plane (after the first lens), 2 behind the slits,
    3 crystal plane (after the L1 path and second lens, a demagnifier by
    -f/L1), 4 second harmonic, 5 far field over L2. Stages 0 and 2-4 are
    point combs and return a DeltaComb; stages 1 and 5 return the complex
    field at ``x``. The squared modulus of stage 5 at x=0 is the half-period
    fringe in x0.
    """
    _check_stage(stage, L1, L2)
    wl = p.wavelength
    theta = 2 * np.pi * x0 * p.x1 / (p.f * wl)
    x_img = p.x1 * p.f / L1
    if stage == 0:
        return DeltaComb((x0,), (1 + 0j,))
    if stage == 1:
        return complex(np.exp(-2j * np.pi * x0 * x / (p.f * wl)))
    if stage == 2:
        return DeltaComb((p.x1, -p.x1), (np.exp(-1j * theta), np.exp(1j * theta)))
    if stage == 3:
        return DeltaComb((-x_img, x_img), (np.exp(-1j * theta), np.exp(1j * theta)))
    if stage == 4:
        # SHG squares each weight; the second harmonic is at wl/2.
        return DeltaComb((-x_img, x_img), (np.exp(-2j * theta), np.exp(2j * theta)))
    spatial = 4 * np.pi * p.f * p.x1 * x / (L1 * L2 * wl)
    return complex(2 * np.cos(2 * theta - spatial))


def focus_stage_field(stage: int, r, r0, z0: float, p: FocusParams,
                      L1: float, L2: float, *, rtol: float = 1e-9,
                      atol: float = 1e-9) -> StageField:
    """Closed-form field after each stage of the pinhole-readout focus train.

    Point source at lateral r0 = (x, y) and axial offset z0, hard aperture D.
    Stages: 0 source, 1 back focal plane of the first lens, 2 behind the
    aperture, 3 crystal plane (demagnified by -f/L1), 4 second harmonic,
    5 far field over L2 at position r. Amplitude factors follow the
    power-preserving element conventions (relative factor 1 + z0/f); the
    squared modulus of stage 5 at r=0 matches spot_offaxis_two_photon up to
    one global constant.
    """
    _check_stage(stage, L1, L2)
    if abs(z0) >= p.f:
        raise DomainError(f"axial offset must satisfy |z0| < f = {p.f}")
    wl = p.wavelength
    f = p.f
    factor = 1 + z0 / f
    if stage == 0:
        return DeltaComb((tuple(r0),), (1 + 0j,))
    x0, y0 = r0
    if stage in (1, 2):
        x, y = r
        rsq = x * x + y * y
        val = factor * np.exp(-1j * np.pi * z0 * rsq / (f**2 * wl)) \
            * np.exp(-2j * np.pi * (x0 * x + y0 * y) / (f * wl))
        if stage == 2 and rsq > (p.D / 2) ** 2:
            return 0j
        return complex(val)
    mag = L1 / f                      # 1/|M| for the -f/L1 demagnifier
    R_crystal = f * p.D / (2 * L1)
    chirp = np.pi * z0 * L1**2 / (f**4 * wl)
    lin = 2 * np.pi * L1 / (f**2 * wl)
    if stage in (3, 4):
        x, y = r
        rsq = x * x + y * y
        if rsq > R_crystal**2:
            return 0j
        val = mag * factor * np.exp(-1j * chirp * rsq) \
            * np.exp(1j * lin * (x0 * x + y0 * y))
        return complex(val if stage == 3 else val * val)
    x, y = r
    ux = 4 * np.pi * x / (L2 * wl) - 2 * lin * x0
    uy = 4 * np.pi * y / (L2 * wl) - 2 * lin * y0
    J = uniform_disk_transform(float(np.hypot(ux, uy)), 2 * chirp, R_crystal,
                               rtol=rtol, atol=atol)
    return complex((mag * factor) ** 2 * np.pi * R_crystal**2 * J)
