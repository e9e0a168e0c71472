"""Optical elements acting on sampled fields, and trains composing them.

All spectral stages (lens in 2-f configuration, long free-space path) are
far-field transforms with the kernel ``exp(-i 2 pi x y / (dist wl))``; no
general Fresnel propagator is provided. Elements are small frozen dataclasses
so trains are immutable, comparable, and JSON-serializable.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import (
    ConfigurationError,
    DomainError,
    SamplingError,
    UnsupportedElementError,
)
from .grid import Grid1D, Grid2D, SampledField, unitary_fourier


# ---------------------------------------------------------------- element types

@dataclass(frozen=True)
class FourierLens:
    """Ideal lens of focal length ``f`` used in 2-f configuration."""

    f: float

    def __post_init__(self):
        if not self.f > 0:
            raise ConfigurationError(f"focal length must be > 0, got {self.f}")


@dataclass(frozen=True)
class FreeSpaceFourier:
    """Far-field (Fraunhofer) free-space path of length ``L``."""

    L: float

    def __post_init__(self):
        if not self.L > 0:
            raise ConfigurationError(f"propagation distance must be > 0, got {self.L}")


@dataclass(frozen=True)
class TwoFWithOffset:
    """2-f stage whose far plane is displaced ``z`` from the focal plane.

    The kernel is the focal-plane transform with an extra quadratic (chirp)
    phase and a relative amplitude factor ``1 + z/f``; ``z`` may be negative.
    With ``transpose`` the adjoint-direction kernel is applied instead: the
    chirp sits on the output plane, which models a point emitter on the
    displaced plane propagating back into the back focal plane.
    """

    f: float
    z: float
    transpose: bool = False

    def __post_init__(self):
        if not self.f > 0:
            raise ConfigurationError(f"focal length must be > 0, got {self.f}")


@dataclass(frozen=True)
class DoubleSlit:
    """Binary mask with openings centered at +-x1.

    ``slit_width=None`` means one grid cell at apply time: each slit passes
    exactly the sample nearest its center (the idealized delta slit).
    """

    x1: float
    slit_width: Optional[float] = None

    def __post_init__(self):
        if not self.x1 > 0:
            raise ConfigurationError(f"slit offset must be > 0, got {self.x1}")
        if self.slit_width is not None:
            if not self.slit_width > 0:
                raise ConfigurationError(
                    f"slit width must be > 0 or None, got {self.slit_width}")
            if self.x1 <= self.slit_width / 2:
                raise ConfigurationError(
                    f"slits overlap: x1={self.x1} <= slit_width/2={self.slit_width / 2}")


@dataclass(frozen=True)
class CircularAperture:
    """Hard circular stop of diameter ``D``: transmits |r| <= D/2."""

    D: float

    def __post_init__(self):
        if not self.D > 0:
            raise ConfigurationError(f"aperture diameter must be > 0, got {self.D}")


@dataclass(frozen=True)
class Magnifier:
    """Imaging stage of magnification ``M`` (negative M inverts the image)."""

    M: float

    def __post_init__(self):
        if self.M == 0:
            raise ConfigurationError("magnification must be nonzero")


@dataclass(frozen=True)
class SHG:
    """Thin-crystal second-harmonic stage: squares the field pointwise."""


@dataclass(frozen=True)
class PinholeSample:
    """Terminal intensity pickup at the origin; radius 0 reads one sample."""

    radius: float = 0.0

    def __post_init__(self):
        if self.radius < 0:
            raise ConfigurationError(f"pinhole radius must be >= 0, got {self.radius}")


OpticalElement = Union[FourierLens, FreeSpaceFourier, TwoFWithOffset, DoubleSlit,
                       CircularAperture, Magnifier, SHG, PinholeSample]


@dataclass(frozen=True)
class OpticalTrain:
    """Ordered sequence of elements applied left to right.

    At most one SHG stage; a PinholeSample, if present, must be last (it
    collapses the field to a real intensity).
    """

    elements: tuple

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        n_shg = sum(isinstance(e, SHG) for e in self.elements)
        if n_shg > 1:
            raise ConfigurationError(f"train may contain at most one SHG stage, got {n_shg}")
        for i, e in enumerate(self.elements):
            if isinstance(e, PinholeSample) and i != len(self.elements) - 1:
                raise ConfigurationError("PinholeSample must be the last train element")


# ---------------------------------------------------------------- propagation

def _relabeled(spec: SampledField, scale: float, wavelength: float) -> SampledField:
    """Rescale a spectral-domain field's grid by ``scale`` meters per rad/m."""
    if isinstance(spec.grid, Grid1D):
        g = Grid1D(spec.grid.n, spec.grid.dx * scale, 0.0)
        return SampledField(g, wavelength, spec.amp / np.sqrt(scale))
    g = Grid2D(spec.grid.nx, spec.grid.ny, spec.grid.dx * scale,
               spec.grid.dy * scale, (0.0, 0.0))
    return SampledField(g, wavelength, spec.amp / scale)


def _fourier_relay(field: SampledField, dist: float) -> SampledField:
    """Far-field transform to the plane at ``dist``: x_out = k * dist * wl / (2 pi).

    Output sample x picks up the input's spatial frequency 2 pi x/(dist wl);
    the grid rescale keeps power exact, so dx_out = dist*wl/(n*dx_in).
    """
    return _relabeled(unitary_fourier(field), dist * field.wavelength / (2 * np.pi),
                      field.wavelength)


def apply_fourier_lens(field: SampledField, f: float) -> SampledField:
    """Transform from front to back focal plane of an ideal lens.

    Parameters
    ----------
    field : SampledField
        Input field (1-D or 2-D), any grid center.
    f : float
        Focal length in meters.

    Returns
    -------
    SampledField
        Field on the zero-centered conjugate grid with spacing
        ``f*wl/(n*dx_in)`` per axis. Power is preserved exactly.
    """
    if not f > 0:
        raise ConfigurationError(f"focal length must be > 0, got {f}")
    return _fourier_relay(field, f)


def free_space_fourier(field: SampledField, L: float) -> SampledField:
    """Far-field free-space propagation over ``L``; same map as a lens of f=L.

    Valid in the Fraunhofer regime only (long L); this package never needs
    the general Fresnel form.
    """
    if not L > 0:
        raise ConfigurationError(f"propagation distance must be > 0, got {L}")
    return _fourier_relay(field, L)


def _coord_sq(grid) -> np.ndarray:
    if isinstance(grid, Grid1D):
        return grid.coords ** 2
    return grid.radius_sq()


def _check_chirp_sampling(grid, z: float, f: float, wl: float) -> None:
    # Largest per-sample increment of pi*z*r^2/(f^2 wl); beyond pi the chirp
    # aliases and the z-sweep silently folds back.
    axes = [(np.abs(grid.coords).max(), grid.dx)] if isinstance(grid, Grid1D) else \
           [(np.abs(grid.xs).max(), grid.dx), (np.abs(grid.ys).max(), grid.dy)]
    for rmax, step in axes:
        inc = 2 * np.pi * abs(z) * rmax * step / (f ** 2 * wl)
        if inc > np.pi:
            raise SamplingError(
                f"chirp phase step {inc:.3f} rad/sample exceeds pi; "
                f"refine the grid or reduce |z|={abs(z):.3g}")


def two_f_with_offset(field: SampledField, f: float, z: float,
                      transpose: bool = False) -> SampledField:
    """2-f transform onto a plane displaced ``z`` from the back focal plane.

    Chirp phase ``exp(-i pi z r^2/(f^2 wl))`` and relative amplitude
    ``1 + z/f`` applied on the input plane, then the focal-plane kernel.
    At z=0 this reduces to :func:`apply_fourier_lens` bit for bit. With
    ``transpose=True`` the adjoint-direction kernel (chirp on the output
    plane) is applied instead.

    Raises
    ------
    SamplingError
        If the chirp phase advances by more than pi per sample anywhere
        on the chirped plane (aliasing).
    """
    if not f > 0:
        raise ConfigurationError(f"focal length must be > 0, got {f}")
    wl = field.wavelength
    factor = 1 + z / f
    if not transpose:
        _check_chirp_sampling(field.grid, z, f, wl)
        chirp = np.exp(-1j * np.pi * z * _coord_sq(field.grid) / (f ** 2 * wl))
        out = _fourier_relay(SampledField(field.grid, wl, field.amp * chirp), f)
        return SampledField(out.grid, wl, out.amp * factor)
    out = _fourier_relay(field, f)
    _check_chirp_sampling(out.grid, z, f, wl)
    chirp = np.exp(-1j * np.pi * z * _coord_sq(out.grid) / (f ** 2 * wl))
    return SampledField(out.grid, wl, out.amp * factor * chirp)


# ---------------------------------------------------------------- masks

def apply_double_slit(field: SampledField, x1: float,
                      slit_width: Optional[float] = None) -> SampledField:
    """Binary double-slit mask at +-x1 on a 1-D field.

    ``slit_width=None`` passes exactly one sample per slit (delta slits).
    """
    if not isinstance(field.grid, Grid1D):
        raise UnsupportedElementError("double slit acts on 1-D fields only")
    DoubleSlit(x1, slit_width)  # parameter validation
    g = field.grid
    mask = np.zeros(g.n)
    if slit_width is None:
        for pos in (x1, -x1):
            if not g.contains(pos):
                raise DomainError(f"slit at {pos} lies outside the grid")
            mask[g.index_of(pos)] = 1.0
    else:
        x = g.coords
        mask[np.abs(x - x1) <= slit_width / 2] = 1.0
        mask[np.abs(x + x1) <= slit_width / 2] = 1.0
    return SampledField(g, field.wavelength, field.amp * mask)


def apply_circular_aperture(field: SampledField, D: float) -> SampledField:
    """Hard circular stop on a 2-D field: zero outside |r| <= D/2."""
    if not isinstance(field.grid, Grid2D):
        raise UnsupportedElementError("circular aperture acts on 2-D fields only")
    if not D > 0:
        raise ConfigurationError(f"aperture diameter must be > 0, got {D}")
    mask = field.grid.radius_sq() <= (D / 2) ** 2
    return SampledField(field.grid, field.wavelength, field.amp * mask)


# ---------------------------------------------------------------- remaps

def _flip_index(n: int) -> np.ndarray:
    # Exact mirror about the center sample n//2; for even n the unpaired
    # edge sample wraps onto itself, matching a double Fourier transform.
    return (2 * (n // 2) - np.arange(n)) % n


def magnify(field: SampledField, M: float) -> SampledField:
    """Pure coordinate remap E'(x) = E(x/M) |M|^(-d/2); power preserved.

    Implemented as grid metadata: spacings scale by |M|, the center moves to
    M*center, and negative M reverses sample order about the center sample.
    """
    if M == 0:
        raise ConfigurationError("magnification must be nonzero")
    a = abs(M)
    amp = field.amp
    if isinstance(field.grid, Grid1D):
        g = field.grid
        if M < 0:
            amp = amp[_flip_index(g.n)]
        return SampledField(Grid1D(g.n, a * g.dx, M * g.center),
                            field.wavelength, amp / np.sqrt(a))
    g = field.grid
    if M < 0:
        amp = amp[np.ix_(_flip_index(g.ny), _flip_index(g.nx))]
    grid = Grid2D(g.nx, g.ny, a * g.dx, a * g.dy,
                  (M * g.center[0], M * g.center[1]))
    return SampledField(grid, field.wavelength, amp / a)


def shg(field: SampledField) -> SampledField:
    """Second-harmonic stage: square the field, halve the wavelength.

    Undepleted-pump thin-crystal model; power is not conserved.
    """
    return SampledField(field.grid, field.wavelength / 2, field.amp ** 2)


def pinhole_intensity(field: SampledField, radius: float = 0.0) -> float:
    """Intensity collected by a pinhole centered on the origin.

    radius 0 reads the single sample nearest the origin as ``|E(0)|^2``;
    a finite radius integrates ``|amp|^2 * cell`` over samples within it.
    """
    if radius < 0:
        raise ConfigurationError(f"pinhole radius must be >= 0, got {radius}")
    origin = 0.0 if isinstance(field.grid, Grid1D) else (0.0, 0.0)
    if radius == 0.0:
        if not field.grid.contains(origin):
            return 0.0
        return float(np.abs(field.amp[field.grid.index_of(origin)]) ** 2)
    if isinstance(field.grid, Grid1D):
        sel = np.abs(field.grid.coords) <= radius
    else:
        sel = field.grid.radius_sq() <= radius ** 2
    return float(np.sum(np.abs(field.amp[sel]) ** 2) * field.grid.cell)


# ---------------------------------------------------------------- trains

def apply_element(field: SampledField, element: OpticalElement):
    """Apply one element; returns a field, or a float for PinholeSample."""
    if isinstance(element, FourierLens):
        return apply_fourier_lens(field, element.f)
    if isinstance(element, FreeSpaceFourier):
        return free_space_fourier(field, element.L)
    if isinstance(element, TwoFWithOffset):
        return two_f_with_offset(field, element.f, element.z, element.transpose)
    if isinstance(element, DoubleSlit):
        return apply_double_slit(field, element.x1, element.slit_width)
    if isinstance(element, CircularAperture):
        return apply_circular_aperture(field, element.D)
    if isinstance(element, Magnifier):
        return magnify(field, element.M)
    if isinstance(element, SHG):
        return shg(field)
    if isinstance(element, PinholeSample):
        return pinhole_intensity(field, element.radius)
    raise UnsupportedElementError(f"unknown element {element!r}")


def run_train(source: SampledField, train: OpticalTrain):
    """Apply a train left to right; a trailing PinholeSample yields a float."""
    out = source
    for element in train.elements:
        out = apply_element(out, element)
    return out


def reversed_young_train(f: float, x1: float, L1: float, L2: float, *,
                         slit_width: Optional[float] = None,
                         second_harmonic: bool = True,
                         pinhole_radius: float = 0.0) -> OpticalTrain:
    """Train reconstructing the two-slit pattern from a scanned point source.

    Source plane -> lens f -> double slit -> free path L1 -> lens f (the two
    spectral stages demagnify the slits onto the crystal plane) -> optional
    SHG -> far field over L2 -> on-axis pinhole. With ``second_harmonic``
    off, the same geometry read out at the fundamental gives the ordinary
    (double-period) two-slit fringe.
    """
    elements = [FourierLens(f), DoubleSlit(x1, slit_width),
                FreeSpaceFourier(L1), FourierLens(f)]
    if second_harmonic:
        elements.append(SHG())
    elements += [FreeSpaceFourier(L2), PinholeSample(pinhole_radius)]
    return OpticalTrain(tuple(elements))


def reversed_focus_train(f: float, D: float, z: float, L1: float, L2: float, *,
                         second_harmonic: bool = True,
                         pinhole_radius: float = 0.0) -> OpticalTrain:
    """Train reconstructing the focal spot from a point source near the focus.

    The source sits a displacement ``z`` from the focal plane of the first
    lens, so the opening stage is the transposed offset 2-f kernel into the
    aperture plane; then free path L1 -> lens f -> optional SHG -> far field
    over L2 -> on-axis pinhole.
    """
    elements = [TwoFWithOffset(f, z, transpose=True), CircularAperture(D),
                FreeSpaceFourier(L1), FourierLens(f)]
    if second_harmonic:
        elements.append(SHG())
    elements += [FreeSpaceFourier(L2), PinholeSample(pinhole_radius)]
    return OpticalTrain(tuple(elements))


# ---------------------------------------------------------------- serialization

_TAGS = {
    FourierLens: "fourier_lens",
    FreeSpaceFourier: "free_space",
    TwoFWithOffset: "two_f_offset",
    DoubleSlit: "double_slit",
    CircularAperture: "circular_aperture",
    Magnifier: "magnifier",
    SHG: "shg",
    PinholeSample: "pinhole",
}


def element_to_dict(element: OpticalElement) -> dict:
    tag = _TAGS.get(type(element))
    if tag is None:
        raise UnsupportedElementError(f"unknown element {element!r}")
    d = {"type": tag}
    if isinstance(element, FourierLens):
        d["f"] = element.f
    elif isinstance(element, FreeSpaceFourier):
        d["L"] = element.L
    elif isinstance(element, TwoFWithOffset):
        d.update(f=element.f, z=element.z, transpose=element.transpose)
    elif isinstance(element, DoubleSlit):
        d.update(x1=element.x1, slit_width=element.slit_width)
    elif isinstance(element, CircularAperture):
        d["D"] = element.D
    elif isinstance(element, Magnifier):
        d["M"] = element.M
    elif isinstance(element, PinholeSample):
        d["radius"] = element.radius
    return d


def element_from_dict(d: dict) -> OpticalElement:
    builders = {
        "fourier_lens": lambda p: FourierLens(p["f"]),
        "free_space": lambda p: FreeSpaceFourier(p["L"]),
        "two_f_offset": lambda p: TwoFWithOffset(p["f"], p["z"],
                                                 p.get("transpose", False)),
        "double_slit": lambda p: DoubleSlit(p["x1"], p.get("slit_width")),
        "circular_aperture": lambda p: CircularAperture(p["D"]),
        "magnifier": lambda p: Magnifier(p["M"]),
        "shg": lambda p: SHG(),
        "pinhole": lambda p: PinholeSample(p.get("radius", 0.0)),
    }
    try:
        build = builders[d["type"]]
    except KeyError as exc:
        raise ConfigurationError(f"unknown element type {d.get('type')!r}") from exc
    try:
        return build(d)
    except KeyError as exc:
        raise ConfigurationError(f"element {d['type']!r} missing field {exc}") from exc


def train_to_dict(train: OpticalTrain) -> dict:
    return {"elements": [element_to_dict(e) for e in train.elements]}


def train_from_dict(d: dict) -> OpticalTrain:
    if "elements" not in d:
        raise ConfigurationError("train description needs an 'elements' list")
    return OpticalTrain(tuple(element_from_dict(e) for e in d["elements"]))


def train_to_json(train: OpticalTrain) -> str:
    return json.dumps(train_to_dict(train), indent=2)


def train_from_json(text: str) -> OpticalTrain:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"invalid train JSON: {exc}") from exc
    return train_from_dict(d)
