"""Far-field patterns on a theta/phi grid over the upper hemisphere.

Conventions: the patch lies in the xy-plane over an infinite ground plane,
broadside is theta = 0, and the resonant length runs along x, so the E-plane
is phi = 0/180 and the H-plane is phi = 90/270.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .errors import InvalidEfficiency, InvalidInput, NoCrossing, ZeroPattern
from .geometry import PatchGeometry

DB_FLOOR = -200.0


def _divides(span: float, step: float) -> int:
    if not (math.isfinite(step) and step > 0):
        raise InvalidInput(f"angular step must be > 0, got {step}")
    n = round(span / step)
    if n < 1 or abs(n * step - span) > 1e-9 * span:
        raise InvalidInput(f"step {step} deg does not divide {span} deg")
    return n


@dataclass(frozen=True)
class AngularGrid:
    theta_step_deg: float = 0.5
    phi_step_deg: float = 0.5

    def __post_init__(self):
        _divides(90.0, self.theta_step_deg)
        _divides(360.0, self.phi_step_deg)

    @property
    def theta_deg(self) -> np.ndarray:
        return np.linspace(0.0, 90.0, _divides(90.0, self.theta_step_deg) + 1)

    @property
    def phi_deg(self) -> np.ndarray:
        n = _divides(360.0, self.phi_step_deg)
        return np.arange(n) * (360.0 / n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.theta_deg.size, self.phi_deg.size

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """(theta, phi) in degrees, shape (n_theta, n_phi)."""
        return np.meshgrid(self.theta_deg, self.phi_deg, indexing="ij")

    def direction_cosines(self) -> tuple[np.ndarray, np.ndarray]:
        t, p = self.mesh()
        return direction_cosines(t, p)

    def phi_index(self, phi_deg: float) -> int:
        phi = self.phi_deg
        i = int(np.argmin(np.abs((phi - phi_deg + 180.0) % 360.0 - 180.0)))
        if abs((phi[i] - phi_deg + 180.0) % 360.0 - 180.0) > 1e-9:
            raise InvalidInput(f"phi = {phi_deg} deg is not on the grid")
        return i


def direction_cosines(theta_deg, phi_deg):
    t = np.deg2rad(theta_deg)
    p = np.deg2rad(phi_deg)
    return np.sin(t) * np.cos(p), np.sin(t) * np.sin(p)


def _sinc(x):
    # numpy's sinc is the normalised sin(pi x)/(pi x)
    return np.sinc(np.asarray(x) / np.pi)


def element_intensity(geo: PatchGeometry, theta_deg, phi_deg, obliquity: bool = False):
    """Unnormalised radiation intensity of the two-slot patch model.

    Equals 1 at broadside. With ``obliquity`` the intensity is additionally
    multiplied by cos(theta).
    """
    theta_deg = np.asarray(theta_deg, dtype=float)
    if np.any((theta_deg < 0) | (theta_deg > 90)):
        raise InvalidInput("theta must lie in [0, 90] deg")
    k0 = 2 * np.pi / geo.wavelength_mm
    ux, uy = direction_cosines(theta_deg, phi_deg)
    a = (_sinc(k0 * geo.width_mm / 2 * uy)
         * _sinc(k0 * geo.substrate.height_mm / 2 * ux)
         * np.cos(k0 * geo.radiating_length_mm / 2 * ux))
    u = a * a
    if obliquity:
        u = u * np.cos(np.deg2rad(theta_deg))
    return u


def radiated_power(grid: AngularGrid, intensity: np.ndarray) -> float:
    """Integral of U*sin(theta) over the hemisphere.

    Simpson's rule along theta; the periodic phi direction uses equal weights
    (the trapezoid rule on a closed period).
    """
    theta = np.deg2rad(grid.theta_deg)
    per_phi = simpson(intensity * np.sin(theta)[:, None], x=theta, axis=0)
    return float(np.sum(per_phi) * np.deg2rad(grid.phi_step_deg))


@dataclass(frozen=True, eq=False)
class FarFieldPattern:
    grid: AngularGrid
    intensity: np.ndarray
    f_hz: float
    prad: float
    peak: tuple[float, float, float]  # (U_max, theta_deg, phi_deg)

    @classmethod
    def from_intensity(cls, grid: AngularGrid, intensity, f_hz: float = float("nan")):
        u = np.asarray(intensity, dtype=float)
        if u.shape != grid.shape:
            raise InvalidInput(f"intensity shape {u.shape} != grid shape {grid.shape}")
        if np.any(u < 0) or not np.all(np.isfinite(u)):
            raise InvalidInput("intensity must be finite and non-negative")
        i, j = np.unravel_index(int(np.argmax(u)), u.shape)
        peak = (float(u[i, j]), float(grid.theta_deg[i]), float(grid.phi_deg[j]))
        return cls(grid, u, f_hz, radiated_power(grid, u), peak)

    def cut(self, plane: str) -> tuple[np.ndarray, np.ndarray]:
        return principal_cut(self, plane)


def sample_pattern(geo: PatchGeometry, grid: AngularGrid | None = None,
                   obliquity: bool = False) -> FarFieldPattern:
    grid = grid or AngularGrid()
    t, p = grid.mesh()
    return FarFieldPattern.from_intensity(grid, element_intensity(geo, t, p, obliquity), geo.f0_hz)


def directivity(p: FarFieldPattern) -> float:
    u_max = p.peak[0]
    if u_max <= 0 or p.prad <= 0:
        raise ZeroPattern("pattern is identically zero")
    return 4 * math.pi * u_max / p.prad


def directivity_dbi(p: FarFieldPattern) -> float:
    return 10 * math.log10(directivity(p))


def gain_dbi(p: FarFieldPattern, efficiency: float = 1.0) -> float:
    if not 0 < efficiency <= 1:
        raise InvalidEfficiency(f"efficiency must be in (0, 1], got {efficiency}")
    return directivity_dbi(p) + 10 * math.log10(efficiency)


_CUT_PHI = {"E": 0.0, "H": 90.0}


def principal_cut(p: FarFieldPattern, plane: str) -> tuple[np.ndarray, np.ndarray]:
    """Signed angle in [-90, 90] deg and U along the E or H plane.

    Negative angles are the phi + 180 half of the plane.
    """
    plane = plane.upper()
    if plane not in _CUT_PHI:
        raise InvalidInput(f"cut must be 'E' or 'H', got {plane!r}")
    phi = _CUT_PHI[plane]
    fwd = p.intensity[:, p.grid.phi_index(phi)]
    back = p.intensity[:, p.grid.phi_index(phi + 180.0)]
    theta = p.grid.theta_deg
    angles = np.concatenate([-theta[:0:-1], theta])
    values = np.concatenate([back[:0:-1], fwd])
    return angles, values


def _half_power_crossing(angles, u, start, step, half):
    k = start
    while 0 <= k + step < u.size:
        k += step
        if u[k] <= half:
            a0, a1, u0, u1 = angles[k - step], angles[k], u[k - step], u[k]
            return a0 + (half - u0) / (u1 - u0) * (a1 - a0)
    return None


def hpbw(p: FarFieldPattern, cut: str) -> float:
    angles, u = principal_cut(p, cut)
    i = int(np.argmax(u))
    if u[i] <= 0:
        raise ZeroPattern("cut is identically zero")
    half = u[i] / 2
    right = _half_power_crossing(angles, u, i, +1, half)
    left = _half_power_crossing(angles, u, i, -1, half)
    if left is None or right is None:
        raise NoCrossing(f"{cut}-plane cut never drops to half power on both sides")
    return float(right - left)


def hpbw_or_sentinel(p: FarFieldPattern, cut: str) -> float:
    try:
        return hpbw(p, cut)
    except NoCrossing:
        return NoCrossing.sentinel_deg


def _first_null(u, start, step, floor):
    k = start + step
    while 0 <= k < u.size:
        nxt = k + step
        falling = u[k] <= u[k - step]
        rising_after = nxt < 0 or nxt >= u.size or u[nxt] >= u[k]
        if falling and rising_after and u[k] < floor:
            return k
        k = nxt
    return None


def sidelobe_level_db(p: FarFieldPattern, cut: str) -> float | None:
    """Highest lobe outside the main lobe relative to the cut peak, in dB.

    The main lobe extends to the first local minimum below 1% of the peak on
    each side. Returns None when nothing lies beyond those nulls.
    """
    _, u = principal_cut(p, cut)
    i = int(np.argmax(u))
    u_max = u[i]
    if u_max <= 0:
        return None
    outside = []
    right = _first_null(u, i, +1, u_max / 100)
    if right is not None and right + 1 < u.size:
        outside.append(u[right + 1:])
    left = _first_null(u, i, -1, u_max / 100)
    if left is not None and left > 0:
        outside.append(u[:left])
    if not outside:
        return None
    side = float(max(seg.max() for seg in outside))
    if side <= 0:
        return None
    return 10 * math.log10(side / u_max)


def _db(x):
    with np.errstate(divide="ignore"):
        return np.maximum(10 * np.log10(x), DB_FLOOR)


def pattern_to_csv(p: FarFieldPattern, efficiency: float = 1.0) -> str:
    """Full-grid CSV, theta outer loop, phi inner loop."""
    offset = gain_dbi(p, efficiency) - 10 * math.log10(p.peak[0])
    gain = _db(p.intensity) + offset
    gain = np.where(p.intensity > 0, gain, DB_FLOOR)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theta_deg", "phi_deg", "u_linear", "gain_dbi"])
    for i, th in enumerate(p.grid.theta_deg):
        for j, ph in enumerate(p.grid.phi_deg):
            w.writerow([repr(float(th)), repr(float(ph)),
                        repr(float(p.intensity[i, j])), repr(float(gain[i, j]))])
    return buf.getvalue()


def pattern_from_csv(text: str, f_hz: float = float("nan")) -> FarFieldPattern:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["theta_deg", "phi_deg", "u_linear", "gain_dbi"]:
        raise InvalidInput("pattern CSV must have header theta_deg,phi_deg,u_linear,gain_dbi")
    data = np.array([[float(x) for x in r[:3]] for r in rows[1:]])
    theta = np.unique(data[:, 0])
    phi = np.unique(data[:, 1])
    grid = AngularGrid(90.0 / (theta.size - 1), 360.0 / phi.size)
    if (not np.allclose(theta, grid.theta_deg, rtol=0, atol=1e-9)
            or not np.allclose(phi, grid.phi_deg, rtol=0, atol=1e-9)
            or data.shape[0] != theta.size * phi.size):
        raise InvalidInput("pattern CSV is not a complete uniform grid")
    return FarFieldPattern.from_intensity(grid, data[:, 2].reshape(grid.shape), f_hz)


def cut_to_csv(p: FarFieldPattern, plane: str, efficiency: float = 1.0) -> str:
    angles, u = principal_cut(p, plane)
    offset = gain_dbi(p, efficiency) - 10 * math.log10(p.peak[0])
    cut_max = u.max()
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["angle_deg", "gain_dbi", "normalized_db"])
    for a, val in zip(angles, u):
        g = float(_db(val) + offset) if val > 0 else DB_FLOOR
        n = float(_db(val / cut_max)) if val > 0 else DB_FLOOR
        w.writerow([repr(float(a)), repr(g), repr(n)])
    return buf.getvalue()


def cut_from_csv(text: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["angle_deg", "gain_dbi", "normalized_db"]:
        raise InvalidInput("cut CSV must have header angle_deg,gain_dbi,normalized_db")
    data = np.array([[float(x) for x in r] for r in rows[1:]])
    return data[:, 0], data[:, 1], data[:, 2]
