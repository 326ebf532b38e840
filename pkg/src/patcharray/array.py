"""Uniform planar arrays of identical patches by pattern multiplication.

Element (m, n) sits at x = m*dx, y = n*dy (spacings in free-space
wavelengths). Excitations are stored row-major with y as the row index:
``excitations[n * nx + m]``. Mutual coupling is ignored.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .circuit import match_feed, s11_sweep
from .errors import InvalidInput
from .geometry import PatchGeometry
from .radiation import (
    AngularGrid,
    FarFieldPattern,
    direction_cosines,
    element_intensity,
    gain_dbi,
    hpbw_or_sentinel,
    sidelobe_level_db,
)

# gains reported for 1x1, 2x2, 4x4 and 8x8
PAPER_GAIN_DB = {"1x1": 7.046, "2x2": 12.9, "4x4": 18.7, "8x8": 21.0}


@dataclass(frozen=True, eq=False)
class ArrayLayout:
    nx: int = 1
    ny: int = 1
    dx_lambda: float = 0.5
    dy_lambda: float = 0.5
    excitations: np.ndarray = field(default=None)

    def __post_init__(self):
        for name in ("nx", "ny"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise InvalidInput(f"{name} must be an integer >= 1, got {v}")
            object.__setattr__(self, name, int(v))
        for name in ("dx_lambda", "dy_lambda"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidInput(f"{name} must be > 0, got {v}")
        n = self.nx * self.ny
        if self.excitations is None:
            a = np.ones(n, dtype=complex)
        else:
            a = np.asarray(self.excitations, dtype=complex).ravel()
            if a.size != n:
                raise InvalidInput(f"expected {n} excitations, got {a.size}")
        a.setflags(write=False)
        object.__setattr__(self, "excitations", a)

    @property
    def weights(self) -> np.ndarray:
        """Excitations as an (ny, nx) matrix."""
        return self.excitations.reshape(self.ny, self.nx)

    @property
    def input_power(self) -> float:
        return float(np.sum(np.abs(self.excitations) ** 2))

    def to_dict(self) -> dict:
        return {
            "nx": self.nx,
            "ny": self.ny,
            "dx_lambda": self.dx_lambda,
            "dy_lambda": self.dy_lambda,
            "excitations": [{"re": float(a.real), "im": float(a.imag)} for a in self.excitations],
        }

    @classmethod
    def from_dict(cls, d: dict) -> ArrayLayout:
        try:
            exc = d.get("excitations")
            if exc is not None:
                exc = [complex(float(e["re"]), float(e.get("im", 0.0))) for e in exc]
            return cls(d["nx"], d["ny"], float(d.get("dx_lambda", 0.5)),
                       float(d.get("dy_lambda", 0.5)), exc)
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed layout document: {exc!r}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> ArrayLayout:
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"layout is not valid JSON: {exc}") from exc


@dataclass(frozen=True)
class ArrayMetrics:
    gain_dbi: float
    hpbw_e_deg: float
    hpbw_h_deg: float
    sll_db: float | None
    peak_direction: tuple[float, float]
    af_peak_direction: tuple[float, float]

    def to_dict(self) -> dict:
        return {
            "gain_dbi": self.gain_dbi,
            "hpbw_e_deg": self.hpbw_e_deg,
            "hpbw_h_deg": self.hpbw_h_deg,
            "sll_db": self.sll_db,
            "peak_direction": {"theta_deg": self.peak_direction[0],
                               "phi_deg": self.peak_direction[1]},
            "af_peak_direction": {"theta_deg": self.af_peak_direction[0],
                                  "phi_deg": self.af_peak_direction[1]},
        }


def array_factor(layout: ArrayLayout, theta_deg, phi_deg):
    """Complex array factor, broadcast over the angle arrays."""
    ux, uy = direction_cosines(np.asarray(theta_deg, float), np.asarray(phi_deg, float))
    m = np.arange(layout.nx)
    n = np.arange(layout.ny)
    px = np.exp(1j * 2 * np.pi * layout.dx_lambda * ux[..., None] * m)
    py = np.exp(1j * 2 * np.pi * layout.dy_lambda * uy[..., None] * n)
    af = np.einsum("...n,nm,...m->...", py, layout.weights, px)
    return af[()] if af.ndim == 0 else af


def steering_phases(layout: ArrayLayout, theta0_deg: float, phi0_deg: float) -> np.ndarray:
    if not 0 <= theta0_deg <= 90:
        raise InvalidInput(f"steering theta must be in [0, 90] deg, got {theta0_deg}")
    sx, sy = direction_cosines(theta0_deg, phi0_deg)
    m = np.arange(layout.nx)
    n = np.arange(layout.ny)
    phase = 2 * np.pi * (layout.dx_lambda * sx * m[None, :] + layout.dy_lambda * sy * n[:, None])
    return np.exp(-1j * phase).ravel()


def steer(layout: ArrayLayout, theta0_deg: float, phi0_deg: float) -> ArrayLayout:
    """Apply progressive phases on top of the existing excitations."""
    a = layout.excitations * steering_phases(layout, theta0_deg, phi0_deg)
    return replace(layout, excitations=a)


def array_factor_pattern(layout: ArrayLayout, grid: AngularGrid | None = None,
                         f_hz: float = float("nan")) -> FarFieldPattern:
    """|AF|^2 alone, i.e. isotropic elements over the hemisphere."""
    grid = grid or AngularGrid()
    t, p = grid.mesh()
    return FarFieldPattern.from_intensity(grid, np.abs(array_factor(layout, t, p)) ** 2, f_hz)


def total_pattern(geo: PatchGeometry, layout: ArrayLayout, grid: AngularGrid | None = None,
                  obliquity: bool = False) -> FarFieldPattern:
    grid = grid or AngularGrid()
    t, p = grid.mesh()
    u = element_intensity(geo, t, p, obliquity) * np.abs(array_factor(layout, t, p)) ** 2
    return FarFieldPattern.from_intensity(grid, u, geo.f0_hz)


def _af_peak(layout: ArrayLayout, grid: AngularGrid) -> tuple[float, float]:
    p = array_factor_pattern(layout, grid)
    return p.peak[1], p.peak[2]


def metrics_from_pattern(p: FarFieldPattern, layout: ArrayLayout,
                         efficiency: float = 1.0) -> ArrayMetrics:
    slls = [s for s in (sidelobe_level_db(p, "E"), sidelobe_level_db(p, "H")) if s is not None]
    return ArrayMetrics(
        gain_dbi=gain_dbi(p, efficiency),
        hpbw_e_deg=hpbw_or_sentinel(p, "E"),
        hpbw_h_deg=hpbw_or_sentinel(p, "H"),
        sll_db=max(slls) if slls else None,
        peak_direction=(p.peak[1], p.peak[2]),
        af_peak_direction=_af_peak(layout, p.grid),
    )


def array_metrics(geo: PatchGeometry, layout: ArrayLayout, grid: AngularGrid | None = None,
                  efficiency: float = 1.0, obliquity: bool = False) -> ArrayMetrics:
    p = total_pattern(geo, layout, grid, obliquity)
    return metrics_from_pattern(p, layout, efficiency)


def grating_lobe_margin(layout: ArrayLayout, theta0_deg: float = 0.0) -> float:
    """Positive when no grating lobe enters visible space at this scan angle."""
    s = math.sin(math.radians(theta0_deg))
    return 1 / (1 + s) - max(layout.dx_lambda, layout.dy_lambda)


def paper_progression(geo: PatchGeometry, efficiency: float = 1.0, q: float = 30.0,
                      grid: AngularGrid | None = None, z0: float = 50.0,
                      obliquity: bool = False) -> list[dict]:
    """Model gain and matched S11 for 1x1 through 8x8 next to the reported gains."""
    feed = match_feed(geo, z0, q)
    f0 = geo.f0_hz
    sweep = s11_sweep(feed, geo, f0 * 27 / 29, f0 * 31 / 29, 401, z0)
    s11_min = sweep.minimum()[1]
    rows = []
    for n in (1, 2, 4, 8):
        config = f"{n}x{n}"
        g = gain_dbi(total_pattern(geo, ArrayLayout(n, n), grid, obliquity), efficiency)
        reported = PAPER_GAIN_DB[config]
        rows.append({
            "config": config,
            "model_gain_dbi": g,
            "paper_gain_db": reported,
            "delta_db": g - reported,
            "model_s11_min_db": s11_min,
        })
    return rows


def progression_table(rows: list[dict]) -> str:
    head = f"{'config':<8}{'model_gain_dbi':>16}{'paper_gain_db':>15}{'delta_db':>10}{'model_s11_min_db':>18}"
    lines = [head, "-" * len(head)]
    for r in rows:
        lines.append(f"{r['config']:<8}{r['model_gain_dbi']:>16.3f}{r['paper_gain_db']:>15.3f}"
                     f"{r['delta_db']:>+10.3f}{r['model_s11_min_db']:>18.2f}")
    return "\n".join(lines) + "\n"
