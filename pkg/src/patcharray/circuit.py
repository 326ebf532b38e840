"""Narrowband input-impedance model, inset matching and S11 files.

The patch is treated as a parallel RLC resonator seen through an inset feed:
the edge resistance comes from the radiating-slot conductance (mutual
conductance between the slots is ignored) and the inset point scales it by
cos^2(pi*y0/L).
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, InvalidInput, InvalidRange, Unmatchable
from .geometry import PatchGeometry, resonant_frequency

S11_FLOOR_DB = -100.0


class FeedKind(str, enum.Enum):
    EDGE = "edge"
    INSET = "inset"


@dataclass(frozen=True)
class FeedModel:
    kind: FeedKind
    inset_depth_mm: float
    edge_resistance_ohm: float
    resonator_q: float = 30.0

    def __post_init__(self):
        object.__setattr__(self, "kind", FeedKind(self.kind))
        if self.inset_depth_mm < 0:
            raise InvalidInput(f"inset depth must be >= 0, got {self.inset_depth_mm}")
        if self.kind is FeedKind.EDGE and self.inset_depth_mm != 0:
            raise InvalidInput("edge feed must have zero inset depth")
        if not self.resonator_q > 0:
            raise InvalidInput(f"resonator Q must be > 0, got {self.resonator_q}")
        if not self.edge_resistance_ohm > 0:
            raise InvalidInput(f"edge resistance must be > 0, got {self.edge_resistance_ohm}")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "y0_mm": self.inset_depth_mm,
            "edge_resistance_ohm": self.edge_resistance_ohm,
            "resonator_q": self.resonator_q,
        }

    @classmethod
    def from_dict(cls, d: dict) -> FeedModel:
        try:
            return cls(FeedKind(d["kind"]), float(d["y0_mm"]),
                       float(d["edge_resistance_ohm"]), float(d.get("resonator_q", 30.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed feed document: {exc!r}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> FeedModel:
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"feed is not valid JSON: {exc}") from exc


def slot_conductance(geo: PatchGeometry) -> float:
    """Conductance of one radiating slot in siemens."""
    lam0 = geo.wavelength_mm
    h = geo.substrate.height_mm
    if h / lam0 >= 0.1:
        warnings.warn(f"h/lambda0 = {h / lam0:.3f} >= 0.1; slot model is unreliable",
                      stacklevel=2)
    k0h = 2 * math.pi / lam0 * h
    return geo.width_mm / (120 * lam0) * (1 - k0h**2 / 24)


def edge_resistance(geo: PatchGeometry) -> float:
    return 1 / (2 * slot_conductance(geo))


def inset_impedance(edge_r: float, y0_mm: float, length_mm: float) -> float:
    if y0_mm < 0 or y0_mm >= length_mm / 2:
        raise DegenerateInput(f"inset depth {y0_mm} mm outside [0, L/2={length_mm / 2}) mm")
    return edge_r * math.cos(math.pi * y0_mm / length_mm) ** 2


def bisect(fn, lo: float, hi: float, ftol: float, max_iter: int = 200) -> float:
    """Root of ``fn`` on ``[lo, hi]`` where ``fn`` changes sign.

    Stops when ``|fn(x)| < ftol`` or the bracket collapses to adjacent floats.
    """
    f_lo = fn(lo)
    if f_lo == 0:
        return lo
    if np.sign(f_lo) == np.sign(fn(hi)):
        raise InvalidInput("bisection bracket does not straddle a root")
    mid = lo
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = fn(mid)
        if abs(f_mid) < ftol or mid in (lo, hi):
            return mid
        if np.sign(f_mid) == np.sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return mid


def match_feed(geo: PatchGeometry, target_z: float = 50.0, q: float = 30.0,
               tol_ohm: float = 1e-6) -> FeedModel:
    edge_r = edge_resistance(geo)
    if target_z <= 0:
        raise InvalidInput(f"target impedance must be > 0, got {target_z}")
    if math.isclose(target_z, edge_r, rel_tol=1e-12):
        return FeedModel(FeedKind.EDGE, 0.0, edge_r, q)
    if target_z > edge_r:
        raise Unmatchable(
            f"target {target_z:g} ohm exceeds edge resistance {edge_r:.4g} ohm; "
            "an inset can only lower the input resistance")
    length = geo.length_mm

    def excess(y0):
        return edge_r * math.cos(math.pi * y0 / length) ** 2 - target_z

    # excess(L/2) = -target_z < 0, so the upper end brackets the root
    y0 = bisect(excess, 0.0, length / 2, tol_ohm)
    return FeedModel(FeedKind.INSET, y0, edge_r, q)


def edge_feed(geo: PatchGeometry, q: float = 30.0) -> FeedModel:
    return FeedModel(FeedKind.EDGE, 0.0, edge_resistance(geo), q)


def input_impedance(feed: FeedModel, geo: PatchGeometry, f_hz):
    """Zin at ``f_hz`` (scalar or array)."""
    f = np.asarray(f_hz, dtype=float)
    if np.any(f <= 0):
        raise InvalidInput("frequencies must be > 0")
    r_in = inset_impedance(feed.edge_resistance_ohm, feed.inset_depth_mm, geo.length_mm)
    f0 = resonant_frequency(geo)
    z = np.asarray(r_in / (1 + 1j * feed.resonator_q * (f / f0 - f0 / f)))
    return z[()] if z.ndim == 0 else z


def reflection(zin, z0: float = 50.0):
    if z0 <= 0:
        raise InvalidInput(f"reference impedance must be > 0, got {z0}")
    zin = np.asarray(zin, dtype=complex)
    gamma = np.asarray((zin - z0) / (zin + z0))
    return gamma[()] if gamma.ndim == 0 else gamma


def s11_db(gamma):
    """|S11| in dB, floored at -100 dB."""
    mag = np.abs(np.asarray(gamma))
    with np.errstate(divide="ignore"):
        db = 20 * np.log10(mag)
    db = np.maximum(db, S11_FLOOR_DB)
    return db[()] if db.ndim == 0 else db


def return_loss_db(gamma):
    return -s11_db(gamma)


@dataclass(frozen=True, eq=False)
class FrequencyResponse:
    f_hz: np.ndarray
    s11: np.ndarray
    ref_impedance_ohm: float = 50.0

    def __post_init__(self):
        f = np.asarray(self.f_hz, dtype=float)
        s = np.asarray(self.s11, dtype=complex)
        if f.ndim != 1 or f.shape != s.shape or f.size < 1:
            raise InvalidInput("f_hz and s11 must be equal-length 1-D arrays")
        if np.any(np.diff(f) <= 0):
            raise InvalidInput("frequencies must be strictly increasing")
        if np.any(np.abs(s) > 1 + 1e-12):
            raise InvalidInput("|S11| > 1 in a passive response")
        object.__setattr__(self, "f_hz", f)
        object.__setattr__(self, "s11", s)

    @property
    def s11_db(self) -> np.ndarray:
        return s11_db(self.s11)

    def minimum(self) -> tuple[float, float]:
        """(frequency, S11 dB) at the deepest point."""
        i = int(np.argmin(np.abs(self.s11)))
        return float(self.f_hz[i]), float(self.s11_db[i])

    def bandwidth(self, level_db: float = -10.0) -> float:
        """Width in Hz of the band around the minimum where S11 <= ``level_db``.

        Band edges are linearly interpolated; returns 0 if the minimum never
        reaches ``level_db``. Raises if the band runs off the sweep.
        """
        db = self.s11_db
        i = int(np.argmin(db))
        if db[i] > level_db:
            return 0.0
        lo = i
        while lo > 0 and db[lo - 1] <= level_db:
            lo -= 1
        hi = i
        while hi < db.size - 1 and db[hi + 1] <= level_db:
            hi += 1
        if lo == 0 or hi == db.size - 1:
            raise InvalidRange("band edge lies outside the sweep")
        f, d = self.f_hz, db
        f_lo = np.interp(level_db, [d[lo], d[lo - 1]], [f[lo], f[lo - 1]])
        f_hi = np.interp(level_db, [d[hi], d[hi + 1]], [f[hi], f[hi + 1]])
        return float(f_hi - f_lo)

    def to_touchstone(self) -> str:
        out = [f"! one-port S11, {self.f_hz.size} points",
               f"# HZ S RI R {self.ref_impedance_ohm:g}"]
        for f, s in zip(self.f_hz, self.s11):
            out.append(f"{float(f)!r} {float(s.real)!r} {float(s.imag)!r}")
        return "\n".join(out) + "\n"

    @classmethod
    def from_touchstone(cls, text: str) -> FrequencyResponse:
        return read_touchstone(text)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["f_hz", "s11_db", "s11_re", "s11_im"])
        for f, db, s in zip(self.f_hz, self.s11_db, self.s11):
            w.writerow([repr(float(f)), repr(float(db)), repr(float(s.real)), repr(float(s.imag))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, ref_impedance_ohm: float = 50.0) -> FrequencyResponse:
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows or set(rows[0]) != {"f_hz", "s11_db", "s11_re", "s11_im"}:
            raise InvalidInput("S11 CSV must have header f_hz,s11_db,s11_re,s11_im")
        f = [float(r["f_hz"]) for r in rows]
        s = [complex(float(r["s11_re"]), float(r["s11_im"])) for r in rows]
        return cls(np.array(f), np.array(s), ref_impedance_ohm)


_FREQ_UNITS = {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}


def read_touchstone(text: str) -> FrequencyResponse:
    """Parse a one-port Touchstone v1 file (RI, MA or DB data)."""
    unit, fmt, z0 = "ghz", "ma", 50.0  # Touchstone v1 defaults
    freqs, vals = [], []
    for raw in text.splitlines():
        line = raw.split("!", 1)[0].strip()
        if not line:
            continue
        if line.startswith("#"):
            tok = line[1:].lower().split()
            i = 0
            while i < len(tok):
                t = tok[i]
                if t in _FREQ_UNITS:
                    unit = t
                elif t in ("ri", "ma", "db"):
                    fmt = t
                elif t == "r" and i + 1 < len(tok):
                    z0 = float(tok[i + 1])
                    i += 1
                elif t != "s":
                    raise InvalidInput(f"unsupported Touchstone option {t!r}")
                i += 1
            continue
        parts = line.split()
        if len(parts) != 3:
            raise InvalidInput(f"expected 3 columns in one-port data, got {len(parts)}")
        a, b = float(parts[1]), float(parts[2])
        if fmt == "ri":
            s = complex(a, b)
        elif fmt == "ma":
            s = a * np.exp(1j * np.deg2rad(b))
        else:
            s = 10 ** (a / 20) * np.exp(1j * np.deg2rad(b))
        freqs.append(float(parts[0]) * _FREQ_UNITS[unit])
        vals.append(s)
    return FrequencyResponse(np.array(freqs), np.array(vals, dtype=complex), z0)


def s11_sweep(feed: FeedModel, geo: PatchGeometry, f_start: float, f_stop: float,
              n_points: int, z0: float = 50.0) -> FrequencyResponse:
    if not (0 < f_start < f_stop):
        raise InvalidRange(f"need 0 < f_start < f_stop, got {f_start}, {f_stop}")
    if int(n_points) != n_points or n_points < 2:
        raise InvalidRange(f"need at least 2 points, got {n_points}")
    f = np.linspace(f_start, f_stop, int(n_points))
    gamma = reflection(input_impedance(feed, geo, f), z0)
    return FrequencyResponse(f, gamma, z0)


def ten_db_fractional_bandwidth(q: float) -> float:
    """Closed-form -10 dB fractional bandwidth of a matched resonator."""
    # |G|^2 = x^2/(4+x^2) = 0.1 at x = Q*(f/f0 - f0/f) = +-2/3; the band
    # edges r, 1/r satisfy r - 1/r = 2/(3Q), which is also the band width
    return math.sqrt(0.4 / 0.9) / q

