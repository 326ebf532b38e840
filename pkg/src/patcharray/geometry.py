"""Transmission-line sizing of a rectangular microstrip patch.

Lengths are millimetres, frequencies hertz.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

from .errors import DegenerateInput, InvalidInput, NonPhysicalGeometry

C0 = 299_792_458.0  # m/s, exact


def _mm(meters: float) -> float:
    return meters * 1e3


class WidthFormula(str, enum.Enum):
    STANDARD = "standard"
    PAPER_LITERAL = "paper-literal"


@dataclass(frozen=True)
class Substrate:
    epsilon_r: float = 2.2
    height_mm: float = 0.784
    loss_tangent: float = 0.0009
    label: str = "RT/duroid 5880"

    def __post_init__(self):
        if not math.isfinite(self.epsilon_r) or self.epsilon_r < 1.0:
            raise InvalidInput(f"epsilon_r must be >= 1, got {self.epsilon_r}")
        if not math.isfinite(self.height_mm) or self.height_mm <= 0:
            raise InvalidInput(f"height_mm must be > 0, got {self.height_mm}")
        if not math.isfinite(self.loss_tangent) or self.loss_tangent < 0:
            raise InvalidInput(f"loss_tangent must be >= 0, got {self.loss_tangent}")


@dataclass(frozen=True)
class DesignSpec:
    f0_hz: float = 29e9
    width_formula: WidthFormula = WidthFormula.STANDARD
    z0_ohm: float = 50.0

    def __post_init__(self):
        if not math.isfinite(self.f0_hz) or self.f0_hz <= 0:
            raise InvalidInput(f"f0_hz must be > 0, got {self.f0_hz}")
        if not math.isfinite(self.z0_ohm) or self.z0_ohm <= 0:
            raise InvalidInput(f"z0_ohm must be > 0, got {self.z0_ohm}")
        # accept plain strings from config files
        object.__setattr__(self, "width_formula", WidthFormula(self.width_formula))


@dataclass(frozen=True)
class PatchGeometry:
    width_mm: float
    length_mm: float
    eff_permittivity: float
    length_extension_mm: float
    eff_length_mm: float
    ground_length_mm: float
    ground_width_mm: float
    substrate: Substrate
    f0_hz: float
    width_formula: WidthFormula = field(default=WidthFormula.STANDARD)

    def __post_init__(self):
        object.__setattr__(self, "width_formula", WidthFormula(self.width_formula))
        lengths = (self.width_mm, self.length_mm, self.length_extension_mm,
                   self.eff_length_mm, self.ground_length_mm, self.ground_width_mm)
        if not all(math.isfinite(x) and x > 0 for x in lengths):
            raise NonPhysicalGeometry(f"all lengths must be positive: {lengths}")
        if not 1.0 <= self.eff_permittivity <= self.substrate.epsilon_r:
            raise InvalidInput(
                f"eff_permittivity {self.eff_permittivity} outside [1, {self.substrate.epsilon_r}]")
        h = self.substrate.height_mm
        checks = (
            (self.length_mm, self.eff_length_mm - 2 * self.length_extension_mm),
            (self.ground_length_mm, 6 * h + self.length_mm),
            (self.ground_width_mm, 6 * h + self.width_mm),
        )
        for got, want in checks:
            if not math.isclose(got, want, rel_tol=1e-12, abs_tol=1e-15):
                raise InvalidInput(f"inconsistent geometry: {got} != {want}")

    @property
    def wavelength_mm(self) -> float:
        return _mm(C0 / self.f0_hz)

    @property
    def radiating_length_mm(self) -> float:
        """Patch length plus both fringing extensions."""
        return self.length_mm + 2 * self.length_extension_mm

    def to_dict(self) -> dict:
        s = self.substrate
        return {
            "f0_hz": self.f0_hz,
            "w_mm": self.width_mm,
            "l_mm": self.length_mm,
            "eps_eff": self.eff_permittivity,
            "dl_mm": self.length_extension_mm,
            "leff_mm": self.eff_length_mm,
            "lg_mm": self.ground_length_mm,
            "wg_mm": self.ground_width_mm,
            "substrate": {"eps_r": s.epsilon_r, "h_mm": s.height_mm,
                          "tan_d": s.loss_tangent, "label": s.label},
            "width_formula": self.width_formula.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> PatchGeometry:
        try:
            s = d["substrate"]
            sub = Substrate(float(s["eps_r"]), float(s["h_mm"]),
                            float(s.get("tan_d", 0.0)), str(s.get("label", "")))
            return cls(
                width_mm=float(d["w_mm"]),
                length_mm=float(d["l_mm"]),
                eff_permittivity=float(d["eps_eff"]),
                length_extension_mm=float(d["dl_mm"]),
                eff_length_mm=float(d["leff_mm"]),
                ground_length_mm=float(d["lg_mm"]),
                ground_width_mm=float(d["wg_mm"]),
                substrate=sub,
                f0_hz=float(d["f0_hz"]),
                width_formula=d.get("width_formula", WidthFormula.STANDARD.value),
            )
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed geometry document: {exc!r}") from exc

    def to_json(self) -> str:
        # json uses repr() for floats: shortest string that round-trips exactly
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> PatchGeometry:
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"geometry is not valid JSON: {exc}") from exc


def effective_width(spec: DesignSpec, sub: Substrate) -> float:
    half_wave = C0 / (2 * spec.f0_hz)
    if spec.width_formula is WidthFormula.PAPER_LITERAL:
        return _mm(half_wave / math.sqrt(sub.epsilon_r))
    return _mm(half_wave * math.sqrt(2 / (sub.epsilon_r + 1)))


def effective_permittivity(sub: Substrate, width_mm: float) -> float:
    if width_mm <= 0:
        raise InvalidInput(f"width must be > 0, got {width_mm}")
    er = sub.epsilon_r
    return (er + 1) / 2 + (er - 1) / 2 * (1 + 12 * sub.height_mm / width_mm) ** -0.5


def effective_length(f0_hz: float, eps_eff: float) -> float:
    if f0_hz <= 0:
        raise InvalidInput(f"f0_hz must be > 0, got {f0_hz}")
    if eps_eff < 1:
        raise InvalidInput(f"eps_eff must be >= 1, got {eps_eff}")
    return _mm(C0 / (2 * f0_hz * math.sqrt(eps_eff)))


def length_extension(sub: Substrate, width_mm: float, eps_eff: float) -> float:
    """Hammerstad fringing extension at one radiating edge."""
    if width_mm <= 0:
        raise InvalidInput(f"width must be > 0, got {width_mm}")
    if eps_eff <= 0.258:
        raise DegenerateInput(f"eps_eff={eps_eff} at or below the 0.258 pole")
    h = sub.height_mm
    w_h = width_mm / h
    return 0.412 * h * ((eps_eff + 0.3) * (w_h + 0.264)) / ((eps_eff - 0.258) * (w_h + 0.8))


def design_patch(spec: DesignSpec, sub: Substrate) -> PatchGeometry:
    w = effective_width(spec, sub)
    eps_eff = effective_permittivity(sub, w)
    l_eff = effective_length(spec.f0_hz, eps_eff)
    dl = length_extension(sub, w, eps_eff)
    length = l_eff - 2 * dl
    if length <= 0:
        raise NonPhysicalGeometry(
            f"fringing correction 2*dL={2 * dl:.4g} mm exceeds L_eff={l_eff:.4g} mm")
    h = sub.height_mm
    return PatchGeometry(
        width_mm=w,
        length_mm=length,
        eff_permittivity=eps_eff,
        length_extension_mm=dl,
        eff_length_mm=l_eff,
        ground_length_mm=6 * h + length,
        ground_width_mm=6 * h + w,
        substrate=sub,
        f0_hz=spec.f0_hz,
        width_formula=spec.width_formula,
    )


def resonant_frequency(geo: PatchGeometry) -> float:
    l_e = geo.radiating_length_mm * 1e-3
    return C0 / (2 * l_e * math.sqrt(geo.eff_permittivity))


def default_geometry() -> PatchGeometry:
    """The 29 GHz RT/duroid 5880 design used throughout."""
    return design_patch(DesignSpec(), Substrate())
