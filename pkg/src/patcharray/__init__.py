"""Ka-band microstrip patch and planar array design toolkit."""

from .array import (
    ArrayLayout,
    ArrayMetrics,
    array_factor,
    array_factor_pattern,
    array_metrics,
    grating_lobe_margin,
    paper_progression,
    steer,
    steering_phases,
    total_pattern,
)
from .circuit import (
    FeedKind,
    FeedModel,
    FrequencyResponse,
    edge_feed,
    edge_resistance,
    input_impedance,
    inset_impedance,
    match_feed,
    read_touchstone,
    reflection,
    s11_db,
    s11_sweep,
    slot_conductance,
)
from .errors import (
    DegenerateInput,
    InvalidEfficiency,
    InvalidInput,
    InvalidRange,
    ModelError,
    NoCrossing,
    NonPhysicalGeometry,
    Unmatchable,
    ZeroPattern,
)
from .geometry import (
    C0,
    DesignSpec,
    PatchGeometry,
    Substrate,
    WidthFormula,
    default_geometry,
    design_patch,
    effective_length,
    effective_permittivity,
    effective_width,
    length_extension,
    resonant_frequency,
)
from .radiation import (
    AngularGrid,
    FarFieldPattern,
    directivity_dbi,
    element_intensity,
    gain_dbi,
    hpbw,
    principal_cut,
    sample_pattern,
    sidelobe_level_db,
)

__version__ = "0.1.0"
