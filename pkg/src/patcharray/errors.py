"""Exception hierarchy.

``InvalidInput`` covers arguments that violate a precondition (CLI exit 2).
``ModelError`` covers inputs that are well-formed but push a model outside
its domain (CLI exit 3).
"""


class InvalidInput(ValueError):
    pass


class InvalidRange(InvalidInput):
    pass


class InvalidEfficiency(InvalidInput):
    pass


class ModelError(ArithmeticError):
    pass


class DegenerateInput(ModelError):
    pass


class NonPhysicalGeometry(ModelError):
    pass


class Unmatchable(ModelError):
    pass


class ZeroPattern(ModelError):
    pass


class NoCrossing(ModelError):
    """No half-power crossing on one or both sides of the main lobe."""

    # width reported in place of a beamwidth when the lobe never drops 3 dB
    sentinel_deg = 180.0
