"""Linear-response model of a transmon coupled to surface acoustic waves through an IDT."""

from .errors import (
    DomainError,
    FluxBranchError,
    FluxDivergenceError,
    GateDisabledError,
    InstabilityError,
    NotSplitError,
    PoleSearchError,
    ScenarioError,
    SpectralCoverageError,
)
from .idt import IdtGeometry, array_factor, h_factor, h_factor_sinc_approx, idt_center_frequency, idt_delay
from .materials import BUILTIN_MATERIALS, MaterialParams, characteristic_impedance, coupling_capacitance, line_constants
from .response import (
    ResponseSpectrum,
    SystemModel,
    TransmonParams,
    acoustic_reflection,
    acoustic_transmission,
    admittance_response,
    charge_response,
    damping,
    default_model,
    denominator,
    gate_reflection,
    normalized_decay,
    transduction,
)

__version__ = "0.1.0"
