"""Two-photon interference patterns and their classical time-reversed reconstruction.

Layers, roughly bottom to top:

- ``grid``: sampled fields and the unitary centered Fourier transform
- ``elements``: optical elements, pinhole-readout trains, JSON serialization
- ``analytic``: closed-form fringes, focal spots, disk quadrature, stage fields
- ``forward``: two-photon amplitude evolution and the equivalence sweep
- ``modes``: discrete-mode detection probabilities and the randomized audit
- ``config`` / ``cli``: JSON experiment configs and the ``biphoton`` command
"""

from .analytic import (
    DeltaComb,
    FocusParams,
    YoungParams,
    focus_stage_field,
    fwhm,
    sinc,
    somb,
    spot_axial,
    spot_lateral,
    spot_offaxis_two_photon,
    uniform_disk_transform,
    young_classical,
    young_stage_field,
    young_two_photon,
)
from .config import (
    AuditSpec,
    ExperimentConfig,
    GridSpec,
    SweepSpec,
    load_config,
    validate,
)
from .elements import (
    SHG,
    CircularAperture,
    DoubleSlit,
    FourierLens,
    FreeSpaceFourier,
    Magnifier,
    OpticalTrain,
    PinholeSample,
    TwoFWithOffset,
    apply_circular_aperture,
    apply_double_slit,
    apply_element,
    apply_fourier_lens,
    element_from_dict,
    element_to_dict,
    free_space_fourier,
    magnify,
    pinhole_intensity,
    reversed_focus_train,
    reversed_young_train,
    run_train,
    shg,
    train_from_dict,
    train_from_json,
    train_to_dict,
    train_to_json,
    two_f_with_offset,
)
from .errors import (
    ConfigurationError,
    DomainError,
    GridMismatchError,
    QuadratureError,
    SamplingError,
    ShapeError,
    UnsupportedElementError,
)
from .forward import (
    EquivalenceReport,
    SingleParticleKernel,
    TwoPhotonAmplitude,
    coincidence_diagonal,
    evolve,
    forward_vs_reversed_young,
    forward_young,
    kernel_of,
    spdc_initial,
    young_coincidence_at,
)
from .grid import (
    Grid1D,
    Grid2D,
    SampledField,
    inner_product,
    inverse_unitary_fourier,
    point_source,
    power,
    unitary_fourier,
)
from .modes import (
    AuditReport,
    FinalMode,
    MixtureWeights,
    TwoPhotonCoeff,
    forward_prob_general,
    forward_prob_single,
    mixed_reconstruction,
    norm_factor,
    pair_overlap,
    random_coeff,
    random_mode,
    reversed_intensity_conditional,
    reversed_intensity_single,
    time_reversal_audit,
)

__version__ = "0.1.0"

__all__ = [
    "AuditReport", "AuditSpec", "CircularAperture", "ConfigurationError",
    "DeltaComb", "DomainError", "DoubleSlit", "EquivalenceReport",
    "ExperimentConfig", "FinalMode", "FocusParams", "FourierLens",
    "FreeSpaceFourier", "Grid1D", "Grid2D", "GridMismatchError", "GridSpec",
    "Magnifier", "MixtureWeights", "OpticalTrain", "PinholeSample",
    "QuadratureError", "SHG", "SampledField", "SamplingError", "ShapeError",
    "SingleParticleKernel", "SweepSpec", "TwoFWithOffset",
    "TwoPhotonAmplitude", "TwoPhotonCoeff", "UnsupportedElementError",
    "YoungParams", "apply_circular_aperture", "apply_double_slit",
    "apply_element", "apply_fourier_lens", "coincidence_diagonal",
    "element_from_dict", "element_to_dict", "evolve", "focus_stage_field",
    "forward_prob_general", "forward_prob_single", "forward_vs_reversed_young",
    "forward_young", "free_space_fourier", "fwhm", "inner_product",
    "inverse_unitary_fourier", "kernel_of", "load_config", "magnify",
    "mixed_reconstruction", "norm_factor", "pair_overlap", "pinhole_intensity",
    "point_source", "power", "random_coeff", "random_mode",
    "reversed_focus_train", "reversed_intensity_conditional",
    "reversed_intensity_single", "reversed_young_train", "run_train", "shg",
    "sinc", "somb", "spdc_initial", "spot_axial", "spot_lateral",
    "spot_offaxis_two_photon", "time_reversal_audit", "train_from_dict",
    "train_from_json", "train_to_dict", "train_to_json", "two_f_with_offset",
    "uniform_disk_transform", "unitary_fourier", "validate",
    "young_classical", "young_coincidence_at", "young_stage_field",
    "young_two_photon",
]
