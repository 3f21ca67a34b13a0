"""Closed magnetic flux lines: linking, potentials, phases, interference."""
from .abphase import (
    PhaseParams,
    ab_phase_circulation,
    ab_phase_crossing,
    ab_phase_flux,
    ab_phase_solid_angle,
    ab_phase_topological,
    invariance_suite,
)
from .curves import (
    ClosedCurve,
    DeformationSpec,
    deform_homotopy,
    load_curve,
    make_circle,
    make_torus_knot,
    min_distance,
    resample,
    save_curve,
)
from .errors import (
    ClearanceError,
    FluxlineError,
    GeometryError,
    SchemaError,
    UnderResolvedError,
)
from .field import (
    FluxLine,
    circulation,
    curl_check,
    divergence_check,
    flux_through,
    potential_gradient_identity,
    vector_potential,
)
from .gauge import (
    SolenoidConfig,
    open_path_gauge_shift,
    singular_gauge_closed_line_demo,
    solenoid_potential,
    solenoid_singular_gauge_demo,
    surface_gauge_circulation,
)
from .interference import (
    Pattern,
    TwoSlitConfig,
    ab_shift_analytic,
    ab_shift_measured,
    beam_geometry,
    density,
    fringe_spacing,
    pattern,
    psi_one_slit,
    quantization_report,
    reduced_density,
    write_pattern,
)
from .topology import (
    LinkingResult,
    Surface,
    crossing_linking,
    gauss_linking,
    grad_solid_angle,
    load_surface,
    save_surface,
    solid_angle,
    span_surface,
    surface_point_distance,
)

__version__ = "0.1.0"

__all__ = [
    "ClosedCurve", "DeformationSpec", "make_circle", "make_torus_knot",
    "resample", "deform_homotopy", "min_distance", "save_curve", "load_curve",
    "LinkingResult", "Surface", "gauss_linking", "span_surface",
    "crossing_linking", "solid_angle", "grad_solid_angle", "save_surface",
    "load_surface", "surface_point_distance",
    "FluxLine", "vector_potential", "circulation", "flux_through",
    "divergence_check", "curl_check", "potential_gradient_identity",
    "SolenoidConfig", "surface_gauge_circulation", "open_path_gauge_shift",
    "solenoid_potential", "solenoid_singular_gauge_demo",
    "singular_gauge_closed_line_demo",
    "PhaseParams", "ab_phase_topological", "ab_phase_circulation",
    "ab_phase_flux", "ab_phase_solid_angle", "ab_phase_crossing",
    "invariance_suite",
    "TwoSlitConfig", "Pattern", "psi_one_slit", "density", "reduced_density",
    "pattern", "fringe_spacing", "beam_geometry", "ab_shift_analytic",
    "ab_shift_measured", "quantization_report", "write_pattern",
    "FluxlineError", "GeometryError", "ClearanceError", "UnderResolvedError",
    "SchemaError",
    "__version__",
]
