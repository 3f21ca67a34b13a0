"""The flux-line phase in its five equivalent forms, plus invariance suites.

All forms expose the physics through the single dimensionless coupling
alpha = (charge) x (flux) / (hbar c); the flux line's own flux value only
sets the shape-independent scale and cancels out of every phase.
"""
import math
from dataclasses import dataclass, replace

import numpy as np

from .curves import ClosedCurve, DeformationSpec, fourier_displacement, min_distance
from .errors import ClearanceError, GeometryError
from .field import FluxLine, _guard, circulation
from .quadrature import periodic_midpoints
from .topology import crossing_linking, grad_solid_angle_many, span_surface

DEFAULT_SUITE_TOL = 1e-3


@dataclass(frozen=True)
class PhaseParams:
    """alpha = q * flux / (hbar c), the only coupling the phase depends on."""

    alpha: float

    def __post_init__(self):
        if not math.isfinite(self.alpha):
            raise GeometryError("alpha must be finite")


def ab_phase_topological(p: PhaseParams, l: int) -> float:
    """Phase from the integer linking number alone: l * alpha radians."""
    return float(l) * p.alpha


def ab_phase_circulation(p: PhaseParams, f: FluxLine, path: ClosedCurve,
                         threads=None) -> float:
    """Phase from the gauge-invariant circulation of the vector potential.

    (alpha / flux) * circulation; computed at unit flux so a zero-flux line
    shape still defines the phase (alpha carries the physical flux).
    """
    unit = FluxLine(curve=f.curve, flux=1.0)
    return p.alpha * circulation(unit, path, threads=threads)


def ab_phase_flux(p: PhaseParams, f: FluxLine, path: ClosedCurve) -> float:
    """Phase from the flux carried through a surface spanning the path.

    alpha times the signed count of flux-line crossings through that
    surface; the nonlocal counted-flux reading of the same number.
    """
    return p.alpha * crossing_linking(f.curve, span_surface(path))


def ab_phase_solid_angle(p: PhaseParams, path: ClosedCurve, f: FluxLine,
                         threads=None) -> float:
    """Phase from the closed line integral of the solid-angle gradient.

    (alpha / 4pi) * closed integral of grad(solid angle of the flux curve)
    along the path. The gradient is the smooth single-branch one, whose
    closed integral is 4pi times the linking number; crossings of any
    particular spanning surface are bookkeeping of the multi-valued branch
    and carry no extra contribution here.
    """
    if min_distance(path, f.curve, threads=threads) <= _guard(f):
        raise GeometryError("path touches or nearly touches the flux line")
    mids, w = periodic_midpoints(path.points)
    g = grad_solid_angle_many(mids, f.curve, threads=threads)
    return (p.alpha / (4.0 * np.pi)) * float(np.einsum("ij,ij->", g, w))


def ab_phase_crossing(p: PhaseParams, f: FluxLine, path: ClosedCurve) -> float:
    """Phase picked up discretely as the path crosses a spanning surface.

    alpha times the signed count of path crossings through a surface
    spanning the flux curve.
    """
    return p.alpha * crossing_linking(path, span_surface(f.curve))


def _lockstep_deform(path: ClosedCurve, flux_curve: ClosedCurve,
                     spec: DeformationSpec, threads=None):
    """Deform both curves together, keeping their mutual clearance.

    Each curve moves at most a quarter of the clearance per step, so the
    relative motion between accepted states stays below half the clearance
    and the pair cannot pass through each other between steps.
    """
    d0 = min_distance(path, flux_curve, threads=threads)
    if d0 <= spec.clearance:
        raise ClearanceError(
            f"initial clearance {d0:.6g} is not above the required {spec.clearance:.6g}"
        )
    rng = np.random.default_rng(spec.seed)
    th_p = 2.0 * np.pi * np.arange(path.n) / path.n
    th_f = 2.0 * np.pi * np.arange(flux_curve.n) / flux_curve.n
    step = min(spec.amplitude / spec.steps, 0.25 * spec.clearance)
    states = [(path, flux_curve)]
    cur_p, cur_f = path, flux_curve
    for _ in range(spec.steps):
        for attempt in range(spec.max_tries + 1):
            if attempt == spec.max_tries:
                raise ClearanceError(
                    f"no clearance-respecting step found in {spec.max_tries} tries"
                )
            dp = fourier_displacement(rng, th_p, spec.n_modes)
            df = fourier_displacement(rng, th_f, spec.n_modes)
            pk_p = float(np.sqrt(np.max(np.einsum("ij,ij->i", dp, dp))))
            pk_f = float(np.sqrt(np.max(np.einsum("ij,ij->i", df, df))))
            if pk_p == 0.0 or pk_f == 0.0:
                continue
            cand_p = ClosedCurve(cur_p.points + (step / pk_p) * dp)
            cand_f = ClosedCurve(cur_f.points + (step / pk_f) * df)
            if min_distance(cand_p, cand_f, threads=threads) > spec.clearance:
                break
        states.append((cand_p, cand_f))
        cur_p, cur_f = cand_p, cand_f
    return states


def _suite_entry(phases, base, tol):
    devs = [abs(ph - base) for ph in phases]
    failed = next((i for i, d in enumerate(devs) if d >= tol), None)
    return {
        "phases": phases,
        "deviations": devs,
        "max_deviation": max(devs),
        "failed_step": failed,
    }


def invariance_suite(p: PhaseParams, f: FluxLine, path: ClosedCurve,
                     spec: DeformationSpec, tol: float = DEFAULT_SUITE_TOL,
                     threads=None) -> dict:
    """Check the four topological invariances of the phase.

    Sub-suites: deform the path, deform the flux curve, deform both at once,
    and swap the two roles along the simultaneous family. Each records the
    circulation-form phase at every step; a step whose phase strays from the
    initial value by tol or more is flagged with its index.
    """
    from .curves import deform_homotopy

    base = ab_phase_circulation(p, f, path, threads=threads)
    suites = {}

    path_steps = deform_homotopy(path, f.curve, spec, threads=threads)
    suites["path"] = _suite_entry(
        [ab_phase_circulation(p, f, c, threads=threads) for c in path_steps],
        base, tol,
    )

    flux_spec = replace(spec, seed=spec.seed + 1)
    flux_steps = deform_homotopy(f.curve, path, flux_spec, threads=threads)
    suites["flux_curve"] = _suite_entry(
        [
            ab_phase_circulation(p, FluxLine(curve=c, flux=f.flux), path,
                                 threads=threads)
            for c in flux_steps
        ],
        base, tol,
    )

    both_spec = replace(spec, seed=spec.seed + 2)
    states = _lockstep_deform(path, f.curve, both_spec, threads=threads)
    suites["simultaneous"] = _suite_entry(
        [
            ab_phase_circulation(p, FluxLine(curve=fc, flux=f.flux), pc,
                                 threads=threads)
            for pc, fc in states
        ],
        base, tol,
    )

    # role swap: the linking integrand is symmetric under exchanging the
    # curves, so using the path as the flux line must reproduce the phase
    suites["swap"] = _suite_entry(
        [
            ab_phase_circulation(p, FluxLine(curve=pc, flux=f.flux), fc,
                                 threads=threads)
            for pc, fc in states
        ],
        base, tol,
    )

    passed = all(s["failed_step"] is None for s in suites.values())
    return {
        "alpha": p.alpha,
        "tol": tol,
        "phase": base,
        "suites": suites,
        "passed": passed,
    }
