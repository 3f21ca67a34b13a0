"""Vector potential of a closed flux line, circulations, counted fluxes."""
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import parallel
from .curves import ClosedCurve, distance_to_curve, min_distance
from .errors import GeometryError
from .quadrature import periodic_midpoints
from .topology import Surface, crossing_linking, grad_solid_angle

GUARD_FACTOR = 1e-6
DEFAULT_FD_STEP = 1e-3


@dataclass(frozen=True)
class FluxLine:
    """A closed curve carrying magnetic flux, in units where hbar = c = 1."""

    curve: ClosedCurve
    flux: float

    def __post_init__(self):
        if not isinstance(self.curve, ClosedCurve):
            raise GeometryError("FluxLine.curve must be a ClosedCurve")
        if not math.isfinite(self.flux):
            raise GeometryError("flux must be finite")


def _guard(f: FluxLine) -> float:
    return GUARD_FACTOR * f.curve.diameter()


def potential_at(f: FluxLine, xs, threads=None):
    """Vector potential at many points, (m, 3); callers enforce the guard.

    A(x) = (flux/4pi) integral of dx' x (x - x') / |x - x'|^3 over the line,
    evaluated at spectral parameter midpoints.
    """
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    mids, w = periodic_midpoints(f.curve.points)

    def block(i0, i1):
        r = xs[i0:i1, None, :] - mids[None, :, :]
        r3 = np.einsum("ijk,ijk->ij", r, r) ** 1.5
        cr = np.cross(np.broadcast_to(w, r.shape), r)
        return (cr / r3[:, :, None]).sum(axis=1)

    out = parallel.ordered_chunk_map(block, xs.shape[0], threads=threads)
    return out * (f.flux / (4.0 * np.pi))


def vector_potential(f: FluxLine, x, threads=None):
    """Vector potential at one point; errors inside the singular guard zone."""
    x = np.asarray(x, dtype=float)
    if distance_to_curve(x, f.curve) <= _guard(f):
        raise GeometryError("evaluation point is too close to the flux line")
    return potential_at(f, x, threads=threads)[0]


def circulation(f: FluxLine, path: ClosedCurve, threads=None) -> float:
    """Closed line integral of A along path; equals flux times linking number."""
    if min_distance(path, f.curve, threads=threads) <= _guard(f):
        raise GeometryError("path touches or nearly touches the flux line")
    mids, w = periodic_midpoints(path.points)
    a = potential_at(f, mids, threads=threads)
    return float(np.einsum("ij,ij->", a, w))


def flux_through(f: FluxLine, surf: Surface) -> float:
    """Flux carried through an oriented surface: a counted quantity.

    The field is confined to the line, so the flux is the line's signed
    crossing count through the surface times the flux it carries.
    """
    return f.flux * crossing_linking(f.curve, surf)


def _warn_if_coarse(f: FluxLine, x, h: float):
    dist = distance_to_curve(np.asarray(x, dtype=float), f.curve)
    if h > 0.1 * dist:
        warnings.warn(
            f"FD step h={h:.3g} is large next to the distance {dist:.3g} "
            "to the flux line; expect contaminated stencils",
            stacklevel=3,
        )


def _stencil(f: FluxLine, x, h: float, threads=None):
    """A at the six points x +- h*e_k; (2, 3 axes, 3 components)."""
    x = np.asarray(x, dtype=float)
    eye = np.eye(3)
    pts = np.vstack([x + h * eye, x - h * eye])
    a = potential_at(f, pts, threads=threads)
    return a[:3], a[3:]


def divergence_check(f: FluxLine, x, h: float = DEFAULT_FD_STEP, threads=None) -> float:
    """Central-difference divergence of A at x; near zero away from the line."""
    _warn_if_coarse(f, x, h)
    plus, minus = _stencil(f, x, h, threads=threads)
    return float(sum((plus[k, k] - minus[k, k]) for k in range(3)) / (2.0 * h))


def curl_check(f: FluxLine, x, h: float = DEFAULT_FD_STEP, threads=None):
    """Central-difference curl of A at x; (3,), near zero away from the line."""
    _warn_if_coarse(f, x, h)
    plus, minus = _stencil(f, x, h, threads=threads)
    d = (plus - minus) / (2.0 * h)
    # d[j, k] approximates dA_k / dx_j
    return np.array(
        [d[1, 2] - d[2, 1], d[2, 0] - d[0, 2], d[0, 1] - d[1, 0]]
    )


def potential_gradient_identity(f: FluxLine, x, threads=None) -> float:
    """Relative residual of A = (flux/4pi) grad(solid angle) at x."""
    a = vector_potential(f, x, threads=threads)
    g = (f.flux / (4.0 * np.pi)) * grad_solid_angle(x, f.curve, threads=threads)
    return float(np.linalg.norm(a - g) / max(np.linalg.norm(a), 1e-30))
