"""Surface gauge, open-path gauge dependence, singular-gauge demonstrations."""
import math
from dataclasses import dataclass

import numpy as np

from .curves import ClosedCurve, _segment_pair_distance
from .errors import GeometryError
from .field import FluxLine, _guard, circulation, potential_at
from .topology import (
    Surface,
    crossing_linking,
    solid_angle,
    span_surface,
    surface_point_distance,
)


@dataclass(frozen=True)
class SolenoidConfig:
    """Infinite straight solenoid along the z axis: radius R, total flux."""

    R: float
    flux: float

    def __post_init__(self):
        if not (math.isfinite(self.R) and self.R > 0.0):
            raise GeometryError("solenoid radius must be finite and positive")
        if not math.isfinite(self.flux):
            raise GeometryError("flux must be finite")


def surface_gauge_circulation(f: FluxLine, surf: Surface, path: ClosedCurve) -> float:
    """Circulation of the surface-supported potential along path.

    In the gauge where the potential is concentrated on the spanning surface,
    the circulation is flux times the signed number of path crossings; no
    line quadrature is involved.
    """
    return f.flux * crossing_linking(path, surf)


def _open_polyline(gamma):
    pts = np.asarray(gamma, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3 or pts.shape[0] < 2:
        raise GeometryError("an open path needs an (n >= 2, 3) point array")
    if not np.all(np.isfinite(pts)):
        raise GeometryError("open path points must be finite")
    d = np.diff(pts, axis=0)
    if float(np.min(np.einsum("ij,ij->i", d, d))) == 0.0:
        raise GeometryError("consecutive open path points must be distinct")
    return pts, d


def open_path_gauge_shift(f: FluxLine, gamma, threads=None):
    """Open-path phase integral before and after a single-valued gauge move.

    gamma: (n, 3) polyline from a start point O to an end point x. Returns
    (plain, transformed): plain is the line integral of A along gamma;
    transformed adds Lambda(x) - Lambda(O) for the gauge function
    Lambda = -(flux/4pi) * (signed solid angle of the spanned surface).
    The two agree only when gamma is closed or the endpoint solid angles
    happen to match: open-path phases are gauge dependent.
    """
    pts, seg = _open_polyline(gamma)
    p0, u = f.curve.segments()
    if float(_segment_pair_distance(pts[:-1], seg, p0, u).min()) <= _guard(f):
        raise GeometryError("open path touches or nearly touches the flux line")
    surf = span_surface(f.curve)
    scale = max(f.curve.diameter(), 1e-30)
    for end in (pts[0], pts[-1]):
        if surface_point_distance(end, surf) <= 1e-9 * scale:
            raise GeometryError(
                "open path endpoint lies on the spanning surface; "
                "the gauge function jumps there"
            )
    mids = 0.5 * (pts[:-1] + pts[1:])
    a = potential_at(f, mids, threads=threads)
    plain = float(np.einsum("ij,ij->", a, seg))
    lam = -(f.flux / (4.0 * np.pi))
    transformed = plain + lam * (
        solid_angle(pts[-1], surf, threads=threads)
        - solid_angle(pts[0], surf, threads=threads)
    )
    return plain, transformed


def solenoid_potential(s: SolenoidConfig, rho: float) -> float:
    """Azimuthal potential magnitude at cylinder radius rho.

    flux * rho / (2 pi R^2) inside, flux / (2 pi rho) outside; continuous
    at rho = R.
    """
    if not (rho >= 0.0 and math.isfinite(rho)):
        raise GeometryError("rho must be finite and >= 0")
    if rho <= s.R:
        return s.flux * rho / (2.0 * np.pi * s.R * s.R)
    return s.flux / (2.0 * np.pi * rho)


def _demo_loop(s: SolenoidConfig, rho0: float, n_turns: int, n: int):
    """Sampled loop, parameter midpoints and tangents dx/dt with dt = 1/n.

    n_turns != 0: circle of radius rho0 about the axis traversed n_turns
    times. n_turns == 0: circle centered at (rho0, 0, 0) of radius
    (rho0 - R)/2, which stays outside the solenoid and does not enclose it.
    """
    tm = (np.arange(n) + 0.5) / n
    tv = np.arange(n) / n
    if n_turns == 0:
        r = 0.5 * (rho0 - s.R)
        phim, phiv = 2.0 * np.pi * tm, 2.0 * np.pi * tv
        mids = np.column_stack(
            [rho0 + r * np.cos(phim), r * np.sin(phim), np.zeros(n)]
        )
        tangents = (
            np.column_stack([-r * np.sin(phim), r * np.cos(phim), np.zeros(n)])
            * (2.0 * np.pi / n)
        )
        verts = np.column_stack([rho0 + r * np.cos(phiv), r * np.sin(phiv), np.zeros(n)])
    else:
        phim = 2.0 * np.pi * n_turns * tm
        phiv = 2.0 * np.pi * n_turns * tv
        mids = rho0 * np.column_stack([np.cos(phim), np.sin(phim), np.zeros(n)])
        tangents = (
            rho0
            * np.column_stack([-np.sin(phim), np.cos(phim), np.zeros(n)])
            * (2.0 * np.pi * n_turns / n)
        )
        verts = rho0 * np.column_stack([np.cos(phiv), np.sin(phiv), np.zeros(n)])
    return mids, tangents, verts


def solenoid_singular_gauge_demo(s: SolenoidConfig, rho0: float, n_turns: int,
                                 n: int = 1024) -> dict:
    """Quantify how the 'gauge' that removes the outside potential pays for it.

    The multi-valued gauge function that cancels the azimuthal potential
    outside the solenoid leaves a potential whose circulation vanishes, so
    it changes the enclosed flux by a string contribution: the transformation
    is not a gauge symmetry. Returns circ_A (quadrature of the true outside
    potential around the loop), circ_Aprime (identically zero), string_flux
    (their difference), and the loop's winding number about the axis.
    """
    if not (rho0 > s.R and math.isfinite(rho0)):
        raise GeometryError("rho0 must exceed the solenoid radius")
    if n < 16:
        raise GeometryError("need at least 16 quadrature samples")
    mids, tangents, verts = _demo_loop(s, rho0, int(n_turns), n)
    rho = np.hypot(mids[:, 0], mids[:, 1])
    mag = np.array([solenoid_potential(s, float(v)) for v in rho])
    phihat = np.column_stack([-mids[:, 1] / rho, mids[:, 0] / rho, np.zeros(n)])
    circ_a = float(np.einsum("ij,ij->", mag[:, None] * phihat, tangents))
    ang = np.angle(verts[:, 0] + 1j * verts[:, 1])
    dphi = np.diff(np.concatenate([ang, ang[:1]]))
    dphi = (dphi + np.pi) % (2.0 * np.pi) - np.pi
    # vertex angular spacing stays below pi for n >= 16 per turn, so the
    # per-step wrap cannot drop a revolution
    winding = int(np.rint(dphi.sum() / (2.0 * np.pi)))
    circ_aprime = 0.0
    return {
        "circ_A": circ_a,
        "circ_Aprime": circ_aprime,
        "string_flux": circ_aprime - circ_a,
        "winding": winding,
    }


def singular_gauge_closed_line_demo(f: FluxLine, path: ClosedCurve, threads=None) -> dict:
    """Circulation before and after the multi-valued transformation that
    zeroes the closed flux line's potential everywhere.

    before is the honest circulation (flux times linking); after is 0
    identically, so any linked path loses its phase: the transformation has
    silently removed the field, which is the point of the demonstration.
    """
    return {"before": circulation(f, path, threads=threads), "after": 0.0}
