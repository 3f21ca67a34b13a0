"""Oriented closed polylines in 3-space: generators, resampling, deformation."""
import json
import math
from dataclasses import dataclass

import numpy as np

from . import parallel
from .errors import ClearanceError, GeometryError, SchemaError

DEFAULT_N = 1024


@dataclass(frozen=True)
class ClosedCurve:
    """Oriented closed polyline; the segment points[-1] -> points[0] closes it.

    points: (n, 3) float array, n >= 3, consecutive vertices distinct.
    Instances are immutable and safe to share across threads.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise GeometryError("curve points must form an (n, 3) array")
        if pts.shape[0] < 3:
            raise GeometryError("a closed curve needs at least 3 points")
        if not np.all(np.isfinite(pts)):
            raise GeometryError("curve points must be finite")
        seg = np.roll(pts, -1, axis=0) - pts
        if float(np.min(np.einsum("ij,ij->i", seg, seg))) == 0.0:
            raise GeometryError("consecutive curve points must be distinct")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def segments(self):
        """Segment start points and direction vectors, each (n, 3)."""
        return self.points, np.roll(self.points, -1, axis=0) - self.points

    def reversed(self) -> "ClosedCurve":
        """Same point set, opposite orientation."""
        return ClosedCurve(self.points[::-1].copy())

    def centroid(self):
        return self.points.mean(axis=0)

    def diameter(self) -> float:
        """Twice the largest vertex distance from the centroid; a scale proxy."""
        d = self.points - self.centroid()
        return 2.0 * float(np.sqrt(np.max(np.einsum("ij,ij->i", d, d))))

    def perimeter(self) -> float:
        _, d = self.segments()
        return float(np.linalg.norm(d, axis=1).sum())


@dataclass(frozen=True)
class DeformationSpec:
    """Parameters for a seeded band-limited random deformation.

    amplitude: total deformation scale (>= 0; zero means no motion).
    n_modes: Fourier modes of each per-step displacement (>= 1).
    seed: rng seed; identical seeds give identical sequences.
    steps: number of deformation steps (>= 1).
    clearance: minimum allowed distance to the obstacle curve (> 0).
    max_tries: rejection budget per step before giving up.
    """

    amplitude: float
    n_modes: int
    seed: int
    steps: int
    clearance: float
    max_tries: int = 50

    def __post_init__(self):
        if not (math.isfinite(self.amplitude) and self.amplitude >= 0.0):
            raise GeometryError("amplitude must be finite and >= 0")
        if self.n_modes < 1:
            raise GeometryError("n_modes must be >= 1")
        if self.steps < 1:
            raise GeometryError("steps must be >= 1")
        if not (math.isfinite(self.clearance) and self.clearance > 0.0):
            raise GeometryError("clearance must be finite and positive")
        if self.max_tries < 1:
            raise GeometryError("max_tries must be >= 1")


def _segment_pair_distance(p0, u, q0, v):
    """Distances between every segment of set one and every segment of set two.

    p0, u: (n1, 3) segment starts and direction vectors; q0, v: (n2, 3).
    Returns (n1, n2). Standard clamped quadratic minimization; exact for
    nondegenerate segments, parallel pairs handled by the flat-valley branch.
    """
    w = p0[:, None, :] - q0[None, :, :]
    a = np.einsum("ij,ij->i", u, u)[:, None]
    c = np.einsum("ij,ij->i", v, v)[None, :]
    b = u @ v.T
    d = np.einsum("ik,ijk->ij", u, w)
    e = np.einsum("jk,ijk->ij", v, w)
    den = a * c - b * b
    par = den <= 1e-13 * a * c
    s_num = np.where(par, 0.0, b * e - c * d)
    s_den = np.where(par, 1.0, den)
    t_num = np.where(par, e, a * e - b * d)
    t_den = np.where(par, c, den)
    # clamp s to [0, 1], moving t to its conditional optimum on the active edge
    lo = s_num < 0.0
    hi = s_num > s_den
    s_num = np.where(lo, 0.0, np.where(hi, s_den, s_num))
    t_num = np.where(lo, e, np.where(hi, e + b, t_num))
    t_den = np.where(lo | hi, c, t_den)
    # clamp t to [0, 1]; where t was clamped, s gets its own conditional optimum
    lo = t_num < 0.0
    hi = t_num > t_den
    s = np.where(
        lo,
        np.clip(-d / a, 0.0, 1.0),
        np.where(hi, np.clip((b - d) / a, 0.0, 1.0), s_num / s_den),
    )
    t = np.clip(np.where(lo, 0.0, np.where(hi, 1.0, t_num / t_den)), 0.0, 1.0)
    diff = w + s[:, :, None] * u[:, None, :] - t[:, :, None] * v[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def min_distance(a: ClosedCurve, b: ClosedCurve, threads=None) -> float:
    """Minimum Euclidean distance over all segment pairs of two closed curves."""
    p0, u = a.segments()
    q0, v = b.segments()

    def block(i0, i1):
        return float(_segment_pair_distance(p0[i0:i1], u[i0:i1], q0, v).min())

    return float(parallel.ordered_chunk_min(block, p0.shape[0], threads=threads))


def point_segment_distance(x, p0, d):
    """Distances from points x (m, 3) to segments (p0, d) (k, 3); returns (m, k)."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    w = x[:, None, :] - p0[None, :, :]
    dd = np.einsum("ij,ij->i", d, d)[None, :]
    t = np.clip(np.einsum("jk,ijk->ij", d, w) / dd, 0.0, 1.0)
    diff = w - t[:, :, None] * d[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def distance_to_curve(x, c: ClosedCurve):
    """Distance from each point in x to the curve polyline; (m,) or scalar."""
    p0, d = c.segments()
    out = point_segment_distance(x, p0, d).min(axis=1)
    return float(out[0]) if np.asarray(x).ndim == 1 else out


def _min_nonadjacent_self_distance(points) -> float:
    pts = np.asarray(points, dtype=float)
    n = pts.shape[0]
    u = np.roll(pts, -1, axis=0) - pts
    dmat = _segment_pair_distance(pts, u, pts, u)
    i = np.arange(n)
    dmat[i, i] = np.inf
    dmat[i, (i + 1) % n] = np.inf
    dmat[i, (i - 1) % n] = np.inf
    return float(dmat.min())


def _check_self_avoiding(points, label):
    scale = float(np.max(np.abs(points))) or 1.0
    if _min_nonadjacent_self_distance(points) < 1e-12 * scale:
        raise GeometryError(f"{label}: non-adjacent segments intersect")


def _circle_frame(normal):
    nv = np.asarray(normal, dtype=float)
    nn = np.linalg.norm(nv)
    if nn == 0.0 or not np.all(np.isfinite(nv)):
        raise GeometryError("circle normal must be a nonzero finite vector")
    nv = nv / nn
    helper = np.array([1.0, 0.0, 0.0])
    if abs(nv[0]) > 0.9:
        helper = np.array([0.0, 1.0, 0.0])
    e1 = helper - np.dot(helper, nv) * nv
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(nv, e1)
    return e1, e2


def make_circle(center, radius, normal, n: int = DEFAULT_N) -> ClosedCurve:
    """Uniformly sampled circle, right-handed about the given normal."""
    if not (radius > 0.0 and math.isfinite(radius)):
        raise GeometryError("circle radius must be positive")
    if n < 3:
        raise GeometryError("a circle needs at least 3 samples")
    e1, e2 = _circle_frame(normal)
    theta = 2.0 * np.pi * np.arange(n) / n
    pts = (
        np.asarray(center, dtype=float)
        + radius * np.cos(theta)[:, None] * e1
        + radius * np.sin(theta)[:, None] * e2
    )
    # analytic circles cannot self-intersect; skip the O(n^2) scan
    return ClosedCurve(pts)


def make_torus_knot(p: int, q: int, R: float, r: float, n: int = DEFAULT_N) -> ClosedCurve:
    """Curve on a torus: azimuth p*theta, tube phase q*theta.

    rho(theta) = R + r*sin(q*theta), z(theta) = r*cos(q*theta). Links the
    circle rho = R, z = 0 exactly q times; (1, 0) degenerates to a planar
    circle of radius R at height r.
    """
    if math.gcd(p, q) != 1:
        raise GeometryError("p and q must be coprime")
    if not (R > r > 0.0):
        raise GeometryError("need R > r > 0")
    if n < 16 * max(abs(p), abs(q), 1):
        raise GeometryError("n too small to resolve the knot; need >= 16*max(p, q)")
    theta = 2.0 * np.pi * np.arange(n) / n
    rho = R + r * np.sin(q * theta)
    pts = np.column_stack(
        [rho * np.cos(p * theta), rho * np.sin(p * theta), r * np.cos(q * theta)]
    )
    _check_self_avoiding(pts, "torus knot")
    return ClosedCurve(pts)


def resample(c: ClosedCurve, n: int) -> ClosedCurve:
    """Resample to n points at uniform arc length by linear interpolation."""
    if n < 3:
        raise GeometryError("resample target must be >= 3 points")
    pts = c.points
    closed = np.vstack([pts, pts[:1]])
    seg = np.diff(closed, axis=0)
    seglen = np.linalg.norm(seg, axis=1)
    cum = np.concatenate([[0.0], np.cumsum(seglen)])
    s = np.arange(n) * (cum[-1] / n)
    idx = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, pts.shape[0] - 1)
    frac = (s - cum[idx]) / seglen[idx]
    return ClosedCurve(closed[idx] + frac[:, None] * seg[idx])


def fourier_displacement(rng, theta, n_modes: int):
    """Band-limited random vector field over the curve parameter; (n, 3)."""
    coef = rng.normal(size=(n_modes, 2, 3))
    disp = np.zeros((theta.shape[0], 3))
    for m in range(n_modes):
        disp += np.outer(np.cos((m + 1) * theta), coef[m, 0])
        disp += np.outer(np.sin((m + 1) * theta), coef[m, 1])
    return disp


def deform_homotopy(c: ClosedCurve, obstacle: ClosedCurve, spec: DeformationSpec, threads=None):
    """Deform c in spec.steps random smooth steps while keeping clearance.

    Returns spec.steps + 1 curves, the first being c. Candidate steps closer
    than spec.clearance to the obstacle are rejected and redrawn from the
    seeded generator, so the output is deterministic for a fixed seed. The
    per-step motion is capped at half the clearance: successive curves then
    cannot jump across the obstacle, so the homotopy class relative to the
    obstacle is preserved, not just sampled.
    """
    d0 = min_distance(c, obstacle, threads=threads)
    if d0 <= spec.clearance:
        raise ClearanceError(
            f"initial clearance {d0:.6g} is not above the required {spec.clearance:.6g}"
        )
    rng = np.random.default_rng(spec.seed)
    theta = 2.0 * np.pi * np.arange(c.n) / c.n
    step_size = min(spec.amplitude / spec.steps, 0.5 * spec.clearance)
    out = [c]
    cur = c
    for _ in range(spec.steps):
        for attempt in range(spec.max_tries + 1):
            if attempt == spec.max_tries:
                raise ClearanceError(
                    f"no clearance-respecting step found in {spec.max_tries} tries"
                )
            disp = fourier_displacement(rng, theta, spec.n_modes)
            peak = float(np.sqrt(np.max(np.einsum("ij,ij->i", disp, disp))))
            if peak == 0.0:
                continue
            cand = ClosedCurve(cur.points + (step_size / peak) * disp)
            if min_distance(cand, obstacle, threads=threads) > spec.clearance:
                break
        out.append(cand)
        cur = cand
    return out


def save_curve(c: ClosedCurve, path):
    """Write the curve as JSON {"points": [[x, y, z], ...]}; closure implicit."""
    with open(path, "w") as fh:
        json.dump({"points": c.points.tolist()}, fh)
        fh.write("\n")


def load_curve(path) -> ClosedCurve:
    """Read a curve JSON file; best-effort geometry validation."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from e
    if not isinstance(data, dict) or "points" not in data:
        raise SchemaError(f"{path}: expected an object with a 'points' field")
    pts = np.asarray(data["points"], dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3 or pts.shape[0] < 3:
        raise SchemaError(f"{path}: 'points' must be an (n >= 3, 3) array")
    try:
        curve = ClosedCurve(pts)
        _check_self_avoiding(pts, path)
    except GeometryError as e:
        raise SchemaError(f"{path}: {e}") from e
    return curve
