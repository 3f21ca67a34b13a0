"""Command line driver for linking, phases, fields, gauges, interference.

Exit codes: 0 success; 2 bad input (schema, validation, geometry); 3 a
quadrature residual exceeded tol; 4 a clearance violation. Reports embed the
fully resolved configuration and identical configs reproduce byte-identical
outputs.
"""
import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .abphase import (
    PhaseParams,
    ab_phase_circulation,
    ab_phase_crossing,
    ab_phase_flux,
    ab_phase_solid_angle,
    ab_phase_topological,
    invariance_suite,
)
from .curves import ClosedCurve, DeformationSpec, load_curve, make_circle, make_torus_knot
from .errors import ClearanceError, GeometryError, SchemaError, UnderResolvedError
from .field import FluxLine, vector_potential
from .gauge import SolenoidConfig, singular_gauge_closed_line_demo, solenoid_singular_gauge_demo
from .interference import (
    TwoSlitConfig,
    ab_shift_analytic,
    ab_shift_measured,
    beam_geometry,
    fringe_spacing,
    pattern,
    write_pattern,
)
from .topology import crossing_linking, gauss_linking, span_surface


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write(path, text):
    with open(path, "w") as fh:
        fh.write(text)


def _resolve(args, defaults: dict) -> dict:
    """defaults, overridden by --config file values, overridden by flags."""
    resolved = dict(defaults)
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                file_cfg = json.load(fh)
        except OSError as e:
            raise SchemaError(f"cannot read config: {e}") from e
        except json.JSONDecodeError as e:
            raise SchemaError(
                f"{args.config}: line {e.lineno} column {e.colno}: {e.msg}"
            ) from e
        if not isinstance(file_cfg, dict):
            raise SchemaError(f"{args.config}: config must be a JSON object")
        unknown = sorted(set(file_cfg) - set(defaults))
        if unknown:
            raise SchemaError(f"{args.config}: unknown config keys {unknown}")
        resolved.update(file_cfg)
    for key in defaults:
        val = getattr(args, key, None)
        if val is not None:
            resolved[key] = val
    return resolved


def _embedded(resolved: dict) -> dict:
    return {k: v for k, v in resolved.items() if k != "output"}


def _preset_curves(name: str, n: int):
    """(flux_curve, second_curve) for a named built-in configuration."""
    unit = make_circle((0.0, 0.0, 0.0), 1.0, (0.0, 0.0, 1.0), n)
    if name == "hopf":
        return unit, make_circle((1.0, 0.0, 0.0), 1.0, (0.0, 1.0, 0.0), n)
    if name == "unlinked":
        return unit, make_circle((4.0, 0.0, 3.0), 1.0, (0.0, 0.0, 1.0), n)
    if name == "l2":
        return unit, make_torus_knot(1, 2, 1.0, 0.4, n)
    raise SchemaError(f"unknown preset {name!r}; choose hopf, unlinked, or l2")


def _integer(resolved, key):
    val = resolved[key]
    if not isinstance(val, (int, np.integer)) or isinstance(val, bool):
        raise SchemaError(f"{key} must be an integer, got {val!r}")
    return int(val)


def _positive_int(resolved, key, minimum=1):
    val = _integer(resolved, key)
    if val < minimum:
        raise SchemaError(f"{key} must be an integer >= {minimum}, got {val!r}")
    return val


def _finite_real(resolved, key):
    val = resolved[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)) \
            or not math.isfinite(float(val)):
        raise SchemaError(f"{key} must be a finite number, got {val!r}")
    return float(val)


def cmd_link(args) -> int:
    defaults = {
        "preset": None, "curve_a": None, "curve_b": None,
        "samples": 1024, "tol": 1e-3, "seed": 0, "threads": None,
        "output": None,
    }
    resolved = _resolve(args, defaults)
    n = _positive_int(resolved, "samples", 8)
    tol = _finite_real(resolved, "tol")
    if resolved["preset"]:
        a, b = _preset_curves(resolved["preset"], n)
    elif resolved["curve_a"] and resolved["curve_b"]:
        a = load_curve(resolved["curve_a"])
        b = load_curve(resolved["curve_b"])
    else:
        raise SchemaError("need --preset or both --curve-a and --curve-b")
    code = 0
    try:
        res = gauss_linking(a, b, tol=tol, threads=resolved["threads"])
    except UnderResolvedError as e:
        res = e.result
        code = 3
    crossing = crossing_linking(a, span_surface(b))
    report = {
        "raw": res.raw,
        "rounded": res.rounded,
        "residual": res.residual,
        "crossing_count": crossing,
        "agree": bool(res.rounded == crossing and code == 0),
        "config": _embedded(resolved),
    }
    text = _json_text(report)
    sys.stdout.write(text)
    if resolved["output"]:
        _write(resolved["output"], text)
    return code


def cmd_phase(args) -> int:
    defaults = {
        "preset": "hopf", "alpha": 1.0, "flux": 1.0,
        "samples": 1024, "tol": 1e-3, "seed": 0, "threads": None,
        "invariance": False, "steps": 20, "amplitude": 0.2,
        "clearance": 0.05, "modes": 3, "output": None,
    }
    resolved = _resolve(args, defaults)
    n = _positive_int(resolved, "samples", 8)
    tol = _finite_real(resolved, "tol")
    alpha = _finite_real(resolved, "alpha")
    flux = _finite_real(resolved, "flux")
    flux_curve, path = _preset_curves(resolved["preset"], n)
    f = FluxLine(curve=flux_curve, flux=flux)
    p = PhaseParams(alpha=alpha)
    threads = resolved["threads"]
    link = gauss_linking(path, flux_curve, tol=tol, threads=threads)
    forms = {
        "topological": ab_phase_topological(p, link.rounded),
        "circulation": ab_phase_circulation(p, f, path, threads=threads),
        "flux": ab_phase_flux(p, f, path),
        "solid_angle": ab_phase_solid_angle(p, path, f, threads=threads),
        "crossing": ab_phase_crossing(p, f, path),
    }
    spread = max(forms.values()) - min(forms.values())
    report = {
        "forms": forms,
        "linking": link.rounded,
        "max_spread": spread,
        "config": _embedded(resolved),
    }
    if resolved["invariance"]:
        spec = DeformationSpec(
            amplitude=_finite_real(resolved, "amplitude"),
            n_modes=_positive_int(resolved, "modes"),
            seed=_integer(resolved, "seed"),
            steps=_positive_int(resolved, "steps"),
            clearance=_finite_real(resolved, "clearance"),
        )
        report["invariance"] = invariance_suite(p, f, path, spec, threads=threads)
    text = _json_text(report)
    sys.stdout.write(text)
    if resolved["output"]:
        _write(resolved["output"], text)
    return 0


def cmd_field(args) -> int:
    defaults = {
        "flux": 1.0, "radius": 1.0, "start": 0.0, "stop": 2.0, "steps": 64,
        "samples": 1024, "seed": 0, "tol": 1e-3, "threads": None,
        "output": None,
    }
    resolved = _resolve(args, defaults)
    n = _positive_int(resolved, "samples", 8)
    steps = _positive_int(resolved, "steps", 2)
    flux = _finite_real(resolved, "flux")
    radius = _finite_real(resolved, "radius")
    z0 = _finite_real(resolved, "start")
    z1 = _finite_real(resolved, "stop")
    curve = make_circle((0.0, 0.0, 0.0), radius, (0.0, 0.0, 1.0), n)
    f = FluxLine(curve=curve, flux=flux)
    lines = ["z,A_x,A_y,A_z,A_axial_analytic"]
    for z in np.linspace(z0, z1, steps):
        a = vector_potential(f, (0.0, 0.0, float(z)), threads=resolved["threads"])
        analytic = flux * radius ** 2 / (2.0 * (radius ** 2 + z ** 2) ** 1.5)
        lines.append(
            f"{z:.15g},{a[0]:.15g},{a[1]:.15g},{a[2]:.15g},{analytic:.15g}"
        )
    csv_text = "\n".join(lines) + "\n"
    sys.stdout.write(csv_text)
    if resolved["output"]:
        out = Path(resolved["output"])
        _write(out, csv_text)
        _write(out.with_suffix(".json"), _json_text({"config": _embedded(resolved)}))
    return 0


def _two_slit_config(resolved) -> TwoSlitConfig:
    try:
        return TwoSlitConfig(
            x0=_finite_real(resolved, "x0"),
            b=_finite_real(resolved, "b"),
            t_a=_finite_real(resolved, "t_a"),
            t_b=_finite_real(resolved, "t_b"),
            m=_finite_real(resolved, "m"),
            v=_finite_real(resolved, "v"),
        )
    except GeometryError as e:
        raise SchemaError(str(e)) from e


def _shift_report(cfg: TwoSlitConfig, alpha: float, n_grid: int, half_width):
    off = pattern(cfg, 0.0, half_width=half_width, n_grid=n_grid)
    on = pattern(cfg, alpha, half_width=half_width, n_grid=n_grid)
    measured = ab_shift_measured(off, on)
    L, lam, d = beam_geometry(cfg)
    analytic = ab_shift_analytic(L, lam, d, alpha)
    spacing = 2.0 * np.pi * L * lam / d
    ks = np.arange(-3, 4)
    errs = np.abs(measured + ks * spacing - analytic)
    k = int(ks[int(np.argmin(errs))])
    err = float(errs.min())
    rel = err / abs(analytic) if abs(analytic) > 1e-12 else err / spacing
    return off, on, {
        "shift_measured": measured,
        "shift_analytic": analytic,
        "rel_err": rel,
        "wrap_turns": k,
        "fringe_spacing": spacing,
        "fringe_spacing_pattern": fringe_spacing(cfg),
    }


def cmd_interfere(args) -> int:
    defaults = {
        "alpha": math.pi, "x0": 0.5, "b": 0.1, "t_a": 1.0, "t_b": 3.0,
        "m": 1.0, "v": 1.0, "half_width": None, "n_grid": 4096,
        "seed": 0, "threads": None, "output": ".",
    }
    resolved = _resolve(args, defaults)
    cfg = _two_slit_config(resolved)
    alpha = _finite_real(resolved, "alpha")
    n_grid = _positive_int(resolved, "n_grid", 64)
    half_width = resolved["half_width"]
    if half_width is not None:
        half_width = float(half_width)
    off, on, report = _shift_report(cfg, alpha, n_grid, half_width)
    report["config"] = _embedded(resolved)
    out = Path(resolved["output"])
    out.mkdir(parents=True, exist_ok=True)
    write_pattern(off, out / "pattern_off.csv")
    write_pattern(on, out / "pattern_on.csv")
    text = _json_text(report)
    sys.stdout.write(text)
    _write(out / "report.json", text)
    return 0


def cmd_gauge_demo(args) -> int:
    defaults = {
        "mode": "solenoid", "flux": 1.0, "radius": 1.0, "rho0": 2.0,
        "turns": 1, "samples": 1024, "seed": 0, "tol": 1e-3,
        "threads": None, "output": None,
    }
    resolved = _resolve(args, defaults)
    n = _positive_int(resolved, "samples", 16)
    flux = _finite_real(resolved, "flux")
    if resolved["mode"] == "solenoid":
        s = SolenoidConfig(R=_finite_real(resolved, "radius"), flux=flux)
        record = solenoid_singular_gauge_demo(
            s, _finite_real(resolved, "rho0"), _integer(resolved, "turns"), n=n,
        )
    elif resolved["mode"] == "closed-line":
        flux_curve, path = _preset_curves("hopf", n)
        f = FluxLine(curve=flux_curve, flux=flux)
        record = singular_gauge_closed_line_demo(f, path, threads=resolved["threads"])
    else:
        raise SchemaError(f"unknown gauge-demo mode {resolved['mode']!r}")
    record = dict(record)
    record["config"] = _embedded(resolved)
    text = _json_text(record)
    sys.stdout.write(text)
    if resolved["output"]:
        _write(resolved["output"], text)
    return 0


def cmd_sweep(args) -> int:
    defaults = {
        "param": "alpha", "start": 0.0, "stop": 2.0 * math.pi, "steps": 8,
        "x0": 0.5, "b": 0.1, "t_a": 1.0, "t_b": 3.0, "m": 1.0, "v": 1.0,
        "half_width": None, "n_grid": 4096, "seed": 0, "threads": None,
        "output": None,
    }
    resolved = _resolve(args, defaults)
    if resolved["param"] != "alpha":
        raise SchemaError(
            f"unsupported sweep parameter {resolved['param']!r}; only 'alpha'"
        )
    steps = _positive_int(resolved, "steps", 2)
    n_grid = _positive_int(resolved, "n_grid", 64)
    cfg = _two_slit_config(resolved)
    half_width = resolved["half_width"]
    if half_width is not None:
        half_width = float(half_width)
    lines = ["param,value,shift_measured,shift_analytic,rel_err"]
    for val in np.linspace(_finite_real(resolved, "start"),
                           _finite_real(resolved, "stop"), steps):
        _, _, rep = _shift_report(cfg, float(val), n_grid, half_width)
        lines.append(
            "alpha,{:.15g},{:.15g},{:.15g},{:.15g}".format(
                val, rep["shift_measured"], rep["shift_analytic"], rep["rel_err"]
            )
        )
    csv_text = "\n".join(lines) + "\n"
    sys.stdout.write(csv_text)
    if resolved["output"]:
        out = Path(resolved["output"])
        _write(out, csv_text)
        _write(out.with_suffix(".json"), _json_text({"config": _embedded(resolved)}))
    return 0


def _add_common(sub):
    sub.add_argument("--config", metavar="FILE",
                     help="JSON file of option overrides (flags still win)")
    sub.add_argument("--seed", type=int, help="rng seed for seeded subcommands")
    sub.add_argument("--samples", type=int, metavar="N",
                     help="points per generated curve")
    sub.add_argument("--tol", type=float,
                     help="residual tolerance for linking quadrature")
    sub.add_argument("--threads", type=int,
                     help="worker threads (default: FLUXLINE_THREADS or all cores)")
    sub.add_argument("--output", "-o", metavar="PATH", help="write results here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fluxline",
        description="Linking numbers, flux-line potentials, phases, and "
                    "two-slit interference shifts.",
        epilog="Exit codes: 0 success, 2 bad input or geometry, "
               "3 under-resolved quadrature residual, 4 clearance violation.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    link = subs.add_parser("link", help="linking number of two closed curves")
    _add_common(link)
    link.add_argument("--preset", choices=["hopf", "unlinked", "l2"])
    link.add_argument("--curve-a", metavar="FILE", help="curve JSON file")
    link.add_argument("--curve-b", metavar="FILE", help="curve JSON file")
    link.set_defaults(func=cmd_link)

    phase = subs.add_parser("phase", help="flux phase in its five forms")
    _add_common(phase)
    phase.add_argument("--preset", choices=["hopf", "unlinked", "l2"])
    phase.add_argument("--alpha", type=float, help="dimensionless coupling")
    phase.add_argument("--flux", type=float, help="flux carried by the line")
    phase.add_argument("--invariance", action="store_const", const=True,
                       help="also run the four deformation-invariance suites")
    phase.add_argument("--steps", type=int, help="deformation steps")
    phase.add_argument("--amplitude", type=float, help="deformation amplitude")
    phase.add_argument("--clearance", type=float, help="minimum curve separation")
    phase.add_argument("--modes", type=int, help="deformation Fourier modes")
    phase.set_defaults(func=cmd_phase)

    field = subs.add_parser("field", help="on-axis potential sweep (CSV)")
    _add_common(field)
    field.add_argument("--flux", type=float)
    field.add_argument("--radius", type=float, help="flux circle radius")
    field.add_argument("--from", dest="start", type=float, metavar="Z0")
    field.add_argument("--to", dest="stop", type=float, metavar="Z1")
    field.add_argument("--steps", type=int, help="number of axis samples")
    field.set_defaults(func=cmd_field)

    interfere = subs.add_parser(
        "interfere", help="two-slit patterns and the measured fringe shift")
    _add_common(interfere)
    interfere.add_argument("--alpha", type=float, help="flux phase")
    interfere.add_argument("--x0", type=float, help="slit half-separation")
    interfere.add_argument("--b", type=float, help="Gaussian slit width")
    interfere.add_argument("--t-a", type=float, help="time at slit screen")
    interfere.add_argument("--t-b", type=float, help="time at detection screen")
    interfere.add_argument("--mass", dest="m", type=float)
    interfere.add_argument("--speed", dest="v", type=float,
                           help="longitudinal speed")
    interfere.add_argument("--half-width", type=float,
                           help="grid half width (default 20 broadenings)")
    interfere.add_argument("--grid", dest="n_grid", type=int,
                           help="grid points")
    interfere.set_defaults(func=cmd_interfere)

    gauge = subs.add_parser("gauge-demo",
                            help="singular-gauge demonstrations (JSON)")
    _add_common(gauge)
    mode = gauge.add_mutually_exclusive_group()
    mode.add_argument("--solenoid", dest="mode", action="store_const",
                      const="solenoid", help="infinite-solenoid demo (default)")
    mode.add_argument("--closed-line", dest="mode", action="store_const",
                      const="closed-line", help="closed flux line demo")
    gauge.add_argument("--flux", type=float)
    gauge.add_argument("--radius", type=float, help="solenoid radius")
    gauge.add_argument("--rho0", type=float, help="loop radius, > solenoid radius")
    gauge.add_argument("--turns", type=int, help="loop winding count")
    gauge.set_defaults(func=cmd_gauge_demo)

    sweep = subs.add_parser("sweep", help="shift vs a swept parameter (CSV)")
    _add_common(sweep)
    sweep.add_argument("--param", help="parameter to sweep (alpha)")
    sweep.add_argument("--from", dest="start", type=float, metavar="A0")
    sweep.add_argument("--to", dest="stop", type=float, metavar="A1")
    sweep.add_argument("--steps", type=int, help="sweep points (inclusive ends)")
    sweep.add_argument("--x0", type=float)
    sweep.add_argument("--b", type=float)
    sweep.add_argument("--t-a", type=float)
    sweep.add_argument("--t-b", type=float)
    sweep.add_argument("--mass", dest="m", type=float)
    sweep.add_argument("--speed", dest="v", type=float)
    sweep.add_argument("--half-width", type=float)
    sweep.add_argument("--grid", dest="n_grid", type=int)
    sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ClearanceError as e:
        print(f"error: {e}", file=sys.stderr)
        return 4
    except UnderResolvedError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except GeometryError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
