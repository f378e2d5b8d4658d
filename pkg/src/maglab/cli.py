"""Command-line front end.

    mag table <id> [--format human|json|csv]
    mag verify <suite> [--seed N] [--tol X] [--format human|json]
    mag run <config.json> [--out path] [--format json|csv]

Exit codes: 0 success, 1 verification residual above tolerance,
2 usage or configuration error, 3 numeric failure.
"""

import argparse
import csv
import io
import sys

import numpy as np

from . import config as cfgmod
from . import observatory as obs
from . import transport as tr
from . import verify
from .constants import C, G, from_cgs
from .errors import ConfigError, MaglabError
from .spacetimes import friedmann as fr
from .spacetimes import schwarzschild as sw
from .spacetimes.synthetic import constant_torsion_space, random_point, random_space

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3


# ---------------------------------------------------------------------------
# formatting


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(v) if isinstance(v, float) else ("" if v is None else v) for v in row])
    return buf.getvalue()


def table_document(report):
    outputs = {f"{e.row}/{e.quantity}": (e.computed, e.unit) for e in report.entries}
    doc = cfgmod.result_document("table", {"table": report.table_id}, outputs, {"notes": report.notes})
    doc["comparison"] = [
        {
            "row": e.row,
            "quantity": e.quantity,
            "unit": e.unit,
            "computed": e.computed,
            "reference": e.reference,
            "rel_delta": e.rel_delta,
            "abs_delta": e.abs_delta,
        }
        for e in report.entries
    ]
    doc["title"] = report.title
    return doc


def format_table(report, fmt):
    if fmt == "json":
        return cfgmod.dumps(table_document(report))
    if fmt == "csv":
        rows = [(e.row, e.quantity, e.unit, e.computed, e.reference, e.rel_delta) for e in report.entries]
        return _csv_text(["row", "quantity", "unit", "computed", "reference", "rel_delta"], rows)
    lines = [f"Table {report.table_id}: {report.title}", ""]
    lines.append(f"{'row':<18} {'quantity':<18} {'unit':<9} {'computed':>18} {'reference':>16} {'rel. delta':>11}")
    for e in report.entries:
        lines.append(
            f"{e.row:<18} {e.quantity:<18} {e.unit:<9} {e.computed:>18.10g} {e.reference:>16.10g} {e.rel_delta:>11.2e}"
        )
    for row, note in report.notes.items():
        for key, value in note.items():
            if value is not None:
                shown = f"{value:.6g}" if isinstance(value, float) else value
                lines.append(f"  note {row}: {key} = {shown}")
    return "\n".join(lines) + "\n"


def format_document(doc, fmt):
    if fmt == "csv":
        rows = [(name, item["value"], item["unit"]) for name, item in sorted(doc["outputs"].items())]
        return _csv_text(["name", "value", "unit"], rows)
    return cfgmod.dumps(doc)


# ---------------------------------------------------------------------------
# scenario operations


def _schwarzschild(st):
    if "mass" in st:
        mass = cfgmod.quantity(st["mass"])
        return sw.schwarzschild_space(mass=mass), mass
    rg = cfgmod.quantity(st["rg"])
    return sw.schwarzschild_space(rg=rg), rg * C**2 / (2.0 * G)


def _scale(st):
    sc = st.get("scale", {"kind": "cosh"})
    if sc["kind"] == "cosh":
        return fr.ScaleFactor.cosh()
    if "exponent" not in sc:
        raise ConfigError("invalid config at spacetime/scale: power scale needs 'exponent'")
    return fr.ScaleFactor.power(sc["exponent"], sc.get("t0", 1.0))


def _need(params, *keys):
    for key in keys:
        if key not in params:
            raise ConfigError(f"invalid config at parameters: {key!r} is required for this spacetime")


def op_delay(st, p):
    _, mass = _schwarzschild(st)
    sc = obs.OrbitScenario(mass, radius=cfgmod.quantity(p.get("radius")), period=cfgmod.quantity(p.get("period")))
    res = obs.time_delay(sc, p.get("radius_source"))
    outputs = {
        "delta_t": (res.delta_t, "s"),
        "delta_s": (res.delta_s, "cm"),
        "radius": (res.radius, "cm"),
        "period": (res.period, "s"),
        "kepler_vs_given": (res.kepler_discrepancy, "1"),
    }
    return outputs, {"radius_source": res.radius_source}


def op_doppler(st, p):
    _, mass = _schwarzschild(st)
    lam = p.get("wavelength")
    sc = obs.OrbitScenario(
        mass,
        r_peri=cfgmod.quantity(p["r_peri"]),
        r_apo=cfgmod.quantity(p["r_apo"]),
        wavelength=None if lam is None else from_cgs(cfgmod.quantity(lam), "um"),
    )
    res = obs.s2_doppler(sc)
    outputs = {}
    for tag, pt in (("peri", res.pericentre), ("apo", res.apocentre)):
        outputs[f"{tag}_radius"] = (pt.radius, "cm")
        outputs[f"{tag}_speed"] = (pt.speed, "cm/s")
        outputs[f"{tag}_local_speed"] = (pt.local_speed, "cm/s")
        outputs[f"{tag}_gravitational_factor"] = (pt.gravitational, "1")
        outputs[f"{tag}_kinematic_factor"] = (pt.kinematic, "1")
        outputs[f"{tag}_ratio"] = (pt.ratio, "1")
        outputs[f"{tag}_wavelength"] = (pt.wavelength, "um")
    outputs["delta_wavelength"] = (res.delta_wavelength, "angstrom")
    return outputs, {"speed_model": "vis-viva"}


def op_redshift(st, p):
    if st["kind"] == "schwarzschild":
        _need(p, "r_emit", "r_obs")
        space, _ = _schwarzschild(st)
        r1, r2 = cfgmod.quantity(p["r_emit"]), cfgmod.quantity(p["r_obs"])
        omega = float(p.get("omega", 1.0))
        closed = sw.radial_photon_redshift(space, r1, r2, omega)
        ode, _ = sw.radial_photon_ode(space, r1, r2, omega)
        outputs = {
            "omega_obs_closed_form": (closed, "1/s"),
            "omega_obs_ode": (ode, "1/s"),
            "rel_difference": (abs(ode / closed - 1.0), "1"),
        }
        return outputs, {"route": "closed form and null-ray ODE"}
    _need(p, "t1", "chi1", "chi2")
    space = fr.friedmann_space(st.get("model", "closed"), _scale(st))
    t1, chi1, chi2 = float(p["t1"]), float(p["chi1"]), float(p["chi2"])
    k, kdot, t2 = fr.friedmann_redshift(space, t1, chi1, chi2)
    ray = fr.null_ray(space, t1, t2, chi1=chi1)
    drift = float(np.max(np.abs(ray["a_omega"] / ray["a_omega"][0] - 1.0)))
    outputs = {
        "K": (k, "1"),
        "K_dot": (kdot, "1/time"),
        "K_ode": (ray["omega"][-1] / ray["omega"][0], "1"),
        "t2": (t2, "time"),
        "a_omega_drift": (drift, "1"),
    }
    return outputs, {"chart": "conformal"}


def op_boost(st, p):
    if st["kind"] == "friedmann":
        _need(p, "t", "chi", "V")
        space = fr.cosmic_space(st.get("model", "closed"), _scale(st))
        x = np.array([float(p["t"]), float(p["chi"]), 0.5 * np.pi, 0.0])
        e, ep = fr.friedmann_boost(space, x, V=float(p["V"]))
        e0, e1 = fr.friedmann_boost_closed_form(space, x, float(p["V"]))
        diff = max(
            np.max(np.abs(ep.vectors[:, 0] - e0)) / np.max(np.abs(e0)),
            np.max(np.abs(ep.vectors[:, 1] - e1)) / np.max(np.abs(e1)),
        )
        outputs = {
            "e0_t": (ep.vectors[0, 0], "s/cm"),
            "e0_chi": (ep.vectors[1, 0], "1/cm"),
            "e1_t": (ep.vectors[0, 1], "s/cm"),
            "e1_chi": (ep.vectors[1, 1], "1/cm"),
            "orthonormality_error": (ep.orthonormality_error(space.metric(x)), "1"),
            "closed_form_difference": (diff, "1"),
        }
        return outputs, {"chart": "cosmic time"}
    _need(p, "r")
    space, _ = _schwarzschild(st)
    r = cfgmod.quantity(p["r"])
    x = np.array([0.0, r, 0.5 * np.pi, 0.0])
    if p.get("direction", "orbital") == "orbital":
        omega = float(p["omega"]) if "omega" in p else sw.kepler_angular_speed(space, r)
        e, ep = obs.orbital_boost_frame(space, r, omega)
        a, b = obs.orbital_boost_closed_form(space, r, omega)
        speed = obs.measured_orbital_speed(space, r, omega)
        cols = (0, 2)
        names = ("e0", "e2")
    else:
        _need(p, "v")
        e, ep = obs.radial_boost_frame(space, r, float(p["v"]))
        a, b = obs.radial_boost_closed_form(space, r, float(p["v"]))
        speed = obs.radial_speed(space, r, float(p["v"]))
        cols = (0, 1)
        names = ("e0", "e1")
    gamma = 1.0 / np.sqrt(1.0 - (speed / C) ** 2)
    diff = max(
        np.max(np.abs(ep.vectors[:, cols[0]] - a)) / np.max(np.abs(a)),
        np.max(np.abs(ep.vectors[:, cols[1]] - b)) / np.max(np.abs(b)),
    )
    outputs = {"V": (speed, "cm/s"), "gamma": (gamma, "1")}
    units = ("s/cm", "1", "1/cm", "1/cm")
    for name, col in zip(names, cols):
        for k, coord in enumerate(("t", "r", "phi", "theta")):
            if ep.vectors[k, col] != 0.0:
                outputs[f"{name}_{coord}"] = (ep.vectors[k, col], units[k])
    outputs["orthonormality_error"] = (ep.orthonormality_error(space.metric(x)), "1")
    outputs["closed_form_difference"] = (diff, "1")
    return outputs, {"direction": p.get("direction", "orbital")}


def _random_space(st, nonmetric_default=True, torsion_default=True):
    rng = np.random.default_rng(st.get("seed", 0))
    n = st["dim"]
    space = random_space(rng, n, torsion=st.get("torsion", torsion_default), nonmetric=st.get("nonmetric", nonmetric_default))
    return space, random_point(rng, n)


def _default_u(n):
    return np.r_[1.0, 0.2 * np.ones(n - 1)]


def op_tidal(st, p):
    space, x0 = _random_space(st)
    errors, ratio = verify.tidal_convergence(space, x0, _default_u(space.dim), p.get("eps", 1e-3), p.get("span", 1.5))
    outputs = {"error_eps": (errors[0], "1"), "error_half_eps": (errors[1], "1"), "convergence_ratio": (ratio, "1")}
    return outputs, {"oracle": "two nearby trajectories"}


def op_closure(st, p):
    if st["kind"] == "constant-torsion":
        n = st["dim"]
        comps = {}
        for a, b, c, v in st["components"]:
            if max(a, b, c) >= n:
                raise ConfigError("invalid config at spacetime/components: index out of range")
            comps[(a, b, c)] = v
        space = constant_torsion_space(n, comps)
        point = np.zeros(n)
    else:
        space, point = _random_space(st)
        n = space.dim
    if "point" in p:
        point = np.asarray(p["point"], dtype=float)
    a, b = np.asarray(p["a"], dtype=float), np.asarray(p["b"], dtype=float)
    if not (a.size == b.size == point.size == n):
        raise ConfigError(f"invalid config at parameters: vectors must have {n} components")
    rhos = p.get("rhos", [0.2, 0.1, 0.05])
    exponent, coeff, _ = tr.gap_convergence(space, point, a, b, rhos)
    target = tr.torsion_bilinear(space, point, a, b)
    outputs = {"exponent": (exponent, "1")}
    for k in range(n):
        outputs[f"coefficient_{k}"] = (coeff[k], "1")
        outputs[f"torsion_ab_{k}"] = (target[k], "1")
    k = int(np.argmax(np.abs(target)))
    outputs["coefficient_rel_error"] = (abs(coeff[k] / target[k] - 1.0) if target[k] != 0 else None, "1")
    return outputs, {"gap": "end(b then a) - end(a then b)"}


def op_extremal(st, p):
    space, x0 = _random_space(st, torsion_default=False)
    u0 = np.asarray(p.get("u0", _default_u(space.dim)), dtype=float)
    if u0.size != space.dim:
        raise ConfigError(f"invalid config at parameters/u0: need {space.dim} components")
    drift, distance, steps = verify.extremal_comparison(space, x0, u0, p.get("steps", 10_000), p.get("span", 2.0))
    outputs = {"length_drift": (drift, "1"), "distance_to_cartan_autoparallel": (distance, "1"), "steps": (steps, "1")}
    return outputs, {"integrator": "rk4"}


OPERATIONS = {
    "delay": op_delay,
    "doppler": op_doppler,
    "redshift": op_redshift,
    "boost": op_boost,
    "tidal": op_tidal,
    "closure": op_closure,
    "extremal-vs-autoparallel": op_extremal,
}


def run_config(config):
    """Execute a validated scenario and return its result document."""
    params = config.get("parameters", {})
    outputs, prov = OPERATIONS[config["operation"]](config["spacetime"], params)
    inputs = {"operation": config["operation"], "spacetime": config["spacetime"], "parameters": params}
    return cfgmod.result_document(config["operation"], inputs, outputs, prov)


# ---------------------------------------------------------------------------
# commands


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_table(args):
    report = obs.reproduce_table(args.id)
    _emit(format_table(report, args.format), None)
    return EXIT_OK


def cmd_verify(args):
    report = verify.run(args.suite, seed=args.seed, tol=args.tol)
    if args.format == "json":
        text = cfgmod.dumps(report.to_dict())
    else:
        text = report.format_text() + "\n"
    _emit(text, None)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def cmd_run(args):
    config = cfgmod.load(args.config)
    fmt = args.format or config.get("format", "json")
    doc = run_config(config)
    _emit(format_document(doc, fmt), args.out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="mag", description="Metric-affine geometry laboratory.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="regenerate a reference table")
    p.add_argument("id", help=f"table id, one of {', '.join(obs.TABLE_IDS)}")
    p.add_argument("--format", choices=("human", "json", "csv"), default="human")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="run a seeded verification suite")
    p.add_argument("suite", choices=verify.SUITES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None, help="override every max-residual tolerance")
    p.add_argument("--format", choices=("human", "json"), default="human")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("run", help="run a scenario from a JSON config")
    p.add_argument("config")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.set_defaults(func=cmd_run)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"mag: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MaglabError as exc:
        print(f"mag: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
