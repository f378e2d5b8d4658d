"""Scenario configuration files and result documents.

A scenario is a JSON object with three keys:

``operation``
    One of :data:`OPERATIONS`.
``spacetime``
    Object whose ``kind`` selects the space; remaining keys parameterize it.
``parameters``
    Operation parameters.

Physical quantities are either plain numbers in CGS units or objects
``{"value": x, "unit": u}`` with ``u`` one of the keys of
:data:`maglab.constants.UNITS`. Unknown keys are rejected everywhere.
"""

import json
import math

import jsonschema

from . import __version__
from .constants import C, G, M_SUN, UNITS, YEAR, to_cgs
from .errors import ConfigError

OPERATIONS = ("delay", "doppler", "redshift", "boost", "tidal", "closure", "extremal-vs-autoparallel")

_QUANTITY = {
    "oneOf": [
        {"type": "number"},
        {
            "type": "object",
            "properties": {"value": {"type": "number"}, "unit": {"enum": sorted(UNITS)}},
            "required": ["value", "unit"],
            "additionalProperties": False,
        },
    ]
}
_POSITIVE = {"type": "number", "exclusiveMinimum": 0}
_VECTOR = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 4}

_SPACETIMES = {
    "schwarzschild": {
        "properties": {"kind": {"const": "schwarzschild"}, "mass": _QUANTITY, "rg": _QUANTITY},
        "oneOf": [{"required": ["mass"]}, {"required": ["rg"]}],
    },
    "friedmann": {
        "properties": {
            "kind": {"const": "friedmann"},
            "model": {"enum": ["closed", "open"]},
            "chart": {"enum": ["conformal", "cosmic"]},
            "scale": {
                "type": "object",
                "properties": {"kind": {"enum": ["cosh", "power"]}, "exponent": {"type": "number"}, "t0": _POSITIVE},
                "required": ["kind"],
                "additionalProperties": False,
            },
        },
    },
    "constant-torsion": {
        "properties": {
            "kind": {"const": "constant-torsion"},
            "dim": {"type": "integer", "minimum": 2, "maximum": 4},
            "components": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "array",
                    "prefixItems": [{"type": "integer", "minimum": 0}] * 3 + [{"type": "number"}],
                    "minItems": 4,
                    "maxItems": 4,
                },
            },
        },
        "required": ["dim", "components"],
    },
    "random": {
        "properties": {
            "kind": {"const": "random"},
            "dim": {"type": "integer", "minimum": 2, "maximum": 4},
            "seed": {"type": "integer", "minimum": 0},
            "torsion": {"type": "boolean"},
            "nonmetric": {"type": "boolean"},
        },
        "required": ["dim"],
    },
}

_PARAMETERS = {
    "delay": {
        "spacetimes": ["schwarzschild"],
        "properties": {
            "radius": _QUANTITY,
            "period": _QUANTITY,
            "radius_source": {"enum": ["given", "kepler"]},
        },
        "anyOf": [{"required": ["radius"]}, {"required": ["period"]}],
    },
    "doppler": {
        "spacetimes": ["schwarzschild"],
        "properties": {"r_peri": _QUANTITY, "r_apo": _QUANTITY, "wavelength": _QUANTITY},
        "required": ["r_peri", "r_apo"],
    },
    "redshift": {
        "spacetimes": ["schwarzschild", "friedmann"],
        "properties": {
            "r_emit": _QUANTITY,
            "r_obs": _QUANTITY,
            "omega": _POSITIVE,
            "t1": {"type": "number"},
            "chi1": {"type": "number"},
            "chi2": {"type": "number"},
        },
    },
    "boost": {
        "spacetimes": ["schwarzschild", "friedmann"],
        "properties": {
            "direction": {"enum": ["orbital", "radial"]},
            "r": _QUANTITY,
            "omega": {"type": "number"},
            "v": {"type": "number"},
            "V": {"type": "number"},
            "t": {"type": "number"},
            "chi": {"type": "number"},
        },
    },
    "tidal": {
        "spacetimes": ["random"],
        "properties": {"eps": _POSITIVE, "span": _POSITIVE},
    },
    "closure": {
        "spacetimes": ["constant-torsion", "random"],
        "properties": {
            "point": _VECTOR,
            "a": _VECTOR,
            "b": _VECTOR,
            "rhos": {"type": "array", "items": _POSITIVE, "minItems": 2},
        },
        "required": ["a", "b"],
    },
    "extremal-vs-autoparallel": {
        "spacetimes": ["random"],
        "properties": {
            "steps": {"type": "integer", "minimum": 10},
            "span": _POSITIVE,
            "u0": _VECTOR,
        },
    },
}


def _object(props, **extra):
    return {"type": "object", "properties": props, "additionalProperties": False, **extra}


SCHEMA = _object(
    {
        "operation": {"enum": list(OPERATIONS)},
        "spacetime": {"type": "object", "properties": {"kind": {"enum": sorted(_SPACETIMES)}}, "required": ["kind"]},
        "parameters": {"type": "object"},
        "format": {"enum": ["json", "csv"]},
    },
    required=["operation", "spacetime"],
)
"""Top-level schema; spacetime and parameters are checked per kind afterwards."""


def spacetime_schema(kind):
    s = _SPACETIMES[kind]
    extra = {k: v for k, v in s.items() if k not in ("properties", "required")}
    return _object(s["properties"], required=["kind"] + s.get("required", []), **extra)


def parameters_schema(operation):
    s = _PARAMETERS[operation]
    return _object(s["properties"], **{k: v for k, v in s.items() if k not in ("properties", "spacetimes")})


def _check(instance, schema, root):
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(instance), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = "/".join([root] + [str(p) for p in err.absolute_path]) or "/"
        raise ConfigError(f"invalid config at {path}: {err.message}")


def validate(config):
    """Validate a parsed scenario.

    Raises
    ------
    ConfigError
        Naming the path of the first offending key.
    """
    _check(config, SCHEMA, "")
    kind = config["spacetime"]["kind"]
    _check(config["spacetime"], spacetime_schema(kind), "spacetime")
    op = config["operation"]
    params = config.get("parameters", {})
    _check(params, parameters_schema(op), "parameters")
    allowed = _PARAMETERS[op]["spacetimes"]
    if kind not in allowed:
        raise ConfigError(f"invalid config at spacetime/kind: operation {op!r} needs one of {allowed}")
    return config


def load(path):
    """Read and validate a scenario file."""
    try:
        with open(path, encoding="utf-8") as fh:
            config = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc.msg} (line {exc.lineno})") from exc
    return validate(config)


def quantity(item):
    """CGS value of a schema quantity (bare numbers are taken as CGS already)."""
    if item is None:
        return None
    if isinstance(item, dict):
        return to_cgs(item["value"], item["unit"])
    return float(item)


# ---------------------------------------------------------------------------
# result documents


def constants_provenance():
    return {
        "G": {"value": G, "unit": "cm^3 g^-1 s^-2"},
        "c": {"value": C, "unit": "cm/s"},
        "M_sun": {"value": M_SUN, "unit": "g"},
        "year": {"value": YEAR, "unit": "s"},
    }


def result_document(kind, inputs, outputs, provenance=None, tolerances=None):
    """Assemble a result document.

    ``outputs`` maps names to ``(value, unit)`` pairs; every number carries
    its unit and non-finite values become null. Nothing time- or host-dependent is recorded, so the same
    inputs give the same bytes.
    """
    outs = {}
    for name, (value, unit) in outputs.items():
        v = None if value is None else float(value)
        outs[name] = {"value": v if v is None or math.isfinite(v) else None, "unit": unit}
    prov = {"package": "maglab", "version": __version__, "constants": constants_provenance()}
    prov.update(provenance or {})
    return {
        "kind": kind,
        "inputs": inputs,
        "outputs": outs,
        "provenance": prov,
        "tolerances": tolerances or {},
    }


def dumps(doc):
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"
