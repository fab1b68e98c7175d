"""JSON run-configuration: schema validation, defaults, object builders.

Configs are strict: unknown keys are rejected at every level, and every
default the tool fills in is materialized back into the echoed config, so
re-running the echo reproduces the run byte-for-byte (timestamp aside).
"""

from __future__ import annotations

import copy
import json
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from .convergence import MODULAR_FLAGS, RAW_FLAGS, SpaceParams
from .errors import ConfigError
from .experiments import THEOREMS, random_bounded_sequence
from .orlicz import (
    ConstantFamily,
    CustomFamily,
    ExpMinusOne,
    ExponentSequence,
    IndexPowerFamily,
    IndexScaledFamily,
    LinearSlope,
    MusielakOrliczFamily,
    OrliczFunction,
    Power,
    PowerOverP,
    RhoSequence,
    ScaledPower,
    SpikeFamily,
    Table,
)
from .sequences import (
    CesaroC1,
    Explicit,
    Geometric,
    Identity,
    LacunarySchedule,
    MatrixOperator,
    RowTable,
    Sequence,
    Shift,
    build_lacunary,
    geometric_tail,
)

DEFAULT_SEED = 12345

# ---------------------------------------------------------------------------
# component schemas
# ---------------------------------------------------------------------------

_NUM = {"type": "number"}
_POS_INT = {"type": "integer", "minimum": 1}

FUNCTION_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {
            "enum": ["power", "scaled_power", "power_over_p", "exp_minus_one", "linear", "table"]
        },
        "p": _NUM,
        "c": _NUM,
        "knots": {
            "type": "array",
            "items": {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2},
        },
    },
    "required": ["kind"],
    "additionalProperties": False,
}

FAMILY_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["constant", "index_scaled", "index_power", "spike", "custom"]},
        "function": FUNCTION_SCHEMA,
        "exponents": {"type": "array", "items": _NUM, "minItems": 1},
        "slopes": {"type": "object", "additionalProperties": _NUM},
        "default_slope": _NUM,
        "functions": {"type": "array", "items": FUNCTION_SCHEMA, "minItems": 1},
    },
    "required": ["kind"],
    "additionalProperties": False,
}

SCHEDULE_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["geometric", "explicit"]},
        "base": _NUM,
        "ratio": _NUM,
        "count": _POS_INT,
        "cut_points": {"type": "array", "items": {"type": "integer"}, "minItems": 2},
    },
    "required": ["kind"],
    "additionalProperties": False,
}

MATRIX_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["identity", "cesaro_c1", "shift", "row_table", "geometric_tail"]},
        "offset": {"type": "integer"},
        "rows": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2},
            },
        },
        "decay": _NUM,
        "x_bound": _NUM,
    },
    "required": ["kind"],
    "additionalProperties": False,
}

SCALARS_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["constant", "per_index"]},
        "value": _NUM,
        "values": {"type": "array", "items": _NUM, "minItems": 1},
    },
    "required": ["kind"],
    "additionalProperties": False,
}

SEQUENCE_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["explicit", "constant", "alternating01", "random_bounded"]},
        "values": {"type": "array", "items": _NUM, "minItems": 1},
        "value": _NUM,
        "horizon": _POS_INT,
        "center": _NUM,
        "radius": _NUM,
        "exception_density": {"type": "number", "minimum": 0, "maximum": 1},
        "exception_scale": _NUM,
        "seed": {"type": "integer", "minimum": 0},
    },
    "required": ["kind"],
    "additionalProperties": False,
}

SPACE_SCHEMA = {
    "type": "object",
    "properties": {
        "alpha": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "epsilon": {"type": "number", "exclusiveMinimum": 0},
        "L": _NUM,
        "m_max": {"type": "integer", "minimum": 0},
        "rho": SCALARS_SCHEMA,
        "exponents": SCALARS_SCHEMA,
        "matrix_tol": {"type": "number", "exclusiveMinimum": 0},
    },
    "additionalProperties": False,
}

VERDICT_SCHEMA = {
    "type": "object",
    "properties": {
        "tol": {"type": "number", "exclusiveMinimum": 0},
        "tail_window": {"type": ["integer", "null"], "minimum": 1},
        "slope_slack": {"type": ["number", "null"]},
    },
    "additionalProperties": False,
}

CONSTRUCTION_SCHEMA = {
    "type": "object",
    "properties": {
        "theorem": {"enum": ["thm37", "thm38"]},
        "nu": {"type": "number", "minimum": 0},
        "rho": {"type": "number", "exclusiveMinimum": 0},
        "r_max": _POS_INT,
        "alpha": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "m_max": {"type": ["integer", "null"], "minimum": 0},
        "nu_values": {"type": "array", "items": _NUM, "minItems": 1},
        "schedule": SCHEDULE_SCHEMA,
        "family": FAMILY_SCHEMA,
    },
    "required": ["theorem"],
    "additionalProperties": False,
}

COMMAND_SCHEMAS: dict[str, dict] = {
    "norms": {
        "type": "object",
        "properties": {
            "command": {"const": "norms"},
            "sequence": SEQUENCE_SCHEMA,
            "family": FAMILY_SCHEMA,
            "rho": SCALARS_SCHEMA,
            "luxemburg_tol": {"type": "number", "exclusiveMinimum": 0},
            "orlicz_tol": {"type": "number", "exclusiveMinimum": 0},
            "complementary": {
                "type": "object",
                "properties": {
                    "indices": {"type": "array", "items": _POS_INT, "minItems": 1},
                    "v_values": {"type": "array", "items": _NUM, "minItems": 1},
                    "u_max": {"type": "number", "exclusiveMinimum": 0},
                },
                "additionalProperties": False,
            },
            "delta2": {
                "type": "object",
                "properties": {
                    "a": {"type": "number", "exclusiveMinimum": 0},
                    "k_max": _POS_INT,
                },
                "additionalProperties": False,
            },
        },
        "required": ["command", "sequence", "family"],
        "additionalProperties": False,
    },
    "classify": {
        "type": "object",
        "properties": {
            "command": {"const": "classify"},
            "sequence": SEQUENCE_SCHEMA,
            "family": FAMILY_SCHEMA,
            "schedule": SCHEDULE_SCHEMA,
            "matrix": MATRIX_SCHEMA,
            "space": SPACE_SCHEMA,
            "verdict": VERDICT_SCHEMA,
            "flag_mode": {"enum": [MODULAR_FLAGS, RAW_FLAGS]},
            "construction": CONSTRUCTION_SCHEMA,
        },
        "required": ["command"],
        "additionalProperties": False,
    },
    "counterexample": {
        "type": "object",
        "properties": {
            "command": {"const": "counterexample"},
            "theorem": {"enum": ["thm37", "thm38"]},
            "nu": {"type": "number", "minimum": 0},
            "rho": {"type": "number", "exclusiveMinimum": 0},
            "r_max": _POS_INT,
            "alpha": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
            "m_max": {"type": ["integer", "null"], "minimum": 0},
            "nu_values": {"type": "array", "items": _NUM, "minItems": 1},
            "schedule": SCHEDULE_SCHEMA,
            "family": FAMILY_SCHEMA,
            "verdict": VERDICT_SCHEMA,
            "checks": {
                "type": "object",
                "properties": {
                    "shat_tail_target": _NUM,
                    "shat_tail_tol": {"type": "number", "exclusiveMinimum": 0},
                    "strong_bound_coeff": {"type": "number", "exclusiveMinimum": 0},
                    "strong_bound_min_r": _POS_INT,
                    "shat_density_max": {"type": "number", "exclusiveMinimum": 0},
                    "shat_density_min_r": _POS_INT,
                    "shat_exact_tol": {"type": "number", "exclusiveMinimum": 0},
                    "strong_min": _NUM,
                },
                "additionalProperties": False,
            },
        },
        "required": ["command", "theorem"],
        "additionalProperties": False,
    },
    "inclusion": {
        "type": "object",
        "properties": {
            "command": {"const": "inclusion"},
            "theorems": {
                "type": "array",
                "items": {"enum": list(THEOREMS)},
                "uniqueItems": True,
            },
            "beta": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
            "family": FAMILY_SCHEMA,
            "schedule": SCHEDULE_SCHEMA,
            "matrix": MATRIX_SCHEMA,
            "space": SPACE_SCHEMA,
            "verdict": VERDICT_SCHEMA,
            "corpus": {
                "type": "object",
                "properties": {
                    "size": {"type": "integer", "minimum": 0},
                    "seed": {"type": "integer", "minimum": 0},
                    "center": _NUM,
                    "radius": {"type": "number", "exclusiveMinimum": 0},
                    "exception_density": {"type": "number", "minimum": 0, "maximum": 1},
                    "exception_scale": _NUM,
                    "include_thm37": {"type": "boolean"},
                    "include_thm38": {"type": "boolean"},
                    "construction_r_max": _POS_INT,
                },
                "additionalProperties": False,
            },
        },
        "required": ["command"],
        "additionalProperties": False,
    },
}


def validate_config(doc: Any, command: str) -> None:
    """Schema-validate a config document; raises ConfigError with the path."""
    if command not in COMMAND_SCHEMAS:
        raise ConfigError(f"unknown command {command!r}")
    try:
        jsonschema.validate(doc, COMMAND_SCHEMAS[command])
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"config field {exc.json_path}: {exc.message}") from exc


def load_config(path: str | Path) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return doc


# ---------------------------------------------------------------------------
# builders: each returns (materialized doc, built object)
# ---------------------------------------------------------------------------


def build_function(doc: dict) -> tuple[dict, OrliczFunction]:
    kind = doc["kind"]
    try:
        if kind == "power":
            out = {"kind": kind, "p": doc.get("p", 2.0)}
            return out, Power(out["p"])
        if kind == "scaled_power":
            out = {"kind": kind, "p": doc.get("p", 2.0), "c": doc.get("c", 1.0)}
            return out, ScaledPower(p=out["p"], c=out["c"])
        if kind == "power_over_p":
            out = {"kind": kind, "p": doc.get("p", 2.0)}
            return out, PowerOverP(out["p"])
        if kind == "exp_minus_one":
            return {"kind": kind}, ExpMinusOne()
        if kind == "linear":
            out = {"kind": kind, "c": doc.get("c", 1.0)}
            return out, LinearSlope(out["c"])
        out = {"kind": "table", "knots": [list(map(float, kn)) for kn in doc["knots"]]}
        return out, Table(tuple(tuple(kn) for kn in out["knots"]))
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"function: {exc}") from exc


def build_family(doc: dict) -> tuple[dict, MusielakOrliczFamily]:
    kind = doc["kind"]
    try:
        if kind == "constant":
            fdoc, fn = build_function(doc.get("function", {"kind": "power", "p": 2.0}))
            return {"kind": kind, "function": fdoc}, ConstantFamily(fn)
        if kind == "index_scaled":
            return {"kind": kind}, IndexScaledFamily()
        if kind == "index_power":
            exps = [float(p) for p in doc["exponents"]]
            return {"kind": kind, "exponents": exps}, IndexPowerFamily(tuple(exps))
        if kind == "spike":
            slopes = {str(k): float(v) for k, v in doc.get("slopes", {}).items()}
            default = float(doc.get("default_slope", 1.0))
            fam = SpikeFamily(
                slopes=tuple(sorted((int(k), v) for k, v in slopes.items())),
                default_slope=default,
            )
            return {"kind": kind, "slopes": slopes, "default_slope": default}, fam
        fdocs, fns = [], []
        for f in doc["functions"]:
            fd, fn = build_function(f)
            fdocs.append(fd)
            fns.append(fn)
        return {"kind": "custom", "functions": fdocs}, CustomFamily(tuple(fns))
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"family: {exc}") from exc


def build_schedule(doc: dict) -> tuple[dict, LacunarySchedule]:
    try:
        if doc["kind"] == "geometric":
            out = {
                "kind": "geometric",
                "base": float(doc.get("base", 1.0)),
                "ratio": float(doc.get("ratio", 2.0)),
                "count": int(doc.get("count", 10)),
            }
            return out, build_lacunary(Geometric(out["base"], out["ratio"], out["count"]))
        cuts = [int(c) for c in doc["cut_points"]]
        return {"kind": "explicit", "cut_points": cuts}, build_lacunary(Explicit(tuple(cuts)))
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"schedule: {exc}") from exc


def schedule_rule(doc: dict) -> Geometric | Explicit:
    if doc["kind"] == "geometric":
        return Geometric(
            float(doc.get("base", 1.0)), float(doc.get("ratio", 2.0)), int(doc.get("count", 10))
        )
    return Explicit(tuple(int(c) for c in doc["cut_points"]))


def build_matrix(doc: dict) -> tuple[dict, MatrixOperator]:
    kind = doc["kind"]
    try:
        if kind == "identity":
            return {"kind": kind}, Identity()
        if kind == "cesaro_c1":
            return {"kind": kind}, CesaroC1()
        if kind == "shift":
            out = {"kind": kind, "offset": int(doc.get("offset", 1))}
            return out, Shift(out["offset"])
        if kind == "row_table":
            rows = [[[int(k), float(a)] for k, a in row] for row in doc["rows"]]
            op = RowTable(tuple(tuple((k, a) for k, a in row) for row in rows))
            return {"kind": kind, "rows": rows}, op
        out = {
            "kind": "geometric_tail",
            "decay": float(doc.get("decay", 0.5)),
            "x_bound": float(doc.get("x_bound", 1.0)),
        }
        return out, geometric_tail(out["decay"], out["x_bound"])
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"matrix: {exc}") from exc


def build_scalars(
    doc: dict, cls: type[RhoSequence] | type[ExponentSequence]
) -> tuple[dict, RhoSequence | ExponentSequence]:
    try:
        if doc["kind"] == "constant":
            out = {"kind": "constant", "value": float(doc.get("value", 1.0))}
            return out, cls(constant=out["value"])
        vals = [float(v) for v in doc["values"]]
        return {"kind": "per_index", "values": vals}, cls(
            constant=None, per_index=tuple(vals)
        )
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"{cls.__name__}: {exc}") from exc


def build_sequence(doc: dict, seed_override: int | None = None) -> tuple[dict, Sequence]:
    kind = doc["kind"]
    try:
        if kind == "explicit":
            vals = [float(v) for v in doc["values"]]
            return {"kind": kind, "values": vals}, Sequence(np.asarray(vals))
        if kind == "constant":
            out = {"kind": kind, "value": float(doc.get("value", 0.0)), "horizon": int(doc["horizon"])}
            return out, Sequence(np.full(out["horizon"], out["value"]))
        if kind == "alternating01":
            out = {"kind": kind, "horizon": int(doc["horizon"])}
            vals = np.zeros(out["horizon"])
            vals[1::2] = 1.0
            return out, Sequence(vals)
        out = {
            "kind": "random_bounded",
            "horizon": int(doc["horizon"]),
            "center": float(doc.get("center", 0.0)),
            "radius": float(doc.get("radius", 1.0)),
            "exception_density": float(doc.get("exception_density", 0.0)),
            "exception_scale": float(doc.get("exception_scale", 3.0)),
            "seed": int(
                seed_override if seed_override is not None else doc.get("seed", DEFAULT_SEED)
            ),
        }
        rng = np.random.default_rng(out["seed"])
        x = random_bounded_sequence(
            rng,
            out["horizon"],
            out["center"],
            out["radius"],
            out["exception_density"],
            out["exception_scale"],
        )
        return out, x
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"sequence: {exc}") from exc


def build_space(
    doc: dict,
    family: MusielakOrliczFamily,
    schedule: LacunarySchedule,
    matrix: MatrixOperator,
) -> tuple[dict, SpaceParams]:
    rho_doc, rho = build_scalars(doc.get("rho", {"kind": "constant", "value": 1.0}), RhoSequence)
    exp_doc, exps = build_scalars(
        doc.get("exponents", {"kind": "constant", "value": 1.0}), ExponentSequence
    )
    out = {
        "alpha": float(doc.get("alpha", 1.0)),
        "epsilon": float(doc.get("epsilon", 1e-3)),
        "L": float(doc.get("L", 0.0)),
        "m_max": int(doc.get("m_max", 32)),
        "rho": rho_doc,
        "exponents": exp_doc,
        "matrix_tol": float(doc.get("matrix_tol", 1e-12)),
    }
    try:
        params = SpaceParams(
            family=family,
            schedule=schedule,
            alpha=out["alpha"],
            epsilon=out["epsilon"],
            L=out["L"],
            m_max=out["m_max"],
            rho=rho,
            exponents=exps,
            matrix=matrix,
            matrix_tol=out["matrix_tol"],
        )
    except ValueError as exc:
        raise ConfigError(f"space: {exc}") from exc
    return out, params


def build_verdict_params(doc: dict) -> dict:
    return {
        "tol": float(doc.get("tol", 1e-3)),
        "tail_window": doc.get("tail_window", None),
        "slope_slack": doc.get("slope_slack", None),
    }


def deep_copy_config(doc: dict) -> dict:
    return copy.deepcopy(doc)
