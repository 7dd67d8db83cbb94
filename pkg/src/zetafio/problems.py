"""Problem files: JSON descriptions of batch computations.

A problem file names a kind (distribution / fio / model), a request, the
parameters, and the output target.  Builtin angular, remainder, and phase
functions are referenced by name from the models registry; angular jets
may instead be tabulated as node values.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np
from jsonschema import Draft202012Validator

from .distribution import GaugedDistribution, LogHomogeneousTerm
from .errors import SchemaError
from .fio import AmplitudeTerm, FioSymbol
from .models import (
    BUILTIN_ANGULAR,
    BUILTIN_PHASES,
    BUILTIN_REMAINDER,
    BUILTIN_UNIT_BALL,
)
from .sphere import build_rule

_COMPLEX = {
    "type": "array",
    "items": {"type": "number"},
    "minItems": 2,
    "maxItems": 2,
}

_TERM = {
    "type": "object",
    "properties": {
        "d": _COMPLEX,
        "l": {"type": "integer", "minimum": 0},
        "jet": {
            "type": "array",
            "minItems": 1,
            "items": {
                "anyOf": [
                    {"type": "string"},
                    {"type": "array", "items": _COMPLEX},
                ]
            },
        },
    },
    "required": ["d", "l", "jet"],
    "additionalProperties": False,
}

SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["distribution", "fio", "model"]},
        "request": {
            "enum": ["eval", "laurent", "residue", "kv", "mollify",
                     "statphase", "wave", "heat", "validate", "report"],
        },
        "model": {"type": "string"},
        "params": {"type": "object"},
        "distribution": {
            "type": "object",
            "properties": {
                "dimM": {"type": "integer", "minimum": 0},
                "level": {"type": "integer", "minimum": 1},
                "terms": {"type": "array", "items": _TERM},
                "remainder": {"type": ["string", "null"]},
                "unit_ball": {"type": ["string", "null"]},
            },
            "required": ["dimM", "terms"],
            "additionalProperties": False,
        },
        "fio": {
            "type": "object",
            "properties": {
                "base_dim": {"type": "integer", "minimum": 1},
                "freq_dim": {"type": "integer", "minimum": 1},
                "base_volume": {"type": "number"},
                "phase": {"type": "string"},
                "terms": {"type": "array", "items": _TERM},
                "remainder": {"type": "array", "items": {"type": "string"}},
                "lattice": {
                    "type": "object",
                    "properties": {
                        "basis": {"type": "array",
                                  "items": {"type": "array",
                                            "items": {"type": "number"}}},
                        "radius": {"type": "number"},
                    },
                    "required": ["basis", "radius"],
                },
                "t": {"type": "number"},
                "alpha": {"type": "number"},
                "h_schedule": {"type": "array", "items": {"type": "number"}},
            },
            "required": ["base_dim", "freq_dim", "base_volume", "phase"],
            "additionalProperties": False,
        },
        "output": {
            "type": "object",
            "properties": {
                "path": {"type": "string"},
                "format": {"enum": ["json", "csv"]},
                "figures": {"type": "boolean"},
            },
            "additionalProperties": False,
        },
    },
    "required": ["kind", "request"],
    "additionalProperties": False,
}

_VALIDATOR = Draft202012Validator(SCHEMA)


def load_problem(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot parse problem file: {exc}") from exc
    return validate_problem(doc)


def validate_problem(doc: dict) -> dict:
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: list(e.path))
    if errors:
        msgs = "; ".join(f"{'/'.join(str(p) for p in e.path) or '<root>'}: "
                         f"{e.message}" for e in errors[:4])
        raise SchemaError(f"problem file invalid: {msgs}")
    if doc["kind"] == "distribution" and "distribution" not in doc:
        raise SchemaError("kind=distribution requires a 'distribution' section")
    if doc["kind"] == "fio" and "fio" not in doc:
        raise SchemaError("kind=fio requires a 'fio' section")
    if doc["kind"] == "model" and "model" not in doc:
        raise SchemaError("kind=model requires a 'model' name")
    return doc


def inputs_digest(doc: dict) -> str:
    canon = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def _resolve_angular(entry, rule):
    if isinstance(entry, str):
        try:
            return BUILTIN_ANGULAR[entry]
        except KeyError:
            raise SchemaError(f"unknown builtin angular function {entry!r}")
    table = np.array([complex(re, im) for re, im in entry])
    if table.shape[0] != rule.nodes.shape[0]:
        raise SchemaError(
            f"tabulated jet has {table.shape[0]} values but the level rule "
            f"has {rule.nodes.shape[0]} nodes"
        )
    nodes = rule.nodes

    def f(pts):
        pts2 = np.atleast_2d(np.asarray(pts, dtype=float))
        out = np.empty(pts2.shape[0], dtype=complex)
        for i, p in enumerate(pts2):
            out[i] = table[int(np.argmin(np.linalg.norm(nodes - p, axis=1)))]
        return out if np.asarray(pts).ndim > 1 else out[0]

    return f


def build_distribution(section: dict, level: int | None = None) -> GaugedDistribution:
    dimM = section["dimM"]
    lvl = level if level is not None else section.get("level", 4)
    rule = build_rule(dimM + 1, lvl)
    terms = []
    for t in section["terms"]:
        jet = tuple(_resolve_angular(e, rule) for e in t["jet"])
        terms.append(LogHomogeneousTerm(complex(*t["d"]), t["l"], jet))
    remainder = ()
    if section.get("remainder"):
        name = section["remainder"]
        if name not in BUILTIN_REMAINDER:
            raise SchemaError(f"unknown builtin remainder {name!r}")
        remainder = (BUILTIN_REMAINDER[name],)
    ball = ()
    if section.get("unit_ball"):
        name = section["unit_ball"]
        if name not in BUILTIN_UNIT_BALL:
            raise SchemaError(f"unknown builtin unit-ball function {name!r}")
        ball = (BUILTIN_UNIT_BALL[name],)
    return GaugedDistribution(manifold=rule, terms=tuple(terms),
                              remainder_jet=remainder, unit_ball_jet=ball)


def build_fio(section: dict) -> FioSymbol:
    phase_name = section["phase"]
    if phase_name not in BUILTIN_PHASES:
        raise SchemaError(f"unknown builtin phase {phase_name!r}")
    terms = []
    for t in section.get("terms", []):
        jet = []
        for e in t["jet"]:
            if not isinstance(e, str) or e not in BUILTIN_ANGULAR:
                raise SchemaError("fio jets must name builtin angular functions")
            fn = BUILTIN_ANGULAR[e]
            jet.append(lambda x, y, nu, fn=fn: fn(nu))
        terms.append(AmplitudeTerm(complex(*t["d"]), t["l"], tuple(jet)))
    remainder = []
    for name in section.get("remainder", []):
        if name not in BUILTIN_UNIT_BALL and name not in BUILTIN_REMAINDER:
            raise SchemaError(f"unknown builtin remainder {name!r}")
        # fio remainders are plain symbol functions of xi
        base = BUILTIN_UNIT_BALL.get(name)
        if base is None:
            raise SchemaError(
                f"builtin {name!r} is a radial density, not an fio amplitude"
            )
        remainder.append(lambda x, y, xi, base=base: base(xi))
    lattice = section.get("lattice")
    return FioSymbol(
        base_dim=section["base_dim"],
        freq_dim=section["freq_dim"],
        base_volume=section["base_volume"],
        phase=BUILTIN_PHASES[phase_name],
        amplitude_terms=tuple(terms),
        amplitude_remainder=tuple(remainder),
        lattice_basis=np.asarray(lattice["basis"], dtype=float) if lattice else None,
        lattice_radius=lattice["radius"] if lattice else 0.0,
    )
