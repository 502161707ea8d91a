"""JSON schemas for spec files and for every CLI result document."""
from __future__ import annotations

import jsonschema

_RATIONAL = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
_WORD = {"type": "string", "pattern": r"^\d+(,\d+)*$"}
_NUM = {"type": "number"}
_NUM_OR_NULL = {"type": ["number", "null"]}

CYCLE = {
    "type": "object",
    "required": ["word", "period", "vertices", "mean_potential", "rotation_vector"],
    "properties": {
        "word": _WORD,
        "period": {"type": "integer", "minimum": 1},
        "vertices": {"type": "array", "items": _WORD},
        "mean_potential": _NUM,
        "rotation_vector": {"type": "array", "items": _RATIONAL},
    },
}

MEASURE = {
    "type": "object",
    "required": ["edges", "rotation_vector", "potential_integral"],
    "properties": {
        "edges": {"type": "object", "additionalProperties": _NUM},
        "rotation_vector": {"type": "array", "items": _NUM},
        "potential_integral": _NUM,
    },
}

SPEC_FILE = {
    "type": "object",
    "required": ["alphabet"],
    "properties": {
        "alphabet": {"type": "integer", "minimum": 1},
        "transitions": {"type": "array", "items": {"type": "array", "items": {"enum": [0, 1]}}},
        "potential": {
            "type": "object",
            "properties": {
                "depth": {"type": "integer", "minimum": 0},
                "default": _NUM,
                "words": {"type": "object", "additionalProperties": _NUM},
            },
        },
        "constraint": {
            "type": "object",
            "properties": {
                "depth": {"type": "integer", "minimum": 0},
                "dim": {"type": "integer", "minimum": 1},
                "default": {"type": "array", "items": _RATIONAL},
                "words": {"type": "object", "additionalProperties": {"type": "array", "items": _RATIONAL}},
            },
        },
    },
}

ERROR = {
    "type": "object",
    "required": ["code", "message", "context"],
    "properties": {"code": {"type": "string"}, "message": {"type": "string"}, "context": {"type": "object"}},
}

RESULTS = {
    "rotation-set": {
        "type": "object",
        "required": ["dim", "exact", "support"],
        "properties": {
            "dim": {"type": "integer"},
            "exact": {"type": "boolean"},
            "vertices": {"type": "array", "items": {"type": "array", "items": _RATIONAL}},
            "support": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["direction", "value", "witness"],
                    "properties": {
                        "direction": {"type": "array", "items": _NUM},
                        "value": _NUM,
                        "witness": {"type": "array", "items": _RATIONAL},
                    },
                },
            },
        },
    },
    "beta": {
        "type": "object",
        "required": ["h", "beta", "measure", "dual_multipliers"],
        "properties": {
            "h": {"type": "array", "items": _NUM},
            "beta": _NUM,
            "measure": MEASURE,
            "dual_multipliers": {"type": "array", "items": _NUM},
        },
    },
    "alpha": {
        "type": "object",
        "required": ["c", "alpha", "witness", "gradient", "unique"],
        "properties": {
            "c": {"type": "array", "items": _NUM},
            "alpha": _NUM,
            "witness": CYCLE,
            "gradient": {"type": "array", "items": _RATIONAL},
            "unique": {"type": "boolean"},
        },
    },
    "curve": {
        "type": "object",
        "required": ["parameter", "value", "points"],
        "properties": {
            "parameter": {"type": "string"},
            "value": {"type": "string"},
            "points": {
                "type": "array",
                "items": {"type": "array", "prefixItems": [_NUM, _NUM_OR_NULL], "minItems": 2, "maxItems": 2},
            },
        },
    },
    "subaction": {
        "type": "object",
        "required": ["eigenvalue", "anchor", "u", "critical_edges", "contact_locus"],
        "properties": {
            "eigenvalue": _NUM,
            "anchor": _WORD,
            "u": {"type": "object", "additionalProperties": _NUM},
            "critical_edges": {"type": "array", "items": _WORD},
            "contact_locus": {"type": "array", "items": _WORD},
        },
    },
    "trajectory": {
        "type": "object",
        "required": ["x0", "steps", "convention", "vertices", "absorption_step", "period", "gradient", "unique", "errors"],
        "properties": {
            "x0": _WORD,
            "steps": {"type": "integer"},
            "convention": {"type": "string"},
            "vertices": {"type": "array", "items": _WORD},
            "absorption_step": {"type": "integer"},
            "period": {"type": "integer"},
            "gradient": {"type": "array", "items": _RATIONAL},
            "unique": {"type": "boolean"},
            "errors": {"type": "array", "items": _NUM},
        },
    },
    "periodic": {
        "type": "object",
        "required": ["r", "K", "status", "state_bound", "by_period"],
        "properties": {
            "r": {"type": "array", "items": _RATIONAL},
            "K": {"type": "integer"},
            "status": {"enum": ["Found", "NotFoundUpToK", "InfeasibleR", "CapExceeded"]},
            "state_bound": {"type": "integer"},
            "best_value": _NUM,
            "orbit": CYCLE,
            "by_period": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["period", "value"],
                    "properties": {"period": {"type": "integer"}, "value": _NUM},
                },
            },
        },
    },
    "check": {
        "type": "object",
        "required": ["passed", "families"],
        "properties": {
            "passed": {"type": "boolean"},
            "families": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["family", "passed", "max_residual", "tolerance", "checks"],
                    "properties": {
                        "family": {"type": "string"},
                        "passed": {"type": "boolean"},
                        "max_residual": _NUM,
                        "tolerance": _NUM,
                        "checks": {"type": "integer"},
                    },
                },
            },
        },
    },
}
RESULTS["beta-curve"] = RESULTS["curve"]
RESULTS["alpha-curve"] = RESULTS["curve"]


def validate_result(command: str, doc) -> None:
    """Raise ``jsonschema.ValidationError`` if ``doc`` does not fit the command's schema."""
    jsonschema.Draft202012Validator(RESULTS[command]).validate(doc)


def validate_error(doc) -> None:
    jsonschema.Draft202012Validator(ERROR).validate(doc)
