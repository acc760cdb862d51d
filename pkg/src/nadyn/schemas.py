"""JSON schemas for every file format read or written by the command line."""

from __future__ import annotations

import jsonschema

RATIONAL = {"type": "string", "pattern": r"^-?[0-9]+(/[0-9]+)?$"}
INTEGER_STRING = {"type": "string", "pattern": r"^-?[0-9]+$"}
VALUATION = {"type": "string", "pattern": r"^(inf|-?[0-9]+(/2)?)$"}

DISK = {
    "type": "object",
    "properties": {
        "center": RATIONAL,
        "radius_exp": VALUATION,
        "kind": {"enum": ["closed", "open", "point"]},
    },
    "required": ["center", "radius_exp"],
}

MATRIX = {
    "type": "object",
    "properties": {
        "n": {"type": "integer", "minimum": 0},
        "rows": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
    },
    "required": ["rows"],
}

POLYNOMIAL = {
    "type": "object",
    "properties": {"coeffs": {"type": "array", "items": INTEGER_STRING}},
    "required": ["coeffs"],
}

RATIONAL_FUNCTION = {
    "type": "object",
    "properties": {"numerator": POLYNOMIAL, "denominator": POLYNOMIAL, "text": {"type": "string"}},
    "required": ["numerator", "denominator"],
}

ROOT_CERTIFICATE = {
    "type": "object",
    "properties": {
        "polynomial": POLYNOMIAL,
        "bracket": {"type": "array", "items": RATIONAL, "minItems": 2, "maxItems": 2},
        "decimal": {"type": "number"},
        "exact": RATIONAL,
    },
    "required": ["polynomial", "bracket", "decimal"],
}

ENTROPY = {
    "type": "object",
    "properties": {
        "root": ROOT_CERTIFICATE,
        "log": {"type": "string"},
        "log_bracket": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
        "exact_zero": {"type": "boolean"},
    },
    "required": ["root", "log", "log_bracket", "exact_zero"],
}

SYSTEM = {
    "type": "object",
    "properties": {
        "p": {"type": "integer", "minimum": 2},
        "pieces": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"domain": DISK, "alpha": RATIONAL, "beta": RATIONAL},
                "required": ["domain", "alpha", "beta"],
            },
        },
        "sink": {"anyOf": [DISK, {"type": "null"}]},
    },
    "required": ["p", "pieces"],
}

ZETA_OUTPUT = {
    "type": "object",
    "properties": {
        "zeta": RATIONAL_FUNCTION,
        "det": POLYNOMIAL,
        "excluded": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "numerator_cyclotomic": {"type": "boolean"},
        "text": {"type": "string"},
    },
    "required": ["zeta", "numerator_cyclotomic", "text"],
}

ANALYSIS_REPORT = {
    "type": "object",
    "properties": {
        "adjacency": MATRIX,
        "zeta": RATIONAL_FUNCTION,
        "entropy": ENTROPY,
        "cover": {"type": "array", "items": DISK},
        "escaped": {"type": "array", "items": DISK},
        "warnings": {"type": "array", "items": {"type": "string"}},
    },
    "required": ["adjacency", "zeta", "entropy", "cover", "escaped", "warnings"],
}

ADMISSIBILITY = {
    "type": "object",
    "properties": {
        "ok": {"type": "boolean"},
        "nonzero_ok": {"type": "boolean"},
        "constant_ok": {"type": "boolean"},
        "containing_ok": {"type": "boolean"},
        "markov_ok": {"type": "boolean"},
        "irreducible_ok": {"type": "boolean"},
        "zero_one": {"type": "boolean"},
        "witnesses": {"type": "object"},
    },
    "required": ["ok", "nonzero_ok", "constant_ok", "containing_ok", "markov_ok", "irreducible_ok"],
}

ARRANGEMENT = {
    "type": "object",
    "properties": {
        "p": {"type": "integer"},
        "classes": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "members": {"type": "array", "items": {"type": "integer"}},
                    "level": {"type": "integer", "minimum": 1},
                    "indicators": {"type": "array", "items": {"type": "integer"}},
                    "successors": {"type": "array", "items": {"type": "integer"}},
                    "parent": {"type": ["integer", "null"]},
                    "terminals": {"type": "array", "items": {"type": "integer"}},
                    "disk": DISK,
                },
                "required": ["members", "level", "indicators", "disk"],
            },
        },
        "pieces": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "index": {"type": "integer"},
                    "disk": DISK,
                    "alpha": RATIONAL,
                    "beta": RATIONAL,
                    "class": {"type": "integer"},
                },
                "required": ["index", "disk", "alpha", "beta"],
            },
        },
        "sink": DISK,
    },
    "required": ["p", "classes", "pieces", "sink"],
}

RATIONAL_MAP = {
    "type": "object",
    "properties": {
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "index": {"type": ["integer", "null"]},
                    "text": {"type": "string"},
                    "numerator": {"type": "array", "items": RATIONAL},
                    "denominator": {"type": "array", "items": RATIONAL},
                },
                "required": ["text", "numerator", "denominator"],
            },
        },
        "combined": {
            "type": "object",
            "properties": {
                "numerator": {"type": "array", "items": INTEGER_STRING},
                "denominator": {"type": "array", "items": INTEGER_STRING},
            },
            "required": ["numerator", "denominator"],
        },
        "text": {"type": "string"},
    },
    "required": ["terms", "combined"],
}

VERIFICATION = {
    "type": "object",
    "properties": {
        "ok": {"type": "boolean"},
        "M": {"type": "integer"},
        "adjacency": MATRIX,
        "certificates": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "name": {"type": "string"},
                    "family": {"type": "string"},
                    "index": {"type": ["integer", "null"]},
                    "margin": {"anyOf": [RATIONAL, {"type": "null"}]},
                    "passed": {"type": "boolean"},
                },
                "required": ["name", "family", "margin", "passed"],
            },
        },
    },
    "required": ["ok", "M", "adjacency", "certificates"],
}

BUNDLE = {
    "type": "object",
    "properties": {
        "source": MATRIX,
        "n0": {"type": "integer", "minimum": 1},
        "j0": {"type": "integer", "minimum": 1},
        "route": {"enum": ["direct", "augmented"]},
        "matrix": MATRIX,
        "arrangement": ARRANGEMENT,
        "M": {"type": "integer", "minimum": 2},
        "map": RATIONAL_MAP,
        "verification": VERIFICATION,
        "entropy": ENTROPY,
        "warnings": {"type": "array", "items": {"type": "string"}},
    },
    "required": ["matrix", "arrangement", "M", "map", "verification", "entropy"],
}

FIXTURE_FIELD = {
    "type": "object",
    "properties": {
        "provenance": {"enum": ["PAPER", "DERIVED"]},
        "source": {"type": "string", "minLength": 1},
    },
    "required": ["value", "provenance"],
    # published values name the display they were copied from
    "if": {"properties": {"provenance": {"const": "PAPER"}}},
    "then": {"required": ["source"]},
}

FIXTURE = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "payload": {"type": "object"},
        "expected": {"type": "object", "additionalProperties": FIXTURE_FIELD},
    },
    "required": ["name", "payload", "expected"],
}


def validate(obj, schema: dict) -> None:
    """Raise ValueError when obj does not match schema."""
    try:
        jsonschema.validate(obj, schema)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(x) for x in exc.absolute_path)
        raise ValueError(f"invalid JSON at '{path}': {exc.message}") from None
