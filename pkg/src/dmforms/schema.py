"""JSON Schemas (draft 2020-12) for everything the package serialises.

The schemas are plain dicts so that no validator is needed at runtime;
the test suite checks emitted documents against them with ``jsonschema``.
"""

FQ_ELEM = {
    "type": "array",
    "description": "coordinates in the power basis 1, a, ..., a^(r-1), each in [0, p)",
    "items": {"type": "integer", "minimum": 0},
    "minItems": 1,
}

FIELD = {
    "type": "object",
    "properties": {
        "p": {"type": "integer", "minimum": 3},
        "r": {"type": "integer", "minimum": 1},
        "modulus": {"type": "array", "items": {"type": "integer", "minimum": 0}},
    },
    "required": ["p", "r", "modulus"],
    "additionalProperties": False,
}

TPOLY = {
    "type": "object",
    "description": "sum of coeffs[n] * T^(lo + n); the zero polynomial has lo = 0 and no coeffs",
    "properties": {
        "lo": {"type": "integer"},
        "coeffs": {"type": "array", "items": FQ_ELEM},
    },
    "required": ["lo", "coeffs"],
    "additionalProperties": False,
}

USERIES = {
    "type": "object",
    "description": "sum of coeffs[n] * var^(val + n) + O(var^prec)",
    "properties": {
        "var": {"enum": ["u", "u0", "u_tau"]},
        "val": {"type": "integer"},
        "prec": {"type": "integer"},
        "coeffs": {"type": "array", "items": TPOLY},
    },
    "required": ["var", "val", "prec", "coeffs"],
    "additionalProperties": False,
}

BASIS_ELEMENT = {
    "type": "object",
    "properties": {
        "k": {"type": "integer"},
        "l": {"type": "integer", "minimum": 0},
        "r": {"type": "integer"},
        "i": {"type": "integer", "minimum": 0},
        "F": {"type": "array", "items": TPOLY, "minItems": 1},
        "C": TPOLY,
        "series": USERIES,
        "plus": {"enum": ["r odd", "r even, l odd", "r even, l even"]},
        "d_plus": {"type": "integer"},
    },
    "required": ["k", "l", "r", "i", "F", "C", "series"],
    "additionalProperties": False,
}

_WINDOW = {
    "type": "array",
    "items": {"type": "integer"},
    "minItems": 2,
    "maxItems": 2,
}

REPORT = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "passed": {"type": "boolean"},
        "window": {
            "type": "object",
            "properties": {"u": _WINDOW, "u_tau": {"oneOf": [_WINDOW, {"type": "null"}]}},
            "required": ["u", "u_tau"],
            "additionalProperties": False,
        },
        "mismatch": {
            "oneOf": [
                {"type": "null"},
                {"type": "object", "properties": {"exponent": {"type": "array"}},
                 "required": ["exponent"]},
            ]
        },
    },
    "required": ["name", "passed", "window", "mismatch"],
    "additionalProperties": False,
}

SCHEMAS = {
    "fq_elem": FQ_ELEM,
    "field": FIELD,
    "tpoly": TPOLY,
    "useries": USERIES,
    "basis_element": BASIS_ELEMENT,
    "report": REPORT,
    "basis": {"type": "array", "items": BASIS_ELEMENT},
    "reports": {"type": "array", "items": REPORT},
}
