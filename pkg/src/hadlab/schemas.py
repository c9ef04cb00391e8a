"""JSON schemas for the interchange format and CLI result envelopes."""

PHM_V1_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["format", "rows", "cols", "representation", "entries"],
    "properties": {
        "format": {"const": "phm-v1"},
        "rows": {"type": "integer", "minimum": 1},
        "cols": {"type": "integer", "minimum": 1},
        "label": {"type": "string"},
        "representation": {"enum": ["butson", "turns", "cartesian"]},
        "butson_order": {"type": "integer", "minimum": 1},
        "entries": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {
                    "anyOf": [
                        {"type": "integer"},
                        {"type": "number"},
                        {"type": "array", "items": {"type": "number"},
                         "minItems": 2, "maxItems": 2},
                    ]
                },
            },
        },
    },
    "allOf": [
        {
            "if": {"properties": {"representation": {"const": "butson"}}},
            "then": {"required": ["butson_order"]},
        }
    ],
    "additionalProperties": False,
}

RESULT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["command", "ok", "exit_code", "data"],
    "properties": {
        "command": {"type": "string"},
        "ok": {"type": "boolean"},
        "exit_code": {"type": "integer", "minimum": 0, "maximum": 3},
        "data": {"type": "object"},
    },
    "additionalProperties": False,
}

CATALOG_RECORD_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["command", "input_sha256", "summary", "timestamp",
                 "tool_version"],
    "properties": {
        "command": {"type": "string"},
        "input_sha256": {"type": ["string", "null"]},
        "summary": {"type": "object"},
        "timestamp": {"type": "string"},
        "tool_version": {"type": "string"},
    },
    "additionalProperties": False,
}
