"""JSON helpers: canonical formatting and the "inf" sentinel.

Every serialized document carries a ``"schema": 1`` field. Infinite reals
are encoded as the string ``"inf"`` because JSON has no infinity literal.
"""

import json
import math

from .errors import DataError

SCHEMA_VERSION = 1

_INF = float("inf")


def encode_real(value):
    """float -> JSON-safe value, mapping +inf to the string "inf"."""
    if math.isinf(value):
        return "inf"
    return float(value)


def decode_real(value, field=""):
    """Inverse of encode_real; raises DataError on junk."""
    if value == "inf":
        return _INF
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    raise DataError(f"{field or 'value'}: expected a number or \"inf\", got {value!r}")


def canonical_json(obj):
    """Serialize to the one canonical text form used by CLI and API alike.

    Both front ends must produce byte-identical documents for identical
    inputs, so all JSON emission funnels through here.
    """
    return json.dumps(obj, indent=2, sort_keys=False, allow_nan=False) + "\n"


def require(mapping, field, context):
    """Fetch mapping[field] or raise a DataError naming the field."""
    if not isinstance(mapping, dict):
        raise DataError(f"{context}: expected an object")
    if field not in mapping:
        raise DataError(f"{context}.{field}: missing field")
    return mapping[field]


def as_int(value, context):
    """Coerce a JSON value to int, raising DataError instead of TypeError."""
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DataError(f"{context}: expected an integer, got {value!r}")
    if float(value) != int(value):
        raise DataError(f"{context}: expected an integer, got {value!r}")
    return int(value)


def as_real(value, context):
    """Coerce a JSON value to float, raising DataError instead of TypeError."""
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DataError(f"{context}: expected a number, got {value!r}")
    return float(value)


def check_schema(mapping, context):
    """Validate the mandatory "schema": 1 marker."""
    version = require(mapping, "schema", context)
    if version != SCHEMA_VERSION:
        raise DataError(f"{context}.schema: unsupported version {version!r}")


def load_json_file(path, context):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise DataError(f"{context}: cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"{context}: {path} is not valid JSON: {exc}") from exc


def write_json_file(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(obj))
