"""
Reusable mixins for boxproj result types.

These mixins give dataclass results a JSON form that any command can emit.
"""

import dataclasses
import json
import math

import numpy as np


def to_builtin(value):
    """
    Convert numpy scalars/arrays and nested containers to JSON-ready values.

    Non-finite floats become None since JSON has no spelling for them.

    Args:
        value: Any value reachable from a result dataclass

    Returns:
        Plain Python value made of dict, list, str, int, float, bool, None
    """
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        if hasattr(value, 'to_dict'):
            return value.to_dict()
        return {f.name: to_builtin(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, np.ndarray):
        return [to_builtin(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {str(k): to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_builtin(v) for v in value]
    return value


class SerializableMixin:
    """
    Mixin providing dict and JSON views of a dataclass.

    Subclasses may set ``json_fields`` to restrict and order the keys,
    otherwise every dataclass field is emitted.

    Usage:
        @dataclass(frozen=True)
        class ScatterReport(SerializableMixin):
            within: float
            between: float

        ScatterReport(0.5, 0.25).to_json()
    """

    json_fields = None

    def to_dict(self):
        """
        Return the result as a plain dict.

        Returns:
            dict: Field name to JSON-ready value
        """
        names = self.json_fields or [f.name for f in dataclasses.fields(self)]
        return {name: to_builtin(getattr(self, name)) for name in names}

    def to_json(self, indent=2):
        """
        Serialize to a JSON string with stable key order.

        Args:
            indent: Indentation passed to json.dumps (default: 2)

        Returns:
            str: JSON document
        """
        return json.dumps(self.to_dict(), indent=indent)
