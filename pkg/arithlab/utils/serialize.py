# JSON codecs for exact objects
# field elements are {"base": m or null, "coeffs": [[u, v], ...]} indexed by radicand mask,
# with a bare "p/q" string accepted (and emitted) for rationals

from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from arithlab.core.errors import FieldMismatch, FixtureError
from arithlab.services.numfield import BaseField, FieldElem, GaloisChar, NumberField
from arithlab.utils import matrices as mx
from arithlab.utils.rational import format_fraction

Scalar = Union[str, int, list, dict]


def encode_elem(x) -> Scalar:
    if not isinstance(x, FieldElem):
        base = BaseField(getattr(x, "m", None))
        x = NumberField(base)(x)
    base = x.field.base
    if base.m is None and x.is_base():
        return format_fraction(x.coeffs[0])
    coeffs = [[format_fraction(c) for c in base.parts(c)] for c in x.coeffs]
    return {"base": base.m, "coeffs": coeffs}


def decode_elem(field: NumberField, value: Scalar) -> FieldElem:
    """
    Parse a scalar into the field

    Raises:
        FixtureError: malformed value
        FieldMismatch: the value names another base or more radicands than the field has
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise FixtureError(f"scalars must be exact, got {value!r}")
    try:
        if isinstance(value, (str, int)):
            return field(value)
        if isinstance(value, list):
            return field(field.base.coerce(value))
        if isinstance(value, dict):
            if value.get("base") != field.base.m:
                raise FieldMismatch(f"element over base {value.get('base')} read into {field}")
            coeffs = list(value["coeffs"])
            if len(coeffs) > field.degree:
                raise FieldMismatch(f"{len(coeffs)} coefficients do not fit {field}")
            coeffs += ["0"] * (field.degree - len(coeffs))
            return field.element([field.base.coerce(c) for c in coeffs])
    except (ValueError, KeyError, TypeError) as e:
        raise FixtureError(f"bad scalar {value!r}: {e}") from e
    raise FixtureError(f"bad scalar {value!r}")


def encode_matrix(m: np.ndarray) -> List[List[Scalar]]:
    return [[encode_elem(x) for x in row] for row in m]


def decode_matrix(field: NumberField, rows: Sequence[Sequence[Scalar]]) -> np.ndarray:
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise FixtureError("matrix rows must be nonempty and of equal length")
    return mx.matrix([[decode_elem(field, x) for x in row] for row in rows], field)


def encode_field(field: NumberField) -> Dict:
    return {"base": field.base.m, "radicands": [encode_elem(NumberField(field.base)(r)) for r in field.radicands]}


def decode_field(base: Optional[int], radicands: Sequence[Scalar] = ()) -> NumberField:
    b = BaseField(base)
    plain = NumberField(b)
    return NumberField(b, [decode_elem(plain, r).base_value() for r in radicands])


def encode_table(table: Dict[GaloisChar, np.ndarray]) -> Dict[str, List[List[Scalar]]]:
    """Cocycle table keyed by character label"""
    return {sigma.label: encode_matrix(m) for sigma, m in sorted(table.items(), key=lambda kv: kv[0].label)}
