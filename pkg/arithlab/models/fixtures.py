# Pydantic schemas for fixture files, and the loaders that turn them into exact objects
# a fixture names its field (base m and radicands) and holds scalars in serialized form

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, StrictInt, ValidationError

from arithlab.core.errors import FixtureError
from arithlab.services.bend import SurfacePresentation, SurfaceRep, fuchsian_lift, rep_from_images
from arithlab.services.numfield import NumberField, RealPlace
from arithlab.utils.serialize import decode_elem, decode_field, decode_matrix

Scalar = Union[StrictInt, str, List[Union[StrictInt, str]], Dict[str, Any]]


class FieldSpec(BaseModel):
    base: Optional[int] = Field(default=None, description="squarefree m > 1 for Q(sqrt m), null for Q")
    radicands: List[Scalar] = Field(default_factory=list)

    def build(self) -> NumberField:
        return decode_field(self.base, self.radicands)


class PlaceSpec(BaseModel):
    base_sign: int = 1
    signs: List[int] = Field(default_factory=list)

    def build(self) -> RealPlace:
        return RealPlace(self.base_sign, tuple(self.signs))


class FormFixture(BaseModel):
    """A quadratic form (symmetric matrix) over a base field"""
    name: str = "form"
    field: FieldSpec = Field(default_factory=FieldSpec)
    matrix: List[List[Scalar]]

    def build(self) -> np.ndarray:
        return decode_matrix(self.field.build(), self.matrix)


class SurfaceFixture(BaseModel):
    """
    Generator images of a genus-g surface group

    2x2 images with `dimension` set are lifted through tau_n; multipliers and place
    describe the bending element used by `bend run` and `separate`.
    """
    name: str = "surface"
    genus: int = Field(ge=2)
    separating_index: int = Field(default=1, ge=1)
    field: FieldSpec = Field(default_factory=FieldSpec)
    images: List[List[List[Scalar]]]
    dimension: Optional[int] = Field(default=None, ge=2)
    multipliers: Optional[List[Scalar]] = None
    place: PlaceSpec = Field(default_factory=PlaceSpec)

    def presentation(self) -> SurfacePresentation:
        return SurfacePresentation(self.genus, self.separating_index)

    def base_rep(self) -> SurfaceRep:
        field = self.field.build()
        return rep_from_images(self.presentation(), [decode_matrix(field, m) for m in self.images])

    def build(self, dimension: Optional[int] = None) -> SurfaceRep:
        rep = self.base_rep()
        n = dimension or self.dimension
        if n is None:
            return rep
        if rep.n == 2:
            return fuchsian_lift(n, rep)
        if rep.n != n:
            raise FixtureError(f"fixture {self.name} holds {rep.n}x{rep.n} images, cannot lift to {n}")
        return rep

    def build_multipliers(self, field: NumberField) -> List:
        if self.multipliers is None:
            raise FixtureError(f"fixture {self.name} has no multipliers")
        return [decode_elem(field, x) for x in self.multipliers]


def read_fixture(path: Union[str, Path]) -> Tuple[Dict, bytes]:
    """
    Raw JSON and bytes of a fixture file

    Raises:
        FixtureError: missing file or invalid JSON
    """
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise FixtureError(f"cannot read fixture {path}: {e}") from e
    try:
        return json.loads(data), data
    except json.JSONDecodeError as e:
        raise FixtureError(f"fixture {path} is not valid JSON: {e}") from e


def load_form(path: Union[str, Path]) -> Tuple[FormFixture, bytes]:
    raw, data = read_fixture(path)
    try:
        return FormFixture.model_validate(raw), data
    except ValidationError as e:
        raise FixtureError(f"form fixture {path}: {e}") from e


def load_surface(path: Union[str, Path]) -> Tuple[SurfaceFixture, bytes]:
    raw, data = read_fixture(path)
    try:
        return SurfaceFixture.model_validate(raw), data
    except ValidationError as e:
        raise FixtureError(f"surface fixture {path}: {e}") from e
