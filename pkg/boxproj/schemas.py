"""
Pydantic schemas for the JSON documents boxproj reads and writes.
"""

import json
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, ValidationError, model_validator

from .exceptions import InvalidParameterError
from .models import BoxSpec, GaussianMixtureSpec

SCHEMA_VERSIONS = {
    'model_spec_json': '1',
    'pointset_csv': '1',
    'sweep_csv': '1',
    'report_json': '1',
}


class ModelSpecSchema(BaseModel):
    """
    JSON form of a model: {"model": "mixture"|"box", "dim": int, "a"?, "r"?, "e"?}.
    """

    model_config = ConfigDict(extra='forbid')

    model: Literal['mixture', 'box']
    dim: PositiveInt
    a: Optional[float] = Field(None, ge=0)
    r: Optional[float] = Field(None, gt=0)
    e: Optional[List[float]] = None
    allow_any_ratio: bool = False

    @model_validator(mode='after')
    def check_fields_for_model(self):
        if self.model == 'box':
            if self.a is not None or self.e is not None:
                raise ValueError('box models take "r", not "a" or "e"')
        else:
            if self.a is None:
                raise ValueError('mixture models need "a"')
            if self.r is not None:
                raise ValueError('mixture models take "a" and "e", not "r"')
        return self

    def to_spec(self):
        """
        Build the domain spec.

        Returns:
            BoxSpec or GaussianMixtureSpec
        """
        if self.model == 'box':
            ratio = 1.0 if self.r is None else self.r
            return BoxSpec(self.dim, ratio, allow_any_ratio=self.allow_any_ratio)
        return GaussianMixtureSpec(self.dim, self.a, self.e)


def spec_from_dict(data):
    """
    Validate a ModelSpec mapping.

    Args:
        data: Decoded JSON object

    Returns:
        BoxSpec or GaussianMixtureSpec

    Raises:
        InvalidParameterError: if the document does not validate
    """
    try:
        return ModelSpecSchema.model_validate(data).to_spec()
    except ValidationError as exc:
        raise InvalidParameterError(f'invalid model spec: {exc}') from exc


def spec_from_json(text):
    """Parse a ModelSpec JSON document."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidParameterError(f'model spec is not valid JSON: {exc}') from exc
    return spec_from_dict(data)


def spec_to_json(spec):
    """Serialize a BoxSpec or GaussianMixtureSpec to ModelSpec JSON."""
    data = spec.to_dict()
    if getattr(spec, 'allow_any_ratio', False):
        data['allow_any_ratio'] = True
    return json.dumps(data)


class RunManifest(BaseModel):
    """
    Everything needed to regenerate a command's outputs bit for bit.

    Attributes:
        command: Subcommand name (e.g. 'sweep' or 'diagnose lemma1')
        argv: Arguments after the program name
        parameters: Fully resolved parameters, defaults included
        master_seed: Seed of the run, if it is random
        generator: Random generator id
        artifact_version: boxproj version that produced the outputs
        schema_versions: Versions of the file formats involved
        outputs: Output path to sha256 hex digest
    """

    command: str
    argv: List[str]
    parameters: Dict[str, Any]
    master_seed: Optional[int] = None
    generator: str
    artifact_version: str
    schema_versions: Dict[str, str] = Field(default_factory=lambda: dict(SCHEMA_VERSIONS))
    outputs: Dict[str, str] = Field(default_factory=dict)
