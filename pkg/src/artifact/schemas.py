"""Request and response models for the integration service.

Field elements are accepted as a rational string ("20/7"), a list of
coefficients of powers of the uniformiser (inner lists for the unramified
generator), or p-adic JSON {digits, val, prec}.
"""

from __future__ import annotations

from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

TASKS = ("cover", "skeleton", "bc-integrate", "abelian-integrate", "periods", "chabauty")

Element = Union[str, int, list, dict]


class FieldSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    p: int
    e: int = 1
    f: int = 1
    modulus: Optional[list[int]] = None
    uniformizer: str = "pi"

    @field_validator("p")
    @classmethod
    def _odd_prime(cls, v: int) -> int:
        if v < 3 or any(v % q == 0 for q in range(2, int(v**0.5) + 1)):
            raise ValueError("p must be an odd prime")
        return v


class CurveSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    roots: list[Element] = Field(min_length=2)
    lead: Element = "1"
    odd_degree: Optional[bool] = None


class PointSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    x: Element
    y: Optional[Element] = None
    sign_hint: Optional[Union[int, list[int]]] = None


class ReferenceSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    vertices: dict[str, PointSpec] = Field(default_factory=dict)
    edges: dict[str, PointSpec] = Field(default_factory=dict)


class ProblemFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    field: FieldSpec
    curve: CurveSpec
    precision: int = Field(20, ge=1, le=400)
    task: Optional[Literal["cover", "skeleton", "bc-integrate", "abelian-integrate", "periods", "chabauty"]] = None
    forms: list[list[Element]] = Field(default_factory=lambda: [["1"]])
    reference_points: ReferenceSpec = Field(default_factory=ReferenceSpec)
    start: Optional[PointSpec] = None
    end: Optional[PointSpec] = None
    path: Optional[list[tuple[str, int]]] = None
    alternate_path: Optional[list[tuple[str, int]]] = None
    description: Optional[str] = None

    @field_validator("path", "alternate_path")
    @classmethod
    def _directions(cls, v):
        if v is not None:
            for _, d in v:
                if d not in (1, -1):
                    raise ValueError("edge directions must be 1 or -1")
        return v

    @model_validator(mode="after")
    def _endpoints(self):
        if self.task in ("bc-integrate", "abelian-integrate", "chabauty"):
            if self.start is None or self.end is None:
                raise ValueError(f"task {self.task} needs start and end points")
        return self


class PadicJSON(BaseModel):
    digits: list[Any]
    val: int
    prec: int
    uniformizer: str


class IntegralResult(BaseModel):
    kind: str
    form: list[str]
    value: PadicJSON
    precision: int
    path: list[tuple[str, int]] = Field(default_factory=list)
    value_base_p: Optional[PadicJSON] = None


class TaskResult(BaseModel):
    task: str
    field: dict
    precision: int
    data: dict[str, Any]
    dot: dict[str, str] = Field(default_factory=dict)


class ErrorResult(BaseModel):
    error: str
    message: str
    exit_code: int
