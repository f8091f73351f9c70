"""Request and response models for the workbench service.

Matrices and perturbations travel as their canonical text formats, so a
request body round-trips byte-exactly through the same parsers the rest
of the package uses; structured results (certificates, witnesses,
reports) are embedded as plain JSON objects in the shapes those types
serialize themselves to.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel

from ..scalars import DEFAULT_TOLERANCE


class GenRequest(BaseModel):
    family: Literal["sylvester", "dft"]
    size_param: int
    approximate: bool = False


class GenResponse(BaseModel):
    matrix: str


class RankRequest(BaseModel):
    matrix: str
    numerical: bool = False
    tolerance: float = DEFAULT_TOLERANCE


class RankResponse(BaseModel):
    rank: int
    mode: Literal["exact", "numerical"]
    summary: str


class BoundRequest(BaseModel):
    matrix: str
    target_rank: int


class BoundResponse(BaseModel):
    summary: str
    certificate: dict


class RefuteRequest(BaseModel):
    matrix: str
    perturbation: str
    target_rank: int


class RefuteResponse(BaseModel):
    summary: str
    certificate: dict
    witness: dict


class RigidityRequest(BaseModel):
    matrix: str
    target_rank: int
    exact: bool = False
    budget: int = 200
    seed: int = 0
    tolerance: float = DEFAULT_TOLERANCE


class RigidityResponse(BaseModel):
    summary: str
    report: dict


class VerifyDftRequest(BaseModel):
    n: int
    exponent_offset: int = 0


class VerifyDftResponse(BaseModel):
    holds: bool
    mismatch: dict | None
    summary: str


class HealthResponse(BaseModel):
    status: Literal["ok"]
