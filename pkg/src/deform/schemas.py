"""Pydantic request/response models for the HTTP service.

The request models mirror the package's JSON serialization of forms and
domains, so CLI payloads, service payloads, and emitted reports all share
one wire format.
"""
from __future__ import annotations

from typing import List, Optional, Tuple

from pydantic import BaseModel, Field


class OneFormModel(BaseModel):
    M: str = Field(description="coefficient of dx, expression grammar")
    N: str = Field(description="coefficient of dy, expression grammar")


class DomainModel(BaseModel):
    rect: Tuple[float, float, float, float]
    punctures: List[Tuple[float, float]] = Field(default_factory=list)
    exclusion_radius: float = 0.1


class AnalyzeRequest(BaseModel):
    form: OneFormModel
    domain: DomainModel
    tol: float = 1e-10


class PeriodsRequest(BaseModel):
    form: OneFormModel
    domain: DomainModel
    rtol: float = 1e-10


class CurvesRequest(BaseModel):
    form: OneFormModel
    domain: DomainModel
    seeds: Optional[List[Tuple[float, float]]] = None
    step: float = 1e-2
    max_steps: int = 10_000


class AnalyzeResponse(BaseModel):
    input: dict
    classification: dict
    mu: Optional[dict]
    potential: Optional[dict]
    periods: Optional[dict]
    tag: str
    diagnostics: dict


class PeriodEntry(BaseModel):
    puncture: Tuple[float, float]
    value: float


class PeriodsResponse(BaseModel):
    periods: List[PeriodEntry]
    rtol: float


class TraceModel(BaseModel):
    curve_id: int
    termination: str
    points: List[List[Optional[float]]]


class CurvesResponse(BaseModel):
    domain: dict
    step: float
    traces: List[TraceModel]
