"""FastAPI service wrapping the analysis pipeline.

Endpoints accept the shared wire format (see schemas) and return plain
JSON-ready payloads. Input problems map to 422, computation failures to
500; the response body carries the diagnostic message either way.
"""
from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .cohomology import periods
from .errors import ComputationError, InputError
from .forms import OneForm, one_form
from .geometry import Domain
from .pipeline import (AnalysisOptions, analyze, trace_curves,
                       traces_payload)
from .potential import potential_symbolic
from .schemas import (AnalyzeRequest, AnalyzeResponse, CurvesRequest,
                      CurvesResponse, DomainModel, OneFormModel,
                      PeriodsRequest, PeriodsResponse)

app = FastAPI(
    title="deform",
    description="Exactness analysis of planar ODE 1-forms: closedness, "
                "de Rham periods around punctures, integrating factors, "
                "and global potentials.",
    version="0.1.0",
)


def _build_inputs(form: OneFormModel, domain: DomainModel):
    try:
        w = one_form(form.M, form.N)
        u = Domain(rect=tuple(domain.rect),
                   punctures=tuple(tuple(p) for p in domain.punctures),
                   exclusion_radius=domain.exclusion_radius)
    except InputError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return w, u


def _computed(fn):
    try:
        return fn()
    except InputError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    except ComputationError as exc:
        raise HTTPException(status_code=500, detail=str(exc))


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/analyze", response_model=AnalyzeResponse)
def analyze_endpoint(req: AnalyzeRequest):
    w, u = _build_inputs(req.form, req.domain)
    report = _computed(lambda: analyze(w, u, AnalysisOptions(tol=req.tol)))
    return report.to_json_dict()


@app.post("/periods", response_model=PeriodsResponse)
def periods_endpoint(req: PeriodsRequest):
    w, u = _build_inputs(req.form, req.domain)
    pv = _computed(lambda: periods(w, u, rtol=req.rtol))
    return pv.to_json_dict()


@app.post("/curves", response_model=CurvesResponse)
def curves_endpoint(req: CurvesRequest):
    w, u = _build_inputs(req.form, req.domain)

    def run():
        pot = potential_symbolic(w, u)
        traces = trace_curves(w, u, seeds=req.seeds, step=req.step,
                              max_steps=req.max_steps, potential=pot)
        return traces_payload(traces, u, req.step)

    return _computed(run)
