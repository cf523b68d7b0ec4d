"""Command-line client for the analysis service.

By default each command runs the service handlers in process; pass
--server to talk to a running instance over HTTP instead. Either way the
payloads match the service wire format, and files are written locally.

Exit codes: 0 success, 2 parse/validation error, 3 computation failure.
"""
from __future__ import annotations

import sys

import click
import httpx
from fastapi import HTTPException
from pydantic import ValidationError

from . import service
from .emit import canonical_json, emit
from .errors import ComputationError, InputError
from .schemas import AnalyzeRequest, CurvesRequest, PeriodsRequest

EXIT_INPUT = 2
EXIT_COMPUTE = 3

_ENDPOINTS = {
    "/analyze": (AnalyzeRequest, service.analyze_endpoint),
    "/periods": (PeriodsRequest, service.periods_endpoint),
    "/curves": (CurvesRequest, service.curves_endpoint),
}


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _call(server, path: str, payload: dict) -> dict:
    if server:
        try:
            resp = httpx.post(server.rstrip("/") + path, json=payload,
                              timeout=120.0)
        except httpx.HTTPError as exc:
            _fail(EXIT_COMPUTE, f"cannot reach service: {exc}")
        if resp.status_code == 422:
            _fail(EXIT_INPUT, resp.text)
        if resp.status_code != 200:
            _fail(EXIT_COMPUTE, resp.text)
        return resp.json()
    model, handler = _ENDPOINTS[path]
    try:
        request = model.model_validate(payload)
    except ValidationError as exc:
        _fail(EXIT_INPUT, str(exc))
    try:
        result = handler(request)
    except HTTPException as exc:
        _fail(EXIT_INPUT if exc.status_code == 422 else EXIT_COMPUTE,
              str(exc.detail))
    except InputError as exc:
        _fail(EXIT_INPUT, str(exc))
    except ComputationError as exc:
        _fail(EXIT_COMPUTE, str(exc))
    return result if isinstance(result, dict) else result.model_dump()


def _parse_floats(text: str, count: int, what: str):
    parts = text.split(",")
    if len(parts) != count:
        _fail(EXIT_INPUT, f"{what} needs {count} comma-separated numbers, "
                          f"got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        _fail(EXIT_INPUT, f"{what}: cannot parse {text!r}")


def _domain_payload(rect, punctures, exclusion_radius) -> dict:
    return {
        "rect": _parse_floats(rect, 4, "--rect"),
        "punctures": [_parse_floats(p, 2, "--puncture") for p in punctures],
        "exclusion_radius": exclusion_radius,
    }


def _form_options(fn):
    fn = click.option("--N", "n_text", required=True,
                      help="coefficient of dy")(fn)
    fn = click.option("--M", "m_text", required=True,
                      help="coefficient of dx")(fn)
    return fn


def _domain_options(fn):
    fn = click.option("--exclusion-radius", type=float, default=0.1,
                      show_default=True,
                      help="sampling keep-out radius around punctures")(fn)
    fn = click.option("--puncture", "punctures", multiple=True,
                      help="px,py (repeatable)")(fn)
    fn = click.option("--rect", required=True,
                      help="xmin,xmax,ymin,ymax")(fn)
    return fn


@click.group()
@click.option("--server", default=None, envvar="DEFORM_SERVER",
              help="base URL of a running deform service "
                   "(default: run in process)")
@click.pass_context
def main(ctx, server):
    """Analyze planar 1-forms M dx + N dy: exactness, periods, potentials,
    and solution curves."""
    ctx.obj = {"server": server}


@main.command()
@_form_options
@_domain_options
@click.option("--tol", type=float, default=1e-10, show_default=True,
              help="closedness tolerance")
@click.option("--out", "out_path", default=None,
              help="write the JSON report here instead of stdout")
@click.pass_context
def analyze(ctx, m_text, n_text, rect, punctures, exclusion_radius, tol,
            out_path):
    """Full pipeline: classify, search integrating factors, build F."""
    payload = {
        "form": {"M": m_text, "N": n_text},
        "domain": _domain_payload(rect, punctures, exclusion_radius),
        "tol": tol,
    }
    report = _call(ctx.obj["server"], "/analyze", payload)
    if out_path:
        emit(report, "json", out_path)
    else:
        click.echo(canonical_json(report))


@main.command()
@_form_options
@_domain_options
@click.option("--rtol", type=float, default=1e-10, show_default=True,
              help="quadrature refinement tolerance")
@click.pass_context
def periods(ctx, m_text, n_text, rect, punctures, exclusion_radius, rtol):
    """Loop integrals of the form around each puncture."""
    payload = {
        "form": {"M": m_text, "N": n_text},
        "domain": _domain_payload(rect, punctures, exclusion_radius),
        "rtol": rtol,
    }
    result = _call(ctx.obj["server"], "/periods", payload)
    click.echo(canonical_json(result))


@main.command()
@_form_options
@_domain_options
@click.option("--seed", "seeds", multiple=True, help="x,y (repeatable)")
@click.option("--step", type=float, default=1e-2, show_default=True)
@click.option("--max-steps", type=int, default=10_000, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "svg"]),
              default="csv", show_default=True)
@click.option("--out", "out_path", required=True, help="output file")
@click.pass_context
def curves(ctx, m_text, n_text, rect, punctures, exclusion_radius, seeds,
           step, max_steps, fmt, out_path):
    """Trace solution curves of M dx + N dy = 0."""
    payload = {
        "form": {"M": m_text, "N": n_text},
        "domain": _domain_payload(rect, punctures, exclusion_radius),
        "seeds": [_parse_floats(s, 2, "--seed") for s in seeds] or None,
        "step": step,
        "max_steps": max_steps,
    }
    result = _call(ctx.obj["server"], "/curves", payload)
    emit(result, fmt, out_path)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("deform.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
