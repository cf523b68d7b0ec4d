"""Report and trace emission: canonical JSON, CSV curves, SVG plots.

JSON output is byte-deterministic: field order is fixed by dict insertion
order and every float prints with 17 significant digits, enough to
round-trip IEEE doubles exactly.
"""
from __future__ import annotations

import json
from io import StringIO

from .errors import InputError
from .geometry import Domain


def format_float(v: float) -> str:
    if v != v or v in (float("inf"), float("-inf")):
        raise ValueError("non-finite value in report")
    return format(v, ".17g")


def canonical_json(obj, indent: int = 0) -> str:
    """JSON with deterministic float formatting and preserved key order."""
    pad = "  " * indent
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(
            f'{pad}  {json.dumps(str(k))}: {canonical_json(v, indent + 1)}'
            for k, v in obj.items())
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        parts = [canonical_json(v, indent) for v in obj]
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(parts) + "]"
        inner = ",\n".join(f"{pad}  {canonical_json(v, indent + 1)}"
                           for v in obj)
        return "[\n" + inner + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def traces_csv(payload: dict) -> str:
    """CSV rows curve_id,t,x,y,F from a traces payload; empty F column
    when no potential value is attached."""
    out = StringIO()
    out.write("curve_id,t,x,y,F\n")
    for trace in payload.get("traces", ()):
        cid = trace["curve_id"]
        for t, x, y, f in trace["points"]:
            f_txt = "" if f is None else format_float(float(f))
            out.write(f"{cid},{format_float(float(t))},"
                      f"{format_float(float(x))},{format_float(float(y))},"
                      f"{f_txt}\n")
    return out.getvalue()


def traces_svg(payload: dict, width: int = 640) -> str:
    """One polyline per trace scaled to the domain rectangle; punctures
    drawn as open circles of the exclusion radius."""
    domain = Domain.from_json_dict(payload["domain"])
    xmin, xmax, ymin, ymax = domain.rect
    w_span = xmax - xmin
    h_span = ymax - ymin
    height = width * h_span / w_span

    def sx(x):
        return (x - xmin) / w_span * width

    def sy(y):
        return (ymax - y) / h_span * height

    def num(v):
        return format(v, ".6g")

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="0 0 {num(width)} {num(height)}" '
        f'width="{num(width)}" height="{num(height)}">',
        f'<rect x="0" y="0" width="{num(width)}" height="{num(height)}" '
        'fill="white" stroke="black" stroke-width="1"/>',
    ]
    for trace in payload.get("traces", ()):
        pts = " ".join(f"{num(sx(x))},{num(sy(y))}"
                       for _, x, y, _ in trace["points"])
        if pts:
            lines.append(f'<polyline points="{pts}" fill="none" '
                         'stroke="steelblue" stroke-width="1.5"/>')
    r_px = domain.exclusion_radius / w_span * width
    for px, py in domain.punctures:
        lines.append(f'<circle cx="{num(sx(px))}" cy="{num(sy(py))}" '
                     f'r="{num(r_px)}" fill="none" stroke="crimson" '
                     'stroke-width="1.5"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def emit(payload: dict, fmt: str, path: str) -> None:
    """Write a report or traces payload to path as json, csv, or svg."""
    if fmt == "json":
        text = canonical_json(payload) + "\n"
    elif fmt == "csv":
        if "traces" not in payload:
            raise InputError("csv output is only defined for traces")
        text = traces_csv(payload)
    elif fmt == "svg":
        if "traces" not in payload:
            raise InputError("svg output is only defined for traces")
        text = traces_svg(payload)
    else:
        raise InputError(f"unknown output format {fmt!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
