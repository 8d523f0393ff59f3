"""Report assembly: canonical JSON and the human-readable text rendering.

Reports are plain dicts; canonical_json is byte-stable for identical inputs
and seeds (sorted keys, repr floats), which backs the determinism contract.
"""

from __future__ import annotations

import json

REPORT_SCHEMA = "vjp-report-1"


def canonical_json(report):
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _fmt(value, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for key in value:
            v = value[key]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{key}:")
                lines.extend(_fmt(v, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(v)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_fmt(item, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(f"{pad}{_scalar(value)}")
    return lines


def _scalar(v):
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.10g}"
    if isinstance(v, (dict, list)) and not v:
        return "{}" if isinstance(v, dict) else "[]"
    return str(v)


def render_text(report):
    header = f"== {report.get('command', 'report')} =="
    title = report.get("title")
    lines = [header]
    if title:
        lines.append(f"problem: {title}")
    body = {k: v for k, v in report.items() if k not in ("command", "title")}
    lines.extend(_fmt(body))
    return "\n".join(lines) + "\n"
