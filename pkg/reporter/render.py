"""Render a :class:`common.models.Report` as plain text for terminals and logs.

Nested result values are flattened to dotted keys; long mappings such as the
per-quadruple Pontryagin values are summarized by their size.
"""

from __future__ import annotations

from typing import Any, Dict, List, Tuple

from jinja2 import BaseLoader, Environment

from common.models import Report

MAX_ITEMS = 12

TEXT_TEMPLATE = """\
gerbe-lab {{ report.version }} | {{ report.command.value }} | status: {{ report.status.value }} | seed {{ report.seed }}
{% if report.error %}
error: {{ report.error.error }}: {{ report.error.message }}
{% for key, value in report.error.witness.items() %}
  {{ key }} = {{ value }}
{% endfor %}
{% endif %}
{% if result %}
result:
{% for key, value in result %}
  {{ key }} = {{ value }}
{% endfor %}
{% endif %}
{% if defects %}
defects:
{% for name, value in defects %}
  {{ "%-32s"|format(name) }} {{ "%.3e"|format(value) }}
{% endfor %}
{% endif %}
timings:{% for name, value in timings %} {{ name }}={{ "%.2f"|format(value) }}s{% endfor %}
"""


def flatten(value: Any, prefix: str = "") -> List[Tuple[str, Any]]:
    if isinstance(value, dict):
        if len(value) > MAX_ITEMS:
            return [(prefix, f"<{len(value)} entries>")]
        rows: List[Tuple[str, Any]] = []
        for key in sorted(value):
            rows.extend(flatten(value[key], f"{prefix}.{key}" if prefix else str(key)))
        return rows
    if isinstance(value, list) and len(value) > MAX_ITEMS:
        return [(prefix, f"<{len(value)} items>")]
    return [(prefix, value)]


def render_text(report: Report) -> str:
    env = Environment(loader=BaseLoader(), autoescape=False, trim_blocks=True, lstrip_blocks=True)
    template = env.from_string(TEXT_TEMPLATE)
    timings: Dict[str, float] = report.timings
    return template.render(
        report=report,
        result=flatten(report.result),
        defects=sorted(report.defects.items()),
        timings=sorted(timings.items()),
    ).rstrip()
