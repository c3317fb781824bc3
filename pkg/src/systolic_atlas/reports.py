"""Bound reports and their JSON / CSV / SVG serialisation."""
from dataclasses import dataclass, field
import csv
import importlib.resources
import io
import json
import math

CSV_COLUMNS = ["name", "g", "value", "kind", "vacuous", "source"]


def fmt(x):
    """Float with 15 significant digits (the CSV convention of the package)."""
    if isinstance(x, float):
        return f"{x:.15g}"
    return str(x)


@dataclass
class BoundReport:
    name: str
    value: float
    kind: str  # "lower", "upper" or "value"
    inputs: dict = field(default_factory=dict)
    source: str = ""
    vacuous: bool = False
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("lower", "upper", "value"):
            raise ValueError(f"kind must be lower, upper or value, got {self.kind!r}")
        self.value = float(self.value)
        if not math.isfinite(self.value):
            raise ValueError(f"{self.name}: non-finite value {self.value!r}")

    def to_dict(self):
        return {
            "name": self.name,
            "value": self.value,
            "kind": self.kind,
            "vacuous": self.vacuous,
            "inputs": self.inputs,
            "source": self.source,
            "extra": self.extra,
        }

    def csv_row(self):
        g = self.inputs.get("g", "")
        return [self.name, g, fmt(self.value), self.kind, str(self.vacuous).lower(), self.source]


def reports_to_csv(reports):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        w.writerow(r.csv_row())
    return buf.getvalue()


def reports_to_json(reports):
    return json.dumps({"reports": [r.to_dict() for r in reports]}, indent=2, sort_keys=True) + "\n"


def report_schema():
    path = importlib.resources.files("systolic_atlas") / "data" / "bound_report.schema.json"
    return json.loads(path.read_text())


def table_to_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) for x in row])
    return buf.getvalue()


def line_plot_svg(xs, ys, mark=None, title="", xlabel="", ylabel="", width=640, height=400):
    """Minimal SVG line plot: axes, tick labels, one polyline and an optional marked point."""
    left, right, top, bottom = 70, 20, 40, 50
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if y1 - y0 < 1e-12:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    pw, ph = width - left - right, height - top - bottom

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + (1.0 - (y - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" font-family="sans-serif" font-size="15">{title}</text>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    for i in range(5):
        xv = x0 + (x1 - x0) * i / 4
        yv = y0 + (y1 - y0) * i / 4
        out.append(
            f'<text x="{px(xv):.1f}" y="{top + ph + 18}" text-anchor="middle" font-family="sans-serif" '
            f'font-size="11">{xv:.4g}</text>'
        )
        out.append(
            f'<text x="{left - 6}" y="{py(yv) + 4:.1f}" text-anchor="end" font-family="sans-serif" '
            f'font-size="11">{yv:.4g}</text>'
        )
    out.append(
        f'<text x="{left + pw / 2:.1f}" y="{height - 10}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="13">{xlabel}</text>'
    )
    out.append(
        f'<text x="16" y="{top + ph / 2:.1f}" text-anchor="middle" font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 16 {top + ph / 2:.1f})">{ylabel}</text>'
    )
    pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
    out.append(f'<polyline fill="none" stroke="#1f5fa8" stroke-width="1.5" points="{pts}"/>')
    if mark is not None:
        mx, my = mark
        out.append(f'<circle cx="{px(mx):.2f}" cy="{py(my):.2f}" r="4" fill="#c0392b"/>')
        out.append(
            f'<text x="{px(mx) + 8:.2f}" y="{py(my) - 8:.2f}" font-family="sans-serif" font-size="12" '
            f'fill="#c0392b">max {my:.6g}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
