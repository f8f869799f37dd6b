"""
Deterministic SVG rendering of stacks and distribution traces.

All geometry is computed with exact rationals and formatted with exactly six
decimals before it reaches the templates, so equal inputs give byte-equal SVG.
"""

from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Optional

from jinja2 import Environment, FileSystemLoader, select_autoescape

from core.config import RenderSettings, get_settings
from core.logger import get_logger
from core.rational import format_decimal
from models.balance_model import ForceCertificate
from models.move_model import Trace
from models.stack_model import Stack
from services.geometry_service import contacts, validate

logger = get_logger(__name__)

TEMPLATE_DIR = Path(__file__).resolve().parent.parent / "templates"
DIGITS = 6
LABEL_GUTTER = Fraction(60)

STYLE = {
    "block": "#f2d7a7",
    "outline": "#333333",
    "table": "#8c6d4f",
    "edge": "#222222",
    "force": "#c0392b",
    "weight": "#2c3e50",
    "text": "#333333",
}


@lru_cache
def _environment() -> Environment:
    return Environment(
        loader=FileSystemLoader(str(TEMPLATE_DIR)),
        autoescape=select_autoescape(["svg", "j2"]),
        trim_blocks=True,
        keep_trailing_newline=True,
    )


def fmt(value: Fraction) -> str:
    return format_decimal(value, DIGITS)


def render_stack(stack: Stack, certificate: Optional[ForceCertificate] = None, settings: Optional[RenderSettings] = None, title: str = "stack") -> str:
    """SVG of the blocks, point weights and table; certificate forces as arrows when given and enabled."""
    settings = settings or get_settings().render
    canonical = validate(stack)
    scale = Fraction(settings.scale)
    h = canonical.h

    xs = [b.x for b in canonical.blocks] + [w.x for w in canonical.weights] + [Fraction(-2)]
    rights = [b.right for b in canonical.blocks] + [w.x for w in canonical.weights] + [Fraction(1)]
    tops = [b.y + h for b in canonical.blocks] + [w.y for w in canonical.weights] + [Fraction(0)]
    bottoms = [b.y for b in canonical.blocks] + [Fraction(-1)]
    x_min = min(xs) - Fraction(1, 2)
    x_max = max(rights) + Fraction(1, 2)
    y_top = max(tops) + Fraction(1, 2)
    y_bottom = min(bottoms)

    def sx(x: Fraction) -> str:
        return fmt((x - x_min) * scale)

    def sy(y: Fraction) -> str:
        return fmt((y_top - y) * scale)

    blocks = [
        {"x": sx(b.x), "y": sy(b.y + h), "w": fmt(scale), "h": fmt(h * scale)}
        for b in canonical.blocks
    ]
    radius = scale / 8
    weights = [
        {"x": sx(w.x), "y": fmt((y_top - w.y) * scale - radius), "r": fmt(radius)}
        for w in canonical.weights
    ]

    forces = []
    if certificate is not None and settings.show_forces and certificate.entries:
        found = contacts(canonical)
        largest = max(entry.magnitude for entry in certificate.entries)
        for entry in certificate.entries:
            base = canonical.block(found[entry.contact].upper).y
            length = entry.magnitude / largest * h / 2
            forces.append({"x": sx(entry.position), "y1": sy(base), "y2": sy(base + length)})

    table_path = f"M {sx(x_min)} {sy(Fraction(0))} H {sx(Fraction(0))} V {sy(y_bottom)} H {sx(x_min)} Z"
    template = _environment().get_template("stack.svg.j2")
    svg = template.render(
        title=title,
        width=fmt((x_max - x_min) * scale),
        height=fmt((y_top - y_bottom) * scale),
        table_path=table_path,
        edge={"x": sx(Fraction(0)), "y1": sy(Fraction(0)), "y2": sy(y_bottom)},
        blocks=blocks,
        weights=weights,
        forces=forces,
        style=STYLE,
    )
    logger.debug(f"Rendered {len(blocks)} blocks, {len(forces)} forces")
    return svg


def render_trace(trace: Trace, settings: Optional[RenderSettings] = None, title: str = "trace") -> str:
    """One row of mass-proportional stems per distribution, the newest on top."""
    settings = settings or get_settings().render
    scale = Fraction(settings.scale)
    row_height = Fraction(settings.stem_row_height)
    distributions = trace.distributions
    last = len(distributions) - 1

    coords = [x for mu in distributions for x in mu.xs] + [Fraction(0)]
    masses = [m for mu in distributions for m in mu.masses]
    x_min = min(coords) - 1
    x_max = max(coords) + 1
    largest = max(masses) if masses else Fraction(1)

    def sx(x: Fraction) -> str:
        return fmt(LABEL_GUTTER + (x - x_min) * scale)

    rows = []
    for step, mu in enumerate(distributions):
        baseline = (last - step + 1) * row_height
        rows.append({
            "step": step,
            "label": f"step {step}",
            "label_x": fmt(Fraction(4)),
            "y": fmt(baseline),
            "x1": sx(x_min),
            "x2": sx(x_max),
            "stems": [
                {"x": sx(x), "top": fmt(baseline - m / largest * row_height * Fraction(4, 5))}
                for x, m in mu.points
            ],
        })

    height = (last + 1) * row_height + row_height / 2
    template = _environment().get_template("trace.svg.j2")
    return template.render(
        title=title,
        width=fmt(LABEL_GUTTER + (x_max - x_min) * scale),
        height=fmt(height),
        origin={"x": sx(Fraction(0)), "y1": fmt(Fraction(0)), "y2": fmt(height)},
        rows=rows,
        style=STYLE,
    )
