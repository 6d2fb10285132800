"""Deterministic CSV and SVG emission.

All numbers are written with 9 significant digits so repeated runs are
byte-identical; SVG polylines carry raw data coordinates (a scale(1,-1) group
flips the y axis), so every plotted point matches a CSV field verbatim.
"""

import math


def fmt9(x: float) -> str:
    if x == 0.0:
        x = 0.0  # avoid the "-0" spelling
    return format(x, ".9g")


def write_csv(file_path, header: str, rows) -> None:
    lines = [header]
    for row in rows:
        lines.append(",".join(fmt9(v) for v in row))
    with open(file_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


COLOR_S1 = "#0000ff"  # first singular surface family (C, Gamma, S1)
COLOR_S2 = "#ff0000"  # second singular surface family (S2 and sections)
COLOR_CHAR = "#008000"  # characteristic curves
COLOR_CUSP = "#000000"  # cusp lines and markers / planned paths


class SvgFigure:
    """Collects polylines in data coordinates and writes an SVG 1.1 file."""

    def __init__(self):
        self._polylines = []
        self._dots = []
        self._texts = []

    def polyline(self, points, color, name):
        if points:
            self._polylines.append((list(points), color, name))

    def dot(self, point, color, name):
        self._dots.append((point, color, name))

    def text(self, point, message):
        self._texts.append((point, message))

    def _bounds(self):
        xs = []
        ys = []
        for pts, _, _ in self._polylines:
            xs.extend(p[0] for p in pts)
            ys.extend(p[1] for p in pts)
        for p, _, _ in self._dots:
            xs.append(p[0])
            ys.append(p[1])
        if not xs:
            xs = ys = [0.0, 1.0]
        return min(xs), max(xs), min(ys), max(ys)

    def write(self, file_path, width: int = 640) -> None:
        xmin, xmax, ymin, ymax = self._bounds()
        pad_x = 0.05 * (xmax - xmin) or 0.5
        pad_y = 0.05 * (ymax - ymin) or 0.5
        vx = xmin - pad_x
        vy = -(ymax + pad_y)
        vw = (xmax - xmin) + 2.0 * pad_x
        vh = (ymax - ymin) + 2.0 * pad_y
        height = max(1, round(width * vh / vw))
        stroke = 0.004 * max(vw, vh)
        parts = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{width}" height="{height}" '
            f'viewBox="{fmt9(vx)} {fmt9(vy)} {fmt9(vw)} {fmt9(vh)}">',
            '<g transform="scale(1,-1)" fill="none" '
            f'stroke-width="{fmt9(stroke)}">',
        ]
        for pts, color, name in self._polylines:
            coords = " ".join(f"{fmt9(p[0])},{fmt9(p[1])}" for p in pts)
            parts.append(
                f'<polyline class="{name}" stroke="{color}" points="{coords}"/>'
            )
        for p, color, name in self._dots:
            coords = f"{fmt9(p[0])},{fmt9(p[1])} {fmt9(p[0])},{fmt9(p[1])}"
            parts.append(
                f'<polyline class="{name}" stroke="{color}" '
                f'stroke-width="{fmt9(3.0 * stroke)}" stroke-linecap="round" '
                f'points="{coords}"/>'
            )
        parts.append("</g>")
        for p, message in self._texts:
            parts.append(
                f'<text x="{fmt9(p[0])}" y="{fmt9(-p[1])}" '
                f'font-size="{fmt9(8.0 * stroke)}">{message}</text>'
            )
        parts.append("</svg>")
        with open(file_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(parts) + "\n")
