"""Tabular output: CSV, JSON and a small dependency-free SVG chart."""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError

__all__ = ["DistributionTable", "Table", "render_svg"]


def _fmt(v):
    return "%.17g" % v


@dataclass(frozen=True)
class Table:
    """Named float columns plus a header and an atom block.

    ``columns[0]`` is the abscissa and must be strictly increasing.
    """

    columns: tuple
    data: np.ndarray
    header: dict = field(default_factory=dict)
    atoms: tuple = ()

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2 or data.shape[1] != len(self.columns):
            raise DomainError("data must have one column per name")
        if not np.all(np.isfinite(data)):
            raise DomainError("table values must be finite")
        if data.shape[0] > 1 and not np.all(np.diff(data[:, 0]) > 0):
            raise DomainError(f"{self.columns[0]} must be strictly increasing")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "atoms", tuple((float(a), float(m)) for a, m in self.atoms))

    def column(self, name):
        return self.data[:, self.columns.index(name)]

    def to_csv(self):
        out = io.StringIO()
        if self.header:
            out.write("# " + ",".join(f"{k}={v}" for k, v in self.header.items()) + "\n")
        out.write(",".join(self.columns) + "\n")
        for row in self.data:
            out.write(",".join(_fmt(v) for v in row) + "\n")
        for loc, mass in self.atoms:
            out.write(f"# atom,{_fmt(loc)},{_fmt(mass)}\n")
        return out.getvalue()

    def to_json(self):
        doc = {
            "header": self.header,
            "columns": list(self.columns),
            "rows": self.data.tolist(),
            "atoms": [{"location": a, "mass": m} for a, m in self.atoms],
        }
        return json.dumps(doc, indent=1) + "\n"

    @classmethod
    def from_csv(cls, text):
        header, atoms, rows, columns = {}, [], [], None
        for line in text.splitlines():
            if not line.strip():
                continue
            if line.startswith("# atom,"):
                _, loc, mass = line[2:].split(",")
                atoms.append((float(loc), float(mass)))
            elif line.startswith("#"):
                for item in line[1:].strip().split(","):
                    k, _, v = item.partition("=")
                    header[k] = v
            elif columns is None:
                columns = tuple(line.split(","))
            else:
                rows.append([float(v) for v in line.split(",")])
        return cls(columns, np.array(rows).reshape(-1, len(columns)), header, tuple(atoms))

    @classmethod
    def from_json(cls, text):
        doc = json.loads(text)
        cols = tuple(doc["columns"])
        atoms = tuple((a["location"], a["mass"]) for a in doc["atoms"])
        return cls(cols, np.array(doc["rows"], dtype=float).reshape(-1, len(cols)), doc["header"], atoms)


def DistributionTable(x, pdf_ac, cdf, header=None, atoms=()):
    """Rows of ``(x, pdf_ac, cdf)`` with the atom list kept separately."""
    data = np.column_stack([np.asarray(x, float), np.asarray(pdf_ac, float), np.asarray(cdf, float)])
    return Table(("x", "pdf_ac", "cdf"), data, dict(header or {}), tuple(atoms))


def render_svg(table: Table, ycol, step=False, width=640, height=400, title=""):
    """Polyline of ``ycol`` against the first column; ``step`` draws a staircase."""
    x = table.data[:, 0]
    y = table.column(ycol)
    pad = 40
    x0, x1 = float(x.min()), float(x.max())
    y0, y1 = min(0.0, float(y.min())), float(y.max())
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    sx = lambda v: pad + (v - x0) / (x1 - x0) * (width - 2 * pad)
    sy = lambda v: height - pad - (v - y0) / (y1 - y0) * (height - 2 * pad)
    pts = []
    for i, (a, b) in enumerate(zip(x, y)):
        if step and i:
            pts.append(f"{sx(a):.2f},{sy(y[i - 1]):.2f}")
        pts.append(f"{sx(a):.2f},{sy(b):.2f}")
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{" ".join(pts)}"/>',
        f'<text x="{pad}" y="{height - 10}" font-size="11">{x0:.4g}</text>',
        f'<text x="{width - pad}" y="{height - 10}" font-size="11" text-anchor="end">{x1:.4g}</text>',
        f'<text x="5" y="{pad}" font-size="11">{y1:.4g}</text>',
    ]
    if title:
        lines.append(f'<text x="{width / 2}" y="20" font-size="13" text-anchor="middle">{title}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
