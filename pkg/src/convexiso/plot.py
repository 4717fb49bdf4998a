"""SVG rendering of a polygon with census overlays."""
from __future__ import annotations

import xml.etree.ElementTree as ET

from .counting import DistanceClasses, find_centroid_circles, find_regular_kgons
from .geom import DEFAULT_TOL, ConvexPolygon, ToleranceContext

KGON_COLORS = ("#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b")


def render_svg(
    poly: ConvexPolygon,
    tol: ToleranceContext = DEFAULT_TOL,
    circles: bool = True,
    kgon_orders: tuple[int, ...] = (),
    unit: float | None = None,
    size: int = 600,
) -> str:
    c = poly.coords
    xmin, ymin = c.min(axis=0)
    xmax, ymax = c.max(axis=0)
    dc = DistanceClasses(poly, tol)
    found_circles = find_centroid_circles(poly, tol, classes=dc)[0] if circles else []
    for circ in found_circles:
        cx, cy = c[circ.center_index]
        xmin, xmax = min(xmin, cx - circ.radius), max(xmax, cx + circ.radius)
        ymin, ymax = min(ymin, cy - circ.radius), max(ymax, cy + circ.radius)
    span = max(xmax - xmin, ymax - ymin) or 1.0
    pad = 0.05 * span
    scale = size / (span + 2 * pad)

    def tx(x):
        return (x - xmin + pad) * scale

    def ty(y):
        return (ymax + pad - y) * scale  # SVG y axis points down

    stroke = max(span * scale / 400, 0.5)
    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", width=str(size), height=str(size),
                     viewBox=f"0 0 {size} {size}")
    ET.SubElement(svg, "rect", width="100%", height="100%", fill="white")
    pts = " ".join(f"{tx(x):.4f},{ty(y):.4f}" for x, y in c)
    ET.SubElement(svg, "polygon", points=pts, fill="#eef3fb", stroke="#1f3b73",
                  **{"stroke-width": f"{stroke:.3f}", "class": "polygon"})

    if unit is not None:
        cls = dc.unit_class(unit)
        if cls is not None:
            g = ET.SubElement(svg, "g", {"class": "unit-edges", "stroke": "#555", "stroke-width": f"{stroke / 2:.3f}"})
            n = poly.n
            for i in range(n):
                for j in range(i + 1, n):
                    if dc.labels[i, j] == cls:
                        ET.SubElement(g, "line", x1=f"{tx(c[i, 0]):.4f}", y1=f"{ty(c[i, 1]):.4f}",
                                      x2=f"{tx(c[j, 0]):.4f}", y2=f"{ty(c[j, 1]):.4f}")

    for circ in found_circles:
        cx, cy = c[circ.center_index]
        ET.SubElement(svg, "circle", {
            "class": "centroid-circle", "cx": f"{tx(cx):.4f}", "cy": f"{ty(cy):.4f}",
            "r": f"{circ.radius * scale:.4f}", "fill": "none", "stroke": "#e377c2",
            "stroke-width": f"{stroke:.3f}", "stroke-dasharray": "6 4",
        })

    for k in kgon_orders:
        for m, members in enumerate(find_regular_kgons(poly, k, tol)):
            sub = sorted(members)  # polygon index order is the ccw order
            ET.SubElement(svg, "polygon", {
                "class": f"kgon k{k}", "points": " ".join(f"{tx(c[i, 0]):.4f},{ty(c[i, 1]):.4f}" for i in sub),
                "fill": "none", "stroke": KGON_COLORS[m % len(KGON_COLORS)], "stroke-width": f"{1.5 * stroke:.3f}",
            })

    r = max(2.0, stroke * 2)
    g = ET.SubElement(svg, "g", {"class": "vertices", "fill": "#1f3b73"})
    for i, (x, y) in enumerate(c):
        ET.SubElement(g, "circle", cx=f"{tx(x):.4f}", cy=f"{ty(y):.4f}", r=f"{r:.2f}")
        label = ET.SubElement(g, "text", x=f"{tx(x) + r:.4f}", y=f"{ty(y) - r:.4f}", **{"font-size": "10"})
        label.text = str(i)
    return ET.tostring(svg, encoding="unicode")
