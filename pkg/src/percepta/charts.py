"""Write-only SVG step charts for threshold plots.

Convenience output for the CLI; nothing reads these back. Counts are
drawn as right-continuous steps, matching how the plots evaluate.
"""

from xml.sax.saxutils import escape

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

_UNIT_LABEL = {
    "distance": "threshold (px)",
    "density": "threshold (area fraction)",
}


def _step_vertices(plot, x_max):
    """(x, count) corners of the step polyline from 0 to x_max."""
    levels = sorted(set(b for b in plot.breakpoints if b <= x_max))
    pts = [(0.0, plot.evaluate(0.0))]
    for b in levels:
        before = plot.evaluate(b) + sum(1 for v in plot.breakpoints if v == b)
        pts.append((b, before))
        pts.append((b, plot.evaluate(b)))
    pts.append((x_max, plot.evaluate(x_max)))
    return pts


def step_chart_svg(plots, labels=None, title=None, marker=None,
                   width=640, height=400):
    """Render one or more threshold plots as an SVG document string.

    Plots overlay in palette order. marker, if given, draws a dashed
    vertical line at that threshold.
    """
    if not plots:
        raise ValueError("need at least one plot")
    labels = list(labels) if labels else [f"plot {i + 1}" for i in range(len(plots))]
    if len(labels) != len(plots):
        raise ValueError("labels must match plots")

    peak = max((max(p.breakpoints) for p in plots if p.breakpoints), default=0.0)
    if marker is not None:
        peak = max(peak, marker)
    x_max = peak * 1.15 if peak > 0 else 1.0
    y_max = max(p.count_at_zero for p in plots) + 0.5

    left, right, top, bottom = 56, 16, 30, 46
    iw, ih = width - left - right, height - top - bottom

    def sx(x):
        return left + iw * (x / x_max)

    def sy(y):
        return top + ih * (1 - y / y_max)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
           f'<rect width="{width}" height="{height}" fill="white"/>']
    if title:
        out.append(f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" '
                   f'font-size="14">{escape(title)}</text>')

    # axes with a handful of ticks
    out.append(f'<line x1="{left}" y1="{top + ih}" x2="{left + iw}" y2="{top + ih}" '
               'stroke="black"/>')
    out.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ih}" stroke="black"/>')
    for i in range(5):
        x = x_max * i / 4
        px = sx(x)
        out.append(f'<line x1="{px:.1f}" y1="{top + ih}" x2="{px:.1f}" y2="{top + ih + 4}" '
                   'stroke="black"/>')
        out.append(f'<text x="{px:.1f}" y="{top + ih + 18}" text-anchor="middle">{x:.4g}</text>')
    y_step = max(1, int(y_max // 6))
    level = 0
    while level <= y_max:
        py = sy(level)
        out.append(f'<line x1="{left - 4}" y1="{py:.1f}" x2="{left}" y2="{py:.1f}" '
                   'stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{py + 4:.1f}" text-anchor="end">{level}</text>')
        level += y_step
    unit_label = _UNIT_LABEL.get(plots[0].unit, plots[0].unit)
    out.append(f'<text x="{left + iw / 2:.1f}" y="{height - 10}" '
               f'text-anchor="middle">{escape(unit_label)}</text>')
    out.append(f'<text x="14" y="{top + ih / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 14 {top + ih / 2:.1f})">cluster count</text>')

    if marker is not None:
        px = sx(marker)
        out.append(f'<line x1="{px:.1f}" y1="{top}" x2="{px:.1f}" y2="{top + ih}" '
                   'stroke="#888" stroke-dasharray="5 4"/>')

    for idx, plot in enumerate(plots):
        color = PALETTE[idx % len(PALETTE)]
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in _step_vertices(plot, x_max))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>')
        if len(plots) > 1:
            ly = top + 14 + 16 * idx
            out.append(f'<line x1="{left + iw - 120}" y1="{ly}" x2="{left + iw - 96}" '
                       f'y2="{ly}" stroke="{color}" stroke-width="2"/>')
            out.append(f'<text x="{left + iw - 90}" y="{ly + 4}">{escape(labels[idx])}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_step_chart(path, plots, labels=None, title=None, marker=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(step_chart_svg(plots, labels=labels, title=title, marker=marker))
