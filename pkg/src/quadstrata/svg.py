"""SVG drawing of flat surfaces (presentation only)."""

from __future__ import annotations

import colorsys
import os
import random
from xml.sax.saxutils import escape

from .surface import CYLINDER, FlatSurface

RAY = 1.5  # drawn length of an infinite ray, relative to the piece size
CELL = 220.0


def _xy(z) -> tuple[float, float]:
    return float(z.re), float(z.im)


def _palette(n: int, rng: random.Random) -> list[str]:
    base = rng.random() * 0.1
    out = []
    for k in range(max(n, 1)):
        r, g, b = colorsys.hsv_to_rgb((base + k / max(n, 1)) % 1.0, 0.65, 0.85)
        out.append(f"#{int(r * 255):02x}{int(g * 255):02x}{int(b * 255):02x}")
    return out


def _piece_segments(surface: FlatSurface, pid: str):
    """Line segments ``(walk_index, p, q)`` drawn for one piece, in piece coordinates."""
    piece = surface.piece(pid)
    ex = surface.expansion(pid)
    scale = max([abs(float(v.re)) + abs(float(v.im)) for v in list(piece.vectors) + list(piece.lower)] + [1.0])
    ray = RAY * scale
    walk_pos = {ws: k for k, ws in enumerate(ex.walk)}
    lines = []
    offset = (0.0, 0.0)
    for si, sheet in enumerate(ex.sheets):
        x, y = offset
        for ei, el in enumerate(sheet.elems):
            dx, dy = _xy(el.vec)
            if el.kind == "seg":
                p, q = (x, y), (x + dx, y + dy)
                x, y = q
            elif el.kind == "in":
                norm = (dx * dx + dy * dy) ** 0.5 or 1.0
                p, q = (x - ray * dx / norm, y - ray * dy / norm), (x, y)
            else:
                norm = (dx * dx + dy * dy) ** 0.5 or 1.0
                p, q = (x, y), (x + ray * dx / norm, y + ray * dy / norm)
            lines.append((walk_pos.get((si, ei)), p, q))
        if piece.kind == CYLINDER and piece.direction is not None:
            dx, dy = _xy(piece.direction)
            norm = (dx * dx + dy * dy) ** 0.5 or 1.0
            for px, py in ((offset[0], offset[1]), (x, y)):
                lines.append((None, (px, py), (px + ray * dx / norm, py + ray * dy / norm)))
        # lower sheets of open domains start where the upper one did
    return lines


def surface_svg(surface: FlatSurface, seed: int | None = None) -> str:
    """Each piece in its own cell; glued edges share a colour and a label."""
    if seed is None:
        seed = int(os.environ.get("QUADSTRATA_SEED", "0") or 0)
    rng = random.Random(seed)
    colors = _palette(len(surface.gluings), rng)
    edge_color: dict[tuple[str, int], tuple[str, str]] = {}
    for k, g in enumerate(surface.gluings):
        for ref in (g.a, g.b):
            edge_color[(ref.piece, ref.index)] = (colors[k], f"{k}{'*' if g.twist != 'translation' else ''}")
    body = []
    for col, piece in enumerate(surface.pieces):
        lines = _piece_segments(surface, piece.id)
        xs = [c for _, p, q in lines for c in (p[0], q[0])] or [0.0]
        ys = [c for _, p, q in lines for c in (p[1], q[1])] or [0.0]
        w = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
        s = (CELL - 40) / w
        ox = col * CELL + 20 - min(xs) * s + rng.uniform(-3, 3)
        oy = CELL - 20 + min(ys) * s + rng.uniform(-3, 3)
        body.append(f'<text x="{col * CELL + 8}" y="14" font-size="12">{escape(piece.id)} ({piece.kind})</text>')
        for idx, p, q in lines:
            color, label = edge_color.get((piece.id, idx), ("#888888", "")) if idx is not None else ("#cccccc", "")
            x1, y1, x2, y2 = ox + p[0] * s, oy - p[1] * s, ox + q[0] * s, oy - q[1] * s
            body.append(f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" '
                        f'stroke="{color}" stroke-width="2"/>')
            if label:
                body.append(f'<text x="{(x1 + x2) / 2:.1f}" y="{(y1 + y2) / 2 - 3:.1f}" font-size="10" '
                            f'fill="{color}">{escape(label)}</text>')
    width = CELL * max(len(surface.pieces), 1)
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{CELL + 20:.0f}">\n'
            + "\n".join(body) + "\n</svg>\n")
