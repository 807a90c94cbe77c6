"""Renderers: one figure per spec id, all driven by report values only.

True geometry is unplottable (squares of side 2^-16 inside a unit square),
so the nested-square figures use a symbolic layout: each child square is
drawn at a fixed fraction of its parent's displayed side, positioned at the
corner its address dictates.  Figures that warp scale carry an explicit note.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import Circle, Rectangle

from .specs import FigureSpec, FigureStyle, load_report, require_dataset

WARP_NOTE = "symbolic scale: each generation drawn at a fixed fraction of its parent"

# address codes: bit 0 = east, bit 1 = north
_CODE_OFFSETS = {0: (0, 0), 1: (1, 0), 2: (0, 1), 3: (1, 1)}


def _display_rect(address, ratio: float):
    """Display rectangle (x, y, side) of a nested square from its corner path."""
    x, y, side = 0.0, 0.0, 1.0
    for code in address:
        child = side * ratio
        ex, ny = _CODE_OFFSETS[int(code)]
        x += (side - child) * ex
        y += (side - child) * ny
        side = child
    return x, y, side


def _new_axes(style: FigureStyle, square: bool = True):
    fig, ax = plt.subplots(figsize=(style.width, style.height), dpi=style.dpi)
    if square:
        ax.set_aspect("equal")
    ax.tick_params(labelsize=style.font_size)
    return fig, ax


def build_cantor_hierarchy(doc: dict, style: FigureStyle):
    data = require_dataset(doc, "cantor_hierarchy", "cantor-hierarchy")
    fig, ax = _new_axes(style)
    for gen in data:
        for cube in gen["cubes"]:
            x, y, side = _display_rect(cube["address"], style.shrink_ratio)
            ax.add_patch(
                Rectangle((x, y), side, side, fill=False, lw=style.line_width, ec="black")
            )
    ax.set_xlim(-0.03, 1.03)
    ax.set_ylim(-0.1, 1.03)
    sides = ", ".join(f"2^{g['side_log2']}" for g in data)
    ax.text(0.0, -0.07, f"{WARP_NOTE}; true sides: {sides}", fontsize=style.font_size)
    ax.set_axis_off()
    ax.set_title("Nested corner squares, generations " + ", ".join(str(g["generation"]) for g in data))
    return fig


def build_sparse_tower(doc: dict, style: FigureStyle):
    data = require_dataset(doc, "sparse_tower", "sparse-tower")
    levels = data["levels"]
    fig, ax = _new_axes(style)
    ax.add_patch(Rectangle((0, 0), 1, 1, fill=False, lw=style.line_width, ec="black"))
    shown = min(4, len(levels))
    side = 1.0
    for i in range(shown):
        side *= 0.78
        ax.add_patch(
            Rectangle((0, 0), side, side, fill=False, lw=style.line_width, ls="--", ec="black")
        )
        ax.text(side * 0.72, side * 1.01, f"level {levels[i]}", fontsize=style.font_size)
    ax.plot([side * 0.35, side * 0.25, side * 0.15], [side * 0.35, side * 0.25, side * 0.15],
            ".", color="black", ms=3)
    inner = 0.05
    ax.add_patch(Rectangle((0, 0), inner, inner, fill=False, lw=style.line_width, ec="black"))
    ax.text(inner * 1.2, inner * 0.35, f"level {levels[-1]}", fontsize=style.font_size)
    ax.text(0.45, 0.92, "anchor square", fontsize=style.font_size)
    ax.text(0.0, -0.06, WARP_NOTE, fontsize=style.font_size)
    ax.set_xlim(-0.03, 1.05)
    ax.set_ylim(-0.1, 1.05)
    ax.set_axis_off()
    ax.set_title(
        f"Corner tower, generation {data['k']}: {len(levels)} nested cubes, "
        f"witness ratio 3/4"
    )
    return fig


def build_patch_geometry(doc: dict, style: FigureStyle):
    data = require_dataset(doc, "patch_geometry", "patch-geometry")
    entry = data[0]
    fig, ax = _new_axes(style)
    # four squares in the corner arrangement, each with core + annulus
    positions = [(0.0, 0.0), (0.62, 0.0), (0.0, 0.62), (0.62, 0.62)]
    side = 0.38
    r_core, r_in, r_out = 0.05, 0.10, 0.145
    for (x, y) in positions:
        ax.add_patch(Rectangle((x, y), side, side, fill=False, lw=style.line_width, ec="black"))
        cx, cy = x + side / 2, y + side / 2
        ax.add_patch(Circle((cx, cy), r_out, fill=False, ec="black", lw=style.line_width))
        ring = Circle((cx, cy), r_out, color="0.8", zorder=0)
        ax.add_patch(ring)
        ax.add_patch(Circle((cx, cy), r_in, color="white", zorder=1))
        ax.add_patch(Circle((cx, cy), r_core, color="0.3", zorder=2))
    cx, cy = positions[0][0] + side / 2, positions[0][1] + side / 2
    ax.annotate(f"core 2^{entry['delta_log2']:.1f}", (cx + r_core, cy), (0.46, 0.28),
                fontsize=style.font_size, arrowprops={"arrowstyle": "->"})
    ax.annotate(f"ring to 2^{entry['outer_radius_log2']:.1f}", (cx, cy - r_out), (0.4, 0.08),
                fontsize=style.font_size, arrowprops={"arrowstyle": "->"})
    ax.text(0.0, -0.07, f"{WARP_NOTE}; square side 2^{entry['side_log2']}",
            fontsize=style.font_size)
    ax.set_xlim(-0.03, 1.03)
    ax.set_ylim(-0.12, 1.03)
    ax.set_axis_off()
    ax.set_title(f"Eddy geometry in generation {entry['k']}: positive core, negative ring")
    return fig


def build_inner_tower(doc: dict, style: FigureStyle):
    data = require_dataset(doc, "inner_tower", "inner-tower")
    fig, ax = _new_axes(style)
    ax.add_patch(Circle((0.5, 0.5), 0.48, fill=False, lw=style.line_width, ec="black"))
    inner = 0.62
    ox, oy = 0.5 - inner / 2, 0.5 - inner / 2
    ax.add_patch(Rectangle((ox, oy), inner, inner, fill=False, lw=style.line_width, ec="black"))
    side = inner
    for _ in range(3):
        side *= 0.72
        ax.add_patch(Rectangle((ox, oy), side, side, fill=False, ls="--",
                               lw=style.line_width, ec="black"))
    ax.plot([ox + side * 0.5, ox + side * 0.38, ox + side * 0.26],
            [oy + side * 0.5, oy + side * 0.38, oy + side * 0.26], ".", color="black", ms=3)
    ax.plot([0.5], [0.5], "o", color="black", ms=4)
    ax.text(0.52, 0.52, "center", fontsize=style.font_size)
    ax.text(0.5, 0.965, f"core radius 2^{data['delta_log2']:.1f}", fontsize=style.font_size,
            ha="center")
    lo, hi = data["tower_levels"]
    ax.text(0.0, -0.06,
            f"{WARP_NOTE}; inner side 2^{data['inner_cube_side_log2']}, "
            f"tower levels {lo}..{hi}", fontsize=style.font_size)
    ax.set_xlim(-0.03, 1.03)
    ax.set_ylim(-0.1, 1.03)
    ax.set_axis_off()
    ax.set_title(
        f"Inner tower at generation {data['generation']} "
        f"(threshold level {data['threshold_level']}, log2 value {data['log2_value']:.1f})"
    )
    return fig


def build_morrey_growth(doc: dict, style: FigureStyle):
    data = require_dataset(doc, "morrey_growth", "morrey-growth")
    fig, ax = _new_axes(style, square=False)
    omega = data["omega"]
    dirac = data["dirac_k1"]
    ax.plot([e["level"] for e in omega], [e["value"] for e in omega],
            lw=style.line_width, label="limit measure (bounded)")
    ax.plot([e["level"] for e in dirac], [e["value"] for e in dirac],
            lw=style.line_width, ls="--", label="generation-1 atoms (growing)")
    ax.axhline(9 / 4, color="0.6", lw=0.8)
    ax.text(1.5, 9 / 4 + 0.3, "9/4", fontsize=style.font_size)
    ax.set_xlabel("dyadic level")
    ax.set_ylabel("per-level maximum of (1+2 level) * mass")
    ax.set_xscale("log", base=2)
    ax.legend(fontsize=style.font_size)
    ax.set_title("Weighted circulation maxima per level")
    return fig


def build_sparse_divergence(doc: dict, style: FigureStyle):
    rows = require_dataset(doc, "sparse_divergence", "sparse-divergence")
    fig, ax = _new_axes(style, square=False)
    ks = [r["generation"] for r in rows]
    cum = [float(r["cumulative"]) for r in rows]
    con = [float(r["contribution"]) for r in rows]
    ax.plot(ks, cum, "o-", lw=style.line_width, label="cumulative square-sum")
    ax.plot(ks, con, "s--", lw=style.line_width, label="per-generation contribution (3/16)")
    ax.set_xticks(ks)
    ax.set_xlabel("generation")
    ax.set_ylabel("tower square-sum")
    ax.legend(fontsize=style.font_size)
    ax.set_title("Linear growth of tower square-sums")
    return fig


def build_energy_decay(doc: dict, style: FigureStyle):
    data = require_dataset(doc, "energy_decay", "energy-decay")
    fig, ax = _new_axes(style, square=False)
    ks = data["k"]
    ax.plot(ks, data["weak_pairing_log2"], "o-", lw=style.line_width, color="tab:blue",
            label="log2 pairing bound")
    ax.set_xlabel("generation k")
    ax.set_ylabel("log2 of the pairing bound", color="tab:blue")
    ax.set_xticks(ks)
    ax2 = ax.twinx()
    ax2.plot(ks, data["l2_norm_sq"], "s--", lw=style.line_width, color="tab:red",
             label="energy")
    ax2.axhline(data["l2_limit"], color="tab:red", lw=0.8, ls=":")
    ax2.set_ylabel("squared L2 norm (bounded below)", color="tab:red")
    ax2.set_ylim(0, max(data["l2_norm_sq"]) * 1.4)
    ax.set_title("Weak convergence to zero vs. non-vanishing energy")
    return fig


_BUILDERS = {
    "cantor-hierarchy": build_cantor_hierarchy,
    "sparse-tower": build_sparse_tower,
    "patch-geometry": build_patch_geometry,
    "inner-tower": build_inner_tower,
    "morrey-growth": build_morrey_growth,
    "sparse-divergence": build_sparse_divergence,
    "energy-decay": build_energy_decay,
}


def build_figure(spec: FigureSpec, doc: dict | None = None):
    """Build the matplotlib figure for a spec (no file output)."""
    if doc is None:
        doc = load_report(spec.input_path)
    return _BUILDERS[spec.figure_id](doc, spec.style)


def render(spec: FigureSpec, doc: dict | None = None) -> str:
    """Render the figure to spec.output_path (format from the extension)."""
    plt.rcParams["svg.hashsalt"] = "cantoreuler-figures"
    fig = build_figure(spec, doc)
    out = Path(spec.output_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    try:
        fig.savefig(out, metadata=_clean_metadata(out.suffix))
    finally:
        plt.close(fig)
    return str(out)


def _clean_metadata(suffix: str):
    if suffix.lower() == ".svg":
        return {"Date": None}
    if suffix.lower() == ".png":
        return {"Software": None}
    return None
