"""Band visualization for one-dimensional comparisons.

Rendering is pinned down (fixed hash salt, no date metadata) so the same
band always produces byte-identical SVG output.
"""

from __future__ import annotations

import io

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["render_band_svg"]


def render_band_svg(band) -> str:
    """Render a fitted one-dimensional band as an SVG string.

    Shows the estimated difference, the simultaneous confidence band
    around zero, and shades the grid regions where the difference
    escapes the band (the evidence behind a rejection).
    """
    if band.grid.shape[1] != 1:
        raise ValueError("plotting is only available for one-dimensional inputs")
    x = band.grid[:, 0]
    with matplotlib.rc_context({"svg.hashsalt": "gpdiff", "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(8.0, 4.5))
        try:
            ax.fill_between(
                x, band.lower, band.upper,
                color="#9ecae1", alpha=0.6, linewidth=0.0,
                label=f"{100 * (1 - band.alpha):g}% simultaneous band",
            )
            escaped = band.delta > 0.0
            if escaped.any():
                ax.fill_between(
                    x, band.lower, band.upper, where=escaped,
                    color="#fc9272", alpha=0.5, linewidth=0.0,
                    label="difference outside band",
                )
            ax.axhline(0.0, color="#555555", linewidth=0.8)
            ax.plot(x, band.diff, color="#08519c", linewidth=1.6,
                    label="estimated difference")
            ax.set_xlabel("input")
            ax.set_ylabel("difference of posterior means")
            ax.set_title(f"decision: {band.decision} "
                         f"({band.rejected_percent:.1f}% of grid outside band)")
            ax.legend(loc="best", fontsize=9)
            fig.tight_layout()
            buffer = io.StringIO()
            fig.savefig(buffer, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    return buffer.getvalue()
