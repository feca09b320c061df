"""Figure rendering for table sweeps.

Table output optionally ships with a PNG of fidelity-vs-M curves, one
line per (system, criterion, N) series, rendered headlessly.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def render_table_figure(rows: list[dict], path: str) -> None:
    """Render fidelity curves for the sweep rows to ``path``.

    ``rows`` are table dicts with keys system, criterion, N, M, fidelity.
    """
    series: dict[tuple, list[tuple[int, float]]] = {}
    for row in rows:
        key = (row["system"], row["criterion"], row["N"])
        series.setdefault(key, []).append((row["M"], row["fidelity"]))
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for (system, criterion, n), pts in sorted(series.items()):
        pts.sort()
        ax.plot(
            [m for m, _ in pts],
            [f for _, f in pts],
            marker="o",
            label=f"{system} {criterion} N={n}",
        )
    ax.set_xlabel("output copies M")
    ax.set_ylabel("fidelity")
    ax.set_ylim(0.0, 1.05)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
