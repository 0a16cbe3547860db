"""Figure rendering for sweep reports.

Figures are written straight to files (format chosen by extension) next to
the delimited output; no interactive backend is touched, so this works in
headless runs.
"""

from __future__ import annotations

from matplotlib.figure import Figure

__all__ = ["sweep_figure", "save_sweep_figure"]


def sweep_figure(snr_db, series, *, capacity=None, ylabel="rate [bit / symbol]", title=None):
    """Rate-versus-SNR figure.

    ``series`` maps curve labels to rate arrays over the ``snr_db`` grid;
    ``capacity`` adds the Gaussian-input reference as a dashed line.
    """
    fig = Figure(figsize=(6.4, 4.2))
    ax = fig.subplots()
    for label, values in series.items():
        ax.plot(snr_db, values, marker="o", markersize=3, linewidth=1.4, label=label)
    if capacity is not None:
        ax.plot(snr_db, capacity, "k--", linewidth=1.2, label="AWGN capacity")
    ax.set_xlabel("SNR [dB]")
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.4)
    ax.legend()
    fig.tight_layout()
    return fig


def save_sweep_figure(path, snr_db, series, **kwargs):
    """Render and write a sweep figure to ``path``."""
    sweep_figure(snr_db, series, **kwargs).savefig(path, dpi=150)
