"""Optional PNG rendering of CLI artifacts. Imported lazily; never touches
the numeric outputs."""

from __future__ import annotations

__all__ = ["save_curve_plot", "save_class_plot"]


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def save_curve_plot(path, rho_db, series: dict, ylabel: str, logy: bool = True):
    """Line plot of one or more columns against snr in dB."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for name, vals in series.items():
        style = "--" if name.startswith("asym") or name == "limit" else "-"
        ax.plot(rho_db, vals, style, label=name)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel("snr (dB)")
    ax.set_ylabel(ylabel)
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_class_plot(path, c_values, frequencies, gray_c: int | None = None):
    """Bar chart of labeling-class frequencies keyed by the pair constant."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    colors = ["tab:green" if gray_c is not None and v == gray_c else "tab:blue" for v in c_values]
    ax.bar(c_values, frequencies, color=colors, width=1.6)
    ax.set_xlabel("pair constant")
    ax.set_ylabel("frequency")
    ax.grid(alpha=0.3, axis="y")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
