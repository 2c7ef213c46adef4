"""Matplotlib figures of the closed-form comparison (pathlength and ON states versus N)."""

from __future__ import annotations

import io

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .analytics import TABLE_RADIUS, TABLE_SIZES, on_count_formula, pathlength_formula  # noqa: E402


def comparison_figure(parity: str, n_max: int = 60, R: float = TABLE_RADIUS) -> bytes:
    """PNG bytes: pathlength (left) and ON states (right) for one parity class."""
    start = 1 if parity == "odd" else 2
    lanes = list(range(start, n_max + 1, 2))
    fig, (ax_len, ax_on) = plt.subplots(1, 2, figsize=(11, 4.2))
    for W, H in TABLE_SIZES:
        b = [pathlength_formula("boustrophedon", n, W, H, R) / 1000 for n in lanes]
        a = [pathlength_formula("alternative", n, W, H, R) / 1000 for n in lanes]
        line, = ax_len.plot(lanes, b, "-", lw=1.4, label=f"B, W={W:g} H={H:g}")
        ax_len.plot(lanes, a, "--", lw=1.4, color=line.get_color(), label=f"A, W={W:g} H={H:g}")
    ax_on.plot(lanes, [on_count_formula("boustrophedon", n) for n in lanes], "-", label="Boustrophedon")
    ax_on.plot(lanes, [on_count_formula("alternative", n) for n in lanes], "--", label="alternative")
    ax_len.set_xlabel("lanes N")
    ax_len.set_ylabel("pathlength [km]")
    ax_on.set_xlabel("lanes N")
    ax_on.set_ylabel("switching-on states")
    ax_len.legend(fontsize=7, ncol=2)
    ax_on.legend(fontsize=8)
    for ax in (ax_len, ax_on):
        ax.grid(alpha=0.3)
    fig.suptitle(f"{parity} lane counts, R = {R:g} m")
    fig.tight_layout()
    buf = io.BytesIO()
    # fixed metadata keeps the bytes identical across runs
    fig.savefig(buf, format="png", dpi=110, metadata={"Software": None})
    plt.close(fig)
    return buf.getvalue()
