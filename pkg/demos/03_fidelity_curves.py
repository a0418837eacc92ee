"""Average-fidelity curves for every solved channel, saved as CSV and PNG.

Reproduces the bundled figure presets: per-family 3GHZ/4GHZ comparisons
(fig3), the 3GHZ mixed-axis comparison (fig6), and all five 4GHZ families
on one axis (fig7).  The CSV files match what ``ghz-teleport figure`` emits.
"""

import pathlib

from ghz_teleport.cli import main

OUT = pathlib.Path(__file__).resolve().parent / "output"
OUT.mkdir(exist_ok=True)

for figure_id in ("fig3", "fig6", "fig7"):
    path = OUT / f"{figure_id}.csv"
    main(["figure", "--id", figure_id, "--output", str(path)])
    print(f"wrote {path}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping plots")
    raise SystemExit(0)

for figure_id in ("fig6", "fig7"):
    rows = (OUT / f"{figure_id}.csv").read_text().strip().split("\n")
    header = rows[0].split(",")
    data = [[float(x) for x in r.split(",")] for r in rows[1:]]
    kt = [r[0] for r in data]
    fig, ax = plt.subplots(figsize=(6, 4))
    for idx, name in enumerate(header[1:], start=1):
        ax.plot(kt, [r[idx] for r in data], label=name)
    ax.set_xlabel(r"$\kappa t$")
    ax.set_ylabel("average fidelity")
    ax.set_ylim(0.45, 1.02)
    ax.legend()
    ax.set_title(f"{figure_id}: average teleportation fidelity")
    fig.tight_layout()
    png = OUT / f"{figure_id}.png"
    fig.savefig(png, dpi=120)
    print(f"wrote {png}")
