"""Figure rendering for experiment reports.

Each experiment report renders to a single PNG next to its CSV.  Figures
are a convenience view; the CSV stays the machine-readable contract.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .experiments import ExperimentReport

__all__ = ["render_report"]


def render_report(report: ExperimentReport, path) -> None:
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    name = report.name
    rows = report.rows
    if name == "nonmetrization":
        ns = [r["n"] for r in rows]
        vals = [r["norm_sq"] for r in rows]
        ax.loglog(ns, vals, "o-", label="squared norm of P_n")
        ax.loglog(ns, [np.sqrt(np.pi) / n for n in ns], "--", color="gray", label="sqrt(pi)/n")
        ax.set_xlabel("n (box edge)")
        ax.set_ylabel("squared embedding norm")
        ax.legend()
    elif name == "narrow-metrization":
        ns = [r["n"] for r in rows]
        ax.semilogy(ns, [r["d_near"] for r in rows], "o-", label="d(delta_{1/n}, delta_0)")
        ax.semilogy(ns, [r["d_far_sq"] for r in rows], "s-", label="d(delta_n, delta_0)^2")
        ax.axhline(report.details.get("far_limit_2psi0", 2.0), color="gray", ls="--", lw=0.8)
        ax.set_xlabel("n")
        ax.legend()
    elif name in ("periodic-null", "sinc-null"):
        xs = [r["xi"] for r in rows]
        ys = [r["ft_abs"] for r in rows]
        if name == "periodic-null":
            ax.stem(xs, ys)
        else:
            ax.semilogy(xs, np.maximum(ys, 1e-18), "o-")
            ax.axvspan(-1.0, 1.0, color="orange", alpha=0.2, label="kernel band")
            ax.legend()
        ax.set_xlabel("frequency")
        ax.set_ylabel("|transform of the null measure|")
    elif name == "brownian-cpd":
        xs = [r["neg_distance_form"] for r in rows]
        ys = [r["min_kernel_form"] for r in rows]
        ax.plot(xs, ys, "o", label="probes")
        grid = np.linspace(0.0, max(xs, default=1.0), 32)
        ax.plot(grid, 0.5 * grid, "--", color="gray", label="slope 1/2")
        ax.set_xlabel("-|h| form")
        ax.set_ylabel("min(|x|,|y|) form")
        ax.legend()
    elif name == "gram-vs-spectral":
        xs = [max(r["norm_sq_gram"], 1e-18) for r in rows]
        ys = [max(r["norm_sq_spectral"], 1e-18) for r in rows]
        ax.loglog(xs, ys, ".", label="samples")
        lim = [min(xs + ys), max(xs + ys)]
        ax.loglog(lim, lim, "--", color="gray", lw=0.8)
        ax.set_xlabel("squared norm (Gram side)")
        ax.set_ylabel("squared norm (spectral side)")
        ax.legend()
    else:
        numeric = [c for c in report.columns if isinstance(rows[0].get(c), (int, float))]
        if len(numeric) >= 2:
            ax.plot([r[numeric[0]] for r in rows], [r[numeric[1]] for r in rows], "o-")
            ax.set_xlabel(numeric[0])
            ax.set_ylabel(numeric[1])
    ax.set_title(f"{name} ({'pass' if report.passed else 'FAIL'})")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
