"""Flow-report artefacts: a delimited trajectory table and matplotlib
figures rendered to files next to it.

Everything here consumes a :class:`~nkmoduli.nahm.FlowReport`; the CLI `flow`
subcommand calls :func:`write_flow_artifacts` when given a report directory.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .nahm import FlowReport

__all__ = ["write_trajectory_csv", "render_flow_figures", "write_flow_artifacts"]


def _component_norms(report: FlowReport) -> np.ndarray:
    return np.array(
        [
            [float(np.max(np.abs(state.T[i]))) for i in range(4)]
            for state in report.checkpoints
        ]
    )


def write_trajectory_csv(report: FlowReport, path: "str | Path") -> Path:
    """One row per checkpoint: time, component sup-norms, sigma residual."""
    path = Path(path)
    norms = _component_norms(report)
    sigma = dict(report.sigma_residual_history)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["t", "norm_T0", "norm_T1", "norm_T2", "norm_T3", "sigma_residual"])
        for state, row in zip(report.checkpoints, norms):
            writer.writerow(
                [f"{state.t:.17g}"]
                + [f"{v:.17g}" for v in row]
                + [f"{sigma.get(state.t, float('nan')):.17g}"]
            )
    return path


def render_flow_figures(report: FlowReport, outdir: "str | Path") -> list[Path]:
    """Render norm, invariant and spectrum figures as PNG files."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    times = np.array([s.t for s in report.checkpoints])
    paths = []

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    norms = _component_norms(report)
    for i in range(4):
        ax.plot(times, norms[:, i], label=f"T{i}")
    ax.set_xlabel("t")
    ax.set_ylabel("sup-norm")
    ax.set_title("component norms along the flow")
    ax.legend(frameon=False)
    fig.tight_layout()
    path = outdir / "flow_norms.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    paths.append(path)

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    sigma_t = np.array([t for t, _ in report.sigma_residual_history])
    sigma_r = np.array([r for _, r in report.sigma_residual_history])
    ax.semilogy(sigma_t, np.maximum(sigma_r, 1e-18), label="sigma residual")
    ax.axhline(
        max(report.max_antihermiticity_drift, 1e-18),
        color="tab:red",
        linestyle="--",
        label="max anti-Hermiticity drift",
    )
    ax.set_xlabel("t")
    ax.set_ylabel("residual")
    ax.set_title("invariant monitors")
    ax.legend(frameon=False)
    fig.tight_layout()
    path = outdir / "flow_invariants.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    paths.append(path)

    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    for state in report.checkpoints:
        eig = np.linalg.eigvals(state.beta())
        ax.scatter(eig.real, eig.imag, s=6, c=[[0.2, 0.4, 0.8, 0.6]])
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title("spectrum of T2 + i T3 over the run")
    ax.set_aspect("equal", adjustable="datalim")
    fig.tight_layout()
    path = outdir / "flow_spectrum.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    paths.append(path)
    return paths


def write_flow_artifacts(report: FlowReport, outdir: "str | Path") -> dict:
    """CSV plus figures; returns the written paths keyed by artefact name."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = write_trajectory_csv(report, outdir / "trajectory.csv")
    figures = render_flow_figures(report, outdir)
    return {"trajectory_csv": csv_path, "figures": figures}
