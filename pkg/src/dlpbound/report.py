"""Rendering of verification runs: text reports, delimited tables, figures.

A run produces four files side by side in the output directory:

    <name>.cert   exact certificate (the portable artifact)
    <name>.txt    human-readable report with the exact objective and its
                  floor-rounded decimal
    <name>.csv    one row per orbit representative: coordinates, squared
                  norm, orbit size, exact mu entry, float lambda value
    <name>.png    mu masses and the lambda spectrum against squared norm

The float lambda column and the figure are diagnostics computed from the
float transform; nothing rigorous depends on them.  The rigorous content
lives in the certificate file and the exact objective in the report.
"""

from __future__ import annotations

import csv
import os
from fractions import Fraction

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .certify import DualCertificate, VerificationReport, write_certificate
from .orbits import OrbitIndex
from .presets import PresetResult
from .symdft import SymDFTMatrix

__all__ = [
    "lambda_float",
    "write_csv",
    "write_figure",
    "render_text",
    "write_outputs",
]


def lambda_float(cert: DualCertificate, index: OrbitIndex,
                 fmat: SymDFTMatrix | None = None) -> list[float]:
    """Float approximation of lambda_y = (F^T mu)_y + F_0y * mu_0."""
    if fmat is None:
        fmat = SymDFTMatrix(index, backend="float64")
    if fmat.backend != "float64":
        raise ValueError("lambda_float needs the float transform")
    mu0 = cert.params.mu0_float()
    out = []
    arr = fmat.array
    for j in range(len(index)):
        total = arr[0, j] * mu0
        for rep, value in cert.mu.items():
            total += arr[index.position(rep), j] * float(value)
        out.append(float(total))
    return out


def write_csv(path: str, index: OrbitIndex, cert: DualCertificate,
              lam: list[float]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rep", "norm_sq", "orbit_size", "mu", "lambda_float"])
        mu0_q, mu0_rad = cert.params.mu0_exact()
        for j, rep in enumerate(index.reps):
            if j == 0:
                mu_text = f"{mu0_q}" + (f"*sqrt({mu0_rad})" if mu0_rad != 1 else "")
            else:
                mu_text = str(cert.mu.get(rep, Fraction(0)))
            writer.writerow([
                " ".join(str(v) for v in rep),
                index.norm_sqs[j],
                index.orbit_sizes[j],
                mu_text,
                repr(lam[j]),
            ])


def write_figure(path: str, name: str, index: OrbitIndex,
                 cert: DualCertificate, lam: list[float],
                 report: VerificationReport) -> None:
    fig, (ax_mu, ax_lam) = plt.subplots(2, 1, figsize=(7.5, 6.5), sharex=True)

    norms = [index.norm_sqs[index.position(rep)] for rep in cert.mu]
    masses = [float(v) for v in cert.mu.values()]
    mu0 = cert.params.mu0_float()
    ax_mu.stem([0] + norms, [mu0] + masses, basefmt=" ")
    ax_mu.set_ylabel("mu (orbit mass)")
    ax_mu.set_title(f"{name}: certified bound {report.decimal_lower_bound} "
                    f"({report.status})")

    ax_lam.scatter(index.norm_sqs, lam, s=12)
    ax_lam.axhline(0.0, color="black", linewidth=0.8)
    ax_lam.set_xlabel("squared norm of representative")
    ax_lam.set_ylabel("lambda (float view)")
    ax_lam.set_yscale("symlog", linthresh=1e-9)

    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_text(result: PresetResult) -> str:
    preset, run = result.preset, result.run
    report = run.report
    lines = [
        f"preset: {preset.name}",
        f"parameters: d={preset.d} m={preset.m} r2={preset.r2}",
        f"route: {preset.kind}" + (f" ({preset.table})" if preset.table else ""),
    ]
    if run.solution is not None:
        lines.append(
            f"solver: {run.solution.iterations} iterations, "
            f"residual {float(run.solution.max_violation):.2e}, "
            f"float objective {float(run.solution.objective):.12f}")
        lines.append(f"rounding scheme: {run.scheme or 'auto'}")
    lines.append(f"certificate entries: {len(run.cert.mu)} nonzero")
    lines.append(report.render())
    lines.append("expectations:")
    lines.append(result.render_checks())
    lines.append(f"verdict: {'ok' if result.ok else 'FAILED'} "
                 f"({result.elapsed:.1f}s)")
    return "\n".join(lines) + "\n"


def write_outputs(result: PresetResult, outdir: str) -> dict[str, str]:
    """Write certificate, text report, csv table, and figure; returns
    the path of each artifact keyed by kind."""
    os.makedirs(outdir, exist_ok=True)
    name = result.preset.name
    run = result.run
    paths = {
        "cert": os.path.join(outdir, f"{name}.cert"),
        "text": os.path.join(outdir, f"{name}.txt"),
        "csv": os.path.join(outdir, f"{name}.csv"),
        "figure": os.path.join(outdir, f"{name}.png"),
    }
    write_certificate(run.cert, paths["cert"])
    with open(paths["text"], "w", encoding="utf-8") as fh:
        fh.write(render_text(result))
    lam = lambda_float(run.cert, run.index, run.float_matrix)
    write_csv(paths["csv"], run.index, run.cert, lam)
    write_figure(paths["figure"], name, run.index, run.cert, lam, run.report)
    return paths
