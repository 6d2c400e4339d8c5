"""Figures written next to the TSV/JSON reports (Agg backend, no display)."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _save(fig, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # fixed metadata keeps repeated runs byte-identical
    fig.savefig(path, dpi=110, metadata={"Software": None})
    plt.close(fig)
    return path


def moment_trend(rows: list[dict], path: Path) -> Path:
    """Normalized first and second moments against g."""
    gs = [r["g"] for r in rows]
    fig, ax = plt.subplots(figsize=(5.5, 3.6))
    ax.plot(gs, [r["first_ratio"] for r in rows], "o-", label=r"$\sum L / (A q^{g+2})$")
    ax.plot(gs, [r["second_normalized"] for r in rows], "s--", label=r"$\sum |L|^2 / q^{g+2}$")
    ax.axhline(1.0, color="0.6", lw=0.8)
    ax.set_xlabel("g")
    ax.set_xticks(gs)
    ax.legend(frameon=False)
    fig.tight_layout()
    return _save(fig, path)


def central_values(L: np.ndarray, path: Path, title: str = "") -> Path:
    """Scatter of L(1/2,χ) in the plane and a histogram of log|L|."""
    fig, (a1, a2) = plt.subplots(1, 2, figsize=(8, 3.6))
    a1.scatter(L.real, L.imag, s=4, alpha=0.6)
    a1.set_xlabel("Re L(1/2)")
    a1.set_ylabel("Im L(1/2)")
    a1.set_aspect("equal", adjustable="datalim")
    nz = np.abs(L) > 0
    a2.hist(np.log(np.abs(L[nz])), bins=40)
    a2.set_xlabel("log |L(1/2)|")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    return _save(fig, path)


def tail_counts(tail: dict[int, int], size: int, path: Path, title: str = "") -> Path:
    vs = sorted(tail)
    fig, ax = plt.subplots(figsize=(5, 3.4))
    ax.step(vs, [tail[v] / size for v in vs], where="post")
    ax.set_xlabel("V")
    ax.set_ylabel("N(V) / #family")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return _save(fig, path)
