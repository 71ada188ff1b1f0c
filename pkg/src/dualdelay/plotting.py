"""Optional figure rendering next to the delimited output.

Disabled by default; the CLI enables it with --plot. matplotlib is imported
lazily so data-only runs never touch it.
"""

from __future__ import annotations


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_static_threshold(rows: list[dict], path: str) -> None:
    """Threshold curves beta*(delta_adv), one line per block rate."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    by_lambda: dict[float, list[dict]] = {}
    for row in rows:
        by_lambda.setdefault(row["lambda"], []).append(row)
    for lam in sorted(by_lambda):
        pts = sorted(by_lambda[lam], key=lambda r: r["delta_adv"])
        xs = [r["delta_adv"] for r in pts]
        ax.plot(xs, [r["beta_star_exact"] for r in pts], label=f"exact, rate {lam:g}")
        ax.plot(xs, [r["beta_star_approx"] for r in pts], ls="--", lw=0.9,
                label=f"linear, rate {lam:g}")
    ax.axhline(0.5, color="purple", ls=":", lw=0.8)
    ax.set_xlabel("adversarial sync delay [s]")
    ax.set_ylabel("security threshold")
    ax.set_ylim(0.0, 1.02)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def plot_dynamic_threshold(rows: list[dict], path: str) -> None:
    """Asymptotic vs exact threshold against node count (log x)."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    xs = [r["n"] for r in rows]
    ax.plot(xs, [r["beta_star_asymptotic"] for r in rows], marker="o", label="asymptotic")
    exact_pts = [(r["n"], r["beta_star_exact"]) for r in rows if r["beta_star_exact"] is not None]
    if exact_pts:
        ax.plot(*zip(*exact_pts), marker="s", ls="--", label="exact boundary")
    ax.set_xscale("log")
    ax.set_xlabel("nodes")
    ax.set_ylabel("security threshold")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def plot_security_prob(rows: list[dict], path: str) -> None:
    """Security probability against validator count (log x)."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    xs = [r["n"] for r in rows]
    ax.plot(xs, [r["pr_secure"] for r in rows], marker="o")
    ax.set_xscale("log")
    ax.set_xlabel("validators")
    ax.set_ylabel("Pr[secure]")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(alpha=0.3)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
