"""SVG figures for the experiment tables (needs matplotlib)."""

from __future__ import annotations

from pathlib import Path

from .experiments import Table


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "trotterkit"
    import matplotlib.pyplot as plt

    return plt


def _by_order(table: Table, x: str, y: str):
    series: dict[int, tuple[list, list]] = {}
    for row in table.rows:
        rec = dict(zip(table.header, row))
        xs, ys = series.setdefault(rec["order"], ([], []))
        xs.append(rec[x])
        ys.append(rec[y])
    return series


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    return path


def plot_table(name: str, table: Table, path) -> Path:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(8, 5))
    if name == "time-scaling":
        for order, (xs, ys) in _by_order(table, "t", "rel_error").items():
            ax.loglog(xs, ys, "o-", label=f"order {order}")
        ax.set_xlabel("t")
        ax.set_ylabel("relative error")
    elif name == "cost":
        for order, (xs, ys) in _by_order(table, "cost", "rel_error").items():
            ax.loglog(xs, ys, "o-", label=f"order {order}")
        ax.set_xlabel("matrix exponentials")
        ax.set_ylabel("relative error")
    elif name == "bound-tightness":
        eps = table.column("epsilon")
        ax.loglog(eps, table.column("m_theory"), "o-", label="m_theory")
        emp = [(e, m) for e, m in zip(eps, table.column("m_empirical")) if m is not None]
        if emp:
            ax.loglog(*zip(*emp), "s--", label="m_empirical")
        ax.set_xlabel("epsilon")
        ax.set_ylabel("steps m")
    elif name == "ising-bound":
        ax.semilogy(table.column("n"), table.column("bound"), "o-", label="N_exp bound")
        ax.set_xlabel("n")
        ax.set_ylabel("exponentials")
    else:
        raise ValueError(f"no plot for {name!r}")
    ax.grid(True, which="both", linestyle="--", alpha=0.6)
    ax.legend()
    fig.tight_layout()
    try:
        return _save(fig, path)
    finally:
        plt.close(fig)
