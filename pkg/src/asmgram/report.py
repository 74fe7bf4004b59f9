"""Figure rendering for the audit and bench report paths.

Figures are written next to the delimited output as static PNG files; the
CLI never opens a window.
"""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def render_audit_figure(rows, path: str | Path) -> Path:
    """Value envelope per word length: exact values against both bounds."""
    path = Path(path)
    by_n: dict[int, list[int]] = defaultdict(list)
    for row in rows:
        by_n[row.n].append(row.exact)
    ns = sorted(by_n)

    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(ns, [n - 1 for n in ns], "k--", label="trivial upper (n-1)")
    ax.plot(ns, [(n - 1).bit_length() for n in ns], "k:", label="doubling lower")
    ax.plot(ns, [max(by_n[n]) for n in ns], "o-", color="tab:red", label="hardest word")
    ax.plot(
        ns,
        [sum(by_n[n]) / len(by_n[n]) for n in ns],
        "s-",
        color="tab:blue",
        label="mean",
    )
    ax.plot(ns, [min(by_n[n]) for n in ns], "^-", color="tab:green", label="easiest word")
    ax.set_xlabel("word length n")
    ax.set_ylabel("assembly index")
    ax.set_title("Exhaustive audit: value envelope by length")
    ax.legend(loc="upper left", fontsize=9)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_bench_size_figure(rows, methods, path: str | Path) -> Path:
    """Per-method grammar sizes against word length, with the bound envelope."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ns = [row.n for row in rows]
    order = sorted(range(len(rows)), key=lambda i: ns[i])
    xs = [ns[i] for i in order]
    ax.plot(xs, [rows[i].trivial_upper for i in order], "k--", label="trivial upper")
    ax.plot(xs, [rows[i].lz_lower for i in order], "k:", label="LZ lower")
    markers = ["o", "s", "^", "d"]
    for m, method in enumerate(methods):
        ys = [rows[i].sizes.get(method) for i in order]
        pairs = [(x, y) for x, y in zip(xs, ys) if y is not None]
        if pairs:
            ax.plot(*zip(*pairs), markers[m % len(markers)], label=method, alpha=0.7)
    ax.set_xlabel("word length n")
    ax.set_ylabel("grammar size / plan cost")
    ax.set_title("Benchmark: method sizes within the bound sandwich")
    ax.legend(loc="upper left", fontsize=9)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_bench_time_figure(rows, methods, path: str | Path) -> Path:
    path = Path(path)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    order = sorted(range(len(rows)), key=lambda i: rows[i].n)
    markers = ["o", "s", "^", "d"]
    for m, method in enumerate(methods):
        pairs = [
            (rows[i].n, rows[i].times[method])
            for i in order
            if method in rows[i].times
        ]
        if pairs:
            ax.plot(*zip(*pairs), markers[m % len(markers)], label=method, alpha=0.7)
    ax.set_xlabel("word length n")
    ax.set_ylabel("seconds")
    ax.set_yscale("log")
    ax.set_title("Benchmark: method wall times")
    ax.legend(loc="upper left", fontsize=9)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
