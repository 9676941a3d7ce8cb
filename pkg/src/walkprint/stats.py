"""Rank statistics over accuracy tables: Friedman test, Nemenyi critical
difference, and a deterministic significance diagram.

Given a complete datasets x algorithms table of mean accuracies, algorithms
are ranked per dataset (rank 1 = highest accuracy, ties get the mean of the
tied positions). The Friedman statistic

    Q = 12 D / (K (K + 1)) * sum_j (R_j - (K + 1) / 2)^2

is referred to a chi-square distribution with K - 1 degrees of freedom. The
Nemenyi critical difference is q * sqrt(K (K + 1) / (12 D)); two conventions
for q are exposed because published results disagree on whether the
studentized range value is divided by sqrt(2): convention "demsar" divides
(the usual definition), convention "paper" uses the raw table value.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass

import numpy as np
from scipy import special

from .util import atomic_write_text

# Critical values of the studentized range distribution at infinite degrees
# of freedom, indexed by the number of groups K. Generated by numerically
# inverting the range CDF of K standard normals (quad + brentq, |err|<1e-9);
# the K=2 column equals sqrt(2) * z_{1 - alpha/2} in closed form.
STUDENTIZED_RANGE_Q = {
    0.05: {
        2: 2.771808, 3: 3.314493, 4: 3.633160, 5: 3.857656, 6: 4.030092,
        7: 4.169554, 8: 4.286309, 9: 4.386509, 10: 4.474124, 11: 4.551864,
        12: 4.621655, 13: 4.684920, 14: 4.742732, 15: 4.795924, 16: 4.845154,
        17: 4.890951, 18: 4.933745, 19: 4.973892, 20: 5.011689,
    },
    0.10: {
        2: 2.326174, 3: 2.902380, 4: 3.240446, 5: 3.478281, 6: 3.660721,
        7: 3.808098, 8: 3.931349, 9: 4.037023, 10: 4.129346, 11: 4.211200,
        12: 4.284635, 13: 4.351158, 14: 4.411913, 15: 4.467782, 16: 4.519464,
        17: 4.567519, 18: 4.612403, 19: 4.654494, 20: 4.694104,
    },
}


@dataclass(frozen=True)
class AccuracyTable:
    datasets: tuple[str, ...]
    algorithms: tuple[str, ...]
    accuracies: np.ndarray  # (D, K)

    def __post_init__(self):
        acc = np.asarray(self.accuracies, dtype=np.float64)
        if acc.shape != (len(self.datasets), len(self.algorithms)):
            raise ValueError("accuracy matrix shape does not match the names")
        if len(self.datasets) < 2 or len(self.algorithms) < 2:
            raise ValueError("need at least 2 datasets and 2 algorithms")
        bad = np.argwhere(~np.isfinite(acc))
        if bad.size:
            d, k = bad[0]
            raise ValueError(
                f"missing accuracy for ({self.datasets[d]}, {self.algorithms[k]})"
            )
        object.__setattr__(self, "accuracies", acc)


@dataclass(frozen=True)
class FriedmanResult:
    algorithms: tuple[str, ...]
    average_ranks: np.ndarray
    Q: float
    p_value: float


@dataclass(frozen=True)
class NemenyiResult:
    cd: float
    alpha: float
    q_value: float
    convention: str


def load_accuracy_csv(path: str | os.PathLike) -> AccuracyTable:
    """Read a table: header of algorithm names, first column dataset names."""
    with open(os.fspath(path), "r", encoding="utf-8", newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if len(rows) < 2:
        raise ValueError("accuracy table needs a header and at least one row")
    algorithms = tuple(name.strip() for name in rows[0][1:])
    datasets = []
    cells = []
    for row in rows[1:]:
        datasets.append(row[0].strip())
        if len(row) - 1 != len(algorithms):
            raise ValueError(f"row {row[0]!r} has {len(row) - 1} cells "
                             f"for {len(algorithms)} algorithms")
        vals = []
        for name, cell in zip(algorithms, row[1:]):
            cell = cell.strip()
            if not cell:
                raise ValueError(f"missing accuracy for ({row[0]}, {name})")
            vals.append(float(cell))
        cells.append(vals)
    return AccuracyTable(
        datasets=tuple(datasets), algorithms=algorithms, accuracies=np.asarray(cells)
    )


def bundled_accuracy_table(which: str) -> AccuracyTable:
    """One of the accuracy tables shipped with the package.

    ``"chemo"`` holds the six chemoinformatics benchmarks x 11 algorithms,
    ``"social"`` the six social benchmarks x 8 algorithms; both contain only
    algorithms with a complete score column.
    """
    from importlib import resources

    if which not in ("chemo", "social"):
        raise ValueError("expected 'chemo' or 'social'")
    ref = resources.files("walkprint").joinpath(f"data/{which}_accuracy.csv")
    with resources.as_file(ref) as path:
        return load_accuracy_csv(path)


def _rank_row_desc(values: np.ndarray) -> np.ndarray:
    """Ranks with 1 for the largest value; ties share the mean position."""
    order = np.argsort(-values, kind="stable")
    ranks = np.empty(values.size, dtype=np.float64)
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0  # mean of positions i..j
        i = j + 1
    return ranks


def average_ranks(t: AccuracyTable) -> np.ndarray:
    """Mean rank per algorithm across datasets (rank 1 = best accuracy)."""
    return np.vstack([_rank_row_desc(row) for row in t.accuracies]).mean(axis=0)


def chi_square_sf(x: float, df: int) -> float:
    """Upper tail P(chi2_df >= x) via the regularized incomplete gamma."""
    if x < 0:
        return 1.0
    return float(special.gammaincc(df / 2.0, x / 2.0))


def friedman_test(t: AccuracyTable) -> FriedmanResult:
    """Friedman rank test over a complete accuracy table."""
    ranks = average_ranks(t)
    D = len(t.datasets)
    K = len(t.algorithms)
    q = 12.0 * D / (K * (K + 1)) * float(np.sum((ranks - (K + 1) / 2.0) ** 2))
    return FriedmanResult(
        algorithms=t.algorithms,
        average_ranks=ranks,
        Q=q,
        p_value=chi_square_sf(q, K - 1),
    )


def nemenyi_cd(
    K: int, D: int, alpha: float = 0.05, convention: str = "demsar"
) -> NemenyiResult:
    """Nemenyi critical difference for K algorithms over D datasets."""
    alpha = round(alpha, 10)
    if alpha == 0.1:
        alpha = 0.10
    if alpha not in STUDENTIZED_RANGE_Q:
        raise ValueError(f"unsupported alpha {alpha}; choose 0.05 or 0.10")
    table = STUDENTIZED_RANGE_Q[alpha]
    if K not in table:
        raise ValueError(f"K={K} outside the tabulated range 2..20")
    if D < 1:
        raise ValueError("D must be >= 1")
    if convention == "demsar":
        q = table[K] / np.sqrt(2.0)
    elif convention == "paper":
        q = table[K]
    else:
        raise ValueError("convention must be 'demsar' or 'paper'")
    cd = float(q * np.sqrt(K * (K + 1) / (12.0 * D)))
    return NemenyiResult(cd=cd, alpha=alpha, q_value=float(q), convention=convention)


def significance_diagram(
    f: FriedmanResult, n: NemenyiResult, out: str | os.PathLike
) -> dict:
    """Write a deterministic SVG rank diagram plus a companion JSON.

    Algorithms appear top-to-bottom in ascending average rank; a tail of
    length CD extends from the best rank, with dashed verticals at the best
    rank and best rank + CD. The same bytes are produced for the same
    inputs. Returns the companion payload (also written to ``<out>.json``).
    """
    out = os.fspath(out)
    K = len(f.algorithms)
    order = sorted(range(K), key=lambda i: (f.average_ranks[i], f.algorithms[i]))
    names = [f.algorithms[i] for i in order]
    ranks = [float(f.average_ranks[i]) for i in order]
    best = ranks[0]
    window_hi = best + n.cd

    margin_l, margin_r, margin_t, row_h = 150, 30, 46, 26
    width = 640
    height = margin_t + row_h * K + 36
    x0, x1 = margin_l, width - margin_r
    lo = 1.0
    hi = max(float(K), window_hi)

    def x_of(rank: float) -> float:
        return x0 + (rank - lo) / (hi - lo) * (x1 - x0)

    def fx(v: float) -> str:
        return f"{v:.3f}"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        '<style>text{font-family:Helvetica,Arial,sans-serif;font-size:12px;}'
        ".muted{fill:#555;}</style>",
        f'<text x="{margin_l}" y="18">average rank (1 = best), '
        f"Q={f.Q:.4f}, p={f.p_value:.6g}, CD={n.cd:.4f} "
        f"(alpha={n.alpha:g}, {n.convention})</text>",
    ]
    # axis with unit tick marks
    axis_y = margin_t - 14
    parts.append(
        f'<line x1="{fx(x0)}" y1="{axis_y}" x2="{fx(x1)}" y2="{axis_y}" '
        'stroke="#000" stroke-width="1"/>'
    )
    tick = int(np.ceil(lo))
    while tick <= hi:
        xt = x_of(tick)
        parts.append(
            f'<line x1="{fx(xt)}" y1="{axis_y - 4}" x2="{fx(xt)}" '
            f'y2="{axis_y + 4}" stroke="#000" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{fx(xt)}" y="{axis_y - 8}" text-anchor="middle" '
            f'class="muted">{tick}</text>'
        )
        tick += 1
    # dashed window boundaries
    y_bot = margin_t + row_h * K
    for xv in (best, window_hi):
        parts.append(
            f'<line x1="{fx(x_of(xv))}" y1="{axis_y}" x2="{fx(x_of(xv))}" '
            f'y2="{y_bot}" stroke="#888" stroke-width="1" stroke-dasharray="4,3"/>'
        )
    # CD tail from the best rank
    tail_y = margin_t - 2
    parts.append(
        f'<line x1="{fx(x_of(best))}" y1="{tail_y}" x2="{fx(x_of(window_hi))}" '
        f'y2="{tail_y}" stroke="#c00" stroke-width="2"/>'
    )
    parts.append(
        f'<text x="{fx(x_of(window_hi) + 4)}" y="{tail_y + 4}" class="muted">CD</text>'
    )
    outside = []
    for i, (name, rank) in enumerate(zip(names, ranks)):
        y = margin_t + row_h * i + 16
        xr = x_of(rank)
        is_outside = rank > window_hi
        if is_outside:
            outside.append(name)
        fill = "#c00" if is_outside else "#06c"
        parts.append(f'<text x="{margin_l - 10}" y="{y + 4}" text-anchor="end">{name}</text>')
        parts.append(
            f'<line x1="{fx(x0)}" y1="{y}" x2="{fx(xr)}" y2="{y}" '
            'stroke="#ccc" stroke-width="1"/>'
        )
        parts.append(f'<circle cx="{fx(xr)}" cy="{y}" r="4" fill="{fill}"/>')
        parts.append(
            f'<text x="{fx(xr + 8)}" y="{y + 4}" class="muted">{rank:.4g}</text>'
        )
    parts.append("</svg>")
    atomic_write_text(out, "\n".join(parts) + "\n")

    payload = {
        "algorithms": names,
        "average_ranks": ranks,
        "Q": f.Q,
        "p_value": f.p_value,
        "cd": n.cd,
        "alpha": n.alpha,
        "q_value": n.q_value,
        "convention": n.convention,
        "window": [best, window_hi],
        "outside_window": outside,
    }
    atomic_write_text(
        out + ".json", json.dumps(payload, indent=2, sort_keys=True) + "\n"
    )
    return payload
