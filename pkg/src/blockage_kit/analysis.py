"""Per-factor summaries, one-way ANOVA, and plot-ready model curves."""

from __future__ import annotations

import csv
import io
import math
import statistics
import warnings
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .bgmodels import MODEL_TAGS, BgModel, evaluate, paper_model
from .core import Dataset, EmptyDataset, ValidationError
from .geom3gpp import BodyDims, GppExtrapolationWarning, LinkLayout, gpp_a_gain, gpp_b_gain
from .specfun import f_sf

FACTORS = ("frequency", "distance", "subject", "orientation")


class InsufficientGroups(ValidationError):
    pass


def factor_key(sample, factor: str):
    if factor == "frequency":
        return sample.f_ghz
    if factor == "distance":
        return sample.d_m
    if factor == "subject":
        return sample.subject
    if factor == "orientation":
        return sample.orientation.value
    raise ValidationError(f"unknown factor {factor!r} (expected one of {', '.join(FACTORS)})")


def groups(data: Dataset, factor: str) -> dict:
    out: dict = defaultdict(list)
    for s in data:
        out[factor_key(s, factor)].append(s.bg_db)
    return dict(out)


@dataclass(frozen=True)
class GroupStats:
    key: object
    median: float
    mean: float
    count: int


@dataclass(frozen=True)
class GroupSummary:
    factor: str
    rows: tuple[GroupStats, ...]

    def median_of(self, key) -> float:
        for r in self.rows:
            if r.key == key:
                return r.median
        raise KeyError(key)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([self.factor, "median_db", "mean_db", "count"])
        for r in self.rows:
            w.writerow([r.key, repr(r.median), repr(r.mean), r.count])
        return buf.getvalue()


def group_medians(data: Dataset, key: str) -> GroupSummary:
    if len(data) == 0:
        raise EmptyDataset("cannot summarise an empty dataset")
    g = groups(data, key)
    rows = tuple(
        GroupStats(k, statistics.median(v), statistics.fmean(v), len(v))
        for k, v in sorted(g.items(), key=lambda kv: kv[0])
    )
    return GroupSummary(key, rows)


@dataclass(frozen=True)
class AnovaResult:
    factor: str
    F: float
    df_between: int
    df_within: int
    p_value: float
    zero_within_variance: bool = False

    def to_dict(self) -> dict:
        return {
            "factor": self.factor,
            "F": None if math.isnan(self.F) else self.F,
            "df_between": self.df_between,
            "df_within": self.df_within,
            "p_value": self.p_value,
            "zero_within_variance": self.zero_within_variance,
        }


def anova_from_groups(values: Sequence[Sequence[float]], factor: str = "") -> AnovaResult:
    """Classical one-way ANOVA on already-grouped values."""
    arrays = [np.asarray(v, dtype=float) for v in values if len(v) > 0]
    k = len(arrays)
    n = sum(a.size for a in arrays)
    if k < 2:
        raise InsufficientGroups(f"need at least 2 non-empty groups, got {k}")
    if n <= k:
        raise InsufficientGroups(f"{n} samples in {k} groups leave no within-group degrees of freedom")
    grand = sum(a.sum() for a in arrays) / n
    ss_between = float(sum(a.size * (a.mean() - grand) ** 2 for a in arrays))
    ss_within = float(sum(((a - a.mean()) ** 2).sum() for a in arrays))
    df_b, df_w = k - 1, n - k
    # relative guard so exact-constant groups are not hidden by round-off
    scale = max(float(sum((a * a).sum() for a in arrays)), 1e-300)
    if ss_within <= 1e-24 * scale:
        if ss_between <= 1e-24 * scale:
            return AnovaResult(factor, float("nan"), df_b, df_w, 1.0, True)
        return AnovaResult(factor, float("inf"), df_b, df_w, 0.0, True)
    F = (ss_between / df_b) / (ss_within / df_w)
    return AnovaResult(factor, F, df_b, df_w, f_sf(F, df_b, df_w))


def one_way_anova(data: Dataset, factor: str) -> AnovaResult:
    g = groups(data, factor)
    return anova_from_groups([g[k] for k in sorted(g)], factor)


def permutation_pvalue(
    values: Sequence[Sequence[float]], n_perm: int, rng: np.random.Generator
) -> float:
    """Brute-force reference p-value: shuffle labels and compare F statistics."""
    sizes = [len(v) for v in values]
    pooled = np.concatenate([np.asarray(v, dtype=float) for v in values])
    labels = np.repeat(np.arange(len(sizes)), sizes)
    observed = anova_from_groups(values).F
    n, k = pooled.size, len(sizes)
    counts = np.asarray(sizes, dtype=float)
    perms = np.array([rng.permutation(n) for _ in range(n_perm)])
    shuffled = pooled[perms]
    # F for each permutation via group sums
    sums = np.stack([shuffled[:, labels == j].sum(axis=1) for j in range(k)], axis=1)
    total_ss = ((pooled - pooled.mean()) ** 2).sum()
    ss_between = (sums**2 / counts).sum(axis=1) - pooled.sum() ** 2 / n
    ss_within = total_ss - ss_between
    F = (ss_between / (k - 1)) / (ss_within / (n - k))
    return float((np.sum(F >= observed * (1 - 1e-12)) + 1) / (n_perm + 1))


# --- plot data --------------------------------------------------------------

PLOT_MODELS = MODEL_TAGS + ("3gpp_a", "3gpp_b")


@dataclass(frozen=True)
class PlotRow:
    f_ghz: float
    d_m: float
    model: str
    bg_db: float


def plot_rows(
    f_grid: Iterable[float],
    d_set: Iterable[float],
    models: dict[str, BgModel] | None = None,
    body: BodyDims = BodyDims(),
    hc: float = 1.0,
    include_gpp: bool = True,
) -> list[PlotRow]:
    """Long-format curves for the fitted models and, optionally, 3GPP A/B."""
    models = {t: paper_model(t) for t in MODEL_TAGS} if models is None else models
    f_grid = list(f_grid)
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GppExtrapolationWarning)
        for d in d_set:
            link = LinkLayout(d, hc) if include_gpp else None
            for f in f_grid:
                for tag, m in models.items():
                    rows.append(PlotRow(f, d, tag, evaluate(m.params, d, f)))
                if include_gpp:
                    rows.append(PlotRow(f, d, "3gpp_a", gpp_a_gain(body, link, f, warn=False)))
                    rows.append(PlotRow(f, d, "3gpp_b", gpp_b_gain(body, link, f, warn=False)))
    return rows


def emit_plot_data(
    f_grid: Iterable[float],
    d_set: Iterable[float],
    models: dict[str, BgModel] | None = None,
    body: BodyDims = BodyDims(),
    hc: float = 1.0,
) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["f_ghz", "d_m", "model", "bg_db"])
    for r in plot_rows(f_grid, d_set, models, body, hc):
        w.writerow([repr(r.f_ghz), repr(r.d_m), r.model, repr(r.bg_db)])
    return buf.getvalue()
