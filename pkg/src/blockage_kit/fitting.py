"""Least-squares fitting of the four BG models and RMSE validation.

Every model is linear in its (possibly reparameterised) coefficients, so a
single SVD-based solve covers all of them.  CIF is fitted as
``a*d + p*d*(f-f0)/f0 + c*10log10(f)`` and ``b = p/a`` is recovered after.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .bgmodels import (
    MODEL_TAGS,
    AbgParams,
    BgModel,
    CiParams,
    CifParams,
    FiParams,
    Params,
    evaluate,
)
from .core import Dataset, EmptyDataset, ValidationError, check_frequency

RANK_RTOL = 1e-10
CIF_A_TOL = 1e-6

N_PARAMS = {"fi": 2, "ci": 2, "abg": 3, "cif": 3}


class RankDeficient(ValidationError):
    pass


class CifDegenerate(ValidationError):
    pass


def design_matrix(tag: str, f_ghz, d_m, f0_ghz: float = 145.0) -> np.ndarray:
    """Regressor columns for ``tag``; rows follow the input order."""
    f = np.asarray(f_ghz, dtype=float)
    d = np.asarray(d_m, dtype=float)
    lf = 10.0 * np.log10(f)
    if tag == "fi":
        cols = [np.ones_like(f), lf]
    elif tag == "ci":
        cols = [d, lf]
    elif tag == "abg":
        cols = [d, np.ones_like(f), lf]
    elif tag == "cif":
        cols = [d, d * (f - f0_ghz) / f0_ghz, lf]
    else:
        raise ValidationError(f"unknown model {tag!r}")
    return np.column_stack(cols)


def _coef_to_params(tag: str, coef: np.ndarray, f0_ghz: float) -> Params:
    if tag == "fi":
        return FiParams(A=float(coef[0]), n=float(coef[1]))
    if tag == "ci":
        return CiParams(phi=float(coef[0]), m=float(coef[1]))
    if tag == "abg":
        return AbgParams(alpha=float(coef[0]), beta=float(coef[1]), gamma=float(coef[2]))
    a, p, c = (float(x) for x in coef)
    if abs(a) < CIF_A_TOL:
        raise CifDegenerate(f"|a| = {abs(a):.3g} dB/m is too small to recover b = p/a")
    return CifParams(a=a, b=p / a, c=c, f0_ghz=f0_ghz)


@dataclass(frozen=True)
class FitReport:
    model: str
    params: Params
    sigma_db: float  # sqrt(SSR/n)
    sigma_unbiased_db: float  # sqrt(SSR/(n-k)); nan when n == k
    rmse_insample_db: float
    n_samples: int
    condition_number: float
    ssr: float

    @property
    def n_params(self) -> int:
        return N_PARAMS[self.model]

    @property
    def bg_model(self) -> BgModel:
        return BgModel(self.params, self.sigma_db)

    def to_dict(self) -> dict:
        out = self.bg_model.to_dict()
        out.update(
            sigma_unbiased_db=None if math.isnan(self.sigma_unbiased_db) else self.sigma_unbiased_db,
            rmse_insample_db=self.rmse_insample_db,
            n_samples=self.n_samples,
            condition_number=self.condition_number,
            ssr=self.ssr,
        )
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def solve_lstsq(X: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, float]:
    """Return (coefficients, 2-norm condition number); raises on rank loss."""
    sv = np.linalg.svd(X, compute_uv=False)
    if sv.size < X.shape[1] or sv[-1] < RANK_RTOL * sv[0] or sv[0] == 0:
        raise RankDeficient(
            f"design matrix is rank deficient (singular values {np.array2string(sv, precision=3)})"
        )
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    return coef, float(sv[0] / sv[-1])


def fit(tag: str, data: Dataset, f0_ghz: float = 145.0) -> FitReport:
    """Ordinary least-squares fit of one model to ``data``."""
    tag = tag.lower()
    data.require_nonempty()
    f0 = check_frequency(f0_ghz)
    X = design_matrix(tag, data.f, data.d, f0)
    y = np.asarray(data.bg, dtype=float)
    if X.shape[0] < X.shape[1]:
        raise RankDeficient(f"{X.shape[0]} samples cannot determine {X.shape[1]} parameters")
    coef, cond = solve_lstsq(X, y)
    params = _coef_to_params(tag, coef, f0)
    resid = y - X @ coef
    ssr = float(resid @ resid)
    n, k = X.shape
    sigma = math.sqrt(ssr / n)
    unbiased = math.sqrt(ssr / (n - k)) if n > k else float("nan")
    return FitReport(tag, params, sigma, unbiased, sigma, n, cond, ssr)


def residuals(params: Params, data: Dataset) -> np.ndarray:
    return np.array([s.bg_db - evaluate(params, s.d_m, s.f_ghz) for s in data])


def rmse(model: BgModel | Params, data: Dataset) -> float:
    """Root-mean-square error of the deterministic prediction on ``data``."""
    if len(data) == 0:
        raise EmptyDataset("rmse needs at least one sample")
    params = model.params if isinstance(model, BgModel) else model
    r = residuals(params, data)
    return float(np.sqrt(np.mean(r * r)))


def compare_models(data: Dataset, f0_ghz: float = 145.0, tags=MODEL_TAGS) -> list[FitReport]:
    """Fit each model and sort by sigma, then by parameter count."""
    data.require_nonempty()
    reports = [fit(t, data, f0_ghz) for t in tags]
    return sorted(reports, key=lambda r: (r.sigma_db, r.n_params))


def format_table(reports: list[FitReport]) -> str:
    """Plain-text comparison table one row per model."""
    lines = [f"{'model':<6}{'parameters':<44}{'sigma_dB':>10}{'n':>6}{'cond':>10}"]
    for r in reports:
        params = ", ".join(
            f"{k}={v:.4g}" for k, v in r.to_dict()["params"].items()
        )
        lines.append(
            f"{r.model.upper():<6}{params:<44}{r.sigma_db:>10.2f}{r.n_samples:>6d}{r.condition_number:>10.3g}"
        )
    return "\n".join(lines)
