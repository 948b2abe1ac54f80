"""Blockage-gain regression models, stochastic term, and link-budget helpers.

All four models share a power law in frequency (referenced to 1 GHz) and,
except FI, a linear distance term.  Evaluation is deterministic; the
zero-mean Gaussian residual is drawn separately with :func:`sample_chi`.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import asdict, dataclass, fields
from typing import Union

import numpy as np

from .core import C0, ValidationError, check_distance, check_frequency

BAND_GHZ = (75.0, 215.0)


class BandExtrapolationWarning(UserWarning):
    """Evaluation outside the frequency range the models were fitted on."""


class NegativeSigma(ValidationError):
    pass


class BlockerBeyondMidpoint(ValidationError):
    pass


class ZeroDistance(ValidationError):
    pass


def _band_check(f: float) -> None:
    lo, hi = BAND_GHZ
    if not lo <= f <= hi:
        warnings.warn(
            f"{f:g} GHz lies outside the fitted band {lo:g}-{hi:g} GHz",
            BandExtrapolationWarning,
            stacklevel=3,
        )


def _finite(obj) -> None:
    for fld in fields(obj):
        v = getattr(obj, fld.name)
        if not math.isfinite(v):
            raise ValidationError(f"{type(obj).__name__}.{fld.name} must be finite, got {v!r}")


@dataclass(frozen=True)
class FiParams:
    A: float
    n: float

    tag = "fi"

    def __post_init__(self):
        _finite(self)


@dataclass(frozen=True)
class CiParams:
    phi: float
    m: float

    tag = "ci"

    def __post_init__(self):
        _finite(self)


@dataclass(frozen=True)
class AbgParams:
    alpha: float
    beta: float
    gamma: float

    tag = "abg"

    def __post_init__(self):
        _finite(self)


@dataclass(frozen=True)
class CifParams:
    a: float
    b: float
    c: float
    f0_ghz: float = 145.0

    tag = "cif"

    def __post_init__(self):
        _finite(self)
        check_frequency(self.f0_ghz)


Params = Union[FiParams, CiParams, AbgParams, CifParams]
PARAM_TYPES: dict[str, type] = {"fi": FiParams, "ci": CiParams, "abg": AbgParams, "cif": CifParams}
MODEL_TAGS = tuple(PARAM_TYPES)


@dataclass(frozen=True)
class BgModel:
    """A parameter set plus the optional residual standard deviation (dB)."""

    params: Params
    sigma_db: float | None = None

    def __post_init__(self):
        if self.sigma_db is not None and not (self.sigma_db >= 0 and math.isfinite(self.sigma_db)):
            raise NegativeSigma(f"sigma must be finite and >= 0, got {self.sigma_db!r}")

    @property
    def tag(self) -> str:
        return self.params.tag

    def __call__(self, d_m: float, f_ghz: float) -> float:
        return evaluate(self.params, d_m, f_ghz)

    def to_dict(self) -> dict:
        params = asdict(self.params)
        return {"model": self.tag, "params": params, "sigma_db": self.sigma_db}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: dict) -> "BgModel":
        try:
            tag = str(obj["model"]).lower()
            ptype = PARAM_TYPES[tag]
        except KeyError:
            raise ValidationError(f"unknown or missing model in {obj!r}") from None
        raw = dict(obj.get("params", {}))
        names = {f.name for f in fields(ptype)}
        extra = set(raw) - names
        if extra:
            raise ValidationError(f"unexpected {tag} parameters: {sorted(extra)}")
        try:
            params = ptype(**{k: float(v) for k, v in raw.items()})
        except TypeError as exc:
            raise ValidationError(f"bad {tag} parameters: {exc}") from None
        sigma = obj.get("sigma_db")
        return cls(params, None if sigma is None else float(sigma))

    @classmethod
    def from_json(cls, text: str) -> "BgModel":
        return cls.from_dict(json.loads(text))


# reference fitted values (measured 75-215 GHz campaign)
PAPER_FI = FiParams(A=16.0, n=-3.09)
PAPER_CI = CiParams(phi=12.0, m=-3.32)
PAPER_ABG = AbgParams(alpha=12.1, beta=-5.2, gamma=-3.09)
PAPER_CIF = CifParams(a=12.1, b=0.0196, c=-3.32, f0_ghz=145.0)
PAPER_SIGMA = {"fi": 9.65, "ci": 6.18, "abg": 6.17, "cif": 6.17}
PAPER_PARAMS: dict[str, Params] = {"fi": PAPER_FI, "ci": PAPER_CI, "abg": PAPER_ABG, "cif": PAPER_CIF}
# blind-validation RMSEs (third subject) and the 3GPP model RMSEs
PAPER_BLIND_RMSE = {"fi": 9.48, "ci": 6.01, "abg": 5.89, "cif": 6.13}
PAPER_GPP_RMSE = {"a": 8.89, "b": 8.97}


def paper_model(tag: str) -> BgModel:
    tag = tag.lower()
    if tag not in PAPER_PARAMS:
        raise ValidationError(f"unknown model {tag!r}")
    return BgModel(PAPER_PARAMS[tag], PAPER_SIGMA[tag])


def eval_fi(p: FiParams, f_ghz: float) -> float:
    f = check_frequency(f_ghz)
    return p.A + 10.0 * p.n * math.log10(f)


def eval_ci(p: CiParams, d_m: float, f_ghz: float) -> float:
    d, f = check_distance(d_m), check_frequency(f_ghz)
    return p.phi * d + 10.0 * p.m * math.log10(f)


def eval_abg(p: AbgParams, d_m: float, f_ghz: float) -> float:
    d, f = check_distance(d_m), check_frequency(f_ghz)
    return p.alpha * d + p.beta + 10.0 * p.gamma * math.log10(f)


def eval_cif(p: CifParams, d_m: float, f_ghz: float) -> float:
    # no clamping: the cross factor may turn the distance slope negative for large |b|
    d, f = check_distance(d_m), check_frequency(f_ghz)
    f0 = p.f0_ghz
    return p.a * (1.0 + p.b * (f - f0) / f0) * d + 10.0 * p.c * math.log10(f)


def evaluate(p: Params, d_m: float, f_ghz: float, warn_band: bool = False) -> float:
    """Deterministic BG (dB) for any of the four parameter sets."""
    if warn_band:
        _band_check(check_frequency(f_ghz))
    if isinstance(p, FiParams):
        check_distance(d_m)
        return eval_fi(p, f_ghz)
    if isinstance(p, CiParams):
        return eval_ci(p, d_m, f_ghz)
    if isinstance(p, AbgParams):
        return eval_abg(p, d_m, f_ghz)
    if isinstance(p, CifParams):
        return eval_cif(p, d_m, f_ghz)
    raise TypeError(f"not a model parameter set: {p!r}")


def sample_chi(sigma_db: float, rng: np.random.Generator, size: int | None = None):
    """Draw from N(0, sigma^2).  ``sigma=0`` returns exact zeros."""
    if not sigma_db >= 0:
        raise NegativeSigma(f"sigma must be >= 0, got {sigma_db!r}")
    if sigma_db == 0:
        return 0.0 if size is None else np.zeros(size)
    return rng.normal(0.0, sigma_db, size)


def equivalent_distance(d_link_m: float, d_blocker_to_nearest_m: float) -> float:
    """Distance at which to evaluate a model for an off-midpoint blocker.

    Using twice the blocker-to-nearest-antenna distance yields a lower bound
    on BG (i.e. more attenuation than the model predicts for the real link).
    """
    d_link = check_distance(d_link_m)
    d_near = check_distance(d_blocker_to_nearest_m)
    if d_near > d_link / 2.0:
        raise BlockerBeyondMidpoint(
            f"nearest-antenna distance {d_near:g} m exceeds half the link ({d_link / 2:g} m)"
        )
    return 2.0 * d_near


def fspl(d_m: float, f_ghz: float) -> float:
    """Free-space path loss in dB."""
    d, f = check_distance(d_m), check_frequency(f_ghz)
    if d == 0:
        raise ZeroDistance("free-space loss is undefined at zero distance")
    return 20.0 * math.log10(4.0 * math.pi * d * f * 1e9 / C0)


def link_budget(
    pt_dbm: float,
    gt_db: float,
    gr_db: float,
    d_m: float,
    f_ghz: float,
    bg_model: BgModel | Params,
) -> float:
    """Received power (dBm) with blockage folded in as an extra gain term."""
    params = bg_model.params if isinstance(bg_model, BgModel) else bg_model
    return pt_dbm + gt_db + gr_db - fspl(d_m, f_ghz) + evaluate(params, d_m, f_ghz)
