"""Human-blockage gain modelling for mmWave and sub-THz line-of-sight links."""

from .bgmodels import (
    PAPER_ABG,
    PAPER_CI,
    PAPER_CIF,
    PAPER_FI,
    AbgParams,
    BgModel,
    CiParams,
    CifParams,
    FiParams,
    eval_abg,
    eval_ci,
    eval_cif,
    eval_fi,
    evaluate,
    fspl,
    link_budget,
    paper_model,
)
from .core import BlockageSample, Dataset, Orientation, ValidationError, validate_sample

__version__ = "0.1.0"
