"""Exact arithmetic for rank-one cutting-and-stacking transformations."""

from .construction import (
    HorizonError,
    ParamSeq,
    embedding,
    explicit_params,
    geometry,
    make_params,
    valpha_params,
)
from .correlation import (
    BirkhoffHistogram,
    birkhoff_hist,
    corr,
    corr_profile,
    corr_sum,
    corr_sum_profile,
    moment,
    safe_stage,
)
from .levelsets import D_set, F_set, LevelSet, column_set, spacer_set, subcolumn_set
from .metrics import beta_ratio, beta_row, holder_check, independence_check, ratio_bound, wre_ratio
from .normalizers import DecompositionError, a_hat, a_of_F, b_term, decompose
from .oracle import MemoryCapError, build_explicit

__all__ = [name for name in dir() if not name.startswith("_")]
