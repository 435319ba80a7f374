#!/usr/bin/env python3

from .baselines import (
    baseline_policies,
    PMF_POLICIES,
    PmfPolicy,
    PopPolicy,
    RandomPolicy,
    tune_ucb_constant,
    UCB_GRID,
)
from .pmf import fit_pmf, fit_pmf_arrays, PmfModel, pmf_loss
from .posterior import posterior_from_history, posterior_update, PmfPosterior
from .selectors import eps_greedy_select, glm_ucb_select, thompson_select

__all__ = [
    "PMF_POLICIES",
    "PmfModel",
    "PmfPolicy",
    "PmfPosterior",
    "PopPolicy",
    "RandomPolicy",
    "UCB_GRID",
    "baseline_policies",
    "eps_greedy_select",
    "fit_pmf",
    "fit_pmf_arrays",
    "glm_ucb_select",
    "pmf_loss",
    "posterior_from_history",
    "posterior_update",
    "thompson_select",
    "tune_ucb_constant",
]
