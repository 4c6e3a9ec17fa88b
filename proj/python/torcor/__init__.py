"""Exact correlation counting, Weyl sums and discrepancy for sequences on the torus."""

import json as _json

from ._torcor import (  # noqa: F401
    BudgetExceeded,
    InvalidArgument,
    ParseError,
    Sequence,
    TorcorError,
    additive_energy,
    alpha_bound,
    exact_discrepancy,
    erdos_turan_bound,
    gen_dilated,
    gen_duplicated,
    gen_equispaced,
    gen_kronecker,
    gen_mirrored,
    gen_perturbed_pairs,
    gen_uniform,
    golden_word,
    grepstad_larcher_F,
    grid_discrepancy,
    lemma_cutoff,
    load,
    multiset_equal_count,
    preset_names,
    random_envelope,
    reduce,
    triangle_fhat,
    weyl_sums,
)
from . import _torcor

__all__ = [
    "Sequence",
    "additive_energy",
    "alpha_bound",
    "correlation_discrepancy",
    "count_kfold",
    "discrepancy_report",
    "exact_discrepancy",
    "erdos_turan_bound",
    "fourier_identity_check",
    "gen_dilated",
    "gen_duplicated",
    "gen_equispaced",
    "gen_kronecker",
    "gen_mirrored",
    "gen_perturbed_pairs",
    "gen_uniform",
    "golden_word",
    "grepstad_larcher_F",
    "grid_discrepancy",
    "key_inequality_check",
    "lemma_cutoff",
    "load",
    "multiset_equal_count",
    "pair_correlation",
    "preset_names",
    "random_envelope",
    "reduce",
    "run_preset",
    "theorem5_bound",
    "triangle_fhat",
    "weyl_sums",
]


def _s_list(s):
    if isinstance(s, (int, float, str)):
        s = [s]
    return [str(v) for v in s]


def count_kfold(seq, k=1, s=(1,), alpha=None, cmp="le", budget=None):
    """2k-fold correlation counts at windows s / N^alpha (alpha defaults to k)."""
    text = _torcor.count_kfold_json(seq, k, "" if alpha is None else str(alpha), _s_list(s), cmp, budget)
    return _json.loads(text)


def pair_correlation(seq, s=(1,), cmp="le"):
    return count_kfold(seq, 1, s, 1, cmp)


def correlation_discrepancy(seq, k, t):
    return _json.loads(_torcor.correlation_discrepancy_json(seq, k, t))


def fourier_identity_check(seq, k, t, max_frequency):
    return _json.loads(_torcor.fourier_identity_check_json(seq, k, t, max_frequency))


def theorem5_bound(k, t, n, d2k):
    return _json.loads(_torcor.theorem5_bound_json(k, t, n, d2k))


def key_inequality_check(seq, k, t):
    return _json.loads(_torcor.key_inequality_json(seq, k, t))


def discrepancy_report(seq, m, k=1, t=5):
    return _json.loads(_torcor.discrepancy_report_json(seq, m, k, t))


def run_preset(preset_id, seed=1, tier="default", out_dir=None):
    return _json.loads(_torcor.run_preset_json(preset_id, seed, tier, None if out_dir is None else str(out_dir)))
