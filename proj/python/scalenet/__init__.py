"""Wireless capacity constructions: routing, scheduling and SINR checks."""

import json as _json

from ._scalenet import (  # noqa: F401
    SEED_RULE,
    ConfigError,
    Partition,
    RegimeError,
    attenuation,
    build_disk_partition,
    chernoff_lower,
    chernoff_upper,
    converse_small_threshold,
    converse_threshold,
    ensure_sum,
    ensure_sum_model_a,
    ensures_sinr,
    find_D_for_C,
    gk_connectivity,
    gk_reference_params,
    growth_condition,
    intersect_prob_bound,
    load_bound,
    min_power,
    regime_threshold_n,
    sinr,
    sinr_lower_bound,
    sufficient_pair,
    tau,
    theorem_params,
    throughput_floor,
    txset_bound,
)
from . import _scalenet

__version__ = "0.1.0"


def _params(alpha=3.0, beta=1.0, n0=1.0, w_bits=1.0, mode="theorem", model="B", C=None, D=None, P=None):
    p = {"alpha": alpha, "beta": beta, "n0": n0, "w_bits": w_bits, "mode": mode, "model": model}
    p.update(C=C, D=D, P=P)
    return p


def _doc(d):
    return d if isinstance(d, str) else _json.dumps(d)


def sample_instance(n, gamma, seed):
    """Instance JSON document as a dict."""
    return _json.loads(_scalenet._sample_instance(n, gamma, seed))


def build(instance, **params):
    """Returns (report, system); system is None when the build is infeasible."""
    out = _json.loads(_scalenet._build(_doc(instance), _params(**params)))
    return out["report"], out["system"]


def verify(system, **params):
    """Checks a system document. The result has ok, compatible, dc_ok, sinr_ok,
    min_sinr and the CLI text report."""
    return _json.loads(_scalenet._verify(_doc(system), _params(**params)))


def adversarial(C, D, alpha=3.0, beta=1.0, m=64):
    return _json.loads(_scalenet._adversarial(C, D, alpha, beta, m))


def bounds(n, gamma, **params):
    return _json.loads(_scalenet._bounds(n, gamma, _params(**params)))


def sweep(gammas, ns, trials=1, seed=0, workers=None, **params):
    """Returns (csv_text, summary). workers defaults to SCALENET_WORKERS or the core count."""
    csv_text, summary = _scalenet._sweep(list(gammas), list(ns), trials, seed, workers, _params(**params))
    return csv_text, _json.loads(summary)
