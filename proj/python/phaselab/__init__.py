"""Phase-space coherence experiments: Wigner transforms, Liouville and
Schrodinger evolution, and the resonance width fit."""

import json as _json

from ._core import (
    Grid,
    SolverError,
    ValidationError,
    coherence_residual,
    entropy,
    evolve_quantum,
    glauber,
    overlap,
    run_scenario,
    stationary_states,
    wigner,
)
from ._core import fit_resonances as _fit_resonances


def fit_resonances(csv, free=False, slope=2.1, width_min=None, weighted=False):
    """Fit M = slope * Gamma + C and return the report as a dict."""
    return _json.loads(_fit_resonances(str(csv), free, slope, width_min, weighted))


__all__ = [
    "Grid",
    "SolverError",
    "ValidationError",
    "coherence_residual",
    "entropy",
    "evolve_quantum",
    "fit_resonances",
    "glauber",
    "overlap",
    "run_scenario",
    "stationary_states",
    "wigner",
]
