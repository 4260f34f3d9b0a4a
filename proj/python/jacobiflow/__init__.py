"""Geodesics, Jacobi fields and connection invariants in a single chart.

Thin Python layer over the C++ core. Trajectories come back as dicts of
numpy arrays keyed by column name (``t``, ``x``, ``v``, ``J``, ...).
"""

import json

from ._core import (
    DomainError,
    EvaluationError,
    InvalidModelError,
    LeftDomainError,
    Model,
    NotVerticalError,
    StepRejectedError,
    classical_jacobi,
    connector,
    curvature,
    flip,
    geodesic,
    horizontal_lift,
    jacobi,
    model,
    sectional_curvature,
    spray,
    torsion,
    variation_oracle,
)
from ._core import _verify_json
from ._core import model_from_config as _model_from_config

__all__ = [
    "DomainError",
    "EvaluationError",
    "InvalidModelError",
    "LeftDomainError",
    "Model",
    "NotVerticalError",
    "StepRejectedError",
    "classical_jacobi",
    "connector",
    "curvature",
    "flip",
    "geodesic",
    "horizontal_lift",
    "jacobi",
    "model",
    "model_from_config",
    "sectional_curvature",
    "spray",
    "torsion",
    "variation_oracle",
    "verify",
]


def model_from_config(config):
    """Build a model from a ``{"kind", "dim", "params"}`` dict or JSON string."""
    if not isinstance(config, str):
        config = json.dumps(config)
    return _model_from_config(config)


def verify(suite="all", seed=42, tol=None, parallel=1):
    """Run an invariant suite and return the report as a dict."""
    return json.loads(_verify_json(suite, seed, dict(tol or {}), parallel))
