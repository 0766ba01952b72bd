"""Noise generation and model simulation.

Two noise mechanisms are provided.  "strong" draws independent
Gaussian vectors with the season's covariance.  "weak-product" builds
each innovation coordinate as a moving product of m + 1 consecutive
standard normals from a channel-specific stream, then colors the
vector with the season's covariance factor.  The product noise is
uncorrelated in time but not independent, which is the regime the
robust covariance estimators are designed for.
"""

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import DimensionMismatch
from .linalg import cholesky_upper
from .model import PeriodicSeries, require_causal

DEFAULT_BURNIN = 500

NOISE_KINDS = ("strong", "weak-product")


@dataclass
class NoiseSpec:
    """How to draw the innovation sequence.

    kind is "strong" or "weak-product"; m is the product-window
    exponent (ignored for strong noise).
    """

    kind: str = "strong"
    m: int = 1

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.kind == "weak-product" and self.m < 1:
            raise ValueError("product window exponent m must be at least 1")


def gen_noise(sigmas, n_cycles, spec, rng):
    """Draw n_cycles full cycles of innovations.

    sigmas is the per-season list of d x d covariances.  Returns an
    array of shape (n_cycles * s, d) whose row t-1 is eps[t].
    """
    s = len(sigmas)
    if s == 0:
        raise DimensionMismatch("need at least one season covariance")
    d = np.asarray(sigmas[0]).shape[0]
    factors = [cholesky_upper(sig) for sig in sigmas]
    total = n_cycles * s
    if spec.kind == "strong":
        raw = rng.standard_normal((total, d))
    else:
        eta = rng.standard_normal((total + spec.m, d))
        raw = np.prod(sliding_window_view(eta, spec.m + 1, axis=0), axis=2)
    eps = np.empty((total, d))
    for v in range(s):
        eps[v::s] = raw[v::s] @ factors[v]
    return eps


def simulate(model, n_cycles, spec=None, seed=0, burnin=DEFAULT_BURNIN):
    """Simulate a causal PVAR from zero initial values.

    Runs burnin extra cycles before the retained sample and returns a
    PeriodicSeries whose presample holds the max_p values preceding
    time 1, so estimation can use every retained cycle.
    """
    require_causal(model)
    if spec is None:
        spec = NoiseSpec()
    rng = np.random.default_rng(seed)
    s, d = model.s, model.d
    total = (burnin + n_cycles) * s
    eps = gen_noise(model.sigma, burnin + n_cycles, spec, rng)
    max_p = model.max_p
    y = np.zeros((max_p + total, d))
    for t in range(total):
        v = t % s + 1
        acc = eps[t]
        for k in range(1, model.p(v) + 1):
            acc = acc + model.phi_at(v, k) @ y[max_p + t - k]
        y[max_p + t] = acc
    start = max_p + burnin * s
    pre = y[start - max_p:start] if max_p else np.zeros((0, d))
    return PeriodicSeries(s=s, data=y[start:].copy(), presample=pre.copy())
