"""Exact trajectory sampling for the catalog models.

The recursion X_t = thin(X_{t-1}) + e_t starts from an exact stationary draw
(X_0 sampled from the marginal by analytic inversion), so every finite
sample is stationary; burn_in only exists as a cross-check. Counting-series
sums collapse into single binomial or negative-binomial variates.

Randomness comes from numpy's PCG64 keyed by SeedSequence(seed,
spawn_key=(stream_id,)): the same (seed, stream_id) reproduces the exact
draw sequence, and distinct stream_ids give statistically independent
replicate streams.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .catalog import INARModel
from .decompose import InnovationDistribution
from .pgf import (
    BinomialThinning,
    Geometric,
    GeometricMean,
    HurdleGeometric,
    NegativeBinomialThinning,
    RhoGeometric,
    ThinningOperator,
)


@dataclass(frozen=True)
class RngStream:
    """Reproducible stream address: (seed, stream_id) -> PCG64 generator."""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class SeriesSample:
    """A simulated trajectory with everything needed to reproduce it."""

    values: np.ndarray
    model: INARModel
    seed: RngStream
    burn_in: int

    def __post_init__(self):
        if len(self.values) and self.values.min() < 0:
            raise ValueError("series contains negative counts")


def _geometric_inverse(u: np.ndarray, ratio: float) -> np.ndarray:
    """Quantile of the geometric law on {0,1,...} with failure ratio q."""
    if ratio <= 0.0:
        return np.zeros(u.shape, dtype=np.int64)
    return np.floor(np.log1p(-u) / np.log(ratio)).astype(np.int64)


def _innovation_quantile(d: InnovationDistribution, u: np.ndarray) -> np.ndarray:
    """Inverse CDF over the pmf table, geometric tail beyond it."""
    table = np.asarray(d.pmf_table)
    cdf = np.cumsum(table)
    total = cdf[-1]
    out = np.searchsorted(cdf, u, side="right").astype(np.int64)
    beyond = out > d.truncation
    if beyond.any():
        if d.tail_rho <= 0.0 or not np.isfinite(d.tail_s):
            out[beyond] = d.truncation
        else:
            # residual mass beyond the table is geometric with ratio 1/tail_s
            v = (u[beyond] - total) / max(1.0 - total, 1e-300)
            v = np.clip(v, 0.0, 1.0 - 1e-16)
            out[beyond] = d.truncation + 1 + _geometric_inverse(v, 1.0 / d.tail_s)
    return out


def sample_innovation(d: InnovationDistribution, rng: RngStream | np.random.Generator) -> int:
    """One inverse-CDF draw from the innovation law."""
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    u = gen.random(1)
    return int(_innovation_quantile(d, u)[0])


def apply_thinning(t: ThinningOperator, x: int,
                   rng: RngStream | np.random.Generator) -> int:
    """Thin a count x: binomial(x, alpha) or negative binomial with mean alpha*x."""
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    if x <= 0 or t.alpha == 0.0:
        return 0
    if isinstance(t, BinomialThinning):
        return int(gen.binomial(x, t.alpha))
    if isinstance(t, NegativeBinomialThinning):
        # sum of x geometrics on {0,1,...} with mean alpha: NB(x, 1/(1+alpha))
        return int(gen.negative_binomial(x, 1.0 / (1.0 + t.alpha)))
    raise TypeError(f"unknown thinning operator {type(t).__name__}")


def _sample_marginal(model: INARModel, gen: np.random.Generator) -> int:
    m = model.spec.marginal
    u = gen.random(1)
    if m is None:
        return int(_innovation_quantile(model.innovation, u)[0])
    if isinstance(m, Geometric):
        return int(_geometric_inverse(u, 1.0 - m.theta)[0])
    if isinstance(m, GeometricMean):
        return int(_geometric_inverse(u, m.mu / (1.0 + m.mu))[0])
    if isinstance(m, RhoGeometric):
        atom = m.rho / (m.mu + m.rho)
        if u[0] < atom:
            return 0
        v = np.array([(u[0] - atom) / (1.0 - atom)])
        return int(_geometric_inverse(v, (m.mu + m.rho) / (1.0 + m.mu))[0])
    if isinstance(m, HurdleGeometric):
        if u[0] < 1.0 - m.mu:
            return 0
        v = np.array([(u[0] - (1.0 - m.mu)) / m.mu])
        return 1 + int(_geometric_inverse(v, m.rho / (1.0 + m.rho))[0])
    raise TypeError(f"unknown marginal kind {type(m).__name__}")


def simulate_series(model: INARModel, n: int, seed: RngStream,
                    burn_in: int = 0) -> SeriesSample:
    """Simulate X_0..X_{n-1} from an exact stationary start.

    Innovations are drawn in one vectorized inverse-CDF pass; the thinning
    recursion then runs sequentially. Identical (model, n, seed, burn_in)
    arguments reproduce the series bit for bit.
    """
    if n < 1:
        raise ValueError(f"series length must be >= 1, got {n}")
    if burn_in < 0:
        raise ValueError(f"burn_in must be >= 0, got {burn_in}")
    gen = seed.generator()
    total = n + burn_in
    x = _sample_marginal(model, gen)
    eps = _innovation_quantile(model.innovation, gen.random(total - 1)) if total > 1 else []
    out = np.empty(total, dtype=np.int64)
    out[0] = x
    thinning = model.spec.thinning
    alpha = thinning.alpha
    binom = isinstance(thinning, BinomialThinning)
    nb_p = 1.0 / (1.0 + alpha) if alpha > 0.0 else 1.0
    for t in range(1, total):
        if x > 0 and alpha > 0.0:
            if binom:
                x = gen.binomial(x, alpha)
            else:
                x = gen.negative_binomial(x, nb_p)
        else:
            x = 0
        x = int(x + eps[t - 1])
        out[t] = x
    return SeriesSample(out[burn_in:], model, seed, burn_in)
