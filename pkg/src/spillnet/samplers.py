"""Random-variate primitives and generic MCMC moves.

Counter-based RNG streams (Philox) make parallel runs reproducible
independent of scheduling: the same (seed, stream) pair always yields the
same draw sequence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.special import gammaln


@dataclass(frozen=True)
class RngHandle:
    """Identifies one reproducible random stream."""

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.Philox(ss))


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Shorthand for RngHandle(seed, stream).generator()."""
    return RngHandle(seed, stream).generator()


def gig_log_density(x, p, a, b):
    """Unnormalized log density of GIG(p, a, b): x^(p-1) exp(-(a x + b/x)/2)."""
    x = np.asarray(x, dtype=float)
    return (p - 1.0) * np.log(x) - 0.5 * (a * x + b / x)


def sample_gig(p: float, a, b, rng: np.random.Generator, size=None):
    """Draw from the generalized inverse Gaussian distribution.

    Density proportional to x^(p-1) exp(-(a x + b/x) / 2) on x > 0.
    Boundary cases reduce exactly: b = 0 is Gamma(p, rate a/2) (needs p > 0)
    and a = 0 is inverse-Gamma(-p, rate b/2) (needs p < 0). The interior
    case delegates to the ratio-of-uniforms generator behind
    scipy.stats.geninvgauss, mapped onto this (p, a, b) parameterization.

    `a` and `b` may be arrays (broadcast together); `p` is scalar.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(a < 0.0) or np.any(b < 0.0):
        raise ValueError("GIG parameters a and b must be nonnegative")
    if np.any((a == 0.0) & (b == 0.0)):
        raise ValueError("GIG parameters a and b cannot both be zero")

    scalar_in = a.ndim == 0 and b.ndim == 0 and size is None
    a, b = np.broadcast_arrays(a, b)
    shape = a.shape if size is None else size
    a = np.broadcast_to(a, shape)
    b = np.broadcast_to(b, shape)

    out = np.empty(shape, dtype=float)
    flat_a = a.ravel()
    flat_b = b.ravel()
    flat = out.ravel()

    zero_b = flat_b == 0.0
    zero_a = (flat_a == 0.0) & ~zero_b
    interior = ~zero_b & ~zero_a

    if np.any(zero_b):
        if p <= 0.0:
            raise ValueError("GIG with b=0 requires p > 0")
        flat[zero_b] = rng.gamma(p, 2.0 / flat_a[zero_b])
    if np.any(zero_a):
        if p >= 0.0:
            raise ValueError("GIG with a=0 requires p < 0")
        flat[zero_a] = flat_b[zero_a] / (2.0 * rng.gamma(-p, size=int(zero_a.sum())))
    if np.any(interior):
        omega = np.sqrt(flat_a[interior] * flat_b[interior])
        scale = np.sqrt(flat_b[interior] / flat_a[interior])
        flat[interior] = stats.geninvgauss.rvs(p, omega, scale=scale, random_state=rng)

    out = flat.reshape(shape)
    return float(out) if scalar_in else out


def sample_dirichlet(concentrations, rng: np.random.Generator) -> np.ndarray:
    """Draw a probability vector from a Dirichlet distribution.

    Tiny concentrations can underflow individual components to exactly 0;
    those are floored so that downstream log-densities stay finite.
    """
    conc = np.asarray(concentrations, dtype=float)
    if conc.ndim != 1 or conc.size == 0:
        raise ValueError("concentrations must be a nonempty 1-d vector")
    if np.any(conc <= 0.0):
        raise ValueError("Dirichlet concentrations must be strictly positive")
    if conc.size == 1:
        return np.array([1.0])
    draw = rng.dirichlet(conc)
    draw = np.clip(draw, 1e-300, None)
    return draw / draw.sum()


def _log_dirichlet_symmetric(nu: np.ndarray, p0: float) -> float:
    """Log density of Dirichlet(p0, ..., p0) at nu."""
    g = nu.size
    return gammaln(g * p0) - g * gammaln(p0) + (p0 - 1.0) * np.sum(np.log(nu))


def mh_intensity_step(
    p0: float,
    nu: np.ndarray,
    c0: float,
    G: int,
    rng: np.random.Generator,
    step: float = 0.25,
) -> float:
    """One log-random-walk Metropolis step for the Dirichlet intensity.

    Target: Dirichlet(nu | p0, ..., p0) likelihood times a Gamma(c0, c0*G)
    prior (shape/rate). The proposal is p0' = p0 * exp(step * z) with
    z ~ N(0, 1); the log-scale Jacobian enters the acceptance ratio.
    A rejected move returns the current value. step = 0 never moves.
    """
    nu = np.asarray(nu, dtype=float)
    if nu.size != G:
        raise ValueError("nu must have length G")
    if step == 0.0:
        return p0
    prop = p0 * float(np.exp(step * rng.standard_normal()))
    rate = c0 * G

    def log_target(x: float) -> float:
        return _log_dirichlet_symmetric(nu, x) + (c0 - 1.0) * np.log(x) - rate * x

    log_alpha = log_target(prop) - log_target(p0) + np.log(prop) - np.log(p0)
    if np.log(rng.uniform()) < log_alpha:
        return prop
    return p0


def random_permutation_relabel(labels, weights, means, rng: np.random.Generator):
    """Apply one uniformly random permutation of the mixture components.

    Relabels group indices, reorders the weight vector and the rows of the
    group-mean matrix consistently. Every likelihood-relevant quantity is
    unchanged. Returns (labels, weights, means, perm) where perm[g] is the
    new index of old component g.
    """
    labels = np.asarray(labels, dtype=int)
    weights = np.asarray(weights, dtype=float)
    means = np.asarray(means, dtype=float)
    g = weights.size
    if g == 1:
        return labels.copy(), weights.copy(), means.copy(), np.array([0])
    perm = rng.permutation(g)
    inv = np.empty(g, dtype=int)
    inv[perm] = np.arange(g)
    new_labels = perm[labels]
    new_weights = weights[inv]
    new_means = means[inv]
    return new_labels, new_weights, new_means, perm
