"""Factor stochastic volatility block of the error term.

The T x K residual matrix is decomposed into d common factors with
time-varying log-variances plus idiosyncratic shocks with their own
log-variance paths:

    eps_t = L f_t + eta_t,   Sigma_t = L diag(exp h_t) L' + diag(exp om_t)

Log-variance paths follow AR(1) laws and are sampled with the standard
10-component Gaussian-mixture approximation to the log-chi-square(1)
distribution plus a forward-filter backward-sampler. Loadings carry a
row-wise normal-gamma shrinkage prior.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from spillnet.samplers import sample_gig

# 10-component Gaussian mixture approximating the density of log(z^2),
# z ~ N(0,1) (Omori-Chib-Shephard-Nakajima table).
MIX_PROB = np.array([
    0.00609, 0.04775, 0.13057, 0.20674, 0.22715,
    0.18842, 0.12047, 0.05591, 0.01575, 0.00115,
])
MIX_MEAN = np.array([
    1.92677, 1.34744, 0.73504, 0.02266, -0.85173,
    -1.97278, -3.46788, -5.55246, -8.68384, -14.65000,
])
MIX_VAR = np.array([
    0.11265, 0.17788, 0.26768, 0.40611, 0.62699,
    0.98583, 1.57469, 2.54498, 4.16591, 7.33342,
])

LOG_OFFSET = 1e-10


class FsvError(RuntimeError):
    """Sweep aborted: non-finite inputs or a degenerate filter state."""


@dataclass
class FsvPriors:
    """Hyperparameters of the volatility block."""

    psi_l: float = 0.1      # local loading scales ~ G(psi_l, psi_l)
    s0: float = 1.0         # row scales ~ G(s0, s1)
    s1: float = 1.0
    mean_var: float = 10.0  # unconditional mean ~ N(0, mean_var)
    sig_shape: float = 0.5  # innovation variances ~ G(sig_shape, sig_rate)
    sig_rate: float = 0.5
    beta_a: float = 10.0    # (rho+1)/2 ~ Beta(beta_a, beta_b)
    beta_b: float = 3.0


@dataclass
class FsvState:
    """One draw of the volatility block for a T x K residual matrix."""

    L: np.ndarray        # K x d loadings
    f: np.ndarray        # T x d factors
    h: np.ndarray        # T x d factor log-variances (zero mean)
    om: np.ndarray       # T x K idiosyncratic log-variances
    rho_h: np.ndarray    # d
    sig2_h: np.ndarray   # d
    rho_om: np.ndarray   # K
    sig2_om: np.ndarray  # K
    mu_om: np.ndarray    # K, unconditional means of om
    phi2: np.ndarray     # K x d local loading scales
    row_scale: np.ndarray  # K row shrinkage scales

    @property
    def n_series(self) -> int:
        return self.om.shape[1]

    @property
    def n_factors(self) -> int:
        return self.L.shape[1]

    @property
    def n_obs(self) -> int:
        return self.om.shape[0]

    def check(self) -> None:
        if np.any(np.abs(self.rho_h) >= 1.0) or np.any(np.abs(self.rho_om) >= 1.0):
            raise FsvError("autoregressive parameters must be inside the unit interval")
        for arr in (self.sig2_h, self.sig2_om, self.phi2, self.row_scale):
            if np.any(np.asarray(arr) <= 0.0):
                raise FsvError("variance and scale parameters must be positive")
        if self.n_factors > self.n_series:
            raise FsvError("more factors than series")

    @classmethod
    def initial(cls, residuals: np.ndarray, n_factors: int, rng: np.random.Generator,
                window: int = 25) -> "FsvState":
        """Data-based starting point: PCA loadings, rolling-variance paths."""
        resid = np.asarray(residuals, dtype=float)
        t, k = resid.shape
        d = int(n_factors)
        if d > k:
            raise FsvError("more factors than series")

        sq = resid**2
        om = np.empty((t, k))
        half = max(window // 2, 1)
        for s in range(t):
            lo, hi = max(0, s - half), min(t, s + half + 1)
            om[s] = np.log(np.maximum(sq[lo:hi].mean(axis=0), 1e-8))

        if d > 0:
            cov = np.cov(resid.T) if t > 1 else np.eye(k)
            vals, vecs = np.linalg.eigh(np.atleast_2d(cov))
            order = np.argsort(vals)[::-1][:d]
            L = vecs[:, order] * np.sqrt(np.maximum(vals[order], 1e-8))
            for j in range(d):
                if L[0, j] < 0:
                    L[:, j] = -L[:, j]
        else:
            L = np.zeros((k, 0))

        return cls(
            L=L,
            f=np.zeros((t, d)),
            h=np.zeros((t, d)),
            om=om,
            rho_h=np.full(d, 0.9),
            sig2_h=np.full(d, 0.1),
            rho_om=np.full(k, 0.9),
            sig2_om=np.full(k, 0.1),
            mu_om=om.mean(axis=0) if t else np.zeros(k),
            phi2=np.ones((k, d)),
            row_scale=np.ones(k),
        )


def covariance_at(state: FsvState, t: int) -> np.ndarray:
    """Error covariance L diag(exp h_t) L' + diag(exp om_t) at one date."""
    if not 0 <= t < state.n_obs:
        raise IndexError(f"time index {t} outside 0..{state.n_obs - 1}")
    diag = np.diag(np.exp(state.om[t]))
    if state.n_factors == 0:
        return diag
    return (state.L * np.exp(state.h[t])) @ state.L.T + diag


def _draw_mixture_indicators(ystar: np.ndarray, x: np.ndarray, rng) -> np.ndarray:
    """Component indicators of the log-chi-square mixture, one per date."""
    dev = ystar[:, None] - x[:, None] - MIX_MEAN[None, :]
    logp = np.log(MIX_PROB)[None, :] - 0.5 * np.log(MIX_VAR)[None, :] - 0.5 * dev**2 / MIX_VAR[None, :]
    logp -= logp.max(axis=1, keepdims=True)
    p = np.exp(logp)
    p /= p.sum(axis=1, keepdims=True)
    u = rng.uniform(size=ystar.size)
    return (np.cumsum(p, axis=1) < u[:, None]).sum(axis=1)


def _ffbs(ystar, mu, rho, sig2, obs_mean, obs_var, rng):
    """Forward-filter backward-sample one AR(1) log-variance path.

    Observation: ystar_t = x_t + obs_mean_t + N(0, obs_var_t).
    State:       x_t = mu + rho (x_{t-1} - mu) + N(0, sig2), stationary start.
    """
    t_len = ystar.size
    m_f = np.empty(t_len)
    p_f = np.empty(t_len)
    m_pred = mu
    p_pred = sig2 / (1.0 - rho**2)
    for t in range(t_len):
        if not np.isfinite(p_pred) or p_pred <= 0.0:
            raise FsvError(f"filter variance lost positive definiteness at t={t}")
        gain = p_pred / (p_pred + obs_var[t])
        m_f[t] = m_pred + gain * (ystar[t] - obs_mean[t] - m_pred)
        p_f[t] = (1.0 - gain) * p_pred
        m_pred = mu + rho * (m_f[t] - mu)
        p_pred = rho**2 * p_f[t] + sig2

    x = np.empty(t_len)
    z = rng.standard_normal(t_len)
    x[-1] = m_f[-1] + np.sqrt(p_f[-1]) * z[-1]
    drift = mu * (1.0 - rho)
    for t in range(t_len - 2, -1, -1):
        prec = 1.0 / p_f[t] + rho**2 / sig2
        var = 1.0 / prec
        mean = var * (m_f[t] / p_f[t] + rho * (x[t + 1] - drift) / sig2)
        x[t] = mean + np.sqrt(var) * z[t]
    return x


def _update_log_variance_path(data, x_prev, mu, rho, sig2, rng):
    """Auxiliary-mixture step for one path given its AR(1) parameters.

    Indicators are drawn conditional on the previous path, the new path
    conditional on the indicators (one interleaved Gibbs pair).
    """
    ystar = np.log(data**2 + LOG_OFFSET)
    r = _draw_mixture_indicators(ystar, x_prev, rng)
    return _ffbs(ystar, mu, rho, sig2, MIX_MEAN[r], MIX_VAR[r], rng)


def _beta_logpdf_rho(rho, a, b):
    return (a - 1.0) * np.log((1.0 + rho) / 2.0) + (b - 1.0) * np.log((1.0 - rho) / 2.0)


def _update_ar_params(x, mu_fixed, priors: FsvPriors, rho, sig2, rng):
    """Draw (mu, rho, sig2) for one stationary AR(1) path.

    mu_fixed is None to estimate the unconditional mean (idiosyncratic
    paths) or a number to pin it (factor paths have zero mean). rho uses
    an independence MH step: proposal from the Gaussian conditional of the
    transition likelihood, accepted against the stretched-beta prior and
    the stationary initial condition.
    """
    t_len = x.size
    if mu_fixed is None:
        prec = 1.0 / priors.mean_var + (1.0 - rho**2) / sig2 \
            + (t_len - 1) * (1.0 - rho) ** 2 / sig2
        num = x[0] * (1.0 - rho**2) / sig2 \
            + (1.0 - rho) * np.sum(x[1:] - rho * x[:-1]) / sig2
        mu = num / prec + rng.standard_normal() / np.sqrt(prec)
    else:
        mu = mu_fixed

    xc = x - mu
    denom = float(np.sum(xc[:-1] ** 2))
    if denom > 0.0:
        rho_hat = float(np.sum(xc[1:] * xc[:-1])) / denom
        rho_sd = np.sqrt(sig2 / denom)
        prop = rho_hat + rho_sd * rng.standard_normal()
        if abs(prop) < 1.0:
            def log_extra(r):
                return (_beta_logpdf_rho(r, priors.beta_a, priors.beta_b)
                        + 0.5 * np.log(1.0 - r**2)
                        - 0.5 * xc[0] ** 2 * (1.0 - r**2) / sig2)
            if np.log(rng.uniform()) < log_extra(prop) - log_extra(rho):
                rho = prop

    sse = float(np.sum((xc[1:] - rho * xc[:-1]) ** 2)) + xc[0] ** 2 * (1.0 - rho**2)
    sig2 = sample_gig(priors.sig_shape - t_len / 2.0, 2.0 * priors.sig_rate,
                      max(sse, 1e-12), rng)
    return mu, rho, sig2


def loading_conditional_moments(f, resid_col, weights, prior_prec):
    """Posterior mean and covariance of one loadings row.

    Weighted Bayesian linear regression of a residual series on the factor
    draws: precision X'WX + P0, mean (X'WX + P0)^{-1} X'W y.
    """
    xw = f * weights[:, None]
    prec = f.T @ xw + np.diag(prior_prec)
    cov = np.linalg.inv(prec)
    mean = cov @ (xw.T @ resid_col)
    return mean, cov


def fsv_update(residuals: np.ndarray, state: FsvState, priors: FsvPriors,
               rng: np.random.Generator) -> FsvState:
    """One full conditional sweep of the volatility block.

    Order: factors, loadings and their shrinkage scales, log-variance
    paths (auxiliary mixture + FFBS), AR(1) parameters. With d = 0 the
    factor steps are skipped and the covariance stays diagonal. Returns a
    new state; the input is not modified.
    """
    resid = np.asarray(residuals, dtype=float)
    if not np.isfinite(resid).all():
        raise FsvError("residuals contain non-finite values")
    t_len, k = resid.shape
    d = state.n_factors
    if state.n_obs != t_len or state.n_series != k:
        raise FsvError("state dimensions do not match the residual matrix")

    L = state.L.copy()
    f = state.f.copy()
    h = state.h.copy()
    om = state.om.copy()
    rho_h = state.rho_h.copy()
    sig2_h = state.sig2_h.copy()
    rho_om = state.rho_om.copy()
    sig2_om = state.sig2_om.copy()
    mu_om = state.mu_om.copy()
    phi2 = state.phi2.copy()
    row_scale = state.row_scale.copy()

    if d > 0:
        # (a) factors, conditionally independent across t
        om_prec = np.exp(-om)                      # T x K
        h_prec = np.exp(-h)                        # T x d
        z = rng.standard_normal((t_len, d))
        for t in range(t_len):
            prec = np.diag(h_prec[t]) + (L.T * om_prec[t]) @ L
            try:
                cf = np.linalg.cholesky(prec)
            except np.linalg.LinAlgError as exc:
                raise FsvError(f"factor precision not PD at t={t}") from exc
            rhs = (L.T * om_prec[t]) @ resid[t]
            mean = np.linalg.solve(cf.T, np.linalg.solve(cf, rhs))
            f[t] = mean + np.linalg.solve(cf.T, z[t])

        # (b) loadings rows and their shrinkage scales
        for q in range(k):
            w = np.exp(-om[:, q])
            prior_prec = row_scale[q] / (2.0 * phi2[q])
            mean, cov = loading_conditional_moments(f, resid[:, q], w, prior_prec)
            L[q] = rng.multivariate_normal(mean, cov, method="cholesky")
        b_arg = np.maximum(row_scale[:, None] * L**2 / 2.0, 1e-12)
        phi2 = sample_gig(priors.psi_l - 0.5, 2.0 * priors.psi_l, b_arg, rng)
        row_scale = rng.gamma(priors.s0 + d / 2.0,
                              1.0 / (priors.s1 + np.sum(L**2 / (4.0 * phi2), axis=1)))
        eta = resid - f @ L.T
    else:
        eta = resid

    # (c) + (d) idiosyncratic paths and their AR(1) parameters
    for q in range(k):
        om[:, q] = _update_log_variance_path(eta[:, q], om[:, q], mu_om[q],
                                             rho_om[q], sig2_om[q], rng)
        mu_om[q], rho_om[q], sig2_om[q] = _update_ar_params(
            om[:, q], None, priors, rho_om[q], sig2_om[q], rng)

    # factor log-variance paths (zero unconditional mean)
    for j in range(d):
        h[:, j] = _update_log_variance_path(f[:, j], h[:, j], 0.0,
                                            rho_h[j], sig2_h[j], rng)
        _, rho_h[j], sig2_h[j] = _update_ar_params(
            h[:, j], 0.0, priors, rho_h[j], sig2_h[j], rng)

    # sign restriction: leading loading of each factor kept nonnegative;
    # Sigma_t is invariant to the joint flip of (L column, f column)
    for j in range(d):
        if L[0, j] < 0:
            L[:, j] = -L[:, j]
            f[:, j] = -f[:, j]

    new = FsvState(L=L, f=f, h=h, om=om, rho_h=rho_h, sig2_h=sig2_h,
                   rho_om=rho_om, sig2_om=sig2_om, mu_om=mu_om,
                   phi2=phi2, row_scale=row_scale)
    new.check()
    return new
