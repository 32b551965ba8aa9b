"""Panel VAR with a hierarchical mixture pooling prior and factor
stochastic volatility errors.

Each country equation regresses its own variables on an intercept, its
own lags and the other countries' lags. Domestic coefficient vectors are
pooled through a sparse finite Gaussian mixture (superfluous components
empty out through the Dirichlet intensity); cross-country lag
coefficients carry a normal-gamma shrinkage prior. The error covariance
is the factor-stochastic-volatility structure from :mod:`spillnet.fsv`.
"""

from __future__ import annotations

import itertools
import json
import logging
from dataclasses import dataclass, field, asdict, replace

import numpy as np
from scipy.cluster.vq import kmeans2
from scipy.special import gammaln

from spillnet.fsv import FsvPriors, FsvState, fsv_update, covariance_at
from spillnet.samplers import (
    mh_intensity_step,
    random_permutation_relabel,
    sample_dirichlet,
    sample_gig,
)

logger = logging.getLogger(__name__)


class EstimationError(RuntimeError):
    """A Gibbs step produced a singular or non-finite conditional."""


@dataclass
class PvarConfig:
    """Model and sampler settings."""

    lags: int = 2                 # P
    n_components: int = 4         # mixture components G
    draws: int = 10_000           # total sweeps
    burn_in: int = 4_000
    m_per_country: int = 1        # variables per country
    n_factors: int = 1
    a0: float = 0.01              # v_j ~ inverse-Gamma(a0, a1)
    a1: float = 0.01
    b0: float = 0.5               # lambda_j ~ Gamma(b0, b1)
    b1: float = 0.5
    c0: float = 10.0              # p0 ~ Gamma(c0, c0 * G)
    d0: float = 0.01              # phi_i ~ Gamma(d0, d1)
    d1: float = 0.01
    theta_ng: float = 0.1         # local scales ~ Gamma(theta_ng, theta_ng)
    mh_step: float = 0.25         # log-random-walk step for p0
    fsv_priors: FsvPriors = field(default_factory=FsvPriors)

    def __post_init__(self):
        if self.draws <= self.burn_in:
            raise ValueError("draws must exceed burn_in")
        if self.lags < 1:
            raise ValueError("need at least one lag")
        for name in ("a0", "a1", "b0", "b1", "c0", "d0", "d1", "theta_ng"):
            if getattr(self, name) <= 0:
                raise ValueError(f"hyperparameter {name} must be positive")
        if self.n_components < 1 or self.m_per_country < 1 or self.n_factors < 0:
            raise ValueError("invalid dimension setting")


@dataclass
class Design:
    """Per-country regression arrays with aligned rows.

    Column layout of X, identical for every country: intercept, own lags
    (lag-major), then the other countries' lags (lag-major, canonical
    country order within each lag).
    """

    y: np.ndarray        # N x T_e x M responses
    x: np.ndarray        # N x T_e x n_reg regressors
    n_countries: int
    m: int
    lags: int
    tail: np.ndarray     # last P rows of the level data (P x K), for forecasting

    @property
    def n_dom(self) -> int:
        return 1 + self.m * self.lags

    @property
    def n_for(self) -> int:
        return self.m * self.lags * (self.n_countries - 1)

    @property
    def n_obs(self) -> int:
        return self.y.shape[1]

    @property
    def k_total(self) -> int:
        return self.n_countries * self.m


def build_design(panel, lags: int, m_per_country: int = 1) -> Design:
    """Lagged regression arrays for every country equation.

    `panel` is a PanelData (trimmed to its balanced span first) or a plain
    T x K value matrix with K = N * M columns grouped by country.
    """
    if hasattr(panel, "balanced"):
        values = panel.balanced().values
    else:
        values = np.asarray(panel, dtype=float)
    t_all, k = values.shape
    m = int(m_per_country)
    if k % m:
        raise EstimationError("columns do not split evenly into countries")
    n = k // m
    p = int(lags)
    t_e = t_all - p
    if t_e < 10:
        raise EstimationError(f"insufficient observations: T-P = {t_e} < 10")

    y = np.empty((n, t_e, m))
    x = np.empty((n, t_e, 1 + m * p * n))
    rows = np.arange(p, t_all)
    for i in range(n):
        own = values[:, i * m:(i + 1) * m]
        others = np.delete(values.reshape(t_all, n, m), i, axis=1).reshape(t_all, (n - 1) * m)
        y[i] = own[rows]
        cols = [np.ones((t_e, 1))]
        for lag in range(1, p + 1):
            cols.append(own[rows - lag])
        for lag in range(1, p + 1):
            cols.append(others[rows - lag])
        x[i] = np.hstack(cols)
    return Design(y=y, x=x, n_countries=n, m=m, lags=p, tail=values[-p:].copy())


@dataclass
class PvarState:
    """One Gibbs-sweep snapshot."""

    beta: np.ndarray      # N x M x n_reg coefficient rows per equation
    labels: np.ndarray    # N mixture assignments in 0..G-1
    nu: np.ndarray        # G mixture weights
    mu: np.ndarray        # G x m component means
    v: np.ndarray         # m common (diagonal) variances
    lam: np.ndarray       # m hierarchical scale factors
    mu0: np.ndarray       # m top-level mean
    r2: np.ndarray        # m fixed scaling (squared coefficient ranges)
    p0: float             # Dirichlet intensity
    psi: np.ndarray       # N x k local shrinkage scales (squared)
    phi: np.ndarray       # N global shrinkage scales
    fsv: FsvState

    def domestic_vectors(self) -> np.ndarray:
        """c_i stacked row-wise: N x m with m = M (M P + 1)."""
        n, m_eq, n_reg = self.beta.shape
        n_dom = self.mu.shape[1] // m_eq
        return self.beta[:, :, :n_dom].reshape(n, m_eq * n_dom)

    def cross_vectors(self) -> np.ndarray:
        """b_i stacked row-wise: N x k."""
        n, m_eq, n_reg = self.beta.shape
        n_dom = self.mu.shape[1] // m_eq
        return self.beta[:, :, n_dom:].reshape(n, -1)


def coef_conditional_moments(x, y, weights, prior_mean, prior_var):
    """Gaussian conditional of one equation's coefficient vector.

    Weighted-likelihood ridge form: precision X'WX + diag(1/prior_var),
    mean solves precision @ mean = X'Wy + prior_mean / prior_var.
    """
    xw = x * weights[:, None]
    prec = x.T @ xw + np.diag(1.0 / prior_var)
    rhs = xw.T @ y + prior_mean / prior_var
    try:
        cf = np.linalg.cholesky(prec)
    except np.linalg.LinAlgError as exc:
        raise EstimationError("singular coefficient conditional") from exc
    mean = np.linalg.solve(cf.T, np.linalg.solve(cf, rhs))
    cov = np.linalg.inv(prec)
    return mean, cov


def _draw_coefficients(state: PvarState, design: Design, rng) -> np.ndarray:
    """Equation-wise Gaussian draws given the current volatility block."""
    n, m_eq = design.n_countries, design.m
    n_dom, n_for = design.n_dom, design.n_for
    beta = np.empty_like(state.beta)
    fac = state.fsv.f @ state.fsv.L.T if state.fsv.n_factors else None
    for i in range(n):
        mu_i = state.mu[state.labels[i]].reshape(m_eq, n_dom)
        v_i = state.v.reshape(m_eq, n_dom)
        psi_i = state.psi[i].reshape(m_eq, n_for) if n_for else None
        for q in range(m_eq):
            r = i * m_eq + q
            offset = fac[:, r] if fac is not None else 0.0
            y_adj = design.y[i][:, q] - offset
            w = np.exp(-state.fsv.om[:, r])
            prior_mean = np.concatenate([mu_i[q], np.zeros(n_for)])
            if n_for:
                prior_var = np.concatenate([v_i[q], 2.0 * psi_i[q] / state.phi[i]])
            else:
                prior_var = v_i[q].copy()
            xw = design.x[i] * w[:, None]
            prec = design.x[i].T @ xw + np.diag(1.0 / prior_var)
            rhs = xw.T @ y_adj + prior_mean / prior_var
            try:
                cf = np.linalg.cholesky(prec)
            except np.linalg.LinAlgError as exc:
                raise EstimationError(f"singular coefficient conditional in equation {r}") from exc
            mean = np.linalg.solve(cf.T, np.linalg.solve(cf, rhs))
            draw = mean + np.linalg.solve(cf.T, rng.standard_normal(prec.shape[0]))
            if not np.isfinite(draw).all():
                raise EstimationError(f"non-finite coefficient draw in equation {r}")
            beta[i, q] = draw
    return beta


def _residuals(beta: np.ndarray, design: Design) -> np.ndarray:
    n, m_eq = design.n_countries, design.m
    eps = np.empty((design.n_obs, n * m_eq))
    for i in range(n):
        eps[:, i * m_eq:(i + 1) * m_eq] = design.y[i] - design.x[i] @ beta[i].T
    return eps


def mixture_log_density(c, labels, nu, mu, v, mu0, q0, p0) -> float:
    """Joint log density of the pooling block (likelihood of the c_i,
    component-mean prior and symmetric Dirichlet weight prior).

    Invariant under a consistent permutation of the component indices.
    """
    g = nu.size
    out = gammaln(g * p0) - g * gammaln(p0) + (p0 - 1.0) * np.sum(np.log(nu))
    for gi in range(g):
        out += -0.5 * np.sum(np.log(2 * np.pi * q0) + (mu[gi] - mu0) ** 2 / q0)
    for i, li in enumerate(np.asarray(labels, dtype=int)):
        out += np.log(nu[li]) - 0.5 * np.sum(np.log(2 * np.pi * v) + (c[i] - mu[li]) ** 2 / v)
    return float(out)


def _update_mixture(c, labels, nu, mu, v, lam, mu0, r2, p0, cfg: PvarConfig, rng):
    """One pass over the pooling-prior block.

    Order: weights, assignments, component means, hierarchical scales,
    top-level mean, common variances, Dirichlet intensity. Runs with
    c of shape (0, m) as a pure prior sampler.
    """
    n, m = c.shape
    g = cfg.n_components
    counts = np.bincount(labels, minlength=g) if n else np.zeros(g, dtype=int)
    nu = sample_dirichlet(np.full(g, p0) + counts, rng)

    if n:
        logp = np.log(nu)[None, :] - 0.5 * (
            np.sum(np.log(2 * np.pi * v)) + ((c[:, None, :] - mu[None, :, :]) ** 2 / v).sum(axis=2)
        )
        logp -= logp.max(axis=1, keepdims=True)
        prob = np.exp(logp)
        prob /= prob.sum(axis=1, keepdims=True)
        u = rng.uniform(size=n)
        labels = (np.cumsum(prob, axis=1) < u[:, None]).sum(axis=1)
        counts = np.bincount(labels, minlength=g)

    q0 = lam * r2
    for gi in range(g):
        prec = 1.0 / q0 + counts[gi] / v
        num = mu0 / q0 + (c[labels == gi].sum(axis=0) / v if counts[gi] else 0.0)
        mu[gi] = num / prec + rng.standard_normal(m) / np.sqrt(prec)

    dev = ((mu - mu0[None, :]) ** 2 / r2[None, :]).sum(axis=0)
    lam = sample_gig(cfg.b0 - g / 2.0, 2.0 * cfg.b1, np.maximum(dev, 1e-12), rng)
    q0 = lam * r2

    # flat top-level prior: exact-limit conditional
    mu0 = mu.mean(axis=0) + rng.standard_normal(m) * np.sqrt(q0 / g)

    if n:
        sq = ((c - mu[labels]) ** 2).sum(axis=0)
    else:
        sq = np.zeros(m)
    v = (cfg.a1 + 0.5 * sq) / rng.gamma(cfg.a0 + n / 2.0, 1.0, size=m)

    p0 = mh_intensity_step(p0, nu, cfg.c0, g, rng, step=cfg.mh_step)
    return labels, nu, mu, v, lam, mu0, p0


def _update_shrinkage(b, psi, phi, cfg: PvarConfig, rng):
    """Local (GIG) and global (Gamma) normal-gamma scale updates."""
    n, k = b.shape
    if k == 0:
        return psi, phi
    b_arg = np.maximum(phi[:, None] * b**2 / 2.0, 1e-12)
    psi = sample_gig(cfg.theta_ng - 0.5, 2.0 * cfg.theta_ng, b_arg, rng)
    rate = cfg.d1 + np.sum(b**2 / (4.0 * psi), axis=1)
    phi = rng.gamma(cfg.d0 + k / 2.0, 1.0 / rate)
    return psi, phi


def gibbs_sweep(state: PvarState, design: Design, cfg: PvarConfig, rng) -> PvarState:
    """One full sweep over all conditionals.

    Order: coefficient block and volatility block, pooling mixture,
    cross-country shrinkage scales, random permutation of component
    labels.
    """
    beta = _draw_coefficients(state, design, rng)
    fsv = fsv_update(_residuals(beta, design), state.fsv, cfg.fsv_priors, rng)

    state = replace(state, beta=beta, fsv=fsv)
    c = state.domestic_vectors()
    labels, nu, mu, v, lam, mu0, p0 = _update_mixture(
        c, state.labels, state.nu, state.mu.copy(), state.v, state.lam,
        state.mu0, state.r2, state.p0, cfg, rng)

    psi, phi = _update_shrinkage(state.cross_vectors(), state.psi, state.phi, cfg, rng)

    labels, nu, mu, _ = random_permutation_relabel(labels, nu, mu, rng)

    return PvarState(beta=beta, labels=labels, nu=nu, mu=mu, v=v, lam=lam,
                     mu0=mu0, r2=state.r2, p0=p0, psi=psi, phi=phi, fsv=fsv)


def initialize_state(design: Design, cfg: PvarConfig, rng) -> PvarState:
    """Least-squares starting point with k-means component assignments."""
    n, m_eq = design.n_countries, design.m
    n_reg = design.x.shape[2]
    beta = np.empty((n, m_eq, n_reg))
    resid = np.empty((design.n_obs, n * m_eq))
    for i in range(n):
        sol, *_ = np.linalg.lstsq(design.x[i], design.y[i], rcond=None)
        beta[i] = sol.T
        resid[:, i * m_eq:(i + 1) * m_eq] = design.y[i] - design.x[i] @ sol

    n_dom = design.n_dom
    m = m_eq * n_dom
    c = beta[:, :, :n_dom].reshape(n, m)
    g = cfg.n_components
    if n <= g:
        labels = np.arange(n) % g
    else:
        _, labels = kmeans2(c, g, minit="++", seed=rng)
    labels = np.asarray(labels, dtype=int)

    mu = np.empty((g, m))
    grand = c.mean(axis=0)
    for gi in range(g):
        sel = labels == gi
        mu[gi] = c[sel].mean(axis=0) if sel.any() else grand
    spread = c.max(axis=0) - c.min(axis=0)
    r2 = np.maximum(spread, 1e-2) ** 2
    v = np.maximum(c.var(axis=0), 1e-4)

    k = m_eq * design.n_for
    return PvarState(
        beta=beta,
        labels=labels,
        nu=np.full(g, 1.0 / g),
        mu=mu,
        v=v,
        lam=np.ones(m),
        mu0=grand,
        r2=r2,
        p0=1.0 / g,
        psi=np.ones((n, k)),
        phi=np.ones(n),
        fsv=FsvState.initial(resid, cfg.n_factors, rng),
    )


def system_matrices(coef_row: np.ndarray, lags: int):
    """Split a stacked K x (1 + K P) draw into intercept and lag matrices."""
    k = coef_row.shape[0]
    inter = coef_row[:, 0]
    phis = [coef_row[:, 1 + k * (p - 1):1 + k * p] for p in range(1, lags + 1)]
    return inter, phis


def stack_system(state_beta: np.ndarray, design: Design) -> np.ndarray:
    """Reassemble per-equation rows into the K x (1 + K P) system layout."""
    n, m_eq = design.n_countries, design.m
    p = design.lags
    k = n * m_eq
    out = np.zeros((k, 1 + k * p))
    for i in range(n):
        others = [j for j in range(n) if j != i]
        for q in range(m_eq):
            r = i * m_eq + q
            row = state_beta[i, q]
            out[r, 0] = row[0]
            for lag in range(1, p + 1):
                own = row[1 + (lag - 1) * m_eq:1 + lag * m_eq]
                out[r, 1 + k * (lag - 1) + i * m_eq:1 + k * (lag - 1) + (i + 1) * m_eq] = own
            base = 1 + m_eq * p
            width = m_eq * (n - 1)
            for lag in range(1, p + 1):
                chunk = row[base + (lag - 1) * width:base + lag * width]
                for jj, j in enumerate(others):
                    out[r, 1 + k * (lag - 1) + j * m_eq:1 + k * (lag - 1) + (j + 1) * m_eq] = \
                        chunk[jj * m_eq:(jj + 1) * m_eq]
    return out


def companion_matrix(coef_row: np.ndarray, lags: int) -> np.ndarray:
    k = coef_row.shape[0]
    _, phis = system_matrices(coef_row, lags)
    comp = np.zeros((k * lags, k * lags))
    comp[:k] = np.hstack(phis)
    if lags > 1:
        comp[k:, :-k] = np.eye(k * (lags - 1))
    return comp


@dataclass
class PosteriorDraws:
    """Retained post-burn-in states, compact enough for long windows."""

    countries: list
    lags: int
    m_per_country: int
    n_factors: int
    tail: np.ndarray        # last P rows of the data (P x K)
    coefs: np.ndarray       # R x K x (1 + K P)
    labels: np.ndarray      # R x N
    nu: np.ndarray          # R x G
    p0: np.ndarray          # R
    loadings: np.ndarray    # R x K x d
    h_last: np.ndarray      # R x d
    om_last: np.ndarray     # R x K
    rho_h: np.ndarray       # R x d
    sig2_h: np.ndarray      # R x d
    rho_om: np.ndarray      # R x K
    sig2_om: np.ndarray     # R x K
    mu_om: np.ndarray       # R x K
    loglik: np.ndarray      # R
    accept_p0: float = np.nan
    accept_rho: float = np.nan

    @property
    def n_draws(self) -> int:
        return self.coefs.shape[0]

    @property
    def k_total(self) -> int:
        return self.coefs.shape[1]

    def sigma_last(self, r: int) -> np.ndarray:
        """Error covariance at the final in-sample date for draw r."""
        diag = np.diag(np.exp(self.om_last[r]))
        if self.n_factors == 0:
            return diag
        load = self.loadings[r]
        return (load * np.exp(self.h_last[r])) @ load.T + diag


def run_mcmc(panel, cfg: PvarConfig, rng, log_every: int = 0) -> PosteriorDraws:
    """Run the full sampler and keep draws - burn_in states.

    `panel` is a PanelData or a plain T x K matrix. With log_every > 0 a
    progress line (sweep, acceptance rates, conditional log-likelihood)
    goes to the module logger.
    """
    design = build_design(panel, cfg.lags, cfg.m_per_country)
    state = initialize_state(design, cfg, rng)
    kept = cfg.draws - cfg.burn_in
    k = design.k_total
    d = cfg.n_factors
    n = design.n_countries
    g = cfg.n_components

    out = PosteriorDraws(
        countries=list(getattr(panel, "countries", range(n))),
        lags=cfg.lags,
        m_per_country=cfg.m_per_country,
        n_factors=d,
        tail=design.tail,
        coefs=np.empty((kept, k, 1 + k * cfg.lags)),
        labels=np.empty((kept, n), dtype=int),
        nu=np.empty((kept, g)),
        p0=np.empty(kept),
        loadings=np.empty((kept, k, d)),
        h_last=np.empty((kept, d)),
        om_last=np.empty((kept, k)),
        rho_h=np.empty((kept, d)),
        sig2_h=np.empty((kept, d)),
        rho_om=np.empty((kept, k)),
        sig2_om=np.empty((kept, k)),
        mu_om=np.empty((kept, k)),
        loglik=np.empty(kept),
    )

    p0_moves = 0
    rho_moves = 0
    rho_trials = 0
    for sweep in range(cfg.draws):
        prev_p0 = state.p0
        prev_rho = state.fsv.rho_om.copy()
        state = gibbs_sweep(state, design, cfg, rng)
        p0_moves += state.p0 != prev_p0
        rho_moves += int(np.sum(state.fsv.rho_om != prev_rho))
        rho_trials += prev_rho.size

        if log_every and (sweep + 1) % log_every == 0:
            logger.info("sweep %d/%d  p0-acc %.2f  loglik %.1f",
                        sweep + 1, cfg.draws, p0_moves / (sweep + 1),
                        _conditional_loglik(state, design))

        r = sweep - cfg.burn_in
        if r < 0:
            continue
        out.coefs[r] = stack_system(state.beta, design)
        out.labels[r] = state.labels
        out.nu[r] = state.nu
        out.p0[r] = state.p0
        out.loadings[r] = state.fsv.L
        out.h_last[r] = state.fsv.h[-1] if d else np.zeros(0)
        out.om_last[r] = state.fsv.om[-1]
        out.rho_h[r] = state.fsv.rho_h
        out.sig2_h[r] = state.fsv.sig2_h
        out.rho_om[r] = state.fsv.rho_om
        out.sig2_om[r] = state.fsv.sig2_om
        out.mu_om[r] = state.fsv.mu_om
        out.loglik[r] = _conditional_loglik(state, design)

    out.accept_p0 = p0_moves / cfg.draws
    out.accept_rho = rho_moves / max(rho_trials, 1)
    return out


def _conditional_loglik(state: PvarState, design: Design) -> float:
    eps = _residuals(state.beta, design)
    eta = eps - state.fsv.f @ state.fsv.L.T if state.fsv.n_factors else eps
    om = state.fsv.om
    return float(-0.5 * np.sum(np.log(2 * np.pi) + om + eta**2 * np.exp(-om)))


def cluster_probabilities(draws: PosteriorDraws) -> np.ndarray:
    """Country-by-component membership frequencies after label alignment.

    Each retained draw's labels are permuted to agree as much as possible
    with the first draw before tabulating, undoing the random relabeling
    applied during sampling. Rows sum to one.
    """
    if draws.n_draws == 0:
        raise ValueError("no retained draws")
    labels = draws.labels
    n = labels.shape[1]
    g = int(draws.nu.shape[1])
    ref = labels[0]
    counts = np.zeros((n, g))
    perms = list(itertools.permutations(range(g)))
    for r in range(labels.shape[0]):
        row = labels[r]
        best, best_match = None, -1
        for perm in perms:
            mapped = np.asarray(perm)[row]
            match = int(np.sum(mapped == ref))
            if match > best_match:
                best, best_match = mapped, match
        counts[np.arange(n), best] += 1.0
    return counts / labels.shape[0]


def forecast(draws: PosteriorDraws, horizon: int, rng) -> np.ndarray:
    """Predictive simulation, one path per retained draw.

    Iterates the lag equations forward, propagating the log-variance
    paths by their AR(1) laws (including innovations) and sampling each
    step's shock from the implied covariance. Returns draws x horizon x K;
    the pointwise median across draws is the point forecast.
    """
    if horizon < 1:
        raise ValueError("horizon must be positive")
    r_n, k = draws.n_draws, draws.k_total
    p = draws.lags
    d = draws.n_factors
    out = np.empty((r_n, horizon, k))
    for r in range(r_n):
        inter, phis = system_matrices(draws.coefs[r], p)
        hist = [draws.tail[-lag] for lag in range(1, p + 1)]  # newest first
        h_cur = draws.h_last[r].copy()
        om_cur = draws.om_last[r].copy()
        for s in range(horizon):
            h_cur = draws.rho_h[r] * h_cur \
                + np.sqrt(draws.sig2_h[r]) * rng.standard_normal(d)
            om_cur = draws.mu_om[r] + draws.rho_om[r] * (om_cur - draws.mu_om[r]) \
                + np.sqrt(draws.sig2_om[r]) * rng.standard_normal(k)
            mean = inter.copy()
            for lag in range(p):
                mean += phis[lag] @ hist[lag]
            if d:
                shock = draws.loadings[r] @ (np.exp(0.5 * h_cur) * rng.standard_normal(d)) \
                    + np.exp(0.5 * om_cur) * rng.standard_normal(k)
            else:
                shock = np.exp(0.5 * om_cur) * rng.standard_normal(k)
            ynew = mean + shock
            out[r, s] = ynew
            hist = [ynew] + hist[:-1]
    return out


_DUMP_FIELDS = [
    "coefs", "labels", "nu", "p0", "loadings", "h_last", "om_last",
    "rho_h", "sig2_h", "rho_om", "sig2_om", "mu_om", "loglik", "tail",
]


def save_draws(draws: PosteriorDraws, prefix) -> None:
    """Posterior dump: `<prefix>_coefficients.npz`, `<prefix>_volatility.npz`
    and a JSON sidecar `<prefix>_meta.json` with dimensions and labels."""
    prefix = str(prefix)
    np.savez_compressed(prefix + "_coefficients.npz",
                        coefs=draws.coefs, labels=draws.labels, nu=draws.nu,
                        p0=draws.p0, tail=draws.tail)
    np.savez_compressed(prefix + "_volatility.npz",
                        loadings=draws.loadings, h_last=draws.h_last,
                        om_last=draws.om_last, rho_h=draws.rho_h,
                        sig2_h=draws.sig2_h, rho_om=draws.rho_om,
                        sig2_om=draws.sig2_om, mu_om=draws.mu_om,
                        loglik=draws.loglik)
    meta = {
        "countries": list(map(str, draws.countries)),
        "lags": draws.lags,
        "m_per_country": draws.m_per_country,
        "n_factors": draws.n_factors,
        "n_draws": draws.n_draws,
        "k_total": draws.k_total,
        "accept_p0": float(draws.accept_p0),
        "accept_rho": float(draws.accept_rho),
        "fields": _DUMP_FIELDS,
    }
    with open(prefix + "_meta.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)


def load_draws(prefix) -> PosteriorDraws:
    prefix = str(prefix)
    with open(prefix + "_meta.json", encoding="utf-8") as fh:
        meta = json.load(fh)
    cf = np.load(prefix + "_coefficients.npz")
    vol = np.load(prefix + "_volatility.npz")
    return PosteriorDraws(
        countries=meta["countries"],
        lags=meta["lags"],
        m_per_country=meta["m_per_country"],
        n_factors=meta["n_factors"],
        tail=cf["tail"],
        coefs=cf["coefs"],
        labels=cf["labels"],
        nu=cf["nu"],
        p0=cf["p0"],
        loadings=vol["loadings"],
        h_last=vol["h_last"],
        om_last=vol["om_last"],
        rho_h=vol["rho_h"],
        sig2_h=vol["sig2_h"],
        rho_om=vol["rho_om"],
        sig2_om=vol["sig2_om"],
        mu_om=vol["mu_om"],
        loglik=vol["loglik"],
        accept_p0=meta["accept_p0"],
        accept_rho=meta["accept_rho"],
    )
