"""Euro-area financial connectedness toolkit.

Estimates Bayesian panel VARs with factor stochastic volatility over
expanding windows, computes generalized forecast-error-variance
decompositions and total/directional spillover indices, clusters the
resulting networks with generalized blockmodeling, and fits
spillover-augmented policy-rule regressions.
"""

from spillnet.dataio import PanelData, WeightScheme, load_panel, aggregate_region, describe, chow_lin_disaggregate
from spillnet.samplers import RngHandle, sample_gig, sample_dirichlet, mh_intensity_step, random_permutation_relabel
from spillnet.fsv import FsvState, FsvPriors, fsv_update, covariance_at
from spillnet.pvar import PvarConfig, PvarState, PosteriorDraws, build_design, gibbs_sweep, run_mcmc, cluster_probabilities, forecast
from spillnet.spillover import GfevdMatrix, SpilloverSeries, ma_coefficients, gfevd, total_index, directional_index, expanding_window_run
from spillnet.blockmodel import ValuedNetwork, BlockPartition, average_gfevd, block_criterion, fit_blockmodel, classify_roles
from spillnet.analysis import RegressionResult, ols, taylor_rule, rmse_eval

__version__ = "0.1.0"
