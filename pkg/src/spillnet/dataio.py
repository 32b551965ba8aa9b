"""Loading, validation, aggregation and temporal disaggregation of the
monthly market panels.

Input files are plain CSV, one per market segment: a `date` column
(YYYY-MM) followed by one column per country. Interest rates are in
percent, cross-border balances in millions of euro. Series that start
late (balances from 2007, lending rates from 2003) are allowed a leading
block of missing values; interior gaps are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import pandas as pd

#: Canonical column order for the euro-area panel (alphabetical ISO-2).
COUNTRIES = ("AT", "BE", "DE", "ES", "FI", "FR", "GR", "IE", "IT", "LU", "NL", "PT")

CORE = ("AT", "BE", "DE", "FI", "FR", "LU", "NL")
PERIPHERY = ("ES", "GR", "IE", "IT", "PT")

#: Recognized market labels: government bonds, long/short lending rates,
#: cross-border balances.
MARKETS = ("gb", "bl", "bs", "t2")

MIN_OBS = 4


class PanelError(ValueError):
    """Raised when a panel file or panel construction is invalid."""


@dataclass
class PanelData:
    """Aligned monthly multi-country panel for one market segment."""

    dates: pd.PeriodIndex
    countries: list[str]
    variable: str
    values: np.ndarray  # T x N, NaN only in leading blocks

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.dates = pd.PeriodIndex(self.dates, freq="M")
        self.validate()

    @property
    def n_countries(self) -> int:
        return len(self.countries)

    @property
    def n_obs(self) -> int:
        return len(self.dates)

    def validate(self) -> None:
        t, n = self.values.shape
        if len(self.dates) != t:
            raise PanelError("date index and value rows disagree")
        if len(self.countries) != n:
            raise PanelError("country labels and value columns disagree")
        if n < 2:
            raise PanelError("panel needs at least two countries")
        if t < MIN_OBS:
            raise PanelError(f"T too small: {t} rows, need at least {MIN_OBS}")
        steps = np.diff(self.dates.asi8)
        if np.any(steps != 1):
            raise PanelError("dates must be strictly increasing at monthly frequency with no gaps")
        for j, code in enumerate(self.countries):
            col = self.values[:, j]
            finite = np.isfinite(col)
            if not finite.any():
                raise PanelError(f"column {code} has no observations")
            first = int(np.argmax(finite))
            if not finite[first:].all():
                bad = first + int(np.argmin(finite[first:]))
                raise PanelError(
                    f"interior missing value in column {code} at {self.dates[bad]}"
                )

    def first_valid(self) -> np.ndarray:
        """Index of the first non-missing row, per column."""
        finite = np.isfinite(self.values)
        return finite.argmax(axis=0)

    def balanced(self) -> "PanelData":
        """Trim the leading rows so that every column is observed."""
        start = int(self.first_valid().max())
        if self.n_obs - start < MIN_OBS:
            raise PanelError("T too small after trimming leading missingness")
        return PanelData(
            dates=self.dates[start:],
            countries=list(self.countries),
            variable=self.variable,
            values=self.values[start:],
        )

    def window(self, end: pd.Period) -> "PanelData":
        """Sub-panel through `end` (inclusive)."""
        end = pd.Period(end, freq="M")
        mask = self.dates <= end
        if mask.sum() < MIN_OBS:
            raise PanelError(f"window through {end} leaves too few observations")
        return PanelData(self.dates[mask], list(self.countries), self.variable, self.values[mask])


@dataclass
class WeightScheme:
    """Rolling cross-country weights, one row per date.

    Each row is a probability vector over the columns that are available
    at that date (weights for missing countries may be zero or NaN).
    """

    dates: pd.PeriodIndex
    countries: list[str]
    weights: np.ndarray  # T x N

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        self.dates = pd.PeriodIndex(self.dates, freq="M")
        w = np.where(np.isfinite(self.weights), self.weights, 0.0)
        if np.any(w < 0.0):
            raise PanelError("weights must be nonnegative")
        rs = w.sum(axis=1)
        if np.any(rs <= 0.0):
            raise PanelError("every date needs positive total weight")
        if not np.allclose(rs, 1.0, atol=1e-8):
            raise PanelError("weight rows must sum to one over available countries")

    @classmethod
    def equal(cls, dates, countries) -> "WeightScheme":
        n = len(countries)
        t = len(dates)
        return cls(dates, list(countries), np.full((t, n), 1.0 / n))


def load_panel(path, variable: str) -> PanelData:
    """Load and validate one market CSV.

    The file must have a `date` column (YYYY-MM) first and one column per
    country code. Columns are reordered to the canonical country ordering;
    unknown codes are rejected.
    """
    if variable not in MARKETS:
        raise PanelError(f"unknown market label {variable!r}; expected one of {MARKETS}")
    df = pd.read_csv(path)
    if df.shape[0] == 0:
        raise PanelError("T too small: empty file")
    cols = list(df.columns)
    if not cols or cols[0] != "date":
        raise PanelError("first column must be 'date'")
    try:
        dates = pd.PeriodIndex(pd.to_datetime(df["date"], format="%Y-%m"), freq="M")
    except (ValueError, TypeError) as exc:
        raise PanelError(f"malformed date column: {exc}") from exc
    unknown = [c for c in cols[1:] if c not in COUNTRIES]
    if unknown:
        raise PanelError(f"unknown country code(s): {', '.join(unknown)}")
    ordered = [c for c in COUNTRIES if c in cols[1:]]
    values = df[ordered].to_numpy(dtype=float)
    return PanelData(dates=dates, countries=ordered, variable=variable, values=values)


def aggregate_region(panel: PanelData, members, w: WeightScheme) -> pd.Series:
    """Weighted cross-sectional mean over a country subset, per date.

    Weights are renormalized each date over the members that have data;
    a date at which all members are missing is an error.
    """
    members = list(members)
    if not members:
        raise PanelError("member set is empty")
    missing = [m for m in members if m not in panel.countries]
    if missing:
        raise PanelError(f"members not in panel: {', '.join(missing)}")
    if not set(panel.dates).issubset(set(w.dates)):
        raise PanelError("weight scheme does not cover every panel date")

    w_aligned = pd.DataFrame(w.weights, index=w.dates, columns=w.countries).reindex(panel.dates)
    idx = [panel.countries.index(m) for m in members]
    vals = panel.values[:, idx]
    wm = w_aligned[members].to_numpy(dtype=float)
    wm = np.where(np.isfinite(wm), wm, 0.0)
    wm = np.where(np.isfinite(vals), wm, 0.0)
    totals = wm.sum(axis=1)
    if np.any(totals <= 0.0):
        bad = panel.dates[int(np.argmax(totals <= 0.0))]
        raise PanelError(f"no member data (or weight) at {bad}")
    out = np.nansum(np.where(np.isfinite(vals), vals, 0.0) * wm, axis=1) / totals
    return pd.Series(out, index=panel.dates, name=f"{panel.variable}_aggregate")


def describe(panel: PanelData) -> pd.DataFrame:
    """Per-country mean, min, max and sample standard deviation.

    Statistics run over each column's observed span; the SD uses the
    n-1 denominator.
    """
    rows = {}
    for j, code in enumerate(panel.countries):
        col = panel.values[:, j]
        col = col[np.isfinite(col)]
        rows[code] = {
            "mean": float(np.mean(col)),
            "min": float(np.min(col)),
            "max": float(np.max(col)),
            "sd": float(np.std(col, ddof=1)) if col.size > 1 else 0.0,
        }
    return pd.DataFrame.from_dict(rows, orient="index")[["mean", "min", "max", "sd"]]


def _ar1_covariance(n: int, rho: float) -> np.ndarray:
    idx = np.arange(n)
    return rho ** np.abs(idx[:, None] - idx[None, :]) / (1.0 - rho**2)


def chow_lin_disaggregate(
    annual: pd.Series,
    indicator: pd.Series,
    grid_step: float = 0.01,
) -> pd.Series:
    """Distribute an annual series to monthly frequency with a GLS fit
    against a monthly indicator and AR(1) residuals (Chow-Lin).

    Annual values are within-year averages. The AR(1) parameter is picked
    by maximizing the concentrated GLS likelihood on a fixed grid over
    (-0.99, 0.99). Months outside the annual span (an indicator that runs
    longer) are extrapolated through the regression plus the AR(1)
    smoothing of the last residuals. Within-year averages of the output
    reproduce the annual inputs exactly.
    """
    annual = annual.dropna()
    if annual.empty:
        raise PanelError("annual series is empty")
    years = [int(getattr(ix, "year", ix)) for ix in annual.index]
    mdates = pd.PeriodIndex(indicator.index, freq="M")
    if not mdates.is_monotonic_increasing:
        raise PanelError("indicator dates must be increasing")
    n_m = len(mdates)
    x = indicator.to_numpy(dtype=float)
    if not np.isfinite(x).all():
        raise PanelError("indicator has missing values")

    # Aggregation matrix: one row per year, 1/12 on that year's months.
    c_mat = np.zeros((len(years), n_m))
    for r, yr in enumerate(years):
        in_year = mdates.year == yr
        if in_year.sum() != 12:
            raise PanelError(f"indicator does not cover all 12 months of {yr}")
        c_mat[r, in_year] = 1.0 / 12.0

    a = annual.to_numpy(dtype=float)
    big_x = np.column_stack([np.ones(n_m), x])

    best = None
    for rho in np.arange(-0.99, 0.99 + grid_step / 2, grid_step):
        v = _ar1_covariance(n_m, rho)
        cvc = c_mat @ v @ c_mat.T
        try:
            cvc_inv = np.linalg.inv(cvc)
        except np.linalg.LinAlgError as exc:
            raise PanelError("singular GLS system") from exc
        cx = c_mat @ big_x
        xtv = cx.T @ cvc_inv
        gram = xtv @ cx
        try:
            beta = np.linalg.solve(gram, xtv @ a)
        except np.linalg.LinAlgError as exc:
            raise PanelError("singular GLS system") from exc
        resid = a - cx @ beta
        ssr = float(resid @ cvc_inv @ resid)
        sigma2 = max(ssr / len(a), 1e-300)
        sign, logdet = np.linalg.slogdet(cvc)
        if sign <= 0:
            continue
        loglik = -0.5 * (logdet + len(a) * np.log(sigma2))
        if best is None or loglik > best[0]:
            best = (loglik, rho, beta, v, cvc_inv, resid)

    if best is None:
        raise PanelError("singular GLS system")
    _, _, beta, v, cvc_inv, resid = best
    monthly = big_x @ beta + v @ c_mat.T @ (cvc_inv @ resid)
    return pd.Series(monthly, index=mdates, name=annual.name)
