"""Coherence-based non-Markovianity N_C of the amplitude-damping channel.

N_C is the total rise of the coherence C(t), maximized over initial states.
Closed forms (infinite and finite number of revivals) sit next to a grid
integrator that knows nothing about them, so each can check the other.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from .channel import ChannelError, ChannelParams
from .coherence import trace_coherence
from .qubit import PLUS, BlochVector, DensityMatrix, from_bloch

ANALYTIC_INFINITE = "analytic_infinite"
ANALYTIC_PARTIAL = "analytic_partial"
NUMERIC_GRID = "numeric_grid"

# minimum resolution accepted by nc_numeric, per revival period
MIN_SAMPLES_PER_PERIOD = 200
# default resolution; keeps the cusp error at each coherence zero below ~1e-4
DEFAULT_SAMPLES_PER_PERIOD = 20000
MARKOV_MIN_SAMPLES = 10_000
REVIVAL_PROMINENCE = 1e-3


class GridResolutionError(ValueError):
    pass


class MarkovianRegimeError(ChannelError):
    """Raised for revival-based quantities when alpha <= 1."""

    def __init__(self, alpha):
        super().__init__(f"no revivals in Markovian regime (alpha = {alpha!r} <= 1)")


@dataclass(frozen=True)
class NonMarkovianity:
    value: float
    method: str
    params: ChannelParams
    revivals: int | None = None
    tau_max: float | None = None
    n_steps: int | None = None
    argmax: BlochVector | None = None

    def __post_init__(self):
        if not self.value >= 0:
            raise ValueError(f"N_C must be non-negative, got {self.value!r}")

    @property
    def tag(self) -> str:
        if self.method == ANALYTIC_PARTIAL:
            return f"{ANALYTIC_PARTIAL}({self.revivals})"
        return self.method

    def to_dict(self) -> dict:
        d = {
            "alpha": self.params.alpha,
            "gamma_rate": self.params.gamma_rate,
            "value": self.value,
            "method": self.tag,
        }
        for key in ("revivals", "tau_max", "n_steps"):
            if getattr(self, key) is not None:
                d[key] = getattr(self, key)
        if self.argmax is not None:
            d["argmax_bloch"] = [self.argmax.sx, self.argmax.sy, self.argmax.sz]
        return d


def _require_revivals(alpha: float) -> float:
    if alpha < 0:
        raise ChannelError(f"alpha must be >= 0, got {alpha!r}")
    if alpha <= 1:
        raise MarkovianRegimeError(alpha)
    return math.sqrt(alpha - 1)


def _inv_expm1(x: float) -> float:
    # 1 / (e^x - 1), safe for large x
    return math.exp(-x) if x > 700 else 1.0 / math.expm1(x)


def nc_analytic(alpha: float) -> NonMarkovianity:
    """N_C = 1 / (exp(pi / sqrt(alpha - 1)) - 1) for alpha > 1, else 0."""
    params = ChannelParams(alpha)
    value = _inv_expm1(math.pi / math.sqrt(alpha - 1)) if alpha > 1 else 0.0
    return NonMarkovianity(value, ANALYTIC_INFINITE, params)


def nc_partial(alpha: float, k: int) -> NonMarkovianity:
    """Sum of the first ``k`` revival heights, sum_{m=1..k} exp(-pi m / sqrt(alpha - 1))."""
    s = _require_revivals(alpha)
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    x = math.pi / s
    value = -math.expm1(-k * x) * _inv_expm1(x)
    return NonMarkovianity(value, ANALYTIC_PARTIAL, ChannelParams(alpha), revivals=int(k))


def nc_asymptotic(alpha: float) -> float:
    """Large-alpha asymptote sqrt(alpha) / pi."""
    _require_revivals(alpha)
    return math.sqrt(alpha) / math.pi


@dataclass(frozen=True)
class RevivalSchedule:
    """Times of the first ``k`` coherence maxima (m = 1..k) and the minima before them.

    ``minima[i]`` precedes ``maxima[i]``; ``window_end`` is the minimum that
    closes the k-th revival. Times are physical (units of 1/gamma_rate).
    """

    params: ChannelParams
    maxima: tuple[float, ...]
    minima: tuple[float, ...]
    window_end: float

    @property
    def maxima_tau(self) -> np.ndarray:
        return self.params.gamma_rate * np.array(self.maxima)

    @property
    def minima_tau(self) -> np.ndarray:
        return self.params.gamma_rate * np.array(self.minima)

    @property
    def window_end_tau(self) -> float:
        return self.params.gamma_rate * self.window_end


def _t_max(params: ChannelParams, m):
    s = math.sqrt(params.alpha - 1)
    return 2 * math.pi * np.asarray(m, dtype=float) / (params.gamma_rate * s)


def _t_min(params: ChannelParams, m):
    s = math.sqrt(params.alpha - 1)
    return _t_max(params, np.asarray(m) + 1) - 2 * math.atan(s) / (params.gamma_rate * s)


def revival_schedule(params: ChannelParams, k: int) -> RevivalSchedule:
    _require_revivals(params.alpha)
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    m = np.arange(1, k + 1)
    return RevivalSchedule(
        params,
        tuple(float(t) for t in _t_max(params, m)),
        tuple(float(t) for t in _t_min(params, m - 1)),
        float(_t_min(params, k)),
    )


def complete_window(params: ChannelParams, k: int) -> float:
    """tau_max that contains exactly ``k`` complete revivals."""
    return revival_schedule(params, k).window_end_tau


def revival_period_tau(alpha: float) -> float:
    """Spacing of coherence maxima in tau; infinite when alpha <= 1."""
    return 2 * math.pi / math.sqrt(alpha - 1) if alpha > 1 else math.inf


def min_steps(params: ChannelParams, tau_max: float) -> int:
    if params.alpha > 1:
        return math.ceil(tau_max * MIN_SAMPLES_PER_PERIOD / revival_period_tau(params.alpha))
    return MARKOV_MIN_SAMPLES - 1


def default_steps(params: ChannelParams, tau_max: float,
                  samples_per_period: int = DEFAULT_SAMPLES_PER_PERIOD) -> int:
    if params.alpha > 1:
        n = math.ceil(tau_max * samples_per_period / revival_period_tau(params.alpha))
        return max(n, min_steps(params, tau_max), 2)
    return MARKOV_MIN_SAMPLES


def positive_increments(c) -> float:
    """Sum of the positive first differences of a sampled curve."""
    d = np.diff(np.asarray(c, dtype=float))
    return float(d[d > 0].sum())


def count_revivals(c, prominence: float = REVIVAL_PROMINENCE) -> int:
    """Interior samples strictly above both neighbours with the given prominence."""
    c = np.asarray(c, dtype=float)
    peaks, _ = find_peaks(c, prominence=prominence)
    strict = [i for i in peaks if c[i] > c[i - 1] and c[i] > c[i + 1]]
    return len(strict)


def nc_numeric(params: ChannelParams, rho0: DensityMatrix, tau_max: float,
               n_steps: int | None = None) -> NonMarkovianity:
    """Integrate the rising parts of C(t) on a uniform grid over [0, tau_max].

    Only the window is integrated; nothing is extrapolated past ``tau_max``.
    """
    if n_steps is None:
        n_steps = default_steps(params, tau_max)
    needed = min_steps(params, tau_max)
    if n_steps < needed:
        raise GridResolutionError(
            f"n_steps = {n_steps} too coarse for alpha = {params.alpha}: need >= {needed}")
    tr = trace_coherence(params, rho0, tau_max, n_steps)
    return NonMarkovianity(positive_increments(tr.c), NUMERIC_GRID, params,
                           tau_max=float(tau_max), n_steps=int(n_steps))


def worker_count() -> int:
    """Thread cap from NOMAQ_THREADS (0 or unset means one per CPU)."""
    try:
        n = int(os.environ.get("NOMAQ_THREADS", "0"))
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def _map(fn, items):
    items = list(items)
    n = min(worker_count(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def bloch_grid_states(n: int, radii=(0.25, 0.5, 0.75)) -> list[BlochVector]:
    """Pure states on a polar/azimuth grid plus mixed states along the same rays.

    The polar grid always contains the equator.
    """
    if n < 8:
        raise ValueError(f"bloch_grid must be >= 8, got {n}")
    n_polar = 2 * (n // 2) + 1
    polar = np.linspace(0.0, math.pi, n_polar)
    azimuth = np.linspace(0.0, 2 * math.pi, n, endpoint=False)

    def clean(v):
        return 0.0 if abs(v) < 1e-15 else float(v)

    dirs = []
    for th in polar:
        for ph in (azimuth[:1] if th in (0.0, math.pi) else azimuth):
            dirs.append((clean(math.sin(th) * math.cos(ph)),
                         clean(math.sin(th) * math.sin(ph)),
                         clean(math.cos(th))))
    out = [BlochVector(*d) for d in dirs]
    for r in radii:
        out.extend(BlochVector(r * x, r * y, r * z) for x, y, z in dirs)
    return out


def nc_maximize(params: ChannelParams, tau_max: float, n_steps: int | None = None,
                bloch_grid: int = 8) -> NonMarkovianity:
    """Maximize :func:`nc_numeric` over a grid of initial states.

    Ties (within 1e-12 relative) go to the lexicographically smallest
    (s_z, s_x, s_y), so the result does not depend on evaluation order.
    """
    states = bloch_grid_states(bloch_grid)
    if n_steps is None:
        n_steps = default_steps(params, tau_max)
    values = _map(lambda b: nc_numeric(params, from_bloch(b), tau_max, n_steps).value, states)
    best = max(values)
    tol = 1e-12 * max(1.0, best)
    candidates = [b for b, v in zip(states, values) if v >= best - tol]
    arg = min(candidates, key=lambda b: (b.sz, b.sx, b.sy))
    return NonMarkovianity(best, NUMERIC_GRID, params, tau_max=float(tau_max),
                           n_steps=int(n_steps), argmax=arg)


MARKOV_WINDOW_TAU = 30.0


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    nc_analytic: float
    nc_numeric: float
    nc_asymptotic: float
    k_revivals_in_window: int

    def csv(self) -> str:
        return (f"{self.alpha:.17g},{self.nc_analytic:.17g},{self.nc_numeric:.17g},"
                f"{self.nc_asymptotic:.17g},{self.k_revivals_in_window}")


SWEEP_HEADER = "alpha,nc_analytic,nc_numeric,nc_asymptotic,k_revivals_in_window"


def sweep_point(alpha: float, revivals: int = 5,
                samples_per_period: int = DEFAULT_SAMPLES_PER_PERIOD,
                rho0: DensityMatrix = PLUS) -> SweepRow:
    params = ChannelParams(alpha)
    if alpha > 1:
        tau_max = complete_window(params, revivals)
        n = default_steps(params, tau_max, samples_per_period)
        k = revivals
        asym = nc_asymptotic(alpha)
    else:
        tau_max, n, k, asym = MARKOV_WINDOW_TAU, MARKOV_MIN_SAMPLES, 0, math.nan
    numeric = nc_numeric(params, rho0, tau_max, n).value
    return SweepRow(alpha, nc_analytic(alpha).value, numeric, asym, k)


def sweep(alphas, revivals: int = 5,
          samples_per_period: int = DEFAULT_SAMPLES_PER_PERIOD) -> list[SweepRow]:
    """N_C over a set of alpha values, rows sorted by alpha."""
    alphas = sorted(float(a) for a in alphas)
    if alphas and alphas[0] < 0:
        raise ChannelError(f"alpha must be >= 0, got {alphas[0]!r}")
    return _map(lambda a: sweep_point(a, revivals, samples_per_period), alphas)
