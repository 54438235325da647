"""Trace-norm (l1) coherence of a qubit in the computational basis."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelParams, check_p, survival_p_tau
from .qubit import TOL, DensityMatrix


def coherence(rho: DensityMatrix) -> float:
    """C(rho) = ||rho - diag(rho)||_1 = 2 |rho_12|."""
    return 2.0 * abs(rho.r12)


def coherence_closed_form(c0: float, p: float) -> float:
    """Coherence after the damping channel: C(0) * sqrt(p)."""
    if not (0.0 <= c0 <= 1.0 + TOL):
        raise ValueError(f"coherence must lie in [0, 1], got {c0!r}")
    return c0 * math.sqrt(check_p(p))


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class CoherenceTrace:
    """Coherence sampled on a grid of tau = Gamma*t, starting at tau = 0."""

    tau: np.ndarray
    c: np.ndarray
    params: ChannelParams
    initial_state: DensityMatrix = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "tau", _frozen(self.tau))
        object.__setattr__(self, "c", _frozen(self.c))
        if self.tau.shape != self.c.shape or self.tau.ndim != 1 or len(self.tau) < 2:
            raise ValueError("tau and c must be 1-d arrays of equal length >= 2")
        if self.tau[0] != 0 or np.any(np.diff(self.tau) <= 0):
            raise ValueError("tau grid must start at 0 and be strictly increasing")

    @property
    def gamma_t(self) -> np.ndarray:
        return self.params.gamma_t(self.tau)

    @property
    def t(self) -> np.ndarray:
        """Physical time, in units of 1/gamma_rate."""
        return self.tau / self.params.gamma_rate

    def to_csv(self, fh=None) -> str | None:
        """Write ``gamma_t,Gamma_t,coherence`` rows; returns the text if ``fh`` is None."""
        out = io.StringIO() if fh is None else fh
        out.write("gamma_t,Gamma_t,coherence\n")
        for g, t, c in zip(self.gamma_t, self.tau, self.c):
            out.write(f"{g:.17g},{t:.17g},{c:.17g}\n")
        return out.getvalue() if fh is None else None


def trace_coherence(params: ChannelParams, rho0: DensityMatrix, tau_max: float,
                    n_steps: int) -> CoherenceTrace:
    """Sample C(rho(t)) on ``n_steps + 1`` uniform points of tau in [0, tau_max].

    Vectorized form of ``coherence(apply_channel(rho0, p(tau_k)))``: the
    channel scales rho_12 by sqrt(p) and leaves nothing else affecting C.
    """
    if not (tau_max > 0 and math.isfinite(tau_max)):
        raise ValueError(f"tau_max must be positive and finite, got {tau_max!r}")
    if int(n_steps) != n_steps or n_steps < 2:
        raise ValueError(f"n_steps must be an integer >= 2, got {n_steps!r}")
    tau = np.linspace(0.0, tau_max, int(n_steps) + 1)
    p = survival_p_tau(params.alpha, tau)
    c = 2.0 * np.abs(np.sqrt(p) * rho0.r12)
    return CoherenceTrace(tau, c, params, rho0)
