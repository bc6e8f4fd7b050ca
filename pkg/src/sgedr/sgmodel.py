"""Closed-form Stern-Gerlach error and disturbance.

Error comes from the finite spread of the packet on the screen, disturbance
from uncontrolled precession inside the magnet.  The free-flight time tau can
be a distinguished INFINITE value, in which case the error is the limiting
expression rather than the finite-tau formula.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np
from scipy.special import erfc, erfinv

from .spin import EDPoint
from .probe import GaussianProbe, moments, sigma_t

REGION_TOL = 1e-12


class TauLimit(enum.Enum):
    INFINITE = "infinite"


INFINITE = TauLimit.INFINITE

Tau = Union[float, TauLimit]


@dataclass(frozen=True)
class SGParams:
    """Magnet and timing parameters of the Stern-Gerlach process (SI units)."""

    mu: float
    B0: float
    B1: float
    mass: float
    hbar: float
    dt: float
    tau: Tau = 0.0

    def __post_init__(self) -> None:
        if self.dt <= 0.0:
            raise ValueError("transit time dt must be positive")
        if self.mass <= 0.0 or self.hbar <= 0.0:
            raise ValueError("mass and hbar must be positive")
        if not isinstance(self.tau, TauLimit):
            if not np.isfinite(self.tau) or self.tau < 0.0:
                raise ValueError("tau must be >= 0 or INFINITE")


def g0(p: SGParams) -> float:
    """Half-separation of the packet centers at the screen."""
    if isinstance(p.tau, TauLimit):
        raise ValueError("g0 undefined at INFINITE tau; use error_sq_limit")
    return p.mu * p.B1 * p.dt * (p.dt / 2.0 + p.tau) / p.mass


def error_sq(p: SGParams, probe: GaussianProbe) -> float:
    """Squared q-rms error 2*erfc(|g0| / (sqrt(2) sigma(dt + tau))).

    Routed to error_sq_limit when tau is INFINITE.  The |g0| convention keeps
    the result in (0, 2] for either sign of mu*B1 (the meter orientation
    absorbs the sign).
    """
    if isinstance(p.tau, TauLimit):
        return error_sq_limit(p, probe)
    spread = sigma_t(probe, p.dt + p.tau)
    arg = abs(g0(p)) / (np.sqrt(2.0) * spread)
    return float(2.0 * erfc(arg))


def error_sq_limit(p: SGParams, probe: GaussianProbe) -> float:
    """Limit of error_sq as the free flight grows without bound."""
    _, var_p, _ = moments(probe)
    arg = abs(p.mu * p.B1 * p.dt) / (np.sqrt(2.0) * np.sqrt(var_p))
    return float(2.0 * erfc(arg))


def disturbance_sq(p: SGParams, probe: GaussianProbe) -> float:
    """Squared q-rms disturbance of sigma_x; independent of tau.

    2 - 2 exp(-(2 mu^2 B1^2 dt^2 / hbar^2) sigma(dt/2)^2) cos(2 mu dt B0 / hbar);
    equals exactly 2 once the damping exponent underflows exp to zero.
    """
    spread_sq = sigma_t(probe, p.dt / 2.0) ** 2
    exponent = 2.0 * (p.mu * p.B1 * p.dt / p.hbar) ** 2 * spread_sq
    damping = np.exp(-exponent) if exponent < 745.0 else 0.0
    phase = np.cos(2.0 * p.mu * p.dt * p.B0 / p.hbar)
    return float(2.0 - 2.0 * damping * phase)


def tau_condition(p: SGParams, probe: GaussianProbe) -> bool:
    """Whether a finite free-flight time minimizes the error."""
    _, var_p, anticom = moments(probe)
    return probe.mass * anticom + var_p * p.dt < 0.0


def optimal_tau(p: SGParams, probe: GaussianProbe) -> Tau:
    """Error-minimizing free-flight time, or INFINITE when none exists."""
    var_z, var_p, anticom = moments(probe)
    m = probe.mass
    denom = m * anticom + var_p * p.dt
    if denom >= 0.0:
        return INFINITE
    num = 4.0 * m * m * var_z + 3.0 * m * anticom * p.dt + 2.0 * var_p * p.dt**2
    return float(-num / (2.0 * denom))


def region_bound(eps_sq: float) -> float:
    """Largest achievable |2 - eta_sq|/2 at a given squared error.

    exp(-erfinv((2 - eps_sq)/2)^2); saturates to exactly 0 at eps_sq in {0, 4}.
    """
    if not (0.0 <= eps_sq <= 4.0):
        raise ValueError(f"eps_sq must lie in [0, 4], got {eps_sq}")
    x = (2.0 - eps_sq) / 2.0
    if abs(x) >= 1.0:
        return 0.0
    u = float(erfinv(x))
    return float(np.exp(-u * u))


def in_region(point: EDPoint) -> bool:
    """Whether an error-disturbance pair lies in the achievable region."""
    return abs(2.0 - point.eta_sq) / 2.0 <= region_bound(point.eps_sq) + REGION_TOL


def sweep_region(
    base: SGParams,
    lambdas: Iterable[complex],
    b0_values: Iterable[float],
    taus: Iterable[float],
) -> list[EDPoint]:
    """Error-disturbance pairs over a grid of (lambda, B0, tau).

    Ordering is the itertools.product order of the inputs; deterministic for
    fixed inputs.
    """
    points = []
    for lam, b0, tau in itertools.product(lambdas, b0_values, taus):
        lam = complex(lam)
        if lam.real <= 0.0:
            raise ValueError("Re(lambda) must be positive")
        if tau < 0.0:
            raise ValueError("tau must be >= 0")
        probe = GaussianProbe(lam.real, lam.imag, hbar=base.hbar, mass=base.mass)
        params = SGParams(
            mu=base.mu, B0=b0, B1=base.B1,
            mass=base.mass, hbar=base.hbar, dt=base.dt, tau=tau,
        )
        points.append(
            EDPoint(
                eps_sq=min(error_sq(params, probe), 4.0),
                eta_sq=min(max(disturbance_sq(params, probe), 0.0), 4.0),
            )
        )
    return points
