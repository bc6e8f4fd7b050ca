"""Gaussian probe states, ballistic spread, and the collimator/slit posterior.

The probe wave function is exp(-lambda z^2) with Re(lambda) > 0.  Second
moments follow closed forms; the test suite checks them against a quadrature
oracle before anything downstream relies on them.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MIN_UNCERTAINTY_RTOL = 1e-10


@dataclass(frozen=True)
class GaussianProbe:
    """Width parameter lambda = lambda_re + i*lambda_im (1/m^2), SI units."""

    lambda_re: float
    lambda_im: float = 0.0
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self) -> None:
        if self.lambda_re <= 0.0:
            raise ValueError("Re(lambda) must be positive for normalizability")
        if self.hbar <= 0.0 or self.mass <= 0.0:
            raise ValueError("hbar and mass must be positive")

    @property
    def lam(self) -> complex:
        return complex(self.lambda_re, self.lambda_im)


def moments(probe: GaussianProbe) -> tuple[float, float, float]:
    """(Var Z, Var P, <{Z,P}>) of the Gaussian probe.

    Var Z = 1/(4 Re lambda), Var P = hbar^2 |lambda|^2 / Re lambda,
    <{Z,P}> = -hbar Im lambda / Re lambda.  The product identity
    VarZ*VarP - <{Z,P}>^2/4 = hbar^2/4 holds for every pure Gaussian.
    """
    re = probe.lambda_re
    im = probe.lambda_im
    hbar = probe.hbar
    var_z = 1.0 / (4.0 * re)
    var_p = hbar * hbar * (re * re + im * im) / re
    anticom = -hbar * im / re
    return var_z, var_p, anticom


def sigma_t(probe: GaussianProbe, t: float) -> float:
    """Ballistic spread <(Z + tP/m)^2>^(1/2) at time t (negative t allowed)."""
    var_z, var_p, anticom = moments(probe)
    s = t / probe.mass
    radicand = var_z + s * anticom + s * s * var_p
    # exact value is a Hermitian square; clamp rounding residue
    return float(np.sqrt(max(radicand, 0.0)))


@dataclass(frozen=True)
class CollimatorModel:
    """Hole-and-slit beam filter producing a real-lambda Gaussian posterior.

    The momentum and position resolutions are D = 1.25*K*delta with
    K in [0.6, 1], bracketing the geometric half-widths by +-25%.
    """

    d1: float
    d2: float
    L1: float
    v_y: float
    mass: float
    hbar: float
    K: float = 1.0

    def __post_init__(self) -> None:
        for name in ("d1", "d2", "L1", "v_y", "mass", "hbar"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        if not (0.6 <= self.K <= 1.0):
            raise ValueError("K must lie in [0.6, 1.0]")

    @property
    def delta_p(self) -> float:
        """Half width of the classical momentum after the collimator."""
        return (self.d1 + self.d2) / (2.0 * self.L1) * self.mass * self.v_y

    @property
    def delta_z(self) -> float:
        """Half width of the classical position after the slit."""
        return self.d2 / 2.0

    @property
    def D_p(self) -> float:
        return 1.25 * self.K * self.delta_p

    @property
    def D_z(self) -> float:
        return 1.25 * self.K * self.delta_z


def collimator_posterior(cm: CollimatorModel) -> GaussianProbe:
    """Posterior Gaussian of the beam after hole-and-slit filtering.

    lambda = D_p^2/hbar^2 + 1/(4 D_z^2), real; assumes the prior momentum
    spread dominates D_p so the prior width drops out entirely.
    """
    lam = cm.D_p**2 / cm.hbar**2 + 1.0 / (4.0 * cm.D_z**2)
    return GaussianProbe(lambda_re=lam, lambda_im=0.0, hbar=cm.hbar, mass=cm.mass)
