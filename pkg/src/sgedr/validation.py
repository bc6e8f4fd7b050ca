"""Cross-validation of the closed forms against the grid simulator.

The dimensionless (hbar = m = 1, dt = 1) test set spans real and complex
probe widths, uniform field on and off, and zero and nonzero free flight.
"""
from __future__ import annotations

from dataclasses import dataclass

from .gridsim import measure_disturbance, measure_error, suggest_grid
from .probe import GaussianProbe
from .sgmodel import SGParams, disturbance_sq, error_sq
from .spin import STATE_SY_PLUS, QubitState

VALIDATION_RTOL = 1e-2


@dataclass(frozen=True)
class ValidationCase:
    lam: complex
    mu_b1: float
    b0: float
    tau: float

    def params(self) -> SGParams:
        return SGParams(
            mu=1.0, B0=self.b0, B1=self.mu_b1, mass=1.0, hbar=1.0,
            dt=1.0, tau=self.tau,
        )

    def probe(self) -> GaussianProbe:
        return GaussianProbe(self.lam.real, self.lam.imag, hbar=1.0, mass=1.0)


@dataclass(frozen=True)
class ValidationResult:
    case: ValidationCase
    eps_sq_model: float
    eps_sq_grid: float
    eta_sq_model: float
    eta_sq_grid: float

    @property
    def eps_rel(self) -> float:
        return abs(self.eps_sq_grid - self.eps_sq_model) / abs(self.eps_sq_model)

    @property
    def eta_rel(self) -> float:
        return abs(self.eta_sq_grid - self.eta_sq_model) / abs(self.eta_sq_model)

    @property
    def passed(self) -> bool:
        return self.eps_rel <= VALIDATION_RTOL and self.eta_rel <= VALIDATION_RTOL


def default_cases() -> list[ValidationCase]:
    return [
        ValidationCase(lam=1.0 + 0.0j, mu_b1=1.0, b0=0.0, tau=0.0),
        ValidationCase(lam=1.0 + 0.0j, mu_b1=1.0, b0=0.0, tau=1.0),
        ValidationCase(lam=1.0 + 0.5j, mu_b1=1.0, b0=0.0, tau=0.0),
        ValidationCase(lam=1.0 + 0.5j, mu_b1=1.0, b0=0.0, tau=1.0),
        ValidationCase(lam=1.0 + 0.0j, mu_b1=3.0, b0=0.0, tau=0.0),
        ValidationCase(lam=1.0 + 0.0j, mu_b1=1.0, b0=0.5, tau=0.0),
        ValidationCase(lam=1.0 + 0.5j, mu_b1=3.0, b0=0.5, tau=1.0),
        ValidationCase(lam=1.0 + 0.0j, mu_b1=3.0, b0=0.5, tau=1.0),
    ]


def run_case(
    case: ValidationCase,
    n: int = 1024,
    steps: int | None = None,
    state: QubitState | None = None,
) -> ValidationResult:
    state = state or STATE_SY_PLUS
    p = case.params()
    probe = case.probe()
    grid = suggest_grid(p, probe, n=n)
    eps_grid = measure_error(grid, p, state, probe, steps=steps)
    eta_grid = measure_disturbance(grid, p, state, probe, steps=steps)
    return ValidationResult(
        case=case,
        eps_sq_model=error_sq(p, probe),
        eps_sq_grid=eps_grid * eps_grid,
        eta_sq_model=disturbance_sq(p, probe),
        eta_sq_grid=eta_grid * eta_grid,
    )


def run_validation(
    n: int = 1024, steps: int | None = None
) -> list[ValidationResult]:
    return [run_case(c, n=n, steps=steps) for c in default_cases()]
