"""Quantum error-disturbance toolkit for spin-1/2 measurement models."""

from .spin import (
    EDPoint,
    EDRReport,
    PauliObservable,
    QubitState,
    STATE_SY_PLUS,
    d_quantity,
    evaluate_edrs,
    expectation,
    hat_transform,
    robertson_check,
    std_dev,
)
from .measurement import (
    LWParams,
    MeasuringProcess,
    lund_wiseman,
    lw_sweep,
    qrms_disturbance,
    qrms_error,
)
from .probe import (
    CollimatorModel,
    GaussianProbe,
    collimator_posterior,
    moments,
    sigma_t,
)
from .sgmodel import (
    INFINITE,
    SGParams,
    TauLimit,
    disturbance_sq,
    error_sq,
    error_sq_limit,
    g0,
    in_region,
    optimal_tau,
    region_bound,
    sweep_region,
    tau_condition,
)
from .gridsim import (
    Grid1D,
    SpinorField,
    evolve,
    init_state,
    measure_disturbance,
    measure_error,
    suggest_grid,
    suggest_steps,
)
from .experiment import (
    ChainReport,
    ExperimentConfig1922,
    PhysicalConstants,
    flux_pdf,
    heisenberg_verdict,
    reference_checks,
    rms_velocity,
    run_chain,
    silver_mass,
)

__version__ = "0.1.0"
