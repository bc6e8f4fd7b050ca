"""Error and disturbance estimate for the 1922 silver-beam experiment.

Ingests the published apparatus geometry and CODATA constants, runs the full
calculation chain (atom mass, beam velocity, collimator posterior, deflection,
error and disturbance), and brackets the result over the resolution scale
factor K in [0.6, 1].
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict

import numpy as np

from .probe import CollimatorModel, GaussianProbe, collimator_posterior, moments, sigma_t
from .sgmodel import SGParams, disturbance_sq, error_sq, g0
from .spin import STATE_SY_PLUS, EDPoint, EDRReport, PauliObservable, evaluate_edrs

REFERENCE_RTOL = 5e-3


@dataclass(frozen=True)
class PhysicalConstants:
    """2018 CODATA values used by the chain."""

    k_B: float = 1.380649e-23
    N_A: float = 6.02214076e23
    mu_electron: float = -9.2847647043e-24
    hbar: float = 1.054571817e-34


@dataclass(frozen=True)
class ExperimentConfig1922:
    """Apparatus parameters of the 1922 run (SI units)."""

    T: float = 1500.0
    B1: float = -1.35e3
    L1: float = 3.3e-2
    L2: float = 3.5e-2
    L3: float = 0.0
    d1: float = 6.2e-5
    d2: float = 4.0e-5
    atomic_weight: float = 107.86822
    B0: float = 0.0


@dataclass(frozen=True)
class KRow:
    """Chain intermediates at one value of the scale factor K."""

    K: float
    D_p: float
    D_z: float
    var_z: float
    sigma_dt_sq: float
    erfc_arg: float
    damping_exponent: float
    eps_sq: float
    eta_sq: float


@dataclass(frozen=True)
class ChainReport:
    """Every intermediate of the calculation chain plus the per-K table."""

    m: float
    v_y: float
    dt: float
    tau: float
    delta_p: float
    delta_z: float
    g0: float
    rows: tuple[KRow, ...]
    eps_sq_min: float
    eps_sq_max: float
    eta_sq: float
    error_prob_bound: float
    edr_at_min: EDRReport = field(repr=False)
    edr_at_max: EDRReport = field(repr=False)


def silver_mass(atomic_weight: float, c: PhysicalConstants) -> float:
    """Atom mass in kg from the molar mass in g/mol."""
    if atomic_weight <= 0.0:
        raise ValueError("atomic weight must be positive")
    return atomic_weight * 1e-3 / c.N_A


def flux_pdf(v: float, T: float, m: float, c: PhysicalConstants | None = None) -> float:
    """Normalized beam-flux speed density, proportional to v^3 exp(-mv^2/2kT)."""
    if v < 0.0:
        raise ValueError("speed must be nonnegative")
    k_B = (c or PhysicalConstants()).k_B
    scale = m / (2.0 * k_B * T)
    # integral of v^3 exp(-scale v^2) over [0, inf) is 1/(2 scale^2)
    return float(2.0 * scale**2 * v**3 * np.exp(-scale * v * v))


def rms_velocity(T: float, m: float, c: PhysicalConstants) -> float:
    """Root-mean-square longitudinal velocity sqrt(4 k_B T / m)."""
    if T < 0.0 or m <= 0.0:
        raise ValueError("T must be >= 0 and m > 0")
    return float(np.sqrt(4.0 * c.k_B * T / m))


def run_chain(
    cfg: ExperimentConfig1922,
    c: PhysicalConstants | None = None,
    k_values: tuple[float, ...] = (0.6, 1.0),
) -> ChainReport:
    """Execute the full estimate over the given K bracketing values."""
    c = c or PhysicalConstants()
    if not k_values:
        raise ValueError("k_values must be nonempty")
    if any(not (0.6 <= k <= 1.0) for k in k_values):
        raise ValueError("every K must lie in [0.6, 1.0]")

    m = silver_mass(cfg.atomic_weight, c)
    v_y = rms_velocity(cfg.T, m, c)
    dt = cfg.L2 / v_y
    tau = cfg.L3 / v_y

    rows = []
    for k in k_values:
        cm = CollimatorModel(
            d1=cfg.d1, d2=cfg.d2, L1=cfg.L1, v_y=v_y, mass=m, hbar=c.hbar, K=k
        )
        probe = collimator_posterior(cm)
        params = SGParams(
            mu=c.mu_electron, B0=cfg.B0, B1=cfg.B1,
            mass=m, hbar=c.hbar, dt=dt, tau=tau,
        )
        var_z, _, _ = moments(probe)
        spread = sigma_t(probe, dt + tau)
        arg = abs(g0(params)) / (np.sqrt(2.0) * spread)
        damping = (
            2.0 * (c.mu_electron * cfg.B1 * dt / c.hbar) ** 2
            * sigma_t(probe, dt / 2.0) ** 2
        )
        rows.append(
            KRow(
                K=k,
                D_p=cm.D_p,
                D_z=cm.D_z,
                var_z=var_z,
                sigma_dt_sq=spread * spread,
                erfc_arg=float(arg),
                damping_exponent=float(damping),
                eps_sq=error_sq(params, probe),
                eta_sq=disturbance_sq(params, probe),
            )
        )

    ref = CollimatorModel(
        d1=cfg.d1, d2=cfg.d2, L1=cfg.L1, v_y=v_y, mass=m, hbar=c.hbar, K=1.0
    )
    params = SGParams(
        mu=c.mu_electron, B0=cfg.B0, B1=cfg.B1, mass=m, hbar=c.hbar, dt=dt, tau=tau
    )

    eps_min = min(r.eps_sq for r in rows)
    eps_max = max(r.eps_sq for r in rows)
    eta = rows[0].eta_sq
    sz, sx = PauliObservable.z(), PauliObservable.x()
    edr_min = evaluate_edrs(EDPoint(eps_min, eta), STATE_SY_PLUS, sz, sx)
    edr_max = evaluate_edrs(EDPoint(eps_max, eta), STATE_SY_PLUS, sz, sx)

    return ChainReport(
        m=m,
        v_y=v_y,
        dt=dt,
        tau=tau,
        delta_p=ref.delta_p,
        delta_z=ref.delta_z,
        g0=g0(params),
        rows=tuple(rows),
        eps_sq_min=eps_min,
        eps_sq_max=eps_max,
        eta_sq=eta,
        error_prob_bound=eps_max / 4.0,
        edr_at_min=edr_min,
        edr_at_max=edr_max,
    )


def heisenberg_verdict(report: ChainReport) -> tuple[float, float, bool]:
    """(max error*disturbance product, commutator bound, violated?)."""
    product_max = float(np.sqrt(report.eps_sq_max) * np.sqrt(report.eta_sq))
    bound = report.edr_at_max.heisenberg_rhs
    return product_max, bound, product_max < bound


# printed reference values for cross-checking a default-configuration run;
# K-dependent quantities are compared through their K-independent coefficient.
# intermediates carry 0.5% slack, the eps^2 endpoints 1% (their reference
# chain rounds to 3 significant figures at each step)
_REFERENCE_VALUES: dict[str, tuple[float, float]] = {
    "m": (1.7911939e-25, REFERENCE_RTOL),
    "v_y": (6.80e2, REFERENCE_RTOL),
    "dt": (5.14e-5, REFERENCE_RTOL),
    "1.25*delta_z": (2.50e-6, REFERENCE_RTOL),
    "1.25*delta_p": (2.35e-25, REFERENCE_RTOL),
    "var_z*K^2": (5.03e-20, REFERENCE_RTOL),
    "sigma_dt_sq/K^2": (4.54e-9, REFERENCE_RTOL),
    "g0": (9.26e-5, REFERENCE_RTOL),
    "erfc_arg*K": (0.972, REFERENCE_RTOL),
    "mu*B1*dt/hbar": (6.10e9, REFERENCE_RTOL),
    "damping_exponent/K^2": (8.44e10, REFERENCE_RTOL),
    "eps_sq(K=1)": (3.38e-1, 1e-2),
    "eps_sq(K=0.6)": (4.38e-2, 1e-2),
    "eta_sq": (2.0, 0.0),
}


def reference_checks(
    report: ChainReport, c: PhysicalConstants | None = None, cfg: ExperimentConfig1922 | None = None
) -> list[tuple[str, float, float, bool]]:
    """Compare a default-config report against the published intermediates.

    Returns (name, computed, expected, within 0.5% relative) per quantity.
    """
    c = c or PhysicalConstants()
    cfg = cfg or ExperimentConfig1922()
    by_k = {round(r.K, 12): r for r in report.rows}
    any_row = report.rows[0]
    computed = {
        "m": report.m,
        "v_y": report.v_y,
        "dt": report.dt,
        "1.25*delta_z": 1.25 * report.delta_z,
        "1.25*delta_p": 1.25 * report.delta_p,
        "var_z*K^2": any_row.var_z * any_row.K**2,
        "sigma_dt_sq/K^2": any_row.sigma_dt_sq / any_row.K**2,
        "g0": report.g0,
        "erfc_arg*K": any_row.erfc_arg * any_row.K,
        "mu*B1*dt/hbar": abs(c.mu_electron * cfg.B1 * report.dt / c.hbar),
        "damping_exponent/K^2": any_row.damping_exponent / any_row.K**2,
        "eta_sq": report.eta_sq,
    }
    if 1.0 in by_k:
        computed["eps_sq(K=1)"] = by_k[1.0].eps_sq
    if 0.6 in by_k:
        computed["eps_sq(K=0.6)"] = by_k[0.6].eps_sq
    results = []
    for name, value in computed.items():
        expected, rtol = _REFERENCE_VALUES[name]
        ok = abs(value - expected) <= rtol * abs(expected)
        results.append((name, float(value), expected, ok))
    return results


def report_to_dict(report: ChainReport) -> dict:
    """JSON-serializable form of the full report."""
    d = asdict(report)
    product_max, bound, violated = heisenberg_verdict(report)
    d["heisenberg"] = {
        "product_max": product_max,
        "bound": bound,
        "violated": violated,
    }
    return d


def report_to_json(report: ChainReport, indent: int = 2) -> str:
    return json.dumps(report_to_dict(report), indent=indent)


def format_table(report: ChainReport) -> str:
    """Human-readable summary mirroring the apparatus table plus results."""
    product_max, bound, violated = heisenberg_verdict(report)
    lines = [
        "quantity                      value",
        "-" * 44,
        f"silver atom mass m            {report.m:.7e} kg",
        f"rms velocity v_y              {report.v_y:.3e} m/s",
        f"transit time dt               {report.dt:.3e} s",
        f"free flight tau               {report.tau:.3e} s",
        f"momentum half-width deltaP    {report.delta_p:.3e} kg*m/s",
        f"position half-width deltaZ    {report.delta_z:.3e} m",
        f"deflection g0                 {report.g0:.3e} m",
        "",
        "  K      erfc arg     eps^2        eta^2",
    ]
    for r in report.rows:
        lines.append(
            f"  {r.K:<6.3f} {r.erfc_arg:<12.4f} {r.eps_sq:<12.4e} {r.eta_sq:.4f}"
        )
    lines += [
        "",
        f"eps^2 interval                [{report.eps_sq_min:.3e}, {report.eps_sq_max:.3e}]",
        f"eta^2                         {report.eta_sq:g}",
        f"error probability             <= {100.0 * report.error_prob_bound:.1f}%",
        f"max eps*eta                   {product_max:.3f} (bound {bound:g})",
        f"Heisenberg EDR:               {'VIOLATED' if violated else 'SATISFIED'}",
    ]
    return "\n".join(lines)


def parse_config(path: str) -> tuple[ExperimentConfig1922, tuple[float, ...]]:
    """Read a key = value config file; unknown keys are an error.

    Recognized keys: T, B1, L1, L2, L3, d1, d2, atomic_weight, B0,
    K_min, K_max, K_steps.  Missing keys fall back to the 1922 defaults.
    """
    cfg_keys = {"T", "B1", "L1", "L2", "L3", "d1", "d2", "atomic_weight", "B0"}
    values: dict[str, float] = {}
    k_min, k_max, k_steps = 0.6, 1.0, 2
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, val = line.partition("=")
            key = key.strip()
            try:
                num = float(val.strip())
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: bad number {val.strip()!r}") from exc
            if key in cfg_keys:
                values[key] = num
            elif key == "K_min":
                k_min = num
            elif key == "K_max":
                k_max = num
            elif key == "K_steps":
                k_steps = int(num)
            else:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
    if k_steps < 1:
        raise ValueError("K_steps must be >= 1")
    if k_steps == 1:
        k_values: tuple[float, ...] = (k_min,)
    else:
        k_values = tuple(float(x) for x in np.linspace(k_min, k_max, k_steps))
    return ExperimentConfig1922(**values), k_values
