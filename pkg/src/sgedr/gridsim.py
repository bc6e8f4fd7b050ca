"""Split-operator spinor wave-packet simulator.

Independent numerical check of the closed-form Stern-Gerlach error and
disturbance: evolve the two spin branches on a 1D position grid under the
magnet Hamiltonian, then free flight, and evaluate the root-mean-square
definitions directly.  Intended for order-unity (hbar = m = 1) parameters;
feed SI-scale inputs through a rescaling, not directly.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .probe import GaussianProbe, moments, sigma_t
from .sgmodel import SGParams, TauLimit
from .spin import QubitState

NORM_TOL = 1e-10
LEAK_TOL = 1e-10
_EDGE_CELLS = 4


@dataclass(frozen=True)
class Grid1D:
    """Uniform position grid; n must be a power of two, at least 256."""

    n: int
    z_min: float
    z_max: float

    def __post_init__(self) -> None:
        if self.n < 256 or (self.n & (self.n - 1)) != 0:
            raise ValueError("n must be a power of two >= 256")
        if self.z_max <= self.z_min:
            raise ValueError("z_max must exceed z_min")

    @property
    def dz(self) -> float:
        return (self.z_max - self.z_min) / self.n

    @property
    def z(self) -> np.ndarray:
        return self.z_min + self.dz * np.arange(self.n)

    @property
    def k(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dz)


@dataclass
class SpinorField:
    """Amplitudes of the sigma_z = +1 (up) and -1 (down) branches."""

    grid: Grid1D
    up: np.ndarray
    down: np.ndarray

    def norm_sq(self) -> float:
        return float(
            (np.sum(np.abs(self.up) ** 2) + np.sum(np.abs(self.down) ** 2))
            * self.grid.dz
        )

    def copy(self) -> "SpinorField":
        return SpinorField(self.grid, self.up.copy(), self.down.copy())

    def edge_probability(self) -> float:
        """Probability in the outermost cells on each side."""
        c = _EDGE_CELLS
        dens = np.abs(self.up) ** 2 + np.abs(self.down) ** 2
        return float((np.sum(dens[:c]) + np.sum(dens[-c:])) * self.grid.dz)

    def mean_z_sq(self) -> float:
        dens = np.abs(self.up) ** 2 + np.abs(self.down) ** 2
        return float(np.sum(self.grid.z**2 * dens) * self.grid.dz / self.norm_sq())

    def mean_p_sq(self, hbar: float) -> float:
        """<P^2> via the spectral derivative."""
        n = self.grid.n
        k = self.grid.k
        total = 0.0
        for branch in (self.up, self.down):
            amp = np.fft.fft(branch) / n
            total += float(np.sum((hbar * k) ** 2 * np.abs(amp) ** 2)) * n * self.grid.dz
        return total / self.norm_sq()

    def mean_sigma_x(self) -> float:
        return float(
            2.0 * np.sum((self.up.conj() * self.down).real) * self.grid.dz
        )


def suggest_grid(p: SGParams, probe: GaussianProbe, n: int = 1024) -> Grid1D:
    """Grid wide enough for the deflected, spread packets at screen time."""
    # the branches keep their Gaussian shape (linear potential), so the
    # exact spread sigma_t plus the deflection bounds the support; 8 sigma
    # of margin keeps the 1e-10 edge check comfortable
    half = _half_width(p, probe, margin=8.0)
    return Grid1D(n=n, z_min=-half, z_max=half)


def _half_width(p: SGParams, probe: GaussianProbe, margin: float) -> float:
    tau = 0.0 if isinstance(p.tau, TauLimit) else p.tau
    t_f = p.dt + tau
    deflection = abs(p.mu * p.B1 * p.dt * (p.dt / 2.0 + tau) / p.mass)
    spread = max(sigma_t(probe, 0.0), sigma_t(probe, t_f))
    return deflection + margin * spread


def _check_domain(grid: Grid1D, p: SGParams, probe: GaussianProbe) -> None:
    need = 2.0 * _half_width(p, probe, margin=6.0)
    span = grid.z_max - grid.z_min
    if span < need:
        raise ValueError(f"grid span {span:.3g} below required {need:.3g}")


def suggest_steps(grid: Grid1D, p: SGParams, probe: GaussianProbe) -> int:
    """Step count keeping per-step phases below pi/4.

    The potential phase is bounded over the whole grid; the kinetic phase is
    bounded at the largest momentum that carries amplitude (magnet kick plus
    packet tails), since the kinetic factor is applied exactly and empty
    Nyquist modes do not constrain accuracy.
    """
    _, var_p, _ = moments(probe)
    v_max = abs(p.mu) * (abs(p.B0) + abs(p.B1) * max(abs(grid.z_min), abs(grid.z_max)))
    p_char = abs(p.mu * p.B1) * p.dt + 8.0 * np.sqrt(var_p)
    rate = max(v_max, p_char**2 / (2.0 * p.mass)) / p.hbar
    limit = np.pi / 4.0
    return max(int(np.ceil(p.dt * rate / limit)), 16)


def init_state(
    grid: Grid1D, spin: np.ndarray, probe: GaussianProbe
) -> SpinorField:
    """Product state of a pure spinor with the sampled Gaussian probe."""
    spin = np.asarray(spin, dtype=complex)
    if spin.shape != (2,):
        raise ValueError("spin must be a 2-component vector")
    spin = spin / np.linalg.norm(spin)
    var_z, _, _ = moments(probe)
    width = np.sqrt(var_z)
    span = grid.z_max - grid.z_min
    if not (4.0 * grid.dz <= width <= span / 16.0):
        raise ValueError(
            f"probe width {width:.3g} unresolvable: need "
            f"{4.0 * grid.dz:.3g} <= width <= {span / 16.0:.3g}"
        )
    xi = np.exp(-probe.lam * grid.z**2)
    xi = xi / np.sqrt(np.sum(np.abs(xi) ** 2) * grid.dz)
    return SpinorField(grid, spin[0] * xi, spin[1] * xi)


def _propagate(
    field: SpinorField,
    p: SGParams,
    steps: int,
    backward: bool = False,
    check_leak: bool = True,
) -> SpinorField:
    """Apply the magnet interval with Strang steps, then the free flight.

    Backward applies the exact adjoint: inverse free flight first, then the
    magnet steps with conjugated phases (each Strang step is symmetric).
    The edge check only makes sense for smooth packets; the backward pass of
    a meter-multiplied state legitimately carries broadband components.
    """
    if steps < 1:
        raise ValueError("steps must be positive")
    tau = 0.0 if isinstance(p.tau, TauLimit) else p.tau
    grid = field.grid
    sign = -1.0 if backward else 1.0
    dt_step = p.dt / steps

    half_phase = sign * p.mu * (p.B0 + p.B1 * grid.z) * dt_step / (2.0 * p.hbar)
    phase_up = np.exp(-1j * half_phase)
    phase_down = np.exp(1j * half_phase)
    kin_step = np.exp(-1j * sign * p.hbar * grid.k**2 * dt_step / (2.0 * p.mass))
    kin_free = np.exp(-1j * sign * p.hbar * grid.k**2 * tau / (2.0 * p.mass))

    up = field.up.copy()
    down = field.down.copy()

    def magnet() -> None:
        nonlocal up, down
        for _ in range(steps):
            up *= phase_up
            down *= phase_down
            up = np.fft.ifft(kin_step * np.fft.fft(up))
            down = np.fft.ifft(kin_step * np.fft.fft(down))
            up *= phase_up
            down *= phase_down

    def free() -> None:
        nonlocal up, down
        if tau > 0.0:
            up = np.fft.ifft(kin_free * np.fft.fft(up))
            down = np.fft.ifft(kin_free * np.fft.fft(down))

    if backward:
        free()
        magnet()
    else:
        magnet()
        free()

    out = SpinorField(grid, up, down)
    if abs(out.norm_sq() - field.norm_sq()) > NORM_TOL:
        raise RuntimeError(f"norm drift {out.norm_sq() - field.norm_sq():.3e}")
    if check_leak:
        leak = out.edge_probability()
        if leak > LEAK_TOL:
            raise RuntimeError(f"boundary leakage {leak:.3e} exceeds {LEAK_TOL}")
    return out


def evolve(field: SpinorField, p: SGParams, steps: int) -> SpinorField:
    """Forward evolution through the magnet and the free flight."""
    return _propagate(field, p, steps, backward=False)


def _meter_sign(z: np.ndarray) -> np.ndarray:
    # screen reading: -1 for z >= 0 (including the z = 0 grid point), +1 below
    return np.where(z >= 0.0, -1.0, 1.0)


def _pure_error_sq(
    grid: Grid1D, p: SGParams, spin: np.ndarray, probe: GaussianProbe, steps: int
) -> float:
    start = init_state(grid, spin, probe)
    fwd = _propagate(start, p, steps)
    f = _meter_sign(grid.z)
    hit = SpinorField(grid, f * fwd.up, f * fwd.down)
    back = _propagate(hit, p, steps, backward=True, check_leak=False)
    diff_up = back.up - start.up
    diff_down = back.down + start.down
    return float(
        (np.sum(np.abs(diff_up) ** 2) + np.sum(np.abs(diff_down) ** 2)) * grid.dz
    )


def _pure_disturbance_sq(
    grid: Grid1D, p: SGParams, spin: np.ndarray, probe: GaussianProbe, steps: int
) -> float:
    start = init_state(grid, spin, probe)
    fwd = _propagate(start, p, steps)
    flipped = SpinorField(grid, fwd.down.copy(), fwd.up.copy())
    back = _propagate(flipped, p, steps, backward=True)
    diff_up = back.up - start.down
    diff_down = back.down - start.up
    return float(
        (np.sum(np.abs(diff_up) ** 2) + np.sum(np.abs(diff_down) ** 2)) * grid.dz
    )


def _mixed_rms(
    grid: Grid1D,
    p: SGParams,
    spin: QubitState,
    probe: GaussianProbe,
    steps: int | None,
    pure_fn,
) -> float:
    _check_domain(grid, p, probe)
    if steps is None:
        steps = suggest_steps(grid, p, probe)
    probs, vecs = spin.eigensystem()
    total = 0.0
    for weight, psi in zip(probs, vecs.T):
        if weight <= 0.0:
            continue
        total += weight * pure_fn(grid, p, psi, probe, steps)
    return float(np.sqrt(max(total, 0.0)))


def measure_error(
    grid: Grid1D,
    p: SGParams,
    spin: QubitState,
    probe: GaussianProbe,
    steps: int | None = None,
) -> float:
    """q-rms error of the sign-of-position meter against sigma_z."""
    return _mixed_rms(grid, p, spin, probe, steps, _pure_error_sq)


def measure_disturbance(
    grid: Grid1D,
    p: SGParams,
    spin: QubitState,
    probe: GaussianProbe,
    steps: int | None = None,
) -> float:
    """q-rms disturbance of sigma_x across the magnet transit."""
    return _mixed_rms(grid, p, spin, probe, steps, _pure_disturbance_sq)


def dump_profile(field: SpinorField, path: str) -> None:
    """Write |up|^2 and |down|^2 densities per grid point as CSV."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["z", "p_up", "p_down"])
        for z, pu, pd in zip(
            field.grid.z, np.abs(field.up) ** 2, np.abs(field.down) ** 2
        ):
            writer.writerow([repr(float(z)), repr(float(pu)), repr(float(pd))])
