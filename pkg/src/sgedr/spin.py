"""Qubit states, Pauli observables, and error-disturbance relation evaluators.

All matrices are dense complex 2x2 arrays.  Eigen- and singular-value
decompositions use closed-form 2x2 formulas so results are exact up to
floating-point rounding.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

HERMITICITY_TOL = 1e-12
PSD_TOL = 1e-12
ZERO_MEAN_TOL = 1e-9

# standard Pauli matrices
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


def _is_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def _eigh_2x2(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form eigendecomposition of a Hermitian 2x2 matrix.

    Returns (eigenvalues ascending, column eigenvectors).
    """
    a = m[0, 0].real
    d = m[1, 1].real
    b = m[0, 1]
    mean = 0.5 * (a + d)
    half_gap = np.hypot(0.5 * (a - d), abs(b))
    lo, hi = mean - half_gap, mean + half_gap
    if b == 0 and a <= d:
        vecs = np.eye(2, dtype=complex)
    elif b == 0:
        vecs = np.array([[0, 1], [1, 0]], dtype=complex)
    else:
        # two equivalent forms for the hi eigenvector, (b, hi-a) and
        # (hi-d, conj(b)); their norms sum to at least 2*half_gap, so the
        # larger is well conditioned.  Normalize magnitude and phase with
        # real divisions only: complex-by-real division squares the
        # denominator internally and overflows for subnormal norms.
        ab = abs(b)
        ph = complex(b.real / ab, b.imag / ab)
        n_a = np.hypot(ab, hi - a)
        n_d = np.hypot(hi - d, ab)
        if n_a >= n_d:
            v_hi = np.array([(ab / n_a) * ph, (hi - a) / n_a], dtype=complex)
        else:
            v_hi = np.array(
                [(hi - d) / n_d, (ab / n_d) * ph.conjugate()], dtype=complex
            )
        v_lo = np.array([-v_hi[1].conj(), v_hi[0].conj()], dtype=complex)
        vecs = np.column_stack([v_lo, v_hi])
    return np.array([lo, hi]), vecs


def _trace_norm_2x2(m: np.ndarray) -> float:
    """Sum of singular values of a general 2x2 matrix, in closed form."""
    t = float(np.sum(np.abs(m) ** 2))
    d = abs(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    return float(np.sqrt(max(t + 2.0 * d, 0.0)))


@dataclass(frozen=True)
class QubitState:
    """Density matrix of a single qubit.

    Rejects matrices that are not Hermitian, unit-trace, and positive
    semidefinite (eigenvalue floor -1e-12) at construction.
    """

    rho: np.ndarray

    def __post_init__(self) -> None:
        rho = np.asarray(self.rho, dtype=complex)
        if rho.shape != (2, 2):
            raise ValueError(f"density matrix must be 2x2, got {rho.shape}")
        if not _is_hermitian(rho):
            raise ValueError("density matrix is not Hermitian within 1e-12")
        if abs(np.trace(rho).real - 1.0) > HERMITICITY_TOL:
            raise ValueError("density matrix trace differs from 1 by more than 1e-12")
        evals, _ = _eigh_2x2(rho)
        if evals[0] < -PSD_TOL:
            raise ValueError(
                f"density matrix has negative eigenvalue {evals[0]:.3e}"
            )
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @classmethod
    def from_bloch(cls, x: float, y: float, z: float) -> "QubitState":
        """State (I + x sx + y sy + z sz)/2; requires |r| <= 1."""
        rho = 0.5 * (IDENTITY_2 + x * SIGMA_X + y * SIGMA_Y + z * SIGMA_Z)
        return cls(rho)

    @classmethod
    def from_vector(cls, psi: np.ndarray) -> "QubitState":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    def eigensystem(self) -> tuple[np.ndarray, np.ndarray]:
        """(probabilities ascending, column eigenvectors), closed 2x2 form."""
        evals, vecs = _eigh_2x2(self.rho)
        return np.clip(evals, 0.0, None), vecs

    def sqrt(self) -> np.ndarray:
        """Matrix square root via spectral decomposition, eigenvalues clamped at 0."""
        evals, vecs = self.eigensystem()
        return (vecs * np.sqrt(evals)) @ vecs.conj().T


# convenient named states
STATE_SY_PLUS = QubitState.from_vector(np.array([1.0, 1.0j]) / np.sqrt(2.0))
STATE_ZERO = QubitState(np.array([[1, 0], [0, 0]], dtype=complex))


@dataclass(frozen=True)
class PauliObservable:
    """A 2x2 Hermitian observable with a label (X, Y, Z, or custom)."""

    matrix: np.ndarray
    label: str = "custom"

    _STANDARD = {"X": SIGMA_X, "Y": SIGMA_Y, "Z": SIGMA_Z}

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("observable must be 2x2")
        if not _is_hermitian(m):
            raise ValueError("observable is not Hermitian within 1e-12")
        if self.label in self._STANDARD and not np.array_equal(
            m, self._STANDARD[self.label]
        ):
            raise ValueError(f"label {self.label} requires the standard Pauli matrix")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def x(cls) -> "PauliObservable":
        return cls(SIGMA_X, "X")

    @classmethod
    def y(cls) -> "PauliObservable":
        return cls(SIGMA_Y, "Y")

    @classmethod
    def z(cls) -> "PauliObservable":
        return cls(SIGMA_Z, "Z")


@dataclass(frozen=True)
class EDPoint:
    """A squared error / squared disturbance pair for +-1-valued observables."""

    eps_sq: float
    eta_sq: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.eps_sq <= 4.0):
            raise ValueError(f"eps_sq must lie in [0, 4], got {self.eps_sq}")
        if not (0.0 <= self.eta_sq <= 4.0):
            raise ValueError(f"eta_sq must lie in [0, 4], got {self.eta_sq}")


@dataclass(frozen=True)
class EDRReport:
    """Evaluation of the four error-disturbance relations at one point.

    ``tight_applicable`` is False when the zero-mean condition on the state
    fails; the tight-disk test is then reported but not flagged either way.
    """

    heisenberg_lhs: float
    heisenberg_rhs: float
    heisenberg_satisfied: bool
    ozawa_lhs: float
    ozawa_rhs: float
    ozawa_satisfied: bool
    branciard_lhs: float
    branciard_rhs: float
    branciard_satisfied: bool
    tight_lhs: float
    tight_applicable: bool
    tight_satisfied: bool | None = field(default=None)


def expectation(state: QubitState, obs: PauliObservable) -> float:
    """Tr(rho . obs); imaginary residue above 1e-12 is an error."""
    val = complex(np.trace(state.rho @ obs.matrix))
    if abs(val.imag) > HERMITICITY_TOL:
        raise ValueError(f"expectation has imaginary residue {val.imag:.3e}")
    return val.real


def std_dev(state: QubitState, obs: PauliObservable) -> float:
    """sqrt(<obs^2> - <obs>^2), clamped at zero within tolerance."""
    m = obs.matrix
    mean_sq = expectation(state, PauliObservable(m @ m))
    mean = expectation(state, obs)
    var = mean_sq - mean * mean
    if var < -HERMITICITY_TOL:
        raise ValueError(f"negative variance {var:.3e} signals corrupted input")
    return float(np.sqrt(max(var, 0.0)))


def d_quantity(
    state: QubitState, a: PauliObservable, b: PauliObservable
) -> float:
    """Commutator strength (1/2) Tr|sqrt(rho) [A,B] sqrt(rho)|."""
    comm = a.matrix @ b.matrix - b.matrix @ a.matrix
    root = state.sqrt()
    return 0.5 * _trace_norm_2x2(root @ comm @ root)


def robertson_check(
    state: QubitState, a: PauliObservable, b: PauliObservable
) -> tuple[float, float, bool]:
    """Standard-deviation uncertainty product versus half the mean commutator."""
    lhs = std_dev(state, a) * std_dev(state, b)
    comm = a.matrix @ b.matrix - b.matrix @ a.matrix
    rhs = 0.5 * abs(complex(np.trace(state.rho @ comm)))
    return lhs, rhs, lhs >= rhs - HERMITICITY_TOL


def hat_transform(v: float) -> float:
    """v * sqrt(1 - v^2/4) on [0, 2]; peaks at 1 when v = sqrt(2)."""
    if not (0.0 <= v <= 2.0):
        raise ValueError(f"argument must lie in [0, 2], got {v}")
    return float(v * np.sqrt(1.0 - v * v / 4.0))


def evaluate_edrs(
    point: EDPoint,
    state: QubitState,
    a: PauliObservable,
    b: PauliObservable,
) -> EDRReport:
    """Evaluate Heisenberg, Ozawa, Branciard-Ozawa, and tight-disk relations."""
    eps = float(np.sqrt(point.eps_sq))
    eta = float(np.sqrt(point.eta_sq))

    comm = a.matrix @ b.matrix - b.matrix @ a.matrix
    half_comm = 0.5 * abs(complex(np.trace(state.rho @ comm)))

    heis_lhs = eps * eta
    ozawa_lhs = eps * eta + eps * std_dev(state, b) + eta * std_dev(state, a)

    d = d_quantity(state, a, b)
    eps_hat = hat_transform(eps)
    eta_hat = hat_transform(eta)
    discr = max(1.0 - d * d, 0.0)
    bran_lhs = eps_hat**2 + eta_hat**2 + 2.0 * eps_hat * eta_hat * np.sqrt(discr)
    bran_rhs = d * d

    tight_lhs = (point.eps_sq - 2.0) ** 2 + (point.eta_sq - 2.0) ** 2
    zero_mean = (
        abs(expectation(state, a)) <= ZERO_MEAN_TOL
        and abs(expectation(state, b)) <= ZERO_MEAN_TOL
    )

    return EDRReport(
        heisenberg_lhs=heis_lhs,
        heisenberg_rhs=half_comm,
        heisenberg_satisfied=heis_lhs >= half_comm - HERMITICITY_TOL,
        ozawa_lhs=float(ozawa_lhs),
        ozawa_rhs=half_comm,
        ozawa_satisfied=bool(ozawa_lhs >= half_comm - HERMITICITY_TOL),
        branciard_lhs=float(bran_lhs),
        branciard_rhs=float(bran_rhs),
        branciard_satisfied=bool(bran_lhs >= bran_rhs - HERMITICITY_TOL),
        tight_lhs=float(tight_lhs),
        tight_applicable=zero_mean,
        tight_satisfied=(tight_lhs <= 4.0 + HERMITICITY_TOL) if zero_mean else None,
    )
