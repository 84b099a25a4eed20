"""Generalized symmetric eigensolution and natural-frequency extraction.

The solver reduces K phi = lambda M phi to a standard symmetric problem by
factoring M (LAPACK dense path via scipy) and verifies the residual
contract on the returned pairs. Rigid-body modes are detected by a
scale-free eigenvalue ratio against the seventh-smallest eigenvalue.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .beam_structure import MeasuredData
from .fem import GlobalSystem

RIGID_BODY_RATIO = 1e-6
_EXPECTED_RIGID_MODES = 6


class EigenSolveError(Exception):
    """Base class for eigensolution failures."""


class DecompositionError(EigenSolveError):
    """The mass matrix is not positive definite."""


class ConvergenceError(EigenSolveError):
    """The solver failed to meet the residual contract."""

    def __init__(self, message: str, achieved: float | None = None):
        super().__init__(message)
        self.achieved = achieved


class StructureError(EigenSolveError):
    """The assembled system does not show the expected six rigid-body modes."""


@dataclass(frozen=True)
class EigenSolveConfig:
    residual_tolerance: float = 1e-9
    max_iterations: int = 100

    def __post_init__(self) -> None:
        if self.residual_tolerance <= 0.0:
            raise ValueError("residual_tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


@dataclass(frozen=True)
class ModalResult:
    """Ascending natural frequencies of an assembled system, with the
    rigid-body cluster counted; mode shapes included only when requested."""

    frequencies_hz: np.ndarray
    rigid_body_count: int
    mode_shapes: np.ndarray | None = None


def _check_pair(k: np.ndarray, m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    k = np.asarray(k, dtype=float)
    m = np.asarray(m, dtype=float)
    if k.ndim != 2 or k.shape[0] != k.shape[1] or k.shape != m.shape:
        raise ValueError("K and M must be square matrices of equal shape")
    return k, m


def _require_positive_definite(m: np.ndarray) -> None:
    try:
        scipy.linalg.cholesky(m, lower=True)
    except scipy.linalg.LinAlgError as exc:
        raise DecompositionError(f"mass matrix is not positive definite: {exc}") from exc


def rigid_body_count(eigenvalues: np.ndarray) -> int:
    """Modes whose eigenvalue falls below RIGID_BODY_RATIO times the
    seventh-smallest eigenvalue. Zero when fewer than seven modes exist."""
    eigenvalues = np.asarray(eigenvalues)
    if eigenvalues.size < _EXPECTED_RIGID_MODES + 1:
        return 0
    threshold = RIGID_BODY_RATIO * eigenvalues[_EXPECTED_RIGID_MODES]
    return int(np.sum(eigenvalues < threshold))


def solve_generalized_eigen(
    k: np.ndarray,
    m: np.ndarray,
    config: EigenSolveConfig = EigenSolveConfig(),
) -> tuple[np.ndarray, np.ndarray]:
    """Solve K phi = lambda M phi for a symmetric K and SPD M.

    Returns ascending eigenvalues and M-orthonormal eigenvector columns.
    Every elastic pair must satisfy ||K phi - lambda M phi|| <= tol ||K phi||
    and every rigid-body pair ||K phi|| <= tol ||K|| ||phi||, else a
    ConvergenceError carrying the worst achieved ratio is raised.
    """
    k, m = _check_pair(k, m)
    _require_positive_definite(m)
    try:
        eigenvalues, eigenvectors = scipy.linalg.eigh(k, m)
    except scipy.linalg.LinAlgError as exc:
        raise ConvergenceError(f"dense symmetric solver did not converge: {exc}") from exc

    n_rigid = rigid_body_count(eigenvalues)
    k_phi = k @ eigenvectors
    m_phi = m @ eigenvectors
    residual = np.linalg.norm(k_phi - m_phi * eigenvalues, axis=0)
    k_phi_norm = np.linalg.norm(k_phi, axis=0)
    k_norm = np.linalg.norm(k, 2)

    tol = config.residual_tolerance
    worst = 0.0
    for i in range(eigenvalues.size):
        if i < n_rigid:
            ratio = k_phi_norm[i] / (k_norm * np.linalg.norm(eigenvectors[:, i]))
        else:
            ratio = residual[i] / k_phi_norm[i] if k_phi_norm[i] > 0.0 else np.inf
        worst = max(worst, ratio)
    if worst > tol:
        raise ConvergenceError(
            f"residual contract violated: achieved {worst:.3e} > tolerance {tol:.3e}",
            achieved=worst,
        )
    return eigenvalues, eigenvectors


def generalized_eigenvalues(k: np.ndarray, m: np.ndarray) -> np.ndarray:
    """Eigenvalues only; the fast path for fitness evaluations."""
    k, m = _check_pair(k, m)
    try:
        return scipy.linalg.eigh(k, m, eigvals_only=True)
    except scipy.linalg.LinAlgError as exc:
        raise ConvergenceError(f"dense symmetric solver did not converge: {exc}") from exc


def frequencies_from_eigenvalues(eigenvalues: np.ndarray) -> np.ndarray:
    """sqrt(max(lambda, 0)) / 2 pi; roundoff negatives in the rigid cluster
    clamp to zero Hz."""
    return np.sqrt(np.clip(eigenvalues, 0.0, None)) / (2.0 * np.pi)


def natural_frequencies(
    system: GlobalSystem,
    config: EigenSolveConfig = EigenSolveConfig(),
    with_shapes: bool = False,
) -> ModalResult:
    """Full ascending frequency list of an assembled free-free system.

    Raises StructureError unless exactly six rigid-body modes are present.
    """
    if with_shapes:
        eigenvalues, eigenvectors = solve_generalized_eigen(system.k_global, system.m_global, config)
    else:
        _require_positive_definite(system.m_global)
        eigenvalues = generalized_eigenvalues(system.k_global, system.m_global)
        eigenvectors = None
    n_rigid = rigid_body_count(eigenvalues)
    if n_rigid != _EXPECTED_RIGID_MODES:
        raise StructureError(
            f"expected {_EXPECTED_RIGID_MODES} rigid-body modes, found {n_rigid}"
        )
    return ModalResult(
        frequencies_hz=frequencies_from_eigenvalues(eigenvalues),
        rigid_body_count=n_rigid,
        mode_shapes=eigenvectors,
    )


def select_modes(result: ModalResult, measured: MeasuredData) -> np.ndarray:
    """Frequencies at the measured 1-based ranks of the ascending list."""
    if len(result.frequencies_hz) < max(measured.mode_indices):
        raise ValueError(
            f"need at least {max(measured.mode_indices)} modes, "
            f"got {len(result.frequencies_hz)}"
        )
    if result.rigid_body_count != _EXPECTED_RIGID_MODES:
        raise ValueError("mode selection requires a free-free result with six rigid-body modes")
    ranks = np.asarray(measured.mode_indices) - 1
    return result.frequencies_hz[ranks]
