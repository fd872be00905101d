"""Hyperbolic geometric flow and hyperbolic conformal Ricci flow on homogeneous data.

With constant structure constants and a spatially constant frame metric the
flow reduces to the matrix ODE ``g' = k``, ``k' = -2 Ric(g) - offset * g``
(``offset = p + 2/d`` for the conformal kind, 0 otherwise), integrated here
with classical fixed-step RK4.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from common.config.constants import AppConstants
from domain.errors import DegenerationError, ManifoldDefinitionError, NonConstantError
from domain.geometry.frame import FrameManifold

State = Tuple[np.ndarray, np.ndarray]

_RICCI_SIGN = {"standard": 1.0, "flipped": -1.0}


class FlowKind(Enum):
    HYPERBOLIC = "hyperbolic"
    CONFORMAL = "conformal"


def forcing_offset(kind: FlowKind, pressure: float, dimension: int) -> float:
    if kind is FlowKind.CONFORMAL:
        return float(pressure) + 2.0 / dimension
    return 0.0


def jacobi_residual(c: np.ndarray) -> float:
    """Largest component of the cyclic sum ``[e_i,[e_j,e_k]] + ...``."""
    nested = np.einsum("jkn,inm->ijkm", c, c)
    total = nested + np.einsum("kin,jnm->ijkm", c, c) + np.einsum("ijn,knm->ijkm", c, c)
    return float(np.max(np.abs(total))) if total.size else 0.0


def ricci_numeric(g: np.ndarray, c: np.ndarray, convention: str = "standard") -> np.ndarray:
    """Ricci tensor of a constant frame metric from the three bracket Koszul terms.

    Raises:
        DegenerationError: If ``g`` is singular
    """
    g = np.asarray(g, dtype=float)
    c = np.asarray(c, dtype=float)
    if abs(np.linalg.det(g)) < AppConstants.FLOW_DET_THRESHOLD:
        raise DegenerationError("Metric is singular")
    ginv = np.linalg.inv(g)

    # low[b, e, a] = g(e_a, [e_b, e_e])
    low = np.einsum("bel,la->bea", c, g)
    koszul = -np.einsum("jki->ijk", low) - np.einsum("ikj->ijk", low) + low
    gamma = 0.5 * np.einsum("mk,ijk->ijm", ginv, koszul)

    riem = (
        np.einsum("jkm,iml->ijkl", gamma, gamma)
        - np.einsum("ikm,jml->ijkl", gamma, gamma)
        - np.einsum("ijn,nkl->ijkl", c, gamma)
    )
    return _RICCI_SIGN[convention] * np.einsum("ijki->jk", riem)


def scalar_numeric(g: np.ndarray, ric: np.ndarray) -> float:
    return float(np.einsum("ij,ij->", np.linalg.inv(g), ric))


def signature(g: np.ndarray) -> Tuple[int, int]:
    """(negative, positive) eigenvalue counts of a symmetric matrix."""
    eigenvalues = np.linalg.eigvalsh(0.5 * (g + g.T))
    return int(np.sum(eigenvalues < 0)), int(np.sum(eigenvalues > 0))


@dataclass
class FlowProblem:
    structure_constants: np.ndarray
    g0: np.ndarray
    k0: np.ndarray
    kind: FlowKind = FlowKind.HYPERBOLIC
    pressure: float = 0.0
    dt: float = 1e-3
    steps: int = 500
    ricci_convention: str = "standard"

    def __post_init__(self):
        self.structure_constants = np.asarray(self.structure_constants, dtype=float)
        self.g0 = np.asarray(self.g0, dtype=float)
        self.k0 = np.asarray(self.k0, dtype=float)
        d = self.g0.shape[0]
        c = self.structure_constants
        if self.g0.shape != (d, d) or self.k0.shape != (d, d) or c.shape != (d, d, d):
            raise ManifoldDefinitionError(f"Flow data must have dimension {d}")
        if self.dt <= 0 or self.steps < 0:
            raise ValueError("Step size must be positive and the step count non-negative")
        tolerance = AppConstants.SYMMETRY_TOLERANCE
        if np.max(np.abs(self.g0 - self.g0.T)) > tolerance:
            raise ManifoldDefinitionError("Initial metric is not symmetric")
        if np.max(np.abs(self.k0 - self.k0.T)) > tolerance:
            raise ManifoldDefinitionError("Initial velocity is not symmetric")
        if np.max(np.abs(c + np.transpose(c, (1, 0, 2)))) > tolerance:
            raise ManifoldDefinitionError("Structure constants are not antisymmetric")
        if jacobi_residual(c) > AppConstants.JACOBI_TOLERANCE:
            raise ManifoldDefinitionError("Structure constants violate the Jacobi identity")
        if abs(np.linalg.det(self.g0)) < AppConstants.FLOW_DET_THRESHOLD:
            raise DegenerationError("Initial metric is degenerate", 0.0)

    @property
    def dimension(self) -> int:
        return self.g0.shape[0]

    @property
    def offset(self) -> float:
        return forcing_offset(self.kind, self.pressure, self.dimension)

    @classmethod
    def from_manifold(cls, m: FrameManifold, k0_scale: float = 0.0, **kwargs) -> "FlowProblem":
        """Homogeneous data read off a symbolic manifold with ``k0 = k0_scale * g0``.

        Raises:
            NonConstantError: If brackets or metric are not constant
        """
        if not m.structure_is_constant() or not m.metric_is_constant():
            raise NonConstantError(
                "Structure functions or metric are not constant; supply homogeneous structure constants instead"
            )
        d = m.dimension
        c = np.array(
            [[[float(m.structure[i][j][k].constant_value()) for k in range(d)] for j in range(d)] for i in range(d)]
        )
        g0 = np.array([[float(m.metric[i][j].constant_value()) for j in range(d)] for i in range(d)])
        return cls(c, g0, k0_scale * g0, **kwargs)

    def acceleration(self, g: np.ndarray) -> np.ndarray:
        return -2.0 * ricci_numeric(g, self.structure_constants, self.ricci_convention) - self.offset * g


def _symmetrize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


def step_rk4(state: State, h: float, acceleration: Callable[[np.ndarray], np.ndarray]) -> State:
    """One classical RK4 step of ``g' = k``, ``k' = acceleration(g)``; output symmetrized.

    Raises:
        DegenerationError: If a stage metric is singular
    """
    g, k = state

    def rhs(g_stage, k_stage):
        if abs(np.linalg.det(g_stage)) < AppConstants.FLOW_DET_THRESHOLD:
            raise DegenerationError("Stage metric is singular")
        return k_stage, acceleration(g_stage)

    k1g, k1k = rhs(g, k)
    k2g, k2k = rhs(g + 0.5 * h * k1g, k + 0.5 * h * k1k)
    k3g, k3k = rhs(g + 0.5 * h * k2g, k + 0.5 * h * k2k)
    k4g, k4k = rhs(g + h * k3g, k + h * k3k)

    g_next = g + h / 6.0 * (k1g + 2 * k2g + 2 * k3g + k4g)
    k_next = k + h / 6.0 * (k1k + 2 * k2k + 2 * k3k + k4k)
    return g_next, k_next


@dataclass(frozen=True)
class FlowDiagnostics:
    symmetry_drift: float
    determinant: float
    signature: Tuple[int, int]
    scalar_curvature: float
    einstein_residual: float


@dataclass
class FlowTrajectory:
    times: List[float] = field(default_factory=list)
    metrics: List[np.ndarray] = field(default_factory=list)
    velocities: List[np.ndarray] = field(default_factory=list)
    diagnostics: List[FlowDiagnostics] = field(default_factory=list)
    halted: Optional[str] = None
    halt_time: Optional[float] = None

    @property
    def degenerated(self) -> bool:
        return self.halted is not None

    def to_dict(self) -> Dict:
        return {
            "times": list(self.times),
            "metrics": [g.tolist() for g in self.metrics],
            "velocities": [k.tolist() for k in self.velocities],
            "diagnostics": [
                {
                    "symmetry_drift": d.symmetry_drift,
                    "determinant": d.determinant,
                    "signature": list(d.signature),
                    "scalar_curvature": d.scalar_curvature,
                    "einstein_residual": d.einstein_residual,
                }
                for d in self.diagnostics
            ],
            "halted": self.halted,
            "halt_time": self.halt_time,
        }


def _diagnose(problem: FlowProblem, g: np.ndarray, drift: float) -> FlowDiagnostics:
    ric = ricci_numeric(g, problem.structure_constants, problem.ricci_convention)
    r = scalar_numeric(g, ric)
    residual = float(np.linalg.norm(ric - r / problem.dimension * g))
    return FlowDiagnostics(drift, float(np.linalg.det(g)), signature(g), r, residual)


def integrate(problem: FlowProblem) -> FlowTrajectory:
    """Fixed-step integration with per-sample diagnostics.

    Halts early, keeping the partial trajectory, when ``|det g|`` drops
    below the threshold or the signature changes.

    Raises:
        DegenerationError: If the initial metric is already degenerate
    """
    g, k = problem.g0.copy(), problem.k0.copy()
    initial_signature = signature(g)
    trajectory = FlowTrajectory()
    trajectory.times.append(0.0)
    trajectory.metrics.append(g.copy())
    trajectory.velocities.append(k.copy())
    trajectory.diagnostics.append(_diagnose(problem, g, 0.0))

    for n in range(1, problem.steps + 1):
        t = n * problem.dt
        try:
            g_raw, k_raw = step_rk4((g, k), problem.dt, problem.acceleration)
        except DegenerationError:
            trajectory.halted = "stage metric became singular"
            trajectory.halt_time = t
            return trajectory
        drift = float(max(np.max(np.abs(g_raw - g_raw.T)), np.max(np.abs(k_raw - k_raw.T))))
        g, k = _symmetrize(g_raw), _symmetrize(k_raw)

        if abs(np.linalg.det(g)) < AppConstants.FLOW_DET_THRESHOLD:
            trajectory.halted = "metric determinant below threshold"
            trajectory.halt_time = t
            return trajectory
        if signature(g) != initial_signature:
            trajectory.halted = "metric signature changed"
            trajectory.halt_time = t
            return trajectory

        trajectory.times.append(t)
        trajectory.metrics.append(g.copy())
        trajectory.velocities.append(k.copy())
        trajectory.diagnostics.append(_diagnose(problem, g, drift))
    return trajectory


def quadratic_profile(lam: float, mu: float) -> Callable[[float], float]:
    """``sigma(t) = 1 + lam t - mu t^2``."""
    return lambda t: 1.0 + lam * t - mu * t * t


def conformal_profile(kappa: float, omega: float, a: float) -> Callable[[float], float]:
    """Solution of ``sigma'' + omega sigma = -2 kappa`` with ``sigma(0) = 1``, ``sigma'(0) = a``."""
    if omega == 0:
        return lambda t: 1.0 + a * t - kappa * t * t
    rest = -2.0 * kappa / omega
    root = math.sqrt(abs(omega))
    if omega > 0:
        return lambda t: rest + (1.0 - rest) * math.cos(root * t) + a / root * math.sin(root * t)
    return lambda t: rest + (1.0 - rest) * math.cosh(root * t) + a / root * math.sinh(root * t)


def self_similar_check(
    traj: FlowTrajectory,
    g0: np.ndarray,
    lam: float = None,
    mu: float = None,
    profile: Optional[Callable[[float], float]] = None,
) -> float:
    """Max over samples of ``||g(t) - sigma(t) g0|| / ||g0||`` in the Frobenius norm."""
    if profile is None:
        profile = quadratic_profile(lam, mu)
    scale = float(np.linalg.norm(g0))
    return max(
        (float(np.linalg.norm(g - profile(t) * g0)) / scale for t, g in zip(traj.times, traj.metrics)),
        default=0.0,
    )


def einstein_constant(problem: FlowProblem) -> Optional[float]:
    """``kappa`` with ``Ric(g0) = kappa g0``, or None when g0 is not Einstein."""
    ric = ricci_numeric(problem.g0, problem.structure_constants, problem.ricci_convention)
    g0 = problem.g0
    kappa = float(np.einsum("ij,ij->", ric, g0) / np.einsum("ij,ij->", g0, g0))
    if np.max(np.abs(ric - kappa * g0)) > AppConstants.SYMMETRY_TOLERANCE:
        return None
    return kappa


def closed_form_profile(problem: FlowProblem) -> Optional[Callable[[float], float]]:
    """Exact ``sigma`` for Einstein data with ``k0 = a g0``; None otherwise."""
    kappa = einstein_constant(problem)
    if kappa is None:
        return None
    g0 = problem.g0
    a = float(np.einsum("ij,ij->", problem.k0, g0) / np.einsum("ij,ij->", g0, g0))
    if np.max(np.abs(problem.k0 - a * g0)) > AppConstants.SYMMETRY_TOLERANCE:
        return None
    return conformal_profile(kappa, problem.offset, a)


def structure_constants_from_table(
    table: Dict[str, List], dimension: int
) -> np.ndarray:
    """Dense ``c[i][j][k]`` from ``{"i,j": [c_k...]}`` with 1-based pair keys.

    Missing pairs are zero; ``c[j][i] = -c[i][j]`` is filled in.
    """
    c = np.zeros((dimension, dimension, dimension))
    for key, values in table.items():
        i, j = (int(part) - 1 for part in key.split(","))
        if not (0 <= i < dimension and 0 <= j < dimension) or len(values) != dimension:
            raise ManifoldDefinitionError(f"Bad structure constant entry {key!r}")
        c[i, j, :] = [float(Fraction(str(v))) for v in values]
        c[j, i, :] = -c[i, j, :]
    return c
