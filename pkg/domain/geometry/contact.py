"""Lorentzian almost-contact structures on a frame manifold.

``P`` is stored column-wise: column ``j`` holds the frame components of
``phi(e_j)``. The 1-form is always derived from the metric,
``eta(X) = -g(X, xi)``, equivalently ``g(X, xi) = -eta(X)``.
"""

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from common.config.constants import AppConstants
from domain.errors import (
    EvaluationError,
    ManifoldDefinitionError,
    StructureAxiomError,
    TransSasakianError,
)
from domain.geometry.frame import Connection, FrameManifold, FrameVectorField, linear_combination
from domain.geometry.residuals import ResidualTable, index_label
from domain.symbolic.expr import Expr

EQ_XI_TIMELIKE = "g(ξ,ξ) = −1"
EQ_ETA_XI = "η(ξ) = 1"
EQ_PHI_SQUARED = "φ² = −I + η⊗ξ"
EQ_PHI_XI = "φξ = 0"
EQ_ETA_PHI = "η∘φ = 0"
EQ_COMPATIBLE = "g(φX,φY) = g(X,Y) + η(X)η(Y)"
EQ_ANTISYMMETRIC = "g(X,φY) = −g(φX,Y)"

D_CONVENTIONS = ("half", "full")


@dataclass(frozen=True, eq=False)
class ContactStructure:
    """``(phi, xi, eta, g)`` on a frame manifold, with ``(alpha, beta)`` once extracted."""

    manifold: FrameManifold
    connection: Connection
    P: Tuple[Tuple[Expr, ...], ...]
    xi: FrameVectorField
    eta: Tuple[Expr, ...]
    alpha: Optional[Expr] = None
    beta: Optional[Expr] = None

    @classmethod
    def build(
        cls,
        manifold: FrameManifold,
        connection: Connection,
        P: Sequence[Sequence[Expr]],
        xi: FrameVectorField,
    ) -> "ContactStructure":
        """Assemble without verifying the axioms."""
        d = manifold.dimension
        if len(P) != d or any(len(row) != d for row in P) or len(xi) != d:
            raise ManifoldDefinitionError(f"Contact data must match dimension {d}")
        P = tuple(tuple(Expr.coerce(v) for v in row) for row in P)
        eta = tuple(
            -sum((manifold.metric[i][j] * xi[j] for j in range(d)), Expr.zero())
            for i in range(d)
        )
        return cls(manifold, connection, P, xi, eta)

    @property
    def dimension(self) -> int:
        return self.manifold.dimension

    def with_functions(self, alpha: Expr, beta: Expr) -> "ContactStructure":
        return replace(self, alpha=alpha, beta=beta)

    def phi(self, v: FrameVectorField) -> FrameVectorField:
        d = self.dimension
        return FrameVectorField(
            tuple(
                sum((self.P[i][j] * v[j] for j in range(d) if not v[j].is_zero()), Expr.zero())
                for i in range(d)
            )
        )

    def phi_basis(self, j: int) -> FrameVectorField:
        return FrameVectorField(tuple(self.P[i][j] for i in range(self.dimension)))

    def eta_of(self, v: FrameVectorField) -> Expr:
        return sum((self.eta[i] * v[i] for i in range(self.dimension)), Expr.zero())

    def fundamental_form(self, i: int, j: int) -> Expr:
        """``Phi(e_i, e_j) = g(e_i, phi e_j)``."""
        return self.manifold.inner(self.manifold.basis(i), self.phi_basis(j))

    def fundamental_form_of(self, v: FrameVectorField, w: FrameVectorField) -> Expr:
        return self.manifold.inner(v, self.phi(w))


# ---------------------------------------------------------------------------
# axioms
# ---------------------------------------------------------------------------


def collect_axiom_violations(cs: ContactStructure) -> List[StructureAxiomError]:
    """Every nonzero axiom residual, in the order the axioms are checked.

    Order: timelike xi, eta(xi), phi squared, phi(xi), eta after phi,
    metric compatibility, antisymmetry of g(X, phi Y).
    """
    m, d = cs.manifold, cs.dimension
    violations: List[StructureAxiomError] = []

    def check(equation: str, indices: Tuple[int, ...], residual: Expr):
        if not residual.is_zero():
            violations.append(StructureAxiomError(equation, indices, str(residual)))

    check(EQ_XI_TIMELIKE, (), m.inner(cs.xi, cs.xi) + 1)
    check(EQ_ETA_XI, (), cs.eta_of(cs.xi) - 1)

    for i in range(d):
        for j in range(d):
            square = sum((cs.P[i][k] * cs.P[k][j] for k in range(d)), Expr.zero())
            check(EQ_PHI_SQUARED, (i, j), square + (1 if i == j else 0) - cs.xi[i] * cs.eta[j])

    phi_xi = cs.phi(cs.xi)
    for i in range(d):
        check(EQ_PHI_XI, (i,), phi_xi[i])
    for j in range(d):
        check(EQ_ETA_PHI, (j,), cs.eta_of(cs.phi_basis(j)))

    for i in range(d):
        for j in range(d):
            check(
                EQ_COMPATIBLE,
                (i, j),
                m.inner(cs.phi_basis(i), cs.phi_basis(j)) - m.metric[i][j] - cs.eta[i] * cs.eta[j],
            )
    for i in range(d):
        for j in range(d):
            check(
                EQ_ANTISYMMETRIC,
                (i, j),
                cs.fundamental_form(i, j) + m.inner(cs.phi_basis(i), m.basis(j)),
            )
    return violations


def attach_structure(
    m: FrameManifold,
    conn: Connection,
    P: Sequence[Sequence[Expr]],
    xi: FrameVectorField,
) -> ContactStructure:
    """Attach and verify a Lorentzian almost-contact structure.

    Raises:
        StructureAxiomError: For the first violated axiom
    """
    cs = ContactStructure.build(m, conn, P, xi)
    violations = collect_axiom_violations(cs)
    if violations:
        raise violations[0]
    return cs


@dataclass(frozen=True)
class PhiRankCheck:
    """Numeric trace and rank of ``P`` at one evaluation point."""

    trace: float
    rank: int
    expected_rank: int
    point: Dict[str, float]

    @property
    def passed(self) -> bool:
        return abs(self.trace) <= AppConstants.NUMERIC_RANK_TOLERANCE and self.rank == self.expected_rank

    def to_dict(self) -> Dict:
        return {
            "trace": self.trace,
            "rank": self.rank,
            "expected_rank": self.expected_rank,
            "verdict": "pass" if self.passed else "fail",
        }


def phi_rank_check(cs: ContactStructure, seed: int = 0, attempts: int = 8) -> PhiRankCheck:
    """Trace zero and rank ``d - 1`` of ``P`` at a seeded random point."""
    rng = random.Random(seed)
    names = [c.name for c in cs.manifold.coordinates]
    last_error: Optional[EvaluationError] = None
    for _ in range(attempts):
        point = {n: rng.uniform(-1.0, 1.0) for n in names}
        try:
            matrix = np.array([[entry.evaluate(point) for entry in row] for row in cs.P])
        except EvaluationError as e:
            last_error = e
            continue
        rank = int(np.linalg.matrix_rank(matrix, tol=AppConstants.NUMERIC_RANK_TOLERANCE))
        return PhiRankCheck(float(np.trace(matrix)), rank, cs.dimension - 1, point)
    raise last_error


# ---------------------------------------------------------------------------
# trans-Sasakian functions
# ---------------------------------------------------------------------------


@dataclass
class TransSasakianReport:
    alpha: Expr
    beta: Expr
    probe: str
    alpha_constant: bool
    beta_constant: bool
    phi_derivative: ResidualTable
    xi_derivative: ResidualTable
    eta_derivative: ResidualTable

    @property
    def tables(self) -> Tuple[ResidualTable, ...]:
        return (self.phi_derivative, self.xi_derivative, self.eta_derivative)

    @property
    def passed(self) -> bool:
        return all(t.passed for t in self.tables)

    @property
    def constant(self) -> bool:
        return self.alpha_constant and self.beta_constant

    def require_pass(self):
        for table in self.tables:
            first = table.first_failure()
            if first is not None:
                raise TransSasakianError(
                    f"{table.identity} fails at {first[0]} (residual {first[1]})"
                )

    def to_dict(self) -> Dict:
        return {
            "alpha": str(self.alpha),
            "beta": str(self.beta),
            "probe": self.probe,
            "alpha_constant": self.alpha_constant,
            "beta_constant": self.beta_constant,
            "identities": [t.to_dict() for t in self.tables],
            "verdict": "pass" if self.passed else "fail",
        }


def _valid_probe(cs: ContactStructure, probe: FrameVectorField) -> bool:
    m = cs.manifold
    phi_probe = cs.phi(probe)
    return (
        cs.eta_of(probe).is_zero()
        and not m.inner(probe, probe).is_zero()
        and not phi_probe.is_zero()
        and not m.inner(phi_probe, phi_probe).is_zero()
    )


def _default_probe(cs: ContactStructure) -> Tuple[str, FrameVectorField]:
    for i in range(cs.dimension):
        candidate = cs.manifold.basis(i)
        if _valid_probe(cs, candidate):
            return index_label((i,)), candidate
    raise TransSasakianError("No frame vector with η(e_i) = 0, g(e_i,e_i) ≠ 0 and φe_i ≠ 0")


def _is_constant(cs: ContactStructure, f: Expr) -> bool:
    return all(f.differentiate(c).is_zero() for c in cs.manifold.coordinates)


def extract_trans_sasakian(
    cs: ContactStructure, probe: Optional[FrameVectorField] = None
) -> TransSasakianReport:
    """Read ``(alpha, beta)`` off a probe vector, then verify on all frame pairs.

    Raises:
        TransSasakianError: If no valid probe exists
    """
    m, conn, d = cs.manifold, cs.connection, cs.dimension
    if probe is None:
        label, probe = _default_probe(cs)
    else:
        if not _valid_probe(cs, probe):
            raise TransSasakianError(f"Probe {probe} is degenerate")
        label = str(probe)

    nabla_xi = conn.along(probe, cs.xi)
    phi_probe = cs.phi(probe)
    alpha = m.inner(nabla_xi, phi_probe) / m.inner(phi_probe, phi_probe)
    beta = m.inner(nabla_xi, probe) / m.inner(probe, probe)

    phi_table = ResidualTable("phi_derivative", "all frame pairs (X, Y)")
    xi_table = ResidualTable("xi_derivative", "all frame vectors X")
    eta_table = ResidualTable("eta_derivative", "all frame pairs (X, Y)")

    for i in range(d):
        ei = m.basis(i)
        phi_ei = cs.phi_basis(i)
        eta_i = cs.eta[i]

        expected_xi = linear_combination(
            [(alpha, phi_ei), (beta, ei), (-beta * eta_i, cs.xi)], d
        )
        xi_table.record((i,), conn.covariant_derivative(i, cs.xi) - expected_xi)

        for j in range(d):
            ej = m.basis(j)
            eta_j = cs.eta[j]
            # (nabla_X phi) Y = nabla_X (phi Y) - phi(nabla_X Y)
            lhs = conn.covariant_derivative(i, cs.phi_basis(j)) - cs.phi(
                conn.covariant_derivative(i, ej)
            )
            rhs = linear_combination(
                [
                    (alpha * eta_j, ei),
                    (alpha * m.metric[i][j], cs.xi),
                    (-beta * eta_j, phi_ei),
                    (-beta * m.inner(phi_ei, ej), cs.xi),
                ],
                d,
            )
            phi_table.record((i, j), lhs - rhs)

            # (nabla_X eta) Y = X(eta(Y)) - eta(nabla_X Y)
            lhs_eta = m.directional_derivative(eta_j, i) - cs.eta_of(conn.covariant_derivative(i, ej))
            rhs_eta = alpha * cs.fundamental_form(i, j) - beta * m.inner(phi_ei, cs.phi_basis(j))
            eta_table.record((i, j), lhs_eta - rhs_eta)

    return TransSasakianReport(
        alpha=alpha,
        beta=beta,
        probe=label,
        alpha_constant=_is_constant(cs, alpha),
        beta_constant=_is_constant(cs, beta),
        phi_derivative=phi_table,
        xi_derivative=xi_table,
        eta_derivative=eta_table,
    )


# ---------------------------------------------------------------------------
# normality
# ---------------------------------------------------------------------------


def _check_convention(convention: str):
    if convention not in D_CONVENTIONS:
        raise ValueError(f"Unknown exterior-derivative convention: {convention}")


def _d_factor(convention: str, degree: int) -> Fraction:
    # full: no factor; half: 1/(degree + 1)
    return Fraction(1) if convention == "full" else Fraction(1, degree + 1)


def d_eta(cs: ContactStructure, v: FrameVectorField, w: FrameVectorField, convention: str = "half") -> Expr:
    """``X eta(Y) - Y eta(X) - eta([X, Y])`` scaled by the convention factor."""
    _check_convention(convention)
    m = cs.manifold
    value = m.apply(v, cs.eta_of(w)) - m.apply(w, cs.eta_of(v)) - cs.eta_of(m.bracket(v, w))
    return value * _d_factor(convention, 1)


def d_fundamental_form(cs: ContactStructure, i: int, j: int, k: int, convention: str = "half") -> Expr:
    m = cs.manifold
    ei, ej, ek = m.basis(i), m.basis(j), m.basis(k)
    phi2 = cs.fundamental_form_of
    value = (
        m.directional_derivative(cs.fundamental_form(j, k), i)
        - m.directional_derivative(cs.fundamental_form(i, k), j)
        + m.directional_derivative(cs.fundamental_form(i, j), k)
        - phi2(m.bracket(ei, ej), ek)
        + phi2(m.bracket(ei, ek), ej)
        - phi2(m.bracket(ej, ek), ei)
    )
    return value * _d_factor(convention, 2)


def eta_wedge_fundamental_form(cs: ContactStructure, i: int, j: int, k: int, convention: str = "half") -> Expr:
    """Cyclic sum ``eta(X)Phi(Y,Z) + eta(Y)Phi(Z,X) + eta(Z)Phi(X,Y)``; half scales by 1/3."""
    value = (
        cs.eta[i] * cs.fundamental_form(j, k)
        + cs.eta[j] * cs.fundamental_form(k, i)
        + cs.eta[k] * cs.fundamental_form(i, j)
    )
    return value * _d_factor(convention, 2)


@dataclass
class NormalityTensors:
    """Frame components of the four normality tensors."""

    convention: str
    n1: Dict[Tuple[int, int], FrameVectorField] = field(default_factory=dict)
    n2: Dict[Tuple[int, int], Expr] = field(default_factory=dict)
    n3: Dict[Tuple[int], FrameVectorField] = field(default_factory=dict)
    n4: Dict[Tuple[int], Expr] = field(default_factory=dict)

    def tables(self) -> Tuple[ResidualTable, ...]:
        tables = (
            ResidualTable("N1", "all frame pairs"),
            ResidualTable("N2", "all frame pairs"),
            ResidualTable("N3", "all frame vectors"),
            ResidualTable("N4", "all frame vectors"),
        )
        for table, components in zip(tables, (self.n1, self.n2, self.n3, self.n4)):
            for index, value in components.items():
                table.record(index, value)
        return tables

    @property
    def vanishes(self) -> bool:
        return all(t.passed for t in self.tables())

    def to_dict(self) -> Dict:
        return {
            "convention": self.convention,
            "tensors": [t.to_dict() for t in self.tables()],
            "normal": self.vanishes,
        }


def normality_tensors(cs: ContactStructure, convention: str = "half") -> NormalityTensors:
    """Nijenhuis-type tensors; Lie derivatives are expanded through brackets."""
    _check_convention(convention)
    m, d = cs.manifold, cs.dimension
    result = NormalityTensors(convention)
    phi = cs.phi

    def lie_eta(v: FrameVectorField, x: FrameVectorField) -> Expr:
        return m.apply(v, cs.eta_of(x)) - cs.eta_of(m.bracket(v, x))

    for i in range(d):
        ei, phi_ei = m.basis(i), cs.phi_basis(i)
        for j in range(d):
            ej, phi_ej = m.basis(j), cs.phi_basis(j)
            nijenhuis = (
                phi(phi(m.bracket(ei, ej)))
                + m.bracket(phi_ei, phi_ej)
                - phi(m.bracket(phi_ei, ej))
                - phi(m.bracket(ei, phi_ej))
            )
            result.n1[(i, j)] = nijenhuis + cs.xi.scale(d_eta(cs, ei, ej, convention) * 2)
            result.n2[(i, j)] = lie_eta(phi_ei, ej) - lie_eta(phi_ej, ei)
        result.n3[(i,)] = m.bracket(cs.xi, phi_ei) - phi(m.bracket(cs.xi, ei))
        result.n4[(i,)] = lie_eta(cs.xi, ei)
    return result


# ---------------------------------------------------------------------------
# differential-form conditions
# ---------------------------------------------------------------------------


@dataclass
class DifferentialFormReport:
    convention: str
    d_eta: ResidualTable
    d_phi: ResidualTable

    @property
    def passed(self) -> bool:
        return self.d_eta.passed and self.d_phi.passed

    def to_dict(self) -> Dict:
        return {
            "convention": self.convention,
            "identities": [self.d_eta.to_dict(), self.d_phi.to_dict()],
            "verdict": "pass" if self.passed else "fail",
        }


def oubina_check(cs: ContactStructure, convention: str = "half") -> DifferentialFormReport:
    """Residuals of ``d eta = alpha Phi`` and ``d Phi = 2 beta eta ^ Phi``.

    Raises:
        TransSasakianError: If alpha and beta have not been extracted
    """
    _check_convention(convention)
    if cs.alpha is None or cs.beta is None:
        raise TransSasakianError("alpha and beta must be extracted before the form check")
    m, d = cs.manifold, cs.dimension

    eta_table = ResidualTable("d_eta_equals_alpha_Phi", "frame pairs i<j")
    for i in range(d):
        for j in range(i + 1, d):
            residual = d_eta(cs, m.basis(i), m.basis(j), convention) - cs.alpha * cs.fundamental_form(i, j)
            eta_table.record((i, j), residual)

    phi_table = ResidualTable("d_Phi_equals_2beta_eta_wedge_Phi", "frame triples i<j<k")
    for i in range(d):
        for j in range(i + 1, d):
            for k in range(j + 1, d):
                residual = d_fundamental_form(cs, i, j, k, convention) - 2 * cs.beta * eta_wedge_fundamental_form(
                    cs, i, j, k, convention
                )
                phi_table.record((i, j, k), residual)

    return DifferentialFormReport(convention, eta_table, phi_table)
