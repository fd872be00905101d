"""Lie derivatives of the metric and the hyperbolic (conformal) Ricci soliton equations.

The soliton equation per frame pair is

    (L_V L_V g)_ij + 2 lambda (L_V g)_ij + 2 Ric_ij = 2 mu g_ij - offset g_ij

with ``offset = p + 2/d`` for the conformal kind and 0 otherwise.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from domain.errors import ThresholdHypothesisError
from domain.geometry.contact import ContactStructure
from domain.geometry.frame import Connection, FrameManifold, FrameVectorField
from domain.geometry.residuals import ResidualTable
from domain.symbolic.expr import Expr
from domain.symbolic.linalg import least_squares_rational, solve_rational

Matrix = Tuple[Tuple[Expr, ...], ...]


class SolitonKind(Enum):
    HYPERBOLIC = "hyperbolic"
    CONFORMAL = "conformal"


class SolveStatus(Enum):
    UNIQUE = "unique"
    UNDERDETERMINED = "underdetermined"
    INCONSISTENT = "inconsistent"
    NON_CONSTANT = "non-constant-coefficients"


def classify(lam: Optional[Fraction]) -> str:
    if lam is None:
        return "n/a"
    if lam > 0:
        return "expanding"
    if lam < 0:
        return "shrinking"
    return "steady"


def _bilinear(h: Matrix, v: FrameVectorField, w: FrameVectorField) -> Expr:
    d = len(h)
    return sum(
        (
            v[a] * w[b] * h[a][b]
            for a, b in product(range(d), repeat=2)
            if not v[a].is_zero() and not w[b].is_zero()
        ),
        Expr.zero(),
    )


def lie_derivative_metric(m: FrameManifold, conn: Connection, v: FrameVectorField) -> Matrix:
    """``(L_V g)_ij = g(nabla_{e_i} V, e_j) + g(e_i, nabla_{e_j} V)``."""
    d = m.dimension
    nabla_v = [conn.covariant_derivative(i, v) for i in range(d)]
    return tuple(
        tuple(m.inner(nabla_v[i], m.basis(j)) + m.inner(m.basis(i), nabla_v[j]) for j in range(d))
        for i in range(d)
    )


def second_lie_derivative_metric(m: FrameManifold, conn: Connection, v: FrameVectorField) -> Matrix:
    """``(L_V h)_ij = V(h_ij) - h([V, e_i], e_j) - h(e_i, [V, e_j])`` with ``h = L_V g``."""
    d = m.dimension
    h = lie_derivative_metric(m, conn, v)
    brackets = [m.bracket(v, m.basis(i)) for i in range(d)]
    return tuple(
        tuple(
            m.apply(v, h[i][j])
            - _bilinear(h, brackets[i], m.basis(j))
            - _bilinear(h, m.basis(i), brackets[j])
            for j in range(d)
        )
        for i in range(d)
    )


@dataclass
class SolitonProblem:
    manifold: FrameManifold
    connection: Connection
    ricci: Matrix
    field: FrameVectorField
    kind: SolitonKind = SolitonKind.HYPERBOLIC
    pressure: Optional[Fraction] = None
    dimension: Optional[int] = None

    def __post_init__(self):
        if self.dimension is None:
            self.dimension = self.manifold.dimension
        if self.dimension != self.manifold.dimension:
            raise ValueError(
                f"Dimension {self.dimension} does not match manifold dimension {self.manifold.dimension}"
            )
        if (self.pressure is not None) != (self.kind is SolitonKind.CONFORMAL):
            raise ValueError("Pressure is required for the conformal kind and only for it")
        if self.pressure is not None:
            self.pressure = Fraction(self.pressure)

    @property
    def offset(self) -> Fraction:
        """``p + 2/d`` for the conformal kind."""
        if self.kind is SolitonKind.CONFORMAL:
            return self.pressure + Fraction(2, self.dimension)
        return Fraction(0)


@dataclass
class EtaEinsteinFit:
    """Best constants with ``Ric = a g + b eta*eta``; residual lists what does not fit."""

    a: Optional[Fraction]
    b: Optional[Fraction]
    residual: ResidualTable

    @property
    def exact(self) -> bool:
        return self.a is not None and self.residual.passed

    def to_dict(self) -> Dict:
        return {
            "a": None if self.a is None else str(self.a),
            "b": None if self.b is None else str(self.b),
            "residual": self.residual.to_dict(),
        }


@dataclass
class SolitonSolution:
    kind: SolitonKind
    status: SolveStatus
    lam: Optional[Fraction]
    mu: Optional[Fraction]
    residuals: ResidualTable
    classification: str
    null_space: Tuple[Tuple[Fraction, ...], ...] = ()
    pressure: Optional[Fraction] = None
    dimension: int = 0
    eta_einstein: Optional[EtaEinsteinFit] = None
    equations: List[Dict[str, str]] = field(default_factory=list)

    def to_dict(self) -> Dict:
        data = {
            "kind": self.kind.value,
            "status": self.status.value,
            "lambda": None if self.lam is None else str(self.lam),
            "mu": None if self.mu is None else str(self.mu),
            "classification": self.classification,
            "equations": list(self.equations),
            "residual": self.residuals.to_dict(),
        }
        if self.null_space:
            data["null_space"] = [[str(v) for v in vector] for vector in self.null_space]
        if self.kind is SolitonKind.CONFORMAL:
            data["pressure"] = str(self.pressure)
            data["dimension"] = self.dimension
        if self.eta_einstein is not None:
            data["eta_einstein"] = self.eta_einstein.to_dict()
        return data


def _soliton_residual(problem, h, h2, lam, mu) -> ResidualTable:
    m = problem.manifold
    d = m.dimension
    table = ResidualTable("soliton_equation", "all frame pairs")
    for i, j in product(range(d), repeat=2):
        table.record(
            (i, j),
            h2[i][j] + 2 * lam * h[i][j] + 2 * problem.ricci[i][j]
            - (2 * mu - problem.offset) * m.metric[i][j],
        )
    return table


def solve(problem: SolitonProblem, eta: Optional[Sequence[Expr]] = None) -> SolitonSolution:
    """Solve the soliton equations for global constants ``(lambda, mu)``.

    Args:
        problem: Manifold, connection, Ricci tensor and field
        eta: Contact 1-form components for the eta-Einstein fit, if any

    Returns:
        Solution whose status encodes every outcome
    """
    m, conn, v = problem.manifold, problem.connection, problem.field
    d = m.dimension
    h = lie_derivative_metric(m, conn, v)
    h2 = second_lie_derivative_metric(m, conn, v)

    rows: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    equations: List[Dict[str, str]] = []
    constant = True
    for i in range(d):
        for j in range(i, d):
            lam_coef = 2 * h[i][j]
            mu_coef = -2 * m.metric[i][j]
            free = h2[i][j] + 2 * problem.ricci[i][j] + problem.offset * m.metric[i][j]
            equations.append(
                {
                    "pair": f"e{i + 1},e{j + 1}",
                    "lambda": str(lam_coef),
                    "mu": str(mu_coef),
                    "constant": str(free),
                }
            )
            if not (lam_coef.is_constant() and mu_coef.is_constant() and free.is_constant()):
                constant = False
                continue
            rows.append([lam_coef.constant_value(), mu_coef.constant_value()])
            rhs.append(-free.constant_value())

    fit = eta_einstein_fit(problem.ricci, m.metric, eta) if eta is not None else None
    common = dict(kind=problem.kind, pressure=problem.pressure, dimension=d, eta_einstein=fit, equations=equations)

    if not constant:
        table = ResidualTable("soliton_equation", "all frame pairs", note="coefficients are not constant")
        return SolitonSolution(status=SolveStatus.NON_CONSTANT, lam=None, mu=None, residuals=table,
                               classification="n/a", **common)

    solution = solve_rational(rows, rhs, 2)
    if solution.status == "inconsistent":
        table = ResidualTable("soliton_equation", "all frame pairs", note="no constant solution")
        return SolitonSolution(status=SolveStatus.INCONSISTENT, lam=None, mu=None, residuals=table,
                               classification="n/a", **common)

    lam, mu = solution.particular
    residuals = _soliton_residual(problem, h, h2, lam, mu)
    if solution.status == "unique":
        return SolitonSolution(status=SolveStatus.UNIQUE, lam=lam, mu=mu, residuals=residuals,
                               classification=classify(lam), **common)

    lam_fixed, mu_fixed = solution.values
    if lam_fixed is None:
        residuals.note = "residual evaluated at the particular solution with free unknowns set to 0"
    return SolitonSolution(
        status=SolveStatus.UNDERDETERMINED,
        lam=lam_fixed,
        mu=mu_fixed,
        residuals=residuals,
        classification=classify(lam_fixed),
        null_space=solution.null_space,
        **common,
    )


def eta_einstein_fit(
    ric: Sequence[Sequence[Expr]], g: Sequence[Sequence[Expr]], eta: Sequence[Expr]
) -> EtaEinsteinFit:
    """Exact least-squares fit of ``Ric = a g + b eta*eta`` over all frame pairs."""
    d = len(g)
    table = ResidualTable("eta_einstein", "all frame pairs")
    pairs = list(product(range(d), repeat=2))
    entries = [(g[i][j], eta[i] * eta[j], ric[i][j]) for i, j in pairs]
    if not all(e.is_constant() for triple in entries for e in triple):
        table.note = "components are not constant"
        return EtaEinsteinFit(None, None, table)

    rows = [[gij.constant_value(), ee.constant_value()] for gij, ee, _ in entries]
    rhs = [r.constant_value() for _, _, r in entries]
    a, b = least_squares_rational(rows, rhs, 2)
    for (i, j), (gij, ee, r) in zip(pairs, entries):
        table.record((i, j), r - a * gij - b * ee)
    return EtaEinsteinFit(a, b, table)


def xi_closed_form_checks(cs: ContactStructure, beta, h: Matrix, h2: Matrix) -> List[ResidualTable]:
    """Compare ``L_xi g`` and ``L_xi L_xi g`` against both signs of the eta*eta term.

    Forms: ``2 beta (g -+ eta*eta)`` and ``4 beta^2 (g -+ eta*eta)``.
    """
    m, d = cs.manifold, cs.dimension
    beta = Expr.coerce(beta)
    tables = []
    for name, source, scale in (
        ("lie_xi_metric", h, 2 * beta),
        ("second_lie_xi_metric", h2, 4 * beta * beta),
    ):
        for sign, label in ((-1, "minus"), (1, "plus")):
            table = ResidualTable(f"{name}_{label}_eta_eta", "all frame pairs")
            for i, j in product(range(d), repeat=2):
                expected = scale * (m.metric[i][j] + sign * cs.eta[i] * cs.eta[j])
                table.record((i, j), source[i][j] - expected)
            tables.append(table)
    return tables


@dataclass(frozen=True)
class ThresholdResult:
    """Closed-form lambda and both regime readings of the mu threshold."""

    lam: Fraction
    threshold: Fraction
    regime: str
    formula_regime: str

    @property
    def agrees(self) -> bool:
        return self.regime == self.formula_regime

    def to_dict(self) -> Dict:
        return {
            "lambda": str(self.lam),
            "threshold": str(self.threshold),
            "regime": self.regime,
            "formula_regime": self.formula_regime,
            "agrees": self.agrees,
        }


def theorem_thresholds(
    alpha,
    beta,
    n: int,
    mu,
    p=None,
    kind: SolitonKind = SolitonKind.HYPERBOLIC,
) -> ThresholdResult:
    """Closed-form lambda for a space form of dimension ``2n + 1`` with ``V = xi``.

    ``lambda = (2(n-1)(alpha^2 - beta^2) + mu - offset)/(4 beta) - beta`` and the
    regime is read from ``mu`` against ``2((n+1)beta^2 - (n-1)alpha^2) + offset``
    with ``offset = (p + 2/(2n+1))/2`` for the conformal kind.

    Raises:
        ThresholdHypothesisError: If beta is zero
    """
    alpha, beta, mu = Fraction(alpha), Fraction(beta), Fraction(mu)
    if beta == 0:
        raise ThresholdHypothesisError("The closed-form thresholds require beta != 0")
    if kind is SolitonKind.CONFORMAL:
        if p is None:
            raise ValueError("Pressure is required for the conformal kind")
        offset = (Fraction(p) + Fraction(2, 2 * n + 1)) / 2
    else:
        offset = Fraction(0)

    lam = (2 * (n - 1) * (alpha ** 2 - beta ** 2) + mu - offset) / (4 * beta) - beta
    threshold = 2 * ((n + 1) * beta ** 2 - (n - 1) * alpha ** 2) + offset
    if mu > threshold:
        regime = "expanding"
    elif mu < threshold:
        regime = "shrinking"
    else:
        regime = "steady"
    return ThresholdResult(lam, threshold, regime, classify(lam))
