"""Riemann, Ricci and scalar curvature of a frame connection, and the
identity suite for trans-Sasakian space forms.

``riem[i][j][k][l]`` is the ``e_l`` component of ``R(e_i, e_j) e_k`` with
``R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z``.
``r4[i][j][k][l] = g(R(e_i, e_j) e_k, e_l)``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from domain.errors import DegenerateProbeError, NonConstantError
from domain.geometry.contact import ContactStructure
from domain.geometry.frame import Connection, FrameManifold, FrameVectorField, linear_combination
from domain.geometry.residuals import ResidualTable, index_label
from domain.symbolic.expr import Expr

RICCI_CONVENTIONS = {"standard": 1, "flipped": -1}

Tensor3 = Tuple[Tuple[Tuple[Expr, ...], ...], ...]
Tensor4 = Tuple[Tuple[Tuple[Tuple[Expr, ...], ...], ...], ...]
Matrix = Tuple[Tuple[Expr, ...], ...]


def _frozen(nested):
    if isinstance(nested, Expr):
        return nested
    return tuple(_frozen(item) for item in nested)


@dataclass
class CurvatureData:
    manifold: FrameManifold
    connection: Connection
    riem: Tensor4
    r4: Tensor4
    ric: Optional[Matrix] = None
    scalar: Optional[Expr] = None
    c: Optional[Expr] = None
    ricci_convention: str = "standard"

    @property
    def dimension(self) -> int:
        return self.manifold.dimension

    def apply(self, x: FrameVectorField, y: FrameVectorField, z: FrameVectorField) -> FrameVectorField:
        """``R(X, Y) Z`` by multilinear expansion over the component table."""
        d = self.dimension
        terms = []
        for a, b, k in product(range(d), repeat=3):
            if x[a].is_zero() or y[b].is_zero() or z[k].is_zero():
                continue
            terms.append((x[a] * y[b] * z[k], FrameVectorField(self.riem[a][b][k])))
        return linear_combination(terms, d)

    def lowered(self, x, y, z, w) -> Expr:
        """``R(X, Y, Z, W) = g(R(X, Y) Z, W)``."""
        return self.manifold.inner(self.apply(x, y, z), w)


# ---------------------------------------------------------------------------
# tensors
# ---------------------------------------------------------------------------


def riemann(conn: Connection) -> CurvatureData:
    m = conn.manifold
    d = m.dimension
    gamma_fields = [[FrameVectorField(conn.gamma[i][j]) for j in range(d)] for i in range(d)]

    riem = [[[None] * d for _ in range(d)] for _ in range(d)]
    for i, j, k in product(range(d), repeat=3):
        if i == j:
            riem[i][j][k] = tuple(Expr.zero() for _ in range(d))
            continue
        second = conn.covariant_derivative(i, gamma_fields[j][k]) - conn.covariant_derivative(
            j, gamma_fields[i][k]
        )
        bracket_term = linear_combination(
            [(m.structure[i][j][n], gamma_fields[n][k]) for n in range(d)], d
        )
        riem[i][j][k] = (second - bracket_term).components

    r4 = [[[[None] * d for _ in range(d)] for _ in range(d)] for _ in range(d)]
    for i, j, k, l in product(range(d), repeat=4):
        r4[i][j][k][l] = sum((riem[i][j][k][n] * m.metric[n][l] for n in range(d)), Expr.zero())

    return CurvatureData(m, conn, _frozen(riem), _frozen(r4))


def ricci(cd: CurvatureData, m: FrameManifold, convention: str = "standard") -> Matrix:
    """``Ric[j][k] = sign * sum_{i,l} ginv[i][l] R4(i, j, k, l)``."""
    if convention not in RICCI_CONVENTIONS:
        raise ValueError(f"Unknown Ricci convention: {convention}")
    sign = RICCI_CONVENTIONS[convention]
    d = m.dimension
    ric = [[Expr.zero()] * d for _ in range(d)]
    for j, k in product(range(d), repeat=2):
        value = Expr.zero()
        for i, l in product(range(d), repeat=2):
            if not m.metric_inverse[i][l].is_zero():
                value = value + m.metric_inverse[i][l] * cd.r4[i][j][k][l]
        ric[j][k] = value * sign
    return _frozen(ric)


def scalar_curvature(cd: CurvatureData, m: FrameManifold) -> Expr:
    d = m.dimension
    return sum(
        (m.metric_inverse[i][j] * cd.ric[i][j] for i, j in product(range(d), repeat=2)),
        Expr.zero(),
    )


def compute_curvature(conn: Connection, convention: str = "standard") -> CurvatureData:
    """Riemann, Ricci and scalar curvature in one pass."""
    cd = riemann(conn)
    cd.ricci_convention = convention
    cd.ric = ricci(cd, conn.manifold, convention)
    cd.scalar = scalar_curvature(cd, conn.manifold)
    return cd


# ---------------------------------------------------------------------------
# phi-sectional curvature
# ---------------------------------------------------------------------------


def phi_sectional(cd: CurvatureData, cs: ContactStructure, x: FrameVectorField) -> Expr:
    """``c(X) = -R(X, phiX, X, phiX) / g(X, X)^2``.

    Raises:
        DegenerateProbeError: Unless eta(X) = 0, g(X,X) != 0 and phiX != 0
    """
    m = cd.manifold
    norm = m.inner(x, x)
    phi_x = cs.phi(x)
    if not cs.eta_of(x).is_zero() or norm.is_zero() or phi_x.is_zero():
        raise DegenerateProbeError(f"Probe {x} must satisfy η(X) = 0, g(X,X) ≠ 0, φX ≠ 0")
    return -cd.lowered(x, phi_x, x, phi_x) / (norm * norm)


def horizontal_probes(cs: ContactStructure) -> List[Tuple[str, FrameVectorField]]:
    """Frame vectors annihilated by eta, then their pairwise sums."""
    m = cs.manifold
    singles = [
        (index_label((i,)), m.basis(i))
        for i in range(m.dimension)
        if cs.eta_of(m.basis(i)).is_zero()
    ]
    pairs = [
        (f"{a}+{b}", u + v)
        for n, (a, u) in enumerate(singles)
        for b, v in singles[n + 1:]
    ]
    return singles + pairs


@dataclass
class PhiSectionalResult:
    c: Optional[Expr]
    values: Dict[str, str]
    constant_on_probes: bool
    skipped: Dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> Dict:
        data = {
            "c": None if self.c is None else str(self.c),
            "constant_on_probes": self.constant_on_probes,
            "probe_values": dict(self.values),
        }
        if self.skipped:
            data["skipped_probes"] = dict(self.skipped)
        return data


def phi_sectional_on_probes(cd: CurvatureData, cs: ContactStructure) -> PhiSectionalResult:
    """Evaluate c on every valid horizontal probe and report constancy."""
    values: Dict[str, Expr] = {}
    skipped: Dict[str, str] = {}
    for label, probe in horizontal_probes(cs):
        try:
            values[label] = phi_sectional(cd, cs, probe)
        except DegenerateProbeError as e:
            skipped[label] = str(e)
    if not values:
        return PhiSectionalResult(None, {}, False, skipped)
    first = next(iter(values.values()))
    constant = all((v - first).is_zero() for v in values.values()) and all(
        first.differentiate(c).is_zero() for c in cd.manifold.coordinates
    )
    return PhiSectionalResult(first, {k: str(v) for k, v in values.items()}, constant, skipped)


# ---------------------------------------------------------------------------
# space-form model
# ---------------------------------------------------------------------------


def _constant(value, name: str) -> Fraction:
    if value is None:
        raise NonConstantError(f"{name} has not been computed")
    value = Expr.coerce(value)
    if not value.is_constant():
        raise NonConstantError(f"{name} must be constant, got {value}")
    return value.constant_value()


@dataclass
class SpaceFormModel:
    """Model curvature ``R(e_i, e_j) e_k`` of a trans-Sasakian space form."""

    c: Fraction
    alpha: Fraction
    beta: Fraction
    components: Tensor3

    def riem(self) -> Tensor4:
        return tuple(
            tuple(tuple(v.components for v in row) for row in block) for block in self.components
        )


def space_form_model(
    m: FrameManifold, cs: ContactStructure, c, alpha, beta
) -> SpaceFormModel:
    """Right-hand side of the space-form curvature formula on all frame triples.

    ``4R(X,Y)Z = A[g(X,Z)Y - g(Y,Z)X] + B[eta(Z){eta(Y)X - eta(X)Y}
    + {eta(Y)g(X,Z) - eta(X)g(Y,Z)}xi + g(X,phiZ)phiY - g(Y,phiZ)phiX
    + 2g(X,phiY)phiZ] + 8 alpha beta[{eta(X)g(Y,phiZ) - eta(Y)g(X,phiZ)}xi
    + eta(Z){eta(X)phiY - eta(Y)phiX}]`` with ``A = 3(alpha^2 - beta^2) - c``
    and ``B = alpha^2 - beta^2 + c``.

    Raises:
        NonConstantError: If any of c, alpha, beta is not constant
    """
    c, alpha, beta = _constant(c, "c"), _constant(alpha, "alpha"), _constant(beta, "beta")
    d = m.dimension
    a_coef = 3 * (alpha ** 2 - beta ** 2) - c
    b_coef = alpha ** 2 - beta ** 2 + c
    ab_coef = 8 * alpha * beta
    g, eta, xi = m.metric, cs.eta, cs.xi

    def phi_g(a: int, b: int) -> Expr:
        # g(e_a, phi e_b)
        return cs.fundamental_form(a, b)

    components = [[[None] * d for _ in range(d)] for _ in range(d)]
    for i, j, k in product(range(d), repeat=3):
        ei, ej = m.basis(i), m.basis(j)
        phi_i, phi_j, phi_k = cs.phi_basis(i), cs.phi_basis(j), cs.phi_basis(k)
        terms = [
            (a_coef * g[i][k], ej),
            (-a_coef * g[j][k], ei),
            (b_coef * eta[k] * eta[j], ei),
            (-b_coef * eta[k] * eta[i], ej),
            (b_coef * (eta[j] * g[i][k] - eta[i] * g[j][k]), xi),
            (b_coef * phi_g(i, k), phi_j),
            (-b_coef * phi_g(j, k), phi_i),
            (2 * b_coef * phi_g(i, j), phi_k),
            (ab_coef * (eta[i] * phi_g(j, k) - eta[j] * phi_g(i, k)), xi),
            (ab_coef * eta[k] * eta[i], phi_j),
            (-ab_coef * eta[k] * eta[j], phi_i),
        ]
        components[i][j][k] = linear_combination(terms, d).scale(Fraction(1, 4))
    return SpaceFormModel(c, alpha, beta, tuple(tuple(tuple(row) for row in block) for block in components))


def contract_model(model: SpaceFormModel, m: FrameManifold, convention: str = "standard") -> Matrix:
    """Ricci tensor of the model by the same trace as ``ricci``."""
    d = m.dimension
    riem = model.riem()
    r4 = [
        [
            [
                [sum((riem[i][j][k][n] * m.metric[n][l] for n in range(d)), Expr.zero()) for l in range(d)]
                for k in range(d)
            ]
            for j in range(d)
        ]
        for i in range(d)
    ]
    holder = CurvatureData(m, None, riem, _frozen(r4))
    return ricci(holder, m, convention)


def printed_space_form_ricci(
    m: FrameManifold, cs: ContactStructure, c, alpha, beta
) -> Matrix:
    """``S = (nc - (3n-4)(a^2-b^2))/2 g + n(a^2-b^2+c)/2 eta*eta + 2ab g(Y, phiZ)``, ``d = 2n+1``."""
    c, alpha, beta = _constant(c, "c"), _constant(alpha, "alpha"), _constant(beta, "beta")
    d = m.dimension
    n = Fraction(d - 1, 2)
    diff = alpha ** 2 - beta ** 2
    g_coef = (n * c - (3 * n - 4) * diff) / 2
    eta_coef = n * (diff + c) / 2
    return _frozen(
        [
            [
                g_coef * m.metric[j][k]
                + eta_coef * cs.eta[j] * cs.eta[k]
                + 2 * alpha * beta * cs.fundamental_form(j, k)
                for k in range(d)
            ]
            for j in range(d)
        ]
    )


# ---------------------------------------------------------------------------
# identity suite
# ---------------------------------------------------------------------------


@dataclass
class IdentityReport:
    entries: List[ResidualTable] = field(default_factory=list)
    skipped: Dict[str, str] = field(default_factory=dict)

    def get(self, identity: str) -> ResidualTable:
        return next(t for t in self.entries if t.identity == identity)

    @property
    def passed(self) -> bool:
        return all(t.passed for t in self.entries)

    def to_dict(self) -> List[Dict]:
        rows = [t.to_dict() for t in self.entries]
        rows.extend(
            {"identity": name, "verdict": "skipped", "reason": reason}
            for name, reason in self.skipped.items()
        )
        return rows


def _diff(a, b) -> Sequence[Expr]:
    return tuple(x - y for x, y in zip(a, b))


def _structural_tables(m: FrameManifold, conn: Connection, cd: CurvatureData) -> List[ResidualTable]:
    d = m.dimension
    symmetries = ResidualTable("curvature_symmetries", "antisymmetry, pair symmetry, Ricci symmetry")
    for i, j, k, l in product(range(d), repeat=4):
        if i < j:
            symmetries.record(("antisymmetry", i, j, k, l), cd.riem[i][j][k][l] + cd.riem[j][i][k][l])
        symmetries.record(("pair", i, j, k, l), cd.r4[i][j][k][l] - cd.r4[k][l][i][j])
    if cd.ric is not None:
        for j in range(d):
            for k in range(j + 1, d):
                symmetries.record(("ricci", j, k), cd.ric[j][k] - cd.ric[k][j])

    first = ResidualTable("first_bianchi", "frame triples i<j<k")
    for i in range(d):
        for j in range(i + 1, d):
            for k in range(j + 1, d):
                total = tuple(
                    cd.riem[i][j][k][n] + cd.riem[j][k][i][n] + cd.riem[k][i][j][n] for n in range(d)
                )
                first.record((i, j, k), total)

    second = ResidualTable("second_bianchi", "frame triples i<j<k, all e_l")
    fields = [[FrameVectorField(conn.gamma[i][j]) for j in range(d)] for i in range(d)]

    def nabla_r(a: int, b: int, e: int, l: int) -> FrameVectorField:
        # (nabla_{e_a} R)(e_b, e_e) e_l
        eb, ee, el = m.basis(b), m.basis(e), m.basis(l)
        value = conn.covariant_derivative(a, FrameVectorField(cd.riem[b][e][l]))
        value = value - cd.apply(fields[a][b], ee, el)
        value = value - cd.apply(eb, fields[a][e], el)
        value = value - cd.apply(eb, ee, fields[a][l])
        return value

    for i in range(d):
        for j in range(i + 1, d):
            for k in range(j + 1, d):
                for l in range(d):
                    second.record(
                        (i, j, k, l), nabla_r(i, j, k, l) + nabla_r(j, k, i, l) + nabla_r(k, i, j, l)
                    )

    return [symmetries, first, second, conn.torsion_residuals(), conn.metric_compatibility_residuals()]


def structural_identities(m: FrameManifold, conn: Connection, cd: CurvatureData) -> IdentityReport:
    """Symmetries, both Bianchi identities, torsion and metric compatibility only."""
    return IdentityReport(entries=_structural_tables(m, conn, cd))


def _lemma_tables(cd: CurvatureData, cs: ContactStructure, a2: Fraction, ab: Fraction, b2: Fraction):
    m = cd.manifold
    g, R, R4, phi = m.inner, cd.apply, cd.lowered, cs.phi
    probes = horizontal_probes(cs)
    domain = "η-annihilated frame vectors and their pairwise sums"
    diff = a2 - b2
    d = m.dimension

    commutator = ResidualTable("phi_curvature_commutator", domain)
    pair = ResidualTable("phi_curvature_pair", domain)
    for (lx, x), (ly, y), (lz, z) in product(probes, repeat=3):
        px, py, pz = phi(x), phi(y), phi(z)
        lhs = R(x, y, pz) - phi(R(x, y, z))
        rhs = linear_combination(
            [
                (a2 * g(y, z), px), (-a2 * g(x, z), py), (a2 * g(x, pz), y), (-a2 * g(y, pz), x),
                (2 * ab * g(y, z), x), (-2 * ab * g(x, z), y), (2 * ab * g(y, pz), px), (-2 * ab * g(x, pz), py),
                (b2 * g(y, pz), x), (-b2 * g(x, pz), y), (b2 * g(x, z), py), (-b2 * g(y, z), px),
            ],
            d,
        )
        commutator.record((lx, ly, lz), lhs - rhs)

        lhs = R(px, py, z) - R(x, y, z)
        rhs = linear_combination(
            [
                (a2 * g(y, z), x), (-a2 * g(x, z), y), (a2 * g(z, px), py), (-a2 * g(z, py), px),
                (2 * ab * g(y, z), px), (-2 * ab * g(x, z), py), (2 * ab * g(z, py), x), (-2 * ab * g(z, px), y),
                (b2 * g(x, z), y), (-b2 * g(z, y), x), (b2 * g(z, py), px), (-b2 * g(z, px), py),
            ],
            d,
        )
        pair.record((lx, ly, lz), lhs - rhs)

    plane = ResidualTable("phi_plane_difference", domain)
    exchange = ResidualTable("phi_plane_exchange", domain)
    swap_x = ResidualTable("phi_plane_swap_first", domain)
    swap_y = ResidualTable("phi_plane_swap_second", domain)
    for (lx, x), (ly, y) in product(probes, repeat=2):
        px, py = phi(x), phi(y)
        bracket = g(x, y) * g(x, y) - g(x, x) * g(y, y) + g(x, py) * g(x, py)
        plane.record((lx, ly), R4(x, y, px, py) - R4(x, y, x, y) - diff * bracket)
        exchange.record(
            (lx, ly), R4(x, px, y, py) - R4(x, py, y, px) - R4(x, y, x, y) - diff * bracket
        )
        swap_x.record((lx, ly), R4(x, py, x, py) - R4(x, py, y, px) + diff * bracket)
        swap_y.record((lx, ly), R4(y, px, y, px) - R4(x, py, y, px) + diff * bracket)

    return [commutator, pair, plane, exchange, swap_x, swap_y]


def identity_suite(
    m: FrameManifold,
    conn: Connection,
    cd: CurvatureData,
    cs: ContactStructure,
) -> IdentityReport:
    """Left-minus-right residuals of every curvature identity.

    Requires ``cs`` to carry constant alpha and beta. Space-form entries are
    skipped when ``cd.c`` is missing or not constant.

    Raises:
        NonConstantError: If alpha or beta is not constant
    """
    alpha = _constant(cs.alpha, "alpha")
    beta = _constant(cs.beta, "beta")
    a2, b2, ab = alpha ** 2, beta ** 2, alpha * beta
    diff = a2 - b2
    d = m.dimension
    report = IdentityReport()
    xi, eta, phi = cs.xi, cs.eta, cs.phi

    curvature_xi = ResidualTable("curvature_xi", "all frame pairs")
    curvature_xi_first = ResidualTable("curvature_xi_first_slot", "all frame pairs")
    for i, j in product(range(d), repeat=2):
        ei, ej = m.basis(i), m.basis(j)
        expected = linear_combination(
            [
                (diff * eta[j], ei), (-diff * eta[i], ej),
                (2 * ab * eta[i], cs.phi_basis(j)), (-2 * ab * eta[j], cs.phi_basis(i)),
            ],
            d,
        )
        curvature_xi.record((i, j), _diff(cd.apply(ei, ej, xi), expected))

        expected = linear_combination(
            [
                (-diff * eta[j], ei), (-diff * m.metric[i][j], xi),
                (-2 * ab * eta[j], cs.phi_basis(i)), (2 * ab * cs.fundamental_form(i, j), xi),
            ],
            d,
        )
        curvature_xi_first.record((i, j), _diff(cd.apply(xi, ei, ej), expected))
    report.entries.extend([curvature_xi, curvature_xi_first])
    report.entries.extend(_lemma_tables(cd, cs, a2, ab, b2))

    space_form_ids = ("space_form", "ricci_space_form_printed", "ricci_space_form_contracted")
    c_value = cd.c
    if c_value is None or not c_value.is_constant():
        for name in space_form_ids:
            report.skipped[name] = "φ-sectional curvature is not constant on probes"
    else:
        model = space_form_model(m, cs, c_value, alpha, beta)
        space_form = ResidualTable("space_form", "all frame triples")
        for i, j, k in product(range(d), repeat=3):
            space_form.record(
                (i, j, k), _diff(cd.riem[i][j][k], model.components[i][j][k].components)
            )
        report.entries.append(space_form)

        computed = cd.ric if cd.ric is not None else ricci(cd, m, cd.ricci_convention)
        printed_table = ResidualTable("ricci_space_form_printed", "all frame pairs")
        contracted_table = ResidualTable("ricci_space_form_contracted", "all frame pairs")
        printed = printed_space_form_ricci(m, cs, c_value, alpha, beta)
        contracted = contract_model(model, m, cd.ricci_convention)
        for j, k in product(range(d), repeat=2):
            printed_table.record((j, k), computed[j][k] - printed[j][k])
            contracted_table.record((j, k), computed[j][k] - contracted[j][k])
        report.entries.extend([printed_table, contracted_table])

    report.entries.extend(_structural_tables(m, conn, cd))
    return report
