"""
The space of first-order variational multipliers of a normal-form f-Gordon system.

A symmetric matrix M(x, y, u) is a multiplier iff

    M_as H^s_b = M_bs K^s_a,   M_as S^s_bc = -M_bs S^s_ac,   dM_ab = M_as Omega^s_b + M_bs Omega^s_a.

The algebraic conditions form a matrix Phi_0 acting on the m(m+1)/2 unknowns M_ab (a <= b).
Differentiating each row and substituting dM gives Phi_1, and so on; once the generic rank r
stops growing, the multipliers form a space of dimension m(m+1)/2 - r.

Author: Erel Segal-Halevi
Since: 2024-03
"""

import enum
import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from varmult import defaults, linalg
from varmult.fgordon import FGordonSystem, InternalInconsistencyError
from varmult.invariants import (ConnectionForm, InvariantTriple, connection_form, gradient_coefficients,
                                invariants, monomial_string)
from varmult.symbolic.jet import Coordinate, JetSpace
from varmult.symbolic.expressions import (PoleError, evaluate, is_zero, normalize, opaque_atoms,
                                          random_rational)
from varmult.symbolic.parser import to_string

import logging
logger = logging.getLogger(__name__)


Matrix = Tuple[Tuple[sympy.Expr, ...], ...]


@dataclass(frozen=True)
class SymmetricUnknown:
    """ The unknown M_ab, 1-based, a <= b. """
    a: int
    b: int

    def __str__(self):
        return f"M{self.a}{self.b}"


def symmetric_unknowns(m: int) -> List[SymmetricUnknown]:
    """
    >>> [str(unknown) for unknown in symmetric_unknowns(2)]
    ['M11', 'M12', 'M22']
    """
    return [SymmetricUnknown(a, b) for a in range(1, m + 1) for b in range(a, m + 1)]


def unknown_count(m: int) -> int:
    return m * (m + 1) // 2


def _column_index(m: int) -> Dict[Tuple[int, int], int]:
    """ 0-based (a, b) with a <= b  ->  column. """
    return {(u.a - 1, u.b - 1): column for column, u in enumerate(symmetric_unknowns(m))}


def _project(N: Sequence[Sequence[sympy.Expr]], m: int) -> List[sympy.Expr]:
    """ The coefficients on the symmetric unknowns of sum over r, t of N[r][t] M_rt. """
    return [normalize(N[a][b] + N[b][a]) if a < b else normalize(N[a][a])
            for a in range(m) for b in range(a, m)]


def _lift(coefficients: Sequence[sympy.Expr], m: int) -> List[List[sympy.Expr]]:
    """ The symmetric Phi with sum over r, t of Phi[r][t] M_rt equal to the row applied to M. """
    columns = _column_index(m)
    Phi = [[sympy.Integer(0)] * m for _ in range(m)]
    for (a, b), column in columns.items():
        if a == b:
            Phi[a][a] = coefficients[column]
        else:
            Phi[a][b] = Phi[b][a] = coefficients[column] / 2
    return Phi


def matrix_from_vector(vector: Sequence, m: int) -> Matrix:
    """
    >>> matrix_from_vector([1, 0, 1], 2)
    ((1, 0), (0, 1))
    """
    columns = _column_index(m)
    return tuple(tuple(sympy.sympify(vector[columns[min(a, b), max(a, b)]]) for b in range(m)) for a in range(m))


def vector_from_matrix(M: Sequence[Sequence], m: int) -> List[sympy.Expr]:
    return [sympy.sympify(M[a][b]) for a in range(m) for b in range(a, m)]


def apply_row(coefficients: Sequence[sympy.Expr], M: Sequence[Sequence]) -> sympy.Expr:
    """ The row applied to a symmetric matrix: sum over a <= b of coefficient_ab M_ab. """
    m = len(M)
    return normalize(sum((c * e for c, e in zip(coefficients, vector_from_matrix(M, m))), sympy.Integer(0)))


@dataclass(frozen=True)
class PhiRow:
    coefficients: Tuple[sympy.Expr, ...]
    provenance: str
    stage: int

    def to_document(self) -> Dict[str, Any]:
        return {"stage": self.stage, "provenance": self.provenance,
                "row": [to_string(e) for e in self.coefficients]}


@dataclass(frozen=True)
class PhiSystem:
    """ The rows of Phi_0 .. Phi_stage; each stage contains all rows of the previous ones. """
    m: int
    rows: Tuple[PhiRow, ...]
    stage: int = 0

    @property
    def frontier(self) -> List[Tuple[int, PhiRow]]:
        """ The rows (with their index) added at the latest stage. """
        return [(k, row) for k, row in enumerate(self.rows) if row.stage == self.stage]

    def matrix(self) -> List[Tuple[sympy.Expr, ...]]:
        return [row.coefficients for row in self.rows]

    def __len__(self):
        return len(self.rows)


def _canonical(coefficients: Sequence[sympy.Expr]) -> Optional[Tuple[sympy.Expr, ...]]:
    """ Normalized coefficients with a positive leading entry, or None for a zero row. """
    coefficients = [normalize(c) for c in coefficients]
    coefficients = [sympy.Integer(0) if c != 0 and is_zero(c) else c for c in coefficients]
    leading = next((c for c in coefficients if c != 0), None)
    if leading is None:
        return None
    if leading.could_extract_minus_sign():
        coefficients = [normalize(-c) for c in coefficients]
    return tuple(coefficients)


def _append(rows: List[PhiRow], seen: set, coefficients, provenance: str, stage: int) -> bool:
    canonical = _canonical(coefficients)
    if canonical is None or canonical in seen:
        return False
    seen.add(canonical)
    rows.append(PhiRow(canonical, provenance, stage))
    return True


def _algebraic_conditions(inv: InvariantTriple) -> List[Tuple[List[List[sympy.Expr]], str]]:
    """ The coefficient matrices N (with provenance) of the algebraic conditions, before projection. """
    jet = inv.jet
    m = jet.m
    zero = lambda: [[sympy.Integer(0)] * m for _ in range(m)]
    conditions = []
    for a, b in itertools.product(range(m), repeat=2):
        # M_as H^s_b - M_bs K^s_a, split by gradient monomials
        by_monomial: Dict[tuple, List[List[sympy.Expr]]] = {}
        for s in range(m):
            for monomial, value in gradient_coefficients(inv.H[s][b], jet).items():
                by_monomial.setdefault(monomial, zero())[a][s] += value
        for s in range(m):
            for monomial, value in gradient_coefficients(inv.K[s][a], jet).items():
                by_monomial.setdefault(monomial, zero())[b][s] -= value
        for monomial in sorted(by_monomial, key=lambda k: (sum(k), tuple(-e for e in k))):
            conditions.append((by_monomial[monomial], f"H-K[{a+1},{b+1}]:{monomial_string(monomial, jet)}"))
    for a in range(m):
        for b in range(a, m):
            for c in range(m):
                N = zero()
                for s in range(m):
                    N[a][s] += inv.S[s][b][c]
                    N[b][s] += inv.S[s][a][c]
                conditions.append((N, f"S[{a+1},{b+1};{c+1}]"))
    return conditions


def build_phi0(inv: InvariantTriple) -> PhiSystem:
    """
    The algebraic conditions as rows over the unknowns (M11, M12, ..., Mmm).

    >>> from varmult.fgordon import FGordonSystem
    >>> [row.coefficients for row in build_phi0(invariants(FGordonSystem.from_strings(["v", "u"]))).rows]
    [(1, 0, -1)]
    >>> [row.coefficients for row in build_phi0(invariants(FGordonSystem.from_strings(["v", "x*u"]))).rows]
    [(1, 0, -x)]
    >>> build_phi0(invariants(FGordonSystem.from_strings(["0", "0"]))).rows
    ()
    """
    m = inv.jet.m
    rows: List[PhiRow] = []
    seen: set = set()
    for N, provenance in _algebraic_conditions(inv):
        _append(rows, seen, _project(N, m), provenance, 0)
    logger.debug("Phi_0 has %d rows", len(rows))
    return PhiSystem(m, tuple(rows), 0)


def _differentiate(coefficients: Sequence[sympy.Expr], direction: Coordinate, omega: ConnectionForm) -> List[sympy.Expr]:
    """ The coefficients of d(row . M) along the direction, with dM replaced through Omega. """
    m = omega.jet.m
    symbol = omega.jet.symbol(direction)
    Phi = _lift(coefficients, m)
    Omega = omega.along(direction)
    N = [[sympy.diff(Phi[r][s], symbol) + 2 * sum((Phi[r][k] * Omega[s][k] for k in range(m)), sympy.Integer(0))
          for s in range(m)] for r in range(m)]
    return _project(N, m)


def augment(phi: PhiSystem, omega: ConnectionForm) -> PhiSystem:
    """
    Differentiate every row added at the latest stage along x, y, u^1..u^m.

    >>> from varmult.fgordon import FGordonSystem
    >>> example3 = FGordonSystem.from_strings(["v", "u_x"])
    >>> phi = augment(build_phi0(invariants(example3)), connection_form(example3))
    >>> [(row.coefficients, row.provenance) for _, row in phi.frontier]
    [((0, 2, 0), 'dy(row 1)')]
    """
    rows = list(phi.rows)
    seen = {row.coefficients for row in rows}
    stage = phi.stage + 1
    for k, row in phi.frontier:
        for direction in omega.jet.directions:
            name = omega.jet.symbol(direction).name
            _append(rows, seen, _differentiate(row.coefficients, direction, omega), f"d{name}(row {k+1})", stage)
    return PhiSystem(phi.m, tuple(rows), stage)


#
# Ranks at random points
#

def _sample(symbols: Sequence[sympy.Symbol], count: int, seed: int, evaluator: Callable) -> List[Tuple[Dict, Any]]:
    """ `count` random points where the evaluator raises no PoleError, with the evaluator's values. """
    rng = np.random.default_rng(seed)
    result = []
    for _ in range(count + defaults.MAX_RESAMPLES):
        point = {symbol: random_rational(rng) for symbol in symbols}
        try:
            result.append((point, evaluator(point)))
        except PoleError as error:
            logger.debug("Resampling: %s", error)
            continue
        if len(result) == count:
            return result
    raise PoleError(f"Could not find {count} regular sample points in {defaults.MAX_RESAMPLES} attempts")


def _evaluate_rows(rows: Sequence[Sequence[sympy.Expr]], point: Dict) -> Tuple[List[List[sympy.Rational]], bool]:
    values, exact = [], True
    for row in rows:
        evaluated = [evaluate(e, point) for e in row]
        exact = exact and all(v.exact for v in evaluated)
        values.append([v.value for v in evaluated])
    return values, exact


def _rank(values, ncols: int, exact: bool) -> int:
    return linalg.rank(values, ncols) if exact else linalg.numeric_rank(values, ncols)


def _nullspace(values, ncols: int, exact: bool) -> List[List[sympy.Rational]]:
    return linalg.nullspace(values, ncols) if exact else linalg.numeric_nullspace(values, ncols)


def sampled_rank(rows: Sequence[Sequence[sympy.Expr]], ncols: int, symbols: Sequence[sympy.Symbol],
                 seed: int = defaults.DEFAULT_SEED, samples: int = defaults.SAMPLE_COUNT) -> int:
    """
    The maximum rank of an expression matrix over random rational values of the given symbols.

    >>> x, u = sympy.symbols("x u")
    >>> sampled_rank([[1, x], [u, u*x]], 2, [x, u])
    1
    """
    if not rows:
        return 0
    sampled = _sample(symbols, samples, seed, lambda point: _evaluate_rows(rows, point))
    return max(_rank(values, ncols, exact) for _, (values, exact) in sampled)


@dataclass
class RankResult:
    rank: int
    point_ranks: List[int]
    points: List[Dict]
    base_point: Dict
    exact: bool
    warnings: List[str] = field(default_factory=list)


def generic_rank(phi: PhiSystem, jet: JetSpace, seed: int = defaults.DEFAULT_SEED,
                 samples: int = defaults.SAMPLE_COUNT) -> RankResult:
    """
    The maximum rank of the rows over random rational points of (x, y, u).

    >>> from varmult.fgordon import FGordonSystem
    >>> example1 = FGordonSystem.from_strings(["v", "u"])
    >>> generic_rank(build_phi0(invariants(example1)), example1.jet).rank
    1
    >>> generic_rank(PhiSystem(2, ()), example1.jet).rank
    0
    """
    ncols = unknown_count(phi.m)
    rows = phi.matrix()
    sampled = _sample(jet.base, samples, seed, lambda point: _evaluate_rows(rows, point))
    points = [point for point, _ in sampled]
    exact = all(is_exact for _, (_, is_exact) in sampled)
    ranks = [_rank(values, ncols, is_exact) for _, (values, is_exact) in sampled]
    best = max(ranks)
    result = RankResult(best, ranks, points, points[ranks.index(best)], exact)
    if len(set(ranks)) > 1:
        message = f"rank depends on the point (stage {phi.stage}): ranks {ranks} at the sample points"
        logger.warning(message)
        result.warnings.append(message)
    if not exact:
        result.warnings.append(f"stage {phi.stage} rank computed numerically from opaque-function values")
    return result


#
# Multiplier conditions
#

def differential_conditions(M: Sequence[Sequence], omega: ConnectionForm) -> List[Tuple[str, int, int, sympy.Expr]]:
    """
    The residuals dM_ab - M_as Omega^s_b - M_bs Omega^s_a along each direction, as (direction, a, b, residual), 1-based.

    >>> from varmult.fgordon import FGordonSystem
    >>> omega = connection_form(FGordonSystem.from_strings(["v", "u_x"]))
    >>> [(d, a, b, r) for d, a, b, r in differential_conditions([[0, 1], [1, 0]], omega) if r != 0]
    [('y', 1, 1, 2)]
    """
    jet = omega.jet
    m = jet.m
    residuals = []
    for direction in jet.directions:
        symbol = jet.symbol(direction)
        Omega = omega.along(direction)
        for a in range(m):
            for b in range(a, m):
                value = sympy.diff(sympy.sympify(M[a][b]), symbol)
                for s in range(m):
                    value -= sympy.sympify(M[a][s]) * Omega[s][b] + sympy.sympify(M[b][s]) * Omega[s][a]
                residuals.append((symbol.name, a + 1, b + 1, normalize(value)))
    return residuals


def multiplier_residuals(M: Sequence[Sequence], phi: PhiSystem, omega: ConnectionForm) -> List[sympy.Expr]:
    return [apply_row(row.coefficients, M) for row in phi.rows] + \
           [residual for _, _, _, residual in differential_conditions(M, omega)]


def check_multiplier_conditions(M: Sequence[Sequence], system: FGordonSystem, phi: PhiSystem = None) -> bool:
    """
    Whether M satisfies the algebraic and the differential multiplier conditions of the system.

    >>> from varmult.fgordon import FGordonSystem
    >>> example1 = FGordonSystem.from_strings(["v", "u"])
    >>> check_multiplier_conditions([[1, 0], [0, 1]], example1), check_multiplier_conditions([[1, 0], [0, 0]], example1)
    (True, False)
    """
    if phi is None:
        phi = build_phi0(invariants(system))
    omega = connection_form(system)
    return all(is_zero(residual) for residual in multiplier_residuals(M, phi, omega))


#
# Reports
#

class Degeneracy(enum.Enum):
    NONDEGENERATE = "nondegenerate combination found"
    DEGENERATE = "all combinations degenerate"
    UNDETERMINED = "undetermined"


@dataclass
class DegeneracyResult:
    verdict: Degeneracy
    coefficients: Optional[List[sympy.Rational]] = None   # the witness c
    point: Optional[Dict] = None
    determinant: Optional[sympy.Expr] = None               # det M(c) at the witness
    polynomial: Optional[sympy.Expr] = None                # det(sum c_i M_i) for a constant basis

    def to_document(self) -> Dict[str, Any]:
        document = {"verdict": self.verdict.value}
        if self.coefficients is not None:
            document["witness"] = [to_string(c) for c in self.coefficients]
        if self.point:
            document["point"] = {str(k): to_string(v) for k, v in self.point.items()}
        if self.determinant is not None:
            document["determinant"] = to_string(self.determinant)
        if self.polynomial is not None:
            document["determinant_polynomial"] = to_string(self.polynomial)
        return document


@dataclass
class MultiplierReport:
    system: FGordonSystem
    stabilized_stage: int
    rank: int
    dimension: int
    basis: List[Matrix]
    closed_form: bool
    degeneracy: Optional[DegeneracyResult]
    sample_points: List[Dict]
    stage_ranks: List[int]
    phi: PhiSystem
    seed: int
    degree_cap: int
    warnings: List[str] = field(default_factory=list)

    def to_document(self) -> Dict[str, Any]:
        return {
            "system": self.system.to_document(),
            "dimension": self.dimension,
            "rank": self.rank,
            "stage": self.stabilized_stage,
            "stage_ranks": self.stage_ranks,
            "basis": [[[to_string(e) for e in row] for row in M] for M in self.basis],
            "closed_form": self.closed_form,
            "degeneracy": self.degeneracy.to_document() if self.degeneracy else None,
            "phi_rows": [row.to_document() for row in self.phi.rows],
            "sample_points": [{str(k): to_string(v) for k, v in point.items()} for point in self.sample_points],
            "warnings": list(self.warnings),
            "seed": self.seed,
            "degree_cap": self.degree_cap,
        }


def stabilize(system: FGordonSystem, seed: int = defaults.DEFAULT_SEED, samples: int = defaults.SAMPLE_COUNT,
              degree_cap: int = defaults.DEGREE_CAP) -> MultiplierReport:
    """
    Augment Phi until its generic rank stops growing; report the dimension of the multiplier space and a basis.

    >>> from varmult.fgordon import FGordonSystem
    >>> report = stabilize(FGordonSystem.from_strings(["v", "u"]))
    >>> report.dimension, report.stabilized_stage, report.basis
    (2, 0, [((0, 1), (1, 0)), ((1, 0), (0, 1))])
    >>> report = stabilize(FGordonSystem.from_strings(["v", "x*u"]))
    >>> report.dimension, report.stage_ranks, report.basis
    (1, [1, 2], [((0, 1), (1, 0))])
    >>> report = stabilize(FGordonSystem.from_strings(["v", "u_x"]))
    >>> report.dimension, report.stabilized_stage, [row.provenance for row in report.phi.rows]
    (0, 2, ['H-K[1,2]:1', 'dy(row 1)', 'dy(row 2)'])
    """
    system.require_normal_form()
    jet, m = system.jet, system.m
    n = unknown_count(m)
    omega = connection_form(system)
    phi = build_phi0(invariants(system))
    current = generic_rank(phi, jet, seed, samples)
    stage_ranks = [current.rank]
    warnings = list(current.warnings)
    logger.info("%s: stage 0 has %d rows of rank %d", system, len(phi), current.rank)
    while current.rank < n and phi.frontier:
        if phi.stage > n:
            raise InternalInconsistencyError(f"Rank of Phi still grows after {phi.stage} stages for {system}")
        candidate = augment(phi, omega)
        if len(candidate) == len(phi):
            break
        following = generic_rank(candidate, jet, seed, samples)
        stage_ranks.append(following.rank)
        logger.info("%s: stage %d has %d rows of rank %d", system, candidate.stage, len(candidate), following.rank)
        if following.rank < current.rank:
            raise InternalInconsistencyError(f"Rank of Phi decreased from {current.rank} to {following.rank}")
        if following.rank == current.rank:
            break
        phi, current = candidate, following
        warnings += [w for w in following.warnings if w not in warnings]
    dimension = n - current.rank
    values, exact = _evaluate_rows(phi.matrix(), current.base_point)
    pointwise = [matrix_from_vector(v, m) for v in _nullspace(values, n, exact)] if dimension > 0 else []
    if len(pointwise) != dimension:
        raise InternalInconsistencyError(f"Nullspace at the base point has dimension {len(pointwise)}, expected {dimension}")
    report = MultiplierReport(system, phi.stage, current.rank, dimension, pointwise, False, None,
                              current.points, stage_ranks, phi, seed, degree_cap, warnings)
    if dimension > 0:
        closed = reconstruct_solutions(report, phi, omega, degree_cap)
        if closed:
            report.basis, report.closed_form = closed, True
        else:
            message = "dimension known, closed form not found"
            logger.warning("%s: %s (degree cap %d)", system, message, degree_cap)
            report.warnings.append(message)
            # the pointwise values at the base point
            report.basis = [tuple(tuple(sympy.Rational(e) for e in row) for row in M) for M in pointwise]
        report.degeneracy = degeneracy_probe(report.basis, jet, seed, samples)
    logger.info("%s: multiplier dimension %d (rank %d, stage %d)", system, dimension, current.rank, phi.stage)
    return report


def ansatz_basis(system: FGordonSystem, degree: int) -> List[sympy.Expr]:
    """
    Monomials in (x, y, u) of total degree at most `degree`, each also multiplied by every
    opaque-function atom of the normal-form coefficients.

    >>> ansatz_basis(FGordonSystem.from_strings(["u"]), 1)
    [1, x, y, u]
    >>> ansatz_basis(FGordonSystem.from_strings(["exp(u)*u_x*u_y"]), 0)
    [1, exp(u)]
    """
    return monomial_basis(system.jet.base, degree, coefficient_atoms(system))


def coefficient_atoms(system: FGordonSystem) -> List[sympy.Expr]:
    """ The opaque-function atoms of the normal-form coefficients. """
    normal_form = system.require_normal_form()
    coefficients = [e for matrix in normal_form.C for row in matrix for e in row] + \
                   [e for row in normal_form.A for e in row] + [e for row in normal_form.B for e in row] + \
                   list(normal_form.E)
    return sorted(set().union(*(opaque_atoms(e) for e in coefficients)), key=sympy.default_sort_key)


def monomial_basis(symbols: Sequence[sympy.Symbol], degree: int, atoms: Sequence[sympy.Expr] = ()) -> List[sympy.Expr]:
    """
    >>> x, u = sympy.symbols("x u")
    >>> monomial_basis([x, u], 2)
    [1, x, u, x**2, u*x, u**2]
    """
    monomials = [sympy.Integer(1)]
    for total in range(1, degree + 1):
        for combination in itertools.combinations_with_replacement(symbols, total):
            monomials.append(sympy.Mul(*combination))
    return monomials + [monomial * atom for atom in atoms for monomial in monomials]


def reconstruct_solutions(report: MultiplierReport, phi: PhiSystem, omega: ConnectionForm,
                          degree_cap: int = defaults.DEGREE_CAP) -> List[Matrix]:
    """
    Closed-form multipliers spanning the space of dimension `report.dimension`, or [] if none is found.
    With Omega = 0 the multipliers are constant; otherwise a polynomial ansatz of growing degree is solved exactly.

    >>> from varmult.fgordon import FGordonSystem
    >>> from varmult.liealgebra import so3, lie_system
    >>> stabilize(lie_system(so3())).basis
    [((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    """
    system, m = report.system, phi.m
    if report.dimension == 0:
        return []
    if omega.is_zero():
        candidates = [tuple(tuple(sympy.Rational(e) for e in row) for row in M) for M in report.basis]
        if all(all(is_zero(residual) for residual in multiplier_residuals(M, phi, omega)) for M in candidates):
            return candidates
        logger.info("Constant candidates fail the conditions; trying the ansatz")
    n = unknown_count(m)
    variables = list(system.jet.base)
    for degree in range(degree_cap + 1):
        basis = ansatz_basis(system, degree)
        size = len(basis)
        ncols = n * size
        functions = [[sympy.Integer(0)] * ncols for _ in range(n)]
        for column in range(n):
            for k, function in enumerate(basis):
                functions[column][column * size + k] = function
        equations = linalg.LinearSystem(ncols)
        for row in phi.rows:
            columns = [normalize(sum((row.coefficients[c] * functions[c][j] for c in range(n)), sympy.Integer(0)))
                       for j in range(ncols)]
            equations.extend(linalg.identity_equations(columns, sympy.Integer(0), variables))
        # differential conditions, one unit ansatz coefficient at a time
        per_column = []
        for j in range(ncols):
            M = matrix_from_vector([functions[c][j] for c in range(n)], m)
            per_column.append([residual for _, _, _, residual in differential_conditions(M, omega)])
        for index in range(len(per_column[0]) if per_column else 0):
            columns = [per_column[j][index] for j in range(ncols)]
            equations.extend(linalg.identity_equations(columns, sympy.Integer(0), variables))
        solutions = equations.nullspace()
        logger.info("Ansatz of degree %d: %d unknowns, %d equations, %d solutions",
                    degree, ncols, len(equations.rows), len(solutions))
        if len(solutions) > report.dimension:
            raise InternalInconsistencyError(
                f"Ansatz found {len(solutions)} independent multipliers but the dimension is {report.dimension}")
        if len(solutions) < report.dimension:
            continue
        result = []
        for solution in solutions:
            vector = [normalize(sum((solution[j] * functions[c][j] for j in range(ncols)), sympy.Integer(0)))
                      for c in range(n)]
            M = matrix_from_vector(vector, m)
            if not all(is_zero(residual) for residual in multiplier_residuals(M, phi, omega)):
                raise InternalInconsistencyError(f"Reconstructed multiplier {M} fails the multiplier conditions")
            result.append(M)
        return result
    return []


def degeneracy_probe(basis: Sequence[Matrix], jet: JetSpace, seed: int = defaults.DEFAULT_SEED,
                     samples: int = defaults.SAMPLE_COUNT) -> DegeneracyResult:
    """
    Look for a combination sum c_i M_i with nonzero determinant.

    >>> jet = JetSpace(["u", "v"])
    >>> probe = degeneracy_probe([((1, 0), (0, 1)), ((0, 1), (1, 0))], jet)
    >>> probe.verdict, probe.coefficients, probe.polynomial
    (<Degeneracy.NONDEGENERATE: 'nondegenerate combination found'>, [1, 0], c1**2 - c2**2)
    >>> degeneracy_probe([((1, 0), (0, 0))], jet).verdict
    <Degeneracy.DEGENERATE: 'all combinations degenerate'>
    """
    s = len(basis)
    if s == 0:
        return DegeneracyResult(Degeneracy.UNDETERMINED)
    m = len(basis[0])
    symbols = sympy.symbols(f"c1:{s + 1}")
    combined = sympy.Matrix(m, m, lambda a, b: sum((symbols[i] * sympy.sympify(basis[i][a][b]) for i in range(s)),
                                                     sympy.Integer(0)))
    constant = all(not sympy.sympify(e).free_symbols for M in basis for row in M for e in row)
    polynomial = sympy.expand(combined.det(method="berkowitz")) if constant else None
    rng = np.random.default_rng(seed)
    all_exact = True
    trials = m * s + 1
    for trial in range(trials):
        if trial < s:
            coefficients = [sympy.Integer(1) if i == trial else sympy.Integer(0) for i in range(s)]
        else:
            coefficients = [sympy.Integer(int(rng.integers(-10, 11))) for _ in range(s)]
        M = combined.subs(dict(zip(symbols, coefficients)))
        try:
            point, (values, exact) = _sample(jet.base, 1, int(rng.integers(0, 2**31)),
                                             lambda z: _evaluate_rows(M.tolist(), z))[0]
        except PoleError:
            all_exact = False
            continue
        if exact:
            determinant = linalg.determinant(values)
            if determinant != 0:
                return DegeneracyResult(Degeneracy.NONDEGENERATE, coefficients, point, determinant, polynomial)
        else:
            all_exact = False
            if linalg.numeric_rank(values, m) == m:
                determinant = sympy.Matrix(values).det()
                return DegeneracyResult(Degeneracy.NONDEGENERATE, coefficients, point, determinant, polynomial)
    if polynomial is not None:
        verdict = Degeneracy.DEGENERATE if polynomial == 0 else Degeneracy.UNDETERMINED
        return DegeneracyResult(verdict, polynomial=polynomial)
    return DegeneracyResult(Degeneracy.DEGENERATE if all_exact else Degeneracy.UNDETERMINED)


def dense_dimension(system: FGordonSystem, seed: int = defaults.DEFAULT_SEED,
                    samples: int = defaults.ORACLE_SAMPLE_COUNT) -> int:
    """
    An independent count of the multiplier dimension: every nonzero row is kept and differentiated
    at every stage, without deduplication, and ranks are taken at fresh points.

    >>> from varmult.fgordon import FGordonSystem
    >>> dense_dimension(FGordonSystem.from_strings(["v", "x*u"]))
    1
    """
    jet, m = system.jet, system.m
    n = unknown_count(m)
    omega = connection_form(system)
    rows = []
    for N, _ in _algebraic_conditions(invariants(system)):
        row = _project(N, m)
        if any(e != 0 for e in row):
            rows.append(row)
    oracle_seed = seed + 1

    def rank_of(current_rows) -> int:
        if not current_rows:
            return 0
        sampled = _sample(jet.base, samples, oracle_seed, lambda point: _evaluate_rows(current_rows, point))
        return max(_rank(values, n, exact) for _, (values, exact) in sampled)

    rank = rank_of(rows)
    for stage in range(1, n + 2):
        if rank == n or not rows:
            break
        derived = [_differentiate(row, direction, omega) for row in rows for direction in jet.directions]
        following = rows + [row for row in derived if any(e != 0 for e in row)]
        following_rank = rank_of(following)
        logger.debug("Oracle stage %d: %d rows, rank %d", stage, len(following), following_rank)
        if following_rank == rank:
            break
        rows, rank = following, following_rank
    return n - rank


if __name__ == "__main__":
    import doctest
    print(doctest.testmod())
