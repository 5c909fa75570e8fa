"""
Classification of two-component systems

    u_xy = F(x, y, u, v, u_x, v_x, u_y, v_y),   v_xy = G(x, y, u, v, u_x, v_x, u_y, v_y)

by the number of independent Lagrangians they admit (three, two or at most one),
and covariance checks of the invariants under fiber-preserving affine changes of variables.

Author: Erel Segal-Halevi
Since: 2024-04
"""

import enum
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import sympy

from varmult import defaults, linalg
from varmult.fgordon import FGordonSystem, InternalInconsistencyError
from varmult.invariants import InvariantTriple, invariants
from varmult.multipliers import MultiplierReport, sampled_rank, stabilize
from varmult.symbolic.expressions import is_zero, normalize
from varmult.symbolic.parser import to_string

import logging
logger = logging.getLogger(__name__)


class Verdict(enum.Enum):
    THREE_LAGRANGIANS = "THREE_LAGRANGIANS"
    TWO_LAGRANGIANS = "TWO_LAGRANGIANS"
    AT_MOST_ONE = "AT_MOST_ONE"
    S_TRACE_OBSTRUCTED = "S_TRACE_OBSTRUCTED"
    NOT_NORMAL_FORM = "NOT_NORMAL_FORM"


class Subtype(enum.Enum):
    HARMONIC = "harmonic"               # W_uu + W_vv = 0
    WAVE = "wave"                       # W_uu = W_vv
    DEGENERATE = "degenerate-W_vv"      # W_vv = 0


REDUCIBLE_NOTE = "reducible: reduction not constructed"


@dataclass
class ClassificationVerdict:
    label: Verdict
    lagrangian_count: int
    subtype: Optional[Subtype] = None
    multiplier_dimension: Optional[int] = None
    rank_A: Optional[int] = None
    lambda_: Optional[sympy.Expr] = None
    witness: Optional[Tuple] = None
    residuals: List[sympy.Expr] = field(default_factory=list)   # entries of H - K
    notes: List[str] = field(default_factory=list)
    report: Optional[MultiplierReport] = None

    def __str__(self):
        return f"{self.label.value}({self.subtype.value})" if self.subtype else self.label.value

    def to_document(self) -> Dict[str, Any]:
        document = {
            "label": self.label.value,
            "verdict": str(self),
            "lagrangian_count": self.lagrangian_count,
            "multiplier_dimension": self.multiplier_dimension,
            "rank_A": self.rank_A,
            "subtype": self.subtype.value if self.subtype else None,
            "lambda": to_string(self.lambda_) if self.lambda_ is not None else None,
            "witness": [[to_string(e) for e in row] for row in self.witness] if self.witness is not None else None,
            "H_minus_K": [to_string(e) for e in self.residuals],
            "notes": list(self.notes),
        }
        if self.report is not None:
            document["multipliers"] = self.report.to_document()
        return document


def _require_two(m: int):
    if m != 2:
        raise ValueError(f"The classification applies to systems of two equations, got m={m}")


def build_A(inv: InvariantTriple) -> Tuple[Tuple[sympy.Expr, ...], ...]:
    """
    The 4x3 matrix of the conditions M H = (M K)^T on the unknowns (M11, M12, M22).

    >>> from varmult.fgordon import FGordonSystem
    >>> build_A(invariants(FGordonSystem.from_strings(["v", "u"])))
    ((0, 0, 0), (0, 0, 0), (1, 0, -1), (1, 0, -1))
    """
    _require_two(inv.jet.m)
    H = lambda c, a: inv.H[c - 1][a - 1]
    K = lambda c, a: inv.K[c - 1][a - 1]
    rows = [
        [H(1, 1) - K(1, 1), H(2, 1) - K(2, 1), 0],
        [0, H(1, 2) - K(1, 2), H(2, 2) - K(2, 2)],
        [H(1, 2), H(2, 2) - K(1, 1), -K(2, 1)],
        [K(1, 2), K(2, 2) - H(1, 1), -H(2, 1)],
    ]
    return tuple(tuple(normalize(e) for e in row) for row in rows)


def trace_obstruction(inv: InvariantTriple) -> bool:
    """
    True iff S^a_ac = 0 for every c; for two components this is equivalent to S = 0.

    >>> from varmult.fgordon import FGordonSystem
    >>> trace_obstruction(invariants(FGordonSystem.from_strings(["v", "u"])))
    True
    >>> trace_obstruction(invariants(FGordonSystem.from_strings(["-u_x*v_y", "0"])))
    False
    """
    m = inv.jet.m
    return all(is_zero(sum((inv.S[a][a][c] for a in range(m)), sympy.Integer(0))) for c in range(m))


def _determinant(M) -> sympy.Expr:
    return normalize(sympy.Matrix(M).det())


def indefinite_member(M1, M2) -> Optional[sympy.Matrix]:
    """
    A member of the pencil spanned by two constant symmetric 2x2 matrices with negative determinant, or None.

    >>> indefinite_member([[1, 0], [0, 1]], [[0, 1], [1, 0]])
    Matrix([
    [0, 1],
    [1, 0]])
    >>> indefinite_member([[1, 0], [0, 0]], [[2, 0], [0, 0]]) is None
    True
    """
    M1, M2 = sympy.Matrix(M1), sympy.Matrix(M2)
    if M1.det() < 0:
        return M1
    if M2.det() < 0:
        return M2
    mu = sympy.Symbol("mu")
    P = sympy.Poly(sympy.expand((M1 - mu * M2).det()), mu)
    if P.degree() < 1:
        return None
    endpoints = sorted(set(e for interval, _ in P.intervals() for e in interval))
    if not endpoints:
        return None
    candidates = [endpoints[0] - 1, endpoints[-1] + 1] + \
                 [(low + high) / 2 for low, high in zip(endpoints, endpoints[1:])] + endpoints
    for candidate in candidates:
        candidate = sympy.Rational(candidate)
        if P.eval(candidate) < 0:
            return M1 - candidate * M2
    return None


def two_lagrangian_subtype(basis: Sequence) -> Tuple[Optional[Subtype], Optional[sympy.Matrix]]:
    """
    The subtype of a two-dimensional constant multiplier space, from the sign of the
    discriminant of q(s, t) = det(s M1 + t M2), provided the space has an indefinite member.

    >>> two_lagrangian_subtype([[[0, -1], [-1, 0]], [[-2, 0], [0, 2]]])[0]
    <Subtype.HARMONIC: 'harmonic'>
    >>> two_lagrangian_subtype([[[0, 1], [1, 0]], [[1, 0], [0, 1]]])[0]
    <Subtype.WAVE: 'wave'>
    >>> two_lagrangian_subtype([[[-2, 0], [0, 0]], [[0, -1], [-1, 0]]])[0]
    <Subtype.DEGENERATE: 'degenerate-W_vv'>
    """
    if len(basis) != 2:
        return None, None
    if any(sympy.sympify(e).free_symbols for M in basis for row in M for e in row):
        return None, None
    witness = indefinite_member(basis[0], basis[1])
    if witness is None:
        return None, None
    s, t = sympy.symbols("s t")
    q = sympy.Poly(sympy.expand((s * sympy.Matrix(basis[0]) + t * sympy.Matrix(basis[1])).det()), s, t)
    q11, q12, q22 = q.coeff_monomial(s**2), q.coeff_monomial(s * t), q.coeff_monomial(t**2)
    discriminant = q12**2 - 4 * q11 * q22
    if discriminant > 0:
        return Subtype.WAVE, witness
    if discriminant < 0:
        return Subtype.HARMONIC, witness
    return Subtype.DEGENERATE, witness


def classify(system: FGordonSystem, seed: int = defaults.DEFAULT_SEED, samples: int = defaults.SAMPLE_COUNT,
             degree_cap: int = defaults.DEGREE_CAP) -> ClassificationVerdict:
    """
    Classify a two-component system by the number of its Lagrangians.

    >>> str(classify(FGordonSystem.from_strings(["x*y*u", "x*y*v"])))
    'THREE_LAGRANGIANS'
    >>> str(classify(FGordonSystem.from_strings(["v", "u"])))
    'TWO_LAGRANGIANS(wave)'
    >>> str(classify(FGordonSystem.from_strings(["v", "x*u"])))
    'AT_MOST_ONE'
    >>> str(classify(FGordonSystem.from_strings(["u_x^2", "v"])))
    'NOT_NORMAL_FORM'
    """
    _require_two(system.m)
    if system.refusal is not None:
        return ClassificationVerdict(Verdict.NOT_NORMAL_FORM, 0, notes=[system.refusal.reason])
    inv = invariants(system)
    report = stabilize(system, seed=seed, samples=samples, degree_cap=degree_cap)
    m = system.m
    residuals = [normalize(inv.H[c][a] - inv.K[c][a]) for c in range(m) for a in range(m)]
    if not trace_obstruction(inv):
        verdict = ClassificationVerdict(Verdict.S_TRACE_OBSTRUCTED, 0, residuals=residuals, report=report,
                                        multiplier_dimension=report.dimension,
                                        notes=["the trace of S does not vanish: no nondegenerate multiplier"])
    elif not inv.h_equals_k():
        verdict = ClassificationVerdict(Verdict.AT_MOST_ONE, report.dimension, residuals=residuals, report=report,
                                        multiplier_dimension=report.dimension)
    else:
        A = build_A(inv)
        rank_A = sampled_rank(A, 3, system.jet.first_order, seed, samples)
        H = inv.H
        if is_zero(H[0][1]) and is_zero(H[1][0]) and is_zero(H[0][0] - H[1][1]):
            lambda_ = H[0][0]
            if lambda_.free_symbols - {system.jet.x, system.jet.y}:
                raise InternalInconsistencyError(f"H = K = lambda*I with lambda = {lambda_} depending on u")
            if report.dimension != 3:
                raise InternalInconsistencyError(f"H = K = lambda*I but the multiplier dimension is {report.dimension}")
            verdict = ClassificationVerdict(Verdict.THREE_LAGRANGIANS, 3, multiplier_dimension=3, rank_A=rank_A,
                                            lambda_=lambda_, residuals=residuals, report=report)
        elif rank_A == 1 and report.dimension == 2:
            subtype, witness = two_lagrangian_subtype(report.basis) if report.closed_form else (None, None)
            verdict = ClassificationVerdict(Verdict.TWO_LAGRANGIANS, 2, subtype=subtype, multiplier_dimension=2,
                                            rank_A=rank_A, residuals=residuals, report=report,
                                            witness=tuple(tuple(row) for row in witness.tolist()) if witness is not None else None)
            if subtype is None:
                verdict.notes.append("no indefinite constant multiplier found: subtype not determined")
        else:
            verdict = ClassificationVerdict(Verdict.AT_MOST_ONE, report.dimension, multiplier_dimension=report.dimension,
                                            rank_A=rank_A, residuals=residuals, report=report)
        if inv.s_vanishes() and not system.is_gradient_free():
            verdict.notes.append(REDUCIBLE_NOTE)
    if verdict.label == Verdict.AT_MOST_ONE and report.dimension > 1:
        message = f"multiplier dimension {report.dimension} exceeds one although H != K or rank A > 1"
        logger.warning(message)
        verdict.notes.append(message)
    verdict.notes += report.warnings
    logger.info("%s: %s", system, verdict)
    return verdict


#
# Covariance
#

@dataclass(frozen=True)
class CoordinateChange:
    """ The change of variables x' = a x + b, y' = c y + d, u' = T u with a, c nonzero and T constant invertible. """
    a: sympy.Rational
    b: sympy.Rational
    c: sympy.Rational
    d: sympy.Rational
    T: Tuple[Tuple[sympy.Rational, ...], ...]

    def __post_init__(self):
        if sympy.Rational(self.a) == 0 or sympy.Rational(self.c) == 0:
            raise ValueError("The maps of x and y must be invertible (a and c nonzero)")
        if linalg.determinant(self.T) == 0:
            raise ValueError(f"The fiber map T = {self.T} is not invertible")

    @classmethod
    def of(cls, a=1, b=0, c=1, d=0, T=None, m: int = None) -> "CoordinateChange":
        if T is None:
            T = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
        T = tuple(tuple(sympy.Rational(e) for e in row) for row in T)
        return cls(sympy.Rational(a), sympy.Rational(b), sympy.Rational(c), sympy.Rational(d), T)

    @property
    def matrix(self) -> sympy.Matrix:
        return sympy.Matrix(self.T)

    def substitution(self, jet) -> Dict[sympy.Symbol, sympy.Expr]:
        """ The original coordinates in terms of the new ones. """
        inverse = self.matrix.inv()
        m = jet.m
        result = {jet.x: (jet.x - self.b) / self.a, jet.y: (jet.y - self.d) / self.c}
        families = [(jet.u, 1), (jet.u_x, self.a), (jet.u_y, self.c), (jet.u_xx, self.a**2),
                    (jet.u_yy, self.c**2), (jet.u_xy, self.a * self.c)]
        for symbols, factor in families:
            for i in range(m):
                result[symbols[i]] = factor * sum((inverse[i, j] * symbols[j] for j in range(m)), sympy.Integer(0))
        return result

    def apply(self, system: FGordonSystem) -> FGordonSystem:
        """
        The transformed system.

        >>> CoordinateChange.of(a=2, m=2).apply(FGordonSystem.from_strings(["v", "x*u"])).f
        (v/2, u*x/4)
        """
        jet, m = system.jet, system.m
        substitution = self.substitution(jet)
        original = [e.xreplace(substitution) for e in system.f]
        f = [sum((self.T[i][j] * original[j] for j in range(m)), sympy.Integer(0)) / (self.a * self.c)
             for i in range(m)]
        return FGordonSystem(f, jet, system.name)


def expected_invariants(inv: InvariantTriple, change: CoordinateChange) -> InvariantTriple:
    """ H, K and S of the transformed system as predicted by the transformation laws. """
    jet, m = inv.jet, inv.jet.m
    substitution = change.substitution(jet)
    T, inverse = change.matrix, change.matrix.inv()
    scale = 1 / (change.a * change.c)

    def conjugate(matrix):
        X = sympy.Matrix(m, m, lambda i, j: matrix[i][j].xreplace(substitution))
        Y = scale * T * X * inverse
        return tuple(tuple(normalize(Y[i, j]) for j in range(m)) for i in range(m))

    S = tuple(tuple(tuple(normalize(sum((T[a, s] * inverse[t, b] * inverse[e, c] * inv.S[s][t][e].xreplace(substitution)
                                         for s in range(m) for t in range(m) for e in range(m)), sympy.Integer(0)))
                          for c in range(m)) for b in range(m)) for a in range(m))
    return InvariantTriple(conjugate(inv.H), conjugate(inv.K), S, jet)


def covariance_check(system: FGordonSystem, change: CoordinateChange) -> bool:
    """
    Whether the invariants of the transformed system obey the transformation laws.

    >>> example1 = FGordonSystem.from_strings(["v", "u"])
    >>> covariance_check(example1, CoordinateChange.of(T=[[0, 1], [1, 0]]))
    True
    >>> covariance_check(FGordonSystem.from_strings(["v", "x*u"]), CoordinateChange.of(a=2, m=2))
    True
    """
    expected = expected_invariants(invariants(system), change)
    actual = invariants(change.apply(system))
    m = system.m
    pairs = [(actual.H[i][j], expected.H[i][j]) for i in range(m) for j in range(m)] + \
            [(actual.K[i][j], expected.K[i][j]) for i in range(m) for j in range(m)] + \
            [(actual.S[i][j][k], expected.S[i][j][k]) for i in range(m) for j in range(m) for k in range(m)]
    return all(is_zero(first - second) for first, second in pairs)


if __name__ == "__main__":
    import doctest
    print(doctest.testmod())
