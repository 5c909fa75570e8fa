"""
Exact linear algebra over the rationals, built on sympy's DomainMatrix over QQ
(fraction-free elimination, Bareiss determinants, sparse storage).

Also contains the numeric companion used when matrix entries come from
evaluating opaque functions, and the reduction of polynomial identities
to linear equations used by the ansatz solvers.

Author: Erel Segal-Halevi
Since: 2024-03
"""

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import sympy
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from varmult import defaults
from varmult.symbolic.expressions import normalize, opaque_atoms

import logging
logger = logging.getLogger(__name__)

Row = Union[Sequence, Mapping[int, object]]


def _items(row: Row):
    if isinstance(row, Mapping):
        return row.items()
    return enumerate(row)


def domain_matrix(rows: Sequence[Row], ncols: int) -> DomainMatrix:
    """
    A sparse DomainMatrix over QQ; rows are sequences or {column: value} maps.

    >>> domain_matrix([[1, 2], {1: sympy.Rational(1, 2)}], 2).to_Matrix().tolist()
    [[1, 2], [0, 1/2]]
    """
    elements: Dict[int, Dict[int, object]] = {}
    for i, row in enumerate(rows):
        converted = {}
        for j, value in _items(row):
            value = sympy.Rational(value)
            if value != 0:
                if not 0 <= j < ncols:
                    raise ValueError(f"Column {j} out of range 0..{ncols-1}")
                converted[j] = QQ.from_sympy(value)
        if converted:
            elements[i] = converted
    return DomainMatrix(elements, (len(rows), ncols), QQ)


def _rref(rows: Sequence[Row], ncols: int) -> Tuple[Dict[int, Dict[int, object]], Tuple[int, ...]]:
    if len(rows) == 0 or ncols == 0:
        return {}, ()
    reduced, pivots = domain_matrix(rows, ncols).rref()
    return dict(reduced.to_sparse().rep), tuple(pivots)


def rank(rows: Sequence[Row], ncols: int) -> int:
    """
    >>> rank([[1, 0, -1], [-1, 0, 1]], 3)
    1
    >>> rank([], 3)
    0
    """
    if len(rows) == 0 or ncols == 0:
        return 0
    return domain_matrix(rows, ncols).rank()


def _primitive(vector: List[sympy.Rational]) -> List[sympy.Rational]:
    denominators = [v.q for v in vector if v != 0]
    multiplier = sympy.ilcm(*denominators) if len(denominators) > 1 else (denominators[0] if denominators else 1)
    return [v * multiplier for v in vector]


def nullspace(rows: Sequence[Row], ncols: int) -> List[List[sympy.Rational]]:
    """
    A basis of the rational nullspace, one vector per free column, with integer entries.

    >>> nullspace([[1, 0, -1]], 3)
    [[0, 1, 0], [1, 0, 1]]
    >>> nullspace([], 2)
    [[1, 0], [0, 1]]
    >>> nullspace([[1, 2], [3, 4]], 2)
    []
    """
    reduced, pivots = _rref(rows, ncols)
    pivot_rows = {}
    for i, p in enumerate(pivots):
        pivot_rows[p] = reduced.get(i, {})
    basis = []
    for free in range(ncols):
        if free in pivot_rows:
            continue
        vector = [sympy.Integer(0)] * ncols
        vector[free] = sympy.Integer(1)
        for p, row in pivot_rows.items():
            if free in row:
                vector[p] = -QQ.to_sympy(row[free])
        basis.append(_primitive(vector))
    return basis


def solve_affine(rows: Sequence[Row], rhs: Sequence, ncols: int) -> Optional[List[sympy.Rational]]:
    """
    A particular solution of rows·v = rhs (free variables set to zero), or None if inconsistent.

    >>> solve_affine([[1, 1], [1, -1]], [3, 1], 2)
    [2, 1]
    >>> solve_affine([[1, 1], [2, 2]], [1, 3], 2) is None
    True
    >>> solve_affine([], [], 2)
    [0, 0]
    """
    augmented = []
    for row, value in zip(rows, rhs):
        entries = dict(_items(row))
        entries[ncols] = value
        augmented.append(entries)
    solution = [sympy.Integer(0)] * ncols
    if not augmented:
        return solution
    reduced, pivots = _rref(augmented, ncols + 1)
    if ncols in pivots:
        return None
    for i, p in enumerate(pivots):
        value = reduced.get(i, {}).get(ncols)
        if value is not None:
            solution[p] = QQ.to_sympy(value)
    return solution


def determinant(matrix: Sequence[Sequence]) -> sympy.Rational:
    """
    >>> determinant([[0, 1], [1, 0]])
    -1
    >>> determinant([])
    1
    """
    n = len(matrix)
    if n == 0:
        return sympy.Integer(1)
    return QQ.to_sympy(domain_matrix(matrix, n).to_dense().det())


#
# Numeric companion for entries obtained from opaque-function evaluation.
#

def _tolerance(digits: int):
    threshold = sympy.Float(10, digits) ** (-(digits // 2))
    return lambda value: abs(value) < threshold


def _scaled_float_matrix(rows: Sequence[Sequence], digits: int) -> sympy.Matrix:
    scaled = []
    for row in rows:
        floats = [sympy.Float(sympy.Rational(v), digits) for v in row]
        largest = max((abs(v) for v in floats), default=0)
        scaled.append([v / largest for v in floats] if largest != 0 else floats)
    return sympy.Matrix(scaled)


def numeric_rank(rows: Sequence[Sequence], ncols: int, digits: int = defaults.EVALUATION_DIGITS) -> int:
    """
    Rank of a matrix of approximate values: rows are scaled to unit max-norm and
    pivots smaller than 10^(-digits/2) count as zero.

    >>> third = sympy.Rational(1, 3)
    >>> numeric_rank([[third, 1], [1, 3]], 2)
    1
    """
    if len(rows) == 0 or ncols == 0:
        return 0
    return _scaled_float_matrix(rows, digits).rank(iszerofunc=_tolerance(digits))


def numeric_nullspace(rows: Sequence[Sequence], ncols: int, digits: int = defaults.EVALUATION_DIGITS) -> List[List[sympy.Rational]]:
    """ An approximate nullspace basis, rounded to nearby rationals. """
    if len(rows) == 0:
        return nullspace([], ncols)
    vectors = _scaled_float_matrix(rows, digits).nullspace(iszerofunc=_tolerance(digits))
    return [[sympy.Rational(v).limit_denominator(10**12) for v in vector] for vector in vectors]


#
# Polynomial identities
#

@dataclass
class LinearSystem:
    """ Sparse equations rows[k]·c = rhs[k] in `ncols` unknowns. """
    ncols: int
    rows: List[Dict[int, sympy.Rational]] = field(default_factory=list)
    rhs: List[sympy.Rational] = field(default_factory=list)

    def extend(self, other: "LinearSystem"):
        if other.ncols != self.ncols:
            raise ValueError("Cannot combine systems with different unknowns")
        self.rows += other.rows
        self.rhs += other.rhs

    def solve(self) -> Optional[List[sympy.Rational]]:
        return solve_affine(self.rows, self.rhs, self.ncols)

    def nullspace(self) -> List[List[sympy.Rational]]:
        return nullspace(self.rows, self.ncols)


def identity_equations(columns: Sequence[sympy.Expr], constant: sympy.Expr,
                       variables: Sequence[sympy.Symbol]) -> LinearSystem:
    """
    The linear equations on unknowns c that make  sum_i c_i*columns[i] + constant
    vanish identically as a rational function of `variables`.
    Opaque-function applications are treated as independent variables.

    >>> x, y = sympy.symbols("x y")
    >>> system = identity_equations([x, 1, x], -2*x - 3, [x, y])
    >>> system.rows, system.rhs
    ([{0: 1, 2: 1}, {1: 1}], [2, 3])
    >>> system.solve()
    [2, 3, 0]
    >>> identity_equations([sympy.exp(x)], -2*sympy.exp(x), [x]).solve()
    [2]
    >>> identity_equations([1/x], -1/(x*(x + 1)), [x]).solve() is None
    True
    """
    parts = [normalize(column) for column in columns] + [normalize(constant)]
    atoms = sorted(set().union(*(opaque_atoms(p) for p in parts)), key=sympy.default_sort_key)
    placeholders = [sympy.Symbol(f"_atom{i}") for i in range(len(atoms))]
    mapping = dict(zip(atoms, placeholders))
    generators = list(variables) + placeholders
    numerators, denominators = [], []
    for part in parts:
        if part == 0:
            numerators.append(None)
            denominators.append(None)
            continue
        numerator, denominator = sympy.fraction(part.xreplace(mapping))
        try:
            numerators.append(sympy.Poly(numerator, *generators, domain=QQ))
            denominators.append(sympy.Poly(denominator, *generators, domain=QQ))
        except sympy.polys.polyerrors.BasePolynomialError as error:
            raise ValueError(f"{part} is not a rational function of {generators}") from error
    common = sympy.Poly(1, *generators, domain=QQ)
    for denominator in denominators:
        if denominator is not None:
            common = common.lcm(denominator)
    equations: Dict[tuple, Dict[int, sympy.Rational]] = {}
    constants: Dict[tuple, sympy.Rational] = {}
    for index, (numerator, denominator) in enumerate(zip(numerators, denominators)):
        if numerator is None or numerator.is_zero:
            continue
        scaled = numerator * common.exquo(denominator)
        for monomial, coefficient in scaled.terms():
            coefficient = QQ.to_sympy(coefficient)
            if index == len(columns):
                constants[monomial] = constants.get(monomial, 0) + coefficient
            else:
                equations.setdefault(monomial, {})[index] = coefficient
    result = LinearSystem(len(columns))
    for monomial in sorted(set(equations) | set(constants), reverse=True):
        row = equations.get(monomial, {})
        value = -constants.get(monomial, sympy.Integer(0))
        if not row and value == 0:
            continue
        result.rows.append(row)
        result.rhs.append(value)
    logger.debug("Identity in %s: %d equations, %d unknowns", generators, len(result.rows), result.ncols)
    return result


if __name__ == "__main__":
    import doctest
    print(doctest.testmod())
