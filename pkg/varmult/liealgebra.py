"""
Lie algebras given by rational structure constants C^a_bc, and the f-Gordon system

    u^a_xy + C^a_bc u^b_x u^c_y = 0

whose multipliers are the constant bi-invariant forms M_ac C^c_be + M_bc C^c_ae = 0.

Author: Erel Segal-Halevi
Since: 2024-04
"""

import itertools
from fractions import Fraction
from typing import Any, Dict, List, Sequence

import sympy

from varmult import linalg
from varmult.fgordon import DocumentError, FGordonSystem
from varmult.lagrangians import Lagrangian
from varmult.multipliers import matrix_from_vector, unknown_count, _column_index
from varmult.symbolic.jet import JetSpace

import logging
logger = logging.getLogger(__name__)


def _rational(value) -> sympy.Rational:
    """
    >>> _rational("3/4"), _rational(2), _rational("0.5")
    (3/4, 2, 1/2)
    """
    if isinstance(value, str):
        try:
            return sympy.Rational(Fraction(value.strip()))
        except ValueError:
            raise DocumentError(f"Structure constants must be rational, got {value!r}") from None
    if isinstance(value, float):
        return sympy.Rational(Fraction(str(value)))
    return sympy.Rational(value)


class StructureConstants:
    """
    The structure constants c[a][b][e] = C^a_be, so that [e_b, e_e] = C^a_be e_a (indices 0-based here).

    >>> so3().m
    3
    >>> StructureConstants([[[0, 1], [0, 0]], [[0, 0], [0, 0]]])
    Traceback (most recent call last):
    ...
    ValueError: Structure constants are not antisymmetric: C^1_12 = 1 but C^1_21 = 0
    """

    def __init__(self, c: Sequence, name: str = None):
        m = len(c)
        if m == 0:
            raise ValueError("A Lie algebra needs positive dimension")
        self.m = m
        self.name = name
        self.c = tuple(tuple(tuple(_rational(c[a][b][e]) for e in range(m)) for b in range(m)) for a in range(m))
        for a, b, e in itertools.product(range(m), repeat=3):
            if self.c[a][b][e] != -self.c[a][e][b]:
                raise ValueError(f"Structure constants are not antisymmetric: "
                                 f"C^{a+1}_{b+1}{e+1} = {self.c[a][b][e]} but C^{a+1}_{e+1}{b+1} = {self.c[a][e][b]}")
        violation = self.jacobi_violation()
        if violation is not None:
            raise ValueError(f"Structure constants violate the Jacobi identity at indices {violation}")

    def jacobi_violation(self):
        """ The first 1-based (a, b, c, d) where the Jacobi identity fails, or None. """
        m, C = self.m, self.c
        for a, b, c, d in itertools.product(range(m), repeat=4):
            total = sum(C[s][b][c] * C[a][s][d] + C[s][c][d] * C[a][s][b] + C[s][d][b] * C[a][s][c]
                        for s in range(m))
            if total != 0:
                return (a + 1, b + 1, c + 1, d + 1)
        return None

    def bracket(self, x: Sequence, y: Sequence) -> List[sympy.Rational]:
        """
        >>> so3().bracket([1, 0, 0], [0, 1, 0])
        [0, 0, 1]
        """
        m = self.m
        return [sum((self.c[a][b][e] * x[b] * y[e] for b in range(m) for e in range(m)), sympy.Integer(0))
                for a in range(m)]

    @classmethod
    def from_brackets(cls, m: int, brackets: Sequence[Dict[str, Any]], name: str = None) -> "StructureConstants":
        """
        Brackets [e_i, e_j] = sum coeffs[a] e_a with 1-based i, j; antisymmetry is completed.

        >>> nonabelian = StructureConstants.from_brackets(2, [{"i": 1, "j": 2, "coeffs": [1, 0]}])
        >>> nonabelian.bracket([0, 1], [1, 0])
        [-1, 0]
        """
        c = [[[sympy.Integer(0)] * m for _ in range(m)] for _ in range(m)]
        seen = set()
        for entry in brackets:
            try:
                i, j, coefficients = int(entry["i"]), int(entry["j"]), entry["coeffs"]
            except (KeyError, TypeError):
                raise DocumentError("Every bracket needs the keys 'i', 'j' and 'coeffs'") from None
            if not (1 <= i <= m and 1 <= j <= m):
                raise DocumentError(f"Bracket indices ({i}, {j}) out of range 1..{m}")
            if len(coefficients) != m:
                raise DocumentError(f"Bracket [{i}, {j}] needs {m} coefficients, got {len(coefficients)}")
            if i == j:
                if any(_rational(v) != 0 for v in coefficients):
                    raise DocumentError(f"[e{i}, e{i}] must vanish")
                continue
            if (i, j) in seen or (j, i) in seen:
                raise DocumentError(f"Bracket [{i}, {j}] is given twice")
            seen.add((i, j))
            for a, value in enumerate(coefficients):
                value = _rational(value)
                c[a][i - 1][j - 1] = value
                c[a][j - 1][i - 1] = -value
        return cls(c, name)

    @classmethod
    def from_document(cls, document: Dict[str, Any]) -> "StructureConstants":
        if not isinstance(document, dict) or "m" not in document:
            raise DocumentError("A structure-constant document needs the key 'm'")
        m = document["m"]
        if not isinstance(m, int) or m < 1:
            raise DocumentError(f"'m' must be a positive integer, got {m!r}")
        try:
            return cls.from_brackets(m, document.get("brackets", []), document.get("name"))
        except DocumentError:
            raise
        except ValueError as error:
            raise DocumentError(str(error)) from None

    def to_document(self) -> Dict[str, Any]:
        brackets = []
        for i in range(self.m):
            for j in range(i + 1, self.m):
                coefficients = [self.c[a][i][j] for a in range(self.m)]
                if any(v != 0 for v in coefficients):
                    brackets.append({"i": i + 1, "j": j + 1, "coeffs": [str(v) for v in coefficients]})
        document = {"m": self.m, "brackets": brackets}
        if self.name:
            document["name"] = self.name
        return document

    def __repr__(self):
        return f"StructureConstants({self.name or self.to_document()})"


#
# Named algebras
#

def abelian(m: int) -> StructureConstants:
    return StructureConstants([[[0] * m for _ in range(m)] for _ in range(m)], f"abelian{m}")


def so3() -> StructureConstants:
    """ [e_i, e_j] = e_k for cyclic (i, j, k). """
    return StructureConstants.from_brackets(3, [
        {"i": 1, "j": 2, "coeffs": [0, 0, 1]},
        {"i": 2, "j": 3, "coeffs": [1, 0, 0]},
        {"i": 3, "j": 1, "coeffs": [0, 1, 0]},
    ], "so3")


def nonabelian2() -> StructureConstants:
    """ [e_1, e_2] = e_1. """
    return StructureConstants.from_brackets(2, [{"i": 1, "j": 2, "coeffs": [1, 0]}], "nonabelian2")


def heisenberg(n: int = 1) -> StructureConstants:
    """
    The (2n+1)-dimensional Heisenberg algebra [p_i, q_i] = z.

    >>> heisenberg(1).bracket([1, 0, 0], [0, 1, 0])
    [0, 0, 1]
    """
    m = 2 * n + 1
    brackets = []
    for i in range(n):
        coefficients = [0] * m
        coefficients[m - 1] = 1
        brackets.append({"i": i + 1, "j": n + i + 1, "coeffs": coefficients})
    return StructureConstants.from_brackets(m, brackets, f"heisenberg{m}")


def solvable4() -> StructureConstants:
    """
    The algebra of 3x3 matrices with zero first column and zero last row,
    with basis E12, E13, E22, E23: [e1,e3] = e1, [e1,e4] = e2, [e3,e4] = e4.
    """
    return StructureConstants.from_brackets(4, [
        {"i": 1, "j": 3, "coeffs": [1, 0, 0, 0]},
        {"i": 1, "j": 4, "coeffs": [0, 1, 0, 0]},
        {"i": 3, "j": 4, "coeffs": [0, 0, 0, 1]},
    ], "solvable4")


def semidirect(D: Sequence[Sequence]) -> StructureConstants:
    """
    One generator e_0 acting on an abelian ideal spanned by e_1..e_n through the matrix D:
    [e_0, e_j] = sum_i D[i][j] e_i.

    >>> semidirect([[1]]).bracket([1, 0], [0, 1])
    [0, 1]
    """
    n = len(D)
    m = n + 1
    brackets = []
    for j in range(n):
        coefficients = [0] + [D[i][j] for i in range(n)]
        brackets.append({"i": 1, "j": j + 2, "coeffs": coefficients})
    return StructureConstants.from_brackets(m, brackets, "semidirect")


#
# Forms
#

def killing_form(sc: StructureConstants) -> List[List[sympy.Rational]]:
    """
    K_ab = sum C^s_at C^t_bs.

    >>> killing_form(so3())
    [[-2, 0, 0], [0, -2, 0], [0, 0, -2]]
    >>> killing_form(abelian(2))
    [[0, 0], [0, 0]]
    """
    m, C = sc.m, sc.c
    return [[sum((C[s][a][t] * C[t][b][s] for s in range(m) for t in range(m)), sympy.Integer(0))
             for b in range(m)] for a in range(m)]


def _biinvariance_rows(sc: StructureConstants) -> List[Dict[int, sympy.Rational]]:
    """ The rows of M_ac C^c_be + M_bc C^c_ae = 0 over the symmetric unknowns, for a <= b and every e. """
    m, C = sc.m, sc.c
    columns = _column_index(m)
    rows = []
    for a in range(m):
        for b in range(a, m):
            for e in range(m):
                row: Dict[int, sympy.Rational] = {}
                for first, second in ((a, b), (b, a)):
                    for c in range(m):
                        if C[c][second][e] != 0:
                            column = columns[min(first, c), max(first, c)]
                            row[column] = row.get(column, sympy.Integer(0)) + C[c][second][e]
                row = {k: v for k, v in row.items() if v != 0}
                if row:
                    rows.append(row)
    return rows


def biinvariant_forms(sc: StructureConstants) -> List[tuple]:
    """
    A basis of the symmetric bi-invariant forms.

    >>> biinvariant_forms(so3())
    [((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    >>> len(biinvariant_forms(abelian(3)))
    6
    >>> biinvariant_forms(nonabelian2())
    [((0, 0), (0, 1))]
    """
    vectors = linalg.nullspace(_biinvariance_rows(sc), unknown_count(sc.m))
    logger.debug("%s has %d bi-invariant forms", sc, len(vectors))
    return [matrix_from_vector(v, sc.m) for v in vectors]


def is_biinvariant(M: Sequence[Sequence], sc: StructureConstants) -> bool:
    """
    >>> is_biinvariant(killing_form(so3()), so3())
    True
    >>> is_biinvariant([[1, 0], [0, 0]], nonabelian2())
    False
    """
    m, C = sc.m, sc.c
    if any(sympy.sympify(M[a][b]) != sympy.sympify(M[b][a]) for a in range(m) for b in range(m)):
        return False
    for a, b, e in itertools.product(range(m), repeat=3):
        total = sum((sympy.sympify(M[a][c]) * C[c][b][e] + sympy.sympify(M[b][c]) * C[c][a][e] for c in range(m)),
                    sympy.Integer(0))
        if total != 0:
            return False
    return True


def lie_system(sc: StructureConstants, names: Sequence[str] = None) -> FGordonSystem:
    """
    >>> lie_system(nonabelian2()).f
    (-u_x*v_y + u_y*v_x, 0)
    >>> lie_system(abelian(1)).f
    (0,)
    """
    jet = JetSpace(names) if names is not None else JetSpace.default(sc.m)
    m = sc.m
    f = [-sum((sc.c[a][b][e] * jet.u_x[b] * jet.u_y[e] for b in range(m) for e in range(m)), sympy.Integer(0))
         for a in range(m)]
    return FGordonSystem(f, jet, sc.name)


def lie_lagrangian(M: Sequence[Sequence], sc: StructureConstants, names: Sequence[str] = None) -> Lagrangian:
    """
    L = -(1/6) M_ab (3 u^a_x u^b_y - 2 C^a_et u^b u^e_x u^t_y) for a bi-invariant M.

    >>> lie_lagrangian([[1]], abelian(1))
    Lagrangian(-u_x*u_y/2)
    >>> lie_lagrangian([[1, 0], [0, 0]], nonabelian2())
    Traceback (most recent call last):
    ...
    ValueError: [[1, 0], [0, 0]] is not a bi-invariant form of nonabelian2
    """
    if not is_biinvariant(M, sc):
        raise ValueError(f"{[[sympy.sympify(e) for e in row] for row in M]} is not a bi-invariant form of {sc.name}")
    jet = JetSpace(names) if names is not None else JetSpace.default(sc.m)
    m, C = sc.m, sc.c
    total = sympy.Integer(0)
    for a in range(m):
        for b in range(m):
            inner = 3 * jet.u_x[a] * jet.u_y[b]
            for e in range(m):
                for t in range(m):
                    inner -= 2 * C[a][e][t] * jet.u[b] * jet.u_x[e] * jet.u_y[t]
            total += sympy.sympify(M[a][b]) * inner
    return Lagrangian(-total / 6, jet)


if __name__ == "__main__":
    import doctest
    print(doctest.testmod())
