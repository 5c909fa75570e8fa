"""
The generalized Laplace invariants H, K and the torsion-type invariant S of an f-Gordon system,
the connection form of its normal form, and the curvature of a connection Gamma(u).

    H^c_a = df^c/du^a + df^c/du^s_y df^s/du^a_x - D_x(df^c/du^a_x)
    K^c_a = df^c/du^a + df^c/du^s_x df^s/du^a_y - D_y(df^c/du^a_y)
    S^c_ab = d^2 f^c / du^b_x du^a_y - d^2 f^c / du^a_x du^b_y

Matrices are stored with the upper index first: H[c][a] = H^c_a, S[c][a][b] = S^c_ab.

Author: Erel Segal-Halevi
Since: 2024-03
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

import sympy

from varmult.fgordon import FGordonSystem, InternalInconsistencyError
from varmult.symbolic.jet import Coordinate, JetSpace, Kind
from varmult.symbolic.expressions import normalize, total_derivative, is_zero
from varmult.symbolic.parser import to_string

import logging
logger = logging.getLogger(__name__)


Matrix = Tuple[Tuple[sympy.Expr, ...], ...]
Monomial = Tuple[int, ...]


@dataclass(frozen=True)
class InvariantTriple:
    H: Matrix
    K: Matrix
    S: Tuple[Matrix, ...]
    jet: JetSpace

    def h_equals_k(self) -> bool:
        m = self.jet.m
        return all(is_zero(self.H[c][a] - self.K[c][a]) for c in range(m) for a in range(m))

    def s_vanishes(self) -> bool:
        return all(is_zero(e) for matrix in self.S for row in matrix for e in row)

    def to_document(self) -> Dict[str, Any]:
        return {
            "H": [[to_string(e) for e in row] for row in self.H],
            "K": [[to_string(e) for e in row] for row in self.K],
            "S": [[[to_string(e) for e in row] for row in matrix] for matrix in self.S],
        }


def invariants(system: FGordonSystem) -> InvariantTriple:
    """
    Compute H, K and S. Second-order coordinates are kept when the system is not in normal form.

    >>> example1 = invariants(FGordonSystem.from_strings(["v", "u"]))
    >>> example1.H, example1.K
    (((0, 1), (1, 0)), ((0, 1), (1, 0)))
    >>> example1.s_vanishes()
    True
    >>> example3 = invariants(FGordonSystem.from_strings(["v", "u_x"]))
    >>> example3.H
    ((0, 1), (0, 0))
    >>> invariants(FGordonSystem.from_strings(["-u_x*v_y", "0"])).S[0]
    ((0, 1), (-1, 0))
    >>> invariants(FGordonSystem.from_strings(["u_x^2"])).H
    ((-2*u_xx,),)
    """
    jet, m, f = system.jet, system.m, system.f
    D_x, D_y = Coordinate(Kind.X), Coordinate(Kind.Y)
    H, K = [], []
    for c in range(m):
        h_row, k_row = [], []
        for a in range(m):
            along_u = sympy.diff(f[c], jet.u[a])
            h = along_u - total_derivative(sympy.diff(f[c], jet.u_x[a]), D_x, system)
            k = along_u - total_derivative(sympy.diff(f[c], jet.u_y[a]), D_y, system)
            for s in range(m):
                h += sympy.diff(f[c], jet.u_y[s]) * sympy.diff(f[s], jet.u_x[a])
                k += sympy.diff(f[c], jet.u_x[s]) * sympy.diff(f[s], jet.u_y[a])
            h_row.append(normalize(h))
            k_row.append(normalize(k))
        H.append(tuple(h_row))
        K.append(tuple(k_row))
    S = tuple(
        tuple(tuple(normalize(sympy.diff(f[c], jet.u_x[b], jet.u_y[a]) - sympy.diff(f[c], jet.u_x[a], jet.u_y[b]))
                    for b in range(m)) for a in range(m))
        for c in range(m))
    result = InvariantTriple(tuple(H), tuple(K), S, jet)
    if system.normal_form is not None:
        second_order = set(jet.second_order)
        for matrix_name, matrix in (("H", result.H), ("K", result.K)):
            for row in matrix:
                for entry in row:
                    if entry.free_symbols & second_order:
                        raise InternalInconsistencyError(
                            f"{matrix_name} of the normal-form system {system} contains second-order terms: {entry}")
    logger.debug("Invariants of %s: H=%s K=%s", system, result.H, result.K)
    return result


def gradient_coefficients(expression: sympy.Expr, jet: JetSpace) -> Dict[Monomial, sympy.Expr]:
    """
    Split an expression that is polynomial in the gradients into {exponent vector: coefficient in (x, y, u)}.
    Exponent vectors follow `jet.gradients` (u1_x, u1_y, u2_x, ...); keys are ordered by total degree.

    >>> jet = JetSpace(["u", "v"])
    >>> gradient_coefficients(jet.u_x[0] * jet.u_y[1] + jet.x, jet)
    {(0, 0, 0, 0): x, (1, 0, 0, 1): 1}
    >>> gradient_coefficients(sympy.Integer(0), jet)
    {}
    >>> gradient_coefficients(sympy.exp(jet.u_x[0]), jet)
    Traceback (most recent call last):
    ...
    ValueError: exp(u_x) is not polynomial in the gradients
    """
    gradients = jet.gradients
    position = {g: i for i, g in enumerate(gradients)}
    numerator, denominator = sympy.fraction(normalize(expression))
    if denominator.free_symbols & set(gradients):
        raise ValueError(f"{expression} is not polynomial in the gradients")
    collected: Dict[Monomial, sympy.Expr] = {}
    for term in sympy.Add.make_args(sympy.expand(numerator)):
        if term == 0:
            continue
        coefficient, dependent = term.as_independent(*gradients, as_Add=False)
        exponents = [0] * len(gradients)
        for base, power in dependent.as_powers_dict().items():
            if base == 1:
                continue
            if base not in position or not (power.is_Integer and power > 0):
                raise ValueError(f"{expression} is not polynomial in the gradients")
            exponents[position[base]] += int(power)
        key = tuple(exponents)
        collected[key] = collected.get(key, sympy.Integer(0)) + coefficient
    result = {}
    for key in sorted(collected, key=lambda k: (sum(k), tuple(-e for e in k))):
        value = normalize(collected[key] / denominator)
        if value != 0:
            result[key] = value
    return result


def monomial_string(monomial: Monomial, jet: JetSpace) -> str:
    """
    >>> monomial_string((1, 0, 0, 1), JetSpace(["u", "v"]))
    'u_x*v_y'
    >>> monomial_string((0, 2), JetSpace(["u"]))
    'u_y^2'
    >>> monomial_string((0, 0), JetSpace(["u"]))
    '1'
    """
    factors = []
    for symbol, power in zip(jet.gradients, monomial):
        if power == 1:
            factors.append(symbol.name)
        elif power > 1:
            factors.append(f"{symbol.name}^{power}")
    return "*".join(factors) if factors else "1"


@dataclass(frozen=True)
class ConnectionForm:
    """
    Omega^s_a = C^s_at du^t + A^s_a dy + B^s_a dx, read off the normal form.
    """
    jet: JetSpace
    C: Tuple[Matrix, ...]
    A: Matrix
    B: Matrix

    def along(self, direction: Coordinate) -> Matrix:
        """ The component [s][a] of Omega along x, y or u^t. """
        if direction.kind == Kind.X:
            return self.B
        if direction.kind == Kind.Y:
            return self.A
        if direction.kind == Kind.U:
            t = direction.index - 1
            m = self.jet.m
            return tuple(tuple(self.C[s][a][t] for a in range(m)) for s in range(m))
        raise ValueError(f"Omega has no component along {direction}")

    def is_zero(self) -> bool:
        entries = [e for matrix in self.C for row in matrix for e in row] + \
                  [e for row in self.A for e in row] + [e for row in self.B for e in row]
        return all(e == 0 for e in entries)

    def to_document(self) -> Dict[str, Any]:
        document = {"x": [[to_string(e) for e in row] for row in self.B],
                    "y": [[to_string(e) for e in row] for row in self.A]}
        for index, name in enumerate(self.jet.names, start=1):
            document[name] = [[to_string(e) for e in row] for row in self.along(Coordinate(Kind.U, index))]
        return document


def connection_form(system: FGordonSystem) -> ConnectionForm:
    """
    >>> connection_form(FGordonSystem.from_strings(["v", "u"])).is_zero()
    True
    >>> omega = connection_form(FGordonSystem.from_strings(["v", "u_x"]))
    >>> omega.along(Coordinate(Kind.Y))
    ((0, 0), (-1, 0))
    """
    normal_form = system.require_normal_form()
    return ConnectionForm(system.jet, normal_form.C, normal_form.A, normal_form.B)


def _check_connection(gamma: Sequence, jet: JetSpace) -> List[List[List[sympy.Expr]]]:
    m = jet.m
    allowed = set(jet.u)
    result = [[[normalize(gamma[a][b][c]) for c in range(m)] for b in range(m)] for a in range(m)]
    for a in range(m):
        for b in range(m):
            for c in range(m):
                if not result[a][b][c].free_symbols <= allowed:
                    raise ValueError(f"Gamma^{a+1}_{b+1}{c+1} = {result[a][b][c]} must depend only on {jet.u}")
                if not is_zero(result[a][b][c] - result[a][c][b]):
                    raise ValueError(f"Gamma is not symmetric: Gamma^{a+1}_{b+1}{c+1} != Gamma^{a+1}_{c+1}{b+1}")
    return result


def curvature(gamma: Sequence, jet: JetSpace) -> List[List[List[List[sympy.Expr]]]]:
    """
    The curvature R[r][e][p][q] = R^r_epq of a symmetric connection Gamma(u), gamma[a][b][c] = Gamma^a_bc:

        R^r_epq = d_q Gamma^r_pe - d_p Gamma^r_qe + Gamma^r_ql Gamma^l_pe - Gamma^r_pl Gamma^l_qe

    With this convention the invariant H of the geodesic system equals R^c_eas u^s_x u^e_y.

    >>> jet = JetSpace(["u"])
    >>> curvature([[[jet.u[0]]]], jet)
    [[[[0]]]]
    >>> curvature([[[0, 1], [0, 0]], [[0, 0], [0, 0]]], JetSpace(["u", "v"]))
    Traceback (most recent call last):
    ...
    ValueError: Gamma is not symmetric: Gamma^1_12 != Gamma^1_21
    """
    m = jet.m
    G = _check_connection(gamma, jet)
    R = []
    for r in range(m):
        R_r = []
        for e in range(m):
            R_re = []
            for p in range(m):
                R_rep = []
                for q in range(m):
                    value = sympy.diff(G[r][p][e], jet.u[q]) - sympy.diff(G[r][q][e], jet.u[p])
                    for l in range(m):
                        value += G[r][q][l] * G[l][p][e] - G[r][p][l] * G[l][q][e]
                    R_rep.append(normalize(value))
                R_re.append(R_rep)
            R_r.append(R_re)
        R.append(R_r)
    return R


def curvature_contraction(R: Sequence, jet: JetSpace) -> Matrix:
    """
    The matrix H predicted by the curvature: H[c][a] = sum over s, e of R^c_eas u^s_x u^e_y.
    """
    m = jet.m
    return tuple(
        tuple(normalize(sum((R[c][e][a][s] * jet.u_x[s] * jet.u_y[e] for s in range(m) for e in range(m)),
                            sympy.Integer(0)))
              for a in range(m))
        for c in range(m))


if __name__ == "__main__":
    import doctest
    print(doctest.testmod())
