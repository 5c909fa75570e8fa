"""
First-order Lagrangians: the Euler-Lagrange operator, verification of the multiplier identity

    E_a(L) = M_ab (u^b_xy - f^b)     (off-shell: u_xy is a free coordinate),

construction of a Lagrangian for a given multiplier by the method of undetermined coefficients,
and divergence equivalence.

Lagrangians of a normal-form system may be written as

    L = -(R_ab u^a_y u^b_x + Q_a u^a_x + P_a u^a_y + N),

where the symmetric part of R is M/2.

Author: Erel Segal-Halevi
Since: 2024-03
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import sympy

from varmult import defaults, linalg
from varmult.fgordon import DocumentError, FGordonSystem, InternalInconsistencyError
from varmult.multipliers import check_multiplier_conditions, coefficient_atoms, monomial_basis
from varmult.symbolic.jet import Coordinate, JetSpace, Kind
from varmult.symbolic.expressions import free_total_derivative, is_zero, normalize, opaque_atoms
from varmult.symbolic.parser import parse, to_string

import logging
logger = logging.getLogger(__name__)


class LagrangianNotFound(ValueError):
    """ The ansatz has no solution up to the degree cap. This is not a proof that no Lagrangian exists. """

    def __init__(self, degree: int, equations: int, unknowns: int):
        self.degree = degree
        self.equations = equations
        self.unknowns = unknowns
        super().__init__(f"No Lagrangian found up to degree {degree} "
                         f"({equations} equations in {unknowns} unknowns at the last attempt)")


class Lagrangian:
    """
    A first-order Lagrangian, either free-form or given by its components R, Q, P, N.

    >>> jet = JetSpace(["u"])
    >>> Lagrangian.from_string("-u_x*u_y", jet).expression
    -u_x*u_y
    >>> Lagrangian.structured([[1]], [0], [0], jet.u[0]**2, jet).expression
    -u**2 - u_x*u_y
    >>> Lagrangian.from_string("u*u_xy", jet)
    Traceback (most recent call last):
    ...
    ValueError: Lagrangians must be first order, got u*u_xy
    """

    def __init__(self, expression: sympy.Expr, jet: JetSpace, components: Optional[Dict[str, Any]] = None):
        expression = sympy.sympify(expression)
        jet.check_symbols(expression)
        if jet.order_of(expression) > 1:
            raise ValueError(f"Lagrangians must be first order, got {expression}")
        self.expression = normalize(expression)
        self.jet = jet
        self.components = components

    @classmethod
    def structured(cls, R: Sequence[Sequence], Q: Sequence, P: Sequence, N, jet: JetSpace) -> "Lagrangian":
        m = jet.m
        R = [[normalize(R[a][b]) for b in range(m)] for a in range(m)]
        Q = [normalize(q) for q in Q]
        P = [normalize(p) for p in P]
        N = normalize(N)
        allowed = set(jet.base)
        for entry in [e for row in R for e in row] + Q + P + [N]:
            if not entry.free_symbols <= allowed:
                raise ValueError(f"Lagrangian components must depend only on {jet.base}, got {entry}")
        expression = N
        for a in range(m):
            expression += Q[a] * jet.u_x[a] + P[a] * jet.u_y[a]
            for b in range(m):
                expression += R[a][b] * jet.u_y[a] * jet.u_x[b]
        return cls(-expression, jet, {"R": R, "Q": Q, "P": P, "N": N})

    @classmethod
    def from_string(cls, source: str, jet: JetSpace) -> "Lagrangian":
        return cls(parse(source, jet), jet)

    @classmethod
    def from_document(cls, document, jet: JetSpace) -> "Lagrangian":
        """
        An expression string, {"L": string}, or {"R", "Q", "P", "N"} with expression strings.

        >>> jet = JetSpace(["u"])
        >>> Lagrangian.from_document({"R": [["1"]], "Q": ["0"], "P": ["0"], "N": "u^2"}, jet).expression
        -u**2 - u_x*u_y
        """
        if isinstance(document, str):
            return cls.from_string(document, jet)
        if not isinstance(document, dict):
            raise DocumentError("A Lagrangian document must be a string or a JSON object")
        if "L" in document:
            return cls.from_string(str(document["L"]), jet)
        m = jet.m
        try:
            R = [[parse(str(e), jet) for e in row] for row in document["R"]]
            Q = [parse(str(e), jet) for e in document.get("Q", ["0"] * m)]
            P = [parse(str(e), jet) for e in document.get("P", ["0"] * m)]
            N = parse(str(document.get("N", "0")), jet)
        except KeyError as missing:
            raise DocumentError(f"A structured Lagrangian needs the key {missing}") from None
        if len(R) != m or any(len(row) != m for row in R) or len(Q) != m or len(P) != m:
            raise DocumentError(f"Lagrangian component shapes do not match m={m}")
        return cls.structured(R, Q, P, N, jet)

    def to_document(self) -> Dict[str, Any]:
        document = {"L": to_string(self.expression)}
        if self.components is not None:
            document["R"] = [[to_string(e) for e in row] for row in self.components["R"]]
            document["Q"] = [to_string(e) for e in self.components["Q"]]
            document["P"] = [to_string(e) for e in self.components["P"]]
            document["N"] = to_string(self.components["N"])
        return document

    def __add__(self, other: "Lagrangian") -> "Lagrangian":
        return Lagrangian(self.expression + other.expression, self.jet)

    def __sub__(self, other: "Lagrangian") -> "Lagrangian":
        return Lagrangian(self.expression - other.expression, self.jet)

    def __repr__(self):
        return f"Lagrangian({to_string(self.expression)})"


def _euler_lagrange(expression: sympy.Expr, jet: JetSpace) -> Tuple[sympy.Expr, ...]:
    D_x, D_y = Coordinate(Kind.X), Coordinate(Kind.Y)
    return tuple(
        normalize(sympy.diff(expression, jet.u[a])
                  - free_total_derivative(sympy.diff(expression, jet.u_x[a]), D_x, jet)
                  - free_total_derivative(sympy.diff(expression, jet.u_y[a]), D_y, jet))
        for a in range(jet.m))


def euler_lagrange(L: Lagrangian) -> Tuple[sympy.Expr, ...]:
    """
    E_a(L) = dL/du^a - D_x(dL/du^a_x) - D_y(dL/du^a_y), with unconstrained total derivatives.

    >>> jet = JetSpace(["u"])
    >>> euler_lagrange(Lagrangian.from_string("-u_x*u_y", jet))
    (2*u_xy,)
    >>> euler_lagrange(Lagrangian.from_string("-u_x*v_y - (x*u^2 + v^2)/2", JetSpace(["u", "v"])))
    (-u*x + v_xy, u_xy - v)
    """
    return _euler_lagrange(L.expression, L.jet)


@dataclass
class MultiplierCheck:
    holds: bool
    residuals: Tuple[sympy.Expr, ...]

    def __bool__(self) -> bool:
        return self.holds

    def to_document(self) -> Dict[str, Any]:
        return {"holds": self.holds, "residuals": [to_string(r) for r in self.residuals]}


def _multiplier_image(M: Sequence[Sequence], system: FGordonSystem) -> List[sympy.Expr]:
    """ The components M_ab (u^b_xy - f^b). """
    jet, m = system.jet, system.m
    return [sum((sympy.sympify(M[a][b]) * (jet.u_xy[b] - system.f[b]) for b in range(m)), sympy.Integer(0))
            for a in range(m)]


def verify_multiplier(L: Lagrangian, M: Sequence[Sequence], system: FGordonSystem) -> MultiplierCheck:
    """
    Check E_a(L) = M_ab (u^b_xy - f^b) identically, with u_xy free.

    >>> example1 = FGordonSystem.from_strings(["v", "u"])
    >>> L = Lagrangian.from_string("-(u_x*u_y + v_x*v_y + 2*u*v)/2", example1.jet)
    >>> bool(verify_multiplier(L, [[1, 0], [0, 1]], example1))
    True
    >>> wave = FGordonSystem.from_strings(["u"])
    >>> verify_multiplier(Lagrangian.from_string("-u_x*u_y", wave.jet), [[2]], wave)
    MultiplierCheck(holds=False, residuals=(2*u,))
    """
    if L.jet != system.jet:
        raise ValueError(f"The Lagrangian is over {L.jet} but the system is over {system.jet}")
    residuals = tuple(normalize(e - image) for e, image in zip(euler_lagrange(L), _multiplier_image(M, system)))
    holds = all(is_zero(r) for r in residuals)
    logger.debug("Multiplier identity for %s: %s", L, holds)
    return MultiplierCheck(holds, residuals)


def divergence_equivalent(L1: Lagrangian, L2: Lagrangian) -> bool:
    """
    Whether L1 - L2 is a null Lagrangian (locally, a total divergence).

    >>> jet = JetSpace(["u"])
    >>> divergence_equivalent(Lagrangian.from_string("-u_x*u_y", jet), Lagrangian.from_string("-u_x*u_y + 2*u*u_x", jet))
    True
    >>> divergence_equivalent(Lagrangian.from_string("-u_x*u_y", jet), Lagrangian.from_string("u^2", jet))
    False
    """
    return all(is_zero(e) for e in euler_lagrange(L1 - L2))


def construct_lagrangian(M: Sequence[Sequence], system: FGordonSystem, degree_cap: int = defaults.DEGREE_CAP,
                         check: bool = True) -> Lagrangian:
    """
    Find L = -(R_ab u^a_y u^b_x + Q_a u^a_x + P_a u^a_y + N) with E(L) = M (u_xy - f).
    R = M/2 + W with W skew; Q, P, W are polynomials of degree d and N of degree d + 2 in (x, y, u),
    possibly times opaque atoms of the system and of M; d grows up to degree_cap.

    >>> example2 = FGordonSystem.from_strings(["v", "x*u"])
    >>> L = construct_lagrangian([[0, 1], [1, 0]], example2)
    >>> divergence_equivalent(L, Lagrangian.from_string("-u_x*v_y - (x*u^2 + v^2)/2", example2.jet))
    True
    >>> construct_lagrangian([[1, 0], [0, 0]], example2)
    Traceback (most recent call last):
    ...
    ValueError: [[1, 0], [0, 0]] does not satisfy the multiplier conditions of FGordonSystem(u_xy = v, v_xy = u*x)
    """
    jet, m = system.jet, system.m
    M = [[normalize(M[a][b]) for b in range(m)] for a in range(m)]
    if check and not check_multiplier_conditions(M, system):
        raise ValueError(f"{M} does not satisfy the multiplier conditions of {system}")
    atoms = sorted(set(coefficient_atoms(system)).union(*(opaque_atoms(e) for row in M for e in row)),
                   key=sympy.default_sort_key)
    base = jet.base
    variables = list(jet.first_order) + list(jet.second_order)
    R0 = [[M[a][b] / 2 for b in range(m)] for a in range(m)]
    L0 = Lagrangian.structured(R0, [0] * m, [0] * m, 0, jet)
    targets = _multiplier_image(M, system)
    constants = [normalize(e - t) for e, t in zip(euler_lagrange(L0), targets)]
    last = (0, 0)
    for degree in range(degree_cap + 1):
        low = monomial_basis(base, degree, atoms)
        high = monomial_basis(base, degree + 2, atoms)
        for with_skew in ([False, True] if m >= 2 else [False]):
            # each term is (component name, indices, basis function, its contribution to L)
            terms = []
            for a in range(m):
                terms += [("Q", a, b, -b * jet.u_x[a]) for b in low]
                terms += [("P", a, b, -b * jet.u_y[a]) for b in low]
            terms += [("N", None, b, -b) for b in high]
            if with_skew:
                for a in range(m):
                    for c in range(a + 1, m):
                        terms += [("W", (a, c), b, -b * (jet.u_y[a] * jet.u_x[c] - jet.u_y[c] * jet.u_x[a]))
                                  for b in low]
            images = [_euler_lagrange(term[3], jet) for term in terms]
            equations = linalg.LinearSystem(len(terms))
            for a in range(m):
                equations.extend(linalg.identity_equations([image[a] for image in images], constants[a], variables))
            last = (len(equations.rows), len(terms))
            solution = equations.solve()
            logger.info("Lagrangian ansatz of degree %d%s: %d equations, %d unknowns, %s",
                        degree, " with skew part" if with_skew else "", last[0], last[1],
                        "solved" if solution is not None else "no solution")
            if solution is None:
                continue
            R = [row[:] for row in R0]
            Q, P, N = [sympy.Integer(0)] * m, [sympy.Integer(0)] * m, sympy.Integer(0)
            for value, (name, index, function, _) in zip(solution, terms):
                if value == 0:
                    continue
                if name == "Q":
                    Q[index] += value * function
                elif name == "P":
                    P[index] += value * function
                elif name == "N":
                    N += value * function
                else:
                    a, c = index
                    R[a][c] += value * function
                    R[c][a] -= value * function
            result = Lagrangian.structured(R, Q, P, N, jet)
            if not verify_multiplier(result, M, system):
                raise InternalInconsistencyError(f"Constructed Lagrangian {result} fails the multiplier identity")
            return result
    raise LagrangianNotFound(degree_cap, *last)


if __name__ == "__main__":
    import doctest
    print(doctest.testmod())
