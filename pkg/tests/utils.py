"""
Shared helpers for the tests: seeded random expressions, systems, Lie algebras and changes of variables.
"""

import numpy as np
import sympy

import varmult
from varmult.classification import CoordinateChange
from varmult.fgordon import FGordonSystem
from varmult.liealgebra import heisenberg, semidirect
from varmult.symbolic.jet import JetSpace


def functions_in_class(theclass):
    for funcname in dir(theclass):
        if funcname.startswith('__'):
            continue
        yield getattr(theclass, funcname)


class named_algebras:
    from varmult.liealgebra import so3, nonabelian2, solvable4
    from varmult.liealgebra import heisenberg


def small_rational(rng, bound: int = 5, nonzero: bool = False) -> sympy.Rational:
    while True:
        value = sympy.Rational(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, 4)))
        if value != 0 or not nonzero:
            return value


def random_polynomial(rng, symbols, degree: int = 2, terms: int = 3) -> sympy.Expr:
    """ A sparse random polynomial with small rational coefficients. """
    result = sympy.Integer(0)
    for _ in range(terms):
        monomial = sympy.Integer(1)
        for _ in range(int(rng.integers(0, degree + 1))):
            monomial *= symbols[int(rng.integers(0, len(symbols)))]
        result += small_rational(rng) * monomial
    return result


def random_expression(rng, symbols, depth: int = 2) -> sympy.Expr:
    """ A random rational expression (sums, products, quotients and small powers). """
    if depth == 0:
        if rng.random() < 0.5:
            return symbols[int(rng.integers(0, len(symbols)))]
        return small_rational(rng)
    left = random_expression(rng, symbols, depth - 1)
    right = random_expression(rng, symbols, depth - 1)
    choice = int(rng.integers(0, 5))
    if choice == 0:
        return left + right
    if choice == 1:
        return left - right
    if choice == 2:
        return left * right
    if choice == 3:
        return left / (right**2 + 1)
    return left**2


def random_normal_form_system(rng, m: int = 2, names=None) -> FGordonSystem:
    """
    u^a_xy = -(C^a_bc u^b_x u^c_y + A^a_c u^c_x + B^a_c u^c_y + E^a), with polynomial coefficients
    (C in u only, A, B, E in x, y, u), most of them zero.
    """
    jet = JetSpace(names) if names is not None else JetSpace.default(m)
    base = list(jet.base)
    f = []
    for a in range(m):
        rhs = -random_polynomial(rng, base, degree=2, terms=2)
        for c in range(m):
            if rng.random() < 0.3:
                rhs -= random_polynomial(rng, base, degree=1, terms=1) * jet.u_x[c]
            if rng.random() < 0.3:
                rhs -= random_polynomial(rng, base, degree=1, terms=1) * jet.u_y[c]
            for b in range(m):
                if rng.random() < 0.15:
                    rhs -= small_rational(rng) * jet.u_x[b] * jet.u_y[c]
        f.append(rhs)
    return FGordonSystem(f, jet)


def random_lie_algebra(rng):
    """ A random semidirect product of a line with an abelian ideal, or a Heisenberg algebra. """
    if rng.random() < 0.2:
        return heisenberg(1)
    n = int(rng.integers(1, 3))
    D = [[int(rng.integers(-2, 3)) for _ in range(n)] for _ in range(n)]
    return semidirect(D)


def random_change(rng, m: int) -> CoordinateChange:
    """ A random x' = a x + b, y' = c y + d, u' = T u with T invertible. """
    while True:
        T = [[int(rng.integers(-2, 3)) for _ in range(m)] for _ in range(m)]
        if sympy.Matrix(T).det() != 0:
            break
    return CoordinateChange.of(a=small_rational(rng, nonzero=True), b=small_rational(rng),
                               c=small_rational(rng, nonzero=True), d=small_rational(rng), T=T)


def symmetric_constant(rng, m: int):
    M = [[0] * m for _ in range(m)]
    for a in range(m):
        for b in range(a, m):
            M[a][b] = M[b][a] = small_rational(rng)
    return M


def default_rng(seed: int):
    return np.random.default_rng(seed)


def wave_system(m: int) -> FGordonSystem:
    return varmult.FGordonSystem.from_strings(["0"] * m)
