"""
Tests for the expression kernel: parsing, normalization, derivatives, evaluation and zero testing.
"""

import unittest

import sympy

from varmult.fgordon import FGordonSystem
from varmult.symbolic.expressions import (Certainty, PoleError, eval_rational, free_total_derivative, is_zero,
                                          normalize, partial, sample_points, total_derivative)
from varmult.symbolic.jet import Coordinate, JetSpace, Kind, X, Y
from varmult.symbolic.parser import ParseError, parse, to_string
from utils import default_rng, random_expression, random_normal_form_system


class TestParser(unittest.TestCase):
    def setUp(self):
        self.jet = JetSpace(["u", "v"])

    def test_leaves_and_products(self):
        u, v = self.jet.u
        self.assertEqual(parse("v", self.jet), v)
        self.assertEqual(parse("x*u", self.jet), self.jet.x * u)
        self.assertEqual(parse("u2", self.jet), v)
        self.assertEqual(parse("u1_x", self.jet), self.jet.u_x[0])

    def test_antisymmetric_combination(self):
        e = normalize(parse("u_x*v_y - v_x*u_y", self.jet))
        self.assertEqual(len(sympy.Add.make_args(e)), 2)
        self.assertEqual(normalize(e + parse("v_x*u_y - u_x*v_y", self.jet)), 0)

    def test_extras(self):
        u = self.jet.u[0]
        self.assertEqual(parse("0.5*u", self.jet), u / 2)
        self.assertEqual(parse("u**2", self.jet), parse("u^2", self.jet))
        self.assertEqual(parse("-u^-1", self.jet), -1 / u)
        self.assertEqual(parse("exp(u)", self.jet), sympy.exp(u))

    def test_errors(self):
        with self.assertRaises(ParseError) as raised:
            parse("u + * v", self.jet)
        self.assertEqual(raised.exception.position, 4)
        with self.assertRaises(ParseError):
            parse("w", self.jet)
        with self.assertRaises(ParseError):
            parse("u3", self.jet)
        with self.assertRaises(ParseError):
            parse("(u + v", self.jet)
        with self.assertRaises(ParseError):
            parse("tan(u)", self.jet)

    def test_second_order(self):
        self.assertEqual(parse("u_xy", self.jet), self.jet.u_xy[0])
        with self.assertRaises(ParseError):
            parse("u_xy", self.jet, allow_second_order=False)

    def test_print_parse_round_trip(self):
        rng = default_rng(1)
        symbols = list(self.jet.first_order)
        for _ in range(50):
            e = random_expression(rng, symbols, depth=3)
            self.assertEqual(normalize(parse(to_string(e), self.jet) - e), 0)


class TestNormalization(unittest.TestCase):
    def test_laws_on_fuzzed_expressions(self):
        jet = JetSpace(["u", "v"])
        symbols = [jet.x, jet.y, jet.u[0], jet.u[1], jet.u_x[0], jet.u_y[1]]
        rng = default_rng(2)
        for _ in range(1000):
            a, b, c = (random_expression(rng, symbols, depth=1) for _ in range(3))
            self.assertEqual(normalize(a + b), normalize(b + a))
            self.assertEqual(normalize(a * (b + c)), normalize(a * b + a * c))

    def test_idempotent(self):
        jet = JetSpace(["u", "v"])
        rng = default_rng(3)
        for _ in range(100):
            e = normalize(random_expression(rng, list(jet.first_order), depth=3))
            self.assertEqual(normalize(e), e)

    def test_evaluation_agrees_with_normal_form(self):
        jet = JetSpace(["u"])
        symbols = list(jet.first_order)
        rng = default_rng(4)
        for index in range(10):
            e = random_expression(rng, symbols, depth=3)
            normal = normalize(e)
            for point in sample_points(symbols, 100, seed=index):
                try:
                    value = eval_rational(e, point)
                except PoleError:
                    continue
                self.assertEqual(eval_rational(normal, point), value)


class TestDerivatives(unittest.TestCase):
    def test_partial(self):
        jet = JetSpace(["u", "v"])
        u = jet.u[0]
        self.assertEqual(partial(jet.x * u, Coordinate(Kind.U, 1), jet), jet.x)
        self.assertEqual(partial(sympy.exp(u), u), sympy.exp(u))

    def test_partials_commute(self):
        jet = JetSpace(["u", "v"])
        symbols = list(jet.first_order)
        rng = default_rng(5)
        for _ in range(50):
            e = random_expression(rng, symbols, depth=2)
            c1 = symbols[int(rng.integers(0, len(symbols)))]
            c2 = symbols[int(rng.integers(0, len(symbols)))]
            self.assertEqual(normalize(partial(partial(e, c1), c2) - partial(partial(e, c2), c1)), 0)

    def test_total_derivative_examples(self):
        example1 = FGordonSystem.from_strings(["v", "u"])
        self.assertEqual(total_derivative(example1.jet.u_y[0], X, example1), example1.jet.u[1])
        self.assertEqual(total_derivative(example1.jet.x, Y, example1), 0)
        with self.assertRaises(ValueError):
            total_derivative(example1.jet.u_xy[0], X, example1)

    def test_total_derivatives_commute_on_the_equation_manifold(self):
        rng = default_rng(6)
        for _ in range(50):
            system = random_normal_form_system(rng, m=2)
            e = random_expression(rng, list(system.jet.first_order), depth=2)
            xy = total_derivative(total_derivative(e, Y, system), X, system)
            yx = total_derivative(total_derivative(e, X, system), Y, system)
            self.assertEqual(normalize(xy - yx), 0)

    def test_free_total_derivative(self):
        jet = JetSpace(["u"])
        self.assertEqual(free_total_derivative(jet.u_y[0], X, jet), jet.u_xy[0])
        with self.assertRaises(ValueError):
            free_total_derivative(jet.u_xx[0], Y, jet)


class TestZeroTest(unittest.TestCase):
    def test_exact(self):
        u, v = sympy.symbols("u v")
        result = is_zero((u + v)**2 - u**2 - 2*u*v - v**2)
        self.assertTrue(result)
        self.assertEqual(result.certainty, Certainty.EXACT)

    def test_probabilistic(self):
        u, v = sympy.symbols("u v")
        result = is_zero(sympy.exp(u) * sympy.exp(v) - sympy.exp(u + v))
        self.assertTrue(result)
        self.assertEqual(result.certainty, Certainty.PROBABILISTIC)
        result = is_zero(sympy.sin(u)**2 + sympy.cos(u)**2 - 1)
        self.assertTrue(result)
        self.assertEqual(result.certainty, Certainty.PROBABILISTIC)
        self.assertFalse(is_zero(sympy.exp(u) - 1))

    def test_opaque_functions_are_not_rewritten(self):
        u, v = sympy.symbols("u v")
        self.assertNotEqual(normalize(sympy.exp(u) * sympy.exp(v) - sympy.exp(u + v)), 0)
        self.assertEqual(normalize(sympy.exp(u * (v + 1)) - sympy.exp(u * v + u)), 0)
        self.assertEqual(normalize(sympy.exp(u) * (v + 1) - sympy.exp(u) * v), sympy.exp(u))

    def test_example1_invariants_agree(self):
        from varmult.invariants import invariants
        triple = invariants(FGordonSystem.from_strings(["v", "u"]))
        self.assertTrue(is_zero(triple.H[0][0] - triple.K[0][0]))

    def test_evaluation(self):
        jet = JetSpace(["u", "v"])
        self.assertEqual(eval_rational(jet.x * jet.u[0], {jet.x: 2, jet.u[0]: sympy.Rational(3, 5)}),
                         sympy.Rational(6, 5))
        with self.assertRaises(PoleError):
            eval_rational(1 / jet.u[0], {jet.u[0]: 0})


if __name__ == "__main__":
    unittest.main()
