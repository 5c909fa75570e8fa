"""
Tests for the Euler-Lagrange operator, multiplier verification, Lagrangian construction and divergence equivalence.
"""

import unittest

import sympy

from varmult.fgordon import DocumentError, FGordonSystem
from varmult.lagrangians import (Lagrangian, LagrangianNotFound, construct_lagrangian, divergence_equivalent,
                                 euler_lagrange, verify_multiplier)
from varmult.liealgebra import biinvariant_forms, lie_lagrangian, lie_system, so3, solvable4
from varmult.symbolic.expressions import free_total_derivative, is_zero
from varmult.symbolic.jet import JetSpace, X, Y
from utils import default_rng, random_polynomial, small_rational, wave_system


class TestEulerLagrange(unittest.TestCase):
    def test_wave(self):
        jet = JetSpace(["u"])
        self.assertEqual(euler_lagrange(Lagrangian.from_string("-u_x*u_y", jet)), (2 * jet.u_xy[0],))

    def test_annihilates_total_divergences(self):
        jet = JetSpace(["u", "v"])
        rng = default_rng(30)
        for _ in range(50):
            P = random_polynomial(rng, list(jet.base), degree=3, terms=3)
            Q = random_polynomial(rng, list(jet.base), degree=3, terms=3)
            divergence = free_total_derivative(P, X, jet) + free_total_derivative(Q, Y, jet)
            self.assertTrue(all(is_zero(e) for e in euler_lagrange(Lagrangian(divergence, jet))))

    def test_linear(self):
        jet = JetSpace(["u", "v"])
        rng = default_rng(33)
        for _ in range(50):
            L1 = Lagrangian(random_polynomial(rng, list(jet.first_order), degree=2, terms=3), jet)
            L2 = Lagrangian(random_polynomial(rng, list(jet.first_order), degree=2, terms=3), jet)
            c1, c2 = small_rational(rng), small_rational(rng)
            combined = Lagrangian(c1 * L1.expression + c2 * L2.expression, jet)
            for total, first, second in zip(euler_lagrange(combined), euler_lagrange(L1), euler_lagrange(L2)):
                self.assertTrue(is_zero(total - c1 * first - c2 * second))


class TestVerification(unittest.TestCase):
    def test_example1(self):
        example1 = FGordonSystem.from_strings(["v", "u"])
        jet = example1.jet
        self.assertTrue(verify_multiplier(Lagrangian.from_string("-(u_x*u_y + v_x*v_y)/2 - u*v", jet),
                                          [[1, 0], [0, 1]], example1))
        self.assertTrue(verify_multiplier(Lagrangian.from_string("-(u_x*v_y + v_x*u_y)/2 - (u^2 + v^2)/2", jet),
                                          [[0, 1], [1, 0]], example1))
        for a, b in ((sympy.Rational(2, 3), 5), (-3, sympy.Rational(1, 7))):
            L = Lagrangian.from_string(f"-({a})*((u_x*u_y + v_x*v_y)/2 + u*v)"
                                       f" - ({b})*((u_x*v_y + v_x*u_y)/2 + (u^2 + v^2)/2)", jet)
            self.assertTrue(verify_multiplier(L, [[a, b], [b, a]], example1))

    def test_example2(self):
        example2 = FGordonSystem.from_strings(["v", "x*u"])
        J = [[0, 1], [1, 0]]
        self.assertTrue(verify_multiplier(Lagrangian.from_string("-u_x*v_y - (x*u^2 + v^2)/2", example2.jet),
                                          J, example2))
        check = verify_multiplier(Lagrangian.from_string("-u_x*v_y - (u^2 + x*v^2)/2", example2.jet), J, example2)
        self.assertFalse(check)
        self.assertFalse(all(r == 0 for r in check.residuals))
        self.assertEqual(check.to_document()["holds"], False)

    def test_hyperbolic_plane(self):
        system = FGordonSystem.from_strings(["exp(2*u)*v_x*v_y", "-u_x*v_y - u_y*v_x"])
        L = Lagrangian.from_string("-(u_x*u_y + exp(2*u)*v_x*v_y)/2", system.jet)
        self.assertTrue(verify_multiplier(L, [[1, 0], [0, sympy.exp(2 * system.jet.u[0])]], system))

    def test_gradient_systems(self):
        rng = default_rng(31)
        jet = JetSpace(["u", "v"])
        for _ in range(50):
            V = random_polynomial(rng, list(jet.base), degree=3, terms=3)
            system = FGordonSystem([sympy.diff(V, jet.u[0]), sympy.diff(V, jet.u[1])], jet)
            half = sympy.Rational(1, 2)
            L = Lagrangian.structured([[half, 0], [0, half]], [0, 0], [0, 0], V, jet)
            self.assertTrue(verify_multiplier(L, [[1, 0], [0, 1]], system))

    def test_lie_lagrangians(self):
        for algebra in (so3(), solvable4()):
            system = lie_system(algebra)
            for M in biinvariant_forms(algebra):
                self.assertTrue(verify_multiplier(lie_lagrangian(M, algebra), M, system))

    def test_mismatched_jets(self):
        system = FGordonSystem.from_strings(["v", "u"])
        with self.assertRaises(ValueError):
            verify_multiplier(Lagrangian.from_string("-u_x*u_y", JetSpace(["u"])), [[1]], system)


class TestConstruction(unittest.TestCase):
    def test_example1(self):
        example1 = FGordonSystem.from_strings(["v", "u"])
        for M in ([[1, 0], [0, 1]], [[0, 1], [1, 0]]):
            L = construct_lagrangian(M, example1)
            self.assertTrue(verify_multiplier(L, M, example1))
            self.assertIsNotNone(L.components)

    def test_example2(self):
        example2 = FGordonSystem.from_strings(["v", "x*u"])
        L = construct_lagrangian([[0, 1], [1, 0]], example2)
        self.assertTrue(divergence_equivalent(L, Lagrangian.from_string("-u_x*v_y - (x*u^2 + v^2)/2", example2.jet)))
        self.assertFalse(divergence_equivalent(L, Lagrangian.from_string("-u_x*v_y - (u^2 + x*v^2)/2",
                                                                            example2.jet)))

    def test_three_lagrangians(self):
        system = FGordonSystem.from_strings(["x*y*u", "x*y*v"])
        for M in ([[1, 0], [0, 0]], [[0, 1], [1, 0]], [[0, 0], [0, 1]]):
            self.assertTrue(verify_multiplier(construct_lagrangian(M, system), M, system))

    def test_scalar_potentials(self):
        rng = default_rng(32)
        jet = JetSpace(["u"])
        for _ in range(50):
            system = FGordonSystem([random_polynomial(rng, list(jet.base), degree=2, terms=3)], jet)
            L = construct_lagrangian([[1]], system, degree_cap=2)
            self.assertTrue(verify_multiplier(L, [[1]], system))

    def test_invalid_multiplier(self):
        with self.assertRaises(ValueError):
            construct_lagrangian([[1, 0], [0, 0]], FGordonSystem.from_strings(["v", "x*u"]))

    def test_not_found(self):
        wave = wave_system(1)
        with self.assertRaises(LagrangianNotFound) as raised:
            construct_lagrangian([[wave.jet.x]], wave, degree_cap=1, check=False)
        self.assertEqual(raised.exception.degree, 1)
        self.assertIn("up to degree 1", str(raised.exception))


class TestDivergenceEquivalence(unittest.TestCase):
    def test_null_lagrangians(self):
        jet = JetSpace(["u"])
        L = Lagrangian.from_string("-u_x*u_y", jet)
        self.assertTrue(divergence_equivalent(L, Lagrangian.from_string("-u_x*u_y + x*u_y + y^2*u_x", jet)))
        self.assertTrue(divergence_equivalent(L, L))
        self.assertFalse(divergence_equivalent(L, Lagrangian.from_string("-u_x*u_y/2", jet)))


class TestDocuments(unittest.TestCase):
    def setUp(self):
        self.jet = JetSpace(["u", "v"])

    def test_forms(self):
        as_string = Lagrangian.from_document("-u_x*v_y", self.jet)
        as_object = Lagrangian.from_document({"L": "-u_x*v_y"}, self.jet)
        self.assertEqual(as_string.expression, as_object.expression)
        structured = Lagrangian.from_document({"R": [["0", "0"], ["1", "0"]], "N": "u*v"}, self.jet)
        self.assertTrue(is_zero(structured.expression + self.jet.u_y[1] * self.jet.u_x[0] + self.jet.u[0] * self.jet.u[1]))
        again = Lagrangian.from_document(structured.to_document(), self.jet)
        self.assertEqual(again.expression, structured.expression)

    def test_errors(self):
        with self.assertRaises(DocumentError):
            Lagrangian.from_document(3, self.jet)
        with self.assertRaises(DocumentError):
            Lagrangian.from_document({"Q": ["0", "0"]}, self.jet)
        with self.assertRaises(DocumentError):
            Lagrangian.from_document({"R": [["1"]]}, self.jet)
        with self.assertRaises(ValueError):
            Lagrangian.structured([[self.jet.u_x[0], 0], [0, 0]], [0, 0], [0, 0], 0, self.jet)


if __name__ == "__main__":
    unittest.main()
