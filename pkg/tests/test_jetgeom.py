"""
Tests for f-Gordon systems, their normal form, the invariants H, K, S, the connection form and the curvature helper.
"""

import unittest

import sympy

from varmult.fgordon import DocumentError, FGordonSystem, NotNormalFormError, check_normal_form, geodesic_system
from varmult.invariants import (connection_form, curvature, curvature_contraction, gradient_coefficients,
                                invariants, monomial_string)
from varmult.liealgebra import lie_system, so3, solvable4
from varmult.symbolic.expressions import is_zero, normalize
from varmult.symbolic.jet import Coordinate, JetSpace, Kind, X, Y
from utils import default_rng, random_normal_form_system, wave_system


def sphere_connection(jet):
    """ The Levi-Civita connection of the round sphere 4(du^2 + dv^2)/(1 + u^2 + v^2)^2. """
    u, v = jet.u
    w = 1 + u**2 + v**2
    return [
        [[-2*u/w, -2*v/w], [-2*v/w, 2*u/w]],
        [[2*v/w, -2*u/w], [-2*u/w, -2*v/w]],
    ]


def hyperbolic_connection(jet):
    """ The Levi-Civita connection of du^2 + exp(2u) dv^2. """
    u = jet.u[0]
    return [
        [[0, 0], [0, -sympy.exp(2*u)]],
        [[0, 1], [1, 0]],
    ]


class TestNormalForm(unittest.TestCase):
    def test_example1(self):
        normal_form = check_normal_form(FGordonSystem.from_strings(["v", "u"]))
        u, v = sympy.symbols("u v")
        self.assertEqual(normal_form.E, (-v, -u))
        self.assertTrue(all(e == 0 for row in normal_form.A for e in row))
        self.assertTrue(all(e == 0 for row in normal_form.B for e in row))

    def test_refusal(self):
        system = FGordonSystem.from_strings(["u_x^2"])
        refusal = check_normal_form(system)
        self.assertIn("no first-order variational multiplier exists", refusal.reason)
        self.assertEqual((refusal.equation, refusal.direction, refusal.pair), (1, "x", (1, 1)))
        self.assertIsNone(system.normal_form)
        with self.assertRaises(NotNormalFormError):
            connection_form(system)
        refusal = check_normal_form(FGordonSystem.from_strings(["v", "u_y*v_y"]))
        self.assertEqual((refusal.equation, refusal.direction, refusal.pair), (2, "y", (1, 2)))

    def test_connection_coefficients(self):
        jet = JetSpace(["u", "v"])
        gamma = hyperbolic_connection(jet)
        normal_form = geodesic_system(gamma, jet).normal_form
        for a in range(2):
            for b in range(2):
                for c in range(2):
                    self.assertTrue(is_zero(normal_form.C[a][b][c] - gamma[a][b][c]))

    def test_reassembly_on_random_systems(self):
        rng = default_rng(10)
        for _ in range(50):
            system = random_normal_form_system(rng, m=int(rng.integers(1, 4)))
            reassembled = system.normal_form.reassemble(system.jet)
            for original, again in zip(system.f, reassembled):
                self.assertEqual(normalize(original - again), 0)

    def test_documents(self):
        document = {"m": 2, "dependent": ["p", "q"], "f": ["q", "x*p"], "name": "example2"}
        system = FGordonSystem.from_document(document)
        self.assertEqual(FGordonSystem.from_document(system.to_document()).f, system.f)
        with_normal_form = dict(document, normal_form=system.normal_form.to_document())
        self.assertEqual(FGordonSystem.from_document(with_normal_form).f, system.f)
        wrong = dict(document, normal_form=dict(system.normal_form.to_document(), E=["0", "0"]))
        with self.assertRaises(DocumentError):
            FGordonSystem.from_document(wrong)
        with self.assertRaises(DocumentError):
            FGordonSystem.from_document({"m": 2})
        with self.assertRaises(ValueError):
            FGordonSystem.from_document({"m": 1, "f": ["u_xy"]})


class TestInvariants(unittest.TestCase):
    def test_example1(self):
        triple = invariants(FGordonSystem.from_strings(["v", "u"]))
        self.assertEqual(triple.H, ((0, 1), (1, 0)))
        self.assertEqual(triple.K, ((0, 1), (1, 0)))
        self.assertTrue(triple.s_vanishes())

    def test_wave_systems(self):
        for m in (1, 2, 3):
            triple = invariants(wave_system(m))
            self.assertTrue(all(e == 0 for row in triple.H for e in row))
            self.assertTrue(triple.h_equals_k())
            self.assertTrue(triple.s_vanishes())

    def test_lie_system_torsion(self):
        for algebra in (so3(), solvable4()):
            triple = invariants(lie_system(algebra))
            m = algebra.m
            for c in range(m):
                for a in range(m):
                    for b in range(m):
                        self.assertEqual(triple.S[c][a][b], 2 * algebra.c[c][a][b])

    def test_lie_system_h(self):
        algebra = so3()
        system = lie_system(algebra)
        triple = invariants(system)
        C, m, jet = algebra.c, algebra.m, system.jet
        for g in range(m):
            for a in range(m):
                expected = sum((C[g][e][s] * C[s][a][t] - C[g][a][s] * C[s][e][t]) * jet.u_x[e] * jet.u_y[t]
                               for e in range(m) for s in range(m) for t in range(m))
                self.assertTrue(is_zero(triple.H[g][a] - expected))

    def test_gradient_free_systems(self):
        system = FGordonSystem.from_strings(["x*y*u + v^2", "u*v"])
        triple = invariants(system)
        for a in range(2):
            for c in range(2):
                derivative = sympy.diff(system.f[a], system.jet.u[c])
                self.assertTrue(is_zero(triple.H[a][c] - derivative))
                self.assertTrue(is_zero(triple.K[a][c] - derivative))
        self.assertTrue(triple.s_vanishes())

    def test_antisymmetry_of_s(self):
        rng = default_rng(11)
        for _ in range(50):
            system = random_normal_form_system(rng, m=int(rng.integers(1, 4)))
            S = invariants(system).S
            m = system.m
            for c in range(m):
                for a in range(m):
                    for b in range(m):
                        self.assertEqual(normalize(S[c][a][b] + S[c][b][a]), 0)

    def test_h_and_k_are_quadratic_in_the_gradients(self):
        rng = default_rng(12)
        for _ in range(20):
            system = random_normal_form_system(rng, m=2)
            triple = invariants(system)
            for matrix in (triple.H, triple.K):
                for row in matrix:
                    for entry in row:
                        self.assertFalse(entry.free_symbols & set(system.jet.second_order))
                        self.assertTrue(all(sum(k) <= 2 for k in gradient_coefficients(entry, system.jet)))


class TestGradientCoefficients(unittest.TestCase):
    def test_extraction(self):
        jet = JetSpace(["u", "v"])
        coefficients = gradient_coefficients(jet.u_x[0] * jet.u_y[1] + jet.x, jet)
        self.assertEqual(coefficients, {(0, 0, 0, 0): jet.x, (1, 0, 0, 1): 1})
        self.assertEqual(gradient_coefficients(sympy.Integer(0), jet), {})
        self.assertEqual(monomial_string((1, 0, 0, 1), jet), "u_x*v_y")

    def test_sum_reproduces_the_expression(self):
        system = lie_system(so3())
        H = invariants(system).H
        gradients = system.jet.gradients
        for row in H:
            for entry in row:
                total = sum((coefficient * sympy.prod([g**k for g, k in zip(gradients, monomial)])
                             for monomial, coefficient in gradient_coefficients(entry, system.jet).items()),
                            sympy.Integer(0))
                self.assertEqual(normalize(total - entry), 0)

    def test_non_polynomial(self):
        jet = JetSpace(["u"])
        with self.assertRaises(ValueError):
            gradient_coefficients(1 / (1 + jet.u_x[0]), jet)


class TestConnectionForm(unittest.TestCase):
    def test_example1_is_flat(self):
        self.assertTrue(connection_form(FGordonSystem.from_strings(["v", "u"])).is_zero())

    def test_geodesic_system(self):
        jet = JetSpace(["u", "v"])
        gamma = hyperbolic_connection(jet)
        omega = connection_form(geodesic_system(gamma, jet))
        self.assertTrue(all(e == 0 for row in omega.along(X) for e in row))
        self.assertTrue(all(e == 0 for row in omega.along(Y) for e in row))
        for t in range(2):
            component = omega.along(Coordinate(Kind.U, t + 1))
            for s in range(2):
                for a in range(2):
                    self.assertTrue(is_zero(component[s][a] - gamma[s][a][t]))


class TestCurvature(unittest.TestCase):
    def test_flat(self):
        jet = JetSpace(["u", "v"])
        zero = [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]
        self.assertTrue(all(e == 0 for a in curvature(zero, jet) for b in a for c in b for e in c))
        u = jet.u[0]
        one_dimensional = [[[sympy.exp(u), 0], [0, 0]], [[0, 0], [0, 0]]]
        self.assertTrue(all(is_zero(e) for a in curvature(one_dimensional, jet) for b in a for c in b for e in c))

    def test_asymmetric_connection_is_rejected(self):
        jet = JetSpace(["u", "v"])
        with self.assertRaises(ValueError):
            curvature([[[0, 1], [0, 0]], [[0, 0], [0, 0]]], jet)

    def test_sphere(self):
        jet = JetSpace(["u", "v"])
        gamma = sphere_connection(jet)
        R = curvature(gamma, jet)
        u, v = jet.u
        g_vv = 4 / (1 + u**2 + v**2)**2
        # unit sectional curvature: R^u_vuv = g_vv
        self.assertTrue(is_zero(R[0][1][0][1] + g_vv) or is_zero(R[0][1][0][1] - g_vv))
        self.assertFalse(is_zero(R[0][1][0][1]))
        H = invariants(geodesic_system(gamma, jet)).H
        predicted = curvature_contraction(R, jet)
        for c in range(2):
            for a in range(2):
                self.assertTrue(is_zero(H[c][a] - predicted[c][a]))

    def test_hyperbolic_plane(self):
        jet = JetSpace(["u", "v"])
        gamma = hyperbolic_connection(jet)
        H = invariants(geodesic_system(gamma, jet)).H
        predicted = curvature_contraction(curvature(gamma, jet), jet)
        for c in range(2):
            for a in range(2):
                self.assertTrue(is_zero(H[c][a] - predicted[c][a]))


if __name__ == "__main__":
    unittest.main()
