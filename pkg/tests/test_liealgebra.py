"""
Tests for structure constants, bi-invariant forms and the Lagrangians of Lie-algebra systems.
"""

import unittest

from varmult.fgordon import DocumentError
from varmult.lagrangians import verify_multiplier
from varmult.liealgebra import (StructureConstants, abelian, biinvariant_forms, heisenberg, is_biinvariant,
                                killing_form, lie_lagrangian, lie_system, nonabelian2, semidirect, so3, solvable4)
from varmult.multipliers import stabilize, unknown_count
from utils import default_rng, functions_in_class, named_algebras, random_lie_algebra


class TestStructureConstants(unittest.TestCase):
    def test_named_algebras_are_lie_algebras(self):
        for algebra in functions_in_class(named_algebras):
            sc = algebra()
            self.assertIsNone(sc.jacobi_violation(), sc)

    def test_bracket_is_antisymmetric(self):
        sc = solvable4()
        rng = default_rng(50)
        for _ in range(20):
            x = [int(v) for v in rng.integers(-3, 4, size=4)]
            y = [int(v) for v in rng.integers(-3, 4, size=4)]
            self.assertEqual(sc.bracket(x, y), [-v for v in sc.bracket(y, x)])

    def test_document_round_trip(self):
        for sc in (so3(), solvable4(), heisenberg(2), semidirect([[1, 2], [0, -1]])):
            again = StructureConstants.from_document(sc.to_document())
            self.assertEqual(again.c, sc.c)

    def test_document_errors(self):
        with self.assertRaises(DocumentError):
            StructureConstants.from_document({"brackets": []})
        with self.assertRaises(DocumentError):
            StructureConstants.from_document({"m": 0})
        with self.assertRaises(DocumentError):
            StructureConstants.from_document({"m": 2, "brackets": [{"i": 1, "j": 3, "coeffs": [1, 0]}]})
        with self.assertRaises(DocumentError):
            StructureConstants.from_document({"m": 2, "brackets": [{"i": 1, "j": 2, "coeffs": ["x", 0]}]})
        with self.assertRaises(DocumentError):
            StructureConstants.from_document({"m": 2, "brackets": [{"i": 1, "j": 2, "coeffs": [1, 0]},
                                                                   {"i": 2, "j": 1, "coeffs": [-1, 0]}]})

    def test_jacobi_violation(self):
        brackets = [{"i": 1, "j": 2, "coeffs": [1, 0, 0]},
                    {"i": 2, "j": 3, "coeffs": [0, 1, 0]},
                    {"i": 3, "j": 1, "coeffs": [0, 0, 1]}]
        with self.assertRaises(ValueError):
            StructureConstants.from_brackets(3, brackets)
        with self.assertRaises(DocumentError):
            StructureConstants.from_document({"m": 3, "brackets": brackets})


class TestForms(unittest.TestCase):
    def test_dimensions(self):
        self.assertEqual(len(biinvariant_forms(so3())), 1)
        self.assertEqual(len(biinvariant_forms(nonabelian2())), 1)
        self.assertEqual(len(biinvariant_forms(solvable4())), 2)
        self.assertEqual(len(biinvariant_forms(heisenberg(1))), 3)
        for m in (1, 2, 3):
            self.assertEqual(len(biinvariant_forms(abelian(m))), unknown_count(m))

    def test_killing_form_is_biinvariant(self):
        for sc in (so3(), nonabelian2(), solvable4(), heisenberg(1)):
            self.assertTrue(is_biinvariant(killing_form(sc), sc))
        rng = default_rng(53)
        for _ in range(20):
            sc = random_lie_algebra(rng)
            self.assertTrue(is_biinvariant(killing_form(sc), sc))

    def test_forms_are_biinvariant(self):
        rng = default_rng(51)
        for _ in range(50):
            sc = random_lie_algebra(rng)
            for M in biinvariant_forms(sc):
                self.assertTrue(is_biinvariant(M, sc))

    def test_asymmetric_matrix(self):
        self.assertFalse(is_biinvariant([[0, 1], [0, 0]], abelian(2)))


class TestLieSystems(unittest.TestCase):
    def test_so3_multipliers(self):
        report = stabilize(lie_system(so3()))
        self.assertEqual(report.dimension, len(biinvariant_forms(so3())))

    def test_named_system_names(self):
        self.assertEqual(lie_system(so3(), names=["p", "q", "r"]).jet.names, ("p", "q", "r"))

    def test_lagrangians_of_random_algebras(self):
        rng = default_rng(52)
        for _ in range(50):
            sc = random_lie_algebra(rng)
            system = lie_system(sc)
            for M in biinvariant_forms(sc):
                self.assertTrue(verify_multiplier(lie_lagrangian(M, sc), M, system))

    def test_not_biinvariant(self):
        with self.assertRaises(ValueError):
            lie_lagrangian([[1, 0], [0, 0]], nonabelian2())


if __name__ == "__main__":
    unittest.main()
