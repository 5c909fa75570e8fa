"""
Tests for the classification of two-component systems and for the covariance of the invariants.
"""

import unittest

import sympy

from varmult.classification import (REDUCIBLE_NOTE, CoordinateChange, Subtype, Verdict, build_A, classify,
                                    covariance_check, indefinite_member, trace_obstruction, two_lagrangian_subtype)
from varmult.corpus import load_corpus
from varmult.fgordon import FGordonSystem
from varmult.invariants import invariants
from varmult.multipliers import sampled_rank
from varmult.symbolic.expressions import is_zero
from utils import default_rng, random_change, random_normal_form_system, wave_system


class TestVerdicts(unittest.TestCase):
    def test_three_lagrangians(self):
        system = FGordonSystem.from_strings(["x*y*u", "x*y*v"])
        verdict = classify(system)
        self.assertEqual(verdict.label, Verdict.THREE_LAGRANGIANS)
        self.assertEqual((verdict.lagrangian_count, verdict.multiplier_dimension), (3, 3))
        self.assertEqual(verdict.lambda_, system.jet.x * system.jet.y)
        self.assertEqual(str(classify(wave_system(2))), "THREE_LAGRANGIANS")

    def test_two_lagrangians(self):
        cases = {
            ("v", "u"): Subtype.WAVE,
            ("3*(u + v)^2", "3*(u + v)^2"): Subtype.WAVE,
            ("-v*(1 + x*y)", "u*(1 + x*y)"): Subtype.HARMONIC,
            ("3*u^2", "6*u*v + 2*u"): Subtype.DEGENERATE,
        }
        for sources, subtype in cases.items():
            verdict = classify(FGordonSystem.from_strings(list(sources)))
            self.assertEqual(verdict.label, Verdict.TWO_LAGRANGIANS, sources)
            self.assertEqual(verdict.subtype, subtype, sources)
            self.assertEqual((verdict.rank_A, verdict.lagrangian_count), (1, 2))
            self.assertLess(sympy.Matrix(verdict.witness).det(), 0)

    def test_example1_document(self):
        document = classify(FGordonSystem.from_strings(["v", "u"])).to_document()
        self.assertEqual(document["verdict"], "TWO_LAGRANGIANS(wave)")
        self.assertEqual(document["label"], "TWO_LAGRANGIANS")
        self.assertEqual(document["H_minus_K"], ["0", "0", "0", "0"])
        self.assertEqual(document["multipliers"]["dimension"], 2)

    def test_at_most_one(self):
        verdict = classify(FGordonSystem.from_strings(["v", "x*u"]))
        self.assertEqual(verdict.label, Verdict.AT_MOST_ONE)
        self.assertEqual(verdict.multiplier_dimension, 1)
        self.assertTrue(any(r != 0 for r in verdict.residuals))
        self.assertEqual(classify(FGordonSystem.from_strings(["v", "u_x"])).lagrangian_count, 0)

    def test_trace_obstruction(self):
        system = FGordonSystem.from_strings(["-u_x*v_y", "0"])
        self.assertFalse(trace_obstruction(invariants(system)))
        verdict = classify(system)
        self.assertEqual(verdict.label, Verdict.S_TRACE_OBSTRUCTED)
        self.assertEqual(verdict.lagrangian_count, 0)

    def test_not_normal_form(self):
        verdict = classify(FGordonSystem.from_strings(["u_x^2", "v"]))
        self.assertEqual(verdict.label, Verdict.NOT_NORMAL_FORM)
        self.assertIn("no first-order variational multiplier exists", verdict.notes[0])

    def test_reducible_note(self):
        verdict = classify(FGordonSystem.from_strings(["-u_x", "-v_x"]), degree_cap=0)
        self.assertEqual(verdict.label, Verdict.THREE_LAGRANGIANS)
        self.assertIn(REDUCIBLE_NOTE, verdict.notes)
        self.assertNotIn(REDUCIBLE_NOTE, classify(FGordonSystem.from_strings(["v", "u"])).notes)

    def test_only_two_components(self):
        with self.assertRaises(ValueError):
            classify(wave_system(3))


class TestPencils(unittest.TestCase):
    def test_build_A(self):
        A = build_A(invariants(FGordonSystem.from_strings(["x*y*u", "x*y*v"])))
        self.assertTrue(all(e == 0 for row in A for e in row))
        self.assertEqual(len(build_A(invariants(FGordonSystem.from_strings(["v", "u"])))), 4)

    def test_indefinite_member(self):
        self.assertIsNone(indefinite_member([[1, 0], [0, 0]], [[2, 0], [0, 0]]))
        member = indefinite_member([[1, 0], [0, 1]], [[3, 0], [0, 1]])
        self.assertLess(member.det(), 0)
        self.assertLess(indefinite_member([[1, 0], [0, 1]], [[2, 0], [0, 3]]).det(), 0)

    def test_subtypes_are_invariant_under_rescaling(self):
        for basis, subtype in (
                ([[[0, 1], [1, 0]], [[1, 0], [0, 1]]], Subtype.WAVE),
                ([[[0, -1], [-1, 0]], [[-2, 0], [0, 2]]], Subtype.HARMONIC),
                ([[[-2, 0], [0, 0]], [[0, -1], [-1, 0]]], Subtype.DEGENERATE)):
            self.assertEqual(two_lagrangian_subtype(basis)[0], subtype)
            scaled = [[[3 * e for e in row] for row in basis[0]], [[-e for e in row] for row in basis[1]]]
            self.assertEqual(two_lagrangian_subtype(scaled)[0], subtype)
            swapped = [basis[1], basis[0]]
            self.assertEqual(two_lagrangian_subtype(swapped)[0], subtype)

    def test_no_subtype(self):
        self.assertEqual(two_lagrangian_subtype([[[1, 0], [0, 1]]]), (None, None))
        self.assertEqual(two_lagrangian_subtype([[[1, 0], [0, 0]], [[2, 0], [0, 0]]]), (None, None))
        self.assertEqual(two_lagrangian_subtype([[["x", 0], [0, 1]], [[0, 1], [1, 0]]]), (None, None))


def corpus_systems_with_two_components():
    for case in load_corpus()["cases"]:
        if "system" in case and case["system"]["m"] == 2:
            yield case["name"], FGordonSystem.from_document(case["system"])


class TestCorpusSystems(unittest.TestCase):
    def test_rank_A_vanishes_exactly_for_scalar_H(self):
        for name, system in corpus_systems_with_two_components():
            inv = invariants(system)
            rank_A = sampled_rank(build_A(inv), 3, system.jet.first_order)
            H = inv.H
            scalar = inv.h_equals_k() and is_zero(H[0][1]) and is_zero(H[1][0]) and is_zero(H[0][0] - H[1][1])
            self.assertEqual(rank_A == 0, bool(scalar), name)

    def test_covariance(self):
        rng = default_rng(41)
        for name, system in corpus_systems_with_two_components():
            for _ in range(20):
                self.assertTrue(covariance_check(system, random_change(rng, 2)), name)


class TestCovariance(unittest.TestCase):
    def test_examples(self):
        for sources in (["v", "u"], ["v", "x*u"], ["v", "u_x"], ["-u_x*v_y", "0"]):
            system = FGordonSystem.from_strings(sources)
            self.assertTrue(covariance_check(system, CoordinateChange.of(a=2, b=1, c=-1, d=3, T=[[1, 1], [0, 1]])))

    def test_random_changes(self):
        rng = default_rng(40)
        for _ in range(50):
            system = random_normal_form_system(rng, m=2)
            self.assertTrue(covariance_check(system, random_change(rng, 2)))

    def test_invalid_changes(self):
        with self.assertRaises(ValueError):
            CoordinateChange.of(a=0, m=2)
        with self.assertRaises(ValueError):
            CoordinateChange.of(T=[[1, 1], [1, 1]])

    def test_verdict_is_invariant(self):
        system = FGordonSystem.from_strings(["v", "u"])
        changed = CoordinateChange.of(a=2, T=[[1, 2], [0, 1]]).apply(system)
        self.assertEqual(classify(changed).label, Verdict.TWO_LAGRANGIANS)


if __name__ == "__main__":
    unittest.main()
