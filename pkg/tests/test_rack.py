import unittest
import sys
import os

from hypothesis import given, strategies as st

# Add src to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../src')))

from rackhom.errors import ParseError, PreconditionError, RackAxiomError
from rackhom.rack import (
    OperatorWord, RackTable, alexander_rack, builtin, check_axioms, conjugation_rack, cyclic_rack,
    dihedral_rack, invert, is_connected, is_homomorphism, orbits, symmetric_group_table,
    trivial_rack, validate,
)

R3 = [[0, 2, 1], [2, 1, 0], [1, 0, 2]]


class TestAxioms(unittest.TestCase):
    def test_dihedral_three_is_quandle(self):
        """The R3 table is a quandle"""
        rack = validate(R3)
        self.assertTrue(rack.is_quandle)
        self.assertEqual(rack, dihedral_rack(3))

    def test_cyclic_rack_is_not_quandle(self):
        rack = validate([[(a + 1) % 3 for _ in range(3)] for a in range(3)])
        self.assertFalse(rack.is_quandle)

    def test_perturbed_entry_fails_r1(self):
        """Changing table[0][1] to 0 breaks column 1"""
        table = [row[:] for row in R3]
        table[0][1] = 0
        report = check_axioms(table)
        self.assertFalse(report.ok)
        self.assertEqual(report.axiom, "R1")
        self.assertEqual(report.witness, (1,))
        self.assertIn("R1 violated at column 1", report.message)
        with self.assertRaises(RackAxiomError):
            validate(table)

    def test_every_single_entry_perturbation_fails(self):
        """All 18 one-entry mutations of R3 violate R1 or R2"""
        count = 0
        for a in range(3):
            for b in range(3):
                for v in range(3):
                    if v == R3[a][b]:
                        continue
                    table = [row[:] for row in R3]
                    table[a][b] = v
                    report = check_axioms(table)
                    self.assertFalse(report.ok)
                    self.assertIn(report.axiom, ("R1", "R2"))
                    count += 1
        self.assertEqual(count, 18)

    def test_malformed_tables(self):
        """Out-of-range entries are axiom failures; bad shapes are parse errors"""
        self.assertEqual(check_axioms([[0, 3], [1, 1]]).axiom, "range")
        with self.assertRaises(ParseError):
            check_axioms([[0, 1], [1]])
        with self.assertRaises(ParseError):
            check_axioms([])

    def test_gauntlet(self):
        """Every built-in family validates"""
        racks = [
            dihedral_rack(3), dihedral_rack(5), trivial_rack(1), trivial_rack(2), trivial_rack(3),
            cyclic_rack(3), cyclic_rack(4), alexander_rack(5, 2), builtin("conj", 3),
        ]
        for rack in racks:
            self.assertTrue(check_axioms(rack.table).ok, rack.name)


class TestFamilies(unittest.TestCase):
    def test_tables(self):
        self.assertEqual([list(r) for r in dihedral_rack(3).table], R3)
        self.assertEqual([list(r) for r in trivial_rack(2).table], [[0, 0], [1, 1]])

    def test_conjugation_s3(self):
        """Conj(S3) is an order-6 quandle with classes of sizes 1, 3, 2"""
        rack = conjugation_rack(symmetric_group_table(3), name="conjS3")
        self.assertEqual(rack.order, 6)
        self.assertTrue(rack.is_quandle)
        self.assertEqual(sorted(len(o) for o in orbits(rack)), [1, 2, 3])

    def test_alexander_needs_unit(self):
        with self.assertRaises(PreconditionError):
            alexander_rack(4, 2)
        self.assertEqual(alexander_rack(5, 2).name, "alexander5,2")

    def test_builtin_errors(self):
        with self.assertRaises(ParseError):
            builtin("klein", 4)
        with self.assertRaises(ParseError):
            builtin("dihedral", 3, 4)
        with self.assertRaises(PreconditionError):
            builtin("trivial", 0)

    def test_dict_round_trip(self):
        rack = alexander_rack(5, 3)
        self.assertEqual(RackTable.from_dict(rack.to_dict()), rack)
        with self.assertRaises(ParseError):
            RackTable.from_dict({"order": 4, "table": R3})


class TestStructure(unittest.TestCase):
    def test_orbits(self):
        self.assertEqual(orbits(trivial_rack(2)), [[0], [1]])
        self.assertEqual(orbits(dihedral_rack(3)), [[0, 1, 2]])
        self.assertTrue(is_connected(dihedral_rack(3)))
        self.assertEqual(len(orbits(dihedral_rack(4))), 2)

    def test_inverse_operation(self):
        """op_inv undoes op and the inverted rack is a rack"""
        for rack in [cyclic_rack(4), alexander_rack(5, 2), builtin("conj", 3)]:
            for a in rack.elements:
                for b in rack.elements:
                    self.assertEqual(rack.op_inv(rack.op(a, b), b), a)
            star = invert(rack)
            self.assertTrue(check_axioms(star.table).ok)
            self.assertEqual(invert(star), rack)

    def test_homomorphisms(self):
        r3 = dihedral_rack(3)
        self.assertTrue(is_homomorphism([0, 1, 2], r3, r3))
        self.assertTrue(is_homomorphism([0, 0, 0], r3, trivial_rack(1)))
        # x -> 1 - x is affine, so the transposition 0 <-> 1 is an automorphism
        self.assertTrue(is_homomorphism([1, 0, 2], r3, r3))
        self.assertFalse(is_homomorphism([1, 0, 0], r3, r3))


class TestOperatorWords(unittest.TestCase):
    def test_free_reduction(self):
        w = OperatorWord.of([(1, 1), (2, 1), (2, -1)])
        self.assertEqual(w, OperatorWord.letter(1))
        with self.assertRaises(ValueError):
            OperatorWord(((1, 1), (1, -1)))

    @given(st.lists(st.tuples(st.integers(0, 4), st.sampled_from([1, -1])), max_size=6),
           st.integers(0, 4))
    def test_word_then_inverse_is_identity(self, letters, x):
        """Acting by w and then w^-1 fixes every element"""
        rack = alexander_rack(5, 2)
        w = OperatorWord.of(letters)
        self.assertEqual(rack.act(rack.act(x, w), w.inverse()), x)
        self.assertEqual(len(w * w.inverse()), 0)

    @given(st.lists(st.tuples(st.integers(0, 2), st.sampled_from([1, -1])), max_size=5),
           st.lists(st.tuples(st.integers(0, 2), st.sampled_from([1, -1])), max_size=5))
    def test_product_acts_in_order(self, first, second):
        """(uv) acts as u then v"""
        rack = dihedral_rack(3)
        u, v = OperatorWord.of(first), OperatorWord.of(second)
        for x in rack.elements:
            self.assertEqual(rack.act(x, u * v), rack.act(rack.act(x, u), v))


if __name__ == '__main__':
    unittest.main()
