import unittest
import sys
import os

# Add src to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../src')))

from rackhom.abgroup import FgAbGroup, IntMatrix
from rackhom.errors import BudgetExceededError, InfiniteGroupError, OracleMismatchError, PreconditionError
from rackhom.formats import module_from_dict
from rackhom.homology import Direction, Theory, build_complex, ext_group, homology_groups
from rackhom.oracles import (
    RankReport, RankRow, matrix_rank, oracle_factor_sets, oracle_mod_p_ranks, oracle_trivial_boundary,
    require_ext_agreement, require_rank_agreement, z_independence_report,
)
from rackhom.rack import builtin, cyclic_rack, dihedral_rack, trivial_rack
from rackhom.rmod import alexander_left, alexander_right, dihedral_left, trivial_left, trivial_right

Z = FgAbGroup.free(1)


class TestFactorSets(unittest.TestCase):
    def test_trivial_rack_of_order_one(self):
        t1 = trivial_rack(1)
        self.assertEqual(oracle_factor_sets(t1, trivial_left(t1, FgAbGroup.cyclic(2))), (2, 1, 2))

    def test_agrees_with_ext(self):
        """The enumerated quotient |Z|/|B| matches the order of Ext"""
        cases = [
            (dihedral_rack(3), lambda r: trivial_left(r, FgAbGroup.cyclic(3))),
            (trivial_rack(2), lambda r: trivial_left(r, FgAbGroup.cyclic(2))),
            (dihedral_rack(3), lambda r: alexander_left(r, 3, 2)),
        ]
        for rack, make in cases:
            module = make(rack)
            _, _, order = oracle_factor_sets(rack, module)
            self.assertEqual(ext_group(rack, module).order(), order)

    def test_preconditions(self):
        r3 = dihedral_rack(3)
        with self.assertRaises(InfiniteGroupError):
            oracle_factor_sets(r3, trivial_left(r3, Z))
        with self.assertRaises(PreconditionError):
            oracle_factor_sets(r3, trivial_right(r3, FgAbGroup.cyclic(2)))
        with self.assertRaises(BudgetExceededError):
            oracle_factor_sets(r3, trivial_left(r3, FgAbGroup.cyclic(3)), budget=100)
        r5 = dihedral_rack(5)
        with self.assertRaises(BudgetExceededError):
            oracle_factor_sets(r5, trivial_left(r5, FgAbGroup.cyclic(2)))


class TestRanks(unittest.TestCase):
    def test_matrix_rank(self):
        m = IntMatrix.from_rows([[2, 0], [0, 3]])
        self.assertEqual(matrix_rank(m), 2)
        self.assertEqual(matrix_rank(m, 2), 1)
        self.assertEqual(matrix_rank(m, 3), 1)
        self.assertEqual(matrix_rank(m, 5), 2)
        self.assertEqual(matrix_rank(IntMatrix.zeros(0, 4)), 0)

    def test_homology_ranks_agree(self):
        r3 = dihedral_rack(3)
        for theory in (Theory.RACK, Theory.QUANDLE):
            cx = build_complex(r3, trivial_right(r3, Z), 0, 4, theory)
            report = oracle_mod_p_ranks(cx)
            self.assertTrue(report.ok, [r for r in report.rows if not r.agrees])

    def test_cohomology_ranks_agree(self):
        c3 = cyclic_rack(3)
        cx = build_complex(c3, trivial_left(c3, Z), 0, 4, direction=Direction.COHOMOLOGY)
        self.assertTrue(oracle_mod_p_ranks(cx).ok)

    def test_trivial_rack_of_order_one_through_degree_five(self):
        t1 = trivial_rack(1)
        cx = build_complex(t1, trivial_right(t1, Z), 0, 6)
        self.assertEqual([str(d) for d in homology_groups(cx).degrees], ["Z"] * 6)
        report = oracle_mod_p_ranks(cx)
        self.assertTrue(report.ok, [r for r in report.rows if not r.agrees])
        self.assertEqual(len(report.rows), 4 * 6)
        for n in range(1, 7):
            self.assertEqual(oracle_trivial_boundary(t1, n), cx.maps[n].matrix)

    def test_first_homology_across_racks(self):
        """H_1 = Z^{#orbits}, confirmed by ranks and by the face formula"""
        cases = [
            (trivial_rack(2), "Z^2"), (cyclic_rack(4), "Z"),
            (builtin("conj", 3), "Z^3"), (dihedral_rack(3), "Z"),
        ]
        for rack, expected in cases:
            cx = build_complex(rack, trivial_right(rack, Z), 0, 2)
            self.assertEqual(str(homology_groups(cx)[1]), expected, rack.name)
            self.assertTrue(oracle_mod_p_ranks(cx).ok, rack.name)
            for n in (1, 2):
                self.assertEqual(oracle_trivial_boundary(rack, n), cx.maps[n].matrix, rack.name)

    def test_second_homology_of_r3(self):
        r3 = dihedral_rack(3)
        cx = build_complex(r3, trivial_right(r3, Z), 0, 3)
        self.assertEqual(str(homology_groups(cx)[2]), "Z")
        self.assertTrue(oracle_mod_p_ranks(cx).ok)
        self.assertEqual(oracle_trivial_boundary(r3, 3), cx.maps[3].matrix)

    def test_r3_through_degree_four(self):
        r3 = dihedral_rack(3)
        cx = build_complex(r3, trivial_right(r3, Z), 0, 5)
        report = oracle_mod_p_ranks(cx)
        self.assertTrue(report.ok, [r for r in report.rows if not r.agrees])

    def test_needs_free_chain_groups(self):
        r3 = dihedral_rack(3)
        cx = build_complex(r3, trivial_right(r3, FgAbGroup.cyclic(2)), 0, 2)
        with self.assertRaises(PreconditionError):
            oracle_mod_p_ranks(cx)

    def test_torsion_coefficients_rejected(self):
        r3 = dihedral_rack(3)
        cx = build_complex(r3, alexander_right(r3, 3, 2), 0, 2)
        with self.assertRaises(PreconditionError):
            oracle_mod_p_ranks(cx)

class TestAgreement(unittest.TestCase):
    def test_rank_disagreement_raises(self):
        report = RankReport([RankRow(0, 0, 1, 1), RankRow(2, 3, 0, 1)])
        with self.assertRaises(OracleMismatchError) as ctx:
            require_rank_agreement(report)
        self.assertEqual(ctx.exception.exit_code, 1)
        self.assertEqual(ctx.exception.details, [RankRow(2, 3, 0, 1)])
        self.assertIn("GF(3)", str(ctx.exception))

    def test_rank_agreement_passes_through(self):
        r3 = dihedral_rack(3)
        report = oracle_mod_p_ranks(build_complex(r3, trivial_right(r3, Z), 0, 3))
        self.assertIs(require_rank_agreement(report), report)

    def test_ext_disagreement_raises(self):
        r3 = dihedral_rack(3)
        module = trivial_left(r3, FgAbGroup.cyclic(3))
        counts = oracle_factor_sets(r3, module)
        self.assertEqual(require_ext_agreement(ext_group(r3, module), counts), counts)
        with self.assertRaises(OracleMismatchError):
            require_ext_agreement(FgAbGroup.cyclic(9), counts)
        with self.assertRaises(OracleMismatchError):
            require_ext_agreement(FgAbGroup.free(1), counts)



class TestTrivialBoundary(unittest.TestCase):
    def test_matches_assembled_complex(self):
        r3 = dihedral_rack(3)
        cx = build_complex(r3, trivial_right(r3, Z), 0, 3)
        for n in range(1, 4):
            self.assertEqual(oracle_trivial_boundary(r3, n), cx.maps[n].matrix)
        c3 = cyclic_rack(3)
        cx = build_complex(c3, trivial_right(c3, Z), 2, 3)
        self.assertEqual(oracle_trivial_boundary(c3, 3), cx.maps[3].matrix)


class TestZIndependence(unittest.TestCase):
    def test_homogeneous_modules(self):
        r3, r5 = dihedral_rack(3), dihedral_rack(5)
        for rack, module in [
            (r3, trivial_left(r3, Z)),
            (r3, alexander_left(r3, 3, 2)),
            (r5, dihedral_left(r5, 5)),
        ]:
            report = z_independence_report(rack, module)
            self.assertTrue(report.cohomology_independent, report.cohomology)
            self.assertEqual(sorted(report.cohomology), list(range(rack.order)))

    def test_trivial_coefficients_compare_homology(self):
        r3 = dihedral_rack(3)
        report = z_independence_report(r3, trivial_left(r3, Z), max_degree=2)
        self.assertEqual(report.homology[0], ["Z", "Z"])
        self.assertTrue(report.independent)

    def test_explicit_module_reports_cohomology_only(self):
        t2 = trivial_rack(2)
        data = {
            "variance": "left",
            "groups": ["Z", "Z/2"],
            "phi": [[[[1]], [[1]]], [[[1]], [[1]]]],
            "psi": [[[[0]], [[0]]], [[[0]], [[0]]]],
        }
        report = z_independence_report(t2, module_from_dict(data, t2))
        self.assertEqual(report.homology, {})
        self.assertEqual(report.cohomology[0], report.cohomology[1])

    def test_needs_left_module(self):
        r3 = dihedral_rack(3)
        with self.assertRaises(PreconditionError):
            z_independence_report(r3, trivial_right(r3, Z))


if __name__ == '__main__':
    unittest.main()
