import unittest
import sys
import os
import time

# Add src to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../src')))

from rackhom.abgroup import FgAbGroup, compose, format_group, is_zero_hom
from rackhom.errors import PreconditionError, VarianceMismatchError
from rackhom.homology import (
    Direction, Theory, boundary_homology, build_complex, check_augmentation, coboundary,
    cocycle_representatives, derivations, enumerate_basis, ext_group, first_cohomology,
    homology_groups, principal_derivations,
)
from rackhom.rack import builtin, cyclic_rack, dihedral_rack, trivial_rack
from rackhom.rmod import (
    alexander_left, alexander_right, dihedral_left, dihedral_right, trivial_left, trivial_right,
)

Z = FgAbGroup.free(1)
Z2 = FgAbGroup.cyclic(2)


def right_modules(rack):
    return [
        trivial_right(rack, Z), trivial_right(rack, Z2),
        alexander_right(rack, 3, 2), dihedral_right(rack, 5),
    ]


def left_modules(rack):
    return [
        trivial_left(rack, Z), trivial_left(rack, Z2),
        alexander_left(rack, 3, 2), dihedral_left(rack, 5),
    ]


def homology_strings(rack, module, top, theory=Theory.RACK):
    cx = build_complex(rack, module, 0, top + 1, theory, Direction.HOMOLOGY)
    return [str(d) for d in homology_groups(cx).degrees]


class TestBasis(unittest.TestCase):
    def test_counts(self):
        r3 = dihedral_rack(3)
        self.assertEqual(len(enumerate_basis(r3, 2)), 9)
        self.assertEqual(len(enumerate_basis(r3, 2, Theory.QUANDLE)), 6)
        self.assertEqual(len(enumerate_basis(trivial_rack(1), 3, Theory.QUANDLE)), 0)
        self.assertEqual(len(enumerate_basis(r3, 0)), 3)

    def test_bases(self):
        """The base of (x1, ..., xn) is x1^{x2...xn}"""
        r3 = dihedral_rack(3)
        for s in enumerate_basis(r3, 3):
            a, b, c = s.entries
            self.assertEqual(s.base, r3.op(r3.op(a, b), c))


class TestBoundaries(unittest.TestCase):
    def test_trivial_rack_of_order_one(self):
        """Every boundary over T1 with trivial coefficients vanishes"""
        t1 = trivial_rack(1)
        for n in range(1, 5):
            self.assertTrue(boundary_homology(t1, trivial_right(t1, Z), n).matrix.is_zero())

    def test_ranks(self):
        r3 = dihedral_rack(3)
        cx = build_complex(r3, trivial_right(r3, Z), 0, 4)
        self.assertEqual(cx.ranks(), [3, 3, 9, 27, 81])
        cx = build_complex(r3, trivial_right(r3, Z), 0, 3, Theory.QUANDLE)
        self.assertEqual(cx.ranks(), [3, 3, 6, 12])

    def test_square_zero_grid(self):
        """build_complex asserts d o d = 0 through degree 5 on every rack and module"""
        started = time.monotonic()
        for rack in [dihedral_rack(3), cyclic_rack(3), trivial_rack(2), builtin("conj", 3)]:
            for module in right_modules(rack):
                build_complex(rack, module, 0, 5)
            for module in left_modules(rack):
                build_complex(rack, module, rack.order - 1, 5, direction=Direction.COHOMOLOGY)
        self.assertLess(time.monotonic() - started, 30)

    def test_square_zero_other_base(self):
        for rack in [dihedral_rack(3), cyclic_rack(3), trivial_rack(2)]:
            for module in right_modules(rack):
                build_complex(rack, module, rack.order - 1, 5)

    def test_square_zero_quandle(self):
        """Degenerate chains form a subcomplex for quandle modules through degree 4"""
        for rack in [dihedral_rack(3), trivial_rack(2), builtin("conj", 3)]:
            for module in right_modules(rack):
                build_complex(rack, module, 0, 4, Theory.QUANDLE)
            for module in left_modules(rack):
                build_complex(rack, module, 0, 4, Theory.QUANDLE, Direction.COHOMOLOGY)

    def test_top_chain_group_stays_sparse(self):
        conj = builtin("conj", 3)
        cx = build_complex(conj, trivial_right(conj, Z2), 0, 5)
        self.assertEqual(cx.ranks()[5], 7776)
        self.assertEqual(cx.groups[5].rels.nnz(), 7776)
        self.assertLessEqual(cx.maps[5].matrix.nnz(), 7776 * 9)

    def test_composites_vanish(self):
        r3 = dihedral_rack(3)
        module = alexander_left(r3, 3, 2)
        for n in range(1, 4):
            self.assertTrue(is_zero_hom(compose(coboundary(r3, module, n + 1, 1), coboundary(r3, module, n, 1))))

    def test_preconditions(self):
        r3, c3 = dihedral_rack(3), cyclic_rack(3)
        with self.assertRaises(VarianceMismatchError):
            build_complex(r3, trivial_left(r3, Z), 0, 2)
        with self.assertRaises(PreconditionError):
            build_complex(c3, trivial_right(c3, Z), 0, 2, Theory.QUANDLE)
        with self.assertRaises(PreconditionError):
            build_complex(r3, trivial_right(r3, Z), 3, 2)

    def test_augmentation(self):
        r3 = dihedral_rack(3)
        self.assertTrue(check_augmentation(build_complex(r3, trivial_right(r3, Z), 0, 2)))


class TestHomologyGroups(unittest.TestCase):
    def test_first_homology_counts_orbits(self):
        """H_1 with trivial Z coefficients is free on the orbits"""
        cases = [
            (dihedral_rack(3), "Z"), (trivial_rack(2), "Z^2"),
            (cyclic_rack(4), "Z"), (builtin("conj", 3), "Z^3"),
        ]
        for rack, expected in cases:
            self.assertEqual(homology_strings(rack, trivial_right(rack, Z), 1)[1], expected, rack.name)

    def test_trivial_rack_of_order_one(self):
        t1 = trivial_rack(1)
        self.assertEqual(homology_strings(t1, trivial_right(t1, Z), 5), ["Z"] * 6)

    def test_second_homology_of_r3(self):
        r3 = dihedral_rack(3)
        self.assertEqual(homology_strings(r3, trivial_right(r3, Z), 2)[1:], ["Z", "Z"])

    def test_r3_through_degree_five_is_quick(self):
        """C_5 has rank 243; the full run stays well inside ten seconds"""
        r3 = dihedral_rack(3)
        started = time.monotonic()
        cx = build_complex(r3, trivial_right(r3, Z), 0, 5)
        result = homology_groups(cx)
        elapsed = time.monotonic() - started
        self.assertEqual(cx.ranks()[5], 243)
        self.assertEqual([str(d) for d in result.degrees[1:3]], ["Z", "Z"])
        self.assertEqual(len(result.degrees), 5)
        self.assertLess(elapsed, 10)

    def test_quandle_homology_of_r3(self):
        """H_2^Q(R3) = 0 and H_3^Q(R3) has 3-torsion"""
        r3 = dihedral_rack(3)
        cx = build_complex(r3, trivial_right(r3, Z), 0, 4, Theory.QUANDLE)
        result = homology_groups(cx)
        self.assertEqual(result[2].free, 0)
        self.assertEqual(result[2].torsion, ())
        self.assertTrue(any(d % 3 == 0 for d in result[3].torsion))

    def test_cohomology_with_z3(self):
        r3 = dihedral_rack(3)
        cx = build_complex(r3, trivial_left(r3, FgAbGroup.cyclic(3)), 0, 3, direction=Direction.COHOMOLOGY)
        self.assertEqual(homology_groups(cx)[2].order(), 3)

    def test_workers_do_not_change_results(self):
        r3 = dihedral_rack(3)
        cx = build_complex(r3, alexander_right(r3, 3, 2), 1, 4)
        self.assertEqual(homology_groups(cx, workers=3).to_dict(), homology_groups(cx).to_dict())

    def test_result_dict(self):
        t1 = trivial_rack(1)
        cx = build_complex(t1, trivial_right(t1, Z), 0, 2)
        data = homology_groups(cx).to_dict()
        self.assertEqual(data["H"][0], {"n": 0, "free": 1, "torsion": []})
        self.assertEqual(data["metadata"]["direction"], "homology")

    def test_representatives(self):
        r3 = dihedral_rack(3)
        cx = build_complex(r3, trivial_right(r3, Z), 0, 3)
        reps = cocycle_representatives(cx, 1)
        self.assertEqual(len(reps), 1)
        self.assertEqual(len(reps[0]), cx.groups[1].gens)


class TestDerivationsAndExt(unittest.TestCase):
    def test_derivations_over_t1(self):
        t1 = trivial_rack(1)
        module = trivial_left(t1, Z2)
        self.assertEqual(format_group(derivations(t1, module)), "Z/2")
        self.assertEqual(format_group(principal_derivations(t1, module)), "0")
        self.assertEqual(format_group(first_cohomology(t1, module)), "Z/2")

    def test_ext_values(self):
        t1, r3 = trivial_rack(1), dihedral_rack(3)
        self.assertEqual(format_group(ext_group(t1, trivial_left(t1, Z2))), "Z/2")
        self.assertEqual(ext_group(r3, trivial_left(r3, FgAbGroup.cyclic(3))).order(), 3)

    def test_first_cohomology_independent_of_base(self):
        r3 = dihedral_rack(3)
        for module in [trivial_left(r3, Z), alexander_left(r3, 3, 2)]:
            groups = {format_group(first_cohomology(r3, module, z)) for z in range(3)}
            self.assertEqual(len(groups), 1)


if __name__ == '__main__':
    unittest.main()
