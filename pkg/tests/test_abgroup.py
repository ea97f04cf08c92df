import unittest
import random
import sys
import os

from hypothesis import given, settings, strategies as st
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors as sympy_invariant_factors

# Add src to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '../src')))

from rackhom.abgroup import (
    FgAbGroup, GroupHom, IntMatrix, add, check_hom, compose, direct_sum, elementary_divisors,
    enumerate_elements, enumerate_homs, format_group, hom_count, homology_at, image, invert_iso,
    is_iso, is_zero_hom, kernel, make_hom, negate, parse_group, smith_form, snf,
)
from rackhom.errors import HomomorphismError, InfiniteGroupError, ParseError


@st.composite
def int_matrices(draw, max_dim=8):
    rows = draw(st.integers(1, max_dim))
    cols = draw(st.integers(1, max_dim))
    entries = draw(st.lists(st.integers(-9, 9), min_size=rows * cols, max_size=rows * cols))
    return IntMatrix(rows, cols, tuple(entries))


def random_matrix(rnd, rows, cols):
    return IntMatrix(rows, cols, tuple(rnd.randint(-9, 9) for _ in range(rows * cols)))


class TestSmithForm(unittest.TestCase):
    def assert_smith_postconditions(self, m):
        form = smith_form(m)
        u, d, v = form.u, form.d, form.v
        self.assertEqual(u @ m @ v, d)
        self.assertTrue(d.is_diagonal())
        self.assertIn(u.determinant(), (1, -1))
        self.assertIn(v.determinant(), (1, -1))
        self.assertEqual(u @ form.u_inv, IntMatrix.identity(m.rows))
        self.assertEqual(v @ form.v_inv, IntMatrix.identity(m.cols))
        diag = form.diagonal
        self.assertTrue(all(x > 0 for x in diag))
        for a, b in zip(diag, diag[1:]):
            self.assertEqual(b % a, 0)

    def test_two_by_two_example(self):
        """[[2,4],[6,8]] reduces to diag(2,4)"""
        m = IntMatrix.from_rows([[2, 4], [6, 8]])
        u, d, v = snf(m)
        self.assertEqual(d, IntMatrix.from_rows([[2, 0], [0, 4]]))
        self.assertEqual(abs(m.determinant()), 8)
        self.assertEqual(u @ m @ v, d)

    def test_zero_and_identity(self):
        """Zero and identity matrices are already in normal form"""
        zero = IntMatrix.zeros(2, 3)
        _, d, _ = snf(zero)
        self.assertEqual(d, zero)
        ident = IntMatrix.identity(3)
        _, d, _ = snf(ident)
        self.assertEqual(d, ident)

    @settings(max_examples=300, deadline=None)
    @given(int_matrices())
    def test_postconditions_random(self, m):
        """U*M*V = D with unimodular transforms and a divisibility chain"""
        self.assert_smith_postconditions(m)

    def test_postconditions_large(self):
        """A handful of matrices up to 40x40"""
        rnd = random.Random(7)
        for rows, cols in [(40, 40), (40, 25), (25, 40), (33, 38)]:
            self.assert_smith_postconditions(random_matrix(rnd, rows, cols))

    def test_monomial_matrices(self):
        """Signed scattered pivots with a divisibility chain skip the general reduction"""
        m = IntMatrix.from_rows([[0, 0, -4, 0], [2, 0, 0, 0], [0, 0, 0, 0]])
        self.assertTrue(m.is_monomial())
        self.assert_smith_postconditions(m)
        self.assertEqual(smith_form(m).diagonal, (2, 4))
        coprime = IntMatrix.from_rows([[3, 0], [0, 2]])
        self.assert_smith_postconditions(coprime)
        self.assertEqual(smith_form(coprime).diagonal, (1, 6))
        self.assertFalse(IntMatrix.from_rows([[1, 1], [0, 1]]).is_monomial())

    def test_large_diagonal_relations(self):
        group = FgAbGroup(5000, IntMatrix.scalar(5000, 2))
        self.assertEqual(group.invariants, (0, (2,) * 5000))
        v = tuple(2 if i == 4321 else 0 for i in range(5000))
        self.assertTrue(group.contains_relation(v))
        self.assertFalse(group.contains_relation(v[:-1] + (1,)))

    def test_sparse_storage(self):
        m = IntMatrix(2, 3, (0, 5, 0, -1, 0, 0))
        self.assertEqual(m.nnz(), 2)
        self.assertEqual(m.sparse_rows(), ({1: 5}, {0: -1}))
        self.assertEqual(m.entries, (0, 5, 0, -1, 0, 0))
        self.assertEqual(m.column(1), (5, 0))
        self.assertEqual(m.transpose().row(1), (5, 0))
        self.assertEqual(m.select_columns([1, 1, 0]).to_rows(), [[5, 5, 0], [0, 0, -1]])
        self.assertEqual(m.hstack(m).row(0), (0, 5, 0, 0, 5, 0))
        self.assertTrue((m - m).is_zero())
        self.assertEqual(hash(m), hash(IntMatrix.from_columns([(0, -1), (5, 0), (0, 0)], 2)))
        self.assertEqual(m, IntMatrix.from_sparse(2, 3, [{1: 5, 2: 0}, {0: -1}]))

    @settings(max_examples=100, deadline=None)
    @given(int_matrices(max_dim=6))
    def test_invariants_match_sympy(self, m):
        """Non-unit invariant factors agree with sympy"""
        dm = DomainMatrix([[ZZ(v) for v in row] for row in m.to_rows()], (m.rows, m.cols), ZZ)
        theirs = sorted(abs(int(d)) for d in sympy_invariant_factors(dm) if abs(int(d)) > 1)
        ours = sorted(d for d in smith_form(m, transforms=False).diagonal if d > 1)
        self.assertEqual(ours, theirs)


class TestFgAbGroup(unittest.TestCase):
    def test_invariants(self):
        """Invariant factors from presentations"""
        self.assertEqual(FgAbGroup.from_relator_columns(1, [[3]]).invariants, (0, (3,)))
        self.assertEqual(FgAbGroup.free(2).invariants, (2, ()))
        self.assertEqual(FgAbGroup.from_relator_columns(2, [[2, 0], [0, 4]]).invariants, (0, (2, 4)))
        self.assertEqual(FgAbGroup.from_relator_columns(2, [[2, 0], [0, 3]]).invariants, (0, (6,)))

    def test_normal_form_equality(self):
        """Elements of Z/6 compare modulo relations"""
        g = FgAbGroup.cyclic(6)
        self.assertTrue(g.equal((7,), (1,)))
        self.assertFalse(g.equal((2,), (3,)))
        self.assertTrue(g.contains_relation((-12,)))

    def test_parse_and_format(self):
        """Group strings round-trip through parse_group"""
        for text in ["0", "Z", "Z^2", "Z/3", "Z^2 + Z/2 + Z/4", "Z/2 + Z/6"]:
            self.assertEqual(format_group(parse_group(text)), text)
        self.assertEqual(format_group(parse_group("(Z/2)^3")), "Z/2 + Z/2 + Z/2")
        self.assertEqual(format_group(parse_group("Z/2 + Z/3")), "Z/6")
        with self.assertRaises(ParseError):
            parse_group("Q/2")

    def test_elementary_divisors(self):
        g = parse_group("Z/12 + Z/2")
        self.assertEqual(elementary_divisors(g), [2, 3, 4])

    def test_order(self):
        self.assertEqual(parse_group("Z/2 + Z/4").order(), 8)
        with self.assertRaises(InfiniteGroupError):
            parse_group("Z").order()


class TestHoms(unittest.TestCase):
    def test_check_hom(self):
        """Well-definedness against source relators"""
        z4, z2, z = FgAbGroup.cyclic(4), FgAbGroup.cyclic(2), FgAbGroup.free(1)
        self.assertTrue(check_hom(GroupHom(z4, z4, IntMatrix.scalar(1, 2))).ok)
        result = check_hom(GroupHom(z2, z, IntMatrix.identity(1)))
        self.assertFalse(result.ok)
        self.assertEqual(result.failed_relator, 0)
        self.assertFalse(check_hom(GroupHom(z2, z4, IntMatrix.identity(1))).ok)
        with self.assertRaises(HomomorphismError):
            make_hom(z2, z4, IntMatrix.identity(1))

    def test_iso(self):
        """x2 on Z/4 is not invertible, x3 is"""
        z4 = FgAbGroup.cyclic(4)
        self.assertFalse(is_iso(GroupHom.scalar(z4, 2)))
        three = GroupHom.scalar(z4, 3)
        self.assertTrue(is_iso(three))
        inverse = invert_iso(three)
        self.assertTrue(z4.equal(compose(inverse, three)((1,)), (1,)))

    def test_algebra(self):
        """f - f = 0 and composition of scalars"""
        z6 = FgAbGroup.cyclic(6)
        f = GroupHom.scalar(z6, 5)
        self.assertTrue(is_zero_hom(add(f, negate(f))))
        self.assertTrue(is_zero_hom(compose(GroupHom.scalar(z6, 2), GroupHom.scalar(z6, 3))))

    def test_kernel_and_image(self):
        z = FgAbGroup.free(1)
        double = GroupHom(z, z, IntMatrix.scalar(1, 2))
        self.assertTrue(kernel(double).group.is_trivial())
        self.assertEqual(image(double).invariants, (1, ()))
        z4 = FgAbGroup.cyclic(4)
        self.assertEqual(kernel(GroupHom.scalar(z4, 2)).group.invariants, (0, (2,)))

    def test_enumeration(self):
        """Elements and homs of small finite groups"""
        self.assertEqual(len(enumerate_elements(FgAbGroup.cyclic(3))), 3)
        self.assertEqual(len(enumerate_homs(FgAbGroup.cyclic(2), FgAbGroup.cyclic(4))), 2)
        self.assertEqual(len(enumerate_homs(FgAbGroup.free(1), FgAbGroup.cyclic(2))), 2)
        self.assertEqual(hom_count(parse_group("Z + Z/4"), parse_group("Z/2 + Z/6")), 12 * 4)
        with self.assertRaises(InfiniteGroupError):
            enumerate_elements(FgAbGroup.free(1))


class TestDirectSumAndHomology(unittest.TestCase):
    def test_direct_sum(self):
        self.assertTrue(direct_sum([]).group.is_trivial())
        both = direct_sum([FgAbGroup.free(1), FgAbGroup.cyclic(2)])
        self.assertEqual(both.group.invariants, (1, (2,)))
        threes = direct_sum([FgAbGroup.cyclic(3)] * 3)
        self.assertEqual(threes.group.invariants, (0, (3, 3, 3)))
        self.assertEqual(len(threes.injections), 3)

    def test_homology_at(self):
        """ker g / im f on small examples"""
        z, z2 = FgAbGroup.free(1), FgAbGroup.free(2)
        zero = FgAbGroup.trivial()
        self.assertEqual(homology_at(GroupHom.zero(z, z2), GroupHom.zero(z2, z)).invariants, (2, ()))
        self.assertEqual(
            homology_at(GroupHom(z, z, IntMatrix.scalar(1, 2)), GroupHom.zero(z, zero)).invariants,
            (0, (2,)),
        )
        self.assertEqual(
            homology_at(GroupHom.zero(z, z2), GroupHom(z2, z, IntMatrix.from_rows([[1, 1]]))).invariants,
            (1, ()),
        )

    def test_homology_of_isolated_group(self):
        """0 -> G -> 0 gives G back"""
        zero = FgAbGroup.trivial()
        for text in ["Z", "Z/5", "Z^2 + Z/2 + Z/4"]:
            g = parse_group(text)
            got = homology_at(GroupHom.zero(zero, g), GroupHom.zero(g, zero))
            self.assertEqual(got.invariants, g.invariants)


if __name__ == '__main__':
    unittest.main()
