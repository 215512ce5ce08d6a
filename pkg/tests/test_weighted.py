import unittest
from fractions import Fraction

from fixtures import load_algebra


class GradedComplexTest(unittest.TestCase):
    def test_graded_tensor_convolves_weights(self) -> None:
        from complexes import Complex
        from weighted import GradedComplex, convolve_tables, graded_tensor

        a = GradedComplex({0: Complex.unit(), 1: Complex.two_term(0, Fraction(0))})
        b = GradedComplex({1: Complex.two_term(-1, Fraction(0))})

        product = graded_tensor(a, b)
        self.assertEqual(product.weights(), [1, 2])
        self.assertEqual(
            product.cohomology_table(),
            convolve_tables(a.cohomology_table(), b.cohomology_table()),
        )
        self.assertEqual(graded_tensor(a, b, weight_bound=1).weights(), [1])

    def test_unit_is_neutral(self) -> None:
        from complexes import Complex
        from weighted import GradedComplex, dimension_table, graded_tensor

        g = GradedComplex({2: Complex.two_term(1, Fraction(5))})

        self.assertEqual(dimension_table(graded_tensor(GradedComplex.unit(), g)), dimension_table(g))
        self.assertEqual(g.weight_window(), (2, 2))
        self.assertIsNone(GradedComplex().weight_window())

    def test_algebra_pieces_by_weight(self) -> None:
        from weighted import algebra_graded_complex

        graded = algebra_graded_complex(load_algebra("two_generator"), 3)

        self.assertEqual(graded.chain_table(), {(0, 0): 1, (1, 1): 1, (2, 1): 1})


class MixedTateTest(unittest.TestCase):
    def test_weight_zero_generator_is_not_adams_positive(self) -> None:
        from domain.reports import PositivityError
        from weighted import MixedTateInput

        with self.assertRaises(PositivityError):
            MixedTateInput.from_algebra(load_algebra("kx"))

    def test_connectivity_passes_for_positive_degrees(self) -> None:
        from weighted import MixedTateInput, connectivity_check

        for name in ("unit", "exterior", "two_generator"):
            with self.subTest(name=name):
                result = connectivity_check(MixedTateInput.from_algebra(load_algebra(name)), 4)
                self.assertTrue(result.ok, result.report.render())

    def test_connectivity_fails_for_negative_degree(self) -> None:
        from domain.reports import ViolationKind
        from weighted import MixedTateInput, connectivity_check

        result = connectivity_check(MixedTateInput.from_algebra(load_algebra("negative_degree")), 4)

        self.assertFalse(result.ok)
        self.assertEqual(result.report.kinds(), {ViolationKind.CONNECTIVITY})
        self.assertEqual(result.table[(1, -1)], 1)

    def test_equivariant_bar_matches_golden_dimensions(self) -> None:
        from weighted import MixedTateInput, equivariant_bar

        b = equivariant_bar(MixedTateInput.from_algebra(load_algebra("two_generator")), 4)

        self.assertTrue(b.exact)
        self.assertEqual([b.cohomology(w, 0).dimension for w in range(5)], [1, 1, 2, 3, 5])

    def test_equivariant_bar_rejects_negative_bound(self) -> None:
        from domain.reports import CapError
        from weighted import MixedTateInput, equivariant_bar

        with self.assertRaises(CapError):
            equivariant_bar(MixedTateInput.from_algebra(load_algebra("exterior")), -1)


class PeriodifyTest(unittest.TestCase):
    def _polynomial(self):
        from dga import FreeGCAlgebra, Generator

        return FreeGCAlgebra("k_kappa_e", [Generator("k", 0, 1), Generator("e", 1, 1)])

    def test_multiplication_by_kappa_stabilizes(self) -> None:
        from weighted import periodify

        a = self._polynomial()
        kappa = a.gen("k")
        periodic = periodify(a, kappa, (0, 2), degrees=[0, 1])

        self.assertEqual(periodic.kappa_weight, 1)
        self.assertEqual(periodic.dimension_table(), {(w, n): 1 for w in range(3) for n in (0, 1)})
        self.assertEqual(periodic.piece(0, 1).dimension, 1)
        self.assertEqual(periodic.piece(0, 1).stage_weight, 1)
        self.assertEqual(periodic.kappa_map(0, 0).to_dense(), [[Fraction(1)]])

    def test_polynomial_ring_periodifies_to_laurent_model(self) -> None:
        from dga import FreeGCAlgebra, Generator
        from exactlin import rank
        from weighted import periodify

        a = FreeGCAlgebra("kx", [Generator("x", 0, 1)])
        periodic = periodify(a, a.gen("x"), (0, 4), degrees=[0])

        self.assertEqual(periodic.dimension_table(), {(w, 0): 1 for w in range(5)})
        for (w, n), piece in periodic.pieces.items():
            m = periodic.kappa_map(w, n)
            self.assertEqual(m.shape, (piece.dimension, piece.dimension))
            self.assertEqual(rank(m), piece.dimension)

    def test_growing_sequence_is_not_reported_as_stable(self) -> None:
        from dga import FreeGCAlgebra, Generator
        from domain.reports import NonStabilizingError
        from weighted import periodify

        # 权 w 处维数为 w // 2 + 1，乘 x 的映射交替为单射与同构
        a = FreeGCAlgebra("kxy", [Generator("x", 0, 1), Generator("y", 0, 2)])

        with self.assertRaises(NonStabilizingError):
            periodify(a, a.gen("x"), (1, 1), degrees=[0])

    def test_bound_needs_two_steps(self) -> None:
        from domain.reports import PeriodizationError
        from weighted import periodify

        a = self._polynomial()
        with self.assertRaises(PeriodizationError):
            periodify(a, a.gen("k"), (0, 0), degrees=[0], bound=1)

    def test_length_cap_truncates_the_target(self) -> None:
        from dga import FreeGCAlgebra, Generator
        from weighted import periodify

        a = FreeGCAlgebra("kx", [Generator("x", 0, 1)])
        periodic = periodify(a, a.gen("x"), (0, 0), degrees=[0], max_length=2)

        self.assertEqual(periodic.piece(0, 0).dimension, 0)
        self.assertEqual(periodic.piece(0, 0).stage_weight, 3)
        self.assertEqual(periodic.dimension_table(), {})

    def test_nilpotent_kappa_never_stabilizes(self) -> None:
        from dga import Generator, StructConstAlgebra
        from domain.reports import NonStabilizingError
        from weighted import periodify

        a = StructConstAlgebra("nil", [Generator("one", 0, 0), Generator("x", 0, 1)], unit="one")

        with self.assertRaises(NonStabilizingError):
            periodify(a, {"x": Fraction(1)}, (0, 1))

    def test_kappa_preconditions(self) -> None:
        from domain.reports import PeriodizationError
        from weighted import periodify

        a = self._polynomial()
        with self.assertRaises(PeriodizationError):
            periodify(a, a.gen("e"), (0, 1))
        with self.assertRaises(PeriodizationError):
            periodify(a, {}, (0, 1))


if __name__ == "__main__":
    unittest.main()
