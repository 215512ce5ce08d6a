import unittest
from fractions import Fraction

from fixtures import load_algebra


def _coarse(name: str, weight_bound: int):
    from bar import bar_complex
    from hopf import coarse_moduli

    return coarse_moduli(bar_complex(load_algebra(name), weight_bound=weight_bound), weight_bound)


class FiniteGroupTest(unittest.TestCase):
    def test_symmetric_group_functions_recover_the_group(self) -> None:
        from hopf import finite_group_hopf, group_points, hopf_validate, is_isomorphic_table, symmetric_group_table

        table, names = symmetric_group_table(3)
        h = finite_group_hopf(table, names, "S3")

        self.assertTrue(hopf_validate(h).ok, hopf_validate(h).render())
        points = group_points(h)
        self.assertEqual(points.order, 6)
        self.assertTrue(points.report.ok, points.report.render())
        self.assertTrue(is_isomorphic_table(points.table, table))

    def test_cyclic_and_trivial_groups(self) -> None:
        from hopf import cyclic_group_table, finite_group_hopf, group_points, hopf_validate, is_isomorphic_table

        for order in (1, 2, 3):
            with self.subTest(order=order):
                table = cyclic_group_table(order)
                h = finite_group_hopf(table)
                self.assertTrue(hopf_validate(h).ok)
                points = group_points(h)
                self.assertEqual(points.order, order)
                self.assertTrue(is_isomorphic_table(points.table, table))

    def test_symmetric_group_is_not_abelian(self) -> None:
        from hopf import cyclic_group_table, is_isomorphic_table, symmetric_group_table

        table, _ = symmetric_group_table(3)

        self.assertFalse(is_isomorphic_table(table, cyclic_group_table(6)))

    def test_bad_tables_are_rejected(self) -> None:
        from domain.reports import NotAGroupError
        from hopf import check_group_table

        with self.assertRaises(NotAGroupError):
            check_group_table([])
        with self.assertRaises(NotAGroupError):
            check_group_table([[0, 1], [1, 1]])
        with self.assertRaises(NotAGroupError):
            check_group_table([[0, 2], [1, 0]])


class CoarseModuliTest(unittest.TestCase):
    def test_exterior_algebra_gives_divided_power_hopf_algebra(self) -> None:
        from hopf import hopf_validate

        h = _coarse("exterior", 3)

        self.assertEqual(h.basis, ("h0.0", "h1.0", "h2.0", "h3.0"))
        self.assertEqual(h.weight_dimensions(), {0: 1, 1: 1, 2: 1, 3: 1})
        self.assertTrue(hopf_validate(h).ok, hopf_validate(h).render())

        u = h.index("h1.0")
        one = dict(h.unit)
        primitive = {}
        for a, c in one.items():
            primitive[(a, u)] = primitive.get((a, u), 0) + c
            primitive[(u, a)] = primitive.get((u, a), 0) + c
        self.assertEqual(h.comultiply({u: Fraction(1)}), primitive)
        self.assertEqual(h.apply_antipode({u: Fraction(1)}), {u: Fraction(-1)})
        self.assertEqual(h.apply_counit({u: Fraction(1)}), 0)
        self.assertEqual(h.apply_counit(one), 1)

    def test_two_generator_hopf_algebra_validates(self) -> None:
        from hopf import hopf_validate

        h = _coarse("two_generator", 4)

        self.assertEqual(h.weight_dimensions(), {0: 1, 1: 1, 2: 2, 3: 3, 4: 5})
        self.assertTrue(hopf_validate(h).ok, hopf_validate(h).render())

    def test_unit_algebra_gives_trivial_group(self) -> None:
        from hopf import group_points

        h = _coarse("unit", 2)

        self.assertEqual(h.dimension, 1)
        self.assertEqual(group_points(h).order, 1)

    def test_capped_polynomial_algebra_has_trivial_degree_zero(self) -> None:
        from bar import bar_complex
        from hopf import coarse_moduli, hopf_validate

        h = coarse_moduli(bar_complex(load_algebra("kx"), cap=4), 0)

        self.assertEqual(h.dimension, 1)
        self.assertTrue(hopf_validate(h).ok)

    def test_stable_capped_bars_have_only_the_empty_word_in_degree_zero(self) -> None:
        from bar import bar_complex
        from dga import Generator, StructConstAlgebra
        from domain.reports import CapInstabilityError
        from hopf import coarse_moduli

        high = StructConstAlgebra("degree_two", [Generator("one", 0), Generator("y", 2)], unit="one")
        cases = [
            bar_complex(load_algebra("kx"), cap=4),
            bar_complex(load_algebra("dual_numbers"), cap=4),
            bar_complex(load_algebra("rank3"), cap=3),
            bar_complex(high, cap=4),
        ]
        for b in cases:
            with self.subTest(algebra=b.algebra.name):
                self.assertTrue(b.is_stable(0))
                words = [u for w in b.weights() for u in b.words(w, 0)]
                self.assertEqual([u.length for u in words], [0])
                self.assertEqual(coarse_moduli(b, 0).dimension, 1)

        with self.assertRaises(CapInstabilityError):
            coarse_moduli(bar_complex(load_algebra("two_generator"), cap=2), 2)

    def test_extraction_refusals(self) -> None:
        from bar import bar_complex
        from domain.reports import CapError, CapInstabilityError
        from hopf import coarse_moduli

        with self.assertRaises(CapError):
            coarse_moduli(bar_complex(load_algebra("exterior"), weight_bound=2), 3)
        with self.assertRaises(CapInstabilityError):
            coarse_moduli(bar_complex(load_algebra("dual_numbers"), cap=0), 0)

    def test_polynomial_hopf_algebra_has_infinitely_many_points(self) -> None:
        from domain.reports import InfiniteVarietyError
        from hopf import group_points

        with self.assertRaises(InfiniteVarietyError) as ctx:
            group_points(_coarse("exterior", 2))
        self.assertEqual(ctx.exception.dimension, 1)

    def test_too_many_unknowns_are_refused(self) -> None:
        from domain.reports import OracleSizeError
        from hopf import group_points

        with self.assertRaises(OracleSizeError):
            group_points(_coarse("two_generator", 4), max_variables=4)


class HopfValidationTest(unittest.TestCase):
    def test_non_coassociative_comultiplication_is_reported(self) -> None:
        from domain.reports import ViolationKind
        from hopf import HopfAlgebra, hopf_validate

        one = Fraction(1)
        h = HopfAlgebra(
            name="broken",
            basis=("a", "b"),
            weights=(0, 0),
            unit={0: one},
            mult={(0, 0): {0: one}, (0, 1): {1: one}, (1, 0): {1: one}},
            comult={0: {(0, 0): one}, 1: {(1, 1): one, (0, 1): one}},
            counit={0: one},
            antipode={0: {0: one}},
        )

        self.assertIn(ViolationKind.COASSOCIATIVITY, hopf_validate(h).kinds())

    def test_text_form_round_trips(self) -> None:
        from formats import parse_hopf, render_hopf
        from hopf import finite_group_hopf, hopf_validate, symmetric_group_table

        table, names = symmetric_group_table(3)
        for h in (finite_group_hopf(table, names, "S3"), _coarse("two_generator", 3)):
            with self.subTest(name=h.name):
                lines = render_hopf(h) + hopf_validate(h).render()
                self.assertEqual(parse_hopf(lines), h)


if __name__ == "__main__":
    unittest.main()
