import random
import unittest
from fractions import Fraction

from fixtures import random_complex


class CohomologyTest(unittest.TestCase):
    def test_random_complexes_have_expected_cohomology(self) -> None:
        from complexes import check_complex, cohomology_table

        rng = random.Random(2024)
        for trial in range(20):
            c, expected = random_complex(rng)
            with self.subTest(trial=trial):
                self.assertTrue(check_complex(c).ok)
                self.assertEqual(cohomology_table(c), expected)

    def test_parallel_table_matches_serial(self) -> None:
        from complexes import cohomology_table

        c, _ = random_complex(random.Random(3), lo=-3, hi=3)

        self.assertEqual(cohomology_table(c, jobs=4), cohomology_table(c, jobs=1))

    def test_two_term_complex(self) -> None:
        from complexes import Complex, cohomology_table, is_acyclic

        self.assertTrue(is_acyclic(Complex.two_term(0, Fraction(3))))
        self.assertEqual(cohomology_table(Complex.two_term(-1, Fraction(0))), {-1: 1, 0: 1})

    def test_representatives_classify_cycles(self) -> None:
        from complexes import cohomology

        c, expected = random_complex(random.Random(8), lo=0, hi=2, block=2)
        h = cohomology(c, 1)

        self.assertEqual(h.dimension, expected[1])
        for k, rep in enumerate(h.representatives):
            coordinates = h.classify(rep)
            self.assertEqual(coordinates, [Fraction(int(i == k)) for i in range(h.dimension)])

    def test_degree_outside_window_is_rejected(self) -> None:
        from complexes import Complex, cohomology
        from domain.reports import WindowError

        with self.assertRaises(WindowError):
            cohomology(Complex.unit(), 3)
        with self.assertRaises(WindowError):
            Complex(lo=0, hi=0, basis={1: ("a",)})

    def test_d_squared_violation_is_reported(self) -> None:
        from complexes import Complex, check_complex
        from domain.reports import ViolationKind
        from exactlin import SparseMatrix

        one = SparseMatrix.identity(1)
        c = Complex(lo=0, hi=2, basis={0: ("a",), 1: ("b",), 2: ("c",)}, differentials={0: one, 1: one})

        self.assertIn(ViolationKind.D_SQUARED, check_complex(c).kinds())


class ConstructionTest(unittest.TestCase):
    def test_euler_characteristic_is_additive_under_sum_and_multiplicative_under_tensor(self) -> None:
        from complexes import direct_sum, euler_characteristic, tensor

        rng = random.Random(17)
        a, _ = random_complex(rng, lo=-1, hi=1)
        b, _ = random_complex(rng, lo=0, hi=2)

        self.assertEqual(
            euler_characteristic(direct_sum([("a", a), ("b", b)])),
            euler_characteristic(a) + euler_characteristic(b),
        )
        self.assertEqual(euler_characteristic(tensor(a, b)), euler_characteristic(a) * euler_characteristic(b))

    def test_kunneth_for_tensor(self) -> None:
        from complexes import check_complex, cohomology_table, tensor

        rng = random.Random(23)
        for _ in range(5):
            a, ha = random_complex(rng, lo=-1, hi=1)
            b, hb = random_complex(rng, lo=-1, hi=1)
            product = tensor(a, b)
            self.assertTrue(check_complex(product).ok)
            expected: dict[int, int] = {}
            for p, x in ha.items():
                for q, y in hb.items():
                    expected[p + q] = expected.get(p + q, 0) + x * y
            table = cohomology_table(product)
            for n in product.degrees():
                self.assertEqual(table[n], expected.get(n, 0))

    def test_shift_moves_cohomology(self) -> None:
        from complexes import cohomology_table, shift

        c, expected = random_complex(random.Random(31), lo=0, hi=2)
        table = cohomology_table(shift(c, 2))

        self.assertEqual(table, {n - 2: dim for n, dim in expected.items()})

    def test_braiding_is_a_chain_isomorphism(self) -> None:
        from complexes import braiding, check_chain_map, is_quasi_iso

        rng = random.Random(41)
        a, _ = random_complex(rng, lo=0, hi=1)
        b, _ = random_complex(rng, lo=0, hi=1)
        f = braiding(a, b)

        self.assertTrue(check_chain_map(f).ok)
        self.assertTrue(is_quasi_iso(f))

    def test_cone_of_identity_is_acyclic(self) -> None:
        from complexes import ChainMap, cone, is_acyclic, is_quasi_iso

        c, _ = random_complex(random.Random(47), lo=-1, hi=1)

        self.assertTrue(is_acyclic(cone(ChainMap.identity(c))))
        self.assertTrue(is_quasi_iso(ChainMap.identity(c)))

    def test_cone_of_zero_map_splits(self) -> None:
        from complexes import ChainMap, cohomology_table, cone

        rng = random.Random(53)
        for _ in range(4):
            a, ha = random_complex(rng, lo=-1, hi=1)
            b, hb = random_complex(rng, lo=0, hi=2)
            table = cohomology_table(cone(ChainMap.zero(a, b)))
            for n, dim in table.items():
                self.assertEqual(dim, ha.get(n + 1, 0) + hb.get(n, 0))

    def test_cone_euler_characteristic_is_difference(self) -> None:
        from complexes import ChainMap, braiding, cone, euler_characteristic
        from exactlin import SparseMatrix

        rng = random.Random(59)
        maps = []
        for _ in range(3):
            a, _ = random_complex(rng, lo=-1, hi=1)
            b, _ = random_complex(rng, lo=-2, hi=1)
            scale = Fraction(rng.choice([-3, -1, 2, 5]), rng.choice([1, 2]))
            maps.append(ChainMap.zero(a, b))
            maps.append(ChainMap(a, a, {n: SparseMatrix.identity(a.dim(n)).scale(scale) for n in a.degrees() if a.dim(n)}))
            maps.append(braiding(a, b))
        for f in maps:
            self.assertEqual(
                euler_characteristic(cone(f)),
                euler_characteristic(f.target) - euler_characteristic(f.source),
            )

    def test_zero_map_is_quasi_iso_only_between_acyclic_complexes(self) -> None:
        from complexes import ChainMap, Complex, is_quasi_iso

        self.assertFalse(is_quasi_iso(ChainMap.zero(Complex.unit(), Complex.unit())))
        acyclic = Complex.two_term(0, Fraction(1))
        self.assertTrue(is_quasi_iso(ChainMap.zero(acyclic, acyclic)))

    def test_cone_rejects_non_chain_map(self) -> None:
        from complexes import ChainMap, Complex, cone
        from domain.reports import InvalidChainMapError
        from exactlin import SparseMatrix

        source = Complex.two_term(0, Fraction(1))
        target = Complex.two_term(0, Fraction(1))
        broken = ChainMap(source, target, {0: SparseMatrix.identity(1)})

        with self.assertRaises(InvalidChainMapError):
            cone(broken)


class TruncationTest(unittest.TestCase):
    def test_smart_truncations_on_random_complexes(self) -> None:
        from complexes import (
            check_chain_map,
            check_complex,
            cohomology_table,
            truncate_geq,
            truncate_leq,
            truncation_inclusion,
            truncation_projection,
        )

        rng = random.Random(99)
        for trial in range(50):
            c, expected = random_complex(rng, lo=-2, hi=2)
            n = rng.randint(-2, 2)
            with self.subTest(trial=trial, n=n):
                low = truncate_leq(c, n)
                high = truncate_geq(c, n)
                self.assertTrue(check_complex(low).ok)
                self.assertTrue(check_complex(high).ok)
                low_table = cohomology_table(low)
                high_table = cohomology_table(high)
                for k in c.degrees():
                    self.assertEqual(low_table.get(k, 0), expected[k] if k <= n else 0)
                    self.assertEqual(high_table.get(k, 0), expected[k] if k >= n else 0)
                self.assertTrue(check_chain_map(truncation_inclusion(c, n)).ok)
                self.assertTrue(check_chain_map(truncation_projection(c, n)).ok)


if __name__ == "__main__":
    unittest.main()
