import random
import unittest
from fractions import Fraction

from fixtures import load_algebra, random_free_algebra, random_words, rank3_algebra


def _nonzero(table):
    return {key: dim for key, dim in table.items() if dim}


class TorOracleTest(unittest.TestCase):
    def test_polynomial_algebra_matches_two_term_resolution(self) -> None:
        from bar import TruncationMode, bar_complex

        b = bar_complex(load_algebra("kx"), cap=6)
        table = b.cohomology_table()

        self.assertEqual(b.mode, TruncationMode.QUOTIENT)
        self.assertEqual([table.get((0, n), 0) for n in range(0, -5, -1)], [1, 1, 0, 0, 0])
        self.assertTrue(b.is_stable(0))
        self.assertFalse(b.is_stable(-1))

    def test_dual_numbers_have_periodic_tor(self) -> None:
        from bar import TruncationMode, bar_complex

        b = bar_complex(load_algebra("dual_numbers"), cap=6)
        table = b.cohomology_table()

        self.assertEqual(b.mode, TruncationMode.SUBCOMPLEX)
        for n in range(0, -6, -1):
            self.assertEqual(table[(0, n)], 1)
            self.assertTrue(b.is_stable(n))
        self.assertFalse(b.is_stable(-6))

    def test_rank3_tor_is_one_per_degree(self) -> None:
        from bar import bar_complex

        b = bar_complex(rank3_algebra(), cap=5)
        table = b.cohomology_table()

        for n in range(0, -5, -1):
            self.assertEqual(table[(0, n)], 1)

    def test_unit_algebra_has_single_class(self) -> None:
        from bar import bar_complex

        b = bar_complex(load_algebra("unit"), weight_bound=3)

        self.assertEqual(b.cohomology_table(), {(0, 0): 1})

    def test_parallel_assembly_is_identical(self) -> None:
        from bar import bar_complex

        a = load_algebra("dual_numbers")
        serial = bar_complex(a, cap=5, jobs=1)
        parallel = bar_complex(a, cap=5, jobs=4)

        self.assertEqual(serial.cohomology_table(1), parallel.cohomology_table(4))
        for w in serial.weights():
            for n in serial.piece(w).degrees():
                self.assertEqual(serial.words(w, n), parallel.words(w, n))


class LoopSuspensionTest(unittest.TestCase):
    def test_exterior_algebra_bar_is_divided_powers_in_degree_zero(self) -> None:
        from bar import TruncationMode, bar_complex

        b = bar_complex(load_algebra("exterior"), weight_bound=6)

        self.assertEqual(b.mode, TruncationMode.WEIGHTED)
        self.assertEqual(_nonzero(b.cohomology_table()), {(w, 0): 1 for w in range(7)})

    def test_shuffle_square_of_weight_one_class(self) -> None:
        from bar import WordFactory, shuffle

        a = load_algebra("exterior")
        factory = WordFactory(a)
        e = a.generator_monomial("e")

        square = shuffle(factory.element(e), factory.element(e))

        self.assertEqual(square, {factory.word([e, e]): Fraction(2)})

    def test_two_generator_degree_zero_dimensions(self) -> None:
        from bar import bar_complex

        b = bar_complex(load_algebra("two_generator"), weight_bound=4)
        table = b.cohomology_table()

        self.assertEqual([table.get((w, 0), 0) for w in range(5)], [1, 1, 2, 3, 5])


class HopfIdentityTest(unittest.TestCase):
    """200 个随机字上的链级恒等式。"""

    def _samples(self):
        rng = random.Random(1234)
        for index in range(10):
            algebra = random_free_algebra(rng, index)
            factory, words = random_words(rng, algebra, 20)
            yield rng, factory, words

    def test_differential_squares_to_zero(self) -> None:
        for _, factory, words in self._samples():
            for u in words:
                self.assertEqual(factory.differential_of(factory.differential(u)), {})

    def test_differential_is_a_derivation_of_the_shuffle(self) -> None:
        from bar import shuffle_product, shuffle

        for rng, factory, words in self._samples():
            for u, v in zip(words[::2], words[1::2]):
                left = factory.differential_of(shuffle_product(u, v))
                first = shuffle(factory.differential(u), {v: Fraction(1)})
                second = shuffle({u: Fraction(1)}, factory.differential(v))
                sign = -1 if u.degree % 2 else 1
                right = dict(first)
                for word, value in second.items():
                    right[word] = right.get(word, 0) + sign * value
                self.assertEqual(left, {k: c for k, c in right.items() if c})

    def test_shuffle_is_graded_commutative(self) -> None:
        from bar import shuffle_product

        for _, factory, words in self._samples():
            for u, v in zip(words[::2], words[1::2]):
                sign = -1 if (u.degree * v.degree) % 2 else 1
                swapped = {word: sign * c for word, c in shuffle_product(v, u).items()}
                self.assertEqual(shuffle_product(u, v), swapped)

    def test_coproduct_is_coassociative_and_counital(self) -> None:
        from bar import deconcatenation

        for _, factory, words in self._samples():
            for u in words:
                delta = deconcatenation(u)
                left = {}
                right = {}
                for (p, q), c in delta.items():
                    for (p1, p2), d in deconcatenation(p).items():
                        left[(p1, p2, q)] = left.get((p1, p2, q), 0) + c * d
                    for (q1, q2), d in deconcatenation(q).items():
                        right[(p, q1, q2)] = right.get((p, q1, q2), 0) + c * d
                self.assertEqual(left, right)
                self.assertEqual(sum(c for (p, q), c in delta.items() if not p.letters and q == u), 1)

    def test_bialgebra_compatibility(self) -> None:
        from bar import coproduct_of, deconcatenation, shuffle_product, tensor_product

        for _, factory, words in self._samples():
            for u, v in zip(words[::2], words[1::2]):
                left = coproduct_of(shuffle_product(u, v))
                right = tensor_product(deconcatenation(u), deconcatenation(v))
                self.assertEqual(left, right)

    def test_coproduct_commutes_with_differential(self) -> None:
        from bar import coproduct_of, deconcatenation

        for _, factory, words in self._samples():
            for u in words:
                left = coproduct_of(factory.differential(u))
                right = {}
                for (p, q), c in deconcatenation(u).items():
                    for image, d in factory.differential(p).items():
                        right[(image, q)] = right.get((image, q), 0) + c * d
                    sign = -1 if p.degree % 2 else 1
                    for image, d in factory.differential(q).items():
                        right[(p, image)] = right.get((p, image), 0) + sign * c * d
                self.assertEqual(left, {k: c for k, c in right.items() if c})

    def test_weight_is_preserved(self) -> None:
        from bar import deconcatenation, shuffle_product

        for _, factory, words in self._samples():
            for u, v in zip(words[::2], words[1::2]):
                for image in factory.differential(u):
                    self.assertEqual(image.weight, u.weight)
                for image in shuffle_product(u, v):
                    self.assertEqual(image.weight, u.weight + v.weight)
                for p, q in deconcatenation(u):
                    self.assertEqual(p.weight + q.weight, u.weight)

    def test_antipode_is_convolution_inverse_of_identity(self) -> None:
        from bar import convolution_with_antipode, counit_of

        for _, factory, words in self._samples():
            for u in words:
                expected = {factory.empty(): Fraction(1)} if not u.letters else {}
                self.assertEqual(convolution_with_antipode({u: Fraction(1)}, left=True), expected)
                self.assertEqual(convolution_with_antipode({u: Fraction(1)}, left=False), expected)
                self.assertEqual(counit_of({u: Fraction(1)}), Fraction(int(not u.letters)))

    def test_words_from_different_algebras_do_not_mix(self) -> None:
        from bar import WordFactory, shuffle_product
        from domain.reports import MixedAlgebraError

        kx, exterior = load_algebra("kx"), load_algebra("exterior")
        u = WordFactory(kx).word([kx.generator_monomial("x")])
        v = WordFactory(exterior).word([exterior.generator_monomial("e")])

        with self.assertRaises(MixedAlgebraError):
            shuffle_product(u, v)


class RefusalTest(unittest.TestCase):
    def test_unbounded_requests_are_refused(self) -> None:
        from bar import bar_complex
        from domain.reports import CapError, PositivityError

        with self.assertRaises(PositivityError):
            bar_complex(load_algebra("kx"))
        with self.assertRaises(CapError):
            bar_complex(load_algebra("exterior"))
        with self.assertRaises(CapError):
            bar_complex(load_algebra("dual_numbers"), cap=-1)

    def test_invalid_algebra_is_refused(self) -> None:
        from bar import bar_complex
        from domain.reports import AlgebraValidationError

        with self.assertRaises(AlgebraValidationError):
            bar_complex(load_algebra("leibniz_violation"), cap=2)

    def test_word_set_not_closed_under_differential_is_refused(self) -> None:
        from bar import WordFactory, _assemble_piece
        from domain.reports import ExitCode, ToolkitError, TruncationError

        factory = WordFactory(rank3_algebra())
        words = [factory.word(["x", "x"])]

        with self.assertRaises(TruncationError) as raised:
            _assemble_piece(factory, words, drop_missing=False)
        self.assertIsInstance(raised.exception, ToolkitError)
        self.assertEqual(raised.exception.exit_code, ExitCode.REFUSED)
        self.assertEqual(_assemble_piece(factory, words, drop_missing=True).dim(-2), 1)

    def test_cap_at_least_weight_bound_is_exact(self) -> None:
        from bar import TruncationMode, bar_complex

        b = bar_complex(load_algebra("exterior"), cap=5, weight_bound=4)

        self.assertEqual(b.mode, TruncationMode.WEIGHTED)
        self.assertTrue(all(b.is_stable(n) for n in range(-5, 1)))


class CechAndOracleTest(unittest.TestCase):
    def test_cech_level_two_is_convolution_square(self) -> None:
        from bar import cech_level
        from weighted import convolve_tables

        cases = [
            (load_algebra("dual_numbers"), {"cap": 3}),
            (load_algebra("kx"), {"cap": 3}),
            (load_algebra("exterior"), {"weight_bound": 3}),
        ]
        for algebra, options in cases:
            with self.subTest(algebra=algebra.name):
                one = cech_level(algebra, 1, **options)
                two = cech_level(algebra, 2, **options)
                square = convolve_tables(_nonzero(one.table), _nonzero(one.table))
                bound = options.get("weight_bound")
                if bound is not None:
                    square = {key: dim for key, dim in square.items() if key[0] <= bound}
                self.assertEqual(_nonzero(two.table), square)

    def test_cech_level_zero_is_ground_field(self) -> None:
        from bar import cech_level

        self.assertEqual(cech_level(load_algebra("kx"), 0, cap=2).table, {(0, 0): 1})

    def test_normalized_and_moore_models_agree(self) -> None:
        from bar import compare_models

        for algebra in (load_algebra("unit"), load_algebra("dual_numbers"), rank3_algebra()):
            with self.subTest(algebra=algebra.name):
                comparison = compare_models(algebra, 4)
                self.assertTrue(comparison.match, comparison.render())
                self.assertEqual(comparison.render()[-1], "MATCH")
                self.assertTrue(comparison.rows)

    def test_models_agree_on_algebra_with_differential(self) -> None:
        from bar import bar_complex, compare_models
        from dga import Generator, StructConstAlgebra

        # d u = v 使增广理想可缩，两个模型都只剩 (0, 0) 处的一维
        a = StructConstAlgebra(
            "contractible",
            [Generator("one", 0), Generator("u", -1), Generator("v", 0)],
            unit="one",
            differential={"u": {"v": 1}},
        )
        comparison = compare_models(a, 4)

        self.assertTrue(comparison.match, comparison.render())
        self.assertIn((0, 0, 1, 1), comparison.rows)
        self.assertEqual({row[:2] for row in comparison.rows if row[2]}, {(0, 0)})
        self.assertIn((0, -1), {row[:2] for row in comparison.rows})
        self.assertTrue(bar_complex(a, cap=4).piece(0).differentials)

    def test_oracle_refusals(self) -> None:
        from bar import comonadic_oracle
        from domain.reports import CapError, OracleSizeError

        with self.assertRaises(OracleSizeError):
            comonadic_oracle(rank3_algebra(), 6, max_basis=100)
        with self.assertRaises(CapError):
            comonadic_oracle(load_algebra("kx"), 2)


if __name__ == "__main__":
    unittest.main()
