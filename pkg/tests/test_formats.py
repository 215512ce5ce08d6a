import unittest
from fractions import Fraction

from fixtures import ALGEBRA_DIR, algebra_path


class PolynomialTest(unittest.TestCase):
    def test_terms_with_rational_coefficients(self) -> None:
        from formats import parse_polynomial

        self.assertEqual(
            parse_polynomial("2*x^2*y - 1/2*z + 3"),
            [
                (Fraction(2), [("x", 2), ("y", 1)]),
                (Fraction(-1, 2), [("z", 1)]),
                (Fraction(3), []),
            ],
        )
        self.assertEqual(parse_polynomial("-x"), [(Fraction(-1), [("x", 1)])])
        self.assertEqual(parse_polynomial("2*3"), [(Fraction(6), [])])
        self.assertEqual(parse_polynomial("0"), [])

    def test_malformed_polynomials_carry_positions(self) -> None:
        from domain.reports import ParseError
        from formats import parse_polynomial

        for text in ("x +", "1/0", "x y", "x^y", "", "x * 2", "*x"):
            with self.subTest(text=text):
                with self.assertRaises(ParseError) as ctx:
                    parse_polynomial(text, line=4, column=7)
                self.assertEqual(ctx.exception.line, 4)
                self.assertGreaterEqual(ctx.exception.column, 7)


class AlgebraFileTest(unittest.TestCase):
    def _parse(self, text: str):
        from formats import parse_algebra_text

        return parse_algebra_text(text)

    def test_errors_report_line_and_column(self) -> None:
        from domain.reports import ExitCode, ParseError

        with self.assertRaises(ParseError) as ctx:
            self._parse("algebra a kind free\ngen x deg q\n")
        self.assertEqual((ctx.exception.line, ctx.exception.column), (2, 11))
        self.assertEqual(ctx.exception.exit_code, ExitCode.USAGE)
        self.assertTrue(str(ctx.exception).startswith("2:11: "))

    def test_rejected_files(self) -> None:
        from domain.reports import ParseError

        cases = {
            "empty": ("", 1),
            "comments only": ("# nothing\n\n", 1),
            "missing header": ("gen x deg 0\n", 1),
            "missing weight": ("algebra a kind free mixed-tate\ngen x deg 1\n", 2),
            "unknown kind": ("algebra a kind lie\n", 1),
            "wrong keyword": ("algebra a kind structconst\ngen x deg 0\n", 2),
            "duplicate": ("algebra a kind free\ngen x deg 0\ngen x deg 1\n", 3),
            "unknown name": ("algebra a kind free\ngen x deg 0\nd x = y\n", 3),
            "mul in free": ("algebra a kind free\ngen x deg 0\nmul x x = x\n", 3),
            "no unit": ("algebra a kind structconst\nbasis x deg 0\n", 1),
            "bad rational": ("algebra a kind free\ngen x deg 0\naug x = 1/0\n", 3),
            "unknown line": ("algebra a kind free\nrel x = 0\n", 2),
        }
        for label, (text, line) in cases.items():
            with self.subTest(case=label):
                with self.assertRaises(ParseError) as ctx:
                    self._parse(text)
                self.assertEqual(ctx.exception.line, line)

    def test_reverse_products_follow_koszul_sign(self) -> None:
        parsed = self._parse(
            "algebra s kind structconst\n"
            "basis one deg 0 unit\n"
            "basis a deg 1\n"
            "basis b deg 1\n"
            "basis c deg 2\n"
            "basis x deg 0\n"
            "mul a b = c\n"
            "mul x x = 3\n"
            "mul x a = a\n"
        )
        a = parsed.algebra

        self.assertEqual(a.products[("b", "a")], {"c": Fraction(-1)})
        self.assertEqual(a.products[("a", "x")], {"a": Fraction(1)})
        self.assertEqual(a.products[("x", "x")], {"one": Fraction(3)})
        self.assertEqual(parsed.lines[("mul", "a", "b")], 7)

    def test_free_algebra_with_differential(self) -> None:
        parsed = self._parse(
            "algebra koszul kind free  # 注释\n"
            "gen x deg 2 wt 1\n"
            "gen y deg 3 wt 2\n"
            "d y = x^2\n"
        )
        a = parsed.algebra

        self.assertEqual(a.differential(a.gen("y")), a.multiply(a.gen("x"), a.gen("x")))
        self.assertTrue(parsed.validate().ok)

    def test_validation_violations_point_at_source_lines(self) -> None:
        from domain.reports import ViolationKind
        from formats import parse_algebra_file

        report = parse_algebra_file(algebra_path("leibniz_violation")).validate()

        self.assertEqual(report.kinds(), {ViolationKind.LEIBNIZ})
        self.assertEqual({v.line for v in report.violations}, {8})
        self.assertTrue(report.render()[1].startswith("line 8: "))

    def test_fixtures_render_to_a_fixed_point(self) -> None:
        from formats import parse_algebra_file, parse_algebra_text, render_algebra_file

        for path in sorted(ALGEBRA_DIR.glob("*.alg")):
            with self.subTest(path=path.name):
                original = parse_algebra_file(str(path)).algebra
                text = render_algebra_file(original)
                again = parse_algebra_text(text).algebra
                self.assertEqual(render_algebra_file(again), text)
                self.assertEqual(again.name, original.name)
                self.assertEqual(again.mixed_tate, original.mixed_tate)
                self.assertEqual(again.provenance, original.provenance)


class TableTest(unittest.TestCase):
    def test_rows_are_sorted_and_tagged(self) -> None:
        from formats import parse_table, render_table

        table = {(1, 0): 2, (0, -1): 1, (0, 0): 1}
        lines = render_table(table, stability=lambda n: n >= 0)

        self.assertEqual(lines, ["0 -1 1 unstable", "0 0 1 stable", "1 0 2 stable"])
        self.assertEqual(parse_table(lines + ["MATCH"]), table)
        self.assertEqual(render_table(table)[0], "0 -1 1")


if __name__ == "__main__":
    unittest.main()
