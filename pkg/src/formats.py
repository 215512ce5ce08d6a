"""文本格式：代数描述文件（解析 / 渲染）、上同调表与 Hopf 结构常数。

代数文件逐行书写，`#` 之后为注释：

    algebra <name> kind free|structconst [mixed-tate]
    provenance <任意文本>
    gen <name> deg <int> [wt <int>]
    basis <name> deg <int> [wt <int>] [unit]
    d <name> = <多项式>
    aug <name> = <有理数>
    mul <a> <b> = <线性组合>

mixed-tate 头部要求每个 gen/basis 行都写出 wt。
"""

from __future__ import annotations

import re
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from dga import AlgebraKind, AugmentedDGA, FreeGCAlgebra, Generator, StructConstAlgebra
from domain.reports import ParseError, ValidationReport
from exactlin import format_rat
from hopf import HopfAlgebra
from logger_config import get_logger

logger = get_logger("Formats")

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_INT = re.compile(r"[+-]?\d+")
_TOKEN = re.compile(r"\s*(?:(?P<number>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[-+*^]))")

Factor = tuple[str, int]
Term = tuple[Fraction, list[Factor]]


# ---------------------------------------------------------------------------
# 多项式 / 线性组合
# ---------------------------------------------------------------------------

def _tokenize(text: str, line: int, column: int) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        match = _TOKEN.match(stripped, pos)
        if not match or match.end() == pos:
            raise ParseError(f"无法识别的字符 {stripped[pos]!r}", line, column + pos)
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append((kind, match.group(kind), column + start))
        pos = match.end()
    return tokens


def parse_polynomial(text: str, line: int = 0, column: int = 1) -> list[Term]:
    """`2*x^2*y - 1/2*z + 3` → [(系数, [(因子, 幂), ...]), ...]；单独的 `0` 给出空列表。"""
    tokens = _tokenize(text, line, column)
    if not tokens:
        raise ParseError("缺少表达式", line, column)
    terms: list[Term] = []
    i = 0
    expect_sign = False
    while i < len(tokens):
        sign = Fraction(1)
        if tokens[i][0] == "op" and tokens[i][1] in "+-":
            sign = Fraction(-1) if tokens[i][1] == "-" else Fraction(1)
            i += 1
        elif expect_sign:
            raise ParseError(f"缺少 + 或 -：{tokens[i][1]!r}", line, tokens[i][2])
        if i >= len(tokens):
            raise ParseError("表达式在运算符后结束", line, column + len(text))
        coefficient = Fraction(1)
        factors: list[Factor] = []
        seen_number = False
        while i < len(tokens) and tokens[i][0] == "number":
            try:
                coefficient *= Fraction(tokens[i][1])
            except ZeroDivisionError:
                raise ParseError("分母为零", line, tokens[i][2]) from None
            seen_number = True
            i += 1
            if i < len(tokens) and tokens[i][:2] == ("op", "*"):
                i += 1
                if i >= len(tokens) or tokens[i][0] == "op":
                    raise ParseError("* 之后应为名字或数", line, tokens[i - 1][2])
            else:
                break
        while i < len(tokens) and tokens[i][0] == "name":
            name = tokens[i][1]
            i += 1
            power = 1
            if i < len(tokens) and tokens[i][:2] == ("op", "^"):
                if i + 1 >= len(tokens) or tokens[i + 1][0] != "number" or "/" in tokens[i + 1][1]:
                    raise ParseError("^ 之后应为非负整数", line, tokens[i][2])
                power = int(tokens[i + 1][1])
                i += 2
            factors.append((name, power))
            if i < len(tokens) and tokens[i][:2] == ("op", "*"):
                i += 1
                if i >= len(tokens) or tokens[i][0] != "name":
                    raise ParseError("* 之后应为名字", line, tokens[i - 1][2])
            else:
                break
        if not factors and not seen_number:
            where = tokens[i][2] if i < len(tokens) else column + len(text)
            raise ParseError("缺少项", line, where)
        if coefficient:
            terms.append((sign * coefficient, factors))
        expect_sign = True
    return terms


# ---------------------------------------------------------------------------
# 代数文件
# ---------------------------------------------------------------------------

@dataclass
class ParsedAlgebra:
    """解析结果，保留每条声明的源行号以便把校验违例定位回文件。"""

    algebra: AugmentedDGA
    lines: dict[tuple, int] = field(default_factory=dict)
    header_line: int = 1

    def locate(self, witness: tuple) -> Optional[int]:
        for key in witness:
            if isinstance(key, tuple) and key in self.lines:
                return self.lines[key]
        for key in witness:
            if isinstance(key, tuple) and len(key) >= 2:
                for kind in ("gen", "basis"):
                    if (kind, key[1]) in self.lines:
                        return self.lines[(kind, key[1])]
        return None

    def validate(self) -> ValidationReport:
        return self.algebra.validate().with_lines(self.locate)


@dataclass
class _Declaration:
    name: str
    degree: int
    weight: Optional[int]
    unit: bool
    line: int


def _strip_comment(raw: str) -> str:
    return raw.split("#", 1)[0].rstrip()


def _column_of(raw: str, token: str, start: int = 0) -> int:
    return raw.find(token, start) + 1


def _parse_int(word: str, raw: str, line: int) -> int:
    if not _INT.fullmatch(word):
        raise ParseError(f"应为整数: {word!r}", line, _column_of(raw, word))
    return int(word)


def _parse_name(word: str, raw: str, line: int) -> str:
    if not _NAME.fullmatch(word):
        raise ParseError(f"非法名字: {word!r}", line, _column_of(raw, word))
    return word


def _split_assignment(raw: str, line: int, keyword: str) -> tuple[list[str], str, int]:
    if "=" not in raw:
        raise ParseError(f"{keyword} 行缺少 =", line, len(raw) + 1)
    left, right = raw.split("=", 1)
    return left.split()[1:], right, len(left) + 2


def _parse_declaration(words: list[str], raw: str, line: int, keyword: str, mixed_tate: bool) -> _Declaration:
    if len(words) < 4 or words[2] != "deg":
        raise ParseError(f"{keyword} 行格式应为 `{keyword} <name> deg <int> [wt <int>]`", line, 1)
    name = _parse_name(words[1], raw, line)
    degree = _parse_int(words[3], raw, line)
    weight: Optional[int] = None
    unit = False
    rest = words[4:]
    i = 0
    while i < len(rest):
        if rest[i] == "wt":
            if i + 1 >= len(rest):
                raise ParseError("wt 之后缺少整数", line, len(raw) + 1)
            weight = _parse_int(rest[i + 1], raw, line)
            i += 2
        elif rest[i] == "unit" and keyword == "basis":
            unit = True
            i += 1
        else:
            raise ParseError(f"意外的记号 {rest[i]!r}", line, _column_of(raw, rest[i], len(" ".join(words[:4]))))
    if mixed_tate and weight is None:
        raise ParseError(f"mixed-tate 代数的 {keyword} {name} 必须给出 wt", line, len(raw) + 1)
    return _Declaration(name, degree, weight, unit, line)


def parse_algebra_text(text: str, source: str = "<string>") -> ParsedAlgebra:
    header: Optional[tuple[str, AlgebraKind, bool, int]] = None
    provenance: list[str] = []
    declarations: list[_Declaration] = []
    differentials: dict[str, tuple[str, int, int]] = {}
    augmentations: dict[str, tuple[Fraction, int]] = {}
    products: dict[tuple[str, str], tuple[str, int, int]] = {}
    lines: dict[tuple, int] = {}

    for number, original in enumerate(text.splitlines(), start=1):
        raw = _strip_comment(original)
        words = raw.split()
        if not words:
            continue
        keyword = words[0]
        if header is None and keyword != "algebra":
            raise ParseError("文件必须以 `algebra <name> kind ...` 开头", number, 1)
        if keyword == "algebra":
            if header is not None:
                raise ParseError("重复的 algebra 头部", number, 1)
            if len(words) < 4 or words[2] != "kind":
                raise ParseError("头部格式应为 `algebra <name> kind free|structconst [mixed-tate]`", number, 1)
            name = _parse_name(words[1], raw, number)
            try:
                kind = AlgebraKind(words[3])
            except ValueError:
                raise ParseError(f"未知的 kind: {words[3]!r}", number, _column_of(raw, words[3])) from None
            flags = words[4:]
            for flag in flags:
                if flag != "mixed-tate":
                    raise ParseError(f"未知的标志: {flag!r}", number, _column_of(raw, flag))
            header = (name, kind, "mixed-tate" in flags, number)
        elif keyword == "provenance":
            provenance.append(raw.split(None, 1)[1] if len(words) > 1 else "")
        elif keyword in ("gen", "basis"):
            expected = "gen" if header[1] == AlgebraKind.FREE else "basis"
            if keyword != expected:
                raise ParseError(f"{header[1].value} 代数应使用 {expected} 行", number, 1)
            declaration = _parse_declaration(words, raw, number, keyword, header[2])
            if (keyword, declaration.name) in lines:
                raise ParseError(f"重复声明 {declaration.name}", number, _column_of(raw, declaration.name))
            declarations.append(declaration)
            lines[(keyword, declaration.name)] = number
        elif keyword == "d":
            names, rhs, column = _split_assignment(raw, number, "d")
            if len(names) != 1:
                raise ParseError("d 行格式应为 `d <name> = <多项式>`", number, 1)
            name = _parse_name(names[0], raw, number)
            if name in differentials:
                raise ParseError(f"重复的 d {name}", number, 1)
            differentials[name] = (rhs, number, column)
            lines[("d", name)] = number
        elif keyword == "aug":
            names, rhs, column = _split_assignment(raw, number, "aug")
            if len(names) != 1:
                raise ParseError("aug 行格式应为 `aug <name> = <有理数>`", number, 1)
            name = _parse_name(names[0], raw, number)
            try:
                value = Fraction(rhs.strip())
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"应为有理数: {rhs.strip()!r}", number, column) from None
            augmentations[name] = (value, number)
            lines[("aug", name)] = number
        elif keyword == "mul":
            if header[1] != AlgebraKind.STRUCT:
                raise ParseError("mul 行只用于 structconst 代数", number, 1)
            names, rhs, column = _split_assignment(raw, number, "mul")
            if len(names) != 2:
                raise ParseError("mul 行格式应为 `mul <a> <b> = <线性组合>`", number, 1)
            key = (_parse_name(names[0], raw, number), _parse_name(names[1], raw, number))
            if key in products:
                raise ParseError(f"重复的 mul {key[0]} {key[1]}", number, 1)
            products[key] = (rhs, number, column)
            lines[("mul", *key)] = number
        else:
            raise ParseError(f"未知的行类型 {keyword!r}", number, 1)

    if header is None:
        raise ParseError("空文件：没有 algebra 头部", 1, 1)
    name, kind, mixed_tate, header_line = header
    known = {d.name: d for d in declarations}

    def require_known(symbol: str, line: int) -> None:
        if symbol not in known:
            raise ParseError(f"未声明的名字 {symbol!r}", line, 1)

    for symbol, (_, line) in augmentations.items():
        require_known(symbol, line)
    for symbol, (_, line, _) in differentials.items():
        require_known(symbol, line)

    generators = [Generator(d.name, d.degree, d.weight or 0) for d in declarations]
    text_provenance = "\n".join(provenance)
    if kind == AlgebraKind.FREE:
        terms = {}
        for symbol, (rhs, line, column) in differentials.items():
            parsed = parse_polynomial(rhs, line, column)
            for _, factors in parsed:
                for factor, _ in factors:
                    require_known(factor, line)
            terms[symbol] = parsed
        algebra: AugmentedDGA = FreeGCAlgebra.from_terms(
            name,
            generators,
            terms,
            {symbol: value for symbol, (value, _) in augmentations.items()},
            mixed_tate=mixed_tate,
            provenance=text_provenance,
        )
    else:
        units = [d for d in declarations if d.unit]
        if len(units) != 1:
            raise ParseError(f"structconst 代数需要恰好一个 unit 基元素（现有 {len(units)} 个）", header_line, 1)
        unit = units[0].name

        def combo(rhs: str, line: int, column: int) -> dict[str, Fraction]:
            result: dict[str, Fraction] = {}
            for coefficient, factors in parse_polynomial(rhs, line, column):
                if not factors:
                    target = unit
                elif len(factors) == 1 and factors[0][1] == 1:
                    target = factors[0][0]
                    require_known(target, line)
                else:
                    raise ParseError("structconst 的右端只能是基元素的线性组合", line, column)
                result[target] = result.get(target, Fraction(0)) + coefficient
            return {k: v for k, v in result.items() if v}

        table = {key: combo(*value) for key, value in products.items()}
        for (a, b), (_, line, _) in products.items():
            require_known(a, line)
            require_known(b, line)
        degree = {d.name: d.degree for d in declarations}
        for (a, b), value in list(table.items()):
            if (b, a) not in table:
                sign = -1 if (degree[a] * degree[b]) % 2 else 1
                table[(b, a)] = {k: sign * v for k, v in value.items()}
        algebra = StructConstAlgebra(
            name,
            generators,
            unit,
            table,
            {symbol: combo(*value) for symbol, value in differentials.items()},
            {symbol: value for symbol, (value, _) in augmentations.items()},
            mixed_tate=mixed_tate,
            provenance=text_provenance,
        )
    logger.debug(f"解析 {source}: {kind.value} 代数 {name}, {len(declarations)} 个生成元/基元素")
    return ParsedAlgebra(algebra=algebra, lines=lines, header_line=header_line)


def parse_algebra_file(path: str) -> ParsedAlgebra:
    with open(path, encoding="utf-8") as handle:
        return parse_algebra_text(handle.read(), source=path)


def render_algebra_file(a: AugmentedDGA) -> str:
    """渲染为可再次解析的代数文件。"""
    flags = " mixed-tate" if a.mixed_tate else ""
    out = [f"algebra {a.name} kind {a.kind.value}{flags}"]
    for line in a.provenance.splitlines():
        out.append(f"provenance {line}")
    if isinstance(a, FreeGCAlgebra):
        for g in a.generators:
            out.append(f"gen {g.name} deg {g.degree} wt {g.weight}")
        for g in a.generators:
            poly = a.generator_differential(g.name)
            if poly:
                out.append(f"d {g.name} = {a.format_element(poly)}")
        for g in a.generators:
            value = a.augmentation.get(g.name)
            if value:
                out.append(f"aug {g.name} = {format_rat(value)}")
    elif isinstance(a, StructConstAlgebra):
        for e in a.elements:
            marker = " unit" if e.name == a.unit else ""
            out.append(f"basis {e.name} deg {e.degree} wt {e.weight}{marker}")
        names = [e.name for e in a.elements]
        for x in names:
            image = a.d_table.get(x)
            if image:
                out.append(f"d {x} = {a.format_element(image)}")
        for x in names:
            value = a.augmentation.get(x, Fraction(0))
            if x == a.unit and value == 1:
                continue
            if value or x == a.unit:
                out.append(f"aug {x} = {format_rat(value)}")
        for x in names:
            for y in names:
                value = a.products.get((x, y))
                if value:
                    out.append(f"mul {x} {y} = {a.format_element(value)}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# 表格
# ---------------------------------------------------------------------------

def render_table(
    table: Mapping[tuple[int, int], int],
    stability: Optional[Callable[[int], bool]] = None,
) -> list[str]:
    """`weight degree dim [stable|unstable]`，按 (权, 次数) 升序。"""
    lines = []
    for (w, n), dim in sorted(table.items()):
        row = f"{w} {n} {dim}"
        if stability is not None:
            row += " stable" if stability(n) else " unstable"
        lines.append(row)
    return lines


def parse_table(lines: Iterable[str]) -> dict[tuple[int, int], int]:
    table = {}
    for line in lines:
        parts = line.split()
        if len(parts) >= 3 and all(_INT.fullmatch(p) for p in parts[:3]):
            table[(int(parts[0]), int(parts[1]))] = int(parts[2])
    return table


# ---------------------------------------------------------------------------
# Hopf 结构常数
# ---------------------------------------------------------------------------

def _render_vector(h: HopfAlgebra, vector: Mapping[int, Fraction]) -> str:
    return " ".join(f"{format_rat(v)}:{h.basis[i]}" for i, v in sorted(vector.items())) or "0"


def render_hopf(h: HopfAlgebra) -> list[str]:
    bound = "none" if h.weight_bound is None else str(h.weight_bound)
    lines = [f"hopf {h.name} dim {h.dimension} weight-bound {bound}"]
    lines.extend(f"basis {label} {w}" for label, w in zip(h.basis, h.weights))
    lines.append(f"unit {_render_vector(h, h.unit)}")
    for i, value in sorted(h.counit.items()):
        lines.append(f"counit {h.basis[i]} {format_rat(value)}")
    for (i, j), value in sorted(h.mult.items()):
        lines.append(f"mul {h.basis[i]} {h.basis[j]} = {_render_vector(h, value)}")
    for i, pairs in sorted(h.comult.items()):
        terms = " ".join(f"{format_rat(v)}:{h.basis[a]}@{h.basis[b]}" for (a, b), v in sorted(pairs.items()))
        lines.append(f"comul {h.basis[i]} = {terms}")
    for i, image in sorted(h.antipode.items()):
        lines.append(f"antipode {h.basis[i]} = {_render_vector(h, image)}")
    return lines


def parse_hopf(lines: Iterable[str]) -> HopfAlgebra:
    """render_hopf 的逆；忽略校验报告等其它行。"""
    name = ""
    bound: Optional[int] = None
    basis: list[str] = []
    weights: list[int] = []
    raw_lines = [line.strip() for line in lines if line.strip()]
    for line in raw_lines:
        parts = line.split()
        if parts[0] == "hopf" and len(parts) == 6 and parts[2] == "dim":
            name = parts[1]
            bound = None if parts[5] == "none" else int(parts[5])
        elif parts[0] == "basis":
            basis.append(parts[1])
            weights.append(int(parts[2]))
    index = {label: i for i, label in enumerate(basis)}

    def vector(tokens: list[str]) -> dict[int, Fraction]:
        result = {}
        for token in tokens:
            if token == "0":
                continue
            coefficient, label = token.split(":", 1)
            result[index[label]] = Fraction(coefficient)
        return result

    unit: dict[int, Fraction] = {}
    counit: dict[int, Fraction] = {}
    mult: dict[tuple[int, int], dict[int, Fraction]] = {}
    comult: dict[int, dict[tuple[int, int], Fraction]] = {}
    antipode: dict[int, dict[int, Fraction]] = {}
    for line in raw_lines:
        parts = line.split()
        if parts[0] == "unit":
            unit = vector(parts[1:])
        elif parts[0] == "counit":
            counit[index[parts[1]]] = Fraction(parts[2])
        elif parts[0] == "mul":
            mult[(index[parts[1]], index[parts[2]])] = vector(parts[4:])
        elif parts[0] == "comul":
            pairs = {}
            for token in parts[3:]:
                coefficient, pair = token.split(":", 1)
                left, right = pair.split("@")
                pairs[(index[left], index[right])] = Fraction(coefficient)
            comult[index[parts[1]]] = pairs
        elif parts[0] == "antipode":
            antipode[index[parts[1]]] = vector(parts[3:])
    return HopfAlgebra(
        name=name,
        basis=tuple(basis),
        weights=tuple(weights),
        unit=unit,
        mult=mult,
        comult=comult,
        counit=counit,
        antipode=antipode,
        weight_bound=bound,
    )
