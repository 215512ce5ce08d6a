"""粗模空间：从 bar Hopf dg 代数的 H⁰ 提取经典交换 Hopf 代数，并校验 Hopf 公理。"""

from __future__ import annotations

import itertools
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from sympy import Rational, groebner, solve_poly_system, symbols

from bar import BarComplex, BarElement, antipode_of, coproduct_of, counit_of, shuffle
from complexes import cycles_and_boundaries
from dga import Generator, StructConstAlgebra
from domain.reports import (
    CapError,
    CapInstabilityError,
    InfiniteVarietyError,
    NotAGroupError,
    OracleSizeError,
    ReportBuilder,
    ValidationReport,
    ViolationKind,
)
from exactlin import QuotientBasis, quotient_basis
from logger_config import get_logger

logger = get_logger("Hopf")

Vector = dict[int, Fraction]
PairVector = dict[tuple[int, int], Fraction]


def _add(target: dict, key, value: Fraction) -> None:
    if not value:
        return
    updated = target.get(key, 0) + value
    if updated:
        target[key] = updated
    else:
        target.pop(key, None)


@dataclass(frozen=True)
class HopfAlgebra:
    """有限（或按权截断）的交换 Hopf 代数，结构常数以基下标表示。

    weight_bound 为 None 时没有截断；否则权超过上限的乘积不记录。
    """

    name: str
    basis: tuple[str, ...]
    weights: tuple[int, ...]
    unit: Mapping[int, Fraction]
    mult: Mapping[tuple[int, int], Mapping[int, Fraction]]
    comult: Mapping[int, Mapping[tuple[int, int], Fraction]]
    counit: Mapping[int, Fraction]
    antipode: Mapping[int, Mapping[int, Fraction]]
    weight_bound: Optional[int] = None
    representatives: tuple = field(default=(), compare=False, repr=False)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def index(self, label: str) -> int:
        return self.basis.index(label)

    def within_bound(self, weight: int) -> bool:
        return self.weight_bound is None or weight <= self.weight_bound

    def multiply(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> Vector:
        result: Vector = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.mult.get((i, j), {}).items():
                    _add(result, k, a * b * c)
        return result

    def comultiply(self, x: Mapping[int, Fraction]) -> PairVector:
        result: PairVector = {}
        for i, a in x.items():
            for pair, c in self.comult.get(i, {}).items():
                _add(result, pair, a * c)
        return result

    def apply_antipode(self, x: Mapping[int, Fraction]) -> Vector:
        result: Vector = {}
        for i, a in x.items():
            for k, c in self.antipode.get(i, {}).items():
                _add(result, k, a * c)
        return result

    def apply_counit(self, x: Mapping[int, Fraction]) -> Fraction:
        return sum((a * self.counit.get(i, Fraction(0)) for i, a in x.items()), Fraction(0))

    def vector_weight(self, x: Mapping[int, Fraction]) -> int:
        return max((self.weights[i] for i in x), default=0)

    def weight_dimensions(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for w in self.weights:
            counts[w] = counts.get(w, 0) + 1
        return dict(sorted(counts.items()))


def _unit_vector(i: int) -> Vector:
    return {i: Fraction(1)}


def _pair_multiply(h: HopfAlgebra, x: PairVector, y: PairVector) -> PairVector:
    """H⊗H 中的乘积（次数 0，无符号）。"""
    result: PairVector = {}
    for (i1, i2), a in x.items():
        for (j1, j2), b in y.items():
            left = h.mult.get((i1, j1), {})
            right = h.mult.get((i2, j2), {})
            for k1, c in left.items():
                for k2, d in right.items():
                    _add(result, (k1, k2), a * b * c * d)
    return result


def hopf_validate(h: HopfAlgebra) -> ValidationReport:
    """逐条检查 Hopf 公理；截断代数只在两边都在权上限内时断言。"""
    report = ReportBuilder(f"hopf {h.name}")
    n = h.dimension
    indices = range(n)
    label = h.basis
    w = h.weights
    unit = dict(h.unit)

    for i in indices:
        x = _unit_vector(i)
        if h.multiply(unit, x) != x or h.multiply(x, unit) != x:
            report.add(ViolationKind.UNIT, f"1·{label[i]} ≠ {label[i]}", label[i])
    if h.apply_counit(unit) != 1:
        report.add(ViolationKind.COUNIT, "ε(1) ≠ 1")
    if h.comultiply(unit) != {(a, b): c * d for a, c in unit.items() for b, d in unit.items() if c * d}:
        report.add(ViolationKind.BIALGEBRA, "Δ(1) ≠ 1⊗1")

    for (i, j), product in sorted(h.mult.items()):
        for k in product:
            if w[k] != w[i] + w[j]:
                report.add(ViolationKind.WEIGHT, f"{label[i]}·{label[j]} 含权不符的项 {label[k]}", label[i], label[j])
    for i, pairs in sorted(h.comult.items()):
        for a, b in pairs:
            if w[a] + w[b] != w[i]:
                report.add(ViolationKind.WEIGHT, f"Δ{label[i]} 含权不符的项 {label[a]}⊗{label[b]}", label[i])
    for i, image in sorted(h.antipode.items()):
        for k in image:
            if w[k] != w[i]:
                report.add(ViolationKind.WEIGHT, f"S{label[i]} 含权不符的项 {label[k]}", label[i])

    for i, j in itertools.product(indices, repeat=2):
        if not h.within_bound(w[i] + w[j]):
            continue
        x, y = _unit_vector(i), _unit_vector(j)
        xy = h.multiply(x, y)
        if xy != h.multiply(y, x):
            report.add(ViolationKind.COMMUTATIVITY, f"{label[i]}·{label[j]} ≠ {label[j]}·{label[i]}", label[i], label[j])
        if h.comultiply(xy) != _pair_multiply(h, h.comultiply(x), h.comultiply(y)):
            report.add(ViolationKind.BIALGEBRA, f"Δ({label[i]}·{label[j]}) ≠ Δ{label[i]}·Δ{label[j]}", label[i], label[j])
        if h.apply_counit(xy) != h.apply_counit(x) * h.apply_counit(y):
            report.add(ViolationKind.BIALGEBRA, f"ε({label[i]}·{label[j]}) ≠ ε({label[i]})ε({label[j]})", label[i], label[j])

    for i, j, k in itertools.product(indices, repeat=3):
        if not h.within_bound(w[i] + w[j] + w[k]):
            continue
        x, y, z = _unit_vector(i), _unit_vector(j), _unit_vector(k)
        if h.multiply(h.multiply(x, y), z) != h.multiply(x, h.multiply(y, z)):
            report.add(ViolationKind.ASSOCIATIVITY, f"({label[i]}·{label[j]})·{label[k]} 不结合", label[i], label[j], label[k])

    for i in indices:
        x = _unit_vector(i)
        delta = h.comultiply(x)
        left: dict[tuple[int, int, int], Fraction] = {}
        right: dict[tuple[int, int, int], Fraction] = {}
        for (a, b), c in delta.items():
            for (a1, a2), d in h.comultiply(_unit_vector(a)).items():
                _add(left, (a1, a2, b), c * d)
            for (b1, b2), d in h.comultiply(_unit_vector(b)).items():
                _add(right, (a, b1, b2), c * d)
        if left != right:
            report.add(ViolationKind.COASSOCIATIVITY, f"Δ 在 {label[i]} 处不余结合", label[i])

        counit_left: Vector = {}
        counit_right: Vector = {}
        for (a, b), c in delta.items():
            _add(counit_left, b, c * h.counit.get(a, Fraction(0)))
            _add(counit_right, a, c * h.counit.get(b, Fraction(0)))
        if counit_left != x or counit_right != x:
            report.add(ViolationKind.COUNIT, f"(ε⊗id)Δ{label[i]} 或 (id⊗ε)Δ{label[i]} ≠ {label[i]}", label[i])

        expected = {k: v * h.apply_counit(x) for k, v in unit.items() if v * h.apply_counit(x)}
        s_left: Vector = {}
        s_right: Vector = {}
        for (a, b), c in delta.items():
            for k, v in h.multiply(h.apply_antipode(_unit_vector(a)), _unit_vector(b)).items():
                _add(s_left, k, c * v)
            for k, v in h.multiply(_unit_vector(a), h.apply_antipode(_unit_vector(b))).items():
                _add(s_right, k, c * v)
        if s_left != expected or s_right != expected:
            report.add(ViolationKind.ANTIPODE, f"反极映射卷积恒等式在 {label[i]} 处失败", label[i])
    return report.build()


# ---------------------------------------------------------------------------
# 粗模空间
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _WeightH0:
    weight: int
    quotient: QuotientBasis
    offset: int

    @property
    def dimension(self) -> int:
        return self.quotient.dimension


def coarse_moduli(b: BarComplex, weight_bound: int) -> HopfAlgebra:
    """H⁰(B) 在权 ≤ weight_bound 上的 Hopf 代数。

    代表取模边界约化后的最简阶梯闭链；投影 p: B⁰ → H⁰ 先模边界约化再读主元坐标，
    它杀死边界，在闭链上给出类映射。
    """
    if weight_bound < 0:
        raise CapError(f"权上限必须非负: {weight_bound}")
    if b.exact:
        if b.weight_bound is not None and weight_bound > b.weight_bound:
            raise CapError(f"bar 只计算到权 {b.weight_bound}，不能提取到权 {weight_bound}")
    elif not b.is_stable(0):
        raise CapInstabilityError(f"字长上限 {b.cap} 下 H⁰ 不稳定，拒绝提取粗模空间")

    pieces: dict[int, _WeightH0] = {}
    labels: list[str] = []
    weights: list[int] = []
    representatives: list[BarElement] = []
    for w in b.weights():
        if w > weight_bound:
            continue
        c = b.piece(w)
        if not c.in_window(0) or not c.dim(0):
            continue
        cycles, boundaries = cycles_and_boundaries(c, 0)
        quotient = quotient_basis(boundaries, cycles, c.dim(0))
        if not quotient.dimension:
            continue
        pieces[w] = _WeightH0(w, quotient, len(labels))
        for k, rep in enumerate(quotient.representatives):
            labels.append(f"h{w}.{k}")
            weights.append(w)
            representatives.append(b.element_of(w, 0, rep))

    def project(x: BarElement) -> Vector:
        """B⁰ 中（各权）元素在 H⁰ 基上的坐标。"""
        by_weight: dict[int, BarElement] = {}
        for word, value in x.items():
            if word.degree == 0:
                by_weight.setdefault(word.weight, {})[word] = value
        result: Vector = {}
        for w, part in by_weight.items():
            piece = pieces.get(w)
            if piece is None:
                continue
            coordinates = piece.quotient.coordinates(b.vector_of(w, 0, known(part)))
            for k, value in enumerate(coordinates):
                _add(result, piece.offset + k, value)
        return result

    def known(x: BarElement) -> BarElement:
        return {word: v for word, v in x.items() if b.contains(word)}

    mult: dict[tuple[int, int], dict[int, Fraction]] = {}
    comult: dict[int, dict[tuple[int, int], Fraction]] = {}
    antipode: dict[int, dict[int, Fraction]] = {}
    counit: dict[int, Fraction] = {}
    for i, rep_i in enumerate(representatives):
        for j, rep_j in enumerate(representatives):
            if weights[i] + weights[j] > weight_bound:
                continue
            product = project(known(shuffle(rep_i, rep_j)))
            if product:
                mult[(i, j)] = product
        pairs: dict[tuple[int, int], Fraction] = {}
        for (left, right), value in coproduct_of(rep_i).items():
            if left.degree != 0 or right.degree != 0:
                continue
            for a, x in project({left: Fraction(1)}).items():
                for c, y in project({right: Fraction(1)}).items():
                    _add(pairs, (a, c), value * x * y)
        if pairs:
            comult[i] = pairs
        image = project(known(antipode_of(rep_i)))
        if image:
            antipode[i] = image
        value = counit_of(rep_i)
        if value:
            counit[i] = value

    empty = b.factory.empty()
    unit = project({empty: Fraction(1)})
    logger.info(f"粗模空间 {b.algebra.name}: 权 ≤ {weight_bound}, 维数 {len(labels)}")
    return HopfAlgebra(
        name=b.algebra.name,
        basis=tuple(labels),
        weights=tuple(weights),
        unit=unit,
        mult=mult,
        comult=comult,
        counit=counit,
        antipode=antipode,
        weight_bound=weight_bound,
        representatives=tuple(representatives),
    )


# ---------------------------------------------------------------------------
# 有限群的函数 Hopf 代数
# ---------------------------------------------------------------------------

def check_group_table(table: Sequence[Sequence[int]]) -> tuple[int, list[int]]:
    """返回 (单位元, 逆元表)；不是群时抛 NotAGroupError 并给出见证。"""
    n = len(table)
    if n == 0:
        raise NotAGroupError("空乘法表")
    for g, row in enumerate(table):
        if len(row) != n:
            raise NotAGroupError(f"第 {g} 行长度 {len(row)} ≠ {n}")
        for h, value in enumerate(row):
            if not 0 <= value < n:
                raise NotAGroupError(f"{g}·{h} = {value} 不在群中")
    for g, h, k in itertools.product(range(n), repeat=3):
        if table[table[g][h]][k] != table[g][table[h][k]]:
            raise NotAGroupError(f"结合律失败: ({g}·{h})·{k} ≠ {g}·({h}·{k})")
    identity = next((e for e in range(n) if all(table[e][g] == g and table[g][e] == g for g in range(n))), None)
    if identity is None:
        raise NotAGroupError("没有单位元")
    inverses = []
    for g in range(n):
        inverse = next((h for h in range(n) if table[g][h] == identity and table[h][g] == identity), None)
        if inverse is None:
            raise NotAGroupError(f"元素 {g} 没有逆元")
        inverses.append(inverse)
    return identity, inverses


def finite_group_hopf(table: Sequence[Sequence[int]], names: Optional[Sequence[str]] = None, name: str = "group") -> HopfAlgebra:
    """有限群 G 上的函数代数 ℚ^G，基为指示函数 δ_g。"""
    identity, inverses = check_group_table(table)
    n = len(table)
    names = list(names) if names is not None else [str(g) for g in range(n)]
    mult = {(g, g): {g: Fraction(1)} for g in range(n)}
    comult: dict[int, dict[tuple[int, int], Fraction]] = {g: {} for g in range(n)}
    for a, b in itertools.product(range(n), repeat=2):
        comult[table[a][b]][(a, b)] = Fraction(1)
    return HopfAlgebra(
        name=name,
        basis=tuple(f"d_{label}" for label in names),
        weights=(0,) * n,
        unit={g: Fraction(1) for g in range(n)},
        mult=mult,
        comult=comult,
        counit={identity: Fraction(1)},
        antipode={g: {inverses[g]: Fraction(1)} for g in range(n)},
        weight_bound=None,
    )


def cyclic_group_table(order: int) -> list[list[int]]:
    return [[(g + h) % order for h in range(order)] for g in range(order)]


def symmetric_group_table(degree: int = 3) -> tuple[list[list[int]], list[str]]:
    """S_n 的乘法表（置换复合 (στ)(i) = σ(τ(i))），元素按字典序排列。"""
    perms = list(itertools.permutations(range(degree)))
    position = {p: i for i, p in enumerate(perms)}
    table = [[position[tuple(s[t[i]] for i in range(degree))] for t in perms] for s in perms]
    names = ["".join(str(x + 1) for x in p) for p in perms]
    return table, names


# ---------------------------------------------------------------------------
# 点与卷积群律
# ---------------------------------------------------------------------------

Point = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class PointGroup:
    """代数映射 h → target 的全体及其卷积群律。"""

    points: tuple[Point, ...]
    table: tuple[tuple[int, ...], ...]
    identity: int
    report: ValidationReport

    @property
    def order(self) -> int:
        return len(self.points)


def rational_target() -> StructConstAlgebra:
    return StructConstAlgebra("Q", [Generator("1", 0, 0)], unit="1")


def _krull_dimension(leading: list[tuple[int, ...]], count: int) -> int:
    """由首项单项式求理想的维数：最大的独立变量集的大小。"""
    supports = [frozenset(i for i, e in enumerate(mono) if e) for mono in leading]
    for size in range(count, -1, -1):
        for subset in itertools.combinations(range(count), size):
            chosen = frozenset(subset)
            if all(not support <= chosen for support in supports):
                return size
    return 0


def group_points(h: HopfAlgebra, target: Optional[StructConstAlgebra] = None, max_variables: int = 16) -> PointGroup:
    """精确求解结构常数方程，枚举全部代数映射 h → target，并列出卷积群律。"""
    target = target or rational_target()
    t_names = list(target.labels())
    for name in t_names:
        if target.label_degree(name) != 0:
            raise CapError(f"目标代数必须集中在次数 0: {name}")
    t_index = {name: i for i, name in enumerate(t_names)}
    t_unit = t_index[target.unit_label()]
    n, m = h.dimension, len(t_names)
    if n * m > max_variables:
        raise OracleSizeError(f"需要 {n * m} 个未知量，超过上限 {max_variables}")

    variables = symbols(f"y0:{n * m}") if n * m else ()

    def var(i: int, t: int):
        return variables[i * m + t]

    def t_mult(s: int, t: int) -> dict[int, Fraction]:
        return {t_index[k]: v for k, v in target.multiply({t_names[s]: Fraction(1)}, {t_names[t]: Fraction(1)}).items()}

    def image(vector: Mapping[int, Fraction]) -> list:
        return [sum((Rational(v.numerator, v.denominator) * var(i, t) for i, v in vector.items()), Rational(0)) for t in range(m)]

    def product(x: list, y: list) -> list:
        result = [Rational(0)] * m
        for s in range(m):
            for t in range(m):
                for k, v in t_mult(s, t).items():
                    result[k] += Rational(v.numerator, v.denominator) * x[s] * y[t]
        return result

    equations = []
    unit_image = image(h.unit)
    for t in range(m):
        equations.append(unit_image[t] - (1 if t == t_unit else 0))
    for i, j in itertools.product(range(n), repeat=2):
        if not h.within_bound(h.weights[i] + h.weights[j]):
            continue
        lhs = product(image({i: Fraction(1)}), image({j: Fraction(1)}))
        rhs = image(h.mult.get((i, j), {}))
        equations.extend(lhs[t] - rhs[t] for t in range(m))
    equations = [e.expand() for e in equations if e != 0]
    equations = [e for e in equations if e != 0]

    solutions: list[Point] = []
    if not variables:
        consistent = all(e == 0 for e in equations)
        if consistent:
            solutions.append(())
    elif not equations:
        raise InfiniteVarietyError(len(variables))
    else:
        basis = groebner(equations, *variables, order="grevlex")
        if list(basis.exprs) != [1]:
            leading = [poly.monoms(order="grevlex")[0] for poly in basis.polys]
            dimension = _krull_dimension(leading, len(variables))
            if dimension > 0:
                logger.warning(f"点的解簇维数为 {dimension}，拒绝枚举")
                raise InfiniteVarietyError(dimension)
            for solution in solve_poly_system(list(basis.exprs), *variables) or []:
                if all(value.is_Rational for value in solution):
                    values = [Fraction(int(v.p), int(v.q)) for v in solution]
                    solutions.append(tuple(tuple(values[i * m:(i + 1) * m]) for i in range(n)))
    points = tuple(sorted(set(solutions)))
    return _convolution_group(h, target, points, t_mult, t_unit)


def _convolution_group(h: HopfAlgebra, target: StructConstAlgebra, points: tuple[Point, ...], t_mult, t_unit: int) -> PointGroup:
    report = ReportBuilder(f"points {h.name}")
    n = h.dimension
    m = len(target.labels()) if points else 0
    lookup = {p: k for k, p in enumerate(points)}

    def convolve(phi: Point, psi: Point) -> Point:
        values = []
        for i in range(n):
            acc = [Fraction(0)] * m
            for (a, b), c in h.comult.get(i, {}).items():
                for s, x in enumerate(phi[a]):
                    for t, y in enumerate(psi[b]):
                        if x and y:
                            for k, v in t_mult(s, t).items():
                                acc[k] += c * x * y * v
            values.append(tuple(acc))
        return tuple(values)

    counit_point = tuple(
        tuple(h.counit.get(i, Fraction(0)) if t == t_unit else Fraction(0) for t in range(m))
        for i in range(n)
    )
    identity = lookup.get(counit_point, -1)
    if points and identity < 0:
        report.add(ViolationKind.UNIT, "余单位给出的点不在点集中")

    table: list[tuple[int, ...]] = []
    for phi in points:
        row = []
        for psi in points:
            k = lookup.get(convolve(phi, psi), -1)
            if k < 0:
                report.add(ViolationKind.BIALGEBRA, "卷积积不是点", lookup[phi], lookup[psi])
            row.append(k)
        table.append(tuple(row))
    size = len(points)
    if report.build().ok:
        for a, b, c in itertools.product(range(size), repeat=3):
            if table[table[a][b]][c] != table[a][table[b][c]]:
                report.add(ViolationKind.ASSOCIATIVITY, "卷积不结合", a, b, c)
                break
        for a in range(size):
            if not any(table[a][b] == identity and table[b][a] == identity for b in range(size)):
                report.add(ViolationKind.ANTIPODE, "点没有卷积逆", a)
    logger.info(f"{h.name} 的点: {size} 个")
    return PointGroup(points=points, table=tuple(table), identity=identity, report=report.build())


def is_isomorphic_table(left: Sequence[Sequence[int]], right: Sequence[Sequence[int]]) -> bool:
    """两张群表是否同构（小群上穷举双射）。"""
    n = len(left)
    if n != len(right):
        return False
    for perm in itertools.permutations(range(n)):
        if all(perm[left[a][b]] == right[perm[a]][perm[b]] for a in range(n) for b in range(n)):
            return True
    return False


def vector_to_elements(h: HopfAlgebra, vector: Mapping[int, Fraction]) -> dict[str, Fraction]:
    return {h.basis[i]: v for i, v in vector.items()}


def pair_to_elements(h: HopfAlgebra, pairs: Mapping[tuple[int, int], Fraction]) -> dict[tuple[str, str], Fraction]:
    return {(h.basis[a], h.basis[b]): v for (a, b), v in pairs.items()}
