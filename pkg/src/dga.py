"""有理数域上的增广分次交换 dg 代数：两种表示、乘法、微分、增广与校验。

- FreeGCAlgebra：生成元上的自由分次交换代数，单项式记为指数元组；
- StructConstAlgebra：有限基 + 结构常数。

元素一律是 {标签: Fraction} 的稀疏线性组合。增广理想 Ā 的基（"字母"）供 bar 构造使用：
自由代数中是非单位单项式，结构常数代数中非单位基元素 b 代表 b − t(b)·1。
"""

from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from collections.abc import Hashable, Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from fractions import Fraction
from math import comb
from typing import Optional

from domain.reports import (
    AlgebraValidationError,
    InfiniteBasisError,
    ReportBuilder,
    UnknownLabelError,
    ValidationReport,
    ViolationKind,
)
from exactlin import format_rat
from logger_config import get_logger

logger = get_logger("DGA")

Label = Hashable
Element = dict[Label, Fraction]


class AlgebraKind(StrEnum):
    FREE = "free"
    STRUCT = "structconst"


@dataclass(frozen=True)
class Generator:
    """生成元（自由代数）或基元素（结构常数代数）。"""

    name: str
    degree: int
    weight: int = 0

    @property
    def odd(self) -> bool:
        return self.degree % 2 != 0


def add_into(target: Element, other: Mapping[Label, Fraction], scale: Fraction = Fraction(1)) -> Element:
    if scale == 0:
        return target
    for key, value in other.items():
        updated = target.get(key, 0) + scale * value
        if updated:
            target[key] = updated
        else:
            target.pop(key, None)
    return target


def scaled(element: Mapping[Label, Fraction], scale: Fraction) -> Element:
    if scale == 0:
        return {}
    return {key: value * scale for key, value in element.items()}


def combination(*terms: tuple[Fraction, Mapping[Label, Fraction]]) -> Element:
    result: Element = {}
    for scale, element in terms:
        add_into(result, element, Fraction(scale))
    return result


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


class AugmentedDGA(ABC):
    """增广分次交换 dg 代数的公共接口。"""

    kind: AlgebraKind

    def __init__(self, name: str, mixed_tate: bool = False, provenance: str = "") -> None:
        self.name = name
        self.mixed_tate = mixed_tate
        self.provenance = provenance

    # --- 基本结构 -----------------------------------------------------------

    @abstractmethod
    def unit_label(self) -> Label: ...

    @abstractmethod
    def labels(self) -> Iterable[Label]:
        """所有基标签（无限时抛 InfiniteBasisError）。"""

    @abstractmethod
    def has_label(self, label: Label) -> bool: ...

    @abstractmethod
    def label_degree(self, label: Label) -> int: ...

    @abstractmethod
    def label_weight(self, label: Label) -> int: ...

    @abstractmethod
    def label_length(self, label: Label) -> int:
        """字母长度：自由代数中为单项式长度，结构常数代数中为 1。"""

    @abstractmethod
    def format_label(self, label: Label) -> str: ...

    @abstractmethod
    def _multiply_labels(self, left: Label, right: Label) -> Element: ...

    @abstractmethod
    def _differential_label(self, label: Label) -> Element: ...

    @abstractmethod
    def _augment_label(self, label: Label) -> Fraction: ...

    @abstractmethod
    def letter_sort_key(self, label: Label) -> tuple: ...

    @abstractmethod
    def validate(self) -> ValidationReport: ...

    @abstractmethod
    def is_adams_positive(self) -> bool: ...

    @abstractmethod
    def ideal_letters(self, max_weight: Optional[int] = None, max_length: Optional[int] = None) -> list[Label]:
        """Ā 的基字母，按 letter_sort_key 排序。"""

    @abstractmethod
    def letter_degree_range(self) -> Optional[tuple[int, int]]:
        """Ā 字母所用的（生成元或基元素）次数范围；Ā = 0 时为 None。"""

    def reduced(self) -> "AugmentedDGA":
        """增广为零的等价表示（bar 构造的输入）。"""
        return self

    # --- 线性运算 -----------------------------------------------------------

    def _check(self, element: Mapping[Label, Fraction]) -> None:
        for label in element:
            if not self.has_label(label):
                raise UnknownLabelError(f"代数 {self.name} 中没有基标签 {label!r}")

    def unit_element(self) -> Element:
        return {self.unit_label(): Fraction(1)}

    def multiply(self, u: Mapping[Label, Fraction], v: Mapping[Label, Fraction]) -> Element:
        self._check(u)
        self._check(v)
        result: Element = {}
        for left, a in u.items():
            for right, b in v.items():
                add_into(result, self._multiply_labels(left, right), a * b)
        return result

    def differential(self, u: Mapping[Label, Fraction]) -> Element:
        self._check(u)
        result: Element = {}
        for label, coefficient in u.items():
            add_into(result, self._differential_label(label), coefficient)
        return result

    def augment(self, u: Mapping[Label, Fraction]) -> Fraction:
        self._check(u)
        return sum((coefficient * self._augment_label(label) for label, coefficient in u.items()), Fraction(0))

    def format_element(self, element: Mapping[Label, Fraction]) -> str:
        if not element:
            return "0"
        parts = []
        for label in sorted(element, key=self.letter_sort_key):
            coefficient = element[label]
            text = self.format_label(label)
            if coefficient == 1:
                parts.append(text)
            elif coefficient == -1:
                parts.append(f"-{text}")
            else:
                parts.append(f"{format_rat(coefficient)}*{text}")
        return " + ".join(parts).replace("+ -", "- ")

    # --- 增广理想 -----------------------------------------------------------

    def _drop_unit(self, element: Mapping[Label, Fraction]) -> Element:
        unit = self.unit_label()
        return {label: value for label, value in element.items() if label != unit}

    def ideal_product(self, a: Label, b: Label) -> Element:
        """字母乘积 ā·b̄ 在 Ā 字母上的展开。"""
        return self._drop_unit(self._multiply_labels(a, b))

    def ideal_differential(self, a: Label) -> Element:
        return self._drop_unit(self._differential_label(a))

    def basis_in_bidegree(self, w: int, n: int, bound: Optional[int] = None) -> list[Label]:
        """Ā 在双次数 (w, n) 的有序基；bound 为单项式长度上限。"""
        return [
            label
            for label in self.ideal_letters(max_weight=w, max_length=bound)
            if self.label_weight(label) == w and self.label_degree(label) == n
        ]

    def full_basis_in_bidegree(self, w: int, n: int, bound: Optional[int] = None) -> list[Label]:
        """含单位的 A 在 (w, n) 的基。"""
        letters = self.basis_in_bidegree(w, n, bound)
        if (w, n) == (0, 0):
            return [self.unit_label(), *letters]
        return letters

    def bidegree_of(self, label: Label) -> tuple[int, int]:
        return self.label_weight(label), self.label_degree(label)

    def _check_unit_and_augmentation(self, report: ReportBuilder, sample: Sequence[Label]) -> None:
        unit = self.unit_label()
        if self._augment_label(unit) != 1:
            report.add(ViolationKind.AUGMENTATION, "t(1) ≠ 1", ("aug", self.format_label(unit)))
        for label in sample:
            value = self._augment_label(label)
            if value and self.bidegree_of(label) != (0, 0):
                report.add(
                    ViolationKind.AUGMENTATION,
                    f"t({self.format_label(label)}) = {format_rat(value)}，但它不在双次数 (0, 0)",
                    ("aug", self.format_label(label)),
                )
            image = self.augment(self._differential_label(label))
            if image:
                report.add(
                    ViolationKind.AUGMENTATION,
                    f"t(d {self.format_label(label)}) = {format_rat(image)} ≠ 0",
                    ("d", self.format_label(label)),
                )


# ---------------------------------------------------------------------------
# 自由分次交换代数
# ---------------------------------------------------------------------------

Monomial = tuple[int, ...]
FactorTerm = tuple[Fraction, Sequence[tuple[str, int]]]


class FreeGCAlgebra(AugmentedDGA):
    """生成元上的自由分次交换代数；奇次生成元指数至多为 1。"""

    kind = AlgebraKind.FREE

    def __init__(
        self,
        name: str,
        generators: Sequence[Generator],
        differentials: Optional[Mapping[str, Mapping[Monomial, Fraction]]] = None,
        augmentation: Optional[Mapping[str, Fraction]] = None,
        mixed_tate: bool = False,
        provenance: str = "",
    ) -> None:
        super().__init__(name, mixed_tate, provenance)
        self.generators = tuple(generators)
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            duplicated = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"生成元重名: {', '.join(duplicated)}")
        self._position = {g.name: i for i, g in enumerate(self.generators)}
        self._d_generators: dict[int, Element] = {}
        for gen_name, poly in (differentials or {}).items():
            if gen_name not in self._position:
                raise UnknownLabelError(f"d 引用了未知生成元 {gen_name}")
            clean = {tuple(m): Fraction(v) for m, v in poly.items() if v}
            self._d_generators[self._position[gen_name]] = clean
        self.augmentation = {k: Fraction(v) for k, v in (augmentation or {}).items() if v}
        for gen_name in self.augmentation:
            if gen_name not in self._position:
                raise UnknownLabelError(f"aug 引用了未知生成元 {gen_name}")
        self._d_cache: dict[Monomial, Element] = {}

    @classmethod
    def from_terms(
        cls,
        name: str,
        generators: Sequence[Generator],
        differentials: Mapping[str, Sequence[FactorTerm]],
        augmentation: Optional[Mapping[str, Fraction]] = None,
        mixed_tate: bool = False,
        provenance: str = "",
    ) -> "FreeGCAlgebra":
        """微分以 (系数, [(生成元, 幂), ...]) 项给出；因子按书写顺序相乘（带 Koszul 符号）。"""
        bare = cls(name, generators)
        polys = {gen_name: bare.polynomial(terms) for gen_name, terms in differentials.items()}
        return cls(name, generators, polys, augmentation, mixed_tate, provenance)

    # --- 单项式 -------------------------------------------------------------

    def unit_label(self) -> Monomial:
        return (0,) * len(self.generators)

    def generator_monomial(self, name: str) -> Monomial:
        if name not in self._position:
            raise UnknownLabelError(f"代数 {self.name} 中没有生成元 {name}")
        exponents = [0] * len(self.generators)
        exponents[self._position[name]] = 1
        return tuple(exponents)

    def gen(self, name: str) -> Element:
        return {self.generator_monomial(name): Fraction(1)}

    def polynomial(self, terms: Iterable[FactorTerm]) -> Element:
        result: Element = {}
        for coefficient, factors in terms:
            product = self.unit_element()
            for factor, power in factors:
                if power < 0:
                    raise ValueError(f"负幂: {factor}^{power}")
                for _ in range(power):
                    product = self.multiply(product, self.gen(factor))
            add_into(result, product, Fraction(coefficient))
        return result

    def has_label(self, label: Label) -> bool:
        if not isinstance(label, tuple) or len(label) != len(self.generators):
            return False
        for exponent, generator in zip(label, self.generators):
            if not isinstance(exponent, int) or exponent < 0 or (generator.odd and exponent > 1):
                return False
        return True

    def label_degree(self, label: Monomial) -> int:
        return sum(e * g.degree for e, g in zip(label, self.generators))

    def label_weight(self, label: Monomial) -> int:
        return sum(e * g.weight for e, g in zip(label, self.generators))

    def label_length(self, label: Monomial) -> int:
        return sum(label)

    def expanded(self, label: Monomial) -> tuple[int, ...]:
        return tuple(i for i, e in enumerate(label) for _ in range(e))

    def letter_sort_key(self, label: Monomial) -> tuple:
        return (self.label_weight(label), self.label_degree(label), self.label_length(label), self.expanded(label))

    def format_label(self, label: Monomial) -> str:
        factors = []
        for exponent, generator in zip(label, self.generators):
            if exponent == 1:
                factors.append(generator.name)
            elif exponent > 1:
                factors.append(f"{generator.name}^{exponent}")
        return "*".join(factors) if factors else "1"

    def _multiply_labels(self, left: Monomial, right: Monomial) -> Element:
        exponents = []
        for a, b, generator in zip(left, right, self.generators):
            total = a + b
            if generator.odd and total > 1:
                return {}
            exponents.append(total)
        swaps = 0
        odd_left = [i for i, e in enumerate(left) if e and self.generators[i].odd]
        for j, e in enumerate(right):
            if e and self.generators[j].odd:
                swaps += sum(1 for i in odd_left if i > j)
        return {tuple(exponents): Fraction(_sign(swaps))}

    def _differential_label(self, label: Monomial) -> Element:
        cached = self._d_cache.get(label)
        if cached is not None:
            return cached
        first = next((i for i, e in enumerate(label) if e), None)
        if first is None:
            result: Element = {}
        else:
            rest = list(label)
            rest[first] -= 1
            rest = tuple(rest)
            g = [0] * len(label)
            g[first] = 1
            g = tuple(g)
            result = {}
            d_g = self._d_generators.get(first, {})
            for mono, coefficient in d_g.items():
                add_into(result, self._multiply_labels(mono, rest), coefficient)
            sign = Fraction(_sign(self.generators[first].degree))
            for mono, coefficient in self._differential_label(rest).items():
                add_into(result, self._multiply_labels(g, mono), sign * coefficient)
        self._d_cache[label] = result
        return result

    def _augment_label(self, label: Monomial) -> Fraction:
        value = Fraction(1)
        for exponent, generator in zip(label, self.generators):
            if exponent:
                value *= self.augmentation.get(generator.name, Fraction(0)) ** exponent
        return value

    def generator_differential(self, name: str) -> Element:
        return dict(self._d_generators.get(self._position[name], {}))

    # --- 枚举 ---------------------------------------------------------------

    def monomials(self, max_weight: Optional[int] = None, max_length: Optional[int] = None) -> Iterator[Monomial]:
        """长度 ≤ max_length 且权 ≤ max_weight 的全部单项式（含单位）。"""
        if max_length is None:
            if max_weight is None or any(g.weight < 1 for g in self.generators):
                raise InfiniteBasisError(
                    f"代数 {self.name} 含权 ≤ 0 的生成元（或未给权上限），需要单项式长度上限"
                )
            max_length = max_weight
        count = len(self.generators)

        def walk(index: int, length_left: int, weight_so_far: int, prefix: list[int]) -> Iterator[Monomial]:
            if index == count:
                yield tuple(prefix)
                return
            generator = self.generators[index]
            top = 1 if generator.odd else length_left
            for exponent in range(0, top + 1):
                if exponent > length_left:
                    break
                weight = weight_so_far + exponent * generator.weight
                if max_weight is not None and generator.weight > 0 and weight > max_weight:
                    break
                prefix.append(exponent)
                yield from walk(index + 1, length_left - exponent, weight, prefix)
                prefix.pop()

        for mono in walk(0, max_length, 0, []):
            if max_weight is None or self.label_weight(mono) <= max_weight:
                yield mono

    def ideal_letters(self, max_weight: Optional[int] = None, max_length: Optional[int] = None) -> list[Monomial]:
        unit = self.unit_label()
        letters = [m for m in self.monomials(max_weight, max_length) if m != unit]
        return sorted(letters, key=self.letter_sort_key)

    def labels(self) -> Iterable[Label]:
        if any(not g.odd for g in self.generators):
            raise InfiniteBasisError(f"代数 {self.name} 含偶次生成元，基无限")
        return self.monomials(max_length=len(self.generators))

    def letter_degree_range(self) -> Optional[tuple[int, int]]:
        if not self.generators:
            return None
        degrees = [g.degree for g in self.generators]
        return min(degrees), max(degrees)

    def is_adams_positive(self) -> bool:
        return all(g.weight >= 1 for g in self.generators)

    # --- 重新定中心 ---------------------------------------------------------

    def _shift_substitution(self, mono: Monomial) -> Element:
        """把 x 替换为 x + t(x) 后展开单项式（只涉及 0 次偶生成元，彼此交换）。"""
        result: Element = {self.unit_label(): Fraction(1)}
        for index, exponent in enumerate(mono):
            if not exponent:
                continue
            name = self.generators[index].name
            shift_value = self.augmentation.get(name, Fraction(0))
            g = self.generator_monomial(name)
            if not shift_value:
                power: Element = {tuple(e * exponent for e in g): Fraction(1)}
            else:
                power = {}
                for k in range(exponent + 1):
                    term = tuple(e * k for e in g)
                    add_into(power, {term: Fraction(1)}, Fraction(comb(exponent, k)) * shift_value ** (exponent - k))
            result = self.multiply(result, power)
        return result

    def reduced(self) -> "FreeGCAlgebra":
        """代换 x = x' + t(x) 得到增广为零的同构表示。"""
        if not self.augmentation:
            return self
        differentials = {}
        for index, generator in enumerate(self.generators):
            poly: Element = {}
            for mono, coefficient in self._d_generators.get(index, {}).items():
                add_into(poly, self._shift_substitution(mono), coefficient)
            differentials[generator.name] = poly
        logger.info(f"代数 {self.name} 增广非零，重新定中心: {sorted(self.augmentation)}")
        return FreeGCAlgebra(self.name, self.generators, differentials, {}, self.mixed_tate, self.provenance)

    # --- 校验 ---------------------------------------------------------------

    def validate(self) -> ValidationReport:
        report = ReportBuilder(f"algebra {self.name}")
        gens = [self.generator_monomial(g.name) for g in self.generators]
        for generator, mono in zip(self.generators, gens):
            for term in self._d_generators.get(self._position[generator.name], {}):
                if self.label_degree(term) != generator.degree + 1:
                    report.add(
                        ViolationKind.HOMOGENEITY,
                        f"d {generator.name} 含次数 {self.label_degree(term)} 的项 {self.format_label(term)}，应为 {generator.degree + 1}",
                        ("d", generator.name),
                    )
                if self.label_weight(term) != generator.weight:
                    report.add(
                        ViolationKind.WEIGHT,
                        f"d {generator.name} 含权 {self.label_weight(term)} 的项 {self.format_label(term)}",
                        ("d", generator.name),
                    )
            if self.differential(self.differential({mono: Fraction(1)})):
                report.add(ViolationKind.D_SQUARED, f"d²({generator.name}) ≠ 0", ("d", generator.name))
        for (g, a), (h, b) in itertools.product(zip(self.generators, gens), repeat=2):
            ab = self._multiply_labels(a, b)
            ba = self._multiply_labels(b, a)
            if ab != scaled(ba, Fraction(_sign(g.degree * h.degree))):
                report.add(ViolationKind.GRADED_COMMUTATIVITY, f"{g.name}·{h.name} 违反分次交换", ("gen", g.name), ("gen", h.name))
            left = self.differential(ab)
            right = combination(
                (Fraction(1), self.multiply(self.differential({a: Fraction(1)}), {b: Fraction(1)})),
                (Fraction(_sign(g.degree)), self.multiply({a: Fraction(1)}, self.differential({b: Fraction(1)}))),
            )
            if left != right:
                report.add(ViolationKind.LEIBNIZ, f"d({g.name}·{h.name}) 违反 Leibniz", ("d", g.name), ("d", h.name))
        self._check_unit_and_augmentation(report, gens)
        return report.build()


# ---------------------------------------------------------------------------
# 结构常数代数
# ---------------------------------------------------------------------------

class StructConstAlgebra(AugmentedDGA):
    """有限有序基上的结构常数表示。缺省乘积为零，与单位的乘积隐式给出。"""

    kind = AlgebraKind.STRUCT

    def __init__(
        self,
        name: str,
        elements: Sequence[Generator],
        unit: str,
        products: Optional[Mapping[tuple[str, str], Mapping[str, Fraction]]] = None,
        differential: Optional[Mapping[str, Mapping[str, Fraction]]] = None,
        augmentation: Optional[Mapping[str, Fraction]] = None,
        mixed_tate: bool = False,
        provenance: str = "",
    ) -> None:
        super().__init__(name, mixed_tate, provenance)
        self.elements = tuple(elements)
        names = [e.name for e in self.elements]
        if len(set(names)) != len(names):
            duplicated = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"基元素重名: {', '.join(duplicated)}")
        self._by_name = {e.name: e for e in self.elements}
        self._order = {e.name: i for i, e in enumerate(self.elements)}
        if unit not in self._by_name:
            raise UnknownLabelError(f"单位 {unit} 不是基元素")
        self.unit = unit
        self.products = {
            (a, b): {k: Fraction(v) for k, v in value.items() if v}
            for (a, b), value in (products or {}).items()
        }
        self.d_table = {k: {n: Fraction(v) for n, v in value.items() if v} for k, value in (differential or {}).items()}
        self.augmentation = {k: Fraction(v) for k, v in (augmentation or {}).items() if v}
        if unit not in self.augmentation and not (augmentation and unit in augmentation):
            self.augmentation[unit] = Fraction(1)
        for table in (self.d_table, self.augmentation):
            for key in table:
                self._require(key)
        for (a, b), value in self.products.items():
            self._require(a)
            self._require(b)
            for key in value:
                self._require(key)
        for value in self.d_table.values():
            for key in value:
                self._require(key)

    def _require(self, name: str) -> None:
        if name not in self._by_name:
            raise UnknownLabelError(f"代数 {self.name} 中没有基元素 {name}")

    def element(self, name: str) -> Generator:
        self._require(name)
        return self._by_name[name]

    def unit_label(self) -> str:
        return self.unit

    def labels(self) -> Iterable[str]:
        return [e.name for e in self.elements]

    def has_label(self, label: Label) -> bool:
        return isinstance(label, str) and label in self._by_name

    def label_degree(self, label: str) -> int:
        return self._by_name[label].degree

    def label_weight(self, label: str) -> int:
        return self._by_name[label].weight

    def label_length(self, label: str) -> int:
        return 1

    def letter_sort_key(self, label: str) -> tuple:
        e = self._by_name[label]
        return (e.weight, e.degree, 1, (self._order[label],))

    def format_label(self, label: str) -> str:
        return label

    def _multiply_labels(self, left: str, right: str) -> Element:
        explicit = self.products.get((left, right))
        if explicit is not None:
            return dict(explicit)
        if left == self.unit:
            return {right: Fraction(1)}
        if right == self.unit:
            return {left: Fraction(1)}
        return {}

    def _differential_label(self, label: str) -> Element:
        return dict(self.d_table.get(label, {}))

    def _augment_label(self, label: str) -> Fraction:
        return self.augmentation.get(label, Fraction(0))

    def ideal_product(self, a: str, b: str) -> Element:
        """ā·b̄ = ab − t(b)a − t(a)b + t(a)t(b)·1 的非单位部分。"""
        product = self._multiply_labels(a, b)
        add_into(product, {a: Fraction(1)}, -self._augment_label(b))
        add_into(product, {b: Fraction(1)}, -self._augment_label(a))
        return self._drop_unit(product)

    def ideal_letters(self, max_weight: Optional[int] = None, max_length: Optional[int] = None) -> list[str]:
        letters = [
            e.name
            for e in self.elements
            if e.name != self.unit and (max_weight is None or e.weight <= max_weight)
        ]
        if max_length is not None and max_length < 1:
            return []
        return sorted(letters, key=self.letter_sort_key)

    def letter_degree_range(self) -> Optional[tuple[int, int]]:
        degrees = [e.degree for e in self.elements if e.name != self.unit]
        if not degrees:
            return None
        return min(degrees), max(degrees)

    def is_adams_positive(self) -> bool:
        return all(e.weight >= 1 for e in self.elements if e.name != self.unit)

    def validate(self) -> ValidationReport:
        report = ReportBuilder(f"algebra {self.name}")
        names = [e.name for e in self.elements]
        unit = self._by_name[self.unit]
        if (unit.degree, unit.weight) != (0, 0):
            report.add(ViolationKind.UNIT, f"单位 {self.unit} 不在双次数 (0, 0)", ("basis", self.unit))
        for name in names:
            one = {name: Fraction(1)}
            if self._multiply_labels(self.unit, name) != one or self._multiply_labels(name, self.unit) != one:
                report.add(ViolationKind.UNIT, f"1·{name} 或 {name}·1 ≠ {name}", ("mul", self.unit, name), ("mul", name, self.unit))
        if self.d_table.get(self.unit):
            report.add(ViolationKind.LEIBNIZ, "d(1) ≠ 0", ("d", self.unit))

        for name in names:
            degree, weight = self.label_degree(name), self.label_weight(name)
            for term in self.d_table.get(name, {}):
                if self.label_degree(term) != degree + 1:
                    report.add(ViolationKind.HOMOGENEITY, f"d {name} 含次数不符的项 {term}", ("d", name))
                if self.label_weight(term) != weight:
                    report.add(ViolationKind.WEIGHT, f"d {name} 含权不符的项 {term}", ("d", name))
            if self.differential(self._differential_label(name)):
                report.add(ViolationKind.D_SQUARED, f"d²({name}) ≠ 0", ("d", name))

        for a, b in itertools.product(names, repeat=2):
            ab = self._multiply_labels(a, b)
            da, db = self.label_degree(a), self.label_degree(b)
            for term in ab:
                if self.label_degree(term) != da + db:
                    report.add(ViolationKind.HOMOGENEITY, f"{a}·{b} 含次数不符的项 {term}", ("mul", a, b))
                if self.label_weight(term) != self.label_weight(a) + self.label_weight(b):
                    report.add(ViolationKind.WEIGHT, f"{a}·{b} 含权不符的项 {term}", ("mul", a, b))
            ba = self._multiply_labels(b, a)
            if ab != scaled(ba, Fraction(_sign(da * db))):
                report.add(ViolationKind.GRADED_COMMUTATIVITY, f"{a}·{b} ≠ (−1)^{{|{a}||{b}|}} {b}·{a}", ("mul", a, b))
            elif a == b and da % 2 and ab:
                report.add(ViolationKind.GRADED_COMMUTATIVITY, f"奇次元素 {a} 的平方非零", ("mul", a, a))
            left = self.differential(ab)
            right = combination(
                (Fraction(1), self.multiply(self._differential_label(a), {b: Fraction(1)})),
                (Fraction(_sign(da)), self.multiply({a: Fraction(1)}, self._differential_label(b))),
            )
            if left != right:
                report.add(ViolationKind.LEIBNIZ, f"d({a}·{b}) 违反 Leibniz", ("mul", a, b), ("d", a), ("d", b))
            t_ab = self.augment(ab)
            if t_ab != self._augment_label(a) * self._augment_label(b):
                report.add(ViolationKind.AUGMENTATION, f"t({a}·{b}) ≠ t({a})t({b})", ("mul", a, b), ("aug", a), ("aug", b))

        for a, b, c in itertools.product(names, repeat=3):
            left = self.multiply(self._multiply_labels(a, b), {c: Fraction(1)})
            right = self.multiply({a: Fraction(1)}, self._multiply_labels(b, c))
            if left != right:
                report.add(ViolationKind.ASSOCIATIVITY, f"({a}·{b})·{c} ≠ {a}·({b}·{c})", ("mul", a, b), ("mul", b, c))

        self._check_unit_and_augmentation(report, names)
        return report.build()


# ---------------------------------------------------------------------------
# 增广理想的分双次数基
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AugIdealBasis:
    """Ā 在每个 (权, 次数) 上的有序基，至多到给定上限。"""

    algebra: str
    pieces: Mapping[tuple[int, int], tuple[Label, ...]]
    max_weight: Optional[int]
    max_length: Optional[int]

    def at(self, w: int, n: int) -> tuple[Label, ...]:
        return self.pieces.get((w, n), ())

    def bidegrees(self) -> list[tuple[int, int]]:
        return sorted(self.pieces)

    def letters(self) -> list[Label]:
        return [label for key in self.bidegrees() for label in self.pieces[key]]


def augmentation_ideal_basis(
    a: AugmentedDGA,
    max_weight: Optional[int] = None,
    max_length: Optional[int] = None,
) -> AugIdealBasis:
    pieces: dict[tuple[int, int], list[Label]] = {}
    for label in a.ideal_letters(max_weight, max_length):
        pieces.setdefault(a.bidegree_of(label), []).append(label)
    return AugIdealBasis(
        algebra=a.name,
        pieces={key: tuple(value) for key, value in pieces.items()},
        max_weight=max_weight,
        max_length=max_length,
    )


def require_valid(a: AugmentedDGA) -> AugmentedDGA:
    report = a.validate()
    if not report.ok:
        logger.warning(f"代数 {a.name} 未通过校验: {len(report.violations)} 条违例")
        raise AlgebraValidationError(report)
    return a
