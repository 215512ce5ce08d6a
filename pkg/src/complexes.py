"""有限窗口上的上同调分次链复形：张量、平移、锥、上同调与截断。

约定：微分次数为 +1，d^n: C^n → C^{n+1} 存为 (dim C^{n+1}) × (dim C^n) 矩阵；
复形在声明窗口 [lo, hi] 之外恒为零。
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional

from domain.reports import (
    InvalidChainMapError,
    ReportBuilder,
    ValidationReport,
    ViolationKind,
    WindowError,
)
from exactlin import (
    SparseMatrix,
    SparseVector,
    echelon_form,
    kernel_from_echelon,
    cokernel_quotient,
    QuotientBasis,
    quotient_basis,
    worker_pool,
)
from logger_config import get_logger

logger = get_logger("Complexes")

Label = Hashable


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


@dataclass(frozen=True)
class Complex:
    """窗口 [lo, hi] 上物化的链复形，基标签为结构化值。"""

    lo: int
    hi: int
    basis: Mapping[int, tuple[Label, ...]]
    differentials: Mapping[int, SparseMatrix] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise WindowError(f"窗口非法: [{self.lo}, {self.hi}]")
        for degree, labels in self.basis.items():
            if labels and not self.lo <= degree <= self.hi:
                raise WindowError(f"次数 {degree} 的基落在窗口 [{self.lo}, {self.hi}] 之外")

    @classmethod
    def build(
        cls,
        basis: Mapping[int, Sequence[Label]],
        differentials: Optional[Mapping[int, SparseMatrix]] = None,
        lo: Optional[int] = None,
        hi: Optional[int] = None,
    ) -> "Complex":
        """由基与微分构造；未给窗口时取非零次数的范围（全零时为 [0, 0]）。"""
        degrees = [n for n, labels in basis.items() if labels]
        if lo is None:
            lo = min(degrees, default=0)
        if hi is None:
            hi = max(degrees, default=lo)
        clean_basis = {n: tuple(labels) for n, labels in basis.items() if labels}
        clean_d = dict(differentials or {})
        return cls(lo=lo, hi=hi, basis=clean_basis, differentials=clean_d)

    @classmethod
    def zero(cls, lo: int = 0, hi: int = 0) -> "Complex":
        return cls(lo=lo, hi=hi, basis={})

    @classmethod
    def unit(cls) -> "Complex":
        """次数 0 上的一维复形 ℚ，标签为空元组。"""
        return cls(lo=0, hi=0, basis={0: ((),)})

    @classmethod
    def two_term(cls, degree: int, value: Fraction, labels: tuple[Label, Label] = ("a", "b")) -> "Complex":
        """k --value--> k，位于次数 degree 与 degree+1。"""
        matrix = SparseMatrix.from_entries(1, 1, [(0, 0, Fraction(value))])
        return cls(
            lo=degree,
            hi=degree + 1,
            basis={degree: (labels[0],), degree + 1: (labels[1],)},
            differentials={degree: matrix},
        )

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def in_window(self, n: int) -> bool:
        return self.lo <= n <= self.hi

    def require_window(self, n: int) -> None:
        if not self.in_window(n):
            raise WindowError(f"次数 {n} 不在窗口 [{self.lo}, {self.hi}] 内")

    def labels(self, n: int) -> tuple[Label, ...]:
        return self.basis.get(n, ())

    def dim(self, n: int) -> int:
        return len(self.basis.get(n, ()))

    @cached_property
    def _indices(self) -> dict[int, dict[Label, int]]:
        return {n: {label: i for i, label in enumerate(labels)} for n, labels in self.basis.items()}

    def index(self, n: int, label: Label) -> int:
        try:
            return self._indices[n][label]
        except KeyError:
            raise KeyError(f"次数 {n} 中没有基元素 {label!r}") from None

    def d(self, n: int) -> SparseMatrix:
        stored = self.differentials.get(n)
        if stored is not None:
            return stored
        return SparseMatrix.zero(self.dim(n + 1), self.dim(n))

    def total_dimension(self) -> int:
        return sum(self.dim(n) for n in self.degrees())

    def apply_d(self, n: int, vector: Mapping[int, Fraction]) -> SparseVector:
        return self.d(n).apply(vector)


# ---------------------------------------------------------------------------
# 校验与上同调
# ---------------------------------------------------------------------------

def check_complex(c: Complex) -> ValidationReport:
    """检查微分形状与 d∘d = 0，逐个次数列出违例。"""
    report = ReportBuilder("complex")
    for n, matrix in sorted(c.differentials.items()):
        expected = (c.dim(n + 1), c.dim(n))
        if matrix.shape != expected:
            report.add(ViolationKind.SHAPE, f"d^{n} 形状 {matrix.shape}，应为 {expected}", n)
    for n in range(c.lo - 1, c.hi + 1):
        first, second = c.d(n), c.d(n + 1)
        if first.shape != (c.dim(n + 1), c.dim(n)) or second.shape != (c.dim(n + 2), c.dim(n + 1)):
            continue
        if not (second @ first).is_zero():
            report.add(ViolationKind.D_SQUARED, f"d^{n + 1}∘d^{n} ≠ 0", n)
    return report.build()


@dataclass(frozen=True)
class Cohomology:
    degree: int
    dimension: int
    representatives: tuple[SparseVector, ...]
    quotient: Optional[QuotientBasis] = field(default=None, repr=False, compare=False)

    def classify(self, cycle: Mapping[int, Fraction]) -> list[Fraction]:
        """把次数 degree 的闭链表示为代表类的坐标。"""
        return self.quotient.coordinates(cycle)


def cycles_and_boundaries(c: Complex, n: int) -> tuple[list[SparseVector], list[SparseVector]]:
    cycles = kernel_from_echelon(echelon_form(c.d(n)))
    boundaries = [column for column in c.d(n - 1).columns() if column]
    return cycles, boundaries


def cohomology(c: Complex, n: int) -> Cohomology:
    """H^n：维数与规范代表（模边界约化后的最简阶梯闭链）。"""
    c.require_window(n)
    cycles, boundaries = cycles_and_boundaries(c, n)
    quotient = quotient_basis(boundaries, cycles, c.dim(n))
    return Cohomology(
        degree=n,
        dimension=quotient.dimension,
        representatives=quotient.representatives,
        quotient=quotient,
    )


def cohomology_table(c: Complex, jobs: int = 1) -> dict[int, int]:
    """窗口内每个次数的上同调维数。各次数互相独立，可并行。"""
    degrees = list(c.degrees())
    if jobs > 1 and len(degrees) > 1:
        with worker_pool(jobs) as pool:
            dims = list(pool.map(lambda n: cohomology(c, n).dimension, degrees))
    else:
        dims = [cohomology(c, n).dimension for n in degrees]
    return dict(zip(degrees, dims))


def is_acyclic(c: Complex) -> bool:
    return all(dim == 0 for dim in cohomology_table(c).values())


def euler_characteristic(c: Complex) -> int:
    return sum(_sign(n) * c.dim(n) for n in c.degrees())


# ---------------------------------------------------------------------------
# 构造
# ---------------------------------------------------------------------------

def shift(c: Complex, m: int) -> Complex:
    """C[m]：(C[m])^n = C^{n+m}，微分乘以 (−1)^m。"""
    if m == 0:
        return c
    basis = {n - m: labels for n, labels in c.basis.items()}
    differentials = {n - m: matrix.scale(Fraction(_sign(m))) for n, matrix in c.differentials.items()}
    return Complex(lo=c.lo - m, hi=c.hi - m, basis=basis, differentials=differentials)


def direct_sum(parts: Sequence[tuple[Hashable, Complex]]) -> Complex:
    """按给定顺序拼接的直和，标签为 (key, label)。"""
    if not parts:
        return Complex.zero()
    lo = min(part.lo for _, part in parts)
    hi = max(part.hi for _, part in parts)
    basis: dict[int, tuple[Label, ...]] = {}
    differentials: dict[int, SparseMatrix] = {}
    for n in range(lo, hi + 1):
        labels = tuple((key, label) for key, part in parts for label in part.labels(n))
        if labels:
            basis[n] = labels
    for n in range(lo, hi + 1):
        entries = []
        row_offset = col_offset = 0
        for _, part in parts:
            for r, col, value in part.d(n).entries:
                entries.append((row_offset + r, col_offset + col, value))
            row_offset += part.dim(n + 1)
            col_offset += part.dim(n)
        if entries:
            differentials[n] = SparseMatrix.from_entries(row_offset, col_offset, entries)
    return Complex(lo=lo, hi=hi, basis=basis, differentials=differentials)


def tensor(a: Complex, b: Complex) -> Complex:
    """a ⊗ b，d(x⊗y) = dx⊗y + (−1)^{|x|} x⊗dy。

    次数 n 的基为 (x, y)，按 |x| 升序，再按 x、y 在各自基中的位置排序。
    """
    lo, hi = a.lo + b.lo, a.hi + b.hi
    basis: dict[int, tuple[Label, ...]] = {}
    for n in range(lo, hi + 1):
        labels = tuple(
            (x, y)
            for p in range(a.lo, a.hi + 1)
            for x in a.labels(p)
            for y in b.labels(n - p)
        )
        if labels:
            basis[n] = labels
    result = Complex(lo=lo, hi=hi, basis=basis)

    differentials: dict[int, SparseMatrix] = {}
    for n in range(lo, hi + 1):
        if not result.dim(n) or not result.dim(n + 1):
            continue
        acc: dict[int, dict[int, Fraction]] = {}
        col = 0
        for p in range(a.lo, a.hi + 1):
            q = n - p
            d_a, d_b = a.d(p), b.d(q)
            sign = Fraction(_sign(p))
            for i, x in enumerate(a.labels(p)):
                dx = d_a.column(i)
                for j, y in enumerate(b.labels(q)):
                    for k, value in dx.items():
                        row = result.index(n + 1, (a.labels(p + 1)[k], y))
                        bucket = acc.setdefault(row, {})
                        bucket[col] = bucket.get(col, 0) + value
                    for k, value in d_b.column(j).items():
                        row = result.index(n + 1, (x, b.labels(q + 1)[k]))
                        bucket = acc.setdefault(row, {})
                        bucket[col] = bucket.get(col, 0) + sign * value
                    col += 1
        matrix = SparseMatrix.from_accumulator(result.dim(n + 1), result.dim(n), acc)
        if not matrix.is_zero():
            differentials[n] = matrix
    logger.debug(f"张量积: 窗口 [{lo}, {hi}], 总维数 {result.total_dimension()}")
    return Complex(lo=lo, hi=hi, basis=basis, differentials=differentials)


# ---------------------------------------------------------------------------
# 链映射
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChainMap:
    """逐次数分量 f^n: A^n → B^n，缺省分量为零。"""

    source: Complex
    target: Complex
    components: Mapping[int, SparseMatrix] = field(default_factory=dict)

    @classmethod
    def identity(cls, c: Complex) -> "ChainMap":
        return cls(c, c, {n: SparseMatrix.identity(c.dim(n)) for n in c.degrees() if c.dim(n)})

    @classmethod
    def zero(cls, source: Complex, target: Complex) -> "ChainMap":
        return cls(source, target, {})

    def component(self, n: int) -> SparseMatrix:
        stored = self.components.get(n)
        if stored is not None:
            return stored
        return SparseMatrix.zero(self.target.dim(n), self.source.dim(n))

    def window(self) -> range:
        return range(min(self.source.lo, self.target.lo), max(self.source.hi, self.target.hi) + 1)


def check_chain_map(f: ChainMap) -> ValidationReport:
    report = ReportBuilder("chain map")
    for n, matrix in sorted(f.components.items()):
        expected = (f.target.dim(n), f.source.dim(n))
        if matrix.shape != expected:
            report.add(ViolationKind.SHAPE, f"f^{n} 形状 {matrix.shape}，应为 {expected}", n)
    if not report.build().ok:
        return report.build()
    window = f.window()
    for n in range(window.start - 1, window.stop):
        left = f.target.d(n) @ f.component(n)
        right = f.component(n + 1) @ f.source.d(n)
        if left != right:
            report.add(ViolationKind.CHAIN_MAP, f"d∘f^{n} ≠ f^{n + 1}∘d", n)
    return report.build()


def compose(g: ChainMap, f: ChainMap) -> ChainMap:
    components = {}
    for n in set(f.components) & set(g.components):
        product = g.component(n) @ f.component(n)
        if not product.is_zero():
            components[n] = product
    return ChainMap(f.source, g.target, components)


def braiding(a: Complex, b: Complex) -> ChainMap:
    """x⊗y ↦ (−1)^{|x||y|} y⊗x。"""
    source, target = tensor(a, b), tensor(b, a)
    components = {}
    for n in source.degrees():
        entries = []
        for p in range(a.lo, a.hi + 1):
            sign = Fraction(_sign(p * (n - p)))
            for x in a.labels(p):
                for y in b.labels(n - p):
                    entries.append((target.index(n, (y, x)), source.index(n, (x, y)), sign))
        if entries:
            components[n] = SparseMatrix.from_entries(target.dim(n), source.dim(n), entries)
    return ChainMap(source, target, components)


def cone(f: ChainMap) -> Complex:
    """映射锥：Cone^n = A^{n+1} ⊕ B^n，d(a, b) = (−d a, f a + d b)。"""
    report = check_chain_map(f)
    if not report.ok:
        raise InvalidChainMapError("; ".join(report.render()))
    a, b = f.source, f.target
    lo, hi = min(a.lo - 1, b.lo), max(a.hi - 1, b.hi)
    basis: dict[int, tuple[Label, ...]] = {}
    for n in range(lo, hi + 1):
        labels = tuple(("src", x) for x in a.labels(n + 1)) + tuple(("tgt", y) for y in b.labels(n))
        if labels:
            basis[n] = labels
    differentials = {}
    for n in range(lo, hi + 1):
        src_rows, src_cols = a.dim(n + 2), a.dim(n + 1)
        entries = [(r, c, -v) for r, c, v in a.d(n + 1).entries]
        entries += [(src_rows + r, c, v) for r, c, v in f.component(n + 1).entries]
        entries += [(src_rows + r, src_cols + c, v) for r, c, v in b.d(n).entries]
        if entries:
            differentials[n] = SparseMatrix.from_entries(src_rows + b.dim(n + 1), src_cols + b.dim(n), entries)
    return Complex(lo=lo, hi=hi, basis=basis, differentials=differentials)


def is_quasi_iso(f: ChainMap) -> bool:
    return is_acyclic(cone(f))


# ---------------------------------------------------------------------------
# 截断
# ---------------------------------------------------------------------------

def _cycle_basis(c: Complex, n: int) -> tuple[list[int], list[SparseVector]]:
    echelon = echelon_form(c.d(n))
    return echelon.free_columns(), kernel_from_echelon(echelon)


def truncate_leq(c: Complex, n: int) -> Complex:
    """τ≤n：次数 n 换成闭链 Z^n，更高次数置零。

    Z^n 的基向量在各自自由列上取 1，标签为 ("Z", 该列原标签)。
    """
    c.require_window(n)
    free, _ = _cycle_basis(c, n)
    labels_n = c.labels(n)
    basis = {k: labels for k, labels in c.basis.items() if k < n}
    if free:
        basis[n] = tuple(("Z", labels_n[f]) for f in free)
    differentials = {k: m for k, m in c.differentials.items() if k < n - 1}
    incoming = c.d(n - 1)
    position = {f: i for i, f in enumerate(free)}
    entries = [(position[r], col, v) for r, col, v in incoming.entries if r in position]
    if entries:
        differentials[n - 1] = SparseMatrix.from_entries(len(free), incoming.cols, entries)
    return Complex(lo=min(c.lo, n), hi=n, basis=basis, differentials=differentials)


def truncation_inclusion(c: Complex, n: int) -> ChainMap:
    """τ≤n c → c。"""
    truncated = truncate_leq(c, n)
    _, kernel = _cycle_basis(c, n)
    components = {k: SparseMatrix.identity(c.dim(k)) for k in range(c.lo, n) if c.dim(k)}
    if kernel:
        components[n] = SparseMatrix.from_columns(c.dim(n), kernel)
    return ChainMap(truncated, c, components)


def truncate_geq(c: Complex, n: int) -> Complex:
    """τ≥n：次数 n 换成 C^n / B^n，更低次数置零；代表沿用原标签。"""
    c.require_window(n)
    quotient = cokernel_quotient(c.d(n - 1))
    reps = quotient.representatives
    labels_n = c.labels(n)
    basis = {k: labels for k, labels in c.basis.items() if k > n}
    if reps:
        basis[n] = tuple(labels_n[i] for i in reps)
    differentials = {k: m for k, m in c.differentials.items() if k > n}
    outgoing = c.d(n)
    position = {i: j for j, i in enumerate(reps)}
    entries = [(r, position[col], v) for r, col, v in outgoing.entries if col in position]
    if entries:
        differentials[n] = SparseMatrix.from_entries(outgoing.rows, len(reps), entries)
    return Complex(lo=n, hi=max(c.hi, n), basis=basis, differentials=differentials)


def truncation_projection(c: Complex, n: int) -> ChainMap:
    """c → τ≥n c。"""
    truncated = truncate_geq(c, n)
    quotient = cokernel_quotient(c.d(n - 1))
    components = {k: SparseMatrix.identity(c.dim(k)) for k in range(n + 1, c.hi + 1) if c.dim(k)}
    columns = [dict(enumerate(quotient.reduce({j: Fraction(1)}))) for j in range(c.dim(n))]
    columns = [{i: v for i, v in column.items() if v} for column in columns]
    if quotient.dimension:
        components[n] = SparseMatrix.from_columns(quotient.dimension, columns)
    return ChainMap(c, truncated, components)


def restrict(c: Complex, lo: int, hi: int) -> Complex:
    """只保留 [lo, hi] 内的次数（边缘次数的上同调会改变）。"""
    basis = {k: labels for k, labels in c.basis.items() if lo <= k <= hi}
    differentials = {k: m for k, m in c.differentials.items() if lo <= k < hi}
    return Complex(lo=lo, hi=hi, basis=basis, differentials=differentials)


def labels_of(vectors: Iterable[Mapping[int, Fraction]], labels: Sequence[Label]) -> list[dict[Label, Fraction]]:
    return [{labels[i]: v for i, v in vector.items()} for vector in vectors]
