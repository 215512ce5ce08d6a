"""权分次（𝔾ₘ 等变）机制：分次复形的卷积张量、连通性检查、等变 bar 与周期化。"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Optional

from complexes import Complex, cohomology_table, direct_sum, tensor
from dga import AugmentedDGA, Element, require_valid
from domain.reports import (
    CapError,
    NonStabilizingError,
    PeriodizationError,
    PositivityError,
    ReportBuilder,
    ValidationReport,
    ViolationKind,
)
from exactlin import SparseMatrix, rank
from logger_config import get_logger

if TYPE_CHECKING:
    from bar import BarComplex

logger = get_logger("Weighted")

DimensionTable = dict[tuple[int, int], int]


@dataclass(frozen=True)
class GradedComplex:
    """权 → 复形；未列出的权为零复形。"""

    pieces: Mapping[int, Complex] = field(default_factory=dict)

    @classmethod
    def unit(cls) -> "GradedComplex":
        return cls({0: Complex.unit()})

    @classmethod
    def concentrated(cls, weight: int, c: Complex) -> "GradedComplex":
        return cls({weight: c})

    def weights(self) -> list[int]:
        return sorted(self.pieces)

    def piece(self, w: int) -> Complex:
        return self.pieces.get(w, Complex.zero())

    def weight_window(self) -> Optional[tuple[int, int]]:
        if not self.pieces:
            return None
        return min(self.pieces), max(self.pieces)

    def cohomology_table(self, jobs: int = 1) -> DimensionTable:
        table: DimensionTable = {}
        for w in self.weights():
            for n, dim in cohomology_table(self.pieces[w], jobs).items():
                if dim:
                    table[(w, n)] = dim
        return table

    def chain_table(self) -> DimensionTable:
        return dimension_table(self)


def graded_tensor(a: GradedComplex, b: GradedComplex, weight_bound: Optional[int] = None) -> GradedComplex:
    """(a ⊗ b)_k = ⊕_{i+j=k} a_i ⊗ b_j；weight_bound 给出时丢弃更高的权。"""
    pieces: dict[int, Complex] = {}
    targets = sorted({i + j for i in a.pieces for j in b.pieces})
    for k in targets:
        if weight_bound is not None and k > weight_bound:
            continue
        parts = [
            ((i, k - i), tensor(a.pieces[i], b.pieces[k - i]))
            for i in sorted(a.pieces)
            if k - i in b.pieces
        ]
        pieces[k] = direct_sum(parts)
    return GradedComplex(pieces)


def dimension_table(g: GradedComplex) -> DimensionTable:
    """链群维数表 (权, 次数) → dim。"""
    return {
        (w, n): g.pieces[w].dim(n)
        for w in g.weights()
        for n in g.pieces[w].degrees()
        if g.pieces[w].dim(n)
    }


def convolve_tables(left: Mapping[tuple[int, int], int], right: Mapping[tuple[int, int], int]) -> DimensionTable:
    result: DimensionTable = {}
    for (i, p), x in left.items():
        for (j, q), y in right.items():
            if x and y:
                key = (i + j, p + q)
                result[key] = result.get(key, 0) + x * y
    return dict(sorted(result.items()))


def algebra_graded_complex(a: AugmentedDGA, weight_bound: int, max_length: Optional[int] = None) -> GradedComplex:
    """A 本身按权拆成复形（含单位），权 0..weight_bound。"""
    letters = [a.unit_label(), *a.ideal_letters(max_weight=weight_bound, max_length=max_length)]
    by_weight: dict[int, dict[int, list]] = {}
    for label in letters:
        w, n = a.bidegree_of(label)
        if 0 <= w <= weight_bound:
            by_weight.setdefault(w, {}).setdefault(n, []).append(label)
    pieces = {}
    for w, by_degree in sorted(by_weight.items()):
        basis = {n: tuple(labels) for n, labels in by_degree.items()}
        lo, hi = min(basis), max(basis)
        index = {n: {label: i for i, label in enumerate(labels)} for n, labels in basis.items()}
        differentials = {}
        for n in range(lo, hi + 1):
            entries = []
            for col, label in enumerate(basis.get(n, ())):
                for target, value in a.differential({label: Fraction(1)}).items():
                    if target in index.get(n + 1, {}):
                        entries.append((index[n + 1][target], col, value))
            if entries:
                differentials[n] = SparseMatrix.from_entries(len(basis.get(n + 1, ())), len(basis[n]), entries)
        pieces[w] = Complex.build(basis, differentials, lo=lo, hi=hi)
    return GradedComplex(pieces)


# ---------------------------------------------------------------------------
# 混合 Tate 输入
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MixedTateInput:
    """Adams 正的权分次增广代数，附来源说明。"""

    q: AugmentedDGA
    provenance: str = ""

    def __post_init__(self) -> None:
        if not self.q.is_adams_positive():
            raise PositivityError(f"代数 {self.q.name} 的增广理想不全在权 ≥ 1 中")

    @classmethod
    def from_algebra(cls, q: AugmentedDGA) -> "MixedTateInput":
        return cls(require_valid(q), q.provenance)


@dataclass(frozen=True)
class ConnectivityReport:
    table: DimensionTable
    report: ValidationReport

    @property
    def ok(self) -> bool:
        return self.report.ok


def connectivity_check(q: MixedTateInput, weight_bound: int = 8) -> ConnectivityReport:
    """逐权上同调：通过当且仅当负次数上同调为零、H⁰(Q_0) 一维且 H⁰(Q_w)=0 (w ≥ 1)。"""
    graded = algebra_graded_complex(q.q, weight_bound)
    table = graded.cohomology_table()
    report = ReportBuilder(f"connectivity {q.q.name}")
    for (w, n), dim in sorted(table.items()):
        if n < 0:
            report.add(ViolationKind.CONNECTIVITY, f"H^{n}(Q_{w}) 维数 {dim} ≠ 0", w, n)
        elif n == 0 and w >= 1:
            report.add(ViolationKind.CONNECTIVITY, f"H^0(Q_{w}) 维数 {dim} ≠ 0", w, n)
    if table.get((0, 0), 0) != 1:
        report.add(ViolationKind.CONNECTIVITY, f"H^0(Q_0) 维数 {table.get((0, 0), 0)} ≠ 1", 0, 0)
    result = ConnectivityReport(table=table, report=report.build())
    logger.info(f"连通性检查 {q.q.name}: {'PASS' if result.ok else 'FAIL'}")
    return result


def equivariant_bar(q: MixedTateInput, weight_bound: int, jobs: int = 1) -> "BarComplex":
    """Adams 正输入的加权 bar 构造，权 ≤ weight_bound 上精确。"""
    from bar import bar_complex

    if weight_bound < 0:
        raise CapError(f"权上限必须非负: {weight_bound}")
    return bar_complex(q.q, weight_bound=weight_bound, jobs=jobs)


# ---------------------------------------------------------------------------
# 周期化
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PeriodicPiece:
    """(w, n) 处稳定后的余极限，实现为第 stage_weight 个权的 base 片段。"""

    weight: int
    degree: int
    stage_weight: int
    basis: tuple
    dimension: int


@dataclass(frozen=True)
class PeriodicAlgebra:
    base: AugmentedDGA
    kappa: Element
    kappa_weight: int
    pieces: Mapping[tuple[int, int], PeriodicPiece]
    maps: Mapping[tuple[int, int], SparseMatrix]

    def piece(self, w: int, n: int) -> PeriodicPiece:
        return self.pieces[(w, n)]

    def kappa_map(self, w: int, n: int) -> SparseMatrix:
        """稳定片段 (w, n) → (w + w₀, n) 上的乘 κ 映射。"""
        return self.maps[(w, n)]

    def dimension_table(self) -> DimensionTable:
        return {key: piece.dimension for key, piece in sorted(self.pieces.items()) if piece.dimension}


def _multiplication_matrix(base: AugmentedDGA, kappa: Element, source: list, target: list) -> SparseMatrix:
    index = {label: i for i, label in enumerate(target)}
    entries = []
    for col, label in enumerate(source):
        for image, value in base.multiply(kappa, {label: Fraction(1)}).items():
            # 被字长上限截掉的项在截断后的目标里为零
            if image in index:
                entries.append((index[image], col, value))
    return SparseMatrix.from_entries(len(target), len(source), entries)


def periodify(
    base: AugmentedDGA,
    kappa: Element,
    weight_window: tuple[int, int],
    degrees: Optional[list[int]] = None,
    bound: int = 8,
    max_length: Optional[int] = None,
) -> PeriodicAlgebra:
    """对每个 (w, n) 求 colim(base(w, n) → base(w+w₀, n) → …) 的稳定值。

    稳定判据：上限 bound 内最后两步乘 κ 映射都是同构，稳定阶段取最小的 k，
    使得从第 k 步起到上限的每一步都是同构。
    """
    if bound < 2:
        raise PeriodizationError(f"稳定上限为 {bound}，至少需要 2 步才能判定稳定")
    kappa = {label: Fraction(v) for label, v in kappa.items() if v}
    if not kappa:
        raise PeriodizationError("κ 为零")
    bidegrees = {base.bidegree_of(label) for label in kappa}
    if len(bidegrees) != 1:
        raise PeriodizationError("κ 不是齐次元素")
    (w0, n0), = bidegrees
    if n0 != 0:
        raise PeriodizationError(f"κ 的次数为 {n0}，应为 0")
    if w0 <= 0:
        raise PeriodizationError(f"κ 的权为 {w0}，应为正")
    if base.differential(kappa):
        raise PeriodizationError("κ 不是闭链")

    power = dict(kappa)
    for _ in range(bound):
        power = base.multiply(power, kappa)
        if not power:
            raise NonStabilizingError("κ 幂零，乘 κ 的序列不会稳定")

    lo, hi = weight_window
    if degrees is None:
        degrees = sorted({
            base.label_degree(label)
            for label in [base.unit_label(), *base.ideal_letters(max_weight=hi + bound * w0, max_length=max_length)]
        })

    def stage_basis(w: int, n: int) -> list:
        return base.full_basis_in_bidegree(w, n, max_length)

    pieces: dict[tuple[int, int], PeriodicPiece] = {}
    for w in range(lo, hi + 1):
        for n in degrees:
            ranks_ok = []
            for step in range(bound):
                source = stage_basis(w + step * w0, n)
                target = stage_basis(w + (step + 1) * w0, n)
                matrix = _multiplication_matrix(base, kappa, source, target)
                iso = len(source) == len(target) and rank(matrix) == len(source)
                ranks_ok.append(iso)
            if not (ranks_ok[-1] and ranks_ok[-2]):
                raise NonStabilizingError(f"(w={w}, n={n}) 在 {bound} 步内未稳定")
            stage = len(ranks_ok)
            while stage > 0 and ranks_ok[stage - 1]:
                stage -= 1
            stage_weight = w + stage * w0
            basis = tuple(stage_basis(stage_weight, n))
            pieces[(w, n)] = PeriodicPiece(w, n, stage_weight, basis, len(basis))

    maps: dict[tuple[int, int], SparseMatrix] = {}
    for (w, n), piece in pieces.items():
        target_basis = stage_basis(piece.stage_weight + w0, n)
        maps[(w, n)] = _multiplication_matrix(base, kappa, list(piece.basis), target_basis)
    logger.debug(f"周期化完成: {len(pieces)} 个双次数, κ 权 {w0}")
    return PeriodicAlgebra(base=base, kappa=kappa, kappa_weight=w0, pieces=pieces, maps=maps)
