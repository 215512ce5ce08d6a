"""有理数域上的稀疏精确线性代数：秩、核、余核与解方程。

所有结果都归约到唯一的简化行阶梯形（主元取最左列），因此不同消元策略
给出逐位相同的答案。
"""

from __future__ import annotations

import math
from collections import defaultdict
from collections.abc import Iterable, Iterator, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Literal, Optional

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from domain.reports import SolveError
from logger_config import get_logger

logger = get_logger("ExactLinalg")

Rat = Fraction
SparseVector = dict[int, Fraction]
Strategy = Literal["auto", "dense", "markowitz"]

DENSE_FALLBACK_SIZE = 64
_dense_fallback_size: ContextVar[int] = ContextVar("dense_fallback_size", default=DENSE_FALLBACK_SIZE)
# 分子位长超过该值时改用普通有理消元
FRACTION_FREE_BIT_LIMIT = 256


def dense_fallback_size() -> int:
    """当前上下文的稠密回退阈值。"""
    return _dense_fallback_size.get()


@contextmanager
def dense_fallback(size: int) -> Iterator[None]:
    """在 with 块内改用给定的稠密回退阈值，退出时恢复。"""
    if size < 1:
        raise ValueError(f"稠密回退阈值必须为正: {size}")
    token = _dense_fallback_size.set(size)
    try:
        yield
    finally:
        _dense_fallback_size.reset(token)


def worker_pool(max_workers: int) -> ThreadPoolExecutor:
    """工作线程继承创建者当前的稠密回退阈值。"""
    return ThreadPoolExecutor(
        max_workers=max_workers,
        initializer=_dense_fallback_size.set,
        initargs=(_dense_fallback_size.get(),),
    )


def parse_rat(text: str) -> Fraction:
    """解析 `p/q` 或整数文本。"""
    return Fraction(text.strip())


def format_rat(value: Fraction) -> str:
    return str(Fraction(value))


# ---------------------------------------------------------------------------
# 稀疏向量
# ---------------------------------------------------------------------------

def vec_add(target: SparseVector, other: Mapping[int, Fraction], scale: Fraction = Fraction(1)) -> SparseVector:
    """target += scale * other（原地），并删除零项。"""
    if scale == 0:
        return target
    for key, value in other.items():
        updated = target.get(key, 0) + scale * value
        if updated:
            target[key] = updated
        else:
            target.pop(key, None)
    return target


def vec_scale(vector: Mapping[int, Fraction], scale: Fraction) -> SparseVector:
    if scale == 0:
        return {}
    return {key: value * scale for key, value in vector.items()}


# ---------------------------------------------------------------------------
# SparseMatrix
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SparseMatrix:
    """按行存储的稀疏有理矩阵，不保存显式零。"""

    rows: int
    cols: int
    data: Mapping[int, Mapping[int, Fraction]]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError(f"矩阵尺寸非法: {self.rows}x{self.cols}")
        for r, row in self.data.items():
            if not 0 <= r < self.rows:
                raise ValueError(f"行下标越界: {r}")
            for c, value in row.items():
                if not 0 <= c < self.cols:
                    raise ValueError(f"列下标越界: {c}")
                if value == 0:
                    raise ValueError(f"存在显式零: ({r}, {c})")

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[tuple[int, int, Fraction]]) -> "SparseMatrix":
        data: dict[int, dict[int, Fraction]] = {}
        for r, c, value in entries:
            value = Fraction(value)
            bucket = data.setdefault(r, {})
            if c in bucket:
                raise ValueError(f"重复项: ({r}, {c})")
            if value:
                bucket[c] = value
        return cls(rows, cols, {r: row for r, row in data.items() if row})

    @classmethod
    def from_accumulator(cls, rows: int, cols: int, data: Mapping[int, Mapping[int, Fraction]]) -> "SparseMatrix":
        """从可能含零的累加字典构造，零项被丢弃。"""
        clean = {}
        for r, row in data.items():
            kept = {c: Fraction(v) for c, v in row.items() if v}
            if kept:
                clean[r] = kept
        return cls(rows, cols, clean)

    @classmethod
    def from_dense(cls, table: Sequence[Sequence[object]], cols: Optional[int] = None) -> "SparseMatrix":
        n_rows = len(table)
        n_cols = cols if cols is not None else (len(table[0]) if n_rows else 0)
        entries = [
            (r, c, Fraction(value))
            for r, row in enumerate(table)
            for c, value in enumerate(row)
            if Fraction(value) != 0
        ]
        return cls.from_entries(n_rows, n_cols, entries)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping[int, Fraction]]) -> "SparseMatrix":
        data: dict[int, dict[int, Fraction]] = defaultdict(dict)
        for c, column in enumerate(columns):
            for r, value in column.items():
                if value:
                    data[r][c] = Fraction(value)
        return cls(rows, len(columns), dict(data))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {i: {i: Fraction(1)} for i in range(n)})

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return sum(len(row) for row in self.data.values())

    @property
    def entries(self) -> list[tuple[int, int, Fraction]]:
        return sorted((r, c, v) for r, row in self.data.items() for c, v in row.items())

    def get(self, r: int, c: int) -> Fraction:
        return self.data.get(r, {}).get(c, Fraction(0))

    def is_zero(self) -> bool:
        return not self.data

    def row(self, r: int) -> SparseVector:
        return dict(self.data.get(r, {}))

    @cached_property
    def _columns(self) -> dict[int, dict[int, Fraction]]:
        columns: dict[int, dict[int, Fraction]] = defaultdict(dict)
        for r, row in self.data.items():
            for c, value in row.items():
                columns[c][r] = value
        return dict(columns)

    def column(self, c: int) -> SparseVector:
        return dict(self._columns.get(c, {}))

    def columns(self) -> list[SparseVector]:
        return [self.column(c) for c in range(self.cols)]

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {c: dict(col) for c, col in self._columns.items()})

    def scale(self, factor: Fraction) -> "SparseMatrix":
        if factor == 0:
            return SparseMatrix.zero(self.rows, self.cols)
        return SparseMatrix(self.rows, self.cols, {r: vec_scale(row, factor) for r, row in self.data.items()})

    def apply(self, vector: Mapping[int, Fraction]) -> SparseVector:
        """矩阵乘稀疏列向量。"""
        result: SparseVector = {}
        if not vector:
            return result
        for c, x in vector.items():
            if x:
                vec_add(result, self._columns.get(c, {}), Fraction(x))
        return result

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError(f"尺寸不匹配: {self.shape} @ {other.shape}")
        data: dict[int, SparseVector] = {}
        for r, row in self.data.items():
            acc: SparseVector = {}
            for k, value in row.items():
                other_row = other.data.get(k)
                if other_row:
                    vec_add(acc, other_row, value)
            if acc:
                data[r] = acc
        return SparseMatrix(self.rows, other.cols, data)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise ValueError(f"尺寸不匹配: {self.shape} + {other.shape}")
        data = {r: dict(row) for r, row in self.data.items()}
        for r, row in other.data.items():
            vec_add(data.setdefault(r, {}), row)
        return SparseMatrix(self.rows, self.cols, {r: row for r, row in data.items() if row})

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + other.scale(Fraction(-1))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.shape, tuple(self.entries)))

    def to_dense(self) -> list[list[Fraction]]:
        table = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for r, row in self.data.items():
            for c, value in row.items():
                table[r][c] = value
        return table

    def __repr__(self) -> str:
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz})"


# ---------------------------------------------------------------------------
# 规范简化行阶梯形
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Echelon:
    """行空间的简化行阶梯形：主元列在各自行中系数为 1，在其它行中为 0。"""

    cols: int
    pivots: tuple[int, ...]
    rows: tuple[SparseVector, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vector: Mapping[int, Fraction]) -> SparseVector:
        """返回 vector 模行空间的规范代表（在所有主元列上为零）。"""
        work = dict(vector)
        for pivot, row in zip(self.pivots, self.rows):
            coefficient = work.get(pivot)
            if coefficient:
                vec_add(work, row, -coefficient)
        return work

    def coordinates(self, vector: Mapping[int, Fraction]) -> list[Fraction]:
        """若 vector 在行空间中，返回它在各行上的系数。"""
        return [Fraction(vector.get(pivot, 0)) for pivot in self.pivots]

    def contains(self, vector: Mapping[int, Fraction]) -> bool:
        return not self.reduce(vector)

    def free_columns(self) -> list[int]:
        pivot_set = set(self.pivots)
        return [c for c in range(self.cols) if c not in pivot_set]


def _gauss_jordan(rows: Iterable[Mapping[int, Fraction]], cols: int) -> Echelon:
    pivot_rows: dict[int, SparseVector] = {}
    for raw in rows:
        row = {c: Fraction(v) for c, v in raw.items() if v}
        for pivot, prow in pivot_rows.items():
            coefficient = row.get(pivot)
            if coefficient:
                vec_add(row, prow, -coefficient)
        if not row:
            continue
        pivot = min(row)
        lead = row[pivot]
        if lead != 1:
            row = vec_scale(row, 1 / lead)
        for other in pivot_rows.values():
            coefficient = other.get(pivot)
            if coefficient:
                vec_add(other, row, -coefficient)
        pivot_rows[pivot] = row
    ordered = sorted(pivot_rows)
    return Echelon(cols=cols, pivots=tuple(ordered), rows=tuple(pivot_rows[p] for p in ordered))


def _integer_row(row: Mapping[int, Fraction]) -> dict[int, int]:
    denominator = 1
    for value in row.values():
        denominator = math.lcm(denominator, Fraction(value).denominator)
    scaled = {c: int(Fraction(v) * denominator) for c, v in row.items() if v}
    content = 0
    for value in scaled.values():
        content = math.gcd(content, value)
    if content > 1:
        scaled = {c: v // content for c, v in scaled.items()}
    return scaled


def _markowitz_basis(rows: Sequence[Mapping[int, Fraction]]) -> list[Mapping[int, object]]:
    """Markowitz 选主元的前向消元，返回行空间的一组基（行数 = 秩）。

    整数行用无分数（交叉相乘 + 约去内容）消元；系数膨胀过大时换成有理消元。
    """
    work: dict[int, dict[int, object]] = {}
    fraction_free = True
    for index, row in enumerate(rows):
        if row:
            scaled = _integer_row(row)
            if scaled:
                work[index] = scaled
                if max(abs(v) for v in scaled.values()).bit_length() > FRACTION_FREE_BIT_LIMIT:
                    fraction_free = False
    if not fraction_free:
        work = {i: {c: Fraction(v) for c, v in row.items()} for i, row in work.items()}
    logger.debug(f"Markowitz 消元: {len(work)} 行, 无分数={fraction_free}")

    column_rows: dict[int, set[int]] = defaultdict(set)
    for index, row in work.items():
        for c in row:
            column_rows[c].add(index)

    basis: list[Mapping[int, object]] = []
    while work:
        column = min(column_rows, key=lambda c: (len(column_rows[c]), c))
        pivot_index = min(column_rows[column], key=lambda r: (len(work[r]), r))
        pivot_row = work.pop(pivot_index)
        for c in pivot_row:
            column_rows[c].discard(pivot_index)
            if not column_rows[c]:
                del column_rows[c]
        a = pivot_row[column]
        for other_index in sorted(column_rows.get(column, ())):
            old = work[other_index]
            b = old[column]
            if fraction_free:
                g = math.gcd(a, b)
                fa, fb = a // g, b // g
                new = {c: fa * v for c, v in old.items()}
            else:
                fb = Fraction(b) / a
                new = dict(old)
            for c, v in pivot_row.items():
                updated = new.get(c, 0) - fb * v
                if updated:
                    new[c] = updated
                else:
                    new.pop(c, None)
            if fraction_free and new:
                content = 0
                for v in new.values():
                    content = math.gcd(content, v)
                if content > 1:
                    new = {c: v // content for c, v in new.items()}
            for c in old:
                if c not in new:
                    column_rows[c].discard(other_index)
                    if not column_rows[c]:
                        del column_rows[c]
            for c in new:
                if c not in old:
                    column_rows[c].add(other_index)
            if new:
                work[other_index] = new
            else:
                del work[other_index]
        basis.append(pivot_row)
    return basis


def _dense_echelon(rows: Sequence[Mapping[int, Fraction]], cols: int) -> Echelon:
    table = [[QQ(0)] * cols for _ in rows]
    for r, row in enumerate(rows):
        for c, value in row.items():
            value = Fraction(value)
            table[r][c] = QQ(value.numerator, value.denominator)
    rref, pivots = DomainMatrix(table, (len(rows), cols), QQ).rref()
    reduced = rref.to_list()
    result_rows = []
    for r, _ in enumerate(pivots):
        result_rows.append({
            c: Fraction(int(value.numerator), int(value.denominator))
            for c, value in enumerate(reduced[r])
            if value
        })
    return Echelon(cols=cols, pivots=tuple(pivots), rows=tuple(result_rows))


def echelon_rows(
    rows: Sequence[Mapping[int, Fraction]],
    cols: int,
    strategy: Strategy = "auto",
) -> Echelon:
    """行向量组张成空间的规范简化行阶梯形。"""
    rows = [row for row in rows if row]
    if not rows or cols == 0:
        return Echelon(cols=cols, pivots=(), rows=())
    if strategy == "auto":
        limit = _dense_fallback_size.get()
        small = len(rows) < limit and cols < limit
        strategy = "dense" if small else "markowitz"
    if strategy == "dense":
        return _dense_echelon(rows, cols)
    if strategy == "markowitz":
        basis = _markowitz_basis(rows)
        return _gauss_jordan(({c: Fraction(v) for c, v in row.items()} for row in basis), cols)
    raise ValueError(f"未知消元策略: {strategy}")


def echelon_form(m: SparseMatrix, strategy: Strategy = "auto") -> Echelon:
    return echelon_rows([m.data[r] for r in sorted(m.data)], m.cols, strategy)


# ---------------------------------------------------------------------------
# 公共操作
# ---------------------------------------------------------------------------

def rank(m: SparseMatrix, strategy: Strategy = "auto") -> int:
    return echelon_form(m, strategy).rank


def kernel_from_echelon(echelon: Echelon) -> list[SparseVector]:
    basis = []
    for free in echelon.free_columns():
        vector: SparseVector = {free: Fraction(1)}
        for pivot, row in zip(echelon.pivots, echelon.rows):
            value = row.get(free)
            if value:
                vector[pivot] = -value
        basis.append(vector)
    return basis


def kernel_basis(m: SparseMatrix, strategy: Strategy = "auto") -> list[SparseVector]:
    """零空间的一组基，共 cols - rank 个向量。"""
    return kernel_from_echelon(echelon_form(m, strategy))


@dataclass(frozen=True)
class CokernelQuotient:
    """coker(m) = Q^rows / im(m)：维数、代表向量与约化映射。"""

    dimension: int
    representatives: tuple[int, ...]
    image: Echelon

    def representative_vectors(self) -> list[SparseVector]:
        return [{index: Fraction(1)} for index in self.representatives]

    def reduce(self, vector: Mapping[int, Fraction]) -> list[Fraction]:
        """把向量约化为代表向量上的坐标；im(m) 中的向量约化为零。"""
        remainder = self.image.reduce(vector)
        return [Fraction(remainder.get(index, 0)) for index in self.representatives]


def cokernel_quotient(m: SparseMatrix, strategy: Strategy = "auto") -> CokernelQuotient:
    image = echelon_form(m.transpose(), strategy)
    free = tuple(image.free_columns())
    return CokernelQuotient(dimension=len(free), representatives=free, image=image)


def solve(m: SparseMatrix, b: Mapping[int, Fraction], strategy: Strategy = "auto") -> SparseVector:
    """求 m x = b 的一个解（自由变量取零）；无解时抛出 SolveError。"""
    augmented_rows: dict[int, SparseVector] = {r: dict(row) for r, row in m.data.items()}
    for r, value in b.items():
        if value:
            augmented_rows.setdefault(r, {})[m.cols] = Fraction(value)
    echelon = echelon_rows([augmented_rows[r] for r in sorted(augmented_rows)], m.cols + 1, strategy)
    if m.cols in echelon.pivots:
        raise SolveError("线性方程组不相容")
    solution: SparseVector = {}
    for pivot, row in zip(echelon.pivots, echelon.rows):
        value = row.get(m.cols)
        if value:
            solution[pivot] = value
    return solution


@dataclass(frozen=True)
class QuotientBasis:
    """子商空间 space / sub 的规范代表。

    `sub` 是子空间的阶梯形，`classes` 是 space 中向量模 sub 约化后再取阶梯形；
    classes 的每一行就是一个商类的代表。
    """

    sub: Echelon
    classes: Echelon

    @property
    def dimension(self) -> int:
        return self.classes.rank

    @property
    def representatives(self) -> tuple[SparseVector, ...]:
        return self.classes.rows

    def coordinates(self, vector: Mapping[int, Fraction]) -> list[Fraction]:
        """space 中向量所属商类在代表上的坐标。

        对 space 之外的向量也会返回一组数，但它不对应任何商类，不要使用。
        """
        return self.classes.coordinates(self.sub.reduce(vector))


def quotient_basis(
    sub: Sequence[Mapping[int, Fraction]],
    space: Sequence[Mapping[int, Fraction]],
    cols: int,
    strategy: Strategy = "auto",
) -> QuotientBasis:
    sub_echelon = echelon_rows(list(sub), cols, strategy)
    reduced = [sub_echelon.reduce(vector) for vector in space]
    return QuotientBasis(sub=sub_echelon, classes=echelon_rows(reduced, cols, strategy))
