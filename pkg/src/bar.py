"""约化 bar 复形 B(A) = ⊕ (sĀ)^{⊗n} 及其 Hopf dg 代数结构。

字 [a₁|…|aₙ] 的次数为 Σ(|aᵢ|−1)，记 sᵢ = |aᵢ|−1，εᵢ = s₁+…+sᵢ：

    d_int[a₁|…|aₙ] = −Σᵢ (−1)^{εᵢ₋₁} [a₁|…|daᵢ|…|aₙ]
    d_mul[a₁|…|aₙ] =  Σᵢ (−1)^{εᵢ}   [a₁|…|aᵢaᵢ₊₁|…|aₙ]

两种截断：
- 加权（Adams 正输入）：权 ≤ W 的全部字，精确；
- 长度上限 N：结构常数代数取字长 ≤ N 的子复形；自由代数取单项式总长 ≤ N 的商复形。
截断模型只在"稳定次数"上与真实上同调一致，见 BarComplex.is_stable。
"""

from __future__ import annotations

import math
from collections.abc import Hashable, Mapping, Sequence
from dataclasses import dataclass, field
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Optional

from complexes import Cohomology, Complex, cohomology
from dga import AlgebraKind, AugmentedDGA, StructConstAlgebra, require_valid
from domain.reports import (
    CapError,
    MixedAlgebraError,
    OracleSizeError,
    PositivityError,
    TruncationError,
    WindowError,
)
from exactlin import SparseMatrix, SparseVector, worker_pool
from logger_config import get_logger
from weighted import DimensionTable, GradedComplex, graded_tensor

logger = get_logger("Bar")

Label = Hashable


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


# ---------------------------------------------------------------------------
# 字与线性组合
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BarWord:
    """[a₁|…|aₙ]；suspended 为各字母的 |aᵢ|−1。"""

    letters: tuple[Label, ...]
    suspended: tuple[int, ...]
    weights: tuple[int, ...]
    owner: str
    lengths: tuple[int, ...] = ()

    @classmethod
    def empty(cls, owner: str) -> "BarWord":
        return cls((), (), (), owner, ())

    @property
    def degree(self) -> int:
        return sum(self.suspended)

    @property
    def weight(self) -> int:
        return sum(self.weights)

    @property
    def length(self) -> int:
        return len(self.letters)

    @property
    def total_length(self) -> int:
        """自由代数中为单项式总长度，结构常数代数中等于字长。"""
        return sum(self.lengths) if self.lengths else len(self.letters)

    def slice(self, start: int, stop: Optional[int] = None) -> "BarWord":
        return BarWord(
            self.letters[start:stop],
            self.suspended[start:stop],
            self.weights[start:stop],
            self.owner,
            self.lengths[start:stop],
        )

    def concat(self, other: "BarWord") -> "BarWord":
        _same_owner(self, other)
        return BarWord(
            self.letters + other.letters,
            self.suspended + other.suspended,
            self.weights + other.weights,
            self.owner,
            self.lengths + other.lengths,
        )

    def reversed(self) -> "BarWord":
        return BarWord(
            self.letters[::-1],
            self.suspended[::-1],
            self.weights[::-1],
            self.owner,
            self.lengths[::-1],
        )


BarElement = dict[BarWord, Fraction]
TensorElement = dict[tuple[BarWord, BarWord], Fraction]


def _same_owner(u: BarWord, v: BarWord) -> None:
    if u.owner != v.owner:
        raise MixedAlgebraError(f"不能组合来自 {u.owner} 与 {v.owner} 的 bar 字")


def _add(target: dict, key, value: Fraction) -> None:
    if not value:
        return
    updated = target.get(key, 0) + value
    if updated:
        target[key] = updated
    else:
        target.pop(key, None)


def _add_all(target: dict, other: Mapping, scale: Fraction = Fraction(1)) -> dict:
    for key, value in other.items():
        _add(target, key, scale * value)
    return target


# ---------------------------------------------------------------------------
# Hopf 结构
# ---------------------------------------------------------------------------

@lru_cache(maxsize=65536)
def _shuffle_words(u: BarWord, v: BarWord) -> tuple[tuple[BarWord, int], ...]:
    if not u.letters:
        return ((v, 1),)
    if not v.letters:
        return ((u, 1),)
    result: dict[BarWord, int] = {}
    head_u, tail_u = u.slice(0, 1), u.slice(1)
    for word, coefficient in _shuffle_words(tail_u, v):
        _add(result, head_u.concat(word), coefficient)
    head_v, tail_v = v.slice(0, 1), v.slice(1)
    # v 的首字母移到 u 的全部剩余字母之前
    sign = _sign(v.suspended[0] * u.degree)
    for word, coefficient in _shuffle_words(u, tail_v):
        _add(result, head_v.concat(word), sign * coefficient)
    return tuple(result.items())


def shuffle_product(u: BarWord, v: BarWord) -> BarElement:
    """带 Koszul 符号的洗牌积；空字为单位。"""
    _same_owner(u, v)
    return {word: Fraction(c) for word, c in _shuffle_words(u, v)}


def shuffle(x: Mapping[BarWord, Fraction], y: Mapping[BarWord, Fraction]) -> BarElement:
    result: BarElement = {}
    for u, a in x.items():
        for v, b in y.items():
            _add_all(result, shuffle_product(u, v), a * b)
    return result


def deconcatenation(u: BarWord) -> TensorElement:
    """Δ[a₁|…|aₙ] = Σᵢ [a₁|…|aᵢ] ⊗ [aᵢ₊₁|…|aₙ]。"""
    return {(u.slice(0, i), u.slice(i)): Fraction(1) for i in range(u.length + 1)}


def coproduct_of(x: Mapping[BarWord, Fraction]) -> TensorElement:
    result: TensorElement = {}
    for u, a in x.items():
        _add_all(result, deconcatenation(u), a)
    return result


def counit_of(x: Mapping[BarWord, Fraction]) -> Fraction:
    return sum((a for u, a in x.items() if not u.letters), Fraction(0))


def antipode(u: BarWord) -> BarElement:
    """S[a₁|…|aₙ] = (−1)ⁿ·(逆序的 Koszul 符号)·[aₙ|…|a₁]。"""
    koszul = 0
    s = u.suspended
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            koszul += s[i] * s[j]
    return {u.reversed(): Fraction(_sign(u.length + koszul))}


def antipode_of(x: Mapping[BarWord, Fraction]) -> BarElement:
    result: BarElement = {}
    for u, a in x.items():
        _add_all(result, antipode(u), a)
    return result


def tensor_product(x: Mapping[tuple[BarWord, BarWord], Fraction], y: Mapping[tuple[BarWord, BarWord], Fraction]) -> TensorElement:
    """(u₁⊗u₂)(v₁⊗v₂) = (−1)^{|u₂||v₁|} u₁v₁ ⊗ u₂v₂。"""
    result: TensorElement = {}
    for (u1, u2), a in x.items():
        for (v1, v2), b in y.items():
            sign = _sign(u2.degree * v1.degree)
            left = shuffle_product(u1, v1)
            right = shuffle_product(u2, v2)
            for p, c in left.items():
                for q, d in right.items():
                    _add(result, (p, q), sign * a * b * c * d)
    return result


def convolution_with_antipode(x: Mapping[BarWord, Fraction], left: bool = True) -> BarElement:
    """m∘(S⊗id)∘Δ（left）或 m∘(id⊗S)∘Δ。"""
    result: BarElement = {}
    for (p, q), a in coproduct_of(x).items():
        if left:
            _add_all(result, shuffle(antipode(p), {q: Fraction(1)}), a)
        else:
            _add_all(result, shuffle({p: Fraction(1)}, antipode(q)), a)
    return result


# ---------------------------------------------------------------------------
# 微分
# ---------------------------------------------------------------------------

class WordFactory:
    """为一个（增广为零的）代数缓存字母数据并构造字与微分。"""

    def __init__(self, algebra: AugmentedDGA) -> None:
        self.algebra = algebra
        self._info: dict[Label, tuple[int, int, int]] = {}

    def letter_info(self, letter: Label) -> tuple[int, int, int]:
        info = self._info.get(letter)
        if info is None:
            a = self.algebra
            info = (a.label_degree(letter) - 1, a.label_weight(letter), a.label_length(letter))
            self._info[letter] = info
        return info

    def word(self, letters: Sequence[Label]) -> BarWord:
        infos = [self.letter_info(letter) for letter in letters]
        return BarWord(
            tuple(letters),
            tuple(i[0] for i in infos),
            tuple(i[1] for i in infos),
            self.algebra.name,
            tuple(i[2] for i in infos),
        )

    def empty(self) -> BarWord:
        return BarWord.empty(self.algebra.name)

    def element(self, *letters: Label) -> BarElement:
        return {self.word(letters): Fraction(1)}

    def differential(self, u: BarWord) -> BarElement:
        a = self.algebra
        letters = u.letters
        result: BarElement = {}
        eps_before = 0
        for i, letter in enumerate(letters):
            sign_int = -_sign(eps_before)
            for image, c in a.ideal_differential(letter).items():
                _add(result, self.word(letters[:i] + (image,) + letters[i + 1:]), sign_int * c)
            eps_before += u.suspended[i]
            if i + 1 < len(letters):
                sign_mul = _sign(eps_before)
                for image, c in a.ideal_product(letter, letters[i + 1]).items():
                    _add(result, self.word(letters[:i] + (image,) + letters[i + 2:]), sign_mul * c)
        return result

    def differential_of(self, x: Mapping[BarWord, Fraction]) -> BarElement:
        result: BarElement = {}
        for u, c in x.items():
            _add_all(result, self.differential(u), c)
        return result


# ---------------------------------------------------------------------------
# BarComplex
# ---------------------------------------------------------------------------

class TruncationMode(StrEnum):
    WEIGHTED = "weighted"
    SUBCOMPLEX = "wordlength-subcomplex"
    QUOTIENT = "length-quotient"


def _instability_interval(kind: AlgebraKind, degree_range: Optional[tuple[int, int]], cap: int) -> Optional[tuple[float, float]]:
    """被截掉部分可能非零的次数区间 [L, U]；None 表示截断不影响任何次数。"""
    if degree_range is None:
        return None
    lo_deg, hi_deg = degree_range
    n = cap + 1
    if kind == AlgebraKind.FREE:
        lower = n * (lo_deg - 1) if lo_deg >= 1 else -math.inf
        upper = n * hi_deg - 1 if hi_deg <= 0 else math.inf
    else:
        lower = n * (lo_deg - 1) if lo_deg >= 1 else -math.inf
        upper = n * (hi_deg - 1) if hi_deg <= 1 else math.inf
    return lower, upper


@dataclass
class BarComplex:
    """按权分片的 bar 复形；基标签为 BarWord。"""

    algebra: AugmentedDGA
    reduced: AugmentedDGA
    mode: TruncationMode
    graded: GradedComplex
    factory: WordFactory
    weight_bound: Optional[int] = None
    cap: Optional[int] = None
    window: Optional[tuple[int, int]] = None
    jobs: int = 1
    _cohomology_cache: dict = field(default_factory=dict, repr=False)

    @cached_property
    def _interval(self) -> Optional[tuple[float, float]]:
        if self.mode == TruncationMode.WEIGHTED:
            return None
        return _instability_interval(self.reduced.kind, self.reduced.letter_degree_range(), self.cap)

    def is_stable(self, n: int) -> bool:
        """截断后的 H^n 是否必然等于真实 bar 复形的 H^n。"""
        interval = self._interval
        if interval is None:
            return True
        lower, upper = interval
        if self.mode == TruncationMode.QUOTIENT:
            degrees = (n, n + 1)
        else:
            degrees = (n - 1, n)
        return not any(lower <= p <= upper for p in degrees)

    @property
    def exact(self) -> bool:
        return self.mode == TruncationMode.WEIGHTED

    def weights(self) -> list[int]:
        return self.graded.weights()

    def piece(self, w: int) -> Complex:
        return self.graded.piece(w)

    def words(self, w: int, n: int) -> tuple[BarWord, ...]:
        return self.piece(w).labels(n)

    def in_window(self, n: int) -> bool:
        return self.window is None or self.window[0] <= n <= self.window[1]

    def bidegrees(self) -> list[tuple[int, int]]:
        """链群非零、且落在输出窗口内的双次数，升序。"""
        return [
            (w, n)
            for w in self.weights()
            for n in self.piece(w).degrees()
            if self.piece(w).dim(n) and self.in_window(n)
        ]

    def cohomology(self, w: int, n: int) -> Cohomology:
        key = (w, n)
        cached = self._cohomology_cache.get(key)
        if cached is None:
            c = self.piece(w)
            if not c.in_window(n):
                if w not in self.graded.pieces:
                    raise WindowError(f"权 {w} 没有物化")
                cached = Cohomology(n, 0, ())
            else:
                cached = cohomology(c, n)
            self._cohomology_cache[key] = cached
        return cached

    def cohomology_table(self, jobs: Optional[int] = None) -> DimensionTable:
        keys = self.bidegrees()
        workers = jobs if jobs is not None else self.jobs
        if workers > 1 and len(keys) > 1:
            with worker_pool(workers) as pool:
                dims = list(pool.map(lambda key: self.cohomology(*key).dimension, keys))
        else:
            dims = [self.cohomology(*key).dimension for key in keys]
        return dict(zip(keys, dims))

    def vector_of(self, w: int, n: int, x: Mapping[BarWord, Fraction]) -> SparseVector:
        c = self.piece(w)
        vector: SparseVector = {}
        for word, value in x.items():
            if word.weight == w and word.degree == n and value:
                vector[c.index(n, word)] = Fraction(value)
        return vector

    def element_of(self, w: int, n: int, vector: Mapping[int, Fraction]) -> BarElement:
        labels = self.piece(w).labels(n)
        return {labels[i]: Fraction(v) for i, v in vector.items() if v}

    def differential(self, x: Mapping[BarWord, Fraction]) -> BarElement:
        """截断复形中的微分（商模型里丢掉超出上限的项）。"""
        image = self.factory.differential_of(x)
        return {u: c for u, c in image.items() if self.contains(u)}

    def contains(self, u: BarWord) -> bool:
        c = self.graded.pieces.get(u.weight)
        if c is None or not c.in_window(u.degree):
            return False
        try:
            c.index(u.degree, u)
        except KeyError:
            return False
        return True


def _enumerate_words(
    factory: WordFactory,
    letters: Sequence[Label],
    cap: Optional[int],
    weight_bound: Optional[int],
) -> list[BarWord]:
    infos = [(letter, factory.letter_info(letter)) for letter in letters]
    words = [factory.empty()]
    frontier = [factory.empty()]
    while frontier:
        extended = []
        for word in frontier:
            for letter, (_, w, l) in infos:
                if cap is not None and word.total_length + l > cap:
                    continue
                if cap is None and word.weight + w > weight_bound:
                    continue
                extended.append(word.concat(factory.word((letter,))))
        words.extend(extended)
        frontier = extended
    if weight_bound is not None:
        words = [u for u in words if u.weight <= weight_bound]
    return words


def _assemble_piece(
    factory: WordFactory,
    words: Sequence[BarWord],
    drop_missing: bool,
) -> Complex:
    by_degree: dict[int, list[BarWord]] = {}
    for u in words:
        by_degree.setdefault(u.degree, []).append(u)
    a = factory.algebra

    def word_key(u: BarWord) -> tuple:
        return (u.total_length, u.length, tuple(a.letter_sort_key(letter) for letter in u.letters))

    basis = {n: tuple(sorted(group, key=word_key)) for n, group in by_degree.items()}
    index = {n: {u: i for i, u in enumerate(group)} for n, group in basis.items()}
    differentials: dict[int, SparseMatrix] = {}
    for n, group in basis.items():
        target_index = index.get(n + 1, {})
        entries: dict[int, dict[int, Fraction]] = {}
        for col, u in enumerate(group):
            for image, value in factory.differential(u).items():
                row = target_index.get(image)
                if row is None:
                    if drop_missing:
                        continue
                    raise TruncationError(f"bar 微分离开了基: {image.letters}")
                entries.setdefault(row, {})[col] = value
        matrix = SparseMatrix.from_accumulator(len(basis.get(n + 1, ())), len(group), entries)
        if not matrix.is_zero():
            differentials[n] = matrix
    return Complex.build(basis, differentials)


def bar_complex(
    a: AugmentedDGA,
    window: Optional[tuple[int, int]] = None,
    cap: Optional[int] = None,
    weight_bound: Optional[int] = None,
    jobs: int = 1,
) -> BarComplex:
    """构造 B(a)。无 cap 时输入必须 Adams 正并给出 weight_bound。"""
    if window is not None and window[0] > window[1]:
        raise CapError(f"窗口非法: {window[0]}:{window[1]}")
    if cap is not None and cap < 0:
        raise CapError(f"字长上限必须非负: {cap}")
    if weight_bound is not None and weight_bound < 0:
        raise CapError(f"权上限必须非负: {weight_bound}")
    require_valid(a)
    reduced = a.reduced()
    adams = reduced.is_adams_positive()
    if cap is None:
        if not adams:
            raise PositivityError(f"代数 {a.name} 不是 Adams 正的，需要 --cap 字长上限")
        if weight_bound is None:
            raise CapError("Adams 正输入需要 --weight-bound（或改用 --cap）")
    if adams and weight_bound is not None and (cap is None or cap >= weight_bound):
        mode = TruncationMode.WEIGHTED
        cap = None
    elif reduced.kind == AlgebraKind.FREE:
        mode = TruncationMode.QUOTIENT
    else:
        mode = TruncationMode.SUBCOMPLEX

    factory = WordFactory(reduced)
    if mode == TruncationMode.WEIGHTED:
        letters = reduced.ideal_letters(max_weight=weight_bound)
    else:
        letters = reduced.ideal_letters(max_length=cap)
    words = _enumerate_words(factory, letters, cap, weight_bound)
    by_weight: dict[int, list[BarWord]] = {}
    for u in words:
        by_weight.setdefault(u.weight, []).append(u)
    drop_missing = mode == TruncationMode.QUOTIENT
    weights = sorted(by_weight)
    if jobs > 1 and len(weights) > 1:
        with worker_pool(jobs) as pool:
            complexes = list(pool.map(lambda w: _assemble_piece(factory, by_weight[w], drop_missing), weights))
    else:
        complexes = [_assemble_piece(factory, by_weight[w], drop_missing) for w in weights]
    graded = GradedComplex(dict(zip(weights, complexes)))
    logger.info(
        f"bar({a.name}): 模式 {mode.value}, {len(letters)} 个字母, {len(words)} 个字, 权 {weights}"
    )
    return BarComplex(
        algebra=a,
        reduced=reduced,
        mode=mode,
        graded=graded,
        factory=factory,
        weight_bound=weight_bound,
        cap=cap,
        window=window,
        jobs=jobs,
    )


# ---------------------------------------------------------------------------
# Čech 层级
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CechLevel:
    level: int
    graded: GradedComplex
    table: DimensionTable


def cech_level(
    a: AugmentedDGA,
    n: int,
    window: Optional[tuple[int, int]] = None,
    cap: Optional[int] = None,
    weight_bound: Optional[int] = None,
    jobs: int = 1,
) -> CechLevel:
    """k ⊗_A … ⊗_A k（n+1 个 k）的模型：B(a) 的 n 重张量幂。"""
    if n < 0:
        raise CapError(f"Čech 层级必须非负: {n}")
    if n == 0:
        graded = GradedComplex.unit()
    else:
        bar = bar_complex(a, window=None, cap=cap, weight_bound=weight_bound, jobs=jobs)
        graded = bar.graded
        for _ in range(n - 1):
            graded = graded_tensor(graded, bar.graded, weight_bound)
    table = {
        key: dim
        for key, dim in _graded_table(graded, jobs).items()
        if window is None or window[0] <= key[1] <= window[1]
    }
    return CechLevel(level=n, graded=graded, table=table)


def _graded_table(graded: GradedComplex, jobs: int) -> DimensionTable:
    table: DimensionTable = {}
    for w in graded.weights():
        c = graded.pieces[w]
        for n in c.degrees():
            if c.dim(n):
                table[(w, n)] = cohomology(c, n).dimension
    return table


# ---------------------------------------------------------------------------
# 余单子（未正规化 Moore）模型
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OracleModel:
    levels: int
    graded: GradedComplex
    degree_range: tuple[int, int]

    def is_stable(self, n: int) -> bool:
        interval = _instability_interval(AlgebraKind.STRUCT, self.degree_range, self.levels)
        if interval is None:
            return True
        lower, upper = interval
        return not any(lower <= p <= upper for p in (n - 1, n))

    def table(self) -> DimensionTable:
        return _graded_table(self.graded, 1)


def comonadic_oracle(a: AugmentedDGA, n: int, max_basis: int = 20000) -> OracleModel:
    """未正规化的两边 bar 复形 B(k, A, k)，截到单纯层级 n。

    第 k 层为 A^{⊗k}（含单位）；面映射 d₀ = t(a₁)[a₂|…]，dₖ = t(aₖ)[…|aₖ₋₁]，
    中间的 dᵢ 把 aᵢ, aᵢ₊₁ 相乘；符号为 (−1)^{εᵢ}。
    """
    if not isinstance(a, StructConstAlgebra):
        raise CapError("余单子模型只接受结构常数代数")
    if n < 0:
        raise CapError(f"层级必须非负: {n}")
    require_valid(a)
    names = list(a.labels())
    total = sum(len(names) ** k for k in range(n + 1))
    if total > max_basis:
        raise OracleSizeError(f"余单子模型需要 {total} 个基向量，超过上限 {max_basis}")
    info = {name: (a.label_degree(name) - 1, a.label_weight(name)) for name in names}

    words: list[tuple[str, ...]] = [()]
    frontier: list[tuple[str, ...]] = [()]
    for _ in range(n):
        frontier = [word + (name,) for word in frontier for name in names]
        words.extend(frontier)

    def degree(word):
        return sum(info[x][0] for x in word)

    def weight(word):
        return sum(info[x][1] for x in word)

    def face_sum(word) -> dict[tuple[str, ...], Fraction]:
        result: dict[tuple[str, ...], Fraction] = {}
        k = len(word)
        if k == 0:
            return result
        eps = 0
        for i, letter in enumerate(word):
            s = info[letter][0]
            sign_int = -_sign(eps)
            for image, c in a.differential({letter: Fraction(1)}).items():
                _add(result, word[:i] + (image,) + word[i + 1:], sign_int * c)
            eps += s
            if i + 1 < k:
                for image, c in a.multiply({letter: Fraction(1)}, {word[i + 1]: Fraction(1)}).items():
                    _add(result, word[:i] + (image,) + word[i + 2:], _sign(eps) * c)
        _add(result, word[1:], a.augment({word[0]: Fraction(1)}))
        _add(result, word[:-1], _sign(eps) * a.augment({word[-1]: Fraction(1)}))
        return result

    by_weight: dict[int, dict[int, list]] = {}
    for word in words:
        by_weight.setdefault(weight(word), {}).setdefault(degree(word), []).append(word)
    pieces = {}
    for w, by_degree in sorted(by_weight.items()):
        basis = {deg: tuple(group) for deg, group in by_degree.items()}
        index = {deg: {word: i for i, word in enumerate(group)} for deg, group in basis.items()}
        differentials = {}
        for deg, group in basis.items():
            entries: dict[int, dict[int, Fraction]] = {}
            for col, word in enumerate(group):
                for image, value in face_sum(word).items():
                    entries.setdefault(index[deg + 1][image], {})[col] = value
            matrix = SparseMatrix.from_accumulator(len(basis.get(deg + 1, ())), len(group), entries)
            if not matrix.is_zero():
                differentials[deg] = matrix
        pieces[w] = Complex.build(basis, differentials)
    degrees = [info[name][0] + 1 for name in names]
    logger.info(f"余单子模型 {a.name}: 层级 ≤ {n}, {total} 个基向量")
    return OracleModel(levels=n, graded=GradedComplex(pieces), degree_range=(min(degrees), max(degrees)))


@dataclass(frozen=True)
class ModelComparison:
    rows: tuple[tuple[int, int, int, int], ...]

    @property
    def match(self) -> bool:
        return all(bar_dim == oracle_dim for _, _, bar_dim, oracle_dim in self.rows)

    def render(self) -> list[str]:
        lines = [f"{w} {n} {b} {o}" for w, n, b, o in self.rows]
        lines.append("MATCH" if self.match else "MISMATCH")
        return lines


def compare_models(
    a: AugmentedDGA,
    levels: int,
    window: Optional[tuple[int, int]] = None,
    max_basis: int = 20000,
    jobs: int = 1,
) -> ModelComparison:
    """正规化 bar 与 Moore 模型在双方都稳定的次数上逐项对比上同调维数。"""
    oracle = comonadic_oracle(a, levels, max_basis)
    bar = bar_complex(a, window=window, cap=levels, jobs=jobs)
    oracle_table = oracle.table()
    bar_table = bar.cohomology_table()
    keys = sorted(set(oracle_table) | set(bar_table))
    rows = []
    for w, n in keys:
        if window is not None and not window[0] <= n <= window[1]:
            continue
        if bar.is_stable(n) and oracle.is_stable(n):
            rows.append((w, n, bar_table.get((w, n), 0), oracle_table.get((w, n), 0)))
    return ModelComparison(tuple(rows))
