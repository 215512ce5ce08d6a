"""测试共用的路径、夹具代数与随机生成器。"""

import os
import random
import sys
from fractions import Fraction
from pathlib import Path


REPO_ROOT = Path(__file__).resolve().parents[1]
SRC_ROOT = REPO_ROOT / "src"
ALGEBRA_DIR = REPO_ROOT / "data" / "algebras"

os.environ.setdefault("TANNAKA_LOG_NO_FILE", "1")

if str(SRC_ROOT) not in sys.path:
    sys.path.insert(0, str(SRC_ROOT))


def algebra_path(name: str) -> str:
    return str(ALGEBRA_DIR / f"{name}.alg")


def load_algebra(name: str):
    from formats import parse_algebra_file

    return parse_algebra_file(algebra_path(name)).algebra


def rank3_algebra():
    """k[x]/(x³)，基 {1, x, y = x²}，全部次数 0。"""
    from dga import Generator, StructConstAlgebra

    return StructConstAlgebra(
        "rank3",
        [Generator("one", 0), Generator("x", 0), Generator("y", 0)],
        unit="one",
        products={("x", "x"): {"y": 1}},
    )


def random_complex(rng: random.Random, lo: int = -2, hi: int = 2, block: int = 2, shuffles: int = 12):
    """已知上同调的随机有界复形。

    先取标准形（每个次数 h 个上同调类、b 个边界、s 个被 d 打到下一次数的源），
    再在各次数做随机初等基变换。返回 (Complex, {n: dim H^n})。
    """
    from complexes import Complex
    from exactlin import SparseMatrix

    degrees = list(range(lo, hi + 1))
    h = {n: rng.randint(0, block) for n in degrees}
    s = {n: (rng.randint(0, block) if n < hi else 0) for n in degrees}
    b = {n: (s[n - 1] if n > lo else 0) for n in degrees}
    dims = {n: h[n] + b[n] + s[n] for n in degrees}

    dense: dict[int, list[list[Fraction]]] = {}
    for n in degrees[:-1]:
        matrix = [[Fraction(0)] * dims[n] for _ in range(dims[n + 1])]
        for j in range(s[n]):
            matrix[h[n + 1] + j][h[n] + b[n] + j] = Fraction(1)
        dense[n] = matrix

    for n in degrees:
        size = dims[n]
        if size < 2:
            continue
        for _ in range(shuffles):
            i, j = rng.sample(range(size), 2)
            c = Fraction(rng.choice([-2, -1, 1, 2, 3]), rng.choice([1, 2]))
            # 新基 e_j' = e_j − c·e_i：出射矩阵列 j 减 c·列 i，入射矩阵行 i 加 c·行 j
            if n in dense:
                for row in dense[n]:
                    row[j] -= c * row[i]
            if n - 1 in dense:
                source = dense[n - 1]
                source[i] = [x + c * y for x, y in zip(source[i], source[j])]

    basis = {n: tuple(f"c{n}_{k}" for k in range(dims[n])) for n in degrees if dims[n]}
    differentials = {
        n: SparseMatrix.from_dense(matrix, cols=dims[n])
        for n, matrix in dense.items()
        if dims[n] and dims[n + 1]
    }
    return Complex(lo=lo, hi=hi, basis=basis, differentials=differentials), h


def random_free_algebra(rng: random.Random, index: int = 0):
    """Adams 正的随机自由分次交换代数：若干闭生成元，再加一个 d 落在闭生成元二次单项式上的生成元。"""
    from dga import FreeGCAlgebra, Generator

    closed = [
        Generator(f"g{k}", rng.choice([1, 2]), rng.choice([1, 2]))
        for k in range(rng.randint(1, 2))
    ]
    generators = list(closed)
    differentials = {}
    for _ in range(8):
        a, b = rng.choice(closed), rng.choice(closed)
        if a.name == b.name and a.degree % 2:
            continue
        generators.append(Generator("y", a.degree + b.degree - 1, a.weight + b.weight))
        differentials["y"] = [(Fraction(rng.choice([1, -1, 2])), [(a.name, 1), (b.name, 1)])]
        break
    return FreeGCAlgebra.from_terms(f"random{index}", generators, differentials)


def random_words(rng: random.Random, algebra, count: int, max_length: int = 4, max_weight: int = 3):
    """algebra 的约化 bar 中随机的字（长度 ≤ max_length）。"""
    from bar import WordFactory

    factory = WordFactory(algebra)
    letters = algebra.ideal_letters(max_weight=max_weight, max_length=2)
    words = []
    for _ in range(count):
        length = rng.randint(0, max_length)
        words.append(factory.word([rng.choice(letters) for _ in range(length)]))
    return factory, words
