from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from typing import Any, Optional


class ExitCode(IntEnum):
    """命令行退出码。"""

    SUCCESS = 0
    REFUSED = 1
    USAGE = 2


class ViolationKind(StrEnum):
    """校验失败的类别码。"""

    SHAPE = "shape"
    D_SQUARED = "d_squared"
    CHAIN_MAP = "chain_map"
    HOMOGENEITY = "homogeneity"
    GRADED_COMMUTATIVITY = "graded_commutativity"
    LEIBNIZ = "leibniz"
    ASSOCIATIVITY = "associativity"
    UNIT = "unit"
    AUGMENTATION = "augmentation"
    WEIGHT = "weight"
    COASSOCIATIVITY = "coassociativity"
    COUNIT = "counit"
    BIALGEBRA = "bialgebra"
    ANTIPODE = "antipode"
    COMMUTATIVITY = "commutativity"
    CONNECTIVITY = "connectivity"


@dataclass(frozen=True)
class Violation:
    """单条违例及其见证。"""

    kind: ViolationKind
    detail: str
    witness: tuple[Any, ...] = ()
    line: Optional[int] = None

    def render(self) -> str:
        prefix = f"line {self.line}: " if self.line is not None else ""
        return f"{prefix}{self.kind.value}: {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    """校验报告；ok 为真当且仅当没有违例。"""

    subject: str
    violations: tuple[Violation, ...] = ()
    notes: tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[ViolationKind]:
        return {item.kind for item in self.violations}

    def with_lines(self, locate) -> "ValidationReport":
        """用 locate(witness) 为每条违例补上源文件行号。"""
        located = tuple(
            Violation(v.kind, v.detail, v.witness, v.line if v.line is not None else locate(v.witness))
            for v in self.violations
        )
        return ValidationReport(self.subject, located, self.notes)

    def render(self) -> list[str]:
        if self.ok:
            return [f"{self.subject}: PASS"]
        lines = [f"{self.subject}: FAIL ({len(self.violations)})"]
        lines.extend(item.render() for item in self.violations)
        return lines

    @classmethod
    def passed(cls, subject: str, notes: tuple[str, ...] = ()) -> "ValidationReport":
        return cls(subject=subject, violations=(), notes=notes)


class ReportBuilder:
    """逐条收集违例，最后冻结为报告。"""

    def __init__(self, subject: str) -> None:
        self.subject = subject
        self._violations: list[Violation] = []
        self._notes: list[str] = []

    def add(self, kind: ViolationKind, detail: str, *witness: Any) -> None:
        self._violations.append(Violation(kind, detail, tuple(witness)))

    def note(self, text: str) -> None:
        self._notes.append(text)

    def build(self) -> ValidationReport:
        return ValidationReport(self.subject, tuple(self._violations), tuple(self._notes))


# ---------------------------------------------------------------------------
# 异常层级
# ---------------------------------------------------------------------------

class ToolkitError(Exception):
    """所有可预期拒绝的基类。"""

    exit_code = ExitCode.REFUSED


class ParseError(ToolkitError):
    """代数描述文件解析失败。"""

    exit_code = ExitCode.USAGE

    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        self.line = line
        self.column = column
        location = f"{line}:{column}: " if line else ""
        super().__init__(f"{location}{message}")


class AlgebraValidationError(ToolkitError):
    """代数未通过校验。"""

    def __init__(self, report: ValidationReport) -> None:
        self.report = report
        super().__init__("; ".join(report.render()))


class WindowError(ToolkitError):
    """请求的次数落在物化窗口之外。"""


class InfiniteBasisError(ToolkitError):
    """给定双次数的基无限，且调用方没有提供上限。"""


class CapError(ToolkitError):
    """窗口 / 上限参数不一致。"""


class CapInstabilityError(ToolkitError):
    """截断模型在所需次数上不稳定。"""


class PositivityError(ToolkitError):
    """增广理想不在权 ≥ 1 中。"""


class PeriodizationError(ToolkitError):
    """periodify 的前置条件不成立。"""


class NonStabilizingError(PeriodizationError):
    """在迭代上限内没有稳定。"""


class TruncationError(ToolkitError):
    """截断后的字集合在 bar 微分下不封闭。"""


class InvalidChainMapError(ToolkitError):
    """分量与微分不交换。"""


class MixedAlgebraError(ToolkitError):
    """来自不同代数的 bar 字不能相乘。"""


class OracleSizeError(ToolkitError):
    """余单子模型超出可计算规模。"""


class NotAGroupError(ToolkitError):
    """乘法表不构成群。"""


class InfiniteVarietyError(ToolkitError):
    """点的解簇维数为正。"""

    def __init__(self, dimension: int) -> None:
        self.dimension = dimension
        super().__init__(f"解簇维数为 {dimension}，点集无限，拒绝枚举")


class ConnectivityError(ToolkitError):
    """上同调连通性检查未通过。"""


class SolveError(ToolkitError):
    """线性方程组无解。"""


class UnknownLabelError(ToolkitError):
    """元素引用了代数中不存在的基标签或生成元。"""
