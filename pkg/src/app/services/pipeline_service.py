"""命令流水线：解析 → 校验 → 计算 → 渲染，外加结果缓存。

每个命令的输出都先在内存中按规范顺序拼好，再整体写出；并行只影响计算，不影响字节。
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Mapping, Optional

import exactlin
from bar import BarComplex, bar_complex, cech_level, compare_models
from complexes import Complex, cohomology_table, truncate_geq, truncate_leq
from database import CachedResult, ResultCache, cache_key
from dga import require_valid
from domain.reports import ConnectivityError, ExitCode, PositivityError, ToolkitError
from formats import ParsedAlgebra, parse_algebra_text, render_hopf, render_table
from hopf import coarse_moduli, hopf_validate
from logger_config import get_logger
from settings import ToolkitSettings
from weighted import MixedTateInput, connectivity_check, equivariant_bar

logger = get_logger("Pipeline")


@dataclass(frozen=True)
class CommandResult:
    output: str
    exit_code: int
    cached: bool = False


def _lines(lines: list[str]) -> str:
    return "".join(f"{line}\n" for line in lines)


class PipelineService:
    """按命令名分派到各 `_run_<command>`；参数字典即缓存键的一部分。"""

    COMMANDS = ("validate", "bar", "coarse", "cech", "truncate", "oracle", "connectivity")

    def __init__(self, settings: ToolkitSettings, cache: Optional[ResultCache] = None) -> None:
        self._settings = settings
        self._cache = cache

    @property
    def jobs(self) -> int:
        return self._settings.worker_count

    def run(self, command: str, path: str, params: Mapping[str, Any], use_cache: bool = True) -> CommandResult:
        if command not in self.COMMANDS:
            raise ValueError(f"未知命令: {command}")
        try:
            source = Path(path).read_bytes()
        except OSError as e:
            return CommandResult(f"error: 无法读取 {path}: {e.strerror or e}\n", ExitCode.USAGE)

        cache = self._cache if use_cache and self._settings.cache_enabled else None
        key = cache_key(source, command, params)
        if cache is not None:
            hit = cache.get(key)
            if hit is not None:
                return CommandResult(hit.output, hit.exit_code, cached=True)

        result = self._execute(command, source, path, params)
        if cache is not None:
            cache.put(key, command, CachedResult(result.output, result.exit_code))
        return result

    def _execute(self, command: str, source: bytes, path: str, params: Mapping[str, Any]) -> CommandResult:
        handler: Callable[[ParsedAlgebra, Mapping[str, Any]], CommandResult] = getattr(self, f"_run_{command}")
        try:
            parsed = parse_algebra_text(source.decode("utf-8"), source=path)
            with exactlin.dense_fallback(self._settings.dense_fallback_size):
                return handler(parsed, params)
        except UnicodeDecodeError as e:
            return CommandResult(f"error: {path} 不是 UTF-8 文本: {e.reason}\n", ExitCode.USAGE)
        except ToolkitError as e:
            logger.warning(f"{command} {path}: {type(e).__name__}: {e}")
            return CommandResult(f"error: {e}\n", int(e.exit_code))

    # --- 命令 ---------------------------------------------------------------

    def _run_validate(self, parsed: ParsedAlgebra, params: Mapping[str, Any]) -> CommandResult:
        report = parsed.validate()
        code = ExitCode.SUCCESS if report.ok else ExitCode.REFUSED
        return CommandResult(_lines(report.render()), int(code))

    def _build_bar(self, parsed: ParsedAlgebra, params: Mapping[str, Any]) -> BarComplex:
        return bar_complex(
            parsed.algebra,
            window=params.get("window"),
            cap=params.get("cap"),
            weight_bound=params.get("weight_bound"),
            jobs=self.jobs,
        )

    @staticmethod
    def _stability(bar: BarComplex) -> Optional[Callable[[int], bool]]:
        return None if bar.exact else bar.is_stable

    def _run_bar(self, parsed: ParsedAlgebra, params: Mapping[str, Any]) -> CommandResult:
        bar = self._build_bar(parsed, params)
        table = bar.cohomology_table(self.jobs)
        return CommandResult(_lines(render_table(table, self._stability(bar))), ExitCode.SUCCESS)

    def _run_truncate(self, parsed: ParsedAlgebra, params: Mapping[str, Any]) -> CommandResult:
        bar = self._build_bar(parsed, params)
        side, n = params["side"], params["degree"]
        table: dict[tuple[int, int], int] = {}
        for w in bar.weights():
            truncated = _truncate_piece(bar.piece(w), side, n)
            if truncated is None:
                continue
            for degree, dim in cohomology_table(truncated, self.jobs).items():
                window = params.get("window")
                if truncated.dim(degree) and (window is None or window[0] <= degree <= window[1]):
                    table[(w, degree)] = dim
        return CommandResult(_lines(render_table(table, self._stability(bar))), ExitCode.SUCCESS)

    def _run_cech(self, parsed: ParsedAlgebra, params: Mapping[str, Any]) -> CommandResult:
        level = cech_level(
            parsed.algebra,
            params["level"],
            window=params.get("window"),
            cap=params.get("cap"),
            weight_bound=params.get("weight_bound"),
            jobs=self.jobs,
        )
        return CommandResult(_lines(render_table(level.table)), ExitCode.SUCCESS)

    def _run_oracle(self, parsed: ParsedAlgebra, params: Mapping[str, Any]) -> CommandResult:
        comparison = compare_models(
            parsed.algebra,
            params["levels"],
            window=params.get("window"),
            max_basis=self._settings.oracle_max_basis,
            jobs=self.jobs,
        )
        code = ExitCode.SUCCESS if comparison.match else ExitCode.REFUSED
        return CommandResult(_lines(comparison.render()), int(code))

    def _mixed_tate(self, parsed: ParsedAlgebra) -> MixedTateInput:
        a = parsed.algebra
        if not a.mixed_tate:
            raise PositivityError(f"代数 {a.name} 没有 mixed-tate 标志")
        return MixedTateInput.from_algebra(require_valid(a))

    def _run_connectivity(self, parsed: ParsedAlgebra, params: Mapping[str, Any]) -> CommandResult:
        q = self._mixed_tate(parsed)
        bound = params.get("weight_bound")
        result = connectivity_check(q, self._settings.connectivity_weight_bound if bound is None else bound)
        lines = render_table(result.table) + result.report.render()
        code = ExitCode.SUCCESS if result.ok else ExitCode.REFUSED
        return CommandResult(_lines(lines), int(code))

    def _run_coarse(self, parsed: ParsedAlgebra, params: Mapping[str, Any]) -> CommandResult:
        q = self._mixed_tate(parsed)
        weight_bound = params["weight_bound"]
        if not params.get("force"):
            check = connectivity_check(q, max(weight_bound, self._settings.connectivity_weight_bound))
            if not check.ok:
                details = "; ".join(v.detail for v in check.report.violations)
                raise ConnectivityError(f"连通性检查未通过（可用 --force 跳过）: {details}")
        bar = equivariant_bar(q, weight_bound, jobs=self.jobs)
        h = coarse_moduli(bar, weight_bound)
        report = hopf_validate(h)
        code = ExitCode.SUCCESS if report.ok else ExitCode.REFUSED
        return CommandResult(_lines(render_hopf(h) + report.render()), int(code))


def _truncate_piece(c: Complex, side: str, n: int) -> Optional[Complex]:
    """窗口外的截断退化为整体或零。"""
    if side == "leq":
        if n >= c.hi:
            return c
        if n < c.lo:
            return None
        return truncate_leq(c, n)
    if n <= c.lo:
        return c
    if n > c.hi:
        return None
    return truncate_geq(c, n)
