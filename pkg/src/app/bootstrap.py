import argparse
import sys
from typing import Optional, TextIO

from database import ResultCache
from domain.reports import ExitCode
from logger_config import setup_logger
from settings import ToolkitSettings, load_settings

from app.services.pipeline_service import PipelineService

logger = setup_logger("Main")


def window_arg(text: str) -> tuple[int, int]:
    """`lo:hi` → (lo, hi)。"""
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"窗口格式应为 lo:hi，收到 {text!r}")
    try:
        lo, hi = int(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"窗口端点必须是整数: {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"窗口下端大于上端: {text!r}")
    return lo, hi


def non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"应为整数: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"应为非负整数: {text!r}")
    return value


def positive(text: str) -> int:
    value = non_negative(text)
    if value == 0:
        raise argparse.ArgumentTypeError("应为正整数")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tannaka-bar",
        description="增广 dg 代数的 bar 构造、Hopf 结构与粗模空间计算。",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="代数描述文件（见 FORMATS.md）")
    common.add_argument("--jobs", type=positive, default=None, help="工作线程数（默认取全部逻辑核）")
    common.add_argument("--no-cache", action="store_true", help="不读写结果缓存")

    truncation = argparse.ArgumentParser(add_help=False)
    truncation.add_argument("--window", type=window_arg, default=None, help="输出的次数窗口 lo:hi")
    truncation.add_argument("--cap", type=non_negative, default=None, help="字长上限 N")
    truncation.add_argument("--weight-bound", type=non_negative, default=None, help="权上限 W（Adams 正输入）")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="校验代数公理")
    bar = sub.add_parser("bar", parents=[common, truncation], help="bar 复形的上同调表")
    bar.add_argument("--table", action="store_true", help="默认输出的别名，不改变输出，仅为兼容旧脚本保留")

    coarse = sub.add_parser("coarse", parents=[common], help="H⁰ Hopf 代数（粗模空间）")
    coarse.add_argument("--weight-bound", type=non_negative, required=True)
    coarse.add_argument("--force", action="store_true", help="跳过连通性检查")

    cech = sub.add_parser("cech", parents=[common, truncation], help="Čech 层级的上同调表")
    cech.add_argument("--level", type=non_negative, required=True)

    truncate = sub.add_parser("truncate", parents=[common, truncation], help="bar 复形截断后的上同调表")
    side = truncate.add_mutually_exclusive_group(required=True)
    side.add_argument("--leq", type=int, default=None)
    side.add_argument("--geq", type=int, default=None)

    oracle = sub.add_parser("oracle", parents=[common], help="正规化 bar 与 Moore 模型对比")
    oracle.add_argument("--levels", type=non_negative, required=True)
    oracle.add_argument("--window", type=window_arg, default=None)

    connectivity = sub.add_parser("connectivity", parents=[common], help="mixed-tate 输入的连通性检查")
    connectivity.add_argument("--weight-bound", type=non_negative, default=None)
    return parser


def command_params(args: argparse.Namespace) -> dict:
    """影响输出的参数；jobs 与缓存开关不参与缓存键。"""
    params: dict = {}
    for name in ("window", "cap", "weight_bound", "level", "levels", "force"):
        value = getattr(args, name, None)
        if value is not None and value is not False:
            params[name] = value
    if args.command == "truncate":
        if args.leq is not None:
            params.update(side="leq", degree=args.leq)
        else:
            params.update(side="geq", degree=args.geq)
    return params


class ToolkitApplication:
    """解析命令行、装配流水线并返回退出码。"""

    def __init__(
        self,
        settings: Optional[ToolkitSettings] = None,
        stdout: Optional[TextIO] = None,
    ) -> None:
        self._settings = settings
        self._stdout = stdout

    def run(self, argv: Optional[list[str]] = None) -> int:
        args = build_parser().parse_args(argv)
        settings = (self._settings or load_settings()).with_jobs(args.jobs)
        cache = ResultCache(settings.cache_dir) if settings.cache_enabled and not args.no_cache else None
        service = PipelineService(settings, cache)
        try:
            result = service.run(args.command, args.file, command_params(args), use_cache=cache is not None)
        finally:
            if cache is not None:
                cache.close()
        out = self._stdout or sys.stdout
        out.write(result.output)
        out.flush()
        logger.debug(f"{args.command} {args.file} -> {result.exit_code}{' (cached)' if result.cached else ''}")
        return int(result.exit_code)


def main(argv: Optional[list[str]] = None) -> int:
    try:
        return ToolkitApplication().run(argv)
    except KeyboardInterrupt:
        return int(ExitCode.REFUSED)
