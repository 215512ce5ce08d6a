"""运行配置：config.TOOLKIT_CONFIG（若存在）+ 环境变量覆盖，经 pydantic 校验。"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Any, Optional

import psutil
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from logger_config import get_logger

logger = get_logger("Settings")

_PROJECT_ROOT = Path(__file__).resolve().parents[1]
DEFAULT_CACHE_DIR = _PROJECT_ROOT / "data" / "cache"

TRUE_VALUES = {"1", "true", "yes", "on"}


def env_flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() in TRUE_VALUES


def available_parallelism() -> int:
    return psutil.cpu_count(logical=True) or os.cpu_count() or 1


class ToolkitSettings(BaseModel):
    model_config = ConfigDict(extra="ignore", frozen=True)

    cache_dir: Path = DEFAULT_CACHE_DIR
    cache_enabled: bool = True
    jobs: int = Field(default=0, ge=0)
    dense_fallback_size: int = Field(default=64, ge=1)
    oracle_max_basis: int = Field(default=20000, ge=1)
    connectivity_weight_bound: int = Field(default=8, ge=0)

    @field_validator("cache_dir", mode="before")
    @classmethod
    def _expand_cache_dir(cls, value: Any) -> Any:
        if isinstance(value, str):
            return Path(os.path.expanduser(value.strip()))
        return value

    @property
    def worker_count(self) -> int:
        """jobs=0 表示使用全部逻辑核。"""
        return self.jobs or available_parallelism()

    def with_jobs(self, jobs: Optional[int]) -> "ToolkitSettings":
        if jobs is None:
            return self
        return self.model_copy(update={"jobs": jobs})


def _config_dict() -> dict[str, Any]:
    try:
        import config as runtime_config
    except ImportError:
        return {}
    value = getattr(runtime_config, "TOOLKIT_CONFIG", None)
    return dict(value) if isinstance(value, dict) else {}


def env_overrides() -> dict[str, Any]:
    overrides: dict[str, Any] = {}
    cache_dir = os.environ.get("TANNAKA_CACHE_DIR")
    if cache_dir:
        overrides["cache_dir"] = cache_dir
    jobs = os.environ.get("TANNAKA_JOBS")
    if jobs:
        try:
            overrides["jobs"] = int(jobs)
        except ValueError:
            logger.warning(f"忽略无效的 TANNAKA_JOBS={jobs!r}")
    if env_flag("TANNAKA_NO_CACHE"):
        overrides["cache_enabled"] = False
    return overrides


def load_settings(overrides: Optional[dict[str, Any]] = None) -> ToolkitSettings:
    raw = {**_config_dict(), **env_overrides(), **(overrides or {})}
    try:
        return ToolkitSettings(**raw)
    except ValidationError as e:
        logger.warning(f"配置无效，回退为默认值: {e.errors()[0].get('msg', e)}")
        return ToolkitSettings()
