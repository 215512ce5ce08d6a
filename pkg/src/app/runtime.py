import sys

from settings import env_overrides


def apply_runtime_overrides() -> None:
    """使用环境变量覆盖 config.TOOLKIT_CONFIG，并把标准输出固定为 UTF-8。"""
    reconfigure = getattr(sys.stdout, "reconfigure", None)
    if reconfigure is not None:
        reconfigure(encoding="utf-8", newline="\n")

    try:
        import config as runtime_config
    except ImportError:
        return
    toolkit_cfg = getattr(runtime_config, "TOOLKIT_CONFIG", None)
    if isinstance(toolkit_cfg, dict):
        toolkit_cfg.update(env_overrides())
