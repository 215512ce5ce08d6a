"""
tannaka-bar 配置文件示例
复制此文件为 config.py 后按需修改；环境变量 TANNAKA_CACHE_DIR / TANNAKA_JOBS / TANNAKA_NO_CACHE 优先
"""

TOOLKIT_CONFIG = {
    # 结果缓存（sqlite），相对路径以当前工作目录为准
    "cache_dir": "data/cache",
    "cache_enabled": True,

    # 工作线程数；0 = 使用全部逻辑核（psutil）
    "jobs": 0,

    # 行数与列数都小于该值时改用 sympy 稠密消元
    "dense_fallback_size": 64,

    # Moore 模型允许的最大基元素个数
    "oracle_max_basis": 20000,

    # coarse / connectivity 默认检查到的权
    "connectivity_weight_bound": 8,
}
