"""程序入口。"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), "src"))

from app.bootstrap import main as run_cli
from app.runtime import apply_runtime_overrides


def main(argv: list[str] | None = None) -> int:
    apply_runtime_overrides()
    return run_cli(argv)


if __name__ == "__main__":
    raise SystemExit(main())
