"""结果缓存：按 (输入文件哈希, 命令, 规范化参数) 内容寻址的 sqlite 存储。"""

from __future__ import annotations

import hashlib
import json
import sqlite3
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Generator, Mapping, Optional

from logger_config import get_logger

logger = get_logger("Database")

CACHE_FILE = "results.db"
SCHEMA_VERSION = 1


def cache_key(source: bytes, command: str, params: Mapping[str, Any]) -> str:
    """参数按键排序后序列化，保证同一调用得到同一键。"""
    digest = hashlib.sha256()
    digest.update(f"v{SCHEMA_VERSION}\0".encode())
    digest.update(hashlib.sha256(source).hexdigest().encode())
    digest.update(b"\0")
    digest.update(command.encode("utf-8"))
    digest.update(b"\0")
    digest.update(json.dumps(dict(params), sort_keys=True, separators=(",", ":"), default=str).encode("utf-8"))
    return digest.hexdigest()


@dataclass(frozen=True)
class CachedResult:
    output: str
    exit_code: int


class ResultCache:
    """每线程一个连接；写入即提交。"""

    def __init__(self, directory: Path) -> None:
        self.directory = Path(directory)
        self.path = self.directory / CACHE_FILE
        self._local = threading.local()
        self._initialized = False

    def _connection(self) -> sqlite3.Connection:
        conn = getattr(self._local, "conn", None)
        if conn is not None:
            return conn
        self.directory.mkdir(parents=True, exist_ok=True)
        conn = sqlite3.connect(self.path, check_same_thread=False)
        conn.row_factory = sqlite3.Row
        conn.execute("PRAGMA journal_mode=WAL")
        conn.execute("PRAGMA busy_timeout=5000")
        self._local.conn = conn
        return conn

    @contextmanager
    def connection(self) -> Generator[sqlite3.Connection, None, None]:
        conn = self._connection()
        if not self._initialized:
            conn.execute("""
                CREATE TABLE IF NOT EXISTS results (
                    key TEXT PRIMARY KEY,
                    command TEXT NOT NULL,
                    output TEXT NOT NULL,
                    exit_code INTEGER NOT NULL,
                    created_at TEXT NOT NULL
                )
            """)
            self._initialized = True
        try:
            yield conn
            conn.commit()
        except Exception:
            conn.rollback()
            raise

    def get(self, key: str) -> Optional[CachedResult]:
        try:
            with self.connection() as conn:
                row = conn.execute("SELECT output, exit_code FROM results WHERE key = ?", (key,)).fetchone()
        except sqlite3.Error as e:
            logger.warning(f"读取缓存失败 ({self.path}): {e}")
            return None
        if row is None:
            return None
        logger.info(f"缓存命中 {key[:12]}")
        return CachedResult(output=row["output"], exit_code=int(row["exit_code"]))

    def put(self, key: str, command: str, result: CachedResult) -> None:
        try:
            with self.connection() as conn:
                conn.execute(
                    "INSERT OR REPLACE INTO results (key, command, output, exit_code, created_at) VALUES (?, ?, ?, ?, ?)",
                    (key, command, result.output, result.exit_code, datetime.now(timezone.utc).isoformat()),
                )
        except sqlite3.Error as e:
            logger.warning(f"写入缓存失败 ({self.path}): {e}")

    def count(self) -> int:
        with self.connection() as conn:
            return int(conn.execute("SELECT COUNT(*) FROM results").fetchone()[0])

    def clear(self) -> None:
        with self.connection() as conn:
            conn.execute("DELETE FROM results")

    def close(self) -> None:
        conn = getattr(self._local, "conn", None)
        if conn is not None:
            conn.close()
            self._local.conn = None
