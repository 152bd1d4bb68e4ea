from __future__ import annotations

import hashlib
import io
import json
import logging
import time
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

import pandas as pd

from app.config import get_settings
from app.errors import FunctionFileError
from app.state import jsonable

logger = logging.getLogger(__name__)


def _round_floats(value: Any, precision: int) -> Any:
    if isinstance(value, float):
        return round(value, precision)
    if isinstance(value, dict):
        return {k: _round_floats(v, precision) for k, v in value.items()}
    if isinstance(value, list):
        return [_round_floats(v, precision) for v in value]
    return value


def render_json(data: Any, precision: Optional[int] = None) -> str:
    """Sorted keys, fixed float precision, trailing newline."""
    digits = precision if precision is not None else get_settings().verification.float_precision
    payload = _round_floats(jsonable(data), digits)
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def render_csv(frame: pd.DataFrame, comment: Optional[str] = None) -> str:
    buffer = io.StringIO()
    if comment:
        buffer.write(f"# {comment}\n")
    frame.to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue()


def rows_to_frame(rows: Iterable[Dict[str, Any]]) -> pd.DataFrame:
    return pd.DataFrame([jsonable(row) for row in rows])


def emit(text: str, path: Optional[Union[str, Path]] = None) -> Optional[Path]:
    """Write ``text`` to ``path`` or stdout."""
    if path is None or str(path) == "-":
        print(text, end="")
        return None
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    except OSError as exc:
        raise FunctionFileError(f"cannot write {path}: {exc}") from None
    return target


# ----------------------------------------------------------------------
# run log
# ----------------------------------------------------------------------


def _run_log_path() -> Path:
    path = get_settings().ensure_data_dir() / "runs.jsonl"
    if not path.exists():
        path.touch()
    return path


def record_run(*, command: str, arguments: Dict[str, Any], exit_code: int) -> None:
    if not get_settings().feature_flags.record_runs:
        return
    digest = hashlib.sha256(json.dumps(jsonable(arguments), sort_keys=True).encode("utf-8")).hexdigest()
    entry = {
        "created_at": time.strftime("%Y-%m-%d %H:%M:%S"),
        "command": command,
        "arguments_sha256": digest,
        "exit_code": exit_code,
    }
    try:
        with _run_log_path().open("a", encoding="utf-8") as f:
            f.write(json.dumps(entry, ensure_ascii=False) + "\n")
    except OSError:
        logger.warning("Run log not writable; skipping entry for %s", command)


def recent_runs(limit: int = 20) -> List[Dict[str, Any]]:
    rows: List[Dict[str, Any]] = []
    try:
        with _run_log_path().open("r", encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                try:
                    rows.append(json.loads(line))
                except json.JSONDecodeError:
                    continue
    except FileNotFoundError:
        return []
    return rows[-limit:]


__all__ = [
    "emit",
    "recent_runs",
    "record_run",
    "render_csv",
    "render_json",
    "rows_to_frame",
]
