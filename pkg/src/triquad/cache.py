"""File-backed class number store keyed by discriminant.

Append-only line-oriented text, one record per line:

    D value method ISO-timestamp

Methods "forms" and "dirichlet" hold exact class numbers and must agree
whenever both are present for the same D; "bound-only" holds a float
upper bound.  The file is compacted on load (one line per (D, method),
newest timestamp kept).  Timestamps never reach any data stream; the
store affects speed only, never computed values.
"""

from __future__ import annotations

import logging
import os
import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Union

logger = logging.getLogger(__name__)

METHODS = ("forms", "dirichlet", "bound-only")

Number = Union[int, float]


def default_cache_path() -> Path:
    """Honors the TRIQUAD_CACHE environment variable, else a home-dir default."""
    override = os.environ.get("TRIQUAD_CACHE")
    if override:
        return Path(override).expanduser()
    return Path("~/.cache/triquad/class_numbers.txt").expanduser()


def _parse_value(text: str) -> Number:
    try:
        return int(text)
    except ValueError:
        return float(text)


def _format_value(value: Number) -> str:
    if isinstance(value, bool):
        raise TypeError("class number values are numeric, not boolean")
    return repr(value) if isinstance(value, float) else str(value)


class ClassNumberStore:
    """Thread-safe append-only cache with compaction on load.

    Unreadable or unwritable paths degrade to in-memory operation with a
    logged warning; a forms/dirichlet value disagreement raises
    ValueError because it can only mean a corrupted file or an algorithm
    bug, and must not pass silently.
    """

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)
        self._lock = threading.Lock()
        # (D, method) -> (value, timestamp)
        self._entries: dict[tuple[int, str], tuple[Number, str]] = {}
        self._writable = True
        self._load()

    def _check_agreement(self, d: int, method: str, value: Number) -> None:
        other = {"forms": "dirichlet", "dirichlet": "forms"}.get(method)
        if other is None:
            return
        held = self._entries.get((d, other))
        if held is not None and held[0] != value:
            raise ValueError(
                f"class number mismatch for D = {d}: "
                f"{method} gives {value}, {other} gave {held[0]}"
            )

    def _load(self) -> None:
        if not self.path.exists():
            return
        try:
            raw_lines = self.path.read_text().splitlines()
        except OSError as exc:
            logger.warning("cache unreadable (%s); starting empty", exc)
            self._writable = False
            return
        parsed = 0
        for lineno, line in enumerate(raw_lines, start=1):
            parts = line.split()
            if not parts:
                continue
            try:
                if len(parts) != 4 or parts[2] not in METHODS:
                    raise ValueError("bad field layout")
                d = int(parts[0])
                value = _parse_value(parts[1])
            except ValueError:
                logger.warning("skipping malformed cache line %d: %r", lineno, line)
                continue
            self._check_agreement(d, parts[2], value)
            self._entries[(d, parts[2])] = (value, parts[3])
            parsed += 1
        if parsed != len(self._entries) or parsed != len(raw_lines):
            self._compact()

    def _compact(self) -> None:
        lines = [
            f"{d} {_format_value(value)} {method} {stamp}\n"
            for (d, method), (value, stamp) in sorted(self._entries.items())
        ]
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            tmp.write_text("".join(lines))
            os.replace(tmp, self.path)
        except OSError as exc:
            logger.warning("cache compaction failed (%s); continuing in memory", exc)
            self._writable = False

    def get(self, d: int, method: str) -> Optional[Number]:
        if method not in METHODS:
            raise ValueError(f"unknown method tag: {method!r}")
        with self._lock:
            held = self._entries.get((d, method))
            return None if held is None else held[0]

    def record(self, d: int, value: Number, method: str) -> None:
        """Append one record; identical re-records are no-ops."""
        if method not in METHODS:
            raise ValueError(f"unknown method tag: {method!r}")
        with self._lock:
            held = self._entries.get((d, method))
            if held is not None:
                if held[0] != value:
                    raise ValueError(
                        f"conflicting {method} values for D = {d}: "
                        f"stored {held[0]}, new {value}"
                    )
                return
            self._check_agreement(d, method, value)
            stamp = datetime.now(timezone.utc).isoformat()
            self._entries[(d, method)] = (value, stamp)
            if not self._writable:
                return
            line = f"{d} {_format_value(value)} {method} {stamp}\n"
            try:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with open(self.path, "a") as fh:
                    fh.write(line)
            except OSError as exc:
                logger.warning("cache unwritable (%s); continuing in memory", exc)
                self._writable = False

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)
