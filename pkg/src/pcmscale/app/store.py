"""Crash-safe append-only event log.

Each line is ``<sha256-hexdigest> <canonical-json>``: the hash covers the
canonical JSON encoding of the event, so a torn write at the tail (partial
line, missing newline, or hash mismatch on the final line) is detected and
truncated away on recovery. Corruption anywhere before the tail is a hard
error, since appends can never produce it. Appends are serialized by a lock
and fsynced before returning, so an acknowledged event survives a crash.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from pathlib import Path

__all__ = ["RecordLog", "StoreCorruptionError"]


class StoreCorruptionError(RuntimeError):
    """The log is damaged somewhere other than a torn tail."""


def _canonical(event: dict) -> str:
    return json.dumps(event, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


class RecordLog:
    def __init__(self, path: str | os.PathLike):
        self._path = Path(path)
        self._lock = threading.Lock()
        self._path.parent.mkdir(parents=True, exist_ok=True)
        self._recover()
        self._fh = open(self._path, "a", encoding="utf-8", newline="")

    @property
    def path(self) -> Path:
        return self._path

    def _recover(self) -> None:
        """Scan the log, truncating a torn trailing record if present."""
        if not self._path.exists():
            self._path.touch()
            return
        valid_bytes = 0
        with open(self._path, "rb") as fh:
            raw = fh.read()
        offset = 0
        lines = raw.split(b"\n")
        for i, line in enumerate(lines[:-1]):  # complete (newline-terminated) lines
            if self._line_ok(line):
                offset += len(line) + 1
                valid_bytes = offset
            else:
                if any(l for l in lines[i + 1 : -1]) or lines[-1]:
                    raise StoreCorruptionError(
                        f"{self._path}: damaged record before end of log "
                        f"(line {i + 1})"
                    )
                break
        # lines[-1] is either empty (file ends with newline) or a torn tail
        if valid_bytes != len(raw):
            with open(self._path, "r+b") as fh:
                fh.truncate(valid_bytes)

    @staticmethod
    def _line_ok(line: bytes) -> bool:
        try:
            text = line.decode("utf-8")
            digest, payload = text.split(" ", 1)
            if hashlib.sha256(payload.encode("utf-8")).hexdigest() != digest:
                return False
            json.loads(payload)
            return True
        except (ValueError, UnicodeDecodeError):
            return False

    def append(self, event: dict) -> None:
        payload = _canonical(event)
        digest = hashlib.sha256(payload.encode("utf-8")).hexdigest()
        line = f"{digest} {payload}\n"
        with self._lock:
            self._fh.write(line)
            self._fh.flush()
            os.fsync(self._fh.fileno())

    def replay(self) -> list[dict]:
        """All stored events, oldest first."""
        events = []
        with self._lock:
            self._fh.flush()
            with open(self._path, encoding="utf-8", newline="") as fh:
                for line in fh:
                    _, payload = line.rstrip("\n").split(" ", 1)
                    events.append(json.loads(payload))
        return events

    def close(self) -> None:
        with self._lock:
            self._fh.close()
