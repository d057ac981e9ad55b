"""Run artifacts: decay-curve CSV plus a JSON manifest.

Floats are serialized with 17 significant digits so files round-trip; writes
are atomic (temp file + rename).  The manifest echoes every effective
parameter; its timestamp is the only field that varies between identical
runs.
"""

from __future__ import annotations

import json
import os
import subprocess
import tempfile
from datetime import datetime, timezone
from pathlib import Path

from qtoric.engines.curve import DecayCurve

CSV_HEADER = "t,re_mean,im_mean,stderr"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_curve_csv(path: str | Path, curve: DecayCurve) -> None:
    lines = [CSV_HEADER]
    for t, re, im, err in curve.rows():
        lines.append(",".join(_fmt(v) for v in (t, re, im, err)))
    _atomic_write(Path(path), "\n".join(lines) + "\n")


def git_describe() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            capture_output=True,
            text=True,
            timeout=5,
        )
        if out.returncode == 0:
            return out.stdout.strip()
    except (OSError, subprocess.SubprocessError):
        pass
    return "unknown"


def write_manifest(path: str | Path, payload: dict) -> None:
    doc = dict(payload)
    doc.setdefault("git_describe", git_describe())
    doc["timestamp"] = datetime.now(timezone.utc).isoformat()
    _atomic_write(Path(path), json.dumps(doc, indent=2, sort_keys=True) + "\n")


def write_table_csv(path: str | Path, header: list[str], rows: list[tuple]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(
            ",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row)
        )
    _atomic_write(Path(path), "\n".join(lines) + "\n")
