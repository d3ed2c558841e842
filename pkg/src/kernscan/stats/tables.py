"""CSV tables with a JSON metadata sidecar."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from typing import Iterable, Sequence

from .. import __version__


def _cell(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    if v is None:
        return ""
    return str(v)


def write_table(path: str, header: Sequence[str], rows: Iterable[Sequence], meta: dict | None = None) -> str:
    """Write *path* (CSV) and ``path + '.json'`` describing how it was made."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(v) for v in r])
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())
    sidecar = {"table": os.path.basename(path), "columns": list(header), "tool_version": __version__}
    sidecar.update(meta or {})
    with open(path + ".json", "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=1, sort_keys=True, default=str)
        fh.write("\n")
    return path


def read_csv(path: str) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))
