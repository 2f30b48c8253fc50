"""Bit-exact dump/load of Q-tables and network parameters.

File layout::

    JAMSHIELD-ARRAYS 1\\n
    {"kind": "...", "arrays": [{"name": "...", "shape": [...]}, ...]}\\n
    <float64 little-endian, row-major, arrays concatenated in header order>
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from jamshield.agents.mlp import MlpParams

MAGIC = b"JAMSHIELD-ARRAYS"
VERSION = 1
_DTYPE = np.dtype("<f8")


def _write(path, kind: str, named: list) -> None:
    header = {
        "kind": kind,
        "arrays": [{"name": name, "shape": list(a.shape)} for name, a in named],
    }
    with open(path, "wb") as fh:
        fh.write(MAGIC + b" %d\n" % VERSION)
        fh.write(json.dumps(header, sort_keys=True).encode() + b"\n")
        for _, a in named:
            fh.write(np.ascontiguousarray(a, dtype=_DTYPE).tobytes())


def _read(path, kind: str) -> list:
    raw = Path(path).read_bytes()
    first, rest = raw.split(b"\n", 1)
    magic, _, version = first.partition(b" ")
    if magic != MAGIC or int(version) != VERSION:
        raise ValueError(f"{path}: not a version-{VERSION} parameter file")
    meta_line, payload = rest.split(b"\n", 1)
    header = json.loads(meta_line)
    if header["kind"] != kind:
        raise ValueError(f"{path}: holds {header['kind']!r}, expected {kind!r}")
    out, offset = [], 0
    for entry in header["arrays"]:
        shape = tuple(entry["shape"])
        count = int(np.prod(shape, dtype=np.int64))
        a = np.frombuffer(payload, dtype=_DTYPE, count=count, offset=offset).reshape(shape)
        out.append(a.astype(float))
        offset += count * _DTYPE.itemsize
    if offset != len(payload):
        raise ValueError(f"{path}: trailing or missing payload bytes")
    return out


def save_qtable(table: np.ndarray, path) -> None:
    _write(path, "qtable", [("q", np.asarray(table))])


def load_qtable(path) -> np.ndarray:
    (q,) = _read(path, "qtable")
    return q


def save_mlp(params: MlpParams, path) -> None:
    named = []
    for i, (w, b) in enumerate(zip(params.weights, params.biases)):
        named += [(f"W{i + 1}", w), (f"b{i + 1}", b)]
    _write(path, "mlp", named)


def load_mlp(path) -> MlpParams:
    arrays = _read(path, "mlp")
    return MlpParams(arrays[0::2], arrays[1::2])
