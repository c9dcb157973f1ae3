"""Binary snapshots of a primal state, with an optional JSON mirror."""
from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .states import PrimalState

__all__ = ["Checkpoint", "save_checkpoint", "load_checkpoint", "JSON_MIRROR_MAX_N"]

MAGIC = b"QZK1"
_HEADER = struct.Struct("<4sqddd")
JSON_MIRROR_MAX_N = 1024


@dataclass
class Checkpoint:
    state: PrimalState
    L: float
    eps: float


def save_checkpoint(path: str | Path, state: PrimalState, L: float, eps: float, mirror: bool | None = None) -> Path:
    """Write ``state`` (Fourier coefficients) to ``path``.

    Layout: magic, N (int64), L, eps, t (float64), then E, n, nt as
    little-endian complex128, all little-endian.  A ``.json`` mirror is
    written next to it for small grids unless ``mirror`` says otherwise.
    """
    path = Path(path)
    N = int(state.E.size)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, N, float(L), float(eps), float(state.t)))
        for arr in (state.E, state.n, state.nt):
            fh.write(np.asarray(arr, dtype="<c16").tobytes())
    if mirror is None:
        mirror = N <= JSON_MIRROR_MAX_N
    if mirror:
        doc = {"N": N, "L": float(L), "eps": float(eps), "t": float(state.t)}
        for name in ("E", "n", "nt"):
            arr = np.asarray(getattr(state, name))
            doc[name] = {"re": arr.real.tolist(), "im": arr.imag.tolist()}
        path.with_suffix(".json").write_text(json.dumps(doc))
    return path


def load_checkpoint(path: str | Path) -> Checkpoint:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise ValueError("checkpoint too short")
    magic, N, L, eps, t = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise ValueError(f"not a checkpoint file (magic {magic!r})")
    body = np.frombuffer(raw, dtype="<c16", offset=_HEADER.size)
    if body.size != 3 * N:
        raise ValueError(f"expected {3 * N} coefficients, found {body.size}")
    E, n, nt = (body[i * N:(i + 1) * N].astype(complex) for i in range(3))
    return Checkpoint(PrimalState(E, n, nt, t), L, eps)
