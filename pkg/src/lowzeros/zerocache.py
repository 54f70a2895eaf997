"""Plain-text zero cache: one file per modulus, one key=value record per line.

    # lowzeros zero cache v1
    q=101 g=2 t_min=-15 t_max=15
    q=101 g=2 j=1 gamma=-14.2217795413 abs_tolerance=1e-09
    ...

The window line records the scanned ordinate range (shared by all
characters); zero records carry gamma with 12 significant digits.
Ordinates are rounded to that precision when first computed, so a reload
reproduces the in-memory values exactly.
"""

from __future__ import annotations

import logging
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .arith import require_odd_prime
from .characters import least_primitive_root
from .lfunc import ZERO_TOL, MissingZeroError, ZeroRecord, find_zeros_many

log = logging.getLogger(__name__)

HEADER = "# lowzeros zero cache v1"


def _fmt(x: float) -> str:
    return f"{x:.12g}"


@dataclass
class ModulusZeros:
    q: int
    g: int
    t_min: float
    t_max: float
    zeros: dict[int, np.ndarray] = field(default_factory=dict)

    def covers(self, t_min: float, t_max: float) -> bool:
        return self.t_min <= t_min and self.t_max >= t_max

    def gammas(self, j: int) -> np.ndarray:
        return self.zeros.get(j, np.zeros(0))

    def records(self):
        for j in sorted(self.zeros):
            for gm in self.zeros[j]:
                yield ZeroRecord(self.q, self.g, j, float(gm), ZERO_TOL)


def _parse_line(line: str) -> dict[str, str]:
    return dict(tok.split("=", 1) for tok in line.split())


def write_cache_file(path: Path, mz: ModulusZeros) -> None:
    lines = [HEADER, f"q={mz.q} g={mz.g} t_min={_fmt(mz.t_min)} t_max={_fmt(mz.t_max)}"]
    for rec in mz.records():
        lines.append(
            f"q={rec.q} g={rec.g} j={rec.j} gamma={_fmt(rec.gamma)} abs_tolerance={rec.abs_tolerance!r}"
        )
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, path)


def read_cache_file(path: Path) -> ModulusZeros:
    mz = None
    acc: dict[int, list[float]] = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            kv = _parse_line(line)
            if "gamma" in kv:
                acc.setdefault(int(kv["j"]), []).append(float(kv["gamma"]))
            else:
                mz = ModulusZeros(int(kv["q"]), int(kv["g"]), float(kv["t_min"]), float(kv["t_max"]))
    if mz is None:
        raise ValueError(f"cache file {path} has no window record")
    if mz.g != least_primitive_root(mz.q):
        raise ValueError(f"cache file {path} indexes characters by g={mz.g}, expected least primitive root")
    for j in range(1, mz.q - 1):
        mz.zeros[j] = np.array(sorted(acc.get(j, [])))
    return mz


class ZeroStore:
    """Zeros of all non-principal characters per modulus, with optional disk persistence.

    Single writer: the store owns its files; concurrent readers should load
    through their own instance.
    """

    def __init__(self, cache_dir: str | os.PathLike | None = None):
        self.cache_dir = Path(cache_dir) if cache_dir is not None else None
        self._mem: dict[int, ModulusZeros] = {}
        self.computed_windows: list[tuple[int, float, float]] = []

    def path(self, q: int) -> Path | None:
        return None if self.cache_dir is None else self.cache_dir / f"zeros_q{q}.txt"

    def get(self, q: int) -> ModulusZeros | None:
        if q in self._mem:
            return self._mem[q]
        p = self.path(q)
        if p is not None and p.exists():
            self._mem[q] = read_cache_file(p)
            return self._mem[q]
        return None

    def _scan(self, q: int, lo: float, hi: float) -> dict[int, list[ZeroRecord]]:
        log.info("scanning zeros q=%d window (%g, %g)", q, lo, hi)
        self.computed_windows.append((q, lo, hi))
        return find_zeros_many(q, lo, hi)

    def ensure(self, q: int, t_min: float, t_max: float) -> ModulusZeros:
        """Make sure every non-principal character's zeros in [t_min, t_max] are known."""
        q = require_odd_prime(q)
        mz = self.get(q)
        if mz is not None and mz.covers(t_min, t_max):
            return mz
        pieces = []
        if mz is None:
            pieces.append((t_min, t_max))
            mz = ModulusZeros(q, least_primitive_root(q), t_min, t_max,
                              {j: np.zeros(0) for j in range(1, q - 1)})
        else:
            if t_min < mz.t_min:
                pieces.append((t_min, mz.t_min))
            if t_max > mz.t_max:
                pieces.append((mz.t_max, t_max))
        for lo, hi in pieces:
            found = self._scan(q, lo, hi)
            for j, recs in found.items():
                merged = np.concatenate([mz.zeros.get(j, np.zeros(0)), [r.gamma for r in recs]])
                merged = np.unique(merged)
                if len(merged) > 1:
                    keep = np.concatenate([[True], np.diff(merged) > 2 * ZERO_TOL])
                    merged = merged[keep]
                mz.zeros[j] = merged
        mz.t_min = min(mz.t_min, t_min)
        mz.t_max = max(mz.t_max, t_max)
        self._mem[q] = mz
        p = self.path(q)
        if p is not None:
            write_cache_file(p, mz)
        return mz

    def ensure_lowest(self, q: int, start: float | None = None, max_height: float = 60.0) -> ModulusZeros:
        """Extend the symmetric window until every character has at least one zero."""
        H = start if start is not None else 2 * math.pi * 2.0 / math.log(q)
        while True:
            mz = self.ensure(q, -H, H)
            if all(len(mz.gammas(j)) for j in range(1, q - 1)):
                return mz
            if H >= max_height:
                missing = [j for j in range(1, q - 1) if not len(mz.gammas(j))]
                raise MissingZeroError(f"q={q}: no zero found below height {H} for characters {missing[:5]}")
            H = min(2 * H, max_height)
