"""Binary container, CSV, and PGM serialization.

Container layout (little-endian):

    magic     8 bytes  b"TFGRID01"
    version   u16      currently 1
    kind      u16      1 real matrix | 2 complex matrix (+mask) | 3 signal | 4 mask RLE
    M, K      u64 x2   matrix shape (signals use M=1, K=L)
    dt, T     f64 x2   lattice parameters
    hop       u64
    desc_len  u32      UTF-8 descriptor length
    desc      bytes    window/source descriptor

followed by a row-major payload: float64 for kind 1, complex128 plus a
mask flag byte and a packed row-major bitmap for kind 2, complex128 for
kind 3, and u64 run count plus u32 run lengths (alternating, starting
with the False run) for kind 4.
"""
from __future__ import annotations

import struct

import numpy as np

from .ambiguity import AmbiguityGrid
from .grid import Grid, Signal
from .stft import Measurement
from .windows import RegionMask

MAGIC = b"TFGRID01"
VERSION = 1
KIND_REAL = 1
KIND_COMPLEX = 2
KIND_SIGNAL = 3
KIND_MASK = 4

_HEAD = struct.Struct("<8sHHQQddQI")


def _pack_header(kind: int, M: int, K: int, dt: float, T: float, hop: int, desc: str) -> bytes:
    d = desc.encode("utf-8")
    return _HEAD.pack(MAGIC, VERSION, kind, M, K, dt, T, hop, len(d)) + d


def _read_header(fh):
    raw = fh.read(_HEAD.size)
    if len(raw) < _HEAD.size:
        raise OSError("truncated container header")
    magic, version, kind, M, K, dt, T, hop, dlen = _HEAD.unpack(raw)
    if magic != MAGIC:
        raise ValueError(f"bad magic {magic!r}")
    if version != VERSION:
        raise ValueError(f"unsupported container version {version}")
    desc = fh.read(dlen).decode("utf-8")
    return kind, M, K, dt, T, hop, desc


def _read_exact(fh, n: int) -> bytes:
    raw = fh.read(n)
    if len(raw) < n:
        raise OSError("truncated container payload")
    return raw


def write_measurement(mea: Measurement, path):
    g = mea.grid
    with open(path, "wb") as fh:
        fh.write(_pack_header(KIND_REAL, g.M, g.K, g.dt, g.T, g.hop, mea.window_id))
        fh.write(np.ascontiguousarray(mea.power, dtype="<f8").tobytes())


def read_measurement(path) -> Measurement:
    with open(path, "rb") as fh:
        kind, M, K, dt, T, hop, desc = _read_header(fh)
        if kind != KIND_REAL:
            raise ValueError(f"expected measurement container, got kind {kind}")
        grid = Grid(T=T, L=int(round(2 * T / dt)), hop=hop, M=M)
        power = np.frombuffer(_read_exact(fh, 8 * M * K), dtype="<f8").reshape(M, K)
        return Measurement(grid=grid, window_id=desc, power=power.copy())


def write_ambiguity(amb: AmbiguityGrid, path, desc: str = "ambiguity"):
    g = amb.grid
    with open(path, "wb") as fh:
        fh.write(_pack_header(KIND_COMPLEX, g.M, g.K, g.dt, g.T, g.hop, desc))
        fh.write(np.ascontiguousarray(amb.values, dtype="<c16").tobytes())
        if amb.mask is None:
            fh.write(b"\x00")
        else:
            fh.write(b"\x01")
            fh.write(np.packbits(amb.mask.reshape(-1)).tobytes())


def read_ambiguity(path) -> AmbiguityGrid:
    with open(path, "rb") as fh:
        kind, M, K, dt, T, hop, _ = _read_header(fh)
        if kind != KIND_COMPLEX:
            raise ValueError(f"expected ambiguity container, got kind {kind}")
        grid = Grid(T=T, L=int(round(2 * T / dt)), hop=hop, M=M)
        values = np.frombuffer(_read_exact(fh, 16 * M * K), dtype="<c16").reshape(M, K)
        flag = _read_exact(fh, 1)
        mask = None
        if flag == b"\x01":
            nbytes = (M * K + 7) // 8
            bits = np.unpackbits(np.frombuffer(_read_exact(fh, nbytes), dtype=np.uint8))
            mask = bits[: M * K].astype(bool).reshape(M, K)
        return AmbiguityGrid(grid=grid, values=values.copy(), mask=mask)


def write_signal(sig: Signal, path, desc: str = "signal"):
    g = sig.grid
    with open(path, "wb") as fh:
        fh.write(_pack_header(KIND_SIGNAL, 1, g.L, g.dt, g.T, g.hop, desc))
        fh.write(np.ascontiguousarray(sig.values, dtype="<c16").tobytes())


def read_signal(path) -> Signal:
    with open(path, "rb") as fh:
        kind, M, K, dt, T, hop, _ = _read_header(fh)
        if kind != KIND_SIGNAL:
            raise ValueError(f"expected signal container, got kind {kind}")
        grid = Grid(T=T, L=K, hop=hop)
        values = np.frombuffer(_read_exact(fh, 16 * K), dtype="<c16")
        return Signal(grid=grid, values=values.copy())


def _rle_encode(bits: np.ndarray) -> np.ndarray:
    """Run lengths of a flat boolean array, alternating and starting with False."""
    flat = bits.reshape(-1)
    edges = np.flatnonzero(np.diff(flat)) + 1
    bounds = np.concatenate(([0], edges, [flat.size]))
    runs = np.diff(bounds).astype(np.uint32)
    if flat.size and flat[0]:
        runs = np.concatenate(([np.uint32(0)], runs))
    return runs


def write_mask(mask: RegionMask, path, desc: str = "mask"):
    g = mask.grid
    runs = _rle_encode(mask.bits)
    with open(path, "wb") as fh:
        fh.write(_pack_header(KIND_MASK, g.M, g.K, g.dt, g.T, g.hop, desc))
        fh.write(struct.pack("<Q", len(runs)))
        fh.write(runs.astype("<u4").tobytes())


def read_mask(path, epsilon: float = float("nan")) -> RegionMask:
    with open(path, "rb") as fh:
        kind, M, K, dt, T, hop, _ = _read_header(fh)
        if kind != KIND_MASK:
            raise ValueError(f"expected mask container, got kind {kind}")
        grid = Grid(T=T, L=int(round(2 * T / dt)), hop=hop, M=M)
        (nruns,) = struct.unpack("<Q", _read_exact(fh, 8))
        runs = np.frombuffer(_read_exact(fh, 4 * nruns), dtype="<u4").astype(np.int64)
        vals = (np.arange(nruns) % 2).astype(bool)  # False run first
        flat = np.repeat(vals, runs)
        if flat.size != M * K:
            raise ValueError(f"mask runs cover {flat.size} cells, lattice has {M * K}")
        return RegionMask(grid=grid, bits=flat.reshape(M, K), epsilon=epsilon)


# ---------------------------------------------------------------- CSV

def measurement_to_csv(mea: Measurement, path):
    """RFC-4180 rows of the power matrix, one lattice row per line."""
    with open(path, "w", newline="") as fh:
        for row in mea.power:
            fh.write(",".join(repr(float(v)) for v in row))
            fh.write("\r\n")


def signal_to_csv(sig: Signal, path):
    with open(path, "w", newline="") as fh:
        fh.write("index,t,re,im\r\n")
        for i, (t, v) in enumerate(zip(sig.grid.t, sig.values)):
            fh.write(f"{i},{float(t)!r},{float(v.real)!r},{float(v.imag)!r}\r\n")


# ---------------------------------------------------------------- PGM

PGM_FLOOR = 1e-12


def write_pgm_heatmap(values: np.ndarray, path, floor: float = PGM_FLOOR):
    """8-bit log-magnitude P5 heatmap, max-normalized, floored at `floor`."""
    mags = np.abs(np.asarray(values))
    peak = mags.max()
    if peak <= 0:
        img = np.zeros(mags.shape, dtype=np.uint8)
    else:
        db = np.log10(np.maximum(mags / peak, floor))
        span = -np.log10(floor)
        img = np.round(255.0 * (db + span) / span).astype(np.uint8)
    _write_pgm(img, path)


def write_pgm_mask(bits: np.ndarray, path):
    _write_pgm(np.where(np.asarray(bits, dtype=bool), 255, 0).astype(np.uint8), path)


def _write_pgm(img: np.ndarray, path):
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(img.tobytes())
