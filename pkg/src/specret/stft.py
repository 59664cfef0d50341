"""Discrete STFT by left-Riemann quadrature, squared-magnitude measurements,
and measurement noise models.

The coefficient convention is

    c[m, k] = dt * sum_l f_l * conj(g[(l - k*hop + L/2) mod L])
                 * exp(-2i*pi * t_l * y_m)

so c[m, k] approximates V_g f(x_k, y_m) with a periodized window.  The
modular window index realizes periodization by cyclic indexing.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import GridMismatchError
from .grid import Grid, Signal

RNG_ALGORITHM = "numpy.random.Generator(PCG64)"

# column block size keeps the shift-product workspace near ~64 MB at L=8192
_BLOCK_ELEMENTS = 1 << 22


@dataclass(frozen=True)
class StftCoeffs:
    grid: Grid
    window_id: str
    values: np.ndarray  # complex, shape (M, K)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (self.grid.M, self.grid.K):
            raise ValueError(f"expected shape {(self.grid.M, self.grid.K)}, got {v.shape}")
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class Measurement:
    grid: Grid
    window_id: str
    power: np.ndarray  # real, shape (M, K), |V_g f|^2 (possibly noisy)
    noise_meta: dict | None = None

    def __post_init__(self):
        p = np.asarray(self.power, dtype=np.float64)
        if p.shape != (self.grid.M, self.grid.K):
            raise ValueError(f"expected shape {(self.grid.M, self.grid.K)}, got {p.shape}")
        if not np.all(np.isfinite(p)):
            raise ValueError("measurement contains non-finite entries")
        object.__setattr__(self, "power", p)


def forward_stft(f: Signal, g: np.ndarray, grid: Grid | None = None,
                 window_id: str = "window") -> StftCoeffs:
    """STFT coefficients of f against the periodized window g.

    Factors the defining sum through length-L FFTs: with M == L the
    exponential splits into (-1)^l * exp(-2i*pi*l*m/L) times constant
    per-m phases; for general M the sequence is folded modulo M first
    (exact, since the kernel depends on l mod M only).
    """
    grid = grid or f.grid
    if grid != f.grid:
        raise GridMismatchError("signal grid differs from requested grid")
    g = np.asarray(g)
    if g.shape != (grid.L,):
        raise GridMismatchError(f"window has {g.shape} samples, grid needs {grid.L}")

    L, M, K, hop = grid.L, grid.M, grid.K, grid.hop
    l = np.arange(L)
    base = f.values * ((-1.0) ** l)  # exp(i*pi*l) factor folded into the signal
    gc = np.conj(g.astype(np.complex128))
    const = (-1j) ** (L % 4)  # exp(-i*pi*L/2), exact for integer L
    if M == L:
        phase_m = (-1.0) ** np.arange(M)  # exp(i*pi*L*m/M), exact in this case
    else:
        phase_m = np.exp(1j * np.pi * L * np.arange(M) / M)

    out = np.empty((M, K), dtype=np.complex128)
    block = max(1, _BLOCK_ELEMENTS // L)
    for k0 in range(0, K, block):
        ks = np.arange(k0, min(k0 + block, K))
        idx = (l[:, None] - hop * ks[None, :] + L // 2) % L
        h = base[:, None] * gc[idx]
        if M == L:
            spec = np.fft.fft(h, axis=0)
        else:
            folded = np.zeros((M, len(ks)), dtype=np.complex128)
            np.add.at(folded, l % M, h)
            spec = np.fft.fft(folded, axis=0)
        out[:, ks] = spec
    out *= grid.dt * const
    out *= phase_m[:, None]
    return StftCoeffs(grid=grid, window_id=window_id, values=out)


def to_measurement(c: StftCoeffs) -> Measurement:
    """Squared-magnitude measurement |V_g f|^2 of a coefficient matrix."""
    return Measurement(grid=c.grid, window_id=c.window_id,
                       power=np.abs(c.values) ** 2, noise_meta=None)


def stft_energy(c: StftCoeffs) -> float:
    """Quadrature-weighted energy (hop/M) * sum |c|^2.

    Approximates ||V_g f||^2 over the time-frequency plane, which equals
    ||f||^2 * ||g||^2 in discrete norms; the identity is exact for
    hop=1, M=L.
    """
    return float(c.grid.hop / c.grid.M * np.sum(np.abs(c.values) ** 2))


def add_noise(mea: Measurement, model: str, level: float, seed: int) -> Measurement:
    """Contaminate a measurement.

    additive:        power' = power + eta, eta ~ N(0, level^2) i.i.d.
    multiplicative:  |V| is scaled by i.i.d. N(1, level^2) factors and
                     then squared, i.e. power' = power * (1 + g)^2.
    Deterministic for a fixed seed (PCG64).
    """
    if level < 0:
        raise ValueError(f"noise level must be nonnegative, got {level}")
    if model not in ("additive", "multiplicative"):
        raise ValueError(f"unknown noise model {model!r}")
    rng = np.random.default_rng(seed)
    draws = rng.standard_normal(mea.power.shape)
    if model == "additive":
        power = mea.power + level * draws
    else:
        power = mea.power * (1.0 + level * draws) ** 2
    meta = {"model": model, "level": float(level), "seed": int(seed), "rng": RNG_ALGORITHM}
    return Measurement(grid=mea.grid, window_id=mea.window_id, power=power, noise_meta=meta)
