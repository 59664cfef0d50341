"""Direct phase retrieval: masked pointwise division of spectrogram
products, assembly of the signal ambiguity function, anchor selection,
and the final one-dimensional inversion back to the signal.

Tolerance convention
--------------------
``RetrievalConfig.epsilon`` is expressed on the discrete scale of an
unweighted DFT pipeline, where a unit-norm window's ambiguity peak sits
near 1/dt rather than 1; the analytic threshold actually applied to the
closed-form window ambiguities is ``epsilon * grid.dt``.  Cutoffs like
0.5 are only meaningful on this scale: an analytic 0.5 would shrink
every high-degree Hermite stability set to a few lattice cells (the
Laguerre-function envelope decays like (n*z)^(-1/4)) and no signal
could be reconstructed through it.  The windows module, by contrast,
always thresholds raw analytic values.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ambiguity import AmbiguityGrid, spectrogram_to_product
from .exceptions import DegenerateAnchorError, EmptyMaskError, GridMismatchError
from .grid import Grid, Signal
from .stft import Measurement, forward_stft, to_measurement
from .windows import WindowFamily, WindowMember, peel_masks


@dataclass(frozen=True)
class RetrievalConfig:
    epsilon: float
    anchor: int | None = None       # None: auto-select; int: fixed time index
    algorithm: str = "alg1"          # alg1 (summed gauss) | alg2 (peeled hermite)
    oversample_final: int = 1        # refinement factor for the anchor profile

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.algorithm not in ("alg1", "alg2"):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.oversample_final < 1:
            raise ValueError(f"oversample_final must be >= 1, got {self.oversample_final}")


@dataclass(frozen=True)
class Reconstruction:
    signal: Signal
    ambiguity: AmbiguityGrid
    omega_area_fraction: float
    anchor_c: int
    diagnostics: dict | None = None


def raw_threshold(cfg: RetrievalConfig, grid: Grid) -> float:
    """Analytic ambiguity threshold corresponding to the config tolerance."""
    return cfg.epsilon * grid.dt


def measure_family(f: Signal, family: WindowFamily) -> list[Measurement]:
    """Noiseless squared-magnitude measurements, one per family member."""
    return [
        to_measurement(forward_stft(f, m.samples, f.grid, window_id=m.window_id))
        for m in family.members
    ]


def _check_inputs(measurements, family, grid=None):
    if len(measurements) != len(family.members):
        raise ValueError(
            f"{len(measurements)} measurements for {len(family.members)} windows"
        )
    grid = grid or measurements[0].grid
    for mea in measurements:
        if mea.grid != grid:
            raise GridMismatchError("measurements live on different grids")
    grid.require_square()
    return grid


def _clamped(den: np.ndarray, floor: float) -> np.ndarray:
    """Clamp |den| from below at floor, preserving sign/phase."""
    mag = np.abs(den)
    out = np.array(den, copy=True)
    weak = (mag < floor) & (mag > 0)
    out[weak] = (den[weak] / mag[weak]) * floor  # unit phase times floor
    out[mag == 0] = floor
    return out


def assemble_alg1(measurements, family: WindowFamily,
                  cfg: RetrievalConfig) -> AmbiguityGrid:
    """Summed-denominator assembly: J = sum_j G_j / sum_j A g_j on the
    superlevel set of the sum, zero outside."""
    grid = _check_inputs(measurements, family)
    eps = raw_threshold(cfg, grid)
    den = family.summed_evaluator().on_lattice(grid)
    omega = den > eps
    if not omega.any():
        raise EmptyMaskError("summed ambiguity nowhere exceeds the tolerance")
    num = np.zeros((grid.M, grid.K), dtype=np.complex128)
    for mea in measurements:
        num += spectrogram_to_product(mea).values
    J = np.zeros_like(num)
    den_safe = _clamped(np.conj(den), eps)
    J[omega] = num[omega] / den_safe[omega]
    return AmbiguityGrid(grid=grid, values=J, mask=omega)


def assemble_alg2(measurements, family: WindowFamily,
                  cfg: RetrievalConfig) -> AmbiguityGrid:
    """Peeled assembly: on each disjoint region the corresponding
    measurement alone is divided by its window's ambiguity."""
    grid = _check_inputs(measurements, family)
    eps = raw_threshold(cfg, grid)
    masks = peel_masks(family, eps, grid)
    J = np.zeros((grid.M, grid.K), dtype=np.complex128)
    omega = np.zeros((grid.M, grid.K), dtype=bool)
    for mea, member, mask in zip(measurements, family.members, masks):
        bits = mask.bits
        if not bits.any():
            continue
        G = spectrogram_to_product(mea).values
        den = _clamped(np.conj(member.evaluator.on_lattice(grid)), eps)
        J[bits] = G[bits] / den[bits]
        omega |= bits
    if not omega.any():
        raise EmptyMaskError("no stability set exceeds the tolerance")
    return AmbiguityGrid(grid=grid, values=J, mask=omega)


def reconstruct_from_ambiguity(A: AmbiguityGrid, cfg: RetrievalConfig) -> Reconstruction:
    """Invert a (masked) ambiguity lattice to a signal, up to global phase.

    The lattice is first converted to the V_f f convention by the exact
    phase factor exp(-i*pi*x*y); the inverse transform along y then lands on
    integer lattice offsets, f(x + c) for lattice anchors c, so no
    interpolation is needed.  The anchor maximizes the profile
    w(c) = (inverse transform of A(0, .))(c), an estimate of |f(c)|^2,
    and the output is normalized by sqrt(|u_c(0)|), which fixes the
    phase factor at the anchor instead of requiring knowledge of f(c).
    """
    grid = A.grid
    grid.require_square()
    L = grid.L
    dy = grid.dy
    sgn = (-1.0) ** np.arange(L)
    constL = 1j ** (L % 4)  # exp(+i*pi*L/2)

    Vff = A.values * np.exp(-1j * np.pi * grid.x[None, :] * grid.y[:, None])
    if A.mask is not None:
        Vff = np.where(A.mask, Vff, 0.0)

    # anchor profile from the x=0 column
    k0 = L // 2
    col = Vff[:, k0] * sgn
    q = cfg.oversample_final
    padded = np.zeros(q * L, dtype=np.complex128)
    padded[:L] = col
    wfine = dy * constL * (q * L) * np.fft.ifft(padded)
    # w at lattice points carries the (-1)^l factor; off-lattice points are
    # only used to localize the maximum before snapping back
    wprof = sgn * wfine[::q].copy()
    slice_l1 = dy * float(np.sum(np.abs(col)))
    if cfg.anchor is not None:
        anchor = int(cfg.anchor) % L
    else:
        if slice_l1 <= 0 or np.max(np.abs(wfine)) < 1e-10 * slice_l1:
            raise DegenerateAnchorError("anchor profile is numerically zero")
        anchor = int(round(int(np.argmax(np.abs(wfine))) / q)) % L
    u0 = wprof[anchor]
    if slice_l1 <= 0 or abs(u0) < 1e-10 * slice_l1:
        raise DegenerateAnchorError(f"anchor {anchor} has |u_c(0)| ~ 0")

    # diagonal of the inverse transform: u_c(x_k) = uhat(x_k, x_k + c)
    s = anchor - L // 2
    m = np.arange(L)
    k = np.arange(L)
    E = np.exp(2j * np.pi * np.outer(m, k + s) / L)
    u_diag = dy * constL * ((-1.0) ** (k + s)) * np.einsum("mk,m,mk->k", Vff, sgn, E)
    vals = u_diag / np.sqrt(abs(u0))
    out = np.zeros(L, dtype=np.complex128)
    out[(k + s) % L] = vals

    omega_frac = float(A.mask.mean()) if A.mask is not None else 1.0
    return Reconstruction(
        signal=Signal(grid=grid, values=out),
        ambiguity=A,
        omega_area_fraction=omega_frac,
        anchor_c=anchor,
        diagnostics={"u0": complex(u0), "anchor_profile_max": float(np.max(np.abs(wprof)))},
    )


def run_alg1(measurements, family: WindowFamily, cfg: RetrievalConfig) -> Reconstruction:
    """Multi-window retrieval with the summed positive denominator
    (fractional-Gauss window families)."""
    return reconstruct_from_ambiguity(assemble_alg1(measurements, family, cfg), cfg)


def run_alg2(measurements, family: WindowFamily, cfg: RetrievalConfig) -> Reconstruction:
    """Multi-window retrieval on peeled disjoint regions (Hermite window
    families with ascending degrees)."""
    return reconstruct_from_ambiguity(assemble_alg2(measurements, family, cfg), cfg)


def single_window_retrieve(measurement: Measurement, evaluator,
                           cfg: RetrievalConfig) -> Reconstruction:
    """Single-window pointwise inversion (the instability baseline)."""
    family = WindowFamily(
        members=(WindowMember(window_id=measurement.window_id,
                              samples=np.zeros(measurement.grid.L),
                              evaluator=evaluator),),
        scheme="single",
    )
    return reconstruct_from_ambiguity(assemble_alg2([measurement], family, cfg), cfg)
