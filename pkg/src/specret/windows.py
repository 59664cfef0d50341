"""Window families, stability sets, disjoint-region peeling, and the
coverage geometry of rotated elliptical supports.

Thresholds here compare against the raw analytic ambiguity values (the
peak of A h_n is 1, the peak of A phi_a is 1/sqrt(2)).  The retrieval
layer rescales its tolerance before calling in; see retrieval.py.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ambiguity import (
    FrftGaussAmbiguity,
    GaussAmbiguity,
    HermiteAmbiguity,
    SummedAmbiguity,
)
from .grid import Grid
from .special import dilated_gauss_samples, frft_gauss_samples, hermite_samples

_CLOSED_FORM_UNIT_PEAK = ("gauss", "frft_gauss", "hermite")


@dataclass(frozen=True)
class WindowMember:
    window_id: str
    samples: np.ndarray
    evaluator: object  # closed-form ambiguity evaluator


@dataclass(frozen=True)
class WindowFamily:
    members: tuple
    scheme: str  # "frft_gauss" or "hermite"

    def __post_init__(self):
        if not self.members:
            raise ValueError("window family must be nonempty")
        object.__setattr__(self, "members", tuple(self.members))

    def __len__(self):
        return len(self.members)

    def summed_evaluator(self) -> SummedAmbiguity:
        return SummedAmbiguity([m.evaluator for m in self.members])


@dataclass(frozen=True)
class RegionMask:
    grid: Grid
    bits: np.ndarray  # bool, shape (M, K)
    epsilon: float

    def __post_init__(self):
        b = np.asarray(self.bits, dtype=bool)
        if b.shape != (self.grid.M, self.grid.K):
            raise ValueError(f"mask shape {b.shape} does not match grid")
        object.__setattr__(self, "bits", b)

    def area(self) -> float:
        """Lattice-cell area of the region, dx*dy per cell."""
        return float(self.bits.sum() * self.grid.dt * self.grid.hop * self.grid.dy)


@dataclass(frozen=True)
class CoverageReport:
    R1: float
    R2: float
    covered_disc_radius_numeric: float
    area_fraction: float  # pi*R1^2 relative to the area of the ellipse union


def build_frft_family(a: float, N: int, grid: Grid,
                      angles: list[float] | None = None) -> WindowFamily:
    """Family of fractionally transformed dilated Gaussians.

    Default angles are alpha_j = (j-1)*pi/N for j = 1..N; pass an explicit
    angle list to reproduce other conventions (e.g. 80 angles spaced pi/40).
    """
    if a <= 0:
        raise ValueError(f"dilation must be positive, got {a}")
    if N < 1:
        raise ValueError(f"need at least one window, got N={N}")
    if angles is None:
        angles = [(j - 1) * np.pi / N for j in range(1, N + 1)]
    elif len(angles) != N:
        raise ValueError(f"angle list has {len(angles)} entries, expected N={N}")
    members = []
    for alpha in angles:
        members.append(WindowMember(
            window_id=f"frft_gauss(a={a:g}, alpha={alpha:.6f})",
            samples=frft_gauss_samples(a, alpha, grid),
            evaluator=FrftGaussAmbiguity(a, alpha),
        ))
    return WindowFamily(members=tuple(members), scheme="frft_gauss")


def build_hermite_family(degrees, grid: Grid) -> WindowFamily:
    """Family of Hermite windows with strictly increasing degrees."""
    degrees = [int(n) for n in degrees]
    if not degrees:
        raise ValueError("need at least one degree")
    if any(n < 0 for n in degrees):
        raise ValueError(f"degrees must be nonnegative, got {degrees}")
    if any(b <= a for a, b in zip(degrees, degrees[1:])):
        raise ValueError(f"degrees must be strictly increasing, got {degrees}")
    members = []
    for n in degrees:
        members.append(WindowMember(
            window_id=f"hermite(n={n})",
            samples=hermite_samples(n, grid),
            evaluator=HermiteAmbiguity(n),
        ))
    return WindowFamily(members=tuple(members), scheme="hermite")


def gauss_window_member(a: float, grid: Grid) -> WindowMember:
    """Single dilated-Gauss window (the standard single-window baseline)."""
    return WindowMember(
        window_id=f"gauss(a={a:g})",
        samples=dilated_gauss_samples(a, grid).astype(np.complex128),
        evaluator=GaussAmbiguity(a),
    )


def stability_mask(evaluator, epsilon: float, grid: Grid) -> RegionMask:
    """Lattice mask of {(x, y): |evaluator(x, y)| > epsilon}.

    For the unit-peak closed-form kinds epsilon must lie in (0, 1); note
    the gauss kinds peak at 1/sqrt(2), so epsilon >= 1/sqrt(2) yields an
    empty mask there.
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    kind = getattr(evaluator, "kind", None)
    if kind in _CLOSED_FORM_UNIT_PEAK and epsilon >= 1:
        raise ValueError(f"epsilon must be below the unit peak, got {epsilon}")
    bits = np.abs(evaluator.on_lattice(grid)) > epsilon
    return RegionMask(grid=grid, bits=bits, epsilon=float(epsilon))


def summed_mask(family: WindowFamily, epsilon: float, grid: Grid) -> RegionMask:
    """Single mask from thresholding the summed evaluator (the construction
    used by the summed-denominator algorithm; no peeling needed because the
    sum of gauss-kind ambiguities is strictly positive)."""
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    bits = family.summed_evaluator().on_lattice(grid) > epsilon
    return RegionMask(grid=grid, bits=bits, epsilon=float(epsilon))


def peel_masks(family: WindowFamily, epsilon: float, grid: Grid) -> list[RegionMask]:
    """Pairwise-disjoint masks: each member claims the part of its stability
    set not already claimed by earlier members (onion peeling)."""
    claimed = np.zeros((grid.M, grid.K), dtype=bool)
    out = []
    for member in family.members:
        bits = stability_mask(member.evaluator, epsilon, grid).bits & ~claimed
        claimed |= bits
        out.append(RegionMask(grid=grid, bits=bits, epsilon=float(epsilon)))
    return out


def _ellipse_level(a: float, epsilon: float) -> float:
    """Constant C with {A phi_a > eps} = {a x^2 + y^2/a < C}."""
    return (2.0 / np.pi) * abs(np.log(np.sqrt(2.0) * epsilon))


def coverage_radii(a: float, N: int, epsilon: float,
                   n_theta: int = 200_000) -> CoverageReport:
    """Guaranteed covered-disc radii for N ellipses rotated by pi/N steps.

    R1 comes from the far pair of intersection points of adjacent rotated
    ellipses, R2 from the near pair; the union covers the disc of radius
    R1.  The numeric field scans a fine polar grid and takes, over all
    directions, the smallest radial extent of the union; it must not fall
    below R1 (asserted at 0.1% slack).
    """
    if a <= 1:
        raise ValueError(f"need a > 1, got {a}")
    if N < 3:
        raise ValueError(f"need N >= 3, got {N}")
    if not (0 < epsilon < 2 ** -0.5):
        raise ValueError(f"epsilon must lie in (0, 1/sqrt(2)), got {epsilon}")
    C = _ellipse_level(a, epsilon)
    half = np.pi / (2 * N)
    D1 = np.cos(half) ** 2 / a + a * np.sin(half) ** 2
    D2 = a * np.cos(half) ** 2 + np.sin(half) ** 2 / a
    R1 = float(np.sqrt(C / D1))
    R2 = float(np.sqrt(C / D2))

    # union extent along each direction: r(theta)^2 = C / min_j E(theta + alpha_j)
    theta = np.linspace(0.0, np.pi, n_theta, endpoint=False)
    alphas = np.pi * np.arange(N) / N
    psi = theta[:, None] + alphas[None, :]
    E = a * np.cos(psi) ** 2 + np.sin(psi) ** 2 / a
    r2 = C / E.min(axis=1)
    numeric = float(np.sqrt(r2.min()))
    if numeric < R1 * (1.0 - 1e-3):
        raise AssertionError(
            f"polar scan found covered radius {numeric} below formula R1={R1}"
        )
    union_area = float(0.5 * np.sum(r2) * (np.pi / n_theta) * 2.0)  # symmetric halves
    area_fraction = float(min(1.0, np.pi * R1 ** 2 / union_area))
    return CoverageReport(R1=R1, R2=R2, covered_disc_radius_numeric=numeric,
                          area_fraction=area_fraction)
