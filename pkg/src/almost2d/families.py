"""Explicit divergence-free fields with closed-form norms.

Every generator returns a mean-zero, divergence-free, Hermitian-symmetric
spectral field, so generated data doubles as a test oracle for the norm
machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .field import SpectralVectorField, leray_project
from .grid import GridSpec, hermitian_symmetrize


def _empty(grid: GridSpec) -> np.ndarray:
    return np.zeros((3, grid.n, grid.n, grid.n), dtype=complex)


def _mode_index(grid: GridSpec, k: tuple[int, int, int]) -> tuple[int, int, int]:
    n = grid.n
    for ki in k:
        if not -n // 2 <= ki <= n // 2 - 1:
            raise ValueError(f"mode {k} not resolved by grid n={n}")
    return tuple(ki % n for ki in k)


def set_mode_pair(
    coeffs: np.ndarray, grid: GridSpec, k: tuple[int, int, int], value: np.ndarray
) -> None:
    """Write uhat(k) = value and uhat(-k) = conj(value)."""
    kpos = _mode_index(grid, k)
    kneg = _mode_index(grid, tuple(-ki for ki in k))
    coeffs[(slice(None),) + kpos] = value
    coeffs[(slice(None),) + kneg] = np.conj(value)


def taylor_green_2d(grid: GridSpec, amplitude: float = 1.0) -> SpectralVectorField:
    """u = A (sin(2pi x1) cos(2pi x2), -cos(2pi x1) sin(2pi x2), 0).

    Closed forms at A=1: K0 = 1/4, E0 = 2 pi^2, omega_h = 0.
    """
    coeffs = _empty(grid)
    a = amplitude / 4.0
    # sin(a)cos(b) = (1/4i)(e^{i(a+b)} + e^{i(a-b)} - e^{-i(a-b)} - e^{-i(a+b)})
    set_mode_pair(coeffs, grid, (1, 1, 0), np.array([-1j * a, 1j * a, 0.0]))
    set_mode_pair(coeffs, grid, (1, -1, 0), np.array([-1j * a, -1j * a, 0.0]))
    return SpectralVectorField(grid, coeffs, mean_zero=True)


def un_family(n: int, grid: GridSpec) -> SpectralVectorField:
    """Two-mode field uhat(+-(1,n,1)) = a_n (n,-1,0), with
    a_n = sqrt( sqrt(n^2+2) / (4 pi (n^2+1)) ).

    Closed forms: ||omega_h||_{H^-1/2} = 1, ||u||_{H^1/2}^2 = n^2 + 2,
    and the k3 = 0 plane restriction vanishes.
    """
    if n < 1:
        raise ValueError(f"family index must be >= 1, got {n}")
    if n > grid.n // 2 - 1:
        raise ValueError(f"mode k2={n} not resolved by grid n={grid.n}")
    a_n = math.sqrt(math.sqrt(n**2 + 2) / (4 * math.pi * (n**2 + 1)))
    coeffs = _empty(grid)
    set_mode_pair(coeffs, grid, (1, n, 1), a_n * np.array([n, -1.0, 0.0]))
    return SpectralVectorField(grid, coeffs, mean_zero=True)


def large_almost_2d(n: int, grid: GridSpec) -> SpectralVectorField:
    """u = n (1,-1,0) cos(2pi(x1+x2)) + exp(-n^5) (1,-2,1) cos(2pi(x1+x2+x3)).

    The perturbation amplitude exp(-n^5) is used literally; it underflows to
    zero in float64 for n >= 4, making the field exactly two dimensional.
    """
    if n < 1:
        raise ValueError(f"family index must be >= 1, got {n}")
    coeffs = _empty(grid)
    set_mode_pair(coeffs, grid, (1, 1, 0), (n / 2.0) * np.array([1.0, -1.0, 0.0]))
    eps = math.exp(-float(n) ** 5)
    set_mode_pair(coeffs, grid, (1, 1, 1), (eps / 2.0) * np.array([1.0, -2.0, 1.0]))
    return SpectralVectorField(grid, coeffs, mean_zero=True)


def two_d_plus_perturbation(
    v2d: SpectralVectorField, w: SpectralVectorField, delta: float
) -> SpectralVectorField:
    """u = v2d + delta * w for an x3-independent base v2d."""
    if float(np.max(np.abs(v2d.coeffs[:, :, :, 1:]))) > 1e-13 * v2d.amplitude():
        raise ValueError("base field must be independent of x3 (support on k3=0)")
    return v2d + delta * w


@dataclass
class RescaledVorticity:
    """Vorticity stretched vertically by an integer factor.

    The stretched field lives on an m-times-taller torus; it is stored on the
    unit torus through the measure-preserving index map k3 -> m*k3 (i.e. the
    stored field at height y3 is the tall-torus field at m*y3).  Lebesgue
    norms of the tall-torus object are the stored-field grid norms times
    m^(1/q); the sup norm is unchanged.
    """

    field: SpectralVectorField
    stretch: int

    def lebesgue_norm(self, q: float) -> float:
        from .norms import lebesgue_norm

        base = lebesgue_norm(self.field, q)
        if q == np.inf:
            return base
        return self.stretch ** (1.0 / q) * base

    def component_lebesgue_norm(self, part: str, q: float) -> float:
        from .norms import lebesgue_norm

        sub = self.field.copy()
        if part == "horizontal":
            sub.coeffs[2] = 0.0
        elif part == "vertical":
            sub.coeffs[0] = 0.0
            sub.coeffs[1] = 0.0
        else:
            raise ValueError(f"unknown part {part!r}")
        base = lebesgue_norm(sub, q)
        if q == np.inf:
            return base
        return self.stretch ** (1.0 / q) * base


def rescaled_vorticity(
    base_omega: SpectralVectorField, m: int, a: float
) -> RescaledVorticity:
    """eps^(2/3) log(1/eps^a)^(1/4) (eps w1, eps w2, w3)(x1, x2, eps*x3)
    with eps = 1/m.

    m = 1 is rejected: log(1) = 0 forces the zero field.  The grid must
    resolve the stretched vertical modes m*k3.
    """
    if m < 2:
        raise ValueError(f"stretch factor must be an integer >= 2, got {m}")
    if a <= 0:
        raise ValueError(f"log exponent must be positive, got {a}")
    grid = base_omega.grid
    n = grid.n
    eps = 1.0 / m
    prefactor = eps ** (2.0 / 3.0) * math.log(m**a) ** 0.25

    src = base_omega.coeffs
    out = _empty(grid)
    kline = np.fft.fftfreq(n, d=1.0 / n).astype(int)
    for idx3, k3 in enumerate(kline):
        if np.max(np.abs(src[:, :, :, idx3])) == 0.0:
            continue
        k3_new = m * k3
        if not -n // 2 <= k3_new <= n // 2 - 1:
            raise ValueError(
                f"stretched mode k3={k3_new} not resolved by grid n={n}"
            )
        out[0, :, :, k3_new % n] += eps * src[0, :, :, idx3]
        out[1, :, :, k3_new % n] += eps * src[1, :, :, idx3]
        out[2, :, :, k3_new % n] += src[2, :, :, idx3]
    out *= prefactor
    field = SpectralVectorField(grid, out, mean_zero=True)
    return RescaledVorticity(field, m)


def helical_base_vorticity(
    grid: GridSpec, a: float = 1.0, b: float = 1.0
) -> SpectralVectorField:
    """omega = (a cos(2pi x3), a sin(2pi x3), b sin(2pi(x1+x2))).

    Divergence-free with |omega(x)| independent of x3, so vertical
    subsampling integrates its fractional Lq powers exactly; the reference
    base for rescaling sweeps.
    """
    coeffs = _empty(grid)
    set_mode_pair(coeffs, grid, (0, 0, 1), np.array([a / 2.0, a / 2j, 0.0]))
    set_mode_pair(coeffs, grid, (1, 1, 0), np.array([0.0, 0.0, b / 2j]))
    return SpectralVectorField(grid, coeffs, mean_zero=True)


def annulus_analog(
    n: int, grid: GridSpec, base_radius: float | None = None
) -> SpectralVectorField:
    """Lattice shell field mirroring the thin-annulus family.

    Modes with rho <= sqrt(k1^2+k2^2) <= 2*rho on the planes |k3| <= 1 (the
    lattice floor of the continuum thinness |z| < 1/n) carry
    what(k) = B (e3 - (k3/r) e_r), divergence-free mode by mode.  The L2
    mass is normalized to 4 loglog(n) and the shell radius dilates slowly,
    rho = 7.5 loglog(n)^(1/2).  That balance reproduces the continuum
    family's trends on the lattice: the heat-kernel Besov norm (which sees
    mass/rho) grows, while the horizontal component (relative size k3/r per
    mode, so mass/rho^2 in Lq and mass/rho^3 in the critical Hilbert norm)
    and with it both regularity-criterion quantities fall.
    """
    if n < 3:
        raise ValueError(f"family index must be >= 3 (loglog undefined below), got {n}")
    loglog = math.log(math.log(n))
    rho = 7.5 * math.sqrt(loglog) if base_radius is None else float(base_radius)
    if 2 * rho > grid.n // 2 - 1:
        raise ValueError(
            f"shell radius 2*rho={2 * rho:.2f} not resolved by grid n={grid.n}"
        )

    kline = np.fft.fftfreq(grid.n, d=1.0 / grid.n).astype(int)
    modes = []
    for i1, k1 in enumerate(kline):
        for i2, k2 in enumerate(kline):
            r = math.hypot(k1, k2)
            if not rho <= r <= 2 * rho:
                continue
            for k3 in (-1, 0, 1):
                modes.append((i1, i2, k3 % grid.n, k1, k2, k3, r))
    if not modes:
        raise ValueError(f"empty lattice shell for n={n}, rho={rho}")

    mass = sum(1.0 + (k3 / r) ** 2 for *_ignored, k3, r in modes)
    amp = math.sqrt(4.0 * loglog / mass)

    coeffs = _empty(grid)
    for i1, i2, i3, k1, k2, k3, r in modes:
        e_r = np.array([k1 / r, k2 / r, 0.0])
        vec = amp * (np.array([0.0, 0.0, 1.0]) - (k3 / r) * e_r)
        coeffs[:, i1, i2, i3] = vec
    coeffs = hermitian_symmetrize(coeffs)
    field = SpectralVectorField(grid, coeffs, mean_zero=True)
    defect = np.abs(
        kline.reshape(-1, 1, 1) * coeffs[0]
        + kline.reshape(1, -1, 1) * coeffs[1]
        + kline.reshape(1, 1, -1) * coeffs[2]
    )
    if float(np.max(defect)) > 1e-12 * field.amplitude():
        raise AssertionError("annulus construction produced a non-solenoidal mode")
    return field


def random_divergence_free(
    grid: GridSpec, seed: int, kmax: int | None = None, amplitude: float = 1.0
) -> SpectralVectorField:
    """Seeded band-limited random field: Gaussian coefficients on the modes
    with every |k_i| <= kmax, mirrored for Hermitian symmetry, then Leray
    projected and recentered to mean zero."""
    n = grid.n
    if kmax is None:
        kmax = max(1, n // 4)
    if kmax > n // 2 - 1:
        raise ValueError(f"kmax={kmax} not resolved by grid n={n}")
    rng = np.random.default_rng(seed)
    kline = np.fft.fftfreq(n, d=1.0 / n).astype(int)
    band = np.abs(kline) <= kmax
    mask = band.reshape(-1, 1, 1) & band.reshape(1, -1, 1) & band.reshape(1, 1, -1)
    raw = rng.standard_normal((3, n, n, n)) + 1j * rng.standard_normal((3, n, n, n))
    coeffs = raw * mask
    coeffs = hermitian_symmetrize(coeffs)
    coeffs[:, 0, 0, 0] = 0.0
    u, _ = leray_project(SpectralVectorField(grid, coeffs, mean_zero=True))
    scale = float(np.max(np.abs(u.coeffs)))
    if scale > 0:
        u = u * (amplitude / scale)
    return u
