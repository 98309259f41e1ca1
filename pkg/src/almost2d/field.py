"""Spectral vector fields on the unit torus and the operators acting on them.

Coefficients follow the Fourier-series convention
    u(x) = sum_k uhat(k) exp(2*pi*i k.x),   uhat(k) = (1/n^3) sum_x u(x) exp(-2*pi*i k.x),
so hand-computed series coefficients can be compared to stored arrays
literally.  Physical sample arrays are indexed [component, x1, x2, x3]
(x3 fastest in memory).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .grid import GridSpec, hermitian_symmetrize

HERMITIAN_TOL = 1e-10
DIVFREE_TOL = 1e-10


@dataclass
class SpectralVectorField:
    """Three-component Fourier coefficients on the cubic lattice."""

    grid: GridSpec
    coeffs: np.ndarray  # complex, shape (3, n, n, n)
    mean_zero: bool = False

    def __post_init__(self):
        n = self.grid.n
        if self.coeffs.shape != (3, n, n, n):
            raise ValueError(
                f"coefficient array shape {self.coeffs.shape} does not match grid n={n}"
            )
        if self.mean_zero and np.max(np.abs(self.coeffs[:, 0, 0, 0])) > 1e-13 * self.amplitude():
            raise ValueError("mean_zero flag set but k=0 coefficient is nonzero")

    def amplitude(self) -> float:
        m = float(np.max(np.abs(self.coeffs)))
        return m if m > 0 else 1.0

    def copy(self) -> "SpectralVectorField":
        return replace(self, coeffs=self.coeffs.copy())

    def __add__(self, other: "SpectralVectorField") -> "SpectralVectorField":
        _check_same_grid(self, other)
        return SpectralVectorField(
            self.grid, self.coeffs + other.coeffs, self.mean_zero and other.mean_zero
        )

    def __sub__(self, other: "SpectralVectorField") -> "SpectralVectorField":
        _check_same_grid(self, other)
        return SpectralVectorField(
            self.grid, self.coeffs - other.coeffs, self.mean_zero and other.mean_zero
        )

    def __mul__(self, scalar: float) -> "SpectralVectorField":
        return SpectralVectorField(self.grid, self.coeffs * scalar, self.mean_zero)

    __rmul__ = __mul__


@dataclass
class PhysicalVectorField:
    """Real samples at the n^3 grid points, indexed [component, x1, x2, x3]."""

    grid: GridSpec
    samples: np.ndarray  # float64, shape (3, n, n, n)

    def __post_init__(self):
        n = self.grid.n
        if self.samples.shape != (3, n, n, n):
            raise ValueError(
                f"sample array shape {self.samples.shape} does not match grid n={n}"
            )


@dataclass
class StrainField:
    """Six independent strain components as spectral scalar fields.

    Component order: S11, S12, S13, S22, S23, S33.  Frobenius weights
    (1, 2, 2, 1, 2, 1) restore the full symmetric-matrix sums.
    """

    grid: GridSpec
    comps: np.ndarray  # complex, shape (6, n, n, n)

    FROBENIUS_WEIGHTS = (1.0, 2.0, 2.0, 1.0, 2.0, 1.0)
    INDEX = {(1, 1): 0, (1, 2): 1, (1, 3): 2, (2, 2): 3, (2, 3): 4, (3, 3): 5}


def _check_same_grid(a, b) -> None:
    if a.grid.n != b.grid.n:
        raise ValueError(f"grid mismatch: {a.grid.n} vs {b.grid.n}")


def to_spectral(f: PhysicalVectorField) -> SpectralVectorField:
    """Forward DFT with the 1/n^3 normalization, symmetrized exactly."""
    if not np.all(np.isfinite(f.samples)):
        raise ValueError("physical samples contain non-finite values")
    n = f.grid.n
    coeffs = np.fft.fftn(f.samples, axes=(1, 2, 3)) / n**3
    coeffs = hermitian_symmetrize(coeffs)
    mean_zero = bool(np.max(np.abs(coeffs[:, 0, 0, 0])) <= 1e-14 * max(1.0, np.max(np.abs(coeffs))))
    return SpectralVectorField(f.grid, coeffs, mean_zero)


def to_physical(u: SpectralVectorField) -> PhysicalVectorField:
    """Inverse transform; rejects inputs whose imaginary residue betrays
    broken Hermitian symmetry."""
    n = u.grid.n
    samples = np.fft.ifftn(u.coeffs, axes=(1, 2, 3)) * n**3
    scale = max(float(np.max(np.abs(samples.real))), 1e-300)
    residue = float(np.max(np.abs(samples.imag)))
    if residue > HERMITIAN_TOL * max(scale, 1.0):
        raise ValueError(
            f"imaginary residue {residue:.3e} exceeds tolerance; "
            "Hermitian symmetry violated"
        )
    return PhysicalVectorField(u.grid, np.ascontiguousarray(samples.real))


def scalar_to_physical(grid: GridSpec, coeffs: np.ndarray) -> np.ndarray:
    """Inverse transform of a scalar coefficient array, real part returned."""
    n = grid.n
    samples = np.fft.ifftn(coeffs) * n**3
    scale = max(float(np.max(np.abs(samples.real))), 1e-300)
    if np.max(np.abs(samples.imag)) > HERMITIAN_TOL * max(scale, 1.0):
        raise ValueError("scalar field has a non-real inverse transform")
    return samples.real


def divergence(u: SpectralVectorField) -> np.ndarray:
    """Spectral divergence as a scalar coefficient array."""
    k1, k2, k3 = u.grid.k_deriv
    c = u.coeffs
    return 2j * np.pi * (k1 * c[0] + k2 * c[1] + k3 * c[2])


def divergence_defect(u: SpectralVectorField) -> float:
    """max_k |k . uhat(k)| / max_k |uhat(k)|, zero for divergence-free fields."""
    k1, k2, k3 = u.grid.k_deriv
    c = u.coeffs
    dot = np.abs(k1 * c[0] + k2 * c[1] + k3 * c[2])
    return float(np.max(dot)) / u.amplitude()


def leray_project(v: SpectralVectorField) -> tuple[SpectralVectorField, SpectralVectorField]:
    """Helmholtz split v = u_df + grad_part.

    u_df(k) = v(k) - (k.v(k)) k / |k|^2 is divergence-free, grad_part(k) is
    parallel to k.  The k=0 mode (a constant, hence divergence-free) passes
    through to u_df.
    """
    k1, k2, k3 = v.grid.k_deriv
    ksq = k1**2 + k2**2 + k3**2
    ksq_safe = np.where(ksq == 0, 1.0, ksq)
    c = v.coeffs
    dot = (k1 * c[0] + k2 * c[1] + k3 * c[2]) / ksq_safe
    grad = np.stack([dot * k1, dot * k2, dot * k3])
    grad[:, 0, 0, 0] = 0.0
    u_df = c - grad
    return (
        SpectralVectorField(v.grid, u_df, v.mean_zero),
        SpectralVectorField(v.grid, grad, True),
    )


def curl(u: SpectralVectorField) -> SpectralVectorField:
    """Spectral curl, multiplier 2*pi*i k x uhat(k)."""
    k1, k2, k3 = u.grid.k_deriv
    c = u.coeffs
    w = np.stack(
        [
            k2 * c[2] - k3 * c[1],
            k3 * c[0] - k1 * c[2],
            k1 * c[1] - k2 * c[0],
        ]
    )
    return SpectralVectorField(u.grid, 2j * np.pi * w, True)


def gradient_of_component(u: SpectralVectorField, i: int) -> SpectralVectorField:
    """grad(u_i) as a spectral vector field."""
    k1, k2, k3 = u.grid.k_deriv
    c = u.coeffs[i]
    return SpectralVectorField(
        u.grid, 2j * np.pi * np.stack([k1 * c, k2 * c, k3 * c]), True
    )


def partial3(u: SpectralVectorField) -> SpectralVectorField:
    """d/dx3 applied componentwise."""
    _, _, k3 = u.grid.k_deriv
    return SpectralVectorField(u.grid, 2j * np.pi * k3 * u.coeffs, True)


def strain(u: SpectralVectorField) -> StrainField:
    """Symmetric velocity gradient, Shat_ij = pi*i (k_i uhat_j + k_j uhat_i)."""
    ks = u.grid.k_deriv
    c = u.coeffs
    comps = np.empty((6,) + c.shape[1:], dtype=complex)
    for (i, j), slot in StrainField.INDEX.items():
        comps[slot] = 1j * np.pi * (ks[i - 1] * c[j - 1] + ks[j - 1] * c[i - 1])
    return StrainField(u.grid, comps)


def biot_savart(w: SpectralVectorField) -> SpectralVectorField:
    """Velocity with curl w: multiplier (2*pi*i k x what) / (4*pi^2 |k|^2).

    Requires w mean-zero and divergence-free; the k=0 mode of the output
    is zero.
    """
    if float(np.max(np.abs(w.coeffs[:, 0, 0, 0]))) > DIVFREE_TOL * w.amplitude():
        raise ValueError("Biot-Savart requires a mean-zero vorticity")
    if divergence_defect(w) > DIVFREE_TOL:
        raise ValueError("Biot-Savart requires a divergence-free vorticity")
    k1, k2, k3 = w.grid.k_deriv
    ksq = k1**2 + k2**2 + k3**2
    ksq_safe = np.where(ksq == 0, 1.0, ksq)
    c = w.coeffs
    cross = np.stack(
        [
            k2 * c[2] - k3 * c[1],
            k3 * c[0] - k1 * c[2],
            k1 * c[1] - k2 * c[0],
        ]
    )
    u = (2j * np.pi * cross) / (4 * np.pi**2 * ksq_safe)
    u[:, 0, 0, 0] = 0.0
    return SpectralVectorField(w.grid, u, True)


def heat_semigroup(u: SpectralVectorField, t: float) -> SpectralVectorField:
    """Heat flow for time t, multiplier exp(-4*pi^2 |k|^2 t)."""
    if t < 0:
        raise ValueError(f"heat semigroup requires t >= 0, got {t}")
    factor = np.exp(-4 * np.pi**2 * u.grid.k_sq * t)
    return SpectralVectorField(u.grid, u.coeffs * factor, u.mean_zero)


def dealias(u: SpectralVectorField) -> SpectralVectorField:
    """2/3-rule truncation: zero every coefficient with any |k_i| > n/3."""
    return SpectralVectorField(
        u.grid, u.coeffs * u.grid.dealias_mask, u.mean_zero
    )


def pressure(u: SpectralVectorField) -> np.ndarray:
    """Pressure coefficients solving -lap(p) = sum_ij d_i u_j d_j u_i.

    The quadratic source is formed in physical space and dealiased;
    phat(0) = 0.
    """
    grads = [to_physical(gradient_of_component(u, i)).samples for i in range(3)]
    source = np.zeros_like(grads[0][0])
    for i in range(3):
        for j in range(3):
            # grads[j][i] holds d_i u_j
            source += grads[j][i] * grads[i][j]
    n = u.grid.n
    shat = np.fft.fftn(source) / n**3
    shat *= u.grid.dealias_mask
    ksq = u.grid.k_sq
    ksq_safe = np.where(ksq == 0, 1.0, ksq)
    phat = shat / (4 * np.pi**2 * ksq_safe)
    phat[0, 0, 0] = 0.0
    return phat


def advection(u: SpectralVectorField, apply_dealias: bool = True) -> SpectralVectorField:
    """(u . grad) u formed in physical space, then truncated."""
    n = u.grid.n
    u_phys = np.fft.ifftn(u.coeffs, axes=(1, 2, 3)).real * n**3
    k1, k2, k3 = u.grid.k_deriv
    grad_hat = np.empty((3, 3, n, n, n), dtype=complex)
    for j in range(3):
        grad_hat[j, 0] = k1 * u.coeffs[j]
        grad_hat[j, 1] = k2 * u.coeffs[j]
        grad_hat[j, 2] = k3 * u.coeffs[j]
    grads = np.fft.ifftn(2j * np.pi * grad_hat, axes=(2, 3, 4)).real * n**3
    adv = np.einsum("ixyz,jixyz->jxyz", u_phys, grads)
    out = np.fft.fftn(adv, axes=(1, 2, 3)) / n**3
    if apply_dealias:
        out *= u.grid.dealias_mask
    out = hermitian_symmetrize(out)
    out[:, 0, 0, 0] = 0.0
    return SpectralVectorField(u.grid, out, True)
