"""Deterministic quadrature of the explicit whole-space integrals.

The thin-annulus family, the heat-kernel embedding constants, and the cone
constants are exact integrals over R^3; cylindrical or radial Gauss-Legendre
quadrature evaluates them, with analytic 1D reductions as independent
oracles where the tests demand one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .criteria import constants

TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)


class QuadScheme(Enum):
    GAUSS_LEGENDRE = "gauss_legendre"
    TRAPEZOID = "trapezoid"


@dataclass(frozen=True)
class QuadratureSpec:
    radial_nodes: int = 128
    vertical_nodes: int = 128
    scheme: QuadScheme = QuadScheme.GAUSS_LEGENDRE
    truncation_radius: float | None = None  # None: per-integrand default

    def __post_init__(self):
        if self.radial_nodes < 16 or self.vertical_nodes < 16:
            raise ValueError("node counts must be >= 16")

    def nodes(self, a: float, b: float, count: int) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights on [a, b]."""
        if self.scheme is QuadScheme.GAUSS_LEGENDRE:
            x, w = np.polynomial.legendre.leggauss(count)
            mid, half = 0.5 * (a + b), 0.5 * (b - a)
            return mid + half * x, half * w
        x = np.linspace(a, b, count)
        w = np.full(count, (b - a) / (count - 1))
        w[0] *= 0.5
        w[-1] *= 0.5
        return x, w


@dataclass
class AnnulusFamilyReport:
    n: int
    volume: float
    l2_sq: float
    hminus1_sq_upper: float
    horizontal_hminushalf_sq: float
    criterion_quantity: float
    besov_half_lower: float

    def as_dict(self) -> dict:
        return self.__dict__.copy()


def _annulus_density_sq(n: int, r: np.ndarray, z: np.ndarray) -> np.ndarray:
    """|what(xi)|^2 = n loglog(n)^(1/2) (1 + z^2/r^2) on the shell."""
    return n * math.sqrt(math.log(math.log(n))) * (1.0 + (z / r) ** 2)


def lambda_n_report(n: int, quad: QuadratureSpec = QuadratureSpec(), nu: float = 1.0) -> AnnulusFamilyReport:
    """Quadrature of the thin-shell integrals over {1 <= r <= 2, |z| < 1/n}.

    Asserts the closed-form upper bounds on every integral and the
    per-node solenoidality of the density.
    """
    if n < 3:
        raise ValueError(f"loglog(n) undefined for n={n} < 3")
    loglog_half = math.sqrt(math.log(math.log(n)))
    r, wr = quad.nodes(1.0, 2.0, quad.radial_nodes)
    z, wz = quad.nodes(-1.0 / n, 1.0 / n, quad.vertical_nodes)
    R, Z = np.meshgrid(r, z, indexing="ij")
    W = np.outer(wr, wz) * 2 * math.pi * R  # cylindrical volume element

    # xi . what = z - (z/r) r = 0 identically; assert at the nodes.
    density_dot = np.abs(Z * 1.0 + R * (-(Z / R)))
    if float(np.max(density_dot)) > 1e-14:
        raise AssertionError("shell density is not solenoidal at the quadrature nodes")

    amp_sq = _annulus_density_sq(n, R, Z)
    xi_sq = R**2 + Z**2

    volume = float(np.sum(W))
    l2_sq = float(np.sum(W * amp_sq))
    hminus1_sq = float(np.sum(W * amp_sq / (4 * math.pi**2 * xi_sq)))
    horiz_amp_sq = n * loglog_half * (Z / R) ** 2
    horizontal_sq = float(np.sum(W * horiz_amp_sq / (2 * math.pi * np.sqrt(xi_sq))))

    bounds = [
        (l2_sq, 20 * math.pi / 3 * loglog_half, "L2"),
        (hminus1_sq, 5 / (3 * math.pi) * loglog_half, "H^-1"),
        (horizontal_sq, loglog_half / n**2, "horizontal H^-1/2"),
    ]
    for value, bound, label in bounds:
        if not value < bound:
            raise AssertionError(
                f"{label} quadrature {value} does not sit below its bound {bound}"
            )

    ke_product = 0.25 * l2_sq * hminus1_sq
    criterion = math.sqrt(horizontal_sq) * math.exp(
        ke_product / (constants().r2 * nu**3)
    )
    # sup_t sqrt(t) exp(-40 pi^2 t) at t* = 1/(80 pi^2), times 6 pi loglog^(1/2):
    # lower bound for the squared B^{-1/2}_{2,inf} norm.
    sup_factor = math.sqrt(1.0 / (80 * math.pi**2)) * math.exp(-0.5)
    besov_lower_sq = 6 * math.pi * sup_factor * loglog_half

    return AnnulusFamilyReport(
        n=n,
        volume=volume,
        l2_sq=l2_sq,
        hminus1_sq_upper=hminus1_sq,
        horizontal_hminushalf_sq=horizontal_sq,
        criterion_quantity=criterion,
        besov_half_lower=besov_lower_sq,
    )


def lambda_n_closed_forms(n: int, quad: QuadratureSpec = QuadratureSpec()) -> dict:
    """Independent 1D reductions of the shell integrals (analytic in z).

    volume and l2_sq are fully closed-form; hminus1_sq reduces to
    loglog^(1/2) ln2 / pi; horizontal keeps a smooth 1D r-integral.
    """
    loglog_half = math.sqrt(math.log(math.log(n)))
    volume = 6 * math.pi / n
    l2_sq = loglog_half * (6 * math.pi + 4 * math.pi * math.log(2) / (3 * n**2))
    hminus1_sq = loglog_half * math.log(2) / math.pi

    def horiz_integrand(r: np.ndarray) -> np.ndarray:
        # int_{-1/n}^{1/n} z^2/sqrt(r^2+z^2) dz, analytic in z
        zmax = 1.0 / n
        inner = zmax * np.sqrt(zmax**2 + r**2) - r**2 * np.arcsinh(zmax / r)
        return inner / r

    r, wr = quad.nodes(1.0, 2.0, quad.radial_nodes)
    horizontal_sq = n * loglog_half * float(np.sum(wr * horiz_integrand(r)))
    return {
        "volume": volume,
        "l2_sq": l2_sq,
        "hminus1_sq_upper": hminus1_sq,
        "horizontal_hminushalf_sq": horizontal_sq,
    }


def _holder_exponent(p: float) -> float:
    """s with 1/s = 1/2 - 1/p, the Holder pairing exponent."""
    if p != math.inf and p <= 2:
        raise ValueError(f"embedding constants need p > 2, got {p}")
    if p == math.inf:
        return 2.0
    return 1.0 / (0.5 - 1.0 / p)


def _radial_truncation(s: float, quad: QuadratureSpec) -> float:
    if quad.truncation_radius is not None:
        return quad.truncation_radius
    # exp(-4 pi^2 s r^2) below 1e-18 of the peak; s >= 2 here keeps R small.
    return math.sqrt(42.0 / (4 * math.pi**2 * s)) + 1.0


def besov_embedding_constant(p: float, quad: QuadratureSpec = QuadratureSpec()) -> float:
    """|| (2 pi |zeta|)^(1/2) exp(-4 pi^2 |zeta|^2) ||_{L^s(R^3)} with
    1/s = 1/2 - 1/p; the constant of the H^-1/2 -> B^{-2+3/p}_{p,inf}
    embedding.  p = 2 is the sup-norm (s = inf) endpoint."""
    if p == 2:
        # sup of (2 pi r)^(1/2) exp(-4 pi^2 r^2) at r^2 = 1/(16 pi^2)
        rstar = 1.0 / (4 * math.pi)
        return math.sqrt(2 * math.pi * rstar) * math.exp(-4 * math.pi**2 * rstar**2)
    s = _holder_exponent(p)
    R = _radial_truncation(s, quad)
    r, w = quad.nodes(0.0, R, quad.radial_nodes)
    integrand = 4 * math.pi * r**2 * (2 * math.pi * r) ** (s / 2) * np.exp(
        -4 * math.pi**2 * s * r**2
    )
    value = float(np.sum(w * integrand)) ** (1.0 / s)
    if p == math.inf:
        closed = 1.0 / (4 * math.pi)
        if abs(value - closed) > 1e-8 * closed:
            raise AssertionError(
                f"p=inf embedding constant {value} deviates from 1/(4 pi)"
            )
    return value


@dataclass(frozen=True)
class ConeConstant:
    direct: float
    majorant: float


def cone_embedding_constant(
    p: float, eps: float, quad: QuadratureSpec = QuadratureSpec()
) -> ConeConstant:
    """Same integrand restricted to the cone {|z| < eps r}, plus the
    explicit majorant (2 pi)^(1/2) 2^(1/4) I_s^(1/s) eps^(1/s)."""
    if not 0 < eps < 1:
        raise ValueError(f"cone parameter must satisfy 0 < eps < 1, got {eps}")
    s = _holder_exponent(p)
    R = _radial_truncation(s, quad)
    r, wr = quad.nodes(0.0, R, quad.radial_nodes)

    direct_sum = 0.0
    for ri, wi in zip(r, wr):
        z, wz = quad.nodes(-eps * ri, eps * ri, quad.vertical_nodes)
        rho_sq = ri**2 + z**2
        integrand = (2 * math.pi * np.sqrt(rho_sq)) ** (s / 2) * np.exp(
            -4 * math.pi**2 * s * rho_sq
        )
        direct_sum += 2 * math.pi * ri * wi * float(np.sum(wz * integrand))
    direct = direct_sum ** (1.0 / s)

    tail = 4 * math.pi * r ** (2 + s / 2) * np.exp(-4 * math.pi**2 * s * r**2)
    i_s = float(np.sum(wr * tail))
    majorant = math.sqrt(2 * math.pi) * 2**0.25 * i_s ** (1.0 / s) * eps ** (1.0 / s)
    if direct > majorant * (1 + 1e-10):
        raise AssertionError(
            f"cone quadrature {direct} exceeds its majorant {majorant}"
        )
    return ConeConstant(direct, majorant)


@dataclass
class HeatKernelReport:
    grad_g_l1: float
    curl_checks: list[dict]

    @property
    def all_hold(self) -> bool:
        return all(row["lhs"] <= row["rhs"] * (1 + 1e-10) for row in self.curl_checks)


def heat_kernel_constants(
    quad: QuadratureSpec = QuadratureSpec(), seeds: tuple[int, ...] = (11, 12, 13)
) -> HeatKernelReport:
    """||grad g||_{L^1} for g = (4 pi)^(-3/2) exp(-|x|^2/4), checked against
    the closed form 2/sqrt(pi), plus the curl-smoothing bound
    ||curl e^{t lap} v||_p <= t^(-1/2) ||grad g||_1 ||v||_p on random torus
    fields."""
    R = quad.truncation_radius if quad.truncation_radius is not None else 16.0
    r, w = quad.nodes(0.0, R, quad.radial_nodes)
    g = (4 * math.pi) ** (-1.5) * np.exp(-(r**2) / 4.0)
    integrand = 4 * math.pi * r**2 * g * (r / 2.0)
    grad_g_l1 = float(np.sum(w * integrand))
    if abs(grad_g_l1 - TWO_OVER_SQRT_PI) > 1e-8 * TWO_OVER_SQRT_PI:
        raise AssertionError(
            f"||grad g||_1 quadrature {grad_g_l1} deviates from 2/sqrt(pi)"
        )

    from .families import random_divergence_free
    from .field import curl, heat_semigroup
    from .grid import GridSpec
    from .norms import lebesgue_norm

    grid = GridSpec(16)
    rows = []
    for seed in seeds:
        v = random_divergence_free(grid, seed, kmax=4)
        for t in (0.01, 0.1):
            smoothed = curl(heat_semigroup(v, t))
            for p in (2.0, math.inf):
                rows.append(
                    {
                        "seed": seed,
                        "t": t,
                        "p": p,
                        "lhs": lebesgue_norm(smoothed, p),
                        "rhs": grad_g_l1 / math.sqrt(t) * lebesgue_norm(v, p),
                    }
                )
    report = HeatKernelReport(grad_g_l1, rows)
    if not report.all_hold:
        raise AssertionError("heat-curl smoothing bound violated on a sample field")
    return report


@dataclass(frozen=True)
class EquivalenceConstants:
    forward: float   # vorticity Besov norm by velocity Besov norm
    backward: float  # velocity Besov norm by vorticity Besov norm

    @property
    def band(self) -> float:
        return max(self.forward, self.backward)


def besov_equivalence_constants(p: float) -> EquivalenceConstants:
    """Two-sided constants between ||u||_{B^{-1+3/p}} and ||omega||_{B^{-2+3/p}}.

    Valid for p > 3.  The backward constant's factor 1/(-1/2 + 3/(2p)) is
    negative as literally written in its derivation; its positive magnitude
    2/(1 - 3/p) is used here.
    """
    if p != math.inf and p <= 3:
        raise ValueError(f"equivalence constants need p > 3, got {p}")
    grad_g = TWO_OVER_SQRT_PI
    if p == math.inf:
        forward = 2.0 * grad_g
        backward = 2.0**1.5 * 2.0 * grad_g
    else:
        forward = 2 ** (1 - 3 / (2 * p)) * grad_g
        backward = 2 ** (1.5 * (1 - 1 / p)) * (2.0 / (1 - 3.0 / p)) * grad_g
    return EquivalenceConstants(forward, backward)
