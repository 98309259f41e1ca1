"""Sharp constants, regularity criteria, growth envelopes, and time bounds.

All criteria use strict inequality: boundary inputs report not satisfied.
Torus fields are evaluated against the whole-space sharp constants; reports
carry a constants_version label recording that choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .field import SpectralVectorField, biot_savart, curl
from .norms import horizontal_parts, lebesgue_norm, sobolev_norm

CONSTANTS_VERSION = "whole-space-sharp-v1"

#: Coefficient of nu^4 in the small-data energy-enstrophy threshold.
SMALL_DATA_COEFF = 6912 * math.pi**4


@dataclass(frozen=True)
class SharpConstants:
    c1: float
    c2: float
    r1: float
    r2: float
    small_data_threshold_coeff: float


def constants() -> SharpConstants:
    """Evaluate the sharp constants and cross-check both closed forms."""
    c1 = 2.0 ** (-1.0 / 6.0) * math.pi ** (-1.0 / 3.0)
    c2 = (2.0 / math.pi) ** (2.0 / 3.0) / math.sqrt(3.0)
    r1 = 1.0 / (2.0 * c1 * c2)
    r1_closed = math.sqrt(3.0) * math.pi / (2.0 * math.sqrt(2.0))
    r2 = 128.0 / (27.0 * (1.0 + math.sqrt(2.0)) ** 4 * c1**4 * c2**4)
    r2_closed = 32.0 * math.pi**4 / (3.0 * (1.0 + math.sqrt(2.0)) ** 4)
    if abs(r1 - r1_closed) > 1e-12 * r1_closed:
        raise AssertionError(f"closed forms for r1 disagree: {r1!r} vs {r1_closed!r}")
    if abs(r2 - r2_closed) > 1e-12 * r2_closed:
        raise AssertionError(f"closed forms for r2 disagree: {r2!r} vs {r2_closed!r}")
    return SharpConstants(c1, c2, r1_closed, r2_closed, SMALL_DATA_COEFF)


@dataclass
class CriterionReport:
    name: str
    lhs: float
    rhs: float
    satisfied: bool
    inputs: dict[str, float] = dc_field(default_factory=dict)
    constants_version: str = CONSTANTS_VERSION

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "satisfied": self.satisfied,
            "inputs": dict(self.inputs),
            "constants_version": self.constants_version,
        }


def small_data_check(K0: float, E0: float, nu: float) -> CriterionReport:
    """Energy-enstrophy product against 6912 pi^4 nu^4."""
    if nu <= 0:
        raise ValueError(f"viscosity must be positive, got {nu}")
    if K0 < 0 or E0 < 0:
        raise ValueError("energy and enstrophy must be nonnegative")
    lhs = K0 * E0
    rhs = SMALL_DATA_COEFF * nu**4
    return CriterionReport(
        "small-data", lhs, rhs, lhs < rhs, {"K0": K0, "E0": E0, "nu": nu}
    )


def gamma2d_from_norms(
    omega_h_norm: float, K0: float, E0: float, nu: float
) -> CriterionReport:
    """Almost-2D criterion from precomputed scalars (the field-level
    gamma2d_check reduces to this)."""
    consts = constants()
    exponent = (K0 * E0 - SMALL_DATA_COEFF * nu**4) / (consts.r2 * nu**3)
    rhs = consts.r1 * nu
    # Verdict from logs so extreme exponents cannot over/underflow it.
    log_lhs = math.log(omega_h_norm) + exponent if omega_h_norm > 0 else -math.inf
    with np.errstate(over="ignore"):
        lhs = float(omega_h_norm * np.exp(exponent)) if omega_h_norm > 0 else 0.0
    return CriterionReport(
        "gamma2d",
        lhs,
        rhs,
        log_lhs < math.log(rhs),
        {
            "K0": K0,
            "E0": E0,
            "nu": nu,
            "omega_h_hminushalf": omega_h_norm,
            "log_lhs": log_lhs,
        },
    )


def gamma2d_check(u: SpectralVectorField, nu: float) -> CriterionReport:
    """Almost-2D global-regularity criterion on a velocity field:
    ||omega_h||_{H^-1/2} exp((K0 E0 - 6912 pi^4 nu^4)/(R2 nu^3)) < R1 nu.
    """
    if nu <= 0:
        raise ValueError(f"viscosity must be positive, got {nu}")
    K0 = 0.5 * lebesgue_norm(u, 2) ** 2
    w = curl(u)
    E0 = 0.5 * sobolev_norm(w, 0) ** 2
    omega_h_norm = sobolev_norm(horizontal_parts(u).omega_h, -0.5)
    return gamma2d_from_norms(omega_h_norm, K0, E0, nu)


def gamma2d_lp_from_norms(
    omega_h_l32: float, omega_l65: float, omega_l2: float, nu: float
) -> CriterionReport:
    """Lp-form criterion from precomputed vorticity norms; also the entry
    point for objects that expose norms without a plain field (rescalings)."""
    consts = constants()
    product = 0.25 * consts.c2**2 * omega_l65**2 * omega_l2**2
    exponent = (product - SMALL_DATA_COEFF * nu**4) / (consts.r2 * nu**3)
    rhs = consts.r1 * nu
    scaled = consts.c1 * omega_h_l32
    log_lhs = math.log(scaled) + exponent if scaled > 0 else -math.inf
    with np.errstate(over="ignore"):
        lhs = float(scaled * np.exp(exponent)) if scaled > 0 else 0.0
    return CriterionReport(
        "gamma2d-lp",
        lhs,
        rhs,
        log_lhs < math.log(rhs),
        {
            "omega_h_l32": omega_h_l32,
            "omega_l65": omega_l65,
            "omega_l2": omega_l2,
            "nu": nu,
            "KE_upper": product,
            "log_lhs": log_lhs,
        },
    )


def gamma2d_lp_check(omega: SpectralVectorField, nu: float) -> CriterionReport:
    """Lp-only form of the criterion, stated on the vorticity:
    C1 ||omega_h||_{L^3/2} exp((C2^2 ||omega||_{L^6/5}^2 ||omega||_{L^2}^2 / 4
    - 6912 pi^4 nu^4) / (R2 nu^3)) < R1 nu.

    Also certifies the derivation direction: the Hilbert-norm criterion's
    left side on u = biot_savart(omega) never exceeds this one.
    """
    if nu <= 0:
        raise ValueError(f"viscosity must be positive, got {nu}")
    omega_h = omega.copy()
    omega_h.coeffs[2] = 0.0
    report = gamma2d_lp_from_norms(
        lebesgue_norm(omega_h, 1.5),
        lebesgue_norm(omega, 1.2),
        lebesgue_norm(omega, 2.0),
        nu,
    )
    hilbert = gamma2d_check(biot_savart(omega), nu)
    if hilbert.inputs["log_lhs"] > report.inputs["log_lhs"] + 1e-9:
        raise AssertionError(
            "Hilbert-norm criterion left side exceeds its Lp majorant: "
            f"{hilbert.inputs['log_lhs']} > {report.inputs['log_lhs']}"
        )
    report.inputs["log_lhs_hilbert"] = hilbert.inputs["log_lhs"]
    return report


@dataclass
class Envelopes:
    """Enstrophy growth envelopes; None means the formula is inapplicable."""

    global_enstrophy_bound: float | None
    local_enstrophy_bound: float | None
    nu: float
    inapplicable_reason: str | None = None

    def horizontal_gronwall(
        self, omega_h0_norm: float, omega_l2_quartic_integral: float
    ) -> float:
        """Envelope for ||omega_h(t)||_{H^-1/2}^2 given int_0^t ||omega||_L2^4."""
        r2 = constants().r2
        return omega_h0_norm**2 * math.exp(
            omega_l2_quartic_integral / (r2 * self.nu**3)
        )


def envelopes(K0: float, E0: float, nu: float, t: float) -> Envelopes:
    """Global (small-data) and local-in-time enstrophy bounds at time t."""
    if nu <= 0:
        raise ValueError(f"viscosity must be positive, got {nu}")
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    reason = None
    threshold = SMALL_DATA_COEFF * nu**4
    if K0 * E0 < threshold:
        global_bound = E0 / (1.0 - K0 * E0 / threshold)
    else:
        global_bound = None
        reason = "K0*E0 at or above the small-data threshold"

    window = 1728 * math.pi**4 * nu**3
    if E0 == 0:
        local_bound = 0.0
    elif t < window / E0**2:
        local_bound = E0 / math.sqrt(1.0 - E0**2 * t / window)
    else:
        raise ValueError(
            f"t={t} is beyond the local validity window {window / E0**2}"
        )
    return Envelopes(global_bound, local_bound, nu, reason)


@dataclass(frozen=True)
class BlowupTimeBounds:
    upper_if_blowup: float  # valid only if the solution blows up at all
    lower: float


def blowup_time_bounds(K0: float, E0: float, nu: float) -> BlowupTimeBounds:
    if nu <= 0:
        raise ValueError(f"viscosity must be positive, got {nu}")
    upper = K0**2 / (13824 * math.pi**4 * nu**5)
    lower = math.inf if E0 == 0 else 1728 * math.pi**4 * nu**3 / E0**2
    return BlowupTimeBounds(upper, lower)


def critical_product_floor(K: float, E: float, nu: float) -> bool:
    """True iff K*E sits strictly below 6912 pi^4 nu^4, so no blow-up can
    originate from this state."""
    return K * E < SMALL_DATA_COEFF * nu**4


def iftimie_check(u: SpectralVectorField, nu: float, c: float) -> CriterionReport:
    """Two-dimensional-perturbation criterion
    ||P2d_perp(u)||_{H^1/2} exp(||P2d(u)||_{L2}^2 / (c nu^2)) < c nu.

    The constant c is not pinned by any computation here; the caller must
    supply one, and the report records it.
    """
    from .norms import p2d_split

    if nu <= 0:
        raise ValueError(f"viscosity must be positive, got {nu}")
    if c <= 0:
        raise ValueError(f"the criterion constant must be positive, got {c}")
    two_d, perp = p2d_split(u)
    perp_half = sobolev_norm(perp, 0.5)
    two_d_l2 = lebesgue_norm(two_d, 2.0)
    exponent = two_d_l2**2 / (c * nu**2)
    log_lhs = math.log(perp_half) + exponent if perp_half > 0 else -math.inf
    with np.errstate(over="ignore"):
        lhs = float(perp_half * np.exp(exponent)) if perp_half > 0 else 0.0
    rhs = c * nu
    return CriterionReport(
        "iftimie-perturbation",
        lhs,
        rhs,
        log_lhs < math.log(rhs),
        {
            "perp_hhalf": perp_half,
            "two_d_l2": two_d_l2,
            "nu": nu,
            "c": c,
            "log_lhs": log_lhs,
        },
        constants_version="user-supplied-c",
    )
