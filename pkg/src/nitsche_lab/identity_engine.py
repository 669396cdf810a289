"""Two-sided verification of the weighted annulus integral identity.

For any harmonic coefficient table h on A(1, R) and any 1 < sigma <= R,

    2 sigma^2/(sigma^2+1) U(sigma) - (sigma^2+1)/2 U(1)
      - (sigma^2-1) U'(1)/2 - (sigma^2-1) log(sigma) (W - U(1))
    = (1/pi) II w1(rho) |G1|^2 + (1/pi) II w2(rho) |G2|^2

where W is the winding form, the double integrals run over A(1, sigma),

    w1 = (sigma^2-1) log(sigma/rho) + (sigma^2-rho^2)/rho^2
    w2 = (sigma^2-rho^2) - (sigma^2-1) log(sigma/rho)
    G1 = (rho h_rho - i h_theta)/(1+rho^2) - 2 rho^2 h/(1+rho^2)^2
    G2 = (rho h_rho + i h_theta)/(1+rho^2) + 2 h/(1+rho^2)^2.

The left side uses closed-form circle sums; the right side is quadrature:
two independent routes to one number.  w1 > 0 always, while w2 >= 0 exactly
when sigma <= e, which is where the thin-annulus lower bound comes from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _quad
from .annulus_core import AnnulusMap, AnnulusDomainError, evaluate
from .circle_means import _mode_sums
from .quadratic_forms import circle_functionals

__all__ = [
    "IdentityReport",
    "ThinAnnulusResult",
    "g_substitute",
    "weight_first",
    "weight_second",
    "identity_lhs",
    "identity_rhs",
    "verify_identity",
    "thin_annulus_bound",
]


def g_substitute(m: AnnulusMap, z) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(g, g_z, g_zbar) for the factorization h = (z + 1/zbar)/2 * g.

    The Wirtinger derivatives are computed by the product rule on
    g = 2 zbar h / (|z|^2 + 1); the polar closed forms used by the double
    integrals are a separate route (see _g_derivative_moduli).
    """
    z_arr = np.asarray(z, dtype=complex)
    jet = evaluate(m, z_arr)
    s = np.abs(z_arr) ** 2 + 1.0
    zb = np.conj(z_arr)
    g = 2.0 * zb * jet.value / s
    g_z = 2.0 * zb * jet.d_z / s - 2.0 * zb * zb * jet.value / s**2
    g_zbar = (
        2.0 * jet.value / s
        + 2.0 * zb * jet.d_zbar / s
        - 2.0 * np.abs(z_arr) ** 2 * jet.value / s**2
    )
    return g, g_z, g_zbar


def _g_derivative_moduli(jet, rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(|g_z|^2, |g_zbar|^2) from the polar first derivatives of h only."""
    s = rho * rho + 1.0
    G1 = (rho * jet.d_rho - 1j * jet.d_theta) / s - 2.0 * rho * rho * jet.value / s**2
    G2 = (rho * jet.d_rho + 1j * jet.d_theta) / s + 2.0 * jet.value / s**2
    return np.abs(G1) ** 2, np.abs(G2) ** 2


def weight_first(sigma: float, rho) -> np.ndarray:
    """(sigma^2-1) log(sigma/rho) + (sigma^2-rho^2)/rho^2, positive on (1, sigma)."""
    rho = np.asarray(rho, dtype=float)
    return (sigma * sigma - 1.0) * np.log(sigma / rho) + (
        sigma * sigma - rho * rho
    ) / rho**2


def weight_second(sigma: float, rho) -> np.ndarray:
    """(sigma^2-rho^2) - (sigma^2-1) log(sigma/rho), nonnegative iff sigma <= e."""
    rho = np.asarray(rho, dtype=float)
    return (sigma * sigma - rho * rho) - (sigma * sigma - 1.0) * np.log(sigma / rho)


def identity_lhs(m: AnnulusMap, R_eval: float) -> tuple[float, tuple[float, float, float, float]]:
    """Left side at sigma = R_eval from closed-form circle sums.

    Term breakdown: (outer mean term, inner mean term, half-derivative term,
    log-weighted winding term).  The third term is (sigma^2-1) U'(1)/2, the
    derivative of the squared means; when |h| = 1 on the unit circle it is
    the literal mean of |h| d|h|/drho.
    """
    if not (1.0 < R_eval <= m.R):
        raise AnnulusDomainError(f"R_eval={R_eval} outside (1, {m.R}]")
    s2 = R_eval * R_eval
    U_R, _, _ = _mode_sums(m, R_eval)
    U_1, Ud_1, _ = _mode_sums(m, 1.0)
    W = circle_functionals(m, 1.0).winding_form
    t1 = 2.0 * s2 / (s2 + 1.0) * float(U_R)
    t2 = -(s2 + 1.0) / 2.0 * float(U_1)
    t3 = -(s2 - 1.0) * float(Ud_1) / 2.0
    t4 = -(s2 - 1.0) * math.log(R_eval) * (W - float(U_1))
    return t1 + t2 + t3 + t4, (t1, t2, t3, t4)


def identity_rhs(
    m: AnnulusMap,
    R_eval: float,
    M: int | None = None,
    rtol: float = 1e-11,
) -> tuple[float, tuple[float, float]]:
    """Right side at sigma = R_eval: two weighted double integrals over A(1, sigma).

    Angular direction by M-point trapezoid (spectrally exact for M beyond the
    table degree), radial direction by adaptive composite Gauss-Legendre.
    """
    if not (1.0 < R_eval <= m.R):
        raise AnnulusDomainError(f"R_eval={R_eval} outside (1, {m.R}]")
    M = M or max(4 * m.order + 16, 32)
    theta = _quad.theta_grid(M)
    eith = np.exp(1j * theta)

    def ring_means(r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        z = r[:, None] * eith[None, :]
        jet = evaluate(m, z)
        gz2, gzb2 = _g_derivative_moduli(jet, np.abs(z))
        return np.mean(gz2, axis=1), np.mean(gzb2, axis=1)

    def f1(r: np.ndarray) -> np.ndarray:
        mz, _ = ring_means(r)
        return 2.0 * r * weight_first(R_eval, r) * mz

    def f2(r: np.ndarray) -> np.ndarray:
        _, mzb = ring_means(r)
        return 2.0 * r * weight_second(R_eval, r) * mzb

    int1 = _quad.radial_integral(f1, 1.0, R_eval, rtol=rtol)
    int2 = _quad.radial_integral(f2, 1.0, R_eval, rtol=rtol)
    return int1 + int2, (int1, int2)


@dataclass(frozen=True)
class IdentityReport:
    """Both sides of the identity at one radius, with full breakdown."""

    R_eval: float
    lhs: float
    rhs: float
    residual: float
    quad_orders: tuple[int, int]
    lhs_terms: tuple[float, float, float, float]
    rhs_integrals: tuple[float, float]


def verify_identity(
    m: AnnulusMap, R_eval: float, M: int | None = None, rtol: float = 1e-11
) -> IdentityReport:
    M_used = M or max(4 * m.order + 16, 32)
    lhs, terms = identity_lhs(m, R_eval)
    rhs, ints = identity_rhs(m, R_eval, M=M_used, rtol=rtol)
    return IdentityReport(
        R_eval=R_eval,
        lhs=lhs,
        rhs=rhs,
        residual=lhs - rhs,
        quad_orders=(M_used, 16),
        lhs_terms=terms,
        rhs_integrals=ints,
    )


@dataclass(frozen=True)
class ThinAnnulusResult:
    """Margin sqrt(U(sigma)) - (sigma + 1/sigma)/2 with precondition flags.

    The margin is guaranteed nonnegative only when every flag is clear:
    sigma <= e (second weight nonnegative), unimodular degree-1 inner trace,
    and U'(1) >= 0.  Out-of-regime values are still reported so the failure
    modes can be charted.
    """

    sigma: float
    margin: float
    sigma_above_e: bool
    trace_not_unimodular: bool
    winding_not_one: bool
    negative_initial_slope: bool

    @property
    def preconditions_ok(self) -> bool:
        return not (
            self.sigma_above_e
            or self.trace_not_unimodular
            or self.winding_not_one
            or self.negative_initial_slope
        )


def thin_annulus_bound(m: AnnulusMap, sigma: float, M: int = 1024) -> ThinAnnulusResult:
    if not (1.0 < sigma <= m.R):
        raise AnnulusDomainError(f"sigma={sigma} outside (1, {m.R}]")
    U_s, _, _ = _mode_sums(m, sigma)
    _, Ud_1, _ = _mode_sums(m, 1.0)
    margin = math.sqrt(float(U_s)) - 0.5 * (sigma + 1.0 / sigma)

    theta = _quad.theta_grid(max(M, 4 * m.order + 8))
    vals = evaluate(m, np.exp(1j * theta)).value
    mods = np.abs(vals)
    unimodular = bool(np.max(np.abs(mods - 1.0)) <= 1e-9)
    winding = 0
    if np.min(mods) > 0.0:
        args = np.angle(np.append(vals, vals[0]))
        total = float(np.sum(np.mod(np.diff(args) + np.pi, 2.0 * np.pi) - np.pi))
        winding = int(round(total / (2.0 * math.pi)))
    return ThinAnnulusResult(
        sigma=sigma,
        margin=margin,
        sigma_above_e=sigma > math.e + 1e-15,
        trace_not_unimodular=not unimodular,
        winding_not_one=winding != 1,
        negative_initial_slope=float(Ud_1) < -1e-12,
    )
