"""Harmonic maps of the normalized annulus A(1, R) as finite coefficient tables.

A map is stored as the finite sum

    h(z) = a0 * log|z| + b0 + sum_{n != 0} (a_n z^n + b_n conj(z)^{-n})

so every circle average of |h|^2 reduces to an exact finite sum.  All types
are immutable; every function here is pure.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, TextIO

import numpy as np

__all__ = [
    "AnnulusMap",
    "PolarJet",
    "AnnulusDomainError",
    "CoefficientRangeError",
    "AhmFormatError",
    "evaluate",
    "solve_dirichlet",
    "trace",
    "conformal_modulus",
    "is_conformal",
    "rotate",
    "random_annulus_map",
    "read_ahm",
    "write_ahm",
]

# R^n overflows float64 near n*log R ~ 709; stay well below.
MAX_N_LOG_R = 650.0


class AnnulusDomainError(ValueError):
    """Point outside the closed annulus 1 <= |z| <= R."""


class CoefficientRangeError(ValueError):
    """Coefficient table outside the supported numeric range."""


class AhmFormatError(ValueError):
    """Malformed AHM coefficient file."""


@dataclass(frozen=True)
class AnnulusMap:
    """Finite Fourier-Laurent coefficient table on A(1, R).

    ``terms`` maps a nonzero integer n to the pair (a_n, b_n); ``log_a0``
    and ``log_b0`` are the coefficients of log|z| and of the constant term.
    """

    R: float
    log_a0: complex = 0.0
    log_b0: complex = 0.0
    terms: Mapping[int, tuple[complex, complex]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not (self.R > 1.0):
            raise ValueError(f"outer radius must exceed 1, got {self.R}")
        clean: dict[int, tuple[complex, complex]] = {}
        for n, (a, b) in sorted(self.terms.items()):
            n = int(n)
            if n == 0:
                raise ValueError("index 0 belongs to the log/constant pair")
            a, b = complex(a), complex(b)
            if not (cmath.isfinite(a) and cmath.isfinite(b)):
                raise CoefficientRangeError(f"non-finite coefficient at n={n}")
            clean[n] = (a, b)
        for c in (self.log_a0, self.log_b0):
            if not cmath.isfinite(complex(c)):
                raise CoefficientRangeError("non-finite log/constant coefficient")
        if clean:
            n_max = max(abs(n) for n in clean)
            if n_max * math.log(self.R) > MAX_N_LOG_R:
                raise CoefficientRangeError(
                    f"N*log(R) = {n_max * math.log(self.R):.1f} exceeds "
                    f"the overflow cap {MAX_N_LOG_R}"
                )
        object.__setattr__(self, "log_a0", complex(self.log_a0))
        object.__setattr__(self, "log_b0", complex(self.log_b0))
        object.__setattr__(self, "terms", MappingProxyType(clean))
        ns = np.array(sorted(clean), dtype=np.int64)
        object.__setattr__(self, "_ns", ns)
        object.__setattr__(
            self, "_a", np.array([clean[n][0] for n in ns], dtype=complex)
        )
        object.__setattr__(
            self, "_b", np.array([clean[n][1] for n in ns], dtype=complex)
        )

    # -- convenience views -------------------------------------------------

    @property
    def order(self) -> int:
        """Truncation order N = max |n| over stored terms (0 if none)."""
        ns = self._ns  # type: ignore[attr-defined]
        return int(np.max(np.abs(ns))) if ns.size else 0

    def mode_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(n, a_n, b_n) as parallel arrays, n sorted ascending."""
        return self._ns, self._a, self._b  # type: ignore[attr-defined]

    def coefficient_scale(self) -> float:
        """l1 norm of all coefficients, used for relative tolerances."""
        _, a, b = self.mode_arrays()
        return float(
            np.sum(np.abs(a)) + np.sum(np.abs(b)) + abs(self.log_a0) + abs(self.log_b0)
        )

    @classmethod
    def from_inner_radius(
        cls,
        r: float,
        R: float,
        log_a0: complex = 0.0,
        log_b0: complex = 0.0,
        terms: Mapping[int, tuple[complex, complex]] | None = None,
    ) -> "AnnulusMap":
        """Rescale a table given on A(r, R) to the normalized A(1, R/r).

        Substitutes z -> r*z: a_n picks up r^n, b_n picks up r^{-n}, and the
        log term sheds a0*log(r) into the constant.
        """
        if not (0 < r < R):
            raise ValueError("need 0 < r < R")
        new_terms = {
            n: (a * r**n, b * r ** (-n)) for n, (a, b) in (terms or {}).items()
        }
        return cls(
            R=R / r,
            log_a0=log_a0,
            log_b0=log_b0 + log_a0 * math.log(r),
            terms=new_terms,
        )


@dataclass(frozen=True)
class PolarJet:
    """Value and first derivatives of a harmonic map at one point (or grid)."""

    value: complex
    d_rho: complex
    d_theta: complex
    d_z: complex
    d_zbar: complex
    jacobian: float
    grad_norm_sq: float


def _check_domain(m: AnnulusMap, rho: np.ndarray) -> None:
    slack = 1e-12 * max(1.0, m.R)
    if np.any(rho < 1.0 - slack) or np.any(rho > m.R + slack):
        raise AnnulusDomainError(
            f"|z| outside [1, {m.R}]: range [{rho.min()}, {rho.max()}]"
        )


def evaluate(m: AnnulusMap, z, check_domain: bool = True) -> PolarJet:
    """Evaluate h and its polar/Wirtinger derivatives at z (scalar or array).

    Closed-form termwise differentiation; exact up to rounding.
    """
    z_arr = np.asarray(z, dtype=complex)
    scalar = z_arr.ndim == 0
    rho = np.abs(z_arr)
    if check_domain:
        _check_domain(m, np.atleast_1d(rho))
    theta = np.angle(z_arr)
    ns, a, b = m.mode_arrays()

    value = m.log_a0 * np.log(rho) + m.log_b0
    d_rho = m.log_a0 / rho
    d_theta = np.zeros_like(z_arr)
    if ns.size:
        # shape (k, ...) broadcasting modes against the point grid
        rp = rho[None, ...] ** ns.reshape((-1,) + (1,) * rho.ndim)
        rm = rho[None, ...] ** (-ns.reshape((-1,) + (1,) * rho.ndim))
        ph = np.exp(1j * np.multiply.outer(ns, theta))
        radial = a.reshape(rp.shape[:1] + (1,) * rho.ndim) * rp + b.reshape(
            rp.shape[:1] + (1,) * rho.ndim
        ) * rm
        nsb = ns.reshape(rp.shape[:1] + (1,) * rho.ndim)
        ab = a.reshape(nsb.shape)
        bb = b.reshape(nsb.shape)
        value = value + np.sum(radial * ph, axis=0)
        d_rho = d_rho + np.sum(nsb * (ab * rp - bb * rm) / rho * ph, axis=0)
        d_theta = d_theta + np.sum(1j * nsb * radial * ph, axis=0)

    eit = np.exp(1j * theta)
    d_z = 0.5 * (d_rho - 1j * d_theta / rho) / eit
    d_zbar = 0.5 * (d_rho + 1j * d_theta / rho) * eit
    jac = np.abs(d_z) ** 2 - np.abs(d_zbar) ** 2
    grad = 2.0 * (np.abs(d_z) ** 2 + np.abs(d_zbar) ** 2)

    if scalar:
        return PolarJet(
            complex(value),
            complex(d_rho),
            complex(d_theta),
            complex(d_z),
            complex(d_zbar),
            float(jac),
            float(grad),
        )
    return PolarJet(value, d_rho, d_theta, d_z, d_zbar, jac, grad)


def trace(m: AnnulusMap, rho: float) -> dict[int, complex]:
    """Fourier coefficients of theta -> h(rho e^{i theta})."""
    if not (1.0 <= rho <= m.R):
        raise AnnulusDomainError(f"rho={rho} outside [1, {m.R}]")
    out: dict[int, complex] = {0: m.log_a0 * math.log(rho) + m.log_b0}
    for n, (a, b) in m.terms.items():
        out[n] = a * rho**n + b * rho ** (-n)
    return out


def solve_dirichlet(
    inner: Mapping[int, complex], outer: Mapping[int, complex], R: float
) -> AnnulusMap:
    """Two-circle Dirichlet solve: boundary Fourier data -> coefficient table.

    Per mode n != 0 inverts  a_n + b_n = c_in,  a_n R^n + b_n R^{-n} = c_out;
    the n = 0 pair gives b0 = c0_in and a0 = (c0_out - c0_in)/log R.  Modes
    are solved in scaled unknowns to avoid cancellation for large n*log R.
    """
    if R <= 1.0:
        raise ValueError(f"outer radius must exceed 1, got {R}")
    if set(inner) != set(outer):
        raise ValueError("inner and outer data must share one index range")
    log_a0 = 0.0 + 0.0j
    log_b0 = 0.0 + 0.0j
    terms: dict[int, tuple[complex, complex]] = {}
    for n in inner:
        cin, cout = complex(inner[n]), complex(outer[n])
        if n == 0:
            log_b0 = cin
            log_a0 = (cout - cin) / math.log(R)
            continue
        t = R ** (-abs(n))  # always <= 1: no overflow, no cancellation
        if n > 0:
            a = (cout * t - cin * t * t) / (1.0 - t * t)
            b = (cin - cout * t) / (1.0 - t * t)
        else:
            b = (cout * t - cin * t * t) / (1.0 - t * t)
            a = (cin - cout * t) / (1.0 - t * t)
        terms[n] = (a, b)
    return AnnulusMap(R=R, log_a0=log_a0, log_b0=log_b0, terms=terms)


def conformal_modulus(m: AnnulusMap) -> float:
    """Conformal modulus of the domain annulus, log R."""
    return math.log(m.R)


def is_conformal(m: AnnulusMap, tol: float = 1e-12) -> bool:
    """True iff the table is holomorphic: a0 = 0 and every b_n = 0.

    The comparison is relative to max |a_n|; the all-zero map is reported
    as conformal (degenerate constant map).
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    _, a, b = m.mode_arrays()
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    anti = max(
        abs(m.log_a0), float(np.max(np.abs(b))) if b.size else 0.0
    )
    return anti <= tol * scale


def rotate(m: AnnulusMap, alpha: float) -> AnnulusMap:
    """Post-compose with the rotation e^{i alpha}."""
    w = cmath.exp(1j * alpha)
    return AnnulusMap(
        R=m.R,
        log_a0=w * m.log_a0,
        log_b0=w * m.log_b0,
        terms={n: (w * a, w * b) for n, (a, b) in m.terms.items()},
    )


def random_annulus_map(
    rng: np.random.Generator,
    n_max: int = 8,
    R: float = 2.0,
    decay: float = 2.0,
    log_scale: float = 0.0,
) -> AnnulusMap:
    """Seeded smooth test map: a_n, b_n complex Gaussian scaled by |n|^-decay."""
    terms: dict[int, tuple[complex, complex]] = {}
    for n in range(-n_max, n_max + 1):
        if n == 0:
            continue
        s = abs(n) ** (-decay)
        a = s * complex(rng.standard_normal(), rng.standard_normal())
        b = s * complex(rng.standard_normal(), rng.standard_normal())
        terms[n] = (a, b)
    a0 = log_scale * complex(rng.standard_normal(), rng.standard_normal())
    b0 = log_scale * complex(rng.standard_normal(), rng.standard_normal())
    return AnnulusMap(R=R, log_a0=a0, log_b0=b0, terms=terms)


# -- AHM text format -------------------------------------------------------
#
#   AHM 1
#   R <decimal>
#   LOG <a0_re> <a0_im> <b0_re> <b0_im>
#   C <n> <an_re> <an_im> <bn_re> <bn_im>     (zero or more, distinct n != 0)
#
# '#' starts a comment; numbers round-trip 17 significant digits.


def write_ahm(m: AnnulusMap, fh: TextIO) -> None:
    fh.write("AHM 1\n")
    fh.write(f"R {m.R:.17g}\n")
    fh.write(
        f"LOG {m.log_a0.real:.17g} {m.log_a0.imag:.17g} "
        f"{m.log_b0.real:.17g} {m.log_b0.imag:.17g}\n"
    )
    for n in sorted(m.terms):
        a, b = m.terms[n]
        fh.write(
            f"C {n} {a.real:.17g} {a.imag:.17g} {b.real:.17g} {b.imag:.17g}\n"
        )


def read_ahm(fh: TextIO) -> AnnulusMap:
    lines: list[list[str]] = []
    for raw in fh:
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append(body.split())
    if not lines or lines[0] != ["AHM", "1"]:
        raise AhmFormatError("missing 'AHM 1' header")
    if len(lines) < 3 or lines[1][0] != "R" or lines[2][0] != "LOG":
        raise AhmFormatError("expected 'R' then 'LOG' lines after header")
    try:
        R = float(lines[1][1])
        a0 = complex(float(lines[2][1]), float(lines[2][2]))
        b0 = complex(float(lines[2][3]), float(lines[2][4]))
        terms: dict[int, tuple[complex, complex]] = {}
        for fields in lines[3:]:
            if fields[0] != "C" or len(fields) != 6:
                raise AhmFormatError(f"bad coefficient line: {' '.join(fields)}")
            n = int(fields[1])
            if n == 0 or n in terms:
                raise AhmFormatError(f"index {n} repeated or zero")
            terms[n] = (
                complex(float(fields[2]), float(fields[3])),
                complex(float(fields[4]), float(fields[5])),
            )
    except (IndexError, ValueError) as exc:
        if isinstance(exc, AhmFormatError):
            raise
        raise AhmFormatError(str(exc)) from exc
    return AnnulusMap(R=R, log_a0=a0, log_b0=b0, terms=terms)
