"""Command-line front end: map construction, sweeps, and batch verification.

Subcommands: means, verify, construct, minsurf, identity, qforms, chain,
example51.  Exit codes: 0 success, 1 failed verification check, 2 argument
or file parse error, 3 domain error, 4 existence bound violated (deficit
printed), 5 lift rejected.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from . import _quad
from .annulus_core import (
    AhmFormatError,
    AnnulusDomainError,
    AnnulusMap,
    evaluate,
    random_annulus_map,
    read_ahm,
    write_ahm,
)
from .circle_means import _mode_sums, energy_green, energy_quadrature
from .disk_maps import (
    jacobian_energy_chain,
    lemma_functional,
    poisson_extend,
    psi_region_check,
    random_boundary_homeo,
)
from .identity_engine import verify_identity
from .minimal_surface import (
    BranchError,
    NoLiftError,
    catenoid_modulus,
    lift,
    modulus_bound_check,
)
from .nitsche_family import (
    NitscheParams,
    NoHarmonicHomeomorphism,
    check_initial_conditions,
    construct_harmonic_homeo,
    energy_minimizer,
    example_51_map,
    nitsche_map,
)
from .quadratic_forms import (
    SQRT7,
    positivity_scan,
    prop52_certificate,
    qform_coefficients,
    qform_decomposition,
)

__all__ = ["RunConfig", "main"]

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_DEFICIT = 4
EXIT_NO_LIFT = 5


@dataclass(frozen=True)
class RunConfig:
    """Parsed invocation; the seed fully determines any randomized run."""

    command: str
    map_path: str | None
    out_path: str | None
    R: float | None
    R_star: float | None
    a: float | None
    lam: float | None
    v: float | None
    rho_grid: tuple[float, float, int] | None
    quad: tuple[int, int]
    tol: float
    seed: int
    example51: bool


def _parse_rho_grid(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected lo:hi:steps")
    lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    if steps < 2 or hi <= lo:
        raise argparse.ArgumentTypeError("need hi > lo and steps >= 2")
    return lo, hi, steps


def _parse_quad(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected M,K")
    return int(parts[0]), int(parts[1])


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="nitsche-lab",
        description="spectral toolkit for harmonic annulus maps",
    )
    p.add_argument("command", choices=[
        "means", "verify", "construct", "minsurf",
        "identity", "qforms", "chain", "example51",
    ])
    p.add_argument("--map", dest="map_path", help="AHM coefficient file")
    p.add_argument("--out", dest="out_path", help="output file (CSV or AHM)")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rho-grid", type=_parse_rho_grid, default=None,
                   metavar="LO:HI:STEPS")
    p.add_argument("--quad", type=_parse_quad, default=(256, 16), metavar="M,K")
    p.add_argument("--R", type=float, default=None)
    p.add_argument("--Rstar", dest="R_star", type=float, default=None)
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--lam", type=float, default=None)
    p.add_argument("--nitsche-v", dest="v", type=float, default=None)
    p.add_argument("--example51", action="store_true")
    return p


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        map_path=args.map_path,
        out_path=args.out_path,
        R=args.R,
        R_star=args.R_star,
        a=args.a,
        lam=args.lam,
        v=args.v,
        rho_grid=args.rho_grid,
        quad=args.quad,
        tol=args.tol,
        seed=args.seed,
        example51=args.example51,
    )


def _load_map(cfg: RunConfig) -> AnnulusMap:
    if cfg.map_path:
        with open(cfg.map_path, "r", encoding="utf-8") as fh:
            return read_ahm(fh)
    if cfg.example51:
        if cfg.a is None:
            raise AhmFormatError("--example51 requires --a")
        return example_51_map(cfg.a, cfg.lam, R=cfg.R or 1000.0)
    if cfg.v is not None:
        return nitsche_map(NitscheParams(v=cfg.v, R=cfg.R or 2.0))
    raise AhmFormatError("no map given: use --map, --nitsche-v, or --example51")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_text(cfg: RunConfig, text: str) -> None:
    """Write to --out atomically, or to stdout when no path is given."""
    if cfg.out_path is None:
        sys.stdout.write(text)
        return
    d = os.path.dirname(os.path.abspath(cfg.out_path))
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, cfg.out_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv(header: list[str], rows: list[list[float]]) -> str:
    lines = [",".join(header)]
    lines += [",".join(_fmt(x) for x in row) for row in rows]
    return "\n".join(lines) + "\n"


def _rho_values(cfg: RunConfig, m: AnnulusMap) -> np.ndarray:
    if cfg.rho_grid is not None:
        lo, hi, steps = cfg.rho_grid
    else:
        lo, hi, steps = 1.0, 0.995 * m.R, 50
    if lo < 1.0 or hi >= m.R:
        raise AnnulusDomainError(f"rho grid [{lo}, {hi}] outside [1, {m.R})")
    return np.linspace(lo, hi, steps)


def _operator_L_any(m: AnnulusMap, rho: float, M: int) -> tuple[float, float]:
    """(L1, L3) valid at rho = 1 too, unlike the interior-only library call."""
    U, Ud, Udd = _mode_sums(m, rho)
    s = rho * rho + 1.0
    L1 = float(Udd + (3.0 - rho * rho) / (rho * s) * Ud - 8.0 * U / s**2)
    theta = _quad.theta_grid(M)
    jet = evaluate(m, rho * np.exp(1j * theta))
    habs2_rho = 2.0 * (np.conj(jet.value) * jet.d_rho).real
    integrand = (
        2.0 * np.abs(jet.d_rho) ** 2
        + 2.0 * np.abs(jet.d_theta) ** 2 / rho**2
        - 2.0 * (rho * rho - 1.0) / (rho * s) * habs2_rho
        - 8.0 * np.abs(jet.value) ** 2 / s**2
    )
    return L1, float(np.mean(integrand))


def cmd_means(cfg: RunConfig) -> int:
    m = _load_map(cfg)
    rhos = _rho_values(cfg, m)
    M = max(cfg.quad[0], 4 * m.order + 8)
    rows = []
    for rho in rhos:
        U, Ud, Udd = _mode_sums(m, float(rho))
        L1, L3 = _operator_L_any(m, float(rho), M)
        floor = 0.5 * (rho + 1.0 / rho)
        rows.append([
            float(rho), float(U), float(Ud), float(Udd),
            math.sqrt(float(U)), L1, L3, float(floor),
            math.sqrt(float(U)) - float(floor),
        ])
    _write_text(cfg, _csv(
        ["rho", "U", "U_dot", "U_ddot", "mean_radius",
         "L1", "L3", "nitsche_floor", "margin"], rows))
    return EXIT_OK


def cmd_identity(cfg: RunConfig) -> int:
    m = _load_map(cfg)
    if cfg.rho_grid is not None:
        lo, hi, steps = cfg.rho_grid
        targets = np.linspace(max(lo, 1.0 + 1e-6), min(hi, m.R), steps)
    else:
        targets = np.linspace(1.0 + (m.R - 1.0) / 10.0, m.R, 10)
    rows = []
    for sigma in targets:
        rep = verify_identity(m, float(sigma), M=max(cfg.quad[0], 4 * m.order + 16))
        rows.append([
            rep.R_eval, rep.lhs, rep.rhs, rep.residual,
            *rep.lhs_terms, *rep.rhs_integrals,
        ])
    _write_text(cfg, _csv(
        ["R_eval", "lhs", "rhs", "residual",
         "term1", "term2", "term3", "term4", "int1", "int2"], rows))
    return EXIT_OK


def cmd_qforms(cfg: RunConfig) -> int:
    if cfg.rho_grid is not None:
        lo, hi, steps = cfg.rho_grid
    else:
        lo, hi, steps = SQRT7, 10.0, 30
    rows = []
    for rho in np.linspace(lo, hi, steps):
        for n in range(-10, 11):
            q = qform_coefficients(n, float(rho))
            rows.append([float(n), q.rho, q.A, q.B, q.C, q.discriminant])
    _write_text(cfg, _csv(["n", "rho", "A", "B", "C", "discriminant"], rows))
    return EXIT_OK


def cmd_construct(cfg: RunConfig) -> int:
    if cfg.R is None or cfg.R_star is None:
        print("construct requires --R and --Rstar", file=sys.stderr)
        return EXIT_PARSE
    try:
        m = construct_harmonic_homeo(cfg.R, cfg.R_star)
    except NoHarmonicHomeomorphism as exc:
        print(f"no harmonic homeomorphism: deficit {_fmt(exc.deficit)}")
        return EXIT_DEFICIT
    a, b = m.terms[1]
    v = 2.0 * a.real - 1.0
    margin = cfg.R_star - 0.5 * (cfg.R + 1.0 / cfg.R)
    print(f"v {_fmt(v)}")
    print(f"a1 {_fmt(a.real)}")
    print(f"b1 {_fmt(b.real)}")
    print(f"margin {_fmt(margin)}")
    if margin == 0.0:
        print("equality: rigid family")
    if cfg.out_path:
        import io

        buf = io.StringIO()
        write_ahm(m, buf)
        _write_text(cfg, buf.getvalue())
    return EXIT_OK


def cmd_minsurf(cfg: RunConfig) -> int:
    m = _load_map(cfg)
    try:
        res = lift(m)
    except (NoLiftError, BranchError) as exc:
        print(f"lift rejected: {exc}", file=sys.stderr)
        return EXIT_NO_LIFT
    rows = []
    for i, rho in enumerate(res.rho_grid):
        jet = evaluate(m, rho * np.exp(1j * res.theta_grid))
        for j, theta in enumerate(res.theta_grid):
            rows.append([
                float(rho), float(theta),
                float(jet.value[j].real), float(jet.value[j].imag),
                float(res.w[i, j]), res.conformality_residual,
            ])
    U_R, _, _ = _mode_sums(m, m.R)
    U_1, _, _ = _mode_sums(m, 1.0)
    ratio = math.sqrt(float(U_R) / float(U_1))
    holds, slack = modulus_bound_check(math.log(m.R), ratio)
    print(f"modulus {_fmt(math.log(m.R))} catenoid_cap "
          f"{_fmt(catenoid_modulus(ratio))} slack {_fmt(slack)} "
          f"{'OK' if holds else 'VIOLATED'}")
    _write_text(cfg, _csv(["rho", "theta", "u", "v", "w", "residual"], rows))
    return EXIT_OK


def cmd_chain(cfg: RunConfig) -> int:
    rng = np.random.default_rng(cfg.seed)
    count = max(cfg.quad[1], 1)
    rows = []
    for k in range(count):
        bdry = random_boundary_homeo(rng)
        f = poisson_extend(bdry, N=96)
        res = jacobian_energy_chain(f)
        rows.append([
            float(k), res.boundary_abs_det, res.disk_energy,
            res.twice_area, res.signed_area,
            1.0 if res.chain_holds else 0.0,
        ])
    _write_text(cfg, _csv(
        ["index", "boundary_abs_det", "disk_energy",
         "twice_area", "signed_area", "chain_holds"], rows))
    return EXIT_OK


def cmd_example51(cfg: RunConfig) -> int:
    a = cfg.a if cfg.a is not None else 0.5
    m = example_51_map(a, cfg.lam, R=cfg.R or 1000.0)
    cond = check_initial_conditions(m)
    print(f"I {cond.I} II {cond.II} III {cond.III}")
    print(f"mean_jacobian {_fmt(cond.mean_jacobian_at_1)}")
    if cfg.rho_grid is not None:
        lo, hi, steps = cfg.rho_grid
    else:
        lo, hi, steps = 1.0, 20.0, 100
    rows = []
    for sigma in np.linspace(lo, hi, steps):
        U, _, _ = _mode_sums(m, float(sigma))
        rows.append([
            float(sigma),
            math.sqrt(float(U)) - 0.5 * (float(sigma) + 1.0 / float(sigma)),
        ])
    _write_text(cfg, _csv(["sigma", "margin"], rows))
    return EXIT_OK


def _verify_checks(cfg: RunConfig) -> list[tuple[str, float, float, bool]]:
    """The registered batch checks: (name, value, threshold, passed).

    Values are defined so that a check passes iff value <= threshold.
    """
    rng = np.random.default_rng(cfg.seed)
    checks: list[tuple[str, float, float, bool]] = []

    def add(name: str, value: float, threshold: float) -> None:
        checks.append((name, value, threshold, value <= threshold))

    crit = nitsche_map(NitscheParams(v=0.0, R=2.0))
    rhos = np.linspace(1.0, 1.99, 50)
    U, _, _ = _mode_sums(crit, rhos)
    add("critical_equality", float(np.max(np.abs(
        np.sqrt(U) - 0.5 * (rhos + 1.0 / rhos)))), 1e-12)

    for name, m in (
        ("identity_constant", AnnulusMap(R=2.0, log_b0=1.0)),
        ("identity_linear", AnnulusMap(R=2.0, terms={1: (1.0, 0.0)})),
    ):
        rep = verify_identity(m, 2.0)
        add(name, abs(rep.residual) / max(1.0, abs(rep.lhs)), 1e-8)
    worst = 0.0
    for _ in range(20):
        m = random_annulus_map(rng, n_max=6, R=2.5)
        sigma = float(rng.uniform(1.1, 2.5))
        rep = verify_identity(m, sigma)
        worst = max(worst, abs(rep.residual) / max(1.0, abs(rep.lhs)))
    add("identity_random", worst, 1e-8)

    scan = positivity_scan(rho_grid=np.arange(SQRT7, 25.0, 0.1))
    add("qform_positivity", -min(scan.min_A, scan.min_B, scan.min_discriminant),
        0.0)
    worst = 0.0
    floor = 0.0
    for _ in range(50):
        m = random_annulus_map(rng, n_max=6, R=30.0, decay=3.0, log_scale=0.3)
        rho = float(rng.uniform(SQRT7, 0.99 * m.R))
        cert = prop52_certificate(m, rho)
        dec = qform_decomposition(m, rho)
        worst = max(worst, abs(cert.value - dec) / max(1.0, abs(cert.value)))
        floor = min(floor, cert.value)
    add("certificate_decomposition", worst, 1e-12)
    add("certificate_nonnegative", -floor, 1e-10)

    worst_chain = 0.0
    worst_area = 0.0
    for _ in range(10):
        bdry = random_boundary_homeo(rng)
        f = poisson_extend(bdry, N=96)
        res = jacobian_energy_chain(f)
        worst_chain = max(
            worst_chain,
            res.disk_energy - res.boundary_abs_det,
            res.twice_area - res.disk_energy,
        )
        worst_area = max(worst_area, abs(res.signed_area - math.pi))
    add("chain_order", worst_chain, 1e-8)
    add("chain_area", worst_area, 1e-8)

    worst = 0.0
    for _ in range(10):
        worst = min(worst, lemma_functional(random_boundary_homeo(rng), M=256))
    add("lemma_functional_nonnegative", -worst, 1e-9)

    psi_rep = psi_region_check(resolution=300)
    add("psi_region", -psi_rep.min_value, 1e-12)

    m51 = example_51_map(0.5, 2.0)
    cond = check_initial_conditions(m51)
    add("example51_conditions",
        0.0 if (cond.I and cond.II and not cond.III) else 1.0, 0.0)
    # mean Jacobian of the log example: -(1 + a^2)/(1 - a^2), lambda-free
    add("example51_jacobian",
        abs(cond.mean_jacobian_at_1 + 5.0 / 3.0), 1e-9)

    res = lift(crit)
    add("catenoid_lift", float(np.max(np.abs(
        res.w - np.log(res.rho_grid)[:, None]))), 1e-10)

    e_green = energy_green(crit, 2.0)
    add("energy_green_vs_quadrature",
        abs(e_green - energy_quadrature(crit, 2.0)) / e_green, 1e-9)
    mins = energy_minimizer(2.0, 1.5)
    cons = construct_harmonic_homeo(2.0, 1.5)
    add("minimizer_matches_construction", max(
        abs(mins.terms[1][0] - cons.terms[1][0]),
        abs(mins.terms[1][1] - cons.terms[1][1])), 1e-14)
    return checks


def cmd_verify(cfg: RunConfig) -> int:
    checks = _verify_checks(cfg)
    lines = []
    all_ok = True
    for name, value, threshold, ok in checks:
        all_ok &= ok
        lines.append(
            f"{name} {_fmt(value)} {_fmt(threshold)} {'PASS' if ok else 'FAIL'}"
        )
    report = "\n".join(lines) + "\n"
    _write_text(cfg, report)
    if cfg.out_path:
        print("PASS" if all_ok else "FAIL")
    return EXIT_OK if all_ok else EXIT_CHECK_FAILED


_COMMANDS = {
    "means": cmd_means,
    "verify": cmd_verify,
    "construct": cmd_construct,
    "minsurf": cmd_minsurf,
    "identity": cmd_identity,
    "qforms": cmd_qforms,
    "chain": cmd_chain,
    "example51": cmd_example51,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    cfg = _config(args)
    try:
        return _COMMANDS[cfg.command](cfg)
    except (AhmFormatError, FileNotFoundError, ValueError) as exc:
        if isinstance(exc, AnnulusDomainError):
            print(f"domain error: {exc}", file=sys.stderr)
            return EXIT_DOMAIN
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
