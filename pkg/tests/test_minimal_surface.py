"""Isothermal lifts of harmonic maps to minimal graphs and the modulus bound."""

import math

import numpy as np
import pytest

from nitsche_lab import (
    AnnulusMap,
    BranchError,
    NoLiftError,
    catenoid_modulus,
    lift,
    modulus_bound_check,
    phi_zeros,
    second_dilatation,
)
from nitsche_lab.nitsche_family import NitscheParams, nitsche_map


def test_critical_family_lift_heights():
    for v in (0.0, 1.0 / 3.0, 0.9):
        m = nitsche_map(NitscheParams(v=v, R=2.0))
        res = lift(m)
        expected = math.sqrt(1.0 - v * v) * np.log(res.rho_grid)
        assert np.max(np.abs(res.w - expected[:, None])) <= 1e-10
        assert res.conformality_residual <= 1e-12
        assert res.loop_residual <= 1e-10
        assert not res.flat


def test_lift_width_and_gauge(critical):
    res = lift(critical)
    assert np.max(np.abs(res.w[0, :])) <= 1e-12  # w = 0 on the unit circle
    assert abs(res.width - math.log(2.0)) <= 1e-10


def test_holomorphic_map_lifts_flat(identity_map):
    res = lift(identity_map)
    assert res.flat
    assert np.max(np.abs(res.w)) == 0.0
    assert res.conformality_residual == 0.0


def test_second_dilatation_of_critical_map(critical):
    mu = second_dilatation(critical, 2.0)
    assert abs(mu - (-0.25)) <= 1e-15
    res = lift(critical)
    # |mu| < 1 on the open annulus, -> 1 at the inner boundary
    assert np.nanmax(np.abs(res.mu[1:, :])) < 1.0
    assert np.allclose(np.abs(res.mu[0, :]), 1.0, atol=1e-12)
    with pytest.raises(ZeroDivisionError):
        second_dilatation(AnnulusMap(R=2.0, terms={1: (0.0, 1.0)}), 2.0)


def test_phi_zero_parity_detection():
    # h_z has a simple zero at z = 1.5 inside A(1, 2): no single-valued sqrt
    m = AnnulusMap(R=2.0, terms={2: (0.5, 0.0), 1: (-1.5, 1.0)})
    zeros = phi_zeros(m)
    assert any(abs(z - 1.5) <= 1e-9 and k % 2 == 1 for z, k in zeros)
    with pytest.raises(NoLiftError):
        lift(m)


def test_phi_zeros_empty_for_degenerate_factor(identity_map, critical):
    assert phi_zeros(identity_map) == []
    assert phi_zeros(critical) == []


def test_critical_map_phi_is_negative_real(critical):
    # phi = h_z conj(h_zbar) = -1/(4 zbar^2); on the positive axis it sits
    # exactly on the sqrt branch cut, which the calibration must survive
    res = lift(critical)
    assert abs(complex(res.sqrt_phi[0, 0]) - 0.5j) <= 1e-12
    w_again = lift(critical).w
    assert np.array_equal(res.w, w_again)  # deterministic


def test_catenoid_modulus_inverts_mean_radius():
    for t in (0.1, 1.0, 2.5):
        assert abs(catenoid_modulus(math.cosh(t)) - t) <= 1e-12
    assert catenoid_modulus(1.0) == 0.0
    with pytest.raises(ValueError):
        catenoid_modulus(0.5)


def test_modulus_bound_sharpness():
    for R in (1.1, 2.0, 5.0, 10.0):
        holds, slack = modulus_bound_check(math.log(R), 0.5 * (R + 1.0 / R))
        assert holds and abs(slack) <= 1e-12
    holds, slack = modulus_bound_check(1.5, math.cosh(1.0))
    assert not holds and slack < 0.0
    with pytest.raises(ValueError):
        modulus_bound_check(1.0, 0.9)
