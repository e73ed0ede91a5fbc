import math

import numpy as np
import pytest

from tangentray import airy, fock
from tangentray import pekeris as pk

D = fock.ProblemConfig(pk.DIRICHLET)


def test_total_minus_scattered_is_one():
    pt = fock.FockPoint(0.7, 1.3)
    a_s = fock.scattered_new(pt, D)
    a_t = fock.total_new(pt, D)
    assert abs(a_t.amplitude - a_s.amplitude - 1.0) < 1e-8


def test_dirichlet_boundary_zero():
    pt = fock.FockPoint(1.0, -0.25)
    a = fock.total_new(pt, D)
    assert abs(a.amplitude) <= 1e-6


def test_new_equals_forked_all_boundary_kinds():
    pt = fock.FockPoint(-1.0, 0.5)
    for bc in (pk.DIRICHLET, pk.NEUMANN, pk.robin(1j)):
        cfg = fock.ProblemConfig(bc)
        a_new = fock.scattered_new(pt, cfg)
        a_fork = fock.scattered_forked(pt, cfg)
        assert abs(a_new.amplitude - a_fork.amplitude) < 1e-6


def test_gamma_total_oracle():
    pt = fock.FockPoint(0.3, 0.9)
    a_t = fock.total_new(pt, D)
    a_g = fock.total_gamma(pt, D)
    a_f = fock.scattered_forked(pt, D)
    assert abs(a_g.amplitude - a_t.amplitude) < 1e-6
    assert abs(a_g.amplitude - 1.0 - a_f.amplitude) < 1e-6


def test_gamma_neumann_robin_extension():
    pt = fock.FockPoint(0.5, 0.8)
    for bc in (pk.NEUMANN, pk.robin(1 + 0.5j)):
        cfg = fock.ProblemConfig(bc)
        a_g = fock.total_gamma(pt, cfg)
        a_s = fock.scattered_new(pt, cfg)
        assert abs(a_g.amplitude - 1.0 - a_s.amplitude) < 1e-6


def test_interior_point_rejected():
    with pytest.raises(fock.FockDomainError):
        fock.scattered_new(fock.FockPoint(1.0, -1.0), D)


def test_kappa_rescaling_covariance():
    pt = fock.FockPoint(0.6, 0.9)
    cfg1 = fock.ProblemConfig(pk.DIRICHLET, kappa=1.0)
    s = 2.0 ** (2.0 / 3.0)
    pt_scaled = fock.FockPoint(s * 0.6, 2.0 ** (1.0 / 3.0) * 0.9)
    a1 = fock.scattered_new(pt, cfg1)
    a2 = fock.scattered_new(pt_scaled, D)
    assert abs(a1.amplitude - a2.amplitude) <= 1e-10


def test_airy_plane_wave_identity():
    sigma = 0.4 + 0.1j
    pt = fock.FockPoint(0.2, 0.6)
    left, right = fock.airy_plane_wave_identity(sigma, pt)
    assert abs(left - right) < 1e-9
    # x=y=0 with j=1 reduces to the contour representation of A_1
    left, right = fock.airy_plane_wave_identity(0.7, fock.FockPoint(0.0, 0.0), j=1)
    a1 = airy.rotated(1, 0.7).value
    assert abs(right - a1) < 1e-10
    # j = 0 reproduces Ai
    left, right = fock.airy_plane_wave_identity(0.3, fock.FockPoint(0.0, 0.0), j=0)
    assert abs(right - airy.airy(0.3).value) < 1e-10


def test_boundary_residuals():
    assert fock.boundary_residual(0.0, D) <= 1e-6
    assert fock.boundary_residual(0.8, fock.ProblemConfig(pk.NEUMANN)) <= 1e-5
    assert fock.boundary_residual(-0.5, fock.ProblemConfig(pk.robin(2j))) <= 1e-5


def test_pwe_stencil_on_constant_field():
    # constants solve the PWE: the centred stencil must vanish identically
    h = 0.05
    lat = {k: 1.0 + 0j for k in [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)]}
    ddx = (lat[(1, 0)] - lat[(-1, 0)]) / (2 * h)
    ddy2 = (lat[(0, 1)] - 2 * lat[(0, 0)] + lat[(0, -1)]) / h ** 2
    assert abs(2j * ddx + ddy2) == 0.0


def test_pwe_residual_small():
    # the centred-stencil defect is O(h^2) with coefficient ~0.3 here
    res = fock.pwe_residual([fock.FockPoint(0.0, 1.0)], D, h=0.01)
    assert res <= 1e-4


def test_field_error_estimates_reported():
    a = fock.scattered_new(fock.FockPoint(0.7, 1.3), D)
    assert a.error_estimate > 0
    assert a.error_estimate < 1e-6
