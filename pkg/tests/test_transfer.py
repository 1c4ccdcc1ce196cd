# Transfer matrices: leading eigendata, pressure, normalisation, the
# pressure-equation solvers and complex continuation.

import cmath
import math

import numpy as np
import pytest

from shiftlab.potentials import Potential
from shiftlab.transfer import (TransferError, build_matrix, combine,
                               equilibrium_integral, leading_eig_continued,
                               normalize, pressure, pressure_complex,
                               pressure_via_zn, pressure_weighted, rpf,
                               solve_pressure_root, solve_s_for_z)

PHI = (1 + 5 ** 0.5) / 2


def test_build_matrix_shapes_and_exactness(gm, gm_zero):
    M = build_matrix(gm, 1, gm_zero)
    assert M.mat.shape == (2, 2)
    assert M.exact
    assert np.allclose(M.mat, [[1, 1], [1, 0]])
    p3 = Potential.constant(gm, 0.0, depth=3)
    assert build_matrix(gm, 2, p3).exact
    assert not build_matrix(gm, 1, p3).exact
    with pytest.raises(TransferError):
        build_matrix(gm, 0, gm_zero)


def test_pressure_oracles(gm, fs2, gm_zero):
    assert pressure(gm, gm_zero) == pytest.approx(math.log(PHI), abs=1e-12)
    z2 = Potential.constant(fs2, 0.0)
    assert pressure(fs2, z2) == pytest.approx(math.log(2), abs=1e-12)
    # pressure of a constant shifts by the constant
    c = Potential.constant(gm, 0.7)
    assert pressure(gm, c) == pytest.approx(math.log(PHI) + 0.7, abs=1e-11)
    # depth invariance for a depth-1 potential
    assert pressure(gm, gm_zero, depth=4) == pytest.approx(math.log(PHI), abs=1e-11)


def test_rpf_data(gm, gm_zero):
    data = rpf(gm, gm_zero)
    assert data.residual < 1e-11
    assert np.min(data.h) > 0
    assert data.gibbs.sum() == pytest.approx(1.0, abs=1e-12)
    # Parry measure of the golden mean: mu[1] = phi/sqrt(5)
    assert data.gibbs[data.matrix.index((1,))] == pytest.approx(
        PHI / 5 ** 0.5, abs=1e-10)
    assert data.gibbs[data.matrix.index((2,))] == pytest.approx(
        1 / (5 ** 0.5 * PHI), abs=1e-10)


def test_pressure_via_zn(gm, fs2, gm_zero):
    vals = pressure_via_zn(fs2, Potential.constant(fs2, 0.0), 8)
    assert vals == pytest.approx([math.log(2)] * 8, abs=1e-12)
    lucas = [1, 3, 4, 7, 11, 18, 29, 47, 76, 123]
    vals = pressure_via_zn(gm, gm_zero, 10)
    for n, v in enumerate(vals, start=1):
        assert v == pytest.approx(math.log(lucas[n - 1]) / n, abs=1e-12)
    gaps = [abs(v - math.log(PHI)) for v in vals]
    assert gaps[-1] < 0.01
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    with pytest.raises(TransferError):
        pressure_via_zn(gm, gm_zero, 0)


def test_solve_pressure_root(gm, fs2, gm_zero, gm_roof):
    one = Potential.constant(gm, 1.0)
    a = solve_pressure_root(gm, gm_zero, one)
    assert a == pytest.approx(math.log(PHI), abs=1e-12)
    # full shift with roof (1, 2): e^-a + e^-2a = 1 has root log golden
    roof = Potential.from_table(fs2, 1, {(1,): 1.0, (2,): 2.0})
    a = solve_pressure_root(fs2, Potential.constant(fs2, 0.0), roof)
    assert a == pytest.approx(0.4812118250596035, abs=1e-12)
    # the pinned counting roof used downstream
    a = solve_pressure_root(gm, gm_zero, gm_roof)
    assert a == pytest.approx(0.413538631886836640833550719608, abs=1e-12)
    assert pressure_weighted(gm, gm_zero, gm_roof, None, a, 0.0) == pytest.approx(
        0.0, abs=1e-12)
    with pytest.raises(TransferError):
        solve_pressure_root(gm, gm_zero, Potential.constant(gm, -1.0))


def test_normalize(gm, gm_roof, gm_zero):
    P = solve_pressure_root(gm, gm_zero, gm_roof)
    norm = normalize(gm, gm_zero, gm_roof, P)
    M = build_matrix(gm, norm.potential.depth - 1, norm.potential)
    # the normalised operator fixes the constant one ...
    assert np.max(np.abs(M.mat.sum(axis=1) - 1.0)) < 1e-12
    # ... and its adjoint fixes the Gibbs measure
    mu = norm.source.gibbs
    assert np.max(np.abs(M.mat.T @ mu - mu)) < 1e-12


def test_equilibrium_integral(gm, gm_zero):
    data = rpf(gm, gm_zero)
    chi1 = Potential.from_table(gm, 1, {(1,): 1.0, (2,): 0.0})
    assert equilibrium_integral(data, chi1) == pytest.approx(
        PHI / 5 ** 0.5, abs=1e-10)
    # depth data.depth + 1 via measure refinement: mu[1,1] = mu[1] - mu[2]
    chi11 = Potential.from_table(gm, 2, {(1, 1): 1.0, (1, 2): 0.0, (2, 1): 0.0})
    mu1 = PHI / 5 ** 0.5
    mu2 = 1 - mu1
    assert equilibrium_integral(data, chi11) == pytest.approx(mu1 - mu2, abs=1e-10)
    deep = Potential.constant(gm, 1.0, depth=4)
    with pytest.raises(TransferError):
        equilibrium_integral(data, deep)


def test_combine_table(gm, gm_roof, gm_zero):
    g = Potential.from_table(gm, 1, {(1,): 1.0, (2,): 0.0})
    q = combine(gm_zero, gm_roof, g, 0.3, -0.2, 2)
    assert q.depth == 2
    assert q.value_on_word((1, 2)) == pytest.approx(-0.3 * 1.0 - 0.2 * 1.0)
    assert q.value_on_word((2, 1)) == pytest.approx(-0.3 * 1.6180339887 + 0.0)


def test_leading_eig_lattice_circle(fs2):
    # unit roof on the full 2-shift: the weight e^(-s) has period 2*pi in
    # Im(s), so the continued eigenvalue returns to 1 at b = 2*pi
    z = Potential.constant(fs2, 0.0)
    one = Potential.constant(fs2, 1.0)
    s = complex(math.log(2), 2 * math.pi)
    lam, gap = leading_eig_continued(fs2, 1, z, one, None, s, 0.0)
    assert abs(lam - 1.0) < 1e-12
    # along the line the branch is exp(-i b): modulus one for every b
    lam_h, _ = leading_eig_continued(fs2, 1, z, one, None,
                                     complex(math.log(2), math.pi), 0.0)
    assert abs(lam_h - (-1.0)) < 1e-12


def test_leading_eig_nonlattice_contracts(gm, gm_zero, gm_roof):
    P = 0.413538631886836640833550719608
    for b in (1.0, 3.0, 10.0):
        lam, _ = leading_eig_continued(gm, 1, gm_zero, gm_roof, None,
                                       complex(P, b), 0.0)
        assert abs(lam) < 1.0 - 1e-4


def test_pressure_complex_matches_real(gm, gm_zero, gm_roof):
    pc = pressure_complex(gm, gm_zero, gm_roof, None, 0.25, 0.0)
    pr = pressure_weighted(gm, gm_zero, gm_roof, None, 0.25, 0.0)
    assert pc.real == pytest.approx(pr, abs=1e-11)
    assert pc.imag == pytest.approx(0.0, abs=1e-12)


def test_solve_s_for_z(gm, fs2, gm_zero, gm_roof):
    g = Potential.from_table(gm, 1, {(1,): 1.0, (2,): 0.0})
    s0 = solve_s_for_z(gm, gm_zero, gm_roof, g, 0.0)
    assert s0.real == pytest.approx(0.413538631886836640833550719608, abs=1e-11)
    assert s0.imag == pytest.approx(0.0, abs=1e-12)
    # full shift, unit roof, g = 1: the root is s(z) = log 2 + z exactly
    z2 = Potential.constant(fs2, 0.0)
    one = Potential.constant(fs2, 1.0)
    for z in (0.1, -0.2, complex(0.05, 0.1)):
        s = solve_s_for_z(fs2, z2, one, one, z)
        assert abs(s - (math.log(2) + z)) < 1e-9
    # implicit-function derivative ds/dz = integral(g) / integral(tau)
    h = 1e-5
    d_num = (solve_s_for_z(gm, gm_zero, gm_roof, g, h)
             - solve_s_for_z(gm, gm_zero, gm_roof, g, -h)) / (2 * h)
    P = 0.413538631886836640833550719608
    norm = normalize(gm, gm_zero, gm_roof, P)
    data = norm.source
    d_ref = (equilibrium_integral(data, g)
             / equilibrium_integral(data, gm_roof))
    assert d_num.real == pytest.approx(d_ref, abs=1e-7)
