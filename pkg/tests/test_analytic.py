from __future__ import annotations

import numpy as np
import pytest

from stomps import analytic as an
from stomps.grid import Grid1D
from stomps.mps import decompose, inner_product, reconstruct
from stomps.orbitals import Kind, OrbitalSpec, sample


def _dense(m):
    return reconstruct(m) * m.norm


def _builders(grid):
    mid = grid.length / 2
    return [
        (an.build_exp(0.8, grid), OrbitalSpec(Kind.EXP, 0.8)),
        (an.build_sto1s(1.3, grid.size // 2, grid), OrbitalSpec(Kind.STO1S, 1.3, mid)),
        (an.build_sto1s(1.0, None, grid, center=mid - 1.1), OrbitalSpec(Kind.STO1S, 1.0, mid - 1.1)),
        (an.build_sto1s_derivative(1.3, grid.size // 2, grid),
         OrbitalSpec(Kind.STO1S_DERIV, 1.3, mid)),
        (an.build_sto2s(1.0, grid), OrbitalSpec(Kind.STO2S, 1.0)),
        (an.build_h2s(1.0, grid), OrbitalSpec(Kind.H2S, a=1.0)),
        (an.build_h2s_jacobian(1.5, grid), OrbitalSpec(Kind.H2S_JACOBIAN, a=1.5)),
    ]


@pytest.mark.parametrize("n", range(4, 13))
def test_builders_match_sampler(n):
    grid = Grid1D(n, 16.0)
    for m, spec in _builders(grid):
        s = sample(spec, grid)
        assert np.max(np.abs(reconstruct(m) - s.amplitudes)) < 1e-10, spec.kind
        assert m.norm == pytest.approx(s.norm, rel=1e-12), spec.kind
        assert m.canonical_error() < 1e-10


def test_builders_never_touch_exponential_data():
    grid = Grid1D(60, 64.0)
    for m, _ in _builders(grid):
        assert m.n_sites == 60
        assert m.chi_max <= 3
        assert np.isfinite(m.norm) and m.norm > 0


def test_exp_limits():
    g = Grid1D(3, 8.0)
    uniform = an.build_exp(1e-12, g)
    assert np.allclose(reconstruct(uniform), 1 / np.sqrt(8), atol=1e-12)
    zeta, g = 2.0, Grid1D(10, 0.25)
    continuum = (1 - np.exp(-2 * zeta * g.length)) / (2 * zeta)
    m = an.build_exp(zeta, g)
    assert m.norm**2 * g.spacing == pytest.approx(continuum, rel=1e-3)
    geometric = g.spacing * (1 - np.exp(-2 * zeta * g.length)) / (1 - np.exp(-2 * zeta * g.spacing))
    assert m.norm**2 * g.spacing == pytest.approx(geometric, rel=1e-12)
    with pytest.raises(ValueError):
        an.build_exp(0.0, g)


def test_sto1s_midpoint_bond_dimension_two():
    g = Grid1D(6, 16.0)
    assert an.build_sto1s(1.0, 32, g).chi_max == 2
    assert an.build_sto1s_derivative(1.0, 32, g).chi_max == 2
    # centre between grid points with the split at the midpoint
    assert an.build_sto1s(1.0, None, g, center=8.0 - g.spacing / 2).chi_max == 2


def test_sto1s_generic_split_needs_three():
    g = Grid1D(8, 16.0)
    m = an.build_sto1s(1.0, None, g, center=7.3)
    assert m.chi_max == 3
    assert decompose(sample(OrbitalSpec(Kind.STO1S, 1.0, 7.3), g)).chi_max == 3


def test_sto1s_edge_centres():
    g = Grid1D(5, 8.0)
    m = an.build_sto1s(1.0, 0, g)
    assert np.allclose(reconstruct(m), reconstruct(an.build_exp(1.0, g)), atol=1e-14)
    rising = an.build_sto1s(1.0, None, g, center=20.0)
    assert np.allclose(_dense(rising), np.exp(g.points() - 20.0), rtol=1e-12)
    with pytest.raises(ValueError):
        an.build_sto1s(1.0, 32, g)
    with pytest.raises(ValueError):
        an.build_sto1s(1.0, 1, g, center=2.0)


def test_derivative_is_branch_sign_flip():
    g = Grid1D(8, 16.0)
    zeta = 1.7
    d = _dense(an.build_sto1s_derivative(zeta, 100, g))
    f = _dense(an.build_sto1s(zeta, 100, g))
    ratio = d / f
    x = g.points()
    assert np.allclose(ratio, np.where(x < x[100], zeta, -zeta), atol=1e-9)
    m = an.build_sto1s_derivative(zeta, 100, g)
    assert inner_product(m, m) == pytest.approx(1.0, abs=1e-13)


def test_radial_values():
    g = Grid1D(8, 32.0)
    sto2s = reconstruct(an.build_sto2s(1.0, g))
    assert abs(sto2s[0]) < 1e-14
    h2s = reconstruct(an.build_h2s(1.0, g))
    node = 16  # r = 2 with spacing 1/8
    assert np.all(h2s[:node] > 0) and np.all(h2s[node + 1 :] < 0)
    assert abs(h2s[node]) < 1e-14
    assert abs(reconstruct(an.build_h2s_jacobian(1.0, g))[0]) < 1e-14


def test_norm_via_transfer_against_dense_sums():
    g = Grid1D(12, 16.0)
    x = g.points()
    fam = an.sto2s_family(1.0, g)
    dense = np.sqrt(np.sum(x**2 * np.exp(-2 * x)))
    assert an.norm_via_transfer(fam, g) == pytest.approx(dense, rel=1e-10)
    exp_fam = an.exp_family(0.5, g)
    closed = an.build_exp(0.5, g).norm
    assert an.norm_via_transfer(exp_fam) == pytest.approx(closed, rel=1e-12)
    jac = an.h2s_jacobian_family(1.0, g)
    dense_jac = np.sqrt(np.sum((x * (2 - x) * np.exp(-x / 2)) ** 2))
    assert an.norm_via_transfer(jac) == pytest.approx(dense_jac, rel=1e-10)
    with pytest.raises(ValueError):
        an.norm_via_transfer(fam, Grid1D(11, 16.0))


def test_norm_via_transfer_large_n():
    big = an.h2s_jacobian_family(1.0, Grid1D(20, 32.0))
    val = an.norm_via_transfer(big)
    assert np.isfinite(val) and val > 0
    # the same interval at finer resolution: N**2 dx approaches the integral
    small = an.norm_via_transfer(an.h2s_jacobian_family(1.0, Grid1D(12, 32.0)))
    dx20, dx12 = 32 / 2**20, 32 / 2**12
    assert val**2 * dx20 == pytest.approx(small**2 * dx12, rel=1e-3)


def test_family_structure():
    g = Grid1D(6, 8.0)
    for fam in (an.sto2s_family(1.0, g), an.h2s_jacobian_family(1.0, g), an.h2s_family(1.0, g)):
        assert fam.chi == fam.degree + 1
        for a0, a1 in fam.matrices:
            assert np.array_equal(a0, np.eye(fam.chi))
            assert np.allclose(a1, np.triu(a1))
    h = an.h2s_family(1.0, g)
    assert list(h.left) == [2, 1, 0] and list(h.right) == [1, 0, 1]
    assert h.value([0] * 6) == 2.0
    with pytest.raises(ValueError):
        an.h2s_family(1.0, Grid1D(4, 8.0, origin=1.0))


def test_hydrogen_2s_rank_is_two():
    g = Grid1D(8, 32.0)
    built = an.build_h2s(1.0, g)
    assert built.chi_max == 3
    compressed = an.canonicalize(an.h2s_family(1.0, g).site_tensors(), compress=True)
    assert compressed.chi_max == 2
    assert decompose(sample(OrbitalSpec(Kind.H2S, a=1.0), g)).chi_max == 2
    assert inner_product(built, compressed) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize(
    "builder, spec, grid",
    [
        (lambda g: an.build_exp(1.0, g), OrbitalSpec(Kind.EXP), Grid1D(8, 16.0)),
        (lambda g: an.build_sto1s(1.0, 128, g), OrbitalSpec(Kind.STO1S, 1.0, 8.0), Grid1D(8, 16.0)),
        (lambda g: an.build_sto2s(1.0, g), OrbitalSpec(Kind.STO2S), Grid1D(8, 32.0)),
        (lambda g: an.build_h2s_jacobian(1.0, g), OrbitalSpec(Kind.H2S_JACOBIAN), Grid1D(8, 32.0)),
    ],
)
def test_numerical_bonds_equal_analytic(builder, spec, grid):
    assert decompose(sample(spec, grid)).bond_dims == builder(grid).bond_dims


def test_canonicalize_rejects_zero_function():
    zero = [np.zeros((2, 1, 1)) for _ in range(3)]
    with pytest.raises(ValueError):
        an.canonicalize(zero)
