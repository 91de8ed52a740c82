import math

import numpy as np
import pytest

from stripedbox import (
    BoxGeometry,
    SpectralBasisConfig,
    StripePotentials,
    UniformField,
    baseline_energy,
    field_is_pt_symmetric,
    is_hermitian,
    is_pt_symmetric,
    piecewise_potential,
    standard_geometry,
)


def test_standard_geometry_values():
    g = standard_geometry()
    assert g.a == pytest.approx(math.sqrt(3.0), rel=1e-15)
    assert g.b == pytest.approx(math.sqrt(2.0), rel=1e-15)
    assert g.b1 == pytest.approx(0.4 * g.b, rel=1e-15)
    assert g.b3 == pytest.approx(0.6 * g.b, rel=1e-15)
    assert g.b2 == 0.5 * g.b
    assert g.boundaries == (0.0, g.b1, g.b2, g.b3, g.b)


def test_baseline_energy_unit_convention():
    g = standard_geometry()
    assert baseline_energy(g, 1, 1) == pytest.approx(math.pi**2 * (1 / 3 + 1 / 2), rel=1e-15)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(a=-1.0, b=1.0, b1=0.4, b3=0.6),
        dict(a=1.0, b=0.0, b1=0.4, b3=0.6),
        dict(a=1.0, b=1.0, b1=0.6, b3=0.7),  # b1 >= b/2
        dict(a=1.0, b=1.0, b1=0.3, b3=0.5),  # b3 <= b/2
        dict(a=1.0, b=1.0, b1=0.4, b3=0.7),  # asymmetric stripes
        dict(a=1.0, b=1.0, b1=0.0, b3=0.6),
        dict(a=float("nan"), b=1.0, b1=0.4, b3=0.6),
    ],
)
def test_geometry_rejects_invalid(kwargs):
    with pytest.raises(ValueError):
        BoxGeometry(**kwargs)


def test_geometry_accepts_mirror_within_rounding():
    b = math.sqrt(2.0)
    BoxGeometry(a=1.0, b=b, b1=0.4 * b, b3=0.6 * b)


def test_potentials_coerce_and_validate():
    p = StripePotentials(1, 2.5, 3j, 4)
    assert p.values == (1 + 0j, 2.5 + 0j, 3j, 4 + 0j)
    with pytest.raises(ValueError):
        StripePotentials(float("inf"), 0, 0, 0)
    with pytest.raises(ValueError):
        StripePotentials(0, complex("nan"), 0, 0)


def test_field_validates():
    assert UniformField(2j).alpha == 2j
    assert UniformField.zero().alpha == 0
    with pytest.raises(ValueError):
        UniformField(float("nan"))


@pytest.mark.parametrize("bad", [0, -3, 1.5, True])
def test_basis_config_rejects_bad_sizes(bad):
    with pytest.raises(ValueError):
        SpectralBasisConfig(nx0=bad, nmax=10)
    with pytest.raises(ValueError):
        SpectralBasisConfig(nx0=1, nmax=bad)


def test_pt_predicate_examples():
    assert is_pt_symmetric(StripePotentials(0, 54j, -54j, 0))
    assert not is_pt_symmetric(StripePotentials(1, 2, 3, 4))
    assert is_pt_symmetric(StripePotentials(50j, 5j, -5j, -50j))


def test_pt_predicate_tolerance():
    nearly = StripePotentials(1 + 1e-14j, 0, 0, 1.0)
    assert is_pt_symmetric(nearly, tol=1e-12)
    assert not is_pt_symmetric(nearly, tol=1e-16)
    with pytest.raises(ValueError):
        is_pt_symmetric(nearly, tol=-1.0)


def test_hermitian_predicate_examples():
    assert is_hermitian(StripePotentials(100, -100, 100, -100), UniformField.zero())
    assert not is_hermitian(StripePotentials(0, 1j, -1j, 0), UniformField.zero())
    assert not is_hermitian(StripePotentials.zero(), UniformField(20j))


def test_field_pt_predicate():
    assert field_is_pt_symmetric(UniformField(20j))
    assert not field_is_pt_symmetric(UniformField(1 + 20j))
    assert field_is_pt_symmetric(UniformField.zero())


def test_pt_predicate_conjugation_consistent():
    rng = np.random.default_rng(7)
    for _ in range(200):
        vals = rng.uniform(-50, 50, 8)
        p = StripePotentials(
            complex(vals[0], vals[1]),
            complex(vals[2], vals[3]),
            complex(vals[4], vals[5]),
            complex(vals[6], vals[7]),
        )
        conj = StripePotentials(*(v.conjugate() for v in p.values))
        assert is_pt_symmetric(p) == is_pt_symmetric(conj)


def test_hermitian_vs_pt_directions():
    rng = np.random.default_rng(11)
    for _ in range(100):
        a, b = rng.uniform(-50, 50, 2)
        symmetric = StripePotentials(a, b, b, a)
        assert is_hermitian(symmetric) and is_pt_symmetric(symmetric)

        c, d, e, f = rng.uniform(-50, 50, 4)
        if abs(c - f) > 1e-9 or abs(d - e) > 1e-9:
            lopsided = StripePotentials(c, d, e, f)
            assert is_hermitian(lopsided) and not is_pt_symmetric(lopsided)

        u, v = complex(a, 3.0), complex(b, -2.0)
        balanced = StripePotentials(u, v, v.conjugate(), u.conjugate())
        assert is_pt_symmetric(balanced) and not is_hermitian(balanced)


def test_piecewise_potential_regions(geom):
    p = StripePotentials(1, 2, 3, 4)
    assert piecewise_potential(geom, p, 0.5 * geom.b1) == 1
    assert piecewise_potential(geom, p, 0.5 * (geom.b1 + geom.b2)) == 2
    assert piecewise_potential(geom, p, 0.5 * (geom.b2 + geom.b3)) == 3
    assert piecewise_potential(geom, p, 0.5 * (geom.b3 + geom.b)) == 4
    with pytest.raises(ValueError):
        piecewise_potential(geom, p, -0.1)


def test_types_are_frozen(geom):
    with pytest.raises(AttributeError):
        geom.a = 2.0
    p = StripePotentials.zero()
    with pytest.raises(AttributeError):
        p.v1 = 1.0
