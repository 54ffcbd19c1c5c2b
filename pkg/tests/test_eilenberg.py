import numpy as np
import pytest

from holext.eilenberg import (eilenberg_exponents, factorize,
                              has_continuous_log, homotopic, homotopy_class)
from holext.errors import ZeroOnK
from holext.grid import complement_components, outer_boundary, rasterize, trace_boundary
from holext.shapes import Annulus, Circle, Disk, Segment, Union

H = 0.02


@pytest.fixture(scope="module")
def annulus():
    return rasterize(Annulus(0, 1.0, 2.0), H)


def test_exponent_of_linear_factor(annulus):
    a = complement_components(annulus).holes[0].representative
    assert eilenberg_exponents(lambda z: z - a, annulus) == [1]
    assert eilenberg_exponents(lambda z: (z - a) ** 3, annulus) == [3]
    assert eilenberg_exponents(np.exp, annulus) == [0]


def test_factorization_closed_form(annulus):
    # with the base point at a, the logarithm of f / (z - a)^2 is z itself
    a = complement_components(annulus).holes[0].representative
    fac = factorize(lambda z: (z - a) ** 2 * np.exp(z), annulus, samples=2048)
    assert fac.exponents == [2]
    assert fac.residual < 1e-8
    for z, L in zip(fac.points, fac.logs):
        shift = (L - z).imag[0]
        assert np.abs(L - z - 1j * shift).max() < 1e-8
        assert abs(shift / (2 * np.pi) - round(shift / (2 * np.pi))) < 1e-8


def test_constant(annulus):
    fac = factorize(lambda z: 5 + 0 * z, annulus)
    assert fac.exponents == [0]
    assert all(np.allclose(L, np.log(5)) for L in fac.logs)


def test_zero_on_K(annulus):
    with pytest.raises(ZeroOnK):
        eilenberg_exponents(lambda z: z - 1.5, annulus)


def test_log_criterion(annulus):
    unit = rasterize(Annulus(0, 1.0, 2.0), H)
    assert has_continuous_log(lambda z: z + 10, unit)
    assert not has_continuous_log(lambda z: z, annulus)
    assert has_continuous_log(lambda z: (z - 0.1) / (z - 0.1), annulus)


def test_nested_holes_solve_for_exponents():
    # hole 1 is {0.55 < |z| < 0.8}, hole 2 is {|z| < 0.25}; winding around
    # the outer hole cycle sees both base points
    K = rasterize(Union((Annulus(0, 0.8, 2.0), Annulus(0, 0.25, 0.55))), H)
    lab = complement_components(K)
    assert lab.n_holes == 2
    inner = next(h for h in lab.holes if abs(h.representative) < 0.25)
    middle = next(h for h in lab.holes if abs(h.representative) > 0.5)
    f = lambda z: (z - inner.representative) ** 2 / (z - middle.representative)
    s = eilenberg_exponents(f, K, lab)
    assert s[inner.index - 1] == 2 and s[middle.index - 1] == -1


def test_homotopy_classes():
    disk = rasterize(Disk(0, 1.0), H)
    cycles = outer_boundary(disk)
    assert homotopy_class(lambda z: z ** 2, cycles) == (2,)
    assert homotopic(lambda z: z ** 2, lambda z: z ** 2 + 0.1, cycles)
    assert not homotopic(lambda z: z, lambda z: 1 + 0 * z, cycles)
    seg = rasterize(Segment(1, 2, 2.5 * H), H)
    assert homotopic(lambda z: z, lambda z: 1 + 0 * z, trace_boundary(seg))


def test_exponents_stable_under_refinement():
    f = lambda z: (z - 0.2) ** 2 / (z + 0.1) ** 3
    coarse = eilenberg_exponents(f, rasterize(Circle(0, 1.0, 2.5 * H), H))
    fine = eilenberg_exponents(f, rasterize(Circle(0, 1.0, 1.25 * H), H / 2))
    assert coarse == fine == [-1]
