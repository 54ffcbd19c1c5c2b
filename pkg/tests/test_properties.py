import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from holext.eilenberg import eilenberg_exponents
from holext.expr import compile_expression
from holext.extension import fit_polynomial, injective_on_samples
from holext.grid import complement_components, hausdorff, rasterize, trace_boundary
from holext.rouche import MeromorphicSpec, count_via_argument, oracle_count
from holext.shapes import Annulus, Disk, Translate, Union
from holext.winding import circle_path, winding_number

FAST = settings(max_examples=25, deadline=None,
                suppress_health_check=[HealthCheck.too_slow])
coord = st.floats(-3, 3, allow_nan=False)
points = st.lists(st.tuples(coord, coord), min_size=1, max_size=30).map(
    lambda xs: np.array([complex(x, y) for x, y in xs]))


@FAST
@given(turns=st.integers(1, 4), r=st.floats(0.5, 3), angle=st.floats(0, 6.28),
       inside=st.floats(0, 0.9))
def test_winding_of_circle(turns, r, angle, inside):
    path = circle_path(0, r, 64, turns)
    a = inside * r * np.exp(1j * angle)
    outside = (1.1 + inside) * r * np.exp(1j * angle)
    assert winding_number(path, a) == turns
    assert winding_number(path.reversed(), a) == -turns
    assert winding_number(path, outside) == 0


@st.composite
def specs(draw):
    def loc():
        while True:
            z = complex(draw(st.floats(-1.4, 1.4)), draw(st.floats(-1.4, 1.4)))
            if abs(abs(z) - 1) > 0.12:
                return z
    zeros = tuple((loc(), draw(st.integers(1, 3))) for _ in range(draw(st.integers(1, 3))))
    poles = tuple((loc(), draw(st.integers(1, 3))) for _ in range(draw(st.integers(0, 3))))
    return MeromorphicSpec(zeros, poles)


DISK = rasterize(Disk(0, 1.0), 0.02)
DISK_CYCLES = trace_boundary(DISK)


@FAST
@given(spec=specs())
def test_argument_principle_matches_oracle(spec):
    assert count_via_argument(spec, DISK_CYCLES) == oracle_count(spec, DISK, DISK_CYCLES).n_minus_p


@FAST
@given(a=points, b=points, c=points)
def test_hausdorff_is_a_metric(a, b, c):
    assert hausdorff(a, b) == hausdorff(b, a)
    assert hausdorff(a, a) == 0
    assert hausdorff(a, c) <= hausdorff(a, b) + hausdorff(b, c) + 1e-12


@FAST
@given(i=st.integers(-20, 20), j=st.integers(-20, 20))
def test_rasterization_commutes_with_grid_translations(i, j):
    h = 0.05
    shape = Union((Annulus(0, 0.5, 1.0), Disk(1.8, 0.4)))
    base = rasterize(shape, h)
    moved = rasterize(Translate(shape, h * complex(j, i)), h)
    assert np.array_equal(base.mask, moved.mask)
    assert complement_components(moved).n_holes == 1


NUMPY_OPS = {"+": np.add, "-": np.subtract, "*": np.multiply}


@FAST
@given(a=st.complex_numbers(max_magnitude=5), b=st.complex_numbers(max_magnitude=5),
       op=st.sampled_from(sorted(NUMPY_OPS)), k=st.integers(0, 4))
def test_expression_matches_numpy(a, b, op, k):
    src = f"({a.real!r}+{a.imag!r}*i)*z^{k} {op} ({b.real!r}+{b.imag!r}*i)*exp(z)"
    z = np.array([0.3 + 0.2j, -1.1 + 0.5j, 2.0 - 1.0j])
    ref = NUMPY_OPS[op](a * z ** k, b * np.exp(z))
    assert np.allclose(compile_expression(src)(z), ref, rtol=1e-12, atol=1e-12)


CIRCLE = np.exp(2j * np.pi * np.arange(1024) / 1024)


@FAST
@given(coeffs=st.lists(st.complex_numbers(max_magnitude=3), min_size=1, max_size=8))
def test_fit_recovers_polynomials(coeffs):
    c = np.array(coeffs)
    y = np.polynomial.polynomial.polyval(CIRCLE, c)
    fit = fit_polynomial(CIRCLE, y, degree_max=12)
    assert fit.residual <= 1e-9 * max(1.0, np.abs(y).max())


@FAST
@given(a=st.complex_numbers(min_magnitude=0.1, max_magnitude=5),
       b=st.complex_numbers(max_magnitude=5))
def test_affine_maps_are_injective(a, b):
    pts = Disk(0, 1.0).samples(0.1)
    assert injective_on_samples(lambda z: a * z + b, pts, 0.3, 1e-9).injective


TWO_HOLES = rasterize(Union((Annulus(0, 0.8, 2.0), Annulus(0, 0.25, 0.55))), 0.05)
LAB = complement_components(TWO_HOLES)


@FAST
@given(s=st.lists(st.integers(-3, 3), min_size=2, max_size=2))
def test_exponents_are_recovered(s):
    reps = [hole.representative for hole in LAB.holes]

    def f(z):
        out = np.exp(0.3 * z)
        for a, k in zip(reps, s):
            out = out * (z - a) ** k
        return out
    assert eilenberg_exponents(f, TWO_HOLES, LAB) == s
