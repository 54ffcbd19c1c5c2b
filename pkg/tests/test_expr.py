import numpy as np
import pytest

from holext.errors import ParseError
from holext.expr import compile_expression

Z = np.array([0.3 + 0.4j, -1.2 + 0.1j, 2.0 - 0.7j])


@pytest.mark.parametrize("src, ref", [
    ("z^2 + 1", lambda z: z ** 2 + 1),
    ("z**3 - 2*z", lambda z: z ** 3 - 2 * z),
    ("exp(i*z)", lambda z: np.exp(1j * z)),
    ("1/(z - 5)", lambda z: 1 / (z - 5)),
    ("conj(z) + abs(z)", lambda z: np.conj(z) + np.abs(z)),
    ("re(z) - im(z)*i", lambda z: z.real - 1j * z.imag),
    ("sqrt(z)*log(z)", lambda z: np.sqrt(z) * np.log(z)),
    ("sin(z) + cos(pi*z) + e", lambda z: np.sin(z) + np.cos(np.pi * z) + np.e),
    ("-z + +2j", lambda z: -z + 2j),
    ("where(re(z) < 0, -z, z)", lambda z: np.where(z.real < 0, -z, z)),
    ("where(abs(z) >= 1, 1, 0)", lambda z: (np.abs(z) >= 1).astype(complex)),
])
def test_matches_numpy(src, ref):
    assert np.allclose(compile_expression(src)(Z), ref(Z))


def test_constant_broadcasts():
    out = compile_expression("3")(Z)
    assert out.shape == Z.shape and np.all(out == 3)


@pytest.mark.parametrize("src, line, column", [
    ("z +", 1, None),
    ("foo(z)", 1, 1),
    ("z + y", 1, 5),
    ("'a'", 1, 1),
    ("z == 1", 1, 1),
    ("__import__('os')", 1, 1),
    ("z.real", 1, 1),
])
def test_rejected(src, line, column):
    with pytest.raises(ParseError) as err:
        compile_expression(src)
    assert err.value.line == line
    if column is not None:
        assert err.value.column == column


def test_empty():
    with pytest.raises(ParseError):
        compile_expression("  ")


def test_division_by_zero_is_quiet():
    assert np.isinf(compile_expression("1/z")(np.array([0j]))).all()
