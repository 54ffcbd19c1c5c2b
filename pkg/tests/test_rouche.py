import math

import numpy as np
import pytest

from holext.errors import OnBoundary, ParseError, PoleOnBoundary, ZeroOnBoundary
from holext.grid import rasterize, trace_boundary
from holext.rouche import (MeromorphicSpec, count_via_argument,
                           homotopic_rouche_check, oracle_count, random_specs)
from holext.shapes import Annulus, Disk

H = 0.02
R = math.sqrt(0.1)


@pytest.fixture(scope="module")
def disk():
    return rasterize(Disk(0, 1.0), H)


@pytest.mark.parametrize("f, expected", [
    (lambda z: z ** 2, 2),
    (lambda z: 1 / z, -1),
    (lambda z: (z ** 2 + 0.1) / (z - 0.3), 1),
])
def test_argument_principle(disk, f, expected):
    assert count_via_argument(f, trace_boundary(disk)) == expected


def test_oracle_examples(disk):
    assert oracle_count(MeromorphicSpec(((0, 2),)), disk).to_dict() == {"n": 2, "p": 0, "n_minus_p": 2}
    spec = MeromorphicSpec(((1j * R, 1), (-1j * R, 1)), ((0.3, 1),))
    assert oracle_count(spec, disk).n_minus_p == 1
    assert oracle_count(MeromorphicSpec(((1.5, 1),)), disk).n == 0
    with pytest.raises(OnBoundary):
        oracle_count(MeromorphicSpec(((1.0, 1),)), disk)


def test_spec_merges_and_cancels():
    spec = MeromorphicSpec(((0.5, 2), (0.1, 1)), ((0.5, 1),))
    assert spec.zeros == ((0.1, 1), (0.5, 1)) and spec.poles == ()
    z = np.array([2.0 + 1j])
    assert np.allclose(spec(z), (z - 0.5) * (z - 0.1))


def test_spec_from_dict():
    spec = MeromorphicSpec.from_dict({"zeros": [[0, 0, 2]], "poles": [[0.3, 0]], "factor": "exp(z)"})
    assert spec.to_dict() == {"zeros": [[0.0, 0.0, 2]], "poles": [[0.3, 0.0, 1]], "factor": "exp(z)"}
    with pytest.raises(ParseError):
        MeromorphicSpec.from_dict({"roots": []})
    with pytest.raises(ParseError):
        MeromorphicSpec.from_dict({"zeros": [[0, 0, 0]]})


def test_boundary_singularities(disk):
    cycles = trace_boundary(disk)
    edge = cycles[0].vertices[0]
    with pytest.raises(ZeroOnBoundary):
        count_via_argument(MeromorphicSpec(((edge, 1),)), cycles)
    with pytest.raises(PoleOnBoundary):
        count_via_argument(MeromorphicSpec((), ((edge, 1),)), cycles)


def test_rouche_verdicts(disk):
    v = homotopic_rouche_check(MeromorphicSpec(((0, 2),)),
                               MeromorphicSpec(((1j * R, 1), (-1j * R, 1))), disk)
    assert v.hypothesis_holds and v.counts == (2, 2) and v.counts_equal
    assert v.argument_vs_oracle_consistent and not v.falsification_events
    v = homotopic_rouche_check(lambda z: z, lambda z: 1 + 0 * z, disk)
    assert not v.hypothesis_holds and not v.falsification_events


def test_rouche_on_annulus_with_hole_singularities():
    K = rasterize(Annulus(0, 1.0, 2.0), H)
    f = MeromorphicSpec(((0.2, 1),), ((-0.3j, 1),))
    v = homotopic_rouche_check(f, lambda z: 1 + 0 * z, K)
    assert v.hypothesis_holds and v.counts == (0, 0)


def test_random_specs_are_reproducible(disk):
    a = random_specs(disk, 5, seed=3)
    b = random_specs(disk, 5, seed=3)
    assert [s.to_dict() for s in a] == [s.to_dict() for s in b]
    cycles = trace_boundary(disk)
    for s in a:
        assert count_via_argument(s, cycles) == oracle_count(s, disk, cycles).n_minus_p
