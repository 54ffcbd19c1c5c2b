import math

import numpy as np
import pytest

from holext.errors import (ObstructedLog, PointOnPath,
                           PreconditionError, StepTooLarge, ZeroOnPath)
from holext.winding import (SampledPath, arg_growth, circle_path,
                            continuous_log, spiral_path, unwrap_phase,
                            winding_number, winding_residue)


def test_unwrap_linear_phase():
    k = np.arange(63)
    track = unwrap_phase(SampledPath(np.exp(0.1j * k)))
    assert np.allclose(track.theta, 0.1 * k, atol=1e-12)


def test_unwrap_rejects_zero_and_jumps():
    with pytest.raises(ZeroOnPath):
        unwrap_phase(SampledPath(np.r_[np.ones(5), 0, np.ones(5)]))
    with pytest.raises(StepTooLarge):
        unwrap_phase(SampledPath(np.r_[np.ones(5), -np.ones(5)]))


@pytest.mark.parametrize("path, a, expected", [
    (circle_path(), 0, 1),
    (circle_path(turns=2), 0, 2),
    (circle_path(3, 1.0), 0, 0),
    (circle_path().reversed(), 0, -1),
    (circle_path(0, 2.0), 1.5j, 1),
])
def test_winding_examples(path, a, expected):
    assert winding_number(path, a) == expected


def test_winding_needs_clearance_and_closed_path():
    with pytest.raises(PointOnPath):
        winding_number(circle_path(), 0.999, clearance=0.01)
    with pytest.raises(PreconditionError):
        winding_residue(SampledPath(np.exp(1j * np.linspace(0, 1, 20))))


def test_log_of_constant_and_obstruction():
    assert np.allclose(continuous_log(SampledPath(np.ones(16), closed=True)), 0)
    assert np.allclose(continuous_log(SampledPath(np.full(16, 5.0), closed=True)), math.log(5))
    with pytest.raises(ObstructedLog):
        continuous_log(circle_path())


def test_log_exponentiates_back():
    path = SampledPath(2 + np.exp(1j * np.linspace(0, 2 * np.pi, 300, endpoint=False)), closed=True)
    L = continuous_log(path)
    assert np.abs(np.exp(L) - path.points).max() < 1e-12


def test_accessible_spiral_log():
    path = spiral_path("accessible", 20 * math.pi, 0.01)
    L = continuous_log(path)
    exact = 1j * path.t - np.log1p(path.t)
    assert np.abs(L - exact).max() <= 1e-9


def test_arg_growth():
    t_max = 40 * math.pi
    acc = arg_growth("accessible", t_max, 0.01)
    t = np.linspace(0, t_max, acc.theta.size)
    assert np.abs(acc.theta - t).max() < 1e-9
    clu = arg_growth("clustering", t_max, 0.01)
    assert np.abs(clu.theta - t).max() <= math.pi / 2
    with pytest.raises(PreconditionError):
        arg_growth("clustering", math.pi)
    with pytest.raises(PreconditionError):
        arg_growth("clustering", 10.0, step=0.1)


def test_csv_round_trip():
    path = spiral_path("accessible", 10.0, 0.01)
    again = SampledPath.from_csv(path.to_csv())
    assert np.array_equal(again.points, path.points) and np.array_equal(again.t, path.t)


def test_short_path_rejected():
    with pytest.raises(PreconditionError):
        SampledPath(np.ones(3))
