import numpy as np
import pytest

from conftest import conjugate_closed, rational_samples
from ratapprox import InsufficientDataError, fit_greedy


def test_exact_degree_two_data_interpolated():
    samples, f, *_ = rational_samples(2, 0, n_pairs=15)
    result = fit_greedy(samples, order_target=2, seed=0)
    err = np.abs(result.model.eval(samples.points) - samples.values)
    assert err.max() <= 1e-9
    assert result.model.order == 2


def test_selected_points_come_from_input_and_stay_disjoint():
    samples, *_ = rational_samples(3, 1, n_pairs=12)
    result = fit_greedy(samples, order_target=3, seed=4)
    pool = set(samples.points)
    assert set(result.left_points) <= pool
    assert set(result.right_points) <= pool
    assert not set(result.left_points) & set(result.right_points)
    assert conjugate_closed(result.left_points)
    assert conjugate_closed(result.right_points)


def test_deterministic_for_fixed_seed():
    samples, *_ = rational_samples(3, 2, n_pairs=14)
    a = fit_greedy(samples, order_target=3, seed=9)
    b = fit_greedy(samples, order_target=3, seed=9)
    assert [s.max_error for s in a.history] == [s.max_error for s in b.history]
    assert [s.chosen for s in a.history] == [s.chosen for s in b.history]
    assert np.array_equal(a.left_points, b.left_points)


def test_history_is_recorded_per_step():
    samples, *_ = rational_samples(2, 3, n_pairs=10)
    result = fit_greedy(samples, order_target=2, seed=1)
    steps = [s.step for s in result.history]
    assert steps == list(range(1, len(steps) + 1))
    assert all(s.max_error >= 0 for s in result.history)
    assert all(1 <= len(s.chosen) <= 2 for s in result.history)


def test_mostly_decreasing_error_on_bessel_data(medium_bessel_samples):
    # greedy selection is not strictly monotone; the fraction below is the
    # measured behaviour for this frozen seed (it varies roughly 0.65-0.92
    # over seeds and grids)
    result = fit_greedy(medium_bessel_samples, order_target=8, seed=1)
    errors = [s.max_error for s in result.history]
    drops = sum(1 for a, b in zip(errors, errors[1:]) if b <= a)
    assert drops / (len(errors) - 1) >= 0.8


def test_insufficient_data_rejected():
    samples, *_ = rational_samples(2, 4, n_pairs=3)
    with pytest.raises(InsufficientDataError):
        fit_greedy(samples, order_target=5, seed=0)


def test_values_required():
    from ratapprox import OMEGA, structured_grid

    with pytest.raises(InsufficientDataError):
        fit_greedy(structured_grid(OMEGA, 5, 5), order_target=2, seed=0)
