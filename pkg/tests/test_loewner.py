import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import conjugate_closed, rational_samples
from ratapprox import (
    OMEGA,
    PartitionError,
    PencilError,
    PoleError,
    RankError,
    SampleSet,
    build_pencil,
    h_of_s,
    partition,
    poles,
    projected_points,
    sample_oracle,
    structured_grid,
    sylvester_residual,
    trajectory_study,
    truncate,
    zeros,
)
from ratapprox.loewner import DataPartition


def real_samples(values_fn, pts):
    pts = np.asarray(pts, dtype=complex)
    return SampleSet(points=pts, symmetric=True).with_values(values_fn(pts))


def match_distance(a, b):
    if len(a) == 0:
        return 0.0
    return max(np.min(np.abs(np.asarray(b) - x)) for x in np.asarray(a))


class TestPartition:
    def test_alternating_on_real_points(self):
        samples = real_samples(lambda s: 1.0 / (s + 1.0), [1.0, 2.0, 3.0, 4.0])
        part = partition(samples, "alternating")
        assert sorted(part.mu.real) == [1.0, 3.0]
        assert sorted(part.lam.real) == [2.0, 4.0]

    def test_conjugate_pair_stays_together(self):
        pts = np.array([2.0 + 1.0j, 2.0 - 1.0j, 1.0 + 0j, 3.0 + 0j])
        samples = real_samples(lambda s: 1.0 / (s + 12.0), pts)
        for scheme in ("alternating", "half_split", "epsilon_paired"):
            part = partition(samples, scheme)
            for side in (part.mu, part.lam):
                nonreal = side[side.imag != 0]
                assert sorted(map(tuple, zip(nonreal.real, nonreal.imag))) == sorted(
                    map(tuple, zip(nonreal.real, -nonreal.imag))
                )

    def test_benchmark_grid_partition_covers_everything(self):
        samples = sample_oracle(structured_grid(OMEGA, 101, 21), h_of_s)
        part = partition(samples, "alternating")
        assert part.mu.size + part.lam.size == 2121
        assert not set(part.mu) & set(part.lam)

    def test_unpaired_complex_point_impossible(self):
        samples = SampleSet(points=np.array([1.0 + 1.0j, 2.0 + 0j])).with_values(
            np.array([1.0 + 0j, 1.0 + 0j])
        )
        with pytest.raises(PartitionError):
            partition(samples)

    def test_single_conjugate_pair_impossible(self):
        samples = SampleSet(points=np.array([1.0 + 1.0j, 1.0 - 1.0j])).with_values(
            np.array([1.0 + 0j, 1.0 + 0j])
        )
        with pytest.raises(PartitionError):
            partition(samples)

    def test_epsilon_paired_neighbours_on_opposite_sides(self):
        pts = np.arange(1.0, 9.0)  # 1..8 on the real axis
        samples = real_samples(lambda s: 1.0 / (s + 20.0), pts)
        part = partition(samples, "epsilon_paired")
        # adjacent sorted points pair across sides at distance exactly 1
        assert max(np.min(np.abs(part.lam - mu)) for mu in part.mu) == 1.0


class TestPencil:
    def test_single_entry_formulas(self):
        part = DataPartition(mu=[2.0], v=[3.0], lam=[0.0], w=[1.0])
        pencil = build_pencil(part)
        assert pencil.L[0, 0] == pytest.approx(1.0)
        assert pencil.Ls[0, 0] == pytest.approx(3.0)

    def test_entries_against_direct_formula_with_oracle(self):
        mu, lam = np.array([1.0 + 0j]), np.array([2.0 + 0j])
        v, w = h_of_s(mu), h_of_s(lam)
        pencil = build_pencil(DataPartition(mu=mu, v=v, lam=lam, w=w))
        assert pencil.L[0, 0] == (v[0] - w[0]) / (mu[0] - lam[0])
        assert pencil.Ls[0, 0] == (mu[0] * v[0] - lam[0] * w[0]) / (mu[0] - lam[0])

    def test_coincident_points_rejected(self):
        part = DataPartition(mu=[1.0, 2.0], v=[1.0, 1.0], lam=[2.0], w=[1.0])
        with pytest.raises(PencilError):
            build_pencil(part)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 10_000))
    def test_cross_ratio_identities(self, seed):
        rng = np.random.default_rng(seed)
        q, k = int(rng.integers(1, 8)), int(rng.integers(1, 8))
        mu = rng.standard_normal(q) + 1j * rng.standard_normal(q)
        lam = 10.0 + rng.standard_normal(k) + 1j * rng.standard_normal(k)
        v = rng.standard_normal(q) + 1j * rng.standard_normal(q)
        w = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        pencil = build_pencil(DataPartition(mu=mu, v=v, lam=lam, w=w))
        diff = mu[:, None] - lam[None, :]
        assert np.allclose(pencil.L * diff, v[:, None] - w[None, :], atol=1e-12)
        assert np.allclose(
            pencil.Ls * diff, mu[:, None] * v[:, None] - lam[None, :] * w[None, :], atol=1e-12
        )

    def test_sylvester_residuals_tiny(self, small_bessel_samples):
        pencil = build_pencil(partition(small_bessel_samples))
        r1, r2 = sylvester_residual(pencil)
        assert r1 <= 1e-10
        assert r2 <= 1e-10


class TestTruncate:
    def test_degree_one_recovery(self):
        f = lambda s: 1.0 / (s + 1.0)
        samples = real_samples(f, [0.5, 1.5, 2.5, 3.5])
        red = truncate(build_pencil(partition(samples, "alternating")), order=1)
        fresh = np.linspace(0.2, 4.0, 17)
        err = np.abs(red.model.eval(fresh) - f(fresh))
        assert err.max() <= 1e-12

    @pytest.mark.parametrize("degree,seed", [(3, 0), (5, 1), (8, 2)])
    def test_exact_recovery_of_random_rationals(self, degree, seed):
        samples, f, true_poles, _, _ = rational_samples(degree, seed, n_pairs=3 * degree)
        red = truncate(build_pencil(partition(samples)), order=degree)
        rng = np.random.default_rng(seed + 100)
        fresh = rng.uniform(0, 10, 100) + 1j * rng.uniform(-1, 1, 100)
        rel = np.abs(red.model.eval(fresh) - f(fresh)) / np.abs(f(fresh))
        assert rel.max() <= 1e-9
        assert match_distance(true_poles, poles(red.model)) <= 1e-8

    def test_interpolation_at_partition_points(self):
        samples, f, *_ = rational_samples(4, 3, n_pairs=16)
        part = partition(samples)
        red = truncate(build_pencil(part), order=4)
        scale = np.abs(samples.values).max()
        assert np.abs(red.model.eval(part.lam) - part.w).max() <= 1e-8 * scale
        assert np.abs(red.model.eval(part.mu) - part.v).max() <= 1e-8 * scale

    def test_tolerance_mode_picks_minimal_order(self):
        samples, *_ = rational_samples(4, 5, n_pairs=16)
        red = truncate(build_pencil(partition(samples)), tol=1e-10)
        assert red.model.order == 4

    def test_order_larger_than_rank_refused(self):
        samples, *_ = rational_samples(2, 7, n_pairs=12)
        with pytest.raises(RankError):
            truncate(build_pencil(partition(samples)), order=9)

    def test_exactly_one_mode_required(self):
        samples, *_ = rational_samples(2, 8, n_pairs=8)
        pencil = build_pencil(partition(samples))
        with pytest.raises(ValueError):
            truncate(pencil)
        with pytest.raises(ValueError):
            truncate(pencil, order=2, tol=1e-8)

    def test_realness_of_model_values_and_spectrum(self, medium_bessel_samples):
        red = truncate(build_pencil(partition(medium_bessel_samples)), order=8)
        xs = np.linspace(0.3, 9.7, 21)
        vals = red.model.eval(xs)
        assert np.all(np.abs(vals.imag) <= 1e-8 * np.abs(vals))
        assert conjugate_closed(poles(red.model))
        assert conjugate_closed(zeros(red.model))


class TestPolesZeros:
    def test_poles_of_simple_lag(self):
        f = lambda s: 1.0 / (s + 1.0)
        samples = real_samples(f, [0.5, 1.5, 2.5, 3.5])
        red = truncate(build_pencil(partition(samples, "alternating")), order=1)
        got = poles(red.model)
        assert got.size == 1
        assert abs(got[0] - (-1.0)) <= 1e-10

    def test_zeros_of_lead_lag(self):
        f = lambda s: (s + 2.0) / (s + 1.0)
        samples = real_samples(f, [0.5, 1.5, 2.5, 3.5])
        red = truncate(build_pencil(partition(samples, "alternating")), order=2)
        got = zeros(red.model)
        assert got.size >= 1
        assert np.min(np.abs(got - (-2.0))) <= 1e-8

    def test_strictly_proper_model_has_fewer_zeros(self):
        samples, *_ = rational_samples(5, 11, n_pairs=20)
        red = truncate(build_pencil(partition(samples)), order=5)
        assert zeros(red.model).size <= 4  # two infinite eigenvalues forced by structure


class TestEval:
    def test_scalar_and_array_agree(self):
        samples, *_ = rational_samples(3, 13, n_pairs=12)
        model = truncate(build_pencil(partition(samples)), order=3).model
        pts = np.array([0.4 + 0.1j, 5.0, 9.0 - 0.8j])
        arr = model.eval(pts)
        assert all(arr[i] == model.eval(complex(p)) for i, p in enumerate(pts))

    def test_eval_at_model_pole_raises(self):
        f = lambda s: 1.0 / (s + 1.0)
        samples = real_samples(f, [0.5, 1.5, 2.5, 3.5])
        model = truncate(build_pencil(partition(samples, "alternating")), order=1).model
        pole = poles(model)[0]
        with pytest.raises(PoleError):
            model.eval(complex(pole))


class TestProjectedPoints:
    def test_sizes_and_conjugate_closure(self, medium_bessel_samples):
        pencil = build_pencil(partition(medium_bessel_samples))
        red = truncate(pencil, order=8)
        proj = projected_points(pencil, red.Y, red.X)
        assert proj.lambda_hat.size == 8
        assert proj.mu_hat.size == 8
        assert conjugate_closed(proj.lambda_hat, tol=1e-7)
        assert conjugate_closed(proj.mu_hat, tol=1e-7)

    def test_points_inside_domain(self, medium_bessel_samples):
        pencil = build_pencil(partition(medium_bessel_samples))
        red = truncate(pencil, order=8)
        proj = projected_points(pencil, red.Y, red.X)
        assert np.all(OMEGA.contains(proj.lambda_hat))
        assert np.all(OMEGA.contains(proj.mu_hat))


class TestTrajectoryStudy:
    def test_first_step_matches_direct_fit(self):
        steps = trajectory_study(h_of_s, OMEGA, a=6, n_steps=2, order=5)
        samples = sample_oracle(structured_grid(OMEGA, 6, 7), h_of_s)
        pencil = build_pencil(partition(samples))
        red = truncate(pencil, order=5)
        direct = projected_points(pencil, red.Y, red.X)
        assert np.allclose(
            np.sort_complex(steps[0].projected.lambda_hat),
            np.sort_complex(direct.lambda_hat),
        )
        assert steps[0].n_points == 42
        assert steps[1].nx == 12 and steps[1].ny == 13
