import math

import numpy as np
import pytest
from scipy.stats import binom

from fratio import (
    FiniteAbelianGroup,
    RecoveryConfig,
    SampleSet,
    bernoulli_sample,
    erasure_row_statistics,
    make_dft,
    project_fidelity,
    recover_l1,
    sample_complexity,
    soft_threshold,
)
from fratio.harness import derive_seed
from fratio.recovery import extend_by_zero, restrict
from fratio.signals import sparse_signal

from conftest import complex_gaussian


class TestBernoulliSample:
    def test_full_domain(self):
        g = FiniteAbelianGroup((10,))
        sample = bernoulli_sample(g, 1.0, 0)
        assert list(sample.kept) == list(range(10))

    def test_determinism(self):
        g = FiniteAbelianGroup((100,))
        a = bernoulli_sample(g, 0.3, 42)
        b = bernoulli_sample(g, 0.3, 42)
        assert np.array_equal(a.kept, b.kept)

    def test_binomial_statistics(self):
        g = FiniteAbelianGroup((10_000,))
        counts = [bernoulli_sample(g, 0.5, seed).count for seed in range(100)]
        assert abs(np.mean(counts) - 5000) <= 3 * 50 / math.sqrt(100) * math.sqrt(100)
        # per-seed counts stay within a generous 5 sigma window
        assert all(abs(c - 5000) < 5 * 50 for c in counts)

    def test_p_domain(self):
        g = FiniteAbelianGroup((4,))
        with pytest.raises(ValueError):
            bernoulli_sample(g, 0.0, 0)
        with pytest.raises(ValueError):
            bernoulli_sample(g, 1.5, 0)


class TestSoftThreshold:
    def test_identity_at_zero(self):
        v = np.array([1 + 2j, -3.0, 0.0])
        assert np.allclose(soft_threshold(v, 0.0), v)

    def test_real_shrinkage(self):
        assert soft_threshold(np.array([3.0 + 0j]), 1.0)[0] == pytest.approx(2.0)

    def test_complex_modulus(self):
        out = soft_threshold(np.array([4 + 3j, 8 + 6j]), 5.0)
        assert out[0] == pytest.approx(0.0)
        assert out[1] == pytest.approx(4 + 3j)

    def test_negative_threshold(self):
        with pytest.raises(ValueError):
            soft_threshold(np.ones(2), -1.0)


class TestProjectFidelity:
    def test_feasible_point_unchanged(self):
        system = make_dft(FiniteAbelianGroup((8,)))
        f = complex_gaussian(system.group, 0)
        sample = bernoulli_sample(system.group, 0.5, 1)
        y = restrict(f.values, sample)
        c = system.analyze(f).entries
        out = project_fidelity(system, c, sample, y, sigma=1.0)
        assert np.allclose(out, c)

    def test_exact_interpolation_full_domain(self):
        system = make_dft(FiniteAbelianGroup((8,)))
        f = complex_gaussian(system.group, 2)
        sample = bernoulli_sample(system.group, 1.0, 0)
        y = restrict(f.values, sample)
        out = project_fidelity(system, np.zeros(8, complex), sample, y, sigma=0.0)
        assert np.allclose(out, system.analyze(f).entries, atol=1e-12)

    def test_matches_convex_oracle(self):
        cvxpy = pytest.importorskip("cvxpy")
        system = make_dft(FiniteAbelianGroup((12,)))
        f = complex_gaussian(system.group, 3)
        sample = bernoulli_sample(system.group, 0.6, 4)
        y = restrict(f.values, sample)
        sigma = 0.4
        rng = np.random.default_rng(5)
        c0 = rng.standard_normal(12) + 1j * rng.standard_normal(12)
        got = project_fidelity(system, c0, sample, y, sigma)

        phi = system.basis_matrix()
        B = phi[sample.kept, :]  # synthesis then restriction
        c = cvxpy.Variable(12, complex=True)
        prob = cvxpy.Problem(
            cvxpy.Minimize(cvxpy.sum_squares(c - c0)), [cvxpy.norm(B @ c - y, 2) <= sigma]
        )
        prob.solve()
        # agreement limited by the iterative conic solver's own accuracy
        assert np.max(np.abs(got - c.value)) < 1e-5

    def test_idempotence(self):
        system = make_dft(FiniteAbelianGroup((16,)))
        f = complex_gaussian(system.group, 6)
        sample = bernoulli_sample(system.group, 0.5, 7)
        y = restrict(f.values, sample)
        rng = np.random.default_rng(8)
        c0 = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        once = project_fidelity(system, c0, sample, y, 0.3)
        twice = project_fidelity(system, once, sample, y, 0.3)
        assert np.max(np.abs(twice - once)) < 1e-10

    def test_partial_isometry(self, small_system):
        sample = bernoulli_sample(small_system.group, 0.5, 9)
        if sample.count == 0:
            pytest.skip("empty draw")
        rng = np.random.default_rng(10)
        v = rng.standard_normal(sample.count) + 1j * rng.standard_normal(sample.count)
        c = small_system._analyze_array(extend_by_zero(v, sample))
        back = restrict(small_system._synthesize_array(c), sample)
        assert np.max(np.abs(back - v)) < 1e-10


def brute_force_one_sparse(system, sample, y):
    """Fit every 1-sparse coefficient candidate to the samples; best residual wins."""
    phi = system.basis_matrix()
    best = None
    for j in range(system.size):
        col = phi[sample.kept, j]
        denom = np.vdot(col, col).real
        alpha = np.vdot(col, y) / denom
        resid = np.linalg.norm(alpha * col - y)
        if best is None or resid < best[0]:
            best = (resid, j, alpha)
    _, j, alpha = best
    c = np.zeros(system.size, complex)
    c[j] = alpha
    return system.synthesize(c)


class TestRecoverL1:
    def test_full_observation_exact(self, small_system):
        f = complex_gaussian(small_system.group, 11)
        sample = bernoulli_sample(small_system.group, 1.0, 0)
        res = recover_l1(small_system, sample, restrict(f.values, sample), truth=f)
        assert res.converged
        assert res.relative_error < 1e-8

    def test_one_sparse_vs_brute_force(self):
        system = make_dft(FiniteAbelianGroup((32,)))
        for seed in range(20):
            f = sparse_signal(system, 1, derive_seed(100, seed))
            rng = np.random.default_rng(derive_seed(101, seed))
            kept = np.sort(rng.choice(32, size=16, replace=False))
            sample = SampleSet(group=system.group, kept=kept, p=0.5, seed=seed)
            y = restrict(f.values, sample)
            res = recover_l1(system, sample, y, truth=f)
            oracle = brute_force_one_sparse(system, sample, y)
            assert res.relative_error < 1e-6
            assert np.linalg.norm(oracle.values - f.values) < 1e-8 * f.l2

    def test_three_sparse_monte_carlo_fixture(self):
        system = make_dft(FiniteAbelianGroup((64,)))
        successes = 0
        for seed in range(20):
            f = sparse_signal(system, 3, derive_seed(102, seed))
            sample = bernoulli_sample(system.group, 0.75, derive_seed(103, seed))
            res = recover_l1(system, sample, restrict(f.values, sample), truth=f)
            successes += res.relative_error < 1e-5
        assert successes >= 19

    def test_feasibility_and_weak_optimality(self):
        system = make_dft(FiniteAbelianGroup((48,)))
        config = RecoveryConfig(max_iterations=20000, tolerance=1e-11)
        for seed, eps in [(0, 0.0), (1, 0.1), (2, 0.2)]:
            f = sparse_signal(system, 4, derive_seed(104, seed))
            sample = bernoulli_sample(system.group, 0.8, derive_seed(105, seed))
            sigma = eps * f.l2
            cfg = RecoveryConfig(
                max_iterations=config.max_iterations,
                tolerance=config.tolerance,
                fidelity_radius=sigma,
            )
            res = recover_l1(system, sample, restrict(f.values, sample), cfg, truth=f)
            assert res.converged
            assert res.fidelity_residual <= sigma + 10 * cfg.tolerance
            truth_l1 = system.analyze(f).l1
            assert res.coefficient_l1 <= truth_l1 + 10 * cfg.tolerance

    def test_non_convergence_flag(self):
        system = make_dft(FiniteAbelianGroup((32,)))
        f = sparse_signal(system, 3, 0)
        sample = bernoulli_sample(system.group, 0.7, 1)
        cfg = RecoveryConfig(max_iterations=2, fidelity_radius=0.0)
        res = recover_l1(system, sample, restrict(f.values, sample), cfg, truth=f)
        assert not res.converged
        assert res.iterations == 2

    def test_success_monotone_in_p(self):
        system = make_dft(FiniteAbelianGroup((32,)))
        rates = []
        for gi, p in enumerate((0.3, 0.6, 0.9)):
            ok = 0
            for trial in range(50):
                f = sparse_signal(system, 2, derive_seed(106, gi, trial))
                sample = bernoulli_sample(system.group, p, derive_seed(107, gi, trial))
                res = recover_l1(system, sample, restrict(f.values, sample), truth=f)
                ok += res.relative_error < 1e-5
            rates.append(ok / 50)
        assert all(b >= a - 0.1 for a, b in zip(rates, rates[1:]))


class TestSampleComplexity:
    def test_constant_modulus_reduction(self):
        M = 1024
        got = sample_complexity(4.0, 0.25, M, tau=M**-0.5, C=1.0)
        expected = (4 / 0.25) ** 2 * math.log(16) ** 2 * math.log(M)
        assert got == pytest.approx(expected, rel=1e-12)
        assert got == pytest.approx(13642, rel=1e-3)

    def test_log_floor(self):
        val = sample_complexity(1.0, 0.5, 64, tau=0.125)
        assert val == pytest.approx(4.0 * math.log(64))

    def test_tau_scaling(self):
        base = sample_complexity(2.0, 0.5, 64, tau=64**-0.5)
        scaled = sample_complexity(2.0, 0.5, 64, tau=2 * 64**-0.5)
        assert scaled == pytest.approx(4 * base)

    def test_domain_checks(self):
        with pytest.raises(ValueError):
            sample_complexity(0.5, 0.5, 64, tau=0.125)
        with pytest.raises(ValueError):
            sample_complexity(2.0, 1.5, 64, tau=0.125)


class TestErasureStatistics:
    def test_small_theta_near_one(self):
        stats = erasure_row_statistics(100, 5, 1e-6, 2, trials=100, seed=0)
        assert stats.exact_prob > 0.999

    def test_binomial_cdf_oracle(self):
        stats = erasure_row_statistics(100, 10, 0.05, 2, trials=10_000, seed=1)
        oracle = float(binom.cdf(24, 100, 0.05)) ** 10
        assert stats.exact_prob == pytest.approx(oracle, rel=1e-12)
        assert abs(stats.empirical_prob - stats.exact_prob) <= 0.02

    def test_monotone_in_n(self):
        probs = [
            erasure_row_statistics(N, 10, 0.05, 2, trials=10, seed=0).exact_prob
            for N in (50, 100, 200, 400)
        ]
        assert all(b >= a for a, b in zip(probs, probs[1:]))

    def test_theta_hypothesis_enforced(self):
        with pytest.raises(ValueError):
            erasure_row_statistics(100, 10, 0.3, 2, trials=10, seed=0)
