import numpy as np
import pytest

from symzeig import (
    SolverConfig,
    conservative_shift,
    contract,
    identity_tensor,
    labeling_tensor,
    multistart,
    random_start,
    sshopm,
    sshopm_adaptive,
    symmetrize,
)
from symzeig.tensors import from_unique_entries, num_unique_entries

from helpers import random_sym_tensor, random_unit


class TestConservativeShift:
    def test_labeling_is_288(self):
        assert conservative_shift(labeling_tensor(3, 3)) == 288.0

    def test_zero_tensor(self):
        t = from_unique_entries(3, 3, np.zeros(num_unique_entries(3, 3)))
        assert conservative_shift(t) == 0.0

    def test_small_matrix_hand_sum(self):
        t = from_unique_entries(2, 2, [1.0, 2.0, 3.0])
        assert conservative_shift(t) == 8.0


class TestSshopm:
    def test_identity_tensor_converges_in_one_step(self):
        t = identity_tensor(4, 3)
        r = sshopm(t, np.array([0.3, -0.5, 0.8]), 0.0, SolverConfig())
        assert r.converged and r.iterations == 1
        assert r.eigenpair.lam == pytest.approx(1.0, abs=1e-12)

    def test_matrix_power_iteration_finds_dominant(self):
        rng = np.random.default_rng(0)
        m = rng.standard_normal((4, 4))
        m = m @ m.T + 0.1 * np.eye(4)  # positive definite
        t = symmetrize((m + m.T) / 2)
        r = sshopm(t, random_unit(4, rng), 0.0, SolverConfig(max_iter=20000))
        assert r.converged
        assert r.eigenpair.lam == pytest.approx(
            np.linalg.eigvalsh(t.array)[-1], rel=1e-10
        )

    def test_fixed_shift_lambda_monotone(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            t = random_sym_tensor(3, 3, rng)
            alpha = conservative_shift(t)
            r = sshopm(t, random_unit(3, rng), alpha, SolverConfig(max_iter=3000))
            lams = [row.lam for row in r.trace]
            assert all(b >= a - 1e-12 for a, b in zip(lams, lams[1:]))

    def test_negative_shift_descends(self):
        rng = np.random.default_rng(2)
        t = random_sym_tensor(3, 3, rng)
        alpha = -conservative_shift(t)
        r = sshopm(t, random_unit(3, rng), alpha, SolverConfig(max_iter=3000))
        lams = [row.lam for row in r.trace]
        assert all(b <= a + 1e-12 for a, b in zip(lams, lams[1:]))

    def test_converged_pairs_respect_residual_bound(self):
        rng = np.random.default_rng(3)
        t = random_sym_tensor(3, 4, rng)
        ms = multistart(t, 20, SolverConfig(max_iter=3000), dist="sphere")
        bound = max(1e-8, 10 * 1e-15) * max(1.0, t.norm())
        assert ms.converged_count > 0
        for r in ms.results:
            if r.converged:
                assert r.eigenpair.residual <= bound
                assert abs(np.linalg.norm(r.eigenpair.x) - 1.0) <= 1e-12

    def test_zero_start_rejected(self):
        with pytest.raises(ValueError, match="nonzero"):
            sshopm(labeling_tensor(3, 3), np.zeros(3), 1.0, SolverConfig())


class TestSshopmAdaptive:
    def test_shift_is_zero_when_locally_convex(self):
        # identity tensor: A x^{d-2} is positive definite on the sphere
        t = identity_tensor(4, 3)
        x = random_unit(3, np.random.default_rng(4))
        h = contract(t, x, 2)
        assert np.linalg.eigvalsh(h)[0] > 0
        cfg = SolverConfig(adaptive_target=1e-6)
        r = sshopm_adaptive(t, x, cfg)
        assert r.converged
        assert all(row.alpha == 0.0 for row in r.trace[1:])

    def test_lambda_monotone_along_trajectories(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            t = random_sym_tensor(3, 3, rng)
            r = sshopm_adaptive(t, random_unit(3, rng), SolverConfig(max_iter=3000))
            lams = [row.lam for row in r.trace]
            assert all(b >= a - 1e-12 for a, b in zip(lams, lams[1:]))

    def test_labeling_dominant_needs_far_fewer_iterations(self):
        t = labeling_tensor(3, 3)
        cfg = SolverConfig(max_iter=5000)
        ms = multistart(t, 30, cfg, adaptive=True, dist="uniform")
        its = [
            r.iterations
            for r in ms.results
            if r.converged and abs(r.eigenpair.lam - 30.4557) <= 1e-3
        ]
        assert len(its) >= 10
        assert np.median(its) <= 60


class TestMultistart:
    def test_deterministic_given_seed(self):
        t = labeling_tensor(3, 3)
        cfg = SolverConfig(max_iter=500, seed=11)
        a = multistart(t, 5, cfg, alpha=288.0)
        b = multistart(t, 5, cfg, alpha=288.0)
        assert [r.iterations for r in a.results] == [r.iterations for r in b.results]
        assert [r.lam for r in a.results] == [r.lam for r in b.results]

    def test_default_alpha_is_conservative_shift(self):
        rng = np.random.default_rng(6)
        t = random_sym_tensor(3, 3, rng)
        ms = multistart(t, 3, SolverConfig(max_iter=200))
        for r in ms.results:
            assert r.trace[-1].alpha == pytest.approx(conservative_shift(t))

    def test_start_distributions(self):
        rng = np.random.default_rng(7)
        for dist in ("sphere", "uniform"):
            x = random_start(5, rng, dist)
            assert np.linalg.norm(x) == pytest.approx(1.0, abs=1e-12)
        with pytest.raises(ValueError, match="distribution"):
            random_start(5, rng, "bogus")
