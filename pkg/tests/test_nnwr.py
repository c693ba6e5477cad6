import numpy as np
import pytest

from fracwr.geometry import build_partition, build_subdomain_2d
from fracwr.nnwr import (
    Nnwr2dConfig,
    NnwrConfig,
    optimal_theta_nnwr,
    run_nnwr_1d,
    run_nnwr_2d,
)
from fracwr.solver import solve_monolithic


def test_optimal_theta_values():
    assert optimal_theta_nnwr(1.0, 1.0) == pytest.approx(0.25)
    assert optimal_theta_nnwr(1.0, 4.0) == pytest.approx(1 / 4.5)
    assert optimal_theta_nnwr(4.0, 1.0) == pytest.approx(optimal_theta_nnwr(1.0, 4.0))
    with pytest.raises(ValueError):
        optimal_theta_nnwr(-1.0, 1.0)


def _config(**overrides):
    base = dict(
        partition=build_partition((0, 4), [1.0, 2.0, 3.0], 1.0, 0.1),
        order=0.5,
        horizon=1.0,
        n_steps=16,
        thetas="optimal",
        tolerance=1e-10,
        max_iter=25,
        mode="error_equation",
    )
    base.update(overrides)
    return NnwrConfig(**base)


def test_config_validation():
    with pytest.raises(ValueError):
        _config(thetas=1.5)
    with pytest.raises(ValueError):
        _config(thetas=[0.25, 0.25])  # wrong length for 3 interfaces
    with pytest.raises(ValueError):
        _config(scheduler="processes")


def test_resolve_thetas_per_interface():
    part = build_partition((0, 3), [1.0, 2.0], [1.0, 4.0, 1.0], 0.1)
    cfg = _config(partition=part)
    np.testing.assert_allclose(cfg.resolve_thetas(), [1 / 4.5, 1 / 4.5])


def test_zero_guess_zero_data_stays_zero():
    cfg = _config(initial_guess=0.0, max_iter=3, tolerance=1e-30)
    res = run_nnwr_1d(cfg)
    assert np.all(res.report.errors == 0.0)
    assert np.all(res.traces == 0.0)


def test_sequential_threads_bitwise_identical():
    cfg_s = _config(max_iter=6, tolerance=1e-30, scheduler="sequential")
    cfg_t = _config(max_iter=6, tolerance=1e-30, scheduler="threads")
    res_s = run_nnwr_1d(cfg_s)
    res_t = run_nnwr_1d(cfg_t)
    assert np.array_equal(res_s.report.errors, res_t.report.errors)
    assert np.array_equal(res_s.traces, res_t.traces)


def test_superlinear_at_optimal_weight():
    part = build_partition((0, 16), [3.2, 6.4, 9.6, 12.8], 1.0, 0.05)
    cfg = _config(partition=part, horizon=4.0, n_steps=48, max_iter=8, tolerance=1e-13)
    errs = run_nnwr_1d(cfg).report.sup_errors
    useful = errs[errs > 1e-13]
    dlog = np.diff(np.log(useful))
    assert np.all(np.diff(dlog) < 0.0)  # log-error curve concave down


def test_fixed_point_from_monolithic_traces():
    part = build_partition((0, 16), [3.5, 5.5, 10, 12], [0.25, 1.0, 0.25, 4.0, 1.0], 0.1)
    cfg = _config(partition=part, horizon=2.0, n_steps=20, mode="forced",
                  source=lambda x, t: np.sin(np.pi * x / 16),
                  initial_condition=lambda x: x * (16 - x) / 64,
                  max_iter=1, tolerance=1e-30)
    mono = solve_monolithic(cfg.partition, cfg.build_weights(), f=cfg.source,
                            u0=cfg.initial_condition)
    cfg2 = _config(partition=part, horizon=2.0, n_steps=20, mode="forced",
                   source=cfg.source, initial_condition=cfg.initial_condition,
                   max_iter=1, tolerance=1e-30, initial_guess=mono.interface_traces())
    res = run_nnwr_1d(cfg2)
    assert res.report.errors[0].max() <= 1e-12


def test_two_subdomain_case_runs():
    part = build_partition((0, 2), [1.0], 1.0, 0.05)
    cfg = _config(partition=part, max_iter=20, tolerance=1e-10)
    res = run_nnwr_1d(cfg)
    assert res.report.converged


def test_wave_order_converges():
    part = build_partition((0, 16), [3.2, 6.4, 9.6, 12.8], 1.0, 0.05)
    cfg = _config(partition=part, order=1.5, horizon=4.0, n_steps=48,
                  max_iter=10, tolerance=1e-10)
    res = run_nnwr_1d(cfg)
    assert res.report.converged
    assert res.report.iterations <= 4


# ---------------------------------------------------------------------------
# 2D driver
# ---------------------------------------------------------------------------

def _config_2d(**overrides):
    base = dict(
        left=build_subdomain_2d(0.0, 0.5, -2.0, 2.0, 1.0, 0.05, 0.25),
        right=build_subdomain_2d(0.5, 2.0, -2.0, 2.0, 1.0, 0.05, 0.25),
        order=0.5,
        horizon=1.0,
        n_steps=12,
        theta=0.25,
        tolerance=1e-9,
        max_iter=10,
        mode="error_equation",
    )
    base.update(overrides)
    return Nnwr2dConfig(**base)


def test_2d_config_validation():
    bad_right = build_subdomain_2d(0.6, 2.0, -2.0, 2.0, 1.0, 0.05, 0.25)
    with pytest.raises(ValueError):
        _config_2d(right=bad_right)
    bad_lattice = build_subdomain_2d(0.5, 2.0, -2.0, 2.0, 1.0, 0.05, 0.5)
    with pytest.raises(ValueError):
        _config_2d(right=bad_lattice)


def test_2d_optimal_theta_is_quarter():
    assert _config_2d(theta="optimal").resolve_theta() == pytest.approx(0.25)


def test_2d_zero_guess_stays_zero():
    cfg = _config_2d(initial_guess=0.0, max_iter=2, tolerance=1e-30)
    res = run_nnwr_2d(cfg)
    assert np.all(res.report.errors == 0.0)


@pytest.mark.parametrize("sweeps", [1, 3])
def test_2d_matches_1d_at_mid_strip(sweeps):
    # y-independent guess: the trace iterate at the mid row reproduces the 1D
    # iterate; the strip must be wide enough that the heavy-tailed influence
    # of the truncated y-boundary stays below the comparison tolerance
    left = build_subdomain_2d(0.0, 0.5, -12.0, 12.0, 1.0, 0.05, 0.25)
    right = build_subdomain_2d(0.5, 2.0, -12.0, 12.0, 1.0, 0.05, 0.25)
    cfg = _config_2d(left=left, right=right, max_iter=sweeps, tolerance=1e-30)
    res2d = run_nnwr_2d(cfg)
    part = build_partition((0, 2), [0.5], 1.0, 0.05)
    cfg1d = NnwrConfig(partition=part, order=0.5, horizon=1.0, n_steps=12,
                       thetas=0.25, tolerance=1e-30, max_iter=sweeps,
                       mode="error_equation")
    res1d = run_nnwr_1d(cfg1d)
    mid = left.ny // 2
    assert np.abs(res2d.traces[:, mid] - res1d.traces[0]).max() < 1e-6


def test_2d_sequential_threads_bitwise_identical():
    cfg_s = _config_2d(max_iter=3, tolerance=1e-30, scheduler="sequential")
    cfg_t = _config_2d(max_iter=3, tolerance=1e-30, scheduler="threads")
    assert np.array_equal(run_nnwr_2d(cfg_s).traces, run_nnwr_2d(cfg_t).traces)
