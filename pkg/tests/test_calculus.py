import numpy as np
import pytest

from conftest import SUITE_T, gaussian, make_ctx
from symplecta.calculus import (inverse_lambda_transform, lambda_transform,
                                quantize_T, quantize_theta_tau_kernel,
                                quantize_weyl, read_operator, recover_symbol,
                                write_operator)
from symplecta.grid import GridFunction, make_grid

rng = np.random.default_rng(53)


@pytest.mark.parametrize("name", sorted(SUITE_T))
def test_unit_symbol_quantizes_to_identity(name):
    ctx = make_ctx(SUITE_T[name], N=32)
    ones = GridFunction(ctx.phase_grid, np.ones((32, 32)))
    A = quantize_T(ctx, ones)
    assert np.abs(A - np.eye(32)).max() < 1e-9


@pytest.mark.parametrize("name,N,width", [("half", 32, 1.0),
                                          ("general", 32, 1.0),
                                          ("unit", 64, 1.5)])
def test_two_quantization_routes_agree(name, N, width):
    ctx = make_ctx(SUITE_T[name], N=N)
    a = gaussian(ctx.phase_grid, width, center=(0.4, -0.2), tilt=0.1)
    A1 = quantize_T(ctx, a)
    A2 = quantize_weyl(ctx, lambda_transform(ctx, a))
    scale = np.abs(A1).max()
    assert np.abs(A1 - A2).max() / scale < 1e-7


def test_symbol_transform_round_trip_unit_scaling():
    # S = identity: the transform is a pure multiplier, inverted exactly
    ctx = make_ctx(SUITE_T["general"], N=32)
    a = gaussian(ctx.phase_grid, 1.1, tilt=0.3)
    back = inverse_lambda_transform(ctx, lambda_transform(ctx, a))
    assert np.abs(back.values - a.values).max() < 1e-9


def test_symbol_transform_round_trip_expanding_scaling():
    # S = 2I: truncation + band-limited resampling, accurate for decaying symbols
    ctx = make_ctx(SUITE_T["unit"], N=64)
    a = gaussian(ctx.phase_grid, 1.5)
    back = inverse_lambda_transform(ctx, lambda_transform(ctx, a))
    assert np.abs(back.values - a.values).max() < 1e-6


@pytest.mark.parametrize("theta,tau", [(0.5, 0.5), (1.0, 0.0), (0.3, 0.7)])
def test_kernel_route_matches_synthesis(theta, tau):
    T = np.diag([tau, theta])
    ctx = make_ctx(T, N=32)
    a = gaussian(ctx.phase_grid, 1.0, center=(0.2, 0.1))
    A1 = quantize_T(ctx, a)
    A2 = quantize_theta_tau_kernel(ctx.phase_grid, theta, tau, a)
    assert np.abs(A1 - A2).max() / np.abs(A1).max() < 1e-7


def test_kernel_route_unit_symbol_is_identity():
    g = make_grid(1, 32)
    ones = GridFunction(g, np.ones((32, 32)))
    K = quantize_theta_tau_kernel(g, 0.5, 0.5, ones)
    assert np.abs(K - np.eye(32)).max() < 1e-9


def test_kernel_route_requires_one_degree_of_freedom():
    g = make_grid(2, 8)
    with pytest.raises(ValueError):
        quantize_theta_tau_kernel(g, 0.5, 0.5,
                                  GridFunction(g, np.ones((8,) * 4)))


@pytest.mark.parametrize("name,N,width,tol", [("half", 32, 1.0, 1e-8),
                                              ("diag37", 32, 1.0, 1e-8),
                                              ("general", 32, 1.0, 1e-8),
                                              ("unit", 64, 1.4, 1e-6)])
def test_symbol_recovery_round_trip(name, N, width, tol):
    ctx = make_ctx(SUITE_T[name], N=N)
    a = gaussian(ctx.phase_grid, width, center=(0.3, -0.1), tilt=0.2)
    back = recover_symbol(ctx, quantize_T(ctx, a))
    assert np.abs(back.values - a.values).max() < tol


def test_symbol_recovery_of_identity_is_unit_symbol():
    ctx = make_ctx(SUITE_T["half"], N=32)
    back = recover_symbol(ctx, np.eye(32))
    assert np.abs(back.values - 1.0).max() < 1e-9


def test_quantization_is_linear():
    ctx = make_ctx(SUITE_T["general"], N=16)
    a = gaussian(ctx.phase_grid, 1.0)
    b = gaussian(ctx.phase_grid, 0.8, center=(0.5, 0.5))
    comb = GridFunction(ctx.phase_grid, 2.0 * a.values - 1j * b.values)
    lhs = quantize_T(ctx, comb)
    rhs = 2.0 * quantize_T(ctx, a) - 1j * quantize_T(ctx, b)
    assert np.abs(lhs - rhs).max() < 1e-10


def test_symmetric_quantization_of_real_symbol_is_hermitian():
    ctx = make_ctx(SUITE_T["half"], N=32)
    a = gaussian(ctx.phase_grid, 1.0, center=(0.3, 0.2), tilt=0.4)
    A = quantize_T(ctx, a)
    assert np.abs(A - A.conj().T).max() < 1e-10


def test_operator_file_round_trip(tmp_path):
    A = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    path = tmp_path / "op.txt"
    write_operator(A, path)
    assert np.array_equal(read_operator(path), A)


def test_operator_file_rejects_foreign_header(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("matrix 8x8\n")
    with pytest.raises(ValueError):
        read_operator(path)
    with pytest.raises(ValueError):
        write_operator(np.ones((2, 3)), tmp_path / "rect.txt")
