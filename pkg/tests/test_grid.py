import numpy as np
import pytest

from conftest import gaussian
from symplecta.grid import (GridFunction, PhaseGrid, SymbolSpec, apply_multiplier,
                            make_grid, pullback, read_grid_function, sample_symbol,
                            sigma_convolve, symplectic_fourier, translate,
                            write_grid_function)

rng = np.random.default_rng(37)


def test_grid_self_duality_and_weight():
    g = make_grid(1, 32)
    assert abs(g.h ** 2 * g.N - 2 * np.pi) < 1e-12
    assert g.weight == 1.0 / 32
    assert abs(g.box_length - g.N * g.h) < 1e-12
    g2 = make_grid(2, 8)
    assert g2.weight == 8.0 ** (-2)
    assert g2.points().shape == (8 ** 4, 4)


def test_grid_validation():
    with pytest.raises(ValueError):
        make_grid(3, 32)
    with pytest.raises(ValueError):
        make_grid(1, 31)
    with pytest.raises(ValueError):
        make_grid(1, 2)


def test_grid_function_validation():
    g = make_grid(1, 8)
    with pytest.raises(ValueError):
        GridFunction(g, np.ones(63))
    with pytest.raises(ValueError):
        GridFunction(g, np.full(64, np.nan))


def test_norm_matches_gaussian_integral():
    g = make_grid(1, 64)
    # normalized measure: integral of a width-1 Gaussian over the plane is 1
    assert abs(gaussian(g, 1.0).norm_lp(1) - 1.0) < 1e-10
    ones = GridFunction(g, np.ones(64 * 64))
    assert ones.norm_lp(np.inf) == 1.0


@pytest.mark.parametrize("N", [16, 32, 64])
def test_symplectic_fourier_involution_and_isometry(N):
    g = make_grid(1, N)
    for _ in range(5):
        f = GridFunction(g, rng.standard_normal(N * N)
                         + 1j * rng.standard_normal(N * N))
        ff = symplectic_fourier(symplectic_fourier(f))
        sc = np.linalg.norm(f.values)
        assert np.linalg.norm(ff.values - f.values) / sc < 1e-10
        assert abs(np.linalg.norm(symplectic_fourier(f).values) - sc) / sc < 1e-10


def test_standard_gaussian_is_transform_fixed_point():
    g = make_grid(1, 64)
    f = gaussian(g, 1.0)
    assert np.abs(symplectic_fourier(f).values - f.values).max() < 1e-8


def test_apply_multiplier_identity_and_error():
    g = make_grid(1, 16)
    f = gaussian(g, 1.1)
    out = apply_multiplier(np.ones((16, 16)), f)
    assert np.abs(out.values - f.values).max() < 1e-12
    lam = np.ones((16, 16))
    lam[3, 5] = np.inf
    with pytest.raises(ArithmeticError):
        apply_multiplier(lam, f)
    # callable form evaluates on the phase points
    out2 = apply_multiplier(lambda pts: np.ones(pts.shape[0]), f)
    assert np.abs(out2.values - f.values).max() < 1e-12


def test_exact_pullback_composes_contravariantly():
    g = make_grid(1, 16)
    f = GridFunction(g, rng.standard_normal(256) + 1j * rng.standard_normal(256))
    A = np.array([[1.0, 1.0], [0.0, 1.0]])
    B = np.array([[1.0, 0.0], [-2.0, 1.0]])
    lhs = pullback(A, pullback(B, f, "exact"), "exact")
    rhs = pullback(B @ A, f, "exact")
    assert np.abs(lhs.values - rhs.values).max() == 0.0


def test_resampled_pullback_matches_exact_on_lattice_maps():
    g = make_grid(1, 16)
    f = GridFunction(g, rng.standard_normal(256) + 1j * rng.standard_normal(256))
    A = np.array([[1.0, 1.0], [0.0, 1.0]])
    ex = pullback(A, f, "exact")
    rs = pullback(A, f, "resampled")
    assert np.abs(ex.values - rs.values).max() < 1e-9


def test_truncated_pullback_zeroes_escaping_points():
    g = make_grid(1, 8)
    f = GridFunction(g, np.ones(64))
    out = pullback(2 * np.eye(2), f, "truncated")
    # 2*xi stays in the box only for indices in [-2, 2)
    v = out.values
    assert v[4 - 2, 4] == 1.0 and v[4, 4 + 1] == 1.0
    assert v[0, 4] == 0.0 and v[7, 4] == 0.0


def test_exact_pullback_requires_lattice_map():
    g = make_grid(1, 8)
    f = gaussian(g)
    with pytest.raises(ValueError):
        pullback(1.5 * np.eye(2), f, "exact")
    with pytest.raises(ValueError):
        pullback(np.zeros((2, 2)), f)


def test_diagonal_resample_matches_dense_evaluation():
    g = make_grid(1, 16)
    f = gaussian(g, 1.2, tilt=0.2)
    A = np.diag([0.5, 2.0])
    fast = pullback(A, f, "resampled")
    # dense oracle: evaluate the trigonometric expansion point by point
    N = 16
    fk = np.fft.fftshift(np.fft.fftn(np.fft.ifftshift(f.values))) / N ** 2
    pts = g.points()
    dense = (np.exp(1j * ((pts @ A.T) @ pts.T)) @ fk.ravel()).reshape(N, N)
    assert np.abs(fast.values - dense).max() < 1e-9


def test_translate_lattice_matches_band_limited_route():
    g = make_grid(1, 16)
    f = gaussian(g, 1.0)
    xi = np.array([2.0, -3.0]) * g.h
    rolled = translate(xi, f)
    smooth = translate(xi, f, mode="resampled")
    assert np.abs(rolled.values - smooth.values).max() < 1e-9


def test_convolution_identity_element():
    g = make_grid(1, 32)
    f = gaussian(g, 1.3, tilt=0.4)
    dv = np.zeros((32, 32))
    dv[16, 16] = 1.0 / g.weight
    delta = GridFunction(g, dv)
    out = sigma_convolve(delta, f)
    assert np.abs(out.values - f.values).max() < 1e-12
    out2 = sigma_convolve(f, delta)
    assert np.abs(out2.values - f.values).max() < 1e-12


def test_convolution_grid_mismatch():
    with pytest.raises(ValueError):
        sigma_convolve(gaussian(make_grid(1, 16)), gaussian(make_grid(1, 32)))


def test_symbol_sampling_kinds():
    g = make_grid(1, 32)
    gauss = sample_symbol(SymbolSpec(kind="gaussian", center=(0.5, -0.5)), g)
    pk = np.unravel_index(np.argmax(np.abs(gauss.values)), gauss.values.shape)
    pts = g.points().reshape(32, 32, 2)
    assert np.abs(pts[pk] - np.array([0.5, -0.5])).max() < g.h
    chirp = sample_symbol(SymbolSpec(kind="chirp-gaussian",
                                     chirp=(0.0, 1.0, 1.0, 0.0)), g)
    assert np.abs(np.abs(chirp.values)
                  - sample_symbol(SymbolSpec(kind="gaussian"), g).values).max() < 1e-12
    herm = sample_symbol(SymbolSpec(kind="hermite-gaussian",
                                    hermite_index=(1, 0)), g)
    assert np.abs(herm.values[1:, :] + herm.values[:0:-1, :]).max() < 1e-10
    poly = sample_symbol(SymbolSpec(kind="polynomial-times-gaussian",
                                    poly_coeffs=(1.0, 2.0)), g)
    mid = poly.values[16, 16]
    assert abs(mid - 1.0) < 1e-12
    with pytest.raises(ValueError):
        sample_symbol(SymbolSpec(kind="plane-wave"), g)
    with pytest.raises(ValueError):
        sample_symbol(SymbolSpec(kind="gaussian",
                                 covariance=(1.0, 1e-9)), g)


def test_grid_file_round_trip(tmp_path):
    g = make_grid(1, 16)
    f = GridFunction(g, rng.standard_normal(256) + 1j * rng.standard_normal(256))
    path = tmp_path / "f.sgrid"
    write_grid_function(f, path)
    back = read_grid_function(path)
    assert back.grid == g
    assert np.array_equal(back.values, f.values)


def test_grid_file_rejects_foreign_header(tmp_path):
    path = tmp_path / "bad.sgrid"
    path.write_text("something else\n1,2\n")
    with pytest.raises(ValueError):
        read_grid_function(path)
