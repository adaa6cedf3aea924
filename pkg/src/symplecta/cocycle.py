"""Schur multipliers attached to a linear map T and the regular projective
representation on phase-space grid functions.

omega(xi, eta) = e^{i sigma(xi, T eta)} is a 2-cocycle for every T; its
normalized companion omega_tilde(xi, eta) = e^{(i/2) sigma(xi, S eta)} with
S = T + T^sigma differs from omega by the coboundary of
mu(xi) = e^{(i/2) sigma(xi, T xi)}.  Nondegeneracy of the multiplier is
equivalent to invertibility of S.
"""

from dataclasses import dataclass

import numpy as np

from .grid import GridFunction
from .symplin import SymplecticSpace, sigma_eval, symplectic_adjoint


@dataclass(frozen=True)
class MultiplierContext:
    space: SymplecticSpace
    T: np.ndarray
    S: np.ndarray = None

    def __post_init__(self):
        T = np.asarray(self.T, dtype=float)
        object.__setattr__(self, "T", T)
        S = T + symplectic_adjoint(self.space, T)
        if self.S is not None and np.abs(np.asarray(self.S) - S).max() > 1e-13:
            raise ValueError("cached S does not match T + T^sigma")
        object.__setattr__(self, "S", S)


def omega(ctx, xi, eta):
    """The multiplier e^{i sigma(xi, T eta)}; supports batched arguments."""
    eta = np.asarray(eta, dtype=float)
    return np.exp(1j * sigma_eval(ctx.space, xi, eta @ ctx.T.T))


def omega_tilde(ctx, xi, eta):
    """The normalized multiplier e^{(i/2) sigma(xi, S eta)}."""
    eta = np.asarray(eta, dtype=float)
    return np.exp(0.5j * sigma_eval(ctx.space, xi, eta @ ctx.S.T))


def coboundary(ctx, xi):
    """mu(xi) = e^{(i/2) sigma(xi, T xi)}: the coboundary linking the two multipliers."""
    xi = np.asarray(xi, dtype=float)
    return np.exp(0.5j * sigma_eval(ctx.space, xi, xi @ ctx.T.T))


def coboundary_residual(ctx, samples):
    """Max over (xi, eta) samples of |omega_tilde/omega - mu(xi) mu(eta)/mu(xi+eta)|."""
    samples = list(samples)
    if not samples:
        raise ValueError("empty sample list")
    worst = 0.0
    for xi, eta in samples:
        xi = np.asarray(xi, float)
        eta = np.asarray(eta, float)
        lhs = omega_tilde(ctx, xi, eta) / omega(ctx, xi, eta)
        rhs = coboundary(ctx, xi) * coboundary(ctx, eta) / coboundary(ctx, xi + eta)
        worst = max(worst, abs(lhs - rhs))
    return worst


def cocycle_residual(ctx, triples):
    """Max residual of the cocycle equation om(xi,eta)om(xi+eta,zeta) = om(xi,eta+zeta)om(eta,zeta)."""
    worst = 0.0
    for xi, eta, zeta in triples:
        xi, eta, zeta = (np.asarray(v, float) for v in (xi, eta, zeta))
        lhs = omega(ctx, xi, eta) * omega(ctx, xi + eta, zeta)
        rhs = omega(ctx, xi, eta + zeta) * omega(ctx, eta, zeta)
        worst = max(worst, abs(lhs - rhs))
    return worst


def regular_representation(ctx, xi, f):
    """(R(xi) f)(eta) = omega(eta, xi) f(eta + xi) with periodic wraparound.

    xi must be a lattice point of f's grid (exact mode); the result is unitary
    on the grid inner product and satisfies R(xi)R(eta) = omega(xi,eta)R(xi+eta).
    """
    grid = f.grid
    xi = np.asarray(xi, dtype=float)
    idx = xi / grid.h
    idx_i = np.rint(idx)
    if np.abs(idx - idx_i).max() > 1e-9:
        raise ValueError("off-grid xi; use a lattice point (resampled mode is "
                         "available through grid.translate)")
    shifted = np.roll(f.values, shift=tuple(-int(k) for k in idx_i),
                      axis=tuple(range(grid.dim)))
    pts = grid.points()
    phase = omega(ctx, pts, np.broadcast_to(xi, pts.shape)).reshape(f.values.shape)
    return GridFunction(grid, phase * shifted)
