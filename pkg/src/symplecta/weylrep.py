"""Finite-dimensional Weyl systems on the configuration grid.

The state space is C^M, M = N^n, holding samples of functions on the self-dual
configuration grid.  The standard Weyl operator acts by

    (W_std(y, p) v)(x) = e^{i <x - y/2, p>} v(x - y),

with the shift realized on the Fourier side (exact for lattice y, band-limited
and still unitary for fractional y) and the modulation exact pointwise.  The
T-twisted system is W_tilde(xi) = W_std(phi xi) with the deterministic
symplectomorphism phi normalizing the form built from S = T + T^sigma, and
W(xi) = e^{-(i/2) sigma(xi, T xi)} W_tilde(xi).  The conjugators are
U(xi) = W_tilde(S^{-1} xi).
"""

from dataclasses import dataclass, field

import numpy as np

from .grid import GridFunction, PhaseGrid
from .symplin import (SymplecticSpace, factor_sigma_symmetric, nondegeneracy_gate,
                      sigma_eval)


@dataclass(frozen=True)
class ConfigGrid:
    """Self-dual grid on the configuration space V = R^n; state dimension M = N^n."""

    n: int
    N: int

    @property
    def h(self):
        return np.sqrt(2 * np.pi / self.N)

    @property
    def M(self):
        return self.N ** self.n

    @property
    def axis(self):
        return (np.arange(self.N) - self.N // 2) * self.h

    def coords(self):
        """Flattened coordinates of all M configuration points, shape (M, n)."""
        mesh = np.meshgrid(*([self.axis] * self.n), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    def dft(self):
        """Centered unitary DFT matrix on C^M (tensor power of the 1-D kernel)."""
        F1 = np.exp(-1j * np.outer(self.axis, self.axis)) / np.sqrt(self.N)
        F = F1
        for _ in range(self.n - 1):
            F = np.kron(F, F1)
        return F


@dataclass
class RepContext:
    """A prepared representation: T, S = T + T^sigma, the normalizing phi, grids."""

    space: SymplecticSpace
    T: np.ndarray
    S: np.ndarray
    phi: np.ndarray
    detS: float
    config: ConfigGrid
    phase_grid: PhaseGrid
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def Sinv(self):
        return np.linalg.inv(self.S)

    def lam_values(self, pts):
        """lambda(xi) = e^{-(i/2) sigma(xi, T xi)} on an array of points."""
        return np.exp(-0.5j * sigma_eval(self.space, pts, pts @ self.T.T))


def build_rep_context(space, T, config):
    """Gate nondegeneracy, factor S, and package the representation data."""
    T = np.asarray(T, dtype=float)
    gate = nondegeneracy_gate(space, T)
    if not gate.nondegenerate:
        raise ValueError(
            "degenerate multiplier: T + T^sigma is singular; kernel witness "
            f"{np.array2string(gate.kernel_witness, precision=6)}")
    phi = factor_sigma_symmetric(space, gate.S)
    if np.abs(phi.T @ space.J @ phi - space.J @ gate.S).max() > 1e-9:
        raise ArithmeticError("phi does not normalize the S-twisted form")
    if gate.detS <= 0:
        raise ArithmeticError("det S must be positive for sigma-symmetric invertible S")
    return RepContext(space=space, T=T, S=gate.S, phi=phi, detS=gate.detS,
                      config=config, phase_grid=PhaseGrid(space.n, config.N))


def _config_ops(config):
    key_cache = getattr(config, "_ops", None)
    x = config.coords()  # (M, n)
    F = config.dft()
    k = x  # self-dual: frequency lattice equals the coordinate lattice
    return x, k, F


def weyl_standard(config, xi):
    """The standard Weyl unitary W_std(y, p) for xi = (y, p), y, p in R^n."""
    xi = np.asarray(xi, dtype=float)
    n = config.n
    y, p = xi[:n], xi[n:]
    x, k, F = _config_ops(config)
    shift = F.conj().T @ (np.exp(-1j * (k @ y))[:, None] * F)
    mod = np.exp(1j * ((x - y / 2) @ p))
    return mod[:, None] * shift


def weyl_tilde(ctx, xi):
    """W_tilde(xi) = W_std(phi xi): the normalized (Weyl-relation) system."""
    xi = np.asarray(xi, dtype=float)
    key = ("wt", tuple(np.round(xi, 12)))
    got = ctx._cache.get(key)
    if got is None:
        got = weyl_standard(ctx.config, ctx.phi @ xi)
        ctx._cache[key] = got
    return got


def weyl_W(ctx, xi):
    """W(xi) = e^{-(i/2) sigma(xi, T xi)} W_tilde(xi): the omega-representation."""
    xi = np.asarray(xi, dtype=float)
    lam = np.exp(-0.5j * sigma_eval(ctx.space, xi, ctx.T @ xi))
    return lam * weyl_tilde(ctx, xi)


def u_conjugator(ctx, xi):
    """U(xi) = W_tilde(S^{-1} xi): the translation-covariance conjugator."""
    return weyl_tilde(ctx, ctx.Sinv @ np.asarray(xi, dtype=float))


def field_generator(ctx, xi, t_step=1e-4):
    """Central-difference generator of the one-parameter group t -> W_tilde(t xi)."""
    if not (0 < t_step <= 1e-3):
        raise ValueError("t_step must lie in (0, 1e-3]")
    xi = np.asarray(xi, dtype=float)
    Wp = weyl_standard(ctx.config, ctx.phi @ (t_step * xi))
    Wm = weyl_standard(ctx.config, ctx.phi @ (-t_step * xi))
    return (Wp - Wm) / (2j * t_step)


def u_conjugator_batch(ctx, pts):
    """Stack of U(xi) over an array of phase points, shape (P, M, M).

    Vectorized over the shift axis; intended for synthesis sums at modest N.
    """
    pts = np.asarray(pts, dtype=float)
    n = ctx.space.n
    eta = pts @ (ctx.phi @ ctx.Sinv).T  # arguments of W_std
    y, p = eta[:, :n], eta[:, n:]
    x, k, F = _config_ops(ctx.config)
    ramps = np.exp(-1j * (y @ k.T))  # (P, M) frequency ramps
    shifts = np.einsum("ak,ik,kb->iab", F.conj().T, ramps, F, optimize=True)
    mods = np.exp(1j * ((x[None, :, :] - y[:, None, :] / 2) * p[:, None, :]).sum(-1))
    return mods[:, :, None] * shifts


def orthogonality_integral(ctx, phi_v, psi_v):
    """Grid integral of |<phi_v, U(xi) psi_v>|^2 over the whole phase grid.

    For unit vectors this approximates (det S)^{1/2} ||phi||^2 ||psi||^2.
    """
    pts = ctx.phase_grid.points()
    phi_c = np.conj(np.asarray(phi_v, complex).ravel())
    psi = np.asarray(psi_v, complex).ravel()
    total = 0.0
    chunk = 256
    for i0 in range(0, pts.shape[0], chunk):
        U = u_conjugator_batch(ctx, pts[i0:i0 + chunk])
        vals = np.einsum("a,iab,b->i", phi_c, U, psi, optimize=True)
        total += float(np.sum(np.abs(vals) ** 2))
    return total * ctx.phase_grid.weight


def matrix_coefficient(ctx, phi_v, psi_v):
    """Sample w(xi) = <phi_v, W(xi) psi_v> over the whole phase grid.

    Uses the split W(xi) = lam(xi) modulation . shift: for each lattice shift
    the inner products against all modulations reduce to one small dense
    transform, so the full map costs O(N^{2n+... }) without materializing any
    unitaries.  Requires the context's phi to act as a lattice map on the
    shift block (true for the built-in factorizations).
    """
    grid = ctx.phase_grid
    n, N = grid.n, grid.N
    pts = grid.points()
    lam = ctx.lam_values(pts)
    eta = pts @ ctx.phi.T
    y_all = eta[:, :n]
    p_all = eta[:, n:]
    x, k, F = _config_ops(ctx.config)
    phi_c = np.conj(np.asarray(phi_v, complex).ravel())
    psi = np.asarray(psi_v, complex).ravel()
    psi_hat = F @ psi
    vals = np.empty(pts.shape[0], complex)
    # lexicographic order: the first n axes (shift block) vary slowest
    block = N ** n
    for b in range(pts.shape[0] // block):
        y = y_all[b * block]  # constant within the block
        shifted = F.conj().T @ (np.exp(-1j * (k @ y)) * psi_hat)
        v = phi_c * shifted
        P = p_all[b * block:(b + 1) * block]  # (block, n)
        E = np.exp(1j * ((x[None, :, :] - y[None, None, :] / 2) * P[:, None, :]).sum(-1))
        vals[b * block:(b + 1) * block] = E @ v
    return GridFunction(grid, lam * vals)
