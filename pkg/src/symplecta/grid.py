"""Self-dual discretization of phase space and the symplectic Fourier transform.

A self-dual grid has N points per axis at spacing h = sqrt(2pi/N), so that
sigma between grid points is always an integer multiple of 2pi/N and the
discrete symplectic Fourier transform is an exact involution.  The phase-space
quadrature weight per point is w = (2pi)^{-n} h^{2n} = N^{-n}, matching the
normalized invariant measure.

Index order is lexicographic with the x-axes before the p-axes; for n=1 a
GridFunction's values array is indexed values[x, p].
"""

from dataclasses import dataclass

import numpy as np

from .symplin import SymplecticSpace, sigma_eval


@dataclass(frozen=True)
class PhaseGrid:
    """Uniform self-dual grid on W = R^{2n}."""

    n: int
    N: int

    def __post_init__(self):
        if self.n not in (1, 2):
            raise ValueError("n must be 1 or 2")
        if self.N % 2 != 0 or not (4 <= self.N <= 256):
            raise ValueError("N must be even and in [4, 256]")

    @property
    def h(self):
        return np.sqrt(2 * np.pi / self.N)

    @property
    def dim(self):
        return 2 * self.n

    @property
    def axis(self):
        """Centered axis coordinates {-N/2, ..., N/2-1} * h."""
        return (np.arange(self.N) - self.N // 2) * self.h

    @property
    def weight(self):
        """Quadrature weight per phase-space point, (2pi)^{-n} h^{2n} = N^{-n}."""
        return float(self.N) ** (-self.n)

    @property
    def box_length(self):
        return self.N * self.h

    def points(self):
        """All grid points as an (N^{2n}, 2n) array in lexicographic order."""
        mesh = np.meshgrid(*([self.axis] * self.dim), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    def space(self):
        return SymplecticSpace(self.n)


@dataclass
class GridFunction:
    """Complex-valued sampled symbol on a PhaseGrid (values shaped (N,)*2n)."""

    grid: PhaseGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        shape = (self.grid.N,) * self.grid.dim
        if v.size != self.grid.N ** self.grid.dim:
            raise ValueError("value count does not match the grid")
        self.values = v.reshape(shape)
        if not np.all(np.isfinite(self.values)):
            raise ValueError("grid function has non-finite values")

    def copy(self):
        return GridFunction(self.grid, self.values.copy())

    def norm_lp(self, p):
        """Weighted L^p norm with the phase-space weight N^{-n}."""
        w = self.grid.weight
        a = np.abs(self.values)
        if p == np.inf:
            return float(a.max())
        return float((np.sum(a**p) * w) ** (1.0 / p))


@dataclass(frozen=True)
class SymbolSpec:
    """Parametric test-symbol family member."""

    kind: str  # gaussian | hermite-gaussian | polynomial-times-gaussian | chirp-gaussian | file
    center: tuple = ()
    covariance: tuple = ()  # row-major 2n x 2n (or per-axis widths if length 2n)
    poly_coeffs: tuple = ()  # coefficients of a polynomial in the first coordinate
    chirp: tuple = ()  # row-major symmetric 2n x 2n chirp matrix
    hermite_index: tuple = ()
    path: str = ""


def make_grid(n, N):
    """Construct a self-dual PhaseGrid (validation in the dataclass)."""
    return PhaseGrid(n=n, N=N)


def _covariance_matrix(spec, d):
    if len(spec.covariance) == 0:
        return np.eye(d)
    cov = np.asarray(spec.covariance, dtype=float)
    if cov.size == d:
        cov = np.diag(cov**2)
    else:
        cov = cov.reshape(d, d)
    if np.linalg.cond(cov) > 1e8:
        raise ValueError("ill-conditioned covariance")
    return cov


def sample_symbol(spec, grid):
    """Pointwise evaluation of a SymbolSpec on the grid."""
    d = grid.dim
    pts = grid.points()
    center = np.zeros(d) if len(spec.center) == 0 else np.asarray(spec.center, float)
    z = pts - center
    if spec.kind == "file":
        return read_grid_function(spec.path)
    cov = _covariance_matrix(spec, d)
    quad = np.einsum("ia,ab,ib->i", z, np.linalg.inv(cov), z)
    vals = np.exp(-0.5 * quad).astype(complex)
    if spec.kind == "gaussian":
        pass
    elif spec.kind == "hermite-gaussian":
        idx = spec.hermite_index if spec.hermite_index else (1,) * d
        for ax, k in enumerate(idx):
            vals *= np.polynomial.hermite_e.hermeval(z[:, ax], [0] * k + [1])
    elif spec.kind == "polynomial-times-gaussian":
        coeffs = spec.poly_coeffs if spec.poly_coeffs else (0.0,)
        vals *= np.polyval(list(coeffs)[::-1], z[:, 0])
    elif spec.kind == "chirp-gaussian":
        C = np.asarray(spec.chirp, float).reshape(d, d)
        vals *= np.exp(0.5j * np.einsum("ia,ab,ib->i", z, C, z))
    else:
        raise ValueError(f"unknown symbol kind {spec.kind!r}")
    return GridFunction(grid, vals)


def symplectic_fourier(f):
    """Discrete symplectic Fourier transform (exact involution on self-dual grids).

    (F f)(xi) = sum_eta e^{-i sigma(xi, eta)} f(eta) w.  Realized as a forward
    FFT over the x-axes, an inverse FFT over the p-axes, and a swap of the two
    axis groups.
    """
    n = f.grid.n
    g = np.fft.ifftshift(f.values)
    g = np.fft.fftn(g, axes=tuple(range(n)))
    g = np.fft.ifftn(g, axes=tuple(range(n, 2 * n)))
    g = np.fft.fftshift(g)
    g = np.transpose(g, axes=tuple(range(n, 2 * n)) + tuple(range(n)))
    return GridFunction(f.grid, np.ascontiguousarray(g))


def apply_multiplier(lam, f):
    """Apply the sigma-Fourier multiplier lam: F (lam . F f).

    lam may be a GridFunction, an ndarray of grid values, or a callable
    evaluated on the grid points.
    """
    if isinstance(lam, GridFunction):
        lv = lam.values
    elif callable(lam):
        lv = np.asarray(lam(f.grid.points()), dtype=complex).reshape(f.values.shape)
    else:
        lv = np.asarray(lam, dtype=complex).reshape(f.values.shape)
    if not np.all(np.isfinite(lv)):
        bad = np.argwhere(~np.isfinite(lv))[0]
        raise ArithmeticError(f"non-finite multiplier value at index {tuple(bad)}")
    g = symplectic_fourier(f)
    return symplectic_fourier(GridFunction(f.grid, lv * g.values))


def _lattice_matrix(A, tol=1e-9):
    Ai = np.rint(A)
    if np.abs(A - Ai).max() > tol:
        return None
    return Ai.astype(int)


def _index_mesh(grid):
    idx = np.arange(grid.N) - grid.N // 2
    mesh = np.meshgrid(*([idx] * grid.dim), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)  # (P, 2n) integer coords


def pullback(A, f, mode="exact"):
    """Pullback A^* f = f(A .) on the grid.

    mode="exact": A must be integer in grid units; samples are permuted with
    periodic wraparound (unimodular lattice maps are exactly invertible).
    mode="resampled": values of the band-limited (trigonometric) extension of
    f at the points A * xi; the extension is periodic.
    mode="truncated": like exact/resampled but points A * xi that leave the
    fundamental box give 0 instead of wrapping — the faithful choice for
    expanding lattice maps applied to decaying symbols.
    """
    A = np.asarray(A, dtype=float)
    grid = f.grid
    if abs(np.linalg.det(A)) < 1e-14:
        raise ValueError("singular pullback map")
    N = grid.N
    if mode in ("exact", "truncated"):
        Ai = _lattice_matrix(A)
        if Ai is None:
            if mode == "exact":
                raise ValueError("exact pullback needs a lattice map; use mode='resampled'")
            return _resample(A, f, mask_outside=True)
        m = _index_mesh(grid)
        tgt = m @ Ai.T
        if mode == "exact":
            tgt_idx = (tgt + N // 2) % N
            flat = np.ravel_multi_index(tuple(tgt_idx.T), f.values.shape)
            out = f.values.ravel()[flat].reshape(f.values.shape)
        else:
            inside = np.all((tgt >= -N // 2) & (tgt < N // 2), axis=1)
            out = np.zeros(f.values.size, complex)
            tgt_idx = (tgt[inside] + N // 2)
            flat = np.ravel_multi_index(tuple(tgt_idx.T), f.values.shape)
            out[inside] = f.values.ravel()[flat]
            out = out.reshape(f.values.shape)
        return GridFunction(grid, out)
    if mode == "resampled":
        return _resample(A, f, mask_outside=False)
    raise ValueError(f"unknown pullback mode {mode!r}")


def _resample(A, f, mask_outside):
    """Trigonometric interpolation of f at the points A * xi over the grid."""
    grid = f.grid
    N, h, d = grid.N, grid.h, grid.dim
    L = grid.box_length
    # Fourier coefficients over the centered frequency lattice (same lattice).
    fk = np.fft.fftshift(np.fft.fftn(np.fft.ifftshift(f.values))) / N**d
    tgt = grid.points() @ A.T  # (P, d)
    if np.abs(np.abs(A) - np.abs(np.diag(np.diag(A)))).max() < 1e-14:
        # diagonal map: separable per-axis interpolation, O(d N^{d+1})
        out = fk
        for ax in range(d):
            E = np.exp(1j * np.outer(A[ax, ax] * grid.axis, grid.axis))  # (t, k)
            out = np.moveaxis(np.tensordot(E, np.moveaxis(out, ax, 0), axes=(1, 0)), 0, ax)
        vals = out
        if mask_outside:
            for ax in range(d):
                t = A[ax, ax] * grid.axis
                bad = (t < -L / 2 - 1e-12) | (t >= L / 2 - 1e-12)
                sl = [slice(None)] * d
                sl[ax] = bad
                vals[tuple(sl)] = 0.0
        return GridFunction(grid, vals)
    kpts = grid.points()
    vals = np.empty(tgt.shape[0], complex)
    fkv = fk.ravel()
    chunk = max(1, (1 << 22) // kpts.shape[0])
    for i0 in range(0, tgt.shape[0], chunk):
        ph = np.exp(1j * (tgt[i0:i0 + chunk] @ kpts.T))
        vals[i0:i0 + chunk] = ph @ fkv
    if mask_outside:
        inbox = np.all((tgt >= -L / 2 - 1e-12) & (tgt < L / 2 - 1e-12), axis=1)
        vals[~inbox] = 0.0
    return GridFunction(grid, vals.reshape(f.values.shape))


def translate(xi, f, mode="auto"):
    """Translate (tau_xi f)(.) = f(. - xi).

    Lattice xi: exact cyclic index shift.  Off-lattice xi (or mode="resampled"):
    the Fourier multiplier e^{-i sigma(., xi)}, i.e. a band-limited periodic shift.
    """
    grid = f.grid
    xi = np.asarray(xi, dtype=float)
    idx = xi / grid.h
    idx_i = np.rint(idx)
    if mode != "resampled" and np.abs(idx - idx_i).max() < 1e-9:
        out = np.roll(f.values, shift=tuple(int(k) for k in idx_i),
                      axis=tuple(range(grid.dim)))
        return GridFunction(grid, out)
    space = grid.space()
    pts = grid.points()
    lam = np.exp(-1j * sigma_eval(space, pts, np.broadcast_to(xi, pts.shape)))
    return apply_multiplier(lam.reshape(f.values.shape), f)


def sigma_convolve(b, c):
    """Phase-space convolution (b * c)(xi) = sum_eta b(xi-eta) c(eta) w, periodic."""
    if b.grid != c.grid:
        raise ValueError("grid mismatch")
    conv = np.fft.ifftn(np.fft.fftn(np.fft.ifftshift(b.values)) *
                        np.fft.fftn(np.fft.ifftshift(c.values)))
    return GridFunction(b.grid, np.fft.fftshift(conv) * b.grid.weight)


# ---------------------------------------------------------------------------
# file format: header `symplecta-grid v1, n=<n>, N=<N>`, then re,im rows
# ---------------------------------------------------------------------------

def write_grid_function(f, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"symplecta-grid v1, n={f.grid.n}, N={f.grid.N}\n")
        for v in f.values.ravel():
            fh.write(f"{float(v.real)!r},{float(v.imag)!r}\n")


def read_grid_function(path):
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if not header.startswith("symplecta-grid v1"):
            raise ValueError("not a symplecta-grid v1 file")
        fields = dict(part.strip().split("=") for part in header.split(",")[1:])
        grid = make_grid(int(fields["n"]), int(fields["N"]))
        vals = np.empty(grid.N ** grid.dim, complex)
        for i in range(vals.size):
            re, im = fh.readline().split(",")
            vals[i] = float(re) + 1j * float(im)
    return GridFunction(grid, vals)
