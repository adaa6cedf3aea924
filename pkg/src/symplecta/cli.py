"""Command-line driver: verification suites, quantization runs, norm reports.

Configuration is a JSON file (UTF-8, matrices as row-major nested lists);
every run is deterministic for a fixed configuration — random draws come from
a seeded generator and reports carry no timestamps, so identical configs give
byte-identical outputs.

Exit codes: 0 all checks passed, 1 verification failure, 2 usage/config error.
"""

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .calculus import (quantize_T, quantize_theta_tau_kernel, quantize_weyl,
                       lambda_transform, write_operator)
from .cocycle import MultiplierContext, cocycle_residual, coboundary_residual, omega
from .grid import (GridFunction, make_grid, sample_symbol, symplectic_fourier,
                   SymbolSpec)
from .katoschatten import (bound_suite, kato_identity_residual, kato_synthesis,
                           multiplier_identity_residual, NormReport)
from .spaces import (WeightSpec, WindowSpec, chirp_TA, dilation_ratio,
                     embedding_bound, modulation_norm, sobolev_k_norm, _ord_ft,
                     _values)
from .symplin import SymplecticSpace, nondegeneracy_gate
from .weylrep import ConfigGrid, build_rep_context, orthogonality_integral

SUITES = ("verify-core", "verify-kato", "norms", "quantize", "bounds")

DEFAULT_SUITE_T = (
    ("T=I/2", ((0.5, 0.0), (0.0, 0.5))),
    ("T=I", ((1.0, 0.0), (0.0, 1.0))),
    ("T=KN", ((0.0, 0.0), (0.0, 1.0))),
    ("T=diag(.3,.7)", ((0.3, 0.0), (0.0, 0.7))),
    ("T=gen", ((0.2, 0.5), (-0.3, 0.8))),
)


class ConfigError(Exception):
    pass


class VerificationFailure(Exception):
    pass


@dataclass
class RunConfig:
    n: int = 1
    N: int = 32
    T: tuple = ((0.5, 0.0), (0.0, 0.5))
    symbol: dict = field(default_factory=lambda: {"kind": "gaussian"})
    suite: str = "verify-core"
    route: str = "synthesis"
    seed: int = 0
    out: str = "."
    json_mirror: bool = False
    tolerances: dict = field(default_factory=dict)

    def matrix_T(self):
        T = np.asarray(self.T, dtype=float).reshape(2 * self.n, 2 * self.n)
        return T

    def tol(self, tag, default):
        val = float(self.tolerances.get(tag, default))
        if val <= 0:
            raise ConfigError(f"tolerance for {tag} must be positive")
        return val


def load_config(args):
    data = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}")
    cfg = RunConfig()
    for key in ("n", "N", "T", "symbol", "suite", "route", "seed", "out",
                "tolerances"):
        if key in data:
            setattr(cfg, key, data[key])
    if args.suite:
        cfg.suite = args.suite
    if args.seed is not None:
        cfg.seed = args.seed
    if args.out:
        cfg.out = args.out
    cfg.json_mirror = bool(args.json)
    cfg.n = int(cfg.n)
    cfg.N = int(cfg.N)
    cfg.seed = int(cfg.seed)
    if cfg.n < 1 or cfg.N % 2 != 0 or not (4 <= cfg.N <= 256):
        raise ConfigError("need n >= 1 and even N in [4, 256]")
    if cfg.suite not in SUITES:
        raise ConfigError(f"unknown suite {cfg.suite!r}; choose from {SUITES}")
    if cfg.route not in ("synthesis", "kernel"):
        raise ConfigError(f"unknown route {cfg.route!r}")
    T = np.asarray(cfg.T, dtype=float)
    if T.size != (2 * cfg.n) ** 2:
        raise ConfigError("T must be a 2n x 2n matrix (row-major)")
    if not isinstance(cfg.tolerances, dict):
        raise ConfigError("tolerances must be a mapping")
    return cfg


def _symbol_from_dict(d, grid):
    known = {"kind", "center", "covariance", "poly_coeffs", "chirp",
             "hermite_index", "path"}
    extra = set(d) - known
    if extra:
        raise ConfigError(f"unknown symbol fields {sorted(extra)}")
    spec = SymbolSpec(kind=d.get("kind", "gaussian"),
                      center=tuple(d.get("center", ())),
                      covariance=tuple(np.asarray(d.get("covariance", ()),
                                                  dtype=float).ravel().tolist()),
                      poly_coeffs=tuple(d.get("poly_coeffs", ())),
                      chirp=tuple(np.asarray(d.get("chirp", ()),
                                             dtype=float).ravel().tolist()),
                      hermite_index=tuple(d.get("hermite_index", ())),
                      path=d.get("path", ""))
    try:
        return sample_symbol(spec, grid)
    except ValueError as exc:
        raise ConfigError(str(exc))


def _context(cfg, T=None, N=None):
    space = SymplecticSpace(cfg.n)
    T = cfg.matrix_T() if T is None else np.asarray(T, dtype=float)
    try:
        return build_rep_context(space, T, ConfigGrid(cfg.n, N or cfg.N))
    except ValueError as exc:
        raise VerificationFailure(str(exc))


def _gaussian(grid, width, center=None, tilt=0.0):
    pts = grid.points()
    c = np.zeros(grid.dim) if center is None else np.asarray(center, float)
    z = pts - c
    vals = np.exp(-(z ** 2).sum(1) / (2 * width ** 2)) * (1 + tilt * pts[:, 0])
    return GridFunction(grid, vals)


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def _suite_verify_core(cfg, report, rng):
    space = SymplecticSpace(cfg.n)
    d = space.dim
    # multiplier algebra on random maps
    worst_cocycle = 0.0
    worst_cob = 0.0
    worst_norm = 0.0
    for _ in range(10):
        ctx = MultiplierContext(space, rng.standard_normal((d, d)))
        triples = [tuple(rng.standard_normal((3, d)))
                   for _ in range(100)]
        worst_cocycle = max(worst_cocycle, cocycle_residual(ctx, triples))
        pairs = [tuple(rng.standard_normal((2, d))) for _ in range(100)]
        worst_cob = max(worst_cob, coboundary_residual(ctx, pairs))
        from .cocycle import omega_tilde
        for xi in rng.standard_normal((50, d)):
            worst_norm = max(worst_norm, abs(omega_tilde(ctx, xi, -xi) - 1.0))
    report.add("sec3-cocycle", 0, 0, worst_cocycle, cfg.tol("sec3-cocycle", 1e-12))
    report.add("sec3-coboundary", 0, 0, worst_cob,
               cfg.tol("sec3-coboundary", 1e-12))
    report.add("sec3-normalization", 0, 0, worst_norm,
               cfg.tol("sec3-normalization", 1e-12))
    # nondegeneracy dichotomy, including one constructed degenerate map
    worst_dich = 0.0
    maps = [rng.standard_normal((d, d)) for _ in range(19)] + [space.J.copy()]
    for T in maps:
        gate = nondegeneracy_gate(space, T)
        mctx = MultiplierContext(space, T)
        etas = rng.standard_normal((20, d))
        if gate.nondegenerate:
            sym = min(np.abs(omega(mctx, xi, etas) - omega(mctx, etas, xi)).max()
                      for xi in rng.standard_normal((5, d)) * 3)
            if sym < 1e-8:  # claims nondegenerate but omega looks symmetric
                worst_dich = max(worst_dich, 1.0)
        else:
            wts = gate.kernel_witness
            sym = np.abs(omega(mctx, wts, etas) - omega(mctx, etas, wts)).max()
            worst_dich = max(worst_dich, sym)
    report.add("sec3-nondegeneracy", 0, 0, worst_dich,
               cfg.tol("sec3-nondegeneracy", 1e-10))
    # symplectic Fourier involution / isometry
    grid = make_grid(cfg.n, cfg.N)
    worst_inv = 0.0
    worst_iso = 0.0
    for _ in range(20):
        f = GridFunction(grid, rng.standard_normal(grid.N ** grid.dim)
                         + 1j * rng.standard_normal(grid.N ** grid.dim))
        ff = symplectic_fourier(symplectic_fourier(f))
        sc = np.linalg.norm(f.values)
        worst_inv = max(worst_inv, np.linalg.norm(ff.values - f.values) / sc)
        worst_iso = max(worst_iso,
                        abs(np.linalg.norm(symplectic_fourier(f).values) - sc) / sc)
    report.add("sec2-fsigma-involution", 0, 0, worst_inv,
               cfg.tol("sec2-fsigma-involution", 1e-10))
    report.add("sec2-fsigma-isometry", 0, 0, worst_iso,
               cfg.tol("sec2-fsigma-isometry", 1e-10))
    g = _gaussian(grid, 1.0)
    report.add("sec2-fsigma-gaussian", 0, 0,
               np.abs(symplectic_fourier(g).values - g.values).max(),
               cfg.tol("sec2-fsigma-gaussian", 1e-8))
    # quantization sanity for the configured T
    ctx = _context(cfg)
    one = GridFunction(grid, np.ones(grid.N ** grid.dim))
    A1 = quantize_T(ctx, one)
    report.add("sec4-unit-symbol", 0, 0,
               np.abs(A1 - np.eye(ctx.config.M)).max(),
               cfg.tol("sec4-unit-symbol", 1e-9))
    a = _gaussian(grid, 1.2, tilt=0.3)
    lhs = quantize_T(ctx, a)
    rhs = quantize_weyl(ctx, lambda_transform(ctx, a))
    report.add("thm-n4", 0, 0,
               np.linalg.norm(lhs - rhs) / np.linalg.norm(lhs),
               cfg.tol("thm-n4", 1e-7))
    if cfg.n == 1:
        ctx_h = _context(cfg, T=np.diag([0.5, 0.5]))
        K = quantize_theta_tau_kernel(grid, 0.5, 0.5, a)
        A = quantize_T(ctx_h, a)
        report.add("sec1-routes", 0, 0,
                   np.linalg.norm(K - A) / np.linalg.norm(A),
                   cfg.tol("sec1-routes", 1e-7))
    return report


def _suite_verify_kato(cfg, report, rng):
    grid = make_grid(cfg.n, cfg.N)
    b = _gaussian(grid, 1.0, center=[0.5] + [0.0] * (grid.dim - 1))
    c = _gaussian(grid, 1.0, center=[0.0, 0.3] + [0.0] * (grid.dim - 2))
    pts = grid.points()
    chirp = np.exp(0.5j * 0.3 * pts[:, 0] * pts[:, 1]).reshape(b.values.shape)
    for label, T in DEFAULT_SUITE_T:
        ctx = _context(cfg, T=T)
        report.add(f"thm-n14-a[{label}]", 0, 0,
                   kato_identity_residual(ctx, b, c), cfg.tol("thm-n14-a", 1e-6))
        report.add(f"eq-K2[{label}]", 0, 0,
                   multiplier_identity_residual(ctx, b, c, chirp),
                   cfg.tol("eq-K2", 1e-6))
        # scalar synthesis identity and positivity
        M = ctx.config.M
        u = rng.standard_normal(M) + 1j * rng.standard_normal(M)
        v = rng.standard_normal(M) + 1j * rng.standard_normal(M)
        G = np.outer(u, v.conj())
        BG = kato_synthesis(ctx, (lambda xi: np.ones(xi.shape[0])), G)
        want = np.sqrt(ctx.detS) * np.trace(G) * np.eye(M)
        report.add(f"thm-n15-ii[{label}]", 0, 0,
                   np.linalg.norm(BG - want) / np.linalg.norm(want),
                   cfg.tol("thm-n15-ii", 1e-2))
        Gp = np.outer(u, u.conj())
        BGp = kato_synthesis(ctx, b, Gp)
        mineig = np.linalg.eigvalsh(0.5 * (BGp + BGp.conj().T)).min()
        scale = np.linalg.norm(BGp)
        report.add(f"thm-n15-i[{label}]", 0, 0, max(0.0, -mineig) / scale,
                   cfg.tol("thm-n15-i", 1e-9))
    # orthogonality relation at the configured N
    for label, T in (("T=I/2", np.diag([0.5, 0.5])), ("T=I", np.eye(2)),
                     ("T=diag(.3,.7)", np.diag([0.3, 0.7]))):
        if cfg.n != 1:
            break
        ctx = _context(cfg, T=T)
        x = np.asarray(ctx.config.axis)
        phi_v = np.exp(-x ** 2 / 2) * (1 + 0.1 * x)
        phi_v /= np.linalg.norm(phi_v)
        psi_v = np.exp(-x ** 2 / 2) * (1 - 0.2 * x ** 2)
        psi_v /= np.linalg.norm(psi_v)
        val = orthogonality_integral(ctx, phi_v, psi_v)
        want = np.sqrt(ctx.detS)
        report.add(f"sec9-orthogonality[{label}]", 0, 0,
                   abs(val - want) / want, cfg.tol("sec9-orthogonality", 1e-2))
    return report


def _suite_norms(cfg, report, rng):
    N = cfg.N
    window = WindowSpec()
    # chirp operator: inverse relation and Fourier support preservation
    A = np.array([[1.3]])
    u = (np.exp(-(np.arange(N) - N // 2) ** 2 / 30.0)
         * np.exp(0.2j * (np.arange(N) - N // 2)))
    v = chirp_TA(-A, chirp_TA(A, u))
    report.add("thm-n5-inverse", 0, 0, np.abs(v - u).max(),
               cfg.tol("thm-n5-inverse", 1e-10))
    sup_before = np.abs(_ord_ft(u.astype(complex))) > 1e-12
    sup_after = np.abs(_ord_ft(chirp_TA(A, u))) > 1e-12
    report.add("thm-n5-support", 0, 0,
               float(np.count_nonzero(sup_before != sup_after)), 0.5)
    # chirp modulation boundedness with a constant frozen on the first symbol
    const = None
    worst = 0.0
    for i in range(5):
        w = np.exp(-(np.arange(N) - N // 2) ** 2 / (20.0 + 4 * i)).astype(complex)
        r = (modulation_norm(chirp_TA(A, w), window, 1, 1)
             / modulation_norm(w, window, 1, 1))
        if const is None:
            const = 2.0 * r
        worst = max(worst, r)
    report.add("thm-n5-modulation", 1, 1, worst, const)
    # dilation family
    const = None
    for lam in (0.5, 2.0, 1.5, 0.8):
        res = dilation_ratio(u, np.array([[lam]]), np.inf, 1, window)
        r = res["measured"] / res["bound_shape"]
        if const is None:
            const = 2.0 * r
        report.add(f"thm-n6[lam={lam:g}]", np.inf, 1,
                   res["measured"], const * res["bound_shape"])
    # embedding bound on the line
    k = WeightSpec(((1, 2.0),))
    bound = embedding_bound(k, window, 1, N, d=1)
    x = (np.arange(N) - N // 2) * np.sqrt(2 * np.pi / N)
    for i in range(20):
        width = 0.7 + 0.08 * i
        uu = np.exp(-x ** 2 / (2 * width ** 2)) * np.exp(0.3j * i * x / 10.0)
        lhs = modulation_norm(uu, window, np.inf, 1)
        rhs = bound * sobolev_k_norm(uu, k, np.inf)
        report.add(f"thm-n10[{i}]", np.inf, 1, lhs, rhs)
    return report


def _suite_bounds(cfg, report, rng):
    ctx = _context(cfg)
    br = bound_suite(ctx)
    report.rows.extend(br.rows)
    report.frozen_constants.update(br.frozen_constants)
    return report


def _write_report(cfg, report, name):
    os.makedirs(cfg.out, exist_ok=True)
    csv_path = os.path.join(cfg.out, f"{name}.csv")
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(report.to_csv())
    if cfg.json_mirror:
        payload = {
            "rows": [{"quantity": r.quantity, "p": r.p, "q": r.q,
                      "value": r.value, "bound": r.bound, "ratio": r.ratio,
                      "pass": r.passed} for r in report.rows],
            "frozen_constants": report.frozen_constants,
            "calibration": "frozen constant = 2x first-member measured ratio",
            "config": {"n": cfg.n, "N": cfg.N, "T": np.asarray(cfg.T).tolist(),
                       "suite": cfg.suite, "seed": cfg.seed},
        }
        with open(os.path.join(cfg.out, f"{name}.json"), "w",
                  encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return csv_path


def cmd_verify(cfg):
    rng = np.random.default_rng(cfg.seed)
    report = NormReport()
    if cfg.suite == "verify-core":
        _suite_verify_core(cfg, report, rng)
    elif cfg.suite == "verify-kato":
        _suite_verify_kato(cfg, report, rng)
    elif cfg.suite == "norms":
        _suite_norms(cfg, report, rng)
    elif cfg.suite == "bounds":
        _suite_bounds(cfg, report, rng)
    else:
        raise ConfigError("suite quantize is driven by the quantize command")
    path = _write_report(cfg, report, f"report-{cfg.suite}")
    ok = report.all_passed()
    print(f"{cfg.suite}: {'PASS' if ok else 'FAIL'} "
          f"({sum(r.passed for r in report.rows)}/{len(report.rows)} rows) -> {path}")
    return 0 if ok else 1


def _sha256(path):
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        digest.update(fh.read())
    return digest.hexdigest()


def cmd_quantize(cfg):
    grid = make_grid(cfg.n, cfg.N)
    a = _symbol_from_dict(cfg.symbol, grid)
    if cfg.route == "kernel":
        T = cfg.matrix_T()
        if cfg.n != 1 or np.abs(T - np.diag(np.diag(T))).max() > 1e-12:
            raise ConfigError("kernel route needs n=1 and diagonal T")
        A = quantize_theta_tau_kernel(grid, T[1, 1], T[0, 0], a)
    else:
        ctx = _context(cfg)
        A = quantize_T(ctx, a)
    os.makedirs(cfg.out, exist_ok=True)
    op_path = os.path.join(cfg.out, f"op-{cfg.route}.txt")
    write_operator(A, op_path)
    provenance = {
        "route": cfg.route,
        "n": cfg.n,
        "N": cfg.N,
        "T": np.asarray(cfg.T).tolist(),
        "symbol": cfg.symbol,
        "sha256": _sha256(op_path),
    }
    with open(os.path.join(cfg.out, f"op-{cfg.route}.json"), "w",
              encoding="utf-8") as fh:
        json.dump(provenance, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"quantize[{cfg.route}]: wrote {op_path}")
    return 0


def cmd_report(cfg):
    rng = np.random.default_rng(cfg.seed)
    report = NormReport()
    _suite_norms(cfg, report, rng)
    _suite_bounds(cfg, report, rng)
    path = _write_report(cfg, report, "report-full")
    ok = report.all_passed()
    print(f"report: {'PASS' if ok else 'FAIL'} "
          f"({sum(r.passed for r in report.rows)}/{len(report.rows)} rows) -> {path}")
    return 0 if ok else 1


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="symplecta",
        description="phase-space quantization verification driver")
    sub = parser.add_subparsers(dest="cmd", required=True)
    for name in ("verify", "quantize", "report"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", default=None)
        sp.add_argument("--suite", default=None, choices=SUITES)
        sp.add_argument("--out", default=None)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--json", action="store_true")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        cfg = load_config(args)
        if args.cmd == "verify":
            return cmd_verify(cfg)
        if args.cmd == "quantize":
            return cmd_quantize(cfg)
        return cmd_report(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except VerificationFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
