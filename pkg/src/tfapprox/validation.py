"""Independent checks of the main construction.

Nothing here reuses the Jacobi solver or the fiber projection: eigenvalues
come from power iteration with deflation, and the brute-force error projects
onto the explicit time-frequency system in the signal domain.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .approximation import DataSet, TFSubspace, approximation_error, optimal_generators
from .errors import ConvergenceFailure, InvalidRank
from .lattice import GroupConfig, lattice_elements

POWER_MAX_ITER = 10_000
POWER_TOL = 1e-13
# residual still accepted when the iteration cap is hit (near-degenerate pairs)
POWER_FALLBACK_TOL = 1e-9
POWER_SEED = 20240601
SWEEP_TOL = 1e-9


@dataclass
class OracleReport:
    case: str
    main: float
    oracle: float
    abs_dev: float
    rel_dev: float
    passed: bool
    tol: float

    @classmethod
    def compare(cls, case, main, oracle, tol, one_sided=False):
        main, oracle = float(main), float(oracle)
        dev = main - oracle
        rel = abs(dev) / max(abs(oracle), 1e-300)
        passed = dev <= tol if one_sided else abs(dev) <= tol
        return cls(case, main, oracle, abs(dev), rel, bool(passed), tol)

    def to_dict(self) -> dict:
        return asdict(self)


def _rayleigh(A, v):
    return float(np.real(np.vdot(v, A @ v)))


def power_iteration_eigs(G, count: int, seed: int = POWER_SEED) -> np.ndarray:
    """Largest `count` eigenvalues of a PSD Hermitian matrix, descending."""
    A = np.array(G, dtype=complex)
    m = A.shape[0]
    if not 0 <= count <= m:
        raise InvalidRank(f"count must satisfy 0 ≤ count ≤ {m}")
    rng = np.random.default_rng(seed)
    scale = max(1.0, float(np.linalg.norm(A)))
    out = []
    for k in range(count):
        v = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        v /= np.linalg.norm(v)
        mu = _rayleigh(A, v)
        res = np.inf
        for it in range(POWER_MAX_ITER):
            w = A @ v
            mu = float(np.real(np.vdot(v, w)))
            res = float(np.linalg.norm(w - mu * v))
            if res <= POWER_TOL * scale:
                break
            nw = np.linalg.norm(w)
            if nw == 0.0:
                mu, res = 0.0, 0.0
                break
            v = w / nw
        if res > POWER_TOL * scale and res > POWER_FALLBACK_TOL * scale:
            raise ConvergenceFailure(
                f"power iteration for eigenvalue {k + 1} stalled at residual {res:.3e}"
            )
        out.append(mu)
        A = A - mu * np.outer(v, v.conj())
    return np.array(out)


def fiber_best_rank_error(fibers, n: int) -> float:
    """Least total squared residual of the fibers over subspaces of dim <= n.

    By Eckart-Young this is the sum of the discarded Gramian eigenvalues;
    they are obtained here by power iteration.
    """
    X = np.atleast_2d(np.asarray(fibers, dtype=complex))
    m = X.shape[0]
    if n < 0:
        raise InvalidRank("n must be nonnegative")
    if n >= m:
        return 0.0
    G = np.einsum("ih,jh->ij", X, X.conj())
    lam = power_iteration_eigs(G, m)
    lam = np.clip(np.sort(lam)[::-1], 0.0, None)
    return float(np.sum(lam[n:]))


def gabor_system(generators, config: GroupConfig) -> np.ndarray:
    """All T_l M_beta phi as rows, shape (n * q * s, d)."""
    A = np.atleast_2d(np.asarray(generators, dtype=complex))
    L, _, B, _ = lattice_elements(config)
    x = np.arange(config.d)
    rows = []
    for phi in A:
        for beta in B:
            mod = phi * np.exp(2j * np.pi * ((x * beta) % config.d) / config.d)
            for ell in L:
                rows.append(np.roll(mod, ell))
    return np.array(rows)


def brute_force_error(F: DataSet, V: TFSubspace) -> float:
    """Approximation error from an SVD basis of the explicit Gabor system."""
    S = gabor_system(V.generators, V.config)
    U, sv, _ = np.linalg.svd(S.T, full_matrices=False)
    if sv.size == 0 or sv[0] == 0.0:
        return F.energy()
    rank = int(np.sum(sv > 1e-10 * sv[0]))
    U = U[:, :rank]
    X = F.signals.T
    residual = X - U @ (U.conj().T @ X)
    return float(np.sum(np.abs(residual) ** 2))


def random_subspace(config: GroupConfig, n: int, rng) -> TFSubspace:
    """n generators with i.i.d. standard complex Gaussian entries."""
    g = (rng.standard_normal((n, config.d)) + 1j * rng.standard_normal((n, config.d))) / np.sqrt(2)
    return TFSubspace(g, config)


def _workers() -> int:
    raw = os.environ.get("TFAPPROX_THREADS", "0").strip() or "0"
    n = int(raw)
    return n if n > 0 else (os.cpu_count() or 1)


def random_subspace_sweep(F: DataSet, n: int, trials: int, seed: int, optimal=None):
    """Compare the optimal error against `trials` random subspaces of length n.

    One report per trial, in trial order; a report passes when the optimal
    error is at most the sampled error plus 1e-9.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if optimal is None:
        optimal = optimal_generators(F, n).error
    children = np.random.SeedSequence(seed).spawn(trials)

    def run(k):
        rng = np.random.default_rng(children[k])
        V = random_subspace(F.config, n, rng)
        sampled = approximation_error(F, V)
        return OracleReport.compare(
            f"random_subspace[{k}] n={n} seed={seed}", optimal, sampled, SWEEP_TOL, one_sided=True
        )

    workers = min(_workers(), trials)
    if workers == 1:
        return [run(k) for k in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, range(trials)))


def sweep_summary(reports) -> dict:
    sampled = [r.oracle for r in reports]
    return {
        "optimal": reports[0].main if reports else None,
        "sampled_min": min(sampled) if sampled else None,
        "trials": len(reports),
        "passed": all(r.passed for r in reports),
    }


def validate_dataset(F: DataSet, n: int, trials: int, seed: int) -> list[OracleReport]:
    """Full oracle battery for one data set and rank."""
    result = optimal_generators(F, n)
    reports = []
    scale = 1.0 + F.energy()
    V = result.subspace
    reports.append(
        OracleReport.compare("error: spectral vs brute-force projection", result.error,
                             brute_force_error(F, V), 1e-9 * scale)
    )
    reports.append(
        OracleReport.compare("error: spectral vs signal-domain projection", result.error,
                             approximation_error(F, V), 1e-9 * scale)
    )
    cfg = F.config
    worst = 0.0
    for w in range(cfg.q):
        for tau in range(cfg.s):
            main = float(np.sum(result.eigenvalues[n:, w, tau]))
            oracle = fiber_best_rank_error(F.fibers[:, w, tau, :], n)
            worst = max(worst, abs(main - oracle))
    reports.append(OracleReport("per-fiber Eckart-Young (power iteration)", 0.0, worst, worst,
                                worst, worst <= 1e-9, 1e-9))
    sweep = random_subspace_sweep(F, n, trials, seed, optimal=result.error)
    summary = sweep_summary(sweep)
    reports.append(
        OracleReport.compare(f"optimal vs min of {trials} random subspaces", summary["optimal"],
                             summary["sampled_min"], SWEEP_TOL, one_sided=True)
    )
    return reports
