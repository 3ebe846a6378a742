"""Best time-frequency invariant approximation of a finite data set.

Every computation is carried out fiber by fiber on the Helson image: for
each grid point (w, tau) the m data fibers in C^r are approximated by the
best subspace of dimension <= n, and the generators are assembled from the
per-fiber solutions by inverting the Helson map.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ConfigMismatch, DimensionMismatch, InvalidRank
from .lattice import GroupConfig
from .spectral import eigh, gramian
from .transforms import helson, helson_inverse

SIGMA_ZERO_TOL = 1e-12
PINV_TOL = 1e-12


@dataclass(frozen=True)
class DataSet:
    """m signals of length d sharing one lattice configuration."""

    signals: np.ndarray
    config: GroupConfig

    def __post_init__(self):
        X = np.atleast_2d(np.asarray(self.signals, dtype=complex))
        if X.ndim != 2 or X.shape[0] < 1:
            raise DimensionMismatch("a data set needs at least one signal")
        if X.shape[1] != self.config.d:
            raise ConfigMismatch(f"signals have length {X.shape[1]}, config has d = {self.config.d}")
        object.__setattr__(self, "signals", X)

    @property
    def m(self) -> int:
        return self.signals.shape[0]

    @cached_property
    def fibers(self) -> np.ndarray:
        """Helson images, shape (m, q, s, r)."""
        return helson(self.signals, self.config)

    def energy(self) -> float:
        return float(np.sum(np.abs(self.signals) ** 2))


@dataclass(frozen=True)
class TFSubspace:
    """The closed span of all T_l M_beta phi over the generators phi."""

    generators: np.ndarray
    config: GroupConfig

    def __post_init__(self):
        A = np.asarray(self.generators, dtype=complex)
        if A.ndim == 1:
            A = A[None, :]
        if A.ndim != 2 or A.shape[0] < 1:
            raise DimensionMismatch("a subspace needs at least one generator (zero signals allowed)")
        if A.shape[1] != self.config.d:
            raise ConfigMismatch(f"generators have length {A.shape[1]}, config has d = {self.config.d}")
        object.__setattr__(self, "generators", A)

    @property
    def n(self) -> int:
        return self.generators.shape[0]

    @cached_property
    def fibers(self) -> np.ndarray:
        return helson(self.generators, self.config)


@dataclass
class ApproxResult:
    generators: np.ndarray  # (n, d)
    eigenvalues: np.ndarray  # (m, q, s), descending along axis 0
    error: float
    config: GroupConfig
    m: int
    n: int
    fiber_generators: np.ndarray = field(repr=False, default=None)  # (n, q, s, r)

    @property
    def subspace(self) -> TFSubspace:
        return TFSubspace(self.generators, self.config)


def _check_rank(n, m, allow_zero=False):
    lo = 0 if allow_zero else 1
    if int(n) != n or not lo <= n <= m:
        raise InvalidRank(f"n must satisfy {lo} ≤ n ≤ m (got n = {n}, m = {m})")


def _same_config(a: GroupConfig, b: GroupConfig):
    if a != b:
        raise ConfigMismatch(f"configurations differ: {a} vs {b}")


def sigma_tilde(values, scale: float) -> np.ndarray:
    """1/sqrt(lambda) where lambda is numerically nonzero, else 0."""
    values = np.asarray(values, dtype=float)
    zero = values <= SIGMA_ZERO_TOL * max(scale, 1.0)
    out = np.zeros_like(values)
    out[~zero] = 1.0 / np.sqrt(values[~zero])
    return out


def fiber_spectra(F: DataSet):
    """Eigendecompose the Gramian of every fiber.

    Returns (values, vectors) with shapes (q, s, m) and (q, s, m, m); the
    vectors are the left eigenvectors as rows.
    """
    cfg = F.config
    X = F.fibers
    values = np.empty((cfg.q, cfg.s, F.m))
    vectors = np.empty((cfg.q, cfg.s, F.m, F.m), dtype=complex)
    for w in range(cfg.q):
        for tau in range(cfg.s):
            dec = eigh(gramian(X[:, w, tau, :]))
            values[w, tau] = dec.values
            vectors[w, tau] = dec.vectors
    return values, vectors


def optimal_generators(F: DataSet, n: int) -> ApproxResult:
    """Generators of the best approximating invariant space of length <= n.

    Allows n == m, which always gives zero error.
    """
    _check_rank(n, F.m)
    cfg = F.config
    X = F.fibers
    values, vectors = fiber_spectra(F)
    scale = float(values.max(initial=0.0))
    Q = np.zeros((n, cfg.q, cfg.s, cfg.r), dtype=complex)
    for w in range(cfg.q):
        for tau in range(cfg.s):
            lam = values[w, tau]
            sig = sigma_tilde(lam[:n], max(lam[0], scale))
            Q[:, w, tau, :] = sig[:, None] * (vectors[w, tau, :n, :] @ X[:, w, tau, :])
    generators = helson_inverse(Q, cfg)
    eigenvalues = np.moveaxis(values, -1, 0).copy()
    return ApproxResult(
        generators=generators,
        eigenvalues=eigenvalues,
        error=error_from_spectrum(eigenvalues, n),
        config=cfg,
        m=F.m,
        n=n,
        fiber_generators=Q,
    )


def _projector(basis, scale: float = 0.0) -> np.ndarray:
    """Orthogonal projector (r x r) onto the span of the rows of `basis`.

    Gram eigenvalues at or below 1e-12 * max(lambda_max, scale) are dropped;
    `scale` lets a caller impose a threshold shared by all fibers.
    """
    A = np.asarray(basis, dtype=complex).T  # columns are basis vectors
    r = A.shape[0]
    if A.shape[1] == 0:
        return np.zeros((r, r), dtype=complex)
    # A^H A = conj of the row-Gramian
    dec = eigh(gramian(A.T).conj())
    cutoff = PINV_TOL * max(dec.values[0], scale)
    keep = dec.values > cutoff
    if not keep.any():
        return np.zeros((r, r), dtype=complex)
    U = dec.vectors[keep].conj().T  # right eigenvectors as columns
    pinv = (U / dec.values[keep]) @ U.conj().T
    return A @ pinv @ A.conj().T


def fiber_projection(v, basis) -> np.ndarray:
    """Orthogonal projection of v (or of each row of v) onto span(basis).

    The projection is A (A^H A)^+ A^H v, with the pseudo-inverse taken from
    the eigendecomposition and eigenvalues below 1e-12 * lambda_max dropped.
    """
    v = np.asarray(v, dtype=complex)
    basis = [np.asarray(b, dtype=complex) for b in basis]
    r = v.shape[-1]
    if any(b.shape != (r,) for b in basis):
        raise DimensionMismatch("basis vectors must have the same length as v")
    B = np.array(basis, dtype=complex).reshape(len(basis), r)
    P = _projector(B)
    return v @ P.T


def _project_fibers(X, V: TFSubspace) -> np.ndarray:
    """Project fiber tensors X (k, q, s, r) onto the fibers of V."""
    cfg = V.config
    Phi = V.fibers
    # largest fiber Gram eigenvalue is at least the largest squared fiber norm
    scale = float(np.max(np.sum(np.abs(Phi) ** 2, axis=-1), initial=0.0))
    out = np.empty_like(X)
    for w in range(cfg.q):
        for tau in range(cfg.s):
            P = _projector(Phi[:, w, tau, :], scale)
            out[:, w, tau, :] = X[:, w, tau, :] @ P.T
    return out


def project(f, V: TFSubspace) -> np.ndarray:
    """Orthogonal projection of f (shape (d,) or (k, d)) onto V."""
    f = np.asarray(f, dtype=complex)
    if f.shape[-1] != V.config.d:
        raise ConfigMismatch(f"signal length {f.shape[-1]} does not match d = {V.config.d}")
    X = helson(np.atleast_2d(f), V.config)
    out = helson_inverse(_project_fibers(X, V), V.config)
    return out.reshape(f.shape)


def approximation_error(F: DataSet, V: TFSubspace) -> float:
    """sum_j ||f_j - P_V f_j||^2, computed in the signal domain."""
    _same_config(F.config, V.config)
    residual = F.signals - project(F.signals, V)
    return float(np.sum(np.abs(residual) ** 2))


def fiberwise_error(F: DataSet, V: TFSubspace) -> float:
    """The same error summed fiber by fiber over the Helson images."""
    _same_config(F.config, V.config)
    X = F.fibers
    residual = X - _project_fibers(X, V)
    per_fiber = np.sum(np.abs(residual) ** 2, axis=(0, 3))
    total = 0.0
    for w in range(F.config.q):
        for tau in range(F.config.s):
            total += per_fiber[w, tau]
    return float(total)


def error_from_spectrum(eigenvalues, n: int) -> float:
    """Sum of the discarded eigenvalues lambda_i, i > n, over all fibers.

    `eigenvalues` has shape (m, q, s). Summation order is fixed (w, then
    tau, then i) so the result is reproducible.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    if lam.ndim != 3:
        raise DimensionMismatch("eigenvalue field must have shape (m, q, s)")
    m = lam.shape[0]
    _check_rank(n, m, allow_zero=True)
    total = 0.0
    for w in range(lam.shape[1]):
        for tau in range(lam.shape[2]):
            for i in range(n, m):
                total += lam[i, w, tau]
    return float(total)


def error_curve(F: DataSet, n_max: int | None = None) -> list[tuple[int, float]]:
    """(n, error) for n = 0..n_max from a single spectral pass."""
    n_max = F.m if n_max is None else n_max
    _check_rank(n_max, F.m, allow_zero=True)
    values, _ = fiber_spectra(F)
    field_ = np.moveaxis(values, -1, 0)
    return [(n, error_from_spectrum(field_, n)) for n in range(n_max + 1)]
