"""Fourier, Zak and Helson transforms on Z_d.

Signals are complex numpy arrays whose last axis has length d; leading axes
are treated as a batch, so a (m, d) data matrix transforms in one call.

Normalizations:
  * the DFT is unitary (1/sqrt(d) forward);
  * the Zak grid carries an extra 1/sqrt(p), making the fiberization an
    isometry for plain (unweighted) sums over the finite grid.
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, LatticeMembershipError
from .lattice import GroupConfig


def _as_signal(f, config: GroupConfig | None = None) -> np.ndarray:
    f = np.asarray(f, dtype=complex)
    if f.ndim == 0:
        raise DimensionMismatch("signal must have at least one axis")
    if config is not None and f.shape[-1] != config.d:
        raise DimensionMismatch(f"signal length {f.shape[-1]} does not match d = {config.d}")
    return f


def dft(f) -> np.ndarray:
    """Unitary DFT: fhat(w) = d^{-1/2} sum_g f(g) exp(-2 pi i g w / d)."""
    return np.fft.fft(_as_signal(f), axis=-1, norm="ortho")


def idft(fhat) -> np.ndarray:
    """Inverse of `dft`."""
    return np.fft.ifft(_as_signal(fhat), axis=-1, norm="ortho")


def translate(f, ell: int, config: GroupConfig) -> np.ndarray:
    """T_ell f(x) = f(x - ell) for ell in L."""
    f = _as_signal(f, config)
    if int(ell) % config.p:
        raise LatticeMembershipError(f"{ell} is not in L = pZ_d with p = {config.p}")
    return np.roll(f, int(ell) % config.d, axis=-1)


def modulate(f, beta: int, config: GroupConfig) -> np.ndarray:
    """M_beta f(x) = exp(2 pi i x beta / d) f(x) for beta in B."""
    f = _as_signal(f, config)
    if int(beta) % (config.r * config.q):
        raise LatticeMembershipError(
            f"{beta} is not in B = (r*q)Z_d with r*q = {config.r * config.q}"
        )
    x = np.arange(config.d)
    phase = np.exp(2j * np.pi * ((x * int(beta)) % config.d) / config.d)
    return f * phase


def zak(f, config: GroupConfig) -> np.ndarray:
    """Zak transform of fhat along L^perp, sampled on the grid t = ell/q.

    Returns an array (..., q, p) with entry [w, ell] equal to
    p^{-1/2} sum_k fhat(w + k q) exp(-2 pi i k ell / p).
    """
    f = _as_signal(f, config)
    fhat = dft(f)
    # fhat index w + k*q  ->  [k, w]
    a = fhat.reshape(f.shape[:-1] + (config.p, config.q))
    a = np.swapaxes(a, -1, -2)
    return np.fft.fft(a, axis=-1, norm="ortho")


def zak_time_domain(f, config: GroupConfig) -> np.ndarray:
    """Same grid as `zak`, evaluated directly from the time samples.

    entry [w, ell] = exp(2 pi i ell w / d) q^{-1/2}
                     sum_n f(p n - ell) exp(-2 pi i n w / q)
    """
    f = _as_signal(f, config)
    d, p, q = config.d, config.p, config.q
    w = np.arange(q)
    n = np.arange(q)
    ell = np.arange(p)
    kernel = np.exp(-2j * np.pi * (np.outer(w, n) % q) / q)
    idx = (p * n[:, None] - ell[None, :]) % d
    samples = f[..., idx]
    phase = np.exp(2j * np.pi * (np.outer(w, ell) % d) / d)
    return phase * (kernel @ samples) / np.sqrt(q)


def zak_inverse(Z, config: GroupConfig) -> np.ndarray:
    """Invert `zak` on a (..., q, p) grid."""
    Z = np.asarray(Z, dtype=complex)
    if Z.shape[-2:] != (config.q, config.p):
        raise DimensionMismatch(f"Zak grid must have trailing shape {(config.q, config.p)}")
    a = np.fft.ifft(Z, axis=-1, norm="ortho")
    fhat = np.swapaxes(a, -1, -2).reshape(Z.shape[:-2] + (config.d,))
    return idft(fhat)


def helson(f, config: GroupConfig) -> np.ndarray:
    """Fiber tensor (..., q, s, r): entry [w, tau, h] is the Zak grid at [w, tau + h s]."""
    Z = zak(f, config)
    T = Z.reshape(Z.shape[:-1] + (config.r, config.s))
    return np.swapaxes(T, -1, -2)


def helson_inverse(F, config: GroupConfig) -> np.ndarray:
    """The unique signal whose fiber tensor is F."""
    F = np.asarray(F, dtype=complex)
    if F.shape[-3:] != config.fiber_shape:
        raise DimensionMismatch(f"fiber tensor must have trailing shape {config.fiber_shape}")
    Z = np.swapaxes(F, -1, -2).reshape(F.shape[:-3] + (config.q, config.p))
    return zak_inverse(Z, config)


def intertwining_phase(ell: int, beta: int, config: GroupConfig) -> np.ndarray:
    """The (q, s) array X_{-ell}(w) X_{-beta}(t) at the fiber grid points.

    X_{-ell}(w) = exp(-2 pi i ell w / d); with beta = j r q and t = tau/q,
    X_{-beta}(t) = exp(-2 pi i j r tau / p).
    """
    d, p, q, s, r = config.d, config.p, config.q, config.s, config.r
    if int(ell) % p:
        raise LatticeMembershipError(f"{ell} is not in L")
    if int(beta) % (r * q):
        raise LatticeMembershipError(f"{beta} is not in B")
    j = (int(beta) // (r * q)) % s
    w = np.arange(q)[:, None]
    tau = np.arange(s)[None, :]
    x_ell = np.exp(-2j * np.pi * ((int(ell) * w) % d) / d)
    x_beta = np.exp(-2j * np.pi * ((j * r * tau) % p) / p)
    return x_ell * x_beta
