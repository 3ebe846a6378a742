"""Lattice structure of the cyclic group Z_d.

With d = p*q and p = r*s the relevant subgroups are

    L     = {n*p   : 0 <= n < q}  in Z_d          (translations)
    L^perp= {k*q   : 0 <= k < p}  in Z_d (dual)   (annihilator of L)
    B     = {j*r*q : 0 <= j < s}  subset of L^perp (modulations)
    B^perp= {h*s/q : 0 <= h < r}  in the dual of L^perp

B^perp points are rationals with denominator q; they are carried as the
integer numerators h*s so every lattice computation stays exact.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivisibilityError


@dataclass(frozen=True)
class GroupConfig:
    d: int
    p: int
    q: int
    s: int
    r: int

    def __post_init__(self):
        for name in ("d", "p", "q", "s", "r"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if self.p * self.q != self.d:
            raise DivisibilityError(f"d = p*q violated: {self.d} != {self.p}*{self.q}")
        if self.r * self.s != self.p:
            raise DivisibilityError(f"p = r*s violated: {self.p} != {self.r}*{self.s}")

    @property
    def fiber_shape(self) -> tuple[int, int, int]:
        """Shape (q, s, r) of a fiber tensor."""
        return (self.q, self.s, self.r)

    @property
    def n_fibers(self) -> int:
        return self.q * self.s

    def ell_index(self, tau, h):
        """Map a cross-section index tau and a B^perp index h to l = tau + h*s in [0, p)."""
        return tau + h * self.s

    def to_dict(self) -> dict:
        return {"d": self.d, "p": self.p, "q": self.q, "s": self.s, "r": self.r}

    @classmethod
    def from_dict(cls, data: dict) -> "GroupConfig":
        config = make_config(int(data["d"]), int(data["p"]), int(data["s"]))
        if config.q != int(data.get("q", config.q)) or config.r != int(data.get("r", config.r)):
            raise DivisibilityError(f"inconsistent config dictionary: {data}")
        return config


def make_config(d: int, p: int, s: int) -> GroupConfig:
    """Build the lattice configuration for G = Z_d, |L^perp| = p and |B| = s.

    Raises DivisibilityError when p does not divide d or s does not divide p.
    """
    for name, value in (("d", d), ("p", p), ("s", s)):
        if int(value) != value or value < 1:
            raise ValueError(f"{name} must be a positive integer, got {value!r}")
    d, p, s = int(d), int(p), int(s)
    if d % p:
        raise DivisibilityError(f"p must divide d: {p} does not divide {d}")
    if p % s:
        raise DivisibilityError(f"s must divide p: {s} does not divide {p}")
    return GroupConfig(d=d, p=p, q=d // p, s=s, r=p // s)


def lattice_elements(config: GroupConfig):
    """Return (L, L^perp, B, B^perp numerators) as sorted integer lists."""
    d, p, q, s, r = config.d, config.p, config.q, config.s, config.r
    L = [(n * p) % d for n in range(q)]
    L_perp = [(k * q) % d for k in range(p)]
    B = [(j * r * q) % d for j in range(s)]
    B_perp = [h * s for h in range(r)]
    return L, L_perp, B, B_perp


def character(d: int, x: int, w: int) -> complex:
    """exp(2*pi*i*x*w/d), with the product reduced mod d before exponentiating."""
    k = (int(x) * int(w)) % d
    return complex(np.exp(2j * np.pi * k / d))
