"""Signal, eigenvalue-field and manifest files.

Signal files are UTF-8 CSV: a header ``d=<int>,m=<int>`` followed by m*d
rows ``re,im``, the signals concatenated in order.
"""
from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import LengthMismatch, ParseError

MANIFEST_KEYS = ("config", "m", "n", "error", "generators_path", "eigenvalues_path", "seed", "version")


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def atomic_write(path, text: str) -> Path:
    """Write the whole file next to its destination, then rename over it."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _parse_header(line: str, count_key: str):
    fields = {}
    for part in line.strip().split(","):
        key, sep, value = part.partition("=")
        if not sep:
            raise ParseError(f"malformed header {line.strip()!r}, expected 'd=<int>,{count_key}=<int>'", 1)
        fields[key.strip()] = value.strip()
    if set(fields) != {"d", count_key}:
        raise ParseError(f"header must have exactly the keys d and {count_key}", 1)
    try:
        d, m = int(fields["d"]), int(fields[count_key])
    except ValueError:
        raise ParseError("header values must be integers", 1) from None
    if d < 1 or m < 1:
        raise ParseError("header values must be positive", 1)
    return d, m


def read_signal_text(text: str, count_key: str = "m") -> np.ndarray:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ParseError("empty file", 1)
    d, m = _parse_header(lines[0].lstrip("﻿"), count_key)
    rows = lines[1:]
    if len(rows) != m * d:
        raise LengthMismatch(f"expected {m * d} sample rows for d={d}, {count_key}={m}, found {len(rows)}")
    values = np.empty(m * d, dtype=complex)
    for i, row in enumerate(rows):
        parts = row.split(",")
        if len(parts) != 2:
            raise ParseError(f"expected 're,im', got {row!r}", i + 2)
        try:
            re, im = float(parts[0]), float(parts[1])
        except ValueError:
            raise ParseError(f"non-numeric sample {row!r}", i + 2) from None
        if not (math.isfinite(re) and math.isfinite(im)):
            raise ParseError(f"non-finite sample {row!r}", i + 2)
        values[i] = complex(re, im)
    return values.reshape(m, d)


def read_signals(path, count_key: str = "m") -> np.ndarray:
    """Read a signal file into an (m, d) complex array."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"file is not UTF-8: {exc}") from None
    return read_signal_text(text, count_key)


def signal_text(signals, count_key: str = "m") -> str:
    X = np.atleast_2d(np.asarray(signals, dtype=complex))
    out = [f"d={X.shape[1]},{count_key}={X.shape[0]}"]
    out.extend(f"{fmt(z.real)},{fmt(z.imag)}" for z in X.ravel())
    return "\n".join(out) + "\n"


def write_signals(path, signals, count_key: str = "m") -> Path:
    return atomic_write(path, signal_text(signals, count_key))


def eigenvalue_text(eigenvalues) -> str:
    lam = np.asarray(eigenvalues, dtype=float)
    out = ["i,omega,tau,lambda"]
    m, q, s = lam.shape
    for i in range(m):
        for w in range(q):
            for tau in range(s):
                out.append(f"{i + 1},{w},{tau},{fmt(lam[i, w, tau])}")
    return "\n".join(out) + "\n"


def read_eigenvalues(path, shape) -> np.ndarray:
    m, q, s = shape
    lam = np.full((m, q, s), np.nan)
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].strip() != "i,omega,tau,lambda":
        raise ParseError("missing eigenvalue header", 1)
    for k, row in enumerate(lines[1:], start=2):
        if not row.strip():
            continue
        try:
            i, w, tau, val = row.split(",")
            lam[int(i) - 1, int(w), int(tau)] = float(val)
        except (ValueError, IndexError):
            raise ParseError(f"bad eigenvalue row {row!r}", k) from None
    if np.isnan(lam).any():
        raise LengthMismatch("eigenvalue file does not cover the full (m, q, s) field")
    return lam


def write_json(path, data) -> Path:
    return atomic_write(path, json.dumps(data, indent=2, sort_keys=True) + "\n")


def read_manifest(path) -> dict:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    missing = set(MANIFEST_KEYS) - set(data)
    if missing:
        raise ParseError(f"manifest is missing keys {sorted(missing)}")
    return data
