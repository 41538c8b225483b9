"""Orthonormal 2-D DCT-II basis with zig-zag coefficient ordering.

Fields are flat row-major vectors of length ``N = nx * ny``; coefficients
are flat vectors of the same length ordered from low to high spatial
frequency along anti-diagonals (JPEG zig-zag). With ``alpha = Phi @ m`` the
matrix ``Phi`` is orthogonal, so ``m = Phi.T @ alpha``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.fft import dctn, idctn


def zigzag_order(ny: int, nx: int) -> np.ndarray:
    """``(N, 2)`` array of ``(ky, kx)`` pairs in zig-zag order.

    Odd anti-diagonals run top to bottom, even ones bottom to top, matching
    the JPEG scan for square blocks.
    """
    pairs = [(ky, kx) for ky in range(ny) for kx in range(nx)]
    pairs.sort(key=lambda p: (p[0] + p[1], p[0] if (p[0] + p[1]) % 2 else -p[0]))
    return np.array(pairs, dtype=int).reshape(-1, 2)


class DCTBasis:
    """Separable orthonormal DCT-II on an ``ny`` x ``nx`` grid."""

    kind = "dct2-ortho"

    def __init__(self, nx: int, ny: int):
        if nx < 1 or ny < 1:
            raise ValueError("basis dimensions must be positive")
        self.nx, self.ny = int(nx), int(ny)
        order = zigzag_order(self.ny, self.nx)
        self.ky, self.kx = order[:, 0], order[:, 1]
        self._flat = self.ky * self.nx + self.kx  # zig-zag -> row-major spectrum

    @property
    def size(self) -> int:
        return self.nx * self.ny

    def __repr__(self):
        return f"DCTBasis(nx={self.nx}, ny={self.ny})"

    def _check(self, v, what):
        v = np.asarray(v, dtype=float)
        if v.shape[0] != self.size:
            raise ValueError(f"{what} has length {v.shape[0]}, basis expects {self.size}")
        return v

    def forward(self, m) -> np.ndarray:
        """Coefficients ``Phi @ m``; accepts a vector or an ``(N, k)`` stack."""
        m = self._check(m, "field")
        stack = m.reshape(self.ny, self.nx, -1)
        spec = dctn(stack, type=2, norm="ortho", axes=(0, 1))
        out = spec.reshape(self.size, -1)[self._flat]
        return out.reshape(m.shape)

    def inverse(self, alpha) -> np.ndarray:
        """Field ``Phi.T @ alpha``; accepts a vector or an ``(N, k)`` stack."""
        alpha = self._check(alpha, "coefficient vector")
        spec = np.empty((self.size,) + alpha.shape[1:])
        spec[self._flat] = alpha
        field_ = idctn(spec.reshape(self.ny, self.nx, -1), type=2, norm="ortho", axes=(0, 1))
        return field_.reshape(alpha.shape)

    @cached_property
    def matrix(self) -> np.ndarray:
        """Dense ``Phi`` (rows are basis vectors), built from the fast path."""
        return self.forward(np.eye(self.size))

    def columns(self, active) -> np.ndarray:
        """``Phi.T[:, active]``: spatial images of the selected coefficients."""
        active = np.asarray(active, dtype=int)
        unit = np.zeros((self.size, active.size))
        unit[active, np.arange(active.size)] = 1.0
        return self.inverse(unit)

    def write_coefficients(self, path, alpha) -> None:
        """CSV with columns ``index, kx, ky, value``."""
        alpha = self._check(alpha, "coefficient vector")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["index", "kx", "ky", "value"])
            for i, (kx, ky, v) in enumerate(zip(self.kx, self.ky, alpha)):
                writer.writerow([i, int(kx), int(ky), repr(float(v))])


class IdentityBasis:
    """Trivial orthonormal basis; the coefficients are the parameters."""

    kind = "identity"

    def __init__(self, n: int):
        self.n = int(n)

    @property
    def size(self) -> int:
        return self.n

    def forward(self, m):
        m = np.asarray(m, dtype=float)
        if m.shape[0] != self.n:
            raise ValueError(f"length {m.shape[0]} != {self.n}")
        return m.copy()

    inverse = forward

    @cached_property
    def matrix(self):
        return np.eye(self.n)

    def columns(self, active):
        return np.eye(self.n)[:, np.asarray(active, dtype=int)]


@dataclass
class CoefficientVector:
    """Transform-domain parameters plus the set of unpruned indices."""

    alpha: np.ndarray
    basis: DCTBasis
    active: np.ndarray = field(default=None)

    def __post_init__(self):
        self.alpha = np.asarray(self.alpha, dtype=float)
        if self.active is None:
            self.active = np.arange(self.alpha.size)
        self.active = np.asarray(self.active, dtype=int)
        if self.active.size and (self.active.min() < 0 or self.active.max() >= self.alpha.size):
            raise ValueError("active index out of range")

    def to_field(self) -> np.ndarray:
        return self.basis.inverse(self.alpha)


def forward(m, basis: DCTBasis) -> CoefficientVector:
    return CoefficientVector(basis.forward(m), basis)


def inverse(coef: CoefficientVector) -> np.ndarray:
    return coef.basis.inverse(coef.alpha)


def truncate_top_fraction(alpha, fraction: float) -> np.ndarray:
    """Keep the ``ceil(fraction * N)`` largest-magnitude coefficients.

    Ties are resolved in favour of the lower (zig-zag) index.
    """
    if not 0.0 < fraction <= 1.0:
        raise ValueError("fraction must lie in (0, 1]")
    a = np.asarray(alpha.alpha if isinstance(alpha, CoefficientVector) else alpha, float)
    keep = min(a.size, math.ceil(fraction * a.size - 1e-9))
    order = np.lexsort((np.arange(a.size), -np.abs(a)))
    out = np.zeros_like(a)
    out[order[:keep]] = a[order[:keep]]
    return out


def relative_truncation_error(m, basis: DCTBasis, fraction: float) -> float:
    """``||m - Phi.T trunc(Phi m)|| / ||m||``."""
    m = np.asarray(m, dtype=float)
    approx = basis.inverse(truncate_top_fraction(basis.forward(m), fraction))
    return float(np.linalg.norm(m - approx) / np.linalg.norm(m))
