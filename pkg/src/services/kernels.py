"""
Vectorised tower arithmetic on coordinate arrays.

Arrays have shape (..., 3, k): axis -2 indexes powers of s, axis -1 powers of t.
Every kernel agrees with the scalar arithmetic of src.services.tower.Tower.
"""

from typing import Sequence

import numpy as np

from src.services.tower import Tower, TowerElem


class TowerArrays:
    """numpy views of one tower's moduli plus the array kernels built on them."""

    def __init__(self, tower: Tower) -> None:
        self.tower = tower
        self.p = tower.p
        self.k = tower.k
        self.g = np.asarray(tower.g, dtype=np.int64)
        self.h = np.asarray(tower.h, dtype=np.int64)
        self.frobenius_t = np.ascontiguousarray(tower.frobenius_matrix.T)
        self.radix = np.asarray([self.p ** n for n in range(3 * self.k)], dtype=np.int64)
        base = tower.base_elements()
        inverses = [tower.base_zero] + [tower.base_inv(c) for c in base[1:]]
        self.base_inverse_table = np.asarray(inverses, dtype=np.int64)
        self.base_radix = self.radix[: self.k]

    # Conversion

    def all_elements(self) -> np.ndarray:
        """All q^3 elements in index order, shape (q^3, 3, k)."""
        indices = np.arange(self.tower.size, dtype=np.int64)
        return self.from_indices(indices)

    def from_indices(self, indices: np.ndarray) -> np.ndarray:
        digits = (indices[:, None] // self.radix[None, :]) % self.p
        return digits.reshape(-1, 3, self.k)

    def encode(self, arr: np.ndarray) -> np.ndarray:
        """Mixed-radix indices of an (N, 3, k) array."""
        return arr.reshape(arr.shape[0], 3 * self.k).dot(self.radix)

    def constant(self, x: TowerElem) -> np.ndarray:
        return np.asarray(x.coords, dtype=np.int64).reshape(3, self.k)

    def constants(self, xs: Sequence[TowerElem]) -> np.ndarray:
        return np.asarray([x.coords for x in xs], dtype=np.int64).reshape(len(xs), 3, self.k)

    # Base field, shape (..., k)

    def base_mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        p, k = self.p, self.k
        if k == 1:
            return (a * b) % p
        shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
        prod = np.zeros(shape + (2 * k - 1,), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                prod[..., i + j] += a[..., i] * b[..., j]
        prod %= p
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[..., d]
            for m in range(k):
                prod[..., d - k + m] -= c * self.g[m]
            prod[..., d - k:d] %= p
        return prod[..., :k] % p

    def base_inv(self, a: np.ndarray) -> np.ndarray:
        """Table lookup; the inverse of 0 is taken as 0."""
        return self.base_inverse_table[a.dot(self.base_radix)]

    # Extension field, shape (..., 3, k)

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (a + b) % self.p

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        shape = np.broadcast_shapes(a.shape[:-2], b.shape[:-2])
        prod = np.zeros(shape + (5, self.k), dtype=np.int64)
        for i in range(3):
            for j in range(3):
                prod[..., i + j, :] += self.base_mul(a[..., i, :], b[..., j, :])
        prod %= self.p
        for d in (4, 3):
            c = prod[..., d, :]
            for m in range(3):
                prod[..., d - 3 + m, :] -= self.base_mul(c, self.h[m])
            prod %= self.p
        return prod[..., :3, :]

    def scale(self, c: np.ndarray, arr: np.ndarray) -> np.ndarray:
        """Multiply every row of arr by the single element c of shape (3, k)."""
        return self.mul(c[None, :, :], arr)

    def frobenius(self, arr: np.ndarray) -> np.ndarray:
        flat = arr.reshape(-1, 3 * self.k).dot(self.frobenius_t) % self.p
        return flat.reshape(arr.shape)

    def norm(self, arr: np.ndarray) -> np.ndarray:
        """Norms as (N, k) base elements."""
        y = self.frobenius(arr)
        z = self.frobenius(y)
        return self.mul(self.mul(arr, y), z)[..., 0, :]

    def inv(self, arr: np.ndarray) -> np.ndarray:
        """x^{-1} = x^q x^{q^2} / N(x); zero maps to zero."""
        y = self.frobenius(arr)
        z = self.frobenius(y)
        conj = self.mul(y, z)
        n_inv = self.base_inv(self.mul(arr, conj)[..., 0, :])
        return self.base_mul(conj, n_inv[..., None, :])

    def pow(self, arr: np.ndarray, e: int) -> np.ndarray:
        """Square-and-multiply for e ≥ 0."""
        result = np.zeros_like(arr)
        result[..., 0, 0] = 1
        square = arr
        while e > 0:
            if e & 1:
                result = self.mul(result, square)
            e >>= 1
            if e:
                square = self.mul(square, square)
        return result

    def horner(self, coeffs: Sequence[np.ndarray], arr: np.ndarray) -> np.ndarray:
        """Evaluate sum(coeffs[i] * x^i) at every row; coeffs are (3, k) constants, low-to-high."""
        acc = np.broadcast_to(coeffs[-1], arr.shape).copy()
        for c in reversed(coeffs[:-1]):
            acc = self.add(self.mul(acc, arr), c[None, :, :])
        return acc
