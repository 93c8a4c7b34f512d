"""Exact dense linear algebra over a prime field F_p.

Everything downstream (complexes, bar complexes, Cech machinery) reduces to
the routines in this module.  Matrices are numpy int64 arrays with entries
reduced to [0, p); all arithmetic is explicit mod p.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

Array = np.ndarray


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def zeros(rows: int, cols: int) -> Array:
    return np.zeros((rows, cols), dtype=np.int64)


def eye(n: int) -> Array:
    return np.eye(n, dtype=np.int64)


def asmat(entries, p: int) -> Array:
    a = np.asarray(entries, dtype=np.int64) % p
    if a.ndim != 2:
        raise ValueError("expected a 2-d array")
    return a


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("no inverse of 0 mod %d" % p)
    return pow(int(a), p - 2, p)


def matmul(a: Array, b: Array, p: int) -> Array:
    return (a.astype(np.int64) @ b.astype(np.int64)) % p


def rref_mod(a: Array, p: int) -> tuple[Array, list[int]]:
    """Reduced row-echelon form over F_p; returns (rref, pivot columns)."""
    m = (np.asarray(a, dtype=np.int64) % p).copy()
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        piv = -1
        for rr in range(r, rows):
            if m[rr, c] % p != 0:
                piv = rr
                break
        if piv < 0:
            continue
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = (m[r] * inv_mod(int(m[r, c]), p)) % p
        for rr in range(rows):
            if rr != r and m[rr, c] % p != 0:
                m[rr] = (m[rr] - m[rr, c] * m[r]) % p
        pivots.append(c)
        r += 1
    return m % p, pivots


def rank_mod(a: Array, p: int) -> int:
    if a.size == 0:
        return 0
    _, piv = rref_mod(a, p)
    return len(piv)


def kernel_mod(a: Array, p: int) -> Array:
    """Basis of {v : a v = 0}, as columns.  Deterministic (rref-based)."""
    a = asmat(a, p)
    rows, cols = a.shape
    if cols == 0:
        return zeros(0, 0)
    r, piv = rref_mod(a, p)
    piv_set = set(piv)
    free = [c for c in range(cols) if c not in piv_set]
    basis = zeros(cols, len(free))
    for k, f in enumerate(free):
        basis[f, k] = 1
        for i, c in enumerate(piv):
            basis[c, k] = (-r[i, f]) % p
    return basis


def image_basis_mod(a: Array, p: int) -> Array:
    """Columns of a spanning its image, independent, in pivot order."""
    a = asmat(a, p)
    if a.size == 0:
        return zeros(a.shape[0], 0)
    _, piv = rref_mod(a, p)
    return a[:, piv]


def solve_mod(a: Array, b: Array, p: int) -> Array | None:
    """One solution of a x = b (free variables set to 0), or None.

    b may be a vector or a matrix of right-hand sides; the result matches.
    """
    a = asmat(a, p)
    vec = np.asarray(b).ndim == 1
    b = np.atleast_2d(np.asarray(b, dtype=np.int64) % p)
    if vec:
        b = b.T if b.shape[0] == 1 and a.shape[0] != 1 else b
    if b.shape[0] != a.shape[0]:
        raise ValueError("dimension mismatch: %s vs %s" % (a.shape, b.shape))
    aug = np.concatenate([a, b], axis=1)
    r, piv = rref_mod(aug, p)
    ncols = a.shape[1]
    if any(c >= ncols for c in piv):
        return None
    x = zeros(ncols, b.shape[1])
    for i, c in enumerate(piv):
        x[c] = r[i, ncols:]
    return x[:, 0] if vec else x


def coords_in_span(basis: Array, v: Array, p: int) -> Array | None:
    """Coordinates of v (columns) in the given column basis, or None."""
    return solve_mod(basis, v, p)


def complement_pivots(basis: Array, p: int) -> list[int]:
    """Non-pivot standard coordinates of the row-reduced basis vectors.

    The standard vectors at these coordinates complete the column span of
    `basis` to the full space, deterministically.
    """
    basis = asmat(basis, p)
    n = basis.shape[0]
    _, piv = rref_mod(basis.T, p)
    piv_set = set(piv)
    return [c for c in range(n) if c not in piv_set]


@dataclass(frozen=True)
class FpMatrix:
    """Dense matrix over F_p; entries stored reduced to [0, p)."""

    p: int
    entries: Array

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError("modulus %r is not prime" % (self.p,))
        object.__setattr__(self, "entries", asmat(self.entries, self.p))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        if other.p != self.p:
            raise ValueError("modulus mismatch")
        return FpMatrix(self.p, matmul(self.entries, other.entries, self.p))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FpMatrix)
            and self.p == other.p
            and self.entries.shape == other.entries.shape
            and bool(np.array_equal(self.entries, other.entries))
        )


@dataclass(frozen=True)
class Subspace:
    """Subspace of F_p^n given by an independent list of basis vectors."""

    p: int
    ambient_dim: int
    basis: Array  # shape (ambient_dim, k), columns independent

    def __post_init__(self):
        b = asmat(self.basis, self.p)
        if b.shape[0] != self.ambient_dim:
            raise ValueError("basis/ambient mismatch")
        if rank_mod(b, self.p) != b.shape[1]:
            raise ValueError("basis vectors are dependent")
        object.__setattr__(self, "basis", b)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def contains(self, v: Array) -> bool:
        return coords_in_span(self.basis, asmat(v.reshape(-1, 1), self.p), self.p) is not None


def rref(m: FpMatrix) -> tuple[FpMatrix, list[int]]:
    r, piv = rref_mod(m.entries, m.p)
    return FpMatrix(m.p, r), piv


def kernel_basis(m: FpMatrix) -> Subspace:
    k = kernel_mod(m.entries, m.p)
    return Subspace(m.p, m.cols, k)


def complement_basis(sub: Subspace) -> Subspace:
    """Deterministic complement spanned by non-pivot standard coordinates."""
    free = complement_pivots(sub.basis, sub.p)
    b = zeros(sub.ambient_dim, len(free))
    for k, f in enumerate(free):
        b[f, k] = 1
    return Subspace(sub.p, sub.ambient_dim, b)


def solve(m: FpMatrix, b: Array) -> Array | None:
    return solve_mod(m.entries, b, m.p)
