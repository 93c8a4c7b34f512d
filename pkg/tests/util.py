"""Shared generators for randomized exact tests (all seeded, all exact)."""
import numpy as np

from asdga import fplin
from asdga.complexes import Complex, DoubleComplex, double_tensor


def random_invertible(rng, n, p):
    if n == 0:
        return fplin.zeros(0, 0)
    while True:
        m = rng.integers(0, p, size=(n, n))
        if fplin.rank_mod(m, p) == n:
            return np.asarray(m, dtype=np.int64)


def random_complex(rng, p, max_dim=3, lo=-2, hi=2):
    """Random bounded complex with exact d^2 = 0.

    Built as a direct sum of shifted ground pieces and shifted two-term
    pieces with identity differential, then scrambled by a basis change.
    """
    degrees = list(range(lo, hi + 1))
    spaces = {n: 0 for n in degrees}
    arrows = {n: 0 for n in degrees}  # rank of d at degree n
    for n in degrees:
        spaces[n] += int(rng.integers(0, max_dim + 1))
    for n in degrees[:-1]:
        arrows[n] = int(rng.integers(0, min(spaces[n], spaces[n + 1]) + 1))
    diffs = {}
    for n in degrees[:-1]:
        d = fplin.zeros(spaces[n + 1], spaces[n])
        r = arrows[n]
        # avoid overlapping ranks so that d^2 = 0 stays exact
        r_prev = arrows[n - 1] if n - 1 in arrows else 0
        r = min(r, spaces[n] - 0, spaces[n + 1])
        use = min(r, spaces[n + 1] - r_prev if spaces[n + 1] - r_prev > 0 else 0)
        for k in range(use):
            d[r_prev + k, k] = 1
        arrows[n] = use
        diffs[n] = d
    c = Complex(p, {n: s for n, s in spaces.items() if s}, {
        n: diffs[n][:spaces[n + 1], :spaces[n]]
        for n in degrees[:-1] if spaces[n] and spaces[n + 1]
    })
    # scramble with a random basis change g: d -> g d g^(-1)
    gs = {n: random_invertible(rng, c.dim(n), p) for n in c.degrees()}
    diffs2 = {}
    for n in c.degrees():
        if c.dim(n + 1) and c.dim(n):
            gi = fplin.solve_mod(gs[n], fplin.eye(c.dim(n)), p)
            diffs2[n] = fplin.matmul(fplin.matmul(gs[n + 1], c.d(n), p), gi, p)
    return Complex(p, c.spaces, diffs2)


def random_double_complex(rng, p, max_dim=2, span=2):
    """Random double complex (commuting d, delta), exact by construction."""
    a = random_complex(rng, p, max_dim=max_dim, lo=0, hi=span)
    b = random_complex(rng, p, max_dim=max_dim, lo=0, hi=span)
    da = {(i, 0): a.d(i) for i in a.degrees() if a.dim(i + 1)}
    db = {(i, 0): b.d(i) for i in b.degrees() if b.dim(i + 1)}
    dca = DoubleComplex(p, {(i, 0): a.dim(i) for i in a.degrees()}, da, {})
    # flip b to the outer direction
    dcb = DoubleComplex(p, {(0, j): b.dim(j) for j in b.degrees()}, {},
                        {(0, j): b.d(j) for j in b.degrees() if b.dim(j + 1)})
    return double_tensor(dca, dcb)


def random_vector(rng, n, p):
    return np.asarray(rng.integers(0, p, size=n), dtype=np.int64)
