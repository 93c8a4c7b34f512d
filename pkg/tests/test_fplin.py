import numpy as np
import pytest

from asdga import fplin
from asdga.fplin import FpMatrix, Subspace


def test_rref_identity_f2():
    m = FpMatrix(2, np.eye(3, dtype=int))
    r, piv = fplin.rref(m)
    assert np.array_equal(r.entries, np.eye(3, dtype=int))
    assert piv == [0, 1, 2]


def test_rref_zero():
    m = FpMatrix(2, np.zeros((2, 2), dtype=int))
    r, piv = fplin.rref(m)
    assert np.array_equal(r.entries, np.zeros((2, 2), dtype=int))
    assert piv == []


def test_rref_hand_case_f2():
    # hand row reduction: [[1,1],[1,0]] -> [[1,0],[0,1]]
    m = FpMatrix(2, [[1, 1], [1, 0]])
    r, piv = fplin.rref(m)
    assert np.array_equal(r.entries, np.eye(2, dtype=int))
    assert piv == [0, 1]


def test_prime_check():
    with pytest.raises(ValueError):
        FpMatrix(4, [[0]])
    with pytest.raises(ValueError):
        FpMatrix(1, [[0]])


def _f4_artin_schreier_matrix():
    # F_4 = F_2[w]/(w^2+w+1), basis (1, w); columns are images of x -> x^2 - x
    # oracle: enumerate all four elements
    def sq_minus(a, b):  # element a + b w
        # (a+bw)^2 = a + b w^2 = a + b(w+1) = (a+b) + b w over F_2
        sa, sb = (a + b) % 2, b
        return ((sa - a) % 2, (sb - b) % 2)

    cols = [sq_minus(1, 0), sq_minus(0, 1)]
    return np.array(cols, dtype=int).T


def test_kernel_identity_and_zero():
    assert fplin.kernel_basis(FpMatrix(3, np.eye(4, dtype=int))).dim == 0
    k = fplin.kernel_basis(FpMatrix(3, np.zeros((3, 3), dtype=int)))
    assert k.dim == 3
    assert np.array_equal(k.basis, np.eye(3, dtype=int))


def test_kernel_artin_schreier_f4():
    m = FpMatrix(2, _f4_artin_schreier_matrix())
    k = fplin.kernel_basis(m)
    assert k.dim == 1
    assert np.array_equal(k.basis[:, 0], [1, 0])  # the F_2 line through 1


def test_complement_cases():
    full = Subspace(2, 2, np.eye(2, dtype=int))
    assert fplin.complement_basis(full).dim == 0
    zero = Subspace(2, 2, np.zeros((2, 0), dtype=int))
    c = fplin.complement_basis(zero)
    assert np.array_equal(c.basis, np.eye(2, dtype=int))
    diag = Subspace(2, 2, [[1], [1]])
    c = fplin.complement_basis(diag)
    assert np.array_equal(c.basis, [[0], [1]])


def test_solve_identity_and_inconsistent():
    m = FpMatrix(5, np.eye(3, dtype=int))
    b = np.array([1, 2, 4])
    assert np.array_equal(fplin.solve(m, b), b)
    m0 = FpMatrix(5, np.zeros((2, 2), dtype=int))
    assert fplin.solve(m0, np.array([1, 0])) is None


def test_solve_artin_schreier_f2t3():
    # R = F_2[t]/(t^3), basis (1, t, t^2), map x -> x^2 - x.
    # Exhaustive-search oracle over all 8 elements for solutions of
    # x^2 - x = t + t^2 gives {t, 1 + t}; the deterministic solver
    # (free variables set to 0) must return t.
    def as_map(v):
        a, b, c = (int(x) % 2 for x in v)
        # (a+bt+ct^2)^2 = a + b^2 t^2 over F_2 with t^3 = 0
        sq = np.array([a, 0, b])
        return (sq - np.array([a, b, c])) % 2

    cols = [as_map(e) for e in np.eye(3, dtype=int)]
    m = FpMatrix(2, np.array(cols).T)
    target = np.array([0, 1, 1])
    sols = [
        tuple(v)
        for v in ([a, b, c] for a in (0, 1) for b in (0, 1) for c in (0, 1))
        if np.array_equal(as_map(np.array(v)) % 2, target)
    ]
    assert sols == [(0, 1, 0), (1, 1, 0)]
    x = fplin.solve(m, target)
    assert np.array_equal(x, [0, 1, 0])


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        fplin.solve(FpMatrix(2, np.eye(2, dtype=int)), np.array([1, 0, 0]))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_rank_nullity_random(p):
    rng = np.random.default_rng(12345 + p)
    for _ in range(25):
        rows, cols = rng.integers(1, 7, size=2)
        m = FpMatrix(p, rng.integers(0, p, size=(rows, cols)))
        k = fplin.kernel_basis(m)
        assert np.all(fplin.matmul(m.entries, k.basis, p) == 0)
        assert k.dim + fplin.rank_mod(m.entries, p) == cols


@pytest.mark.parametrize("p", [2, 3])
def test_complement_concatenation_full_rank(p):
    rng = np.random.default_rng(99 + p)
    for _ in range(25):
        n = int(rng.integers(1, 7))
        raw = rng.integers(0, p, size=(n, int(rng.integers(0, n + 1))))
        basis = fplin.image_basis_mod(raw, p)
        sub = Subspace(p, n, basis)
        comp = fplin.complement_basis(sub)
        joint = np.concatenate([sub.basis, comp.basis], axis=1)
        assert fplin.rank_mod(joint, p) == n
        assert sub.dim + comp.dim == n
