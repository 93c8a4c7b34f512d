"""Bounded complexes of F_p-spaces with the standard Koszul sign rules.

Conventions, used consistently by every downstream module:
  * d(a (x) b) = da (x) b + (-1)^deg(a) a (x) db
  * sigma(a (x) b) = (-1)^(deg a * deg b) b (x) a
  * (f (x) g)(a (x) b) = (-1)^(deg g * deg a) f(a) (x) g(b)
  * A[k]^n = A^(n+k) with differential d (x) 1, no sign
  * total differential of a double complex: D = d (x) 1 + delta (x) t,
    so the outer part acts with (-1)^(inner degree)
All composite signs can be re-derived one transposition at a time with
perm_sign_graded, the shared sign oracle.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fplin
from .fplin import Array, zeros

# ---------------------------------------------------------------------------
# sign oracle


def perm_sign_graded(degrees, perm) -> int:
    """Koszul sign of reordering homogeneous factors, one swap at a time.

    `perm[i]` is the input position placed at output slot i.  This is the
    oracle every formula-level sign in the package is validated against.
    """
    perm = list(perm)
    degs = list(degrees)
    n = len(perm)
    assert sorted(perm) == list(range(n))
    sign = 1
    cur = list(range(n))
    for target_slot in range(n):
        src = cur.index(perm[target_slot])
        while src > target_slot:
            a, b = cur[src - 1], cur[src]
            if (degs[a] * degs[b]) % 2 == 1:
                sign = -sign
            cur[src - 1], cur[src] = b, a
            src -= 1
    return sign


def token_past_sign(k: int, deg: int) -> int:
    """Sign for moving the shift token e^k (degree -k) past a degree-deg element."""
    return -1 if (k * deg) % 2 else 1


@dataclass(frozen=True)
class ShiftToken:
    """The degree -i generator e^i of k[i]."""

    exponent: int

    @property
    def degree(self) -> int:
        return -self.exponent


# ---------------------------------------------------------------------------
# complexes


class Complex:
    """Bounded complex of F_p-spaces; zero outside the stored window."""

    def __init__(self, p: int, spaces: dict[int, int], diffs: dict[int, Array],
                 labels: dict[int, list] | None = None):
        if not fplin.is_prime(p):
            raise ValueError("modulus %r is not prime" % (p,))
        self.p = p
        self.spaces = {n: int(d) for n, d in spaces.items() if d}
        self.diffs = {}
        for n, m in diffs.items():
            m = fplin.asmat(m, p)
            if m.shape != (self.dim(n + 1), self.dim(n)):
                raise ValueError("differential at degree %d has shape %s" % (n, m.shape))
            if m.size:
                self.diffs[n] = m
        self.labels = {}
        for n in self.spaces:
            lab = labels.get(n) if labels else None
            self.labels[n] = list(lab) if lab is not None else list(range(self.dim(n)))
            if len(self.labels[n]) != self.dim(n):
                raise ValueError("label count mismatch at degree %d" % n)

    def dim(self, n: int) -> int:
        return self.spaces.get(n, 0)

    def d(self, n: int) -> Array:
        if n in self.diffs:
            return self.diffs[n]
        return zeros(self.dim(n + 1), self.dim(n))

    def degrees(self) -> list[int]:
        return sorted(self.spaces)

    @property
    def window(self) -> tuple[int, int]:
        degs = self.degrees()
        return (degs[0], degs[-1]) if degs else (0, 0)

    def total_dim(self) -> int:
        return sum(self.spaces.values())


def zero_complex(p: int) -> Complex:
    return Complex(p, {}, {})


def ground_complex(p: int, degree: int = 0, label="1") -> Complex:
    """F_p concentrated in one degree."""
    return Complex(p, {degree: 1}, {}, labels={degree: [label]})


def check_d_squared(c: Complex) -> list[int]:
    """Degrees n with d^(n+1) d^n != 0 (empty list = pass)."""
    bad = []
    for n in c.degrees():
        if c.dim(n + 2) and c.dim(n):
            if np.any(fplin.matmul(c.d(n + 1), c.d(n), c.p)):
                bad.append(n)
    return bad


class HomogeneousMap:
    """System of blocks source^n -> target^(n+degree)."""

    def __init__(self, source: Complex, target: Complex, degree: int,
                 blocks: dict[int, Array]):
        self.source, self.target, self.degree = source, target, degree
        self.blocks = {}
        for n, m in blocks.items():
            m = fplin.asmat(m, source.p)
            if m.shape != (target.dim(n + degree), source.dim(n)):
                raise ValueError("block at degree %d has shape %s" % (n, m.shape))
            if m.size:
                self.blocks[n] = m

    def block(self, n: int) -> Array:
        if n in self.blocks:
            return self.blocks[n]
        return zeros(self.target.dim(n + self.degree), self.source.dim(n))

    def compose(self, other: "HomogeneousMap") -> "HomogeneousMap":
        """self after other."""
        assert other.target is self.source or _same_shape(other.target, self.source)
        deg = self.degree + other.degree
        blocks = {}
        for n in other.source.degrees():
            blocks[n] = fplin.matmul(self.block(n + other.degree), other.block(n),
                                     self.source.p)
        return HomogeneousMap(other.source, self.target, deg, blocks)

    def add(self, other: "HomogeneousMap", scale: int = 1) -> "HomogeneousMap":
        assert self.degree == other.degree
        p = self.source.p
        blocks = {n: (self.block(n) + scale * other.block(n)) % p
                  for n in set(self.blocks) | set(other.blocks)}
        return HomogeneousMap(self.source, self.target, self.degree, blocks)

    def scale(self, c: int) -> "HomogeneousMap":
        p = self.source.p
        return HomogeneousMap(self.source, self.target, self.degree,
                              {n: (c * m) % p for n, m in self.blocks.items()})

    def is_zero(self) -> bool:
        return all(not np.any(m) for m in self.blocks.values())

    def commutes_with_differentials(self) -> bool:
        """d_target o f == (-1)^deg(f) f o d_source, blockwise exact."""
        p = self.source.p
        sgn = -1 if self.degree % 2 else 1
        for n in self.source.degrees():
            lhs = fplin.matmul(self.target.d(n + self.degree), self.block(n), p)
            rhs = (sgn * fplin.matmul(self.block(n + 1), self.source.d(n), p)) % p
            if lhs.shape != rhs.shape or np.any((lhs - rhs) % p):
                return False
        # blocks starting outside the stored window
        for n in self.target.degrees():
            m = n - self.degree
            if self.source.dim(m) == 0 and self.source.dim(m - 1):
                if np.any(fplin.matmul(self.block(m - 1), zeros(0, 0), p)):
                    return False
        return True

    def equal(self, other: "HomogeneousMap") -> bool:
        if self.degree != other.degree:
            return False
        p = self.source.p
        for n in set(self.blocks) | set(other.blocks):
            if np.any((self.block(n) - other.block(n)) % p):
                return False
        return True


def _same_shape(a: Complex, b: Complex) -> bool:
    return a.p == b.p and a.spaces == b.spaces


def identity_map(c: Complex) -> HomogeneousMap:
    return HomogeneousMap(c, c, 0, {n: fplin.eye(c.dim(n)) for n in c.degrees()})


def zero_map(source: Complex, target: Complex, degree: int = 0) -> HomogeneousMap:
    return HomogeneousMap(source, target, degree, {})


# ---------------------------------------------------------------------------
# shift and tensor


def shift(c: Complex, k: int) -> Complex:
    """c[k]: degree n component c^(n+k), differential d (x) 1 (no sign)."""
    spaces = {n - k: d for n, d in c.spaces.items()}
    diffs = {n - k: m for n, m in c.diffs.items()}
    labels = {n - k: c.labels[n] for n in c.spaces}
    return Complex(c.p, spaces, diffs, labels)


def tensor_blocks(a: Complex, b: Complex, n: int) -> list[tuple[int, int, int, int]]:
    """Blocks (i, j=n-i, offset, size) of (a (x) b)^n, i ascending."""
    out = []
    off = 0
    for i in a.degrees():
        j = n - i
        size = a.dim(i) * b.dim(j)
        if size:
            out.append((i, j, off, size))
            off += size
    return out


def tensor(a: Complex, b: Complex) -> Complex:
    """a (x) b with the Koszul differential."""
    if a.p != b.p:
        raise ValueError("modulus mismatch")
    p = a.p
    degs = sorted({i + j for i in a.degrees() for j in b.degrees()})
    spaces, labels = {}, {}
    for n in degs:
        blocks = tensor_blocks(a, b, n)
        spaces[n] = sum(s for *_ignored, s in blocks)
        lab = []
        for i, j, _off, _s in blocks:
            for la in a.labels[i]:
                for lb in b.labels[j]:
                    lab.append((la, lb))
        labels[n] = lab
    out = Complex(p, spaces, {}, labels)
    diffs = {}
    for n in degs:
        rows, cols = out.dim(n + 1), out.dim(n)
        if rows == 0 or cols == 0:
            continue
        m = zeros(rows, cols)
        tgt = {(i, j): off for i, j, off, _s in tensor_blocks(a, b, n + 1)}
        for i, j, off, _size in tensor_blocks(a, b, n):
            da, db = a.dim(i), b.dim(j)
            if (i + 1, j) in tgt and a.dim(i + 1):
                blk = np.kron(a.d(i), fplin.eye(db))
                m[tgt[(i + 1, j)]:tgt[(i + 1, j)] + a.dim(i + 1) * db,
                  off:off + da * db] += blk
            if (i, j + 1) in tgt and b.dim(j + 1):
                sgn = -1 if i % 2 else 1
                blk = sgn * np.kron(fplin.eye(da), b.d(j))
                m[tgt[(i, j + 1)]:tgt[(i, j + 1)] + da * b.dim(j + 1),
                  off:off + da * db] += blk
        diffs[n] = m % p
    return Complex(p, spaces, diffs, labels)


def switch(a: Complex, b: Complex) -> HomogeneousMap:
    """sigma: a (x) b -> b (x) a, sign (-1)^(deg a * deg b)."""
    src, tgt = tensor(a, b), tensor(b, a)
    p = a.p
    blocks = {}
    for n in src.degrees():
        m = zeros(tgt.dim(n), src.dim(n))
        tgt_off = {(j, i): off for j, i, off, _s in tensor_blocks(b, a, n)}
        for i, j, off, _size in tensor_blocks(a, b, n):
            da, db = a.dim(i), b.dim(j)
            sgn = perm_sign_graded([i, j], [1, 0])
            toff = tgt_off[(j, i)]
            for x in range(da):
                for y in range(db):
                    m[toff + y * da + x, off + x * db + y] = sgn % p
        blocks[n] = m
    return HomogeneousMap(src, tgt, 0, blocks)


def hom_tensor(f: HomogeneousMap, g: HomogeneousMap) -> HomogeneousMap:
    """(f (x) g)(a (x) b) = (-1)^(deg g * deg a) f(a) (x) g(b)."""
    src = tensor(f.source, g.source)
    tgt = tensor(f.target, g.target)
    p = src.p
    deg = f.degree + g.degree
    blocks = {}
    for n in src.degrees():
        m = zeros(tgt.dim(n + deg), src.dim(n))
        tgt_off = {(i, j): off
                   for i, j, off, _s in tensor_blocks(f.target, g.target, n + deg)}
        for i, j, off, _size in tensor_blocks(f.source, g.source, n):
            ti, tj = i + f.degree, j + g.degree
            if (ti, tj) not in tgt_off:
                continue
            rows = f.target.dim(ti) * g.target.dim(tj)
            if rows == 0:
                continue
            sgn = -1 if (g.degree * i) % 2 else 1
            blk = sgn * np.kron(f.block(i), g.block(j))
            toff = tgt_off[(ti, tj)]
            m[toff:toff + rows, off:off + f.source.dim(i) * g.source.dim(j)] += blk
        blocks[n] = m % p
    return HomogeneousMap(src, tgt, deg, blocks)


# ---------------------------------------------------------------------------
# double complexes


class DoubleComplex:
    """Bigraded spaces with commuting inner (d) and outer (delta) differentials."""

    def __init__(self, p: int, spaces: dict[tuple[int, int], int],
                 d: dict[tuple[int, int], Array],
                 delta: dict[tuple[int, int], Array],
                 labels: dict[tuple[int, int], list] | None = None):
        self.p = p
        self.spaces = {c: int(v) for c, v in spaces.items() if v}
        self.d = {}
        self.delta = {}
        for cell, m in d.items():
            m = fplin.asmat(m, p)
            if m.shape != (self.dim(cell[0] + 1, cell[1]), self.dim(*cell)):
                raise ValueError("inner differential shape at %s" % (cell,))
            if m.size:
                self.d[cell] = m
        for cell, m in delta.items():
            m = fplin.asmat(m, p)
            if m.shape != (self.dim(cell[0], cell[1] + 1), self.dim(*cell)):
                raise ValueError("outer differential shape at %s" % (cell,))
            if m.size:
                self.delta[cell] = m
        self.labels = {}
        for cell in self.spaces:
            lab = labels.get(cell) if labels else None
            self.labels[cell] = (list(lab) if lab is not None
                                 else list(range(self.dim(*cell))))

    def dim(self, i: int, j: int) -> int:
        return self.spaces.get((i, j), 0)

    def d_at(self, i: int, j: int) -> Array:
        return self.d.get((i, j), zeros(self.dim(i + 1, j), self.dim(i, j)))

    def delta_at(self, i: int, j: int) -> Array:
        return self.delta.get((i, j), zeros(self.dim(i, j + 1), self.dim(i, j)))

    def cells(self) -> list[tuple[int, int]]:
        return sorted(self.spaces)

    def validate(self) -> list[str]:
        p = self.p
        bad = []
        for (i, j) in self.cells():
            if np.any(fplin.matmul(self.d_at(i + 1, j), self.d_at(i, j), p)):
                bad.append("d^2 != 0 at %s" % ((i, j),))
            if np.any(fplin.matmul(self.delta_at(i, j + 1), self.delta_at(i, j), p)):
                bad.append("delta^2 != 0 at %s" % ((i, j),))
            lhs = fplin.matmul(self.d_at(i, j + 1), self.delta_at(i, j), p)
            rhs = fplin.matmul(self.delta_at(i + 1, j), self.d_at(i, j), p)
            if np.any((lhs - rhs) % p):
                bad.append("d delta != delta d at %s" % ((i, j),))
        return bad


def simple_blocks(dc: DoubleComplex, n: int) -> list[tuple[int, int, int, int]]:
    """Cells (i, j, offset, size) with i+j = n, ordered by outer degree j."""
    out = []
    off = 0
    for (i, j) in sorted(dc.cells(), key=lambda c: (c[1], c[0])):
        if i + j == n and dc.dim(i, j):
            out.append((i, j, off, dc.dim(i, j)))
            off += dc.dim(i, j)
    return out


def simple_complex(dc: DoubleComplex) -> Complex:
    """Total complex with D = d (x) 1 + delta (x) t; delta acts with (-1)^i."""
    p = dc.p
    degs = sorted({i + j for (i, j) in dc.cells()})
    spaces, labels = {}, {}
    for n in degs:
        blocks = simple_blocks(dc, n)
        spaces[n] = sum(s for *_c, s in blocks)
        labels[n] = [(j, lab) for i, j, _o, _s in blocks for lab in dc.labels[(i, j)]]
    out = Complex(p, spaces, {}, labels)
    diffs = {}
    for n in degs:
        rows, cols = out.dim(n + 1), out.dim(n)
        if rows == 0 or cols == 0:
            continue
        m = zeros(rows, cols)
        tgt = {(i, j): off for i, j, off, _s in simple_blocks(dc, n + 1)}
        for i, j, off, size in simple_blocks(dc, n):
            if (i + 1, j) in tgt:
                blk = dc.d_at(i, j)
                m[tgt[(i + 1, j)]:tgt[(i + 1, j)] + blk.shape[0], off:off + size] += blk
            if (i, j + 1) in tgt:
                sgn = -1 if i % 2 else 1
                blk = sgn * dc.delta_at(i, j)
                m[tgt[(i, j + 1)]:tgt[(i, j + 1)] + blk.shape[0], off:off + size] += blk
        diffs[n] = m % p
    return Complex(p, spaces, diffs, labels)


def double_tensor(a: DoubleComplex, b: DoubleComplex) -> DoubleComplex:
    """Tensor product in the bigraded category; Koszul signs per grading."""
    p = a.p
    spaces: dict[tuple[int, int], int] = {}
    blocks: dict[tuple[int, int], list] = {}
    for (ia, ja) in a.cells():
        for (ib, jb) in b.cells():
            cell = (ia + ib, ja + jb)
            blocks.setdefault(cell, []).append((ia, ja, ib, jb))
            spaces[cell] = spaces.get(cell, 0) + a.dim(ia, ja) * b.dim(ib, jb)
    for cell in blocks:
        blocks[cell].sort()
    offs: dict[tuple, int] = {}
    for cell, lst in blocks.items():
        off = 0
        for (ia, ja, ib, jb) in lst:
            offs[(cell, ia, ja, ib, jb)] = off
            off += a.dim(ia, ja) * b.dim(ib, jb)
    d: dict[tuple[int, int], Array] = {}
    delta: dict[tuple[int, int], Array] = {}
    for cell, lst in blocks.items():
        i, j = cell
        dm = zeros(spaces.get((i + 1, j), 0), spaces[cell])
        em = zeros(spaces.get((i, j + 1), 0), spaces[cell])
        for (ia, ja, ib, jb) in lst:
            off = offs[(cell, ia, ja, ib, jb)]
            size = a.dim(ia, ja) * b.dim(ib, jb)
            # inner: d_a (x) 1 + (-1)^(inner a) 1 (x) d_b
            key = ((i + 1, j), ia + 1, ja, ib, jb)
            if key in offs:
                blk = np.kron(a.d_at(ia, ja), fplin.eye(b.dim(ib, jb)))
                dm[offs[key]:offs[key] + blk.shape[0], off:off + size] += blk
            key = ((i + 1, j), ia, ja, ib + 1, jb)
            if key in offs:
                sgn = -1 if ia % 2 else 1
                blk = sgn * np.kron(fplin.eye(a.dim(ia, ja)), b.d_at(ib, jb))
                dm[offs[key]:offs[key] + blk.shape[0], off:off + size] += blk
            # outer: delta_a (x) 1 + (-1)^(outer a) 1 (x) delta_b
            key = ((i, j + 1), ia, ja + 1, ib, jb)
            if key in offs:
                blk = np.kron(a.delta_at(ia, ja), fplin.eye(b.dim(ib, jb)))
                em[offs[key]:offs[key] + blk.shape[0], off:off + size] += blk
            key = ((i, j + 1), ia, ja, ib, jb + 1)
            if key in offs:
                sgn = -1 if ja % 2 else 1
                blk = sgn * np.kron(fplin.eye(a.dim(ia, ja)), b.delta_at(ib, jb))
                em[offs[key]:offs[key] + blk.shape[0], off:off + size] += blk
        if dm.size:
            d[cell] = dm % p
        if em.size:
            delta[cell] = em % p
    return DoubleComplex(p, spaces, d, delta)


def nu_map(a: DoubleComplex, b: DoubleComplex) -> HomogeneousMap:
    """nu: s(a) (x) s(b) -> s(a (x) b), nu(x (x) y) = (-1)^(outer x * inner y) x (x) y."""
    sa, sb = simple_complex(a), simple_complex(b)
    src = tensor(sa, sb)
    ab = double_tensor(a, b)
    tgt = simple_complex(ab)
    p = src.p
    # index bookkeeping for target cells
    blocks = {}
    for n in src.degrees():
        m = zeros(tgt.dim(n), src.dim(n))
        # offsets of (cell of a (x) b) inside the target total degree n
        tgt_cell_off = {(i, j): off for i, j, off, _s in simple_blocks(ab, n)}
        # offsets of (ia,ja,ib,jb) inside cell of a (x) b (sorted as in double_tensor)
        for na, nb, off_pair, _size in tensor_blocks(sa, sb, n):
            # na = ia+ja runs over sa degrees; sub-blocks of sa^na are (ia, ja)
            for ia, ja, offa, da in simple_blocks(a, na):
                for ib, jb, offb, db in simple_blocks(b, nb):
                    cell = (ia + ib, ja + jb)
                    if cell not in tgt_cell_off:
                        continue
                    inner_off = 0
                    lst = sorted(
                        (pa, qa, pb, qb)
                        for (pa, qa) in a.cells() for (pb, qb) in b.cells()
                        if (pa + pb, qa + qb) == cell and a.dim(pa, qa) * b.dim(pb, qb)
                    )
                    found = False
                    for (pa, qa, pb, qb) in lst:
                        if (pa, qa, pb, qb) == (ia, ja, ib, jb):
                            found = True
                            break
                        inner_off += a.dim(pa, qa) * b.dim(pb, qb)
                    assert found
                    sgn = -1 if (ja * ib) % 2 else 1
                    base = tgt_cell_off[cell] + inner_off
                    for x in range(da):
                        for y in range(db):
                            src_idx = off_pair + (offa + x) * sb.dim(nb) + (offb + y)
                            m[base + x * db + y, src_idx] = sgn % p
        blocks[n] = m
    return HomogeneousMap(src, tgt, 0, blocks)


# ---------------------------------------------------------------------------
# cohomology


def cohomology(c: Complex, n: int) -> tuple[int, Array]:
    """(dim H^n, representative columns in C^n).  Deterministic reps."""
    p = c.p
    k = fplin.kernel_mod(c.d(n), p) if c.dim(n) else zeros(0, 0)
    if c.dim(n) == 0:
        return 0, zeros(0, 0)
    b = fplin.image_basis_mod(c.d(n - 1), p) if c.dim(n - 1) else zeros(c.dim(n), 0)
    # extend the boundary basis to the cocycles; new pivots are the reps
    joint = np.concatenate([b, k], axis=1)
    _, piv = fplin.rref_mod(joint, p)
    reps = [joint[:, j] for j in piv if j >= b.shape[1]]
    dim = len(reps)
    return dim, (np.array(reps).T % p if reps else zeros(c.dim(n), 0))


def cohomology_coords(c: Complex, n: int, vectors: Array) -> Array | None:
    """Coordinates of cocycle columns in the chosen H^n representatives."""
    p = c.p
    dim, reps = cohomology(c, n)
    b = fplin.image_basis_mod(c.d(n - 1), p) if c.dim(n - 1) else zeros(c.dim(n), 0)
    basis = np.concatenate([reps, b], axis=1)
    sol = fplin.solve_mod(basis, vectors, p)
    if sol is None:
        return None
    sol = np.atleast_2d(sol.T).T
    return sol[:dim, :]


def is_quasi_iso(f: HomogeneousMap) -> bool:
    """True iff the degree-0 chain map f induces isomorphisms on all H^n."""
    if f.degree != 0:
        raise ValueError("not a degree-0 map")
    if not f.commutes_with_differentials():
        raise ValueError("not a chain map")
    c, d = f.source, f.target
    for n in sorted(set(c.degrees()) | set(d.degrees())):
        hc, reps_c = cohomology(c, n)
        hd, _ = cohomology(d, n)
        if hc != hd:
            return False
        if hc == 0:
            continue
        image = fplin.matmul(f.block(n), reps_c, c.p)
        coords = cohomology_coords(d, n, image)
        if coords is None or fplin.rank_mod(coords, c.p) != hc:
            return False
    return True
