"""Exact linear algebra over F_p and Z/p^mu.

Everything here is deterministic: pivots are chosen first-by-position, and
Howell forms are fully canonical so row-span equality is plain equality of
the normalized matrices.  p = 2 row bases use Python-int bitsets, which keep
the A_5-sized cocycle computations (rows of ~3500 bits) fast.
"""

from __future__ import annotations

import numpy as np

from .errors import GpisoError


def asmod(a, p):
    return np.asarray(a, dtype=np.int64) % p


def mat_mul(a, b, p):
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % p


def mat_pow(m, e, p):
    m = asmod(m, p)
    result = np.eye(m.shape[0], dtype=np.int64)
    while e:
        if e & 1:
            result = mat_mul(result, m, p)
        m = mat_mul(m, m, p)
        e >>= 1
    return result


def inv_mod(a, p):
    """Inverse of a modulo a prime p."""
    a %= p
    if a == 0:
        raise GpisoError("zero has no inverse")
    return pow(int(a), p - 2, p)


def inv_unit(u, p, mu):
    """Inverse of a unit modulo p^mu."""
    m = p**mu
    u = int(u) % m
    if u % p == 0:
        raise GpisoError(f"{u} is not a unit mod {p}^{mu}")
    phi = (p - 1) * p ** (mu - 1)
    return pow(u, phi - 1, m)


def rref(m, p):
    """Reduced row echelon form over F_p.

    Returns (r, t, pivots) with r = t @ m mod p and t invertible; the op
    record is t itself (invert it to undo the reduction).
    """
    m = asmod(m, p)
    rows, cols = m.shape
    r = m.copy()
    t = np.eye(rows, dtype=np.int64)
    pivots = []
    lead = 0
    for col in range(cols):
        if lead >= rows:
            break
        pivot_row = None
        for i in range(lead, rows):
            if r[i, col] % p:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != lead:
            r[[lead, pivot_row]] = r[[pivot_row, lead]]
            t[[lead, pivot_row]] = t[[pivot_row, lead]]
        u = inv_mod(r[lead, col], p)
        if u != 1:
            r[lead] = (r[lead] * u) % p
            t[lead] = (t[lead] * u) % p
        for i in range(rows):
            if i != lead and r[i, col] % p:
                c = r[i, col] % p
                r[i] = (r[i] - c * r[lead]) % p
                t[i] = (t[i] - c * t[lead]) % p
        pivots.append(col)
        lead += 1
    return r, t, pivots


def rank(m, p):
    return len(rref(m, p)[2])


def inv(m, p):
    m = asmod(m, p)
    n = m.shape[0]
    r, t, pivots = rref(m, p)
    if len(pivots) != n:
        raise GpisoError("matrix not invertible")
    return t % p


def is_invertible(m, p):
    m = asmod(m, p)
    return m.shape[0] == m.shape[1] and rank(m, p) == m.shape[0]


def nullspace(m, p):
    """Basis (rows) of {x : m @ x = 0} over F_p."""
    m = asmod(m, p)
    rows, cols = m.shape
    r, _, pivots = rref(m, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = np.zeros(cols, dtype=np.int64)
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-r[i, fc]) % p
        basis.append(v)
    return basis


def left_nullspace(m, p):
    """Basis (rows) of {x : x @ m = 0} over F_p."""
    return nullspace(asmod(m, p).T, p)


def solve(a, b, p):
    """One solution x of a @ x = b over F_p, or None if inconsistent.

    b may be a vector or a matrix (solved column-wise).
    """
    a = asmod(a, p)
    b = asmod(b, p)
    vector = b.ndim == 1
    if vector:
        b = b.reshape(-1, 1)
    r, t, pivots = rref(a, p)
    tb = mat_mul(t, b, p)
    x = np.zeros((a.shape[1], b.shape[1]), dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = tb[i]
    if np.any(mat_mul(a, x, p) != b):
        return None
    return x[:, 0] if vector else x


def solve_left_invertible(m1, m2, p, node_cap=500_000):
    """An invertible X with X @ m1 = m2 over F_p, or None.

    Row i of X solves x @ m1 = m2[i]; each solution set is an affine coset
    of the left nullspace of m1.  A backtracking scan over the coset
    representatives picks rows that stay linearly independent.
    """
    m1 = asmod(m1, p)
    m2 = asmod(m2, p)
    if m1.shape != m2.shape:
        return None
    k = m1.shape[0]
    if k == 0:
        return np.zeros((0, 0), dtype=np.int64)
    null = left_nullspace(m1, p)
    particulars = []
    a_t = m1.T
    for i in range(k):
        x = solve(a_t, m2[i], p)
        if x is None:
            return None
        particulars.append(x)
    t = len(null)
    if t == 0:
        x = np.array(particulars) % p
        return x if is_invertible(x, p) else None

    null = np.array(null, dtype=np.int64)
    rows: list[np.ndarray] = []
    nodes = 0

    def extend(i):
        nonlocal nodes
        if i == k:
            return True
        for coeffs in _lex_vectors(t, p):
            nodes += 1
            if nodes > node_cap:
                raise GpisoError("solve_left_invertible search cap exceeded")
            cand = (particulars[i] + coeffs @ null) % p
            trial = np.array(rows + [cand])
            if rank(trial, p) == i + 1:
                rows.append(cand)
                if extend(i + 1):
                    return True
                rows.pop()
        return False

    if extend(0):
        return np.array(rows) % p
    return None


def _lex_vectors(t, p):
    v = [0] * t
    while True:
        yield np.array(v, dtype=np.int64)
        i = t - 1
        while i >= 0 and v[i] == p - 1:
            v[i] = 0
            i -= 1
        if i < 0:
            return
        v[i] += 1


# ---------------------------------------------------------------------------
# Howell normal form over Z/p^mu


def howell(rows, p, mu):
    """Canonical Howell form of the span of `rows` over Z/p^mu.

    Returns a tuple of row tuples; two row sets span the same submodule of
    (Z/p^mu)^n iff their Howell forms are equal.
    """
    m = p**mu
    rest = [[int(x) % m for x in r] for r in rows]
    rest = [r for r in rest if any(r)]
    if not rest:
        return ()
    n = len(rest[0])

    def val(x):
        v = 0
        while x % p == 0:
            x //= p
            v += 1
        return v

    done: list[tuple[int, int, list[int]]] = []  # (pivot col, valuation, row)
    for col in range(n):
        cands = [r for r in rest if r[col] % m]
        if not cands:
            continue
        pivot = min(cands, key=lambda r: val(r[col]))
        rest.remove(pivot)
        v = val(pivot[col])
        u = inv_unit(pivot[col] // (p**v), p, mu)
        pivot = [(x * u) % m for x in pivot]  # pivot entry becomes exactly p^v
        for r in rest:
            if r[col] % m:
                q = r[col] // (p**v)  # exact: val(r[col]) >= v by pivot choice
                for j in range(col, n):
                    r[j] = (r[j] - q * pivot[j]) % m
        if v > 0:
            # saturation: p^(mu-v) * pivot has zero pivot entry but a live tail
            sat = [(x * p ** (mu - v)) % m for x in pivot]
            if any(sat):
                rest.append(sat)
        done.append((col, v, pivot))
        rest = [r for r in rest if any(r)]
    # canonical reduction above each pivot, modulo the pivot value p^v;
    # left-to-right so that a reduction never disturbs an already-fixed column
    out = [row for _, _, row in done]
    for j in range(len(out)):
        pcol, pv, _ = done[j]
        pval = p**pv
        for i in range(j):
            if out[i][pcol] % pval != out[i][pcol]:
                q = out[i][pcol] // pval
                out[i] = [(a - q * b) % m for a, b in zip(out[i], out[j])]
    return tuple(tuple(r) for r in out)


# ---------------------------------------------------------------------------
# Incremental row bases (RREF maintained row by row)


class RowBasis:
    """Incremental RREF row basis over F_p with optional coefficient tracking.

    `add` returns True when the row enlarged the span.  `reduce` returns the
    canonical representative modulo the span; with track=True it also returns
    the coefficients, over the sequence of rows passed to `add`, of the
    eliminated part (vec = sum(coeffs * gens) + reduced).
    """

    def __new__(cls, p, ncols, track=False):
        if cls is RowBasis:
            return object.__new__(_RowBasis2 if p == 2 else _RowBasisP)
        return object.__new__(cls)

    def __init__(self, p, ncols, track=False):
        self.p = p
        self.ncols = ncols
        self.track = track
        self.ngens = 0

    @property
    def rank(self):
        return len(self.pivots)

    def coeff_vector(self, cdict):
        out = np.zeros(self.ngens, dtype=np.int64)
        for idx, c in cdict.items():
            out[idx] = c % self.p
        return out


class _RowBasisP(RowBasis):
    def __init__(self, p, ncols, track=False):
        super().__init__(p, ncols, track)
        self.rows: list[np.ndarray] = []
        self.coeffs: list[dict] = []  # row -> {gen index: coeff}
        self.pivots: list[int] = []

    def _reduce(self, vec, cdict):
        p = self.p
        vec = np.asarray(vec, dtype=np.int64) % p
        for i, piv in enumerate(self.pivots):
            c = int(vec[piv]) % p
            if c:
                vec = (vec - c * self.rows[i]) % p
                if cdict is not None:
                    for idx, cc in self.coeffs[i].items():
                        cdict[idx] = (cdict.get(idx, 0) + c * cc) % p
        return vec

    def reduce(self, vec):
        cdict = {} if self.track else None
        red = self._reduce(vec, cdict)
        return red, (self.coeff_vector(cdict) if self.track else None)

    def add(self, vec):
        idx = self.ngens
        self.ngens += 1
        cdict = {} if self.track else None
        red = self._reduce(vec, cdict)
        nz = np.flatnonzero(red % self.p)
        if len(nz) == 0:
            return False
        piv = int(nz[0])
        u = inv_mod(int(red[piv]), self.p)
        red = (red * u) % self.p
        if self.track:
            # red = u*(vec - sum c_j g_j)  =>  red's expression over gens
            cdict = {k: (-u * v) % self.p for k, v in cdict.items()}
            cdict[idx] = u % self.p
        for i in range(len(self.rows)):
            c = int(self.rows[i][piv]) % self.p
            if c:
                self.rows[i] = (self.rows[i] - c * red) % self.p
                if self.track:
                    for k, v in cdict.items():
                        self.coeffs[i][k] = (self.coeffs[i].get(k, 0) - c * v) % self.p
        pos = 0
        while pos < len(self.pivots) and self.pivots[pos] < piv:
            pos += 1
        self.rows.insert(pos, red)
        self.pivots.insert(pos, piv)
        self.coeffs.insert(pos, cdict if self.track else {})
        return True

    def gen_coeffs_of(self, vec):
        """Coefficients c with vec = sum c_j gen_j, or None if outside the span."""
        red, cvec = self.reduce(vec)
        if np.any(red % self.p):
            return None
        return cvec


class _RowBasis2(RowBasis):
    """p = 2 specialization on Python-int bitsets (bit i = column i)."""

    def __init__(self, p, ncols, track=False):
        super().__init__(p, ncols, track)
        self.rows: list[int] = []
        self.coeffs: list[int] = []  # bitmask over generator indices
        self.pivots: list[int] = []

    @staticmethod
    def to_bits(vec):
        if isinstance(vec, int):
            return vec
        x = 0
        for i, v in enumerate(vec):
            if int(v) & 1:
                x |= 1 << i
        return x

    def to_vec(self, bits):
        out = np.zeros(self.ncols, dtype=np.int64)
        while bits:
            low = bits & -bits
            out[low.bit_length() - 1] = 1
            bits ^= low
        return out

    def _cbits_to_vec(self, cbits):
        out = np.zeros(self.ngens, dtype=np.int64)
        while cbits:
            low = cbits & -cbits
            out[low.bit_length() - 1] = 1
            cbits ^= low
        return out

    def _reduce_bits(self, bits, track):
        cbits = 0
        for i, piv in enumerate(self.pivots):
            if (bits >> piv) & 1:
                bits ^= self.rows[i]
                if track:
                    cbits ^= self.coeffs[i]
        return bits, cbits

    def reduce(self, vec):
        was_int = isinstance(vec, int)
        red, cbits = self._reduce_bits(self.to_bits(vec), self.track)
        cvec = self._cbits_to_vec(cbits) if self.track else None
        return (red if was_int else self.to_vec(red)), cvec

    def add(self, vec):
        idx = self.ngens
        self.ngens += 1
        red, cbits = self._reduce_bits(self.to_bits(vec), self.track)
        if red == 0:
            return False
        piv = (red & -red).bit_length() - 1
        cbits ^= 1 << idx
        for i in range(len(self.rows)):
            if (self.rows[i] >> piv) & 1:
                self.rows[i] ^= red
                if self.track:
                    self.coeffs[i] ^= cbits
        pos = 0
        while pos < len(self.pivots) and self.pivots[pos] < piv:
            pos += 1
        self.rows.insert(pos, red)
        self.pivots.insert(pos, piv)
        self.coeffs.insert(pos, cbits if self.track else 0)
        return True

    def gen_coeffs_of(self, vec):
        red, cvec = self.reduce(vec)
        nonzero = red != 0 if isinstance(red, int) else bool(np.any(red))
        if nonzero:
            return None
        return cvec


# ---------------------------------------------------------------------------
# Polynomials over F_p (coefficient tuples, ascending degree)


def poly_trim(c):
    c = list(c)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return poly_trim(out)


def poly_add(a, b, p):
    n = max(len(a), len(b))
    return poly_trim(
        [((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)]
    )


def poly_scale(a, c, p):
    return poly_trim([(x * c) % p for x in a])


def charpoly(m, p):
    """det(xI - M) over F_p via division-free subset-DP Laplace expansion."""
    m = asmod(m, p)
    d = m.shape[0]
    if d == 0:
        return (1,)

    def entry(i, j):
        c0 = int((-m[i, j]) % p)
        return (c0, 1) if i == j else (c0,)

    full = (1 << d) - 1
    dp = {0: (1,)}
    for mask in range(1, full + 1):
        r = bin(mask).count("1") - 1
        acc = (0,)
        # expanding along the last row of the submatrix: sign (-1)^(r+idx)
        sign = 1 if r % 2 == 0 else -1
        rest = mask
        while rest:
            low = rest & -rest
            j = low.bit_length() - 1
            term = poly_mul(entry(r, j), dp[mask ^ low], p)
            if sign < 0:
                term = poly_scale(term, p - 1, p)
            acc = poly_add(acc, term, p)
            sign = -sign
            rest ^= low
        dp[mask] = acc
    return dp[full]
