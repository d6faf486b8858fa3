import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gpiso import linalg


def random_matrix(rng, rows, cols, p):
    return rng.integers(0, p, size=(rows, cols))


def test_rref_identity():
    m = np.eye(3, dtype=np.int64)
    r, t, pivots = linalg.rref(m, 5)
    assert np.array_equal(r, m)
    assert pivots == [0, 1, 2]


def test_rref_zero():
    m = np.zeros((2, 4), dtype=np.int64)
    r, _, pivots = linalg.rref(m, 3)
    assert np.array_equal(r, m)
    assert pivots == []


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5]))
def test_rref_op_record_roundtrip(seed, p):
    rng = np.random.default_rng(seed)
    m = random_matrix(rng, 3, 5, p)
    r, t, _ = linalg.rref(m, p)
    assert np.array_equal(linalg.mat_mul(t, m, p), r)
    t_inv = linalg.inv(t, p)
    assert np.array_equal(linalg.mat_mul(t_inv, r, p), m % p)


def test_solve_and_nullspace():
    p = 5
    a = np.array([[1, 2, 0], [0, 0, 1]])
    b = np.array([3, 4])
    x = linalg.solve(a, b, p)
    assert x is not None
    assert np.array_equal(linalg.mat_mul(a, x, p), b % p)
    for v in linalg.nullspace(a, p):
        assert not np.any(linalg.mat_mul(a, v, p))
    assert len(linalg.nullspace(a, p)) == 3 - linalg.rank(a, p)


def test_solve_inconsistent():
    a = np.array([[1, 1], [2, 2]])
    b = np.array([1, 1])
    assert linalg.solve(a, b, 3) is None


def test_inv_roundtrip():
    rng = np.random.default_rng(7)
    for p in (2, 3, 7):
        while True:
            m = random_matrix(rng, 3, 3, p)
            if linalg.is_invertible(m, p):
                break
        mi = linalg.inv(m, p)
        assert np.array_equal(linalg.mat_mul(m, mi, p), np.eye(3, dtype=np.int64))


def test_solve_left_invertible_exact():
    p = 3
    rng = np.random.default_rng(11)
    m1 = random_matrix(rng, 2, 4, p)
    x_true = np.array([[1, 2], [1, 1]])
    m2 = linalg.mat_mul(x_true, m1, p)
    x = linalg.solve_left_invertible(m1, m2, p)
    assert x is not None
    assert linalg.is_invertible(x, p)
    assert np.array_equal(linalg.mat_mul(x, m1, p), m2)


def test_solve_left_invertible_none_when_rowspans_differ():
    p = 2
    m1 = np.array([[1, 0, 0]])
    m2 = np.array([[0, 1, 0]])
    assert linalg.solve_left_invertible(m1, m2, p) is None


def brute_span(rows, p, mu):
    m = p**mu
    rows = [tuple(int(x) % m for x in r) for r in rows]
    n = len(rows[0]) if rows else 0
    span = {tuple([0] * n)}
    frontier = [tuple([0] * n)]
    while frontier:
        v = frontier.pop()
        for r in rows:
            w = tuple((a + b) % m for a, b in zip(v, r))
            if w not in span:
                span.add(w)
                frontier.append(w)
    return span


@pytest.mark.parametrize("p,mu", [(2, 2), (3, 2), (2, 3)])
def test_howell_canonical_for_equal_spans(p, mu):
    m = p**mu
    rng = np.random.default_rng(p * 100 + mu)
    for _ in range(25):
        rows = rng.integers(0, m, size=(2, 3))
        span = brute_span(rows, p, mu)
        h1 = linalg.howell(rows, p, mu)
        # a different generating set of the same span
        alt = [
            tuple((2 * a + b) % m for a, b in zip(rows[0], rows[1])),
            tuple(rows[1]),
            tuple((a * (1 + p)) % m for a in rows[0]),
        ]
        assert brute_span(alt, p, mu) == span
        assert linalg.howell(alt, p, mu) == h1
        # the Howell rows lie inside the span and regenerate it
        assert all(tuple(r) in span for r in h1)
        assert brute_span(h1, p, mu) == span


def test_howell_distinguishes_spans():
    a = linalg.howell([[2, 0], [0, 1]], 2, 2)
    b = linalg.howell([[1, 0], [0, 1]], 2, 2)
    assert a != b


@pytest.mark.parametrize("p", [2, 3, 5])
def test_rowbasis_matches_rank_and_tracks_coeffs(p):
    rng = np.random.default_rng(p)
    vecs = [rng.integers(0, p, size=8) for _ in range(6)]
    rb = linalg.RowBasis(p, 8, track=True)
    for v in vecs:
        rb.add(v)
    assert rb.rank == linalg.rank(np.array(vecs), p)
    # reduce returns a representative modulo the span
    probe = rng.integers(0, p, size=8)
    red, coeffs = rb.reduce(probe)
    reconstructed = (np.asarray(red) + sum(int(c) * v for c, v in zip(coeffs, vecs))) % p
    assert np.array_equal(reconstructed, probe % p)
    # an in-span vector yields exact coefficients
    combo = sum(int(rng.integers(0, p)) * v for v in vecs) % p
    c = rb.gen_coeffs_of(combo)
    assert c is not None
    assert np.array_equal(sum(int(ci) * v for ci, v in zip(c, vecs)) % p, combo)


def test_rowbasis_reduce_idempotent():
    rb = linalg.RowBasis(2, 10)
    rng = np.random.default_rng(3)
    for _ in range(4):
        rb.add(rng.integers(0, 2, size=10))
    probe = rng.integers(0, 2, size=10)
    red, _ = rb.reduce(probe)
    red2, _ = rb.reduce(red)
    assert np.array_equal(red, red2)


def test_charpoly_small_cases():
    p = 5
    m = np.array([[2]])
    assert linalg.charpoly(m, p) == ((-2) % p, 1)
    m = np.array([[0, 1], [1, 0]])
    # x^2 - 1
    assert linalg.charpoly(m, 2) == (1, 0, 1)
    m = np.array([[1, 1], [0, 1]])
    # (x-1)^2 = x^2 - 2x + 1
    assert linalg.charpoly(m, 5) == (1, 3, 1)


def test_charpoly_companion():
    # companion matrix of x^2+x+1 over F_2 has that charpoly
    m = np.array([[0, 1], [1, 1]])
    assert linalg.charpoly(m, 2) == (1, 1, 1)
