"""Cayley-table groups: validation, structure subroutines, homomorphisms.

Conventions fixed across the library:
  * element 0 is the identity (constructors renumber to enforce this);
  * table[g, h] is the product g*h;
  * everything is immutable after construction and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gcd

import numpy as np

from .errors import (
    NoIdentity,
    NotAbelian,
    NotAssociative,
    NotLatin,
    NotNormal,
    ValidationError,
)

# Above this order, validation checks associativity on a seeded sample of
# triples instead of all n^3 (the n=7200 corpus groups make the cube
# infeasible); constructors for large groups guarantee associativity
# structurally and note it.
FULL_ASSOC_LIMIT = 1024
ASSOC_SAMPLES = 200_000


@dataclass(frozen=True)
class CayleyTable:
    """A finite group given by its full multiplication table."""

    n: int
    table: np.ndarray  # n x n, entry [g, h] = g*h
    labels: tuple[str, ...] | None = None
    # optional construction metadata (coordinates etc.), not part of identity
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        self.table.setflags(write=False)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    @cached_property
    def inverse(self) -> np.ndarray:
        inv = np.empty(self.n, dtype=self.table.dtype)
        rows, cols = np.nonzero(self.table == 0)
        inv[rows] = cols
        inv.setflags(write=False)
        return inv

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return int(self.table[self.table[g, x], self.inverse[g]])

    @cached_property
    def orders(self) -> np.ndarray:
        out = np.empty(self.n, dtype=np.int64)
        for g in range(self.n):
            out[g] = element_order(self, g)
        out.setflags(write=False)
        return out

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def power(self, g: int, e: int) -> int:
        if e < 0:
            g, e = self.inv(g), -e
        acc, base = 0, g
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def elements(self):
        return range(self.n)

    def __len__(self):
        return self.n


@dataclass(frozen=True)
class Subgroup:
    parent: CayleyTable
    elements: tuple[int, ...]  # sorted, contains 0
    is_normal: bool | None = None

    def __post_init__(self):
        assert self.elements == tuple(sorted(self.elements))
        assert self.elements[0] == 0

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: int) -> bool:
        return g in self._set

    @cached_property
    def _set(self) -> frozenset:
        return frozenset(self.elements)


@dataclass(frozen=True)
class GroupHom:
    """A homomorphism given by its full image array."""

    domain: CayleyTable
    codomain: CayleyTable
    image: np.ndarray  # length n_domain

    def __post_init__(self):
        self.image.setflags(write=False)

    def __call__(self, g: int) -> int:
        return int(self.image[g])

    def is_homomorphism(self) -> bool:
        img = self.image
        return bool(
            np.array_equal(
                img[self.domain.table],
                self.codomain.table[np.ix_(img, img)],
            )
        )

    def is_isomorphism(self) -> bool:
        return (
            self.domain.n == self.codomain.n
            and len(set(self.image.tolist())) == self.domain.n
            and self.is_homomorphism()
        )

    def validate(self) -> None:
        if not self.is_homomorphism():
            raise ValidationError("image array is not a homomorphism")


@dataclass(frozen=True)
class AbelianBasis:
    parent: CayleyTable
    generators: tuple[int, ...]
    orders: tuple[int, ...]  # prime powers, sorted ascending

    def element_of(self, coords) -> int:
        g = 0
        for gen, c in zip(self.generators, coords):
            g = self.parent.mul(g, self.parent.power(gen, int(c)))
        return g

    @cached_property
    def coordinates(self) -> dict[int, tuple[int, ...]]:
        """Element -> coordinate vector; materializing it asserts bijectivity."""
        out = {}
        idx = [0] * len(self.orders)
        total = 1
        for o in self.orders:
            total *= o
        assert total == self.parent.n, "basis orders do not multiply to |A|"
        for _ in range(total):
            g = self.element_of(idx)
            assert g not in out, "basis product map is not injective"
            out[g] = tuple(idx)
            for i in range(len(idx) - 1, -1, -1):
                idx[i] += 1
                if idx[i] < self.orders[i]:
                    break
                idx[i] = 0
        return out


# ---------------------------------------------------------------------------
# Validation


def validate_table(raw, labels=None, assoc_limit=FULL_ASSOC_LIMIT, _skip_assoc=False) -> CayleyTable:
    """Check the group axioms and wrap the grid as a CayleyTable.

    Raises NotLatin / NoIdentity / NotAssociative with a witness.  For
    n > assoc_limit associativity is checked on a seeded sample of triples
    (the full cube is O(n^3)); constructed large groups are associative by
    construction.
    """
    table = np.asarray(raw)
    if table.ndim != 2 or table.shape[0] != table.shape[1]:
        raise ValidationError("table must be square")
    n = table.shape[0]
    dtype = np.int16 if n < 2**15 else np.int32
    table = table.astype(dtype)
    if n == 0:
        raise ValidationError("empty table")
    if table.min() < 0 or table.max() >= n:
        raise ValidationError("entries out of range")
    full = np.arange(n)
    for i in range(n):
        if not np.array_equal(np.sort(table[i]), full):
            raise NotLatin("row", i)
        if not np.array_equal(np.sort(table[:, i]), full):
            raise NotLatin("col", i)
    if not (np.array_equal(table[0], full) and np.array_equal(table[:, 0], full)):
        raise NoIdentity()
    if not _skip_assoc:
        _check_associativity(table, n, assoc_limit)
    # inverses exist: row Latin + identity gives a right inverse; verify two-sided
    inv = np.empty(n, dtype=np.int64)
    rows, cols = np.nonzero(table == 0)
    inv[rows] = cols
    if np.any(table[inv, np.arange(n)] != 0):
        raise ValidationError("an element lacks a two-sided inverse")
    return CayleyTable(n=n, table=table, labels=tuple(labels) if labels else None)


def _check_associativity(table, n, assoc_limit):
    t64 = table.astype(np.int64)
    if n <= assoc_limit:
        for a in range(n):
            left = t64[t64[a], :]  # (a*b)*c over b, c
            right = t64[a, t64]  # a*(b*c) over b, c
            if not np.array_equal(left, right):
                b, c = np.argwhere(left != right)[0]
                raise NotAssociative(a, int(b), int(c))
    else:
        rng = np.random.default_rng(0)
        triples = rng.integers(0, n, size=(ASSOC_SAMPLES, 3))
        a, b, c = triples[:, 0], triples[:, 1], triples[:, 2]
        bad = np.nonzero(t64[t64[a, b], c] != t64[a, t64[b, c]])[0]
        if len(bad):
            i = int(bad[0])
            raise NotAssociative(int(a[i]), int(b[i]), int(c[i]))


# ---------------------------------------------------------------------------
# Elementary structure


def element_order(g_table: CayleyTable, g: int) -> int:
    t = 1
    x = g
    while x != 0:
        x = g_table.mul(x, g)
        t += 1
    return t


def center(g_table: CayleyTable) -> Subgroup:
    mask = np.all(g_table.table == g_table.table.T, axis=1)
    elements = tuple(int(i) for i in np.nonzero(mask)[0])
    return Subgroup(g_table, elements, is_normal=True)


def closure(g_table: CayleyTable, seed) -> Subgroup:
    """Smallest subgroup containing the seed elements."""
    table = g_table.table
    inside = np.zeros(g_table.n, dtype=bool)
    inside[0] = True
    frontier = []
    for s in seed:
        if not inside[s]:
            inside[s] = True
            frontier.append(int(s))
    gens = list(frontier)
    while frontier:
        x = frontier.pop()
        for g in gens:
            for y in (int(table[x, g]), int(table[g, x])):
                if not inside[y]:
                    inside[y] = True
                    frontier.append(y)
    # close under products of accumulated elements until stable
    while True:
        elems = np.nonzero(inside)[0]
        prods = np.unique(table[np.ix_(elems, elems)])
        new = prods[~inside[prods]]
        if len(new) == 0:
            break
        inside[new] = True
    elements = tuple(int(i) for i in np.nonzero(inside)[0])
    return Subgroup(g_table, elements, is_normal=None)


def normal_closure(g_table: CayleyTable, seed) -> Subgroup:
    table = g_table.table.astype(np.int64)
    inv = g_table.inverse
    current = set(int(s) for s in seed)
    while True:
        sub = closure(g_table, sorted(current))
        elems = np.array(sub.elements)
        prods = table[:, elems]  # prods[g, i] = g * e_i
        conj = table[prods, inv[:, None]]  # (g * e_i) * g^-1
        found = set(int(c) for c in np.unique(conj))
        if found <= set(sub.elements):
            return Subgroup(g_table, sub.elements, is_normal=True)
        current = set(sub.elements) | found


def is_subgroup_set(g_table: CayleyTable, elements) -> bool:
    elems = np.asarray(sorted(elements))
    if len(elems) == 0 or elems[0] != 0:
        return False
    inside = np.zeros(g_table.n, dtype=bool)
    inside[elems] = True
    prods = g_table.table[np.ix_(elems, elems)]
    return bool(np.all(inside[prods]))


def is_normal_set(g_table: CayleyTable, elements) -> bool:
    elems = np.asarray(sorted(elements))
    inside = np.zeros(g_table.n, dtype=bool)
    inside[elems] = True
    table, inv = g_table.table, g_table.inverse
    for g in range(g_table.n):
        conj = table[table[g, elems], inv[g]]
        if not np.all(inside[conj]):
            return False
    return True


def subgroup(g_table: CayleyTable, elements) -> Subgroup:
    elems = tuple(sorted(int(e) for e in set(elements)))
    if not is_subgroup_set(g_table, elems):
        raise ValidationError("element set is not a subgroup")
    return Subgroup(g_table, elems, is_normal=None)


def quotient(g_table: CayleyTable, n_sub: Subgroup):
    """Quotient table with cosets labeled by minimal element, plus projection.

    Returns (q_table, projection GroupHom).  Raises NotNormal.
    """
    if n_sub.is_normal is not True and not is_normal_set(g_table, n_sub.elements):
        raise NotNormal("subgroup is not normal")
    elems = np.array(n_sub.elements)
    # coset representative of g = min(g*N)
    cosets = g_table.table[:, elems].astype(np.int64)
    rep = cosets.min(axis=1)
    reps = np.unique(rep)
    index_of = np.full(g_table.n, -1, dtype=np.int64)
    index_of[reps] = np.arange(len(reps))
    m = len(reps)
    dtype = np.int16 if m < 2**15 else np.int32
    sub_table = g_table.table[np.ix_(reps, reps)].astype(np.int64)
    qtab = index_of[rep[sub_table]].astype(dtype)
    q = CayleyTable(n=m, table=qtab)
    proj = GroupHom(g_table, q, index_of[rep])
    return q, proj


def sylow_elements(g_table: CayleyTable, p: int) -> tuple[int, ...]:
    """All elements of p-power order (the lemma's candidate Sylow set).

    The caller decides whether the set satisfies the group axioms; for a
    non-normal Sylow it will not.
    """
    orders = g_table.orders
    out = []
    for g in range(g_table.n):
        o = int(orders[g])
        while o % p == 0:
            o //= p
        if o == 1:
            out.append(g)
    return tuple(out)


def subgroup_table(g_table: CayleyTable, elements):
    """Standalone CayleyTable for a subgroup, with embed/restrict maps.

    Elements are renumbered 0..k-1 in ascending parent order (0 stays 0).
    Returns (table, embed array, restrict dict).
    """
    elems = tuple(sorted(int(e) for e in set(elements)))
    assert elems[0] == 0
    restrict = {e: i for i, e in enumerate(elems)}
    k = len(elems)
    lookup = np.full(g_table.n, -1, dtype=np.int64)
    lookup[list(elems)] = np.arange(k)
    sub = g_table.table[np.ix_(elems, elems)].astype(np.int64)
    dtype = np.int16 if k < 2**15 else np.int32
    tab = lookup[sub].astype(dtype)
    assert tab.min() >= 0, "element set is not closed"
    return CayleyTable(n=k, table=tab), np.array(elems, dtype=np.int64), restrict


def abelian_basis(a_table: CayleyTable) -> AbelianBasis:
    """Basis of an abelian group: independent generators of prime-power order.

    Raises NotAbelian.  Orders come out ascending; the coordinate map is
    asserted bijective when first used.
    """
    if not a_table.is_abelian:
        raise NotAbelian("abelian_basis needs an abelian group")
    n = a_table.n
    if n == 1:
        return AbelianBasis(a_table, (), ())
    primes = _prime_factors(n)
    gens: list[tuple[int, int]] = []  # (order, element)
    for p in primes:
        comp = sylow_elements(a_table, p)
        gens.extend(_abelian_p_basis(a_table, comp, p))
    gens.sort(key=lambda t: (t[0], t[1]))
    return AbelianBasis(
        a_table,
        tuple(g for _, g in gens),
        tuple(o for o, _ in gens),
    )


def _abelian_p_basis(a_table: CayleyTable, comp, p):
    """Basis of the abelian p-group on the element set comp.

    Peels a maximal-order generator, recurses on the quotient, and corrects
    the lifted generators so their orders match the quotient orders.
    """
    comp = list(comp)
    if len(comp) == 1:
        return []
    orders = {g: int(a_table.orders[g]) for g in comp}
    g1 = min((g for g in comp if g != 0), key=lambda g: (-orders[g], g))
    o1 = orders[g1]
    cyc = set()
    x = 0
    for _ in range(o1):
        cyc.add(x)
        x = a_table.mul(x, g1)
    if len(cyc) == len(comp):
        return [(o1, g1)]
    # quotient of the p-component by <g1>
    comp_table, embed, restrict = subgroup_table(a_table, comp)
    sub = Subgroup(comp_table, tuple(sorted(restrict[c] for c in cyc)), is_normal=True)
    q, proj = quotient(comp_table, sub)
    rest = _abelian_p_basis(q, list(range(q.n)), p)
    out = [(o1, g1)]
    # preimage lookup: quotient element -> one comp element mapping to it
    pre = {}
    for e in range(comp_table.n):
        pre.setdefault(int(proj.image[e]), e)
    for oq, hq in rest:
        h = pre[hq]
        hpow = comp_table.power(h, oq)  # lies in <g1>
        # express hpow as g1^t inside the component numbering
        g1c = restrict[g1]
        t, x = 0, 0
        while x != hpow:
            x = comp_table.mul(x, g1c)
            t += 1
        assert t % oq == 0, "lift correction exponent not divisible"
        h_fixed = comp_table.mul(h, comp_table.power(comp_table.inv(g1c), t // oq))
        out.append((oq, int(embed[h_fixed])))
    return out


def _prime_factors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def exponent_of(orders_iterable) -> int:
    e = 1
    for o in orders_iterable:
        e = e * o // gcd(e, o)
    return e


def is_elementary_abelian(g_table: CayleyTable):
    """Return the prime p if G = Z_p^k (trivial group counts, p=None)."""
    if not g_table.is_abelian:
        return False, None
    if g_table.n == 1:
        return True, None
    primes = _prime_factors(g_table.n)
    if len(primes) != 1:
        return False, None
    p = primes[0]
    if np.all((g_table.orders == 1) | (g_table.orders == p)):
        return True, p
    return False, None


def generating_set(g_table: CayleyTable) -> list[int]:
    """Greedy small generating set: repeatedly add the first element outside."""
    have = {0}
    gens: list[int] = []
    while len(have) < g_table.n:
        g = next(x for x in range(g_table.n) if x not in have)
        gens.append(g)
        have = set(closure(g_table, gens).elements)
    return gens


def commutator_subgroup(g_table: CayleyTable) -> Subgroup:
    t, inv = g_table.table, g_table.inverse
    n = g_table.n
    comms = set()
    for g in range(n):
        gh = t[g]
        hg = t[:, g]
        # [g, h] = g h g^-1 h^-1
        vals = t[t[gh, inv[g]], inv[np.arange(n)]]
        comms.update(int(v) for v in np.unique(vals))
    return normal_closure(g_table, sorted(comms))
