"""Brute-force isomorphism and automorphism search by generator enumeration.

This is the ground truth the fast pipelines are checked against.  Cost grows
like n^(d(G)+O(1)), so a guard refuses orders above 256 unless overridden.
Witnesses are deterministic: candidate generator images are scanned in
ascending element order and the first complete homomorphism wins.
"""

from __future__ import annotations

import numpy as np

from .errors import TooLarge
from .table import CayleyTable, GroupHom, closure, generating_set

DEFAULT_GUARD = 256


def _invariants(g: CayleyTable):
    t = g.table
    centralizer_sizes = np.sum(t == t.T, axis=1)
    pairs = sorted(zip(g.orders.tolist(), centralizer_sizes.tolist()))
    return (g.n, g.is_abelian, tuple(pairs))


def _generator_chain(g: CayleyTable):
    """Greedy generators plus, per level, a build order for <g_1..g_i>.

    Each level's elements come with (parent, generator level) so a candidate
    image map extends in O(|K_i|) lookups.
    """
    gens = generating_set(g)
    chain = []
    known = {0}
    order_so_far = [0]
    steps = []  # (element, parent, gen_index) in discovery order
    for gi, gen in enumerate(gens):
        frontier = list(order_so_far)
        if gen not in known:
            known.add(gen)
            steps.append((gen, 0, gi))
            order_so_far.append(gen)
            frontier.append(gen)
        while frontier:
            x = frontier.pop(0)
            for gj in range(gi + 1):
                y = g.mul(x, gens[gj])
                if y not in known:
                    known.add(y)
                    steps.append((y, x, gj))
                    order_so_far.append(y)
                    frontier.append(y)
        chain.append((list(order_so_far), list(steps)))
    return gens, chain


def _extend_map(g1, g2, steps, gen_images, level_elements):
    """Build the image array on <g_1..g_i> from generator images; None on clash."""
    img = {0: 0}
    for elem, parent, gi in steps:
        img[elem] = g2.mul(img[parent], gen_images[gi])
    elems = np.array(level_elements)
    vals = np.array([img[e] for e in level_elements])
    if len(set(vals.tolist())) != len(vals):
        return None
    lookup = np.full(g1.n, -1, dtype=np.int64)
    lookup[elems] = vals
    sub = g1.table[np.ix_(elems, elems)].astype(np.int64)
    if np.any(lookup[sub] != g2.table[np.ix_(vals, vals)]):
        return None
    return lookup


def _search(g1: CayleyTable, g2: CayleyTable, find_all: bool):
    gens, chain = _generator_chain(g1)
    d = len(gens)
    order_buckets = {}
    for h in range(g2.n):
        order_buckets.setdefault(int(g2.orders[h]), []).append(h)
    results = []
    images = [0] * d

    def level(i):
        candidates = order_buckets.get(int(g1.orders[gens[i]]), [])
        for h in candidates:
            images[i] = h
            elems, steps = chain[i]
            lookup = _extend_map(g1, g2, steps, images, elems)
            if lookup is None:
                continue
            if i == d - 1:
                results.append(lookup[np.arange(g1.n)].copy())
                if not find_all:
                    return True
            else:
                if level(i + 1) and not find_all:
                    return True
        return False

    if d == 0:
        results.append(np.zeros(1, dtype=np.int64))
    else:
        level(0)
    return results


def oracle_iso(g1: CayleyTable, g2: CayleyTable, guard: int = DEFAULT_GUARD):
    """An explicit isomorphism g1 -> g2, or None, by exhaustion.

    The returned GroupHom is verified before being returned.
    """
    if g1.n != g2.n:
        return None
    if g1.n > guard:
        raise TooLarge(f"order {g1.n} above oracle guard {guard}")
    if _invariants(g1) != _invariants(g2):
        return None
    found = _search(g1, g2, find_all=False)
    if not found:
        return None
    hom = GroupHom(g1, g2, found[0])
    assert hom.is_isomorphism()
    return hom


def oracle_aut(g: CayleyTable, guard: int = DEFAULT_GUARD):
    """The complete automorphism list of g, by exhaustion."""
    if g.n > guard:
        raise TooLarge(f"order {g.n} above oracle guard {guard}")
    found = _search(g, g, find_all=True)
    homs = [GroupHom(g, g, img) for img in found]
    for h in homs:
        assert h.is_isomorphism()
    return homs
