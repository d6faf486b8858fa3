"""Permutation groups with base and strong generating sets.

Conventions:
  * a Perm is a tuple p with p[i] = image of i;
  * compose(a, b) applies a first, then b (i.e. the function b after a);
  * a PermCoset with representative r and group G is the LEFT coset
    r*G = {r after g : g in G}, so its elements are compose(g, r).

Base points are first-moved-points unless a prescribed prefix is given.
All searches scan candidates in ascending order, so witnesses, transversals
and intersections are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    DegreeMismatch,
    IndexGuardExceeded,
    NotAnAction,
    NotSubgroup,
    NotTransitive,
)
from .runtime import task

Perm = tuple


def identity_perm(m: int) -> Perm:
    return tuple(range(m))


def compose(a: Perm, b: Perm) -> Perm:
    """Apply a, then b."""
    return tuple(b[x] for x in a)


def inverse_perm(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def is_identity(a: Perm) -> bool:
    return all(i == x for i, x in enumerate(a))


def cycle_perm(m: int, *cycles) -> Perm:
    out = list(range(m))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:]):
            out[a] = b
        out[cyc[-1]] = cyc[0]
    return tuple(out)


def perm_from_images(images) -> Perm:
    return tuple(int(x) for x in images)


def embed_sym_generators(m: int, points) -> list[Perm]:
    """Generators of Sym(points) acting on [0, m), fixing everything else."""
    pts = sorted(points)
    if len(pts) < 2:
        return []
    out = [cycle_perm(m, (pts[0], pts[1]))]
    if len(pts) > 2:
        out.append(cycle_perm(m, tuple(pts)))
    return out


def evaluate_word(gens, word) -> Perm:
    """word = tuple of (gen index, +-1), applied left to right."""
    m = len(gens[0]) if gens else 0
    acc = identity_perm(m)
    for idx, sign in word:
        g = gens[idx] if sign > 0 else inverse_perm(gens[idx])
        acc = compose(acc, g)
    return acc


def _word_inv(word):
    return tuple((i, -s) for i, s in reversed(word))


class _Level:
    __slots__ = ("point", "gens", "orbit", "processed")

    def __init__(self, point):
        self.point = point
        self.gens = []  # (perm, word) pairs generating G^(i) together with deeper
        self.orbit = {}  # image point -> (transversal perm u, word), u(point)=image
        self.processed = set()  # (orbit point, gen index) Schreier pairs handled

    def orbit_points(self):
        return sorted(self.orbit)


class PermGroup:
    """BSGS-backed permutation group."""

    def __init__(self, gens, m, base_prefix=None):
        gens = [tuple(g) for g in gens]
        for g in gens:
            if len(g) != m:
                raise DegreeMismatch(f"generator degree {len(g)} != {m}")
        self.m = m
        self.gens = [g for g in gens if not is_identity(g)]
        self.levels: list[_Level] = []
        if base_prefix:
            for b in base_prefix:
                lvl = _Level(b)
                lvl.orbit[b] = (identity_perm(m), ())
                self.levels.append(lvl)
        for i, g in enumerate(self.gens):
            self._add_generator((g, ((i, 1),)), 0)
        for lvl in self.levels:
            if not lvl.orbit:
                lvl.orbit[lvl.point] = (identity_perm(m), ())

    # -- construction ------------------------------------------------------

    def _add_generator(self, pair, i0):
        """Insert a strong generator known to fix the base points above i0.

        The generator joins the gen list of every level i0..j, where j is the
        deepest level whose earlier base points it fixes (a generator fixing
        a base point still extends that level's orbit through other points).
        """
        perm, word = pair
        if is_identity(perm):
            return
        j = i0
        while True:
            if j == len(self.levels):
                moved = next(x for x in range(self.m) if perm[x] != x)
                lvl = _Level(moved)
                lvl.orbit[moved] = (identity_perm(self.m), ())
                self.levels.append(lvl)
                break
            if perm[self.levels[j].point] != self.levels[j].point:
                break
            j += 1
        for i in range(i0, j + 1):
            lvl = self.levels[i]
            if not lvl.orbit:
                lvl.orbit[lvl.point] = (identity_perm(self.m), ())
            lvl.gens.append(pair)
        for i in range(i0, j + 1):
            self._close_level(i)

    def _close_level(self, i):
        level = self.levels[i]
        frontier = list(level.orbit.keys())
        while frontier:
            x = frontier.pop(0)
            ux, uxw = level.orbit[x]
            for gi in range(len(level.gens)):
                if (x, gi) in level.processed:
                    continue
                level.processed.add((x, gi))
                h, hw = level.gens[gi]
                y = h[x]
                if y not in level.orbit:
                    level.orbit[y] = (compose(ux, h), uxw + hw)
                    frontier.append(y)
                uy, uyw = level.orbit[y]
                s = compose(compose(ux, h), inverse_perm(uy))
                if not is_identity(s):
                    self._add_generator((s, uxw + hw + _word_inv(uyw)), i + 1)

    # -- queries -----------------------------------------------------------

    def order(self) -> int:
        n = 1
        for lvl in self.levels:
            n *= max(1, len(lvl.orbit))
        return n

    def sift(self, perm):
        """(residual, transversal words in reconstruction order) of perm.

        perm is a member iff the residual is the identity; then
        perm = u_k after ... after u_1, word = w(u_k)+...+w(u_1).
        """
        perm = tuple(perm)
        words = []
        for lvl in self.levels:
            x = perm[lvl.point]
            if x == lvl.point:
                continue
            if x not in lvl.orbit:
                return perm, None
            u, uw = lvl.orbit[x]
            perm = compose(perm, inverse_perm(u))
            words.append(uw)
        return perm, tuple(reversed(words))

    def contains(self, perm) -> bool:
        residual, _ = self.sift(perm)
        return is_identity(residual)

    def membership_word(self, perm):
        """A word over the original generators evaluating to perm, or None."""
        residual, words = self.sift(perm)
        if words is None or not is_identity(residual):
            return None
        out = []
        for w in words:
            out.extend(w)
        return tuple(out)

    def elements(self, limit=None):
        """Explicit element list by DFS over the transversal chain."""
        if limit is not None and self.order() > limit:
            raise IndexGuardExceeded(f"order {self.order()} above limit {limit}")
        out = [identity_perm(self.m)]
        for lvl in reversed(self.levels):
            trans = [lvl.orbit[x][0] for x in lvl.orbit_points()]
            out = [compose(e, u) for e in out for u in trans]
        return out

    def base(self):
        return [lvl.point for lvl in self.levels]


def bsgs_build(gens, m, base_prefix=None) -> PermGroup:
    return PermGroup(gens, m, base_prefix=base_prefix)


def group_from_elements(elems, m) -> PermGroup:
    return reduce_generators_of(list(elems), m)


def reduce_generators_of(gens, m) -> PermGroup:
    """Greedy non-redundant generating subset, rebuilt as a PermGroup."""
    kept = []
    grp = PermGroup([], m)
    for g in gens:
        if not grp.contains(g):
            kept.append(tuple(g))
            grp = PermGroup(kept, m)
    return grp


def reduce_generators(grp: PermGroup) -> list[Perm]:
    """Minimal (non-redundant) generating list for the same group."""
    reduced = reduce_generators_of(grp.gens, grp.m)
    assert reduced.order() == grp.order()
    return reduced.gens


def pointwise_stabilizer(grp: PermGroup, points) -> PermGroup:
    """Subgroup fixing every point of `points`, via a base change."""
    pts = sorted(set(points))
    rebuilt = PermGroup(grp.gens, grp.m, base_prefix=pts)
    deep_gens = []
    for lvl in rebuilt.levels[len(pts):]:
        deep_gens.extend(p for p, _ in lvl.gens)
    return PermGroup(deep_gens, grp.m, base_prefix=pts)


def orbits(grp: PermGroup) -> list[list[int]]:
    seen = [False] * grp.m
    out = []
    for s in range(grp.m):
        if seen[s]:
            continue
        orb = [s]
        seen[s] = True
        queue = [s]
        while queue:
            x = queue.pop(0)
            for g in grp.gens:
                y = g[x]
                if not seen[y]:
                    seen[y] = True
                    orb.append(y)
                    queue.append(y)
        out.append(sorted(orb))
    return out


def orbit_of(grp: PermGroup, point) -> list[int]:
    orb = {point}
    queue = [point]
    while queue:
        x = queue.pop(0)
        for g in grp.gens:
            y = g[x]
            if y not in orb:
                orb.add(y)
                queue.append(y)
    return sorted(orb)


def kernel_of_action(grp: PermGroup, labels) -> PermGroup:
    """Kernel of the action induced by a point-labelling map.

    labels[x] is the derived point below x; the fibers must be permuted
    consistently by every generator (else NotAnAction).  The kernel is the
    subgroup acting trivially on the label set, as perms of the original
    domain.
    """
    labels = [int(x) for x in labels]
    if len(labels) != grp.m:
        raise DegreeMismatch("labels must cover the whole domain")
    values = sorted(set(labels))
    index = {v: i for i, v in enumerate(values)}
    mprime = len(values)
    images = []
    for g in grp.gens:
        img = [None] * mprime
        for x in range(grp.m):
            a, b = index[labels[x]], index[labels[g[x]]]
            if img[a] is None:
                img[a] = b
            elif img[a] != b:
                raise NotAnAction(f"generator splits fiber {values[a]}")
        if sorted(img) != list(range(mprime)):
            raise NotAnAction("induced map is not a permutation")
        images.append(tuple(img))
    return kernel_from_images(grp, images)


def kernel_from_images(grp: PermGroup, images) -> PermGroup:
    """Kernel of the hom defined by generator images on a second domain.

    Well-definedness is certified by |combined| == |G|; the combined group
    lives on the disjoint union of the two domains.
    """
    if len(images) != len(grp.gens):
        raise NotAnAction("one image per generator required")
    mprime = len(images[0]) if images else 0
    combined = [g + tuple(grp.m + y for y in img) for g, img in zip(grp.gens, images)]
    big = PermGroup(combined, grp.m + mprime)
    if big.order() != grp.order():
        raise NotAnAction("generator images do not define a homomorphism")
    stab = pointwise_stabilizer(big, range(grp.m, grp.m + mprime))
    kernel_gens = [g[: grp.m] for g in stab.gens]
    return PermGroup(kernel_gens, grp.m)


def action_images(grp: PermGroup, labels):
    """Induced generator images on the label set (sorted label order)."""
    labels = [int(x) for x in labels]
    values = sorted(set(labels))
    index = {v: i for i, v in enumerate(values)}
    images = []
    for g in grp.gens:
        img = [None] * len(values)
        for x in range(grp.m):
            a, b = index[labels[x]], index[labels[g[x]]]
            if img[a] is None:
                img[a] = b
            elif img[a] != b:
                raise NotAnAction(f"generator splits fiber {values[a]}")
        images.append(tuple(img))
    return images, values


def minimal_blocks(grp: PermGroup, points=None):
    """A minimal non-trivial block system on `points` (default: whole domain).

    Returns the list of blocks (sorted, the block of the least point first),
    or None if the action is primitive.  Ties between minimal systems break
    to the lexicographically least block containing the least point.
    """
    if points is None:
        points = list(range(grp.m))
    points = sorted(points)
    if orbit_of(grp, points[0]) != points:
        raise NotTransitive("block systems need a transitive action")
    if len(points) <= 2:
        return None
    base_pt = points[0]
    best = None
    for beta in points[1:]:
        block = _atkinson_class(grp, base_pt, beta, points)
        if len(block) == len(points):
            continue
        key = (len(block), block)
        if best is None or key < best[0]:
            best = (key, block)
    if best is None:
        return None
    block = best[1]
    # expand the block into the full system via the transversal action
    blocks = {tuple(block)}
    queue = [tuple(block)]
    while queue:
        blk = queue.pop(0)
        for g in grp.gens:
            img = tuple(sorted(g[x] for x in blk))
            if img not in blocks:
                blocks.add(img)
                queue.append(img)
    out = sorted(blocks)
    assert sum(len(b) for b in out) == len(points)
    return [list(b) for b in sorted(out, key=lambda b: b[0])]


def _atkinson_class(grp, a, b, points):
    parent = {x: x for x in points}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx == ry:
            return None
        if ry < rx:
            rx, ry = ry, rx
        parent[ry] = rx
        return (rx, ry)

    queue = [(a, b)]
    union(a, b)
    while queue:
        x, y = queue.pop(0)
        for g in grp.gens:
            merged = union(g[x], g[y])
            if merged:
                queue.append(merged)
    cls = sorted(x for x in points if find(x) == find(a))
    return cls


# ---------------------------------------------------------------------------
# Cosets


@dataclass(frozen=True)
class PermCoset:
    """Left coset rep*G = {rep after g}; empty when rep is None."""

    rep: Perm | None
    group: PermGroup | None = field(default=None, compare=False)

    @property
    def is_empty(self) -> bool:
        return self.rep is None

    @staticmethod
    def empty(m: int) -> "PermCoset":
        return PermCoset(None, PermGroup([], m))

    @staticmethod
    def full_group(grp: PermGroup) -> "PermCoset":
        return PermCoset(identity_perm(grp.m), grp)

    def contains(self, perm) -> bool:
        if self.is_empty:
            return False
        g = compose(tuple(perm), inverse_perm(self.rep))
        return self.group.contains(g)

    def size(self) -> int:
        return 0 if self.is_empty else self.group.order()

    def elements(self, limit=None):
        if self.is_empty:
            return []
        return [compose(g, self.rep) for g in self.group.elements(limit=limit)]


def canonical_min_coset_element(rep, chain: PermGroup) -> Perm:
    """Lexicographically least element of the left coset rep*H.

    chain must be H built with base_prefix covering [0, m) in natural order;
    the greedy walk picks, level by level, the transversal that minimizes the
    image tuple.
    """
    current = tuple(rep)
    for lvl in chain.levels:
        if len(lvl.orbit) == 1:
            continue
        best_z = min(lvl.orbit, key=lambda z: current[z])
        u, _ = lvl.orbit[best_z]
        # element of coset achieving it: current after nothing... we want
        # current o u (apply u first, then current)
        current = compose(u, current)
    return current


def transversal(grp: PermGroup, subgroup: PermGroup, cap: int = 10**6):
    """Left transversal of `subgroup` in `grp`: one rep per left coset rH.

    Reps are the lexicographically least elements of their cosets, returned
    sorted.  Raises NotSubgroup / IndexGuardExceeded.
    """
    if subgroup.m != grp.m:
        raise DegreeMismatch("degree mismatch")
    for g in subgroup.gens:
        if not grp.contains(g):
            raise NotSubgroup("not a subgroup: generator outside the group")
    index = grp.order() // subgroup.order()
    if index > cap:
        raise IndexGuardExceeded(f"index {index} exceeds cap {cap}")
    chain = PermGroup(subgroup.gens, grp.m, base_prefix=list(range(grp.m)))
    start = canonical_min_coset_element(identity_perm(grp.m), chain)
    reps = {start}
    queue = [start]
    while queue:
        r = queue.pop(0)
        for g in grp.gens:
            # left multiply by g: g o r, i.e. apply r then g
            cand = canonical_min_coset_element(compose(r, g), chain)
            if cand not in reps:
                if len(reps) >= index:
                    raise NotSubgroup("coset count exceeds the index; H is not closed inside G")
                reps.add(cand)
                queue.append(cand)
        task()
    assert len(reps) == index
    return sorted(reps)


# ---------------------------------------------------------------------------
# Coset intersection by backtracking over a full natural base


def _full_chain(grp: PermGroup) -> PermGroup:
    return PermGroup(grp.gens, grp.m, base_prefix=list(range(grp.m)))


def _walk_feasible(chain: PermGroup, adj, level_idx, target):
    """One step of the subset-images walk: can some h in the current
    sub-coset send chain base point level_idx to target?

    Returns the updated adjusting perm, or None.  adj accumulates inverses of
    chosen transversals; the test point is adj(target).
    """
    lvl = chain.levels[level_idx]
    t = adj[target]
    if t not in lvl.orbit:
        return None
    u, _ = lvl.orbit[t]
    return compose(adj, inverse_perm(u))


def subgroup_intersection(g1: PermGroup, g2: PermGroup) -> PermGroup:
    """G1 intersect G2 by DFS over a shared natural base with feasibility
    pruning on both chains and min-in-orbit pruning against the found part."""
    m = g1.m
    if g2.m != m:
        raise DegreeMismatch("degree mismatch")
    if all(g1.contains(g) for g in g2.gens):
        return PermGroup(g2.gens, m)
    if all(g2.contains(g) for g in g1.gens):
        return PermGroup(g1.gens, m)
    c1, c2 = _full_chain(g1), _full_chain(g2)
    found: list[Perm] = []
    found_grp = PermGroup([], m)

    k = len(c1.levels)

    def dfs(i, pref, adj2):
        nonlocal found_grp
        task()
        if i == k:
            # pref is an element of G1 by construction and of G2 by the walk
            if not found_grp.contains(pref):
                found.append(pref)
                found_grp = PermGroup(found, m)
            return
        lvl = c1.levels[i]
        for z in sorted(lvl.orbit, key=lambda t: pref[t]):
            beta = pref[z]
            if i == 0 and found and min(orbit_of(found_grp, beta)) < beta:
                continue  # min-in-orbit pruning against the found part
            a2 = _walk_feasible(c2, adj2, i, beta)
            if a2 is None:
                continue
            u, _ = lvl.orbit[z]
            dfs(i + 1, compose(u, pref), a2)

    ident = identity_perm(m)
    dfs(0, ident, ident)
    return found_grp


def coset_intersection(c1: PermCoset, c2: PermCoset) -> PermCoset:
    """Intersection of two left cosets as a left coset (possibly empty)."""
    if c1.is_empty or c2.is_empty:
        m = (c1.group or c2.group).m
        return PermCoset.empty(m)
    m = c1.group.m
    if c2.group.m != m:
        raise DegreeMismatch("degree mismatch")
    witness = _coset_witness(c1, c2)
    if witness is None:
        return PermCoset.empty(m)
    k = subgroup_intersection(c1.group, c2.group)
    return PermCoset(witness, k)


def _coset_witness(c1: PermCoset, c2: PermCoset):
    """Least x in rep1*G1 with x in rep2*G2, or None.

    x = rep1 o g; the G2-side condition is g in (rep1^-1 o rep2)*G2, checked
    by a subset-images walk during the DFS over G1's chain.
    """
    m = c1.group.m
    chain1 = _full_chain(c1.group)
    chain2 = _full_chain(c2.group)
    r1, r2 = c1.rep, c2.rep
    # x = r1 o g in r2*G2  <=>  h := r2^-1 o r1 o g in G2, h(b) = rho(g(b))
    rho = compose(r1, inverse_perm(r2))  # the function r2^-1 o r1
    k = len(chain1.levels)

    def dfs(i, pref, adj2):
        task()
        if i == k:
            return pref
        lvl = chain1.levels[i]
        for z in sorted(lvl.orbit, key=lambda t: pref[t]):
            beta = pref[z]
            a2 = _walk_feasible(chain2, adj2, i, rho[beta])
            if a2 is None:
                continue
            u, _ = lvl.orbit[z]
            out = dfs(i + 1, compose(u, pref), a2)
            if out is not None:
                return out
        return None

    ident = identity_perm(m)
    g = dfs(0, ident, ident)
    if g is None:
        return None
    return compose(g, r1)  # x = r1 o g
