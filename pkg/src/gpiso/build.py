"""Group constructors for the test corpus, driven by a small descriptor AST.

Numbering convention: the identity gets index 0, all other elements follow in
lexicographic order of their natural coordinates.  Every constructor returns
a validated CayleyTable; `meta` carries coordinate data some pipelines use to
assemble explicit isomorphism witnesses.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import BadAction, BadCocycle, ParseError, ValidationError
from .table import FULL_ASSOC_LIMIT, CayleyTable, validate_table


@dataclass(frozen=True)
class GroupDescriptor:
    kind: str
    params: tuple


def cyclic(n):
    return GroupDescriptor("cyclic", (int(n),))


def elem_abelian(p, k):
    return GroupDescriptor("elem_abelian", (int(p), int(k)))


def sym(n):
    return GroupDescriptor("sym", (int(n),))


def alt(n):
    return GroupDescriptor("alt", (int(n),))


def dihedral(n):
    return GroupDescriptor("dihedral", (int(n),))


def sl2(p):
    return GroupDescriptor("sl2", (int(p),))


def direct_product(*factors):
    return GroupDescriptor("direct_product", tuple(factors))


def semidirect(q, l, p, k, action):
    mats = _normalize_action(action, l, k)
    return GroupDescriptor("semidirect", (int(q), int(l), int(p), int(k), mats))


def central_ext(q_desc, moduli, cocycle):
    f = None if cocycle is None else tuple(tuple(int(x) for x in row) for row in np.atleast_2d(cocycle))
    return GroupDescriptor("central_ext", (q_desc, tuple(int(m) for m in moduli), f))


def relabel(inner, seed):
    return GroupDescriptor("relabel", (inner, int(seed)))


def _normalize_action(action, l, k):
    """Accept a bare matrix when l == 1; always store a tuple of l matrices."""
    a = list(action)
    if l == 1 and a and not isinstance(a[0][0], (list, tuple)):
        a = [a]
    if len(a) != l:
        raise BadAction(f"expected {l} action matrices, got {len(a)}")
    mats = []
    for m in a:
        m = tuple(tuple(int(x) for x in row) for row in m)
        if len(m) != k or any(len(r) != k for r in m):
            raise BadAction(f"action matrix is not {k}x{k}")
        mats.append(m)
    return tuple(mats)


# ---------------------------------------------------------------------------
# Builders


def build_group(d: GroupDescriptor) -> CayleyTable:
    builder = _BUILDERS.get(d.kind)
    if builder is None:
        raise ValidationError(f"unknown descriptor kind {d.kind!r}")
    return builder(*d.params)


def _from_elements(elems, mul, meta=None, skip_assoc=False):
    """Assemble a table from coordinate elements and a product function."""
    elems = sorted(elems)
    ident = _find_identity(elems, mul)
    order = [ident] + [e for e in elems if e != ident]
    index = {e: i for i, e in enumerate(order)}
    n = len(order)
    tab = np.empty((n, n), dtype=np.int16 if n < 2**15 else np.int32)
    for i, a in enumerate(order):
        for j, b in enumerate(order):
            tab[i, j] = index[mul(a, b)]
    g = validate_table(tab, _skip_assoc=skip_assoc)
    if meta:
        meta = dict(meta)
        meta["coords"] = tuple(order)
        return CayleyTable(n=g.n, table=g.table, meta=meta)
    return g


def _find_identity(elems, mul):
    for e in elems:
        if all(mul(e, x) == x and mul(x, e) == x for x in elems):
            return e
    raise ValidationError("no identity found")


def _build_cyclic(n):
    tab = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    return validate_table(tab)


def _build_elem_abelian(p, k):
    n = p**k
    if k == 0:
        return validate_table([[0]])
    digits = _mixed_radix_table(n, [p] * k)
    sums = (digits[:, None, :] + digits[None, :, :]) % p
    tab = _indices_of(sums, [p] * k)
    return validate_table(tab)


def _mixed_radix_table(n, bases):
    """Row i = the mixed-radix digits of i (most significant first)."""
    out = np.empty((n, len(bases)), dtype=np.int64)
    idx = np.arange(n)
    for pos in range(len(bases) - 1, -1, -1):
        out[:, pos] = idx % bases[pos]
        idx //= bases[pos]
    return out


def _indices_of(digit_grid, bases):
    idx = np.zeros(digit_grid.shape[:-1], dtype=np.int64)
    for pos in range(len(bases)):
        idx = idx * bases[pos] + digit_grid[..., pos]
    return idx


def _build_sym(n, even_only=False):
    from itertools import permutations

    elems = [p for p in permutations(range(n)) if not even_only or _is_even(p)]
    elems.sort()

    def mul(a, b):
        return tuple(b[a[i]] for i in range(n))

    return _from_elements(elems, mul)


def _is_even(p):
    seen = [False] * len(p)
    parity = 0
    for i in range(len(p)):
        if not seen[i]:
            j, clen = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                clen += 1
            parity ^= (clen - 1) & 1
    return parity == 0


def _build_alt(n):
    return _build_sym(n, even_only=True)


def _build_dihedral(n):
    if n % 2 or n < 2:
        raise ValidationError("dihedral order must be even and >= 2")
    half = n // 2

    def mul(a, b):
        s1, k1 = a
        s2, k2 = b
        # (f^s1 r^k1)(f^s2 r^k2) = f^(s1+s2) r^(k1*(-1)^s2 + k2)
        return ((s1 + s2) % 2, ((k1 if s2 == 0 else -k1) + k2) % half)

    elems = [(s, k) for s in range(2) for k in range(half)]
    return _from_elements(elems, mul)


def _build_sl2(p):
    elems = []
    for a in range(p):
        for b in range(p):
            for c in range(p):
                for d in range(p):
                    if (a * d - b * c) % p == 1:
                        elems.append((a, b, c, d))

    def mul(m1, m2):
        a, b, c, d = m1
        e, f, g, h = m2
        return (
            (a * e + b * g) % p,
            (a * f + b * h) % p,
            (c * e + d * g) % p,
            (c * f + d * h) % p,
        )

    return _from_elements(elems, mul)


def _build_direct_product(*factor_descs):
    factors = [build_group(f) for f in factor_descs]
    sizes = [f.n for f in factors]
    n = int(np.prod(sizes))
    digits = _mixed_radix_table(n, sizes)
    tab = np.zeros((n, n), dtype=np.int64)
    for pos, f in enumerate(factors):
        comp = f.table.astype(np.int64)[np.ix_(digits[:, pos], digits[:, pos])]
        tab = tab * sizes[pos] + comp
    meta = {"product_sizes": tuple(sizes)}
    g = validate_table(tab)
    return CayleyTable(n=g.n, table=g.table, meta=meta)


def _build_semidirect(q, l, p, k, mats):
    mats = [np.array(m, dtype=np.int64) % p for m in mats]
    for m in mats:
        if not linalg.is_invertible(m, p):
            raise BadAction("action matrix not invertible")
        if not np.array_equal(linalg.mat_pow(m, q, p), np.eye(k, dtype=np.int64)):
            raise BadAction("action matrix order does not divide q")
    for i in range(l):
        for j in range(i + 1, l):
            if not np.array_equal(
                linalg.mat_mul(mats[i], mats[j], p), linalg.mat_mul(mats[j], mats[i], p)
            ):
                raise BadAction("action matrices do not commute")
    nh, nn = q**l, p**k
    hdig = _mixed_radix_table(nh, [q] * l)
    ndig = _mixed_radix_table(nn, [p] * k)
    # theta[h] = product of M_i^{h_i}; acts on N-coordinate columns
    theta = np.empty((nh, k, k), dtype=np.int64)
    for h in range(nh):
        m = np.eye(k, dtype=np.int64)
        for i in range(l):
            m = linalg.mat_mul(m, linalg.mat_pow(mats[i], int(hdig[h, i]), p), p)
        theta[h] = m
    # act[h, x] = index of theta(h) applied to N-element x
    acted = np.einsum("hij,xj->hxi", theta, ndig) % p
    act = _indices_of(acted, [p] * k)
    addh = _indices_of((hdig[:, None, :] + hdig[None, :, :]) % q, [q] * l)
    addn = _indices_of((ndig[:, None, :] + ndig[None, :, :]) % p, [p] * k)
    # element (h, n) at index h*nn + n; (h1,n1)(h2,n2) = (h1+h2, theta(h2)(n1)+n2)
    n = nh * nn
    h1 = np.repeat(np.arange(nh), nn)
    n1 = np.tile(np.arange(nn), nh)
    tab = np.empty((n, n), dtype=np.int64)
    for col_h in range(nh):
        for col_n in range(nn):
            j = col_h * nn + col_n
            tab[:, j] = addh[h1, col_h] * nn + addn[act[col_h, n1], col_n]
    g = validate_table(tab)
    meta = {
        "semidirect": {
            "q": q,
            "l": l,
            "p": p,
            "k": k,
            "h_index": h1,
            "n_index": n1,
            "action": [m.tolist() for m in mats],
        }
    }
    return CayleyTable(n=g.n, table=g.table, meta=meta)


def _build_central_ext(q_desc, moduli, f):
    q_table = q_desc if isinstance(q_desc, CayleyTable) else build_group(q_desc)
    return central_extension_table(q_table, list(moduli), f)


def central_extension_table(q_table: CayleyTable, moduli, cocycle, verified=False):
    """Total group of a central extension of A = prod Z_moduli[i] by Q.

    cocycle: k x |Q|^2 integer matrix (row i mod moduli[i], columns indexed
    row-major by (q1, q2)), or None for the split extension.  The 2-cocycle
    identity is checked on all |Q|^3 triples up to the associativity limit,
    and on a seeded sample for larger Q unless verified=True.
    """
    nq = q_table.n
    k = len(moduli)
    na = int(np.prod(moduli)) if k else 1
    if cocycle is None:
        f = np.zeros((max(k, 1), nq * nq), dtype=np.int64)
    else:
        f = np.asarray(cocycle, dtype=np.int64)
        if f.shape != (k, nq * nq):
            raise BadCocycle(f"cocycle must be {k} x {nq * nq}")
    for i in range(k):
        f[i] %= moduli[i]
    _check_cocycle(q_table, moduli, f, verified)
    adig = _mixed_radix_table(na, list(moduli) if k else [1])
    adda = _indices_of((adig[:, None, :] + adig[None, :, :]) % np.array(moduli if k else [1]), list(moduli) if k else [1])
    # f as an A-index per (q1, q2)
    fidx = np.zeros((nq, nq), dtype=np.int64)
    for i in range(k):
        fidx = fidx * moduli[i] + f[i].reshape(nq, nq)
    n = na * nq
    qt = q_table.table.astype(np.int64)
    dtype = np.int16 if n < 2**15 else np.int32
    tab = np.empty((n, n), dtype=dtype)
    a1 = np.repeat(np.arange(na), nq)
    q1 = np.tile(np.arange(nq), na)
    # (a1, q1)(a2, q2) = (a1 + a2 + f(q1,q2), q1 q2); build in row blocks
    block = max(1, (1 << 22) // n)
    for start in range(0, n, block):
        rows = np.arange(start, min(start + block, n))
        ra, rq = a1[rows], q1[rows]
        asum = adda[np.ix_(ra, a1)]
        atot = adda[asum, fidx[np.ix_(rq, q1)]]
        tab[rows] = (atot * nq + qt[np.ix_(rq, q1)]).astype(dtype)
    g = validate_table(tab, _skip_assoc=n > FULL_ASSOC_LIMIT and verified)
    meta = {"central_ext": {"moduli": tuple(moduli), "a_index": a1, "q_index": q1, "nq": nq}}
    return CayleyTable(n=g.n, table=g.table, meta=meta)


def _check_cocycle(q_table, moduli, f, verified):
    nq = q_table.n
    k = len(moduli)
    fi = [f[i].reshape(nq, nq) for i in range(k)]
    for i in range(k):
        if np.any(fi[i][0, :]) or np.any(fi[i][:, 0]):
            raise BadCocycle("cocycle is not normalized")
    qt = q_table.table.astype(np.int64)
    if nq <= 160:
        a = np.arange(nq)
        for i in range(k):
            m = moduli[i]
            # f(a,b) + f(ab,c) == f(b,c) + f(a,bc) for all triples
            lhs = fi[i][:, :, None] + fi[i][qt, :]
            rhs = fi[i][None, :, :] + fi[i][a[:, None, None], qt[None, :, :]]
            if np.any((lhs - rhs) % m):
                raise BadCocycle("2-cocycle identity fails")
    elif not verified:
        rng = np.random.default_rng(0)
        t = rng.integers(0, nq, size=(100_000, 3))
        a, b, c = t[:, 0], t[:, 1], t[:, 2]
        for i in range(k):
            m = moduli[i]
            lhs = fi[i][a, b] + fi[i][qt[a, b], c]
            rhs = fi[i][b, c] + fi[i][a, qt[b, c]]
            if np.any((lhs - rhs) % m):
                raise BadCocycle("2-cocycle identity fails")


def _build_relabel(inner, seed):
    g = build_group(inner)
    rng = random.Random(seed)
    perm = list(range(1, g.n))
    rng.shuffle(perm)
    perm = np.array([0] + perm)
    return relabel_table(g, perm)


def relabel_table(g: CayleyTable, perm) -> CayleyTable:
    """Apply an identity-fixing relabeling permutation to a table."""
    perm = np.asarray(perm)
    assert perm[0] == 0
    new = np.empty_like(g.table)
    new[np.ix_(perm, perm)] = perm[g.table.astype(np.int64)].astype(g.table.dtype)
    return CayleyTable(n=g.n, table=new)


_BUILDERS = {
    "cyclic": _build_cyclic,
    "elem_abelian": _build_elem_abelian,
    "sym": _build_sym,
    "alt": _build_alt,
    "dihedral": _build_dihedral,
    "sl2": _build_sl2,
    "direct_product": _build_direct_product,
    "semidirect": _build_semidirect,
    "central_ext": _build_central_ext,
    "relabel": _build_relabel,
}


# ---------------------------------------------------------------------------
# Descriptor strings: name(arg, kw=val, ...) with ints, lists, nested names


_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z_0-9]*|\d+|[(),=\[\]-])")


def parse_descriptor(text: str) -> GroupDescriptor:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ParseError(1, f"bad descriptor near {text[pos:pos+12]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    out, rest = _parse_value(tokens)
    if rest:
        raise ParseError(1, f"trailing tokens {rest!r}")
    if not isinstance(out, GroupDescriptor):
        raise ParseError(1, "descriptor expected")
    return out


def _parse_value(toks):
    if not toks:
        raise ParseError(1, "unexpected end of descriptor")
    t = toks[0]
    if t == "-":
        v, rest = _parse_value(toks[1:])
        return -v, rest
    if t.isdigit():
        return int(t), toks[1:]
    if t == "[":
        items = []
        rest = toks[1:]
        if rest and rest[0] == "]":
            return items, rest[1:]
        while True:
            v, rest = _parse_value(rest)
            items.append(v)
            if not rest:
                raise ParseError(1, "unterminated list")
            if rest[0] == "]":
                return items, rest[1:]
            if rest[0] != ",":
                raise ParseError(1, f"expected , in list, got {rest[0]!r}")
            rest = rest[1:]
    if re.match(r"[A-Za-z_]", t):
        if len(toks) > 1 and toks[1] == "(":
            args, kwargs, rest = _parse_call(toks[2:])
            return _make_descriptor(t, args, kwargs), rest
        return t, toks[1:]  # bare word (e.g. f=zero)
    raise ParseError(1, f"unexpected token {t!r}")


def _parse_call(toks):
    args, kwargs = [], {}
    rest = toks
    if rest and rest[0] == ")":
        return args, kwargs, rest[1:]
    while True:
        if len(rest) > 1 and re.match(r"[A-Za-z_]", rest[0]) and rest[1] == "=":
            key = rest[0]
            v, rest = _parse_value(rest[2:])
            kwargs[key] = v
        else:
            v, rest = _parse_value(rest)
            args.append(v)
        if not rest:
            raise ParseError(1, "unterminated call")
        if rest[0] == ")":
            return args, kwargs, rest[1:]
        if rest[0] != ",":
            raise ParseError(1, f"expected , got {rest[0]!r}")
        rest = rest[1:]


def _make_descriptor(name, args, kwargs):
    if name == "cyclic":
        return cyclic(*args, **kwargs)
    if name == "elem_abelian":
        return elem_abelian(*args, **kwargs)
    if name == "sym":
        return sym(*args, **kwargs)
    if name == "alt":
        return alt(*args, **kwargs)
    if name == "dihedral":
        return dihedral(*args, **kwargs)
    if name == "sl2":
        return sl2(*args, **kwargs)
    if name == "direct_product":
        return direct_product(*args)
    if name == "semidirect":
        return semidirect(
            kwargs.get("q", args[0] if args else None),
            kwargs.get("l", kwargs.get("ell")),
            kwargs.get("p"),
            kwargs.get("k"),
            kwargs.get("action"),
        )
    if name == "central_ext":
        q = kwargs.get("Q", kwargs.get("q"))
        a = kwargs.get("A", kwargs.get("a"))
        f = kwargs.get("f")
        if f in ("zero", "0", 0, None):
            f = None
        return central_ext(q, a, f)
    if name == "relabel":
        inner = args[0] if args else kwargs.get("inner")
        seed = kwargs.get("seed", args[1] if len(args) > 1 else 0)
        return relabel(inner, seed)
    raise ParseError(1, f"unknown constructor {name!r}")


def descriptor_to_string(d: GroupDescriptor) -> str:
    k = d.kind
    if k in ("cyclic", "sym", "alt", "dihedral", "sl2"):
        return f"{k}({d.params[0]})"
    if k == "elem_abelian":
        return f"elem_abelian({d.params[0]},{d.params[1]})"
    if k == "direct_product":
        return "direct_product(" + ",".join(descriptor_to_string(f) for f in d.params) + ")"
    if k == "semidirect":
        q, l, p, kk, mats = d.params
        a = str([[list(r) for r in m] for m in mats]).replace(" ", "")
        return f"semidirect(q={q},l={l},p={p},k={kk},action={a})"
    if k == "central_ext":
        qd, moduli, f = d.params
        fs = "zero" if f is None else str([list(r) for r in f]).replace(" ", "")
        return f"central_ext(Q={descriptor_to_string(qd)},A={list(moduli)},f={fs})"
    if k == "relabel":
        return f"relabel({descriptor_to_string(d.params[0])},seed={d.params[1]})"
    raise ValidationError(f"cannot serialize {k}")
