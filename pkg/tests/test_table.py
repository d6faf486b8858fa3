import numpy as np
import pytest

from gpiso import build, table
from gpiso.errors import NotAssociative, NotLatin, NotNormal


def test_validate_trivial_and_z2():
    g = table.validate_table([[0]])
    assert g.n == 1
    g = table.validate_table([[0, 1], [1, 0]])
    assert g.n == 2
    assert g.orders.tolist() == [1, 2]


def test_validate_rejects_non_latin():
    with pytest.raises(NotLatin):
        table.validate_table([[0, 0], [1, 1]])


def test_validate_rejects_non_associative_loop():
    # an order-5 loop with two-sided identity 0 that is not a group:
    # rows/cols are Latin but associativity fails somewhere
    tab = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(NotAssociative) as err:
        table.validate_table(tab)
    a, b, c = err.value.witness
    t = np.array(tab)
    assert t[t[a, b], c] != t[a, t[b, c]]


def test_element_orders_cyclic6_and_sym3():
    c6 = build.build_group(build.cyclic(6))
    assert table.element_order(c6, 0) == 1
    assert table.element_order(c6, 2) == 3
    s3 = build.build_group(build.sym(3))
    orders = sorted(s3.orders.tolist())
    assert orders == [1, 2, 2, 2, 3, 3]


def test_center():
    s3 = build.build_group(build.sym(3))
    assert table.center(s3).elements == (0,)
    d8 = build.build_group(build.dihedral(8))
    assert table.center(d8).order == 2
    c6 = build.build_group(build.cyclic(6))
    assert table.center(c6).order == 6


def test_closure_and_normal_closure():
    s3 = build.build_group(build.sym(3))
    assert table.closure(s3, []).elements == (0,)
    for g in range(1, s3.n):
        assert table.closure(s3, [g]).order == table.element_order(s3, g)
    transposition = next(g for g in range(6) if s3.orders[g] == 2)
    assert table.normal_closure(s3, [transposition]).order == 6


def test_quotient_sym3_by_alt3():
    s3 = build.build_group(build.sym(3))
    three_cycles = [g for g in range(6) if s3.orders[g] in (1, 3)]
    a3 = table.Subgroup(s3, tuple(sorted(three_cycles)))
    q, proj = table.quotient(s3, a3)
    assert q.n == 2
    proj.validate()
    # trivial and full quotients
    q1, _ = table.quotient(s3, table.Subgroup(s3, tuple(range(6)), is_normal=True))
    assert q1.n == 1
    q2, pr2 = table.quotient(s3, table.Subgroup(s3, (0,), is_normal=True))
    assert q2.n == 6 and pr2.is_isomorphism()


def test_quotient_rejects_non_normal():
    s3 = build.build_group(build.sym(3))
    transposition = next(g for g in range(6) if s3.orders[g] == 2)
    h = table.closure(s3, [transposition])
    with pytest.raises(NotNormal):
        table.quotient(s3, table.Subgroup(s3, h.elements))


def test_sylow_elements():
    c6 = build.build_group(build.cyclic(6))
    assert table.sylow_elements(c6, 5) == (0,)
    assert len(table.sylow_elements(c6, 3)) == 3
    s3 = build.build_group(build.sym(3))
    s3_sylow3 = table.sylow_elements(s3, 3)
    assert len(s3_sylow3) == 3
    assert table.is_subgroup_set(s3, s3_sylow3)
    assert table.is_normal_set(s3, s3_sylow3)
    # Sylow-2 set of sym(3) is not a subgroup
    s2 = table.sylow_elements(s3, 2)
    assert not table.is_subgroup_set(s3, s2)


def test_sylow_conjugation_closed():
    s4 = build.build_group(build.sym(4))
    for p in (2, 3):
        elems = set(table.sylow_elements(s4, p))
        for g in range(s4.n):
            assert all(s4.conj(g, x) in elems for x in elems)


@pytest.mark.parametrize(
    "desc,expected",
    [
        (build.cyclic(4), (4,)),
        (build.elem_abelian(3, 2), (3, 3)),
        (build.direct_product(build.cyclic(2), build.cyclic(4)), (2, 4)),
        (build.direct_product(build.cyclic(6), build.cyclic(2)), (2, 2, 3)),
    ],
)
def test_abelian_basis(desc, expected):
    g = build.build_group(desc)
    basis = table.abelian_basis(g)
    assert basis.orders == expected
    # bijectivity of the coordinate map is asserted inside
    assert len(basis.coordinates) == g.n
    assert int(np.prod(expected)) == g.n


def test_abelian_basis_rejects_nonabelian():
    s3 = build.build_group(build.sym(3))
    with pytest.raises(Exception):
        table.abelian_basis(s3)


def test_generating_set_small():
    for desc, dmax in [(build.cyclic(12), 1), (build.sym(4), 3), (build.elem_abelian(2, 3), 3)]:
        g = build.build_group(desc)
        gens = table.generating_set(g)
        assert len(gens) <= dmax + 1
        assert table.closure(g, gens).order == g.n


def test_commutator_subgroup():
    s3 = build.build_group(build.sym(3))
    assert table.commutator_subgroup(s3).order == 3
    a5 = build.build_group(build.alt(5))
    assert table.commutator_subgroup(a5).order == 60
    c6 = build.build_group(build.cyclic(6))
    assert table.commutator_subgroup(c6).order == 1
