import numpy as np
import pytest

from gpiso import build, oracle, table
from gpiso.errors import BadAction, BadCocycle


def test_constructor_orders():
    cases = [
        (build.cyclic(7), 7),
        (build.elem_abelian(2, 3), 8),
        (build.sym(4), 24),
        (build.alt(4), 12),
        (build.dihedral(8), 8),
        (build.sl2(3), 24),
        (build.direct_product(build.cyclic(3), build.cyclic(5)), 15),
        (build.semidirect(2, 1, 3, 1, [[2]]), 6),
    ]
    for desc, n in cases:
        g = build.build_group(desc)
        assert g.n == n


def test_semidirect_q2_p3_is_sym3():
    g = build.build_group(build.semidirect(2, 1, 3, 1, [[2]]))
    s3 = build.build_group(build.sym(3))
    assert oracle.oracle_iso(g, s3) is not None


def test_semidirect_rejects_bad_action():
    with pytest.raises(BadAction):
        # order of [[2]] mod 5 is 4, which does not divide 3
        build.build_group(build.semidirect(3, 1, 5, 1, [[2]]))
    with pytest.raises(BadAction):
        build.build_group(
            build.semidirect(2, 2, 3, 2, [[[0, 1], [1, 0]], [[1, 1], [0, 1]]])
        )


def test_central_ext_split_is_direct_product():
    a5 = build.build_group(build.alt(5))
    g = build.central_extension_table(a5, [2], None)
    assert g.n == 120
    # split extension: more than one involution
    assert int(np.sum(g.orders == 2)) > 1


def test_sl2_5_has_unique_involution():
    g = build.build_group(build.sl2(5))
    assert g.n == 120
    assert int(np.sum(g.orders == 2)) == 1


def test_central_ext_rejects_bad_cocycle():
    c2 = build.build_group(build.cyclic(2))
    # non-normalized junk
    f = np.array([[1, 1, 1, 1]])
    with pytest.raises(BadCocycle):
        build.central_extension_table(c2, [2], f)


def test_relabel_is_isomorphic():
    g = build.build_group(build.sym(3))
    h = build.build_group(build.relabel(build.sym(3), 11))
    iso = oracle.oracle_iso(g, h)
    assert iso is not None and iso.is_isomorphism()


def test_descriptor_string_roundtrip():
    examples = [
        "cyclic(6)",
        "elem_abelian(3,2)",
        "sym(4)",
        "dihedral(8)",
        "sl2(5)",
        "direct_product(cyclic(9),cyclic(2))",
        "semidirect(q=2,l=1,p=3,k=1,action=[[2]])",
        "relabel(sym(3),seed=7)",
    ]
    for text in examples:
        d = build.parse_descriptor(text)
        assert build.parse_descriptor(build.descriptor_to_string(d)) == d


def test_descriptor_semidirect_matrix_forms():
    d1 = build.parse_descriptor("semidirect(q=2,l=1,p=3,k=1,action=[[2]])")
    d2 = build.parse_descriptor("semidirect(q=2,l=1,p=3,k=2,action=[[2,0],[0,1]])")
    g1 = build.build_group(d1)
    g2 = build.build_group(d2)
    assert g1.n == 6 and g2.n == 18


def test_descriptor_central_ext_zero():
    d = build.parse_descriptor("central_ext(Q=cyclic(2),A=[2],f=zero)")
    g = build.build_group(d)
    assert g.n == 4


def test_oracle_iso_negative_cases():
    c4 = build.build_group(build.cyclic(4))
    v4 = build.build_group(build.elem_abelian(2, 2))
    assert oracle.oracle_iso(c4, v4) is None
    frob21 = build.build_group(build.semidirect(3, 1, 7, 1, [[2]]))
    c21 = build.build_group(build.cyclic(21))
    assert frob21.n == c21.n == 21
    assert oracle.oracle_iso(frob21, c21) is None


def test_oracle_aut_counts():
    v4 = build.build_group(build.elem_abelian(2, 2))
    assert len(oracle.oracle_aut(v4)) == 6
    c5 = build.build_group(build.cyclic(5))
    assert len(oracle.oracle_aut(c5)) == 4
    s3 = build.build_group(build.sym(3))
    assert len(oracle.oracle_aut(s3)) == 6


def test_oracle_iso_equivalence_relation():
    descs = [
        build.sym(3),
        build.relabel(build.sym(3), 5),
        build.cyclic(6),
        build.relabel(build.cyclic(6), 3),
    ]
    groups = [build.build_group(d) for d in descs]
    # reflexive, with identity-ish witness
    for g in groups:
        iso = oracle.oracle_iso(g, g)
        assert iso is not None
    # symmetric: witness invertible
    iso = oracle.oracle_iso(groups[0], groups[1])
    assert iso is not None
    inv_img = np.empty(groups[0].n, dtype=np.int64)
    inv_img[iso.image] = np.arange(groups[0].n)
    back = table.GroupHom(groups[1], groups[0], inv_img)
    assert back.is_isomorphism()
    # relabel invariance
    assert oracle.oracle_iso(groups[2], groups[3]) is not None
    assert oracle.oracle_iso(groups[0], groups[2]) is None


def test_oracle_guard():
    import gpiso.errors as errors

    g = build.build_group(build.direct_product(build.cyclic(7), build.cyclic(41)))
    assert g.n == 287
    with pytest.raises(errors.TooLarge):
        oracle.oracle_iso(g, g)
    assert oracle.oracle_iso(g, g, guard=300) is not None
