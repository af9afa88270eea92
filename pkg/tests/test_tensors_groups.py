import pytest
from gmpy2 import mpq

from bicovariant.groups import (
    abelian_r,
    ad_invariance_check,
    build_group,
    cybe_defect,
    default_abelian_r,
    diag,
    group_from_tag,
    in_lie_square,
    is_skew,
    standard_r,
)
from bicovariant.tensors import SpaceTensor, compose, partial_trace, swap


def test_flip_squares_to_identity(group):
    P = group.P()
    assert compose(P, P) == group.I()


def test_K0_square_and_trace(group):
    K = group.K0()
    assert compose(K, K) == K.scale(group.eps * group.N)
    assert partial_trace(K, [2]) == SpaceTensor.identity(group.N, (1,)).scale(group.eps)


def test_PK_equals_eps_K(group):
    K, P = group.K0(), group.P()
    assert compose(P, K) == K.scale(group.eps) == compose(K, P)


def test_metric_signs():
    sp = group_from_tag("sp4")
    assert sp.eps_i == (1, 1, -1, -1)
    assert sp.eps == -1 and group_from_tag("so5").eps == 1


def test_dimensions():
    assert group_from_tag("sp4").dim == 10
    assert group_from_tag("so5").dim == 10
    assert group_from_tag("sp6").dim == 21
    assert group_from_tag("so7").dim == 21


def test_unknown_tag():
    with pytest.raises(ValueError):
        group_from_tag("g2")


def test_invariant_structures(group):
    for X in (group.I(), group.P(), group.K0()):
        assert ad_invariance_check(X, group)


def test_non_invariant_tensor(so5):
    e = SpaceTensor(5, (1, 2), {(1, 1, 1, 1): 1})
    assert not ad_invariance_check(e, so5)


def test_standard_r_is_quasitriangular(group):
    r = standard_r(group).r
    assert is_skew(r) and in_lie_square(r, group)
    C = cybe_defect(r)
    assert not C.is_zero()
    assert ad_invariance_check(C, group)


def test_abelian_r_is_triangular(group):
    r = default_abelian_r(group).r
    assert is_skew(r)
    assert cybe_defect(r).is_zero()


def test_abelian_r_from_cartan(sp4):
    x, y = diag(4, [1, 2, -2, -1]), diag(4, [3, 0, 0, -3])
    r = abelian_r(sp4, x, y).r
    assert cybe_defect(r).is_zero()


def test_swap_of_standard_r(group):
    r = standard_r(group).r
    assert swap(r) == -r


def test_scaling_keeps_type(group):
    r = standard_r(group).r
    assert is_skew(r.scale(mpq(-4)))
    assert ad_invariance_check(cybe_defect(r.scale(mpq(-4))), group)


def test_build_group_validates_family():
    with pytest.raises(ValueError):
        build_group("su", 3)
