import pytest
from gmpy2 import mpq

from bicovariant.algebra import LaurentQ, q_var
from bicovariant.groups import group_from_tag
from bicovariant.quantum import (
    CONVENTIONS,
    DegenerateSample,
    _assemble,
    build_rmatrix,
    evaluate_tensor,
    pbw_probe,
    projector_ranks,
    proportional,
    quotient_dims,
    relation_X,
    relations_rel1,
    relations_unique,
    relations_watamura,
    relations_woronowicz,
    span_equal,
    span_ranks,
    validate_rmatrix,
    weh_combination,
    ww_identities,
)
from bicovariant.tensors import compose

RANKS = {"sp4": (10, 5, 1), "so5": (14, 10, 1), "sp6": (21, 14, 1), "so7": (27, 21, 1)}


@pytest.fixture(scope="module")
def rm_sp4():
    return build_rmatrix("sp", 4)


@pytest.fixture(scope="module")
def rm_so5():
    return build_rmatrix("so", 5)


@pytest.mark.parametrize("tag", ["sp4", "so5"])
def test_symbolic_identities(tag):
    Rm = build_rmatrix(group_from_tag(tag))
    assert all(validate_rmatrix(Rm).values())
    assert all(ww_identities(Rm).values())


@pytest.mark.parametrize("tag", sorted(RANKS))
def test_projector_ranks(tag):
    assert projector_ranks(build_rmatrix(group_from_tag(tag))) == RANKS[tag]


@pytest.mark.parametrize("q0", [mpq(2), mpq(3, 2), mpq(5, 7)])
def test_sp4_identities_at_samples(rm_sp4, q0):
    R = evaluate_tensor(rm_sp4.Rhat, q0)
    K = evaluate_tensor(rm_sp4.K, q0)
    nu, mu, lm = (x.evaluate(q0) for x in (rm_sp4.nu, rm_sp4.mu, rm_sp4.lam))
    assert compose(K, R) == K.scale(nu) == compose(R, K)
    assert compose(K, K) == K.scale(mu)
    I = evaluate_tensor(rm_sp4.group.I(), q0) if False else rm_sp4.group.I()
    assert (compose(R, R) - I - (R - compose(R, K)).scale(lm)).is_zero()


def test_so5_singlet_eigenvalue(rm_so5):
    # nu = eps q^(eps - N) = q^-4, written in s = q^(1/2)
    assert rm_so5.base == "s"
    assert rm_so5.nu == LaurentQ({-8: 1}, base="s")


def test_sp4_constants(rm_sp4):
    q = q_var()
    assert rm_sp4.nu == -(q ** -5)
    assert rm_sp4.mu.evaluate(1) == -4  # 1 - [5]_1


@pytest.mark.parametrize("tag", ["sp4", "so5"])
def test_classical_limit(tag):
    g = group_from_tag(tag)
    Rm = build_rmatrix(g)
    assert evaluate_tensor(Rm.Rhat, 1) == g.P()
    assert evaluate_tensor(Rm.K, 1) == g.K0()


def test_exactly_one_convention_passes_sp4():
    g = group_from_tag("sp4")
    ok = [c for c in CONVENTIONS if all(validate_rmatrix(_assemble(g, c), braid=False).values())]
    assert len(ok) == 1


def test_span_equalities_sp4(rm_sp4):
    a = span_equal(rm_sp4, relations_woronowicz(rm_sp4), relations_unique(rm_sp4), (4, 9))
    assert a.equal and a.stable
    w = relations_woronowicz(rm_sp4).union(relations_rel1(rm_sp4))
    b = span_equal(rm_sp4, w, relations_watamura(rm_sp4), (4, 9))
    assert b.equal and b.stable


def test_w22_strictly_inside_wat(rm_sp4):
    A, B = relations_unique(rm_sp4), relations_watamura(rm_sp4)
    assert span_ranks(rm_sp4, A, 4) == 126
    assert span_ranks(rm_sp4, B, 4) == span_ranks(rm_sp4, A.union(B), 4) == 146


def test_w19c_at_q1_matches_flip_specialization(rm_sp4):
    assert span_ranks(rm_sp4, relations_woronowicz(rm_sp4), 1) == 126


def test_degenerate_sample_rejected(rm_sp4):
    with pytest.raises(DegenerateSample):
        span_equal(rm_sp4, relations_unique(rm_sp4), relations_unique(rm_sp4), (0, 4))


@pytest.mark.parametrize("tag", ["sp4", "so5"])
def test_weh_reproduces_w22(tag):
    Rm = build_rmatrix(group_from_tag(tag))
    ok, ratio = proportional(weh_combination(Rm, "K"), relations_unique(Rm))
    assert ok


def test_weh_with_singlet_projector_differs_but_spans_agree(rm_sp4):
    ok, _ = proportional(weh_combination(rm_sp4, "P0"), relations_unique(rm_sp4))
    assert not ok
    assert span_equal(rm_sp4, weh_combination(rm_sp4, "P0"), relations_unique(rm_sp4), (4, 9)).equal


def test_relation_x_rows_live_in_word_space(rm_sp4):
    S = relation_X(rm_sp4, "+", "+")
    V = S.V
    assert V == 16
    assert all(0 <= w < V * V for row in S.rows.values() for w in row)


def test_export_format(rm_sp4):
    text = relations_unique(rm_sp4).export()
    lines = text.splitlines()
    assert lines[0].startswith("# relation set w22, N=4")
    assert all(" -> " in ln and ln.startswith("((") for ln in lines[1:])


def test_pbw_degree2(rm_sp4):
    rep = pbw_probe(rm_sp4, relations_unique(rm_sp4), 2)
    assert rep.stable and rep.classical == 120 and rep.free == 256
    assert rep.dim == 256 - 126 == rep.dim_q1
    assert rep.matches_q1 and not rep.matches_classical
    assert "not a PBW proof" in rep.verdict


def test_quotient_dims_free_algebra(rm_sp4):
    empty = relations_unique(rm_sp4)
    empty = type(empty)("empty", empty.N, empty.base, {})
    assert quotient_dims(empty, 4, 101, 2) == 256
