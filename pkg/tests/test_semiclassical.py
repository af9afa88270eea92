import pytest
from gmpy2 import mpq

from bicovariant.groups import group_from_tag
from bicovariant.quantum import build_rmatrix, relations_unique, relations_watamura
from bicovariant.semiclassical import (
    block_solve,
    extract_order_h_bracket,
    extraction_rows,
    fgf_no_go,
    genw_nullity_oracle,
    genw_rows,
    r_scale_against_standard,
    same_solution_set,
    semiclassical_expand,
)
from bicovariant.grassmann import GrassPoly


@pytest.fixture(scope="module", params=["sp4", "so5"])
def sd(request):
    return semiclassical_expand(build_rmatrix(group_from_tag(request.param)))


def test_expansion_checks(sd):
    assert all(sd.checks.values()), [k for k, v in sd.checks.items() if not v]


def test_r_is_minus_four_standard(sd):
    assert r_scale_against_standard(sd) == -4


def test_qe_constant(sd):
    g = sd.group
    assert sd.qe_constant == -g.eps * (1 - g.eps * g.N)


def test_w22_matches_genw(sd):
    g = sd.group
    S = relations_unique(build_rmatrix(g))
    ex = extract_order_h_bracket(S, sd)
    assert ex.order0_ok and ex.consistent
    assert ex.nullity == genw_nullity_oracle(g) == {"sp4": 1200, "so5": 8400}[g.tag]
    assert same_solution_set(ex.rows, genw_rows(sd), g.N * g.N)


def test_block_solve_small_system():
    x = GrassPoly({0b11: mpq(1)})
    pairs = [(0, 0), (0, 1), (1, 1)]
    rows = [({(0, 0): mpq(1), (0, 1): mpq(1)}, x), ({(0, 1): mpq(2)}, x + x)]
    bs = block_solve(rows, pairs)
    assert bs.consistent and bs.rank == 2
    assert bs.solution[(0, 1)] == x and not bs.solution.get((0, 0), GrassPoly())
    bad = rows + [({(0, 0): mpq(1)}, x)]
    assert not block_solve(bad, pairs).consistent


def test_so5_wat_extraction_is_fgf():
    rep = fgf_no_go(group_from_tag("so5"))
    assert rep.as_expected, rep.failed
    assert rep.params.get("b1") == -1 and rep.params.get("c3") == 1


def test_sp4_wat_fails_at_order_zero():
    g = group_from_tag("sp4")
    ok0, _ = extraction_rows(relations_watamura(build_rmatrix(g)))
    assert not ok0
    rep = fgf_no_go(g)
    assert rep.nilpotency_fails and rep.jacobi_fails
    assert set(rep.failed) == {"wat_order0_ok", "extracted_matches", "minus_trace_identity",
                               "poisson_mod_gru", "equals_poi_mod_gru"}


def test_sp4_eps_weighted_variant_passes_bracket_checks():
    rep = fgf_no_go(group_from_tag("sp4"), eps_weighted=True)
    assert set(rep.failed) <= {"wat_order0_ok", "extracted_matches"}
