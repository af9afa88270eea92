import random

import pytest
from gmpy2 import mpq
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from bicovariant.brackets import (
    MU_FAMILIES,
    PARAM_NAMES,
    BracketParams,
    ShapeError,
    build_bracket,
    build_r_only,
    check_jacobi,
    check_leibniz,
    check_nilpotency,
    check_nilpotency_mu,
    closure_analysis,
    constrained_poisson_check,
    jai_identity,
    jai_sides,
    k4_formulas,
    mu_extract,
    mu_family_member,
    random_mu,
)
from bicovariant.groups import abelian_r, default_abelian_r, diag, group_from_tag, standard_r
from bicovariant.semiclassical import semiclassical_r

SP4 = group_from_tag("sp4")


def test_twenty_parameters():
    assert len(PARAM_NAMES) == 20 and "c5" not in PARAM_NAMES


def test_c5_rejected():
    with pytest.raises(ValueError):
        BracketParams({"c5": 1})
    assert BracketParams({"c5": 0})["c5"] == 0


def test_unknown_parameter_rejected():
    with pytest.raises(ValueError):
        BracketParams({"d1": 1})


def test_zero_bracket(group):
    B = build_bracket(BracketParams.zero(), None, group)
    assert not B.table.table


def test_r_only_bracket_is_nonzero(group):
    assert build_r_only(group, standard_r(group)).table.table


@pytest.mark.parametrize("name,expect", [("a1", {0: "N"}), ("b3", {2: 1, 3: -1})])
def test_mu_extract_examples(group, name, expect):
    mu = mu_extract(build_bracket(BracketParams({name: 1}), None, group)).mu
    want = [0] * 6
    for i, v in expect.items():
        want[i] = group.N if v == "N" else v
    assert list(mu) == want


def test_k4_symbolic_sp4():
    B = build_bracket(BracketParams.symbolic(), standard_r(SP4), SP4)
    got = mu_extract(B).mu
    want = k4_formulas(SP4, BracketParams.symbolic()).mu
    assert all(a == b for a, b in zip(got, want))


def test_k4_mu1_formula(group):
    # mu_1 = 2 b1 + eps c1 - eps c2 + eps c4 + N a1
    p = BracketParams({"b1": 3, "c1": 5, "c2": 7, "c4": 11, "a1": 13})
    e, N = group.eps, group.N
    assert mu_extract(build_bracket(p, standard_r(group), group)).mu[0] == 6 + e * (5 - 7 + 11) + 13 * N


@pytest.mark.parametrize("kind", MU_FAMILIES)
def test_mu_families_are_nilpotent(kind):
    rng = random.Random(7)
    for _ in range(5):
        assert check_nilpotency_mu(SP4, mu_family_member(kind, rng)).passed


@given(st.integers(0, 2 ** 32))
@settings(max_examples=60)
def test_off_family_mu_fails(seed):
    assert not check_nilpotency_mu(SP4, random_mu(random.Random(seed))).passed


@given(st.integers(0, 2 ** 32))
@settings(max_examples=10)
def test_mu_level_nilpotency_matches_direct(seed):
    B = build_bracket(BracketParams.random(seed), standard_r(SP4), SP4)
    assert check_nilpotency(B).passed == check_nilpotency_mu(SP4, mu_extract(B).mu).passed


def cartan(a, b):
    return diag(4, [a, b, -b, -a])


@given(st.lists(st.integers(-5, 5), min_size=4, max_size=4), st.sampled_from([None, "a1", "b1", "c3"]))
@settings(max_examples=25)
def test_jacobi_implies_nil_and_dd(v, extra):
    a, b, c, d = v
    assume(a * d - b * c != 0)
    p = BracketParams({extra: 1}) if extra else BracketParams.zero()
    B = build_bracket(p, abelian_r(SP4, cartan(a, b), cartan(c, d)), SP4)
    if check_jacobi(B).passed:
        assert check_nilpotency(B).passed
        assert check_leibniz(B).passed


def test_abelian_passes_standard_fails(group):
    assert check_jacobi(build_bracket(BracketParams.zero(), default_abelian_r(group), group)).passed
    assert not check_jacobi(build_r_only(group, standard_r(group)), stop_at_first=True).passed


def test_jai_identity_sp4():
    B = build_r_only(SP4, standard_r(SP4))
    L, R = jai_sides(B)
    assert not L.is_zero()
    assert jai_identity(B)


def test_jai_requires_zero_parameters():
    with pytest.raises(ValueError):
        jai_identity(build_bracket(BracketParams({"a1": 1}), standard_r(SP4), SP4))


@st.composite
def closure_params(draw):
    e = SP4.eps
    vals = {n: draw(st.integers(-9, 9)) for n in ("b1", "b2", "c1", "c2", "b6", "b7", "c6", "c7", "a1", "a3", "c3")}
    kill_alpha, kill_beta = draw(st.booleans()), draw(st.booleans())
    if kill_alpha:
        vals["b2"] = vals["b1"] - e * (vals["c1"] - vals["c2"])
    if kill_beta:
        vals["b7"] = -vals["b6"] + e * (vals["c6"] + vals["c7"])
    return BracketParams(vals)


@given(closure_params())
@settings(max_examples=40)
def test_closure_iff_alpha_beta_minus_vanish(p):
    c = closure_analysis(build_bracket(p, standard_r(SP4), SP4))
    assert c.closed == (c.alpha_minus == 0 and c.beta_minus == 0)


def test_closure_constants_formula():
    p = BracketParams({"b1": 5, "b2": 2, "c1": 3, "c2": 1, "b6": 4, "b7": 1, "c6": 2, "c7": 6})
    c = closure_analysis(build_bracket(p, standard_r(SP4), SP4))
    e = SP4.eps
    assert c.alpha_plus == 3 + e * 2 and c.alpha_minus == 3 - e * 2
    assert c.beta_plus == 5 + e * 8 and c.beta_minus == 5 - e * 8


def test_gru_constrained_poisson_sp4():
    rep = constrained_poisson_check(SP4)
    assert rep.passed
    assert (rep.ideal_dim2, rep.ideal_dim3) == (20, 304)
    assert rep.jacobi_nonzero_raw > 0  # Poisson only on the constraint surface


def test_gru_check_depends_on_r_scale():
    assert not constrained_poisson_check(SP4, standard_r(SP4).r).passed
    assert constrained_poisson_check(SP4, semiclassical_r(SP4).scale(mpq(-1))).passed
