import pytest

from bicovariant.brackets import build_bracket, check_leibniz, check_nilpotency, mu_extract
from bicovariant.groups import group_from_tag, standard_r
from bicovariant.presets import (
    PRESET_TAGS,
    appendix_preset,
    check_expansion,
    classify_mu,
    preset_constraints,
    preset_free_symbols,
    preset_terms,
    random_point,
    trace_bracket_shape,
)

SHAPES = {"A1i": "i", "A1ii": "i", "A1iii": "i", "A2": "ii", "A3": "iii"}
SP4 = group_from_tag("sp4")


@pytest.mark.parametrize("tag", PRESET_TAGS)
def test_expansion_matches_term_list(group, tag):
    assert check_expansion(tag, group, seed=1)


@pytest.mark.parametrize("tag", PRESET_TAGS)
def test_shape(group, tag):
    assert trace_bracket_shape(tag, group, standard_r(group)) == SHAPES[tag]


@pytest.mark.parametrize("tag", PRESET_TAGS)
def test_symbolic_nil_and_dd_sp4(tag):
    B = build_bracket(appendix_preset(tag, SP4), standard_r(SP4), SP4)
    assert B.params.is_symbolic()
    assert check_nilpotency(B).passed
    assert check_leibniz(B, stop_at_first=True).passed


@pytest.mark.parametrize("tag", PRESET_TAGS)
def test_randomized_nil_and_dd(tag, so5):
    p = appendix_preset(tag, so5)
    B = build_bracket(p.subs(random_point(p.free_symbols(), 5)), standard_r(so5), so5)
    assert check_nilpotency(B).passed
    assert check_leibniz(B, stop_at_first=True).passed


def test_constraints():
    assert set(preset_constraints("A1iii", SP4)) == {"a6"}
    assert set(preset_constraints("A2", SP4)) == {"a6"}
    assert set(preset_constraints("A3", SP4)) == {"a6", "a7"}
    assert preset_constraints("A1i", SP4) == {}


def test_constrained_symbols_are_not_free():
    for tag, cons in (("A2", {"a6"}), ("A3", {"a6", "a7"})):
        assert not cons & set(preset_free_symbols(tag, SP4))


def test_term_lists_are_nonempty():
    for tag in PRESET_TAGS:
        assert preset_terms(tag, SP4)


def test_classify_mu():
    assert classify_mu((3, 2, 2, 2, 0, 0)) == "i"
    assert classify_mu((1, 1, -1, -1, 0, 0)) == "ii"


def test_unknown_preset():
    with pytest.raises((KeyError, ValueError)):
        appendix_preset("A4", SP4)


def test_mu_of_A2_is_form_ii():
    mu = mu_extract(build_bracket(appendix_preset("A2", SP4), standard_r(SP4), SP4)).mu
    assert mu[0] == mu[1] == -mu[2] == -mu[3] and mu[4] == mu[5] == 0
