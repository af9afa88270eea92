from collections import Counter

import pytest

from bicovariant.groups import group_from_tag
from bicovariant.invariants import (
    _mul,
    _weight_multiset,
    invariant_count,
    structure_rank,
    weyl_invariant_count,
    weyl_trivial_multiplicity,
)


@pytest.mark.parametrize("tag", ["sp4", "so5", "sp6", "so7"])
def test_weyl_oracle_on_small_modules(tag):
    g = group_from_tag(tag)
    ch = _weight_multiset(g)
    # Mat(N) = adjoint + complement + singlet; Mat(N)^2 sees I, P, K0
    assert weyl_trivial_multiplicity(g, ch) == 1
    assert weyl_trivial_multiplicity(g, _mul(ch, ch)) == 3
    assert weyl_trivial_multiplicity(g, Counter({(0,) * len(g.cartan_basis): 1})) == 1


def test_counts_agree_for_sp4():
    g = group_from_tag("sp4")
    direct = invariant_count(g)
    assert direct.ambient == 136 * 120
    assert direct.count == weyl_invariant_count(g) == structure_rank(g)[0] == 16


def test_sp4_dependent_directions():
    assert structure_rank(group_from_tag("sp4"))[1] == ["c1", "c2", "c6", "c7"]


def test_so5_family_is_complete():
    g = group_from_tag("so5")
    assert weyl_invariant_count(g) == structure_rank(g)[0] == 20
