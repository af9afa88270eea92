"""First order in hbar, q = 1 + hbar.

Expands the R-matrix, reports the identities of the expansion, and extracts
the order-hbar bracket from the two relation sets.  On SO(5) the second set
yields a unique bracket; on Sp(4) it is already inconsistent at order zero.
"""
from bicovariant import build_rmatrix, extract_order_h_bracket, fgf_no_go, group_from_tag, semiclassical_expand
from bicovariant.quantum import relations_unique
from bicovariant.semiclassical import genw_nullity_oracle, r_scale_against_standard

for tag in ("so5", "sp4"):
    g = group_from_tag(tag)
    Rm = build_rmatrix(g)
    Sd = semiclassical_expand(Rm)
    print(f"== {tag}")
    print("  expansion checks:", "all hold" if all(Sd.checks.values()) else Sd.checks)
    print("  r / standard r =", r_scale_against_standard(Sd))
    ex = extract_order_h_bracket(relations_unique(Rm), Sd)
    print(f"  w22: consistent={ex.consistent} nullity={ex.nullity} (oracle {genw_nullity_oracle(g)})")
    rep = fgf_no_go(g)
    print(f"  wat: order0={rep.wat_order0_ok} matches fgf={rep.extracted_matches} params={rep.params}")
    print("  unmet:", rep.failed or "none")
