"""Quadratic relations of the q-deformed calculus on Sp(4).

Prints the R-matrix constants, the projector ranks, the span comparison of
the three relation sets, and the degree-2 quotient dimensions.
"""
from bicovariant import build_rmatrix, group_from_tag, pbw_probe, span_equal
from bicovariant.quantum import (
    projector_ranks,
    relations_rel1,
    relations_unique,
    relations_watamura,
    relations_woronowicz,
)

Rm = build_rmatrix(group_from_tag("sp4"))
print("nu =", Rm.nu, "  mu =", Rm.mu)
print("projector ranks (+, -, 0):", projector_ranks(Rm))

w19c, w22, wat = relations_woronowicz(Rm), relations_unique(Rm), relations_watamura(Rm)
for label, A, B in (("w19c vs w22", w19c, w22), ("w19c+rel1 vs wat", w19c.union(relations_rel1(Rm)), wat)):
    c = span_equal(Rm, A, B, (4, 9))
    print(f"{label}: equal={c.equal} ranks={sorted({s[2:] for s in c.samples})}")

for S in (w22, wat):
    rep = pbw_probe(Rm, S, 2)
    print(f"{S.name}: degree-2 dim {rep.dim} (q=1: {rep.dim_q1}, classical {rep.classical})")
