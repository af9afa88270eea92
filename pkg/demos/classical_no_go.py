"""Walk through the classical bracket family on Sp(4).

Builds the appendix presets, shows that each satisfies nilpotency and the
Leibniz rule, and that none of them is Poisson once the standard r-matrix is
switched on.  Swapping in an abelian r-matrix with all parameters zero gives
a bracket that does satisfy Jacobi.
"""
import sys

from bicovariant import (
    PRESET_TAGS,
    BracketParams,
    appendix_preset,
    build_bracket,
    check_jacobi,
    check_leibniz,
    check_nilpotency,
    group_from_tag,
    standard_r,
)
from bicovariant.groups import default_abelian_r

tag = sys.argv[1] if len(sys.argv) > 1 else "sp4"
g = group_from_tag(tag)
r = standard_r(g)
print(f"group {g.tag}: N={g.N}, eps={g.eps}, dim g = {g.dim}")

for name in PRESET_TAGS:
    B = build_bracket(appendix_preset(name, g), r, g)
    nil = check_nilpotency(B).passed
    dd = check_leibniz(B, seed=0).passed
    jac = check_jacobi(B, stop_at_first=True, seed=0).passed
    print(f"  preset {name:<5} nil={nil!s:<5} dd={dd!s:<5} Jacobi={jac}")

B0 = build_bracket(BracketParams({}), default_abelian_r(g), g)
print(f"abelian r, zero parameters: Jacobi={check_jacobi(B0).passed}")
B1 = build_bracket(BracketParams({}), r, g)
print(f"standard r, zero parameters: Jacobi={check_jacobi(B1, stop_at_first=True).passed}")
