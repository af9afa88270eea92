"""How many independent bracket structures are there?

Counts invariant tensors symmetric in the first pair of spaces and
antisymmetric in the second, three ways: an exact nullspace modulo a prime,
the Weyl character formula, and the rank of the twenty parameter directions.
"""
import sys

from bicovariant import group_from_tag, invariant_count, structure_rank, weyl_invariant_count

for tag in sys.argv[1:] or ["sp4", "so5"]:
    g = group_from_tag(tag)
    direct = invariant_count(g)
    rank, dep = structure_rank(g)
    print(f"{tag}: ambient {direct.ambient}, weight zero {direct.weight_zero}, invariants {direct.count}, "
          f"characters {weyl_invariant_count(g)}, family rank {rank}, dependent {dep or 'none'}")
