"""Probe nontrivial induced actions on fiber cohomology.

For each candidate shape the script prints the twisted starting-page
columns computed from the invariants of 1 + g*, then the mechanical
verdict: some shapes fail multiplicativity outright, some force a fixed
point, some leave a permanent cocycle alive above the fiber dimension,
and on the known exceptional triples no verdict is claimed.
"""

from borelss import FiberPresentation
from borelss.local import (SkeletonInapplicable, local_e2_column,
                           nontrivial_action_obstruction, probe_shapes,
                           twisted_rows)

EXAMPLES = [
    ("C", 4, 4),   # square of the twisted class is a nonzero power
    ("R", 4, 4),   # middle class times its image forces a fixed point
    ("R", 4, 3),   # surviving permanent cocycle above the fiber dimension
    ("R", 5, 4),   # the unresolved exception behind the theorem guards
    ("H", 3, 4),   # generator swap shape: nothing can be concluded
]

for tag, m, n in EXAMPLES:
    fiber = FiberPresentation(tag, m, n)
    print(f"== field {tag}, m={m}, n={n} (twisted rows: {twisted_rows(fiber)})")
    for act, is_candidate in probe_shapes(fiber):
        if act.is_identity:
            continue
        shape = "a -> a+b" if act.ga != frozenset({(1, 0)}) else "b -> a^s + b"
        note = "" if is_candidate else "  [not an algebra involution]"
        print(f"  shape {shape}{note}")
        for l in twisted_rows(fiber):
            prof = local_e2_column(act, l)
            print(f"    column over row {l}: {prof.at_zero} at k=0, "
                  f"{prof.at_positive} at k>0")
        try:
            obs = nontrivial_action_obstruction(act)
            print(f"    verdict: {obs.verdict} ({obs.mechanism})")
            print(f"    {obs.detail}")
        except SkeletonInapplicable as exc:
            print(f"    verdict: none ({exc})")
    print()
