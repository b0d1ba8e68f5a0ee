"""Walk through every admissible differential scenario for the real case m = 5.

The starting page is the polynomial algebra on the degree-1 base class
tensored with the fiber algebra; the search branches over all possible
generator transgressions, prunes inconsistent branches, and keeps the
terminal pages compatible with a free involution.
"""

from borelss import FiberPresentation, search_cases
from borelss.driver import merged_case_id
from borelss.indices import co_index, volovikov_index

fiber = FiberPresentation("R", 5)
result = search_cases(fiber)

print(f"fiber: projective space (lambda={fiber.lam}, m={fiber.m}) x sphere "
      f"(n={fiber.n}), total dimension {fiber.top}")
print(f"admissible scenarios: {len(result.scenarios)}")
print(f"pruned branches: {len(result.pruned)}")
print()

for s in result.scenarios:
    nz = [d for d in s.decisions if d.nonzero]
    print(f"case {s.case_id}  ({merged_case_id(s.case_id)})")
    print("  nonzero differentials:", "; ".join(str(d) for d in nz))
    print("  orbit-space dims:", " ".join(str(c) for c in s.betti.coeffs),
          f"(total {s.betti.total})")
    print(f"  co-index {co_index(s)}, first bottom-row page {volovikov_index(s)}")
    print()

print("dead branches by reason:")
for reason in sorted({p.reason for p in result.pruned}):
    hits = [p for p in result.pruned if p.reason == reason]
    print(f"  {reason}: {len(hits)}")
    example = hits[0]
    print("    e.g.", "; ".join(str(d) for d in example.decisions) or "(empty)")
