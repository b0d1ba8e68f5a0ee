"""Sweep the presentation families against the engine's scenarios.

Each family is instantiated at every admissible parameter vector; the
quotient's Poincare series and the nilpotency of the degree-1 generator
are compared against the matched scenario.  The complex and quaternionic
catalogs pass for every vector; the mixed-relation real families contain
vectors whose ideals provably collapse below the orbit-space table, and
the sweep lists them instead of hiding them.
"""

from borelss import FiberPresentation, search_cases
from borelss.verify import sweep_field

for field in ("C", "H", "R"):
    print(f"== field {field}")
    for m in (2, 3):
        scenarios = search_cases(FiberPresentation(field, m)).scenarios
        records = sweep_field(field, m, scenarios)
        for rec in records:
            status = "ok" if rec.passed else f"{len(rec.failures)} failing vectors"
            print(f"  m={m} {rec.family_id} vs {rec.case_id}: "
                  f"{rec.params_checked} vectors, {status}")
            for f in rec.failures[:2]:
                params = ",".join(f"{k}={v}" for k, v in sorted(f.params.items()))
                print(f"      e.g. [{params}] {f.check}: {f.detail}")
    print()
