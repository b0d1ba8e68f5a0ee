"""Sweep every presentation family against the engine's scenarios.

For each admissible parameter vector the instantiated quotient must have
the Poincare series of the matched scenario's Betti table, the nilpotency
exponent of the degree-1 generator must agree with the scenario co-index,
and every pure-annihilator relation must be mirrored by a vanishing
bidegree on the terminal page.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import NotFiniteDimensional
from .driver import Scenario, merged_case_id
from .families import IdealFamily, catalog_for_field
from .indices import co_index


@dataclass
class Failure:
    params: dict
    check: str
    detail: str


@dataclass
class VerifyRecord:
    family_id: str
    case_id: str
    m: int
    params_checked: int = 0
    failures: list[Failure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def params_pass(self) -> int:
        return self.params_checked - len(self.failures)


def _x_nilpotency(pres, ngens: int) -> int:
    s = 0
    while True:
        mono = tuple([s + 1] + [0] * (ngens - 1))
        if not pres.normal_form(frozenset({mono})):
            return s
        s += 1


def _annihilator_mirrors(family: IdealFamily, m: int) -> list[tuple[int, int]]:
    """Bidegrees (s, t*deg) that single-monomial relations x^s g^t force to
    vanish on the terminal page."""
    out = []
    names = family.gen_names
    degs = dict(family.gens)
    for rel in family.relations:
        if len(rel.terms) != 1 or rel.terms[0].slot:
            continue
        mono = rel.terms[0].monomial(names, m)
        support = [(i, e) for i, e in enumerate(mono) if e]
        if len(support) != 2 or names[support[0][0]] != "x":
            continue
        s = support[0][1]
        gi, t = support[1]
        out.append((s, t * degs[names[gi]]))
    return out


def verify_family_against_scenario(family: IdealFamily, m: int,
                                   scenario: Scenario) -> VerifyRecord:
    rec = VerifyRecord(family.full_id, scenario.case_id, m)
    target = scenario.betti
    expect_nilp = co_index(scenario)
    mirrors = _annihilator_mirrors(family, m)
    for (s, l) in mirrors:
        if scenario.terminal_page.dim(s, l) != 0:
            rec.failures.append(Failure(
                {}, "annihilator-mirror",
                f"terminal page is nonzero at bidegree {(s, l)}"))
    for params in family.param_vectors(m):
        rec.params_checked += 1
        try:
            pres = family.instantiate(m, params)
            series = pres.poincare_series()
        except NotFiniteDimensional as exc:
            rec.failures.append(Failure(params, "finite-dimensionality", str(exc)))
            continue
        if series != target:
            rec.failures.append(Failure(
                params, "series",
                f"quotient series {series} != scenario table {target}"))
            continue
        nilp = _x_nilpotency(pres, len(family.gen_names))
        if nilp != expect_nilp:
            rec.failures.append(Failure(
                params, "x-nilpotency",
                f"max power {nilp} != scenario co-index {expect_nilp}"))
    return rec


def sweep_field(field_tag: str, m: int, scenarios: list[Scenario]) -> list[VerifyRecord]:
    """Verify every family admissible at this m against its matched scenarios."""
    by_case: dict[str, list[Scenario]] = {}
    for s in scenarios:
        by_case.setdefault(merged_case_id(s.case_id), []).append(s)
    out = []
    for family in catalog_for_field(field_tag):
        if not family.admissible_at(m):
            continue
        matched = by_case.get(family.case_id, [])
        if not matched:
            rec = VerifyRecord(family.full_id, "<unmatched>", m)
            rec.failures.append(Failure(
                {}, "scenario-matching",
                f"no scenario with case {family.case_id} at m={m}"))
            out.append(rec)
            continue
        for scenario in matched:
            out.append(verify_family_against_scenario(family, m, scenario))
    return out
