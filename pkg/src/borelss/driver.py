"""Exhaustive branch-and-prune search over admissible differential scenarios.

At the lowest page where some multiplicative generator could support a
nonzero differential, the search branches over every candidate value
(zero included), turns the page, and recurses.  Branches die in one of
three ways: the generator values violate the Leibniz rule, applying the
differential twice is nonzero, or the terminal page keeps classes above
the fiber dimension, which is incompatible with a free action.
Surviving branches are terminal scenarios tagged with the case taxonomy.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .algebra import FiberPresentation, PoincareSeries
from .spectral import (DSquareNonzero, Generator, NotADerivation, Page,
                       advance, build_e2, extend_leibniz, possible_nonzero,
                       tot_series, turn_page)

WORKERS_ENV = "BORELSS_MAX_WORKERS"


class UnknownCase(Exception):
    """Decision list matches no case of the taxonomy: a discrepancy worth reporting."""


@dataclass(frozen=True)
class Decision:
    """One fork choice: at page r, the generator was sent to the given target."""

    r: int
    gen_bidegree: tuple[int, int]
    gen_label: str
    value_label: str

    @property
    def nonzero(self) -> bool:
        return self.value_label != "0"

    def __str__(self) -> str:
        return f"d{self.r}[{self.gen_label}] = {self.value_label}"


@dataclass(frozen=True)
class BranchPoint:
    """A page with undetermined generator differentials: the search forks here
    over the full target space of every listed generator, zero included."""

    r: int
    gen_labels: tuple[str, ...]
    candidates: tuple[tuple[str, ...], ...]  # value labels per generator


@dataclass(frozen=True)
class PrunedBranch:
    decisions: tuple[Decision, ...]
    reason: str
    detail: str


@dataclass
class Scenario:
    fiber: FiberPresentation
    decisions: tuple[Decision, ...]
    terminal_page: Page
    betti: PoincareSeries
    case_id: str

    @property
    def key(self):
        return tuple((d.r, d.gen_label, d.value_label) for d in self.decisions)

    def __repr__(self):
        return f"Scenario({self.case_id}, m={self.fiber.m}, betti={self.betti})"


@dataclass
class SearchResult:
    scenarios: list[Scenario]
    pruned: list[PrunedBranch]


def _candidate_values(page: Page, gen: Generator, r: int) -> list[np.ndarray]:
    """Zero plus every nonzero element of the target space, in stable order."""
    dim = page.dim(gen.k + r, gen.l - r + 1)
    vals = [np.array(bits, dtype=np.uint8)
            for bits in itertools.product((0, 1), repeat=dim)]
    return sorted(vals, key=lambda v: tuple(v))


def _next_fork(page: Page):
    for r in range(page.r, page.r_max + 1):
        gens = [g for g in page.generators
                if g.k <= page.k_window and possible_nonzero(page, g, r)]
        if gens:
            gens.sort(key=lambda g: g.key)
            return r, gens
    return None


def next_branch_point(page: Page) -> BranchPoint | None:
    """The next fork this page forces, if any (None once terminal)."""
    fork = _next_fork(page)
    if fork is None:
        return None
    r, gens = fork
    advanced = advance(page, r)
    labels = []
    for g in gens:
        tk, tl = g.k + r, g.l - r + 1
        labels.append(tuple(advanced.coords_label(tk, tl, v)
                            for v in _candidate_values(advanced, g, r)))
    return BranchPoint(r, tuple(g.label for g in gens), tuple(labels))


def _search(page: Page, decisions: tuple[Decision, ...],
            scenarios: list[Scenario], pruned: list[PrunedBranch],
            parallel_root: int = 0) -> None:
    fork = _next_fork(page)
    if fork is None:
        series, clean = tot_series(page)
        if clean:
            scenarios.append(Scenario(page.fiber, decisions, page, series, ""))
        else:
            pruned.append(PrunedBranch(
                decisions, "survivors-above-fiber-dimension",
                "terminal page keeps classes above the space dimension, "
                "so the orbit space would have cohomology in infinitely many degrees"))
        return
    r, gens = fork
    page = advance(page, r)
    cand_lists = [_candidate_values(page, g, r) for g in gens]
    combos = list(itertools.product(*cand_lists))

    def explore(combo):
        local_scen: list[Scenario] = []
        local_pruned: list[PrunedBranch] = []
        decs = decisions + tuple(
            Decision(r, (g.k, g.l), g.label,
                     page.coords_label(g.k + r, g.l - r + 1, val))
            for g, val in zip(gens, combo))
        try:
            d = extend_leibniz(page, dict(zip(gens, combo)))
            nxt = turn_page(page, d)
        except NotADerivation as exc:
            local_pruned.append(PrunedBranch(decs, "NotADerivation", str(exc)))
            return local_scen, local_pruned
        except DSquareNonzero as exc:
            local_pruned.append(PrunedBranch(decs, "DSquareNonzero", str(exc)))
            return local_scen, local_pruned
        _search(nxt, decs, local_scen, local_pruned)
        return local_scen, local_pruned

    if parallel_root > 1 and len(combos) > 1:
        with ThreadPoolExecutor(max_workers=parallel_root) as pool:
            results = list(pool.map(explore, combos))
    else:
        results = [explore(c) for c in combos]
    for sc, pr in results:
        scenarios.extend(sc)
        pruned.extend(pr)


def search_cases(fiber: FiberPresentation, k_window: int | None = None) -> SearchResult:
    """All admissible terminal scenarios, deduplicated and sorted by decisions."""
    workers = int(os.environ.get(WORKERS_ENV, "1") or "1")
    scenarios: list[Scenario] = []
    pruned: list[PrunedBranch] = []
    _search(build_e2(fiber, k_window), (), scenarios, pruned,
            parallel_root=max(1, workers))
    by_key = {}
    for s in scenarios:
        by_key.setdefault(s.key, s)
    out = [by_key[k] for k in sorted(by_key)]
    for s in out:
        s.case_id = classify(s)
        _validate(s)
    return SearchResult(out, pruned)


def betti_table(s: Scenario) -> PoincareSeries:
    """Orbit-space cohomology dimensions: for a free action these equal the
    total-degree dimensions of the terminal page."""
    return s.betti


def _coords_for_label(page: Page, tk: int, tl: int, label: str) -> np.ndarray:
    sp = page.space(tk, tl)
    dim = sp.dim if sp else 0
    if label == "0":
        return np.zeros(dim, dtype=np.uint8)
    for bits in range(1, 1 << dim):
        cand = np.array([(bits >> i) & 1 for i in range(dim)], dtype=np.uint8)
        if page.coords_label(tk, tl, cand) == label:
            return cand
    raise ValueError(f"no element labeled {label!r} at {(tk, tl)}")


def replay(fiber: FiberPresentation, decisions, r_target: int | None = None,
           collect: list | None = None) -> Page:
    """Rebuild the pages a decision list produces, deterministically.

    Stops just before r_target when given (the page is advanced to exactly
    that index); with collect, every page reached after a turn is appended.
    """
    page = build_e2(fiber)
    if collect is not None:
        collect.append(page)
    by_r: dict[int, list[Decision]] = {}
    for d in decisions:
        by_r.setdefault(d.r, []).append(d)
    for r in sorted(by_r):
        if r_target is not None and r >= r_target:
            break
        page = advance(page, r)
        gens = {(g.k, g.l, g.label): g for g in page.generators}
        values = {}
        for dec in by_r[r]:
            gen = gens[(dec.gen_bidegree[0], dec.gen_bidegree[1], dec.gen_label)]
            values[gen] = _coords_for_label(page, gen.k + r, gen.l - r + 1,
                                            dec.value_label)
        page = turn_page(page, extend_leibniz(page, values))
        if collect is not None:
            collect.append(page)
    if r_target is not None:
        page = advance(page, r_target)
    return page


# ---------------------------------------------------------------------------
# case taxonomy


def _first_nonzero(decisions, label: str):
    for d in decisions:
        if d.gen_label == label and d.nonzero:
            return d
    return None


def _nonzero_at(decisions, r: int, row: int):
    for d in decisions:
        if d.r == r and d.gen_bidegree == (0, row) and d.nonzero:
            return d
    return None


def classify(s: Scenario) -> str:
    """Deterministic taxonomy tag from the decision list (sphere part n = 4)."""
    fiber = s.fiber
    if fiber.n != 4:
        return "exploratory"
    m, lam = fiber.m, fiber.lam
    decs = s.decisions
    da = _first_nonzero(decs, "a")
    db = _first_nonzero(decs, "b")
    if fiber.field_tag == "R":
        if da is not None and da.r == 2:
            if db is None:
                return "R.i"
            raise UnknownCase(f"unexpected decisions {s.key}")
        if da is not None:
            raise UnknownCase(f"unexpected a-differential {da}")
        if db is None:
            raise UnknownCase(f"no nonzero differential on b in {s.key}")
        if db.r == 5:
            return "R.ii"
        if db.r == 4:
            return "R.iii"
        if db.r == 3:
            # late fork on the row m+3 class
            if _nonzero_at(decs, m + 3, m + 3):
                return "R.iv.1"
            if _nonzero_at(decs, m + 4, m + 3):
                return "R.iv.2"
            raise UnknownCase(f"row m+3 never transgresses in {s.key}")
        if db.r == 2:
            if _nonzero_at(decs, m + 1, m + 2):
                if _nonzero_at(decs, m + 3, m + 3):
                    return "R.v.1.1"
                if _nonzero_at(decs, m + 4, m + 3):
                    return "R.v.1.2"
                raise UnknownCase(f"row m+3 never transgresses in {s.key}")
            if _nonzero_at(decs, m + 2, m + 2):
                return "R.v.2"
            if _nonzero_at(decs, m + 3, m + 2):
                return "R.v.3"
            raise UnknownCase(f"row m+2 never transgresses in {s.key}")
        raise UnknownCase(f"unexpected b-differential {db}")
    if fiber.field_tag == "C":
        if da is not None and da.r == 3 and db is None:
            return "C.i"
        if da is None and db is not None and db.r == 3:
            return "C.iii"
        if da is None and db is not None and db.r == 5:
            return "C.ii"
        raise UnknownCase(f"unexpected decisions {s.key}")
    if fiber.field_tag == "H":
        if da is not None and db is not None:
            return "H.i"
        if da is not None:
            return "H.ii"
        if db is not None:
            return "H.iii"
        raise UnknownCase(f"unexpected decisions {s.key}")
    raise UnknownCase(fiber.field_tag)


def merged_case_id(case_id: str) -> str:
    """Presentation-family level tag; the two transgressing quaternionic cases
    share one family."""
    return "H.i+ii" if case_id in ("H.i", "H.ii") else case_id


_EXPECTED_TOTAL_FACTOR = {"R.i": 2, "C.i": 3}


def expected_total(case_id: str, m: int) -> int:
    return _EXPECTED_TOTAL_FACTOR.get(case_id, 5) * (m + 1)


def first_bottom_row_page(s: Scenario) -> int | None:
    """Smallest page index whose differential has a component landing in the
    bottom row."""
    for d in s.terminal_page.history:
        if d.hits_bottom_row:
            return d.r
    return None


def _validate(s: Scenario) -> None:
    fiber = s.fiber
    betti = s.betti
    if betti[0] != 1:
        raise AssertionError(f"betti table of {s.case_id} does not start at 1")
    if fiber.n == 4:
        if len(betti) != fiber.top + 1:
            raise AssertionError(
                f"betti support of {s.case_id} is {len(betti) - 1}, "
                f"expected {fiber.top}")
        if betti.total != expected_total(s.case_id, fiber.m):
            raise AssertionError(
                f"betti total of {s.case_id} is {betti.total}, "
                f"expected {expected_total(s.case_id, fiber.m)}")
        if not betti.is_symmetric:
            raise AssertionError(f"betti table of {s.case_id} is not symmetric")
