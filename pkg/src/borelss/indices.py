"""Numerical indices of a free involution and equivariant-map consequences.

The mod-2 co-index is the largest power of the orbit bundle's degree-1
characteristic class that survives, read off the bottom row of the
terminal page; it bounds the classical index from above, which forbids
equivariant maps from large spheres into the space.  The spectral index
is the first page whose differential lands in the bottom row; together
with the vanishing pattern of sphere orbit-space cohomology it forbids
equivariant maps from the space to small spheres.
"""

from __future__ import annotations

from dataclasses import dataclass

from .driver import Scenario, first_bottom_row_page


@dataclass(frozen=True)
class Statement:
    kind: str      # stable machine tag, e.g. "no-sphere-to-space-map"
    text: str


@dataclass(frozen=True)
class IndexReport:
    case_id: str
    co_ind2: int
    volovikov_i: int
    ind_upper: int
    statements: tuple[Statement, ...]


def co_index(s: Scenario) -> int:
    """Largest k with a surviving bottom-row class on the terminal page."""
    page = s.terminal_page
    best = 0
    for k in range(page.k_window + 1):
        if page.dim(k, 0) > 0:
            best = k
    return best


def volovikov_index(s: Scenario) -> int:
    """First page whose recorded differential has a component landing in the
    bottom row; every admissible scenario transgresses eventually."""
    r = first_bottom_row_page(s)
    if r is None:
        raise ValueError(f"scenario {s.case_id} never hits the bottom row")
    return r


def index_report(s: Scenario) -> IndexReport:
    co = co_index(s)
    vi = volovikov_index(s)
    statements = [
        Statement("index-upper-bound",
                  f"the sphere-to-space index is at most {co}"),
        Statement("no-sphere-to-space-map",
                  f"no equivariant map from S^n for n >= {co + 1}"),
    ]
    if vi >= 3:
        statements.append(Statement(
            "no-space-to-sphere-map",
            f"no equivariant map to S^n with a free involution for n < {vi - 1}"))
    return IndexReport(s.case_id, co, vi, co, tuple(statements))


def equivariant_map_report(scenarios) -> list[IndexReport]:
    return [index_report(s) for s in scenarios]


def co_index_set(scenarios) -> set[int]:
    return {co_index(s) for s in scenarios}


def volovikov_set(scenarios) -> set[int]:
    return {volovikov_index(s) for s in scenarios}
