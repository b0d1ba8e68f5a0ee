"""Mod-2 Borel-fibration spectral sequence engine for free involutions on
spaces with the cohomology of a projective space times a sphere."""

from .algebra import (AlgebraPresentation, CapTooLow, FiberPresentation,
                      NotFiniteDimensional, PoincareSeries, parse_presentation,
                      series_product)
from .driver import (Scenario, SearchResult, UnknownCase, betti_table, classify,
                     merged_case_id, search_cases)
from .families import ConstraintViolation, IdealFamily, catalog, catalog_for_field
from .gf2 import ImNotInKer, LabeledSpace, kernel_basis, rank, subquotient
from .indices import (IndexReport, co_index, co_index_set, equivariant_map_report,
                      index_report, volovikov_index, volovikov_set)
from .local import (InducedAction, SkeletonInapplicable, action_candidates,
                    local_e2_column, nontrivial_action_obstruction)
from .spectral import (Differential, DSquareNonzero, NotADerivation, Page,
                       build_e2, extend_leibniz, is_terminal, tot_series,
                       turn_page)
from .verify import VerifyRecord, sweep_field, verify_family_against_scenario

__version__ = "0.1.0"
