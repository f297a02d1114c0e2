from .demo import GapReport, four_user_gap_demo
from .entries import (CatalogueEntry, CatalogueReport, CatalogueVertex, Failure, SizeError,
                      catalogue_entries, catalogue_entry, feasible_structures_of_size, verify_catalogue)
from .instances import NAMED_GRAPHS
from .search import SearchResult, SearchSpaceError, scalar_search

__all__ = [
    "CatalogueEntry", "CatalogueReport", "CatalogueVertex", "Failure", "GapReport", "NAMED_GRAPHS",
    "SearchResult", "SearchSpaceError", "SizeError", "catalogue_entries", "catalogue_entry",
    "feasible_structures_of_size", "four_user_gap_demo", "scalar_search", "verify_catalogue",
]
