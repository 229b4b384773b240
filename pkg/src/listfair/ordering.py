"""Alphabetical ordering and pagination.

Collation is deliberately simple and locale-free: canonical decomposition,
combining marks stripped, upper-cased, compared by plain code point. That
captures the gross letter grouping real portals produce ("José" files
under JOSE) without locale tables; a portal with exotic collation rules
should pre-normalize its input instead.
"""

from __future__ import annotations

import csv
import math
import unicodedata
from dataclasses import dataclass
from functools import lru_cache

from listfair.sampling import Individual, SampleProvenance

PAGE_HEADER = ["page", "position", "name", "gender"]

RANDOM = "random"
ALPHABETICAL = "alphabetical"


@lru_cache(maxsize=None)
def collation_key(name: str) -> str:
    """Case- and accent-insensitive sort key for a name."""
    decomposed = unicodedata.normalize("NFD", name)
    stripped = "".join(ch for ch in decomposed if unicodedata.category(ch) != "Mn")
    return stripped.upper()


@dataclass(frozen=True)
class OrderedSample:
    """Individuals in a specific display order (random or alphabetical)."""

    individuals: tuple[Individual, ...]
    ordering: str
    source: SampleProvenance | None = None

    @property
    def n(self) -> int:
        return len(self.individuals)


def _provenance_of(obj) -> SampleProvenance | None:
    return getattr(obj, "provenance", None) or getattr(obj, "source", None)


def as_random_order(sample) -> OrderedSample:
    """Wrap a sample in its arrival order, which is already random."""
    return OrderedSample(tuple(sample.individuals), RANDOM, _provenance_of(sample))


def sort_alphabetical(sample) -> OrderedSample:
    """Sort by collation key; the sort is stable, so equal keys keep
    their arrival order. Accepts a sample, an ordered sample, or any
    sequence of individuals."""
    individuals = getattr(sample, "individuals", sample)
    ordered = tuple(sorted(individuals, key=lambda ind: collation_key(ind.name)))
    return OrderedSample(ordered, ALPHABETICAL, _provenance_of(sample))


@dataclass(frozen=True)
class Page:
    """One screen of a paginated list; ``index`` is 1-based."""

    index: int
    individuals: tuple[Individual, ...]
    k1: int


def paginate(ordered: OrderedSample, k1: int) -> list[Page]:
    """Split into ceil(N / k1) pages of ``k1`` rows (last page may be short)."""
    if k1 < 1:
        raise ValueError("page size k1 must be >= 1")
    individuals = ordered.individuals
    return [
        Page(p + 1, individuals[p * k1 : (p + 1) * k1], k1)
        for p in range(math.ceil(len(individuals) / k1))
    ]


def dump_pages_csv(pages, fh) -> None:
    """Write pages as ``page,position,name,gender`` rows; positions are
    global (1-based over the whole list), so concatenating pages
    reproduces it."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(PAGE_HEADER)
    position = 0
    for page in pages:
        for ind in page.individuals:
            position += 1
            writer.writerow([page.index, position, ind.name, ind.gender.value])
