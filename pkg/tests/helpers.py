"""Shared test utilities and independent oracles.

The oracles here recompute curve and rND values from first principles
(plain Python loops, exhaustive enumeration) so the library's vectorized
implementations are checked against something written separately.
"""

from __future__ import annotations

import itertools
import math

from listfair.dataset import Gender, NameDataset, NameRecord
from listfair.sampling import PROPORTIONAL, Individual, Sample, SampleProvenance


def individuals_from_pattern(pattern: str, names=None) -> tuple[Individual, ...]:
    """Build individuals from a gender string like ``"FMMF"``.

    Names default to distinct placeholders so sorting tests can supply
    their own when ordering matters.
    """
    out = []
    for i, ch in enumerate(pattern):
        name = names[i] if names is not None else f"P{i:04d}"
        out.append(Individual(name=name, gender=Gender.parse(ch)))
    return tuple(out)


def sample_from_pattern(pattern: str, names=None) -> Sample:
    individuals = individuals_from_pattern(pattern, names)
    provenance = SampleProvenance(
        dataset_id="test", seed=0, stream_index=0, mode=PROPORTIONAL
    )
    return Sample(
        individuals=individuals, perc_fs_requested=None, provenance=provenance
    )


def dataset_from_counts(rows, dataset_id="test") -> NameDataset:
    records = tuple(
        NameRecord(name=name, gender=Gender.parse(g), count=count)
        for name, g, count in rows
    )
    return NameDataset.from_records(dataset_id, records)


def oracle_curve(genders) -> list[float]:
    """Prefix female proportions, computed the slow obvious way."""
    values = []
    women = 0
    for k, g in enumerate(genders, start=1):
        if g == "F":
            women += 1
        values.append(women / k)
    return values


def oracle_checkpoints(n: int, step: int) -> list[int]:
    ks = list(range(step, n + 1, step))
    if n % step != 0:
        ks.append(n)
    return ks


def oracle_raw(genders, step: int = 10) -> float:
    """rND raw value from its definition, no shared code with the library."""
    n = len(genders)
    n_f = sum(1 for g in genders if g == "F")
    overall = n_f / n
    total = 0.0
    for k in oracle_checkpoints(n, step):
        women_k = sum(1 for g in genders[:k] if g == "F")
        total += (1.0 / math.log2(k)) * abs(women_k / k - overall)
    return total


def oracle_max_raw(n: int, n_f: int, step: int = 10) -> float:
    """Exhaustive maximum of raw rND over every arrangement of n_f women."""
    best = 0.0
    for positions in itertools.combinations(range(n), n_f):
        genders = ["M"] * n
        for p in positions:
            genders[p] = "F"
        best = max(best, oracle_raw(genders, step))
    return best


def genders_of(individuals) -> str:
    return "".join(i.gender.value for i in individuals)


def chi_square_statistic(observed, expected) -> float:
    return sum((o - e) ** 2 / e for o, e in zip(observed, expected))
