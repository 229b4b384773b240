"""Seeded randomness, Fisher-Yates shuffling, and sample generation.

Reproducibility contract: a :class:`RandomSource` is keyed by
``(seed, stream_index)`` and always yields the same value sequence for
the same key (the pinned generator is numpy's PCG64 seeded through
``SeedSequence((seed, stream_index))``). Operations consume the stream,
so re-create the source to replay a draw. Experiment drivers give every
sample its own stream index, which makes runs independent of scheduling
and safe to parallelize.

Samples are drawn WITH replacement: each position is an independent
draw from the name-frequency distribution, the same way a registry of
millions behaves when only a thousand rows are displayed.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from listfair.dataset import Gender, NameDataset
from listfair.errors import DatasetFormatError, InfeasibleSampleError

SAMPLE_HEADER = ["position", "name", "gender"]

PROPORTIONAL = "proportional"
STRATIFIED = "stratified"


class RandomSource:
    """Deterministic random stream keyed by (seed, stream_index)."""

    def __init__(self, seed: int, stream_index: int = 0):
        if seed < 0 or seed >= 2**64:
            raise ValueError("seed must be a 64-bit non-negative integer")
        if stream_index < 0:
            raise ValueError("stream_index must be non-negative")
        self.seed = seed
        self.stream_index = stream_index
        self.generator = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence((seed, stream_index)))
        )

    def __repr__(self) -> str:
        return f"RandomSource(seed={self.seed}, stream_index={self.stream_index})"


@dataclass(frozen=True, slots=True)
class Individual:
    """One drawn person: a first name and a gender."""

    name: str
    gender: Gender


@dataclass(frozen=True)
class SampleProvenance:
    """Where a sample came from, enough to reproduce it exactly."""

    dataset_id: str
    seed: int
    stream_index: int
    mode: str


@dataclass(frozen=True)
class Sample:
    """A drawn multiset of individuals, in arrival order.

    ``perc_fs_requested`` is the stratified female share, or None when the
    draw was proportional.
    """

    individuals: tuple[Individual, ...]
    perc_fs_requested: float | None
    provenance: SampleProvenance

    @property
    def n(self) -> int:
        return len(self.individuals)


def round_half_up(x: float) -> int:
    """Round to the nearest integer, with .5 going up."""
    return math.floor(x + 0.5)


def fisher_yates(items, rng: RandomSource) -> list:
    """Return a uniformly random permutation of ``items``.

    Classic swap-down loop over an unbiased integer source, so every
    permutation is equally likely and the result is fully determined by
    the state of ``rng``.
    """
    out = list(items)
    gen = rng.generator
    for i in range(len(out) - 1, 0, -1):
        j = int(gen.integers(0, i + 1))
        out[i], out[j] = out[j], out[i]
    return out


def _weighted_draw(records, size: int, gen: np.random.Generator) -> list[Individual]:
    if size == 0:
        return []
    counts = np.array([r.count for r in records], dtype=np.float64)
    indices = gen.choice(len(records), size=size, replace=True, p=counts / counts.sum())
    return [Individual(records[i].name, records[i].gender) for i in indices]


def draw_sample(
    ds: NameDataset,
    n: int,
    rng: RandomSource,
    mode: str = PROPORTIONAL,
    perc_fs: float | None = None,
) -> Sample:
    """Draw ``n`` individuals from ``ds``.

    Proportional mode draws every position independently with probability
    proportional to record count over the whole dataset; arrival order is
    already random. Stratified mode draws exactly
    ``round_half_up(perc_fs * n)`` women from the female records and the
    rest from the male records (each side weighted by within-gender
    counts), then Fisher-Yates shuffles the combined list.
    """
    if n <= 0:
        raise ValueError("sample size n must be >= 1")
    if mode == PROPORTIONAL:
        if perc_fs is not None:
            raise ValueError("perc_fs only applies to stratified mode")
        individuals = _weighted_draw(ds.records, n, rng.generator)
        requested = None
    elif mode == STRATIFIED:
        if perc_fs is None:
            raise ValueError("stratified mode needs perc_fs")
        if not 0.0 <= perc_fs <= 1.0:
            raise ValueError(f"perc_fs must lie in [0, 1], got {perc_fs}")
        n_f = round_half_up(perc_fs * n)
        n_m = n - n_f
        females = [r for r in ds.records if r.gender is Gender.FEMALE]
        males = [r for r in ds.records if r.gender is Gender.MALE]
        if n_f > 0 and not females:
            raise InfeasibleSampleError(
                f"dataset {ds.id!r} has no female records but {n_f} women were requested"
            )
        if n_m > 0 and not males:
            raise InfeasibleSampleError(
                f"dataset {ds.id!r} has no male records but {n_m} men were requested"
            )
        gen = rng.generator
        drawn = _weighted_draw(females, n_f, gen)
        drawn.extend(_weighted_draw(males, n_m, gen))
        individuals = fisher_yates(drawn, rng)
        requested = perc_fs
    else:
        raise ValueError(f"unknown sampling mode {mode!r}")
    provenance = SampleProvenance(ds.id, rng.seed, rng.stream_index, mode)
    return Sample(tuple(individuals), requested, provenance)


def dump_sample_csv(individuals, fh) -> None:
    """Write individuals as ``position,name,gender`` rows (1-based)."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(SAMPLE_HEADER)
    for position, ind in enumerate(individuals, start=1):
        writer.writerow([position, ind.name, ind.gender.value])


def write_sample_csv(individuals, path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        dump_sample_csv(individuals, fh)


def read_sample_csv(path) -> tuple[Individual, ...]:
    """Read a ``position,name,gender`` file back into individuals.

    Positions must run 1..N in file order; any gap or reordering means
    the file was not produced by this pipeline and is rejected.
    """
    path = Path(path)
    individuals: list[Individual] = []
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != SAMPLE_HEADER:
            raise DatasetFormatError(
                f"expected header {','.join(SAMPLE_HEADER)!r}, got {header}",
                path=path,
                line=1,
            )
        for row in reader:
            if not row:
                continue
            line = reader.line_num
            if len(row) != 3:
                raise DatasetFormatError(
                    f"expected 3 fields, got {len(row)}", path=path, line=line
                )
            position_text, name, gender_text = row
            if not position_text.strip().isdigit() or int(position_text) != len(individuals) + 1:
                raise DatasetFormatError(
                    f"expected position {len(individuals) + 1}, got {position_text!r}",
                    path=path,
                    line=line,
                )
            if not name:
                raise DatasetFormatError("name must be non-empty", path=path, line=line)
            try:
                gender = Gender.parse(gender_text)
            except ValueError as exc:
                raise DatasetFormatError(str(exc), path=path, line=line) from None
            individuals.append(Individual(name, gender))
    if not individuals:
        raise DatasetFormatError("sample file has no rows", path=path)
    return tuple(individuals)
