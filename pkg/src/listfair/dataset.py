"""Name-frequency datasets: ingestion, validation, demographics.

A dataset is a registry of (first name, gender, count) records, e.g. all
first names given in one country over some period. The canonical
interchange format is a UTF-8 CSV with the header ``name,gender,count``
and LF line endings; gender is F or M (case-insensitive on input,
upper-case on output). A second loader ingests registries that ship one
headerless ``name,sex,count`` file per birth year (files named
``yob<YEAR>.txt``, CRLF or LF) and sums counts across years.

Names are stored verbatim: no trimming, case folding or accent stripping
happens here. Normalization is an ordering concern, not an ingestion one.
"""

from __future__ import annotations

import csv
import enum
import unicodedata
from dataclasses import dataclass
from pathlib import Path

from listfair.errors import DatasetFormatError, DuplicateRecordError, MissingYearError

CANONICAL_HEADER = ["name", "gender", "count"]


class Gender(str, enum.Enum):
    FEMALE = "F"
    MALE = "M"

    @classmethod
    def parse(cls, letter: str) -> "Gender":
        try:
            return cls(letter.upper())
        except ValueError:
            raise ValueError(f"gender must be F or M, got {letter!r}") from None


@dataclass(frozen=True)
class NameRecord:
    """One (name, gender) entry and how many individuals carry it."""

    name: str
    gender: Gender
    count: int


@dataclass(frozen=True)
class Demographics:
    """Gender shares of a whole dataset."""

    perc_f: float
    perc_m: float


@dataclass(frozen=True)
class NameDataset:
    """Validated, immutable name-frequency dataset.

    ``total_count``, ``female_count`` and ``male_count`` are derived from
    the records at construction time; build instances through
    :meth:`from_records` so they can never drift.
    """

    id: str
    records: tuple[NameRecord, ...]
    total_count: int
    female_count: int
    male_count: int

    @classmethod
    def from_records(cls, dataset_id: str, records) -> "NameDataset":
        records = tuple(records)
        if not records:
            raise ValueError("dataset has no records")
        female = sum(r.count for r in records if r.gender is Gender.FEMALE)
        male = sum(r.count for r in records if r.gender is Gender.MALE)
        return cls(dataset_id, records, female + male, female, male)


def demographics(ds: NameDataset) -> Demographics:
    """Female and male shares of the dataset, by individual count."""
    return Demographics(
        perc_f=ds.female_count / ds.total_count,
        perc_m=ds.male_count / ds.total_count,
    )


def _validate_name(name: str, path, line: int) -> None:
    if not name:
        raise DatasetFormatError("name must be non-empty", path=path, line=line)
    for ch in name:
        if unicodedata.category(ch) == "Cc":
            raise DatasetFormatError(
                f"name {name!r} contains a control character", path=path, line=line
            )


def _parse_count(text: str, path, line: int) -> int:
    digits = text.strip()
    if not digits.isdigit():
        raise DatasetFormatError(
            f"count must be a positive integer, got {text!r}", path=path, line=line
        )
    count = int(digits)
    if count < 1:
        raise DatasetFormatError(
            f"count must be >= 1, got {count}", path=path, line=line
        )
    return count


def _parse_gender(text: str, path, line: int) -> Gender:
    try:
        return Gender.parse(text)
    except ValueError as exc:
        raise DatasetFormatError(str(exc), path=path, line=line) from None


def load_canonical(path, dataset_id: str | None = None) -> NameDataset:
    """Load a canonical ``name,gender,count`` CSV.

    Rejects a missing or malformed header, rows with the wrong field
    count, empty names, names containing control characters, non-positive
    or non-integer counts, and duplicate (name, gender) pairs. Every
    error names the file and line it came from.
    """
    path = Path(path)
    records: list[NameRecord] = []
    seen: set[tuple[str, Gender]] = set()
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CANONICAL_HEADER:
            raise DatasetFormatError(
                f"expected header {','.join(CANONICAL_HEADER)!r}, got {header}",
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
            name, gender_text, count_text = row
            _validate_name(name, path, line)
            gender = _parse_gender(gender_text, path, line)
            count = _parse_count(count_text, path, line)
            key = (name, gender)
            if key in seen:
                raise DuplicateRecordError(
                    f"duplicate record for name {name!r} gender {gender.value}",
                    path=path,
                    line=line,
                )
            seen.add(key)
            records.append(NameRecord(name, gender, count))
    if not records:
        raise DatasetFormatError("dataset has no records", path=path)
    return NameDataset.from_records(dataset_id or path.stem, records)


def write_canonical(ds: NameDataset, path) -> None:
    """Write a dataset back to the canonical CSV format (UTF-8, LF).

    Names are quoted only when they need it, so load -> write -> load
    round-trips to an identical record set.
    """
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        dump_canonical(ds, fh)


def dump_canonical(ds: NameDataset, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CANONICAL_HEADER)
    for record in ds.records:
        writer.writerow([record.name, record.gender.value, record.count])


def load_ssa_yearfiles(directory, years: tuple[int, int], dataset_id: str | None = None) -> NameDataset:
    """Load and merge per-year ``yob<YEAR>.txt`` files.

    ``years`` is an inclusive (first, last) interval; all files in the
    interval must exist, and missing ones are reported together. Counts
    for identical (name, gender) pairs are summed across years, and the
    resulting records are sorted by (name, gender) so the outcome does not
    depend on any processing order.
    """
    directory = Path(directory)
    first, last = years
    if first > last:
        raise ValueError(f"year range {first}:{last} is empty")
    span = range(first, last + 1)
    missing = [y for y in span if not (directory / f"yob{y}.txt").is_file()]
    if missing:
        raise MissingYearError(missing)
    totals: dict[tuple[str, Gender], int] = {}
    for year in span:
        year_path = directory / f"yob{year}.txt"
        with year_path.open(encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            for row in reader:
                if not row:
                    continue
                line = reader.line_num
                if len(row) != 3:
                    raise DatasetFormatError(
                        f"expected 3 fields, got {len(row)}", path=year_path, line=line
                    )
                name, sex_text, count_text = row
                _validate_name(name, year_path, line)
                gender = _parse_gender(sex_text, year_path, line)
                count = _parse_count(count_text, year_path, line)
                key = (name, gender)
                totals[key] = totals.get(key, 0) + count
    records = [
        NameRecord(name, gender, count)
        for (name, gender), count in sorted(
            totals.items(), key=lambda item: (item[0][0], item[0][1].value)
        )
    ]
    if not records:
        raise DatasetFormatError("year files contain no records", path=directory)
    return NameDataset.from_records(dataset_id or f"ssa_{first}_{last}", records)
