"""Prefix-proportion curves, the rND metric, parity tests, page audits.

The central quantity is the female share of the first k positions of a
displayed list, ``Perc_f(k)``. rND (normalized discounted difference)
accumulates, at checkpoints k = step, 2*step, ..., the absolute gap
between that prefix share and the female share of the whole list,
discounting checkpoint k by 1/log2(k):

    raw = sum over checkpoints of |Perc_f(k) - Perc_f(N)| / log2(k)

The last checkpoint is N itself when N is not a multiple of the step, so
the whole list always closes the sum. ``raw / Z`` is the reported score;
0 is fairest, and with the theoretical normalizer the worst possible
arrangement of the same list scores 1.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as scipy_stats

from listfair.dataset import Demographics, Gender
from listfair.errors import SampleTooSmallError
from listfair.ordering import ALPHABETICAL

THEORETICAL = "theoretical"
FIXED = "fixed"
EMPIRICAL_BATCH = "empirical_batch"

PARITY_ALPHA = 0.05

AUDIT_HEADER = ["list_id", "size", "perc_fd", "k1", "perc_f", "flag"]
BELOW = "below"
AT_OR_ABOVE = "at_or_above"


def _individuals_of(sample):
    return getattr(sample, "individuals", sample)


def _female_mask(individuals) -> np.ndarray:
    return np.fromiter(
        (ind.gender is Gender.FEMALE for ind in individuals),
        dtype=bool,
        count=len(individuals),
    )


@dataclass(frozen=True)
class PrefixProportionCurve:
    """``values[i]`` is the female share of positions 1..i+1."""

    values: np.ndarray
    perc_f_sample: float

    @property
    def n(self) -> int:
        return len(self.values)

    def value_at(self, k: int) -> float:
        if not 1 <= k <= self.n:
            raise ValueError(f"k={k} outside 1..{self.n}")
        return float(self.values[k - 1])


def perc_f_curve(sample) -> PrefixProportionCurve:
    individuals = _individuals_of(sample)
    if len(individuals) == 0:
        raise ValueError("curve needs at least one individual")
    cumulative = np.cumsum(_female_mask(individuals))
    values = cumulative / np.arange(1, len(individuals) + 1)
    return PrefixProportionCurve(values, float(values[-1]))


def rnd_checkpoints(n: int, step: int = 10) -> list[int]:
    """Checkpoint positions: step, 2*step, ..., plus N when N is not a
    multiple of the step."""
    if step < 1:
        raise ValueError("step must be >= 1")
    if n < step:
        raise SampleTooSmallError(
            f"list of size {n} is shorter than the first checkpoint (step={step})"
        )
    ks = list(range(step, n + 1, step))
    if n % step:
        ks.append(n)
    return ks


@dataclass(frozen=True)
class RndCheckpoint:
    k: int
    discount: float
    deviation: float
    term: float


def _checkpoint_terms(mask: np.ndarray, step: int) -> tuple[RndCheckpoint, ...]:
    n = len(mask)
    cumulative = np.cumsum(mask)
    overall = cumulative[-1] / n
    checkpoints = []
    for k in rnd_checkpoints(n, step):
        deviation = abs(cumulative[k - 1] / k - overall)
        discount = 1.0 / math.log2(k)
        checkpoints.append(
            RndCheckpoint(k, discount, float(deviation), float(discount * deviation))
        )
    return tuple(checkpoints)


def rnd_raw(sample, step: int = 10) -> float:
    """Raw (unnormalized) discounted deviation sum for the given order."""
    mask = _female_mask(_individuals_of(sample))
    return float(sum(cp.term for cp in _checkpoint_terms(mask, step)))


def rnd_theoretical_normalizer(n: int, n_f: int, step: int = 10) -> float:
    """Largest raw value any arrangement of n_f women among n can reach.

    The maximum is attained by one of the two extreme arrangements (all
    women first or all women last), so only those two are evaluated. For
    the degenerate single-gender cases (n_f of 0 or n) every arrangement
    scores 0 and the normalizer is 0; callers report a normalized 0.
    """
    if not 0 <= n_f <= n:
        raise ValueError(f"n_f={n_f} outside 0..{n}")
    women_first = np.zeros(n, dtype=bool)
    women_first[:n_f] = True
    women_last = np.zeros(n, dtype=bool)
    women_last[n - n_f :] = True
    raw_first = sum(cp.term for cp in _checkpoint_terms(women_first, step))
    raw_last = sum(cp.term for cp in _checkpoint_terms(women_last, step))
    return float(max(raw_first, raw_last))


@dataclass(frozen=True)
class RndReport:
    checkpoints: tuple[RndCheckpoint, ...]
    raw: float
    normalizer_mode: str
    z: float
    normalized: float

    def to_json_dict(self) -> dict:
        return {
            "checkpoints": [
                {
                    "k": cp.k,
                    "discount": cp.discount,
                    "deviation": cp.deviation,
                    "term": cp.term,
                }
                for cp in self.checkpoints
            ],
            "raw": self.raw,
            "z": self.z,
            "mode": self.normalizer_mode,
            "normalized": self.normalized,
        }


def rnd(sample, step: int = 10, normalizer: str = THEORETICAL, z: float | None = None) -> RndReport:
    """Full rND report for one ordered list.

    ``normalizer`` selects how Z is chosen: "theoretical" computes the
    worst-arrangement bound for this list's size and composition (pass no
    z), "fixed" divides by a caller-supplied z > 0, and "empirical_batch"
    divides by the batch maximum that an experiment driver resolved and
    passes in. A Z of zero reports a normalized 0 by convention.
    """
    individuals = _individuals_of(sample)
    mask = _female_mask(individuals)
    checkpoints = _checkpoint_terms(mask, step)
    raw = float(sum(cp.term for cp in checkpoints))
    if normalizer == THEORETICAL:
        if z is not None:
            raise ValueError("z is derived for the theoretical normalizer; do not pass one")
        z = rnd_theoretical_normalizer(len(individuals), int(mask.sum()), step)
    elif normalizer == FIXED:
        if z is None or z <= 0:
            raise ValueError("fixed normalizer needs z > 0")
    elif normalizer == EMPIRICAL_BATCH:
        if z is None or z < 0:
            raise ValueError("empirical_batch normalizer needs the batch maximum z >= 0")
    else:
        raise ValueError(f"unknown normalizer {normalizer!r}")
    normalized = 0.0 if z == 0 else raw / z
    return RndReport(checkpoints, raw, normalizer, float(z), float(normalized))


@dataclass(frozen=True)
class ParityReport:
    perc_f_sample: float
    perc_f_reference: float
    p_value: float
    passes: bool

    def to_json_dict(self) -> dict:
        return {
            "perc_f_sample": self.perc_f_sample,
            "perc_f_reference": self.perc_f_reference,
            "p_value": self.p_value,
            "passes": self.passes,
        }


def statistical_parity(sample, reference: Demographics) -> ParityReport:
    """Two-sided exact binomial test of the sample's female count against
    the reference female share; passes when p >= 0.05."""
    individuals = _individuals_of(sample)
    n = len(individuals)
    if n == 0:
        raise ValueError("parity test needs at least one individual")
    females = int(_female_mask(individuals).sum())
    p_value = float(scipy_stats.binomtest(females, n, reference.perc_f).pvalue)
    return ParityReport(females / n, reference.perc_f, p_value, p_value >= PARITY_ALPHA)


@dataclass(frozen=True)
class PageAuditRow:
    """First-page female shares of one list at several page sizes, each
    flagged against the expected share ``perc_fd``."""

    list_id: str
    size: int
    perc_fd: float
    per_k1: dict[int, float]
    flags: dict[int, str]


def page_audit(ordered, k1_values, perc_fd: float, list_id: str = "list") -> PageAuditRow:
    """Audit the first page of an alphabetically ordered list.

    For each page size k1, reports the female share of positions 1..k1
    and flags it "below" when it is under ``perc_fd``.
    """
    ordering = getattr(ordered, "ordering", ALPHABETICAL)
    if ordering != ALPHABETICAL:
        raise ValueError("page_audit expects an alphabetically ordered list")
    curve = perc_f_curve(ordered)
    per_k1: dict[int, float] = {}
    flags: dict[int, str] = {}
    for k1 in sorted(set(k1_values)):
        if k1 < 1:
            raise ValueError("page size k1 must be >= 1")
        if k1 > curve.n:
            raise ValueError(f"page size k1={k1} exceeds list size {curve.n}")
        share = curve.value_at(k1)
        per_k1[k1] = share
        flags[k1] = BELOW if share < perc_fd else AT_OR_ABOVE
    return PageAuditRow(list_id, curve.n, perc_fd, per_k1, flags)


def dump_audit_rows(rows, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(AUDIT_HEADER)
    for row in rows:
        for k1 in sorted(row.per_k1):
            writer.writerow(
                [row.list_id, row.size, row.perc_fd, k1, row.per_k1[k1], row.flags[k1]]
            )


def dump_curve_csv(curve: PrefixProportionCurve, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["k", "perc_f"])
    for k, value in enumerate(curve.values, start=1):
        writer.writerow([k, float(value)])
