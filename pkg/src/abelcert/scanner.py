"""Exhaustive search for Abelian powers ``x1 y x2`` (``x1 ~ x2``, ``y`` nonempty)."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

from . import _kernel
from .rational import format_fraction, parse_fraction
from .words import Word, prefix_parikh

log = logging.getLogger(__name__)

ORACLE_MAX_LENGTH = 4096


@dataclass(frozen=True)
class AbelianWitness:
    """Blocks ``host[start:start+m]`` and ``host[start+p:start+p+m]`` are anagrams."""

    start: int
    m: int
    p: int
    exponent: Fraction = None

    def __post_init__(self):
        if self.exponent is None:
            object.__setattr__(self, "exponent", Fraction(self.p + self.m, self.p))

    @property
    def end(self) -> int:
        return self.start + self.p + self.m

    def blocks(self, host: Word) -> tuple[Word, Word, Word]:
        """``(x1, y, x2)``."""
        s, m, p = self.start, self.m, self.p
        return host[s:s + m], host[s + m:s + p], host[s + p:s + p + m]

    def to_dict(self) -> dict:
        return {"start": self.start, "m": self.m, "p": self.p,
                "exponent": format_fraction(self.exponent)}

    @classmethod
    def from_dict(cls, d: dict) -> AbelianWitness:
        return cls(int(d["start"]), int(d["m"]), int(d["p"]), parse_fraction(d["exponent"]))


@dataclass(frozen=True)
class ScanConfig:
    cap: int = 1000
    threshold: Optional[Fraction] = None
    period_limit: Optional[int] = None
    parallelism: int = 1

    def __post_init__(self):
        if self.cap < 1:
            raise ValueError(f"cap must be >= 1, got {self.cap}")
        if self.threshold is not None:
            t = parse_fraction(self.threshold)
            object.__setattr__(self, "threshold", t)
            if not 1 < t < 2:
                raise ValueError(f"threshold must lie in (1, 2), got {t}")
        if self.period_limit is not None and self.period_limit < 2:
            raise ValueError("period_limit must be >= 2")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")


def _better(a: AbelianWitness, b: Optional[AbelianWitness]) -> bool:
    """Strictly preferred under (exponent desc, p asc, start asc)."""
    if b is None:
        return True
    if a.exponent != b.exponent:
        return a.exponent > b.exponent
    return (a.p, a.start) < (b.p, b.start)


def _max_period(L: int, cfg: ScanConfig) -> int:
    top = L - 1
    if cfg.period_limit is not None:
        top = min(top, cfg.period_limit)
    return top


class _Worker:
    """Per-thread scratch space for the kernel; grows on demand."""

    def __init__(self, host: Word, max_p: int):
        self.letters = np.ascontiguousarray(host.letters)
        self.n = host.n
        L = len(host)
        self.nwords = _kernel.field_layout(self.n, max_p)[2]
        self.nxt = np.empty(max(L, 1), dtype=np.int64)
        self.out_start = np.empty(1024, dtype=np.int64)
        self.out_m = np.empty(1024, dtype=np.int64)
        self._alloc(1 << 12)

    def _alloc(self, cap: int) -> None:
        self.tkeys = np.zeros((cap, self.nwords), dtype=np.uint64)
        self.thead = np.full(cap, -1, dtype=np.int64)
        self.tlast = np.empty(cap, dtype=np.int64)
        self.used = np.empty(cap, dtype=np.int64)

    def run(self, p: int, lo_m: int, hi_m: int, collect_lo: int):
        word_of, inc = _kernel.make_increments(self.n, p)
        while True:
            status, best_m, best_start, count = _kernel.period_pass(
                self.letters, p, lo_m, hi_m, collect_lo, word_of, inc, self.nwords,
                self.tkeys, self.thead, self.tlast, self.used, self.nxt,
                self.out_start, self.out_m)
            if status == _kernel.TABLE_FULL:
                self._alloc(2 * self.thead.shape[0])
                continue
            if count > self.out_start.shape[0]:
                size = 1 << (count - 1).bit_length()
                self.out_start = np.empty(size, dtype=np.int64)
                self.out_m = np.empty(size, dtype=np.int64)
                continue
            return best_m, best_start, count


@dataclass
class ScanResult:
    best: Optional[AbelianWitness]
    violations: Optional[list[AbelianWitness]]
    periods_scanned: int


def _periods_for(worker_index: int, workers: int, top: int) -> range:
    return range(2 + worker_index, top + 1, workers)


def _scan_periods(host: Word, cfg: ScanConfig, periods: range,
                  want_max: bool, want_violations: bool) -> ScanResult:
    top = periods[-1] if len(periods) else 2
    worker = _Worker(host, top)
    best: Optional[AbelianWitness] = None
    found: list[AbelianWitness] = []
    scanned = 0
    c = cfg.threshold
    for p in periods:
        hi_m = min(cfg.cap, p - 1)
        need_max = want_max and (best is None or Fraction(hi_m, p) > best.exponent - 1)
        collect_lo = hi_m + 1
        if want_violations:
            collect_lo = min(collect_lo, math.floor((c - 1) * p) + 1)
        if not need_max and collect_lo > hi_m:
            if p > cfg.cap:
                # beyond the cap both conditions only get harder to meet
                break
            continue
        scanned += 1
        m, start, count = worker.run(p, 1, hi_m, collect_lo)
        if m:
            cand = AbelianWitness(int(start), int(m), p)
            if _better(cand, best):
                best = cand
        for s0, m0 in zip(worker.out_start[:count].tolist(), worker.out_m[:count].tolist()):
            found.append(AbelianWitness(s0, m0, p))
    return ScanResult(best, found, scanned)


def scan(host: Word, cfg: ScanConfig = ScanConfig(), *, want_max: bool = True,
         want_violations: Optional[bool] = None) -> ScanResult:
    """Run the maximal-exponent search and, when ``cfg.threshold`` is set,
    collect every violation in the same pass over each period.

    Periods are dealt round-robin to ``cfg.parallelism`` threads.  Ties go
    to the smallest period, then the smallest start, so the merged result
    does not depend on the worker count.
    """
    if want_violations is None:
        want_violations = cfg.threshold is not None
    if want_violations and cfg.threshold is None:
        raise ValueError("collecting violations needs cfg.threshold")
    top = _max_period(len(host), cfg)
    if len(host) < 3 or top < 2:
        return ScanResult(None, [] if want_violations else None, 0)

    workers = cfg.parallelism
    args = (want_max, want_violations)
    if workers == 1:
        parts = [_scan_periods(host, cfg, _periods_for(0, 1, top), *args)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_scan_periods, host, cfg, _periods_for(i, workers, top), *args)
                       for i in range(workers)]
            parts = [f.result() for f in futures]

    best = None
    for part in parts:
        if part.best is not None and _better(part.best, best):
            best = part.best
    violations = None
    if want_violations:
        violations = sorted((w for part in parts for w in part.violations),
                            key=lambda w: (w.p, w.start, w.m))
    log.debug("scanned %d periods of a length-%d word", sum(x.periods_scanned for x in parts), len(host))
    return ScanResult(best if want_max else None, violations,
                      sum(x.periods_scanned for x in parts))


def scan_max(host: Word, cfg: ScanConfig = ScanConfig()) -> Optional[AbelianWitness]:
    """Witness of maximal exponent among Abelian powers with ``m <= cap``, or None."""
    return scan(host, cfg, want_violations=False).best


def scan_violations(host: Word, cfg: ScanConfig) -> list[AbelianWitness]:
    """All witnesses with exponent strictly above ``cfg.threshold``, sorted by (p, start, m)."""
    if cfg.threshold is None:
        raise ValueError("scan_violations needs cfg.threshold")
    return scan(host, cfg, want_max=False, want_violations=True).violations


def iter_powers(host: Word, periods, min_m: int, max_m: int,
                per_period: Optional[int] = None) -> Iterator[AbelianWitness]:
    """Yield Abelian powers with ``min_m <= m <= min(max_m, p-1)`` for the given periods.

    With ``per_period`` set, at most that many witnesses are drawn from each
    period, spread evenly over its hits.
    """
    periods = list(periods)
    if not periods or len(host) < 3:
        return
    worker = _Worker(host, max(periods))
    for p in periods:
        if p < 2 or p > len(host) - 1:
            continue
        hi_m = min(max_m, p - 1)
        if min_m > hi_m:
            continue
        _, _, count = worker.run(p, max(min_m, 1), hi_m, max(min_m, 1))
        idx = np.arange(count)
        if per_period is not None and count > per_period:
            idx = np.linspace(0, count - 1, per_period).round().astype(np.int64)
        for i in idx.tolist():
            yield AbelianWitness(int(worker.out_start[i]), int(worker.out_m[i]), p)


def oracle_scan(host: Word, cfg: ScanConfig = ScanConfig(),
                max_length: int = ORACLE_MAX_LENGTH) -> Optional[AbelianWitness]:
    """Reference answer by direct enumeration of every ``(start, m, p)``."""
    L = len(host)
    if L > max_length:
        raise ValueError(f"oracle_scan limited to words of length <= {max_length}, got {L}")
    letters = host.letters.tolist()
    counts = [[0] * host.n]
    for a in letters:
        row = counts[-1][:]
        row[a] += 1
        counts.append(row)

    def block(i, m):
        return [hi - lo for hi, lo in zip(counts[i + m], counts[i])]

    best = None
    top = _max_period(L, cfg)
    for p in range(2, top + 1):
        for m in range(1, min(cfg.cap, p - 1) + 1):
            for start in range(0, L - p - m + 1):
                if block(start, m) == block(start + p, m):
                    cand = AbelianWitness(start, m, p)
                    if _better(cand, best):
                        best = cand
    return best


def oracle_violations(host: Word, cfg: ScanConfig,
                      max_length: int = ORACLE_MAX_LENGTH) -> list[AbelianWitness]:
    L = len(host)
    if L > max_length:
        raise ValueError(f"oracle limited to words of length <= {max_length}, got {L}")
    P = prefix_parikh(host)
    out = []
    for p in range(2, _max_period(L, cfg) + 1):
        for m in range(1, min(cfg.cap, p - 1) + 1):
            if Fraction(p + m, p) <= cfg.threshold:
                continue
            for start in range(0, L - p - m + 1):
                if np.array_equal(P[start + m] - P[start], P[start + p + m] - P[start + p]):
                    out.append(AbelianWitness(start, m, p))
    out.sort(key=lambda w: (w.p, w.start, w.m))
    return out


def witness_check(host: Word, w: AbelianWitness) -> bool:
    """Replay a witness: anagram blocks and an exponent equal to ``(p+m)/p``."""
    if w.start < 0 or w.m < 1 or w.p <= w.m or w.end > len(host):
        raise IndexError(f"witness {w} does not fit in a host of length {len(host)}")
    x1, _, x2 = w.blocks(host)
    same = np.array_equal(np.bincount(x1.letters, minlength=host.n),
                          np.bincount(x2.letters, minlength=host.n))
    return bool(same) and w.exponent == Fraction(w.p + w.m, w.p)
