from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abelcert.scanner import (
    AbelianWitness,
    ScanConfig,
    iter_powers,
    oracle_scan,
    oracle_violations,
    scan_max,
    scan_violations,
    witness_check,
)
from abelcert.words import Word, shift


@st.composite
def small_words(draw, max_len=40):
    n = draw(st.integers(2, 8))
    letters = draw(st.lists(st.integers(0, n - 1), max_size=max_len))
    return Word(letters, n)


def test_scan_0101():
    w = scan_max(Word("0101"), ScanConfig(cap=1000))
    assert (w.start, w.m, w.p, w.exponent) == (0, 1, 2, Fraction(3, 2))


def test_distinct_letters_have_no_power():
    assert scan_max(Word("01234567")) is None


def test_oracle_small_examples():
    assert oracle_scan(Word("0101")) == scan_max(Word("0101"))
    assert oracle_scan(Word("00")) is None
    assert scan_max(Word("00")) is None
    w = oracle_scan(Word("000"))
    assert (w.start, w.m, w.p, w.exponent) == (0, 1, 2, Fraction(3, 2))


def test_oracle_size_guard():
    with pytest.raises(ValueError):
        oracle_scan(Word([0] * 5000))


def test_violations_0101():
    got = scan_violations(Word("0101"), ScanConfig(threshold=Fraction(4, 3)))
    assert AbelianWitness(0, 1, 2) in got and AbelianWitness(1, 1, 2) in got
    assert all(w.exponent == Fraction(3, 2) for w in got)
    assert scan_violations(Word("0101"), ScanConfig(threshold=Fraction(3, 2))) == []


def test_violations_sorted_and_match_oracle():
    rng = np.random.default_rng(5)
    for _ in range(60):
        n = int(rng.integers(2, 5))
        w = Word(rng.integers(0, n, int(rng.integers(3, 30))), n)
        cfg = ScanConfig(cap=int(rng.integers(1, 12)), threshold=Fraction(int(rng.integers(101, 199)), 100))
        got = scan_violations(w, cfg)
        assert got == oracle_violations(w, cfg)
        assert got == sorted(got, key=lambda x: (x.p, x.start, x.m))


def test_witness_check():
    host = Word("0101")
    assert witness_check(host, AbelianWitness(0, 1, 2, Fraction(3, 2)))
    assert not witness_check(host, AbelianWitness(0, 1, 2, Fraction(2, 1)))
    with pytest.raises(IndexError):
        witness_check(host, AbelianWitness(2, 1, 2))


def test_config_validation():
    with pytest.raises(ValueError):
        ScanConfig(cap=0)
    with pytest.raises(ValueError):
        ScanConfig(threshold=Fraction(2))
    with pytest.raises(TypeError):
        ScanConfig(threshold=1.713)
    assert ScanConfig(threshold="1.713").threshold == Fraction(1713, 1000)


@settings(max_examples=300, deadline=None)
@given(small_words(), st.integers(1, 50), st.one_of(st.none(), st.integers(2, 60)))
def test_matches_oracle(w, cap, period_limit):
    cfg = ScanConfig(cap=cap, period_limit=period_limit)
    assert scan_max(w, cfg) == oracle_scan(w, cfg)


@settings(max_examples=100, deadline=None)
@given(small_words(), st.integers(1, 7))
def test_shift_invariance(w, i):
    assert scan_max(shift(w, i)) == scan_max(w)


@settings(max_examples=100, deadline=None)
@given(small_words(), st.integers(1, 20), st.integers(0, 20), st.integers(2, 40))
def test_monotone_in_cap_and_period_limit(w, cap, extra, plimit):
    def exp(cfg):
        r = scan_max(w, cfg)
        return r.exponent if r else Fraction(1)
    assert exp(ScanConfig(cap=cap + extra)) >= exp(ScanConfig(cap=cap))
    assert exp(ScanConfig(cap=cap, period_limit=plimit + extra)) >= exp(ScanConfig(cap=cap, period_limit=plimit))


@settings(max_examples=50, deadline=None)
@given(small_words(max_len=60), st.integers(1, 3))
def test_every_witness_replays(w, workers):
    best = scan_max(w, ScanConfig(parallelism=workers))
    if best is not None:
        assert witness_check(w, best)
    for v in scan_violations(w, ScanConfig(threshold=Fraction(5, 4), parallelism=workers)):
        assert witness_check(w, v)


def test_planted_pairs_are_found():
    rng = np.random.default_rng(11)
    for trial in range(200):
        n = 8
        m = int(rng.integers(2, 40))
        gap = int(rng.integers(1, 40))
        x1 = rng.integers(0, n, m)
        x2 = rng.permutation(x1)
        y = rng.integers(0, n, gap)
        pre = rng.integers(0, n, int(rng.integers(0, 50)))
        post = rng.integers(0, n, int(rng.integers(0, 50)))
        host = Word(np.concatenate([pre, x1, y, x2, post]), n)
        p = m + gap
        c = Fraction(p + m, p) - Fraction(1, 10 * p)
        planted = AbelianWitness(len(pre), m, p)
        found = scan_violations(host, ScanConfig(cap=m, threshold=c))
        assert planted in found, trial
        best = scan_max(host, ScanConfig(cap=m))
        assert best.exponent >= planted.exponent


def test_iter_powers_respects_bounds(f4):
    got = list(iter_powers(f4, range(30, 60), 25, 40, per_period=3))
    assert got
    for w in got:
        assert 25 <= w.m <= min(40, w.p - 1)
        assert witness_check(f4, w)


def test_large_period_fields():
    # periods >= 2**16 switch to 32-bit count fields
    rng = np.random.default_rng(0)
    x = rng.integers(0, 8, 50)
    y = rng.integers(0, 8, 70000)
    host = Word(np.concatenate([x, y, rng.permutation(x)]), 8)
    assert list(iter_powers(host, [70050], 50, 60)) == [AbelianWitness(0, 50, 70050)]
