from fractions import Fraction

import pytest

from abelcert import calculus
from abelcert.lemmas import (
    Extension,
    LemmaInconsistency,
    LemmaPreconditionError,
    count_difference,
    delta,
    descend,
    descent_chain,
    harvest_pairs,
    hat_select,
    lemma1_failures,
    property_fuzz,
)
from abelcert.morphism import ParsedFactor, apply, parse_factor
from abelcert.scanner import AbelianWitness, iter_powers, witness_check
from abelcert.words import Word, is_anagram, shift


def synthetic(f, b, s, x, a, p):
    """Parsed factor with hand-chosen pieces; only the markers and Parikh data matter."""
    s, x, p = Word(s), Word(x), Word(p)
    return ParsedFactor(f, 13, len(s) + 13 * len(x) + len(p), b, s, x, a, p)


@pytest.fixture(scope="module")
def f4_pairs(f4):
    return harvest_pairs(f4, 25, 1000, range(26, 1200, 7), per_period=3)


def first_power(host, periods, min_m, max_m):
    for p in periods:
        for w in iter_powers(host, [p], min_m, max_m):
            return w
    raise LookupError("no power in range")


def parse_pair(f, host, w):
    return parse_factor(f, host, w.start, w.m), parse_factor(f, host, w.start + w.p, w.m)


def test_equal_case_on_grid_aligned_pair(f, f4, f5):
    w4 = first_power(f4, range(40, 200), 30, 40)
    pf1, pf2 = parse_pair(f, f5, AbelianWitness(13 * w4.start, 13 * w4.m, 13 * w4.p))
    sel = hat_select(pf1, pf2)
    assert sel.case == "equal"
    assert (sel.hat1, sel.hat2) == (pf1.x, pf2.x)


def test_hats_are_anagrams_on_real_pairs(f, f4, f4_pairs):
    assert len(f4_pairs) > 200
    for w in f4_pairs:
        pf1, pf2 = parse_pair(f, f4, w)
        sel = hat_select(pf1, pf2)
        assert is_anagram(sel.hat1, sel.hat2)
        assert len(sel.hat1) - len(pf1.x) in (0, 1, 2)
        assert len(sel.hat2) - len(pf2.x) in (0, 1, 2)
        assert abs(delta(pf1, pf2)) <= 1
        assert lemma1_failures(pf1, pf2) == []


def test_case_1a_found_in_real_data(f, f4, f4_pairs):
    for w in f4_pairs:
        pf1, pf2 = parse_pair(f, f4, w)
        d = count_difference(pf1, pf2)
        if delta(pf1, pf2) == 1 and d.count(1) == 1 and -1 not in d:
            sel = hat_select(pf1, pf2)
            k1 = d.index(1)
            assert sel.case == "1a"
            assert sel.hat1 == pf1.x
            if pf2.a == k1:
                assert sel.hat2 == pf2.x + Word([k1]) and sel.ext2 == Extension(right=True)
            else:
                assert pf2.b == k1 and sel.hat2 == Word([k1]) + pf2.x
            return
    pytest.fail("no case-1a pair among the harvested pairs")


def test_at_least_2_branch(f):
    pf1 = synthetic(f, 1, "11111", "00", 2, "22222")
    pf2 = synthetic(f, 0, "00000", "12", 0, "00000")
    sel = hat_select(pf1, pf2)
    assert sel.case == "at-least-2"
    assert sel.orderings == (True, True)
    assert str(sel.hat1) == "1002" and str(sel.hat2) == "0120"


def test_case_2b_branch(f):
    pf1 = synthetic(f, 1, "11111", "03", 2, "22222")
    pf2 = synthetic(f, 0, "00000", "12", 3, "33333")
    sel = hat_select(pf1, pf2)
    assert sel.case == "2b"
    assert is_anagram(sel.hat1, sel.hat2)


def test_case_1b_branch(f):
    pf1 = synthetic(f, 5, "22", "130", 2, "22")
    pf2 = synthetic(f, 1, "1111113", "20", 3, "3333304567")
    assert is_anagram(pf1.factor, pf2.factor)
    sel = hat_select(pf1, pf2)
    assert sel.case == "1b"
    assert sel.ext1 == Extension(right=True) and sel.ext2 == Extension(left=True, right=True)
    # the mirrored call goes through the negative-delta path
    back = hat_select(pf2, pf1)
    assert back.case == "1b" and back.hat1 == sel.hat2 and back.hat2 == sel.hat1


def test_case_2a_prefers_a_side(f):
    pf1 = synthetic(f, 1, "1", "02", 1, "1111")
    pf2 = synthetic(f, 2, "2", "01", 2, "2222")
    sel = hat_select(pf1, pf2)
    assert sel.case == "2a"
    assert sel.ext1 == Extension(right=True) and sel.ext2 == Extension(right=True)


def test_no_case_is_an_inconsistency(f):
    # surplus letter 2 is neither marker of the second factor
    pf1 = synthetic(f, None, "", "02", 1, "11111")
    pf2 = synthetic(f, 4, str(f.image(2)), "0", 4, "11111")
    assert is_anagram(pf1.factor, pf2.factor)
    with pytest.raises(LemmaInconsistency):
        hat_select(pf1, pf2)


def test_preconditions(f, f4):
    short1, short2 = parse_factor(f, f4, 0, 20), parse_factor(f, f4, 13, 20)
    with pytest.raises(LemmaPreconditionError):
        hat_select(short1, short2)
    pf1, pf2 = parse_factor(f, f4, 0, 40), parse_factor(f, f4, 100, 40)
    if not is_anagram(pf1.factor, pf2.factor):
        with pytest.raises(LemmaPreconditionError):
            hat_select(pf1, pf2)


def test_descend_max_witness(f, levels):
    f5, f4 = levels[0], levels[1]
    w = AbelianWitness(21295, 350, 491)
    res = descend(f, f5, f4, w, Fraction(2))
    assert witness_check(f4, res.child)
    n = Fraction(2)
    assert w.p >= calculus.descent_ratio(n) * res.hat_y_length
    assert w.exponent <= res.child.exponent + Fraction(72, w.p)


def test_descend_grid_aligned(f, levels):
    f5, f4 = levels[0], levels[1]
    w4 = first_power(f4, range(90, 400), 60, 80)
    res = descend(f, f5, f4, AbelianWitness(13 * w4.start, 13 * w4.m, 13 * w4.p), Fraction(2))
    assert res.child == w4
    assert res.selection.case == "equal"


def test_descend_preconditions(f, levels):
    f5, f4 = levels[0], levels[1]
    w = AbelianWitness(21295, 350, 491)
    with pytest.raises(LemmaPreconditionError):
        descend(f, f5, f4, w, Fraction(999, 24))
    with pytest.raises(LemmaPreconditionError):
        descend(f, f5, f4, AbelianWitness(0, 350, 491), Fraction(2))
    with pytest.raises(LemmaPreconditionError):
        descend(f, f5, shift(f4, 1), w, Fraction(2))
    # a shorter fixed-point prefix is still aligned when it covers the witness
    assert descend(f, f5, levels[2], w, Fraction(2)).child == descend(f, f5, f4, w, Fraction(2)).child


def test_descent_chain(f, levels):
    n = Fraction(2)
    w = first_power(levels[0], range(2 * 2197, 20 * 2197, 2197), 900, 1000)
    chain = descent_chain(f, levels, w, n)
    assert len(chain) >= 2
    assert chain[-1].child.m <= 24 * n
    assert all(step.parent.m > 24 * n for step in chain)
    for step, nxt in zip(chain, chain[1:]):
        assert nxt.parent == step.child
        assert nxt.parent.p <= (n + 1) / (13 * n) * step.parent.p


def test_descent_chain_terminal_input(f, levels):
    assert descent_chain(f, levels, AbelianWitness(21295, 350, 491), Fraction(999, 24)) == []


def test_property_fuzz_small(f):
    report = property_fuzz(f, t=3, samples=100)
    assert report.ok and report.pairs == 100
