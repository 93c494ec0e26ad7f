"""Pulling an Abelian power of ``f(v)`` back to one of ``v``.

Both blocks of a power ``X1 Y X2`` in an aligned host parse as
``X_i = s_i f(x_i) p_i``.  The preimages ``x_1``, ``x_2`` are generally not
anagrams, but extending each by at most one neighbouring preimage letter
(``b_i`` on the left, ``a_i`` on the right) makes them so.  That extension
step is :func:`hat_select`; :func:`descend` turns it into a power one level
down and checks the two quantitative guarantees of the step.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import calculus
from .morphism import ParsedFactor, UniformCyclicMorphism, apply, fixed_point_prefix, parse_factor
from .rational import parse_fraction
from .scanner import AbelianWitness, witness_check
from .words import Word, is_anagram, parikh


class LemmaPreconditionError(ValueError):
    pass


class LemmaInconsistency(AssertionError):
    """The case analysis or a guaranteed inequality failed on real data.

    For factors of the genuine fixed point this cannot happen; if it does,
    the input is a falsification candidate, not a flaky test.
    """


CASES = ("equal", "at-least-2", "1a", "1b", "2a", "2b")


@dataclass(frozen=True)
class Extension:
    """Which neighbour letters a hat word takes: ``b`` on the left, ``a`` on the right."""

    left: bool = False
    right: bool = False


@dataclass(frozen=True)
class HatSelection:
    hat1: Word
    hat2: Word
    case: str
    ext1: Extension
    ext2: Extension
    delta: int
    # anagram status of a1 x1 b1 ~ a2 x2 b2 and b1 x1 a1 ~ b2 x2 a2 in the
    # at-least-2 case; both orderings are recorded, they share a multiset
    orderings: Optional[tuple[bool, bool]] = None


def _marker(letter: Optional[int], n: int) -> Word:
    return Word(() if letter is None else (letter,), n)


def hat_word(pf: ParsedFactor, ext: Extension) -> Word:
    n = pf.morphism.n
    w = pf.x
    if ext.left:
        w = _marker(pf.b, n) + w
    if ext.right:
        w = w + _marker(pf.a, n)
    return w


def hat_index(pf: ParsedFactor, ext: Extension) -> int:
    """Start of the hat word inside the preimage host."""
    return pf.x_index - (1 if ext.left and pf.b is not None else 0)


def count_difference(pf1: ParsedFactor, pf2: ParsedFactor) -> list[int]:
    return list((parikh(pf1.x) - parikh(pf2.x)).counts)


def delta(pf1: ParsedFactor, pf2: ParsedFactor) -> int:
    return len(pf1.x) - len(pf2.x)


def lemma1_failures(pf1: ParsedFactor, pf2: ParsedFactor) -> list[tuple[int, int]]:
    """Letters ``k`` where ``x_i`` has surplus ``k`` but neither marker of the other
    factor is ``k``.  Returned as ``(i, k)`` with ``i`` the factor holding the surplus."""
    bad = []
    for k, d in enumerate(count_difference(pf1, pf2)):
        if d >= 1 and k not in (pf2.a, pf2.b):
            bad.append((1, k))
        if d <= -1 and k not in (pf1.a, pf1.b):
            bad.append((2, k))
    return bad


def _single(pf: ParsedFactor, k: int, case: str) -> Extension:
    # prefer the a-side when both markers qualify
    if pf.a == k:
        return Extension(right=True)
    if pf.b == k:
        return Extension(left=True)
    raise LemmaInconsistency(f"case {case}: neither marker of the factor at {pf.index} is {k}")


def _pair(pf: ParsedFactor, ks: set[int], case: str) -> Extension:
    if {pf.a, pf.b} != ks:
        raise LemmaInconsistency(f"case {case}: markers {{{pf.a}, {pf.b}}} of the factor at "
                                 f"{pf.index} are not {sorted(ks)}")
    return Extension(left=True, right=True)


def _select_nonnegative(big: ParsedFactor, small: ParsedFactor, d: list[int], dlt: int):
    """Case analysis when ``|x_big| >= |x_small|``; returns ``(ext_big, ext_small, case)``."""
    surplus = [k for k, v in enumerate(d) if v == 1]
    deficit = [k for k, v in enumerate(d) if v == -1]
    if dlt == 1:
        if len(surplus) == 1 and not deficit:
            return Extension(), _single(small, surplus[0], "1a"), "1a"
        if len(surplus) == 2 and len(deficit) == 1:
            return _single(big, deficit[0], "1b"), _pair(small, set(surplus), "1b"), "1b"
    elif dlt == 0:
        if len(surplus) == 1 and len(deficit) == 1:
            return _single(big, deficit[0], "2a"), _single(small, surplus[0], "2a"), "2a"
        if len(surplus) == 2 and len(deficit) == 2:
            return _pair(big, set(deficit), "2b"), _pair(small, set(surplus), "2b"), "2b"
    raise LemmaInconsistency(f"no case applies: delta={dlt}, surplus={surplus}, deficit={deficit}")


def hat_select(pf1: ParsedFactor, pf2: ParsedFactor) -> HatSelection:
    """Extend ``x1`` and ``x2`` by marker letters until they are anagrams."""
    if pf1.morphism != pf2.morphism:
        raise LemmaPreconditionError("factors parsed with different morphisms")
    ell = pf1.morphism.length
    if min(pf1.length, pf2.length) <= calculus.slack(ell):
        raise LemmaPreconditionError(f"factors must be longer than {calculus.slack(ell)} letters")
    if not is_anagram(pf1.factor, pf2.factor):
        raise LemmaPreconditionError("the two factors are not anagrams")

    d = count_difference(pf1, pf2)
    dlt = delta(pf1, pf2)
    if abs(dlt) > 1:
        raise LemmaInconsistency(f"|delta| = {abs(dlt)} > 1")
    orderings = None
    if not any(d):
        ext1, ext2, case = Extension(), Extension(), "equal"
    elif any(abs(v) >= 2 for v in d):
        ext1 = ext2 = Extension(left=True, right=True)
        case = "at-least-2"
        n = pf1.morphism.n
        a1, b1 = _marker(pf1.a, n), _marker(pf1.b, n)
        a2, b2 = _marker(pf2.a, n), _marker(pf2.b, n)
        orderings = (is_anagram(a1 + pf1.x + b1, a2 + pf2.x + b2),
                     is_anagram(b1 + pf1.x + a1, b2 + pf2.x + a2))
    elif dlt >= 0:
        ext1, ext2, case = _select_nonnegative(pf1, pf2, d, dlt)
    else:
        ext2, ext1, case = _select_nonnegative(pf2, pf1, [-v for v in d], -dlt)

    hat1, hat2 = hat_word(pf1, ext1), hat_word(pf2, ext2)
    if not is_anagram(hat1, hat2):
        raise LemmaInconsistency(f"case {case} produced hats that are not anagrams")
    return HatSelection(hat1, hat2, case, ext1, ext2, dlt, orderings)


@dataclass(frozen=True)
class DescentResult:
    parent: AbelianWitness
    child: AbelianWitness
    selection: HatSelection
    n: Fraction
    hat_y_length: int
    parent_period: int
    parent_exponent: Fraction
    child_exponent: Fraction
    shrink_slack: Fraction
    exponent_slack: Fraction

    def summary(self) -> dict:
        from .rational import format_fraction as ff
        return {
            "parent": self.parent.to_dict(),
            "child": self.child.to_dict(),
            "case": self.selection.case,
            "parent_period": self.parent_period,
            "hat_x1_y_length": self.hat_y_length,
            "shrink_slack": ff(self.shrink_slack),
            "exponent_slack": ff(self.exponent_slack),
        }


def _check_alignment(m: UniformCyclicMorphism, parent: Word, child: Word, lo: int, hi: int) -> None:
    ell = m.length
    b0, b1 = lo // ell, -(-hi // ell)
    if b1 > len(child) or apply(m, child[b0:b1]) != parent[b0 * ell:b1 * ell]:
        raise LemmaPreconditionError("parent host is not the image of the child host around the witness")


def descend(m: UniformCyclicMorphism, parent_host: Word, child_host: Word,
            w: AbelianWitness, n=Fraction(999, 24)) -> DescentResult:
    n = parse_fraction(n)
    if n <= 1:
        raise LemmaPreconditionError("n must exceed 1")
    ell = m.length
    if not witness_check(parent_host, w):
        raise LemmaPreconditionError(f"{w} is not a valid witness on the parent host")
    if w.m < calculus.slack(ell) * n:
        raise LemmaPreconditionError(f"|X1| = {w.m} is below {calculus.slack(ell)}n = "
                                     f"{calculus.slack(ell) * n}")
    _check_alignment(m, parent_host, child_host, w.start, w.end)

    pf1 = parse_factor(m, parent_host, w.start, w.m)
    pf2 = parse_factor(m, parent_host, w.start + w.p, w.m)
    sel = hat_select(pf1, pf2)

    c_start = hat_index(pf1, sel.ext1)
    c_m = len(sel.hat1)
    c_p = hat_index(pf2, sel.ext2) - c_start
    if c_p <= c_m:
        raise LemmaInconsistency(f"hats overlap or abut (period {c_p}, length {c_m})")
    child = AbelianWitness(c_start, c_m, c_p)
    if (child_host[c_start:c_start + c_m] != sel.hat1
            or child_host[c_start + c_p:c_start + c_p + c_m] != sel.hat2
            or not witness_check(child_host, child)):
        raise LemmaInconsistency(f"located child {child} does not match the selected hats")

    shrink = w.p - calculus.descent_ratio(n, ell) * c_p
    exp_slack = child.exponent + Fraction(calculus.loss_numerator(ell), w.p) - w.exponent
    if shrink < 0:
        raise LemmaInconsistency(f"|X1 Y| = {w.p} < {calculus.descent_ratio(n, ell)} * {c_p}")
    if exp_slack < 0:
        raise LemmaInconsistency(f"exponent {w.exponent} exceeds {child.exponent} + "
                                 f"{calculus.loss_numerator(ell)}/{w.p}")
    return DescentResult(w, child, sel, n, c_p, w.p, w.exponent, child.exponent, shrink, exp_slack)


def fixed_point_levels(m: UniformCyclicMorphism, t: int) -> list[Word]:
    """``[f^t(0), f^(t-1)(0), ..., f^0(0)]``, each level built once."""
    levels = [fixed_point_prefix(m, 0)]
    for _ in range(t):
        levels.append(apply(m, levels[-1]))
    return levels[::-1]


def descent_chain(m: UniformCyclicMorphism, hosts: Sequence[Word], w: AbelianWitness,
                  n=Fraction(999, 24)) -> list[DescentResult]:
    """Descend level by level while ``|X1| > 24n``; ``hosts[0]`` carries ``w``."""
    n = parse_fraction(n)
    if n <= 1:
        raise LemmaPreconditionError("n must exceed 1")
    limit = calculus.slack(m.length) * n
    chain: list[DescentResult] = []
    current = w
    level = 0
    while current.m > limit:
        if level + 1 >= len(hosts):
            raise LemmaPreconditionError(f"ran out of host levels with |X1| = {current.m} > {limit}")
        step = descend(m, hosts[level], hosts[level + 1], current, n)
        chain.append(step)
        current = step.child
        level += 1
    return chain


def harvest_pairs(host: Word, min_m: int, max_m: int, periods, per_period: Optional[int] = None):
    """Anagram block pairs taken from scanner witnesses (random sampling would
    almost never hit one)."""
    from .scanner import iter_powers
    return list(iter_powers(host, periods, min_m, max_m, per_period))


@dataclass
class PropertyReport:
    pairs: int = 0
    delta_failures: int = 0
    lemma1_checked: int = 0
    lemma1_failures: int = 0
    hat_failures: int = 0
    cases: dict = None
    failures: list = None

    def __post_init__(self):
        self.cases = self.cases or {c: 0 for c in CASES}
        self.failures = self.failures if self.failures is not None else []

    @property
    def ok(self) -> bool:
        return self.pairs > 0 and not (self.delta_failures or self.lemma1_failures or self.hat_failures)


def check_pair(m: UniformCyclicMorphism, host: Word, w: AbelianWitness, report: PropertyReport) -> None:
    pf1 = parse_factor(m, host, w.start, w.m)
    pf2 = parse_factor(m, host, w.start + w.p, w.m)
    report.pairs += 1
    if abs(delta(pf1, pf2)) > 1:
        report.delta_failures += 1
        report.failures.append(("delta", w))
    if any(count_difference(pf1, pf2)):
        report.lemma1_checked += 1
    if lemma1_failures(pf1, pf2):
        report.lemma1_failures += 1
        report.failures.append(("lemma1", w))
    try:
        sel = hat_select(pf1, pf2)
    except LemmaInconsistency as exc:
        report.hat_failures += 1
        report.failures.append(("hats", w, str(exc)))
    else:
        report.cases[sel.case] += 1


def property_fuzz(m: UniformCyclicMorphism, t: int = 4, samples: int = 1000,
                  seed: int = 0, max_m: int = 1000) -> PropertyReport:
    """Check the preimage-count properties on ``samples`` anagram pairs of ``f^t(0)``
    whose blocks are longer than ``2(ell - 1)``."""
    host = fixed_point_prefix(m, t)
    rng = np.random.default_rng(seed)
    min_m = calculus.slack(m.length) + 1
    top = min(len(host) - 1, 4 * max_m)
    periods = np.arange(min_m + 1, top + 1)
    report = PropertyReport()
    per_period = max(1, -(-samples // 200))
    for p in rng.permutation(periods).tolist():
        for w in harvest_pairs(host, min_m, max_m, [p], per_period):
            check_pair(m, host, w, report)
            if report.pairs >= samples:
                return report
    return report
