"""Compiled inner loop of the Abelian power scan.

For a fixed period ``p`` the window signature ``D(j)`` is the Parikh vector
of ``w[j:j+p]``.  Blocks ``w[j:j+m]`` and ``w[j+p:j+p+m]`` are anagrams iff
``D(j) == D(j+m)``, so one left-to-right pass over ``D`` with a table from
signature to its earliest occurrence inside the window ``[j-hi_m, j]``
finds every qualifying pair.

Signatures are packed exactly (no lossy hashing) into ``K`` 64-bit words
with fixed-width unsigned fields; the hash is used only to pick a slot.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)

# return codes
OK = 0
TABLE_FULL = 1


def field_layout(n: int, p: int) -> tuple[int, int, int]:
    """``(bits, fields_per_word, words)`` for counts in ``[0, p]``."""
    bits = 16 if p < (1 << 16) else 32
    per = 64 // bits
    return bits, per, -(-n // per)


def make_increments(n: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    bits, per, _ = field_layout(n, p)
    word_of = np.array([a // per for a in range(n)], dtype=np.int64)
    inc = np.array([1 << (bits * (a % per)) for a in range(n)], dtype=np.uint64)
    return word_of, inc


@njit(cache=True, nogil=True)
def period_pass(letters, p, lo_m, hi_m, collect_lo, word_of, inc, nwords,
                tkeys, thead, tlast, used, nxt, out_start, out_m):
    """Scan one period.

    Returns ``(status, best_m, best_start, count)``.  ``best_m`` is the
    largest ``m`` in ``[lo_m, hi_m]`` (0 if none) with the smallest start
    among ties.  Every pair with ``m >= collect_lo`` (pass ``hi_m + 1`` to
    disable) is written to ``out_start``/``out_m`` in order of (second
    block, start); ``count`` may exceed the buffer, in which case the caller
    must retry with more room.
    """
    L = letters.shape[0]
    npos = L - p + 1
    cap = thead.shape[0]
    mask = np.uint64(cap - 1)
    cur = np.zeros(nwords, dtype=np.uint64)
    for i in range(p):
        c = letters[i]
        cur[word_of[c]] += inc[c]

    nused = 0
    best_m = 0
    best_start = -1
    count = 0
    status = 0
    max_out = out_start.shape[0]
    for j in range(npos):
        if j > 0:
            c = letters[j - 1]
            cur[word_of[c]] -= inc[c]
            c = letters[j + p - 1]
            cur[word_of[c]] += inc[c]
        h = np.uint64(0)
        for k in range(nwords):
            h = (h ^ cur[k]) * _GOLDEN
            h ^= h >> np.uint64(31)
        slot = np.int64(h & mask)
        while True:
            if thead[slot] < 0:
                break
            same = True
            for k in range(nwords):
                if tkeys[slot, k] != cur[k]:
                    same = False
                    break
            if same:
                break
            slot = (slot + 1) & (cap - 1)
        if thead[slot] < 0:
            if 2 * (nused + 1) > cap:
                status = 1
                break
            for k in range(nwords):
                tkeys[slot, k] = cur[k]
            thead[slot] = j
            tlast[slot] = j
            used[nused] = slot
            nused += 1
            continue
        nxt[tlast[slot]] = j
        tlast[slot] = j
        head = thead[slot]
        while head < j - hi_m:
            head = nxt[head]
        thead[slot] = head
        m = j - head
        if m < lo_m:
            continue
        if m > best_m:
            best_m = m
            best_start = head
        if m >= collect_lo:
            pos = head
            while j - pos >= collect_lo:
                if count < max_out:
                    out_start[count] = pos
                    out_m[count] = j - pos
                count += 1
                pos = nxt[pos]

    for i in range(nused):
        thead[used[i]] = -1
    return status, best_m, best_start, count
