"""Run-length-limited direction sets, their dyadic covers and dimension.

An angle belongs to level N when its binary expansion never carries more
than N+1 equal consecutive bits.  Membership is decided exactly from the
eventually periodic expansion of a reduced rational (prefix plus two
periods suffices to expose every run).

The interval cover machinery reproduces the two-type refinement that
peels a definite fraction of every kept dyadic interval per step, in
exact integer arithmetic: level-N refinement of an interval keeps at
least half of it while every child shrinks by at least 2^-N.  Note the
recursion's own level index is offset by one from the run bound: the
level-N refinement (base case N = 2) keeps exactly the prefixes whose
runs never exceed N, i.e. the membership predicate at level N-1.

The dimension oracle is independent of the covers: the exact dimension
of the max-run-(N+1) subshift is log2 of the spectral radius of its
transfer matrix (golden mean for N = 1, tribonacci for N = 2, ...),
cross-checked against a word-count growth rate, and always at least the
cover-based exponent 1 - 1/N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import groupby

import numpy as np

from .angles import DirectionAngle
from .errors import CapExceeded, DomainError, DyadicAngleError

_DEFAULT_CAP = 2_000_000


def max_run(bits) -> int:
    """Longest run of equal consecutive symbols (0 for the empty word)."""
    word = _as_word(bits)
    if not word:
        return 0
    return max(len(list(g)) for _, g in groupby(word))


def _as_word(bits) -> str:
    if isinstance(bits, str):
        word = bits
    else:
        word = "".join(str(int(b)) for b in bits)
    if any(ch not in "01" for ch in word):
        raise DomainError(f"not a binary word: {bits!r}")
    return word


def membership(angle_or_word, N: int) -> bool:
    """True iff no run of equal bits exceeds N+1.

    For a rational angle the eventually periodic expansion is scanned
    over prefix plus two full periods, which exposes every run (a longer
    run would force a constant period, i.e. a dyadic angle).
    """
    if N < 1:
        raise DomainError("level N must be >= 1")
    if isinstance(angle_or_word, DirectionAngle):
        if angle_or_word.is_dyadic:
            raise DyadicAngleError(
                f"dyadic angle {angle_or_word} has no unique expansion")
        prefix, period = angle_or_word.expansion()
        word = "".join(map(str, prefix + period + period))
    else:
        word = _as_word(angle_or_word)
    return max_run(word) <= N + 1


def shift(angle: DirectionAngle) -> DirectionAngle:
    """Fractional part of 2 psi; left shift of the expansion."""
    return angle.shift()


def good_set_level(angle: DirectionAngle, cap: int = 16):
    """Smallest N <= cap with membership(angle, N), or None."""
    if angle.is_dyadic:
        return None
    prefix, period = angle.expansion()
    run = max_run("".join(map(str, prefix + period + period)))
    n = max(1, run - 1)
    return n if n <= cap else None


@dataclass(frozen=True)
class CoverInterval:
    """Dyadic interval [num/2^d, (num+1)/2^d) addressed by its index word."""

    index: str

    @property
    def num(self) -> int:
        return int(self.index, 2)

    @property
    def log2den(self) -> int:
        return len(self.index)

    @property
    def left(self) -> Fraction:
        return Fraction(self.num, 2 ** self.log2den)

    @property
    def length(self) -> Fraction:
        return Fraction(1, 2 ** self.log2den)

    def contains(self, x: Fraction) -> bool:
        return self.left <= x < self.left + self.length


@dataclass(frozen=True)
class DyadicCoverLevel:
    level: int
    keep: tuple
    drop: tuple

    def keep_measure(self) -> Fraction:
        return sum((iv.length for iv in self.keep), Fraction(0))

    def covers(self, x: Fraction) -> bool:
        return any(iv.contains(x) for iv in self.keep)


def _k2_e2(idx: str):
    if idx[-1] == "0":
        return [idx + "01", idx + "10", idx + "110"], [idx + "00", idx + "111"]
    return [idx + "01", idx + "10", idx + "001"], [idx + "11", idx + "000"]


def refine_once(idx: str, N: int):
    """(keep, drop) children of one dyadic interval under level-N refinement."""
    if N < 2:
        raise DomainError("refinement level starts at N = 2")
    if N == 2:
        return _k2_e2(idx)
    kp, dp = refine_once(idx, N - 1)
    keep, drop = [], []
    for j in dp:
        # previous-level dropped intervals end with a run of exactly N bits:
        # at level N that run is now maximal, the next bit must break it
        if j[-1] == "1":
            keep.append(j + "0")
            drop.append(j + "1")
        else:
            keep.append(j + "1")
            drop.append(j + "0")
    for j in kp:
        if j.endswith("10"):
            keep.append(j + "1")
            keep.extend(j + "0" * k + "1" for k in range(1, N))
            drop.append(j + "0" * N)
        elif j.endswith("01"):
            keep.append(j + "0")
            keep.extend(j + "1" * k + "0" for k in range(1, N))
            drop.append(j + "1" * N)
        else:
            raise AssertionError(f"kept index {j} does not end in 01/10")
    return keep, drop


def generate_cover(N: int, k: int, cap: int = _DEFAULT_CAP) -> DyadicCoverLevel:
    """Level-k cover: k refinement steps from the base split {[0,1/2], [1/2,1]}."""
    if N < 2:
        raise DomainError("cover level N must be >= 2 (recursion bases at N = 2)")
    if k < 0:
        raise DomainError("cover depth k must be >= 0")
    keep = ["0", "1"]
    drop: list[str] = []
    for step in range(k):
        new_keep: list[str] = []
        new_drop: list[str] = []
        for idx in keep:
            kp, dp = refine_once(idx, N)
            new_keep.extend(kp)
            new_drop.extend(dp)
            if len(new_keep) > cap:
                raise CapExceeded(
                    f"interval cap {cap} exceeded at refinement step {step + 1}",
                    partial=DyadicCoverLevel(
                        level=step,
                        keep=tuple(CoverInterval(i) for i in keep),
                        drop=tuple(CoverInterval(i) for i in drop)))
        keep, drop = new_keep, new_drop
    return DyadicCoverLevel(level=k,
                            keep=tuple(CoverInterval(i) for i in keep),
                            drop=tuple(CoverInterval(i) for i in drop))


def _transfer_matrix(N: int) -> np.ndarray:
    """Adjacency of (bit, run) states for words with runs capped at N+1."""
    cap = N + 1
    size = 2 * cap
    m = np.zeros((size, size))

    def state(bit, run):
        return bit * cap + (run - 1)

    for bit in (0, 1):
        for run in range(1, cap + 1):
            m[state(bit, run), state(1 - bit, 1)] = 1.0
            if run < cap:
                m[state(bit, run), state(bit, run + 1)] = 1.0
    return m


def admissible_word_count(N: int, length: int) -> int:
    """Exact number of binary words of the given length with runs <= N+1."""
    if length < 1:
        raise DomainError("length must be >= 1")
    cap = N + 1
    # collapsed over the bit value by 0/1 symmetry: state = current run length
    counts = [0] * (cap + 1)
    counts[1] = 2
    for _ in range(length - 1):
        nxt = [0] * (cap + 1)
        nxt[1] = sum(counts)
        for r in range(1, cap):
            nxt[r + 1] = counts[r]
        counts = nxt
    return sum(counts)


def dimension_word_rate(N: int, length: int = 40) -> float:
    """log2 growth rate of the admissible word count at the given length."""
    c0 = admissible_word_count(N, length)
    c1 = admissible_word_count(N, length + 1)
    return math.log2(c1) - math.log2(c0)


def dimension_bound(N: int) -> float:
    """Exact dimension of the max-run-(N+1) subshift, log2(spectral radius).

    Cross-checked against the word-count growth rate; always at least the
    cover exponent 1 - 1/N, confirming the lower-bound side.
    """
    if N < 1:
        raise DomainError("level N must be >= 1")
    sr = max(abs(np.linalg.eigvals(_transfer_matrix(N))))
    rate = float(np.log2(sr))
    wc = dimension_word_rate(N)
    assert abs(rate - wc) < 1e-3, f"transfer matrix {rate} vs word count {wc}"
    return rate


def cover_to_dict(level: DyadicCoverLevel, N: int) -> dict:
    """JSON-ready cover dump with exact dyadic rationals."""
    return {
        "N": N,
        "k": level.level,
        "keep": [{"num": iv.num, "log2den": iv.log2den,
                  "len_log2den": iv.log2den, "index": iv.index}
                 for iv in level.keep],
    }
