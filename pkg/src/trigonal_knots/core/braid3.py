"""
Three-strand braid algebra.

Words are tuples of signed generator indices (+j = sigma_j, -j = its inverse).
Strand positions run 1 (bottom) to 3 (top).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import reduce
from operator import mul
from typing import Dict, List, Sequence, Tuple

from flint import fmpz_mat

from trigonal_knots.core.errors import InconsistentLinking, InvalidBraidText

BraidWord = Tuple[int, ...]

IDENTITY = fmpz_mat(2, 2, [1, 0, 0, 1])

_GENERATOR_MATRICES: Dict[int, fmpz_mat] = {
    1: fmpz_mat(2, 2, [1, 1, 0, 1]),
    -1: fmpz_mat(2, 2, [1, -1, 0, 1]),
    2: fmpz_mat(2, 2, [1, 0, -1, 1]),
    -2: fmpz_mat(2, 2, [1, 0, 1, 1]),
}

_POWER_TOKEN = re.compile(r'^([+-]?[12])(?:\^(\d+))?$')


def _check(word: Sequence[int]) -> BraidWord:
    letters = tuple(int(g) for g in word)
    for g in letters:
        if g not in _GENERATOR_MATRICES:
            raise InvalidBraidText(f"generator {g} is not one of +-1, +-2")
    return letters


def parse_braid(text: str) -> BraidWord:
    """Parse "-2 -1 2 1^3" style text; "g^k" expands to k copies of g."""
    letters: List[int] = []
    for token in text.replace(',', ' ').split():
        match = _POWER_TOKEN.match(token)
        if not match:
            raise InvalidBraidText(f"bad braid token {token!r}")
        letters.extend([int(match.group(1))] * int(match.group(2) or 1))
    return tuple(letters)


def render_braid(word: Sequence[int]) -> str:
    return ' '.join(str(g) for g in word)


def delta() -> BraidWord:
    """The half twist sigma1 sigma2 sigma1."""
    return (1, 2, 1)


def power(word: Sequence[int], k: int) -> BraidWord:
    word = _check(word)
    if k < 0:
        return inverse(word) * (-k)
    return word * k


def concat(*words: Sequence[int]) -> BraidWord:
    return tuple(itertools.chain.from_iterable(_check(w) for w in words))


def inverse(word: Sequence[int]) -> BraidWord:
    return tuple(-g for g in reversed(_check(word)))


def free_reduce(word: Sequence[int]) -> BraidWord:
    """Cancel adjacent g, -g pairs until none remain."""
    stack: List[int] = []
    for g in _check(word):
        if stack and stack[-1] == -g:
            stack.pop()
        else:
            stack.append(g)
    return tuple(stack)


def matrix_rep(word: Sequence[int]) -> fmpz_mat:
    """Image in SL2(Z) under sigma1 -> [[1,1],[0,1]], sigma2 -> [[1,0],[-1,1]]."""
    return reduce(mul, (_GENERATOR_MATRICES[g] for g in _check(word)), IDENTITY)


def matrix_entries(m: fmpz_mat) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    """Rows of a 2x2 integer matrix as plain ints."""
    a, b, c, d = (int(x) for x in m.entries())
    return ((a, b), (c, d))


def exponent_sum(word: Sequence[int]) -> int:
    return sum(1 if g > 0 else -1 for g in _check(word))


def is_trivial(word: Sequence[int]) -> bool:
    # The kernel of matrix_rep is generated by (s1 s2)^6, exponent sum 12.
    return matrix_rep(word) == IDENTITY and exponent_sum(word) == 0


def permutation(word: Sequence[int]) -> Tuple[int, int, int]:
    """Position where the strand starting at position i (1-based) ends, for i = 1..3."""
    order = [1, 2, 3]  # order[p-1] = strand currently at position p
    for g in _check(word):
        j = abs(g)
        order[j - 1], order[j] = order[j], order[j - 1]
    ends = {strand: pos + 1 for pos, strand in enumerate(order)}
    return (ends[1], ends[2], ends[3])


def _cycles(perm: Tuple[int, int, int]) -> List[Tuple[int, ...]]:
    seen = set()
    cycles = []
    for start in (1, 2, 3):
        if start in seen:
            continue
        cycle = []
        i = start
        while i not in seen:
            seen.add(i)
            cycle.append(i)
            i = perm[i - 1]
        cycles.append(tuple(cycle))
    return cycles


@dataclass(frozen=True)
class LinkData:
    """Closure of a 3-braid: components are strand-start cycles."""

    permutation: Tuple[int, int, int]
    components: Tuple[Tuple[int, ...], ...]
    lk: Dict[Tuple[int, int], int] = field(hash=False)
    self_sums: Tuple[int, ...] = ()

    @property
    def component_count(self) -> int:
        return len(self.components)

    @property
    def total_lk(self) -> int:
        return sum(self.lk.values())

    def linking(self, a: int, b: int) -> int:
        """Linking number between components with indices a and b (0-based)."""
        return self.lk[(min(a, b), max(a, b))]

    def to_dict(self) -> Dict:
        return {
            'permutation': list(self.permutation),
            'components': [list(c) for c in self.components],
            'lk': [{'pair': [a, b], 'value': v} for (a, b), v in sorted(self.lk.items())],
        }


def closure_link(word: Sequence[int]) -> LinkData:
    """
    Compute the components and pairwise linking numbers of the closed braid.

    Args:
        word: Braid word over sigma1, sigma2

    Returns:
        LinkData whose lk maps component index pairs (i < j) to linking numbers

    Raises:
        InconsistentLinking: when the crossings between two components have odd sum
    """
    word = _check(word)
    perm = permutation(word)
    components = tuple(_cycles(perm))
    owner = {strand: idx for idx, comp in enumerate(components) for strand in comp}

    pair_sums: Dict[Tuple[int, int], int] = {
        pair: 0 for pair in itertools.combinations(range(len(components)), 2)
    }
    self_sums = [0] * len(components)
    order = [1, 2, 3]
    for g in word:
        j = abs(g)
        sign = 1 if g > 0 else -1
        a, b = owner[order[j - 1]], owner[order[j]]
        if a == b:
            self_sums[a] += sign
        else:
            pair_sums[(min(a, b), max(a, b))] += sign
        order[j - 1], order[j] = order[j], order[j - 1]

    lk = {}
    for pair, total in pair_sums.items():
        if total % 2:
            raise InconsistentLinking(total, pair)
        lk[pair] = total // 2
    return LinkData(perm, components, lk, tuple(self_sums))
