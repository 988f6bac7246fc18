"""
Pytest test suite for three-strand braid algebra
"""

import itertools
import random

import pytest
from flint import fmpz_mat
from sympy.combinatorics import Permutation

from trigonal_knots.core import braid3
from trigonal_knots.core.errors import InconsistentLinking, InvalidBraidText

WORKED_BRAID = (-2, -1, 2, -1, -2, -1, -1, -1, 1, 2, 1, 1, 2, 1)


def test_parse_with_powers():
    """g^k expands to k copies of g."""
    assert braid3.parse_braid("-2 -1 2 -1 -2 -1^3 1 2 1 1 2 1") == WORKED_BRAID


def test_parse_rejects_generator_three():
    """Only sigma1 and sigma2 exist on three strands."""
    with pytest.raises(InvalidBraidText):
        braid3.parse_braid("1 3")


def test_render_roundtrip_text():
    """Rendering uses single spaces."""
    assert braid3.render_braid((1, -2)) == "1 -2"


@pytest.mark.parametrize("word, expected", [
    ((1, -1), ()),
    ((), ()),
    ((1, 2, -2, -1, 2), (2,)),
])
def test_free_reduce(word, expected):
    """Adjacent inverse pairs cancel."""
    assert braid3.free_reduce(word) == expected


def test_matrix_identity():
    """The empty word maps to the identity."""
    assert braid3.matrix_entries(braid3.matrix_rep(())) == ((1, 0), (0, 1))


def test_matrix_half_twist():
    """Both sides of the braid relation give the same matrix."""
    assert braid3.matrix_entries(braid3.matrix_rep((1, 2, 1))) == ((0, 1), (-1, 0))
    assert braid3.matrix_rep((2, 1, 2)) == braid3.matrix_rep((1, 2, 1))


@pytest.mark.parametrize("word, expected", [((), 0), (WORKED_BRAID, 0), ((1, 1), 2)])
def test_exponent_sum(word, expected):
    """Exponent sum counts signed letters."""
    assert braid3.exponent_sum(word) == expected


def test_worked_braid_is_trivial():
    """The braid of the worked curve is trivial."""
    assert braid3.is_trivial(WORKED_BRAID)
    assert not braid3.is_trivial((1,))


def test_central_element_is_not_trivial():
    """(s1 s2)^6 has identity matrix but exponent sum 12."""
    word = braid3.power((1, 2), 6)
    assert braid3.matrix_rep(word) == braid3.IDENTITY
    assert not braid3.is_trivial(word)


def test_power_and_inverse():
    """Negative powers invert."""
    assert braid3.power(braid3.delta(), 2) == (1, 2, 1, 1, 2, 1)
    assert braid3.power((1, 2), -1) == (-2, -1)
    assert braid3.free_reduce(braid3.concat((1, 2), braid3.inverse((1, 2)))) == ()


def test_permutation_of_half_twist():
    """The half twist reverses the strands."""
    assert braid3.permutation(braid3.delta()) == (3, 2, 1)


def test_closure_of_empty_braid():
    """Three unlinked circles."""
    link = braid3.closure_link(())
    assert link.permutation == (1, 2, 3)
    assert link.component_count == 3
    assert set(link.lk.values()) == {0}


def test_closure_hopf_plus_unknot():
    """sigma1^2 links the first two components once."""
    link = braid3.closure_link((1, 1))
    assert link.component_count == 3
    assert link.linking(0, 1) == 1
    assert link.linking(0, 2) == 0
    assert link.linking(1, 2) == 0
    assert link.total_lk == 1


def test_closure_of_worked_braid():
    """The trivial braid closes to the unlink."""
    link = braid3.closure_link(WORKED_BRAID)
    assert link.component_count == 3
    assert all(v == 0 for v in link.lk.values())


def test_closure_knot_has_one_component():
    """sigma1 sigma2 closes to a single unknot."""
    link = braid3.closure_link((1, 2))
    assert link.component_count == 1
    assert link.lk == {}
    assert link.to_dict()['components'] == [[1, 3, 2]]


LETTERS = (1, -1, 2, -2)


@pytest.fixture
def random_words():
    rng = random.Random(31)
    return [tuple(rng.choice(LETTERS) for _ in range(rng.randint(0, 24))) for _ in range(60)]


def test_matrix_rep_is_multiplicative(random_words):
    """The image of a product is the product of the images."""
    for left, right in zip(random_words, random_words[1:]):
        product = braid3.matrix_rep(left) * braid3.matrix_rep(right)
        assert braid3.matrix_rep(braid3.concat(left, right)) == product


def test_matrix_rep_of_inverse(random_words):
    """w w^-1 maps to the identity and is trivial."""
    for word in random_words:
        both = braid3.concat(word, braid3.inverse(word))
        assert braid3.matrix_rep(both) == fmpz_mat(2, 2, [1, 0, 0, 1])
        assert braid3.is_trivial(both)


@pytest.mark.parametrize("length", range(7))
def test_component_counts_exhaustive(length):
    """Closure components are the cycles of the strand permutation."""
    transposition = {1: Permutation(0, 1, size=3), 2: Permutation(1, 2, size=3)}
    for word in itertools.product(LETTERS, repeat=length):
        perm = Permutation(size=3)
        for g in word:
            perm = perm * transposition[abs(g)]
        link = braid3.closure_link(word)
        assert link.component_count == perm.cycles
        # every crossing is either a self crossing or half of a linking unit
        assert sum(link.self_sums) + 2 * link.total_lk == braid3.exponent_sum(word)


def test_closure_rejects_odd_pair_sum(mocker):
    """An odd crossing sum between components is reported as an error."""
    mocker.patch.object(braid3, 'permutation', return_value=(1, 2, 3))
    with pytest.raises(InconsistentLinking) as info:
        braid3.closure_link((1,))
    assert info.value.exit_code == 3
    assert info.value.details == {'total': 1, 'pair': [0, 1]}
