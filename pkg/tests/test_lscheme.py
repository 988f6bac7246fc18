"""
Pytest test suite for L-scheme parsing, rewriting and reduction
"""

import pytest

from trigonal_knots.core import braid3
from trigonal_knots.core.errors import (
    BranchCountViolation,
    MissingTerminal,
    PatternMismatch,
    UnknownToken,
)
from trigonal_knots.core.lscheme import (
    Direction,
    Failure,
    Kind,
    ReductionPath,
    RewriteRule,
    RuleFamily,
    Terminal,
    all_valid_schemes,
    apply_rewrite,
    is_alternating,
    normalize,
    parse_scheme,
    reduce_to_alternating,
    rewrite_neighbors,
    scan_branches,
    swap_indices,
)
from trigonal_knots.core.scheme2braid import Bidegree, to_braid


@pytest.fixture
def worked_scheme():
    return parse_scheme("o1 <1 x2 x1 >1 v")


@pytest.fixture
def trefoil_scheme():
    return parse_scheme("<2 x1 x1 x1 >2 v")


def test_parse_worked_scheme(worked_scheme):
    """Counts and terminal of the worked example scheme."""
    assert worked_scheme.solitary_count == 1
    assert worked_scheme.crossing_count == 2
    assert worked_scheme.terminal is Terminal.VEE
    assert worked_scheme.body[1].kind is Kind.MIN


def test_parse_empty_body():
    """A lone terminal is a valid scheme."""
    scheme = parse_scheme("v")
    assert scheme.body == ()
    assert scheme.crossing_count == 0
    assert scheme.solitary_count == 0


def test_branch_count_violation_position():
    """A crossing with a single real branch is rejected at its position."""
    with pytest.raises(BranchCountViolation) as info:
        parse_scheme("x1 v")
    assert info.value.position == 0


def test_unknown_token():
    """Tokens outside the alphabet report their position."""
    with pytest.raises(UnknownToken) as info:
        parse_scheme("o1 y3 v")
    assert info.value.position == 1


def test_missing_terminal():
    """A body without terminal is refused."""
    with pytest.raises(MissingTerminal):
        parse_scheme("o1 <1 x2 >1")


def test_unclosed_tangency_window():
    """Three real branches at the end of the body are invalid."""
    with pytest.raises(BranchCountViolation):
        parse_scheme("<1 x1 v")


def test_scan_branches_history():
    """The counter history has one entry per gap."""
    assert scan_branches(parse_scheme("o1 <2 x1 >2 v").body) == [1, 1, 3, 3, 1]


def test_normalize_spacing():
    """Normalization collapses whitespace."""
    assert normalize("  o1   <1 x2 x1  >1    v ") == "o1 <1 x2 x1 >1 v"


def test_swap_indices_flips_terminal():
    """Vertical flip swaps indices and the terminal."""
    swapped = swap_indices(parse_scheme("o1 <2 x1 x1 >1 v"))
    assert swapped.render() == "o2 <1 x2 x2 >2 ^"


def test_cancel_pair():
    """x_j x_j disappears."""
    rule = RewriteRule(RuleFamily.CANCEL_PAIR, Direction.FORWARD, 1)
    result = apply_rewrite(parse_scheme("<2 x1 x1 >2 v"), rule)
    assert result.render() == "<2 >2 v"


def test_braid_relation_move():
    """x2 x1 x2 becomes x1 x2 x1 without changing the crossing count."""
    rule = RewriteRule(RuleFamily.BRAID_RELATION, Direction.FORWARD, 1)
    before = parse_scheme("<2 x2 x1 x2 >2 v")
    after = apply_rewrite(before, rule)
    assert after.render() == "<2 x1 x2 x1 >2 v"
    assert after.crossing_count == before.crossing_count


def test_crossing_past_max():
    """x1 >2 becomes x2 >1."""
    rule = RewriteRule(RuleFamily.CROSSING_PAST_MAX, Direction.FORWARD, 1)
    assert apply_rewrite(parse_scheme("<2 x1 >2 v"), rule).render() == "<2 x2 >1 v"


def test_crossing_past_min_gives_worked_scheme():
    """The traced scheme of the worked curve moves to the published form."""
    rule = RewriteRule(RuleFamily.CROSSING_PAST_MIN, Direction.FORWARD, 1)
    assert apply_rewrite(parse_scheme("o1 <2 x1 x1 >1 v"), rule).render() == "o1 <1 x2 x1 >1 v"


def test_solitary_moves():
    """Crossings next to a tangency of the same index turn into solitary nodes."""
    max_rule = RewriteRule(RuleFamily.MAX_TO_SOLITARY, Direction.FORWARD, 2)
    assert apply_rewrite(parse_scheme("<2 x1 x2 >2 v"), max_rule).render() == "<2 x1 >2 o2 v"
    min_rule = RewriteRule(RuleFamily.MIN_TO_SOLITARY, Direction.FORWARD, 0)
    assert apply_rewrite(parse_scheme("<1 x1 x2 >1 v"), min_rule).render() == "o1 <1 x2 >1 v"


def test_insertion_needs_three_branches():
    """x_j x_j can only be inserted inside a tangency window."""
    inside = RewriteRule(RuleFamily.CANCEL_PAIR, Direction.BACKWARD, 1, index=2)
    assert apply_rewrite(parse_scheme("<2 >2 v"), inside).render() == "<2 x2 x2 >2 v"
    outside = RewriteRule(RuleFamily.CANCEL_PAIR, Direction.BACKWARD, 0, index=1)
    with pytest.raises(PatternMismatch):
        apply_rewrite(parse_scheme("<2 >2 v"), outside)


def test_pattern_mismatch():
    """A rule that does not fit its position is refused."""
    rule = RewriteRule(RuleFamily.CROSSING_PAST_MAX, Direction.FORWARD, 1)
    with pytest.raises(PatternMismatch):
        apply_rewrite(parse_scheme("<2 x1 >1 v"), rule)


def test_neighbors_of_empty_body():
    """Nothing applies to an empty body."""
    assert rewrite_neighbors(parse_scheme("v")) == []


def test_neighbors_include_cancellations(trefoil_scheme):
    """Both adjacent pairs of x1 x1 x1 can be cancelled."""
    cancelled = {
        rule.position
        for rule, result in rewrite_neighbors(trefoil_scheme)
        if rule.rule_id is RuleFamily.CANCEL_PAIR and result.render() == "<2 x1 >2 v"
    }
    assert cancelled == {1, 2}


def test_neighbors_include_braid_relation():
    """The braid relation is offered in the backward direction."""
    results = {r.render() for _, r in rewrite_neighbors(parse_scheme("<2 x1 x2 x1 >2 v"))}
    assert "<2 x2 x1 x2 >2 v" in results


@pytest.mark.parametrize("text, expected", [
    ("<2 x1 x1 x1 >2 v", True),
    ("<2 >2 v", True),
    ("<2 x1 x1 x2 >1 v", True),
    ("<1 x2 x2 >1 ^", True),
    ("o1 <2 x1 >2 o2 v", True),
    ("<2 x1 x2 >2 v", False),
    ("<2 x2 x1 >1 v", False),
    ("v", False),
    ("<2 x1 >2 <2 x1 >2 v", False),
])
def test_is_alternating(text, expected):
    """Alternating targets, up to swapping indices."""
    assert is_alternating(parse_scheme(text)) is expected


def test_reduce_already_alternating(trefoil_scheme):
    """An alternating scheme reduces along the empty path."""
    outcome = reduce_to_alternating(trefoil_scheme)
    assert isinstance(outcome, ReductionPath)
    assert outcome.steps == ()
    assert outcome.final == trefoil_scheme


def test_reduce_cancels_pair():
    """A cancellable pair is removed in one move."""
    outcome = reduce_to_alternating(parse_scheme("<2 x1 x1 x2 x2 x1 >2 v"))
    assert isinstance(outcome, ReductionPath)
    assert len(outcome.steps) == 1
    assert outcome.final.render() == "<2 x1 x1 x1 >2 v"
    assert outcome.to_dict()[0]['scheme'] == "<2 x1 x1 x1 >2 v"


def test_reduce_prefers_shortest_path():
    """One crossing-past-minimum move already reaches a twist pattern with indices swapped."""
    outcome = reduce_to_alternating(parse_scheme("<2 x1 x2 x2 x1 x1 >2 v"))
    assert isinstance(outcome, ReductionPath)
    assert len(outcome.steps) == 1
    assert outcome.steps[0].rule.rule_id is RuleFamily.CROSSING_PAST_MIN
    assert outcome.final.render() == "<1 x2 x2 x2 x1 x1 >2 v"
    assert is_alternating(outcome.final)


def test_reduce_budget_exhausted():
    """A zero budget gives a failure record with the frontier size."""
    outcome = reduce_to_alternating(parse_scheme("<2 x1 x2 >2 v"), max_steps=0)
    assert isinstance(outcome, Failure)
    assert outcome.frontier_size == 1
    assert outcome.to_dict()['success'] is False


@pytest.mark.parametrize("start, position", [
    ("<2 x1 x1 x1 >2 v", 2),
    ("<2 x1 x1 x1 x1 x1 >2 v", 3),
])
def test_scramble_then_reduce(start, position):
    """Inserting x2 x2 and scrambling with the braid relation is undone by the search."""
    scheme = parse_scheme(start)
    scheme = apply_rewrite(scheme, RewriteRule(RuleFamily.CANCEL_PAIR, Direction.BACKWARD,
                                               position, index=2))
    for rule, neighbor in rewrite_neighbors(scheme):
        if rule.rule_id is RuleFamily.BRAID_RELATION:
            scheme = neighbor
            break
    outcome = reduce_to_alternating(scheme)
    assert isinstance(outcome, ReductionPath)
    assert is_alternating(outcome.final)
    assert outcome.final.crossing_count <= scheme.crossing_count


def test_all_valid_schemes_small():
    """Bodies of length at most two with terminal v."""
    schemes = list(all_valid_schemes(2))
    assert len(schemes) == 11
    assert len({s.render() for s in schemes}) == 11


BIDEGREE_FOR = {
    Terminal.VEE: 4,
    Terminal.WEDGE: 4,
    Terminal.DOWN: 5,
    Terminal.UP: 5,
}


@pytest.mark.parametrize("terminal", list(Terminal))
def test_rewrites_preserve_validity_and_braid_relation(terminal):
    """Every move on bodies up to length eight yields a valid scheme; R3 keeps the braid."""
    d = Bidegree.from_b(BIDEGREE_FOR[terminal])
    for scheme in all_valid_schemes(8, terminals=(terminal,)):
        for rule, result in rewrite_neighbors(scheme):
            assert scan_branches(result.body)[-1] == 1
            if rule.rule_id is RuleFamily.BRAID_RELATION:
                before, after = to_braid(scheme, d), to_braid(result, d)
                assert braid3.matrix_rep(before) == braid3.matrix_rep(after)
                assert braid3.exponent_sum(before) == braid3.exponent_sum(after)


def test_render_then_parse_is_identity():
    """Rendering and parsing back gives the same scheme for every terminal."""
    for scheme in all_valid_schemes(6, terminals=list(Terminal)):
        assert parse_scheme(scheme.render()) == scheme


@pytest.mark.parametrize("text", [
    "<2 x1 x1 x2 x2 x1 >2 v",
    "<2 x1 x2 x2 x1 x1 >2 v",
    "<2 x1 x1 x1 >2 v",
    "<2 x1 x2 x2 x1 x1 x1 >2 v",
])
def test_reduction_never_increases_crossings(text):
    """Crossing counts are non-increasing along every returned path."""
    outcome = reduce_to_alternating(parse_scheme(text))
    assert isinstance(outcome, ReductionPath)
    counts = [s.crossing_count for s in outcome.schemes()]
    assert all(a >= b for a, b in zip(counts, counts[1:]))
