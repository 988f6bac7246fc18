"""
Command line entry point.

Every subcommand builds a RunReport; --json prints it as JSON, otherwise a
short text summary is printed. Exit status: 0 success, 1 failed check,
2 input error, 3 degenerate input.
"""

import argparse
import json
import logging
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from trigonal_knots.config.settings import Settings, configure_logging
from trigonal_knots.core import braid3, certifier
from trigonal_knots.core.curvetrace import (
    PolyMap,
    analyze_curve,
    chebyshev,
    extract_lscheme,
    interior_lattice_points,
    lattice_point_formula,
    node_identity_check,
    parse_poly,
    random_polymap,
    shifted,
)
from trigonal_knots.core.errors import DegenerateCurve, NotReducible, TrigonalError
from trigonal_knots.core.lscheme import (
    Direction,
    Failure,
    RewriteRule,
    RuleFamily,
    apply_rewrite,
    is_alternating,
    parse_scheme,
    reduce_to_alternating,
    rewrite_neighbors,
    scan_branches,
)
from trigonal_knots.core.scheme2braid import Bidegree, scheme_link, to_braid
from trigonal_knots.core.twobridge import (
    Torus,
    Twist,
    TwoBridgeSpec,
    crossing_number,
    harmonic_diagram,
    harmonic_degree_claim,
    identify_trigonal_diagram,
    lexdeg_lower_general,
    lexdeg_theorem_main,
    spec_fraction,
)
from trigonal_knots.ui import svg

logger = logging.getLogger(__name__)

CHECK_FAILED = 1

WORKED_SHIFT = '2/5'
TRACED_SCHEME = 'o1 <2 x1 x1 >1 v'
WORKED_SCHEME = 'o1 <1 x2 x1 >1 v'
WORKED_BRAID = (-2, -1, 2, -1, -2, -1, -1, -1, 1, 2, 1, 1, 2, 1)


@dataclass
class Check:
    name: str
    passed: bool
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {'name': self.name, 'passed': self.passed, 'details': self.details}


@dataclass
class RunReport:
    command: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    outputs: Dict[str, Any] = field(default_factory=dict)
    checks: List[Check] = field(default_factory=list)

    @property
    def success(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str, passed: bool, **details) -> None:
        self.checks.append(Check(name, bool(passed), details))

    def to_dict(self) -> Dict:
        return {
            'command': self.command,
            'inputs': self.inputs,
            'outputs': self.outputs,
            'checks': [c.to_dict() for c in self.checks],
            'success': self.success,
        }


# Subcommands

def cmd_parse(args, settings: Settings) -> RunReport:
    scheme = parse_scheme(args.scheme)
    return RunReport('parse', {'scheme': args.scheme}, {
        'scheme': scheme.render(),
        'branches': scan_branches(scheme.body),
        'crossings': scheme.crossing_count,
        'solitary': scheme.solitary_count,
        'alternating': is_alternating(scheme),
    })


def cmd_rewrite(args, settings: Settings) -> RunReport:
    scheme = parse_scheme(args.scheme)
    report = RunReport('rewrite', {'scheme': scheme.render(), 'rule': args.rule})
    if args.rule is None:
        report.outputs['neighbors'] = [
            {**rule.to_dict(), 'scheme': result.render()} for rule, result in rewrite_neighbors(scheme)
        ]
        return report
    rule = RewriteRule(RuleFamily(args.rule), Direction(args.direction), args.position, args.index)
    report.outputs = {'rule': rule.to_dict(), 'scheme': apply_rewrite(scheme, rule).render()}
    return report


def cmd_reduce(args, settings: Settings) -> RunReport:
    scheme = parse_scheme(args.scheme)
    budget = args.max_steps or settings.bfs_budget
    outcome = reduce_to_alternating(scheme, budget)
    report = RunReport('reduce', {'scheme': scheme.render(), 'max_steps': budget})
    if isinstance(outcome, Failure):
        report.outputs = outcome.to_dict()
        report.check('reached_alternating', False, reason=outcome.reason)
        return report
    report.outputs = {'path': outcome.to_dict(), 'final': outcome.final.render(),
                      'expansions': outcome.expansions}
    report.check('reached_alternating', True, moves=len(outcome.steps))
    return report


def _braid_outputs(word: Sequence[int]) -> Dict:
    reduced = braid3.free_reduce(word)
    return {
        'word': braid3.render_braid(word),
        'length': len(word),
        'free_reduced': braid3.render_braid(reduced),
        'matrix': [list(row) for row in braid3.matrix_entries(braid3.matrix_rep(word))],
        'exponent_sum': braid3.exponent_sum(word),
        'trivial': braid3.is_trivial(word),
        'closure': braid3.closure_link(word).to_dict(),
    }


def cmd_braid(args, settings: Settings) -> RunReport:
    word = braid3.parse_braid(args.word)
    return RunReport('braid', {'word': args.word}, _braid_outputs(word))


def cmd_scheme2braid(args, settings: Settings) -> RunReport:
    scheme = parse_scheme(args.scheme)
    word = to_braid(scheme, Bidegree.from_b(args.b))
    return RunReport('scheme2braid', {'scheme': scheme.render(), 'b': args.b},
                     _braid_outputs(word))


def _positivity_check(report: RunReport, scheme, b: int, beta: int, label: str) -> None:
    link = scheme_link(scheme, b)
    report.check(
        f'{label}positive_linking',
        link.component_count == 3 and all(v >= 0 for v in link.lk.values())
        and link.total_lk == beta,
        components=link.component_count, total_lk=link.total_lk, beta=beta,
    )


def _trace_inputs(args) -> Tuple[str, str]:
    """--cheb a[@s] sets Q = T_a(t + s); P then defaults to T_3."""
    q_text = f'cheb:{args.cheb}' if args.cheb else args.Q
    p_text = args.P or ('cheb:3' if args.cheb else None)
    if args.cheb and args.Q:
        raise ValueError("give either --Q or --cheb, not both")
    if not (p_text and q_text):
        raise ValueError("trace needs --P and --Q, --cheb, or --random")
    return p_text, q_text


def cmd_trace(args, settings: Settings) -> RunReport:
    if args.random:
        return _trace_random(args, settings)
    p_text, q_text = _trace_inputs(args)
    m = PolyMap.parse(p_text, q_text)
    traced = analyze_curve(m, settings.refine_limit_bits)
    scheme = extract_lscheme(m, traced)
    report = RunReport('trace', {'P': p_text, 'Q': q_text},
                       {**traced.to_dict(), 'scheme': scheme.render()})
    if args.svg:
        report.outputs['svg'] = str(svg.emit_svg(traced, settings.resolve_output(args.svg)))
    nodes = node_identity_check(m, traced)
    report.check('node_identity', nodes.holds, **nodes.to_dict())
    _positivity_check(report, scheme, traced.b, traced.beta, '')
    return report


def _trace_random(args, settings: Settings) -> RunReport:
    seed = settings.seed if args.seed is None else args.seed
    rng = random.Random(seed)
    report = RunReport('trace', {'random': args.random, 'seed': seed,
                                 'b_range': [args.b_min, args.b_max]})
    successes, refused = 0, 0
    for i in range(args.random):
        b = rng.randint(args.b_min, args.b_max)
        m = random_polymap(rng, b)
        try:
            traced = analyze_curve(m, settings.refine_limit_bits)
        except (DegenerateCurve, NotReducible) as exc:
            logger.debug(f"map {i} refused: {exc.message}")
            refused += 1
            continue
        successes += 1
        scheme = extract_lscheme(m, traced)
        nodes = node_identity_check(m, traced)
        report.check(f'map{i}_node_identity', nodes.holds, **nodes.to_dict())
        _positivity_check(report, scheme, traced.b, traced.beta, f'map{i}_')
    report.outputs = {'analyzed': successes, 'refused': refused}
    return report


def cmd_harmonic(args, settings: Settings) -> RunReport:
    diagram = harmonic_diagram(args.a, args.b, args.c)
    report = RunReport('harmonic', {'a': args.a, 'b': args.b, 'c': args.c}, diagram.to_dict())
    report.outputs['crossing_count'] = diagram.crossing_count
    try:
        report.outputs['fraction'] = identify_trigonal_diagram(diagram).to_dict()
    except TrigonalError as exc:
        report.outputs['fraction'] = None
        report.outputs['identification_error'] = exc.message
    if args.svg:
        report.outputs['svg'] = str(svg.emit_svg(diagram, settings.resolve_output(args.svg)))
    return report


def _spec_from_args(args) -> TwoBridgeSpec:
    if args.torus is not None:
        return Torus(args.torus)
    if args.twist is not None:
        return Twist(*args.twist)
    raise ValueError("give --torus m or --twist m n")


def cmd_degree(args, settings: Settings) -> RunReport:
    spec = _spec_from_args(args)
    n = crossing_number(spec)
    claim = harmonic_degree_claim(n)
    return RunReport('degree', {'spec': spec.to_dict()}, {
        'N': n,
        'fraction': spec_fraction(spec).to_dict(),
        'lexicographic_degree': lexdeg_theorem_main(n).to_dict(),
        'general_lower_bound': lexdeg_lower_general(n).to_dict(),
        'harmonic_claim': claim.to_dict() if claim else None,
    })


def cmd_frobenius(args, settings: Settings) -> RunReport:
    result = certifier.frobenius_count(args.a, args.b)
    report = RunReport('frobenius', {'a': args.a, 'b': args.b}, result.to_dict())
    report.check('count_matches', result.count == result.expected)
    report.check('frobenius_number_absent', not result.frobenius_representable)
    report.check('pairing', certifier.frobenius_pairing(args.a, args.b))
    return report


def cmd_zreduce(args, settings: Settings) -> RunReport:
    x, y, z = parse_poly(args.x), parse_poly(args.y), parse_poly(args.z)
    result = certifier.z_reduce(x, y, z)
    report = RunReport('zreduce', {'x': args.x, 'y': args.y, 'z': args.z}, result.to_dict())
    report.check('interpolates', result.interpolates)
    report.check('alternates', result.alternates)
    return report


def cmd_certify(args, settings: Settings) -> RunReport:
    spec = _spec_from_args(args)
    obstruction = certifier.certify_lower_bound(spec, args.b)
    report = RunReport('certify', {'spec': spec.to_dict(), 'b': args.b}, obstruction.to_dict())
    if obstruction.witness is not None:
        report.outputs['witness_link'] = certifier.braid_summary(obstruction.witness, args.b)
    return report


def cmd_scan(args, settings: Settings) -> RunReport:
    spec = _spec_from_args(args)
    result = certifier.lower_bound_scan(spec, args.max_b)
    report = RunReport('scan', {'spec': spec.to_dict()}, result.to_dict())
    report.check('matches_lexicographic_degree',
                 result.first_feasible == certifier.critical_degree(spec),
                 first_feasible=result.first_feasible,
                 expected=certifier.critical_degree(spec))
    return report


def cmd_bounds(args, settings: Settings) -> RunReport:
    outputs: Dict[str, Any] = {
        'max_crossings': certifier.max_crossing_bound(args.degree, args.alternating),
    }
    if args.three_bridge:
        outputs['three_bridge'] = certifier.three_bridge_degree(args.three_bridge).to_dict()
    return RunReport('bounds', {'degree': args.degree, 'alternating': args.alternating}, outputs)


def cmd_lattice(args, settings: Settings) -> RunReport:
    counted, formula = interior_lattice_points(args.b), lattice_point_formula(args.b)
    report = RunReport('lattice', {'b': args.b}, {'interior_points': counted, 'formula': formula})
    report.check('pick_formula', counted == formula)
    if args.b % 3:
        report.check('genus_bound', counted == args.b - 1)
    return report


def run_worked_example(shift: str = WORKED_SHIFT) -> RunReport:
    """
    Trace (T3(t), T4(t + shift)), check the traced scheme, move it to the worked
    form by one crossing-past-minimum rewrite, and check the braid words.
    """
    m = PolyMap(chebyshev(3), shifted(chebyshev(4), Fraction(shift)))
    traced = analyze_curve(m)
    traced_scheme = extract_lscheme(m, traced)
    worked = apply_rewrite(
        traced_scheme, RewriteRule(RuleFamily.CROSSING_PAST_MIN, Direction.FORWARD, 1)
    )
    d = Bidegree.from_b(m.b)
    word = to_braid(worked, d)
    traced_word = to_braid(traced_scheme, d)

    report = RunReport('example25', {'shift': shift}, {
        'counts': {'N': traced.N, 'alpha': traced.alpha, 'beta': traced.beta},
        'traced_scheme': traced_scheme.render(),
        'scheme': worked.render(),
        'braid': braid3.render_braid(word),
        'traced_braid': braid3.render_braid(traced_word),
    })
    report.check('traced_scheme', traced_scheme.render() == TRACED_SCHEME,
                 got=traced_scheme.render())
    report.check('scheme', worked.render() == WORKED_SCHEME, got=worked.render())
    report.check('braid', braid3.is_trivial(braid3.concat(word, braid3.inverse(WORKED_BRAID))),
                 got=list(word), literal=word == WORKED_BRAID)
    report.check('trivial', braid3.is_trivial(word))
    report.check('traced_braid_agrees',
                 braid3.is_trivial(braid3.concat(traced_word, braid3.inverse(word))))
    return report


def cmd_example25(args, settings: Settings) -> RunReport:
    return run_worked_example(args.shift)


def cmd_svg(args, settings: Settings) -> RunReport:
    if args.kind == 'scheme':
        obj = parse_scheme(args.input)
    elif args.kind == 'braid':
        obj = braid3.parse_braid(args.input)
    elif args.kind == 'curve':
        p_text, _, q_text = args.input.partition(';')
        obj = analyze_curve(PolyMap.parse(p_text, q_text), settings.refine_limit_bits)
    else:
        a, b, c = (int(v) for v in args.input.split(','))
        obj = harmonic_diagram(a, b, c)
    path = svg.emit_svg(obj, settings.resolve_output(args.out))
    return RunReport('svg', {'kind': args.kind, 'input': args.input}, {'path': str(path)})


# Parser

def _add_spec_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument('--torus', type=int, metavar='M', help='C(m), m odd')
    group.add_argument('--twist', type=int, nargs=2, metavar=('M', 'N'), help='C(m,n), mn even')


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true', help='print the report as JSON')
    common.add_argument('--verbose', action='store_true', help='debug logging')
    common.add_argument('--seed', type=int, default=None, help='seed for randomized batches')

    parser = argparse.ArgumentParser(
        prog='trigonal-knots',
        description='Braids of real trigonal curves and degree bounds for two-bridge knots',
    )
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('parse', parents=[common], help='validate an L-scheme')
    p.add_argument('scheme')
    p.set_defaults(handler=cmd_parse)

    p = sub.add_parser('rewrite', parents=[common], help='apply or list rewrite moves')
    p.add_argument('scheme')
    p.add_argument('--rule', type=int, choices=[int(f) for f in RuleFamily])
    p.add_argument('--direction', choices=[d.value for d in Direction], default='forward')
    p.add_argument('--position', type=int, default=0)
    p.add_argument('--index', type=int, choices=[1, 2])
    p.set_defaults(handler=cmd_rewrite)

    p = sub.add_parser('reduce', parents=[common], help='search for an alternating scheme')
    p.add_argument('scheme')
    p.add_argument('--max-steps', type=int, default=None)
    p.set_defaults(handler=cmd_reduce)

    p = sub.add_parser('braid', parents=[common], help='analyze a 3-braid word')
    p.add_argument('word')
    p.set_defaults(handler=cmd_braid)

    p = sub.add_parser('scheme2braid', parents=[common], help='braid of a scheme in degree b')
    p.add_argument('scheme')
    p.add_argument('--b', type=int, required=True)
    p.set_defaults(handler=cmd_scheme2braid)

    p = sub.add_parser('trace', parents=[common], help='trace a polynomial map (P, Q)')
    p.add_argument('--P', help='low-to-high coefficients or cheb:a[@s]')
    p.add_argument('--Q', help='low-to-high coefficients or cheb:a[@s]')
    p.add_argument('--cheb', default=None, metavar='A[@S]',
                   help='height T_a(t + s); P defaults to T_3')
    p.add_argument('--random', type=int, default=0, metavar='COUNT')
    p.add_argument('--b-min', type=int, default=2)
    p.add_argument('--b-max', type=int, default=8)
    p.add_argument('--svg', default=None, help='write the real curve with its events')
    p.set_defaults(handler=cmd_trace)

    p = sub.add_parser('harmonic', parents=[common], help='diagram of H(a,b,c)')
    p.add_argument('a', type=int)
    p.add_argument('b', type=int)
    p.add_argument('c', type=int)
    p.add_argument('--svg', default=None)
    p.set_defaults(handler=cmd_harmonic)

    p = sub.add_parser('degree', parents=[common], help='lexicographic degree formulas')
    _add_spec_options(p)
    p.set_defaults(handler=cmd_degree)

    p = sub.add_parser('frobenius', parents=[common], help='Frobenius counting check')
    p.add_argument('a', type=int)
    p.add_argument('b', type=int)
    p.set_defaults(handler=cmd_frobenius)

    p = sub.add_parser('zreduce', parents=[common], help='height reduction certificate')
    p.add_argument('--x', required=True)
    p.add_argument('--y', required=True)
    p.add_argument('--z', required=True)
    p.set_defaults(handler=cmd_zreduce)

    p = sub.add_parser('certify', parents=[common], help='linking-number obstruction at b')
    _add_spec_options(p)
    p.add_argument('--b', type=int, required=True)
    p.set_defaults(handler=cmd_certify)

    p = sub.add_parser('scan', parents=[common], help='first feasible b for a knot')
    _add_spec_options(p)
    p.add_argument('--max-b', type=int, default=None)
    p.set_defaults(handler=cmd_scan)

    p = sub.add_parser('bounds', parents=[common], help='crossing-number bounds')
    p.add_argument('--degree', type=int, required=True)
    p.add_argument('--alternating', action='store_true')
    p.add_argument('--three-bridge', type=int, default=None, metavar='B')
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser('lattice', parents=[common], help='Newton triangle lattice points')
    p.add_argument('--b', type=int, required=True)
    p.set_defaults(handler=cmd_lattice)

    p = sub.add_parser('example25', parents=[common], help='reproduce the worked example')
    p.add_argument('--shift', default=WORKED_SHIFT)
    p.set_defaults(handler=cmd_example25)

    p = sub.add_parser('svg', parents=[common], help='write an SVG picture')
    p.add_argument('kind', choices=['scheme', 'braid', 'curve', 'harmonic'])
    p.add_argument('input', help="scheme text, braid word, 'P;Q' or 'a,b,c'")
    p.add_argument('--out', required=True)
    p.set_defaults(handler=cmd_svg)
    return parser


def _print_text(report: RunReport) -> None:
    print(f"{report.command}:")
    for key, value in report.outputs.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value)
        print(f"  {key}: {value}")
    for check in report.checks:
        print(f"  [{'PASS' if check.passed else 'FAIL'}] {check.name}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = Settings.from_env()
    configure_logging(settings, verbose=args.verbose)
    try:
        report = args.handler(args, settings)
    except TrigonalError as exc:
        logger.error(f"{args.command} refused: {exc.message}")
        payload = exc.to_dict()
        print(json.dumps(payload, indent=2) if args.json else f"error: {exc.message}",
              file=sys.stdout if args.json else sys.stderr)
        return exc.exit_code
    except (ValueError, OSError) as exc:
        logger.error(f"{args.command} failed: {exc}")
        payload = {'success': False, 'error': str(exc), 'error_type': type(exc).__name__}
        print(json.dumps(payload, indent=2) if args.json else f"error: {exc}",
              file=sys.stdout if args.json else sys.stderr)
        return 2

    if args.json:
        print(json.dumps(report.to_dict(), indent=2, default=str))
    else:
        _print_text(report)
    return 0 if report.success else CHECK_FAILED


if __name__ == '__main__':
    sys.exit(main())
