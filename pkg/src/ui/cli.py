"""
Command-line frontend.

Exit codes: 0 definite answer, 1 bounded search inconclusive (NotFound / NoneFound
or an interrupted search), 2 usage, parse, config or checkpoint error, 3 violated
mathematical precondition, 4 unexpected internal error.
"""

import argparse
import logging
import re
import sys
from typing import Callable, Dict, List, Optional

import pandas as pd

from algebra.errors import CheckpointError, ConfigError, PolyParseError, PreconditionError
from algebra.laurent_poly import (
    WeightVector,
    linear_substitute,
    to_rational,
    weighted_components,
)
from algebra.poly_parser import parse_poly
from analysis.etale_search import EtaleSearch, SearchSpace, etale_pair_check
from analysis.grading import lemma_obstruction, negative_degree_factor, regularizing_transform, verify_no_regular_elements
from analysis.integrality import integrality_certificate
from config.settings import Config, load_config, parse_rational_list
from database.db_manager import DatabaseManager
from models.hirzebruch import (
    ZERO_CLASS,
    HirzebruchClass,
    SectionData,
    canonical_class,
    canonical_via_section,
    generator_condition_report,
    intersect,
    ramification_canonical,
    restrict_to_complement,
    section_class,
    wright_generator_count,
)
from models.wright_algebra import (
    CanonicalIndex3Algebra,
    WrightAlgebra,
    chart_transform,
    chart_witness,
    express_in_generators,
    is_member,
)
from ui.formatting import Output, bool_text, class_data, class_text, components_text

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INCONCLUSIVE = 1
EXIT_USAGE = 2
EXIT_PRECONDITION = 3
EXIT_INTERNAL = 4


class UsageError(Exception):
    """Raised instead of argparse's own exit so ``main`` can return a code"""


class _ArgumentParser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # values such as -1,0,1 or -2/3 are arguments, never options
        self._negative_number_matcher = re.compile(r"^-\.?\d")

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', default=argparse.SUPPRESS, help='Flat key = value config file')
    common.add_argument('--json', action='store_true', default=argparse.SUPPRESS,
                        help='Emit JSON lines instead of text')
    common.add_argument('--record', action='store_true', default=argparse.SUPPRESS,
                        help='Record search, cert and verify-lemma results in the database')
    return common


def _algebra_options(parser: argparse.ArgumentParser):
    parser.add_argument('--m', type=int, help='Wright algebra parameter m (>= 2)')
    parser.add_argument('--alphas', help='Comma-separated alpha_1..alpha_{m-1}, e.g. 0,1')


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = _ArgumentParser(prog='wright-toolkit', parents=[common],
                             description='Exact algebra toolkit for Wright coordinate rings')
    commands = parser.add_subparsers(dest='command', parser_class=_ArgumentParser)
    commands.required = True

    member = commands.add_parser('member', parents=[common], help='Decide membership via the chart criterion')
    _algebra_options(member)
    member.add_argument('poly')

    express = commands.add_parser('express', parents=[common], help='Rewrite a polynomial in T0..Tm')
    _algebra_options(express)
    express.add_argument('--bound', type=int, help='T-degree bound (default: y-degree + total degree)')
    express.add_argument('poly')

    decompose = commands.add_parser('decompose', parents=[common], help='Weighted homogeneous components')
    decompose.add_argument('--wx', type=int, default=-1)
    decompose.add_argument('--wy', type=int, default=2)
    decompose.add_argument('poly')

    factor = commands.add_parser('factor-neg', parents=[common], help='Factor a negative-degree element')
    factor.add_argument('--alpha')
    factor.add_argument('poly')

    regularize = commands.add_parser('regularize', parents=[common], help='Regularizing linear substitution')
    regularize.add_argument('poly')

    jacobian = commands.add_parser('jacobian', parents=[common], help='Jacobian determinant of a pair')
    jacobian.add_argument('p')
    jacobian.add_argument('q')

    search = commands.add_parser('search', parents=[common], help='Bounded constant-Jacobian search')
    _algebra_options(search)
    search.add_argument('--bound', type=int, help='T-degree bound (>= 1)')
    search.add_argument('--coeffs', help='Comma-separated coefficient set containing 0')
    search.add_argument('--resume', metavar='FILE', help='Resume from and keep writing this checkpoint')
    search.add_argument('--checkpoint', metavar='FILE', help='Write a checkpoint without resuming')
    search.add_argument('--workers', type=int)
    search.add_argument('--chunk-size', type=int)
    search.add_argument('--stop-after', type=int, help='Stop after this many expressions')
    search.add_argument('--no-prefilter', action='store_true', help='Solve every expression exactly')

    lemma = commands.add_parser('verify-lemma', parents=[common], help='Certify that no member is regular in x and y')
    lemma.add_argument('--alpha')
    lemma.add_argument('--max-degree', type=int)
    lemma.add_argument('--slack', type=int)
    lemma.add_argument('--workers', type=int)

    lemma_check = commands.add_parser('lemma-check', parents=[common], help='Regularize a polynomial and test membership')
    lemma_check.add_argument('--alpha')
    lemma_check.add_argument('poly')

    cert = commands.add_parser('cert', parents=[common], help='Integrality certificate search')
    cert.add_argument('--h', required=True)
    cert.add_argument('--p', required=True)
    cert.add_argument('--q', required=True)
    cert.add_argument('--dmax', type=int)
    cert.add_argument('--cmax', type=int)

    surface = commands.add_parser('surface', parents=[common], help='Hirzebruch surface arithmetic')
    surface_commands = surface.add_subparsers(dest='surface_command', parser_class=_ArgumentParser)
    surface_commands.required = True
    s_intersect = surface_commands.add_parser('intersect', parents=[common])
    for name in ('--n', '--a1', '--b1', '--a2', '--b2'):
        s_intersect.add_argument(name, type=int, required=True)
    s_canonical = surface_commands.add_parser('canonical', parents=[common])
    s_canonical.add_argument('--n', type=int, required=True)
    for name in ('section', 'canonical-via-section', 'generators'):
        sub = surface_commands.add_parser(name, parents=[common])
        sub.add_argument('--n', type=int, required=True)
        sub.add_argument('--s2', type=int, required=True)
    s_restrict = surface_commands.add_parser('restrict', parents=[common])
    for name in ('--n', '--s2', '--a', '--b'):
        s_restrict.add_argument(name, type=int, required=True)
    s_ramify = surface_commands.add_parser('ramify', parents=[common])
    for name in ('--n', '--ra', '--rb'):
        s_ramify.add_argument(name, type=int, required=True)
    s_ramify.add_argument('--ka', type=int, help='Pullback class C0-coefficient (default: zero class)')
    s_ramify.add_argument('--kb', type=int)
    s_dg = surface_commands.add_parser('dg-index', parents=[common])
    s_dg.add_argument('--max-n', type=int, default=10)

    dg = commands.add_parser('dg-index', parents=[common], help='Index forced by the generator condition')
    dg.add_argument('--max-n', type=int, default=10)

    history = commands.add_parser('history', parents=[common], help='List recorded runs')
    history.add_argument('--limit', type=int, default=10)

    return parser


# Helpers

def _algebra(args, config: Config) -> WrightAlgebra:
    m = args.m if args.m is not None else config.m
    alphas = parse_rational_list(args.alphas) if args.alphas else config.alphas
    return WrightAlgebra(m, alphas)


def _canonical(args, config: Config) -> CanonicalIndex3Algebra:
    alpha = to_rational(args.alpha) if args.alpha is not None else config.alpha
    return CanonicalIndex3Algebra(alpha)


def _database(config: Config) -> DatabaseManager:
    return DatabaseManager(config.db_path)


# Commands

def _cmd_member(args, config: Config, out: Output) -> int:
    algebra = _algebra(args, config)
    p = parse_poly(args.poly)
    member = is_member(algebra, p)
    chart = chart_transform(algebra, p)
    witness = None if member else chart_witness(algebra, p).to_text()
    lines = [bool_text(member)]
    if witness is not None:
        lines.append(f"witness: {witness}")
    out.emit(lines, {'member': member, 'chart': chart.to_text(), 'witness': witness,
                     'algebra': algebra.to_dict()})
    return EXIT_OK


def _cmd_express(args, config: Config, out: Output) -> int:
    algebra = _algebra(args, config)
    p = parse_poly(args.poly)
    expression = express_in_generators(algebra, p, args.bound)
    if expression is None:
        out.emit(['NotFound'], {'expression': None, 'result': 'NotFound'})
        return EXIT_INCONCLUSIVE
    out.emit([expression.to_text()], {'expression': expression.to_text(), 'symbols': list(expression.symbols)})
    return EXIT_OK


def _cmd_decompose(args, config: Config, out: Output) -> int:
    components = weighted_components(parse_poly(args.poly), WeightVector(args.wx, args.wy))
    out.emit(components_text(components),
             {'weights': [args.wx, args.wy],
              'components': {str(degree): poly.to_text() for degree, poly in components.items()}})
    return EXIT_OK


def _cmd_factor(args, config: Config, out: Output) -> int:
    algebra = _canonical(args, config)
    result = negative_degree_factor(algebra, parse_poly(args.poly))
    out.emit([f"m = {result.m}", f"g = {result.g_text()}"], {'m': result.m, 'g': result.g_text()})
    return EXIT_OK


def _cmd_regularize(args, config: Config, out: Output) -> int:
    p = parse_poly(args.poly)
    linear_map = regularizing_transform(p)
    result = linear_substitute(p, linear_map).to_text(('v', 'w'))
    out.emit([f"map: {linear_map.entries_text()}", str(linear_map), f"result: {result}"],
             {'map': linear_map.to_dict(), 'result': result})
    return EXIT_OK


def _cmd_jacobian(args, config: Config, out: Output) -> int:
    check = etale_pair_check(parse_poly(args.p), parse_poly(args.q))
    out.emit([check.jacobian.to_text(), f"constant_nonzero={bool_text(check.constant_nonzero)}"],
             {'jacobian': check.jacobian.to_text(), 'constant_nonzero': check.constant_nonzero})
    return EXIT_OK


def _cmd_search(args, config: Config, out: Output) -> int:
    algebra = _algebra(args, config)
    bound = args.bound if args.bound is not None else config.t_degree_bound
    coefficients = parse_rational_list(args.coeffs) if args.coeffs else config.coefficients
    space = SearchSpace(algebra, bound, coefficients)
    search = EtaleSearch(space,
                         workers=args.workers or config.workers,
                         chunk_size=args.chunk_size or config.chunk_size,
                         use_prefilter=not args.no_prefilter)
    checkpoint = args.resume or args.checkpoint or config.checkpoint_path

    def on_candidate(candidate):
        data = candidate.to_dict()
        out.emit([f"p = {data['p']} ; q = {data['q']} ; J = {data['jacobian']}"], {'candidate': data})

    report = search.run(checkpoint_path=checkpoint, resume=bool(args.resume),
                        stop_after=args.stop_after, on_candidate=on_candidate)
    summary = {key: value for key, value in report.to_dict().items() if key != 'candidates'}
    lines = [
        f"candidates: {len(report.candidates)}",
        f"expressions: {space.size}",
        f"enumerated: {report.enumerated}",
        f"exact solves: {report.prefilter_survivors}",
        f"members checked: {report.members_checked}",
        f"regular members: {report.violation_count}",
        f"completed: {bool_text(report.completed)}",
    ]
    if report.counterexample:
        lines.insert(0, "COUNTEREXAMPLE CANDIDATE: constant-Jacobian pair in the canonical index-3 algebra; "
                        "verify independently")
    out.emit(lines, {'summary': summary})
    if getattr(args, 'record', False):
        _database(config).save_search_run(report.to_dict(), report.elapsed)
    return EXIT_OK if report.completed else EXIT_INCONCLUSIVE


def _cmd_verify_lemma(args, config: Config, out: Output) -> int:
    algebra = _canonical(args, config)
    max_degree = args.max_degree if args.max_degree is not None else config.max_degree
    slack = args.slack if args.slack is not None else config.slack
    report = verify_no_regular_elements(algebra, max_degree, slack=slack, workers=args.workers or config.workers)
    lines = report.to_frame().to_string(index=False).splitlines() + [f"verdict: {report.verdict}"]
    out.emit(lines, report.to_dict())
    if getattr(args, 'record', False):
        _database(config).save_lemma_report(report.to_dict())
    return EXIT_OK


def _cmd_lemma_check(args, config: Config, out: Output) -> int:
    algebra = _canonical(args, config)
    report = lemma_obstruction(algebra, parse_poly(args.poly))
    data = report.to_dict()
    out.emit([
        f"map: {report.linear_map.entries_text()}",
        f"transformed: {data['transformed']}",
        f"regular in v: {bool_text(report.regular_in_v)}",
        f"regular in w: {bool_text(report.regular_in_w)}",
        f"member: {bool_text(report.member)}",
        f"transformed member: {bool_text(report.transformed_member)}",
        f"violation: {bool_text(report.violation)}",
    ], data)
    return EXIT_OK


def _cmd_cert(args, config: Config, out: Output) -> int:
    h, p, q = parse_poly(args.h), parse_poly(args.p), parse_poly(args.q)
    d_max = args.dmax if args.dmax is not None else config.d_max
    cmax = args.cmax if args.cmax is not None else config.coeff_degree_max
    certificate = integrality_certificate(h, p, q, d_max, cmax)
    if getattr(args, 'record', False):
        _database(config).save_certificate(h.to_text(), p.to_text(), q.to_text(), d_max, cmax,
                                           certificate.to_dict() if certificate else None)
    if certificate is None:
        out.emit([f"NoneFound (d <= {d_max}, coefficient degree <= {cmax}; not a proof of non-integrality)"],
                 {'certificate': None, 'result': 'NoneFound', 'd_max': d_max, 'coeff_degree_max': cmax})
        return EXIT_INCONCLUSIVE
    lines = [f"d = {certificate.d}"]
    lines += [f"a{i} = {a.to_text()}" for i, a in enumerate(certificate.coefficients, start=1)]
    lines.append(f"relation: {certificate.relation_text()}")
    out.emit(lines, {'certificate': certificate.to_dict()})
    return EXIT_OK


def _cmd_dg_index(args, config: Config, out: Output) -> int:
    report = generator_condition_report(args.max_n)
    out.emit([str(report.index)], report.to_dict())
    return EXIT_OK


def _cmd_surface(args, config: Config, out: Output) -> int:
    command = args.surface_command
    if command == 'intersect':
        value = intersect(HirzebruchClass(args.n, args.a1, args.b1), HirzebruchClass(args.n, args.a2, args.b2))
        out.emit([str(value)], {'intersection': value})
    elif command == 'canonical':
        k = canonical_class(args.n)
        out.emit([class_text(k)], class_data(k))
    elif command == 'section':
        s = section_class(SectionData(args.n, args.s2))
        out.emit([class_text(s)], class_data(s))
    elif command == 'canonical-via-section':
        k = canonical_via_section(SectionData(args.n, args.s2))
        out.emit([class_text(k)], class_data(k))
    elif command == 'generators':
        count = wright_generator_count(SectionData(args.n, args.s2))
        out.emit([str(count)], {'generators': count, 'm': count - 1})
    elif command == 'restrict':
        value = restrict_to_complement(SectionData(args.n, args.s2), HirzebruchClass(args.n, args.a, args.b))
        out.emit([str(value)], {'restriction': value})
    elif command == 'ramify':
        pullback = ZERO_CLASS
        if args.ka is not None or args.kb is not None:
            pullback = HirzebruchClass(args.n, args.ka or 0, args.kb or 0)
        k = ramification_canonical(pullback, HirzebruchClass(args.n, args.ra, args.rb))
        out.emit([class_text(k)], class_data(k))
    else:
        return _cmd_dg_index(args, config, out)
    return EXIT_OK


def _cmd_history(args, config: Config, out: Output) -> int:
    db = _database(config)
    runs = db.get_search_runs(args.limit)
    certificates = db.get_certificates(args.limit)
    lemmas = db.get_lemma_reports(args.limit)
    lines = [f"search runs: {db.get_run_count()}"]
    lines += [f"  #{r['id']} {r['space']} candidates={r['candidates_found']} completed={bool_text(r['completed'])}"
              for r in runs]
    lines.append(f"certificates: {len(certificates)}")
    lines += [f"  #{c['id']} h={c['h']} p={c['p']} q={c['q']} "
              f"{c['relation'] if c['found'] else 'NoneFound'}" for c in certificates]
    lines.append(f"lemma reports: {len(lemmas)}")
    lines += [f"  #{r['id']} alpha={r['alpha']} D={r['max_degree']} {r['verdict']}" for r in lemmas]

    def plain(records: List[Dict]) -> List[Dict]:
        return [{key: (None if pd.isna(value) else value.item() if hasattr(value, "item") else value)
                 for key, value in record.items()} for record in records]

    out.emit(lines, {'search_runs': plain(runs), 'certificates': plain(certificates), 'lemma_reports': plain(lemmas)})
    return EXIT_OK


COMMANDS: Dict[str, Callable] = {
    'member': _cmd_member,
    'express': _cmd_express,
    'decompose': _cmd_decompose,
    'factor-neg': _cmd_factor,
    'regularize': _cmd_regularize,
    'jacobian': _cmd_jacobian,
    'search': _cmd_search,
    'verify-lemma': _cmd_verify_lemma,
    'lemma-check': _cmd_lemma_check,
    'cert': _cmd_cert,
    'surface': _cmd_surface,
    'dg-index': _cmd_dg_index,
    'history': _cmd_history,
}


def main(argv: Optional[List[str]] = None, stdout=None) -> int:
    """
    Run one CLI command

    Args:
        argv: Arguments without the program name; defaults to ``sys.argv[1:]``
        stdout: Stream for command output; defaults to ``sys.stdout``

    Returns:
        Process exit code
    """
    out = Output('text', stdout)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        out.error('UsageError', str(e))
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return int(e.code or 0)

    try:
        config = load_config(getattr(args, 'config', None))
        if getattr(args, 'json', False):
            config = config.override(output='json')
        config.validate()
        out.mode = config.output
        return COMMANDS[args.command](args, config, out)
    except (PolyParseError, ConfigError, CheckpointError) as e:
        out.error(type(e).__name__, str(e))
        return EXIT_USAGE
    except PreconditionError as e:
        out.error(type(e).__name__, str(e))
        return EXIT_PRECONDITION
    except KeyboardInterrupt:
        logger.warning("Interrupted by user")
        out.error('Interrupted', 'stopped before completion; resume from the checkpoint if one was written')
        return EXIT_INCONCLUSIVE
    except Exception as e:
        logger.exception(f"Unexpected error in {args.command}: {e}")
        out.error('InternalError', f"{type(e).__name__}: {e}")
        return EXIT_INTERNAL


if __name__ == '__main__':
    sys.exit(main())
