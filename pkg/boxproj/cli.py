"""
Command line front end: ``boxproj generate|analyze|sweep|diagnose``.

Exit codes: 0 success, 2 usage or validation error, 3 I/O error.
"""

import argparse
import logging
import sys

import numpy as np

from . import __version__
from .charts import render_sweep_chart
from .cluster import (
    BinaryPartition,
    analytic_min_error,
    empirical_min_error,
    empirical_scatter,
    find_separable_axis,
)
from .conf import get_settings
from .exceptions import BoxprojError, CapacityError, InvalidParameterError
from .formats import (
    pointset_to_csv,
    projection_to_csv,
    read_pointset_csv,
    read_text,
    sweep_to_csv,
    write_text,
)
from .middleware import CommandResult, ExitCodeMiddleware, ManifestMiddleware, TimingMiddleware
from .models import (
    BoxSpec,
    GaussianMixtureSpec,
    enumerate_box_vertices,
    pairwise_distance_range,
    sample_box,
    sample_gaussian_mixture,
)
from .montecarlo import (
    BRUTE_FORCE_CAP,
    brute_force_cluster_search,
    default_d_grid,
    default_r_grid,
    error_distribution_diagnostic,
    iter_bipartitions,
    ks_critical_value,
    lemma1_diagnostic,
    separable_axis_histogram,
    sweep,
    whitening_comparison,
)
from .projection import ProjectionVector, SeedSpec, project, random_unit_vector
from .schemas import spec_from_json

logger = logging.getLogger(__name__)


def _float_list(text):
    try:
        return [float(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected comma separated numbers, got {text!r}')


def _u64(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected an unsigned 64-bit integer, got {text!r}')
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f'seed {value} does not fit in 64 unsigned bits')
    return value


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected a positive integer, got {text!r}')
    if value < 1:
        raise argparse.ArgumentTypeError(f'expected a positive integer, got {value}')
    return value


def _model_spec(args):
    """Resolve --spec or the --model/--dim/--ratio/--separation flags to a spec."""
    if getattr(args, 'spec', None):
        return spec_from_json(read_text(args.spec))
    if args.model == 'mixture':
        return GaussianMixtureSpec(args.dim, args.separation, args.direction)
    return BoxSpec(args.dim, args.ratio, allow_any_ratio=args.allow_any_ratio)


def _workers():
    return get_settings().threads


# generate


def cmd_generate(args):
    """Write a sampled or enumerated point set."""
    spec = _model_spec(args)
    parameters = {'model_spec': spec.to_dict(), 'enumerate': args.enumerate, 'format': args.format}
    if args.enumerate:
        if not isinstance(spec, BoxSpec):
            raise InvalidParameterError('--enumerate only applies to box models')
        point_set = enumerate_box_vertices(spec)
        seed = None
    else:
        seed = args.seed
        parameters.update({'n': args.n, 'seed': seed})
        sampler = sample_box if isinstance(spec, BoxSpec) else sample_gaussian_mixture
        point_set = sampler(spec, args.n, SeedSpec(seed, 0))
    logger.info('generated %d points in R^%d', point_set.n, point_set.dim)

    result = CommandResult('generate', parameters, master_seed=seed)
    if args.format == 'json':
        result.payload = point_set.to_dict()
        result.report_path = args.out
        return result
    text = pointset_to_csv(point_set)
    if args.out:
        write_text(args.out, text)
        result.outputs.append(args.out)
    else:
        result.stdout = text
    return result


# analyze


def _direction(args, dim):
    if args.axis is not None:
        return ProjectionVector.basis(dim, args.axis)
    if args.direction is not None:
        if len(args.direction) != dim:
            raise InvalidParameterError(
                f'--direction has {len(args.direction)} components, points have {dim}'
            )
        return ProjectionVector(args.direction)
    return random_unit_vector(dim, SeedSpec(args.direction_seed, 0))


def cmd_analyze(args):
    """Project a point set and score every latent split."""
    spec = spec_from_json(read_text(args.spec)) if args.spec else None
    point_set = read_pointset_csv(args.points, spec)
    if point_set.latent_labels is None and not args.projection_only:
        raise InvalidParameterError(
            f'{args.points} has no latent label columns; split reports need labels '
            '(use --projection-only to skip them)'
        )
    v = _direction(args, point_set.dim)
    values = project(point_set, v)

    report = {
        'points': args.points,
        'n': point_set.n,
        'dim': point_set.dim,
        'direction': v.to_dict(),
        'projection': {
            'mean': float(values.mean()),
            'variance': float(values.var()),
            'min': float(values.min()),
            'max': float(values.max()),
        },
        'splits': [],
    }
    if isinstance(spec, BoxSpec):
        report['separable_axis'] = find_separable_axis(v, spec.scales)

    if not args.projection_only:
        if isinstance(spec, GaussianMixtureSpec):
            unit = v if v.normalized else v.normalize()
        for axis in range(1, point_set.latent_labels.shape[1] + 1):
            labels = point_set.labels_for(axis)
            if labels.min() == labels.max():
                report['splits'].append({'axis': axis, 'degenerate': True})
                continue
            part = BinaryPartition(labels)
            threshold = empirical_min_error(values, labels)
            if isinstance(spec, GaussianMixtureSpec):
                dot = float(np.dot(spec.direction, unit.coords))
                threshold = threshold.with_analytic(analytic_min_error(spec.separation, dot))
            report['splits'].append({
                'axis': axis,
                'scatter': empirical_scatter(point_set, part).to_dict(),
                'projected_scatter': empirical_scatter(values, part).to_dict(),
                'threshold': threshold.to_dict(),
            })

    outputs = []
    if args.projection_out:
        write_text(args.projection_out, projection_to_csv(values))
        outputs.append(args.projection_out)
    parameters = {
        'points': args.points,
        'spec': spec.to_dict() if spec is not None else None,
        'axis': args.axis,
        'direction': args.direction,
        'direction_seed': args.direction_seed,
        'projection_only': args.projection_only,
    }
    return CommandResult(
        'analyze',
        parameters,
        master_seed=args.direction_seed,
        payload=report,
        report_path=args.out,
        outputs=outputs,
    )


# sweep


def cmd_sweep(args):
    """Estimate separation probabilities over an (r, D) grid."""
    trials = args.trials or get_settings().default_trials
    table = sweep(
        args.grid_r,
        args.grid_d,
        trials,
        args.seed,
        workers=_workers(),
        allow_any_ratio=args.allow_any_ratio,
    )
    parameters = {
        'grid_r': list(table.r_values),
        'grid_d': list(table.d_values),
        'trials': trials,
        'seed': args.seed,
        'format': args.format,
        'allow_any_ratio': args.allow_any_ratio,
    }
    result = CommandResult('sweep', parameters, master_seed=args.seed)
    if args.format == 'json':
        result.payload = table.to_dict()
        result.report_path = args.out
    elif args.out:
        write_text(args.out, sweep_to_csv(table))
        result.outputs.append(args.out)
    else:
        result.stdout = sweep_to_csv(table)
    if args.svg:
        write_text(args.svg, render_sweep_chart(table))
        result.outputs.append(args.svg)
    return result


# diagnose


def cmd_diagnose_lemma1(args):
    """KS distance of sqrt(D) (v . e) to the standard normal."""
    ks = lemma1_diagnostic(args.dim, args.samples, SeedSpec(args.seed, 0))
    payload = {
        'dim': args.dim,
        'samples': args.samples,
        'ks': ks,
        'critical_value_0_05': ks_critical_value(args.samples, 0.05),
        'critical_value_0_01': ks_critical_value(args.samples, 0.01),
    }
    payload['normal_at_0_01'] = ks <= payload['critical_value_0_01']
    parameters = {'dim': args.dim, 'samples': args.samples, 'seed': args.seed}
    return CommandResult('diagnose lemma1', parameters, args.seed, payload, args.out)


def cmd_diagnose_errdist(args):
    """Distribution of the mixture's minimum error over random directions."""
    summary = error_distribution_diagnostic(
        args.dim, args.separation, args.trials, SeedSpec(args.seed, 0)
    )
    parameters = {
        'dim': args.dim, 'a': args.separation, 'trials': args.trials, 'seed': args.seed,
    }
    return CommandResult('diagnose errdist', parameters, args.seed, summary.to_dict(), args.out)


def cmd_diagnose_whiten(args):
    """Separation probability of a box before and after whitening."""
    trials = args.trials or get_settings().default_trials
    comparison = whitening_comparison(
        args.dim, args.ratio, trials, SeedSpec(args.seed, 0), workers=_workers()
    )
    payload = comparison.to_dict()
    payload['whitened_lower'] = comparison.whitened.ci_high < comparison.original.ci_low
    parameters = {'dim': args.dim, 'ratio': args.ratio, 'trials': trials, 'seed': args.seed}
    return CommandResult('diagnose whiten', parameters, args.seed, payload, args.out)


def cmd_diagnose_brute(args):
    """Try every bipartition of a small point set."""
    if args.points:
        point_set = read_pointset_csv(args.points)
        source = {'points': args.points}
    else:
        spec = _model_spec(args)
        if not isinstance(spec, BoxSpec):
            raise InvalidParameterError('brute force on models needs --model box (or --points)')
        if 2**spec.dim > BRUTE_FORCE_CAP:
            raise CapacityError(
                f'a D={spec.dim} box has {2 ** spec.dim} vertices; '
                f'brute force handles at most {BRUTE_FORCE_CAP} points'
            )
        point_set = enumerate_box_vertices(spec)
        source = {'model_spec': spec.to_dict()}
    part = brute_force_cluster_search(point_set)
    payload = {
        **source,
        'n': point_set.n,
        'bipartitions': sum(1 for _ in iter_bipartitions(point_set.n)),
        'found': part is not None,
        'message': 'cluster found' if part is not None else 'no cluster found',
    }
    if point_set.n >= 2:
        low, high = pairwise_distance_range(point_set)
        payload['pairwise_distance'] = {'min': low, 'max': high}
    if part is not None:
        payload['partition'] = part.assignment.tolist()
        payload['scatter'] = empirical_scatter(point_set, part).to_dict()
    return CommandResult('diagnose brute', {**source}, None, payload, args.out)


def cmd_diagnose_axes(args):
    """Which latent axis random directions separate."""
    trials = args.trials or get_settings().default_trials
    histogram = separable_axis_histogram(
        args.dim,
        args.ratio,
        trials,
        SeedSpec(args.seed, 0),
        workers=_workers(),
        allow_any_ratio=args.allow_any_ratio,
    )
    parameters = {'dim': args.dim, 'ratio': args.ratio, 'trials': trials, 'seed': args.seed}
    return CommandResult('diagnose axes', parameters, args.seed, histogram.to_dict(), args.out)


# parser


def _add_model_flags(parser, with_mixture=True):
    group = parser.add_argument_group('model')
    group.add_argument('--model', choices=['box', 'mixture'] if with_mixture else ['box'],
                       default='box', help='generative model (default: box)')
    group.add_argument('--dim', type=_positive_int, default=3, help='dimension D (default: 3)')
    group.add_argument('--ratio', type=float, default=1.0,
                       help='box ratio r, a_k^2 = r^(k-2) (default: 1)')
    group.add_argument('--allow-any-ratio', action='store_true',
                       help='accept r outside [1, 2]')
    if with_mixture:
        group.add_argument('--separation', type=float, default=0.0,
                           help='mixture center distance a (default: 0)')
        group.add_argument('--direction', type=_float_list, default=None,
                           help='mixture unit direction e, comma separated')
    group.add_argument('--spec', help='ModelSpec JSON file (overrides the flags above)')


def build_parser():
    """
    Build the argparse parser.

    Returns:
        argparse.ArgumentParser
    """
    settings_hint = 'default: BOXPROJ_DEFAULT_TRIALS or 100000'
    parser = argparse.ArgumentParser(
        prog='boxproj',
        description='Random projections of high-dimensional box and mixture models.',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='more logging on stderr (-v info, -vv debug)')
    commands = parser.add_subparsers(dest='command', required=True, metavar='COMMAND')

    generate = commands.add_parser('generate', help='write a point set')
    _add_model_flags(generate)
    generate.add_argument('--n', type=_positive_int, default=1000,
                          help='number of sampled points (default: 1000)')
    generate.add_argument('--enumerate', action='store_true',
                          help='write all 2^D box vertices instead of sampling')
    generate.add_argument('--seed', type=_u64, default=0)
    generate.add_argument('--out', help='output path (default: stdout)')
    generate.add_argument('--format', choices=['csv', 'json'], default='csv')
    generate.set_defaults(handler=cmd_generate)

    analyze = commands.add_parser('analyze', help='project a point set and score its splits')
    analyze.add_argument('points', help='PointSet CSV')
    analyze.add_argument('--spec', help='ModelSpec JSON of the points (enables model reports)')
    source = analyze.add_mutually_exclusive_group(required=True)
    source.add_argument('--axis', type=_positive_int, help='project on basis vector e_k')
    source.add_argument('--direction', type=_float_list, help='comma separated direction')
    source.add_argument('--direction-seed', type=_u64, help='random unit direction from seed')
    analyze.add_argument('--projection-only', action='store_true',
                         help='skip the label-dependent split reports')
    analyze.add_argument('--projection-out', help='also write projected values (column t)')
    analyze.add_argument('--out', help='JSON report path (default: stdout)')
    analyze.set_defaults(handler=cmd_analyze)

    sweep_parser = commands.add_parser('sweep', help='separation probability over an (r, D) grid')
    sweep_parser.add_argument('--grid-r', type=float, nargs='+', default=list(default_r_grid()))
    sweep_parser.add_argument('--grid-d', type=_positive_int, nargs='+',
                              default=list(default_d_grid()))
    sweep_parser.add_argument('--trials', type=_positive_int, default=None, help=settings_hint)
    sweep_parser.add_argument('--seed', type=_u64, default=0)
    sweep_parser.add_argument('--allow-any-ratio', action='store_true')
    sweep_parser.add_argument('--out', help='output path (default: stdout)')
    sweep_parser.add_argument('--format', choices=['csv', 'json'], default='csv')
    sweep_parser.add_argument('--svg', help='also draw a line chart to this path')
    sweep_parser.set_defaults(handler=cmd_sweep)

    diagnose = commands.add_parser('diagnose', help='distributional diagnostics')
    checks = diagnose.add_subparsers(dest='check', required=True, metavar='CHECK')

    lemma1 = checks.add_parser('lemma1', help='normality of sqrt(D) v.e')
    lemma1.add_argument('--dim', type=_positive_int, default=1000)
    lemma1.add_argument('--samples', type=_positive_int, default=10000)
    lemma1.set_defaults(handler=cmd_diagnose_lemma1)

    errdist = checks.add_parser('errdist', help='distribution of the mixture minimum error')
    errdist.add_argument('--dim', type=_positive_int, default=25)
    errdist.add_argument('--separation', '--a', type=float, default=20.0)
    errdist.add_argument('--trials', type=_positive_int, default=50000)
    errdist.set_defaults(handler=cmd_diagnose_errdist)

    white = checks.add_parser('whiten', help='separation probability before/after whitening')
    white.add_argument('--dim', type=_positive_int, default=20)
    white.add_argument('--ratio', type=float, default=1.5)
    white.add_argument('--trials', type=_positive_int, default=None, help=settings_hint)
    white.set_defaults(handler=cmd_diagnose_whiten)

    brute = checks.add_parser('brute', help='exhaustive cluster search on a small point set')
    _add_model_flags(brute, with_mixture=False)
    brute.add_argument('--points', help='PointSet CSV instead of a box model')
    brute.set_defaults(handler=cmd_diagnose_brute)

    axes = checks.add_parser('axes', help='which axis random directions separate')
    axes.add_argument('--dim', type=_positive_int, default=10)
    axes.add_argument('--ratio', type=float, default=1.5)
    axes.add_argument('--allow-any-ratio', action='store_true')
    axes.add_argument('--trials', type=_positive_int, default=None, help=settings_hint)
    axes.set_defaults(handler=cmd_diagnose_axes)

    for check in (lemma1, errdist, white, brute, axes):
        check.add_argument('--seed', type=_u64, default=0)
        check.add_argument('--out', help='JSON report path (default: stdout)')
    return parser


def configure_logging(verbosity):
    """
    Send log records to stderr.

    Args:
        verbosity: Count of -v flags; 0 falls back to BOXPROJ_LOG_LEVEL
    """
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        try:
            level = get_settings().log_level
        except BoxprojError:
            level = logging.WARNING
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )


def main(argv=None, stdout=None, stderr=None):
    """
    Entry point of the ``boxproj`` command.

    Args:
        argv: Arguments after the program name (default: sys.argv[1:])
        stdout: Stream for payloads (default: sys.stdout)
        stderr: Stream for errors (default: sys.stderr)

    Returns:
        int: Exit code
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.argv = argv
    configure_logging(args.verbose)
    handler = ExitCodeMiddleware(
        TimingMiddleware(ManifestMiddleware(args.handler)), stdout=stdout, stderr=stderr
    )
    return handler(args)


if __name__ == '__main__':
    sys.exit(main())
