"""
Monte Carlo estimates and diagnostics for the box and mixture models.

Separation probabilities are estimated from Gaussian directions drawn in
fixed-size blocks; each block has its own counter-based substream and the
per-block counts are integers, so any scheduling of blocks over any number
of workers gives the same answer.
"""

import logging
import math
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .cluster import BinaryPartition, empirical_scatter, normal_cdf, separating_axes
from .conf import get_settings
from .exceptions import CapacityError, InvalidParameterError
from .mixins import SerializableMixin
from .models import BoxSpec, box_scales, whiten
from .projection import (
    GENERATOR_ID,
    SeedSpec,
    block_ranges,
    check_dim,
    gaussian_block,
    normalize_rows,
)

logger = logging.getLogger(__name__)

CONFIDENCE_LEVEL = 0.95

# Points; 2^(n-1) - 1 bipartitions are scored.
BRUTE_FORCE_CAP = 16

# Asymptotic Kolmogorov-Smirnov coefficients c(alpha), critical value c / sqrt(n).
KS_COEFFICIENTS = {0.10: 1.224, 0.05: 1.358, 0.01: 1.628}

MIN_DIAGNOSTIC_SAMPLES = 100


def default_r_grid():
    """Ratios 1.00, 1.05, ..., 2.00."""
    return tuple(round(1.0 + 0.05 * i, 2) for i in range(21))


def default_d_grid():
    """Dimensions 3, 10, 30, 100, 300."""
    return (3, 10, 30, 100, 300)


def _check_trials(trials, minimum=1):
    if isinstance(trials, bool) or not isinstance(trials, (int, np.integer)) or trials < minimum:
        raise InvalidParameterError(f'trials must be an integer >= {minimum}, got {trials!r}')
    return int(trials)


def wilson_interval(successes, trials, confidence=CONFIDENCE_LEVEL):
    """
    Wilson score interval for a binomial proportion.

    Args:
        successes: Number of successes
        trials: Number of trials >= 1
        confidence: Confidence level (default: 0.95)

    Returns:
        tuple[float, float]: (low, high), containing successes / trials
    """
    trials = _check_trials(trials)
    if not 0 <= successes <= trials:
        raise InvalidParameterError(f'successes must be in 0..{trials}, got {successes}')
    ci = stats.binomtest(int(successes), trials).proportion_ci(
        confidence_level=confidence, method='wilson'
    )
    p_hat = successes / trials
    low = min(max(float(ci.low), 0.0), p_hat)
    high = max(min(float(ci.high), 1.0), p_hat)
    return low, high


@dataclass(frozen=True)
class EstimateWithCI(SerializableMixin):
    """
    A proportion with its 95% Wilson interval.

    Attributes:
        p_hat (float): successes / trials
        trials (int): Number of trials
        ci_low (float): Lower interval bound
        ci_high (float): Upper interval bound
        successes (int): Raw count
    """

    p_hat: float
    trials: int
    ci_low: float
    ci_high: float
    successes: int

    json_fields = ['p_hat', 'trials', 'ci_low', 'ci_high']

    @classmethod
    def from_counts(cls, successes, trials):
        """Build an estimate from an integer count."""
        successes = int(successes)
        low, high = wilson_interval(successes, trials)
        return cls(successes / trials, int(trials), low, high, successes)

    @property
    def standard_error(self):
        """Binomial standard error sqrt(p (1 - p) / n)."""
        return math.sqrt(self.p_hat * (1.0 - self.p_hat) / self.trials)

    @property
    def width(self):
        return self.ci_high - self.ci_low


@dataclass(frozen=True)
class SweepTable(SerializableMixin):
    """
    Separation probability estimates over an (r, D) grid.

    Attributes:
        r_values (tuple[float]): Ratios, one grid row each
        d_values (tuple[int]): Dimensions, one grid column each
        estimates (tuple[tuple[EstimateWithCI]]): estimates[i][j] for (r_i, D_j)
        master_seed (int): Seed of the whole sweep
        trials_per_cell (int): Trials behind every estimate
        generator (str): Random generator id
    """

    r_values: tuple
    d_values: tuple
    estimates: tuple
    master_seed: int
    trials_per_cell: int
    generator: str = GENERATOR_ID

    columns = ('r', 'D', 'trials', 'p_hat', 'ci_low', 'ci_high', 'master_seed')

    def cell(self, ratio, dim):
        """
        Look up the estimate for one (r, D) pair.

        Returns:
            EstimateWithCI

        Raises:
            KeyError: if the pair is not on the grid
        """
        try:
            return self.estimates[self.r_values.index(ratio)][self.d_values.index(dim)]
        except ValueError:
            raise KeyError((ratio, dim)) from None

    def rows(self):
        """
        Rows in r-major, D-minor order, keyed by the CSV column names.

        Returns:
            list[dict]
        """
        rows = []
        for ratio, line in zip(self.r_values, self.estimates):
            for dim, est in zip(self.d_values, line):
                rows.append({
                    'r': ratio,
                    'D': dim,
                    'trials': est.trials,
                    'p_hat': est.p_hat,
                    'ci_low': est.ci_low,
                    'ci_high': est.ci_high,
                    'master_seed': self.master_seed,
                })
        return rows

    def to_dict(self):
        return {
            'r_values': list(self.r_values),
            'd_values': list(self.d_values),
            'trials_per_cell': self.trials_per_cell,
            'master_seed': self.master_seed,
            'generator': self.generator,
            'rows': self.rows(),
        }


_SeparationTask = namedtuple(
    '_SeparationTask', 'cell dim ratio master_seed stream_index block size'
)


def _separable_axis_counts(task):
    """
    Count, per axis, the directions in one block that separate that axis.

    Returns:
        numpy.ndarray of length dim with integer counts
    """
    seed = SeedSpec(task.master_seed, task.stream_index)
    scales = box_scales(task.dim, task.ratio, allow_any_ratio=True)
    rows = gaussian_block(task.dim, seed, task.block, task.size)
    axes = separating_axes((rows * scales) ** 2)
    return np.bincount(axes[axes > 0] - 1, minlength=task.dim)


def _resolve_workers(workers):
    if workers is None:
        return get_settings().threads
    if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
        raise InvalidParameterError(f'workers must be a positive integer, got {workers!r}')
    return workers


def _run_tasks(tasks, workers):
    """
    Evaluate separation tasks, in-process or on a process pool.

    Returns:
        list of per-task count arrays, in task order
    """
    workers = min(_resolve_workers(workers), len(tasks))
    if workers <= 1:
        return [_separable_axis_counts(task) for task in tasks]
    logger.debug('dispatching %d blocks to %d workers', len(tasks), workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        chunksize = max(1, len(tasks) // (4 * workers))
        return list(pool.map(_separable_axis_counts, tasks, chunksize=chunksize))


def _cell_tasks(cell, spec, trials, seed):
    return [
        _SeparationTask(cell, spec.dim, spec.ratio, seed.master_seed, seed.stream_index, b, size)
        for b, size in block_ranges(trials)
    ]


def _axis_counts(spec, trials, seed, workers):
    tasks = _cell_tasks(0, spec, trials, seed)
    return np.sum(_run_tasks(tasks, workers), axis=0)


def estimate_separation_probability(
    dim, ratio, trials, seed, workers=None, allow_any_ratio=False
):
    """
    Fraction of Gaussian directions that make some latent split of the box a clustering.

    A direction v separates axis k when sum_{i != k} (a_i v_i)^2 < (a_k v_k)^2.
    The condition is scale invariant, so raw Gaussian vectors are used.

    Args:
        dim: Box dimension D
        ratio: Box ratio r
        trials: Number of directions >= 1
        seed: SeedSpec (or master seed, stream 0)
        workers: Worker processes (default: BOXPROJ_THREADS setting)
        allow_any_ratio: Accept r outside [1, 2]

    Returns:
        EstimateWithCI
    """
    spec = BoxSpec(dim, ratio, allow_any_ratio=allow_any_ratio)
    trials = _check_trials(trials)
    seed = SeedSpec.coerce(seed)
    successes = int(_axis_counts(spec, trials, seed, workers).sum())
    return EstimateWithCI.from_counts(successes, trials)


def sweep(r_values, d_values, trials, seed, workers=None, allow_any_ratio=False):
    """
    Estimate the separation probability on every (r, D) cell of a grid.

    Cell i, counted r-major then D-minor, uses substream SeedSpec(master, i).

    Args:
        r_values: Non-empty sequence of ratios
        d_values: Non-empty sequence of dimensions
        trials: Trials per cell
        seed: Master seed (int) or SeedSpec whose master seed is used
        workers: Worker processes (default: BOXPROJ_THREADS setting)
        allow_any_ratio: Accept r outside [1, 2]

    Returns:
        SweepTable
    """
    r_values = tuple(float(r) for r in r_values)
    d_values = tuple(check_dim(d) for d in d_values)
    if not r_values or not d_values:
        raise InvalidParameterError('sweep grids must be non-empty')
    trials = _check_trials(trials)
    master = SeedSpec.coerce(seed).master_seed

    specs = [BoxSpec(d, r, allow_any_ratio=allow_any_ratio) for r in r_values for d in d_values]
    tasks = []
    for cell, spec in enumerate(specs):
        tasks.extend(_cell_tasks(cell, spec, trials, SeedSpec(master, cell)))
    results = _run_tasks(tasks, workers)

    successes = [0] * len(specs)
    for task, counts in zip(tasks, results):
        successes[task.cell] += int(counts.sum())
    flat = [EstimateWithCI.from_counts(s, trials) for s in successes]
    for spec, est in zip(specs, flat):
        logger.debug('r=%g D=%d p_hat=%.5f', spec.ratio, spec.dim, est.p_hat)
    width = len(d_values)
    estimates = tuple(tuple(flat[i * width:(i + 1) * width]) for i in range(len(r_values)))
    logger.info(
        'sweep finished: %d cells x %d trials (master seed %d)', len(specs), trials, master
    )
    return SweepTable(r_values, d_values, estimates, master, trials)


@dataclass(frozen=True)
class AxisHistogram(SerializableMixin):
    """
    Which latent axis random directions separate.

    Attributes:
        dim (int): Box dimension
        ratio (float): Box ratio
        counts (tuple[int]): counts[k-1] = directions separating axis k
        estimate (EstimateWithCI): Any-axis separation probability
    """

    dim: int
    ratio: float
    counts: tuple
    estimate: EstimateWithCI


def separable_axis_histogram(dim, ratio, trials, seed, workers=None, allow_any_ratio=False):
    """
    Tally the separated axis over random directions.

    Different directions separate different axes, each a different binary
    grouping of the same points; larger edges are separated more often.

    Returns:
        AxisHistogram
    """
    spec = BoxSpec(dim, ratio, allow_any_ratio=allow_any_ratio)
    trials = _check_trials(trials)
    counts = _axis_counts(spec, trials, SeedSpec.coerce(seed), workers)
    estimate = EstimateWithCI.from_counts(int(counts.sum()), trials)
    return AxisHistogram(spec.dim, spec.ratio, tuple(int(c) for c in counts), estimate)


def ks_statistic(values):
    """
    Two-sided Kolmogorov-Smirnov distance between a sample and the standard normal.

    Args:
        values: 1-D sample

    Returns:
        float
    """
    return float(stats.kstest(np.asarray(values, dtype=float), 'norm').statistic)


def ks_critical_value(samples, alpha=0.05):
    """
    Asymptotic KS critical value c(alpha) / sqrt(samples).

    Args:
        samples: Sample size
        alpha: One of 0.10, 0.05, 0.01

    Returns:
        float
    """
    if alpha not in KS_COEFFICIENTS:
        raise InvalidParameterError(f'alpha must be one of {sorted(KS_COEFFICIENTS)}')
    return KS_COEFFICIENTS[alpha] / math.sqrt(samples)


def _first_coordinates(dim, count, seed):
    """e . v for ``count`` uniform unit directions, with e the first basis vector."""
    parts = [
        normalize_rows(gaussian_block(dim, seed, b, size), seed, b)[:, 0]
        for b, size in block_ranges(count)
    ]
    return np.concatenate(parts)


def lemma1_diagnostic(dim, samples, seed):
    """
    How close sqrt(D) (v . e) is to a standard normal for uniform unit v.

    Args:
        dim: Dimension D
        samples: Number of directions >= 100
        seed: SeedSpec or master seed

    Returns:
        float: KS distance to the standard normal CDF
    """
    dim = check_dim(dim)
    samples = _check_trials(samples, MIN_DIAGNOSTIC_SAMPLES)
    dots = _first_coordinates(dim, samples, SeedSpec.coerce(seed))
    return ks_statistic(math.sqrt(dim) * dots)


@dataclass(frozen=True)
class ErrorDistributionSummary(SerializableMixin):
    """
    Summary of the mixture's minimum error E over random directions.

    Attributes:
        dim (int): Dimension D
        a (float): Mixture separation
        trials (int): Number of directions
        median (float): Median of E
        fraction_below_0_1 (float): Share of directions with E < 0.1
        fraction_above_0_4 (float): Share of directions with E > 0.4
        signal_ratio (float): a / (2 sqrt(D)); above 1 the mixture is a cluster
        skewed_toward (str): 'minimum' when the median is below 1/4, else 'maximum'
    """

    dim: int
    a: float
    trials: int
    median: float
    fraction_below_0_1: float
    fraction_above_0_4: float
    signal_ratio: float
    skewed_toward: str


def error_distribution_diagnostic(dim, a, trials, seed):
    """
    Distribution of E = Phi(-a |e . v| / 2) over uniform unit directions v.

    Args:
        dim: Dimension D
        a: Mixture separation >= 0
        trials: Number of directions >= 100
        seed: SeedSpec or master seed

    Returns:
        ErrorDistributionSummary
    """
    dim = check_dim(dim)
    trials = _check_trials(trials, MIN_DIAGNOSTIC_SAMPLES)
    a = float(a)
    if not np.isfinite(a) or a < 0:
        raise InvalidParameterError(f'separation must be >= 0, got {a}')
    dots = _first_coordinates(dim, trials, SeedSpec.coerce(seed))
    errors = normal_cdf(-0.5 * a * np.abs(dots))
    median = float(np.median(errors))
    return ErrorDistributionSummary(
        dim=dim,
        a=a,
        trials=trials,
        median=median,
        fraction_below_0_1=float(np.mean(errors < 0.1)),
        fraction_above_0_4=float(np.mean(errors > 0.4)),
        signal_ratio=a / (2.0 * math.sqrt(dim)),
        skewed_toward='minimum' if median < 0.25 else 'maximum',
    )


def iter_bipartitions(n):
    """
    Yield every split of n points into two non-empty classes exactly once.

    Point 0 always sits in class 0.

    Args:
        n: Number of points

    Yields:
        BinaryPartition
    """
    for mask in range(1, 2 ** (n - 1)):
        yield BinaryPartition.from_mask(mask << 1, n)


def brute_force_cluster_search(points):
    """
    Look for any binary clustering of a small point set by trying every split.

    Args:
        points: PointSet or array of shape (n, D) with n <= BRUTE_FORCE_CAP

    Returns:
        BinaryPartition with the largest between - within among clusters, or None

    Raises:
        CapacityError: for more than BRUTE_FORCE_CAP points
    """
    array = np.asarray(getattr(points, 'points', points), dtype=float)
    if array.ndim == 1:
        array = array[:, None]
    n = array.shape[0]
    if n > BRUTE_FORCE_CAP:
        raise CapacityError(
            f'{n} points means {2 ** (n - 1) - 1} bipartitions; the cap is {BRUTE_FORCE_CAP} points'
        )
    best = None
    best_margin = -math.inf
    for part in iter_bipartitions(n):
        report = empirical_scatter(array, part)
        margin = report.between - report.within
        if report.is_cluster and margin > best_margin:
            best, best_margin = part, margin
    logger.debug('brute force over %d points: %s', n, 'cluster' if best else 'no cluster')
    return best


@dataclass(frozen=True)
class WhiteningComparison(SerializableMixin):
    """
    Separation probability before and after whitening, on matched directions.

    Attributes:
        original (EstimateWithCI): The box as given
        whitened (EstimateWithCI): The whitened box (the hypercube)
    """

    original: EstimateWithCI
    whitened: EstimateWithCI

    def __iter__(self):
        return iter((self.original, self.whitened))


def whitening_comparison(dim, ratio, trials, seed, workers=None):
    """
    Estimate the separation probability of a box and of its whitened version.

    Both estimates use the same seed, so they score the same directions.

    Returns:
        WhiteningComparison (unpacks as (original, whitened))
    """
    spec = BoxSpec(dim, ratio)
    white = whiten(spec)
    original = estimate_separation_probability(spec.dim, spec.ratio, trials, seed, workers)
    whitened = estimate_separation_probability(white.dim, white.ratio, trials, seed, workers)
    return WhiteningComparison(original, whitened)
