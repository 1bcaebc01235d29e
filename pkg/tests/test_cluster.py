"""
Tests for scatter, the clustering criterion and threshold errors.
"""

import math
from unittest import TestCase

import numpy as np
from scipy import integrate
from scipy.stats import ortho_group

from boxproj.cluster import (
    BinaryPartition,
    ThresholdReport,
    analytic_min_error,
    axis_partition,
    axis_split_condition,
    empirical_min_error,
    empirical_scatter,
    find_separable_axis,
    normal_cdf,
    projected_axis_scatter,
    scatter_verdict,
    separating_axes,
)
from boxproj.exceptions import (
    DegenerateLabelsError,
    DegeneratePartitionError,
    DomainError,
    ParameterRangeError,
    ShapeError,
)
from boxproj.models import BoxSpec, box_scales, enumerate_box_vertices
from boxproj.projection import (
    ProjectionVector,
    SeedSpec,
    gaussian_rows,
    project,
    random_gaussian_vector,
)


def normal_density(t):
    return math.exp(-t * t / 2) / math.sqrt(2 * math.pi)


def gaussian_integral(x):
    """Phi(x) by adaptive quadrature of the normal density."""
    value, _ = integrate.quad(normal_density, -math.inf, x, epsabs=1e-13)
    return value


class NormalCdfTest(TestCase):
    """Tests for normal_cdf."""

    def test_symmetry(self):
        """Phi(0) = 1/2 and Phi(x) + Phi(-x) = 1."""
        self.assertEqual(normal_cdf(0.0), 0.5)
        self.assertAlmostEqual(normal_cdf(1.0) + normal_cdf(-1.0), 1.0, delta=1e-12)

    def test_against_quadrature(self):
        """Phi matches quadrature of the density and the erfc identity."""
        self.assertAlmostEqual(normal_cdf(-1.349), 0.08866, delta=1e-4)
        self.assertAlmostEqual(normal_cdf(-1.349), gaussian_integral(-1.349), delta=1e-8)
        for x in (-6.0, -2.0, -0.3, 0.7, 3.5):
            self.assertAlmostEqual(normal_cdf(x), 0.5 * math.erfc(-x / math.sqrt(2)), delta=1e-10)

    def test_arrays(self):
        """Arrays are evaluated elementwise."""
        np.testing.assert_allclose(normal_cdf(np.array([0.0, 0.0])), [0.5, 0.5])

    def test_non_finite(self):
        """NaN and infinities are domain errors."""
        for bad in (float('nan'), float('inf'), -float('inf')):
            with self.assertRaises(DomainError):
                normal_cdf(bad)


class BinaryPartitionTest(TestCase):
    """Tests for BinaryPartition."""

    def test_counts(self):
        """counts is (n0, n1)."""
        self.assertEqual(BinaryPartition([0, 1, 1, 0, 1]).counts, (2, 3))

    def test_from_mask(self):
        """Bit j of the mask puts point j in class 1."""
        self.assertEqual(BinaryPartition.from_mask(0b0110, 4), BinaryPartition([0, 1, 1, 0]))

    def test_canonical(self):
        """The canonical form has the first point in class 0."""
        self.assertEqual(BinaryPartition([1, 0, 1]).canonical(), BinaryPartition([0, 1, 0]))

    def test_axis_partition(self):
        """axis_partition splits on one latent label column."""
        vertices = enumerate_box_vertices(BoxSpec(2, 1.0))
        self.assertEqual(axis_partition(vertices, 2), BinaryPartition([0, 0, 1, 1]))


class EmpiricalScatterTest(TestCase):
    """Tests for empirical_scatter."""

    def test_box_axis_three(self):
        """The D=3 box split on axis 3 has within 1/2 and between r/4."""
        for ratio in (1.0, 1.5, 2.0):
            vertices = enumerate_box_vertices(BoxSpec(3, ratio))
            report = empirical_scatter(vertices, axis_partition(vertices, 3))
            self.assertAlmostEqual(report.within, 0.5, delta=1e-12)
            self.assertAlmostEqual(report.between, ratio / 4, delta=1e-12)
            self.assertFalse(report.is_cluster)

    def test_identical_points(self):
        """Identical points have zero scatter and no cluster."""
        report = empirical_scatter(np.ones((4, 2)), [0, 1, 0, 1])
        self.assertEqual((report.within, report.between, report.total), (0.0, 0.0, 0.0))
        self.assertFalse(report.is_cluster)

    def test_two_points(self):
        """Two points split apart: within 0, between d^2 / 4."""
        report = empirical_scatter(np.array([0.0, 3.0]), [0, 1])
        self.assertEqual(report.within, 0.0)
        self.assertAlmostEqual(report.between, 9.0 / 4)
        self.assertTrue(report.is_cluster)

    def test_decomposition_fuzz(self):
        """within + between = total over many random sets and splits."""
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            n = int(rng.integers(2, 40))
            dim = int(rng.integers(1, 6))
            points = rng.normal(size=(n, dim)) * rng.uniform(0.1, 10)
            assignment = rng.integers(0, 2, n)
            assignment[0], assignment[1] = 0, 1
            report = empirical_scatter(points, assignment)
            self.assertAlmostEqual(
                report.within + report.between, report.total, delta=1e-9 * report.total
            )

    def test_invariant_under_rigid_motion(self):
        """Rotations and translations leave scatter unchanged."""
        rng = np.random.default_rng(7)
        for _ in range(50):
            points = rng.normal(size=(25, 4))
            part = BinaryPartition(np.r_[0, 1, rng.integers(0, 2, 23)])
            rotation = ortho_group.rvs(4, random_state=rng)
            moved = points @ rotation.T + rng.normal(size=4) * 5
            before = empirical_scatter(points, part)
            after = empirical_scatter(moved, part)
            for name in ('within', 'between', 'total'):
                self.assertAlmostEqual(
                    getattr(after, name), getattr(before, name), delta=1e-9 * before.total
                )

    def test_empty_class(self):
        """A partition with an empty class is degenerate."""
        with self.assertRaises(DegeneratePartitionError):
            empirical_scatter(np.zeros((3, 1)), [0, 0, 0])

    def test_length_mismatch(self):
        """The partition must cover every point."""
        with self.assertRaises(ShapeError):
            empirical_scatter(np.zeros((3, 1)), [0, 1])


class ScatterVerdictTest(TestCase):
    """Tests for scatter_verdict."""

    def test_strict(self):
        """Ties are not clusters."""
        self.assertFalse(scatter_verdict(1.0, 1.0, 2.0))
        self.assertTrue(scatter_verdict(1.0, 1.1, 2.1))

    def test_rounding_tie(self):
        """A rounding-level excess is still a tie."""
        between = (math.sqrt(2) / 2) ** 2
        self.assertFalse(scatter_verdict(0.5, between, 0.5 + between))


class AnalyticMinErrorTest(TestCase):
    """Tests for analytic_min_error."""

    def test_no_signal(self):
        """dot = 0 or a = 0 gives 1/2."""
        self.assertEqual(analytic_min_error(5.0, 0.0), 0.5)
        self.assertEqual(analytic_min_error(0.0, 0.8), 0.5)

    def test_value(self):
        """a = 4, dot = 1 gives Phi(-2)."""
        self.assertAlmostEqual(analytic_min_error(4.0, 1.0), 0.02275, delta=1e-4)
        self.assertEqual(analytic_min_error(4.0, -1.0), analytic_min_error(4.0, 1.0))

    def test_monotone(self):
        """E decreases as a |dot| grows."""
        values = [analytic_min_error(2.0, dot) for dot in np.linspace(0, 1, 21)]
        self.assertTrue(all(b <= a for a, b in zip(values, values[1:])))
        self.assertTrue(all(v < 0.5 for v in values[1:]))


class EmpiricalMinErrorTest(TestCase):
    """Tests for empirical_min_error."""

    def test_separated(self):
        """Perfectly separated classes have zero error."""
        report = empirical_min_error([0, 0, 1, 1], ['A', 'A', 'B', 'B'])
        self.assertEqual(report.error, 0.0)
        self.assertEqual(report.threshold, 0.5)
        self.assertEqual(report.left_label, 'A')

    def test_identical_values(self):
        """Identical values cannot be separated."""
        self.assertEqual(empirical_min_error([2.0] * 4, [0, 1, 0, 1]).error, 0.5)

    def test_interleaved(self):
        """Values 0..3 with alternating labels give 1/4."""
        self.assertEqual(empirical_min_error([0, 1, 2, 3], ['A', 'B', 'A', 'B']).error, 0.25)

    def test_reversed_polarity(self):
        """Class 1 on the left is found as well."""
        report = empirical_min_error([0.0, 1.0, 5.0, 6.0], [1, 1, 0, 0])
        self.assertEqual(report.error, 0.0)
        self.assertEqual(report.left_label, 1)

    def test_majority_bound_and_dominance(self):
        """The error never exceeds the minority share or any random threshold's error."""
        rng = np.random.default_rng(99)
        for _ in range(30):
            n = int(rng.integers(2, 60))
            values = rng.normal(size=n)
            labels = rng.integers(0, 2, n)
            labels[0], labels[1] = 0, 1
            report = empirical_min_error(values, labels)
            n1 = int(labels.sum())
            self.assertLessEqual(report.error, min(n1, n - n1) / n)
            for t in rng.uniform(values.min() - 1, values.max() + 1, 1000):
                left = values <= t
                wrong = min(np.sum(labels[left] == 1) + np.sum(labels[~left] == 0),
                            np.sum(labels[left] == 0) + np.sum(labels[~left] == 1))
                self.assertLessEqual(report.error, wrong / n + 1e-15)

    def test_single_class(self):
        """Single-class labels are degenerate."""
        with self.assertRaises(DegenerateLabelsError):
            empirical_min_error([0.0, 1.0, 2.0], [1, 1, 1])

    def test_with_analytic(self):
        """with_analytic keeps the empirical fields."""
        report = ThresholdReport(0.5, 0.1).with_analytic(0.12)
        self.assertEqual(report.to_dict(), {'threshold': 0.5, 'error': 0.1, 'analytic': 0.12})


class AxisSplitConditionTest(TestCase):
    """Tests for axis_split_condition and find_separable_axis."""

    def test_basis_vector(self):
        """e_k separates axis k."""
        scales = box_scales(4, 1.5)
        for k in range(1, 5):
            v = ProjectionVector.basis(4, k)
            self.assertTrue(axis_split_condition(v, scales, k))
            self.assertEqual(find_separable_axis(v, scales), k)

    def test_symmetric_vector(self):
        """Equal terms separate nothing."""
        self.assertFalse(axis_split_condition([1.0, 1.0], [1.0, 1.0], 1))
        self.assertIsNone(find_separable_axis([1.0, 1.0, 1.0], [1.0, 1.0, 1.0]))

    def test_worked_arithmetic(self):
        """0.25 + 0.25 < 2 * 2.25 separates axis 3."""
        self.assertTrue(axis_split_condition([0.5, 0.5, 1.5], [1.0, 1.0, math.sqrt(2)], 3))

    def test_scale_invariant(self):
        """Rescaling v does not change the verdict."""
        v = np.array([0.3, -0.2, 1.1])
        scales = box_scales(3, 1.5)
        for c in (-3.0, 0.01, 250.0):
            for k in (1, 2, 3):
                self.assertEqual(
                    axis_split_condition(c * v, scales, k), axis_split_condition(v, scales, k)
                )

    def test_agrees_with_exhaustive_scan(self):
        """find_separable_axis matches a scan over every k, and at most one k qualifies."""
        scales = box_scales(3, 1.5)
        for row in gaussian_rows(3, 10_000, 31):
            hits = [k for k in (1, 2, 3) if axis_split_condition(row, scales, k)]
            self.assertLessEqual(len(hits), 1)
            self.assertEqual(find_separable_axis(row, scales), hits[0] if hits else None)

    def test_bad_axis(self):
        """k must be in 1..D."""
        with self.assertRaises(ParameterRangeError):
            axis_split_condition([1.0, 0.0], [1.0, 1.0], 3)

    def test_projected_axis_scatter(self):
        """Closed-form projected scatter matches the empirical one on the vertices."""
        spec = BoxSpec(3, 1.7)
        vertices = enumerate_box_vertices(spec)
        v = np.array([0.4, -0.3, 0.9])
        for k in (1, 2, 3):
            closed = projected_axis_scatter(v, spec.scales, k)
            values = vertices.points @ v
            measured = empirical_scatter(values, axis_partition(vertices, k))
            self.assertAlmostEqual(closed.within, measured.within, delta=1e-12)
            self.assertAlmostEqual(closed.between, measured.between, delta=1e-12)
            self.assertEqual(closed.is_cluster, axis_split_condition(v, spec.scales, k))

    def test_random_directions_cluster_the_projected_vertices(self):
        """Whenever a random direction separates axis k, its projected Y_k split is a clustering."""
        spec = BoxSpec(4, 1.6)
        vertices = enumerate_box_vertices(spec)
        hits = 0
        for stream in range(500):
            v = random_gaussian_vector(4, SeedSpec(12, stream))
            values = project(vertices, v)
            axis = find_separable_axis(v, spec.scales)
            for k in range(1, 5):
                report = empirical_scatter(values, axis_partition(vertices, k))
                self.assertEqual(report.is_cluster, axis == k, (stream, k))
            hits += axis is not None
        self.assertGreater(hits, 0)


class SeparatingAxesTest(TestCase):
    """Tests for separating_axes."""

    def test_rows_match_single_directions(self):
        """The row-wise verdict equals find_separable_axis on each row."""
        scales = box_scales(6, 1.9)
        rows = gaussian_rows(6, 5000, SeedSpec(3))
        axes = separating_axes((rows * scales) ** 2)
        expected = [find_separable_axis(row, scales) or 0 for row in rows]
        self.assertEqual(axes.tolist(), expected)

    def test_ties_and_single_axis(self):
        """Equal largest terms separate nothing; one nonzero term always separates."""
        self.assertEqual(separating_axes([[1.0, 1.0], [0.0, 2.0], [0.5, 0.0]]).tolist(), [0, 2, 1])
        self.assertEqual(separating_axes([[3.0]]).tolist(), [1])
        self.assertEqual(separating_axes([[0.0]]).tolist(), [0])

    def test_rounding_level_tie(self):
        """0.1 + 0.2 is not below 0.3 in floating point, so no axis separates."""
        self.assertEqual(separating_axes([0.1, 0.2, 0.3]).tolist(), [0])
