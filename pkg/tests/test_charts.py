"""
Tests for the sweep chart.
"""

from unittest import TestCase
from xml.etree import ElementTree

from boxproj.charts import line_gid, render_sweep_chart, y_upper_limit
from boxproj.montecarlo import EstimateWithCI, SweepTable

SVG = '{http://www.w3.org/2000/svg}'


def make_table(p=None, d_values=(3, 30)):
    """A 3 x 2 table with hand-picked estimates."""
    p = p or [[0.0, 0.0], [0.1, 0.05], [0.3, 0.2]]
    estimates = tuple(
        tuple(EstimateWithCI.from_counts(int(q * 1000), 1000) for q in line) for line in p
    )
    return SweepTable((1.0, 1.5, 2.0), d_values, estimates, master_seed=1, trials_per_cell=1000)


class YUpperLimitTest(TestCase):
    """Tests for y_upper_limit."""

    def test_small_probabilities(self):
        """Small estimates get a tight axis rounded up to a tenth."""
        self.assertAlmostEqual(y_upper_limit(make_table()), 0.4)
        self.assertAlmostEqual(y_upper_limit(make_table([[0.0, 0.0]] * 3)), 0.1)

    def test_large_probabilities(self):
        """Past one half the axis spans [0, 1]."""
        self.assertEqual(y_upper_limit(make_table([[0.9, 0.6]] * 3)), 1.0)


class RenderSweepChartTest(TestCase):
    """Tests for render_sweep_chart."""

    def setUp(self):
        self.svg = render_sweep_chart(make_table())
        self.root = ElementTree.fromstring(self.svg.encode('utf-8'))

    def test_one_line_per_dimension(self):
        """Each D is drawn as one group holding its line."""
        ids = [el.get('id') for el in self.root.iter() if el.get('id', '').startswith('sweep-d')]
        self.assertEqual(ids, [line_gid(3), line_gid(30)])
        for gid in ids:
            group = next(el for el in self.root.iter(f'{SVG}g') if el.get('id') == gid)
            self.assertIsNotNone(group.find(f'.//{SVG}path'))

    def test_legend_and_axis_labels(self):
        """Legend entries and axis titles are real text elements."""
        labels = {''.join(text.itertext()).strip() for text in self.root.iter(f'{SVG}text')}
        for label in ('D = 3', 'D = 30', 'r', 'P(separation)'):
            self.assertIn(label, labels)

    def test_deterministic(self):
        """Rendering the same table twice gives identical bytes."""
        self.assertEqual(render_sweep_chart(make_table()), self.svg)

    def test_no_timestamp(self):
        """The document carries no creation date."""
        self.assertNotIn('<dc:date>', self.svg)
