"""
Tests for the command middleware.
"""

import io
import json
import os
import tempfile
from types import SimpleNamespace
from unittest import TestCase

from boxproj import __version__
from boxproj.exceptions import ArtifactIOError, CapacityError
from boxproj.formats import sha256_file, write_text
from boxproj.middleware import (
    MANIFEST_SUFFIX,
    CommandResult,
    ExitCodeMiddleware,
    ManifestMiddleware,
    TimingMiddleware,
    build_manifest,
)
from boxproj.projection import GENERATOR_ID


class ManifestMiddlewareTest(TestCase):
    """Tests for ManifestMiddleware."""

    def setUp(self):
        """Create a scratch directory."""
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.args = SimpleNamespace(argv=['sweep', '--seed', '3'])

    def path(self, name):
        return os.path.join(self.tmp.name, name)

    def test_report_to_stdout_embeds_manifest(self):
        """A stdout report carries its manifest under 'manifest'."""
        def command(args):
            return CommandResult('diagnose lemma1', {'dim': 5}, 3, payload={'ks': 0.1})

        result = ManifestMiddleware(command)(self.args)
        report = json.loads(result.stdout)
        self.assertEqual(report['ks'], 0.1)
        self.assertEqual(report['manifest']['command'], 'diagnose lemma1')
        self.assertEqual(report['manifest']['argv'], ['sweep', '--seed', '3'])
        self.assertEqual(report['manifest']['generator'], GENERATOR_ID)
        self.assertEqual(report['manifest']['artifact_version'], __version__)
        self.assertEqual(result.outputs, [])

    def test_files_get_sidecar(self):
        """Written files are listed with their digests in a sidecar manifest."""
        csv_path, svg_path = self.path('table.csv'), self.path('chart.svg')

        def command(args):
            write_text(csv_path, 'r,D\n')
            write_text(svg_path, '<svg/>\n')
            return CommandResult('sweep', {'trials': 10}, 3, outputs=[csv_path, svg_path])

        ManifestMiddleware(command)(self.args)
        with open(csv_path + MANIFEST_SUFFIX, encoding='utf-8') as handle:
            manifest = json.load(handle)
        self.assertEqual(manifest['master_seed'], 3)
        self.assertEqual(manifest['parameters'], {'trials': 10})
        self.assertEqual(
            manifest['outputs'],
            {csv_path: sha256_file(csv_path), svg_path: sha256_file(svg_path)},
        )

    def test_report_to_file(self):
        """A report written to a path becomes the first output."""
        report_path = self.path('report.json')

        def command(args):
            return CommandResult('analyze', {}, None, payload={'n': 8}, report_path=report_path)

        result = ManifestMiddleware(command)(self.args)
        self.assertIsNone(result.stdout)
        self.assertEqual(result.outputs, [report_path])
        self.assertTrue(os.path.exists(report_path + MANIFEST_SUFFIX))

    def test_build_manifest(self):
        """build_manifest copies the result's parameters and seed."""
        result = CommandResult('generate', {'n': 4}, 12)
        manifest = build_manifest(result, ['generate'], {'a.csv': 'ff'})
        self.assertEqual(manifest.master_seed, 12)
        self.assertEqual(manifest.outputs, {'a.csv': 'ff'})


class TimingMiddlewareTest(TestCase):
    """Tests for TimingMiddleware."""

    def test_logs_duration(self):
        """The elapsed time is logged at INFO."""
        middleware = TimingMiddleware(lambda args: CommandResult('sweep', {}))
        with self.assertLogs('boxproj.middleware', level='INFO') as logs:
            result = middleware(SimpleNamespace())
        self.assertEqual(result.command, 'sweep')
        self.assertIn('sweep finished in', logs.output[0])


class ExitCodeMiddlewareTest(TestCase):
    """Tests for ExitCodeMiddleware."""

    def run_command(self, command):
        stdout, stderr = io.StringIO(), io.StringIO()
        status = ExitCodeMiddleware(command, stdout=stdout, stderr=stderr)(SimpleNamespace())
        return status, stdout.getvalue(), stderr.getvalue()

    def test_success_prints_stdout(self):
        """Success returns 0 and prints the command's text."""
        status, out, err = self.run_command(lambda args: CommandResult('x', {}, stdout='hi\n'))
        self.assertEqual((status, out, err), (0, 'hi\n', ''))

    def test_validation_error(self):
        """Validation errors exit with 2 and a one-line message."""
        def command(args):
            raise CapacityError('too many points')

        status, out, err = self.run_command(command)
        self.assertEqual(status, 2)
        self.assertEqual(out, '')
        self.assertEqual(err, 'boxproj: error: too many points\n')

    def test_io_error(self):
        """I/O errors exit with 3."""
        def command(args):
            raise ArtifactIOError('cannot write out.csv')

        self.assertEqual(self.run_command(command)[0], 3)
