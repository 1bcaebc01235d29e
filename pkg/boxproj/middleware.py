"""
Command middleware for the boxproj CLI.

A command is a callable taking the parsed argparse namespace and returning a
CommandResult. Middleware wrap commands the same way on every subcommand:

    handler = ExitCodeMiddleware(TimingMiddleware(ManifestMiddleware(command)))
    status = handler(args)
"""

import json
import logging
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from . import __version__
from .exceptions import BoxprojError
from .formats import sha256_file, write_text
from .projection import GENERATOR_ID
from .schemas import RunManifest

logger = logging.getLogger(__name__)

MANIFEST_SUFFIX = '.manifest.json'


@dataclass
class CommandResult:
    """
    What a command produced.

    Attributes:
        command: Command name, e.g. 'sweep' or 'diagnose lemma1'
        parameters: Fully resolved parameters
        master_seed: Seed of the run, if random
        payload: JSON report, written to report_path or stdout
        report_path: Where the JSON report goes (None for stdout)
        stdout: Text for stdout (CSV when no --out was given)
        outputs: Files the command wrote itself
    """

    command: str
    parameters: Dict[str, Any]
    master_seed: Optional[int] = None
    payload: Optional[Dict[str, Any]] = None
    report_path: Optional[str] = None
    stdout: Optional[str] = None
    outputs: List[str] = field(default_factory=list)


def build_manifest(result, argv, outputs=None):
    """
    Describe a command run.

    Args:
        result: CommandResult
        argv: Command line arguments after the program name
        outputs: Mapping of output path to sha256 digest

    Returns:
        RunManifest
    """
    return RunManifest(
        command=result.command,
        argv=list(argv),
        parameters=result.parameters,
        master_seed=result.master_seed,
        generator=GENERATOR_ID,
        artifact_version=__version__,
        outputs=outputs or {},
    )


class ManifestMiddleware:
    """
    Attach a RunManifest to every command.

    JSON reports carry the manifest under the ``manifest`` key. When files
    were written, a ``<first output>.manifest.json`` sidecar lists each of
    them with its SHA-256 digest.
    """

    def __init__(self, get_response):
        """
        Initialize middleware.

        Args:
            get_response: The next middleware or command in the chain
        """
        self.get_response = get_response

    def __call__(self, args):
        """
        Run the command, then emit its report and manifest.

        Args:
            args: Parsed argparse namespace

        Returns:
            CommandResult with stdout filled in for stdout-bound reports
        """
        result = self.get_response(args)
        argv = getattr(args, 'argv', [])

        if result.payload is not None:
            report = dict(result.payload)
            report['manifest'] = build_manifest(result, argv).model_dump()
            text = json.dumps(report, indent=2) + '\n'
            if result.report_path:
                write_text(result.report_path, text)
                result.outputs.insert(0, result.report_path)
            else:
                result.stdout = text

        if result.outputs:
            digests = {path: sha256_file(path) for path in result.outputs}
            manifest = build_manifest(result, argv, digests)
            sidecar = result.outputs[0] + MANIFEST_SUFFIX
            write_text(sidecar, manifest.model_dump_json(indent=2) + '\n')
            logger.info('manifest written to %s', sidecar)
        return result


class TimingMiddleware:
    """Log how long each command took."""

    def __init__(self, get_response):
        self.get_response = get_response

    def __call__(self, args):
        started = time.perf_counter()
        result = self.get_response(args)
        logger.info('%s finished in %.2fs', result.command, time.perf_counter() - started)
        return result


class ExitCodeMiddleware:
    """
    Turn command results and errors into process exit codes.

    Successful commands print their stdout text and return 0. A
    BoxprojError is reported on stderr (no traceback) and its exit_code
    is returned.
    """

    def __init__(self, get_response, stdout=None, stderr=None):
        """
        Initialize middleware.

        Args:
            get_response: The next middleware or command in the chain
            stdout: Stream for payloads (default: sys.stdout)
            stderr: Stream for error messages (default: sys.stderr)
        """
        self.get_response = get_response
        self.stdout = stdout
        self.stderr = stderr

    def __call__(self, args):
        """
        Run the chain.

        Args:
            args: Parsed argparse namespace

        Returns:
            int: 0 on success, the error's exit_code otherwise
        """
        stdout = self.stdout or sys.stdout
        stderr = self.stderr or sys.stderr
        try:
            result = self.get_response(args)
        except BoxprojError as exc:
            logger.debug('command failed', exc_info=True)
            stderr.write(f'boxproj: error: {exc}\n')
            return exc.exit_code
        if result.stdout:
            stdout.write(result.stdout)
        return 0
