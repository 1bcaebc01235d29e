"""
Pytest configuration for boxproj tests.
"""

import os

import pytest

from boxproj.conf import ENV_PREFIX


@pytest.fixture(autouse=True)
def boxproj_environment(monkeypatch):
    """Run every test with a clean BOXPROJ_* environment and a single worker."""
    for key in list(os.environ):
        if key.startswith(ENV_PREFIX):
            monkeypatch.delenv(key)
    monkeypatch.setenv(ENV_PREFIX + 'THREADS', '1')
