"""
CSV and JSON codecs for point sets, projections and sweep tables.

Floats are written with 17 significant digits, which round-trips every
double exactly. Files use '\\n' line endings so checksums do not depend on
the platform.
"""

import csv
import hashlib
import io
import logging
from pathlib import Path

import numpy as np

from .exceptions import ArtifactIOError, InvalidParameterError
from .models import PointSet

logger = logging.getLogger(__name__)


def format_float(value):
    """
    Format a float with 17 significant digits.

    Args:
        value: Real number

    Returns:
        str that float() parses back to exactly ``value``
    """
    return format(float(value), '.17g')


def _render_csv(header, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def write_text(path, text):
    """
    Write a text artifact.

    Args:
        path: Destination path
        text: Content

    Raises:
        ArtifactIOError: if the file cannot be written
    """
    try:
        with open(path, 'w', encoding='utf-8', newline='') as handle:
            handle.write(text)
    except OSError as exc:
        raise ArtifactIOError(f'cannot write {path}: {exc.strerror or exc}') from exc
    logger.debug('wrote %s (%d bytes)', path, len(text))


def read_text(path):
    """
    Read a text artifact.

    Raises:
        ArtifactIOError: if the file cannot be read
    """
    try:
        return Path(path).read_text(encoding='utf-8')
    except OSError as exc:
        raise ArtifactIOError(f'cannot read {path}: {exc.strerror or exc}') from exc


def sha256_file(path):
    """
    Hex SHA-256 digest of a file.

    Raises:
        ArtifactIOError: if the file cannot be read
    """
    digest = hashlib.sha256()
    try:
        with open(path, 'rb') as handle:
            for chunk in iter(lambda: handle.read(1 << 20), b''):
                digest.update(chunk)
    except OSError as exc:
        raise ArtifactIOError(f'cannot read {path}: {exc.strerror or exc}') from exc
    return digest.hexdigest()


def pointset_to_csv(point_set):
    """
    Render a PointSet as CSV: header x1..xD then y1..yK when labels exist.

    Args:
        point_set: PointSet

    Returns:
        str
    """
    header = [f'x{i + 1}' for i in range(point_set.dim)]
    labels = point_set.latent_labels
    if labels is not None:
        header += [f'y{i + 1}' for i in range(labels.shape[1])]
    rows = []
    for j, row in enumerate(point_set.points):
        cells = [format_float(x) for x in row]
        if labels is not None:
            cells += [str(int(y)) for y in labels[j]]
        rows.append(cells)
    return _render_csv(header, rows)


def pointset_from_csv(text, model=None):
    """
    Parse PointSet CSV.

    Args:
        text: CSV document
        model: Optional originating spec to attach

    Returns:
        PointSet

    Raises:
        InvalidParameterError: for empty or malformed documents
    """
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or not any(cell.strip() for cell in rows[0]):
        raise InvalidParameterError('point set CSV is empty')
    header = [cell.strip() for cell in rows[0]]
    x_cols = [i for i, name in enumerate(header) if name.startswith('x')]
    y_cols = [i for i, name in enumerate(header) if name.startswith('y')]
    if not x_cols or len(x_cols) + len(y_cols) != len(header):
        raise InvalidParameterError(f'unexpected point set header {header}')
    body = [row for row in rows[1:] if row]
    if not body:
        raise InvalidParameterError('point set CSV has no rows')
    try:
        points = np.array([[float(row[i]) for i in x_cols] for row in body])
        labels = np.array([[int(row[i]) for i in y_cols] for row in body]) if y_cols else None
    except (ValueError, IndexError) as exc:
        raise InvalidParameterError(f'malformed point set row: {exc}') from exc
    return PointSet(points, labels, model)


def write_pointset_csv(point_set, path):
    """Write a PointSet as CSV to ``path``."""
    write_text(path, pointset_to_csv(point_set))


def read_pointset_csv(path, model=None):
    """Read a PointSet CSV from ``path``."""
    return pointset_from_csv(read_text(path), model)


def projection_to_csv(values):
    """Render projected values as a single ``t`` column."""
    return _render_csv(['t'], [[format_float(t)] for t in np.asarray(values).reshape(-1)])


def sweep_to_csv(table):
    """
    Render a SweepTable: columns r,D,trials,p_hat,ci_low,ci_high,master_seed.

    Args:
        table: SweepTable

    Returns:
        str
    """
    rows = []
    for row in table.rows():
        rows.append([
            format_float(row['r']),
            str(row['D']),
            str(row['trials']),
            format_float(row['p_hat']),
            format_float(row['ci_low']),
            format_float(row['ci_high']),
            str(row['master_seed']),
        ])
    return _render_csv(table.columns, rows)


def sweep_rows_from_csv(text):
    """
    Parse sweep CSV back into typed rows.

    Returns:
        list[dict]: One dict per row with float/int values
    """
    reader = csv.DictReader(io.StringIO(text))
    ints = {'D', 'trials', 'master_seed'}
    try:
        return [
            {key: int(value) if key in ints else float(value) for key, value in row.items()}
            for row in reader
        ]
    except (TypeError, ValueError) as exc:
        raise InvalidParameterError(f'malformed sweep row: {exc}') from exc
