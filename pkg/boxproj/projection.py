"""
Seeded random directions and one-dimensional projection.

Randomness is counter based: a SeedSpec names a substream of a master seed,
and bulk draws are cut into fixed-size blocks that each get their own Philox
generator. Results therefore never depend on how blocks are scheduled.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidParameterError, ShapeError
from .mixins import SerializableMixin

UINT64_MAX = 2**64 - 1

# Trials per generator block. Changing it changes every seeded result.
BLOCK_SIZE = 8192

GENERATOR_ID = f'numpy-philox4x64-ziggurat/block{BLOCK_SIZE}'

# Norm below which a Gaussian draw is regenerated before normalizing.
MIN_NORM = 1e-300

# Leading word of every spawn key, one per kind of substream.
STREAM_KEY = 0
BLOCK_KEY = 1
REDRAW_KEY = 2


def _check_u64(name, value):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise InvalidParameterError(f'{name} must be an integer, got {value!r}')
    if not 0 <= int(value) <= UINT64_MAX:
        raise InvalidParameterError(f'{name} must fit in 64 unsigned bits, got {value}')
    return int(value)


def check_dim(dim):
    """
    Validate a dimension argument.

    Args:
        dim: Candidate dimension

    Returns:
        int: dim as a Python int

    Raises:
        InvalidParameterError: if dim is not an integer >= 1
    """
    if isinstance(dim, bool) or not isinstance(dim, (int, np.integer)) or dim < 1:
        raise InvalidParameterError(f'dim must be a positive integer, got {dim!r}')
    return int(dim)


@dataclass(frozen=True)
class SeedSpec(SerializableMixin):
    """
    A reproducible random substream.

    Attributes:
        master_seed (int): 64-bit master seed
        stream_index (int): 64-bit substream index

    Usage:
        rng = SeedSpec(1234, 7).generator()
        block_rng = SeedSpec(1234, 7).generator(block=3)
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'master_seed', _check_u64('master_seed', self.master_seed))
        object.__setattr__(self, 'stream_index', _check_u64('stream_index', self.stream_index))

    @classmethod
    def coerce(cls, seed):
        """
        Accept a SeedSpec or a bare master seed.

        Args:
            seed: SeedSpec or int

        Returns:
            SeedSpec (stream 0 for a bare int)
        """
        if isinstance(seed, SeedSpec):
            return seed
        return cls(seed, 0)

    def spawn(self, index):
        """Return the sibling substream ``index`` under the same master seed."""
        return SeedSpec(self.master_seed, index)

    def spawn_key(self, block=None, kind=None):
        """
        The SeedSequence spawn key of this stream, one of its blocks or a redraw.

        Keys always hold five 32-bit words: the kind tag, then the stream
        index and the block index split into low and high halves. numpy
        splits larger integers into 32-bit words, so a variable layout
        would let distinct keys flatten to the same words.

        Args:
            block: Block index, or None for the stream itself
            kind: Key tag; defaults to STREAM_KEY or BLOCK_KEY from ``block``

        Returns:
            tuple[int, int, int, int, int]
        """
        if kind is None:
            kind = STREAM_KEY if block is None else BLOCK_KEY
        index = 0 if block is None else _check_u64('block', block)
        stream = self.stream_index
        return (kind, stream & 0xFFFFFFFF, stream >> 32, index & 0xFFFFFFFF, index >> 32)

    def seed_sequence(self, block=None, kind=None):
        """
        Build the numpy SeedSequence for this stream or one of its blocks.

        Args:
            block: Block index, or None for the stream itself
            kind: Key tag, see spawn_key

        Returns:
            numpy.random.SeedSequence
        """
        return np.random.SeedSequence(
            entropy=self.master_seed, spawn_key=self.spawn_key(block, kind)
        )

    def generator(self, block=None):
        """
        Create a fresh Philox-backed Generator; never shared between calls.

        Args:
            block: Block index, or None for the stream itself

        Returns:
            numpy.random.Generator
        """
        return np.random.Generator(np.random.Philox(self.seed_sequence(block)))


def block_ranges(count, block_size=BLOCK_SIZE):
    """
    Split ``count`` trials into fixed-size blocks.

    Args:
        count: Total number of trials
        block_size: Trials per block

    Returns:
        list[tuple[int, int]]: (block index, trials in block) pairs
    """
    full, rest = divmod(int(count), block_size)
    blocks = [(b, block_size) for b in range(full)]
    if rest:
        blocks.append((full, rest))
    return blocks


def gaussian_block(dim, seed, block, size):
    """
    Draw one block of standard-normal rows.

    Args:
        dim: Columns per row
        seed: SeedSpec of the stream
        block: Block index within the stream
        size: Number of rows (at most BLOCK_SIZE)

    Returns:
        numpy.ndarray of shape (size, dim)
    """
    return seed.generator(block).standard_normal((size, dim))


def gaussian_rows(dim, count, seed):
    """
    Draw ``count`` standard-normal rows block by block.

    Row t is the same whichever way the blocks are later distributed.

    Args:
        dim: Columns per row
        count: Number of rows
        seed: SeedSpec of the stream

    Returns:
        numpy.ndarray of shape (count, dim)
    """
    dim = check_dim(dim)
    seed = SeedSpec.coerce(seed)
    parts = [gaussian_block(dim, seed, b, size) for b, size in block_ranges(count)]
    if not parts:
        return np.empty((0, dim))
    return np.concatenate(parts)


def normalize_rows(rows, seed, block=0):
    """
    Scale each row to unit length, redrawing rows whose norm underflows.

    Args:
        rows: Array of shape (n, D), modified in place
        seed: SeedSpec used to derive redraw generators
        block: Block index the rows came from

    Returns:
        numpy.ndarray: the normalized rows
    """
    norms = np.linalg.norm(rows, axis=1)
    bad = np.flatnonzero(norms < MIN_NORM)
    if bad.size:
        rng = np.random.Generator(np.random.Philox(seed.seed_sequence(block, REDRAW_KEY)))
        for j in bad:
            while norms[j] < MIN_NORM:
                rows[j] = rng.standard_normal(rows.shape[1])
                norms[j] = np.linalg.norm(rows[j])
    rows /= norms[:, None]
    return rows


def unit_rows(dim, count, seed):
    """
    Draw ``count`` directions uniformly from the unit sphere.

    Args:
        dim: Dimension D
        count: Number of directions
        seed: SeedSpec of the stream

    Returns:
        numpy.ndarray of shape (count, dim) with unit rows
    """
    dim = check_dim(dim)
    seed = SeedSpec.coerce(seed)
    parts = [
        normalize_rows(gaussian_block(dim, seed, b, size), seed, b)
        for b, size in block_ranges(count)
    ]
    if not parts:
        return np.empty((0, dim))
    return np.concatenate(parts)


@dataclass(frozen=True, eq=False)
class ProjectionVector(SerializableMixin):
    """
    A projection direction.

    Attributes:
        coords (numpy.ndarray): The D components of v
        normalized (bool): True when |coords| = 1
    """

    coords: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        coords = np.array(self.coords, dtype=float).reshape(-1)
        if coords.size < 1:
            raise InvalidParameterError('projection vector needs at least one coordinate')
        coords.setflags(write=False)
        object.__setattr__(self, 'coords', coords)
        if self.normalized and abs(np.linalg.norm(coords) - 1.0) > 1e-12:
            raise InvalidParameterError('normalized projection vector must have unit norm')

    def __len__(self):
        return self.coords.size

    def __eq__(self, other):
        if not isinstance(other, ProjectionVector):
            return NotImplemented
        return self.normalized == other.normalized and np.array_equal(self.coords, other.coords)

    __hash__ = None

    @property
    def dim(self):
        return self.coords.size

    @classmethod
    def basis(cls, dim, axis):
        """
        Standard basis vector e_axis (1-based axis, as in the models).

        Args:
            dim: Dimension D
            axis: 1-based axis index

        Returns:
            ProjectionVector with normalized=True
        """
        dim = check_dim(dim)
        if not 1 <= axis <= dim:
            raise InvalidParameterError(f'axis must be in 1..{dim}, got {axis}')
        coords = np.zeros(dim)
        coords[axis - 1] = 1.0
        return cls(coords, normalized=True)

    def normalize(self):
        """Return this direction scaled to unit length."""
        norm = np.linalg.norm(self.coords)
        if norm < MIN_NORM:
            raise InvalidParameterError('cannot normalize a zero-length vector')
        return ProjectionVector(self.coords / norm, normalized=True)


def random_gaussian_vector(dim, seed):
    """
    Draw v = (N_1, ..., N_D) with independent standard normal components.

    Args:
        dim: Dimension D >= 1
        seed: SeedSpec (or bare master seed)

    Returns:
        ProjectionVector with normalized=False
    """
    dim = check_dim(dim)
    seed = SeedSpec.coerce(seed)
    return ProjectionVector(seed.generator().standard_normal(dim), normalized=False)


def random_unit_vector(dim, seed):
    """
    Draw a direction uniformly from the unit sphere by normalizing a Gaussian vector.

    The Gaussian draw is the same one random_gaussian_vector returns for the
    same seed, so the two are antipodal-consistent.

    Args:
        dim: Dimension D >= 1
        seed: SeedSpec (or bare master seed)

    Returns:
        ProjectionVector with normalized=True
    """
    dim = check_dim(dim)
    seed = SeedSpec.coerce(seed)
    rng = seed.generator()
    coords = rng.standard_normal(dim)
    norm = np.linalg.norm(coords)
    while norm < MIN_NORM:
        coords = rng.standard_normal(dim)
        norm = np.linalg.norm(coords)
    return ProjectionVector(coords / norm, normalized=True)


def project(points, v):
    """
    Project points onto a direction: t_j = sum_i points[j][i] * v[i].

    Args:
        points: PointSet or array of shape (n, D)
        v: ProjectionVector or array of length D

    Returns:
        numpy.ndarray of length n

    Raises:
        ShapeError: if D differs between points and v
    """
    array = np.asarray(getattr(points, 'points', points), dtype=float)
    coords = v.coords if isinstance(v, ProjectionVector) else np.asarray(v, dtype=float)
    if array.ndim != 2 or coords.ndim != 1 or array.shape[1] != coords.size:
        raise ShapeError(
            f'cannot project points of shape {array.shape} onto a vector of shape {coords.shape}'
        )
    return array @ coords
