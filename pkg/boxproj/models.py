"""
Generative models: the two-Gaussian mixture, the hypercube and the geometric box.

The box is X = (a_1 Y_1, ..., a_D Y_D) with independent fair Bernoulli Y_i,
a_1 = 1 and a_k^2 = r^(k-2) for k >= 2. The hypercube is the box with r = 1.
The mixture is X = N_D + a e Y with a single fair Bernoulli label Y.
"""

from dataclasses import dataclass, field

import numpy as np

from .cluster import ScatterReport, scatter_verdict
from .exceptions import CapacityError, InvalidParameterError, ParameterRangeError
from .mixins import SerializableMixin
from .projection import SeedSpec, check_dim

# Largest D for which all 2^D box vertices are materialized.
ENUMERATION_CAP = 24

MIN_RATIO = 1.0
MAX_RATIO = 2.0

# Prior of every Bernoulli label, fixed for all models.
LABEL_PRIOR = 0.5

UNIT_NORM_TOL = 1e-12


def separating_ratio_bound():
    """
    Largest admitted ratio r.

    At r = 2 the squared scales satisfy a_D^2 = sum_{i<D} a_i^2, so splitting
    on the last axis puts between- and within-class scatter exactly level.
    Any larger r makes that split a cluster.

    Returns:
        float: 2.0
    """
    return MAX_RATIO


def _check_ratio(ratio, allow_any_ratio):
    if isinstance(ratio, bool) or not isinstance(ratio, (int, float, np.floating, np.integer)):
        raise InvalidParameterError(f'ratio must be a real number, got {ratio!r}')
    ratio = float(ratio)
    if not np.isfinite(ratio) or ratio <= 0:
        raise InvalidParameterError(f'ratio must be a positive finite number, got {ratio}')
    if not allow_any_ratio and not MIN_RATIO <= ratio <= MAX_RATIO:
        raise ParameterRangeError(
            f'ratio {ratio} is outside [{MIN_RATIO:g}, {MAX_RATIO:g}]; above 2 the box has a '
            'cluster along its last axis, so the model excludes it '
            '(pass allow_any_ratio / --allow-any-ratio to override)'
        )
    return ratio


def box_squared_scales(dim, ratio, allow_any_ratio=False):
    """
    Squared edge lengths a_k^2: 1 for k = 1, ratio^(k-2) for k >= 2.

    Computed from integer powers rather than by squaring box_scales, so that
    exact cases such as ratio = 2 stay exact.

    Args:
        dim: Dimension D >= 1
        ratio: Geometric ratio r > 0
        allow_any_ratio: Accept r outside [1, 2]

    Returns:
        numpy.ndarray of length D
    """
    dim = check_dim(dim)
    ratio = _check_ratio(ratio, allow_any_ratio)
    exponents = np.maximum(np.arange(dim) - 1, 0)
    return np.power(ratio, exponents.astype(float))


def box_scales(dim, ratio, allow_any_ratio=False):
    """
    Edge lengths of the geometric box: a_1 = 1, a_k = ratio^((k-2)/2).

    Args:
        dim: Dimension D >= 1
        ratio: Geometric ratio r > 0, in [1, 2] unless allow_any_ratio
        allow_any_ratio: Accept r outside [1, 2]

    Returns:
        numpy.ndarray of length D

    Raises:
        InvalidParameterError: for dim < 1 or ratio <= 0
        ParameterRangeError: for r outside [1, 2] without the override

    Example:
        >>> box_scales(3, 4.0, allow_any_ratio=True)
        array([1., 1., 2.])
    """
    dim = check_dim(dim)
    ratio = _check_ratio(ratio, allow_any_ratio)
    exponents = np.maximum(np.arange(dim) - 1, 0) / 2.0
    return np.power(ratio, exponents)


@dataclass(frozen=True, eq=False)
class GaussianMixtureSpec(SerializableMixin):
    """
    Equal-prior mixture of two unit spherical Gaussians, centers 0 and a*e.

    Attributes:
        dim (int): Dimension D
        separation (float): Distance a between the centers
        direction (numpy.ndarray): Unit vector e (default: first basis vector)
    """

    dim: int
    separation: float
    direction: np.ndarray = None

    kind = 'mixture'

    def __post_init__(self):
        dim = check_dim(self.dim)
        separation = float(self.separation)
        if not np.isfinite(separation) or separation < 0:
            raise InvalidParameterError(f'separation must be >= 0, got {self.separation}')
        if self.direction is None:
            direction = np.zeros(dim)
            direction[0] = 1.0
        else:
            direction = np.array(self.direction, dtype=float).reshape(-1)
        if direction.size != dim:
            raise InvalidParameterError(f'direction has {direction.size} components, dim is {dim}')
        if abs(np.linalg.norm(direction) - 1.0) > UNIT_NORM_TOL:
            raise InvalidParameterError('direction must be a unit vector')
        direction.setflags(write=False)
        object.__setattr__(self, 'dim', dim)
        object.__setattr__(self, 'separation', separation)
        object.__setattr__(self, 'direction', direction)

    def __eq__(self, other):
        if not isinstance(other, GaussianMixtureSpec):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.separation == other.separation
            and np.array_equal(self.direction, other.direction)
        )

    __hash__ = None

    @property
    def latent_axes(self):
        """Number of latent label columns (one for the mixture)."""
        return 1

    def to_dict(self):
        return {
            'model': self.kind,
            'dim': self.dim,
            'a': self.separation,
            'e': self.direction.tolist(),
        }


@dataclass(frozen=True)
class BoxSpec(SerializableMixin):
    """
    Geometric box with squared edges a_k^2 = ratio^(k-2).

    Attributes:
        dim (int): Dimension D
        ratio (float): Geometric ratio r (ratio = 1 is the hypercube)
        allow_any_ratio (bool): Whether r outside [1, 2] was explicitly allowed
    """

    dim: int
    ratio: float = 1.0
    allow_any_ratio: bool = field(default=False, compare=False)

    kind = 'box'

    def __post_init__(self):
        object.__setattr__(self, 'dim', check_dim(self.dim))
        object.__setattr__(self, 'ratio', _check_ratio(self.ratio, self.allow_any_ratio))

    @property
    def scales(self):
        """Edge lengths a_1..a_D."""
        return box_scales(self.dim, self.ratio, allow_any_ratio=True)

    @property
    def squared_scales(self):
        """Squared edge lengths a_1^2..a_D^2."""
        return box_squared_scales(self.dim, self.ratio, allow_any_ratio=True)

    @property
    def latent_axes(self):
        return self.dim

    @property
    def is_hypercube(self):
        return self.ratio == 1.0

    def to_dict(self):
        return {'model': self.kind, 'dim': self.dim, 'r': self.ratio}


def hypercube(dim):
    """
    The unit hypercube model: the box with ratio 1.

    Args:
        dim: Dimension D

    Returns:
        BoxSpec
    """
    return BoxSpec(dim, 1.0)


@dataclass(frozen=True, eq=False)
class PointSet(SerializableMixin):
    """
    An n x D sample with the latent labels that produced it.

    Float points and uint8 labels are wrapped in read-only views, not copied.

    Attributes:
        points (numpy.ndarray): Coordinates, shape (n, D)
        latent_labels (numpy.ndarray): Binary labels, shape (n, D) for boxes,
            (n, 1) for the mixture, or None
        model: The originating BoxSpec / GaussianMixtureSpec, or None
    """

    points: np.ndarray
    latent_labels: np.ndarray = None
    model: object = None

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float).view()
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        if points.ndim != 2 or points.shape[0] < 1 or points.shape[1] < 1:
            raise InvalidParameterError(f'point set needs shape (n>=1, D>=1), got {points.shape}')
        points.setflags(write=False)
        object.__setattr__(self, 'points', points)
        if self.latent_labels is not None:
            labels = np.asarray(self.latent_labels, dtype=np.uint8).view()
            if labels.ndim == 1:
                labels = labels.reshape(-1, 1)
            if labels.ndim != 2 or labels.shape[0] != points.shape[0]:
                raise InvalidParameterError(
                    f'latent labels of shape {labels.shape} do not match {points.shape[0]} points'
                )
            if labels.size and labels.max() > 1:
                raise InvalidParameterError('latent labels must be 0 or 1')
            labels.setflags(write=False)
            object.__setattr__(self, 'latent_labels', labels)
        if self.model is not None and self.model.dim != points.shape[1]:
            raise InvalidParameterError(
                f'model dim {self.model.dim} does not match {points.shape[1]} columns'
            )

    def __len__(self):
        return self.points.shape[0]

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        if (self.latent_labels is None) != (other.latent_labels is None):
            return False
        same_labels = self.latent_labels is None or np.array_equal(
            self.latent_labels, other.latent_labels
        )
        return (
            np.array_equal(self.points, other.points)
            and same_labels
            and self.model == other.model
        )

    __hash__ = None

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]

    def labels_for(self, axis):
        """
        Latent label column for a 1-based axis.

        Args:
            axis: 1-based latent axis

        Returns:
            numpy.ndarray of 0/1 values, length n

        Raises:
            InvalidParameterError: if the set has no labels
            ParameterRangeError: if the axis does not exist
        """
        if self.latent_labels is None:
            raise InvalidParameterError('point set has no latent labels')
        width = self.latent_labels.shape[1]
        if not 1 <= axis <= width:
            raise ParameterRangeError(f'latent axis must be in 1..{width}, got {axis}')
        return self.latent_labels[:, axis - 1]

    def is_consistent(self):
        """
        Check points[j][i] == scales[i] * latent_labels[j][i] for box models.

        Returns:
            bool: True when the invariant holds (or does not apply)
        """
        if not isinstance(self.model, BoxSpec) or self.latent_labels is None:
            return True
        return bool(np.array_equal(self.points, self.latent_labels * self.model.scales))


def enumerate_box_vertices(spec):
    """
    List all 2^D vertices of a box.

    Row j has labels Y_i = bit (i-1) of j, so axis 1 is the least significant
    digit of a binary counter.

    Args:
        spec: BoxSpec with dim <= ENUMERATION_CAP

    Returns:
        PointSet with latent labels

    Raises:
        CapacityError: if spec.dim exceeds ENUMERATION_CAP
    """
    if spec.dim > ENUMERATION_CAP:
        raise CapacityError(
            f'cannot enumerate 2^{spec.dim} vertices; enumeration is capped at D={ENUMERATION_CAP}'
        )
    index = np.arange(2**spec.dim, dtype=np.uint32)
    labels = np.empty((index.size, spec.dim), dtype=np.uint8)
    for i in range(spec.dim):
        labels[:, i] = (index >> i) & 1
    return PointSet(labels * spec.scales, labels, spec)


def _check_count(n):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidParameterError(f'n must be a positive integer, got {n!r}')
    return int(n)


def sample_box(spec, n, seed):
    """
    Draw n independent box points.

    Args:
        spec: BoxSpec
        n: Number of points >= 1
        seed: SeedSpec or master seed

    Returns:
        PointSet with latent labels; a pure function of (spec, n, seed)
    """
    n = _check_count(n)
    rng = SeedSpec.coerce(seed).generator()
    labels = (rng.random((n, spec.dim)) < LABEL_PRIOR).astype(np.uint8)
    return PointSet(labels * spec.scales, labels, spec)


def sample_gaussian_mixture(spec, n, seed):
    """
    Draw n points of X = N_D + a e Y.

    Args:
        spec: GaussianMixtureSpec
        n: Number of points >= 1
        seed: SeedSpec or master seed

    Returns:
        PointSet whose single label column holds Y
    """
    n = _check_count(n)
    rng = SeedSpec.coerce(seed).generator()
    labels = (rng.random((n, 1)) < LABEL_PRIOR).astype(np.uint8)
    noise = rng.standard_normal((n, spec.dim))
    points = noise + labels * (spec.separation * spec.direction)
    return PointSet(points, labels, spec)


def distributional_scatter(spec, axis=1):
    """
    Exact population scatter of the split on one latent label.

    Mixture: within = D, between = a^2 / 4. Box split on axis k:
    within = (1/4) sum_{i != k} a_i^2, between = (1/4) a_k^2.

    Args:
        spec: BoxSpec or GaussianMixtureSpec
        axis: 1-based latent axis (must be 1 for the mixture)

    Returns:
        ScatterReport

    Raises:
        ParameterRangeError: for an invalid axis
    """
    if not 1 <= axis <= spec.latent_axes:
        raise ParameterRangeError(f'latent axis must be in 1..{spec.latent_axes}, got {axis}')
    if isinstance(spec, GaussianMixtureSpec):
        within = float(spec.dim)
        between = spec.separation**2 / 4.0
    else:
        squared = spec.squared_scales
        # Var(a Y) = a^2 / 4 for a fair Bernoulli Y
        between = float(squared[axis - 1]) / 4.0
        within = float(np.delete(squared, axis - 1).sum()) / 4.0
    total = within + between
    return ScatterReport(within, between, total, scatter_verdict(within, between, total))


def whiten(spec):
    """
    Rescale every axis of a box to the same variance.

    The box covariance is diagonal (a_i^2 / 4), so per-axis normalization is
    full whitening; up to a common factor the result is the hypercube.

    Args:
        spec: BoxSpec

    Returns:
        BoxSpec with the same dim and ratio 1
    """
    if spec.ratio == 1.0:
        return spec
    return BoxSpec(spec.dim, 1.0)


def pairwise_distance_range(points):
    """
    Smallest and largest distance between two distinct rows.

    Args:
        points: PointSet or array of shape (n, D), n >= 2

    Returns:
        tuple[float, float]: (min, max) pairwise Euclidean distance
    """
    array = np.asarray(getattr(points, 'points', points), dtype=float)
    if array.shape[0] < 2:
        raise InvalidParameterError('need at least two points for pairwise distances')
    sq = np.sum(array**2, axis=1)
    gram = array @ array.T
    dist2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * gram, 0.0)
    upper = dist2[np.triu_indices(array.shape[0], k=1)]
    return float(np.sqrt(upper.min())), float(np.sqrt(upper.max()))
