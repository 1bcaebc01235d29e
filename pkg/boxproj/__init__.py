"""
boxproj
Random projections of high-dimensional box and mixture models

Simulates when a random one-dimensional projection turns a latent binary
split into a scatter-criterion clustering.
"""

__version__ = '1.0.0'
__author__ = 'boxproj'
__license__ = 'MIT'

from .cluster import BinaryPartition, ScatterReport, ThresholdReport
from .models import BoxSpec, GaussianMixtureSpec, PointSet
from .montecarlo import EstimateWithCI, SweepTable
from .projection import ProjectionVector, SeedSpec

__all__ = [
    'BinaryPartition',
    'BoxSpec',
    'EstimateWithCI',
    'GaussianMixtureSpec',
    'PointSet',
    'ProjectionVector',
    'ScatterReport',
    'SeedSpec',
    'SweepTable',
    'ThresholdReport',
]
