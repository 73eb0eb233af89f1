"""scikit-learn style wrappers around the pipeline."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .complex import check_field
from .geometry import PointCloud
from .pipeline import DelaunayFiltration, radius, reconstruct


def _cloud(X, perturb: bool) -> PointCloud:
    X = check_array(X, dtype=np.float64, ensure_min_samples=1)
    if X.shape[1] not in (2, 3):
        raise ValueError(f"expected 2 or 3 columns, got {X.shape[1]}")
    return PointCloud.from_array(X, perturb=perturb)


def _diagram(bars, dims) -> np.ndarray:
    rows = [
        (radius(b.birth), np.inf if b.death is None else radius(b.death), b.dim)
        for b in bars
        if (dims is None or b.dim in dims) and b.birth != b.death
    ]
    return np.array(rows, dtype=float).reshape(-1, 3)


class DelaunayPersistence(TransformerMixin, BaseEstimator):
    """Persistence diagram of the Delaunay radius filtration.

    ``transform`` maps a point cloud to an array of rows (birth, death, dim)
    in radius units; essential classes die at ``inf`` and zero-length bars
    are dropped.
    """

    def __init__(self, field: int = 2, homology_dims=None, perturb: bool = False):
        self.field = field
        self.homology_dims = homology_dims
        self.perturb = perturb

    def fit(self, X, y=None):
        check_field(self.field)
        bundle = DelaunayFiltration.build(_cloud(X, self.perturb), self.field)
        self.barcode_ = bundle.barcode()
        self.diagram_ = _diagram(self.barcode_, self.homology_dims)
        self.n_features_in_ = np.asarray(X).shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "barcode_")
        bundle = DelaunayFiltration.build(_cloud(X, self.perturb), self.field)
        return _diagram(bundle.barcode(), self.homology_dims)


class WrapCycleReconstructor(BaseEstimator):
    """Lexicographically minimal cycle of the most persistent feature.

    After ``fit``: ``report_`` (full report), ``cycle_`` (int array of
    support simplices, one row per simplex), ``coefficients_`` and ``wrap_``
    (the Wrap complex at the feature's birth).
    """

    def __init__(self, dim: int = 1, field: int = 2, perturb: bool = False):
        self.dim = dim
        self.field = field
        self.perturb = perturb

    def fit(self, X, y=None):
        check_field(self.field)
        cloud = _cloud(X, self.perturb)
        self.report_ = reconstruct(cloud, self.dim, self.field)
        self.cycle_ = np.array(self.report_.support, dtype=int).reshape(-1, self.dim + 1)
        self.coefficients_ = np.array([c for _, c in self.report_.cycle], dtype=int)
        self.wrap_ = self.report_.wrap
        self.n_features_in_ = cloud.dim
        return self

    def transform(self, X=None):
        """Support simplices of the fitted cycle (``X`` is ignored)."""
        check_is_fitted(self, "report_")
        return self.cycle_
