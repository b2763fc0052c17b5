"""scikit-learn style wrappers around the library.

``fit`` materializes the zero sequence, ``predict``/``transform`` evaluate
on new points.  Nothing is learned from data; the estimator protocol is
used so that parameters are inspectable (``get_params``) and the objects
compose with standard tooling.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_points, check_real_points, check_sequence
from .criteria import (
    DEFAULT_A_GRID,
    DEFAULT_COND2_A_GRID,
    DEFAULT_X_GRID,
    INCONCLUSIVE,
    NOT_SLOWLY_DECREASING,
    SLOWLY_DECREASING,
    SlowDecreaseParams,
    classify,
)
from .product_eval import ProductEvaluator
from .seqcore import counting_snapshot, density_estimate, nu


class CanonicalProduct(BaseEstimator):
    """``ln|phi(z)|`` of the canonical product over a zero sequence.

    Parameters
    ----------
    spec : SequenceSpec, mapping or ZeroSequence
    radius : float
        Materialization radius (ignored for a ZeroSequence).
    pairing : {"auto", "principal", "even"}
        ``"auto"`` picks ``"even"`` for even sequences.
    corrected : bool
        Add the density-model correction for unmaterialized zeros.
    """

    def __init__(self, spec=None, radius=1e4, pairing="auto", exclusion_radius=None, corrected=True):
        self.spec = spec
        self.radius = radius
        self.pairing = pairing
        self.exclusion_radius = exclusion_radius
        self.corrected = corrected

    def fit(self, X=None, y=None):
        self.sequence_ = check_sequence(self.spec, self.radius)
        pairing = self.pairing
        if pairing == "auto":
            pairing = "even" if self.sequence_.even else "principal"
        self.evaluator_ = ProductEvaluator(self.sequence_, pairing, self.exclusion_radius)
        self.max_abs_ = self.evaluator_.max_abs
        return self

    def evaluate(self, X):
        """Full :class:`LogModulusArray` for the points ``X``."""
        check_is_fitted(self, "evaluator_")
        return self.evaluator_.log_abs_many(check_points(X))

    def predict(self, X):
        lm = self.evaluate(X)
        return lm.corrected if self.corrected else lm.value

    def predict_bound(self, X):
        """Certified bound on the neglected tail at each point."""
        lm = self.evaluate(X)
        return lm.corrected_bound if self.corrected else lm.tail_bound


class ZeroCountingTransformer(TransformerMixin, BaseEstimator):
    """Map real ``t`` to ``[nu(t), nu(t) - Delta t, n(0, |t|)]``."""

    def __init__(self, spec=None, radius=1e4, delta=None):
        self.spec = spec
        self.radius = radius
        self.delta = delta

    def fit(self, X=None, y=None):
        self.sequence_ = check_sequence(self.spec, self.radius)
        self.delta_ = float(self.delta) if self.delta is not None else density_estimate(self.sequence_)
        self.snapshot_ = counting_snapshot(self.sequence_, 0.0)
        return self

    def transform(self, X):
        check_is_fitted(self, "sequence_")
        t = check_real_points(X)
        v = nu(self.sequence_, t)
        v = np.atleast_1d(v).astype(float)
        return np.column_stack((v, v - self.delta_ * t, np.atleast_1d(self.snapshot_.count(np.abs(t)))))

    def get_feature_names_out(self, input_features=None):
        return np.array(["nu", "L", "n0"], dtype=object)


class SlowDecreaseClassifier(ClassifierMixin, BaseEstimator):
    """Label zero sequences (given as specs or sequences) by slow decrease.

    ``fit`` only records the label set; ``predict`` runs :func:`classify`
    on each input.  ``explain`` returns the full classification records.
    """

    def __init__(self, radius=1.3e6, a_grid=DEFAULT_A_GRID, x_grid=DEFAULT_X_GRID,
                 A_grid=DEFAULT_COND2_A_GRID, window_resolution=64):
        self.radius = radius
        self.a_grid = a_grid
        self.x_grid = x_grid
        self.A_grid = A_grid
        self.window_resolution = window_resolution

    def fit(self, X=None, y=None):
        self.classes_ = np.array([INCONCLUSIVE, NOT_SLOWLY_DECREASING, SLOWLY_DECREASING], dtype=object)
        self.params_ = SlowDecreaseParams(self.a_grid, self.x_grid, self.window_resolution)
        return self

    def explain(self, X):
        check_is_fitted(self, "params_")
        return [classify(check_sequence(item, self.radius), self.params_, self.A_grid) for item in X]

    def predict(self, X):
        return np.array([c.outcome for c in self.explain(X)], dtype=object)
