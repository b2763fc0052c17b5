"""Input validation shared by the estimator layer and the CLI."""

from __future__ import annotations

import math
from collections.abc import Mapping

import numpy as np
from sklearn.utils import check_array

from .exceptions import SlowdecError
from .seqcore import SequenceSpec, ZeroSequence


def check_points(X):
    """Return a 1-d array of evaluation points.

    Accepts a 1-d array (real or complex), an ``(n, 1)`` column, or an
    ``(n, 2)`` array of ``[Re, Im]`` pairs.
    """
    X = np.asarray(X)
    if np.iscomplexobj(X):
        X = X.ravel()
        if not np.all(np.isfinite(X)):
            raise SlowdecError("evaluation points must be finite")
        return X
    if X.ndim <= 1:
        X = check_array(np.atleast_1d(X).reshape(-1, 1), dtype=float, ensure_2d=True)
        return X[:, 0]
    X = check_array(X, dtype=float)
    if X.shape[1] == 1:
        return X[:, 0]
    if X.shape[1] == 2:
        return X[:, 0] + 1j * X[:, 1]
    raise SlowdecError(f"points must have 1 or 2 columns, got {X.shape[1]}")


def check_real_points(t, name="t"):
    t = check_array(np.atleast_1d(np.asarray(t, dtype=float)).reshape(-1, 1), dtype=float)[:, 0]
    return t


def check_spec(spec):
    if isinstance(spec, SequenceSpec):
        return spec
    if isinstance(spec, Mapping):
        return SequenceSpec.from_dict(spec)
    raise SlowdecError(f"expected a SequenceSpec or a mapping, got {type(spec).__name__}")


def check_radius(radius):
    try:
        r = float(radius)
    except (TypeError, ValueError):
        raise SlowdecError(f"radius must be a number, got {radius!r}") from None
    if not r > 0 or math.isnan(r):
        raise SlowdecError(f"radius must be positive, got {radius!r}")
    return r


def check_sequence(obj, radius=None):
    """A :class:`ZeroSequence` as is, or one built from a spec at ``radius``."""
    from .seqcore import build_sequence

    if isinstance(obj, ZeroSequence):
        return obj
    if radius is None:
        raise SlowdecError("a radius is needed to materialize a sequence spec")
    return build_sequence(check_spec(obj), check_radius(radius))
