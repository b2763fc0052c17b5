import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import StandardScaler

from slowdec import (
    CanonicalProduct,
    SequenceSpec,
    SlowDecreaseClassifier,
    SlowdecError,
    ZeroCountingTransformer,
    build_sequence,
    geometric_grid,
)
from slowdec.product_eval import log_abs_sin_pi

LATTICE = {"kind": "lattice"}


def test_canonical_product_params_and_clone():
    est = CanonicalProduct(spec=LATTICE, radius=1e3)
    params = est.get_params()
    assert params["radius"] == 1e3 and params["pairing"] == "auto"
    twin = clone(est).set_params(radius=2e3)
    assert twin.radius == 2e3 and est.radius == 1e3


def test_canonical_product_predict():
    est = CanonicalProduct(spec=LATTICE, radius=1e4).fit()
    z = np.array([0.5, 2.5 + 1j])
    exact = log_abs_sin_pi(z.astype(complex)) - np.log(np.pi * np.abs(z))
    pred = est.predict(z)
    assert np.all(np.abs(pred - exact) <= est.predict_bound(z) + 1e-12)
    pairs = np.column_stack((z.real, z.imag))
    assert np.allclose(est.predict(pairs), pred)
    assert est.evaluator_.pairing == "even"


def test_canonical_product_not_fitted_and_bad_input():
    with pytest.raises(NotFittedError):
        CanonicalProduct(spec=LATTICE).predict([1.5])
    est = CanonicalProduct(spec=LATTICE, radius=100).fit()
    with pytest.raises(SlowdecError):
        est.predict(np.ones((3, 3)))
    with pytest.raises(ValueError):
        est.predict([np.nan])
    with pytest.raises(SlowdecError):
        CanonicalProduct(spec="lattice").fit()


def test_canonical_product_accepts_sequence():
    seq = build_sequence(SequenceSpec("lattice"), 500)
    est = CanonicalProduct(spec=seq, corrected=False).fit()
    assert est.max_abs_ == 250.0
    assert np.all(est.predict_bound([1.5]) >= 0)


def test_counting_transformer():
    tr = ZeroCountingTransformer(spec=LATTICE, radius=100)
    out = tr.fit_transform(np.array([3.5, -2.0, 10.0]))
    assert out.shape == (3, 3)
    assert out[:, 0].tolist() == [3, -2, 10]
    assert np.allclose(out[:, 1], [-0.5, 0.0, 0.0])
    assert out[:, 2].tolist() == [6, 4, 20]
    assert list(tr.get_feature_names_out()) == ["nu", "L", "n0"]


def test_counting_transformer_in_pipeline():
    pipe = make_pipeline(ZeroCountingTransformer(spec=LATTICE, radius=100, delta=1.0), StandardScaler())
    out = pipe.fit_transform(np.linspace(1.5, 50.5, 20))
    assert out.shape == (20, 3)
    assert np.allclose(out.mean(axis=0)[[0, 2]], 0.0)


def test_classifier_small_grid():
    clf = SlowDecreaseClassifier(radius=6e4, x_grid=geometric_grid(1e2, 1e3, 4), a_grid=(1, 2, 4))
    clf.fit()
    assert "slowly-decreasing" in clf.classes_
    lattice = SequenceSpec("lattice")
    out = clf.predict([lattice])
    assert out.tolist() == ["slowly-decreasing"]
    (explained,) = clf.explain([lattice])
    assert explained.criterion_name == "theorem2"
    assert clone(clf).get_params()["a_grid"] == (1, 2, 4)
