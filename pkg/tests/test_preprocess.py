import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ddosbench.errors import ShapeError
from ddosbench.preprocess import (FeatureMask, ScalerParams, fit_minmax, label_correlations,
                                  select_features, transform_minmax)

from conftest import make_matrix


def test_column_equal_to_label_scores_one():
    y = [0, 1, 0, 1, 1]
    mask = select_features(make_matrix(np.array([y]).T, y), 0.05)
    assert mask.scores[0] == pytest.approx(1.0, abs=1e-12)
    assert mask.kept == (0,)


def test_constant_column_scores_zero_and_is_dropped():
    y = [0, 1, 0, 1]
    m = make_matrix([[3.0, 0.0], [3.0, 1.0], [3.0, 0.0], [3.0, 1.0]], y)
    mask = select_features(m, 0.05)
    assert mask.scores[0] == 0.0
    assert mask.kept == (1,)


def test_hand_pearson_case():
    # x = (0,0,1,0), y = (0,0,1,1): sxy = 0.5, sxx = 0.75, syy = 1 -> r = 1/sqrt(3)
    m = make_matrix([[0.0], [0.0], [1.0], [0.0]], [0, 0, 1, 1])
    mask = select_features(m, 0.05)
    assert mask.scores[0] == pytest.approx(1 / math.sqrt(3), abs=1e-12)
    assert mask.kept == (0,)


def test_fallback_keeps_best_column():
    y = [0, 1, 0, 1, 0, 1]
    m = make_matrix([[1, 5], [1, 5], [1, 5], [1, 5], [1, 5], [1, 6]], y)
    mask = select_features(m, 0.9)
    assert mask.kept == (1,)


def test_threshold_zero_keeps_everything():
    m = make_matrix([[1, 2], [1, 3], [1, 4]], [0, 1, 0])
    assert select_features(m, 0.0).kept == (0, 1)


def test_fit_minmax_definition():
    p = fit_minmax(make_matrix([[2.0, -1.0], [10.0, 4.0], [6.0, 0.0]]))
    assert p.min == (2.0, -1.0) and p.max == (10.0, 4.0)


def test_fit_minmax_single_row():
    p = fit_minmax(make_matrix([[7.0, 3.0]]))
    assert p.min == p.max == (7.0, 3.0)


def test_transform_endpoints_midpoint_and_constant():
    p = ScalerParams((2.0, 5.0), (10.0, 5.0))
    out = transform_minmax(p, make_matrix([[2.0, 5.0], [10.0, 5.0], [6.0, 5.0]]))
    assert out.values[:, 0].tolist() == [0.0, 1.0, 0.5]
    assert out.values[:, 1].tolist() == [0.0, 0.0, 0.0]


def test_transform_does_not_clamp():
    p = ScalerParams((0.0,), (10.0,))
    out = transform_minmax(p, make_matrix([[-5.0], [20.0]]))
    assert out.values[:, 0].tolist() == [-0.5, 2.0]


def test_transform_shape_error():
    with pytest.raises(ShapeError):
        transform_minmax(ScalerParams((0.0,), (1.0,)), make_matrix([[1.0, 2.0]]))


def test_mask_serialization_round_trip():
    mask = FeatureMask((0, 2), (0.5, 0.01, 0.2))
    assert FeatureMask.from_dict(mask.to_dict()) == mask


matrices = arrays(np.float64, st.tuples(st.integers(1, 30), st.integers(1, 5)),
                  elements=st.floats(-1e6, 1e6, allow_nan=False))


@given(matrices)
def test_scaled_training_values_in_unit_interval(values):
    m = make_matrix(values)
    out = transform_minmax(fit_minmax(m), m).values
    assert np.all(out >= 0.0) and np.all(out <= 1.0)


@given(matrices, st.floats(-1e6, 1e6), st.floats(-1e6, 1e6))
def test_transform_strictly_increasing(values, a, b):
    m = make_matrix(values)
    p = fit_minmax(m)
    assume(a != b)
    lo, hi = min(a, b), max(a, b)
    probe = make_matrix(np.tile([[lo], [hi]], (1, m.n_cols)))
    out = transform_minmax(p, probe).values
    for j in range(m.n_cols):
        if p.max[j] > p.min[j] and (hi - lo) / (p.max[j] - p.min[j]) > 1e-9:
            assert out[0, j] < out[1, j]


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1),
       st.lists(st.floats(0.1, 100.0), min_size=4, max_size=4),
       st.lists(st.floats(-50.0, 50.0), min_size=4, max_size=4))
def test_selection_invariant_under_positive_affine_rescaling(seed, scales, shifts):
    rng = np.random.default_rng(seed)
    y = rng.integers(0, 2, 60)
    assume(0 < y.sum() < 60)
    x = rng.standard_normal((60, 4)) + np.outer(y, rng.uniform(-0.5, 0.5, 4))
    base = label_correlations(make_matrix(x, y))
    # keep away from the cutoff so rounding cannot flip a decision
    assume(np.all(np.abs(base - 0.05) > 1e-6))
    rescaled = x * np.array(scales) + np.array(shifts)
    a = select_features(make_matrix(x, y), 0.05)
    b = select_features(make_matrix(rescaled, y), 0.05)
    assert a.kept == b.kept
    np.testing.assert_allclose(a.scores, b.scores, atol=1e-9)
