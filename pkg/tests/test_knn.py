import math

import numpy as np
import pytest

from ddosbench.errors import FitError, ShapeError
from ddosbench.models import fit_knn, predict_knn

from conftest import make_matrix


def brute_force_knn(train_x, train_y, query, k):
    """Independent exhaustive-scan reference, pure Python."""
    dists = []
    for i, p in enumerate(train_x):
        d = math.sqrt(sum((float(a) - float(b)) ** 2 for a, b in zip(query, p)))
        dists.append((d, i))
    dists.sort()
    chosen = dists[:k]
    votes = {0: 0, 1: 0}
    dsum = {0: 0.0, 1: 0.0}
    for d, i in chosen:
        votes[int(train_y[i])] += 1
        dsum[int(train_y[i])] += d
    if votes[1] != votes[0]:
        label = 1 if votes[1] > votes[0] else 0
    else:
        label = 1 if dsum[1] < dsum[0] else 0
    return label, votes[1] / k


def test_query_equal_to_training_point():
    m = make_matrix([[0.0, 0.0], [5.0, 5.0], [9.0, 1.0]], [0, 1, 0])
    model = fit_knn(m, 1)
    assert predict_knn(model, make_matrix([[5.0, 5.0]])).labels.tolist() == [1]


def test_three_four_five_distance_ranks():
    # (3,4) is at distance 5 from the origin, ahead of (0,6) at 6
    m = make_matrix([[0.0, 6.0], [3.0, 4.0]], [0, 1])
    p = predict_knn(fit_knn(m, 1), make_matrix([[0.0, 0.0]]))
    assert p.labels.tolist() == [1]


def test_k3_vote_two_thirds():
    m = make_matrix([[1.0], [2.0], [3.0], [10.0]], [1, 1, 0, 0])
    p = predict_knn(fit_knn(m, 3), make_matrix([[0.0]]))
    assert p.labels.tolist() == [1]
    assert p.proba.tolist() == [2 / 3]


def test_distance_tie_prefers_lower_index():
    # two points equidistant from the query; lower index wins at k=1
    m = make_matrix([[1.0], [-1.0]], [1, 0])
    assert predict_knn(fit_knn(m, 1), make_matrix([[0.0]])).labels.tolist() == [1]
    m = make_matrix([[-1.0], [1.0]], [0, 1])
    assert predict_knn(fit_knn(m, 1), make_matrix([[0.0]])).labels.tolist() == [0]


def test_vote_tie_goes_to_smaller_summed_distance():
    m = make_matrix([[1.0], [-3.0], [10.0]], [0, 1, 1])
    p = predict_knn(fit_knn(m, 2), make_matrix([[0.0]]))
    assert p.labels.tolist() == [0] and p.proba.tolist() == [0.5]
    m = make_matrix([[-1.0], [3.0]], [1, 0])
    assert predict_knn(fit_knn(m, 2), make_matrix([[0.0]])).labels.tolist() == [1]


def test_full_vote_tie_goes_to_class_zero():
    m = make_matrix([[1.0], [-1.0]], [1, 0])
    assert predict_knn(fit_knn(m, 2), make_matrix([[0.0]])).labels.tolist() == [0]


def test_k_bounds():
    m = make_matrix([[0.0], [1.0], [2.0]], [0, 1, 0])
    assert fit_knn(m, 3).k == 3
    with pytest.raises(FitError):
        fit_knn(m, 0)
    with pytest.raises(FitError):
        fit_knn(m, 4)


def test_stores_points_verbatim(rng):
    x = rng.normal(size=(20, 3))
    y = rng.integers(0, 2, 20)
    model = fit_knn(make_matrix(x, y), 3)
    assert model.points.tobytes() == x.tobytes()
    np.testing.assert_array_equal(model.labels, y)


def test_width_mismatch():
    model = fit_knn(make_matrix([[0.0, 1.0], [1.0, 0.0]], [0, 1]), 1)
    with pytest.raises(ShapeError):
        predict_knn(model, make_matrix([[0.0]]))


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_matches_oracle_on_integer_grid_with_ties(k):
    # small integer coordinates produce many exact distance and vote ties
    rng = np.random.default_rng(k)
    x = rng.integers(0, 4, size=(60, 2)).astype(float)
    y = rng.integers(0, 2, 60)
    q = rng.integers(0, 4, size=(40, 2)).astype(float)
    pred = predict_knn(fit_knn(make_matrix(x, y), k), make_matrix(q))
    for i, row in enumerate(q):
        label, frac = brute_force_knn(x, y, row, k)
        assert pred.labels[i] == label
        assert pred.proba[i] == frac
