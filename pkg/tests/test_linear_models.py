import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from gradcheck import max_rel_error, numerical_grad, rel_error
from wdbc_ml.exceptions import DimensionError, LabelEncodingError
from wdbc_ml.linear_models import (
    cross_entropy,
    linreg_forward,
    mse_loss,
    softmax,
    svm_loss,
    svm_predict,
    threshold_05,
)

finite = st.floats(-50, 50, allow_nan=False)


# ---- linear regression

def test_constant_model(rng):
    x = rng.standard_normal((6, 30))
    out = linreg_forward(x, np.zeros((30, 1)), [[0.7]])
    np.testing.assert_array_equal(out, np.full((6, 1), 0.7))


def test_basis_vector():
    theta = np.zeros((30, 1))
    theta[0] = 1.0
    x = np.zeros((1, 30))
    x[0, 0] = 1.0
    assert linreg_forward(x, theta, [[0.0]])[0, 0] == 1.0


def test_forward_matches_loops(rng):
    x, theta, b = rng.standard_normal((7, 30)), rng.standard_normal((30, 1)), rng.standard_normal()
    expected = [sum(x[i, j] * theta[j, 0] for j in range(30)) + b for i in range(7)]
    np.testing.assert_allclose(linreg_forward(x, theta, [[b]])[:, 0], expected, rtol=0, atol=1e-12)


def test_forward_shape_error():
    with pytest.raises(DimensionError):
        linreg_forward(np.ones((2, 29)), np.ones((30, 1)), [[0.0]])


def test_threshold_boundary():
    assert threshold_05([[0.5], [0.49999], [0.51], [-3.0]]).tolist() == [1, 0, 1, 0]


@given(arrays(np.float64, 20, elements=finite))
def test_threshold_monotone(s):
    labels = threshold_05(np.sort(s))
    assert np.all(np.diff(labels) >= 0)


def test_mse_values():
    assert mse_loss([1.0, 0.0], [[1.0], [0.0]])[0] == 0.0
    assert mse_loss([0.0], [[1.0]])[0] == 1.0
    with pytest.raises(DimensionError):
        mse_loss([], np.zeros((0, 1)))


def test_mse_gradient_fd(rng):
    y = rng.integers(0, 2, size=(9, 1)).astype(float)
    box = {"s": rng.standard_normal((9, 1))}
    _, grad = mse_loss(y, box["s"])
    num = numerical_grad(lambda: mse_loss(y, box["s"])[0], box)
    assert rel_error(grad, num["s"]) < 1e-6


# ---- softmax / cross entropy

def test_softmax_symmetric_and_stable():
    np.testing.assert_array_equal(softmax([[0.0, 0.0]]), [[0.5, 0.5]])
    np.testing.assert_array_equal(softmax([[1000.0, 1000.0]]), [[0.5, 0.5]])


def test_softmax_high_precision_oracle():
    mpmath.mp.dps = 50
    e = [mpmath.exp(v) for v in (1, 2, 3)]
    expected = [float(v / sum(e)) for v in e]
    np.testing.assert_allclose(softmax([[1.0, 2.0, 3.0]])[0], expected, rtol=0, atol=1e-12)


@settings(max_examples=100)
@given(arrays(np.float64, (4, 3), elements=finite), st.floats(-100, 100))
def test_softmax_rows_and_shift(z, c):
    p = softmax(z)
    assert np.all((p >= 0) & (p <= 1))
    np.testing.assert_allclose(p.sum(axis=1), 1.0, atol=1e-12)
    np.testing.assert_allclose(softmax(z + c), p, atol=1e-12)


def test_cross_entropy_values():
    assert cross_entropy([[0.0, 1.0]], [[0.0, 1.0]])[0] == 0.0
    assert cross_entropy([[1.0, 0.0]], [[0.5, 0.5]])[0] == pytest.approx(np.log(2), abs=1e-12)
    # saturated prediction hits the clamp, not infinity
    assert np.isfinite(cross_entropy([[1.0, 0.0]], [[0.0, 1.0]])[0])


def test_cross_entropy_gradient_fd(rng):
    y = np.eye(2)[rng.integers(0, 2, size=6)]
    box = {"z": rng.standard_normal((6, 2))}
    _, grad = cross_entropy(y, softmax(box["z"]))
    num = numerical_grad(lambda: cross_entropy(y, softmax(box["z"]))[0], box)
    assert rel_error(grad, num["z"]) < 1e-6


def test_cross_entropy_shape_error():
    with pytest.raises(DimensionError):
        cross_entropy(np.ones((2, 2)), np.ones((3, 2)))


# ---- SVM

@pytest.mark.parametrize("variant", ["l1", "l2"])
def test_on_margin_is_free(variant):
    loss, _, _ = svm_loss([1.0], [[1.0]], np.zeros((3, 1)), 1.0, variant)
    assert loss == 0.0


@pytest.mark.parametrize("score, l1, l2", [(0.0, 1.0, 1.0), (-1.0, 2.0, 4.0)])
def test_hand_evaluated_losses(score, l1, l2):
    w = np.zeros((30, 1))
    assert svm_loss([1.0], [[score]], w, 1.0, "l1")[0] == l1
    assert svm_loss([1.0], [[score]], w, 1.0, "l2")[0] == l2


def test_regulariser_scaled_by_dimension():
    w = np.full((4, 1), 2.0)
    # (1/p) w'w = 16 / 4
    assert svm_loss([1.0], [[5.0]], w, 1.0, "l2")[0] == pytest.approx(4.0)


def test_l1_kink_subgradient_zero():
    _, d, _ = svm_loss([1.0], [[1.0]], np.zeros((2, 1)), 3.0, "l1")
    assert d[0, 0] == 0.0


def test_svm_rejects_bad_labels():
    with pytest.raises(LabelEncodingError):
        svm_loss([0.0], [[1.0]], np.zeros((2, 1)), 1.0)


def _svm_objective(x, y, box, c, variant):
    scores = x @ box["w"] + box["b"]
    return svm_loss(y, scores, box["w"], c, variant)


@pytest.mark.parametrize("variant", ["l1", "l2"])
def test_svm_gradient_fd(rng, variant):
    x = rng.standard_normal((8, 5))
    y = np.where(rng.random((8, 2)) < 0.5, -1.0, 1.0)
    box = {"w": rng.standard_normal((5, 2)) * 0.3, "b": rng.standard_normal((1, 2)) * 0.1}
    _, d_scores, d_reg = _svm_objective(x, y, box, 2.5, variant)
    analytic = {"w": x.T @ d_scores + d_reg, "b": d_scores.sum(axis=0, keepdims=True)}
    num = numerical_grad(lambda: _svm_objective(x, y, box, 2.5, variant)[0], box)
    assert max_rel_error(analytic, num) < 1e-6


@settings(max_examples=50)
@given(arrays(np.float64, (6, 1), elements=finite), st.sampled_from(["l1", "l2"]))
def test_svm_nonnegative_and_zero_iff_margins(s, variant):
    y = np.where(np.arange(6) % 2 == 0, 1.0, -1.0).reshape(6, 1)
    loss, _, _ = svm_loss(y, s, np.zeros((2, 1)), 1.0, variant)
    assert loss >= 0
    assert (loss == 0) == bool(np.all(y * s >= 1))


def test_predict_sign_and_argmax():
    assert svm_predict([[0.0], [-0.1], [2.0]]).tolist() == [1, -1, 1]
    assert svm_predict([[-3.0, 2.0]]).tolist() == [1]
    assert svm_predict([[4.0, 4.0]]).tolist() == [0]


@settings(max_examples=100)
@given(arrays(np.float64, (10, 2), elements=finite), st.floats(1e-3, 1e3))
def test_argmax_scale_invariant(s, k):
    assert np.array_equal(svm_predict(s), svm_predict(k * s))
