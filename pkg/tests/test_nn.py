import numpy as np
import pytest
from gradcases import op_gradient_errors
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from oracles import gru_step, rel_err, triple_loop_batched_dot

from codesum import nn


@pytest.fixture(scope="module")
def op_errors():
    return op_gradient_errors()


@pytest.mark.parametrize(
    "op",
    ["embedding", "dense", "time_distributed_dense", "softmax", "flatten", "concatenate",
     "batched_dot_scores", "batched_dot_context", "gru", "softmax_cross_entropy"],
)
def test_op_gradients(op_errors, op):
    assert op_errors[op] < 1e-4


@pytest.mark.parametrize("axes, shapes", [((2, 2), ((3, 4, 5), (3, 6, 5))), ((2, 1), ((3, 4, 6), (3, 6, 5)))])
def test_batched_dot_matches_triple_loop(axes, shapes):
    rng = np.random.default_rng(0)
    a, b = rng.standard_normal(shapes[0]), rng.standard_normal(shapes[1])
    assert np.allclose(nn.batched_dot_forward(a, b, axes), triple_loop_batched_dot(a, b, axes), atol=1e-12)


def test_batched_dot_shape_errors():
    with pytest.raises(ValueError):
        nn.batched_dot_forward(np.zeros((2, 3, 4)), np.zeros((2, 3, 5)), (2, 2))
    with pytest.raises(ValueError):
        nn.batched_dot_forward(np.zeros((2, 3, 4)), np.zeros((3, 3, 4)), (2, 2))


def test_gru_matches_single_step_oracle():
    rng = np.random.default_rng(3)
    x = rng.standard_normal((2, 4, 3))
    h0 = rng.standard_normal((2, 5))
    k, u, b = rng.standard_normal((3, 15)), rng.standard_normal((5, 15)), rng.standard_normal(15)
    states, h_t, _ = nn.gru_forward(x, h0, k, u, b)
    h = h0
    for t in range(4):
        h = gru_step(x[:, t], h, k, u, b)
        assert np.allclose(states[:, t], h, atol=1e-12)
    assert np.allclose(h_t, h)


def test_gru_zero_update_gate_keeps_state():
    # bias of -50 on the update gate -> z ~ 0 -> h' = h
    units = 3
    b = np.zeros(3 * units)
    b[:units] = -50
    h0 = np.array([[0.3, -0.2, 0.9]])
    states, _, _ = nn.gru_forward(np.ones((1, 4, 2)), h0, np.ones((2, 9)), np.ones((3, 9)), b)
    assert np.allclose(states[0], h0, atol=1e-12)


def test_gru_stable_over_1000_steps():
    rng = np.random.default_rng(5)
    k, u, b = rng.standard_normal((4, 24)) * 3, rng.standard_normal((8, 24)) * 3, rng.standard_normal(24)
    states, _, _ = nn.gru_forward(rng.standard_normal((2, 1000, 4)) * 10, np.zeros((2, 8)), k, u, b)
    assert np.all(np.isfinite(states)) and np.abs(states).max() <= 1.0


@given(arrays(np.float64, (3, 7), elements=st.floats(-1e4, 1e4)))
def test_softmax_rows_sum_to_one(x):
    p = nn.softmax_forward(x)
    assert np.all(p >= 0)
    assert np.allclose(p.sum(axis=-1), 1.0, atol=1e-9)


def test_sigmoid_extremes():
    s = nn.sigmoid(np.array([-1000.0, 0.0, 1000.0]))
    assert np.all(np.isfinite(s)) and np.allclose(s, [0, 0.5, 1])


def test_embedding_index_errors():
    with pytest.raises(IndexError):
        nn.embedding_forward(np.array([[5]]), np.zeros((5, 2)))


def test_dense_shape_error_names_shapes():
    with pytest.raises(ValueError, match=r"\(2, 3\)"):
        nn.dense_forward(np.zeros((2, 3)), np.zeros((4, 2)), np.zeros(2))


def test_time_distributed_requires_rank3():
    with pytest.raises(ValueError):
        nn.time_distributed_dense_forward(np.zeros((2, 3)), np.zeros((3, 2)), np.zeros(2))


def test_cross_entropy_matches_manual():
    probs = np.array([[0.2, 0.8], [0.5, 0.5]])
    assert nn.cross_entropy(probs, [1, 0]) == pytest.approx(-(np.log(0.8) + np.log(0.5)) / 2)
    loss, _ = nn.softmax_cross_entropy(np.log(probs), np.array([1, 0]))
    assert loss == pytest.approx(nn.cross_entropy(probs, [1, 0]))


def test_assert_finite():
    with pytest.raises(FloatingPointError):
        nn.assert_finite("x", np.array([1.0, np.nan]))


def test_grad_check_requires_float64():
    with pytest.raises(TypeError):
        nn.grad_check(lambda: 0.0, {"w": np.zeros(2, dtype=np.float32)}, {"w": np.zeros(2)})


def test_grad_check_flags_wrong_gradient():
    w = np.array([1.0, 2.0])
    errors = nn.grad_check(lambda: float((w**2).sum()), {"w": w}, {"w": 3 * w})
    assert errors["w"] > 0.1
    errors = nn.grad_check(lambda: float((w**2).sum()), {"w": w}, {"w": 2 * w})
    assert errors["w"] < 1e-8


def test_relative_error_scale():
    assert nn.relative_error(np.zeros(3), np.zeros(3)) == 0.0
    assert rel_err(np.array([1.0]), np.array([1.1])) == pytest.approx(0.1 / 1.1)


def test_adam_minimizes_quadratic():
    params = nn.ParamSet()
    params.add("w", np.array([5.0, -3.0]))
    opt = nn.Adam(lr=0.1)
    for _ in range(500):
        params.zero_grad()
        params.accumulate("w", 2 * params["w"])
        opt.step(params)
    assert np.abs(params["w"]).max() < 1e-2


def test_adam_first_step_is_lr_sized():
    params = nn.ParamSet()
    params.add("w", np.array([1.0]))
    params.accumulate("w", np.array([123.0]))
    nn.Adam(lr=0.01).step(params)
    assert params["w"][0] == pytest.approx(0.99, abs=1e-6)


def test_adam_clipnorm():
    params = nn.ParamSet()
    params.add("w", np.array([0.0, 0.0]))
    params.accumulate("w", np.array([3.0, 4.0]))
    opt = nn.Adam(lr=1.0, clipnorm=1.0)
    opt.step(params)
    assert np.allclose(opt.m["w"], 0.1 * np.array([0.6, 0.8]))


def test_paramset_shape_guard():
    params = nn.ParamSet()
    params.add("w", np.zeros((2, 2)))
    with pytest.raises(ValueError):
        params["w"] = np.zeros(3)
    with pytest.raises(KeyError):
        params.add("w", np.zeros(1))


def test_glorot_uniform_bounds():
    w = nn.glorot_uniform(np.random.default_rng(0), (100, 50))
    limit = np.sqrt(6 / 150)
    assert np.abs(w).max() <= limit and w.std() > limit / 3
