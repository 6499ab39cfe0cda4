import numpy as np
import pytest

from core.errors import DimensionError, NonFiniteError
from numcore import (
    AdamOptimizer,
    AdamState,
    Param,
    adam_step,
    affine_backward,
    affine_forward,
    clip_global_norm,
    concat,
    ensure_finite,
    glorot_init,
    grad_check,
    hadamard,
    make_rng,
    sigmoid_map,
    split,
    tanh_map,
)


class TestOps:
    """Forward primitives and their shape checks."""

    def test_affine_single_vector(self):
        W = np.array([[1.0, 2.0], [3.0, 4.0], [0.0, -1.0]])
        b = np.array([0.5, 0.0, 1.0])
        x = np.array([1.0, -1.0])
        np.testing.assert_allclose(affine_forward(x, W, b), [-0.5, -1.0, 2.0])

    def test_affine_batched(self):
        rng = make_rng(0)
        W, b = rng.standard_normal((3, 5)), rng.standard_normal(3)
        x = rng.standard_normal((4, 2, 5))
        out = affine_forward(x, W, b)
        assert out.shape == (4, 2, 3)
        np.testing.assert_allclose(out[2, 1], W @ x[2, 1] + b)

    def test_affine_dimension_error(self):
        with pytest.raises(DimensionError, match="affine_forward"):
            affine_forward(np.ones(4), np.ones((3, 5)), np.ones(3))
        with pytest.raises(DimensionError):
            affine_forward(np.ones(5), np.ones((3, 5)), np.ones(2))

    def test_affine_backward_matches_definition(self):
        rng = make_rng(1)
        W = rng.standard_normal((3, 4))
        x = rng.standard_normal((6, 4))
        upstream = rng.standard_normal((6, 3))
        dx, dW, db = affine_backward(x, W, upstream)
        np.testing.assert_allclose(dx, upstream @ W)
        np.testing.assert_allclose(dW, upstream.T @ x)
        np.testing.assert_allclose(db, upstream.sum(axis=0))

    def test_affine_matches_triple_loop(self):
        rng = make_rng(17)
        for _ in range(200):
            batch, rows, cols = (int(n) for n in rng.integers(1, 33, size=3))
            batch = min(batch, 8)
            W = rng.standard_normal((rows, cols))
            b = rng.standard_normal(rows)
            x = rng.standard_normal((batch, cols))
            expected = np.zeros((batch, rows))
            for n in range(batch):
                for i in range(rows):
                    total = b[i]
                    for j in range(cols):
                        total += W[i, j] * x[n, j]
                    expected[n, i] = total
            np.testing.assert_allclose(affine_forward(x, W, b), expected, rtol=0, atol=1e-12)

    def test_affine_backward_small_case(self):
        dx, dW, db = affine_backward(np.array([5.0, 7.0]), np.array([[2.0, 3.0]]), np.array([1.0]))
        np.testing.assert_array_equal(dx, [2.0, 3.0])
        np.testing.assert_array_equal(dW, [[5.0, 7.0]])
        np.testing.assert_array_equal(db, [1.0])

    def test_affine_backward_zero_upstream(self):
        rng = make_rng(2)
        x, W = rng.standard_normal((3, 4)), rng.standard_normal((2, 4))
        dx, dW, db = affine_backward(x, W, np.zeros((3, 2)))
        assert not dx.any() and not dW.any() and not db.any()

    @pytest.mark.parametrize("seed", range(5))
    def test_affine_backward_finite_differences(self, seed):
        rng = make_rng(seed, 3)
        x = Param("x", rng.standard_normal((4, 5)))
        W = Param("W", rng.standard_normal((3, 5)))
        b = Param("b", rng.standard_normal(3))
        r = rng.standard_normal((4, 3))

        def objective(compute_grad: bool) -> float:
            out = affine_forward(x.value, W.value, b.value)
            if compute_grad:
                dx, dW, db = affine_backward(x.value, W.value, r)
                x.grad += dx
                W.grad += dW
                b.grad += db
            return float(np.sum(r * out))

        assert grad_check(objective, [x, W, b]) < 1e-6

    def test_sigmoid_is_stable_for_large_inputs(self):
        out = sigmoid_map(np.array([-1000.0, 0.0, 1000.0]))
        assert np.all(np.isfinite(out))
        np.testing.assert_allclose(out, [0.0, 0.5, 1.0])

    def test_sigmoid_symmetry(self):
        x = np.linspace(-8, 8, 33)
        np.testing.assert_allclose(sigmoid_map(x) + sigmoid_map(-x), 1.0)

    def test_tanh(self):
        x = np.array([-2.0, 0.0, 0.3])
        np.testing.assert_allclose(tanh_map(x), np.tanh(x))

    def test_hadamard(self):
        np.testing.assert_allclose(hadamard([1.0, 2.0], [3.0, -1.0]), [3.0, -2.0])
        with pytest.raises(DimensionError):
            hadamard(np.ones(2), np.ones(3))

    def test_concat_and_split_are_inverse(self):
        a = np.arange(6.0).reshape(2, 3)
        b = np.arange(4.0).reshape(2, 2)
        joined = concat(a, b)
        assert joined.shape == (2, 5)
        left, right = split(joined, 3)
        np.testing.assert_array_equal(left, a)
        np.testing.assert_array_equal(right, b)

    def test_concat_leading_axes_must_match(self):
        with pytest.raises(DimensionError):
            concat(np.ones((2, 3)), np.ones((3, 3)))

    def test_split_out_of_range(self):
        with pytest.raises(DimensionError):
            split(np.ones(4), 4)
        with pytest.raises(DimensionError):
            split(np.ones(4), -1)

    def test_ensure_finite(self):
        ensure_finite(np.ones(3))
        with pytest.raises(NonFiniteError):
            ensure_finite(np.array([1.0, np.nan]))
        with pytest.raises(NonFiniteError):
            ensure_finite(np.array([np.inf]))


class TestParams:
    """Parameters, initialization, and seeded generators."""

    def test_param_grad_defaults_to_zeros(self):
        param = Param("w", np.ones((2, 3)))
        assert param.grad.shape == (2, 3)
        assert not param.grad.any()
        assert param.size == 6

    def test_param_grad_shape_mismatch(self):
        with pytest.raises(DimensionError):
            Param("w", np.ones(3), np.ones(2))

    def test_param_copy_is_deep(self):
        param = Param("w", np.ones(2))
        clone = param.copy()
        clone.value[0] = 5.0
        assert param.value[0] == 1.0

    def test_glorot_is_deterministic_and_bounded(self):
        a = glorot_init(8, 4, seed=3)
        b = glorot_init(8, 4, seed=3)
        np.testing.assert_array_equal(a, b)
        assert np.all(np.abs(a) <= np.sqrt(6.0 / 12))

    def test_glorot_large_matrix_bound(self):
        matrix = glorot_init(512, 512, seed=7)
        assert matrix.shape == (512, 512)
        assert np.all(np.abs(matrix) <= np.sqrt(6.0 / 1024))

    def test_glorot_single_entry(self):
        assert abs(glorot_init(1, 1, seed=0)[0, 0]) <= np.sqrt(3.0)

    def test_glorot_streams_differ(self):
        assert not np.array_equal(glorot_init(4, 4, 0, stream=1), glorot_init(4, 4, 0, stream=2))

    def test_glorot_rejects_empty(self):
        with pytest.raises(DimensionError):
            glorot_init(0, 3, seed=0)

    def test_make_rng_streams(self):
        base = make_rng(5).standard_normal(4)
        np.testing.assert_array_equal(base, make_rng(5).standard_normal(4))
        assert not np.array_equal(base, make_rng(5, 1).standard_normal(4))
        assert not np.array_equal(make_rng(5, 1).standard_normal(4), make_rng(5, 2).standard_normal(4))


class TestAdam:
    """Bias-corrected Adam and gradient clipping."""

    def test_first_step_moves_by_lr(self):
        # with bias correction the first step is lr * sign(grad)
        param = Param("w", np.array([1.0, -2.0]), np.array([0.3, -4.0]))
        state = AdamState.for_param(param, lr=0.1)
        adam_step(param, state)
        np.testing.assert_allclose(param.value, [0.9, -1.9], atol=1e-6)
        assert state.step == 1

    def test_zero_gradient_leaves_value(self):
        param = Param("w", np.array([0.25, -3.0, 7.5]))
        state = AdamState.for_param(param, lr=0.1)
        for _ in range(3):
            adam_step(param, state)
        np.testing.assert_array_equal(param.value, [0.25, -3.0, 7.5])
        assert state.step == 3

    def test_converges_on_quadratic(self):
        param = Param("w", np.array([1.0]))
        optimizer = AdamOptimizer(lr=0.1)
        for _ in range(100):
            param.grad = 2.0 * param.value
            optimizer.step([param])
        assert abs(param.value[0]) < 0.1

    def test_optimizer_keeps_state_per_name(self):
        a, b = Param("a", np.ones(2)), Param("b", np.ones(3))
        a.grad[:] = 1.0
        b.grad[:] = 1.0
        optimizer = AdamOptimizer(lr=0.01)
        optimizer.step([a, b])
        optimizer.step([a, b])
        assert set(optimizer.states) == {"a", "b"}
        assert optimizer.states["a"].step == 2

    def test_zero_grad(self):
        param = Param("w", np.ones(2), np.ones(2))
        AdamOptimizer.zero_grad([param])
        assert not param.grad.any()

    def test_clip_global_norm(self):
        a = Param("a", np.zeros(1), np.array([3.0]))
        b = Param("b", np.zeros(1), np.array([4.0]))
        norm = clip_global_norm([a, b], 1.0)
        assert norm == pytest.approx(5.0)
        np.testing.assert_allclose([a.grad[0], b.grad[0]], [0.6, 0.8])

    def test_clip_below_threshold_is_noop(self):
        a = Param("a", np.zeros(2), np.array([0.1, 0.2]))
        clip_global_norm([a], 5.0)
        np.testing.assert_allclose(a.grad, [0.1, 0.2])

    def test_clip_disabled(self):
        a = Param("a", np.zeros(1), np.array([100.0]))
        clip_global_norm([a], 0.0)
        assert a.grad[0] == 100.0


class TestGradCheck:
    """The finite-difference checker itself."""

    def test_accepts_correct_gradient(self):
        w = Param("w", np.array([0.5, -1.5, 2.0]))

        def objective(compute_grad: bool) -> float:
            if compute_grad:
                w.grad += 3.0 * w.value**2
            return float(np.sum(w.value**3))

        assert grad_check(objective, [w]) < 1e-6

    def test_half_squared_norm(self):
        w = Param("w", np.array([0.3, -1.2, 2.0, 0.0]))

        def objective(compute_grad: bool) -> float:
            if compute_grad:
                w.grad += w.value
            return float(0.5 * np.sum(w.value**2))

        assert grad_check(objective, [w]) < 1e-9

    def test_small_spurious_gradient_is_relative(self):
        # true gradient is zero; the floor only applies below 1e-8
        w = Param("w", np.array([1.0, 2.0]))

        def objective(compute_grad: bool) -> float:
            if compute_grad:
                w.grad += 1e-7
            return 0.0

        assert grad_check(objective, [w]) == pytest.approx(1.0)

    def test_flags_wrong_gradient(self):
        w = Param("w", np.array([0.5, -1.5]))

        def objective(compute_grad: bool) -> float:
            if compute_grad:
                w.grad += 2.0 * w.value**2
            return float(np.sum(w.value**3))

        assert grad_check(objective, [w]) > 0.1

    def test_restores_values(self):
        w = Param("w", np.array([0.25, 0.75]))
        before = w.value.copy()

        def objective(compute_grad: bool) -> float:
            if compute_grad:
                w.grad += 1.0
            return float(np.sum(w.value))

        grad_check(objective, [w])
        np.testing.assert_array_equal(w.value, before)
