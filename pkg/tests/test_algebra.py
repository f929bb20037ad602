import numpy as np
import pytest
from hypothesis import given, settings

import oracle
from csframes import AlgebraElement, AlgebraSpec, BlockMatrix, Tolerance, alg_arith, alg_norm, flatten
from csframes.algebra import (
    block_ranks,
    condition_number,
    extremal_eigenvalues,
    inverse,
    is_positive,
    pinv,
    positive_power,
)
from csframes.errors import DimensionMismatch, NotInvertible, NotPositive, SpecMismatch
from csframes.sampling import random_element, random_invertible, random_operator, random_projection
from strategies import setups, specs, seeds

M2 = AlgebraSpec((2,))
M23 = AlgebraSpec((2, 3))


def elem(spec, *blocks):
    return AlgebraElement.from_blocks(spec, [np.asarray(b, dtype=complex) for b in blocks])


class TestSpec:
    def test_rejects_empty_and_nonpositive(self):
        with pytest.raises((ValueError, DimensionMismatch)):
            AlgebraSpec(())
        with pytest.raises((ValueError, DimensionMismatch)):
            AlgebraSpec((2, 0))

    def test_dimension_and_identity(self):
        assert M23.num_blocks == 2
        assert M23.dimension == 4 + 9
        i = M23.identity()
        for b, n in zip(i.blocks, (2, 3)):
            np.testing.assert_array_equal(b, np.eye(n))

    def test_mixed_specs_refuse_arithmetic(self):
        with pytest.raises(SpecMismatch):
            M2.identity() + M23.identity()
        with pytest.raises(SpecMismatch):
            alg_arith(M2.identity(), AlgebraSpec((3,)).identity(), "mul")


class TestArithmetic:
    def test_identity_times_identity(self):
        i = M23.identity()
        assert (alg_arith(i, i, "mul") - i).norm() == 0

    def test_matrix_unit_adjoint(self):
        e12 = elem(M2, [[0, 1], [0, 0]])
        np.testing.assert_array_equal(alg_arith(e12, op="adjoint").blocks[0], [[0, 0], [1, 0]])

    def test_scale_and_add(self):
        a = elem(M2, [[1, 2], [3, 4]])
        np.testing.assert_array_equal(alg_arith(a, op="scale", scalar=2j).blocks[0], 2j * a.blocks[0])
        np.testing.assert_array_equal(alg_arith(a, a).blocks[0], 2 * a.blocks[0])
        with pytest.raises(ValueError):
            alg_arith(a, a, "divide")

    @given(specs, seeds)
    @settings(max_examples=40, deadline=None)
    def test_product_adjoint_reverses(self, spec, seed):
        rng = np.random.default_rng(seed)
        a, b = random_element(rng, spec), random_element(rng, spec)
        lhs = alg_arith(alg_arith(a, b, "mul"), op="adjoint")
        rhs = alg_arith(alg_arith(b, op="adjoint"), alg_arith(a, op="adjoint"), "mul")
        assert (lhs - rhs).norm() <= 1e-12 * a.norm() * b.norm()

    def test_double_adjoint_is_exact(self):
        a = random_element(np.random.default_rng(1), M23)
        assert all(np.array_equal(x, y) for x, y in zip(a.adjoint().adjoint().data, a.data))

    def test_values_are_immutable(self):
        a = M2.identity()
        with pytest.raises(ValueError):
            a.data[0][0, 0, 0, 0] = 5

    def test_shape_checks(self):
        rng = np.random.default_rng(2)
        x = random_operator(rng, M2, 2, 3)
        with pytest.raises(DimensionMismatch):
            x @ x
        with pytest.raises(DimensionMismatch):
            x + x.adjoint()


class TestNorm:
    def test_zero_and_diagonal(self):
        assert alg_norm(M2.zero()) == 0
        assert alg_norm(elem(M2, np.diag([2, 3]))) == pytest.approx(3)

    def test_norm_is_max_over_blocks(self):
        assert alg_norm(elem(M23, np.eye(2), 5 * np.eye(3))) == pytest.approx(5)

    @given(specs, seeds)
    @settings(max_examples=40, deadline=None)
    def test_cstar_identity(self, spec, seed):
        a = random_element(np.random.default_rng(seed), spec)
        assert abs((a.adjoint() @ a).norm() - a.norm() ** 2) <= 1e-9 * a.norm() ** 2


class TestFlatten:
    def test_identity_flattens_to_identity(self):
        (f,) = flatten(BlockMatrix.identity(M2, 2))
        np.testing.assert_array_equal(f, np.eye(4))

    @given(setups(), seeds)
    @settings(max_examples=40, deadline=None)
    def test_matches_dense_assembly(self, setup, _):
        spec, rank, rng = setup
        x = random_operator(rng, spec, rank, rank + 1)
        for got, want in zip(flatten(x), oracle.dense(x)):
            np.testing.assert_array_equal(got, want)

    @given(setups())
    @settings(max_examples=40, deadline=None)
    def test_is_a_star_homomorphism(self, setup):
        spec, rank, rng = setup
        x = random_operator(rng, spec, rank, rank + 1)
        y = random_operator(rng, spec, rank + 1, 2)
        assert oracle.rel_err(flatten(x @ y), oracle.mul(oracle.dense(x), oracle.dense(y))) <= 1e-12
        assert oracle.rel_err(flatten(x.adjoint()), oracle.adj(oracle.dense(x))) == 0

    @given(setups())
    @settings(max_examples=20, deadline=None)
    def test_from_flat_round_trip(self, setup):
        spec, rank, rng = setup
        x = random_operator(rng, spec, rank, 2)
        y = BlockMatrix.from_flat(spec, x.flatten(), rank, 2)
        assert all(np.array_equal(a, b) for a, b in zip(x.data, y.data))

    def test_faithful(self):
        x = BlockMatrix.zeros(M23, 2, 2)
        assert x.norm() == 0
        assert all(not f.any() for f in flatten(x))


class TestPositivity:
    def test_identity_positive(self):
        assert is_positive(M23.identity())

    def test_indefinite(self):
        assert not is_positive(elem(M2, np.diag([1, -1])))

    def test_non_selfadjoint(self):
        assert not is_positive(elem(M2, [[1, 1], [0, 1]]))

    @given(specs, seeds)
    @settings(max_examples=40, deadline=None)
    def test_star_products_are_positive(self, spec, seed):
        b = random_element(np.random.default_rng(seed), spec)
        assert is_positive(b.adjoint() @ b)


class TestPowers:
    def test_square_root_of_four(self):
        r = positive_power(4 * M2.identity(), 0.5)
        assert (r - 2 * M2.identity()).norm() <= 1e-15

    def test_inverse_square_root_of_diagonal(self):
        r = positive_power(elem(M2, np.diag([1, 4])), -0.5)
        np.testing.assert_allclose(r.blocks[0], np.diag([1, 0.5]), atol=1e-15)

    def test_errors(self):
        with pytest.raises(NotPositive):
            positive_power(elem(M2, np.diag([1, -1])), 0.5)
        with pytest.raises(NotInvertible) as exc:
            positive_power(elem(M2, np.diag([1, 0])), -1.0)
        assert exc.value.smallest == pytest.approx(0)
        with pytest.raises(ValueError):
            positive_power(M2.identity(), 2.0)

    @given(setups())
    @settings(max_examples=40, deadline=None)
    def test_round_trips_against_scipy(self, setup):
        spec, rank, rng = setup
        x = random_invertible(rng, spec, rank)
        a = x.adjoint() @ x
        dense = oracle.dense(a)
        root = positive_power(a, 0.5)
        iroot = positive_power(a, -0.5)
        inv = positive_power(a, -1.0)
        assert oracle.rel_err(root.flatten(), oracle.corner_sqrt(dense)) <= 1e-10
        assert oracle.rel_err(iroot.flatten(), oracle.corner_sqrt(dense, inverse=True)) <= 1e-10
        assert oracle.rel_err(inv.flatten(), oracle.corner_inverse(dense)) <= 1e-10
        ident = BlockMatrix.identity(spec, rank)
        kappa = condition_number(a)
        assert (root @ root - a).norm() <= 1e-12 * a.norm() * kappa
        assert (iroot @ a @ iroot - ident).norm() <= 1e-12 * kappa
        assert (inv @ a - ident).norm() <= 1e-12 * kappa

    def test_corner_power(self):
        rng = np.random.default_rng(5)
        e = random_projection(rng, M23, 2, ranks=(2, 3))
        x = random_operator(rng, M23, 2, 2)
        a = e @ x.adjoint() @ x @ e
        inv = positive_power(a, -1.0, unit=e)
        assert (inv @ a - e).norm() <= 1e-10
        assert oracle.rel_err(inv.flatten(), oracle.corner_inverse(oracle.dense(a), oracle.dense(e))) <= 1e-10
        with pytest.raises(NotInvertible):
            positive_power(a, -1.0)


class TestRanksAndInverses:
    def test_ranks_of_projection(self):
        rng = np.random.default_rng(3)
        p = random_projection(rng, M23, 3, ranks=(4, 1))
        assert block_ranks(p) == (4, 1)
        assert block_ranks(p) == oracle.ranks(oracle.dense(p))

    def test_inverse_and_pinv(self):
        rng = np.random.default_rng(4)
        x = random_invertible(rng, M23, 2)
        assert oracle.rel_err(inverse(x).flatten(), oracle.corner_inverse(oracle.dense(x))) <= 1e-12
        assert oracle.rel_err(pinv(x).flatten(), oracle.corner_inverse(oracle.dense(x))) <= 1e-12
        assert condition_number(x) == pytest.approx(10.0)

    def test_singular_rejected_with_smallest_value(self):
        with pytest.raises(NotInvertible) as exc:
            inverse(elem(M2, np.diag([1.0, 1e-12])))
        assert exc.value.smallest == pytest.approx(1e-12)

    def test_threshold_is_relative(self):
        # scaling does not change the verdict
        a = elem(M2, np.diag([1.0, 1e-6]))
        inverse(a)
        inverse(1e-20 * a)
        assert block_ranks(1e-20 * a, Tolerance(rel=1e-9, abs=0.0)) == (2,)

    def test_extremal_eigenvalues(self):
        a = elem(M23, np.diag([1, 2]), np.diag([-1, 0, 7]))
        assert extremal_eigenvalues(a) == pytest.approx((-1, 7))
