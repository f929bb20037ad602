import numpy as np
import pytest
from hypothesis import given, settings

import oracle
from csframes import AlgebraSpec, BlockMatrix, ModuleVector, inner, is_projection, module_action, op_apply, op_norm, rank_one
from csframes.algebra import AlgebraElement, is_positive, positive_power
from csframes.errors import DimensionMismatch, LengthMismatch, SpecMismatch
from csframes.hilbert_module import vector_norm
from csframes.sampling import random_element, random_isometry, random_operator, random_vector
from helpers import scalar_vector
from strategies import setups

C = AlgebraSpec((1,))
M2 = AlgebraSpec((2,))


def test_basis_vector_inner_product_is_one():
    e1 = ModuleVector.basis(C, 2, 0)
    assert inner(e1, e1).blocks[0][0, 0] == 1


def test_errors():
    xi = ModuleVector.basis(M2, 2, 0)
    with pytest.raises(LengthMismatch):
        inner(xi, ModuleVector.basis(M2, 3, 0))
    with pytest.raises(SpecMismatch):
        inner(xi, ModuleVector.basis(C, 2, 0))
    with pytest.raises(DimensionMismatch):
        op_apply(BlockMatrix.identity(M2, 3), xi)
    with pytest.raises(DimensionMismatch):
        ModuleVector(M2, [np.zeros((2, 2, 2, 2))])


def test_orthogonal_projections_give_zero_inner_product():
    p = AlgebraElement.from_blocks(M2, [np.diag([1.0, 0.0])])
    q = AlgebraElement.from_blocks(M2, [np.diag([0.0, 1.0])])
    xi = ModuleVector.from_elements(M2, [p, M2.zero()])
    eta = ModuleVector.from_elements(M2, [q, M2.zero()])
    assert inner(xi, eta).norm() == 0


def test_unit_and_zero_actions():
    rng = np.random.default_rng(0)
    xi = random_vector(rng, M2, 3)
    assert (module_action(xi, M2.identity()) - xi).norm() == 0
    assert module_action(xi, M2.zero()).norm() == 0
    assert isinstance(module_action(xi, M2.identity()), ModuleVector)


def test_rank_one_of_basis_vector_is_coordinate_projection():
    e1 = ModuleVector.basis(M2, 2, 0)
    t = rank_one(e1, e1)
    assert is_projection(t)
    (f,) = t.flatten()
    np.testing.assert_array_equal(f, np.diag([1, 1, 0, 0]))


def test_norms():
    assert op_norm(BlockMatrix.identity(M2, 3)) == 1
    assert vector_norm(scalar_vector([3, 4])) == pytest.approx(5)


@given(setups())
@settings(max_examples=40, deadline=None)
def test_inner_product_axioms(setup):
    spec, n, rng = setup
    xi, eta, zeta = (random_vector(rng, spec, n) for _ in range(3))
    a = random_element(rng, spec)
    lam, mu = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
    s = xi.norm() * (eta.norm() + zeta.norm()) * (1 + a.norm())
    bound = 1e-12 * s * (1 + abs(lam) + abs(mu))
    assert (inner(xi, lam * eta + mu * zeta) - (lam * inner(xi, eta) + mu * inner(xi, zeta))).norm() <= bound
    assert (inner(xi, module_action(eta, a)) - inner(xi, eta) @ a).norm() <= bound
    assert (inner(xi, eta).adjoint() - inner(eta, xi)).norm() <= bound
    assert is_positive(inner(xi, xi))
    assert oracle.rel_err(inner(xi, eta).flatten(), oracle.inner(xi, eta)) <= 1e-12


@given(setups())
@settings(max_examples=40, deadline=None)
def test_cauchy_schwarz_and_adjointability(setup):
    spec, n, rng = setup
    xi, eta = random_vector(rng, spec, n), random_vector(rng, spec, n + 1)
    t = random_operator(rng, spec, n + 1, n)
    zeta = random_vector(rng, spec, n)
    assert inner(xi, zeta).norm() <= vector_norm(xi) * vector_norm(zeta) * (1 + 1e-12)
    lhs = inner(op_apply(t.adjoint(), eta), xi)
    rhs = inner(eta, op_apply(t, xi))
    assert (lhs - rhs).norm() <= 1e-12 * t.norm() * xi.norm() * eta.norm()


@given(setups())
@settings(max_examples=40, deadline=None)
def test_operators_are_module_maps(setup):
    spec, n, rng = setup
    t = random_operator(rng, spec, n, n)
    xi = random_vector(rng, spec, n)
    a = random_element(rng, spec)
    lhs = op_apply(t, module_action(xi, a))
    rhs = module_action(op_apply(t, xi), a)
    assert (lhs - rhs).norm() <= 1e-12 * t.norm() * xi.norm() * a.norm()


@given(setups())
@settings(max_examples=40, deadline=None)
def test_rank_one_applies_as_defined(setup):
    spec, n, rng = setup
    xi, eta, zeta = random_vector(rng, spec, n + 1), random_vector(rng, spec, n), random_vector(rng, spec, n)
    got = op_apply(rank_one(xi, eta), zeta)
    want = module_action(xi, inner(eta, zeta))
    assert (got - want).norm() <= 1e-12 * xi.norm() * eta.norm() * zeta.norm()
    assert oracle.rel_err(rank_one(xi, eta).flatten(), oracle.rank_one(xi, eta)) <= 1e-12


def test_projection_criterion_examples():
    rng = np.random.default_rng(7)
    # a unital column times a projection p has <eta, eta> = p
    col = random_isometry(rng, M2, 3, 1).cast(ModuleVector)
    p = AlgebraElement.from_blocks(M2, [np.diag([1.0, 0.0])])
    eta = module_action(col, p)
    assert is_projection(rank_one(eta, eta))
    twice = np.sqrt(2) * col
    assert (inner(twice, twice) - 2 * M2.identity()).norm() < 1e-12
    assert not is_projection(rank_one(twice, twice))
    assert is_projection(BlockMatrix.identity(M2, 2))


def test_sqrt_norm_formula_on_example():
    xi = scalar_vector([1, 1])
    eta = scalar_vector([0, 2])
    # ||theta|| = ||xi <eta, eta>^{1/2}|| = sqrt(2) * 2
    assert op_norm(rank_one(xi, eta)) == pytest.approx(2 * np.sqrt(2))
    root = positive_power(inner(eta, eta), 0.5)
    assert vector_norm(module_action(xi, root)) == pytest.approx(2 * np.sqrt(2))
