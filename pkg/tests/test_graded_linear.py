from __future__ import annotations

import random

import pytest

from braided_gauge.anyonic import truncated_line
from braided_gauge.cyclotomic import field
from braided_gauge.graded_linear import (
    DegreeError,
    GradedMap,
    GradedSpace,
    ModulusError,
    braiding,
    braiding_inverse,
    format_vector,
    hom_basis,
    identity,
    image,
    intersect,
    inverse_map,
    kernel,
    quotient,
    quotient_section,
    solve,
    span,
    subspace_sum,
    swap,
    tensor,
    tensor_map,
    tensor_power,
    unit_space,
    zero_subspace,
)

K = field(3)
q = K.q
M = truncated_line("theta", name="M").space
B = truncated_line("xi", name="B").space
mul_M = truncated_line("theta", name="M").mult


def random_map(rng: random.Random, V: GradedSpace, W: GradedSpace, density=0.5) -> GradedMap:
    cols = []
    for j in range(V.dim):
        col = {}
        for i in W.indices_of_degree(V.degrees[j]):
            if rng.random() < density:
                col[i] = K.from_coeffs([rng.randint(-3, 3), rng.randint(-3, 3)])
        cols.append(col)
    return GradedMap(V, W, cols)


def test_tensor_dimension_and_degrees():
    MB = tensor(M, B)
    assert MB.dim == 9
    assert MB.names[:3] == ("1.1", "1.xi", "1.xi2")
    assert MB.degrees[MB.index("theta.xi")] == 2
    assert MB.degrees[MB.index("theta2.xi2")] == 1
    assert tensor(unit_space(3), M) == M
    assert tensor_power(M, 0).is_unit


def test_tensor_modulus_mismatch():
    with pytest.raises(ModulusError):
        tensor(M, GradedSpace(4, [("a", 1)]))


def test_interchange_law():
    rng = random.Random(1)
    f, g = random_map(rng, M, M), random_map(rng, B, B)
    f_, g_ = random_map(rng, M, M), random_map(rng, B, B)
    assert tensor_map(identity(M), g) @ tensor_map(f, identity(B)) == tensor_map(f, g)
    assert tensor_map(f, g) @ tensor_map(f_, g_) == tensor_map(f @ f_, g @ g_)


def test_degree_violation_is_rejected():
    with pytest.raises(DegreeError):
        GradedMap(M, M, [{}, {2: 1}, {}])
    with pytest.raises(DegreeError):
        tensor_map(GradedMap(M, M, [{}, {}, {0: 1}], shift=1), identity(M))


def test_braiding_examples():
    psi = braiding(B, M)
    assert psi.apply_name("xi.theta") == {tensor(M, B).index("theta.xi"): q}
    V0 = GradedSpace(3, [("a", 0), ("b", 0)])
    assert braiding(M, V0) == swap(M, V0)
    assert braiding_inverse(M, B) @ braiding(B, M) == identity(tensor(B, M))


def test_hexagon():
    U, V, W = M, B, GradedSpace(3, [("u", 0), ("v", 1), ("w", 2)])
    lhs = braiding(tensor(U, V), W)
    rhs = tensor_map(braiding(U, W), identity(V)) @ tensor_map(identity(U), braiding(V, W))
    assert lhs == rhs
    lhs = braiding(U, tensor(V, W))
    rhs = tensor_map(identity(V), braiding(U, W)) @ tensor_map(braiding(U, V), identity(W))
    assert lhs == rhs


def test_kernel_examples():
    assert kernel(mul_M).dim == 6
    assert kernel(identity(M)).dim == 0
    assert kernel(tensor_map(mul_M, identity(M))).dim == 18


def test_rank_nullity_on_random_maps():
    rng = random.Random(7)
    V = tensor(M, B)
    for _ in range(20):
        f = random_map(rng, V, M, density=0.3)
        assert kernel(f).dim + image(f).dim == V.dim
        assert all(not f(v) for v in kernel(f).vectors())


def test_subspaces_are_canonical():
    a, b = M.vector("theta"), M.vector("theta2")
    S = span(M, [a, b])
    T = span(M, [{1: K.one, 2: q}, {2: K.one + 1}])
    assert S == T and hash(S) == hash(T)
    assert S != span(M, [a])
    assert zero_subspace(M).dim == 0


def test_sum_and_intersection():
    V = tensor(M, M)
    rng = random.Random(3)
    f, g = random_map(rng, M, V), random_map(rng, M, V)
    S, T = image(f), image(g)
    assert subspace_sum(S, T).dim + intersect(S, T).dim == S.dim + T.dim
    assert intersect(S, S) == S
    assert intersect(S, T).is_subspace_of(S)


def test_quotient_projection():
    S = kernel(mul_M)
    V = mul_M.domain
    Q, pi = quotient(V, S)
    assert Q.dim == 3
    assert kernel(pi) == S
    assert pi @ quotient_section(V, S, Q) == identity(Q)


def test_solve_and_inverse():
    assert solve(mul_M, M.vector("theta2")) is not None
    f = GradedMap(M, M, [{0: 1}, {}, {2: 1}])
    assert solve(f, M.vector("theta")) is None
    g = GradedMap(M, M, [{0: 2}, {1: q}, {2: 1 + q}])
    assert inverse_map(g) @ g == identity(M)
    with pytest.raises(ValueError):
        inverse_map(f)


def test_hom_basis_counts_degree_preserving_maps():
    assert len(hom_basis(M, M)) == 3
    assert len(hom_basis(B, M, shift=1)) == 3
    assert len(hom_basis(tensor(M, M), M)) == 9


def test_format_vector():
    v = {M.index("theta"): K.coerce(2), M.index("theta2"): -K.one}
    assert format_vector(M, v) == "2 theta - theta2"
    assert format_vector(M, {0: q}) == "(q)"
    assert format_vector(M, {}) == "0"
