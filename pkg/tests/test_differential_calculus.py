from __future__ import annotations

import itertools

import pytest

import oracle as o
from braided_gauge.anyonic import anyonic_hopf, truncated_line
from braided_gauge.braided_algebra import braided_tensor_algebra, subalgebra
from braided_gauge.differential_calculus import Calculus, FormError, horizontal_subspaces
from braided_gauge.graded_linear import GradedMap, span

M = truncated_line("theta", name="M")
cal = Calculus(M)


def form(x, n):
    return cal.form(o.to_engine(x, cal.power(n + 1)), n)


@pytest.mark.parametrize("n,dim", [(0, 3), (1, 6), (2, 12), (3, 24)])
def test_dimensions(n, dim):
    assert cal.omega(n).dim == dim == 3 * 2 ** n


def test_omega0_is_the_algebra():
    assert cal.omega(0).carrier.dim == M.dim


def test_omega1_dimension_for_surjective_products():
    for A in (M, truncated_line("x", order=2), braided_tensor_algebra(M, anyonic_hopf().algebra)):
        assert Calculus(A).omega(1).dim == A.dim ** 2 - A.dim


def test_d_examples():
    th = cal.element("theta")
    assert th.d().vec == o.to_engine(o.DTHETA, cal.power(2))
    assert not cal.element("1").d()
    assert not th.d().d()


@pytest.mark.parametrize("n", [0, 1, 2])
def test_d_squared_is_zero(n):
    assert (cal.d_map(n + 1) @ cal.d_map(n)).is_zero()
    for u in cal.omega(n).basis():
        du = cal.d_vec(u, n)
        assert cal.omega(n + 1).contains(du)
        assert not cal.d_vec(du, n + 1)


def test_wedge_unit_and_associativity():
    one = cal.element("1")
    basis1 = [cal.form(u, 1) for u in cal.omega(1).basis()]
    for u in basis1:
        assert one.wedge(u) == u == u.wedge(one)
    for u, v, w in itertools.product(basis1[:3], repeat=3):
        assert (u * v) * w == u * (v * w)


def test_wedge_matches_concatenation_oracle():
    for x, y in itertools.product(o.OMEGA1_FORMS, repeat=2):
        assert (form(x, 1) * form(y, 1)).vec == o.to_engine(o.wedge(x, y), cal.power(3))


def test_dtheta2_squared_is_nonzero():
    assert form(o.DTHETA2, 1) * form(o.DTHETA2, 1)


def test_graded_leibniz():
    for n, m in ((0, 1), (1, 0), (1, 1)):
        for u, v in itertools.product(cal.omega(n).basis(), cal.omega(m).basis()):
            U, V = cal.form(u, n), cal.form(v, m)
            sign = -1 if n % 2 else 1
            assert (U * V).d() == U.d() * V + (U * V.d()).scale(sign)


def test_bimodule_examples():
    th = cal.element("theta")
    dth = th.d()
    assert (th * dth).vec == o.to_engine(o.add(o.t(1, 1), o.t(2, 0, c=-1)), cal.power(2))
    assert cal.element("1") * dth == dth
    assert (th * th).d() == th * dth + dth * th


def test_non_forms_are_rejected():
    with pytest.raises(FormError):
        cal.form(cal.power(2).vector("theta.1"), 1)
    with pytest.raises(FormError):
        cal.format_form(cal.power(2).vector("theta.1"), 1)


def test_monomial_basis_and_printing():
    mono = cal.monomials(1)
    assert mono.domain.names == ("dtheta", "dtheta2", "theta dtheta", "theta dtheta2",
                                 "theta2 dtheta", "theta2 dtheta2")
    assert span(cal.power(2), mono.cols) == cal.omega(1).carrier
    assert cal.monomials(2).domain.dim == 12
    v = o.to_engine(o.add(o.scale(2, o.DTHETA), o.w(o.THETA2, o.DTHETA2)), cal.power(2))
    assert cal.format_form(v, 1) == "2 dtheta + theta2 dtheta2"


def test_horizontal_subspaces():
    H = anyonic_hopf()
    P = braided_tensor_algebra(M, H.algebra)
    calP = Calculus(P)
    inc = GradedMap(M.space, P.space, [P.element(n) for n in ("1", "theta", "theta2")])
    both, right = horizontal_subspaces(calP, inc, cal)
    assert right.is_subspace_of(both)
    assert both.is_subspace_of(calP.omega(1).carrier)
    # regression values; (Omega^1 M)P is Omega^1 M tensored over M with P, 6 * 9 / 3
    assert (both.dim, right.dim) == (54, 18)
    k, _ = subalgebra(M, span(M.space, [M.unit]), ["1"])
    inc_k = GradedMap(k.space, P.space, [P.unit])
    both0, right0 = horizontal_subspaces(calP, inc_k, Calculus(k))
    assert both0.dim == right0.dim == 0
