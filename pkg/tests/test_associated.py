from __future__ import annotations

import pytest

import oracle as o
from braided_gauge.anyonic import truncated_line
from braided_gauge.associated import (
    AssociatedBundle,
    AssociatedTrivialization,
    Covariant,
    FiberComodule,
    check_coregular,
    coregular_fiber,
    coregular_iso,
    cross_section,
    form_from_cross_section,
    global_to_local,
    is_equivariant_form,
    local_from_section,
    local_to_global,
    nabla,
    section_curvature,
    section_from_local,
    transform_section,
)
from braided_gauge.braided_algebra import adjoint_coaction, trivial_coaction
from braided_gauge.gauge import BundleError, connection_from_field
from braided_gauge.graded_linear import GradedMap, GradedSpace, tensor_map

F3 = o.F3


@pytest.fixture(scope="module")
def coregular(anyonic):
    fib = coregular_fiber(anyonic.hopf)
    E = AssociatedBundle(anyonic.bundle, fib)
    return fib, E, AssociatedTrivialization(anyonic.triv, E)


def trivial_fiber(anyonic):
    k = GradedSpace(3, [("v", 0)])
    return FiberComodule(trivial_coaction(k, anyonic.hopf), unit_point={0: F3.one})


def e_coords(E, v):
    return {k: x for k, x in enumerate(E.E.coordinates(v)) if x}


def test_trivial_fiber_gives_the_base(anyonic):
    E = AssociatedBundle(anyonic.bundle, trivial_fiber(anyonic))
    assert E.dim == anyonic.bundle.M.dim
    at = AssociatedTrivialization(anyonic.triv, E)
    assert at.validate().ok


def test_coregular_fiber(anyonic, coregular):
    _, E, _ = coregular
    assert E.dim == 9
    assert E.check().ok
    fwd, back = coregular_iso(E)
    P = anyonic.bundle.P
    assert back @ fwd == GradedMap.identity(P.space)
    assert fwd(P.unit) == E.unit
    assert check_coregular(E).ok


def test_adjoint_fiber_dimension(anyonic):
    fib = FiberComodule(adjoint_coaction(anyonic.hopf), algebra=anyonic.hopf.algebra)
    E = AssociatedBundle(anyonic.bundle, fib)
    assert E.check().ok
    assert E.dim == 9  # regression value


def test_unit_point_must_be_coinvariant(anyonic):
    with pytest.raises(ValueError, match="coinvariant"):
        FiberComodule(coregular_fiber(anyonic.hopf).coaction, unit_point=anyonic.hopf.algebra.element("xi"))


def test_unit_section_gives_phi(anyonic, coregular):
    fib, _, _ = coregular
    unit = anyonic.section(1, 0, 0)
    assert local_to_global(anyonic.triv, fib, unit, 0) == anyonic.triv.phi


def test_local_global_round_trips(anyonic, coregular, rng):
    fib, _, _ = coregular
    T, b, L = anyonic.triv, anyonic.bundle, anyonic.local
    for s, a in zip(o.draws(rng, 3, 4), o.draws(rng, 4, 4)):
        sigma = anyonic.section(*s)
        Sigma = local_to_global(T, fib, sigma, 0)
        assert is_equivariant_form(b, fib, Sigma, 0)
        assert global_to_local(T, fib, Sigma, 0) == sigma
        sigma1 = nabla(L, fib.coaction, sigma, 0, anyonic.gauge_field(*a))
        assert global_to_local(T, fib, local_to_global(T, fib, sigma1, 1), 1) == sigma1


def test_cross_sections(anyonic, coregular, rng):
    fib, E, at = coregular
    T, b = anyonic.triv, anyonic.bundle
    for s1, s2 in o.draws(rng, 2, 3):
        sigma = anyonic.section(1, s1, s2)
        Sigma = local_to_global(T, fib, sigma, 0)
        s = cross_section(E, Sigma)
        assert form_from_cross_section(T, E, s) == Sigma
        assert section_from_local(at, sigma) == s
        assert local_from_section(at, s) == sigma
        assert s(e_coords(E, E.unit)) == b.M.unit
        for m in range(b.M.dim):
            for e in E.E.vectors():
                lhs = s(e_coords(E, E.left_m(b.incM.cols[m], e)))
                assert lhs == b.M.mul(b.M.space.basis_vector(m), s(e_coords(E, e)))


def test_cross_section_of_phi_is_the_counit(anyonic, coregular):
    fib, E, _ = coregular
    T, b, H = anyonic.triv, anyonic.bundle, anyonic.hopf
    s = cross_section(E, local_to_global(T, fib, anyonic.section(1, 0, 0), 0))
    fwd, _ = coregular_iso(E)
    fwd_c = GradedMap(fwd.domain, E.E.as_space(), [e_coords(E, c) for c in fwd.cols])
    assert s @ fwd_c == tensor_map(b.M.identity(), H.counit) @ T.triv_iso_inv


def test_associated_trivialization_requires_the_inverse_braiding(anyonic, coregular):
    _, E, at = coregular
    assert at.validate().ok
    assert at.theta_E.rank() == 9
    with pytest.raises(BundleError):
        AssociatedTrivialization(anyonic.triv, E, inverse_braid=False)


def test_covariant_derivative_examples(anyonic, coregular, rng):
    fib, _, _ = coregular
    T, b, L = anyonic.triv, anyonic.bundle, anyonic.local
    BR = fib.coaction
    sigma = anyonic.section(*o.draws(rng, 3, 1)[0])
    zero = L.zero_field()
    assert nabla(L, BR, sigma, 0, zero) == L.d(sigma, 0)
    A = anyonic.gauge_field(*o.draws(rng, 4, 1)[0])
    D = Covariant(b, connection_from_field(T, A))
    Sigma = local_to_global(T, fib, sigma, 0)
    DS = D.D(Sigma, 0)
    assert is_equivariant_form(b, fib, DS, 1)
    F = L.curvature(A)
    assert D.D(DS, 1) == -local_to_global(T, fib, section_curvature(L, BR, sigma, 0, F), 2)


def test_section_gauge_identity(anyonic, coregular):
    fib, _, _ = coregular
    L = anyonic.local
    sigma = anyonic.section(2, -1, 3)
    assert transform_section(L, fib.coaction, sigma, 0, L.identity_gauge()) == sigma


def test_tensor_coaction_comodule_algebra(anyonic, coregular):
    # holds for a degree-0 trivial fiber algebra, fails for B_R with its product
    V = truncated_line("v", degree=0, order=2)
    fib = FiberComodule(trivial_coaction(V.space, anyonic.hopf), algebra=V)
    assert AssociatedBundle(anyonic.bundle, fib).check_tensor_comodule_algebra().ok
    _, E, _ = coregular
    rep = E.check_tensor_comodule_algebra()
    assert rep.failed_names() == "coaction multiplicative"
