from __future__ import annotations

import pytest

import oracle as o
from braided_gauge.anyonic import anyonic_hopf, truncated_line
from braided_gauge.braided_algebra import (
    convolution,
    regular_coaction,
    trivial_coaction,
)
from braided_gauge.differential_calculus import FormError
from braided_gauge.gauge import (
    PrincipalBundle,
    check_connection,
    check_cross_product,
    check_global,
    check_projection,
    connection_from_field,
    extract_cocycle,
    field_from_connection,
    global_gauge,
    projection_from_connection,
    tensor_product_bundle,
    transformed_bundle,
    transport_connection,
    transport_product,
    trivial_connection,
)
from braided_gauge.graded_linear import (
    GradedMap,
    GradedSpace,
    hom_basis,
    kernel,
    span,
    tensor_map,
    tensor_vectors,
)

F3, ONE_Q = o.F3, o.ONE_Q


def test_invariant_subalgebra(anyonic):
    b = anyonic.bundle
    assert b.M.dim == 3
    assert b.M_sub == span(b.P.space, [b.P.element(n) for n in ("1", "theta", "theta2")])
    H = anyonic_hopf()
    assert PrincipalBundle(H.algebra, regular_coaction(H)).M.dim == 1
    assert PrincipalBundle(H.algebra, trivial_coaction(H.space, H)).M.dim == 3


def test_tensor_over_m_and_chi(anyonic):
    b = anyonic.bundle
    Q, proj, _ = b.tensor_over_M
    assert Q.dim == 27 == b.P.dim * b.B.dim
    pair = lambda u, v: tensor_vectors(u, v, b.P.dim)  # noqa: E731
    for m in ("theta", "theta2"):
        mv = b.P.element(m)
        for i in range(b.P.dim):
            for j in range(b.P.dim):
                p, p_ = b.P.space.basis_vector(i), b.P.space.basis_vector(j)
                assert proj(pair(b.P.mul(p, mv), p_)) == proj(pair(p, b.P.mul(mv, p_)))
    for i in range(b.P.dim):
        p = b.P.space.basis_vector(i)
        assert b.chi_tilde(pair(b.P.unit, p)) == b.rho.rho(p)
    assert b.verify_principal().ok
    assert b.chi @ b.chi_inv == GradedMap.identity(b.chi.codomain)


def test_trivial_coaction_is_not_principal():
    H = anyonic_hopf()
    M = truncated_line("theta")
    bundle, _ = tensor_product_bundle(M, H)
    fake = PrincipalBundle(bundle.P, trivial_coaction(bundle.P.space, H))
    rep = fake.verify_principal()
    assert not rep.passed("chi bijective")


def test_trivialization(anyonic):
    T, b = anyonic.triv, anyonic.bundle
    assert T.check().ok
    assert T.check_isomorphisms().ok
    MB = T.MB
    assert T.triv_iso(MB.vector("theta.xi")) == b.P.element("theta*xi")
    H = anyonic.hopf
    assert convolution(T.phi_inv, T.phi, b.P, H) == H.eta_eps(b.P)


def test_trivial_connection(anyonic):
    T, b = anyonic.triv, anyonic.bundle
    omega = connection_from_field(T, anyonic.local.zero_field())
    assert omega == trivial_connection(T)
    assert check_connection(b, omega).ok
    assert field_from_connection(T, omega).is_zero()
    rep = check_connection(b, GradedMap.zero(omega.domain, omega.codomain))
    assert not rep.ok


def test_field_round_trip_random(anyonic, rng):
    T = anyonic.triv
    for a in o.draws(rng, 4, 20):
        A = anyonic.gauge_field(*a)
        assert field_from_connection(T, connection_from_field(T, A)) == A


def test_difference_of_connections_is_killed_by_chi_tilde(anyonic, rng):
    b, T = anyonic.bundle, anyonic.triv
    a, a_ = o.draws(rng, 4, 2)
    w = connection_from_field(T, anyonic.gauge_field(*a))
    w_ = connection_from_field(T, anyonic.gauge_field(*a_))
    assert (b.chi_tilde @ (w - w_)).is_zero()


def test_projection_kernel_is_horizontal(anyonic):
    b = anyonic.bundle
    Pi = projection_from_connection(b, trivial_connection(anyonic.triv))
    assert Pi @ Pi == Pi
    assert check_projection(b, Pi).ok
    both, _ = b.horizontal
    k = kernel(Pi @ b.omega1)
    assert span(both.ambient, [b.omega1(v) for v in k.vectors()]) == both


def _equivariant_differences(anyonic):
    """All alpha : B -> Omega^1 P with alpha(1) = 0, chi~ alpha = 0 and alpha Ad-equivariant."""
    b, H = anyonic.bundle, anyonic.hopf
    om = b.cal.omega(1)
    basis = [om.inclusion() @ e for e in hom_basis(H.space, om.as_space(), skip=[0])]
    IB = H.algebra.identity()
    residuals = []
    for alpha in basis:
        r1 = b.chi_tilde @ alpha
        r2 = b.tensor_rho2.rho @ alpha - tensor_map(alpha, IB) @ b.ad.rho
        flat = {}
        for block, m in enumerate((r1, r2)):
            for j, col in enumerate(m.cols):
                for i, x in col.items():
                    flat[(block, j, i)] = x
        residuals.append(flat)
    keys = sorted({k for r in residuals for k in r})
    pos = {k: n for n, k in enumerate(keys)}
    params = GradedSpace(3, [(f"t{n}", 0) for n in range(len(basis))])
    out = GradedSpace(3, [(f"r{n}", 0) for n in range(len(keys))])
    R = GradedMap(params, out, [{pos[k]: x for k, x in r.items()} for r in residuals], check=False)
    sols = []
    for v in kernel(R).vectors():
        alpha = GradedMap.zero(basis[0].domain, basis[0].codomain)
        for i, x in v.items():
            alpha = alpha + basis[i].scale(x)
        sols.append(alpha)
    return sols


def test_non_strong_connection_is_rejected(anyonic):
    b, T = anyonic.bundle, anyonic.triv
    omega = trivial_connection(T)
    sols = _equivariant_differences(anyonic)
    assert len(sols) == 12
    strong = [a for a in sols if check_connection(b, omega + a).ok]
    assert 0 < len(strong) < len(sols)
    bad = next(a for a in sols if not check_connection(b, omega + a).ok)
    rep = check_connection(b, omega + bad)
    assert rep.failed_names() == "omega strong"
    with pytest.raises(FormError):
        field_from_connection(T, omega + bad)


def test_gauge_identity_and_curvature_covariance(anyonic, rng):
    L = anyonic.local
    for a, c in zip(o.draws(rng, 4, 5), o.draws(rng, 2, 5)):
        A, g = anyonic.gauge_field(*a), anyonic.gauge(*c)
        assert L.transform_field(A, L.identity_gauge()) == A
        assert L.curvature(L.transform_field(A, g)) == L.transform_curvature(L.curvature(A), g)


def test_same_connection_two_descriptions(anyonic, rng):
    T, L = anyonic.triv, anyonic.local
    a, c = o.draws(rng, 4, 1)[0], o.draws(rng, 2, 1)[0]
    A, g = anyonic.gauge_field(*a), anyonic.gauge(*c)
    assert connection_from_field(T, L.transform_field(A, g)) == connection_from_field(T.transformed(g), A)


def test_global_gauge_identity(anyonic):
    T, b = anyonic.triv, anyonic.bundle
    g = anyonic.local.identity_gauge()
    Gamma, Theta = global_gauge(T, g)
    assert Gamma == anyonic.hopf.eta_eps(b.P)
    assert Theta == GradedMap.identity(b.P.space)
    assert check_global(T, g, Gamma, Theta).ok
    assert transformed_bundle(b, Theta).P.mult == b.P.mult


def test_transformed_bundle_is_principal(anyonic):
    T, b = anyonic.triv, anyonic.bundle
    _, Theta = global_gauge(T, anyonic.gauge(1, 2))
    bG = transformed_bundle(b, Theta)
    assert bG.verify_principal().ok
    omega = connection_from_field(T, anyonic.gauge_field(2, 3, -1, 5))
    assert check_connection(bG, transport_connection(omega, Theta)).ok


def test_cocycles(anyonic):
    T = anyonic.triv
    M = anyonic.bundle.M
    act, cocycle = extract_cocycle(T)
    # tensor bundle: the action is through the counit and the cocycle is trivial
    for name in act.domain.names:
        bn, mn = name.split(".")
        assert act.apply_name(name) == (M.space.vector(mn) if bn == "1" else {})
    assert [n for n in cocycle.domain.names if cocycle.apply_name(n)] == ["1.1"]
    assert check_cross_product(T).ok
    # a gauge transform with c1 != 0 gives a non-trivial (coboundary) cocycle
    Tg = T.transformed(anyonic.gauge(1, 0))
    _, c = extract_cocycle(Tg)
    assert c.apply_name("xi.xi") == M.space.vector("theta2")
    assert check_cross_product(Tg).ok
    assert transport_product(T).mult != transport_product(Tg).mult
