"""Principal bundles, trivializations, connections and gauge transformations."""

from __future__ import annotations

from functools import cached_property
from typing import Mapping

from .braided_algebra import (
    AlgebraStructure,
    BraidedHopf,
    Coaction,
    NoInverseError,
    adjoint_coaction,
    braided_tensor_algebra,
    check_comodule_algebra,
    convolution,
    convolution_inverse,
    relabel_map,
    subalgebra,
    tensor_coaction,
)
from .cyclotomic import Scalar
from .differential_calculus import Calculus, FormError, pushforward
from .graded_linear import (
    GradedMap,
    GradedSpace,
    Subspace,
    Vector,
    axpy,
    braiding,
    inverse_map,
    quotient,
    quotient_section,
    solve,
    span,
    tensor,
    tensor_map,
)
from .report import Report


class BundleError(ValueError):
    """A construction failed one of the identities it is required to satisfy."""


# ---------------------------------------------------------------------------
# helpers


def preimage(f: GradedMap, v: Mapping[int, Scalar]) -> Vector | None:
    """Some x with f(x) = v; fast when f sends basis vectors to distinct basis vectors."""
    lookup = _monomial_lookup(f)
    if lookup is None:
        return solve(f, v)
    out: Vector = {}
    for i, c in v.items():
        hit = lookup.get(i)
        if hit is None:
            return None
        j, s = hit
        out[j] = c / s
    return out


# keyed by id(); the map itself is kept alive alongside so ids are not reused
_LOOKUPS: dict[int, tuple[GradedMap, dict[int, tuple[int, Scalar]] | None]] = {}


def _monomial_lookup(f: GradedMap) -> dict[int, tuple[int, Scalar]] | None:
    hit = _LOOKUPS.get(id(f))
    if hit is not None and hit[0] is f:
        return hit[1]
    table: dict[int, tuple[int, Scalar]] | None = {}
    for j, col in enumerate(f.cols):
        if len(col) != 1:
            table = None
            break
        (i, s), = col.items()
        if i in table:
            table = None
            break
        table[i] = (j, s)
    if len(_LOOKUPS) > 256:
        _LOOKUPS.clear()
    _LOOKUPS[id(f)] = (f, table)
    return table


def pull_back(f: GradedMap, g: GradedMap, what: str) -> GradedMap:
    """The map h with f∘h = g, raising FormError naming ``what`` if g does not factor."""
    cols = []
    for j, col in enumerate(g.cols):
        x = preimage(f, col) if col else {}
        if x is None:
            raise FormError(f"image not in {what} (at {g.domain.names[j] or '1'})")
        cols.append(x)
    return GradedMap(g.domain, f.domain, cols, g.shift)


def left_mult_into(P: AlgebraStructure, cal: Calculus, chi_vec: Mapping[int, Scalar],
                   omega: GradedMap) -> Vector:
    """·_L∘(id⊗ω) on a vector of P⊗B."""
    dB = omega.domain.dim
    out: Vector = {}
    for idx, c in chi_vec.items():
        i, j = divmod(idx, dB)
        w = omega.cols[j]
        if w:
            axpy(out, c, cal.left_act(P.space.basis_vector(i), w, 1))
    return out


# ---------------------------------------------------------------------------
# bundles


class PrincipalBundle:
    """A comodule algebra P with invariant subalgebra M and the Galois map χ."""

    def __init__(self, P: AlgebraStructure, rho: Coaction, name: str = ""):
        if rho.carrier != P.space:
            raise ValueError("coaction does not act on P")
        self.P = P
        self.rho = rho
        self.hopf: BraidedHopf = rho.hopf
        self.name = name or P.name
        self.cal = Calculus(P)
        self.M_sub = rho.invariants()
        self.M, self.incM = subalgebra(P, self.M_sub, name="M")
        self.cal_M = Calculus(self.M)

    def __repr__(self) -> str:
        return f"PrincipalBundle({self.name}, dim P {self.P.dim}, dim M {self.M.dim})"

    @property
    def B(self) -> GradedSpace:
        return self.hopf.space

    def check_comodule_algebra(self) -> Report:
        return check_comodule_algebra(self.P, self.rho)

    # -- χ -----------------------------------------------------------------
    @cached_property
    def chi_tilde(self) -> GradedMap:
        """(·_P⊗id)∘(id⊗ρ) : P⊗P -> P⊗B."""
        return tensor_map(self.P.mult, self.hopf.algebra.identity()) @ tensor_map(
            self.P.identity(), self.rho.rho)

    @cached_property
    def relations(self) -> Subspace:
        """span{p·m⊗p' - p⊗m·p'} inside P⊗P."""
        P = self.P
        vecs = []
        basis = [P.space.basis_vector(j) for j in range(P.dim)]
        d = P.dim
        for m in self.M_sub.vectors():
            for i, p in enumerate(basis):
                pm = P.mul(p, m)
                for j, p2 in enumerate(basis):
                    mp = P.mul(m, p2)
                    v: Vector = {}
                    for a, x in pm.items():
                        axpy(v, x, {a * d + j: P.field.one})
                    for b, x in mp.items():
                        axpy(v, -x, {i * d + b: P.field.one})
                    vecs.append(v)
        return span(tensor(P.space, P.space), vecs)

    @cached_property
    def tensor_over_M(self) -> tuple[GradedSpace, GradedMap, GradedMap]:
        """(P⊗_M P, projection from P⊗P, canonical lift back to P⊗P)."""
        PP = tensor(self.P.space, self.P.space)
        Q, proj = quotient(PP, self.relations)
        return Q, proj, quotient_section(PP, self.relations, Q)

    @cached_property
    def chi(self) -> GradedMap:
        Q, proj, lift = self.tensor_over_M
        chi = self.chi_tilde @ lift
        if not (chi @ proj == self.chi_tilde):
            raise BundleError("chi~ does not descend to the balanced tensor product")
        return chi

    def verify_principal(self) -> Report:
        rep = Report(f"principal bundle {self.name}")
        rep.merge(self.check_comodule_algebra())
        rep.add("invariants form a subalgebra", self.M_sub.contains(self.P.unit)
                and all(self.M_sub.contains(self.P.mul(a, b))
                        for a in self.M_sub.vectors() for b in self.M_sub.vectors()))
        chi = self.chi
        r = chi.rank()
        ok = r == chi.domain.dim == chi.codomain.dim
        rep.add("chi bijective", ok,
                "" if ok else f"not a principal bundle: rank {r}, "
                f"dim P⊗_M P = {chi.domain.dim}, dim P⊗B = {chi.codomain.dim}")
        return rep

    @cached_property
    def chi_inv(self) -> GradedMap:
        """χ⁻¹ : P⊗B -> P⊗_M P (by exact elimination)."""
        try:
            return inverse_map(self.chi)
        except ValueError:
            raise BundleError("not a principal bundle: chi is not invertible") from None

    @cached_property
    def chi_inv_lift(self) -> GradedMap:
        """χ⁻¹ followed by the canonical lift into P⊗P."""
        return self.tensor_over_M[2] @ self.chi_inv

    # -- forms ---------------------------------------------------------------
    @cached_property
    def inc_forms(self) -> GradedMap:
        """M⊗M -> P⊗P."""
        return pushforward(self.incM, 2, self.cal)

    @cached_property
    def horizontal(self) -> tuple[Subspace, Subspace]:
        """(P(Ω¹M)P, (Ω¹M)P)."""
        om = [self.inc_forms(u) for u in self.cal_M.omega(1).basis()]
        both = self.cal.bimodule_span(om, 1, left=True, right=True)
        right = self.cal.bimodule_span(om, 1, left=False, right=True)
        return both, right

    @cached_property
    def omega1(self) -> GradedMap:
        """Inclusion of Ω¹P into P⊗P (carrier coordinates)."""
        return self.cal.omega(1).inclusion()

    @cached_property
    def tensor_rho2(self) -> Coaction:
        """Braided tensor product coaction on P⊗P."""
        return tensor_coaction(self.rho, self.rho)

    @cached_property
    def ad(self) -> Coaction:
        return adjoint_coaction(self.hopf)

    def to_M(self, v: Mapping[int, Scalar]) -> Vector:
        x = preimage(self.incM, v)
        if x is None:
            raise FormError("element is not in M")
        return x


class Trivialization:
    """Convolution-invertible comodule map Φ : B -> P with Φ(1) = 1."""

    def __init__(self, bundle: PrincipalBundle, phi: GradedMap, phi_inv: GradedMap | None = None):
        self.bundle = bundle
        self.phi = phi
        if phi_inv is None:
            phi_inv = convolution_inverse(phi, bundle.P, bundle.hopf)
        self.phi_inv = phi_inv

    def check(self) -> Report:
        b = self.bundle
        H = b.hopf
        rep = Report("trivialization")
        rep.equal("Phi is a comodule map", b.rho.rho @ self.phi,
                  tensor_map(self.phi, H.algebra.identity()) @ H.comult)
        rep.add("Phi(1) = 1", self.phi(H.algebra.unit) == b.P.unit)
        ee = H.eta_eps(b.P)
        rep.equal("Phi * Phi^-1 = eta eps", convolution(self.phi, self.phi_inv, b.P, H), ee)
        rep.equal("Phi^-1 * Phi = eta eps", convolution(self.phi_inv, self.phi, b.P, H), ee)
        return rep

    # -- P ≅ M⊗B ---------------------------------------------------------------
    @cached_property
    def MB(self) -> GradedSpace:
        return tensor(self.bundle.M.space, self.bundle.B)

    @cached_property
    def triv_iso(self) -> GradedMap:
        """m⊗b -> m·Φ(b)."""
        b = self.bundle
        cols = []
        for m in range(b.M.dim):
            pm = b.incM.cols[m]
            for j in range(b.B.dim):
                cols.append(b.P.mul(pm, self.phi.cols[j]))
        return GradedMap(self.MB, b.P.space, cols)

    @cached_property
    def triv_iso_inv(self) -> GradedMap:
        """(·⊗id)∘(id⊗Φ⁻¹⊗id)∘(id⊗Δ)∘ρ, pulled back to M⊗B."""
        b = self.bundle
        H = b.hopf
        IP, IB = b.P.identity(), H.algebra.identity()
        raw = (tensor_map(b.P.mult, IB) @ tensor_map(IP, self.phi_inv, IB)
               @ tensor_map(IP, H.comult) @ b.rho.rho)
        return pull_back(tensor_map(b.incM, IB), raw, "M⊗B")

    @cached_property
    def chi_inv_formula(self) -> GradedMap:
        """p⊗b -> p·Φ⁻¹(b₁) ⊗ Φ(b₂) : P⊗B -> P⊗P."""
        b = self.bundle
        H = b.hopf
        P = b.P
        dB = b.B.dim
        d = P.dim
        cols = []
        for i in range(d):
            p = P.space.basis_vector(i)
            for j in range(dB):
                out: Vector = {}
                for idx, c in H.comult.cols[j].items():
                    j1, j2 = divmod(idx, dB)
                    left = P.mul(p, self.phi_inv.cols[j1])
                    right = self.phi.cols[j2]
                    for a, x in left.items():
                        for e, y in right.items():
                            axpy(out, c * x * y, {a * d + e: P.field.one})
                cols.append(out)
        return GradedMap(tensor(P.space, b.B), tensor(P.space, P.space), cols)

    def check_isomorphisms(self) -> Report:
        b = self.bundle
        rep = Report("trivial bundle isomorphisms")
        rep.equal("theta o theta^-1 = id", self.triv_iso @ self.triv_iso_inv, b.P.identity())
        rep.equal("theta^-1 o theta = id", self.triv_iso_inv @ self.triv_iso,
                  GradedMap.identity(self.MB))
        Q, proj, _ = b.tensor_over_M
        chi_inv = proj @ self.chi_inv_formula
        rep.equal("chi o chi^-1 = id", b.chi @ chi_inv, GradedMap.identity(b.chi.codomain))
        rep.equal("chi^-1 o chi = id", chi_inv @ b.chi, GradedMap.identity(Q))
        return rep

    def transformed(self, gamma: GradedMap) -> Trivialization:
        """Φ^γ = γ∗Φ."""
        b = self.bundle
        g = b.incM @ gamma
        return Trivialization(b, convolution(g, self.phi, b.P, b.hopf))


def tensor_product_bundle(M: AlgebraStructure, H: BraidedHopf,
                          name: str = "") -> tuple[PrincipalBundle, Trivialization]:
    """P = M⊗B with ρ = id⊗Δ, Φ = η_M⊗id and Φ⁻¹ = η_M⊗S."""
    P = braided_tensor_algebra(M, H.algebra, name or f"{M.name}#{H.name}")
    MB = tensor(M.space, H.space)
    rel = relabel_map(P.space, MB)
    rho_MB = tensor_map(M.identity(), H.comult)
    rho = relabel_map(tensor(MB, H.space), tensor(P.space, H.space)) @ rho_MB @ rel
    bundle = PrincipalBundle(P, Coaction(P.space, H, rho, "id⊗Δ"))
    back = relabel_map(MB, P.space)
    phi = back @ tensor_map(M.eta(), H.algebra.identity())
    phi_inv = back @ tensor_map(M.eta(), H.antipode)
    return bundle, Trivialization(bundle, phi, phi_inv)


def trivial_bundle(M: AlgebraStructure, H: BraidedHopf, name: str = ""):
    return tensor_product_bundle(M, H, name)


# ---------------------------------------------------------------------------
# connections


def trivial_connection(T: Trivialization) -> GradedMap:
    """Φ⁻¹∗dΦ."""
    b = T.bundle
    return b.cal.conv(T.phi_inv, 0, b.cal.d_of(T.phi, 0), 1, b.hopf)


def field_to_P(T: Trivialization, A: GradedMap) -> GradedMap:
    return T.bundle.inc_forms @ A


def connection_from_field(T: Trivialization, A: GradedMap) -> GradedMap:
    """ω = Φ⁻¹∗dΦ + Φ⁻¹∗A∗Φ for A : B -> Ω¹M."""
    b = T.bundle
    cal, H = b.cal, b.hopf
    if A(H.algebra.unit):
        raise ValueError("gauge field must vanish on 1")
    AP = field_to_P(T, A)
    inner = cal.conv(cal.conv(T.phi_inv, 0, AP, 1, H), 1, T.phi, 0, H)
    return trivial_connection(T) + inner


def field_from_connection(T: Trivialization, omega: GradedMap) -> GradedMap:
    """A = Φ∗α∗Φ⁻¹ with α = ω - Φ⁻¹∗dΦ; fails unless the result lies in Ω¹M."""
    b = T.bundle
    cal, H = b.cal, b.hopf
    alpha = omega - trivial_connection(T)
    AP = cal.conv(cal.conv(T.phi, 0, alpha, 1, H), 1, T.phi_inv, 0, H)
    A = pull_back(b.inc_forms, AP, "Ω¹M")
    om = b.cal_M.omega(1)
    for j, col in enumerate(A.cols):
        if not om.contains(col):
            raise FormError(f"image not in Ω¹M (at {A.domain.names[j] or '1'})")
    return A


def projection_from_connection(bundle: PrincipalBundle, omega: GradedMap) -> GradedMap:
    """Π = ·_L∘(id⊗ω)∘χ̃ as a map P⊗P -> P⊗P."""
    P, cal = bundle.P, bundle.cal
    cols = [left_mult_into(P, cal, col, omega) for col in bundle.chi_tilde.cols]
    return GradedMap(bundle.chi_tilde.domain, bundle.chi_tilde.domain, cols, check=False)


def connection_from_projection(bundle: PrincipalBundle, Pi: GradedMap,
                               chi_inv_lift: GradedMap | None = None) -> GradedMap:
    """ω(b) = Π(χ⁻¹(1⊗(b - ε(b)1)))."""
    H = bundle.hopf
    lift = chi_inv_lift if chi_inv_lift is not None else bundle.chi_inv_lift
    dB = bundle.B.dim
    unit = bundle.P.unit
    ee = H.eta_eps(H.algebra)
    cols = []
    for j in range(dB):
        bvec = {j: H.algebra.field.one}
        axpy(bvec, H.algebra.field.coerce(-1), ee.cols[j])
        v: Vector = {}
        for i, x in unit.items():
            for k, y in bvec.items():
                axpy(v, x * y, {i * dB + k: H.algebra.field.one})
        cols.append(Pi(lift(v)))
    return GradedMap(bundle.B, Pi.codomain, cols, check=False)


def check_projection(bundle: PrincipalBundle, Pi: GradedMap) -> Report:
    rep = Report("connection projection")
    inc = bundle.omega1
    PiO = Pi @ inc
    rep.equal("Pi idempotent", Pi @ PiO, PiO)
    hor, _ = bundle.horizontal
    rep.equal("Pi kills P(Omega1 M)P", Pi @ hor.inclusion(),
              GradedMap.zero(hor.as_space(), Pi.codomain))
    rep.equal("chi~ Pi = chi~", bundle.chi_tilde @ PiO, bundle.chi_tilde @ inc)
    cal, P = bundle.cal, bundle.P
    ok, detail = True, ""
    for i in range(P.dim):
        p = P.space.basis_vector(i)
        for k, u in enumerate(inc.cols):
            if Pi(cal.left_act(p, u, 1)) != cal.left_act(p, Pi(u), 1):
                ok, detail = False, f"witness {P.space.names[i] or '1'} times form {k}"
                break
        if not ok:
            break
    rep.add("Pi left P-module map", ok, detail)
    rho2 = bundle.tensor_rho2.rho
    rep.equal("Pi intertwines the coaction", rho2 @ PiO,
              tensor_map(Pi, bundle.hopf.algebra.identity()) @ rho2 @ inc)
    rep.add("kernel of Pi is P(Omega1 M)P",
            _kernel_on(PiO, inc) == hor)
    return rep


def _kernel_on(f_inc: GradedMap, inc: GradedMap) -> Subspace:
    from .graded_linear import kernel
    K = kernel(f_inc)
    return span(inc.codomain, [inc(v) for v in K.vectors()])


def check_connection(bundle: PrincipalBundle, omega: GradedMap) -> Report:
    """Normalization, equivariance and strongness of ω : B -> Ω¹P."""
    H = bundle.hopf
    rep = Report("connection")
    om = bundle.cal.omega(1)
    rep.add("omega lands in Omega1 P", om.check_map(omega))
    rep.add("omega(1) = 0", not omega(H.algebra.unit))
    IB = H.algebra.identity()
    target = tensor_map(bundle.P.eta(), IB - H.eta_eps(H.algebra))
    rep.equal("chi~ omega = eta (id - eta eps)", bundle.chi_tilde @ omega, target)
    rep.equal("omega equivariant (Ad)", bundle.tensor_rho2.rho @ omega,
              tensor_map(omega, IB) @ bundle.ad.rho)
    rep.merge(check_strong(bundle, omega))
    return rep


def covariant_differential(bundle: PrincipalBundle, omega: GradedMap) -> GradedMap:
    """(id - Π)∘d : P -> Ω¹P."""
    Pi = projection_from_connection(bundle, omega)
    d0 = bundle.cal.d_map(0)
    return d0 - Pi @ d0


def check_strong(bundle: PrincipalBundle, omega: GradedMap) -> Report:
    rep = Report("strong connection")
    D = covariant_differential(bundle, omega)
    _, right = bundle.horizontal
    bad = [j for j, c in enumerate(D.cols) if not right.contains(c)]
    rep.add("omega strong", not bad,
            f"witness {bundle.P.space.names[bad[0]] or '1'}" if bad else "")
    return rep


# ---------------------------------------------------------------------------
# local theory on the base


class LocalTheory:
    """Gauge fields, gauge transformations and curvature on M for a Hopf algebra B."""

    def __init__(self, M: AlgebraStructure, H: BraidedHopf, cal: Calculus | None = None):
        self.M = M
        self.hopf = H
        self.cal = cal or Calculus(M)

    @property
    def B(self) -> GradedSpace:
        return self.hopf.space

    def conv(self, f: GradedMap, k: int, g: GradedMap, l: int) -> GradedMap:
        return self.cal.conv(f, k, g, l, self.hopf)

    def d(self, f: GradedMap, n: int) -> GradedMap:
        return self.cal.d_of(f, n)

    def identity_gauge(self) -> GradedMap:
        return self.hopf.eta_eps(self.M)

    def gauge_compose(self, g1: GradedMap, g2: GradedMap) -> GradedMap:
        return convolution(g1, g2, self.M, self.hopf)

    def gauge_inverse(self, g: GradedMap) -> GradedMap:
        return convolution_inverse(g, self.M, self.hopf)

    def check_gauge(self, g: GradedMap) -> bool:
        if g(self.hopf.algebra.unit) != self.M.unit:
            return False
        try:
            self.gauge_inverse(g)
        except NoInverseError:
            return False
        return True

    def curvature(self, A: GradedMap) -> GradedMap:
        """F = dA + A∗A."""
        return self.d(A, 1) + self.conv(A, 1, A, 1)

    def bianchi_residual(self, A: GradedMap, F: GradedMap | None = None) -> GradedMap:
        """dF + A∗F - F∗A (zero for every gauge field)."""
        F = self.curvature(A) if F is None else F
        return self.d(F, 2) + self.conv(A, 1, F, 2) - self.conv(F, 2, A, 1)

    def transform_field(self, A: GradedMap, g: GradedMap) -> GradedMap:
        """A^γ = γ⁻¹∗A∗γ + γ⁻¹∗dγ."""
        gi = self.gauge_inverse(g)
        return self.conv(self.conv(gi, 0, A, 1), 1, g, 0) + self.conv(gi, 0, self.d(g, 0), 1)

    def transform_curvature(self, F: GradedMap, g: GradedMap) -> GradedMap:
        gi = self.gauge_inverse(g)
        return self.conv(self.conv(gi, 0, F, 2), 2, g, 0)

    def zero_field(self) -> GradedMap:
        return self.cal.zero_map(self.B, 1)


# ---------------------------------------------------------------------------
# global gauge transformations


def global_gauge(T: Trivialization, gamma: GradedMap) -> tuple[GradedMap, GradedMap]:
    """(Γ, Θ) with Γ = Φ⁻¹∗γ∗Φ and Θ = ·∘(id⊗Γ)∘ρ."""
    b = T.bundle
    P, H = b.P, b.hopf
    g = b.incM @ gamma
    Gamma = convolution(convolution(T.phi_inv, g, P, H), T.phi, P, H)
    return Gamma, theta_of(b, Gamma)


def theta_of(bundle: PrincipalBundle, Gamma: GradedMap) -> GradedMap:
    P = bundle.P
    return P.mult @ tensor_map(P.identity(), Gamma) @ bundle.rho.rho


def check_global(T: Trivialization, gamma: GradedMap, Gamma: GradedMap,
                 Theta: GradedMap) -> Report:
    b = T.bundle
    P, H = b.P, b.hopf
    rep = Report("global gauge transformation")
    rep.add("Gamma(1) = 1", Gamma(H.algebra.unit) == P.unit)
    try:
        convolution_inverse(Gamma, P, H)
        inv = True
    except NoInverseError:
        inv = False
    rep.add("Gamma convolution-invertible", inv)
    rep.equal("Gamma equivariant (Ad)", b.rho.rho @ Gamma,
              tensor_map(Gamma, H.algebra.identity()) @ b.ad.rho)
    try:
        inverse_map(Theta)
        tinv = True
    except ValueError:
        tinv = False
    rep.add("Theta invertible", tinv)
    rep.add("Theta(1) = 1", Theta(P.unit) == P.unit)
    ok = all(Theta(P.mul(m, P.space.basis_vector(j))) == P.mul(m, Theta.cols[j])
             for m in b.M_sub.vectors() for j in range(P.dim))
    rep.add("Theta left M-module map", ok)
    rep.equal("Theta intertwines the coaction", b.rho.rho @ Theta,
              tensor_map(Theta, H.algebra.identity()) @ b.rho.rho)
    g = b.incM @ gamma
    rep.equal("Theta o Phi = gamma * Phi", Theta @ T.phi, convolution(g, T.phi, P, H))
    return rep


def transformed_algebra(bundle: PrincipalBundle, Theta: GradedMap, name: str = "") -> AlgebraStructure:
    """P^Γ: product Θ∘·∘(Θ⁻¹⊗Θ⁻¹)."""
    Ti = inverse_map(Theta)
    P = bundle.P
    mult = Theta @ P.mult @ tensor_map(Ti, Ti)
    return AlgebraStructure(P.space, Theta(P.unit), mult, name or f"{P.name}^G")


def transformed_bundle(bundle: PrincipalBundle, Theta: GradedMap) -> PrincipalBundle:
    PG = transformed_algebra(bundle, Theta)
    return PrincipalBundle(PG, Coaction(PG.space, bundle.hopf, bundle.rho.rho, bundle.rho.name))


def transport_connection(omega: GradedMap, Theta: GradedMap) -> GradedMap:
    """ω^Γ = (Θ⊗Θ)∘ω."""
    return tensor_map(Theta, Theta) @ omega


# ---------------------------------------------------------------------------
# cocycle cross products


def transport_product(T: Trivialization) -> AlgebraStructure:
    """The product of P carried to M⊗B by the trivialization isomorphism."""
    b = T.bundle
    th, thi = T.triv_iso, T.triv_iso_inv
    mult = thi @ b.P.mult @ tensor_map(th, th)
    return AlgebraStructure(T.MB, thi(b.P.unit), mult, f"{b.M.name}_c#{b.hopf.name}")


def extract_cocycle(T: Trivialization, prod: AlgebraStructure | None = None
                    ) -> tuple[GradedMap, GradedMap]:
    """(▷ : B⊗M -> M, c : B⊗B -> M) read off the transported product."""
    b = T.bundle
    prod = prod or transport_product(T)
    M, H = b.M, b.hopf
    dB = b.B.dim
    proj = tensor_map(M.identity(), H.counit)
    one_m = M.unit
    one_b = H.algebra.unit

    def pure(m, bb):
        out: Vector = {}
        for i, x in m.items():
            for j, y in bb.items():
                axpy(out, x * y, {i * dB + j: M.field.one})
        return out

    act_cols, c_cols = [], []
    for j in range(dB):
        left = pure(one_m, {j: M.field.one})
        for i in range(M.dim):
            act_cols.append(proj(prod.mul(left, pure({i: M.field.one}, one_b))))
        for k in range(dB):
            c_cols.append(proj(prod.mul(left, pure(one_m, {k: M.field.one}))))
    act = GradedMap(tensor(b.B, M.space), M.space, act_cols)
    c = GradedMap(tensor(b.B, b.B), M.space, c_cols)
    return act, c


def cocycle_cross_product(M: AlgebraStructure, H: BraidedHopf, act: GradedMap,
                          c: GradedMap) -> AlgebraStructure:
    """Product on M⊗B rebuilt from an action and a cocycle.

    (m⊗b)(n⊗b') = m (b₁▷n') c(b₂'' ⊗ b'₁) ⊗ b₃ b'₂ with the braidings needed
    to bring the factors together.
    """
    IM, IB = M.identity(), H.algebra.identity()
    Bs, Ms = H.space, M.space
    step1 = tensor_map(IM, tensor_map(act, IB) @ tensor_map(IB, braiding(Bs, Ms))
                       @ tensor_map(H.comult, IM), IB)
    step2 = tensor_map(M.mult, IB, IB)
    step3 = tensor_map(IM, tensor_map(c, H.algebra.mult) @ tensor_map(IB, braiding(Bs, Bs), IB)
                       @ tensor_map(H.comult, H.comult))
    step4 = tensor_map(M.mult, IB)
    mult = step4 @ step3 @ step2 @ step1
    MB = tensor(Ms, Bs)
    unit: Vector = {}
    for i, x in M.unit.items():
        for j, y in H.algebra.unit.items():
            unit[i * Bs.dim + j] = x * y
    return AlgebraStructure(MB, unit, mult, f"{M.name}_c#{H.name}")


def check_cross_product(T: Trivialization) -> Report:
    rep = Report("cocycle cross product")
    prod = transport_product(T)
    act, c = extract_cocycle(T, prod)
    rebuilt = cocycle_cross_product(T.bundle.M, T.bundle.hopf, act, c)
    rep.equal("rebuilt product = transported product", rebuilt.mult, prod.mult)
    rep.add("rebuilt unit = transported unit", rebuilt.unit == prod.unit)
    return rep
