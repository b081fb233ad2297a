"""Associated bundles, local sections and covariant derivatives."""

from __future__ import annotations

from functools import cached_property
from typing import Mapping

from .braided_algebra import (
    AlgebraStructure,
    BraidedHopf,
    Coaction,
    braided_tensor_algebra,
    regular_coaction,
    check_comodule_algebra,
    tensor_coaction,
    tensor_power_coaction,
)
from .cyclotomic import Scalar
from .differential_calculus import Calculus, FormError, pushforward
from .gauge import (
    BundleError,
    LocalTheory,
    PrincipalBundle,
    Trivialization,
    projection_from_connection,
    pull_back,
)
from .graded_linear import (
    GradedMap,
    GradedSpace,
    Subspace,
    Vector,
    axpy,
    braiding,
    solve,
    span,
    tensor,
    tensor_map,
)
from .report import Report


class FiberComodule:
    """A comodule V with a coinvariant point η_V."""

    def __init__(self, coaction: Coaction, unit_point: Mapping[int, Scalar] | None = None,
                 algebra: AlgebraStructure | None = None):
        self.coaction = coaction
        self.V = coaction.carrier
        self.algebra = algebra
        if unit_point is None:
            unit_point = algebra.unit if algebra is not None else {}
        self.unit_point = dict(unit_point)
        H = coaction.hopf
        expect: Vector = {}
        dB = H.space.dim
        for i, x in self.unit_point.items():
            for j, y in H.algebra.unit.items():
                axpy(expect, x * y, {i * dB + j: H.algebra.field.one})
        if coaction(self.unit_point) != expect:
            raise ValueError("unit point is not coinvariant")

    @property
    def rho(self) -> GradedMap:
        return self.coaction.rho


# ---------------------------------------------------------------------------
# convolution of fiber-indexed maps


def fiber_conv(cal: Calculus, f: GradedMap, k: int, g: GradedMap, l: int,
               coaction: Coaction) -> GradedMap:
    """f∗g = ∧∘(f⊗g)∘ρ_V for f : V -> Ω^k and g : B -> Ω^l."""
    return cal.convolve(f, k, g, l, coaction.rho)


def nabla(local: LocalTheory, coaction: Coaction, sigma: GradedMap, n: int,
          A: GradedMap) -> GradedMap:
    """∇σ = dσ + (-1)^{n+1} σ∗A for σ : V -> Ω^n M."""
    conv = fiber_conv(local.cal, sigma, n, A, 1, coaction)
    ds = local.cal.d_of(sigma, n)
    return ds - conv if n % 2 == 0 else ds + conv


def section_curvature(local: LocalTheory, coaction: Coaction, sigma: GradedMap, n: int,
                      F: GradedMap) -> GradedMap:
    """σ∗F."""
    return fiber_conv(local.cal, sigma, n, F, 2, coaction)


def transform_section(local: LocalTheory, coaction: Coaction, sigma: GradedMap, n: int,
                      gamma: GradedMap) -> GradedMap:
    """σ^γ = σ∗γ."""
    return fiber_conv(local.cal, sigma, n, gamma, 0, coaction)


# ---------------------------------------------------------------------------
# global forms


def form_coaction(bundle: PrincipalBundle, n: int) -> Coaction:
    """Braided tensor power coaction on P^{⊗(n+1)}."""
    return tensor_power_coaction(bundle.rho, n + 1)


def local_to_global(T: Trivialization, fiber: FiberComodule, sigma: GradedMap, n: int) -> GradedMap:
    """Σ = σ∗Φ : V -> Ω^n P for σ : V -> Ω^n M."""
    b = T.bundle
    sP = pushforward(b.incM, n + 1, b.cal) @ sigma
    return b.cal.convolve(sP, n, T.phi, 0, fiber.rho)


def global_to_local(T: Trivialization, fiber: FiberComodule, Sigma: GradedMap, n: int) -> GradedMap:
    """σ = Σ∗Φ⁻¹, which must land in Ω^n M."""
    b = T.bundle
    raw = b.cal.convolve(Sigma, n, T.phi_inv, 0, fiber.rho)
    try:
        sigma = pull_back(pushforward(b.incM, n + 1, b.cal), raw, f"(Ω^{n}M)P")
    except FormError:
        raise FormError(f"image not in (Ω^{n}M)P") from None
    om = b.cal_M.omega(n)
    if not om.check_map(sigma):
        raise FormError(f"image not in (Ω^{n}M)P")
    return sigma


def is_equivariant_form(bundle: PrincipalBundle, fiber: FiberComodule, Sigma: GradedMap,
                        n: int) -> bool:
    rho = form_coaction(bundle, n).rho
    return rho @ Sigma == tensor_map(Sigma, bundle.hopf.algebra.identity()) @ fiber.rho


class Covariant:
    """D = (id - Π) extended over Ω^n P as a left P-module map, composed with d."""

    def __init__(self, bundle: PrincipalBundle, omega: GradedMap):
        self.bundle = bundle
        self.omega = omega
        self.Pi = projection_from_connection(bundle, omega)
        d0 = bundle.cal.d_map(0)
        self.hd = d0 - self.Pi @ d0  # (id - Π)∘d on P

    def horizontal_part(self, v: Mapping[int, Scalar], n: int) -> Vector:
        """p0⊗p1⊗...⊗pn -> p0 (id-Π)dp1 ∧ ... ∧ (id-Π)dpn."""
        cal = self.bundle.cal
        d = cal.d_alg
        out: Vector = {}
        for idx, c in v.items():
            digits = []
            for _ in range(n + 1):
                idx, r = divmod(idx, d)
                digits.append(r)
            digits.reverse()
            acc: Vector = {digits[0]: c}
            deg = 0
            for p in digits[1:]:
                acc = cal.wedge_vec(acc, deg, self.hd.cols[p], 1)
                deg += 1
                if not acc:
                    break
            axpy(out, cal.field.one, acc)
        return out

    def D(self, Sigma: GradedMap, n: int) -> GradedMap:
        cal = self.bundle.cal
        cols = [self.horizontal_part(cal.d_vec(c, n), n + 1) for c in Sigma.cols]
        return GradedMap(Sigma.domain, cal.power(n + 2), cols, check=False)


# ---------------------------------------------------------------------------
# associated bundles


class AssociatedBundle:
    """E = (P⊗V)^B under the braided tensor product coaction."""

    def __init__(self, bundle: PrincipalBundle, fiber: FiberComodule):
        if fiber.coaction.hopf.space != bundle.hopf.space:
            raise ValueError("fiber comodule is for a different Hopf algebra")
        self.bundle = bundle
        self.fiber = fiber
        self.coaction = tensor_coaction(bundle.rho, fiber.coaction, "P⊗V")
        self.E: Subspace = self.coaction.invariants()
        self.PV = self.coaction.carrier

    @property
    def dim(self) -> int:
        return self.E.dim

    @cached_property
    def unit(self) -> Vector:
        """η_E = 1⊗η_V."""
        P = self.bundle.P
        dV = self.fiber.V.dim
        out: Vector = {}
        for i, x in P.unit.items():
            for j, y in self.fiber.unit_point.items():
                axpy(out, x * y, {i * dV + j: P.field.one})
        return out

    def left_m(self, m: Mapping[int, Scalar], e: Mapping[int, Scalar]) -> Vector:
        """m·(p⊗v) = mp⊗v."""
        P = self.bundle.P
        dV = self.fiber.V.dim
        out: Vector = {}
        for idx, c in e.items():
            i, j = divmod(idx, dV)
            for k, x in P.mul(m, {i: P.field.one}).items():
                axpy(out, c * x, {k * dV + j: P.field.one})
        return out

    def check(self) -> Report:
        rep = Report("associated bundle")
        rep.add("unit in E", self.E.contains(self.unit))
        ok = all(self.E.contains(self.left_m(m, e))
                 for m in self.bundle.M_sub.vectors() for e in self.E.vectors())
        rep.add("E closed under left multiplication by M", ok)
        return rep

    @cached_property
    def inclusion(self) -> GradedMap:
        return self.E.inclusion()

    # -- algebra structure when V is an algebra ------------------------------------
    @cached_property
    def tensor_algebra(self) -> AlgebraStructure:
        if self.fiber.algebra is None:
            raise ValueError("fiber has no algebra structure")
        return braided_tensor_algebra(self.bundle.P, self.fiber.algebra, "P#V")

    def check_tensor_comodule_algebra(self) -> Report:
        PV = self.tensor_algebra
        from .braided_algebra import relabel_map
        rel = relabel_map(self.PV, PV.space)
        rho = tensor_map(rel, self.bundle.hopf.algebra.identity()) @ self.coaction.rho @ \
            relabel_map(PV.space, self.PV)
        return check_comodule_algebra(PV, Coaction(PV.space, self.bundle.hopf, rho, "P⊗V"))

    def e_mul(self, u: Mapping[int, Scalar], v: Mapping[int, Scalar]) -> Vector:
        return self.tensor_algebra.mul(u, v)

    def is_subalgebra(self) -> bool:
        """Whether E is closed under the braided tensor product of P⊗V."""
        vecs = self.E.vectors()
        return all(self.E.contains(self.e_mul(u, v)) for u in vecs for v in vecs)


def braided_opposite(A: AlgebraStructure, name: str = "") -> AlgebraStructure:
    """A with product ·∘Ψ."""
    return AlgebraStructure(A.space, A.unit, A.mult @ braiding(A.space, A.space),
                            name or f"{A.name}^op")


def coregular_fiber(H: BraidedHopf) -> FiberComodule:
    """B_R: B under Δ, with the braided-opposite product as its algebra structure.

    With this product (id⊗S)∘ρ is multiplicative into P⊗V; with the product of
    B itself E is not closed under multiplication.
    """
    return FiberComodule(regular_coaction(H), algebra=braided_opposite(H.algebra))


def coregular_iso(assoc: AssociatedBundle) -> tuple[GradedMap, GradedMap]:
    """(P -> E, E -> P) for V = B_R: (id⊗S)∘ρ and id⊗ε."""
    b = assoc.bundle
    H = b.hopf
    fwd = tensor_map(b.P.identity(), H.antipode) @ b.rho.rho
    back = tensor_map(b.P.identity(), H.counit)
    return fwd, back


def check_coregular(assoc: AssociatedBundle) -> Report:
    b = assoc.bundle
    fwd, back = coregular_iso(assoc)
    rep = Report("coregular associated bundle")
    rep.add("image of (id⊗S)rho lies in E", all(assoc.E.contains(c) for c in fwd.cols))
    rep.add("dim E = dim P", assoc.dim == b.P.dim)
    rep.equal("(id⊗eps)(id⊗S)rho = id", back @ fwd, b.P.identity())
    rep.equal("(id⊗S)rho (id⊗eps) = id on E", fwd @ back @ assoc.inclusion, assoc.inclusion)
    rep.add("unit to unit", fwd(b.P.unit) == assoc.unit)
    if assoc.fiber.algebra is not None:
        P = b.P
        lhs = fwd @ P.mult
        rhs_cols = [assoc.e_mul(fwd.cols[i], fwd.cols[j])
                    for i in range(P.dim) for j in range(P.dim)]
        rhs = GradedMap(lhs.domain, lhs.codomain, rhs_cols, check=False)
        rep.equal("algebra isomorphism onto E", lhs, rhs)
    return rep


# ---------------------------------------------------------------------------
# trivialized associated bundles


class AssociatedTrivialization:
    """Φ_E : V -> E and θ_E : M⊗V -> E for a trivial bundle."""

    def __init__(self, T: Trivialization, assoc: AssociatedBundle, inverse_braid: bool = True,
                 validate: bool = True):
        self.T = T
        self.assoc = assoc
        self._build(inverse_braid)
        if validate:
            rep = self.validate()
            if not rep.ok:
                raise BundleError(f"associated trivialization invalid: {rep.failed_names()}")

    def _build(self, inverse_braid: bool) -> None:
        b = self.T.bundle
        H = b.hopf
        V = self.assoc.fiber.V
        Sinv = H.antipode_inverse
        if Sinv is None:
            raise ValueError("the antipode must be invertible")
        self.inverse_braid = inverse_braid
        psi = braiding(V, H.space, inverse=inverse_braid)
        self.phi_E = tensor_map(self.T.phi @ Sinv, GradedMap.identity(V)) @ psi @ self.assoc.fiber.rho
        MV = tensor(b.M.space, V)
        dV = V.dim
        P = b.P
        cols = []
        for m in range(b.M.dim):
            pm = b.incM.cols[m]
            for j in range(dV):
                cols.append(self.assoc.left_m(pm, self.phi_E.cols[j]))
        self.theta_E = GradedMap(MV, self.assoc.PV, cols)
        IV = GradedMap.identity(V)
        raw = (tensor_map(P.mult, IV) @ tensor_map(P.identity(), self.T.phi_inv, IV)
               @ tensor_map(b.rho.rho, IV))
        self.theta_E_inv_raw = raw
        self.MV = MV

    @cached_property
    def theta_E_inv(self) -> GradedMap:
        """θ_E⁻¹ restricted to E and read in M⊗V (E-coordinates as domain)."""
        b = self.T.bundle
        IV = GradedMap.identity(self.assoc.fiber.V)
        return pull_back(tensor_map(b.incM, IV), self.theta_E_inv_raw @ self.assoc.inclusion,
                         "M⊗V")

    def validate(self) -> Report:
        rep = Report("associated trivialization")
        E = self.assoc.E
        rep.add("image of Phi_E lies in E", all(E.contains(c) for c in self.phi_E.cols))
        rep.add("image of theta_E lies in E", all(E.contains(c) for c in self.theta_E.cols))
        if not rep.ok:
            return rep
        try:
            inv = self.theta_E_inv
        except FormError as exc:
            rep.add("theta_E^-1 lands in M⊗V", False, str(exc))
            return rep
        rep.equal("theta_E^-1 theta_E = id", inv @ _to_coords(E, self.theta_E),
                  GradedMap.identity(self.MV))
        rep.equal("theta_E theta_E^-1 = id", self.theta_E @ inv, self.assoc.inclusion)
        rep.add("theta_E bijective", self.theta_E.rank() == E.dim == self.MV.dim)
        return rep

    def transported_product(self) -> AlgebraStructure:
        """Product of E (inside the braided tensor product P⊗V) carried to M⊗V."""
        assoc = self.assoc
        th = self.theta_E
        inv = self.theta_E_inv
        E = assoc.E
        cols = []
        for u in th.cols:
            for v in th.cols:
                cols.append(_coords_apply(inv, E, assoc.e_mul(u, v)))
        mult = GradedMap(tensor(self.MV, self.MV), self.MV, cols)
        unit = _coords_apply(inv, E, assoc.unit)
        return AlgebraStructure(self.MV, unit, mult, "M⊗V transported")


def _coords(E: Subspace, v: Mapping[int, Scalar]) -> Vector:
    return {k: x for k, x in enumerate(E.coordinates(v)) if x}


def _coords_apply(f: GradedMap, E: Subspace, v: Mapping[int, Scalar]) -> Vector:
    return f(_coords(E, v))


def _to_coords(E: Subspace, f: GradedMap) -> GradedMap:
    space = E.as_space()
    return GradedMap(f.domain, space, [_coords(E, c) for c in f.cols], f.shift)


# ---------------------------------------------------------------------------
# cross sections


def cross_section(assoc: AssociatedBundle, Sigma: GradedMap) -> GradedMap:
    """s(p⊗v) = p·Σ(v) on E, read in M (E-coordinates as domain)."""
    b = assoc.bundle
    P = b.P
    dV = assoc.fiber.V.dim
    cols = []
    for e in assoc.E.vectors():
        out: Vector = {}
        for idx, c in e.items():
            i, j = divmod(idx, dV)
            axpy(out, c, P.mul({i: P.field.one}, Sigma.cols[j]))
        cols.append(out)
    raw = GradedMap(assoc.E.as_space(), P.space, cols)
    return pull_back(b.incM, raw, "M")


def form_from_cross_section(T: Trivialization, assoc: AssociatedBundle, s: GradedMap,
                            inverse_braid: bool = True) -> GradedMap:
    """Σ(v) = x·s(y⊗v₀) where x⊗y = χ⁻¹(1⊗S⁻¹(v₁)), after braiding v₀ past v₁.

    The element Σ x⊗y⊗v₀ lies in P⊗_M E only as a whole, so a representative
    in P⊗E is found modulo the balancing relations before s is applied.
    """
    b = T.bundle
    H = b.hopf
    P = b.P
    one = P.field.one
    V = assoc.fiber.V
    dV, d, dB = V.dim, P.dim, H.space.dim
    Sinv = H.antipode_inverse
    if Sinv is None:
        raise ValueError("the antipode must be invertible")
    PPV = tensor(P.space, assoc.PV)
    rep_map = _balanced_representatives(assoc, PPV)
    nE = assoc.E.dim
    swapped = braiding(V, H.space, inverse=inverse_braid) @ assoc.fiber.rho  # V -> B⊗V
    chi_inv = T.chi_inv_formula
    s_P = b.incM @ s
    cols = []
    for col in swapped.cols:
        w: Vector = {}
        for idx, c in col.items():
            jb, jv = divmod(idx, dV)
            one_sb: Vector = {}
            for pi, x in P.unit.items():
                for k, y in Sinv.cols[jb].items():
                    one_sb[pi * dB + k] = x * y
            for t, z in chi_inv(one_sb).items():
                xi, yi = divmod(t, d)
                axpy(w, c * z, {xi * d * dV + yi * dV + jv: one})
        sol = solve(rep_map, w)
        if sol is None:
            raise FormError("chi^-1 term does not lie in P⊗_M E")
        out: Vector = {}
        for k, c in sol.items():
            if k >= d * nE:
                continue  # balancing relation, killed by the M-linear s
            xi, ek = divmod(k, nE)
            axpy(out, c, P.mul({xi: one}, s_P.cols[ek]))
        cols.append(out)
    return GradedMap(V, P.space, cols)


def _balanced_representatives(assoc: AssociatedBundle, PPV: GradedSpace) -> GradedMap:
    """[P⊗E | relations p·m⊗e - p⊗m·e] as one map into P⊗(P⊗V)."""
    b = assoc.bundle
    P = b.P
    one = P.field.one
    d, dPV = P.dim, assoc.PV.dim
    cols: list[Vector] = []
    for i in range(d):
        for e in assoc.E.vectors():
            cols.append({i * dPV + k: x for k, x in e.items()})
    rel: list[Vector] = []
    for i in range(d):
        for m in b.M_sub.vectors():
            pm = P.mul({i: one}, m)
            for k in range(dPV):
                v: Vector = {}
                for a, x in pm.items():
                    axpy(v, x, {a * dPV + k: one})
                for k2, x in assoc.left_m(m, {k: one}).items():
                    axpy(v, -x, {i * dPV + k2: one})
                if v:
                    rel.append(v)
    cols.extend(r for _, r in span(PPV, rel).rows)
    dom = GradedSpace(P.n, [(f"r{k}", PPV.degree(min(c)) if c else 0) for k, c in enumerate(cols)])
    return GradedMap(dom, PPV, cols, check=False)


def section_from_local(at: AssociatedTrivialization, sigma: GradedMap) -> GradedMap:
    """s = ·∘(id⊗σ)∘θ_E⁻¹ : E -> M."""
    M = at.T.bundle.M
    dV = at.assoc.fiber.V.dim
    inv = at.theta_E_inv
    cols = []
    for col in inv.cols:
        out: Vector = {}
        for idx, c in col.items():
            m, j = divmod(idx, dV)
            axpy(out, c, M.mul({m: M.field.one}, sigma.cols[j]))
        cols.append(out)
    return GradedMap(inv.domain, M.space, cols)


def local_from_section(at: AssociatedTrivialization, s: GradedMap) -> GradedMap:
    """σ = s∘Φ_E."""
    return s @ _to_coords(at.assoc.E, at.phi_E)


__all__ = [
    "AssociatedBundle",
    "AssociatedTrivialization",
    "Covariant",
    "FiberComodule",
    "braided_opposite",
    "coregular_fiber",
    "coregular_iso",
    "check_coregular",
    "cross_section",
    "fiber_conv",
    "form_coaction",
    "form_from_cross_section",
    "global_to_local",
    "is_equivariant_form",
    "local_from_section",
    "local_to_global",
    "nabla",
    "section_curvature",
    "section_from_local",
    "transform_section",
]
