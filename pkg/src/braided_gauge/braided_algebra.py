"""Algebras, braided Hopf algebras and comodules given by structure constants."""

from __future__ import annotations

from typing import Callable, Mapping, Sequence

from .cyclotomic import Scalar
from .graded_linear import (
    GradedMap,
    GradedSpace,
    Subspace,
    Vector,
    axpy,
    braiding,
    hom_basis,
    kernel,
    solve,
    tensor,
    tensor_map,
    unit_space,
    vsub,
)
from .report import Report

Multiply = Callable[[Mapping[int, Scalar], Mapping[int, Scalar]], Vector]


class NoInverseError(ValueError):
    """A map has no convolution inverse."""


class AlgebraStructure:
    """Unital associative algebra on a graded space (associativity is checked, not assumed)."""

    def __init__(self, space: GradedSpace, unit: Mapping[int, Scalar], mult: GradedMap,
                 name: str = ""):
        if mult.domain != tensor(space, space) or mult.codomain != space:
            raise ValueError("multiplication must be a map space ⊗ space -> space")
        if mult.shift:
            raise ValueError("multiplication must have degree 0")
        self.space = space
        self.unit = dict(unit)
        self.mult = mult
        self.name = name
        space.vector_degree(self.unit)

    @classmethod
    def from_table(cls, space: GradedSpace, unit: str,
                   products: Mapping[tuple[str, str], Mapping[int, Scalar]],
                   name: str = "") -> AlgebraStructure:
        """Products not listed are zero, except those with the unit basis element."""
        d = space.dim
        u = space.index(unit)
        cols: list[Vector] = [{} for _ in range(d * d)]
        one = space.field.one
        for i in range(d):
            cols[u * d + i] = {i: one}
            cols[i * d + u] = {i: one}
        for (a, b), v in products.items():
            cols[space.index(a) * d + space.index(b)] = dict(v)
        mult = GradedMap(tensor(space, space), space, cols)
        return cls(space, {u: one}, mult, name)

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def field(self):
        return self.space.field

    def __repr__(self) -> str:
        return f"AlgebraStructure({self.name or '?'}, dim {self.dim})"

    def element(self, name: str, coeff=1) -> Vector:
        return self.space.vector(name, coeff)

    def mul(self, u: Mapping[int, Scalar], v: Mapping[int, Scalar]) -> Vector:
        d = self.dim
        cols = self.mult.cols
        out: Vector = {}
        for i, a in u.items():
            base = i * d
            for j, b in v.items():
                axpy(out, a * b, cols[base + j])
        return out

    def product(self, *vs: Mapping[int, Scalar]) -> Vector:
        out = dict(self.unit)
        for v in vs:
            out = self.mul(out, v)
        return out

    def eta(self) -> GradedMap:
        """Unit as a map from the unit object."""
        return GradedMap(unit_space(self.n), self.space, [dict(self.unit)])

    def identity(self) -> GradedMap:
        return GradedMap.identity(self.space)

    def left_mult_map(self, u: Mapping[int, Scalar]) -> GradedMap:
        return GradedMap(self.space, self.space,
                         [self.mul(u, self.space.basis_vector(j)) for j in range(self.dim)],
                         check=False)

    def inverse_element(self, u: Mapping[int, Scalar]) -> Vector | None:
        x = solve(self.left_mult_map(u), self.unit)
        if x is None or self.mul(x, u) != self.unit:
            return None
        return x


def braided_tensor_algebra(A: AlgebraStructure, C: AlgebraStructure,
                           name: str = "") -> AlgebraStructure:
    """Braided tensor product algebra: (·_A ⊗ ·_C)∘(id ⊗ Ψ_{C,A} ⊗ id).

    Basis names are products ``a*c`` with unit factors dropped.
    """
    if A.n != C.n:
        raise ValueError("modulus mismatch")
    AC = tensor(A.space, C.space)
    mid = tensor_map(A.identity(), braiding(C.space, A.space), C.identity())
    mult = tensor_map(A.mult, C.mult) @ mid
    space = GradedSpace(A.n, zip(_product_names(A, C), AC.degrees))
    relabel = GradedMap(tensor(space, space), tensor(AC, AC),
                        [{k: A.field.one} for k in range(AC.dim ** 2)], check=False)
    mult = GradedMap(tensor(space, space), space, (mult @ relabel).cols)
    unit = {}
    for i, a in A.unit.items():
        for j, c in C.unit.items():
            unit[i * C.dim + j] = a * c
    return AlgebraStructure(space, unit, mult, name or f"{A.name}#{C.name}")


def _unit_name(A: AlgebraStructure) -> str | None:
    if len(A.unit) == 1:
        (i, c), = A.unit.items()
        if c == 1:
            return A.space.names[i]
    return None


def _product_names(A: AlgebraStructure, C: AlgebraStructure) -> list[str]:
    ua, uc = _unit_name(A), _unit_name(C)
    names = []
    for a in A.space.names:
        for c in C.space.names:
            if c == uc:
                names.append(a)
            elif a == ua:
                names.append(c)
            else:
                names.append(f"{a}*{c}")
    if len(set(names)) != len(names):
        names = [f"{a}*{c}" for a in A.space.names for c in C.space.names]
    return names


def relabel_map(src: GradedSpace, dst: GradedSpace) -> GradedMap:
    """Identity matrix between two spaces with the same degrees in the same order."""
    if src.degrees != dst.degrees:
        raise ValueError("relabel between spaces with different gradings")
    one = src.field.one
    return GradedMap(src, dst, [{i: one} for i in range(src.dim)], check=False)


def subalgebra(A: AlgebraStructure, S: Subspace, names: Sequence[str] | None = None,
               name: str = "") -> tuple[AlgebraStructure, GradedMap]:
    """Algebra structure on a multiplicatively closed subspace, with its inclusion.

    If every echelon row is a single basis vector, the ambient names are reused.
    """
    if names is None:
        if all(len(r) == 1 and r[p] == 1 for p, r in S.rows):
            names = [A.space.names[p] for p, _ in S.rows]
    space = S.as_space(names)
    inc = S.inclusion(space)
    vecs = S.vectors()
    d = S.dim
    cols = []
    for u in vecs:
        for v in vecs:
            w = A.mul(u, v)
            coords = S.coordinates(w)
            cols.append({k: c for k, c in enumerate(coords) if c})
    unit_coords = S.coordinates(A.unit)
    mult = GradedMap(tensor(space, space), space, cols)
    sub = AlgebraStructure(space, {k: c for k, c in enumerate(unit_coords) if c}, mult, name)
    assert d == space.dim
    return sub, inc


# ---------------------------------------------------------------------------
# Hopf algebras


class BraidedHopf:
    """Braided group: algebra plus coproduct, counit, antipode (and optional inverse)."""

    def __init__(self, algebra: AlgebraStructure, comult: GradedMap, counit: GradedMap,
                 antipode: GradedMap, antipode_inverse: GradedMap | None = None,
                 name: str = ""):
        B = algebra.space
        if comult.domain != B or comult.codomain != tensor(B, B):
            raise ValueError("coproduct must be a map B -> B ⊗ B")
        if counit.domain != B or not counit.codomain.is_unit:
            raise ValueError("counit must be a map B -> k")
        if antipode.domain != B or antipode.codomain != B:
            raise ValueError("antipode must be a map B -> B")
        self.algebra = algebra
        self.comult = comult
        self.counit = counit
        self.antipode = antipode
        self.name = name or algebra.name
        if antipode_inverse is None:
            try:
                from .graded_linear import inverse_map
                antipode_inverse = inverse_map(antipode)
            except ValueError:
                antipode_inverse = None
        self.antipode_inverse = antipode_inverse

    @property
    def space(self) -> GradedSpace:
        return self.algebra.space

    @property
    def n(self) -> int:
        return self.algebra.n

    def __repr__(self) -> str:
        return f"BraidedHopf({self.name or '?'}, dim {self.space.dim})"

    def eps(self, v: Mapping[int, Scalar]) -> Scalar:
        out = self.counit(v)
        return out.get(0, self.algebra.field.zero)

    def eta_eps(self, A: AlgebraStructure) -> GradedMap:
        """The convolution unit η_A∘ε : B -> A."""
        return A.eta() @ self.counit

    def augmentation_indices(self) -> list[int]:
        """Basis indices spanning ker ε together with the unit (the reference models)."""
        return [j for j in range(self.space.dim) if j not in self.algebra.unit]


def check_algebra(A: AlgebraStructure) -> Report:
    rep = Report(f"algebra {A.name}")
    I = A.identity()
    rep.equal("associativity", A.mult @ tensor_map(A.mult, I), A.mult @ tensor_map(I, A.mult))
    eta = A.eta()
    rep.equal("left unit", A.mult @ tensor_map(eta, I), I)
    rep.equal("right unit", A.mult @ tensor_map(I, eta), I)
    return rep


def check_coalgebra(H: BraidedHopf) -> Report:
    rep = Report(f"coalgebra {H.name}")
    I = H.algebra.identity()
    D, e = H.comult, H.counit
    rep.equal("coassociativity", tensor_map(D, I) @ D, tensor_map(I, D) @ D)
    rep.equal("left counit", tensor_map(e, I) @ D, I)
    rep.equal("right counit", tensor_map(I, e) @ D, I)
    return rep


def check_hopf(H: BraidedHopf) -> Report:
    """Braided group axioms: coalgebra, bialgebra (against Ψ) and antipode."""
    A = H.algebra
    B = A.space
    rep = Report(f"braided group {H.name}")
    rep.merge(check_algebra(A))
    rep.merge(check_coalgebra(H))
    I = A.identity()
    D, e, S = H.comult, H.counit, H.antipode
    mid = tensor_map(I, braiding(B, B), I)
    rep.equal("coproduct multiplicative", D @ A.mult,
              tensor_map(A.mult, A.mult) @ mid @ tensor_map(D, D))
    rep.equal("coproduct unital", D @ A.eta(), tensor_map(A.eta(), A.eta()))
    k = unit_space(A.n)
    rep.equal("counit multiplicative", e @ A.mult, tensor_map(e, e))
    rep.equal("counit unital", e @ A.eta(), GradedMap.identity(k))
    ee = A.eta() @ e
    rep.equal("left antipode", A.mult @ tensor_map(S, I) @ D, ee)
    rep.equal("right antipode", A.mult @ tensor_map(I, S) @ D, ee)
    if H.antipode_inverse is not None:
        rep.equal("antipode inverse", H.antipode_inverse @ S, I)
    return rep


def antipode_antihomomorphism(H: BraidedHopf) -> tuple[GradedMap, GradedMap]:
    """Both sides of S∘· = ·∘(S⊗S)∘Ψ."""
    A, S = H.algebra, H.antipode
    return S @ A.mult, A.mult @ tensor_map(S, S) @ braiding(A.space, A.space)


# ---------------------------------------------------------------------------
# convolution


def convolve(f: GradedMap, g: GradedMap, split: GradedMap, multiply: Multiply,
             codomain: GradedSpace) -> GradedMap:
    """multiply∘(f⊗g)∘split, evaluated column by column.

    ``split`` is a coproduct B -> B⊗B or a coaction V -> V⊗B; ``multiply`` is
    the bilinear product on the output vectors.
    """
    if f.shift or g.shift:
        raise ValueError("convolution needs shift-0 maps")
    dg = g.domain.dim
    if split.codomain.dim != f.domain.dim * dg:
        raise ValueError("split map does not land in dom f ⊗ dom g")
    cols = []
    for col in split.cols:
        out: Vector = {}
        for idx, c in col.items():
            i, j = divmod(idx, dg)
            fv, gv = f.cols[i], g.cols[j]
            if fv and gv:
                axpy(out, c, multiply(fv, gv))
        cols.append(out)
    return GradedMap(split.domain, codomain, cols, check=False)


def convolution(f: GradedMap, g: GradedMap, A: AlgebraStructure, H: BraidedHopf) -> GradedMap:
    """f∗g = ·_A∘(f⊗g)∘Δ for f, g : B -> A."""
    return convolve(f, g, H.comult, A.mul, A.space)


def convolution_inverse(f: GradedMap, A: AlgebraStructure, H: BraidedHopf) -> GradedMap:
    """Two-sided convolution inverse of f : B -> A.

    When f(1) = 1 the series Σ (η∘ε - f)^{∗k} is tried first (it terminates for
    the graded nilpotent reference models); otherwise, or if it does not
    terminate, the inverse is found by an exact linear solve.
    """
    one_b = H.algebra.unit
    f1 = f(one_b)
    if A.inverse_element(f1) is None:
        raise NoInverseError("no convolution inverse: f(1) is not invertible in the target algebra")
    ee = H.eta_eps(A)
    g = None
    if f1 == A.unit:
        h = ee - f
        term = ee
        total = ee
        for _ in range(H.space.dim + 1):
            term = convolution(term, h, A, H)
            if term.is_zero():
                g = total
                break
            total = total + term
    if g is None:
        g = _solve_convolution_inverse(f, A, H)
    if convolution(f, g, A, H) != ee or convolution(g, f, A, H) != ee:
        raise NoInverseError("no two-sided convolution inverse")
    return g


def _solve_convolution_inverse(f: GradedMap, A: AlgebraStructure, H: BraidedHopf) -> GradedMap:
    basis = hom_basis(H.space, A.space)
    if not basis:
        raise NoInverseError("no degree-0 maps B -> A")
    ee = H.eta_eps(A)
    d = A.dim
    # the unknown g is Σ x_k basis_k; f∗g is linear in x
    images = [convolution(f, b, A, H) for b in basis]
    coeff_space = GradedSpace(A.n, [(f"x{k}", 0) for k in range(len(basis))])
    target_space = GradedSpace(A.n, [(f"y{k}", 0) for k in range(H.space.dim * d)])
    cols = []
    for im in images:
        col: Vector = {}
        for j, c in enumerate(im.cols):
            for i, x in c.items():
                col[j * d + i] = x
        cols.append(col)
    lin = GradedMap(coeff_space, target_space, cols, check=False)
    rhs: Vector = {}
    for j, c in enumerate(ee.cols):
        for i, x in c.items():
            rhs[j * d + i] = x
    x = solve(lin, rhs)
    if x is None:
        raise NoInverseError("no right convolution inverse")
    g = GradedMap.zero(H.space, A.space)
    for k, c in x.items():
        g = g + basis[k].scale(c)
    return g


# ---------------------------------------------------------------------------
# comodules


class Coaction:
    """Right coaction ρ : V -> V ⊗ B."""

    def __init__(self, carrier: GradedSpace, hopf: BraidedHopf, rho: GradedMap, name: str = ""):
        if rho.domain != carrier or rho.codomain != tensor(carrier, hopf.space):
            raise ValueError("coaction must be a map V -> V ⊗ B")
        if rho.shift:
            raise ValueError("coaction must have degree 0")
        self.carrier = carrier
        self.hopf = hopf
        self.rho = rho
        self.name = name

    def __repr__(self) -> str:
        return f"Coaction({self.name or '?'} on dim {self.carrier.dim})"

    def __call__(self, v: Mapping[int, Scalar]) -> Vector:
        return self.rho(v)

    def trivial_part(self) -> GradedMap:
        """id ⊗ η : V -> V ⊗ B."""
        return tensor_map(GradedMap.identity(self.carrier), self.hopf.algebra.eta())

    def invariants(self) -> Subspace:
        return kernel(self.rho - self.trivial_part())


def check_comodule(c: Coaction) -> Report:
    rep = Report(f"comodule {c.name}")
    H = c.hopf
    I = GradedMap.identity(c.carrier)
    IB = H.algebra.identity()
    rep.equal("coaction coassociative", tensor_map(c.rho, IB) @ c.rho,
              tensor_map(I, H.comult) @ c.rho)
    rep.equal("coaction counital", tensor_map(I, H.counit) @ c.rho, I)
    return rep


def check_comodule_algebra(A: AlgebraStructure, c: Coaction) -> Report:
    """Comodule axioms plus ρ being an algebra map into the braided tensor product A⊗B."""
    if c.carrier != A.space:
        raise ValueError("coaction is not on this algebra")
    rep = Report(f"comodule algebra {A.name} under {c.name}")
    rep.merge(check_comodule(c))
    H = c.hopf
    B = H.space
    IA, IB = A.identity(), H.algebra.identity()
    mult_AB = tensor_map(A.mult, H.algebra.mult) @ tensor_map(IA, braiding(B, A.space), IB)
    rep.equal("coaction multiplicative", c.rho @ A.mult, mult_AB @ tensor_map(c.rho, c.rho))
    rep.equal("coaction unital", c.rho @ A.eta(), tensor_map(A.eta(), H.algebra.eta()))
    return rep


def trivial_coaction(V: GradedSpace, H: BraidedHopf, name: str = "trivial") -> Coaction:
    return Coaction(V, H, tensor_map(GradedMap.identity(V), H.algebra.eta()), name)


def regular_coaction(H: BraidedHopf, name: str = "") -> Coaction:
    """B_R: B coacting on itself by the coproduct."""
    return Coaction(H.space, H, H.comult, name or f"{H.name}_R")


def adjoint_coaction(H: BraidedHopf, name: str = "") -> Coaction:
    """Braided adjoint coaction (id⊗·)∘(id⊗S⊗id)∘(Ψ_{B,B}⊗id)∘(Δ⊗id)∘Δ."""
    A = H.algebra
    B = A.space
    I = A.identity()
    ad = (tensor_map(I, A.mult) @ tensor_map(I, H.antipode, I)
          @ tensor_map(braiding(B, B), I) @ tensor_map(H.comult, I) @ H.comult)
    c = Coaction(B, H, ad, name or f"{H.name}_Ad")
    rep = check_comodule(c)
    if not rep.ok:
        raise ValueError(f"adjoint coaction fails the comodule axioms: {rep.failed_names()}")
    return c


def tensor_coaction(c1: Coaction, c2: Coaction, name: str = "") -> Coaction:
    """Braided tensor product coaction (id⊗id⊗·)∘(id⊗Ψ_{B,W}⊗id)∘(ρ_V⊗ρ_W)."""
    if c1.hopf is not c2.hopf and c1.hopf.space != c2.hopf.space:
        raise ValueError("coactions of different Hopf algebras")
    H = c1.hopf
    V, W = c1.carrier, c2.carrier
    B = H.space
    IV, IW, IB = (GradedMap.identity(X) for X in (V, W, B))
    rho = (tensor_map(IV, IW, H.algebra.mult) @ tensor_map(IV, braiding(B, W), IB)
           @ tensor_map(c1.rho, c2.rho))
    return Coaction(tensor(V, W), H, rho, name or f"{c1.name}⊗{c2.name}")


def tensor_power_coaction(c: Coaction, k: int) -> Coaction:
    out = c
    for _ in range(k - 1):
        out = tensor_coaction(out, c)
    return out


def is_equivariant(f: GradedMap, src: Coaction, dst: Coaction) -> bool:
    """(f⊗id)∘ρ_src = ρ_dst∘f."""
    IB = src.hopf.algebra.identity()
    return tensor_map(f, IB) @ src.rho == dst.rho @ f


def anyonic_comodule(V: GradedSpace, beta: GradedMap, H: BraidedHopf,
                     generator: str = "xi", name: str = "") -> Coaction:
    """Coaction v ↦ v⊗1 + β(v)⊗ξ + β²(v)/(1+q)⊗ξ² of the anyonic line B = k[ξ]/ξ³.

    ``beta`` has shift -1 and must satisfy β³ = 0.
    """
    if H.n != 3 or V.n != 3:
        raise ValueError("anyonic comodules are defined for n = 3")
    if beta.domain != V or beta.codomain != V or beta.shift != 2:
        raise ValueError("beta must be a degree -1 map V -> V")
    if not beta.power(3).is_zero():
        raise ValueError("invalid comodule data: beta^3 != 0")
    B = H.algebra
    xi = B.element(generator)
    xi2 = B.mul(xi, xi)
    q = V.field.q
    inv = (1 + q).inverse()
    dB = B.dim
    cols = []
    for j in range(V.dim):
        v = V.basis_vector(j)
        b1 = beta(v)
        b2 = beta(b1)
        out: Vector = {}
        for terms, vec in ((v, B.unit), (b1, xi), (b2, {k: x * inv for k, x in xi2.items()})):
            for i, a in terms.items():
                for k, b in vec.items():
                    axpy(out, a * b, {i * dB + k: V.field.one})
        cols.append(out)
    rho = GradedMap(V, tensor(V, B.space), cols)
    c = Coaction(V, H, rho, name)
    rep = check_comodule(c)
    if not rep.ok:
        raise ValueError(f"beta does not define a comodule: {rep.failed_names()}")
    return c


def maps_difference(f: GradedMap, g: GradedMap) -> GradedMap:
    return GradedMap(f.domain, f.codomain, [vsub(a, b) for a, b in zip(f.cols, g.cols)],
                     f.shift, check=False)
