"""The anyonic line bundle and the composite model built on it.

M = k[θ]/θ³ and B = k[ξ]/ξ³ (both generators in degree 1, n = 3), with
P = M⊗B the braided tensor product bundle.  Gauge fields, gauge
transformations and local sections are parametrized as

    A(ξ) = a1 dθ + a2 θ²dθ²,        A(ξ²) = b1 dθ² + b2 θdθ,
    γ(ξ) = c1 θ,  γ(ξ²) = c2 θ²,    σ(1) = s0, σ(ξ) = s1 θ, σ(ξ²) = s2 θ².

The composite model replaces M by N⊗k[θ]/θ³ for a degree-0 commutative N.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Mapping, Sequence

from .braided_algebra import (
    AlgebraStructure,
    BraidedHopf,
    Coaction,
    anyonic_comodule,
    braided_tensor_algebra,
    check_comodule,
    regular_coaction,
)
from .cyclotomic import Scalar, field
from .differential_calculus import Calculus
from .gauge import LocalTheory, tensor_product_bundle
from .graded_linear import (
    GradedMap,
    GradedSpace,
    Vector,
    axpy,
    hom_basis,
    tensor,
    unit_space,
)
from .report import Report

F3 = field(3)
Q = F3.q
ONE_Q = 1 + Q  # the recurring 1+q


class ModelError(ValueError):
    """A closed-form operation was asked of a model it does not describe."""


def truncated_line(gen: str, degree: int = 1, n: int = 3, order: int = 3,
                   name: str = "") -> AlgebraStructure:
    """k[x]/x^order with x of the given degree; basis 1, x, x2, ..."""
    names = ["1"] + [gen if k == 1 else f"{gen}{k}" for k in range(1, order)]
    space = GradedSpace(n, [(nm, k * degree) for k, nm in enumerate(names)])
    one = space.field.one
    products = {}
    for i in range(1, order):
        for j in range(1, order):
            if i + j < order:
                products[(names[i], names[j])] = {i + j: one}
    return AlgebraStructure.from_table(space, "1", products, name or gen)


def anyonic_hopf(gen: str = "xi") -> BraidedHopf:
    """B = k[ξ]/ξ³ with ξ primitive, ε(ξ) = 0 and S(ξ) = -ξ."""
    alg = truncated_line(gen, name="B")
    B = alg.space
    BB = tensor(B, B)
    g, g2 = gen, f"{gen}2"

    def v(*terms):
        out: Vector = {}
        for c, nm in terms:
            axpy(out, F3.coerce(c), {BB.index(nm): F3.one})
        return out

    comult = GradedMap(B, BB, [v((1, "1.1")), v((1, f"{g}.1"), (1, f"1.{g}")),
                               v((1, f"{g2}.1"), (ONE_Q, f"{g}.{g}"), (1, f"1.{g2}"))])
    counit = GradedMap(B, unit_space(3), [{0: 1}, {}, {}])
    # S(ξ²) = S(ξ)S(ξ)·q from the braided antihomomorphism property
    antipode = GradedMap(B, B, [{0: 1}, {1: -1}, {2: Q}])
    return BraidedHopf(alg, comult, counit, antipode, name="B")


def coregular_beta(V: GradedSpace, gen: str = "xi", zero_on_xi: bool = False) -> GradedMap:
    """β for B coacting on itself.

    The default reproduces ρ = Δ.  ``zero_on_xi`` gives the operator with
    β(ξ) = 0, which defines a comodule but not the coregular one.
    """
    one = F3.one
    cols = [{}, {} if zero_on_xi else {0: one}, {V.index(gen): ONE_Q}]
    return GradedMap(V, V, cols, shift=-1)


def coregular_report(H: BraidedHopf) -> Report:
    """Compare the two candidate β operators for B_R against ρ = Δ."""
    rep = Report("coregular comodule B_R")
    V = H.space
    ours = anyonic_comodule(V, coregular_beta(V), H, name="B_R")
    rep.equal("beta(1)=0, beta(xi)=1, beta(xi2)=(1+q)xi gives rho = Delta", ours.rho, H.comult)
    theirs = anyonic_comodule(V, coregular_beta(V, zero_on_xi=True), H, name="B_R'")
    rep.add("beta(xi)=0 variant is a comodule", check_comodule(theirs).ok)
    same = theirs.rho == H.comult
    rep.add("beta(xi)=0 variant differs from Delta", not same)
    rep.note("DISCREPANCY: the stated operator beta(xi)=0 does not give the coregular "
             "coaction rho = Delta; sections use rho = Delta (beta(xi)=1)")
    return rep


# ---------------------------------------------------------------------------
# the anyonic line bundle


def _scalars(values: Sequence) -> list[Scalar]:
    return [F3.coerce(x) for x in values]


@dataclass
class AnyonicModel:
    """P = M⊗B over M = k[θ]/θ³ with its trivialization and local theory."""

    M: AlgebraStructure = dc_field(default_factory=lambda: truncated_line("theta", name="M"))
    hopf: BraidedHopf = dc_field(default_factory=anyonic_hopf)

    def __post_init__(self):
        self.bundle, self.triv = tensor_product_bundle(self.M, self.hopf, "P")
        # work with the bundle's copy of M (same basis names and order)
        self.local = LocalTheory(self.bundle.M, self.hopf, self.bundle.cal_M)
        self.B = self.hopf.space

    @property
    def cal(self) -> Calculus:
        return self.local.cal

    @cached_property
    def B_R(self) -> Coaction:
        return regular_coaction(self.hopf)

    # -- elements ----------------------------------------------------------
    def m(self, name: str) -> Vector:
        return self.bundle.M.element(name)

    def d(self, name: str) -> Vector:
        return self.cal.d_vec(self.m(name), 0)

    def mform(self, left: str, dname: str) -> Vector:
        """left · d(dname) in Ω¹M."""
        return self.cal.left_act(self.m(left), self.d(dname), 1)

    @cached_property
    def basis_forms(self) -> dict[str, Vector]:
        """The six spanning forms θdθ², θ²dθ, dθ, θ²dθ², dθ², θdθ."""
        return {
            "theta dtheta2": self.mform("theta", "theta2"),
            "theta2 dtheta": self.mform("theta2", "theta"),
            "dtheta": self.d("theta"),
            "theta2 dtheta2": self.mform("theta2", "theta2"),
            "dtheta2": self.d("theta2"),
            "theta dtheta": self.mform("theta", "theta"),
        }

    def two_form(self, *factors: str) -> Vector:
        """Wedge of named 1-forms and 0-forms, e.g. ('theta2', 'dtheta2', 'dtheta')."""
        cal = self.cal
        out: Vector | None = None
        deg = 0
        for f in factors:
            if f.startswith("d"):
                v, k = self.d(f[1:]), 1
            else:
                v, k = self.m(f), 0
            if out is None:
                out, deg = v, k
            else:
                out, deg = cal.wedge_vec(out, deg, v, k), deg + k
        return out or {}

    # -- parametrized maps -----------------------------------------------------
    def _map(self, codomain: GradedSpace, cols: list[Vector]) -> GradedMap:
        return GradedMap(self.B, codomain, cols)

    def gauge_field(self, a1, a2, b1, b2) -> GradedMap:
        a1, a2, b1, b2 = _scalars((a1, a2, b1, b2))
        f = self.basis_forms
        xi = {}
        axpy(xi, a1, f["dtheta"])
        axpy(xi, a2, f["theta2 dtheta2"])
        xi2 = {}
        axpy(xi2, b1, f["dtheta2"])
        axpy(xi2, b2, f["theta dtheta"])
        return self._map(self.cal.power(2), [{}, xi, xi2])

    def field_params(self, A: GradedMap) -> tuple[Scalar, Scalar, Scalar, Scalar]:
        f = self.basis_forms
        a1, a2 = _solve2(A.cols[1], f["dtheta"], f["theta2 dtheta2"])
        b1, b2 = _solve2(A.cols[2], f["dtheta2"], f["theta dtheta"])
        if A.cols[0]:
            raise ModelError("gauge field does not vanish on 1")
        return a1, a2, b1, b2

    def gauge(self, c1, c2) -> GradedMap:
        c1, c2 = _scalars((c1, c2))
        M = self.bundle.M.space
        return self._map(M, [{M.index("1"): F3.one}, {M.index("theta"): c1},
                             {M.index("theta2"): c2}])

    def gauge_params(self, g: GradedMap) -> tuple[Scalar, Scalar]:
        M = self.bundle.M.space
        if g.cols[0] != {M.index("1"): F3.one}:
            raise ModelError("gauge transformation must send 1 to 1")
        return (g.cols[1].get(M.index("theta"), F3.zero),
                g.cols[2].get(M.index("theta2"), F3.zero))

    def section(self, s0, s1, s2) -> GradedMap:
        s0, s1, s2 = _scalars((s0, s1, s2))
        M = self.bundle.M.space
        return self._map(M, [{M.index("1"): s0}, {M.index("theta"): s1},
                             {M.index("theta2"): s2}])

    def section_params(self, s: GradedMap) -> tuple[Scalar, Scalar, Scalar]:
        M = self.bundle.M.space
        return tuple(s.cols[k].get(M.index(nm), F3.zero)
                     for k, nm in enumerate(("1", "theta", "theta2")))  # type: ignore[return-value]

    # -- spaces of fields --------------------------------------------------
    def gauge_field_space_dim(self) -> int:
        """Dimension of the space of morphisms B -> Ω¹M vanishing on 1."""
        om = self.cal.omega(1).as_space()
        return len(hom_basis(self.B, om, skip=[self.hopf.algebra.space.index("1")]))

    def gauge_group_dim(self) -> int:
        """Dimension of {γ : B -> M, γ(1) = 1} (an affine space, all invertible)."""
        M = self.bundle.M.space
        return len(hom_basis(self.B, M, skip=[self.hopf.algebra.space.index("1")]))

    # -- closed forms -----------------------------------------------------------
    @staticmethod
    def flat_family(a1, b1) -> tuple[Scalar, Scalar, Scalar, Scalar]:
        """Flat fields: a2 = 0 and b2 = -(1+q)a1²."""
        a1, b1 = _scalars((a1, b1))
        return a1, F3.zero, b1, -ONE_Q * a1 * a1

    @staticmethod
    def is_flat_params(a1, a2, b1, b2) -> bool:
        a1, a2, b1, b2 = _scalars((a1, a2, b1, b2))
        return not a2 and b2 == -ONE_Q * a1 * a1

    @staticmethod
    def canonical_gauge(a1, a2, b1, b2) -> tuple[Scalar, Scalar]:
        """γ = (-a1, -b1 + (1+q)a1²), which clears a1 and b1."""
        a1, a2, b1, b2 = _scalars((a1, a2, b1, b2))
        return -a1, -b1 + ONE_Q * a1 * a1

    def gauge_canonical_form(self, A: GradedMap) -> tuple[GradedMap, GradedMap]:
        """(A^γ, γ) with γ chosen to set a1 = b1 = 0."""
        g = self.gauge(*self.canonical_gauge(*self.field_params(A)))
        return self.local.transform_field(A, g), g

    # -- sections -------------------------------------------------------------
    def nabla(self, sigma: GradedMap, A: GradedMap, n: int = 0) -> GradedMap:
        from .associated import nabla
        return nabla(self.local, self.B_R, sigma, n, A)


def _solve2(v: Mapping[int, Scalar], e1: Mapping[int, Scalar],
            e2: Mapping[int, Scalar]) -> tuple[Scalar, Scalar]:
    """Coefficients x, y with v = x e1 + y e2 (e1, e2 with disjoint leading entries)."""
    p1 = next(k for k in sorted(e1) if k not in e2)
    x = v.get(p1, F3.zero) / e1[p1]
    rest = dict(v)
    axpy(rest, -x, e1)
    if not rest:
        return x, F3.zero
    p2 = min(rest)
    if p2 not in e2:
        raise ModelError("value is not in the two-dimensional span")
    y = rest[p2] / e2[p2]
    axpy(rest, -y, e2)
    if rest:
        raise ModelError("value is not in the two-dimensional span")
    return x, y


# ---------------------------------------------------------------------------
# composite model M = N⊗k[θ]/θ³


def check_base_algebra(N: AlgebraStructure) -> Report:
    """N must be concentrated in degree 0 and commutative."""
    rep = Report(f"base algebra {N.name}")
    rep.add("degree 0", all(d == 0 for d in N.space.degrees))
    d = N.dim
    comm = all(N.mult.cols[i * d + j] == N.mult.cols[j * d + i] for i in range(d) for j in range(d))
    rep.add("commutative", comm)
    return rep


class CompositeModel:
    """P = (N⊗k[θ]/θ³)⊗B, with gauge fields split as (A1, A2, a1, a2, b1, b2).

    A1, A2 ∈ Ω¹N and a1, a2, b1, b2 ∈ N⊗N; N-valued parameters are vectors over N.
    """

    def __init__(self, N: AlgebraStructure, hopf: BraidedHopf | None = None):
        rep = check_base_algebra(N)
        if not rep.ok:
            raise ModelError(f"base algebra must be degree 0 and commutative: {rep.failed_names()}")
        self.N = N
        self.K = truncated_line("theta", name="K")
        self.hopf = hopf or anyonic_hopf()
        self.M0 = braided_tensor_algebra(N, self.K, "M")
        self.bundle, self.triv = tensor_product_bundle(self.M0, self.hopf, "P")
        self.local = LocalTheory(self.bundle.M, self.hopf, self.bundle.cal_M)
        self.B = self.hopf.space
        self.calN = Calculus(N)
        self.NN = tensor(N.space, N.space)

    @property
    def cal(self) -> Calculus:
        return self.local.cal

    # -- N⊗N arithmetic -----------------------------------------------------------
    def n_elem(self, name: str, coeff=1) -> Vector:
        return self.N.element(name, coeff)

    def nn_mul(self, X: Mapping[int, Scalar], Y: Mapping[int, Scalar]) -> Vector:
        """Product in N⊗N (componentwise; N is degree 0 so no braiding signs)."""
        d = self.N.dim
        out: Vector = {}
        for i, x in X.items():
            a, b = divmod(i, d)
            for j, y in Y.items():
                c, e = divmod(j, d)
                left = self.N.mul({a: F3.one}, {c: F3.one})
                right = self.N.mul({b: F3.one}, {e: F3.one})
                for p, u in left.items():
                    for r, w in right.items():
                        axpy(out, x * y * u * w, {p * d + r: F3.one})
        return out

    def tens(self, a: Mapping[int, Scalar], b: Mapping[int, Scalar]) -> Vector:
        d = self.N.dim
        out: Vector = {}
        for i, x in a.items():
            for j, y in b.items():
                axpy(out, x * y, {i * d + j: F3.one})
        return out

    def one_n(self) -> Vector:
        return dict(self.N.unit)

    def lact(self, c: Mapping[int, Scalar], X: Mapping[int, Scalar]) -> Vector:
        """c·X = (c⊗1)X."""
        return self.nn_mul(self.tens(c, self.one_n()), X)

    def ract(self, X: Mapping[int, Scalar], c: Mapping[int, Scalar]) -> Vector:
        """X·c = X(1⊗c)."""
        return self.nn_mul(X, self.tens(self.one_n(), c))

    def dN(self, c: Mapping[int, Scalar]) -> Vector:
        return self.calN.d_vec(c, 0)

    # -- M⊗M <-> components ------------------------------------------------------
    def _m_index(self, n_idx: int, k_name: str) -> int:
        # M = N⊗K with N major; the bundle's M reuses these positions
        return n_idx * self.K.dim + self.K.space.index(k_name)

    def embed(self, X: Mapping[int, Scalar], k1: str, k2: str) -> Vector:
        """X ∈ N⊗N placed on the K⊗K basis element k1⊗k2 of M⊗M."""
        d = self.N.dim
        dm = self.bundle.M.dim
        out: Vector = {}
        for i, x in X.items():
            a, b = divmod(i, d)
            axpy(out, x, {self._m_index(a, k1) * dm + self._m_index(b, k2): F3.one})
        return out

    def coefficient(self, v: Mapping[int, Scalar], k1: str, k2: str) -> Vector:
        """The N⊗N coefficient of k1⊗k2 in v ∈ M⊗M."""
        d = self.N.dim
        dm = self.bundle.M.dim
        dk = self.K.dim
        i1, i2 = self.K.space.index(k1), self.K.space.index(k2)
        out: Vector = {}
        for idx, x in v.items():
            m1, m2 = divmod(idx, dm)
            a, ka = divmod(m1, dk)
            b, kb = divmod(m2, dk)
            if ka == i1 and kb == i2:
                out[a * d + b] = x
        return out

    def assemble(self, A1, A2, a1, a2, b1, b2) -> GradedMap:
        """A(ξ) = A1 1⊗θ + a1 dθ + a2 θ²dθ², A(ξ²) = A2 1⊗θ² + b1 dθ² + b2 θdθ."""
        neg = F3.coerce(-1)
        xi: Vector = {}
        axpy(xi, F3.one, self.embed(A1, "1", "theta"))
        axpy(xi, F3.one, self.embed(a1, "1", "theta"))
        axpy(xi, neg, self.embed(a1, "theta", "1"))
        axpy(xi, F3.one, self.embed(a2, "theta2", "theta2"))
        xi2: Vector = {}
        axpy(xi2, F3.one, self.embed(A2, "1", "theta2"))
        axpy(xi2, F3.one, self.embed(b1, "1", "theta2"))
        axpy(xi2, neg, self.embed(b1, "theta2", "1"))
        axpy(xi2, F3.one, self.embed(b2, "theta", "theta"))
        axpy(xi2, neg, self.embed(b2, "theta2", "1"))
        return GradedMap(self.B, self.cal.power(2), [{}, xi, xi2])

    def decompose(self, A: GradedMap) -> tuple[Vector, ...]:
        """Inverse of :meth:`assemble`; raises if A has components outside the split."""
        neg = F3.coerce(-1)
        xi, xi2 = A.cols[1], A.cols[2]
        c = self.coefficient
        a1 = {k: -x for k, x in c(xi, "theta", "1").items()}
        A1 = dict(c(xi, "1", "theta"))
        axpy(A1, neg, a1)
        a2 = c(xi, "theta2", "theta2")
        b2 = c(xi2, "theta", "theta")
        b1 = {k: -x for k, x in c(xi2, "theta2", "1").items()}
        axpy(b1, neg, b2)
        A2 = dict(c(xi2, "1", "theta2"))
        axpy(A2, neg, b1)
        parts = (A1, A2, a1, a2, b1, b2)
        if A.cols[0] or self.assemble(*parts) != A:
            raise ModelError("gauge field has components outside the chosen splitting")
        return parts

    def gauge(self, c1: Mapping[int, Scalar], c2: Mapping[int, Scalar]) -> GradedMap:
        M = self.bundle.M.space
        col1: Vector = {}
        for i, x in c1.items():
            col1[self._m_index(i, "theta")] = x
        col2: Vector = {}
        for i, x in c2.items():
            col2[self._m_index(i, "theta2")] = x
        return GradedMap(self.B, M, [dict(self.bundle.M.unit), col1, col2])

    def section(self, s0, s1, s2) -> GradedMap:
        M = self.bundle.M.space
        cols = []
        for s, k in ((s0, "1"), (s1, "theta"), (s2, "theta2")):
            cols.append({self._m_index(i, k): x for i, x in s.items()})
        return GradedMap(self.B, M, cols)

    # -- closed-form component laws ----------------------------------------------
    def gauge_law(self, params: Sequence[Mapping[int, Scalar]], c1: Mapping[int, Scalar],
                  c2: Mapping[int, Scalar]) -> tuple[Vector, ...]:
        """The six-row transformation law of the components under γ = (c1, c2)."""
        A1, A2, a1, a2, b1, b2 = params
        one = self.one_n()
        dc1, dc2 = self.dN(c1), self.dN(c2)
        c1dc1 = self.lact(c1, dc1)
        L, R = self.lact, self.ract

        def comb(*terms):
            out: Vector = {}
            for coeff, vec in terms:
                axpy(out, F3.coerce(coeff), vec)
            return out

        nA1 = comb((1, A1), (1, dc1))
        nA2 = comb((1, A2), (1, dc2), (-ONE_Q, c1dc1), (ONE_Q, R(A1, c1)), (-ONE_Q, L(c1, A1)))
        na1 = comb((1, a1), (1, self.tens(c1, one)))
        na2 = dict(a2)
        nb1 = comb((1, b1), (1, self.tens(c2, one)), (ONE_Q, c1dc1), (ONE_Q, L(c1, A1)),
                   (ONE_Q, R(a1, c1)))
        c1sq = self.N.mul(c1, c1)
        a1A1 = comb((1, a1), (1, A1))
        nb2 = comb((1, b2), (-ONE_Q, self.tens(c1sq, one)), (-ONE_Q, c1dc1),
                   (-ONE_Q, R(a1, c1)), (-ONE_Q, L(c1, a1A1)))
        return nA1, nA2, na1, na2, nb1, nb2

    def flat_family(self, a: Mapping[int, Scalar], b: Mapping[int, Scalar]) -> tuple[Vector, ...]:
        """(da, db + (1+q)(da² - a da), a⊗1, 0, b⊗1 + (1+q)a⊗a, -(1+q)a⊗a)."""
        one = self.one_n()
        da = self.dN(a)
        A2 = dict(self.dN(b))
        axpy(A2, ONE_Q, self.dN(self.N.mul(a, a)))
        axpy(A2, -ONE_Q, self.lact(a, da))
        b1 = self.tens(b, one)
        axpy(b1, ONE_Q, self.tens(a, a))
        b2 = {k: -ONE_Q * x for k, x in self.tens(a, a).items()}
        return da, A2, self.tens(a, one), {}, b1, b2

    @staticmethod
    def flat_gauge(a: Mapping[int, Scalar], b: Mapping[int, Scalar]) -> tuple[Vector, Vector]:
        """γ = (-a, -b), taking the flat field with parameters (a, b) to zero."""
        return {k: -x for k, x in a.items()}, {k: -x for k, x in b.items()}
