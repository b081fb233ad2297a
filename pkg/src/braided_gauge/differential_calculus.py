"""Universal differential calculus of an algebra.

n-forms live in the tensor power P^{⊗(n+1)}; a form is kept as an ambient
vector there, and :class:`FormSpace` supplies membership and carrier
coordinates.  Maps into n-forms are ordinary :class:`GradedMap` objects whose
codomain is the ambient tensor power.
"""

from __future__ import annotations

from itertools import product
from typing import Mapping, Sequence

from .braided_algebra import AlgebraStructure, BraidedHopf, convolve
from .cyclotomic import Scalar
from .graded_linear import (
    Echelon,
    GradedMap,
    GradedSpace,
    Subspace,
    Vector,
    axpy,
    format_vector,
    joint_kernel,
    solve,
    span,
    tensor_map,
    tensor_power,
    unit_space,
)


class FormError(ValueError):
    """A vector or map does not land in the expected space of forms."""


class FormSpace:
    """Ω^n of an algebra, as the joint kernel of the adjacent multiplications."""

    def __init__(self, calculus: Calculus, n: int):
        self.calculus = calculus
        self.n = n
        self.ambient = calculus.power(n + 1)
        self._carrier: Subspace | None = None
        self._space: GradedSpace | None = None

    def __repr__(self) -> str:
        return f"FormSpace(Ω^{self.n} of {self.calculus.algebra.name or '?'})"

    @property
    def carrier(self) -> Subspace:
        if self._carrier is None:
            if self.n == 0:
                one = self.ambient.field.one
                self._carrier = Subspace(self.ambient, [{i: one} for i in range(self.ambient.dim)])
            else:
                self._carrier = joint_kernel(self.calculus.adjacent_products(self.n + 1))
        return self._carrier

    @property
    def dim(self) -> int:
        return self.carrier.dim

    def contains(self, v: Mapping[int, Scalar]) -> bool:
        """Membership by applying the adjacent products (no elimination needed)."""
        if self.n == 0:
            return True
        cal = self.calculus
        return all(not cal.contract(v, self.n + 1, i) for i in range(self.n))

    __contains__ = contains

    def coords(self, v: Mapping[int, Scalar]) -> list[Scalar]:
        if not self.contains(v):
            raise FormError(f"vector is not in Ω^{self.n}")
        return self.carrier.coordinates(v)

    def from_coords(self, coords: Sequence[Scalar]) -> Vector:
        return self.carrier.from_coordinates(coords)

    def basis(self) -> list[Vector]:
        return self.carrier.vectors()

    def as_space(self) -> GradedSpace:
        if self._space is None:
            self._space = self.carrier.as_space([f"w{k}" for k in range(self.dim)])
        return self._space

    def inclusion(self) -> GradedMap:
        return self.carrier.inclusion(self.as_space())

    def form(self, v: Mapping[int, Scalar]) -> Form:
        return Form(self, v)

    def check_map(self, f: GradedMap) -> bool:
        return f.codomain == self.ambient and all(self.contains(c) for c in f.cols)


class Form:
    """An element of Ω^n; equality is exact (ambient or carrier coordinates agree)."""

    __slots__ = ("space", "vec")

    def __init__(self, space: FormSpace, vec: Mapping[int, Scalar], check: bool = True):
        if check and not space.contains(vec):
            raise FormError(f"vector is not in Ω^{space.n}")
        self.space = space
        self.vec = {k: x for k, x in vec.items() if x}

    @property
    def degree(self) -> int:
        return self.space.n

    @property
    def coords(self) -> list[Scalar]:
        return self.space.coords(self.vec)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return self.space is other.space and self.vec == other.vec

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: Form) -> Form:
        return Form(self.space, _vadd(self.vec, other.vec), check=False)

    def __sub__(self, other: Form) -> Form:
        out = dict(self.vec)
        axpy(out, self.space.ambient.field.coerce(-1), other.vec)
        return Form(self.space, out, check=False)

    def scale(self, c) -> Form:
        c = self.space.ambient.field.coerce(c)
        return Form(self.space, {k: c * x for k, x in self.vec.items()}, check=False)

    __rmul__ = scale

    def __neg__(self) -> Form:
        return self.scale(-1)

    def d(self) -> Form:
        cal = self.space.calculus
        return Form(cal.omega(self.degree + 1), cal.d_vec(self.vec, self.degree), check=False)

    def wedge(self, other: Form) -> Form:
        cal = self.space.calculus
        k, l = self.degree, other.degree
        return Form(cal.omega(k + l), cal.wedge_vec(self.vec, k, other.vec, l), check=False)

    def __mul__(self, other: Form) -> Form:
        return self.wedge(other)

    def __bool__(self) -> bool:
        return bool(self.vec)

    def __str__(self) -> str:
        return format_vector(self.space.ambient, self.vec)

    __repr__ = __str__


def _vadd(u, v):
    out = dict(u)
    for k, x in v.items():
        y = out.get(k)
        s = x if y is None else y + x
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


class Calculus:
    """Universal calculus Ω(P) with d, the wedge product and the bimodule actions."""

    def __init__(self, algebra: AlgebraStructure):
        self.algebra = algebra
        self.d_alg = algebra.dim
        self._powers: dict[int, GradedSpace] = {}
        self._omegas: dict[int, FormSpace] = {}
        self._dmaps: dict[int, GradedMap] = {}

    def __repr__(self) -> str:
        return f"Calculus({self.algebra.name or '?'})"

    @property
    def field(self):
        return self.algebra.field

    def power(self, k: int) -> GradedSpace:
        if k not in self._powers:
            self._powers[k] = tensor_power(self.algebra.space, k) if k else unit_space(self.algebra.n)
        return self._powers[k]

    def omega(self, n: int) -> FormSpace:
        if n < 0:
            raise ValueError("form degree must be non-negative")
        if n not in self._omegas:
            self._omegas[n] = FormSpace(self, n)
        return self._omegas[n]

    def form(self, vec: Mapping[int, Scalar], n: int) -> Form:
        return Form(self.omega(n), vec)

    def element(self, name: str, coeff=1) -> Form:
        return Form(self.omega(0), self.algebra.element(name, coeff), check=False)

    # -- index bookkeeping --------------------------------------------------
    def contract(self, v: Mapping[int, Scalar], k: int, i: int) -> Vector:
        """Multiply factors i and i+1 of a vector in P^{⊗k}."""
        d = self.d_alg
        cols = self.algebra.mult.cols
        tail = d ** (k - i - 2)
        out: Vector = {}
        for idx, c in v.items():
            high, rest = divmod(idx, d ** (k - i))
            a, rest = divmod(rest, d ** (k - i - 1))
            b, low = divmod(rest, tail)
            base = high * d
            for e, x in cols[a * d + b].items():
                key = (base + e) * tail + low
                y = out.get(key)
                s = c * x if y is None else y + c * x
                if s:
                    out[key] = s
                else:
                    del out[key]
        return out

    def adjacent_products(self, k: int) -> list[GradedMap]:
        """The k-1 maps P^{⊗k} -> P^{⊗(k-1)} multiplying neighbouring factors."""
        I = self.algebra.identity()
        maps = []
        for i in range(k - 1):
            parts = [I] * i + [self.algebra.mult] + [I] * (k - i - 2)
            maps.append(tensor_map(*parts))
        return maps

    def insert_unit(self, v: Mapping[int, Scalar], k: int, i: int) -> Vector:
        """Insert the unit of P as a new factor at slot i of a vector in P^{⊗k}."""
        d = self.d_alg
        tail = d ** (k - i)
        out: Vector = {}
        for idx, c in v.items():
            high, low = divmod(idx, tail)
            for e, x in self.algebra.unit.items():
                key = (high * d + e) * tail + low
                axpy(out, c * x, {key: self.field.one})
        return out

    # -- d and wedge -------------------------------------------------------
    def d_vec(self, v: Mapping[int, Scalar], n: int) -> Vector:
        """d on Ω^n ⊂ P^{⊗(n+1)}: alternating sum of unit insertions."""
        out: Vector = {}
        minus = self.field.coerce(-1)
        for i in range(n + 2):
            w = self.insert_unit(v, n + 1, i)
            axpy(out, minus if i % 2 else self.field.one, w)
        return out

    def d_map(self, n: int) -> GradedMap:
        """d : P^{⊗(n+1)} -> P^{⊗(n+2)} as a matrix."""
        if n not in self._dmaps:
            src = self.power(n + 1)
            self._dmaps[n] = GradedMap(src, self.power(n + 2),
                                       [self.d_vec(src.basis_vector(j), n) for j in range(src.dim)],
                                       check=False)
        return self._dmaps[n]

    def wedge_vec(self, u: Mapping[int, Scalar], k: int, v: Mapping[int, Scalar], l: int) -> Vector:
        """u ∧ v: last factor of u times first factor of v."""
        d = self.d_alg
        cols = self.algebra.mult.cols
        vsize = d ** l
        usize_tail = d
        out: Vector = {}
        for iu, a in u.items():
            uhigh, ulast = divmod(iu, usize_tail)
            for iv, b in v.items():
                vfirst, vlow = divmod(iv, vsize)
                ab = a * b
                for e, x in cols[ulast * d + vfirst].items():
                    key = ((uhigh * d + e) * vsize) + vlow
                    y = out.get(key)
                    s = ab * x if y is None else y + ab * x
                    if s:
                        out[key] = s
                    else:
                        del out[key]
        return out

    def left_act(self, p: Mapping[int, Scalar], u: Mapping[int, Scalar], n: int) -> Vector:
        return self.wedge_vec(p, 0, u, n)

    def right_act(self, u: Mapping[int, Scalar], n: int, p: Mapping[int, Scalar]) -> Vector:
        return self.wedge_vec(u, n, p, 0)

    def d_of(self, f: GradedMap, n: int) -> GradedMap:
        """d∘f for a map f into Ω^n."""
        return GradedMap(f.domain, self.power(n + 2), [self.d_vec(c, n) for c in f.cols],
                         check=False)

    def convolve(self, f: GradedMap, k: int, g: GradedMap, l: int, split: GradedMap) -> GradedMap:
        """f∗g = ∧∘(f⊗g)∘split for f into Ω^k and g into Ω^l."""
        return convolve(f, g, split, lambda a, b: self.wedge_vec(a, k, b, l), self.power(k + l + 1))

    def conv(self, f: GradedMap, k: int, g: GradedMap, l: int, H: BraidedHopf) -> GradedMap:
        return self.convolve(f, k, g, l, H.comult)

    def zero_map(self, V: GradedSpace, n: int) -> GradedMap:
        return GradedMap.zero(V, self.power(n + 1))

    # -- monomial basis --------------------------------------------------------
    def monomials(self, n: int) -> GradedMap:
        """Basis of Ω^n by monomials m dx1...dxn, taking the first independent ones.

        The domain names the monomials (``theta2 dtheta dtheta2``); the map sends
        each to its ambient vector.
        """
        key = ("mono", n)
        cache = self.__dict__.setdefault("_mono", {})
        if key in cache:
            return cache[key]
        A = self.algebra
        V = A.space
        unit = {i for i, c in A.unit.items()} if len(A.unit) == 1 else set()
        ech = Echelon()
        names, cols = [], []
        for m in range(V.dim):
            for xs in product(range(V.dim), repeat=n):
                v = A.space.basis_vector(m)
                k = 0
                for x in xs:
                    v = self.wedge_vec(v, k, self.d_vec(V.basis_vector(x), 0), 1)
                    k += 1
                if not ech.add(v):
                    continue
                parts = [] if (m in unit and n) else [V.names[m] or "1"]
                parts += ["d" + V.names[x] for x in xs]
                names.append((" ".join(parts), V.degrees[m] + sum(V.degrees[x] for x in xs)))
                cols.append(v)
        f = GradedMap(GradedSpace(V.n, names), self.power(n + 1), cols, check=False)
        cache[key] = f
        return f

    def format_form(self, v: Mapping[int, Scalar], n: int) -> str:
        """A form written in the monomial basis of :meth:`monomials`."""
        mono = self.monomials(n)
        x = solve(mono, v)
        if x is None:
            raise FormError(f"not a {n}-form")
        return format_vector(mono.domain, x)

    # -- horizontal forms --------------------------------------------------
    def bimodule_span(self, forms: Sequence[Mapping[int, Scalar]], n: int,
                      left: bool = True, right: bool = True) -> Subspace:
        """Span of p·u·p' (or the one-sided versions) for u in ``forms``."""
        basis = [self.algebra.space.basis_vector(j) for j in range(self.d_alg)]
        lefts = [self.left_act(p, u, n) for p in basis for u in forms] if left else list(forms)
        vecs = [self.right_act(w, n, p) for w in lefts for p in basis] if right else lefts
        return span(self.power(n + 1), vecs)


def pushforward(f: GradedMap, k: int, target: Calculus) -> GradedMap:
    """f^{⊗k} : A^{⊗k} -> P^{⊗k} for an algebra map f : A -> P (forms along an inclusion)."""
    return tensor_map(*([f] * k)) if k else GradedMap.identity(target.power(0))


def horizontal_subspaces(cal_P: Calculus, inclusion: GradedMap,
                         cal_M: Calculus | None = None) -> tuple[Subspace, Subspace]:
    """(P(Ω¹M)P, (Ω¹M)P) inside P⊗P for a subalgebra M ⊂ P given by its inclusion."""
    M = inclusion.domain
    if cal_M is None:
        raise ValueError("need the calculus of the subalgebra")
    inc2 = pushforward(inclusion, 2, cal_P)
    om = [inc2(u) for u in cal_M.omega(1).basis()]
    both = cal_P.bimodule_span(om, 1, left=True, right=True)
    right = cal_P.bimodule_span(om, 1, left=False, right=True)
    assert M.dim == cal_M.algebra.dim
    return both, right
