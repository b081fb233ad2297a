"""Z_n-graded vector spaces, degree-homogeneous maps and exact subspace algebra.

Conventions (frozen, since several constructions are index sensitive):

* a vector is a ``dict`` mapping basis index to a nonzero :class:`Scalar`;
* the basis of ``V ⊗ W`` is ordered lexicographically with the ``V`` index
  major, i.e. ``e_i ⊗ f_j`` has index ``i * dim W + j``;
* the unit object (one basis vector of degree 0, name ``""``) is a strict
  unit for ``tensor``;
* a :class:`GradedMap` stores sparse columns, one per domain basis vector.
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping, Sequence

from .cyclotomic import Scalar, field

Vector = dict  # index -> Scalar, zero entries never stored


class DegreeError(ValueError):
    """A construction violated degree homogeneity."""


class ModulusError(ValueError):
    """Objects graded by different moduli were combined."""


# ---------------------------------------------------------------------------
# vectors


def axpy(acc: Vector, c: Scalar, v: Mapping[int, Scalar]) -> Vector:
    """acc += c * v in place, dropping zeros."""
    if not c:
        return acc
    one = c == 1
    for k, x in v.items():
        y = x if one else c * x
        if k in acc:
            s = acc[k] + y
            if s:
                acc[k] = s
            else:
                del acc[k]
        else:
            acc[k] = y
    return acc


def vadd(*vs: Mapping[int, Scalar]) -> Vector:
    out: Vector = {}
    for v in vs:
        for k, x in v.items():
            if k in out:
                s = out[k] + x
                if s:
                    out[k] = s
                else:
                    del out[k]
            else:
                out[k] = x
    return out


def vscale(c, v: Mapping[int, Scalar]) -> Vector:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def vsub(u: Mapping[int, Scalar], v: Mapping[int, Scalar]) -> Vector:
    out = dict(u)
    for k, x in v.items():
        if k in out:
            s = out[k] - x
            if s:
                out[k] = s
            else:
                del out[k]
        else:
            out[k] = -x
    return out


# ---------------------------------------------------------------------------
# spaces


class GradedSpace:
    """Finite-dimensional Z_n-graded space with a named homogeneous basis."""

    __slots__ = ("n", "names", "degrees", "_index", "_hash", "field")

    def __init__(self, n: int, basis: Iterable[tuple[str, int]]):
        basis = list(basis)
        self.n = n
        self.names = tuple(b[0] for b in basis)
        self.degrees = tuple(b[1] % n for b in basis)
        self._index = {name: i for i, name in enumerate(self.names)}
        if len(self._index) != len(self.names):
            raise ValueError(f"basis names not unique: {self.names}")
        self._hash = hash((n, self.names, self.degrees))
        self.field = field(n)

    @property
    def dim(self) -> int:
        return len(self.names)

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, GradedSpace) and self._hash == other._hash
                and self.n == other.n and self.names == other.names
                and self.degrees == other.degrees)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = " ".join(f"{a or '1'}:{d}" for a, d in zip(self.names, self.degrees))
        return f"GradedSpace(n={self.n}, [{body}])"

    @property
    def is_unit(self) -> bool:
        return self.names == ("",) and self.degrees == (0,)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"no basis element {name!r}") from None

    def has(self, name: str) -> bool:
        return name in self._index

    def degree(self, i: int) -> int:
        return self.degrees[i]

    def vector(self, name: str, coeff=1) -> Vector:
        c = self.field.coerce(coeff)
        return {self.index(name): c} if c else {}

    def basis_vector(self, i: int) -> Vector:
        return {i: self.field.one}

    def indices_of_degree(self, d: int) -> list[int]:
        d %= self.n
        return [i for i, e in enumerate(self.degrees) if e == d]

    def vector_degree(self, v: Mapping[int, Scalar]) -> int | None:
        """Common degree of a homogeneous vector (None for zero); raises if mixed."""
        degs = {self.degrees[i] for i in v}
        if len(degs) > 1:
            raise DegreeError(f"vector is not homogeneous: degrees {sorted(degs)}")
        return degs.pop() if degs else None

    def format_vector(self, v: Mapping[int, Scalar]) -> str:
        return format_vector(self, v)


def unit_space(n: int) -> GradedSpace:
    return GradedSpace(n, [("", 0)])


def _join(a: str, b: str) -> str:
    return f"{a}.{b}"


def tensor(*spaces: GradedSpace) -> GradedSpace:
    """Tensor product of graded spaces (strictly associative, strict unit)."""
    if not spaces:
        raise ValueError("tensor() needs at least one space")
    out = spaces[0]
    for W in spaces[1:]:
        if W.n != out.n:
            raise ModulusError(f"modulus mismatch: {out.n} vs {W.n}")
        if W.is_unit:
            continue
        if out.is_unit:
            out = W
            continue
        out = GradedSpace(out.n, [
            (_join(a, b), da + db)
            for a, da in zip(out.names, out.degrees)
            for b, db in zip(W.names, W.degrees)])
    return out


def tensor_power(V: GradedSpace, k: int) -> GradedSpace:
    if k == 0:
        return unit_space(V.n)
    return tensor(*([V] * k))


def tensor_vectors(u: Mapping[int, Scalar], v: Mapping[int, Scalar], dim_v: int) -> Vector:
    out: Vector = {}
    for i, a in u.items():
        base = i * dim_v
        for j, b in v.items():
            out[base + j] = a * b
    return out


def format_vector(V: GradedSpace, v: Mapping[int, Scalar]) -> str:
    """Deterministic text for a vector: ``c name + ...`` in basis order."""
    if not v:
        return "0"
    parts = []
    for i in sorted(v):
        c = v[i]
        name = V.names[i] or "1"
        cs = str(c)
        if name == "1":
            term = cs if c.is_rational() else f"({cs})"
        elif c == 1:
            term = name
        elif c == -1:
            term = f"-{name}"
        elif c.is_rational():
            term = f"{cs} {name}"
        else:
            term = f"({cs}) {name}"
        parts.append(term)
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


# ---------------------------------------------------------------------------
# maps


class GradedMap:
    """Degree-homogeneous linear map, stored as sparse columns.

    ``shift`` is the degree change; category morphisms have shift 0.
    """

    __slots__ = ("domain", "codomain", "shift", "cols")

    def __init__(self, domain: GradedSpace, codomain: GradedSpace,
                 cols: Sequence[Mapping[int, Scalar]], shift: int = 0,
                 check: bool = True):
        if domain.n != codomain.n:
            raise ModulusError(f"modulus mismatch: {domain.n} vs {codomain.n}")
        if len(cols) != domain.dim:
            raise ValueError(f"expected {domain.dim} columns, got {len(cols)}")
        self.domain = domain
        self.codomain = codomain
        self.shift = shift % domain.n
        fld = domain.field
        clean = []
        for j, col in enumerate(cols):
            c = {}
            for i, x in col.items():
                if not isinstance(x, Scalar):
                    x = fld.coerce(x)
                if x:
                    c[i] = x
            clean.append(c)
        self.cols = tuple(clean)
        if check:
            self._check_degrees()

    def _check_degrees(self) -> None:
        n = self.domain.n
        for j, col in enumerate(self.cols):
            want = (self.domain.degrees[j] + self.shift) % n
            for i in col:
                if self.codomain.degrees[i] != want:
                    raise DegreeError(
                        f"entry ({self.codomain.names[i] or '1'}, "
                        f"{self.domain.names[j] or '1'}) breaks degree shift {self.shift}")

    # -- constructors -----------------------------------------------------
    @classmethod
    def identity(cls, V: GradedSpace) -> GradedMap:
        one = V.field.one
        return cls(V, V, [{i: one} for i in range(V.dim)], check=False)

    @classmethod
    def zero(cls, V: GradedSpace, W: GradedSpace, shift: int = 0) -> GradedMap:
        return cls(V, W, [{} for _ in range(V.dim)], shift, check=False)

    @classmethod
    def from_function(cls, V: GradedSpace, W: GradedSpace,
                      fn: Callable[[int], Mapping[int, Scalar]], shift: int = 0) -> GradedMap:
        return cls(V, W, [fn(j) for j in range(V.dim)], shift)

    @classmethod
    def from_dense(cls, V: GradedSpace, W: GradedSpace, rows, shift: int = 0) -> GradedMap:
        cols = [{i: rows[i][j] for i in range(W.dim) if rows[i][j]} for j in range(V.dim)]
        return cls(V, W, cols, shift)

    # -- application ------------------------------------------------------
    def __call__(self, v: Mapping[int, Scalar]) -> Vector:
        out: Vector = {}
        for j, c in v.items():
            axpy(out, c, self.cols[j])
        return out

    def column(self, j: int) -> Vector:
        return dict(self.cols[j])

    def apply_name(self, name: str) -> Vector:
        return dict(self.cols[self.domain.index(name)])

    def entry(self, i: int, j: int) -> Scalar:
        return self.cols[j].get(i, self.domain.field.zero)

    # -- algebra ----------------------------------------------------------
    def __matmul__(self, other: GradedMap) -> GradedMap:
        """Composition ``self ∘ other``."""
        if not isinstance(other, GradedMap):
            return NotImplemented
        if other.codomain != self.domain:
            raise ValueError(
                f"cannot compose: codomain dim {other.codomain.dim} vs domain dim {self.domain.dim}")
        cols = [self(col) for col in other.cols]
        return GradedMap(other.domain, self.codomain, cols,
                         self.shift + other.shift, check=False)

    def _same_shape(self, other: GradedMap) -> None:
        if (self.domain != other.domain or self.codomain != other.codomain
                or self.shift != other.shift):
            raise ValueError("maps have different domain, codomain or shift")

    def __add__(self, other: GradedMap) -> GradedMap:
        self._same_shape(other)
        return GradedMap(self.domain, self.codomain,
                         [vadd(a, b) for a, b in zip(self.cols, other.cols)],
                         self.shift, check=False)

    def __sub__(self, other: GradedMap) -> GradedMap:
        self._same_shape(other)
        return GradedMap(self.domain, self.codomain,
                         [vsub(a, b) for a, b in zip(self.cols, other.cols)],
                         self.shift, check=False)

    def __neg__(self) -> GradedMap:
        return GradedMap(self.domain, self.codomain,
                         [vscale(-1, a) for a in self.cols], self.shift, check=False)

    def scale(self, c) -> GradedMap:
        c = self.domain.field.coerce(c)
        return GradedMap(self.domain, self.codomain,
                         [vscale(c, a) for a in self.cols], self.shift, check=False)

    __rmul__ = scale

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedMap):
            return NotImplemented
        return (self.domain == other.domain and self.codomain == other.codomain
                and self.cols == other.cols
                and (self.shift == other.shift or self.is_zero()))

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return not any(self.cols)

    def first_difference(self, other: GradedMap) -> int | None:
        """Index of the first domain basis vector on which the maps differ."""
        for j, (a, b) in enumerate(zip(self.cols, other.cols)):
            if a != b:
                return j
        return None

    def tensor(self, other: GradedMap) -> GradedMap:
        return tensor_map(self, other)

    def rows(self) -> list[Vector]:
        rows: list[Vector] = [dict() for _ in range(self.codomain.dim)]
        for j, col in enumerate(self.cols):
            for i, x in col.items():
                rows[i][j] = x
        return rows

    def to_dense(self) -> list[list[Scalar]]:
        z = self.domain.field.zero
        return [[self.cols[j].get(i, z) for j in range(self.domain.dim)]
                for i in range(self.codomain.dim)]

    def power(self, k: int) -> GradedMap:
        out = GradedMap.identity(self.domain)
        for _ in range(k):
            out = self @ out
        return out

    def rank(self) -> int:
        return image(self).dim

    def describe(self) -> list[str]:
        """One line per domain basis vector: ``name -> image``."""
        return [f"{self.domain.names[j] or '1'} -> {format_vector(self.codomain, col)}"
                for j, col in enumerate(self.cols)]

    def __repr__(self) -> str:
        return (f"GradedMap(dim {self.domain.dim} -> {self.codomain.dim}, "
                f"shift {self.shift})")


def tensor_map(*maps: GradedMap) -> GradedMap:
    """Tensor product of shift-0 maps, basis ordered as in :func:`tensor`."""
    if not maps:
        raise ValueError("tensor_map() needs at least one map")
    for f in maps:
        if f.shift:
            raise DegreeError("tensor_map requires shift-0 maps")
    out = maps[0]
    for g in maps[1:]:
        if g.domain.n != out.domain.n:
            raise ModulusError("modulus mismatch")
        dg = g.codomain.dim
        dom = tensor(out.domain, g.domain)
        cod = tensor(out.codomain, g.codomain)
        cols = [tensor_vectors(a, b, dg) for a in out.cols for b in g.cols]
        out = GradedMap(dom, cod, cols, check=False)
    return out


def identity(V: GradedSpace) -> GradedMap:
    return GradedMap.identity(V)


def braiding(V: GradedSpace, W: GradedSpace, inverse: bool = False) -> GradedMap:
    """Anyonic braiding ``v ⊗ w -> q^(|v||w|) w ⊗ v`` (or its inverse)."""
    if V.n != W.n:
        raise ModulusError(f"modulus mismatch: {V.n} vs {W.n}")
    fld = V.field
    sign = -1 if inverse else 1
    dw, dv = W.dim, V.dim
    cols = []
    for i in range(dv):
        for j in range(dw):
            cols.append({j * dv + i: fld.power(sign * V.degrees[i] * W.degrees[j])})
    return GradedMap(tensor(V, W), tensor(W, V), cols, check=False)


def braiding_inverse(V: GradedSpace, W: GradedSpace) -> GradedMap:
    """Inverse of ``braiding(W, V)``: a map ``V ⊗ W -> W ⊗ V``."""
    return braiding(V, W, inverse=True)


def swap(V: GradedSpace, W: GradedSpace) -> GradedMap:
    """Unbraided flip (used only for degree-0 bookkeeping)."""
    one = V.field.one
    dv, dw = V.dim, W.dim
    cols = [{j * dv + i: one} for i in range(dv) for j in range(dw)]
    return GradedMap(tensor(V, W), tensor(W, V), cols, check=False)


def hom_basis(V: GradedSpace, W: GradedSpace, shift: int = 0,
              skip: Iterable[int] = ()) -> list[GradedMap]:
    """Basis of homogeneous maps V -> W of the given shift (matrix units).

    Columns listed in ``skip`` are forced to zero.
    """
    skip = set(skip)
    out = []
    one = V.field.one
    for j in range(V.dim):
        if j in skip:
            continue
        for i in W.indices_of_degree(V.degrees[j] + shift):
            cols = [{} for _ in range(V.dim)]
            cols[j] = {i: one}
            out.append(GradedMap(V, W, cols, shift, check=False))
    return out


# ---------------------------------------------------------------------------
# exact elimination


class Echelon:
    """Incrementally maintained reduced row-echelon basis (sparse rows)."""

    __slots__ = ("rows",)

    def __init__(self, vectors: Iterable[Mapping[int, Scalar]] = ()):
        self.rows: dict[int, Vector] = {}
        for v in vectors:
            self.add(v)

    def reduce(self, v: Mapping[int, Scalar]) -> Vector:
        r = dict(v)
        hits = [k for k in r if k in self.rows]
        for p in hits:
            c = r.get(p)
            if c:
                axpy(r, -c, self.rows[p])
        return r

    def add(self, v: Mapping[int, Scalar]) -> bool:
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        lead = r[p]
        if lead != 1:
            inv = lead.inverse()
            r = {k: x * inv for k, x in r.items()}
        for row in self.rows.values():
            c = row.get(p)
            if c:
                axpy(row, -c, r)
        self.rows[p] = r
        return True

    def sorted_rows(self) -> tuple[tuple[int, Vector], ...]:
        return tuple((p, self.rows[p]) for p in sorted(self.rows))


class Subspace:
    """Graded subspace of ``ambient`` held as a canonical RREF basis."""

    __slots__ = ("ambient", "rows", "_pivots", "_key")

    def __init__(self, ambient: GradedSpace, vectors: Iterable[Mapping[int, Scalar]] = (),
                 *, _echelon: Echelon | None = None):
        self.ambient = ambient
        ech = _echelon if _echelon is not None else Echelon(vectors)
        self.rows = ech.sorted_rows()
        self._pivots = {p: k for k, (p, _) in enumerate(self.rows)}
        for _, row in self.rows:
            ambient.vector_degree(row)  # raises on a non-homogeneous row
        self._key = tuple((p, tuple(sorted(r.items(), key=lambda t: t[0])))
                          for p, r in self.rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> list[int]:
        return [p for p, _ in self.rows]

    def vectors(self) -> list[Vector]:
        return [dict(r) for _, r in self.rows]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self._key == other._key

    def __hash__(self) -> int:
        return hash((self.ambient, self._key))

    def __repr__(self) -> str:
        return f"Subspace(dim {self.dim} in {self.ambient.dim})"

    def reduce(self, v: Mapping[int, Scalar]) -> Vector:
        r = dict(v)
        for p in [k for k in r if k in self._pivots]:
            c = r.get(p)
            if c:
                axpy(r, -c, self.rows[self._pivots[p]][1])
        return r

    def contains(self, v: Mapping[int, Scalar]) -> bool:
        return not self.reduce(v)

    __contains__ = contains

    def coordinates(self, v: Mapping[int, Scalar]) -> list[Scalar]:
        """Coordinates of v in the echelon basis (v must lie in the subspace)."""
        if not self.contains(v):
            raise ValueError("vector is not in the subspace")
        z = self.ambient.field.zero
        return [v.get(p, z) for p, _ in self.rows]

    def from_coordinates(self, coords: Sequence[Scalar]) -> Vector:
        out: Vector = {}
        for c, (_, row) in zip(coords, self.rows):
            axpy(out, c, row)
        return out

    def is_subspace_of(self, other: Subspace) -> bool:
        return all(other.contains(r) for _, r in self.rows)

    def degrees(self) -> list[int]:
        return [self.ambient.degrees[p] for p, _ in self.rows]

    def as_space(self, names: Sequence[str] | None = None) -> GradedSpace:
        if names is None:
            names = [f"v{k}" for k in range(self.dim)]
        return GradedSpace(self.ambient.n, zip(names, self.degrees()))

    def inclusion(self, space: GradedSpace | None = None) -> GradedMap:
        space = space or self.as_space()
        return GradedMap(space, self.ambient, [dict(r) for _, r in self.rows])

    def dims_by_degree(self) -> list[int]:
        counts = [0] * self.ambient.n
        for d in self.degrees():
            counts[d] += 1
        return counts


def span(ambient: GradedSpace, vectors: Iterable[Mapping[int, Scalar]]) -> Subspace:
    return Subspace(ambient, vectors)


def zero_subspace(ambient: GradedSpace) -> Subspace:
    return Subspace(ambient, ())


def _kernel_vectors(rows: Iterable[Mapping[int, Scalar]], ncols: int, one: Scalar) -> list[Vector]:
    pivots = Echelon(rows).rows
    out = []
    for c in range(ncols):
        if c in pivots:
            continue
        v: Vector = {c: one}
        for p, r in pivots.items():
            x = r.get(c)
            if x:
                v[p] = -x
        out.append(v)
    return out


def kernel(f: GradedMap) -> Subspace:
    return Subspace(f.domain, _kernel_vectors(f.rows(), f.domain.dim, f.domain.field.one))


def joint_kernel(maps: Sequence[GradedMap]) -> Subspace:
    if not maps:
        raise ValueError("joint_kernel needs at least one map")
    dom = maps[0].domain
    rows = []
    for f in maps:
        if f.domain != dom:
            raise ValueError("joint_kernel: maps have different domains")
        rows.extend(f.rows())
    return Subspace(dom, _kernel_vectors(rows, dom.dim, dom.field.one))


def image(f: GradedMap) -> Subspace:
    return Subspace(f.codomain, f.cols)


def subspace_sum(S: Subspace, T: Subspace) -> Subspace:
    if S.ambient != T.ambient:
        raise ValueError("subspaces live in different ambient spaces")
    return Subspace(S.ambient, S.vectors() + T.vectors())


def intersect(S: Subspace, T: Subspace) -> Subspace:
    if S.ambient != T.ambient:
        raise ValueError("subspaces live in different ambient spaces")
    basis = S.vectors()
    # c -> reduce_T(sum c_i s_i) is linear; its kernel parametrizes S ∩ T
    reduced = [T.reduce(s) for s in basis]
    rows: dict[int, Vector] = {}
    for i, col in enumerate(reduced):
        for k, x in col.items():
            rows.setdefault(k, {})[i] = x
    coeffs = _kernel_vectors(rows.values(), len(basis), S.ambient.field.one)
    vecs = []
    for c in coeffs:
        v: Vector = {}
        for i, x in c.items():
            axpy(v, x, basis[i])
        vecs.append(v)
    return Subspace(S.ambient, vecs)


def quotient(V: GradedSpace, S: Subspace) -> tuple[GradedSpace, GradedMap]:
    """Quotient V/S with its projection; the basis is the non-pivot coordinates."""
    if S.ambient != V:
        raise ValueError("subspace does not live in V")
    piv = set(S.pivots)
    keep = [i for i in range(V.dim) if i not in piv]
    Q = GradedSpace(V.n, [(f"[{V.names[i]}]", V.degrees[i]) for i in keep])
    pos = {i: k for k, i in enumerate(keep)}
    cols = []
    for j in range(V.dim):
        r = S.reduce(V.basis_vector(j))
        cols.append({pos[i]: x for i, x in r.items()})
    return Q, GradedMap(V, Q, cols, check=False)


def quotient_section(V: GradedSpace, S: Subspace, Q: GradedSpace) -> GradedMap:
    """Canonical lift Q -> V sending each class to its non-pivot representative."""
    piv = set(S.pivots)
    keep = [i for i in range(V.dim) if i not in piv]
    one = V.field.one
    return GradedMap(Q, V, [{i: one} for i in keep], check=False)


def solve(f: GradedMap, y: Mapping[int, Scalar]) -> Vector | None:
    """Some x with f(x) = y, or None if y is not in the image."""
    aug = f.domain.dim
    rows = f.rows()
    for i, x in y.items():
        rows[i][aug] = x
    ech = Echelon(rows)
    if aug in ech.rows:
        return None
    x: Vector = {}
    for p, r in ech.rows.items():
        c = r.get(aug)
        if c:
            x[p] = c
    return x


def inverse_map(f: GradedMap) -> GradedMap:
    """Two-sided inverse of a bijective map; raises ValueError otherwise."""
    if f.domain.dim != f.codomain.dim:
        raise ValueError("map is not square")
    cols = []
    for i in range(f.codomain.dim):
        x = solve(f, f.codomain.basis_vector(i))
        if x is None:
            raise ValueError("map is not invertible")
        cols.append(x)
    g = GradedMap(f.codomain, f.domain, cols, -f.shift)
    if not (f @ g == GradedMap.identity(f.codomain)):
        raise ValueError("map is not invertible")
    return g
