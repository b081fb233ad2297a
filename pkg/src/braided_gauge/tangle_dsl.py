"""A one-line syntax for string diagrams, evaluated to graded matrices.

Grammar::

    expr := seq
    seq  := ten ('.' ten)*
    ten  := atom ('*' atom)*
    atom := NAME | 'id[' obj ']' | 'psi[' obj ',' obj ']' | 'psinv[' obj ',' obj ']' | '(' expr ')'
    obj  := NAME ('*' NAME)*

``f . g`` applies g first (algebraic order).  Reading a diagram from top to
bottom therefore corresponds to reading the text from right to left, and
``*`` places diagrams side by side.  The object ``I`` is the tensor unit.

Identity files hold lines ``check: <expr> == <expr>``; ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

from .graded_linear import GradedMap, GradedSpace, braiding, tensor, tensor_map, unit_space
from .report import Report

UNIT = "I"


class TangleSyntaxError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


class TangleTypeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# syntax tree


@dataclass(frozen=True)
class Id:
    obj: tuple[str, ...]


@dataclass(frozen=True)
class Gen:
    name: str


@dataclass(frozen=True)
class Psi:
    left: tuple[str, ...]
    right: tuple[str, ...]


@dataclass(frozen=True)
class PsiInv:
    left: tuple[str, ...]
    right: tuple[str, ...]


@dataclass(frozen=True)
class Tensor:
    items: tuple["Expr", ...]


@dataclass(frozen=True)
class Compose:
    items: tuple["Expr", ...]  # leftmost is applied last


Expr = Union[Id, Gen, Psi, PsiInv, Tensor, Compose]


def _obj_text(obj: tuple[str, ...]) -> str:
    return "*".join(obj) if obj else UNIT


def to_text(e: Expr) -> str:
    """Canonical print; parse(to_text(e)) == e."""
    if isinstance(e, Id):
        return f"id[{_obj_text(e.obj)}]"
    if isinstance(e, Gen):
        return e.name
    if isinstance(e, Psi):
        return f"psi[{_obj_text(e.left)},{_obj_text(e.right)}]"
    if isinstance(e, PsiInv):
        return f"psinv[{_obj_text(e.left)},{_obj_text(e.right)}]"
    if isinstance(e, Tensor):
        return " * ".join(f"({to_text(x)})" if isinstance(x, (Compose, Tensor)) else to_text(x)
                          for x in e.items)
    return " . ".join(f"({to_text(x)})" if isinstance(x, Compose) else to_text(x)
                      for x in e.items)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<kw>id\[|psi\[|psinv\[)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
                    r"|(?P<sym>[.*(),\]]))")


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str, line: int, col0: int) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise TangleSyntaxError(f"unexpected character {text[pos]!r}", line, col0 + pos)
        start = m.start(m.lastgroup)
        toks.append(_Tok(m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, line: int = 1, col0: int = 1):
        self.toks = _tokenize(text, line, col0)
        self.i = 0
        self.line = line
        self.col0 = col0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        return TangleSyntaxError(msg, self.line, self.col0 + tok.pos)

    def take(self, text: str) -> _Tok:
        tok = self.peek()
        if tok.text != text:
            found = tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        self.i += 1
        return tok

    def expr(self) -> Expr:
        items = [self.ten()]
        while self.peek().text == ".":
            self.i += 1
            items.append(self.ten())
        return items[0] if len(items) == 1 else Compose(tuple(items))

    def ten(self) -> Expr:
        items = [self.atom()]
        while self.peek().text == "*":
            self.i += 1
            items.append(self.atom())
        return items[0] if len(items) == 1 else Tensor(tuple(items))

    def atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "name":
            self.i += 1
            return Gen(tok.text)
        if tok.text == "id[":
            self.i += 1
            obj = self.obj()
            self.take("]")
            return Id(obj)
        if tok.text in ("psi[", "psinv["):
            self.i += 1
            left = self.obj()
            self.take(",")
            right = self.obj()
            self.take("]")
            return Psi(left, right) if tok.text == "psi[" else PsiInv(left, right)
        if tok.text == "(":
            self.i += 1
            e = self.expr()
            self.take(")")
            return e
        found = tok.text or "end of input"
        raise self.error(f"expected a morphism, found {found!r}")

    def obj(self) -> tuple[str, ...]:
        names = [self.name()]
        while self.peek().text == "*":
            self.i += 1
            names.append(self.name())
        return tuple(n for n in names if n != UNIT)

    def name(self) -> str:
        tok = self.peek()
        if tok.kind != "name":
            found = tok.text or "end of input"
            raise self.error(f"expected an object name, found {found!r}")
        self.i += 1
        return tok.text

    def finish(self, e: Expr) -> Expr:
        if self.peek().kind != "end":
            raise self.error(f"unexpected {self.peek().text!r}")
        return e


def parse(text: str, line: int = 1, col: int = 1) -> Expr:
    p = _Parser(text, line, col)
    return p.finish(p.expr())


# ---------------------------------------------------------------------------
# environments, typing and evaluation


@dataclass
class Env:
    """Named objects and named degree-0 morphisms with their wire types."""

    n: int
    objects: dict[str, GradedSpace] = field(default_factory=dict)
    morphisms: dict[str, tuple[GradedMap, tuple[str, ...], tuple[str, ...]]] = field(
        default_factory=dict)

    def add_object(self, name: str, space: GradedSpace) -> None:
        if name in self.objects or name == UNIT:
            raise ValueError(f"object {name!r} already defined")
        if space.n != self.n:
            raise ValueError("modulus mismatch")
        self.objects[name] = space

    def add_morphism(self, name: str, f: GradedMap, dom: Sequence[str], cod: Sequence[str]) -> None:
        if name in self.morphisms:
            raise ValueError(f"morphism {name!r} already defined")
        if f.shift:
            raise ValueError(f"morphism {name!r} is not of degree 0")
        dom = tuple(x for x in dom if x != UNIT)
        cod = tuple(x for x in cod if x != UNIT)
        if f.domain != self.space(dom) or f.codomain != self.space(cod):
            raise ValueError(f"morphism {name!r} does not match its declared wire types")
        self.morphisms[name] = (f, dom, cod)

    def space(self, obj: Sequence[str]) -> GradedSpace:
        for x in obj:
            if x not in self.objects:
                raise TangleTypeError(f"unbound object {x!r}")
        if not obj:
            return unit_space(self.n)
        return tensor(*(self.objects[x] for x in obj))


Wires = tuple[str, ...]


def typecheck(e: Expr, env: Env) -> tuple[Wires, Wires]:
    if isinstance(e, Id):
        env.space(e.obj)
        return e.obj, e.obj
    if isinstance(e, Gen):
        if e.name not in env.morphisms:
            raise TangleTypeError(f"unbound morphism {e.name!r}")
        _, dom, cod = env.morphisms[e.name]
        return dom, cod
    if isinstance(e, (Psi, PsiInv)):
        env.space(e.left)
        env.space(e.right)
        return e.left + e.right, e.right + e.left
    if isinstance(e, Tensor):
        dom: Wires = ()
        cod: Wires = ()
        for x in e.items:
            d, c = typecheck(x, env)
            dom, cod = dom + d, cod + c
        return dom, cod
    # composition: the rightmost stage is applied first
    types = [typecheck(x, env) for x in e.items]
    for k in range(len(types) - 1, 0, -1):
        after, before = types[k - 1], types[k]
        if before[1] != after[0]:
            raise TangleTypeError(
                f"wire mismatch at stage {len(types) - k}: {to_text(e.items[k])} gives "
                f"{_obj_text(before[1])} but {to_text(e.items[k - 1])} expects {_obj_text(after[0])}")
    return types[-1][0], types[0][1]


def evaluate(e: Expr, env: Env) -> GradedMap:
    typecheck(e, env)
    return _eval(e, env)


def _eval(e: Expr, env: Env) -> GradedMap:
    if isinstance(e, Id):
        return GradedMap.identity(env.space(e.obj))
    if isinstance(e, Gen):
        return env.morphisms[e.name][0]
    if isinstance(e, Psi):
        return braiding(env.space(e.left), env.space(e.right))
    if isinstance(e, PsiInv):
        # inverse of psi[right,left], a map left*right -> right*left
        return braiding(env.space(e.left), env.space(e.right), inverse=True)
    if isinstance(e, Tensor):
        return tensor_map(*(_eval(x, env) for x in e.items))
    out = _eval(e.items[-1], env)
    for x in reversed(e.items[:-1]):
        out = _eval(x, env) @ out
    return out


@dataclass
class IdentityResult:
    ok: bool
    witness: str = ""
    lhs: str = ""
    rhs: str = ""

    def describe(self) -> str:
        if self.ok:
            return "holds"
        return f"fails on {self.witness}: {self.lhs} != {self.rhs}"


def _pretty(name: str) -> str:
    return (name or "1").replace(".", "⊗")


def check_identity(lhs: Expr, rhs: Expr, env: Env) -> IdentityResult:
    tl, tr = typecheck(lhs, env), typecheck(rhs, env)
    if tl != tr:
        raise TangleTypeError(
            f"sides have different types: {_obj_text(tl[0])} -> {_obj_text(tl[1])} vs "
            f"{_obj_text(tr[0])} -> {_obj_text(tr[1])}")
    f, g = _eval(lhs, env), _eval(rhs, env)
    j = f.first_difference(g)
    if j is None:
        return IdentityResult(True)
    from .graded_linear import format_vector
    cod = f.codomain
    return IdentityResult(False, _pretty(f.domain.names[j]),
                          _pretty(format_vector(cod, f.cols[j])),
                          _pretty(format_vector(cod, g.cols[j])))


# ---------------------------------------------------------------------------
# identity files


@dataclass(frozen=True)
class IdentityLine:
    line: int
    text: str
    lhs: Expr
    rhs: Expr


def parse_identity_file(text: str) -> list[IdentityLine]:
    out = []
    for k, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        m = re.match(r"\s*check\s*:", body)
        if m is None:
            col = len(body) - len(body.lstrip()) + 1
            raise TangleSyntaxError("expected 'check:'", k, col)
        rest = body[m.end():]
        if rest.count("==") != 1:
            raise TangleSyntaxError("expected exactly one '=='", k, m.end() + 1)
        left, right = rest.split("==")
        c1 = m.end() + 1
        c2 = c1 + len(left) + 2
        out.append(IdentityLine(k, body.strip(), parse(left, k, c1), parse(right, k, c2)))
    return out


def run_identity_file(text: str, env: Env, title: str = "tangle identities") -> Report:
    """Check every identity; syntax and type errors propagate."""
    rep = Report(title)
    for item in parse_identity_file(text):
        try:
            res = check_identity(item.lhs, item.rhs, env)
        except TangleTypeError as exc:
            raise TangleTypeError(f"line {item.line}: {exc}") from None
        name = f"line {item.line}: {to_text(item.lhs)} == {to_text(item.rhs)}"
        rep.add(name, res.ok, "" if res.ok else f"witness {res.witness}: {res.lhs} != {res.rhs}")
    return rep


def standard_env(algebras: Mapping[str, object] = (), hopfs: Mapping[str, object] = (),
                 coactions: Mapping[str, object] = (), maps: Mapping[str, GradedMap] = (),
                 n: int = 3) -> Env:
    """Environment exposing structure maps under conventional names.

    Algebra X gives mul_X and eta_X; a Hopf algebra X also comul_X, eps_X, S_X
    and Sinv_X.  With a single Hopf algebra its maps are also bound without the
    suffix.  A coaction named r on X by H is bound as r : X -> X*H.
    """
    env = Env(n)
    algebras = dict(algebras)
    hopfs = dict(hopfs)
    for name, hopf in hopfs.items():
        algebras.setdefault(name, hopf.algebra)
    for name, A in algebras.items():
        env.add_object(name, A.space)
    for name, A in algebras.items():
        env.add_morphism(f"mul_{name}", A.mult, (name, name), (name,))
        env.add_morphism(f"eta_{name}", A.eta(), (), (name,))
    for name, H in hopfs.items():
        env.add_morphism(f"comul_{name}", H.comult, (name,), (name, name))
        env.add_morphism(f"eps_{name}", H.counit, (name,), ())
        env.add_morphism(f"S_{name}", H.antipode, (name,), (name,))
        if H.antipode_inverse is not None:
            env.add_morphism(f"Sinv_{name}", H.antipode_inverse, (name,), (name,))
    if len(hopfs) == 1:
        (name, H), = hopfs.items()
        for short in ("mul", "eta", "comul", "eps", "S", "Sinv"):
            key = f"{short}_{name}"
            if key in env.morphisms and short not in env.morphisms:
                f, dom, cod = env.morphisms[key]
                env.morphisms[short] = (f, dom, cod)
    for cname, (carrier, hname, c) in dict(coactions).items():
        env.add_morphism(cname, c.rho, (carrier,), (carrier, hname))
    for mname, (f, dom, cod) in dict(maps).items():
        env.add_morphism(mname, f, dom, cod)
    return env


__all__ = [
    "Compose", "Env", "Expr", "Gen", "Id", "IdentityLine", "IdentityResult", "Psi", "PsiInv",
    "Tensor", "TangleSyntaxError", "TangleTypeError", "UNIT", "check_identity", "evaluate",
    "parse", "parse_identity_file", "run_identity_file", "standard_env", "to_text", "typecheck",
]
