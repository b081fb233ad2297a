"""Line-oriented model files: graded algebras, Hopf data, coactions and maps.

Example::

    modulus 3
    algebra B
      basis 1:0 xi:1 xi2:2
      unit 1
      mul xi xi -> xi2
    coalgebra B
      comul 1 -> 1.1
      comul xi -> xi.1 + 1.xi
      comul xi2 -> xi2.1 + (1+q) xi.xi + 1.xi2
      counit 1 -> 1
      antipode 1 -> 1
      antipode xi -> -xi
      antipode xi2 -> q xi2
    algebra P = M * B
    coaction rho on P by B
      send theta -> theta.1
    map phi : B -> P
      send xi -> xi

Structure constants that are not listed are zero, except products with the
unit.  Compound coefficients are written in parentheses: ``(1+q) xi.xi``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .braided_algebra import AlgebraStructure, BraidedHopf, Coaction, braided_tensor_algebra
from .cyclotomic import ScalarSyntaxError, field as cyclo_field
from .graded_linear import GradedMap, GradedSpace, Vector, axpy, tensor, unit_space

UNIT_NAMES = ("k", "I")


class ModelFileError(ValueError):
    def __init__(self, message: str, line: int, source: str = ""):
        where = f"{source}:{line}" if source else f"line {line}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.message = message


@dataclass
class _Block:
    kind: str
    name: str
    line: int
    header: list[str]
    body: list[tuple[int, str]] = field(default_factory=list)


@dataclass
class Model:
    n: int = 3
    spaces: dict[str, GradedSpace] = field(default_factory=dict)
    algebras: dict[str, AlgebraStructure] = field(default_factory=dict)
    hopfs: dict[str, BraidedHopf] = field(default_factory=dict)
    coactions: dict[str, tuple[str, str, Coaction]] = field(default_factory=dict)
    maps: dict[str, tuple[GradedMap, tuple[str, ...], tuple[str, ...]]] = field(
        default_factory=dict)

    def space(self, name: str) -> GradedSpace:
        return self.spaces[name]


# ---------------------------------------------------------------------------
# vectors


def _split_terms(text: str) -> list[str]:
    """Split at top-level '+' and '-', keeping the sign with each term."""
    terms, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-" and cur.strip():
            terms.append(cur)
            cur = ""
        cur += ch
    if cur.strip():
        terms.append(cur)
    return terms


def parse_vector(text: str, space: GradedSpace, n: int = 3) -> Vector:
    """Parse ``(1+q) xi.xi - 2 xi2.1 + 1.xi2`` against the basis names of ``space``."""
    fld = cyclo_field(n)
    text = text.strip()
    if space.is_unit:
        return {0: fld.parse(text)} if fld.parse(text) else {}
    if text == "0":
        return {}
    out: Vector = {}
    for raw in _split_terms(text):
        t = raw.strip()
        sign = 1
        if t[0] in "+-":
            sign = -1 if t[0] == "-" else 1
            t = t[1:].strip()
        if t.startswith("("):
            close = t.find(")")
            if close < 0:
                raise ValueError(f"unbalanced parenthesis in {raw.strip()!r}")
            coeff = fld.parse(t[1:close])
            name = t[close + 1:].strip()
        else:
            parts = t.split()
            if len(parts) == 1:
                coeff, name = fld.one, parts[0]
            elif len(parts) == 2:
                coeff, name = fld.parse(parts[0]), parts[1]
            else:
                raise ValueError(f"cannot read term {raw.strip()!r}")
        if name not in space.names:
            raise ValueError(f"unknown basis element {name!r}")
        axpy(out, coeff * sign, {space.index(name): fld.one})
    return out


def _check_degree(v: Vector, space: GradedSpace, degree: int, what: str) -> None:
    for i in v:
        if space.degree(i) != degree % space.n:
            raise ValueError(f"{what} is not homogeneous: {space.names[i] or '1'} has degree "
                             f"{space.degree(i)}, expected {degree % space.n}")


# ---------------------------------------------------------------------------
# parsing


def _modulus(words: list[str], k: int) -> int:
    if len(words) != 2 or not words[1].isdigit() or int(words[1]) < 2:
        raise ModelFileError("expected 'modulus N' with N >= 2", k)
    return int(words[1])


def _blocks(text: str) -> tuple[int, list[_Block]]:
    n: int | None = None
    blocks: list[_Block] = []
    for k, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        words = line.split()
        if line[0].isspace():
            if not blocks:
                raise ModelFileError("indented line outside any block", k)
            if words[0] == "modulus":
                # also accepted inside the first block; later blocks may only repeat it
                m = _modulus(words, k)
                if n is None and len(blocks) == 1:
                    n = m
                elif m != n:
                    raise ModelFileError("the modulus must be set once, before or in the first block", k)
                continue
            blocks[-1].body.append((k, line.strip()))
            continue
        if words[0] == "modulus":
            if blocks:
                raise ModelFileError("'modulus N' must come first", k)
            n = _modulus(words, k)
            continue
        if words[0] not in ("algebra", "space", "coalgebra", "coaction", "map") or len(words) < 2:
            raise ModelFileError(f"unknown directive {words[0]!r}", k)
        blocks.append(_Block(words[0], words[1], k, words[2:]))
    return (3 if n is None else n), blocks


def _arrow(body: str, k: int) -> tuple[str, str]:
    if "->" not in body:
        raise ModelFileError("expected '->'", k)
    left, right = body.split("->", 1)
    return left.strip(), right.strip()


def parse_model(text: str, source: str = "") -> Model:
    try:
        return _parse_model(text, source)
    except ModelFileError as exc:
        if source and not str(exc).startswith(source):
            raise ModelFileError(exc.message, exc.line, source) from None
        raise


def _parse_model(text: str, source: str) -> Model:
    n, blocks = _blocks(text)
    model = Model(n)
    for blk in blocks:
        try:
            _apply(model, blk)
        except ModelFileError:
            raise
        except (ValueError, KeyError, ScalarSyntaxError) as exc:
            raise ModelFileError(str(exc), blk.line) from None
    return model


def _fail(k: int, exc: Exception) -> ModelFileError:
    return ModelFileError(str(exc), k)


def _basis(blk: _Block, n: int) -> tuple[GradedSpace, list[tuple[int, str]]]:
    rest = []
    space = None
    for k, body in blk.body:
        words = body.split()
        if words[0] == "basis":
            items = []
            for w in words[1:]:
                if ":" not in w:
                    raise ModelFileError(f"basis entry {w!r} must be NAME:DEGREE", k)
                nm, deg = w.rsplit(":", 1)
                try:
                    items.append((nm, int(deg)))
                except ValueError:
                    raise ModelFileError(f"bad degree in {w!r}", k) from None
            try:
                space = GradedSpace(n, items)
            except ValueError as exc:
                raise _fail(k, exc) from None
        else:
            rest.append((k, body))
    if space is None:
        raise ModelFileError(f"{blk.kind} {blk.name} has no basis line", blk.line)
    return space, rest


def _new_name(model: Model, name: str, k: int) -> None:
    if name in model.spaces or name in UNIT_NAMES:
        raise ModelFileError(f"name {name!r} already defined", k)


def _apply(model: Model, blk: _Block) -> None:
    n = model.n
    if blk.kind in ("algebra", "space"):
        _new_name(model, blk.name, blk.line)
        if blk.kind == "algebra" and blk.header[:1] == ["="]:
            if len(blk.header) != 4 or blk.header[2] != "*":
                raise ModelFileError("expected 'algebra NAME = A * B'", blk.line)
            a, b = blk.header[1], blk.header[3]
            for x in (a, b):
                if x not in model.algebras:
                    raise ModelFileError(f"unknown algebra {x!r}", blk.line)
            if blk.body:
                raise ModelFileError("a braided tensor product takes no body", blk.body[0][0])
            A = braided_tensor_algebra(model.algebras[a], model.algebras[b], blk.name)
            model.spaces[blk.name] = A.space
            model.algebras[blk.name] = A
            return
        if blk.header:
            raise ModelFileError(f"unexpected {' '.join(blk.header)!r}", blk.line)
        space, rest = _basis(blk, n)
        if blk.kind == "space":
            if rest:
                raise ModelFileError("a space block holds only a basis line", rest[0][0])
            model.spaces[blk.name] = space
            return
        unit = None
        products: dict[tuple[str, str], Vector] = {}
        for k, body in rest:
            words = body.split()
            if words[0] == "unit":
                if len(words) != 2 or words[1] not in space.names:
                    raise ModelFileError("expected 'unit NAME' with NAME in the basis", k)
                if space.degree(space.index(words[1])) != 0:
                    raise ModelFileError("the unit must have degree 0", k)
                unit = words[1]
            elif words[0] == "mul":
                left, right = _arrow(body[3:], k)
                pair = left.split()
                if len(pair) != 2 or any(x not in space.names for x in pair):
                    raise ModelFileError("expected 'mul A B -> VECTOR' with A, B in the basis", k)
                try:
                    v = parse_vector(right, space, n)
                    deg = sum(space.degree(space.index(x)) for x in pair)
                    _check_degree(v, space, deg, f"product {pair[0]} {pair[1]}")
                except (ValueError, ScalarSyntaxError) as exc:
                    raise _fail(k, exc) from None
                products[(pair[0], pair[1])] = v
            else:
                raise ModelFileError(f"unknown algebra entry {words[0]!r}", k)
        if unit is None:
            raise ModelFileError(f"algebra {blk.name} has no unit line", blk.line)
        if any(unit in pair for pair in products):
            k = next(k for k, b in rest if b.startswith("mul") and unit in b.split()[1:3])
            raise ModelFileError("products with the unit are fixed and may not be listed", k)
        model.spaces[blk.name] = space
        model.algebras[blk.name] = AlgebraStructure.from_table(space, unit, products, blk.name)
        return

    if blk.kind == "coalgebra":
        if blk.name not in model.algebras:
            raise ModelFileError(f"coalgebra {blk.name} needs an algebra of the same name", blk.line)
        if blk.name in model.hopfs:
            raise ModelFileError(f"coalgebra {blk.name} defined twice", blk.line)
        A = model.algebras[blk.name]
        B = A.space
        BB = tensor(B, B)
        k1 = unit_space(n)
        tables = {"comul": (BB, [{} for _ in range(B.dim)]),
                  "counit": (k1, [{} for _ in range(B.dim)]),
                  "antipode": (B, [{} for _ in range(B.dim)]),
                  "antipode_inverse": (B, None)}
        for k, body in blk.body:
            words = body.split()
            if words[0] not in tables:
                raise ModelFileError(f"unknown coalgebra entry {words[0]!r}", k)
            cod, cols = tables[words[0]]
            if cols is None:
                cols = [{} for _ in range(B.dim)]
                tables[words[0]] = (cod, cols)
            left, right = _arrow(body[len(words[0]):], k)
            if left not in B.names:
                raise ModelFileError(f"unknown basis element {left!r}", k)
            j = B.index(left)
            try:
                v = parse_vector(right, cod, n)
                _check_degree(v, cod, B.degree(j), f"{words[0]} of {left}")
            except (ValueError, ScalarSyntaxError) as exc:
                raise _fail(k, exc) from None
            cols[j] = v
        maps = {key: (GradedMap(B, cod, cols) if cols is not None else None)
                for key, (cod, cols) in tables.items()}
        model.hopfs[blk.name] = BraidedHopf(A, maps["comul"], maps["counit"], maps["antipode"],
                                           maps["antipode_inverse"], name=blk.name)
        return

    if blk.kind == "coaction":
        h = blk.header
        if len(h) != 4 or h[0] != "on" or h[2] != "by":
            raise ModelFileError("expected 'coaction NAME on SPACE by HOPF'", blk.line)
        carrier, hname = h[1], h[3]
        if carrier not in model.spaces:
            raise ModelFileError(f"unknown space {carrier!r}", blk.line)
        if hname not in model.hopfs:
            raise ModelFileError(f"unknown Hopf algebra {hname!r}", blk.line)
        if blk.name in model.coactions or blk.name in model.maps:
            raise ModelFileError(f"name {blk.name!r} already defined", blk.line)
        V = model.spaces[carrier]
        H = model.hopfs[hname]
        rho = _sends(blk, V, tensor(V, H.space), n)
        model.coactions[blk.name] = (carrier, hname, Coaction(V, H, rho, blk.name))
        return

    # map NAME : A -> B
    h = blk.header
    if len(h) != 4 or h[0] != ":" or h[2] != "->":
        raise ModelFileError("expected 'map NAME : SOURCE -> TARGET'", blk.line)
    if blk.name in model.coactions or blk.name in model.maps:
        raise ModelFileError(f"name {blk.name!r} already defined", blk.line)
    dom, cod = _objects(model, h[1], blk.line), _objects(model, h[3], blk.line)
    f = _sends(blk, _tensor_of(model, dom), _tensor_of(model, cod), n)
    model.maps[blk.name] = (f, dom, cod)


def _objects(model: Model, text: str, k: int) -> tuple[str, ...]:
    out = []
    for x in text.split("*"):
        if x in UNIT_NAMES:
            continue
        if x not in model.spaces:
            raise ModelFileError(f"unknown space {x!r}", k)
        out.append(x)
    return tuple(out)


def _tensor_of(model: Model, objs: tuple[str, ...]) -> GradedSpace:
    if not objs:
        return unit_space(model.n)
    return tensor(*(model.spaces[x] for x in objs))


def _sends(blk: _Block, V: GradedSpace, W: GradedSpace, n: int) -> GradedMap:
    cols: list[Vector] = [{} for _ in range(V.dim)]
    for k, body in blk.body:
        if not body.startswith("send"):
            raise ModelFileError("expected 'send BASIS -> VECTOR'", k)
        left, right = _arrow(body[4:], k)
        if V.is_unit and left in ("1", ""):
            j = 0
        elif left not in V.names:
            raise ModelFileError(f"unknown basis element {left!r}", k)
        else:
            j = V.index(left)
        try:
            v = parse_vector(right, W, n)
            _check_degree(v, W, V.degree(j), f"image of {left}")
        except (ValueError, ScalarSyntaxError) as exc:
            raise _fail(k, exc) from None
        cols[j] = v
    return GradedMap(V, W, cols)


def load_model(path: str | Path) -> Model:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelFileError(f"cannot read file: {exc.strerror}", 0, str(p)) from None
    return parse_model(text, str(p))


def data_path(name: str) -> Path:
    """Path of a bundled data file."""
    return Path(__file__).parent / "data" / name


__all__ = ["Model", "ModelFileError", "data_path", "load_model", "parse_model", "parse_vector"]
