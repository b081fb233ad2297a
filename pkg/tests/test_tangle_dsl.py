from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braided_gauge.anyonic import anyonic_hopf, truncated_line
from braided_gauge.graded_linear import GradedMap
from braided_gauge.modelfile import data_path, load_model
from braided_gauge.tangle_dsl import (
    Compose,
    Gen,
    Id,
    Psi,
    PsiInv,
    TangleSyntaxError,
    TangleTypeError,
    Tensor,
    check_identity,
    evaluate,
    parse,
    parse_identity_file,
    run_identity_file,
    standard_env,
    to_text,
    typecheck,
)


@pytest.fixture(scope="module")
def env():
    return standard_env(hopfs={"B": anyonic_hopf()},
                        algebras={"M": truncated_line("theta", name="M"),
                                  "W": truncated_line("w", degree=2, order=2)})


def test_parse_examples():
    assert parse("mul . (id[B] * mul)") == Compose((Gen("mul"), Tensor((Id(("B",)), Gen("mul")))))
    assert parse("psi[B,B]") == Psi(("B",), ("B",))
    assert parse("psinv[B*M, I]") == PsiInv(("B", "M"), ())
    assert parse("(mul)") == Gen("mul")


@pytest.mark.parametrize("text,col", [("mul . (id[B] * mul", 19), ("mul . . mul", 7),
                                       ("psi[B B]", 7), ("id[B] $", 7), ("", 1)])
def test_syntax_errors_have_positions(text, col):
    with pytest.raises(TangleSyntaxError) as err:
        parse(text)
    assert err.value.line == 1
    assert err.value.col == col


def test_typecheck_examples(env):
    assert typecheck(parse("mul . comul"), env) == (("B",), ("B",))
    with pytest.raises(TangleTypeError, match="stage 1"):
        typecheck(parse("mul . (comul * id[B])"), env)
    hexagon_l = parse("psi[M*B,W]")
    hexagon_r = parse("(psi[M,W] * id[B]) . (id[M] * psi[B,W])")
    assert typecheck(hexagon_l, env) == typecheck(hexagon_r, env) == (("M", "B", "W"), ("W", "M", "B"))
    assert check_identity(hexagon_l, hexagon_r, env).ok
    with pytest.raises(TangleTypeError, match="unbound"):
        typecheck(parse("frobnicate"), env)


def test_evaluation_examples(env):
    assert check_identity(parse("mul . (S * id[B]) . comul"), parse("eta . eps"), env).ok
    assert check_identity(parse("id[B] . id[B]"), parse("id[B]"), env).ok
    yb = check_identity(parse("(psi[B,B] * id[B]) . (id[B] * psi[B,B]) . (psi[B,B] * id[B])"),
                        parse("(id[B] * psi[B,B]) . (psi[B,B] * id[B]) . (id[B] * psi[B,B])"), env)
    assert yb.ok
    nat = check_identity(parse("psi[B,M] . (mul * id[M])"),
                         parse("(id[M] * mul) . (psi[B,M] * id[B]) . (id[B] * psi[B,M])"), env)
    assert nat.ok


def test_psi_squared_is_refuted(env):
    res = check_identity(parse("psi[B,B] . psi[B,B]"), parse("id[B*B]"), env)
    assert not res.ok
    assert res.witness == "xi⊗xi"
    assert res.describe().startswith("fails on xi⊗xi")


def test_sides_must_have_the_same_type(env):
    with pytest.raises(TangleTypeError, match="different types"):
        check_identity(parse("mul"), parse("id[B]"), env)


def test_unit_object_is_strict(env):
    assert evaluate(parse("eps * id[B]"), env) == evaluate(parse("id[I] * eps * id[B]"), env)
    assert check_identity(parse("mul . (eta * id[B])"), parse("id[B]"), env).ok


@st.composite
def endo_exprs(draw, depth=3):
    """Random well-typed endomorphisms of B."""
    if depth == 0 or draw(st.booleans()):
        return draw(st.sampled_from(["id[B]", "S", "Sinv", "eta . eps", "mul . comul"]))
    kind = draw(st.sampled_from(["compose", "pair"]))
    if kind == "compose":
        return f"({draw(endo_exprs(depth=depth - 1))}) . ({draw(endo_exprs(depth=depth - 1))})"
    return (f"mul . (({draw(endo_exprs(depth=depth - 1))}) * ({draw(endo_exprs(depth=depth - 1))}))"
            f" . psi[B,B] . comul")


@settings(max_examples=60, deadline=None)
@given(endo_exprs(), endo_exprs())
def test_evaluation_is_compositional(env, a, b):
    composite = evaluate(parse(f"({a}) . ({b})"), env)
    assert composite == evaluate(parse(a), env) @ evaluate(parse(b), env)
    e = parse(a)
    assert parse(to_text(e)) == e


def test_print_parse_round_trip_on_bundled_files():
    for name in ("hopf.tgl", "yangbaxter.tgl", "comodule.tgl"):
        for item in parse_identity_file(data_path(name).read_text()):
            assert parse(to_text(item.lhs)) == item.lhs
            assert parse(to_text(item.rhs)) == item.rhs


def test_bundled_identity_files_pass():
    model = load_model(data_path("anyonic.model"))
    env = standard_env(model.algebras, model.hopfs, model.coactions, model.maps, model.n)
    for name in ("hopf.tgl", "yangbaxter.tgl", "comodule.tgl"):
        rep = run_identity_file(data_path(name).read_text(), env, name)
        assert rep.ok, str(rep)


def test_identity_file_errors(env):
    assert run_identity_file("", env).checks == []
    assert run_identity_file("# only a comment\n\n", env).checks == []
    with pytest.raises(TangleSyntaxError) as err:
        parse_identity_file("check: mul == mul\nmul == mul\n")
    assert err.value.line == 2
    with pytest.raises(TangleSyntaxError) as err:
        parse_identity_file("check: mul == mul == mul")
    with pytest.raises(TangleTypeError, match="line 2"):
        run_identity_file("check: id[B] == id[B]\ncheck: mul . mul == mul\n", env)


def test_shifted_maps_are_not_admitted(env):
    B = anyonic_hopf().space
    beta = GradedMap(B, B, [{}, {0: 1}, {1: 1}], shift=-1)
    with pytest.raises(ValueError, match="degree 0"):
        env.add_morphism("beta", beta, ("B",), ("B",))

