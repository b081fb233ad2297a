from __future__ import annotations

import pytest

import oracle as o
from braided_gauge.anyonic import (
    CompositeModel,
    ModelError,
    check_base_algebra,
    coregular_report,
    truncated_line,
)
from braided_gauge.graded_linear import GradedMap
from braided_gauge.modelfile import parse_model

F3 = o.F3

# upper triangular 2x2 matrices: e11, e12, e22 with e11 e12 = e12 = e12 e22
NONCOMMUTATIVE = """\
modulus 3
algebra N
  basis 1:0 e:0 f:0
  unit 1
  mul e e -> e
  mul e f -> f
"""


def test_truncated_line():
    A = truncated_line("y", degree=2, order=2, n=4)
    assert A.space.names == ("1", "y")
    assert A.space.degrees == (0, 2)
    assert A.mul(A.element("y"), A.element("y")) == {}


def test_parameter_round_trips(anyonic, rng):
    for a in o.draws(rng, 4, 10):
        assert anyonic.field_params(anyonic.gauge_field(*a)) == tuple(F3.coerce(x) for x in a)
    for c in o.draws(rng, 2, 5):
        assert anyonic.gauge_params(anyonic.gauge(*c)) == tuple(F3.coerce(x) for x in c)
    for s in o.draws(rng, 3, 5):
        assert anyonic.section_params(anyonic.section(*s)) == tuple(F3.coerce(x) for x in s)


def test_parameter_extraction_rejects_foreign_maps(anyonic):
    A = anyonic.gauge_field(0, 0, 1, 0)
    bad = GradedMap(A.domain, A.codomain, [{}, A.cols[2], {}], check=False)
    with pytest.raises(ModelError):
        anyonic.field_params(bad)
    g = anyonic.gauge(1, 1).scale(2)
    with pytest.raises(ModelError, match="1 to 1"):
        anyonic.gauge_params(g)


def test_space_dimensions(anyonic):
    assert anyonic.gauge_field_space_dim() == 4
    assert anyonic.gauge_group_dim() == 2


def test_flat_family_and_canonical_gauge(anyonic):
    L = anyonic.local
    for a1, b1 in ((0, 0), (1, 0), (2, -3), (F3.q, 1)):
        params = anyonic.flat_family(a1, b1)
        assert anyonic.is_flat_params(*params)
        A = anyonic.gauge_field(*params)
        assert L.curvature(A).is_zero()
        Ag, _ = anyonic.gauge_canonical_form(A)
        assert Ag.is_zero()
    assert not anyonic.is_flat_params(1, 0, 0, 0)
    Ag, g = anyonic.gauge_canonical_form(anyonic.gauge_field(1, 2, 3, 4))
    a1, _, b1, _ = anyonic.field_params(Ag)
    assert a1 == b1 == F3.zero
    assert L.transform_field(anyonic.gauge_field(1, 2, 3, 4), g) == Ag


def test_coregular_report_flags_the_discrepancy(anyonic):
    rep = coregular_report(anyonic.hopf)
    assert rep.ok
    assert "DISCREPANCY" in str(rep)


def test_base_algebra_must_be_even_and_commutative():
    assert check_base_algebra(truncated_line("x", degree=0, order=2)).ok
    graded = truncated_line("x", degree=1, order=2)
    assert check_base_algebra(graded).failed_names() == "degree 0"
    with pytest.raises(ModelError, match="degree 0"):
        CompositeModel(graded)
    noncomm = parse_model(NONCOMMUTATIVE).algebras["N"]
    assert check_base_algebra(noncomm).failed_names() == "commutative"
    with pytest.raises(ModelError, match="commutative"):
        CompositeModel(noncomm)


def test_composite_assemble_decompose(composite):
    cm = composite
    N = cm.N
    x = N.element("x")
    one = cm.one_n()
    parts = (cm.dN(x), {}, cm.tens(x, one), cm.tens(one, x), cm.tens(x, x), cm.tens(one, one))
    A = cm.assemble(*parts)
    assert cm.decompose(A) == parts
    stray = GradedMap(A.domain, A.codomain, [{}, cm.embed(one, "theta", "theta"), {}], check=False)
    with pytest.raises(ModelError, match="splitting"):
        cm.decompose(A + stray)


def test_composite_flat_fields_gauge_to_zero(composite):
    cm = composite
    x, one = cm.N.element("x"), cm.one_n()
    for a, b in ((x, {}), (one, x), ({k: F3.coerce(2) * v for k, v in x.items()}, one)):
        params = cm.flat_family(a, b)
        A = cm.assemble(*params)
        assert cm.local.curvature(A).is_zero()
        c1, c2 = cm.flat_gauge(a, b)
        assert cm.local.transform_field(A, cm.gauge(c1, c2)).is_zero()
        assert all(not v for v in cm.gauge_law(params, c1, c2))
