"""Command-line driver: model verification, worked-model reports and tangle checks.

Exit codes are 0 (everything holds), 1 (some identity or cross-check fails)
and 2 (the input could not be read, parsed or typechecked).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from .braided_algebra import (
    NoInverseError,
    check_algebra,
    check_comodule,
    check_comodule_algebra,
    check_hopf,
    regular_coaction,
)
from .anyonic import AnyonicModel, CompositeModel, ModelError, check_base_algebra, coregular_report
from .associated import nabla, section_curvature, transform_section
from .cyclotomic import Scalar, ScalarSyntaxError, field, parse_scalar
from .gauge import (
    PrincipalBundle,
    Trivialization,
    check_connection,
    check_projection,
    connection_from_field,
    field_from_connection,
    projection_from_connection,
    trivial_connection,
)
from .graded_linear import Echelon, GradedMap, GradedSpace, Vector, format_vector, hom_basis
from .modelfile import Model, ModelFileError, data_path, load_model
from .report import Report
from .tangle_dsl import TangleSyntaxError, TangleTypeError, run_identity_file, standard_env

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

SUITES = ("algebra", "hopf", "comodule", "principal", "connection")

F3 = field(3)


class InputError(Exception):
    """Bad command-line input; reported on stderr with exit code 2."""


# ---------------------------------------------------------------------------
# parameters


def parse_params(text: str | None, allowed: Iterable[str] | None = None) -> dict[str, Scalar]:
    """``k=v,k=v`` with scalar-literal values; keys must be in ``allowed`` if given."""
    out: dict[str, Scalar] = {}
    if not text:
        return out
    allowed = None if allowed is None else set(allowed)
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, eq, value = item.partition("=")
        key = key.strip()
        if not eq or not key:
            raise InputError(f"parameter {item!r} is not of the form name=value")
        if allowed is not None and key.split("[")[0] not in allowed:
            raise InputError(f"unknown parameter {key!r}")
        if key in out:
            raise InputError(f"parameter {key!r} given twice")
        try:
            out[key] = parse_scalar(value.strip(), 3)
        except ScalarSyntaxError as exc:
            raise InputError(f"parameter {key}: {exc}") from None
    return out


def _vector_param(params: Mapping[str, Scalar], name: str, space: GradedSpace) -> Vector:
    """Collect ``name[basis]=c`` entries into a vector of ``space``."""
    v: Vector = {}
    for key, c in params.items():
        base, _, rest = key.partition("[")
        if base != name:
            continue
        if not rest.endswith("]"):
            raise InputError(f"parameter {key!r}: expected {name}[basis]=value")
        bname = rest[:-1].strip()
        if bname not in space.names:
            raise InputError(f"parameter {key!r}: no basis element {bname!r} "
                             f"(have {', '.join(space.names)})")
        if c:
            v[space.index(bname)] = c
    return v


# ---------------------------------------------------------------------------
# verify


def _guard(rep: Report, name: str, fn: Callable[[], object]):
    """Run ``fn``; a ValueError becomes a failed check instead of a crash."""
    try:
        return fn()
    except NoInverseError as exc:
        rep.add(name, False, str(exc) or "not convolution invertible")
    except ValueError as exc:
        rep.add(name, False, str(exc))
    return None


def _trivializations(model: Model) -> list[tuple[str, str, str]]:
    """(coaction, map, algebra) triples where the map goes B -> P for a coaction on P by B."""
    out = []
    for cname, (carrier, hname, _) in model.coactions.items():
        if carrier not in model.algebras:
            continue
        for mname, (_, dom, cod) in model.maps.items():
            if dom == (hname,) and cod == (carrier,):
                out.append((cname, mname, carrier))
    return out


def generic_field(local_cal, B: GradedSpace, unit_index: int) -> GradedMap:
    """Fixed generic gauge field: coefficients 1, 2, 3, ... on the monomial basis of Hom(B, Ω¹)."""
    mono = local_cal.monomials(1)
    out = GradedMap.zero(B, mono.domain)
    for k, h in enumerate(hom_basis(B, mono.domain, skip=[unit_index])):
        out = out + h.scale(F3.coerce(k + 1))
    return mono @ out


def verify_model(model: Model, suites: Sequence[str]) -> list[Report]:
    reports: list[Report] = []
    if "algebra" in suites:
        for A in model.algebras.values():
            reports.append(check_algebra(A))
    if "hopf" in suites:
        for H in model.hopfs.values():
            reports.append(check_hopf(H))
    if "comodule" in suites:
        for cname, (carrier, _, c) in model.coactions.items():
            if carrier in model.algebras:
                rep = check_comodule_algebra(model.algebras[carrier], c)
            else:
                rep = check_comodule(c)
            rep.title = f"{rep.title} ({cname})"
            reports.append(rep)
    bundles: dict[str, PrincipalBundle] = {}
    if "principal" in suites or "connection" in suites:
        for cname, (carrier, _, c) in model.coactions.items():
            if carrier in model.algebras:
                rep = Report(f"principal bundle {carrier} under {cname}")
                b = _guard(rep, "bundle structure", lambda: PrincipalBundle(model.algebras[carrier], c))
                if b is not None:
                    bundles[cname] = b
                    if "principal" in suites:
                        rep.merge(_guard(rep, "principal", b.verify_principal) or Report(""))
                if "principal" in suites:
                    reports.append(rep)
    for cname, mname, carrier in _trivializations(model):
        b = bundles.get(cname)
        if b is None:
            continue
        phi = model.maps[mname][0]
        if "principal" in suites:
            rep = Report(f"trivialization {mname} of {carrier}")
            T = _guard(rep, "Phi convolution invertible", lambda: Trivialization(b, phi))
            if T is not None:
                rep.merge(T.check())
                rep.merge(_guard(rep, "trivial bundle isomorphisms", T.check_isomorphisms)
                          or Report(""))
            reports.append(rep)
        if "connection" in suites:
            reports.extend(_connection_reports(b, phi, mname))
    return reports


def _connection_reports(b: PrincipalBundle, phi: GradedMap, mname: str) -> list[Report]:
    out = []
    rep = Report(f"connections from {mname}")
    T = _guard(rep, "Phi convolution invertible", lambda: Trivialization(b, phi))
    if T is None:
        return [rep]
    omega0 = trivial_connection(T)
    unit = min(b.hopf.algebra.unit)
    A = generic_field(b.cal_M, b.B, unit)
    omega = connection_from_field(T, A)
    for label, om in (("trivial connection", omega0), ("generic field", omega)):
        rep.merge(check_connection(b, om), prefix=f"{label}: ")
        Pi = projection_from_connection(b, om)
        rep.merge(check_projection(b, Pi), prefix=f"{label}: ")
    back = _guard(rep, "field recovered from connection", lambda: field_from_connection(T, omega))
    if back is not None:
        rep.equal("field -> connection -> field", back, A)
    out.append(rep)
    return out


def cmd_verify(args) -> tuple[int, list[str]]:
    model = load_model(args.model)
    suites = SUITES if args.suite == "all" else (args.suite,)
    reports = verify_model(model, suites)
    lines: list[str] = []
    failed = 0
    for rep in reports:
        lines.extend(rep.lines())
        failed += len(rep.failures())
    if not reports:
        lines.append(f"no structures for suite {args.suite}")
    lines.append("RESULT: PASS" if not failed else f"RESULT: FAIL ({failed} failed)")
    return (EXIT_FAIL if failed else EXIT_OK), lines


# ---------------------------------------------------------------------------
# anyonic report

ANYONIC_KEYS = ("a1", "a2", "b1", "b2", "c1", "c2", "s0", "s1", "s2")


class _Sheet:
    """Report lines plus internal cross-checks."""

    def __init__(self):
        self.lines: list[str] = []
        self.failed: list[str] = []

    def head(self, text: str) -> None:
        if self.lines:
            self.lines.append("")
        self.lines.append(f"== {text} ==")

    def say(self, text: str) -> None:
        self.lines.append(text)

    def check(self, name: str, ok: bool) -> bool:
        self.lines.append(f"[{'PASS' if ok else 'FAIL'}] {name}")
        if not ok:
            self.failed.append(name)
        return ok

    def finish(self) -> tuple[int, list[str]]:
        if self.failed:
            self.lines.append(f"RESULT: FAIL ({len(self.failed)} cross-checks failed)")
            return EXIT_FAIL, self.lines
        self.lines.append("RESULT: PASS")
        return EXIT_OK, self.lines


def _fmt_tuple(names: Sequence[str], values: Sequence[Scalar]) -> str:
    return ", ".join(f"{n} = {v}" for n, v in zip(names, values))


def _lin_parts(f: Callable[[Scalar], Sequence[Scalar]]) -> tuple[list[Scalar], bool]:
    """Linear part of a map t -> k^m known to be polynomial of degree at most 2.

    The degree bound is certified at a third point.
    """
    f0, f1, fm, f2 = f(F3.zero), f(F3.one), f(-F3.one), f(F3.coerce(2))
    half = F3.coerce(1) / F3.coerce(2)
    lin = [(a - b) * half for a, b in zip(f1, fm)]
    quad = [(a + b) * half - c for a, b, c in zip(f1, fm, f0)]
    ok = all(z == c + 2 * l + 4 * q for z, c, l, q in zip(f2, f0, lin, quad))
    return lin, ok


def anyonic_report(params: Mapping[str, Scalar]) -> tuple[int, list[str]]:
    p = {k: params.get(k, F3.zero) for k in ANYONIC_KEYS}
    m = AnyonicModel()
    cal, local = m.cal, m.local
    S = _Sheet()
    fmt1 = lambda v: cal.format_form(v, 1)  # noqa: E731
    fmt2 = lambda v: cal.format_form(v, 2)  # noqa: E731

    S.head("model")
    S.say("M = k[theta]/theta^3, B = k[xi]/xi^3, P = M * B, q^2 + q + 1 = 0")
    S.say("parameters: " + _fmt_tuple(ANYONIC_KEYS, [p[k] for k in ANYONIC_KEYS]))

    S.head("one-forms on M")
    om = cal.omega(1)
    S.say(f"dim Omega1 M = {om.dim}")
    S.say("basis: " + ", ".join(cal.monomials(1).domain.names))

    S.head("gauge field")
    S.say(f"dim gauge fields = {m.gauge_field_space_dim()}")
    S.say(f"dim gauge group = {m.gauge_group_dim()}")
    A = m.gauge_field(p["a1"], p["a2"], p["b1"], p["b2"])
    S.say(f"A(xi) = {fmt1(A.cols[1])}")
    S.say(f"A(xi2) = {fmt1(A.cols[2])}")

    S.head("curvature")
    F = local.curvature(A)
    S.say(f"F(1) = {fmt2(F.cols[0])}")
    S.say(f"F(xi) = {fmt2(F.cols[1])}")
    S.say(f"F(xi2) = {fmt2(F.cols[2])}")
    S.check("Bianchi identity dF + A*F - F*A = 0", local.bianchi_residual(A, F).is_zero())

    S.head("flatness")
    flat = F.is_zero()
    S.check("F = 0 exactly when a2 = 0 and b2 = -(1+q) a1^2",
            flat == m.is_flat_params(p["a1"], p["a2"], p["b1"], p["b2"]))
    canon, g0 = m.gauge_canonical_form(A)
    cparams = m.field_params(canon)
    reach = canon.is_zero()
    S.say(f"FLAT: {'yes' if flat else 'no'}; gauge-equivalent to zero field: "
          f"{'yes' if reach else 'no'}")
    if flat:
        S.check("flat field gauges to zero", reach)

    S.head("gauge transformation")
    g = m.gauge(p["c1"], p["c2"])
    S.say(f"gamma(xi) = {format_vector(m.bundle.M.space, g.cols[1])}, "
          f"gamma(xi2) = {format_vector(m.bundle.M.space, g.cols[2])}")
    Ag = local.transform_field(A, g)
    S.say("A^gamma: " + _fmt_tuple(("a1", "a2", "b1", "b2"), m.field_params(Ag)))
    gi = local.gauge_inverse(g)
    S.say("gamma^-1: " + _fmt_tuple(("c1", "c2"), m.gauge_params(gi)))
    gg = local.gauge_compose(g, g)
    S.say("gamma * gamma: " + _fmt_tuple(("c1", "c2"), m.gauge_params(gg)))
    S.check("F^gamma = gamma^-1 * F * gamma",
            local.curvature(Ag) == local.transform_curvature(F, g))

    S.head("canonical form")
    S.say("gamma: " + _fmt_tuple(("c1", "c2"), m.gauge_params(g0)))
    S.say("A^gamma: " + _fmt_tuple(("a1", "a2", "b1", "b2"), cparams))
    S.check("canonical form has a1 = b1 = 0", not cparams[0] and not cparams[2])

    S.head("moduli")
    zero = m.gauge_field(0, 0, 0, 0)
    cols = []
    ok_deg = True
    for c in ((1, 0), (0, 1)):
        lin, ok = _lin_parts(lambda t: m.field_params(
            local.transform_field(zero, m.gauge(t * c[0], t * c[1]))))
        cols.append(lin)
        ok_deg = ok_deg and ok
    S.check("orbit map has degree at most 2", ok_deg)
    rank = _rank2(cols)
    S.say(f"tangent to gauge orbit at 0: rank {rank}")
    S.say(f"moduli of gauge fields: {m.gauge_field_space_dim()} - {rank} = "
          f"{m.gauge_field_space_dim() - rank} dimensional")

    S.head("section")
    sigma = m.section(p["s0"], p["s1"], p["s2"])
    S.say("sigma: " + _fmt_tuple(("s0", "s1", "s2"), m.section_params(sigma)))
    ns = m.nabla(sigma, A)
    S.say(f"nabla sigma(1) = {fmt1(ns.cols[0])}")
    S.say(f"nabla sigma(xi) = {fmt1(ns.cols[1])}")
    S.say(f"nabla sigma(xi2) = {fmt1(ns.cols[2])}")
    sg = transform_section(local, m.B_R, sigma, 0, g)
    S.say("sigma^gamma: " + _fmt_tuple(("s0", "s1", "s2"), m.section_params(sg)))
    lhs = nabla(local, m.B_R, sg, 0, Ag)
    rhs = transform_section(local, m.B_R, ns, 1, g)
    S.check("nabla^gamma sigma^gamma = (nabla sigma)^gamma", lhs == rhs)
    nn = nabla(local, m.B_R, ns, 1, A)
    S.check("nabla^2 sigma = -sigma * F", nn == -section_curvature(local, m.B_R, sigma, 0, F))

    S.head("coregular comodule")
    rep = coregular_report(m.hopf)
    for line in rep.lines()[1:]:
        S.say(line)
    S.check("coaction of B on itself is the coproduct", rep.passed(rep.checks[0].name))
    return S.finish()


def _rank2(cols: Sequence[Sequence[Scalar]]) -> int:
    ech = Echelon()
    for c in cols:
        ech.add({i: x for i, x in enumerate(c) if x})
    return len(ech.rows)


# ---------------------------------------------------------------------------
# composite report

COMPOSITE_KEYS = ("A1", "A2", "a1", "a2", "b1", "b2", "c1", "c2", "s0", "s1", "s2", "a", "b")
COMPONENTS = ("A1", "A2", "a1", "a2", "b1", "b2")


def _base_algebra(path: str | None):
    model = load_model(path or data_path("N.model"))
    if not model.algebras:
        raise InputError("model file defines no algebra")
    N = model.algebras.get("N") or next(iter(model.algebras.values()))
    rep = check_base_algebra(N)
    if not rep.ok:
        raise InputError(f"base algebra {N.name}: must be {rep.failed_names()}")
    return N


def composite_report(params: Mapping[str, Scalar], model_path: str | None) -> tuple[int, list[str]]:
    N = _base_algebra(model_path)
    c = CompositeModel(N)
    S = _Sheet()
    NN, NS = c.NN, N.space
    omN = c.calN.omega(1)
    vals = {}
    for k in COMPOSITE_KEYS:
        vals[k] = _vector_param(params, k, NS if k in ("c1", "c2", "s0", "s1", "s2", "a", "b")
                                else NN)
    for k in ("A1", "A2"):
        if not omN.contains(vals[k]):
            raise InputError(f"{k} must be a one-form on {N.name} (its product must vanish)")
    fN = lambda v: format_vector(NS, v)  # noqa: E731
    fNN = lambda v: format_vector(NN, v)  # noqa: E731

    S.head("model")
    S.say(f"M = {N.name} * k[theta]/theta^3, B = k[xi]/xi^3; "
          f"{N.name} basis {' '.join(NS.names)}")
    S.say(f"dim Omega1 {N.name} = {omN.dim}")
    params_shown = [f"{k} = {fNN(vals[k])}" for k in COMPONENTS]
    params_shown += [f"{k} = {fN(vals[k])}" for k in ("c1", "c2", "s0", "s1", "s2", "a", "b")]
    S.say("parameters: " + "; ".join(params_shown))

    S.head("gauge transformation law")
    parts = tuple(vals[k] for k in COMPONENTS)
    A = c.assemble(*parts)
    g = c.gauge(vals["c1"], vals["c2"])
    Ag = c.local.transform_field(A, g)
    got = c.decompose(Ag)
    law = c.gauge_law(parts, vals["c1"], vals["c2"])
    for name, x, y in zip(COMPONENTS, got, law):
        S.say(f"{name}^gamma = {fNN(x)}")
        S.check(f"{name}^gamma matches the component law", x == y)

    S.head("curvature")
    F = c.local.curvature(A)
    S.say(f"F = 0: {'yes' if F.is_zero() else 'no'}")
    S.check("Bianchi identity", c.local.bianchi_residual(A, F).is_zero())

    S.head("flat family")
    flat = c.flat_family(vals["a"], vals["b"])
    for name, x in zip(COMPONENTS, flat):
        S.say(f"{name} = {fNN(x)}")
    Af = c.assemble(*flat)
    Ff = c.local.curvature(Af)
    S.check("curvature of the flat family vanishes", Ff.is_zero())
    ga = c.gauge(*c.flat_gauge(vals["a"], vals["b"]))
    S.check("gamma = (-a, -b) takes it to the zero field",
            c.local.transform_field(Af, ga).is_zero())

    S.head("section")
    B_R = regular_coaction(c.hopf)
    sigma = c.section(vals["s0"], vals["s1"], vals["s2"])
    ns = nabla(c.local, B_R, sigma, 0, A)
    sg = transform_section(c.local, B_R, sigma, 0, g)
    S.check("nabla^gamma sigma^gamma = (nabla sigma)^gamma",
            nabla(c.local, B_R, sg, 0, Ag) == transform_section(c.local, B_R, ns, 1, g))
    S.check("nabla^2 sigma = -sigma * F",
            nabla(c.local, B_R, ns, 1, A) == -section_curvature(c.local, B_R, sigma, 0, F))
    return S.finish()


# ---------------------------------------------------------------------------
# tangle


def cmd_tangle(args) -> tuple[int, list[str]]:
    model = load_model(args.model or data_path("anyonic.model"))
    env = standard_env(algebras=model.algebras, hopfs=model.hopfs, coactions=model.coactions,
                       maps=model.maps, n=model.n)
    path = Path(args.file)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        rep = run_identity_file(text, env, path.name)
    except (TangleSyntaxError, TangleTypeError) as exc:
        raise InputError(f"{path}: {exc}") from None
    lines = rep.lines()
    first = rep.failures()[:1]
    if first:
        lines.append(f"RESULT: FAIL (first counterexample: {first[0].name}: {first[0].detail})")
        return EXIT_FAIL, lines
    lines.append("RESULT: PASS")
    return EXIT_OK, lines


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="braided-gauge",
                                 description="Exact braided gauge theory in anyonic spaces.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="check the structures of a model file")
    v.add_argument("--model", required=True, help="model file")
    v.add_argument("--suite", default="all", choices=SUITES + ("all",))
    v.add_argument("--out", help="write the report here instead of stdout")

    r = sub.add_parser("report", help="worked-model reports")
    r.add_argument("which", choices=("anyonic", "composite"))
    r.add_argument("--params", default="", help="name=value,... (scalar literals)")
    r.add_argument("--model", help="base algebra file for the composite model")
    r.add_argument("--out", help="write the report here instead of stdout")

    t = sub.add_parser("tangle", help="check a file of diagram identities")
    t.add_argument("file")
    t.add_argument("--model", "--env", dest="model", help="model file providing the objects and morphisms")
    t.add_argument("--out", help="write the report here instead of stdout")
    return ap


def run(argv: Sequence[str] | None = None) -> tuple[int, list[str]]:
    """Parse arguments and run; returns (exit code, report lines).  Raises InputError."""
    return _dispatch(build_parser().parse_args(argv))


def _dispatch(args) -> tuple[int, list[str]]:
    try:
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "tangle":
            return cmd_tangle(args)
        if args.which == "anyonic":
            if args.model:
                raise InputError("the anyonic report uses the built-in model; drop --model")
            return anyonic_report(parse_params(args.params, ANYONIC_KEYS))
        return composite_report(parse_params(args.params, COMPOSITE_KEYS), args.model)
    except (ModelFileError, ModelError) as exc:
        raise InputError(str(exc)) from None
    except OSError as exc:
        raise InputError(f"{exc.filename}: {exc.strerror}") from None


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse has already printed usage
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        code, lines = _dispatch(args)
    except InputError as exc:
        print(f"braided-gauge: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
