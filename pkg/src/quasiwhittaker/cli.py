"""Batch command-line front end (``qwhit``).

Exit status: 0 on success, 1 on a mathematical error, 2 on a usage or
parse error.  Errors go to stderr as one line ``ERROR <code>: <message>``.
"""

import argparse
import json
import sys
from fractions import Fraction

from .errors import ExprSyntaxError, NonRational, QWError, ZeroDenominator
from .exact import as_rat, rat_str
from .expr import parse_expr
from .qwmod import ModElem, WhittakerType, act, qw_vector_basis, to_adapted
from .structure import (
    FactoredPoly,
    annihilator_contains,
    composition_series,
    cyclic_reduction,
    decompose,
    make_finite,
    maximal_submodules,
    simple_quotient,
)
from .verify import DEFAULT_SEED, SUITES, run_suites


class UsageError(Exception):
    code = "UsageError"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --------------------------------------------------------------------------
# JSON shapes


def elem_json(u):
    return [
        {"monomial": list(m), "coeff": rat_str(c)}
        for m, c in sorted(u.terms.items())
    ]


def module_json(v):
    return [{"basis": list(k), "coeff": rat_str(c)} for k, c in sorted(v.terms.items())]


def _read_module_elem(text, phi, width):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"bad module-element JSON: {exc.msg} at offset {exc.pos}") from None
    if not isinstance(data, list):
        raise UsageError("module element must be a JSON list of {basis, coeff}")
    terms = {}
    for rec in data:
        try:
            basis = tuple(int(x) for x in rec["basis"])
            coeff = as_rat(str(rec.get("coeff", "1")))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"bad module-element record {rec!r}") from exc
        if len(basis) != width or any(x < 0 for x in basis):
            raise UsageError(f"basis must be {width} nonnegative integers: {rec!r}")
        terms[basis] = terms.get(basis, Fraction(0)) + coeff
    return terms


def _phi(args):
    return WhittakerType(as_rat(args.phi_p), as_rat(args.phi_q))


def _expr(text):
    return parse_expr(text).to_uea()


# --------------------------------------------------------------------------
# commands; each returns (inputs, result_json, text_lines)


def cmd_normalize(args):
    u = _expr(args.expr)
    return {"expr": args.expr}, elem_json(u), [str(u)]


def cmd_act(args):
    phi = _phi(args)
    u = _expr(args.expr)
    if args.on is None:
        v = ModElem.w(phi)
    else:
        v = ModElem(phi, _read_module_elem(args.on, phi, 3))
    out = act(u, v)
    inputs = {"expr": args.expr, "phi": [rat_str(phi.phi_p), rat_str(phi.phi_q)], "on": module_json(v)}
    return inputs, module_json(out), [str(out)]


def cmd_qwvectors(args):
    phi = _phi(args)
    vecs = qw_vector_basis(phi, args.degree)
    result = [module_json(v) for v in vecs]
    lines = [f"dimension: {len(vecs)}"]
    for v in vecs:
        lines.append(f"{v}    [= {to_adapted(v)}]")
    inputs = {"phi": [rat_str(phi.phi_p), rat_str(phi.phi_q)], "degree": args.degree}
    return inputs, result, lines


def _finite(args):
    phi = _phi(args)
    d = FactoredPoly.parse(args.d)
    return phi, d, make_finite(phi, d)


def _finite_inputs(phi, d):
    return {"phi": [rat_str(phi.phi_p), rat_str(phi.phi_q)], "d": str(d)}


def cmd_series(args):
    phi, d, V = _finite(args)
    maxi = maximal_submodules(V, args.trunc)
    rep = composition_series(V, args.trunc)
    result = {
        "layers": [rat_str(x) for x in rep.layers],
        "length": rep.length,
        "maximal_submodules": [rat_str(x) for x in maxi],
        "chain_dims": rep.chain_dims,
    }
    lines = [
        f"d(x) = {d.poly}",
        "layers: " + ", ".join(str(x) for x in rep.layers),
        f"length: {rep.length}",
        "maximal submodules: " + ", ".join(f"U(S)(C0 - {x})w" for x in maxi),
    ]
    if rep.chain_dims:
        lines.append("chain dims at truncation: " + ", ".join(map(str, rep.chain_dims)))
    return _finite_inputs(phi, d), result, lines


def cmd_decompose(args):
    phi, d, V = _finite(args)
    comps = decompose(V, args.trunc)
    result = []
    lines = [f"d(x) = {d.poly}"]
    for c in comps:
        result.append(
            {
                "xi": rat_str(c.xi),
                "multiplicity": c.multiplicity,
                "d_j": [rat_str(x) for x in c.d_j.coeffs],
                "r_j": [rat_str(x) for x in c.r_j.coeffs],
                "generator": module_json(c.generator),
                "composition_length": c.length,
                "graded_dims": c.graded_dims,
            }
        )
        lines.append(
            f"xi = {c.xi}: generator d_j(C0)w with d_j = {c.d_j}, r_j = {c.r_j}, "
            f"length {c.length}, generator {c.generator}"
        )
    return _finite_inputs(phi, d), result, lines


def cmd_annihilates(args):
    phi, d, V = _finite(args)
    u = _expr(args.expr)
    ok = annihilator_contains(u, V)
    inputs = dict(_finite_inputs(phi, d), expr=args.expr)
    return inputs, ok, ["true" if ok else "false"]


def cmd_reduce(args):
    phi = _phi(args)
    xi = as_rat(args.xi)
    L = simple_quotient(phi, xi)
    terms = _read_module_elem(args.element, phi, 2)
    v = L.elem({(i, j, 0): c for (i, j), c in terms.items()})
    wit = cyclic_reduction(v)
    result = {"u": elem_json(wit.u), "scalar": rat_str(wit.scalar), "steps": [list(s) for s in wit.steps]}
    inputs = {"phi": [rat_str(phi.phi_p), rat_str(phi.phi_q)], "xi": rat_str(xi), "element": module_json(v)}
    return inputs, result, [f"u = {wit.u}", f"u . v = {wit.scalar} * w", str(wit)]


def cmd_verify(args):
    results = run_suites(args.suite, args.seed)
    lines = [
        f"{r.name}: {r.passed}/{r.total} {'PASS' if r.ok else 'FAIL'}" for r in results
    ]
    for r in results:
        lines.extend(f"  {r.name} failure: {f}" for f in r.failures)
    data = [r.as_dict() for r in results]
    inputs = {"suite": args.suite}
    if not all(r.ok for r in results):
        raise _VerifyFailed(inputs, data, lines)
    return inputs, data, lines


class _VerifyFailed(Exception):
    def __init__(self, inputs, data, lines):
        super().__init__("verification failed")
        self.payload = (inputs, data, lines)


# --------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--trunc", type=int, default=6)
    common.add_argument("--out", default=None, help="also write the JSON envelope here")

    phi_args = argparse.ArgumentParser(add_help=False)
    phi_args.add_argument("--phi-p", required=True)
    phi_args.add_argument("--phi-q", required=True)

    finite = argparse.ArgumentParser(add_help=False)
    finite.add_argument("--d", required=True, help='roots as "xi1:a1,xi2:a2,..."')

    parser = _Parser(prog="qwhit", description="Quasi-Whittaker modules for the Schroedinger algebra")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("normalize", parents=[common], help="PBW normal form")
    p.add_argument("expr")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("act", parents=[common, phi_args], help="act on M_phi")
    p.add_argument("expr")
    p.add_argument("--on", default=None, help='JSON list of {"basis":[i,j,k],"coeff":"n/d"}')
    p.set_defaults(func=cmd_act)

    p = sub.add_parser("qwvectors", parents=[common, phi_args], help="quasi-Whittaker vectors in M_phi")
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(func=cmd_qwvectors)

    for name, func, hlp in (
        ("series", cmd_series, "composition series of V_d"),
        ("decompose", cmd_decompose, "direct-sum decomposition of V_d"),
    ):
        p = sub.add_parser(name, parents=[common, phi_args, finite], help=hlp)
        p.set_defaults(func=func)

    p = sub.add_parser("annihilates", parents=[common, phi_args, finite], help="does u kill w in V_d")
    p.add_argument("expr")
    p.set_defaults(func=cmd_annihilates)

    p = sub.add_parser("reduce", parents=[common, phi_args], help="simplicity witness in L_{phi,xi}")
    p.add_argument("element", help='JSON list of {"basis":[i,j],"coeff":"n/d"}')
    p.add_argument("--xi", required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", parents=[common], help="run self-check suites")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_verify)
    return parser


def _emit(args, inputs, result, lines, out, status=0):
    envelope = {
        "command": args.command,
        "inputs": inputs,
        "result": result,
        "trunc": args.trunc,
        "seed": getattr(args, "seed", None),
    }
    text = json.dumps(envelope, sort_keys=True, indent=2)
    if args.format == "json":
        out.write(text + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return status


def _error(err, code, message):
    err.write(f"ERROR {code}: {' '.join(str(message).split())}\n")


def main(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.trunc < 0:
            raise UsageError("--trunc must be nonnegative")
        if getattr(args, "degree", 0) < 0:
            raise UsageError("--degree must be nonnegative")
        if getattr(args, "seed", 0) < 0:
            raise UsageError("--seed must be an unsigned integer")
    except UsageError as exc:
        _error(err, exc.code, exc)
        return 2
    try:
        inputs, result, lines = args.func(args)
    except _VerifyFailed as exc:
        _emit(args, *exc.payload, out)
        _error(err, "VerificationFailed", "one or more suites failed")
        return 1
    except (ExprSyntaxError, ZeroDenominator, UsageError) as exc:
        _error(err, exc.code, exc)
        return 2
    except NonRational as exc:
        _error(err, exc.code, exc)
        return 2
    except QWError as exc:
        _error(err, exc.code, exc)
        return 1
    except ValueError as exc:
        _error(err, "ValueError", exc)
        return 1
    return _emit(args, inputs, result, lines, out)


if __name__ == "__main__":
    sys.exit(main())
