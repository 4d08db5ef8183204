"""omega-calc: command dispatcher and canonical formatter.

Exit codes: 0 success, 1 parse error, 2 math error, 3 comparison or
floor undecidable at the working truncation order.  Errors go to stderr
and never print partial results.  The working order is the per-call
``--order`` flag (default 8), capped by the OMEGA_MAX_ORDER environment
variable (default 32).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import aleph as aleph_mod
from . import calculus, functions, parser, rational
from .errors import IndistinguishableAtTruncation, OmegaError, UnknownName
from .omega import (
    ExtendedOmega,
    OmegaNumber,
    compare_extended,
    render_plain,
    to_json_dict,
)
from .parser import (
    Apply,
    BinOp,
    DiffForm,
    FuncRef,
    IntForm,
    Lit,
    Neg,
    ParseError,
    PolyFunc,
    Pow,
    SolveForm,
    Sym,
)

DEFAULT_CLI_ORDER = 8
_BUILTIN_NAMES = ("exp", "sin", "cos", "log", "geometric")

_ORDERING_WORDS = {-1: "Less", 0: "Equal", 1: "Greater"}


class _PendingDiff:
    """A D^p[f] / d^n[f] form waiting for its evaluation point."""

    def __init__(self, kind: str, order: int, func: functions.RegularFunction):
        self.kind = kind
        self.order = order
        self.func = func


# ---------------------------------------------------------------------------
# Expression evaluation
# ---------------------------------------------------------------------------


def evaluate(node, order: int):
    """Evaluate an AST node to an OmegaNumber, ExtendedOmega or function."""
    if isinstance(node, Lit):
        return OmegaNumber.from_rational(node.value)
    if isinstance(node, Sym):
        if node.name == "o":
            return OmegaNumber.o()
        if node.name == "S":
            return OmegaNumber.sigma()
        return ExtendedOmega.epsilon()
    if isinstance(node, Neg):
        value = evaluate(node.operand, order)
        if isinstance(value, ExtendedOmega):
            return ExtendedOmega(-value.prefix, value.position, -value.sign)
        _require_number(value)
        return -value
    if isinstance(node, BinOp):
        return _eval_binop(node, order)
    if isinstance(node, Pow):
        base = evaluate(node.base, order)
        _require_number(base)
        return base.pow_rational(node.exponent, order=order)
    if isinstance(node, (FuncRef, PolyFunc, IntForm)):
        return _eval_func(node, order)
    if isinstance(node, DiffForm):
        return _PendingDiff(node.kind, node.order, _eval_func(node.func, order))
    if isinstance(node, SolveForm):
        F = _eval_func(node.func, order)
        target = evaluate(node.target, order)
        _require_number(target)
        return functions.solve_lift(F, target, node.seed, order=order)
    if isinstance(node, Apply):
        return _eval_apply(node, order)
    raise OmegaError(f"cannot evaluate node {node!r}")


def _require_number(value):
    if isinstance(value, ExtendedOmega):
        raise OmegaError("extended numbers support comparison only")
    if not isinstance(value, OmegaNumber):
        raise OmegaError("a function value appears where a number is needed")


def _eval_binop(node: BinOp, order: int):
    lhs = evaluate(node.left, order)
    rhs = evaluate(node.right, order)
    if isinstance(lhs, ExtendedOmega) or isinstance(rhs, ExtendedOmega):
        return _eval_extended_binop(node.op, lhs, rhs)
    _require_number(lhs)
    _require_number(rhs)
    if node.op == "+":
        return lhs + rhs
    if node.op == "-":
        return lhs - rhs
    if node.op == "*":
        return lhs * rhs
    return lhs * rhs.invert(order=order)


def _eval_extended_binop(op: str, lhs, rhs):
    # Construction sugar only: an exact finite part may be attached below
    # the infinite moment, and a monomial scale moves the moment.  The
    # extended values themselves have no ring structure.
    if op in "+-":
        if isinstance(lhs, ExtendedOmega) and isinstance(rhs, OmegaNumber):
            ext, fin = lhs, rhs if op == "+" else -rhs
        elif isinstance(rhs, ExtendedOmega) and isinstance(lhs, OmegaNumber):
            ext = (
                rhs
                if op == "+"
                else ExtendedOmega(-rhs.prefix, rhs.position, -rhs.sign)
            )
            fin = lhs
        else:
            raise OmegaError("extended numbers support comparison only")
        return ExtendedOmega(ext.prefix + fin, ext.position, ext.sign)
    if op == "*":
        if isinstance(lhs, ExtendedOmega) and isinstance(rhs, OmegaNumber):
            ext, factor = lhs, rhs
        elif isinstance(rhs, ExtendedOmega) and isinstance(lhs, OmegaNumber):
            ext, factor = rhs, lhs
        else:
            raise OmegaError("extended numbers support comparison only")
        terms = list(factor.terms())
        if not factor.is_exact() or len(terms) != 1:
            raise OmegaError("an infinite moment can only be scaled by a monomial")
        exponent, coefficient = terms[0]
        return ExtendedOmega(
            ext.prefix * factor,
            ext.position + exponent,
            ext.sign * (1 if coefficient > 0 else -1),
        )
    raise OmegaError("extended numbers support comparison only")


def _eval_func(node, order: int) -> functions.RegularFunction:
    if isinstance(node, FuncRef):
        if node.name not in _BUILTIN_NAMES:
            raise UnknownName(f"unknown function {node.name!r}")
        return functions.builtin(node.name)
    if isinstance(node, PolyFunc):
        coeffs = []
        for c in node.coeffs:
            v = evaluate(c, order)
            _require_number(v)
            coeffs.append(v)
        return functions.RegularFunction.polynomial(coeffs)
    if isinstance(node, IntForm):
        F = _eval_func(node.func, order)
        inits = []
        for c in node.inits:
            v = evaluate(c, order)
            _require_number(v)
            inits.append(v)
        if node.order == 1:
            if len(inits) > 1:
                raise OmegaError("first-order summation takes one initial value")
            a0 = inits[0] if inits else OmegaNumber.zero()
            return calculus.integrate(F, a0, order=order)
        if len(inits) > node.order:
            raise OmegaError("more initial conditions than the system order")
        while len(inits) < node.order:
            inits.append(OmegaNumber.zero())
        return calculus.solve_ode(F, node.order, inits, order=order)
    raise OmegaError(f"not a function form: {node!r}")


def _eval_apply(node: Apply, order: int):
    head = evaluate(node.func, order)
    arg = evaluate(node.arg, order)
    _require_number(arg)
    if isinstance(head, _PendingDiff):
        u = arg - OmegaNumber.from_rational(head.func.base_point)
        if head.kind == "D":
            return calculus.finite_difference(head.func, u, head.order, order=order)
        return calculus.leibniz_differential(head.func, u, head.order, order=order)
    if isinstance(head, functions.RegularFunction):
        u = arg - OmegaNumber.from_rational(head.base_point)
        return head.eval(u, order=order)
    raise OmegaError("only functions and operator forms can be applied")


def evaluate_rational(node) -> rational.RationalFunction:
    """Evaluate an expression in the field of rational functions of o."""
    RF = rational.RationalFunction
    if isinstance(node, Lit):
        return RF.from_rational(node.value)
    if isinstance(node, Sym):
        if node.name == "o":
            return RF.o()
        if node.name == "S":
            return RF.sigma()
        raise OmegaError("eps is not a rational function")
    if isinstance(node, Neg):
        return -evaluate_rational(node.operand)
    if isinstance(node, BinOp):
        lhs, rhs = evaluate_rational(node.left), evaluate_rational(node.right)
        if node.op == "+":
            return lhs + rhs
        if node.op == "-":
            return lhs - rhs
        if node.op == "*":
            return lhs * rhs
        return lhs / rhs
    if isinstance(node, Pow):
        if node.exponent.denominator != 1:
            raise OmegaError("rational functions support integer powers only")
        return evaluate_rational(node.base) ** node.exponent.numerator
    raise OmegaError("not a rational-function expression")


# ---------------------------------------------------------------------------
# Formatting
# ---------------------------------------------------------------------------


def format_value(value, mode: str, order: int) -> str:
    if isinstance(value, (OmegaNumber, ExtendedOmega)):
        if mode == "json":
            return json.dumps(to_json_dict(value))
        return render_plain(value)
    if isinstance(value, aleph_mod.AlephInt):
        return format_value(value.to_omega(), mode, order)
    if isinstance(value, functions.RegularFunction):
        top = value.degree if value.degree is not None else order
        if mode == "json":
            payload = {
                "base_point": [value.base_point.numerator, value.base_point.denominator],
                "degree": value.degree,
                "coefficients": [to_json_dict(value.coeff(n)) for n in range(top + 1)],
            }
            return json.dumps(payload)
        lines = [f"a_{n} = {render_plain(value.coeff(n))}" for n in range(top + 1)]
        return "\n".join(lines)
    if isinstance(value, _PendingDiff):
        raise OmegaError("an operator form must be applied to a point")
    raise OmegaError(f"cannot format {value!r}")


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------


def _aligned(rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join(
        "  ".join(cell.rjust(w) for cell, w in zip(row, widths)).rstrip()
        for row in rows
    )


def table_text(name: str, max_order: int, p: int = 1) -> str:
    M = max_order
    if M < 1:
        raise OmegaError("--max must be at least 1")
    if name == "bernoulli":
        rows = [["p", "B_p"]]
        rows += [[str(i), str(calculus.bernoulli(i))] for i in range(M + 1)]
        return _aligned(rows)
    if name == "dtoD":
        rows = [["p\\n"] + [str(n) for n in range(1, M + 1)]]
        for pp in range(1, M + 1):
            row = calculus.d_to_D(pp, M)
            rows.append([str(pp)] + ["0"] * (pp - 1) + [str(c) for c in row])
        return _aligned(rows)
    if name == "Dtod":
        rows = [["n\\p"] + [str(pp) for pp in range(1, M + 1)]]
        for n in range(1, M + 1):
            row = calculus.D_to_d(n, M)
            rows.append([str(n)] + ["0"] * (n - 1) + [str(c) for c in row])
        return _aligned(rows)
    if name == "X":
        rows = [["p\\n"] + [str(n) for n in range(1, M + 1)]]
        for pp in range(1, M + 1):
            rows.append([str(pp)] + [str(calculus.x_coeff(pp, n)) for n in range(1, M + 1)])
        return _aligned(rows)
    if name == "K":
        rows = [["p\\n"] + [str(n) for n in range(1, M + 1)]]
        for pp in range(1, M + 1):
            rows.append(
                [str(pp)]
                + [
                    str(calculus.k_coeff(pp - 1, pp - n)) if n <= pp else "."
                    for n in range(1, M + 1)
                ]
            )
        return _aligned(rows)
    if name == "a":
        rows = [["m\\l"] + [str(l) for l in range(1, M + 2)]]
        for m in range(M + 1):
            rows.append(
                [str(m)]
                + [
                    str(calculus.a_coeff(m, l)) if l <= m + 1 else "."
                    for l in range(1, M + 2)
                ]
            )
        return _aligned(rows)
    if name == "ap":
        rows = [["m\\l"] + [str(l) for l in range(1, M + p + 1)]]
        for m in range(M + 1):
            rows.append(
                [str(m)]
                + [
                    str(calculus.a_coeff_p(p, m, l)) if l <= m + p else "."
                    for l in range(1, M + p + 1)
                ]
            )
        return _aligned(rows)
    raise OmegaError(f"unknown table {name!r}")


# ---------------------------------------------------------------------------
# Command implementations
# ---------------------------------------------------------------------------


def _parse_func_arg(text: str, order: int) -> functions.RegularFunction:
    node = parser.parse(text)
    value = evaluate(node, order)
    if not isinstance(value, functions.RegularFunction):
        raise OmegaError("argument must name a function (builtin, poly[...] or int[...])")
    return value


def _cmd_eval(args, order, mode, out) -> int:
    if args.expr == "-":
        for line in sys.stdin:
            line = line.strip()
            if not line:
                continue
            value = evaluate(parser.parse(line), order)
            print(format_value(value, mode, order), file=out)
        return 0
    value = evaluate(parser.parse(args.expr), order)
    print(format_value(value, mode, order), file=out)
    return 0


def _cmd_cmp(args, order, mode, out) -> int:
    lhs = evaluate(parser.parse(args.left), order)
    rhs = evaluate(parser.parse(args.right), order)
    for v in (lhs, rhs):
        if not isinstance(v, (OmegaNumber, ExtendedOmega)):
            raise OmegaError("cmp takes two numbers")
    result = compare_extended(lhs, rhs)
    print(_ORDERING_WORDS[result], file=out)
    return 0


def _cmd_table(args, order, mode, out) -> int:
    print(table_text(args.name, args.max, args.p), file=out)
    return 0


def _cmd_diff(args, order, mode, out) -> int:
    F = _parse_func_arg(args.func, order)
    at = evaluate(parser.parse(args.at), order)
    _require_number(at)
    u = at - OmegaNumber.from_rational(F.base_point)
    if args.leibniz:
        value = calculus.leibniz_differential(F, u, args.p, order=order)
    else:
        value = calculus.finite_difference(F, u, args.p, order=order)
    print(format_value(value, mode, order), file=out)
    return 0


def _cmd_sum(args, order, mode, out) -> int:
    F = _parse_func_arg(args.func, order)
    a0 = evaluate(parser.parse(args.a0), order)
    _require_number(a0)
    G = calculus.integrate(F, a0, order=order)
    print(format_value(G, mode, order), file=out)
    return 0


def _cmd_bsum(args, order, mode, out) -> int:
    F = _parse_func_arg(args.func, order)
    t = Fraction(getattr(args, "from"))
    value = calculus.brute_sum(F, t, args.steps, order=order)
    print(format_value(value, mode, order), file=out)
    return 0


def _cmd_ode(args, order, mode, out) -> int:
    F = _parse_func_arg(args.func, order)
    inits = []
    for text in args.init or []:
        v = evaluate(parser.parse(text), order)
        _require_number(v)
        inits.append(v)
    if len(inits) > args.p:
        raise OmegaError("more initial conditions than the system order")
    while len(inits) < args.p:
        inits.append(OmegaNumber.zero())
    G = calculus.solve_ode(F, args.p, inits, order=order)
    print(format_value(G, mode, order), file=out)
    return 0


def _cmd_lift(args, order, mode, out) -> int:
    F = _parse_func_arg(args.func, order)
    y = evaluate(parser.parse(args.target), order)
    _require_number(y)
    value = functions.solve_lift(F, y, Fraction(args.seed), order=order)
    print(format_value(value, mode, order), file=out)
    return 0


def _cmd_expand(args, order, mode, out) -> int:
    rf = evaluate_rational(parser.parse(args.expr))
    if getattr(args, "expand", None) is not None:
        order = args.expand
    value = rational.expand(rf, order=order)
    print(format_value(value, mode, order), file=out)
    return 0


def _aleph_arg(text: str, order: int) -> aleph_mod.AlephInt:
    value = evaluate(parser.parse(text), order)
    _require_number(value)
    return aleph_mod.aleph_from_omega(value)


def _cmd_aleph(args, order, mode, out) -> int:
    op = args.op
    if op == "succ":
        result = aleph_mod.successor(_aleph_arg(args.args[0], order))
    elif op == "pred":
        result = aleph_mod.predecessor(_aleph_arg(args.args[0], order))
    elif op == "add":
        result = aleph_mod.oplus(
            _aleph_arg(args.args[0], order), _aleph_arg(args.args[1], order)
        )
    elif op == "mul":
        result = aleph_mod.odiamond(
            _aleph_arg(args.args[0], order), _aleph_arg(args.args[1], order)
        )
    elif op == "div":
        b = evaluate(parser.parse(args.args[0]), order)
        a = evaluate(parser.parse(args.args[1]), order)
        _require_number(a)
        _require_number(b)
        result = aleph_mod.archimedean_division(a, b, order=order)
    elif op == "member":
        value = _aleph_arg(args.args[0], order)
        print("true" if value.in_aleph_plus() else "false", file=out)
        return 0
    else:
        raise OmegaError(f"unknown aleph operation {op!r}")
    print(format_value(result, mode, order), file=out)
    return 0


def _cmd_demo(args, order, mode, out) -> int:
    if args.name != "leibniz-pi":
        raise OmegaError(f"unknown demo {args.name!r}")
    total = Fraction(0)
    for k in range(args.terms):
        total += Fraction((-1) ** k, 2 * k + 1)
        print(total, file=out)
    return 0


_COMMANDS = {
    "eval": _cmd_eval,
    "cmp": _cmd_cmp,
    "table": _cmd_table,
    "diff": _cmd_diff,
    "sum": _cmd_sum,
    "bsum": _cmd_bsum,
    "ode": _cmd_ode,
    "lift": _cmd_lift,
    "expand": _cmd_expand,
    "aleph": _cmd_aleph,
    "demo": _cmd_demo,
}


def _build_argparser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="omega-calc",
        description="exact calculator for series in the infinitesimal o",
    )
    top.add_argument("-i", "--interactive", action="store_true",
                     help="read expressions from stdin, one per line")
    top.add_argument("--order", type=int, default=None,
                     help=f"working truncation order (default {DEFAULT_CLI_ORDER})")
    top.add_argument("--format", choices=("plain", "json"), default=None)

    sub = top.add_subparsers(dest="command")

    def common(p):
        p.add_argument("--order", type=int, default=None)
        p.add_argument("--format", choices=("plain", "json"), default=None)

    p = sub.add_parser("eval", help="evaluate an expression ('-' reads stdin)")
    p.add_argument("expr")
    common(p)

    p = sub.add_parser("cmp", help="compare two values: Less/Equal/Greater")
    p.add_argument("left")
    p.add_argument("right")
    common(p)

    p = sub.add_parser("table", help="dump an exact coefficient table")
    p.add_argument("name", choices=("dtoD", "Dtod", "X", "K", "a", "ap", "bernoulli"))
    p.add_argument("--max", type=int, default=4)
    p.add_argument("--p", type=int, default=1)
    common(p)

    p = sub.add_parser("diff", help="step-o difference D^p f at a point")
    p.add_argument("func")
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--at", default="0")
    p.add_argument("--leibniz", action="store_true",
                   help="use the derivative differential d^p instead")
    common(p)

    p = sub.add_parser("sum", help="antidifference G with DG = F*o")
    p.add_argument("func")
    p.add_argument("--a0", default="0")
    common(p)

    p = sub.add_parser("bsum", help="literal grid sum over [[t, t+k*o[[")
    p.add_argument("func")
    p.add_argument("--from", default="0")
    p.add_argument("--steps", type=int, required=True)
    common(p)

    p = sub.add_parser("ode", help="order-p difference system")
    p.add_argument("func")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--init", action="append")
    common(p)

    p = sub.add_parser("lift", help="solve F(x) = target moment by moment")
    p.add_argument("func")
    p.add_argument("--target", required=True)
    p.add_argument("--seed", required=True)
    common(p)

    p = sub.add_parser("expand", help="Laurent expansion of P(o)/Q(o)")
    p.add_argument("expr")
    p.add_argument("--expand", type=int, default=None,
                   help="expansion order (alias for --order)")
    common(p)

    p = sub.add_parser("aleph", help="nonstandard integer operations")
    p.add_argument("op", choices=("succ", "pred", "add", "mul", "div", "member"))
    p.add_argument("args", nargs="+")
    common(p)

    p = sub.add_parser("demo", help="worked demonstrations")
    p.add_argument("name")
    p.add_argument("--terms", type=int, default=8)
    common(p)

    return top


def _max_order() -> int:
    raw = os.environ.get("OMEGA_MAX_ORDER", "32")
    try:
        return int(raw)
    except ValueError:
        return 32


def _repl(order: int, mode: str, out) -> int:
    for line in sys.stdin:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            value = evaluate(parser.parse(line), order)
            print(format_value(value, mode, order), file=out)
        except ParseError as exc:
            print(f"error: {exc}", file=sys.stderr)
        except OmegaError as exc:
            print(f"error: {exc}", file=sys.stderr)
    return 0


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    top = _build_argparser()
    args = top.parse_args(argv)
    order = args.order if args.order is not None else DEFAULT_CLI_ORDER
    mode = args.format if args.format is not None else "plain"

    if order < 0 or order > _max_order():
        print(
            f"error: --order must be between 0 and {_max_order()} "
            "(cap set by OMEGA_MAX_ORDER)",
            file=sys.stderr,
        )
        return 2

    if args.interactive:
        return _repl(order, mode, out)
    if args.command is None:
        top.print_usage(sys.stderr)
        return 2
    try:
        return _COMMANDS[args.command](args, order, mode, out)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except IndistinguishableAtTruncation as exc:
        print(f"error: undecidable at this order: {exc}", file=sys.stderr)
        return 3
    except OmegaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint():  # console-script shim
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
