"""Batch command-line front end.

One job per process. Payloads arrive as flags or as a single JSON job on
stdin (--job -). Output is deterministic: fixed key order in text mode,
sorted keys in JSON mode, numbers printed as decimal strings at the
requested precision. Exit codes: 0 success, 1 schema violation, 2 domain
error, 3 precision error.

Field elements in payloads are written either as coefficient records
{"coeffs": ["p/q", ...]} or as polynomial expressions in the generator
symbol x with rational coefficients and integer powers, e.g. "(1-x)^-1" or
"3/2*x^2 - x + 7". Expressions are evaluated with exact field arithmetic,
so "1/2" is the exact rational and negative powers invert exactly.
"""

from __future__ import annotations

import json
import sys

from mpmath import mp, mpc, mpf

from .arakelov import FractionalIdeal, Metric, MetrizedLineBundle, arithmetic_degree, ideal_norm, index_quotient
from .dilog import bloch_wigner, li2
from .errors import (ArithregError, DomainError, FormatError, PrecisionError,
                     SchemaError)
from .heights import c_hat_height
from .kmodel import build_model, dimension_table
from .nf import FieldElement, NumberField, embeddings, parse_field
from .precision import PrecisionContext
from .regulator import k3_regulator, s_map, unit_regulator
from .relations import (BlochElement, bloch_kernel, relation_lattice,
                        torsion_only_kernel, verify_bloch_element)

COMMANDS = ("field-info", "dilog", "bloch-check", "regulator", "unit-reg",
            "degree", "height", "kranks")


# ---------------------------------------------------------------------------
# element expression parser

class _Tokens:
    def __init__(self, text: str):
        self.toks = self._lex(text)
        self.pos = 0

    @staticmethod
    def _lex(text: str):
        toks = []
        i = 0
        while i < len(text):
            c = text[i]
            if c.isspace():
                i += 1
            elif c.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                toks.append(("num", int(text[i:j])))
                i = j
            elif c == "x":
                toks.append(("x", None))
                i += 1
            elif text.startswith("**", i):
                toks.append(("^", None))
                i += 2
            elif c in "+-*/^()":
                toks.append((c, None))
                i += 1
            else:
                raise SchemaError(f"unexpected character {c!r} in element expression")
        return toks

    def peek(self):
        return self.toks[self.pos][0] if self.pos < len(self.toks) else None

    def next(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok


def parse_element_expr(text: str, field: NumberField) -> FieldElement:
    """Exact evaluation of a polynomial expression in the generator x."""
    toks = _Tokens(text)
    value = _parse_sum(toks, field)
    if toks.peek() is not None:
        raise SchemaError(f"trailing input in element expression {text!r}")
    return value


def _parse_sum(toks, field):
    value = _parse_product(toks, field)
    while toks.peek() in ("+", "-"):
        op, _ = toks.next()
        rhs = _parse_product(toks, field)
        value = value + rhs if op == "+" else value - rhs
    return value


def _parse_product(toks, field):
    value = _parse_unary(toks, field)
    while toks.peek() in ("*", "/"):
        op, _ = toks.next()
        rhs = _parse_unary(toks, field)
        value = value * rhs if op == "*" else value / rhs
    return value


def _parse_unary(toks, field):
    if toks.peek() == "-":
        toks.next()
        return -_parse_unary(toks, field)
    if toks.peek() == "+":
        toks.next()
        return _parse_unary(toks, field)
    return _parse_power(toks, field)


def _parse_power(toks, field):
    base = _parse_atom(toks, field)
    if toks.peek() == "^":
        toks.next()
        sign = 1
        while toks.peek() in ("-", "+"):
            if toks.next()[0] == "-":
                sign = -sign
        kind, val = toks.next() if toks.peek() == "num" else (None, None)
        if kind != "num":
            raise SchemaError("exponent must be an integer")
        return base ** (sign * val)
    return base


def _parse_atom(toks, field):
    kind = toks.peek()
    if kind == "num":
        _, val = toks.next()
        return field.element([val])
    if kind == "x":
        toks.next()
        return field.gen()
    if kind == "(":
        toks.next()
        value = _parse_sum(toks, field)
        if toks.peek() != ")":
            raise SchemaError("unbalanced parenthesis in element expression")
        toks.next()
        return value
    raise SchemaError("malformed element expression")


def parse_element(payload, field: NumberField) -> FieldElement:
    """Element from an expression string, a coefficient record, or a list."""
    if isinstance(payload, str):
        return parse_element_expr(payload, field)
    if isinstance(payload, dict) and "coeffs" in payload:
        payload = payload["coeffs"]
    if isinstance(payload, (list, tuple)):
        from fractions import Fraction
        return field.element([Fraction(str(c)) for c in payload])
    raise SchemaError(f"cannot parse element payload {payload!r}")


# ---------------------------------------------------------------------------
# complex input

def parse_complex(text: str) -> mpc:
    s = text.strip().replace(" ", "")
    if not s:
        raise SchemaError("empty complex number")
    if not s.endswith("i"):
        return mpc(mpf(s), 0)
    body = s[:-1]
    split = None
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE":
            split = k
            break
    if split is None:
        re_part, im_part = "0", body
    else:
        re_part, im_part = body[:split], body[split:]
    if im_part in ("", "+"):
        im_part = "1"
    elif im_part == "-":
        im_part = "-1"
    try:
        return mpc(mpf(re_part), mpf(im_part))
    except ValueError as exc:
        raise SchemaError(f"cannot parse complex number {text!r}") from exc


# ---------------------------------------------------------------------------
# job runner

def _require(payload: dict, key: str, kind=None):
    if key not in payload:
        raise SchemaError(f"missing required key '{key}'")
    value = payload[key]
    if kind is not None and not isinstance(value, kind):
        raise SchemaError(f"key '{key}' has the wrong type")
    return value


def _field_from(job: dict) -> NumberField:
    record = _require(job, "field", dict)
    return parse_field(record)


def _num(v, digits: int) -> str:
    return mp.nstr(v, digits)


def run_job(job: dict, out=sys.stdout) -> int:
    """Execute one validated job; returns the process exit code."""
    try:
        result = _dispatch(job)
    except (SchemaError, FormatError) as exc:
        print(f"error[schema]: {exc}", file=sys.stderr)
        return 1
    except PrecisionError as exc:
        print(f"error[precision]: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"error[domain]: {exc}", file=sys.stderr)
        return 2
    except ArithregError as exc:  # pragma: no cover - catchall
        print(f"error[domain]: {exc}", file=sys.stderr)
        return 2
    if job.get("output", "text") == "json":
        print(json.dumps(result, sort_keys=True), file=out)
    else:
        _print_text(result, out)
    return 0


def _print_text(result: dict, out):
    for key, value in result.items():
        if key == "schema":
            continue
        if isinstance(value, list) and value and isinstance(value[0], dict):
            print(f"{key}:", file=out)
            for row in value:
                print("  " + json.dumps(row, sort_keys=True), file=out)
        else:
            print(f"{key}: {value}", file=out)


def _dispatch(job: dict) -> dict:
    command = _require(job, "command", str)
    if command not in COMMANDS:
        raise SchemaError(f"unknown command '{command}'")
    precision = job.get("precision", 50)
    if not isinstance(precision, int) or precision < 16:
        raise SchemaError("key 'precision' must be an integer >= 16")
    payload = job.get("payload", {})
    if not isinstance(payload, dict):
        raise SchemaError("key 'payload' must be an object")
    handler = {
        "field-info": _cmd_field_info,
        "dilog": _cmd_dilog,
        "bloch-check": _cmd_bloch_check,
        "regulator": _cmd_regulator,
        "unit-reg": _cmd_unit_reg,
        "degree": _cmd_degree,
        "height": _cmd_height,
        "kranks": _cmd_kranks,
    }[command]
    return handler(job, payload, precision)


def _cmd_field_info(job, payload, precision):
    field = _field_from(job)
    e = embeddings(field, precision)
    return {
        "schema": 1,
        "poly": list(field.defining_poly),
        "degree": field.degree,
        "signature": list(e.signature),
        "maximality_asserted": field.maximality_asserted,
        "embeddings": [_num(r, precision) for r in e.roots],
        "conjugation_pairing": list(e.conjugation_pairing),
    }


def _cmd_dilog(job, payload, precision):
    z = parse_complex(_require(payload, "z", str))
    ctx = PrecisionContext(precision)
    value = li2(z, ctx)
    dd = bloch_wigner(z, ctx)
    return {
        "schema": 1,
        "z": _num(z, precision),
        "li2_re": _num(value.real, precision),
        "li2_im": _num(value.imag, precision),
        "bloch_wigner": _num(dd, precision),
    }


def _candidate_presentation(field, candidates, precision):
    gens = [field.element([-1])]
    for lam in candidates:
        for g in (lam, field.one() - lam):
            if g not in gens:
                gens.append(g)
    return relation_lattice(gens, precision)


def _cmd_bloch_check(job, payload, precision):
    field = _field_from(job)
    raw = _require(payload, "candidates", list)
    candidates = [parse_element(c, field) for c in raw]
    for lam in candidates:
        if not lam.is_in_rcirc():
            raise DomainError(f"candidate {lam!r} or its complement is not a unit")
    pres = _candidate_presentation(field, candidates, precision)
    kernel = bloch_kernel(candidates, pres)
    flagged = torsion_only_kernel(candidates, pres)
    e = embeddings(field, precision)
    ctx = PrecisionContext(precision)
    regs = [k3_regulator(b, e, ctx).to_record() for b in kernel]
    return {
        "schema": 1,
        "generators": [g.to_record() for g in pres.generators],
        "relation_basis": [list(r) for r in pres.relation_basis],
        "torsion_order": pres.torsion_order,
        "kernel_basis": [list(b.multiplicities) for b in kernel],
        "torsion_only_kernel": [list(b.multiplicities) for b in flagged],
        "regulators": regs,
    }


def _cmd_regulator(job, payload, precision):
    field = _field_from(job)
    record = _require(payload, "bloch", dict)
    support = [parse_element(s, field) for s in _require(record, "support", list)]
    mults = _require(record, "multiplicities", list)
    if len(support) != len(mults) or any(not isinstance(n, int) for n in mults):
        raise SchemaError("key 'multiplicities' must be integers matching the support")
    x = BlochElement(tuple(support), tuple(mults))
    pres = _candidate_presentation(field, support, precision)
    if not verify_bloch_element(x, pres):
        raise DomainError("formal sum is not in the wedge-map kernel")
    e = embeddings(field, precision)
    rec = k3_regulator(x, e, PrecisionContext(precision)).to_record()
    rec["schema"] = 1
    return rec


def _cmd_unit_reg(job, payload, precision):
    field = _field_from(job)
    lam = parse_element(_require(payload, "element", (str, dict, list)), field)
    e = embeddings(field, precision)
    vec = unit_regulator(lam, e)
    rec = vec.to_record()
    rec["schema"] = 1
    rec["mean"] = _num(s_map(vec), precision)
    return rec


def _bundle_from(payload, field, e):
    record = _require(payload, "bundle", dict)
    rows = _require(record, "ideal_basis", list)
    metric_raw = _require(record, "metric", list)
    if len(metric_raw) != field.degree:
        raise SchemaError("key 'metric' must list one positive value per embedding")
    ideal = FractionalIdeal.from_rows(field, rows)
    with mp.workdps(e.working_dps):
        values = tuple(mpf(str(v)) for v in metric_raw)
    metric = Metric(values)
    metric.check_invariance(e)
    return MetrizedLineBundle(ideal, metric)


def _cmd_degree(job, payload, precision):
    field = _field_from(job)
    e = embeddings(field, precision)
    bundle = _bundle_from(payload, field, e)
    section = None
    if "section" in payload:
        section = parse_element(payload["section"], field)
    value = arithmetic_degree(bundle, e, section)
    s0 = bundle.ideal.reference_section()
    return {
        "schema": 1,
        "degree": _num(value, precision),
        "ideal_norm": str(ideal_norm(bundle.ideal)),
        "index_of_default_section": str(index_quotient(bundle.ideal, section or s0)),
    }


def _cmd_height(job, payload, precision):
    field = _field_from(job)
    e = embeddings(field, precision)
    bundle = _bundle_from(payload, field, e)
    n_power = _require(payload, "N", int)
    generator = parse_element(_require(payload, "generator", (str, dict, list)), field)
    h = c_hat_height(bundle, n_power, generator, e)
    d = arithmetic_degree(bundle, e)
    with mp.workdps(e.working_dps):
        diff = abs(h - d)
    return {
        "schema": 1,
        "height": _num(h, precision),
        "arithmetic_degree": _num(d, precision),
        "abs_difference": _num(diff, precision),
    }


def _cmd_kranks(job, payload, precision):
    field = _field_from(job)
    max_p = payload.get("max_p", 6)
    if not isinstance(max_p, int) or max_p < 1:
        raise SchemaError("key 'max_p' must be a positive integer")
    model = build_model(field, max_p, precision=precision)
    table = dimension_table(model)
    table["schema"] = 1
    return table


# ---------------------------------------------------------------------------
# argument parsing

def _build_job(argv: list[str]) -> dict:
    import argparse

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=argparse.SUPPRESS)
    common.add_argument("--output", choices=("text", "json"), default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="arithreg", description=__doc__)
    parser.add_argument("--job", help="read a full JSON job from stdin ('-')")
    parser.add_argument("--precision", type=int, default=50)
    parser.add_argument("--output", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command")

    def add(name, *flags):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--field", required=name != "dilog")
        for flag, kwargs in flags:
            p.add_argument(flag, **kwargs)
        return p

    add("field-info")
    pd = sub.add_parser("dilog", parents=[common])
    pd.add_argument("--z", required=True)
    add("bloch-check", ("--candidates", {"required": True}))
    add("regulator", ("--bloch", {"required": True}))
    add("unit-reg", ("--element", {"required": True}))
    add("degree", ("--bundle", {"required": True}), ("--section", {}))
    add("height", ("--bundle", {"required": True}), ("--N", {"required": True, "type": int}),
        ("--generator", {"required": True}))
    add("kranks", ("--max-p", {"type": int, "default": 6, "dest": "max_p"}))

    args = parser.parse_args(argv)

    if args.job == "-":
        try:
            job = json.load(sys.stdin)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"stdin is not valid JSON: {exc}") from exc
        if not isinstance(job, dict):
            raise SchemaError("job must be a JSON object")
        if job.get("schema", 1) != 1:
            raise SchemaError("key 'schema' must be 1")
        return job
    if args.command is None:
        raise SchemaError("no command given")

    job = {"schema": 1, "command": args.command,
           "precision": args.precision, "output": args.output, "payload": {}}
    if getattr(args, "field", None):
        try:
            job["field"] = json.loads(args.field)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"key 'field' is not valid JSON: {exc}") from exc

    def load_json(flag, value):
        try:
            return json.loads(value)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"key '{flag}' is not valid JSON: {exc}") from exc

    if args.command == "dilog":
        job["payload"]["z"] = args.z
    elif args.command == "bloch-check":
        job["payload"]["candidates"] = load_json("candidates", args.candidates)
    elif args.command == "regulator":
        job["payload"]["bloch"] = load_json("bloch", args.bloch)
    elif args.command == "unit-reg":
        job["payload"]["element"] = args.element
    elif args.command == "degree":
        job["payload"]["bundle"] = load_json("bundle", args.bundle)
        if args.section:
            job["payload"]["section"] = args.section
    elif args.command == "height":
        job["payload"]["bundle"] = load_json("bundle", args.bundle)
        job["payload"]["N"] = args.N
        job["payload"]["generator"] = args.generator
    elif args.command == "kranks":
        job["payload"]["max_p"] = args.max_p
    return job


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        job = _build_job(argv)
    except SchemaError as exc:
        print(f"error[schema]: {exc}", file=sys.stderr)
        return 1
    return run_job(job)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
