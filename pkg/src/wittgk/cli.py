"""Command-line entry point: one subcommand per engine operation.

Exit codes: 0 success, 1 a ``verify``/``suite`` check came out false,
2 bad input, 3 resource limit.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from fractions import Fraction

from . import acceptance
from .algebra import (
    AlgebraKind,
    CommPoly,
    element_to_json,
    parse_any,
    parse_element,
    print_element,
)
from .brackets import gr, nc_multiply, normalize_pbw, phi, poisson_bracket
from .errors import AlgebraError, ResourceLimit
from .growth import (
    QuotientGrowth,
    count_spanning,
    filtration_check,
    free_series,
    qr_bound,
    sk_criticality_probe,
)
from .orders import OrderKind, compare
from .reduction import (
    DEFAULT_MAX_STEPS,
    IdealSpec,
    Reducer,
    normal_form_from_json,
    normal_form_to_json,
    step_to_json,
    verify_certificate,
)
from .verma import (
    InducedSpec,
    ModuleVector,
    act,
    annihilator_falsify,
    vector_from_json,
    vector_to_json,
    verma_graded_dim,
)

log = logging.getLogger("wittgk")

SCHEMA_VERSION = 1

# Values used when neither a flag nor the config file sets an option.
DEFAULTS = {
    "algebra": "witt",
    "kappa": None,
    "ideal": None,
    "side": "poisson",
    "input": None,
    "max_steps": DEFAULT_MAX_STEPS,
    "format": None,
    "max_degree": 10,
    "samples": 100,
    "seed": 0,
    "budget": 10**7,
    "depth": 10,
    "lam": "0",
    "e0_matrix": None,
    "order": "inc",
    "k": 2,
    "vector": None,
    "certificate": None,
    "figure": None,
}
INT_KEYS = {"max_steps", "max_degree", "samples", "seed", "budget", "depth", "k"}

# Default output format per subcommand.
FORMATS = {
    "params": "json", "reduce": "json", "normal-form": "json", "filtration-check": "json",
    "growth": "csv", "sk-probe": "csv", "verma": "csv", "act": "json", "ann-falsify": "json", "suite": "json",
}


class UsageError(AlgebraError, ValueError):
    pass


def load_config(path: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment.  Keys use flag names with dashes or underscores."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key == "lambda":
                key = "lam"
            if key not in DEFAULTS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = int(value) if key in INT_KEYS else value
    return out


def resolve(args) -> dict:
    """Flags override the config file, which overrides :data:`DEFAULTS`."""
    file_cfg = load_config(args.config) if getattr(args, "config", None) else {}
    cfg = {}
    for key, default in DEFAULTS.items():
        flag = getattr(args, key, None)
        cfg[key] = flag if flag is not None else file_cfg.get(key, default)
    cfg["format"] = cfg["format"] or FORMATS.get(args.command, "text")
    return cfg


# --------------------------------------------------------------------------
# output


class Emitter:
    def __init__(self, command: str, cfg: dict, out=None):
        self.command = command
        self.cfg = cfg
        self.out = out or sys.stdout

    def header(self) -> dict:
        return {k: v for k, v in self.cfg.items() if v is not None}

    def json(self, payload: dict):
        doc = {"schema_version": SCHEMA_VERSION, "command": self.command, "config": self.header()}
        doc.update(payload)
        json.dump(doc, self.out, indent=2, default=str)
        self.out.write("\n")

    def csv(self, columns, rows):
        self.out.write(f"# schema_version={SCHEMA_VERSION} config={json.dumps(self.header(), default=str)}\n")
        w = csv.writer(self.out, lineterminator="\n")
        w.writerow(columns)
        w.writerows(rows)

    def text(self, lines):
        print(f"# {self.command} {json.dumps(self.header(), default=str)}", file=sys.stderr)
        for line in lines:
            print(line, file=self.out)

    def table(self, columns, rows, payload_key="rows"):
        fmt = self.cfg["format"]
        if fmt == "csv":
            self.csv(columns, rows)
        elif fmt == "json":
            self.json({payload_key: [dict(zip(columns, r)) for r in rows]})
        else:
            self.text(["\t".join(map(str, columns))] + ["\t".join(map(str, r)) for r in rows])

    def element(self, el, extra=None):
        fmt = self.cfg["format"]
        if fmt == "json":
            payload = {"result": element_to_json(el), "text": print_element(el)}
            payload.update(extra or {})
            self.json(payload)
        elif fmt == "csv":
            self.csv(["text"], [[print_element(el)]])
        else:
            self.text([print_element(el)])


# --------------------------------------------------------------------------
# helpers


def _kind(cfg) -> AlgebraKind:
    return AlgebraKind.parse(cfg["algebra"], Fraction(cfg["kappa"]) if cfg["kappa"] is not None else None)


def _need(cfg, key, flag):
    if cfg[key] is None:
        raise UsageError(f"{flag} is required")
    return cfg[key]


def _ideal(cfg, kind=None) -> IdealSpec:
    kind = kind or _kind(cfg)
    side = cfg["side"]
    ring = "symmetric" if side == "poisson" else "enveloping"
    g = parse_any(_need(cfg, "ideal", "--ideal"), kind, ring)
    return IdealSpec(g, side)


def _input_for(spec: IdealSpec, cfg):
    ring = "symmetric" if spec.symmetric else "enveloping"
    return parse_any(_need(cfg, "input", "--input"), spec.kind, ring)


def _read_json(text_or_path: str):
    text = text_or_path
    if not text.lstrip().startswith(("{", "[")):
        with open(text_or_path, encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(text)


def _induced(cfg) -> InducedSpec:
    kappa = Fraction(cfg["kappa"] or 0)
    if cfg["e0_matrix"]:
        return InducedSpec(kappa, _read_json(cfg["e0_matrix"]))
    return InducedSpec.verma(kappa, Fraction(cfg["lam"]))


# --------------------------------------------------------------------------
# subcommands


def cmd_bracket(args, cfg, em):
    kind = _kind(cfg)
    a, b = (parse_any(t, kind) for t in args.operands)
    if isinstance(a, CommPoly) != isinstance(b, CommPoly):
        raise UsageError("both operands must use the same letters (e or x)")
    result = poisson_bracket(a, b) if isinstance(a, CommPoly) else nc_multiply(a, b) - nc_multiply(b, a)
    em.element(result)


def cmd_normalize(args, cfg, em):
    kind = _kind(cfg)
    raw = parse_element(_need(cfg, "input", "--input"), kind, "enveloping")
    em.element(normalize_pbw(raw))


def cmd_gr(args, cfg, em):
    em.element(gr(parse_any(_need(cfg, "input", "--input"), _kind(cfg), "enveloping")))


def cmd_phi(args, cfg, em):
    em.element(phi(parse_any(_need(cfg, "input", "--input"), _kind(cfg))))


def cmd_order(args, cfg, em):
    kind = _kind(cfg)
    els = [parse_any(t, kind) for t in args.operands]
    mons = []
    for el in els:
        if len(el.terms) != 1:
            raise UsageError("order compares single monomials")
        mons.append(next(iter(el.terms)))
    order = OrderKind(cfg["order"])
    c = compare(mons[0], mons[1], order)
    symbol = {-1: "<", 0: "=", 1: ">"}[c]
    if cfg["format"] == "json":
        em.json({"order": order.value, "compare": c, "symbol": symbol})
    else:
        em.text([symbol])


def cmd_params(args, cfg, em):
    spec = _ideal(cfg)
    p = Reducer(spec).params
    em.json({"k": p.k, "n": p.n, "ell_low": p.ell_low, "ell_high": p.ell_high})


def cmd_reduce(args, cfg, em):
    spec = _ideal(cfg)
    el = _input_for(spec, cfg)
    if len(el.terms) != 1:
        raise UsageError("reduce rewrites a single monomial; use normal-form for combinations")
    (m, c), = el.terms.items()
    result, step = Reducer(spec, max_steps=cfg["max_steps"]).reduce_word(m, c)
    em.element(result, {"step": step_to_json(step)})


def cmd_normal_form(args, cfg, em):
    spec = _ideal(cfg)
    el = _input_for(spec, cfg)
    nf = Reducer(spec, max_steps=cfg["max_steps"]).normal_form(el)
    if cfg["format"] == "json":
        em.json({"input": element_to_json(el), **normal_form_to_json(nf), "text": print_element(nf.combination),
                 "steps": len(nf.certificate)})
    else:
        em.text([print_element(nf.combination)])


def cmd_verify(args, cfg, em):
    spec = _ideal(cfg)
    el = _input_for(spec, cfg)
    doc = _read_json(_need(cfg, "certificate", "--certificate"))
    nf = normal_form_from_json(doc)
    ok = verify_certificate(el, nf, spec)
    if cfg["format"] == "json":
        em.json({"verified": ok})
    else:
        em.text(["true" if ok else "false"])
    return 0 if ok else 1


def cmd_growth(args, cfg, em):
    kind = _kind(cfg)
    N_max = cfg["max_degree"]
    rows = []
    if cfg["ideal"] is None:
        series = free_series(N_max)
        cum = series.cumulative()
        rows = [(N, d, c, "", "") for (N, d), c in zip(series.values, cum)]
        spanning = free = None
    else:
        spec = _ideal(cfg, kind)
        q = QuotientGrowth(spec)
        series = q.series(N_max, 0)
        cum = series.cumulative()
        spanning = [count_spanning(q.params, kind, N, budget=cfg["budget"]) for N in series.grades]
        rows = [(N, d, c, s, qr_bound(q.params, N)) for (N, d), c, s in zip(series.values, cum, spanning)]
        free = free_series(N_max).cumulative()
    em.table(["N", "dim", "cumulative", "spanning_count", "bound"], rows)
    if cfg["figure"]:
        from .plotting import growth_figure

        exponent = None if cfg["ideal"] is None else q.params.k + q.params.n - 1
        growth_figure(cfg["figure"], series.grades, cum, spanning, free, exponent, series.context)


def cmd_filtration(args, cfg, em):
    spec = _ideal(cfg)
    report = filtration_check(spec, cfg["samples"], cfg["seed"], cfg["max_degree"])
    em.json({
        "C": report.C,
        "all_pass": report.all_pass,
        "samples": [
            {"m1": list(s.m1), "m2": list(s.m2), "max_output": s.max_output, "bound": s.bound, "pass": s.passed}
            for s in report.samples
        ],
    })
    return 0 if report.all_pass else 1


def cmd_sk_probe(args, cfg, em):
    kind = _kind(cfg)
    g = parse_any(_need(cfg, "ideal", "--ideal"), kind, "symmetric")
    series = sk_criticality_probe(cfg["k"], g, cfg["max_degree"])
    em.table(["N", "dim", "cumulative"], [(N, d, c) for (N, d), c in zip(series.values, series.cumulative())])
    if cfg["figure"]:
        from .plotting import sk_figure

        sk_figure(cfg["figure"], series.grades, series.dims, cfg["k"], series.context)


def cmd_verma(args, cfg, em):
    spec = _induced(cfg)
    grades = list(range(cfg["max_degree"] + 1))
    dims = [verma_graded_dim(n, spec.dim) for n in grades]
    em.table(["n", "dim"], list(zip(grades, dims)))
    if cfg["figure"]:
        from .plotting import verma_figure

        verma_figure(cfg["figure"], grades, dims, f"kappa={spec.kappa}, dim M'={spec.dim}")


def _module_element(cfg, spec):
    kind = _kind(cfg)
    if not kind.virasoro_like:
        kind = AlgebraKind.parse("virasoro-quotient", spec.kappa)
    return parse_any(_need(cfg, "input", "--input"), kind, "enveloping")


def cmd_act(args, cfg, em):
    spec = _induced(cfg)
    u = _module_element(cfg, spec)
    v = vector_from_json(_read_json(cfg["vector"])) if cfg["vector"] else ModuleVector.basis()
    em.json({"input": vector_to_json(v), "result": vector_to_json(act(u, v, spec))})


def cmd_ann_falsify(args, cfg, em):
    spec = _induced(cfg)
    u = _module_element(cfg, spec)
    em.json(annihilator_falsify(u, spec, cfg["depth"]).to_json())


def cmd_suite(args, cfg, em):
    if args.list:
        em.text(acceptance.criterion_ids())
        return 0
    overrides = {}
    for item in args.set or []:
        if "=" not in item:
            raise UsageError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value.strip()
    overrides.setdefault("seed", cfg["seed"])
    try:
        acceptance.resolve_config(overrides)
    except KeyError as exc:
        raise UsageError(str(exc)) from None
    report = acceptance.run_suite(overrides, args.only)
    ok = all(r["status"] == "pass" for r in report)
    if cfg["format"] == "text":
        em.text([f"{r['criterion_id']}: {r['status'].upper()} observed={r['observed']} "
                 f"bound={r['bound']} ({r['seconds']}s)" for r in report])
    else:
        em.json({"all_pass": ok, "criteria": report})
    return 0 if ok else 1


COMMANDS = {
    "bracket": cmd_bracket,
    "normalize": cmd_normalize,
    "gr": cmd_gr,
    "phi": cmd_phi,
    "order": cmd_order,
    "params": cmd_params,
    "reduce": cmd_reduce,
    "normal-form": cmd_normal_form,
    "verify": cmd_verify,
    "growth": cmd_growth,
    "filtration-check": cmd_filtration,
    "sk-probe": cmd_sk_probe,
    "verma": cmd_verma,
    "act": cmd_act,
    "ann-falsify": cmd_ann_falsify,
    "suite": cmd_suite,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", help="witt-positive, witt, cartan1, virasoro, virasoro-quotient")
    common.add_argument("--kappa", help="central charge (rational)")
    common.add_argument("--ideal", help="generator text, e.g. 'x[1]x[1]'")
    common.add_argument("--side", choices=["poisson", "two-sided"])
    common.add_argument("--input", help="element text")
    common.add_argument("--max-steps", type=int)
    common.add_argument("--format", choices=["json", "csv", "text"])
    common.add_argument("--max-degree", type=int)
    common.add_argument("--samples", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--budget", type=int)
    common.add_argument("--depth", type=int)
    common.add_argument("--lambda", dest="lam", help="highest weight (rational)")
    common.add_argument("--e0-matrix", help="JSON square matrix, or a file holding one")
    common.add_argument("--config", help="key = value file; flags take precedence")
    common.add_argument("--figure", help="write a figure to this path (growth, sk-probe, verma)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="wittgk", description="Witt/Virasoro enveloping algebra toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name in ("bracket", "order"):
            p.add_argument("operands", nargs=2, metavar="ELEMENT")
        if name == "order":
            p.add_argument("--order", choices=["inc", "dec"])
        if name == "sk-probe":
            p.add_argument("--k", type=int)
        if name == "act":
            p.add_argument("--vector", help="JSON list of {partition, basis, coeff}, or a file")
        if name == "verify":
            p.add_argument("--certificate", help="normal-form JSON (as printed by normal-form), or a file")
        if name == "suite":
            p.add_argument("--list", action="store_true", help="print criterion ids and exit")
            p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a tolerance")
            p.add_argument("--only", action="append", metavar="ID", choices=acceptance.criterion_ids())
    return parser


def main(argv=None, out=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve(args)
        em = Emitter(args.command, cfg, out)
        code = COMMANDS[args.command](args, cfg, em)
        return code or 0
    except ResourceLimit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (AlgebraError, ValueError, ZeroDivisionError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
