"""Command-line front end.

Exit codes: 0 success, 1 counterexample found, 2 usage or schema error,
3 cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import jsonschema

from .errors import CapExceeded, ZariskiError
from .graph import build_AG, build_AG_star, build_G_tau, export, metrics
from .spectra import min_members, spectrum, v_mask
from .verifier import CHECKERS, THEOREMS, Caps, Instance, ModuleCase, TheoremReport, check, summarize, sweep

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

_INT_LIST = {"type": "array", "items": {"type": "integer"}}

INSTANCE_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["ring", "module"],
    "properties": {
        "ring": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 2}},
        "module": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 1}}},
        "T": {
            "oneOf": [
                {"const": "spec"},
                {"type": "object", "additionalProperties": False, "required": ["primes"],
                 "properties": {"primes": {"type": "array", "minItems": 1,
                                           "items": {"type": "integer", "minimum": 0}}}},
                {"type": "object", "additionalProperties": False, "required": ["closed_of"],
                 "properties": {"closed_of": {"type": "array", "items": _INT_LIST}}},
            ]
        },
        "S": {"type": "array", "minItems": 1, "items": {"oneOf": [{"type": "integer"}, _INT_LIST]}},
        "caps": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "max_elements": {"type": "integer", "minimum": 1},
                "max_submodules": {"type": "integer", "minimum": 1},
                "max_chi_vertices": {"type": "integer", "minimum": 0},
            },
        },
    },
}

GRAPHS = {"g-tau": None, "ag": build_AG, "ag-star": build_AG_star}


class UsageError(ZariskiError):
    pass


# -- instance parsing ---------------------------------------------------------

def _ints(text: str) -> list[int]:
    text = text.strip().strip("()")
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _inline_instance(args) -> dict:
    if args.ring is None:
        raise UsageError("give an instance file or --ring (and optionally --module, --T, --S)")
    ring = _ints(args.ring)
    if args.module is None:
        module = [[n] for n in ring]
    else:
        module = [_ints(b) for b in args.module.split(";")]
    data = {"ring": ring, "module": module}
    if args.T:
        t = args.T.strip()
        if t == "spec":
            data["T"] = "spec"
        elif t.startswith("primes:"):
            data["T"] = {"primes": _ints(t[len("primes:"):])}
        elif t.startswith("closed:"):
            data["T"] = {"closed_of": [_ints(g) for g in t[len("closed:"):].split("|")]}
        else:
            raise UsageError("--T must be 'spec', 'primes:i,j,...' or 'closed:gen|gen|...'")
    if args.S:
        data["S"] = [_ints(s) for s in args.S.split(";")]
    return data


def load_instance_data(args) -> dict:
    if args.instance:
        try:
            with open(args.instance) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read instance file: {exc}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"instance file is not valid JSON: {exc}") from None
    else:
        data = _inline_instance(args)
    try:
        jsonschema.validate(data, INSTANCE_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise UsageError(f"instance schema error at {where}: {exc.message}") from None
    if len(data["module"]) != len(data["ring"]):
        raise UsageError("module needs one block (possibly empty) per ring factor")
    for n, block in zip(data["ring"], data["module"]):
        for d in block:
            if n % d:
                raise UsageError(f"block entry {d} does not divide the ring modulus {n}")
    return data


def _caps(args, data: dict) -> Caps:
    values = dict(Caps().__dict__)
    values.update(data.get("caps", {}))
    for name in ("max_elements", "max_submodules", "max_chi_vertices"):
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    return Caps(**values)


def build_instance(data: dict, caps: Caps) -> Instance:
    case = ModuleCase(data["ring"], [[d for d in b if d > 1] for b in data["module"]], caps)
    spec = case.spec
    t = data.get("T", "spec")
    mask = None
    if isinstance(t, dict) and "primes" in t:
        idx = sorted(set(t["primes"]))
        if idx[-1] >= len(spec):
            raise UsageError(f"prime index {idx[-1]} out of range; Spec(M) has {len(spec)} members")
        mask = sum(1 << i for i in idx)
    elif isinstance(t, dict):
        M = case.module
        gens = [M.element_index(g) for g in t["closed_of"]]
        mask = v_mask(case.lattice.canonical(M.generate(gens)))
        if mask == 0:
            raise UsageError("V(N) is empty for the given generators; T must be non-empty")
    S = None
    if "S" in data:
        S = [case.ring.element(s if isinstance(s, int) else tuple(s)) for s in data["S"]]
    return Instance(case, mask, S)


# -- subcommands -----------------------------------------------------------------

def _write(out, payload: bytes | str):
    if isinstance(payload, bytes):
        out.buffer.write(payload) if hasattr(out, "buffer") else out.write(payload.decode())
    else:
        out.write(payload)
    out.flush()


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


def cmd_spec(args, out) -> int:
    data = load_instance_data(args)
    inst = build_instance(data, _caps(args, data))
    ctx = inst.ctx
    spec = inst.case.spec
    info = {
        "module": inst.M.describe(),
        "spec": [{"index": i, "prime": P.describe(), "colon": P.colon.describe()} for i, P in enumerate(spec)],
        "T": [P.describe() for P in ctx.T],
        "T_closed": ctx.is_closed,
        "min_T": [P.describe() for P in ctx.min_T],
        "min_spec": [P.describe() for P in min_members(spec)],
        "meet_T": ctx.meet.describe(),
        "Q": ctx.Q.describe(),
        "Mbar_order": ctx.Mbar.order,
    }
    if args.json:
        _write(out, _json(info))
        return EXIT_OK
    lines = [f"M = {info['module']}", f"Spec(M) ({len(spec)} primes):"]
    lines += [f"  [{p['index']}] {p['prime']}   (P:M) = {p['colon']}" for p in info["spec"]]
    lines += [
        "T = {" + ", ".join(info["T"]) + "}" + ("  (closed)" if ctx.is_closed else "  (not closed)"),
        "Min(T) = {" + ", ".join(info["min_T"]) + "}",
        f"meet of T = {info['meet_T']}",
        f"Q = {info['Q']}",
        f"|M/Q| = {info['Mbar_order']}",
    ]
    _write(out, "\n".join(lines) + "\n")
    return EXIT_OK


def _graph(args):
    data = load_instance_data(args)
    caps = _caps(args, data)
    inst = build_instance(data, caps)
    if args.which == "g-tau":
        G = build_G_tau(inst.ctx)
    else:
        G = GRAPHS[args.which](inst.M, **caps.module)
    return G, caps


def cmd_graph(args, out) -> int:
    G, caps = _graph(args)
    gm = metrics(G, caps.max_chi_vertices) if args.format == "json" else None
    _write(out, export(G, args.format, gm))
    return EXIT_OK


def cmd_metrics(args, out) -> int:
    G, caps = _graph(args)
    _write(out, json.dumps(metrics(G, caps.max_chi_vertices).to_dict(), indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_export(args, out) -> int:
    G, caps = _graph(args)
    payload = export(G, args.format, metrics(G, caps.max_chi_vertices) if args.format == "json" else None)
    if args.output in (None, "-"):
        _write(out, payload)
    else:
        with open(args.output, "wb") as fh:
            fh.write(payload)
    return EXIT_OK


def _theorems(args) -> tuple[str, ...]:
    if not args.theorem:
        return THEOREMS
    chosen = []
    for item in args.theorem:
        for t in item.split(","):
            t = t.strip()
            if t not in CHECKERS:
                raise UsageError(f"unknown theorem id {t!r}; known: {', '.join(THEOREMS)}")
            chosen.append(t)
    return tuple(sorted(set(chosen), key=THEOREMS.index))


def cmd_verify(args, out) -> int:
    theorems = _theorems(args)
    if args.sweep:
        if args.instance or args.ring:
            raise UsageError("--sweep cannot be combined with a single instance")
        caps = _caps(args, {})
        reports, summary = sweep(args.sweep, theorems, caps, jobs=args.jobs)
    else:
        data = load_instance_data(args)
        try:
            inst = build_instance(data, _caps(args, data))
        except CapExceeded as exc:
            # the whole instance is out of reach: every requested theorem is skipped
            desc = {"ring": data["ring"], "module": data["module"], "T": data.get("T", "spec")}
            reports = [TheoremReport(t, desc, [], False, None, skipped=str(exc)) for t in theorems]
        else:
            reports = [check(t, inst) for t in theorems]
        summary = summarize(reports)
        summary["cases"] = 1
    for r in reports:
        _write(out, _json(r.to_dict(timing=args.timing)))
    failures = [r.repro for r in reports if r.is_counterexample]
    summary["counterexample_repro"] = failures
    _write(out, _json({"summary": summary}))
    if failures:
        return EXIT_COUNTEREXAMPLE
    if summary["skipped"]:
        return EXIT_CAP
    return EXIT_OK


# -- parser ----------------------------------------------------------------------

def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", help="ring moduli, e.g. 12 or 2,3")
    common.add_argument("--module", help="blocks per ring factor, ';'-separated, e.g. '2,3' or '2;3'")
    common.add_argument("--T", help="'spec', 'primes:0,2' or 'closed:6' (generators '|'-separated)")
    common.add_argument("--S", help="multiplicative set, ';'-separated ring elements")
    common.add_argument("--max-elements", dest="max_elements", type=_positive)
    common.add_argument("--max-submodules", dest="max_submodules", type=_positive)
    common.add_argument("--max-chi-vertices", dest="max_chi_vertices", type=int)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="reserved; sweeps are exhaustive and ignore it")

    parser = argparse.ArgumentParser(prog="zariski", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spec", parents=[common], help="list Spec(M), T, Min(T), Q")
    p.add_argument("instance", nargs="?", help="instance JSON file")
    for name, helptext in (("graph", "write a graph as DOT or JSON"),
                           ("metrics", "graph metrics as JSON"),
                           ("export", "write a graph to a file")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("which", choices=sorted(GRAPHS), help="g-tau, ag or ag-star")
        p.add_argument("instance", nargs="?", help="instance JSON file")
        p.add_argument("--format", choices=["dot", "json"], default="dot")
        if name == "export":
            p.add_argument("--output", "-o")
    v = sub.add_parser("verify", parents=[common], help="run theorem checkers")
    v.add_argument("instance", nargs="?", help="instance JSON file")
    v.add_argument("--theorem", action="append", help="theorem id (repeatable or comma-separated)")
    v.add_argument("--sweep", help="family expression, e.g. 'zn:2..60' or 'products:max=64'")
    v.add_argument("--jobs", type=_positive, default=1)
    v.add_argument("--timing", action="store_true", help="include per-report timings")
    return parser


COMMANDS = {"spec": cmd_spec, "graph": cmd_graph, "metrics": cmd_metrics,
            "export": cmd_export, "verify": cmd_verify}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except CapExceeded as exc:
        print(f"zariski: cap exceeded: {exc}. Raise the matching --max-* flag.", file=sys.stderr)
        return EXIT_CAP
    except ZariskiError as exc:
        print(f"zariski: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
