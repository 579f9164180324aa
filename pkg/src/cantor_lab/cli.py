"""Command-line front end.

Exit codes: 0 pass, 1 refuted, 2 inconclusive, 3 usage error.  JSON output is
deterministic (sorted keys, no timing); text output is for people.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from . import conditions as cond
from .cylinders import RELATIONS, composition_domain_size, decide_relation, is_reduced, lemma27_check
from .kst import FAMILIES, composition_law_check, family_check, g_eval
from .level_graph import Theta, check_prop18, check_tree, level_ordering, unique_path
from .report import EXIT_CODES, EXIT_USAGE, PASS, REFUTED, REPORT_SCHEMA, Report, dumps, suite_document, worst, write_json
from .ruler import alpha_from_json, beta_word, check_palindromes, check_ruler_periodicity, sspec_from_json
from .structures import FiniteRelation, check_properties, classify_sigma, confirm_sigma, transform, transform_sweep
from .suite import DEFAULT_GROUPS, GROUPS, SuiteConfig, resolve_seed, run_suite_document
from .synthesizer import ReductionTable, SynthesisInstance, synthesize
from .table_verify import verify_table
from .words import DescribedPoint, check_psi, check_word, psi, psi_inv, s_seq

__all__ = ["main", "build_parser", "UsageError"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _json_arg(text: str) -> Any:
    path = Path(text)
    if not text.lstrip().startswith(("{", "[", '"')) and path.is_file():
        text = path.read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON {text!r}: {exc.msg}") from None


def _sspec(text: str):
    return sspec_from_json(_json_arg(text))


def _alpha(text: str) -> DescribedPoint:
    text = text.strip()
    if text.startswith("{"):
        return alpha_from_json(_json_arg(text))
    return DescribedPoint.parse(text)


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()] if text else []


def _signs(text: str) -> list[int]:
    out = []
    for v in text.split(","):
        v = v.strip()
        if v in ("+", "+1", "1"):
            out.append(1)
        elif v in ("-", "-1"):
            out.append(-1)
        else:
            raise UsageError(f"sign must be + or -, got {v!r}")
    return out


# output


def _text_report(doc: dict) -> str:
    if "checks" in doc:
        lines = [f"{r['status']:<13} {r['check']} {json.dumps(r['params'], sort_keys=True)}" for r in doc["checks"]]
        counts = {s: sum(1 for r in doc["checks"] if r["status"] == s) for s in EXIT_CODES}
        lines.append(f"overall: {doc['status']} ({', '.join(f'{k}={v}' for k, v in counts.items())})")
        return "\n".join(lines) + "\n"
    if "check" in doc:
        return f"{doc['status']}: {doc['check']} {json.dumps(doc['params'], sort_keys=True)}\n{json.dumps(doc['details'], sort_keys=True)}\n"
    return dumps(doc)


def emit(doc: dict, args) -> None:
    """Write the document to --out (always JSON) or stdout in the chosen format."""
    if getattr(args, "out", None):
        write_json(args.out, doc)
    else:
        text = dumps(doc) if args.format == "json" else _text_report(doc)
        sys.stdout.write(text)


def _single(report: Report, args, extra: Optional[dict] = None) -> int:
    doc = {"schema": REPORT_SCHEMA, **report.to_json()}
    if extra:
        doc.update(extra)
    emit(doc, args)
    return EXIT_CODES[report.status]


def _many(reports: list[Report], args, config: dict) -> int:
    doc = suite_document(reports, config)
    emit(doc, args)
    return EXIT_CODES[doc["status"]]


# subcommands


def cmd_words(args) -> int:
    if args.action == "check":
        return _single(check_psi(), args)
    if args.value is None:
        raise UsageError(f"words {args.action} needs a value")
    if args.action == "psi":
        n = int(args.value)
        value: Any = psi(n)
    elif args.action == "s":
        value = s_seq(int(args.value))
    elif args.action == "inv":
        value = psi_inv(check_word(args.value))
    else:  # density
        w = check_word(args.value)
        value = {"n": psi_inv(w), "s_n": s_seq(psi_inv(w))}
    emit({"schema": REPORT_SCHEMA, "action": args.action, "input": args.value, "value": value}, args)
    return 0


def cmd_graph(args) -> int:
    theta = Theta.parse(args.theta)
    if args.action == "check":
        reports = [check_prop18(theta, n) if n <= args.exhaustive_max else check_tree(theta, n) for n in range(1, args.max_level + 1)]
        return _many(reports, args, {"theta": theta.value, "max_level": args.max_level})
    if args.action == "path":
        path = unique_path(theta, check_word(args.src), check_word(args.dst))
        emit({"schema": REPORT_SCHEMA, "theta": theta.value, "path": path}, args)
        return 0
    order = level_ordering(theta, args.level)
    emit({"schema": REPORT_SCHEMA, "theta": theta.value, "level": args.level, "ordering": order}, args)
    return 0


def cmd_ruler(args) -> int:
    if args.action == "check":
        reports = [check_ruler_periodicity(), check_palindromes(seed=resolve_seed(args.seed))]
        return _many(reports, args, {"seed": resolve_seed(args.seed)})
    if args.action == "beta":
        alpha = _alpha(args.alpha)
        emit({"schema": REPORT_SCHEMA, "alpha": str(alpha), "n": args.n, "beta": beta_word(alpha, args.n)}, args)
        return 0
    S = _sspec(args.s)
    emit({"schema": REPORT_SCHEMA, "S": S.to_json(), "members": S.members_upto(args.n)}, args)
    return 0


def cmd_cyl(args) -> int:
    if args.action == "relation":
        S = _sspec(args.s) if args.s else None
        y = _alpha(args.y) if args.y else None
        value = decide_relation(args.rel, _alpha(args.x), y, S)
        emit({"schema": REPORT_SCHEMA, "relation": args.rel, "x": args.x, "y": args.y, "value": value}, args)
        return 0
    v, eps = _int_list(args.v), _signs(args.eps)
    if len(v) != len(eps):
        raise UsageError("--v and --eps need the same length")
    if not is_reduced(v, eps):
        size = composition_domain_size(v, eps, args.depth)
        emit({"schema": REPORT_SCHEMA, "v": v, "eps": eps, "reduced": False, "domain_size": size}, args)
        return 0
    return _single(lemma27_check(v, eps, args.depth), args)


def _bounds(args) -> cond.Bounds:
    return cond.Bounds.from_json(_json_arg(args.bounds)) if args.bounds else cond.Bounds()


def cmd_cond(args) -> int:
    b = _bounds(args)
    kind = args.kind
    if kind == "replay":
        if not args.cert:
            raise UsageError("cond replay needs --cert")
        obj = _json_arg(args.cert)
        ok = cond.replay_certificate(obj)
        r = Report("cond.replay", PASS if ok else REFUTED, {"check": obj.get("check")}, {"replayed": ok})
        return _single(r, args)
    if kind == "m":
        r = cond.check_M(_sspec(args.s), b)
    elif kind == "mm":
        r = cond.mm_witness(_alpha(args.alpha), args.P, b)
    elif kind in ("perp", "perp-inv"):
        if not args.s2:
            raise UsageError(f"cond {kind} needs --s2")
        fn = cond.check_perp if kind == "perp" else cond.check_perp_inv
        r = fn(_sspec(args.s), _sspec(args.s2), args.p, b)
    elif kind == "perpperp":
        r = cond.perpperp_witness(_alpha(args.alpha), _alpha(args.alpha2), b, args.conversion)
    else:
        r = cond.shift_family_check(args.n, seed=resolve_seed(args.seed))
    doc = cond.certificate(r) if r.check in cond.CERTIFIED else {"schema": REPORT_SCHEMA, **r.to_json()}
    emit(doc, args)
    return EXIT_CODES[r.status]


def cmd_synth(args) -> int:
    if args.verify:
        table = ReductionTable.from_json(_json_arg(args.verify))
        return _single(verify_table(table), args)
    if args.family == "as" and args.s is None:
        raise UsageError("--family as needs --s")
    S = _sspec(args.s) if args.family == "as" else None
    inst = SynthesisInstance(args.family, args.depth, S, check_word(args.b), args.phi_max)
    table = synthesize(inst)
    report = verify_table(table)
    doc = table.to_json()
    doc["verification"] = report.to_json()
    emit(doc, args)
    return EXIT_CODES[worst([table.status, report.status])]


def cmd_struct(args) -> int:
    if args.action == "sweep":
        return _single(transform_sweep(args.n), args)
    if args.action == "sigma":
        sigma = _int_list(args.sigma)
        r = confirm_sigma(sigma)
        emit({"schema": REPORT_SCHEMA, "sigma": sorted(sigma), "class": classify_sigma(sigma), "confirmation": r.to_json()}, args)
        return EXIT_CODES[r.status]
    rel = FiniteRelation.from_json(_json_arg(args.rel))
    if args.action == "props":
        props = sorted(check_properties(rel))
        emit({"schema": REPORT_SCHEMA, "relation": rel.to_json(), "properties": props}, args)
        return 0
    out = transform(args.kind, rel)
    emit({"schema": REPORT_SCHEMA, "kind": args.kind, "relation": rel.to_json(), "transform": out.to_json()}, args)
    return 0


def cmd_kst(args) -> int:
    fam = FAMILIES[args.family]
    if args.action == "eval":
        w = check_word(args.alpha)
        emit({"schema": REPORT_SCHEMA, "n": args.n, "alpha": w, "image": g_eval(fam, args.n, w)}, args)
        return 0
    seed = resolve_seed(args.seed)
    # deepest layer that still has two points below the horizon
    n_fam = max(0, min(8, (args.horizon // 3).bit_length() - 1))
    reports = [family_check(fam, n_max=n_fam, horizon=args.horizon)]
    reports += [
        composition_law_check(fam, m, n, N=args.horizon, seed=seed) for n in range(1, args.n_max + 1) for m in range(n)
    ]
    return _many(reports, args, {"family": args.family, "horizon": args.horizon, "seed": seed})


def cmd_suite(args) -> int:
    groups = list(DEFAULT_GROUPS) if args.groups is None else [g for g in args.groups.split(",") if g]
    cfg = SuiteConfig(groups, _bounds(args), resolve_seed(args.seed), args.jobs)
    doc = run_suite_document(cfg)
    emit(doc, args)
    return EXIT_CODES[doc["status"]]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", help="write JSON to this file instead of stdout")

    p = _Parser(prog="cantor-lab", description="Finite checks for reductions on Cantor space.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    w = sub.add_parser("words", parents=[common], help="enumeration of finite words")
    w.add_argument("action", choices=("psi", "s", "inv", "density", "check"))
    w.add_argument("value", nargs="?")
    w.set_defaults(func=cmd_words)

    g = sub.add_parser("graph", parents=[common], help="level graphs")
    g.add_argument("action", choices=("check", "path", "order"))
    g.add_argument("--theta", default="zeros")
    g.add_argument("--max-level", type=int, default=7)
    g.add_argument("--exhaustive-max", type=int, default=7, help="levels above this only get the tree check")
    g.add_argument("--src", default="")
    g.add_argument("--dst", default="")
    g.add_argument("--level", type=int, default=0)
    g.set_defaults(func=cmd_graph)

    r = sub.add_parser("ruler", parents=[common], help="ruler sequences and index sets")
    r.add_argument("action", choices=("check", "beta", "members"))
    r.add_argument("--alpha", default="|0")
    r.add_argument("--s", default='{"kind": "omega"}')
    r.add_argument("--n", type=int, default=15)
    r.add_argument("--seed", type=int)
    r.set_defaults(func=cmd_ruler)

    c = sub.add_parser("cyl", parents=[common], help="cylinders and flip maps")
    c.add_argument("action", choices=("relation", "lemma27"))
    c.add_argument("--rel", choices=RELATIONS, default="AS")
    c.add_argument("--x", default="|0")
    c.add_argument("--y")
    c.add_argument("--s")
    c.add_argument("--v", default="0")
    c.add_argument("--eps", default="+")
    c.add_argument("--depth", type=int, default=12)
    c.set_defaults(func=cmd_cyl)

    d = sub.add_parser("cond", parents=[common], help="index-set conditions and certificates")
    d.add_argument("kind", choices=("m", "mm", "perp", "perp-inv", "perpperp", "shift", "replay"))
    d.add_argument("--s", default='{"kind": "omega"}')
    d.add_argument("--s2")
    d.add_argument("--bounds")
    d.add_argument("--alpha", default="|0")
    d.add_argument("--alpha2", default="1|0")
    d.add_argument("--P", type=int, default=3)
    d.add_argument("--p", type=int, default=2)
    d.add_argument("--n", type=int, default=0)
    d.add_argument("--conversion", type=int, default=0, help="also scan the derived conditions up to this c")
    d.add_argument("--cert", help="certificate JSON (or file) to replay")
    d.add_argument("--seed", type=int)
    d.set_defaults(func=cmd_cond)

    s = sub.add_parser("synth", parents=[common], help="build and verify reduction tables")
    s.add_argument("--family", choices=("as", "a1"), default="as")
    s.add_argument("--s")
    s.add_argument("--b", default="", help="restriction cylinder address")
    s.add_argument("--depth", type=int, default=3)
    s.add_argument("--phi-max", type=int, default=1 << 20)
    s.add_argument("--verify", help="verify an existing table JSON (or file) instead of building")
    s.set_defaults(func=cmd_synth)

    t = sub.add_parser("struct", parents=[common], help="relation transforms")
    t.add_argument("action", choices=("transform", "props", "sigma", "sweep"))
    t.add_argument("--kind", choices=("r", "rp", "s", "sp"), default="r")
    t.add_argument("--rel", default="[]")
    t.add_argument("--sigma", default="")
    t.add_argument("--n", type=int, default=3)
    t.set_defaults(func=cmd_struct)

    k = sub.add_parser("kst", parents=[common], help="rearrangement maps")
    k.add_argument("action", choices=("check", "eval"))
    k.add_argument("--family", choices=sorted(FAMILIES), default="pow2")
    k.add_argument("--horizon", type=int, default=256)
    k.add_argument("--n-max", type=int, default=6)
    k.add_argument("--n", type=int, default=0)
    k.add_argument("--alpha", default="0")
    k.add_argument("--seed", type=int)
    k.set_defaults(func=cmd_kst)

    u = sub.add_parser("suite", parents=[common], help="run check groups")
    u.add_argument("--groups", help=f"comma-separated subset of {','.join(GROUPS)}")
    u.add_argument("--bounds")
    u.add_argument("--seed", type=int)
    u.add_argument("--jobs", type=int, default=1)
    u.set_defaults(func=cmd_suite)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits on usage errors and --help; hand the code back instead
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"cantor-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"cantor-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
