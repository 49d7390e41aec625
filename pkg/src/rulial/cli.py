"""Command-line driver.

Exit codes: 0 success, 1 a requested check failed, 2 usage error,
3 a node or rule-step cap was hit.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections import Counter
from pathlib import Path

from . import ca as ca_mod
from . import causal, detspace, export, group, multiway, verify
from .cache import ExperimentSpec, GraphCache
from .machine import MachineSpec, parse_config, rule_from_id
from .multiway import DEFAULT_MAX_NODES, SizeCapExceeded

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

log = logging.getLogger("rulial")

# ExperimentSpec fields and the flags that set them
CORE = {"s": "--s", "k": "--k", "moves": "--moves", "tape": "--tape", "n": "--n",
        "steps": "--t", "init": "--init", "rules": "--rules", "mode": "--mode",
        "fmt": "--format", "output": "--out", "cache_dir": "--cache-dir",
        "max_nodes": "--max-nodes", "workers": "--workers"}
# argparse destinations that fill those fields
CORE_ARGS = {"s", "k", "moves", "tape", "n", "t", "init", "rules", "mode", "format", "out",
             "cache_dir", "max_nodes", "workers"}
FLAGS = {"truncate", "no_cache", "full", "include_figure", "list", "table"}


class UsageError(Exception):
    pass


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def parse_rules(text: str | None) -> tuple[int, ...]:
    """'all', 'even', '30,110' or ranges such as '0-127'."""
    if text is None or text == "all":
        return tuple(range(256))
    if text == "even":
        return tuple(ca_mod.even_rules())
    out = set()
    for part in text.split(","):
        lo, _, hi = part.partition("-")
        try:
            out.update(range(int(lo), int(hi or lo) + 1))
        except ValueError:
            raise UsageError(f"bad rule list {text!r}") from None
    return tuple(sorted(out))


def _machine_args(p: argparse.ArgumentParser, n_help="tape length for cyclic or bounded tapes"):
    p.add_argument("--s", type=int, default=1, help="head states")
    p.add_argument("--k", type=int, default=2, help="tape colors")
    p.add_argument("--moves", type=_int_list, default=(-1, 1), help="head offsets, e.g. -1,1")
    p.add_argument("--tape", choices=("unbounded", "cyclic", "bounded"), default="unbounded")
    p.add_argument("--n", type=int, help=n_help)
    p.add_argument("--init", help="initial configuration key (default: blank tape, state 0)")


def _common(p: argparse.ArgumentParser):
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--cache-dir")
    p.add_argument("--save-spec", help="write the run's parameters as JSON for replay")
    p.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rulial", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="rulial multiway graph")
    _machine_args(p)
    _common(p)
    p.add_argument("--t", type=int, help="steps (omit on finite tapes to saturate)")
    p.add_argument("--format", choices=export.GRAPH_FORMATS, default="json")
    p.add_argument("--truncate", action="store_true", help="stop at the node cap instead of failing")
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--slice", type=int, help="emit the slice graph of this layer instead")
    p.add_argument("--foliation", choices=("first_reach", "step"), default="first_reach")
    p.add_argument("--check", choices=("transitivity",))

    p = sub.add_parser("growth", help="geodesic ball counts")
    _machine_args(p)
    _common(p)
    p.add_argument("--t", type=int, default=10)
    p.add_argument("--mode", choices=("directed", "undirected", "both"), default="directed")
    p.add_argument("--report", help="directory for CSV and figure")
    p.add_argument("--check", choices=("golden", "formula"))

    p = sub.add_parser("group", help="Turing machine group")
    p.add_argument("--n", type=int, required=True, help="cyclic tape length")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--s", type=int, default=1)
    _common(p)
    p.add_argument("--check", default=None,
                   help="comma list of axioms, relations, structure, cayley, ccc, or all")
    p.add_argument("--samples", type=int, help="sample associativity instead of exhaustive")
    p.add_argument("--table", action="store_true", help="print the multiplication table as CSV")
    p.add_argument("--cayley", choices=("standard", "minimal"), help="export a Cayley graph")
    p.add_argument("--side", choices=("left", "right"), default="left")
    p.add_argument("--format", choices=export.GRAPH_FORMATS, default="json")

    p = sub.add_parser("causal", help="causal graphs")
    _machine_args(p)
    _common(p)
    p.add_argument("--mode", choices=("det", "multiway", "merge", "individual"), default="det")
    p.add_argument("--t", type=int, default=4)
    p.add_argument("--rule", type=int, help="deterministic rule id")
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--format", choices=export.GRAPH_FORMATS, default="json")

    p = sub.add_parser("det", help="deterministic rule space")
    _machine_args(p)
    _common(p)
    p.add_argument("--mode", choices=("reach", "overlay", "path", "slack"), default="reach")
    p.add_argument("--t", type=int, default=15)
    p.add_argument("--rule", type=int)
    p.add_argument("--format", choices=export.GRAPH_FORMATS, default="json")
    p.add_argument("--report", help="directory for CSV and figure")
    p.add_argument("--check", choices=("golden",))

    p = sub.add_parser("ca", help="elementary cellular automata reach graph")
    _common(p)
    p.add_argument("--t", type=int, default=50)
    p.add_argument("--rules", default="all", help="all, even, or a list like 30,90-110")
    p.add_argument("--mode", choices=("counts", "geodesic", "graph", "show"), default="counts")
    p.add_argument("--format", choices=export.GRAPH_FORMATS, default="json")
    p.add_argument("--report", help="directory for CSV and figure")
    p.add_argument("--check", choices=("golden", "figure"))

    p = sub.add_parser("verify", help="check published tables")
    p.add_argument("--only", type=lambda x: x.split(","), default=None)
    p.add_argument("--skip", type=lambda x: x.split(","), default=None)
    p.add_argument("--full", action="store_true", help="whole table rows, not just the required prefix")
    p.add_argument("--include-figure", action="store_true", help="also run the literal CA figure check")
    p.add_argument("--list", action="store_true")

    p = sub.add_parser("replay", help="rerun a saved ExperimentSpec")
    p.add_argument("spec", help="JSON written by --save-spec")
    return ap


def experiment_from_args(args) -> ExperimentSpec:
    d = vars(args)
    rules = d.get("rules")
    extra = []
    for name, value in sorted(d.items()):
        if name in CORE_ARGS or name in ("command", "verbose", "save_spec", "spec"):
            continue
        if value is None or value is False:
            continue
        if isinstance(value, list):
            value = ",".join(value)
        extra.append((name, "1" if value is True else str(value)))
    try:
        return ExperimentSpec(
            command=args.command,
            s=d.get("s", 1), k=d.get("k", 2), moves=tuple(d.get("moves", (-1, 1))),
            tape=d.get("tape", "cyclic" if args.command == "group" else "unbounded"),
            n=d.get("n"), steps=d.get("t"), init=d.get("init"),
            rules=parse_rules(rules) if rules is not None else None,
            mode=d.get("mode"), fmt=d.get("format"), output=d.get("out"),
            cache_dir=d.get("cache_dir"), max_nodes=d.get("max_nodes", DEFAULT_MAX_NODES),
            workers=d.get("workers", 1), extra=tuple(extra))
    except ValueError as err:
        raise UsageError(str(err)) from None


def spec_to_argv(exp: ExperimentSpec) -> list[str]:
    argv = [exp.command]
    values = {"s": exp.s, "k": exp.k, "moves": ",".join(map(str, exp.moves)),
              "n": exp.n, "steps": exp.steps, "init": exp.init, "mode": exp.mode,
              "fmt": exp.fmt, "output": exp.output, "cache_dir": exp.cache_dir,
              "max_nodes": exp.max_nodes, "workers": exp.workers,
              "rules": ",".join(map(str, exp.rules)) if exp.rules is not None else None}
    if exp.command != "group":
        values["tape"] = exp.tape
    if exp.command in ("ca", "verify"):
        for x in ("s", "k", "moves", "tape", "n", "init"):
            values.pop(x, None)
    if exp.command == "verify":
        for x in ("steps", "mode", "fmt", "output", "cache_dir", "max_nodes", "workers", "rules"):
            values.pop(x, None)
    if exp.command == "group":
        for x in ("moves", "init", "steps", "mode", "rules", "tape"):
            values.pop(x, None)
    for name, value in values.items():
        if value is not None and name in CORE:
            argv.append(f"{CORE[name]}={value}")
    for name, value in exp.extra:
        flag = "--" + name.replace("_", "-")
        argv.append(flag if name in FLAGS else f"{flag}={value}")
    return argv


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
        log.info("wrote %s", out)
    else:
        sys.stdout.write(text)


def _report_dir(path: str) -> Path:
    d = Path(path)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _init(exp: ExperimentSpec, spec: MachineSpec):
    if exp.init is None:
        return spec.blank()
    c = parse_config(exp.init)
    spec.check_config(c)
    return c


def _print_rows(rows) -> bool:
    ok_all = True
    for label, ok, detail in rows:
        ok_all &= ok
        print(f"{'PASS' if ok else 'FAIL'} {label}" + (f": {detail}" if detail else ""))
    return ok_all


def cmd_build(exp: ExperimentSpec, args) -> int:
    spec = exp.machine()
    init = _init(exp, spec)
    cache = None if args.no_cache else GraphCache(exp.cache_dir)
    g = cache.get(exp) if cache else None
    if g is None:
        g = multiway.build_rulial_graph(spec, init, exp.steps, max_nodes=exp.max_nodes,
                                        workers=exp.workers,
                                        on_cap="truncate" if args.truncate else "raise")
        if cache:
            cache.put(exp, g)
    else:
        log.info("cache hit")
    if g.truncated:
        print(f"warning: graph truncated at depth {g.depth} by the node cap", file=sys.stderr)
    if args.check == "transitivity":
        rep = multiway.check_vertex_transitivity(g)
        _print_rows([(f"vertex transitivity ({rep.method})", bool(rep), rep.reason)])
        return EXIT_OK if rep else EXIT_CHECK
    graph = g if args.slice is None else multiway.rulial_slice(g, args.slice, args.foliation)
    _emit(export.render(graph, exp.fmt), exp.output)
    return EXIT_OK


def cmd_growth(exp: ExperimentSpec, args) -> int:
    spec = exp.machine()
    init = _init(exp, spec)
    modes = ("directed", "undirected") if exp.mode == "both" else (exp.mode,)
    seqs = []
    for mode in modes:
        fn = multiway.directed_ball_counts if mode == "directed" else multiway.undirected_ball_counts
        seqs.append(fn(spec, init, exp.steps, max_nodes=exp.max_nodes))
    if len(seqs) == 1:
        text = export.growth_csv(seqs[0])
    else:
        text = export.table_csv(["t", "directed", "undirected"],
                                zip(range(exp.steps + 1), seqs[0].counts, seqs[1].counts),
                                f"rulial growth s={spec.s} k={spec.k} mode=both")
    _emit(text, exp.output)
    if args.report:
        from .plotting import plot_growth
        d = _report_dir(args.report)
        stem = f"growth_s{spec.s}_k{spec.k}_{exp.mode}"
        (d / f"{stem}.csv").write_text(text, encoding="utf-8")
        plot_growth(seqs, d / f"{stem}.png")
    if args.check == "golden":
        rows = []
        for seq in seqs:
            name = f"{seq.mode}_s{spec.s}_k{spec.k}"
            if name not in verify.golden_names():
                raise UsageError(f"no published row for {name}")
            want = verify.load_golden(name)[:len(seq.counts)]
            rows.append(verify._compare(name, seq.counts[:len(want)], want))
        return EXIT_OK if _print_rows(rows) else EXIT_CHECK
    if args.check == "formula":
        if seqs[0].mode != "directed" or spec.moves != (-1, 1) or spec.tape != "unbounded":
            raise UsageError("closed forms cover directed counts with default moves on an unbounded tape")
        rows = []
        for t, c in enumerate(seqs[0].counts):
            f = multiway.ball_count_formula(spec.s, spec.k, t)
            if f is not None:
                rows.append((f"closed form t={t}", f == c, f"{c} vs {f}"))
        return EXIT_OK if _print_rows(rows) else EXIT_CHECK
    return EXIT_OK


GROUP_CHECKS = ("axioms", "relations", "structure", "cayley", "ccc")


def cmd_group(exp: ExperimentSpec, args) -> int:
    n = exp.n
    if n is None or n < 1:
        raise UsageError("--n must be a positive integer")
    checks = []
    if args.check:
        checks = list(GROUP_CHECKS) if args.check == "all" else args.check.split(",")
        unknown = set(checks) - set(GROUP_CHECKS)
        if unknown:
            raise UsageError(f"unknown check(s) {', '.join(sorted(unknown))}")
    ok = True
    for name in checks:
        if name == "axioms":
            rep = group.check_axioms(n, exp.k, samples=args.samples)
            ok &= _print_rows((k, v, "") for k, v in rep.checks.items())
        elif name == "relations":
            rep = group.check_relations(n)
            ok &= _print_rows((k, v, "") for k, v in rep.checks.items())
            perm = rep.details["permutation"]
            if not perm:
                ok &= _print_rows((f"permutation {k}", v, "") for k, v in perm.checks.items())
        elif name == "structure":
            rep = group.identify_group(n)
            ok &= _print_rows((k, v, "") for k, v in rep.checks.items())
            print(f"# order {rep.details['order']}, element orders {rep.details['order_statistics']}")
        elif name == "cayley":
            res = group.isomorphic_to_rulial(n, exp.k, exp.s, args.side)
            ok &= _print_rows([(f"{args.side} Cayley graph isomorphic to cyclic rulial graph",
                                bool(res), res.reason)])
        elif name == "ccc":
            ok &= _print_rows([(f"minimal Cayley graph is CCC_{n}",
                                group.is_cube_connected_cycles(group.minimal_cayley_undirected(n), n),
                                "")])
    if args.table:
        _emit(export.multiplication_table_csv(group.multiplication_table(n, exp.k)), exp.output)
    elif args.cayley:
        gens = (list(group.minimal_generators(n)) if args.cayley == "minimal"
                else group.standard_generators(n, exp.k, exp.s))
        cg = group.cayley_graph(n, gens, exp.k, exp.s, args.side)
        _emit(export.render(cg.to_networkx(), exp.fmt), exp.output)
    elif not checks:
        print(f"order {n * exp.s * exp.k ** n}")
    return EXIT_OK if ok else EXIT_CHECK


def _need_rule(args):
    if args.rule is None:
        raise UsageError("--rule is required for this mode")
    return args.rule


def cmd_causal(exp: ExperimentSpec, args) -> int:
    spec = exp.machine()
    init = _init(exp, spec)
    t = exp.steps
    if exp.mode == "det":
        g = causal.det_causal_graph(rule_from_id(spec, _need_rule(args)), init, t)
        _emit(export.render(g.to_networkx(), exp.fmt), exp.output)
    elif exp.mode == "multiway":
        mw = causal.rulial_multiway_causal_graph(spec, init, t, max_nodes=exp.max_nodes)
        if exp.output:
            _emit(export.render(mw.to_networkx(), exp.fmt), exp.output)
        rows = [(layer, len(mw.events_at(layer))) for layer in range(1, t + 1)]
        sys.stdout.write(export.table_csv(["step", "events"], rows, "rulial multiway causal events"))
    elif exp.mode == "individual":
        mw = causal.rulial_multiway_causal_graph(spec, init, t, max_nodes=exp.max_nodes)
        ig = causal.extract_individual_causal_graph(mw, rule_from_id(spec, _need_rule(args)), init, t)
        _emit(export.render(ig.graph, exp.fmt), exp.output)
    else:
        ws = causal.merge_witnesses(spec, init, t, args.radius)
        missing = [w for w in ws if w.witness is None]
        print(f"{'PASS' if not missing else 'FAIL'} merge witnesses: "
              f"{len(ws) - len(missing)}/{len(ws)} branching pairs reconverge within {args.radius} steps")
        return EXIT_CHECK if missing else EXIT_OK
    return EXIT_OK


def cmd_det(exp: ExperimentSpec, args) -> int:
    spec = exp.machine()
    init = _init(exp, spec)
    t = exp.steps
    if exp.mode == "reach":
        p = detspace.det_reach_profile(spec, init, t)
        text = export.reach_csv(p)
        _emit(text, exp.output)
        if args.report:
            from .plotting import plot_layers, plot_reach
            d = _report_dir(args.report)
            stem = f"reach_s{spec.s}_k{spec.k}"
            (d / f"{stem}.csv").write_text(text, encoding="utf-8")
            plot_reach(p, d / f"{stem}.png")
            layers = detspace.geodesic_layer_profile(p)
            (d / f"{stem}_geodesic.csv").write_text(
                export.table_csv(["distance", "nodes"], enumerate(layers)), encoding="utf-8")
            plot_layers(layers, d / f"{stem}_geodesic.png")
        if args.check == "golden":
            name = f"det_reach_s{spec.s}_k{spec.k}"
            if name not in verify.golden_names() or exp.init is not None:
                raise UsageError(f"no published sequence for {name} from this start")
            want = verify.load_golden(name)[:t + 1]
            return EXIT_OK if _print_rows([verify._compare(name, p.cumulative[:len(want)], want)]) \
                else EXIT_CHECK
    elif exp.mode == "overlay":
        p = detspace.det_reach_profile(spec, init, t)
        ov = detspace.overlay(multiway.build_rulial_graph(spec, init, t, max_nodes=exp.max_nodes), p)
        print(f"nodes {ov.reachable_nodes}/{len(ov.graph)} edges "
              f"{ov.reachable_edges}/{len(ov.graph.edges)}")
        if exp.output:
            _emit(export.render(ov.to_networkx(), exp.fmt), exp.output)
    elif exp.mode == "path":
        mp = detspace.machine_path(rule_from_id(spec, _need_rule(args)), init, t)
        for key in mp.keys:
            print(key)
        print(f"# distance {mp.distance}, slack {mp.slack}"
              + (f", halted at {mp.halted_at}" if mp.halted_at is not None else ""))
    else:
        g = multiway.build_rulial_graph(spec, init, t, max_nodes=exp.max_nodes)
        slack = Counter(detspace.machine_path(rule_from_id(spec, r), init, t, g).slack
                        for r in range(spec.rule_count))
        _emit(export.table_csv(["slack", "rules"], sorted(slack.items()),
                               f"rulial path slack s={spec.s} k={spec.k} t={t}"), exp.output)
    return EXIT_OK


def cmd_ca(exp: ExperimentSpec, args) -> int:
    rules = exp.rules
    if exp.mode == "show":
        if len(rules) != 1:
            raise UsageError("--mode show needs a single rule")
        rows = ca_mod.ca_evolve(rules[0], ca_mod.SEED, exp.steps)
        for c in rows:
            print("".join(".#"[c.cell(x)] for x in range(-exp.steps, exp.steps + 1)))
        return EXIT_OK
    g = ca_mod.ca_reach_graph(rules, exp.steps, max_nodes=exp.max_nodes)
    if exp.mode == "graph":
        _emit(export.render(g, exp.fmt), exp.output)
    elif exp.mode == "geodesic":
        layers = ca_mod.ca_geodesic_layers(g)
        text = export.table_csv(["distance", "nodes"], enumerate(layers),
                                f"rulial ca geodesic layers t={exp.steps}")
        _emit(text, exp.output)
        if args.report:
            from .plotting import plot_layers
            d = _report_dir(args.report)
            (d / "ca_geodesic.csv").write_text(text, encoding="utf-8")
            plot_layers(layers, d / "ca_geodesic.png")
    else:
        text = export.ca_counts_csv(g)
        _emit(text, exp.output)
        if args.report:
            from .plotting import plot_ca_counts
            d = _report_dir(args.report)
            (d / "ca_counts.csv").write_text(text, encoding="utf-8")
            plot_ca_counts(g.counts, d / "ca_counts.png")
    if args.check == "figure":
        if exp.steps < 50:
            raise UsageError("the figure check needs --t 50 or more")
        return EXIT_OK if _print_rows(verify.ca_figure_rows(g.counts)) else EXIT_CHECK
    if args.check == "golden":
        want = verify.load_golden("ca_counts_all256")
        n = min(len(want), len(g.counts))
        if rules != tuple(range(256)):
            raise UsageError("the derived record covers all 256 rules")
        return EXIT_OK if _print_rows([verify._compare("ca counts", g.counts[:n], want[:n])]) \
            else EXIT_CHECK
    return EXIT_OK


def cmd_verify(exp: ExperimentSpec, args) -> int:
    if args.list:
        for c in verify.CHECKS:
            print(c.name + ("" if c.default else " (opt-in)"))
        return EXIT_OK
    try:
        checks = verify.select(args.only, args.skip, args.include_figure)
    except ValueError as err:
        raise UsageError(str(err)) from None
    ok = verify.run_checks(checks, args.full)
    print("ALL PASS" if ok else "SOME CHECKS FAILED")
    return EXIT_OK if ok else EXIT_CHECK


COMMANDS = {"build": cmd_build, "growth": cmd_growth, "group": cmd_group, "causal": cmd_causal,
            "det": cmd_det, "ca": cmd_ca, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(message)s")
    if args.command == "replay":
        try:
            exp = ExperimentSpec.from_json(Path(args.spec).read_text(encoding="utf-8"))
        except (OSError, ValueError, TypeError, KeyError) as err:
            print(f"error: cannot load {args.spec}: {err}", file=sys.stderr)
            return EXIT_USAGE
        return main(spec_to_argv(exp))
    try:
        exp = experiment_from_args(args)
        if getattr(args, "save_spec", None):
            Path(args.save_spec).write_text(exp.to_json() + "\n", encoding="utf-8")
        return COMMANDS[args.command](exp, args)
    except (SizeCapExceeded, detspace.RuleStepCapExceeded) as err:
        print(f"error: cap exceeded: {err}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
