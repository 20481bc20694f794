"""Command-line entry point: exact, approx, motif, verify and gen subcommands.

Machine output is a single JSON document (stdout or ``--output``); a one-line
human summary goes to stderr. Exit codes: 0 ok, 1 failed identity or
inconsistent oracle, 2 usage or parse error, 3 resource cap.
"""
from __future__ import annotations

import argparse
import json
import math
import secrets
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any

from .brute import BRUTE_SUBSET_CAP, brute_count, brute_count_labelled, brute_count_motif
from .errors import CapExceededError, NonMonotonePropertyError, OracleInconsistencyError
from .fptras import approx_count_labelled, approx_count_motif, approx_count_unlabelled
from .graph import (
    GraphFormatError, dump_coloring, dump_graph, load_coloring, load_graph, parse_motif, random_coloring,
    random_graph,
)
from .properties import BUILTIN_PROPERTIES, Property, get_property, load_pattern_property
from .verify import VerifyConfig, run_verification

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
DEFAULT_SEED = 0


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    graph: str | None = None
    coloring: str | None = None
    property: str | None = None
    patterns: str | None = None
    k: int | None = None
    motif: str | None = None
    epsilon: float = 0.1
    delta: float = 0.05
    seed: int = DEFAULT_SEED
    family: str = "auto"
    method: str = "auto"
    workers: int = 1
    labelled: bool = False
    output: str | None = None
    k_max: int = 4
    instances: int = 5
    inject_fault: bool = False
    n: int | None = None
    p: float = 0.3
    colors: int | None = None
    timing: bool = False

    def validate(self) -> None:
        if self.epsilon <= 0:
            raise UsageError("--eps must be positive")
        if not 0 < self.delta < 1:
            raise UsageError("--delta must lie in (0, 1)")
        if self.k is not None and self.k < 1:
            raise UsageError("-k must be at least 1")
        if self.workers < 1:
            raise UsageError("--workers must be at least 1")
        inputs = () if self.command == "gen" else (self.graph, self.coloring, self.patterns)
        for path in inputs:
            if path is not None and not Path(path).is_file():
                raise UsageError(f"file not found: {path}")


def _seed(text: str) -> int:
    if text == "random":
        return secrets.randbits(32)
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("seed must be an integer or 'random'") from None


def _read(path: str) -> str:
    return Path(path).read_text()


def _resolve_property(cfg: RunConfig) -> tuple[Property, int]:
    if cfg.patterns is not None:
        phi, k = load_pattern_property(_read(cfg.patterns), name=Path(cfg.patterns).stem)
        if cfg.k is not None and cfg.k != k:
            raise UsageError(f"-k {cfg.k} conflicts with the pattern file's k = {k}")
        return phi, k
    if cfg.property is None:
        raise UsageError("give --property or --patterns")
    if cfg.k is None:
        raise UsageError("-k is required with --property")
    try:
        return get_property(cfg.property), cfg.k
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None


def _estimate_dict(est, timing: bool) -> dict[str, Any]:
    d = est.to_dict()
    if not timing:
        d.pop("wall_time_ms", None)
    return d


def cmd_exact(cfg: RunConfig) -> tuple[dict, str]:
    g = load_graph(_read(cfg.graph))
    phi, k = _resolve_property(cfg)
    out: dict[str, Any] = {"n": g.n, "m": g.m, "k": k, "property": phi.name}
    if phi.symmetric:
        count = brute_count(g, k, phi)
        out.update(count=count, labelled=count * math.factorial(k))
        summary = f"{count} {phi.name} {k}-subsets (exact)"
    else:
        labelled = brute_count_labelled(g, k, phi)
        out.update(labelled=labelled)
        summary = f"{labelled} {phi.name} labelled {k}-tuples (exact)"
    return out, summary


def cmd_approx(cfg: RunConfig) -> tuple[dict, str]:
    g = load_graph(_read(cfg.graph))
    phi, k = _resolve_property(cfg)
    kwargs = dict(family_mode=cfg.family, workers=cfg.workers)
    if cfg.labelled or not phi.symmetric:
        est = approx_count_labelled(g, k, phi, cfg.epsilon, cfg.delta, cfg.seed, **kwargs)
    else:
        est = approx_count_unlabelled(g, k, phi, cfg.epsilon, cfg.delta, cfg.seed, **kwargs)
    out = _estimate_dict(est, cfg.timing)
    kind = "labelled tuples" if est.extra.get("labelled") else "subsets"
    return out, f"~{float(est.value):.4f} {phi.name} {k}-{kind} ({est.trials} trials)"


def cmd_motif(cfg: RunConfig) -> tuple[dict, str]:
    if cfg.coloring is None or cfg.motif is None:
        raise UsageError("motif needs --coloring and --motif")
    g = load_graph(_read(cfg.graph))
    c = load_coloring(_read(cfg.coloring), g.n)
    m = parse_motif(cfg.motif, c)
    if m.k > g.n:
        raise UsageError(f"motif size {m.k} exceeds the number of vertices {g.n}")
    method = cfg.method
    if method == "auto":
        method = "exact" if math.comb(g.n, m.k) <= BRUTE_SUBSET_CAP else "approx"
    base = {"n": g.n, "m": g.m, "k": m.k, "motif": cfg.motif, "method": method}
    if method == "exact":
        count = brute_count_motif(g, c, m)
        base["count"] = count
        return base, f"{count} occurrences of {cfg.motif} (exact)"
    est = approx_count_motif(g, c, m, cfg.epsilon, cfg.delta, cfg.seed, family_mode=cfg.family,
                             workers=cfg.workers)
    base.update(_estimate_dict(est, cfg.timing))
    return base, f"~{float(est.value):.4f} occurrences of {cfg.motif} ({est.trials} trials)"


def cmd_verify(cfg: RunConfig) -> tuple[dict, str]:
    report = run_verification(VerifyConfig(k_max=cfg.k_max, seed=cfg.seed, instances=cfg.instances,
                                           inject_fault=cfg.inject_fault, timing=cfg.timing))
    return report, f"{report['passed']} identities passed, {report['failed']} failed"


def cmd_gen(cfg: RunConfig) -> tuple[dict, str]:
    if cfg.n is None or cfg.n < 0:
        raise UsageError("gen needs --n >= 0")
    if not 0 <= cfg.p <= 1:
        raise UsageError("--p must lie in [0, 1]")
    g = random_graph(cfg.n, cfg.p, cfg.seed)
    out: dict[str, Any] = {"n": g.n, "m": g.m, "graph_text": dump_graph(g)}
    if cfg.colors:
        out["coloring_text"] = dump_coloring(random_coloring(cfg.n, cfg.colors, cfg.seed))
    if cfg.graph:
        Path(cfg.graph).write_text(out.pop("graph_text"))
        out["graph_file"] = cfg.graph
    if cfg.coloring and "coloring_text" in out:
        Path(cfg.coloring).write_text(out.pop("coloring_text"))
        out["coloring_file"] = cfg.coloring
    return out, f"generated G({cfg.n}, {cfg.p}) with {g.m} edges"


COMMANDS = {"exact": cmd_exact, "approx": cmd_approx, "motif": cmd_motif, "verify": cmd_verify, "gen": cmd_gen}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fptcount", description="Exact and approximate induced-subgraph counting.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, graph=True):
        if graph:
            p.add_argument("--graph", required=True, help="edge-list file")
        p.add_argument("--seed", type=_seed, default=DEFAULT_SEED, help="integer or 'random'")
        p.add_argument("--output", help="write the JSON report here instead of stdout")
        p.add_argument("--timing", action="store_true", help="include wall-clock times in the report")

    def prop(p):
        grp = p.add_mutually_exclusive_group(required=True)
        grp.add_argument("--property", choices=sorted(BUILTIN_PROPERTIES))
        grp.add_argument("--patterns", help="pattern-list file ('k p' then one pattern per line)")
        p.add_argument("-k", type=int)

    def approx_opts(p):
        p.add_argument("--eps", dest="epsilon", type=float, default=0.1)
        p.add_argument("--delta", type=float, default=0.05)
        p.add_argument("--family", choices=["auto", "exact-greedy", "randomized"], default="auto")
        p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("exact", help="brute-force count")
    common(p)
    prop(p)

    p = sub.add_parser("approx", help="randomised approximate count")
    common(p)
    prop(p)
    approx_opts(p)
    p.add_argument("--labelled", action="store_true", help="report the labelled (ordered tuple) count")

    p = sub.add_parser("motif", help="count connected occurrences of a colour multiset")
    common(p)
    p.add_argument("--coloring", required=True)
    p.add_argument("--motif", required=True, help="e.g. red:1,blue:2")
    p.add_argument("--method", choices=["auto", "exact", "approx"], default="auto")
    approx_opts(p)

    p = sub.add_parser("verify", help="run the partition-lattice and reduction identity suites")
    common(p, graph=False)
    p.add_argument("--k-max", type=int, default=4)
    p.add_argument("--instances", type=int, default=5)
    p.add_argument("--inject-fault", action="store_true", help="negative control: corrupt one matrix entry")

    p = sub.add_parser("gen", help="write a seeded G(n, p) instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, default=0.3)
    p.add_argument("--colors", type=int, help="also draw a colouring with this many colours")
    p.add_argument("--graph", help="graph output path (default: embed in report)")
    p.add_argument("--coloring", help="colouring output path")
    common(p, graph=False)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in vars(args).items() if k in fields})


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    try:
        cfg.validate()
        result, summary = COMMANDS[cfg.command](cfg)
    except (UsageError, GraphFormatError, NonMonotonePropertyError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceededError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except OracleInconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_FAILED

    report = {"config": asdict(cfg), "result": result}
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    print(summary, file=sys.stderr)
    if cfg.command == "verify" and not result["all_passed"]:
        return EXIT_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
