"""Command-line front end.

Every command validates its inputs, computes the whole answer, then prints
it, so error paths produce no partial output.  Exit codes: 0 success,
2 malformed input, 3 infeasible model, 4 axiom violation found.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import __version__
from .axioms import run_all
from .complexity import profile
from .errors import MalformedInputError, MechanismError
from .graphs import DirectedGraph, classify, require_connected
from .mechanisms import builtin_mechanisms, planted_faults
from .minimality import (
    build_universe,
    minimal_set,
    scalarized_best,
    strongly_minimal_set,
)
from .pricing import MarketState, OfferVector, aggregate_offers, clear, net_trade, price_by_solve, price_by_trees
from .rational import format_rational, format_vector, parse_entries, parse_rational

EXIT_VIOLATION = 4
_UNIVERSE = {"mg": "Mg", "mstar": "Mstar", "special": "Special"}


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise MalformedInputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{path} is not valid JSON: {exc.msg}") from exc


def _need(args, name: str):
    value = getattr(args, name)
    if value is None:
        raise MalformedInputError(f"--{name.replace('_', '-')} is required for {args.command}")
    return value


def _graph(args) -> DirectedGraph:
    return DirectedGraph.from_json(_load_json(_need(args, "graph")))


def _offers(g: DirectedGraph, path: str) -> list[OfferVector]:
    raw = _load_json(path)
    if isinstance(raw, dict) and "offers" in raw:
        raw = raw["offers"]
    if not isinstance(raw, list) or not raw:
        raise MalformedInputError("offers file must be a nonempty list or {'offers': [...]}")
    return [OfferVector(g, parse_entries(a)) for a in raw]


def cmd_price(args) -> str:
    g = _graph(args)
    b = MarketState(g, parse_entries(_load_json(_need(args, "market"))))
    require_connected(g)
    by_trees, by_solve = price_by_trees(g, b), price_by_solve(g, b)
    if by_trees != by_solve:  # pragma: no cover, the two oracles always agree
        raise AssertionError(f"price oracles disagree: {by_trees} vs {by_solve}")
    return json.dumps(
        {
            "prices": format_vector(by_solve.prices),
            "oracles": {"trees": format_vector(by_trees.prices), "solve": format_vector(by_solve.prices)},
            "agree": True,
            "note": "normalized so p1 = 1; only ratios are meaningful",
        }
    )


def cmd_clear(args) -> str:
    g = _graph(args)
    offers = _offers(g, _need(args, "offers"))
    require_connected(g)
    b = aggregate_offers(g, offers)
    p = price_by_solve(g, b)
    returns = clear(g, offers)
    given = [a.aggregate() for a in offers]
    conserved = all(sum(col) == sum(col2) for col, col2 in zip(zip(*returns), zip(*given)))
    values = [p.value(net_trade(g, a, b, p)) for a in offers]
    audit = [
        "conservation: " + ("exact" if conserved else "VIOLATED"),
        "value conservation: " + ("exact" if all(v == 0 for v in values) else "VIOLATED"),
    ]
    return json.dumps(
        {
            "prices": format_vector(p.prices),
            "returns": [format_vector(r) for r in returns],
            "net_trades": [format_vector(net_trade(g, a, b, p)) for a in offers],
            "audit": audit,
        }
    )


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["graph_id", "m", "edges", "tau_max", "pi_max", "k_total"])
    w.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _edges_text(g: DirectedGraph) -> str:
    return " ".join(f"{i}-{j}" for i, j in g.edges)


def cmd_complexity(args) -> str:
    g = _graph(args)
    prof = profile(g)
    if args.format == "csv":
        return _csv([[g.mask, g.m, _edges_text(g), prof.tau_max, prof.pi_max, prof.k_total]])
    out = prof.to_dict()
    out["class"] = classify(g)
    return json.dumps(out)


def _m(args) -> int:
    m = _need(args, "m")
    if m < 2:
        raise MalformedInputError("--m must be at least 2")
    return m


def cmd_minimal(args) -> str:
    m = _m(args)
    universe = _UNIVERSE[args.universe or "mg"]
    uni = build_universe(m, args.workers, args.cache)
    if args.order == "componentwise":
        if universe != "Mg":
            raise MalformedInputError("the componentwise order is taken over the mg universe")
        report = minimal_set(m, uni)
    else:
        if universe == "Special":
            raise MalformedInputError("worst-case minimality needs --universe mg or mstar")
        report = strongly_minimal_set(m, universe, uni)
    if args.format == "csv":
        return _csv([[e.class_id, m, _edges_text(e.graph), e.profile.tau_max, e.profile.pi_max, e.profile.k_total] for e in report.minimal_graphs])
    return json.dumps(report.to_dict())


def cmd_scalarize(args) -> str:
    m = _m(args)
    lam = parse_rational(_need(args, "lambda_"))
    mu = parse_rational(_need(args, "mu"))
    universe = _UNIVERSE[args.universe or "special"]
    uni = build_universe(m, args.workers, args.cache) if universe != "Special" else None
    winners = scalarized_best(m, lam, mu, universe, uni)
    out = {
        "m": m,
        "lambda": format_rational(lam),
        "mu": format_rational(mu),
        "universe": universe,
        "objective": "minimize lambda*pi_max + mu*tau_max",
        "winners": [
            {"name": classify(g), "graph_id": g.mask, "edges": [list(e) for e in g.edges], "score": format_rational(s)}
            for g, s in winners
        ],
    }
    return json.dumps(out)


def cmd_verify(args) -> tuple[str, int]:
    fixtures = {"builtin": builtin_mechanisms, "faults": planted_faults}
    chosen = ["builtin", "faults"] if args.fixtures == "all" else [args.fixtures]
    lines, violated = [], False
    for key in chosen:
        for mech in fixtures[key]():
            res = run_all(mech, args.samples, args.seed)
            for reports in res.reports.values():
                lines.extend(r.to_json() for r in reports)
            violated |= bool(res.failed)
            summary = {
                "mechanism": mech.name,
                "target": mech.target,
                "failed": res.failed,
                "checked": list(res.reports),
                "status": "violations found" if res.failed else "no violation found",
                "samples": args.samples,
                "seed": args.seed,
            }
            lines.append(json.dumps(summary, sort_keys=True))
    return "\n".join(lines), EXIT_VIOLATION if violated else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gmech", description="Exact graphical exchange mechanisms.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, *flags):
        p = sub.add_parser(name, help=help_text)
        for flag in flags:
            flag(p)
        return p

    graph = lambda p: p.add_argument("--graph", help="graph JSON file")  # noqa: E731
    fmt = lambda p: p.add_argument("--format", choices=("json", "csv"), default="json")  # noqa: E731
    m = lambda p: p.add_argument("--m", type=int, help="number of commodities")  # noqa: E731
    seed = lambda p: p.add_argument("--seed", type=int, default=0)  # noqa: E731

    def bulk(p):
        p.add_argument("--cache", help="directory for the per-m results cache")
        p.add_argument("--workers", type=int, default=1, help="processes for profiling; never changes output")

    add("price", "prices of a market state", graph, lambda p: p.add_argument("--market", help="market state JSON"))
    add("clear", "clear a list of trader offers", graph, lambda p: p.add_argument("--offers", help="offers JSON"))
    add("complexity", "complexity profile of a graph", graph, fmt)
    add(
        "minimal",
        "minimal mechanisms by exhaustive search",
        m,
        fmt,
        bulk,
        lambda p: p.add_argument("--order", choices=("componentwise", "worst-case"), default="worst-case"),
        lambda p: p.add_argument("--universe", choices=("mg", "mstar")),
    )
    add(
        "scalarize",
        "minimizers of lambda*pi + mu*tau",
        m,
        bulk,
        lambda p: p.add_argument("--lambda", dest="lambda_", help="weight on price complexity"),
        lambda p: p.add_argument("--mu", help="weight on time complexity"),
        lambda p: p.add_argument("--universe", choices=tuple(_UNIVERSE)),
    )
    add(
        "verify",
        "run the axiom harness on shipped fixtures",
        seed,
        lambda p: p.add_argument("--fixtures", choices=("builtin", "faults", "all"), default="builtin"),
        lambda p: p.add_argument("--samples", type=int, default=100),
    )
    return parser


_COMMANDS = {
    "price": cmd_price,
    "clear": cmd_clear,
    "complexity": cmd_complexity,
    "minimal": cmd_minimal,
    "scalarize": cmd_scalarize,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = _COMMANDS[args.command](args)
    except MechanismError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    text, code = result if isinstance(result, tuple) else (result, 0)
    if text:
        print(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
