"""Command-line front end: graph generation, parameter oracles, game
solving, certificate verification, match duels, and the approximation
routine.  All outputs are deterministic for a fixed input and seed.

Exit codes: 0 ok; 2 limit exceeded; 3 parse error; 4 certificate schema
error; 5 illegal strategy move.
"""

import argparse
import json
import sys

from . import certificates as certs
from . import games, params, twinwidth
from .errors import (CertificateInvalid, GenerationError, IllegalMoveError,
                     LimitExceeded, ParseError, SchemaError)
from .graphs import (FAMILIES, INF, ColoredGraph, OrderedGraph, generate,
                     sniff_and_parse, write_graph)

DEFAULT_SEED = 1729


def _arm_timeout(seconds):
    """Abort with diagnostics (never partial answers) once the budget is up."""
    if seconds is None:
        return
    import signal

    def on_alarm(signum, frame):
        raise LimitExceeded(f"timeout after {seconds}s; partial diagnostics only")

    signal.signal(signal.SIGALRM, on_alarm)
    signal.setitimer(signal.ITIMER_REAL, seconds)


def _parse_radius(text):
    if text in ("inf", "INF", "infinity"):
        return INF
    try:
        r = int(text)
    except ValueError:
        raise ParseError(f"radius must be an integer or 'inf', got {text!r}") from None
    if r < 0:
        raise ParseError("radius must be nonnegative")
    return r


def _family_graph(spec_text):
    """Inline generator syntax: name or name:arg1:arg2 (half:6, clique:5,
    gnp:8:0.5:7, pattern:4:eq, sub:clique:5:1, treecomp:0-0-1)."""
    parts = spec_text.split(":")
    name = parts[0]
    args = parts[1:]
    alias = {"half": "half_graph", "gnp": "random_gnp", "regular": "random_regular",
             "pattern": "s_pattern", "gf2": "gf2_dot_product",
             "treecomp": "tree_comparability", "sub": "exact_subdivision"}
    name = alias.get(name, name)
    if name == "exact_subdivision":
        base = _family_graph(":".join(args[:-1]))
        g, _ = generate(name, base, int(args[-1]))
        return g
    if name == "tree_comparability":
        parents = [int(x) for x in args[0].split("-")] if args and args[0] else []
        return generate(name, parents)
    if name == "s_pattern":
        return generate(name, int(args[0]), args[1])
    if name == "random_gnp":
        return generate(name, int(args[0]), float(args[1]),
                        int(args[2]) if len(args) > 2 else DEFAULT_SEED)
    if name == "random_regular":
        return generate(name, int(args[0]), int(args[1]),
                        int(args[2]) if len(args) > 2 else DEFAULT_SEED)
    if name == "half_graph":
        strict = len(args) > 1 and args[1] == "strict"
        return generate(name, int(args[0]), strict=strict)
    if name not in FAMILIES:
        raise ParseError(f"unknown family {name!r}")
    return generate(name, *[int(a) for a in args])


def _load_graph(ns):
    if getattr(ns, "family", None):
        return _family_graph(ns.family)
    data = sys.stdin.read() if ns.graph == "-" else open(ns.graph, "rb").read()
    return sniff_and_parse(data)


def _plain(g):
    if isinstance(g, (OrderedGraph,)):
        return g.graph
    if isinstance(g, ColoredGraph):
        return g.graph
    return g


def _emit(ns, obj):
    if ns.format == "tsv":
        flat = _flatten(obj)
        sys.stdout.write("\t".join(str(k) for k, _ in flat) + "\n")
        sys.stdout.write("\t".join(_scalar(v) for _, v in flat) + "\n")
    else:
        sys.stdout.write(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")


def _scalar(v):
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    return str(v)


def _flatten(obj):
    if not isinstance(obj, dict):
        return [("value", obj)]
    return sorted(obj.items())


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(ns):
    g = _family_graph(ns.family)
    sys.stdout.write(write_graph(g, ns.out_format))
    return 0


def cmd_param(ns):
    g = _plain(_load_graph(ns))
    name = ns.parameter
    witness = None
    if name == "degeneracy":
        value, order = params.degeneracy(g)
        witness = {"order": list(order.permutation)}
    elif name == "treewidth":
        value = params.treewidth_small(g)
    elif name in ("wcol", "scol", "adm"):
        value, order = params.generalized_coloring_number(g, name, ns.r, mode=ns.mode)
        witness = {"order": list(order.permutation), "mode": ns.mode}
    elif name == "cutrank":
        if not ns.set:
            raise ParseError("cutrank needs --set with comma-separated vertices")
        a_set = [int(x) for x in ns.set.split(",")]
        value = params.cut_rank(g, a_set)
    elif name == "rankwidth":
        value, tree = params.rank_width_small(g)
        witness = {"tree": repr(tree)}
    elif name == "vc":
        value = params.vc_dimension(g)
    elif name == "2vc":
        value = params.vc_dimension(g, two_vc=True)
    elif name == "neartwin":
        value = params.near_twin_min(g)
    elif name == "sd":
        value = params.symmetric_difference_param(g)
    elif name == "fun":
        value = params.functionality_param(g)
    elif name == "shatter":
        value = params.shatter_function(g, ns.m)
    elif name == "twinwidth":
        value, cs = twinwidth.tww_exact_small(g)
        witness = cs.to_json()
    else:
        raise ParseError(f"unknown parameter {name!r}")
    out = {"parameter": name, "value": value}
    if witness is not None:
        out["witness"] = witness
    _emit(ns, out)
    return 0


def _solve(game, g, r, k, max_n=None):
    if game == "flip":
        return games.solve_flipper(_plain(g), r, k, max_n=max_n)
    if game == "cop":
        return games.solve_cops(_plain(g), r, k, max_n=max_n)
    if game == "copprime":
        return games.solve_copw_prime(_plain(g), r, k, max_n=max_n)
    if game == "isolation":
        return games.solve_isolation(_plain(g), r, k, max_n=max_n)
    if game == "dfw":
        return games.solve_definable(_plain(g), r, k)
    if game == "ordered":
        og = g if isinstance(g, OrderedGraph) else OrderedGraph(_plain(g))
        return games.solve_ordered(og, r, k, max_n=max_n)
    if game == "bipartite":
        if not isinstance(g, ColoredGraph) or g.num_colors() > 2:
            raise ParseError("bipartite game needs a 2-colored graph input")
        left = 0
        for v, c in enumerate(g.colors):
            if c == 1:
                left |= 1 << v
        return games.solve_bipartite(g.graph, left, r, k)
    raise ParseError(f"unknown game {game!r}")


def _value(game, g, r):
    plain = _plain(g)
    if game == "flip":
        return games.flip_width(plain, r)
    if game == "cop":
        return games.cop_width(plain, r)
    if game == "copprime":
        return games.copw_prime_width(plain, r)
    if game == "isolation":
        return games.isolation_width(plain, r)
    if game == "dfw":
        return games.definable_flip_width(plain, r)
    if game == "ordered":
        og = g if isinstance(g, OrderedGraph) else OrderedGraph(plain)
        return games.ordered_flip_width(og, r)
    raise ParseError(f"no value search for game {game!r}")


def cmd_game(ns):
    g = _load_graph(ns)
    if ns.value:
        value = _value(ns.game, g, ns.r)
        _emit(ns, {"game": ns.game, "r": "inf" if ns.r is INF else ns.r,
                   "value": value})
        return 0
    if ns.k is None:
        raise ParseError("either --k or --value is required")
    sol = _solve(ns.game, g, ns.r, ns.k, max_n=ns.max_n)
    _emit(ns, sol.to_json(witness=ns.witness))
    return 0


def cmd_certify(ns):
    g = _load_graph(ns)
    obj = json.loads(open(ns.certificate).read())
    if not isinstance(obj, dict):
        raise SchemaError("certificate JSON must be an object")
    kind = obj.get("kind")
    if kind == "contraction_sequence":
        cs = twinwidth.ContractionSequence.from_json(_plain(g).n, obj)
        width = twinwidth.sequence_width(_plain(g), cs)
        _emit(ns, {"valid": True, "mode": "exhaustive", "kind": kind,
                   "width": width})
        return 0
    cert = certs.certificate_from_json(obj)
    if isinstance(cert, certs.FlipHideout):
        rep = certs.verify_flip_hideout_report(
            _plain(g), cert, mode=ns.mode, seed=ns.seed, trials=ns.trials)
        out = {"valid": rep.valid, "mode": rep.mode, "kind": "flip_hideout"}
        if rep.refutation is not None:
            out["refutation"] = rep.refutation.to_json()
        _emit(ns, out)
        return 0
    if isinstance(cert, certs.CopsHideout):
        valid = certs.verify_cops_hideout(_plain(g), cert)
        _emit(ns, {"valid": valid, "mode": "exhaustive", "kind": "cops_hideout"})
        return 0
    if isinstance(cert, certs.RichDivision):
        og = g if isinstance(g, OrderedGraph) else OrderedGraph(_plain(g))
        valid = certs.verify_rich_division(og, cert)
        _emit(ns, {"valid": valid, "mode": "exhaustive", "kind": "rich_division"})
        return 0
    if isinstance(cert, certs.WellLinkedCert):
        valid = params.well_linked_check(_plain(g), cert.u, mode=ns.mode,
                                         seed=ns.seed, trials=ns.trials)
        _emit(ns, {"valid": valid, "mode": ns.mode, "kind": "well_linked"})
        return 0
    if isinstance(cert, certs.OrderCert):
        valid = certs.order_cert_check(_plain(g), cert.order, cert.r, cert.k)
        _emit(ns, {"valid": valid, "mode": "exhaustive", "kind": "order"})
        return 0
    raise SchemaError(f"no verifier for kind {kind!r}")


def _strategy(spec_text, side, game, g, r, k, ns):
    plain = _plain(g)
    parts = spec_text.split(":")
    name = parts[0]
    if name == "solver-witness":
        sol = _solve(game, g, r, k)
        return sol.witness_pursuer if side == "pursuer" else sol.witness_evader
    if name == "identity":
        return games.IdentityFlipper(plain.n)
    if name == "random":
        seed = int(parts[1]) if len(parts) > 1 else ns.seed
        return games.RandomFlipper(plain.n, k, seed)
    if name == "hideout":
        cert = certs.certificate_from_json(json.loads(open(ns.certificate).read()))
        return certs.hideout_runner_strategy(plain, cert)
    if name == "richdivision":
        og = g if isinstance(g, OrderedGraph) else OrderedGraph(plain)
        cert = certs.certificate_from_json(json.loads(open(ns.certificate).read()))
        return certs.rich_division_runner_strategy(og, cert)
    if name == "btww":
        _, cs = twinwidth.tww_exact_small(plain)
        return twinwidth.btww_strategy(plain, cs, r)
    if name == "order-cops":
        _, order = params.degeneracy(plain)
        return certs.order_cop_strategy(plain, order.permutation, r)
    if name == "halfgraph":
        return games.HalfGraphFlipper(plain.n // 2)
    raise ParseError(f"unknown strategy spec {spec_text!r}")


def cmd_duel(ns):
    g = _load_graph(ns)
    pursuer = _strategy(ns.pursuer, "pursuer", ns.game, g, ns.r, ns.k, ns)
    evader = _strategy(ns.evader, "evader", ns.game, g, ns.r, ns.k, ns)
    left_mask = None
    if ns.game == "bipartite":
        if not isinstance(g, ColoredGraph):
            raise ParseError("bipartite duels need a 2-colored graph")
        left_mask = sum(1 << v for v, c in enumerate(g.colors) if c == 1)
    trace = games.simulate_match(ns.game, _plain(g), ns.r, ns.k, pursuer, evader,
                                 ns.max_rounds, left_mask=left_mask)
    _emit(ns, trace.to_json())
    return 0


def cmd_approx(ns):
    g = _plain(_load_graph(ns))
    verdict = games.approx_flip_width(g, ns.r, ns.k)
    _emit(ns, verdict.to_json())
    return 0


# ---------------------------------------------------------------------------


def build_parser():
    top = argparse.ArgumentParser(
        prog="flipwidth",
        description="flip-width / cop-width games, width parameters, certificates")
    top.add_argument("--format", choices=("json", "tsv"), default="json")
    top.add_argument("--seed", type=int, default=DEFAULT_SEED)
    top.add_argument("--timeout", type=float, default=None,
                     help="abort after this many seconds")
    sub = top.add_subparsers(dest="command", required=True)

    def add_graph_opts(p):
        p.add_argument("graph", nargs="?", default="-",
                       help="edge-list/graph6 file, or '-' for stdin")
        p.add_argument("--family", help="inline generator, e.g. clique:5, half:6")

    p = sub.add_parser("gen", help="generate a graph family")
    p.add_argument("--family", required=True)
    p.add_argument("--out-format", choices=("edge-list", "graph6"),
                   default="edge-list")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("param", help="classical width parameters")
    add_graph_opts(p)
    p.add_argument("parameter")
    p.add_argument("--r", type=_parse_radius, default=1)
    p.add_argument("--mode", choices=("exact", "greedy"), default="exact")
    p.add_argument("--set", help="vertex set for cutrank, comma separated")
    p.add_argument("--m", type=int, default=3, help="argument for shatter")
    p.set_defaults(fn=cmd_param)

    p = sub.add_parser("game", help="exact game solving")
    add_graph_opts(p)
    p.add_argument("game", choices=("flip", "cop", "copprime", "isolation",
                                    "dfw", "ordered", "bipartite"))
    p.add_argument("--r", type=_parse_radius, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--value", action="store_true",
                   help="search the least winning width")
    p.add_argument("--witness", action="store_true",
                   help="dump the witness strategy table")
    p.add_argument("--max-n", type=int, default=None, dest="max_n",
                   help="raise the exhaustive enumeration limit")
    p.set_defaults(fn=cmd_game)

    p = sub.add_parser("certify", help="verify a certificate")
    add_graph_opts(p)
    p.add_argument("certificate", help="certificate JSON file")
    p.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    p.add_argument("--trials", type=int, default=10000)
    p.set_defaults(fn=cmd_certify)

    p = sub.add_parser("duel", help="strategy-vs-strategy simulation")
    add_graph_opts(p)
    p.add_argument("--game", required=True,
                   choices=("flip", "cop", "copprime", "isolation", "dfw",
                            "ordered", "bipartite"))
    p.add_argument("--r", type=_parse_radius, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--pursuer", required=True)
    p.add_argument("--evader", required=True)
    p.add_argument("--max-rounds", type=int, default=100)
    p.add_argument("--certificate", help="certificate JSON for certificate strategies")
    p.set_defaults(fn=cmd_duel)

    p = sub.add_parser("approx", help="definable-game approximation verdict")
    add_graph_opts(p)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(fn=cmd_approx)

    return top


def main(argv=None):
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        _arm_timeout(ns.timeout)
        return ns.fn(ns)
    except LimitExceeded as e:
        print(f"limit exceeded: {e}", file=sys.stderr)
        return 2
    except (ParseError, GenerationError) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 3
    except SchemaError as e:
        print(f"schema error: {e}", file=sys.stderr)
        return 4
    except (IllegalMoveError, CertificateInvalid) as e:
        print(f"illegal move: {e}", file=sys.stderr)
        return 5
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
