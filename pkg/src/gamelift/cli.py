"""Command line entry point.  Results go to stdout as JSON, diagnostics to
stderr.  Exit status: 0 on PASS/success, 2 on FAIL, 1 on error."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .arena import Player, arena_from_dict, arena_to_dict, priorities_from_dict, random_arena
from .constructions import synth_Mk, synth_Mn
from .equilibrium import check_equilibrium
from .lifting import LiftVerificationError, OracleFailure, compute_g, lift_with_skeleton, parity_oracle, payoff_oracle, positional_lift
from .memory import skeleton_from_dict, skeleton_to_dict, strategy_from_dict, strategy_to_dict
from .parity import ParityGame, solve
from .payoffs import ParityPayoff, payoff_from_descriptor
from .probes import probe_Am_lower, probe_fig2_lower, probe_Mk_equilibrium, probe_Mn_sufficiency


def _load(path: str) -> dict:
    return json.loads(Path(path).read_text())


def _ints(s: str) -> list[int]:
    return [int(x) for x in s.split(",") if x.strip()]


def _payoff(args):
    text = args.payoff
    if text.lstrip().startswith("{"):
        return payoff_from_descriptor(json.loads(text))
    d = {"payoff": text}
    if text == "phi":
        if not args.T:
            raise ValueError("--T is required for the phi payoff")
        d["T"] = _ints(args.T)
    if text == "parity":
        d["convention"] = args.convention
    if text == "psi" and getattr(args, "bound", None):
        d["bound"] = args.bound
    return payoff_from_descriptor(d)


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, default=str)
    sys.stdout.write("\n")


def cmd_gen(args) -> int:
    side = Player(args.no_choice) if args.no_choice else None
    a = random_arena(args.nodes, [int(c) if c.lstrip("-").isdigit() else c for c in args.alphabet.split(",")],
                     args.seed, one_player=side, max_out=args.max_out)
    _emit(arena_to_dict(a))
    return 0


def cmd_solve_parity(args) -> int:
    d = _load(args.arena)
    a = arena_from_dict(d)
    prio = priorities_from_dict(d) or {e.id: int(e.color) for e in a.edges}
    sol = solve(ParityGame(a, prio, args.convention))
    _emit({
        "winner": {str(v): w.value for v, w in sorted(sol.winner.items())},
        "max_strategy": strategy_to_dict(sol.max_strategy),
        "min_strategy": strategy_to_dict(sol.min_strategy),
    })
    return 0


def cmd_lift(args) -> int:
    a = arena_from_dict(_load(args.arena))
    payoff = _payoff(args)
    oracle = parity_oracle(payoff) if isinstance(payoff, ParityPayoff) else payoff_oracle(payoff)
    if args.skeleton:
        res = lift_with_skeleton(a, skeleton_from_dict(_load(args.skeleton)), payoff, oracle)
        out = {"sigma": strategy_to_dict(res.sigma), "tau": strategy_to_dict(res.tau),
               "trace": res.inner.trace_dict(), "report": res.report.to_dict()}
    else:
        res = positional_lift(a, payoff, oracle)
        out = {"sigma": strategy_to_dict(res.sigma), "tau": strategy_to_dict(res.tau),
               "trace": res.trace_dict(), "report": res.report.to_dict()}
    _emit(out)
    return 0


def cmd_check_eq(args) -> int:
    a = arena_from_dict(_load(args.arena))
    payoff = _payoff(args)
    sigma = strategy_from_dict(_load(args.sigma))
    tau = strategy_from_dict(_load(args.tau))
    starts = None if args.starts == "all" else _ints(args.starts)
    rep = check_equilibrium(a, payoff, sigma, tau, starts)
    _emit(rep.to_dict())
    return 0 if rep.ok else 2


def cmd_synth(args) -> int:
    if args.kind == "mn":
        sk = synth_Mn(args.n)
    else:
        sk = synth_Mk(args.k, _ints(args.T))
    _emit(skeleton_to_dict(sk))
    return 0


def cmd_probe(args) -> int:
    if args.which == "fig2":
        rep = probe_fig2_lower(args.s_max)
    elif args.which == "am":
        rep = probe_Am_lower(args.m, _ints(args.T) if args.T else None)
    elif args.which == "mn":
        rep = probe_Mn_sufficiency(args.n, args.trials, args.seed, reverify=args.reverify)
    else:
        rep = probe_Mk_equilibrium(_ints(args.T), args.trials, args.seed, k=args.k, cap=args.cap)
    _emit(rep.to_dict())
    return 0 if rep.passed else 2


def cmd_compute_g(args) -> int:
    if args.const is not None:
        table = [args.const] * args.m_max
    else:
        table = _ints(args.table)
    g = compute_g(table, args.n)
    _emit({"n": args.n, "g": g, "defined": g is not None})
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gamelift", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("gen", help="random arena")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--alphabet", default="0,1")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--no-choice", choices=["Max", "Min"], help="player that gets out-degree 1 everywhere")
    p.add_argument("--max-out", type=int, default=3)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve-parity", help="solve a parity game (priorities from edge fields or colors)")
    p.add_argument("--arena", required=True)
    p.add_argument("--convention", choices=["even", "odd"], default="even")
    p.set_defaults(func=cmd_solve_parity)

    def payoff_args(p):
        p.add_argument("--payoff", required=True, help="psi|phi|parity|mean or a JSON descriptor")
        p.add_argument("--T", help="comma separated set for phi")
        p.add_argument("--convention", choices=["even", "odd"], default="even")
        p.add_argument("--bound", type=int, help="running-sum bound for psi")

    p = sub.add_parser("lift", help="equilibrium from one-player oracle calls")
    p.add_argument("--arena", required=True)
    p.add_argument("--skeleton")
    payoff_args(p)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("check-eq", help="verify a strategy pair")
    p.add_argument("--arena", required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--tau", required=True)
    p.add_argument("--starts", default="all")
    payoff_args(p)
    p.set_defaults(func=cmd_check_eq)

    p = sub.add_parser("synth-skeleton", help="running-sum or ones-counter skeleton")
    p.add_argument("kind", choices=["mn", "mk"])
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--T")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("probe", help="memory-bound probes")
    p.add_argument("which", choices=["fig2", "am", "mn", "mk"])
    p.add_argument("--s-max", type=int, default=2)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--k", type=int)
    p.add_argument("--T")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int)
    p.add_argument("--cap", type=int, default=64)
    p.add_argument("--reverify", action="store_true")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("compute-g", help="g(n) from a tabulated f")
    p.add_argument("--n", type=int, required=True)
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--const", type=int)
    grp.add_argument("--table", help="f(1),f(2),... comma separated")
    p.add_argument("--m-max", type=int, default=10_000)
    p.set_defaults(func=cmd_compute_g)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.cmd == "probe" and args.which in ("mn", "mk") and args.seed is None:
        print("--seed is required for randomized probes", file=sys.stderr)
        return 1
    if args.cmd == "probe" and args.which == "mk" and not args.T:
        print("--T is required for the mk probe", file=sys.stderr)
        return 1
    if args.cmd == "synth-skeleton" and (args.n is None if args.kind == "mn" else (args.k is None or not args.T)):
        print("synth-skeleton needs --n (mn) or --k and --T (mk)", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except (OracleFailure, LiftVerificationError) as exc:
        payload = exc.to_dict() if isinstance(exc, OracleFailure) else exc.report.to_dict()
        _emit(payload)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
