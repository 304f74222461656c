"""``clusterdilog`` command line.

Exit codes: 0 success or verified, 1 refuted or open, 2 usage or bad input,
3 resource limit hit.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Any, Callable

from .fixtures import REGISTRY, Fixture, akan
from .graph import Closure, ResourceLimit, explore, export_dot, verify_loop
from .identities import (
    format_word,
    identity_from_json,
    identity_from_loop,
    identity_to_json,
    split_identity,
    word_from_json,
    word_to_json,
)
from .mutation import SeedState, apply_sequence, initial_seed, random_sample_point, seed_from_json
from .qtorus import DilogWord, TruncatedSeries, compare_series, folding_check, verify_identity, word_to_series
from .rewrite import SearchLimit, check_trace, dump_trace, load_trace, search_rewrite
from .rogers import five_term_check, loop_sum_check, rogers_eval

OK, FAIL, USAGE, LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- input helpers -----------------------------------------------------------


def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read {path}: {e}") from e


def _fixture(args) -> Fixture | None:
    name = getattr(args, "fixture", None)
    if name is None:
        return None
    try:
        return REGISTRY[name]
    except KeyError as e:
        raise UsageError(e.args[0]) from e


def _parse_seq(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.replace(",", " ").split())
    except ValueError as e:
        raise UsageError(f"bad mutation sequence {text!r}") from e


def _seed_and_seq(args) -> tuple[SeedState, tuple[int, ...] | None]:
    fx = _fixture(args)
    if fx is not None:
        s, seq = fx.seed(args.seed), fx.sequence
    elif args.seed_file:
        try:
            data = _read_json(args.seed_file)
            s = seed_from_json(data)
        except (KeyError, TypeError, ValueError) as e:
            raise UsageError(f"bad seed file: {e}") from e
        if "y_num" not in data:
            s = initial_seed(s.B, random_sample_point(s.n, args.seed))
        seq = None
    else:
        raise UsageError("give --fixture or --seed-file")
    if getattr(args, "seq", None):
        seq = _parse_seq(args.seq)
    elif getattr(args, "seq_file", None):
        seq = tuple(int(v) for v in _read_json(args.seq_file))
    return s, seq


def _identity(args) -> tuple[DilogWord, DilogWord]:
    try:
        if getattr(args, "identity", None):
            return identity_from_json(_read_json(args.identity))
        if getattr(args, "lhs", None) and getattr(args, "rhs", None):
            return word_from_json(_read_json(args.lhs)), word_from_json(_read_json(args.rhs))
        if getattr(args, "word", None):
            w = word_from_json(_read_json(args.word))
            return w, w.with_factors(())
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"bad identity file: {e}") from e
    fx = _fixture(args)
    if fx is None:
        raise UsageError("give --fixture, --identity, --lhs/--rhs or --word")
    return fx.identity()


def _emit(args, payload: dict, text: str) -> None:
    print(json.dumps(payload) if args.json else text)


# -- commands ----------------------------------------------------------------


def cmd_fixtures(args) -> int:
    rows = []
    for fx in REGISTRY:
        rows.append({
            "name": fx.name,
            "n": fx.n,
            "sequence_length": len(fx.sequence) if fx.sequence else None,
            "closure": fx.closure.value if fx.closure else None,
            "identity": fx.identity_file is not None,
            "trace": fx.trace_file is not None,
            "description": fx.description,
        })
    text = "\n".join(
        f"{r['name']:8} n={r['n']:<2} loop={r['sequence_length']!s:<4} {r['closure'] or '-':18} {r['description']}"
        for r in rows
    )
    text += "\naliases: " + ", ".join(f"{a} -> {b}" for a, b in REGISTRY.aliases().items())
    text += "\ngenerated: akan(k,n)"
    _emit(args, {"fixtures": rows, "aliases": REGISTRY.aliases()}, text)
    return OK


def cmd_verify_loop(args) -> int:
    s, seq = _seed_and_seq(args)
    if seq is None:
        raise UsageError("no mutation sequence: give --seq or --seq-file")
    try:
        rep = verify_loop(s.B, s.y, seq, recheck_seed=args.seed + 1_000_003)
    except IndexError as e:
        raise UsageError(str(e)) from e
    text = f"{rep.closed.value} (length {rep.length})"
    if rep.permutation:
        text += f" permutation {list(rep.permutation)}"
    _emit(args, rep.to_json(), text)
    if rep.closed is Closure.STRICT:
        return OK
    if rep.closed is Closure.PERMUTATION and args.allow_permutation:
        return OK
    return FAIL


def cmd_explore(args) -> int:
    s, _ = _seed_and_seq(args)
    try:
        g = explore(s, args.depth, args.max_vertices, args.mode)
    except ResourceLimit as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return LIMIT
    if args.dot:
        Path(args.dot).write_text(export_dot(g))
    text = f"{len(g.vertices)} vertices, {len(g.edges)} directed edges, depth <= {args.depth}"
    text += ", truncated" if g.truncated else ", complete"
    _emit(args, g.to_json(), text)
    return OK


def cmd_identity(args) -> int:
    fx = _fixture(args)
    if fx is None:
        raise UsageError("give --fixture")
    s, seq = _seed_and_seq(args)
    if seq is None:
        raise UsageError(f"fixture {fx.name!r} has no loop sequence")
    _, steps = apply_sequence(s, seq)
    w = identity_from_loop(steps, s.B)
    if args.split:
        lhs, rhs = split_identity(w)
        _emit(args, identity_to_json(lhs, rhs), f"{format_word(lhs)}\n= {format_word(rhs)}")
    else:
        _emit(args, word_to_json(w), format_word(w))
    return OK


def _default_degree(args, n: int) -> int:
    if args.degree is not None:
        return args.degree
    return 4 if n >= 9 else 8


def cmd_verify_series(args) -> int:
    t0 = time.perf_counter()
    if args.fold is not None:
        v = folding_check(args.fold, args.degree if args.degree is not None else 8)
    else:
        lhs, rhs = _identity(args)
        degree = _default_degree(args, lhs.n)
        if not rhs.factors:
            s = word_to_series(lhs, degree)
            v = compare_series(s, TruncatedSeries.one(lhs.n, degree))
        else:
            v = verify_identity(lhs, rhs, degree)
    payload = v.to_json() | {"seconds": round(time.perf_counter() - t0, 3)}
    text = f"verified to degree {v.degree}" if v.verified else (
        f"refuted at monomial {list(v.monomial)}: {v.lhs_coefficient} != {v.rhs_coefficient}"
    )
    _emit(args, payload, text)
    return OK if v.verified else FAIL


def cmd_check_trace(args) -> int:
    if args.file:
        try:
            with open(args.file) as fp:
                tr = load_trace(fp)
        except (OSError, KeyError, ValueError) as e:
            raise UsageError(f"bad trace file: {e}") from e
    else:
        fx = _fixture(args)
        if fx is None:
            raise UsageError("give a trace file or --fixture")
        try:
            tr = fx.trace()
        except ValueError as e:
            raise UsageError(str(e)) from e
    res = check_trace(tr)
    payload = {"ok": res.ok, "step": res.step, "reason": res.reason,
               "moves": len(tr), "pentagons": tr.pentagon_count()}
    text = (f"ok: {len(tr)} moves, {tr.pentagon_count()} pentagon moves" if res.ok
            else f"failed at move {res.step}: {res.reason}")
    _emit(args, payload, text)
    return OK if res.ok else FAIL


def cmd_search(args) -> int:
    lhs, rhs = _identity(args)
    t0 = time.perf_counter()
    try:
        tr = search_rewrite(lhs, rhs, args.max_steps, args.max_frontier)
    except SearchLimit as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return LIMIT
    if tr is None:
        _emit(args, {"found": False}, f"no derivation within {args.max_steps} pentagon moves")
        return FAIL
    if args.out:
        with open(args.out, "w") as fp:
            dump_trace(tr, fp)
    ok = check_trace(tr).ok
    payload = {"found": True, "moves": len(tr), "pentagons": tr.pentagon_count(), "check": ok,
               "seconds": round(time.perf_counter() - t0, 3)}
    _emit(args, payload, f"derived in {len(tr)} moves ({tr.pentagon_count()} pentagon moves)")
    return OK if ok else FAIL


def cmd_rogers(args) -> int:
    if args.x is not None:
        ev = rogers_eval(args.x)
        _emit(args, {"x": ev.x, "value": ev.value, "abs_err_bound": ev.abs_err_bound}, f"L({ev.x}) = {ev.value!r}")
        return OK
    if args.five_term is not None:
        r = five_term_check(*args.five_term)
        _emit(args, {"residual": r}, f"five-term residual {r:.3e}")
        return OK if abs(r) <= args.tol else FAIL
    fx = _fixture(args)
    if fx is None or fx.sequence is None:
        raise UsageError("give --fixture with a loop, --x, or --five-term")
    residuals = []
    for i in range(args.samples):
        y0 = random_sample_point(fx.n, args.seed + i)
        residuals.append(loop_sum_check(fx.B, y0, fx.sequence, args.convention))
    worst = max(abs(r) for r in residuals)
    payload = {"fixture": fx.name, "convention": args.convention, "residuals": residuals, "max_abs": worst,
               "tol": args.tol}
    _emit(args, payload, f"max |sum| = {worst:.3e} over {args.samples} sample points")
    return OK if worst <= args.tol else FAIL


def cmd_akan(args) -> int:
    fx = akan(args.k, args.n)
    payload = {"n": fx.n, "B": fx.B.tolist(), "sequence": list(fx.sequence)}
    text = json.dumps(fx.B.tolist()) + "\n" + ",".join(map(str, fx.sequence))
    code = OK
    if args.verify:
        rep = verify_loop(fx.B, random_sample_point(fx.n, args.seed), fx.sequence,
                          recheck_seed=args.seed + 1_000_003)
        payload["loop"] = {k: v for k, v in rep.to_json().items() if k != "trace"}
        text += f"\n{rep.closed.value} (length {rep.length})"
        code = OK if rep.closed is Closure.STRICT else FAIL
    _emit(args, payload, text)
    return code


# -- parser ------------------------------------------------------------------


_GLOBAL_DEFAULTS = {"seed": 0, "json": False, "tol": 1e-9, "degree": None, "depth": 8}


def _common(with_defaults: bool) -> argparse.ArgumentParser:
    # global flags are accepted before and after the subcommand; only the
    # top-level copy carries defaults so a later copy cannot clobber them
    p = argparse.ArgumentParser(add_help=False)
    d = (lambda k: _GLOBAL_DEFAULTS[k]) if with_defaults else (lambda k: argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=d("seed"), help="RNG seed for random sample points")
    p.add_argument("--json", action="store_true", default=d("json"), help="machine-readable output")
    p.add_argument("--tol", type=float, default=d("tol"))
    p.add_argument("--degree", "-D", type=int, default=d("degree"), help="series truncation degree")
    p.add_argument("--depth", type=int, default=d("depth"))
    return p


def _inputs(p: argparse.ArgumentParser, seq: bool = True) -> None:
    p.add_argument("--fixture", help="fixture name (see the fixtures command)")
    p.add_argument("--seed-file", help='JSON seed {"n", "B", "y_num", "y_den"}')
    if seq:
        p.add_argument("--seq", help="mutation sequence, e.g. 1,2,1")
        p.add_argument("--seq-file", help="JSON array with the mutation sequence")


def _word_inputs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--fixture")
    p.add_argument("--identity", help='JSON {"Lambda", "lhs", "rhs"}')
    p.add_argument("--lhs", help='word JSON {"n", "Lambda", "factors"}')
    p.add_argument("--rhs")


def build_parser() -> argparse.ArgumentParser:
    common = _common(False)
    parser = argparse.ArgumentParser(prog="clusterdilog", parents=[_common(True)], description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
        return p

    add("fixtures", cmd_fixtures, "list built-in fixtures")

    p = add("verify-loop", cmd_verify_loop, "check whether a mutation sequence closes")
    _inputs(p)
    p.add_argument("--allow-permutation", action="store_true", help="exit 0 on closure up to relabelling")

    p = add("explore", cmd_explore, "breadth-first slice of the exchange graph")
    _inputs(p, seq=False)
    p.add_argument("--max-vertices", type=int, default=10**6)
    p.add_argument("--mode", choices=["labeled", "unlabeled"], default="unlabeled")
    p.add_argument("--dot", help="write Graphviz DOT here")

    p = add("identity", cmd_identity, "quantum dilogarithm word of a loop")
    _inputs(p)
    p.add_argument("--split", action="store_true", help="print as lhs = rhs")

    p = add("verify-series", cmd_verify_series, "compare truncated series of an identity")
    _word_inputs(p)
    p.add_argument("--word", help="word JSON claimed to equal 1")
    p.add_argument("--fold", type=int, help="check the folding formula of this order instead")

    p = add("check-trace", cmd_check_trace, "validate a rewrite trace")
    p.add_argument("file", nargs="?")
    p.add_argument("--fixture")

    p = add("search", cmd_search, "search a pentagon/commutation derivation")
    _word_inputs(p)
    p.add_argument("--max-steps", type=int, default=60)
    p.add_argument("--max-frontier", type=int, default=200_000)
    p.add_argument("--out", help="write the trace (JSON lines) here")

    p = add("rogers", cmd_rogers, "classical dilogarithm checks")
    p.add_argument("--fixture")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--convention", choices=["before", "after"], default="before")
    p.add_argument("--x", type=float, help="just evaluate L(x)")
    p.add_argument("--five-term", type=float, nargs=2, metavar=("X", "Y"))

    p = add("akan", cmd_akan, "(A_k, A_n) quiver and its bipartite sequence")
    p.add_argument("k", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--verify", action="store_true", help="also run verify-loop on the sequence")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE
    except (ValueError, IndexError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
