"""Command line interface: ``pap <command> ...``.

Every command prints plain text by default and one JSON document with
``--json``.  The exit status is 0 when every check passed, 1 on a
mismatch and 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from typing import Optional

from . import verify
from .avoidance import count_avoiders, threshold
from .game import MAX_GAME_K, MAX_GAME_N, GrundyCache, Position, Solver
from .perm import PermError, display, parse_list

log = logging.getLogger("pap")

MAX_THRESHOLD_K = 5


@dataclass
class RunConfig:
    command: str
    json: bool = False
    cache: Optional[str] = None
    threads: int = 1
    long_run: bool = False


def parse_range(text: str) -> list[int]:
    """'7', '4..10' or '4-10'."""
    for sep in ("..", "-"):
        if sep in text:
            lo, hi = text.split(sep, 1)
            lo, hi = int(lo), int(hi)
            break
    else:
        lo = hi = int(text)
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return list(range(lo, hi + 1))


def _range_arg(text: str) -> list[int]:
    try:
        return parse_range(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from None


def _check_game(n: int, k: int, cfg: RunConfig) -> None:
    if k > MAX_GAME_K:
        raise PermError(f"game computations are limited to k <= {MAX_GAME_K}")
    if k == MAX_GAME_K and n > MAX_GAME_N and not cfg.long_run:
        raise PermError(f"n = {n} at k = {k} is outside the envelope n <= {MAX_GAME_N}; "
                        "pass --long-run to go further")


class _Session:
    """Grundy cache shared by one invocation, loaded and saved if asked."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        if cfg.cache and os.path.exists(cfg.cache):
            self.cache = GrundyCache.load(cfg.cache)
        else:
            self.cache = GrundyCache()
        self.loaded = len(self.cache)

    def solver(self, n: int, k: int) -> Solver:
        _check_game(n, k, self.cfg)
        return Solver(n, k, self.cache, long_run=self.cfg.long_run)

    def close(self) -> None:
        if self.cfg.cache:
            self.cache.save(self.cfg.cache)
        log.info("grundy values: %d loaded, %d computed, %d cache hits",
                 self.loaded, self.cache.computed, self.cache.hits)


def _emit(cfg: RunConfig, data, text_lines) -> None:
    if cfg.json:
        print(json.dumps(data, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _words(perms) -> list[str]:
    return [display(p) for p in perms]


# -- commands ------------------------------------------------------------------

def cmd_table(args, cfg: RunConfig) -> int:
    _check_game(args.n_max, args.k_max, cfg)
    session = _Session(cfg)
    rows = []
    for n in range(1, args.n_max + 1):
        row = [n]
        for k in range(1, args.k_max + 1):
            row.append(session.solver(n, k).grundy(Position(n, k)))
        rows.append(row)
    session.close()
    header = ["n"] + [f"sg{k}" for k in range(1, args.k_max + 1)]
    _emit(cfg, {"header": header, "rows": rows},
          ["\t".join(header)] + ["\t".join(map(str, r)) for r in rows])
    return 0


def cmd_query(args, cfg: RunConfig) -> int:
    n, k = args.n, args.k
    pats = parse_list(args.patterns) if args.patterns else []
    for p in pats:
        if len(p) != k:
            raise PermError(f"pattern {display(p)} does not have length {k}")
    session = _Session(cfg)
    s = session.solver(n, k)
    pos = Position.of(n, k, pats)
    count = math.factorial(n) if not pats else count_avoiders(n, pats)
    g = s.grundy(pos)
    replies = sorted(s.winning_replies(pos))
    session.close()
    data = {"n": n, "k": k, "forbidden": _words(pats), "count": count, "sg": g,
            "winning_replies": _words(replies)}
    _emit(cfg, data, [f"count\t{count}", f"sg\t{g}",
                      "winning_replies\t" + ",".join(data["winning_replies"])])
    return 0


def cmd_reverse_check(args, cfg: RunConfig) -> int:
    out = []
    lines = []
    for n in args.n:
        _check_game(n, args.k, cfg)
        res = Solver(n, args.k, long_run=cfg.long_run).reverse_strategy()
        line = _words(res.counterexample) if res.counterexample else None
        out.append({"n": n, "k": args.k, "holds": res.holds, "counterexample": line})
        text = f"n={n}\tk={args.k}\t{'holds' if res.holds else 'fails'}"
        if line:
            text += "\t" + " ".join(line)
        lines.append(text)
    _emit(cfg, {"results": out}, lines)
    return 0


def cmd_optimal_dist(args, cfg: RunConfig) -> int:
    session = _Session(cfg)
    out = []
    lines = []
    for n in args.n:
        dist = session.solver(n, args.k).optimal_lines()
        out.append({"n": n, "k": args.k, "counts": {str(l): c for l, c in sorted(dist.items())}})
        lines.append(f"# n={n} k={args.k}")
        lines.extend(f"{length}\t{count}" for length, count in sorted(dist.items()))
    session.close()
    _emit(cfg, {"results": out}, lines)
    return 0


def cmd_thresholds(args, cfg: RunConfig) -> int:
    out = []
    lines = []
    for k in args.k:
        if k < 3:
            raise PermError(f"thresholds start at k = 3, got {k}")
        if k > MAX_THRESHOLD_K and not cfg.long_run:
            raise PermError(f"k = {k} is outside the envelope k <= {MAX_THRESHOLD_K}; "
                            "pass --long-run to go further")
        n_max = args.n_max or max(k, (2 * k - 5) ** 2 + 1)
        counts: list[int] = []
        nk = threshold(k, n_max, counts)
        out.append({"k": k, "counts": counts, "threshold": nk})
        lines.append(f"k={k}\tcounts={','.join(map(str, counts))}\tN={nk if nk is not None else 'none'}")
    _emit(cfg, {"results": out}, lines)
    return 0


VERIFY_TARGETS = ("k3", "k4-gap", "k4-hard", "k5", "recursive-bk", "witnesses", "bounds")


def cmd_verify(args, cfg: RunConfig) -> int:
    which = args.which
    if which == "k5":
        rep = verify.k5_fullspace(args.base_len)
        _emit(cfg, {"name": "k5", "ok": rep.ok, "one_companion_targets": rep.one_companion_targets,
                    "total_nonB5_nonmonotone": rep.total_nonB5_nonmonotone,
                    "full_space_separable_pairs": rep.separable_pairs,
                    "total_nonmonotone_pairs": rep.total_pairs, "base_len": rep.base_len},
              rep.lines())
        return 0 if rep.ok else 1
    run = {
        "k3": verify.verify_k3,
        "k4-gap": verify.gap_cases_k4,
        "k4-hard": verify.hard_pair_supports,
        "recursive-bk": verify.verify_recursive,
        "witnesses": verify.verify_witnesses,
        "bounds": verify.verify_bounds,
    }[which]
    rep = run()
    data = rep.to_json()
    if which == "k4-gap":
        data["symmetry_classes"] = rep.details["symmetry_classes"]
        data["all_resolved"] = rep.details["all_resolved"]
    elif which == "k4-hard":
        data["covered"] = rep.details["covered"]
        data["collections_equal"] = rep.details["collections_equal"]
    _emit(cfg, data, [rep.line()])
    return 0 if rep.ok else 1


# -- entry point ----------------------------------------------------------------

def _common(top: bool) -> argparse.ArgumentParser:
    # flags may come before or after the command; only the top level sets defaults
    d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=d(False), help="print one JSON document")
    common.add_argument("--cache", metavar="PATH", default=d(None),
                        help="Grundy cache file to load and update")
    common.add_argument("--threads", type=int, default=d(1), metavar="M",
                        help="worker count (computation is single-process; accepted for scripts)")
    common.add_argument("--long-run", action="store_true", default=d(False),
                        help="allow runs beyond the default envelopes")
    common.add_argument("-v", "--verbose", action="store_true", default=d(False))
    return common


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pap", description="PAP game and B_k computations.",
                                 parents=[_common(True)])
    common = _common(False)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", parents=[common], help="Sprague-Grundy values of S_n")
    p.add_argument("--n-max", type=int, default=MAX_GAME_N)
    p.add_argument("--k-max", type=int, default=MAX_GAME_K)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("query", parents=[common], help="avoider count, value and winning replies")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("patterns", nargs="?", default="", help="comma-separated, e.g. 1234,4321")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("reverse-check", parents=[common], help="test the reverse-reply strategy")
    p.add_argument("n", type=_range_arg, help="n or a range like 4..10")
    p.add_argument("--k", type=int, default=4)
    p.set_defaults(func=cmd_reverse_check)

    p = sub.add_parser("optimal-dist", parents=[common], help="optimal play lines by length")
    p.add_argument("n", type=_range_arg)
    p.add_argument("--k", type=int, default=4)
    p.set_defaults(func=cmd_optimal_dist)

    p = sub.add_parser("thresholds", parents=[common], help="|Av_n(B_k)| and N_k")
    p.add_argument("k", type=_range_arg, nargs="?", default=[3, 4, 5])
    p.add_argument("--n-max", type=int, default=None)
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("verify", parents=[common], help="run one family of finite checks")
    p.add_argument("which", choices=VERIFY_TARGETS)
    p.add_argument("--base-len", type=int, default=7, help="base length for the k=5 search")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    cfg = RunConfig(args.command, args.json, args.cache, args.threads, args.long_run)
    if cfg.threads < 1:
        ap.error("--threads must be positive")
    if cfg.threads > 1:
        log.info("--threads=%d: computation runs in one process", cfg.threads)
    if getattr(args, "n_max", None) is not None and args.command == "table":
        if args.k_max > MAX_GAME_K:
            ap.error(f"--k-max is limited to {MAX_GAME_K}")
        if args.n_max < 1 or args.k_max < 1:
            ap.error("--n-max and --k-max must be positive")
    try:
        return args.func(args, cfg)
    except (PermError, ValueError) as exc:
        print(f"pap: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
