"""Command line entry point.

Exit codes: 0 success, 1 verification failure, 2 usage or format error,
3 Grassmannian larger than ``--cap``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

from . import game, gf2, perms, qstate, serialize, verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

BOUNDS_COLUMNS = [
    "n", "k", "N", "theorem1_bound", "unentangled_value", "envelope",
    "theorem1_bound_root", "unentangled_value_root",
]


class CapExceeded(Exception):
    pass


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--cap", type=int, default=None, help="Grassmannian size limit (env COSET_CAP)")
    p.add_argument("--format", choices=["json", "csv", "text"], default=None)
    p.add_argument("--output", default="-")
    p.add_argument("--tolerance-spectral", type=float)
    p.add_argument("--tolerance-amplitude", type=float)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="cosetgame",
        description="Subspace counts, permutation families, game bounds and strategy evaluation.",
        epilog="exit codes: 0 ok, 1 check failed, 2 usage or format error, 3 over --cap",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("count", parents=[common], help="Grassmannian size and intersection histogram")
    sub.add_parser("grassmannian", parents=[common], help="list Gr_2(n,k) in canonical order")

    p = sub.add_parser("perms", parents=[common], help="mutually orthogonal permutation families")
    p.add_argument("--verify", action="store_true", help="re-check the family; exit 1 on failure")
    p.add_argument("--input", help="read a serialized family instead of building one")

    p = sub.add_parser("bounds", parents=[common], help="CSV table of closed-form bounds")
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--k-rule", choices=["all", "half", "rate"], default="all")
    p.add_argument("--rate", type=float, default=0.5)

    p = sub.add_parser("strategy", parents=[common], help="write a built-in strategy file")
    p.add_argument(
        "--kind",
        choices=["discard", "bob-everything", "charlie-everything", "random-pvm", "random-povm"],
        required=True,
    )
    p.add_argument("--dim", type=int, default=2, help="Bob/Charlie dimension for random kinds")

    p = sub.add_parser("eval", parents=[common], help="winning probability of a strategy file")
    p.add_argument("strategy")
    p.add_argument("--mode", choices=["exact", "extended", "mc"], default="exact")
    p.add_argument("--shots", type=int, default=100000)
    p.add_argument("--dump", help="write the channel's Choi state as JSON to this path")

    p = sub.add_parser("verify", parents=[common], help="run the verification suite")
    p.add_argument("--level", choices=["fast", "full"], default="fast")
    return parser


def _emit(args, text: str) -> None:
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)


def _cap(args) -> int:
    if args.cap is not None:
        return args.cap
    env = os.environ.get("COSET_CAP")
    return int(env) if env else gf2.DEFAULT_CAP


def _require_nk(parser, args, check_cap: bool = True) -> None:
    if args.n is None or args.k is None:
        parser.error("--n and --k are required")
    if not 0 <= args.k <= args.n <= gf2.MAX_N:
        parser.error(f"need 0 <= k <= n <= {gf2.MAX_N}")
    if args.m is not None and not 0 <= args.m <= args.k:
        parser.error("need 0 <= m <= k")
    if check_cap and gf2.gaussian_binomial(args.n, args.k) > _cap(args):
        raise CapExceeded(
            f"Gr_2({args.n},{args.k}) has {gf2.gaussian_binomial(args.n, args.k)} members; cap is {_cap(args)}"
        )


def _report(value: float, bound: float, passed: bool, seed, **extra) -> dict:
    out = {
        "value": value,
        "bound": bound,
        "slack": bound - value,
        "passed": passed,
        "seed": seed,
        "tolerances": qstate.TOL.to_dict(),
    }
    out.update(extra)
    return out


def cmd_count(args) -> int:
    n, k = args.n, args.k
    N = gf2.gaussian_binomial(n, k)
    rows = [(m, gf2.intersection_count(n, k, m)) for m in range(k + 1)]
    total = sum(c for _, c in rows)
    fmt = args.format or "text"
    if fmt == "json":
        text = json.dumps(
            {"n": n, "k": k, "N": N, "rows": [{"m": m, "f": c} for m, c in rows],
             "sum": total, "sum_ok": total == N}
        ) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "f"])
        w.writerows(rows)
        text = buf.getvalue()
    else:
        text = f"N={N}\n" + "".join(f"m={m} f={c}\n" for m, c in rows)
        text += f"sum={total} {'ok' if total == N else 'MISMATCH'}\n"
    _emit(args, text)
    return EXIT_OK if total == N else EXIT_FAIL


def cmd_grassmannian(args) -> int:
    G = gf2.enumerate_grassmannian(args.n, args.k, _cap(args))
    _emit(args, json.dumps([W.to_dict() for W in G]) + "\n")
    return EXIT_OK


def cmd_perms(args) -> int:
    if args.input:
        try:
            with open(args.input) as fh:
                fam = perms.PermutationFamily.from_dict(json.load(fh))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            print(f"cannot read family: {exc}", file=sys.stderr)
            return EXIT_USAGE
        if gf2.gaussian_binomial(fam.n, fam.k) > _cap(args):
            raise CapExceeded(f"Gr_2({fam.n},{fam.k}) exceeds cap {_cap(args)}")
    else:
        if args.m is None:
            fam = perms.full_family(args.n, args.k, _cap(args))
        else:
            fam = perms.orthogonal_family(args.n, args.k, args.m, _cap(args))
    if not args.verify:
        _emit(args, fam.to_json() + "\n")
        return EXIT_OK
    rep = perms.verify_family(fam, _cap(args))
    out = {"n": fam.n, "k": fam.k, "size": len(fam), **rep.to_dict()}
    if not args.input:
        out["family"] = fam.to_dict()
    _emit(args, json.dumps(out) + "\n")
    return EXIT_OK if rep.passed else EXIT_FAIL


def _k_values(n: int, rule: str, rate: float):
    if rule == "all":
        return range(n + 1)
    if rule == "half":
        return [n // 2]
    return [math.floor(n * rate)]


def bounds_rows(n_min: int, n_max: int, rule: str = "all", rate: float = 0.5) -> list[dict]:
    rows = []
    for n in range(n_min, n_max + 1):
        for k in _k_values(n, rule, rate):
            b = game.theorem1_bound(n, k)
            u = game.unentangled_value(n, k)
            rows.append({
                "n": n, "k": k, "N": gf2.gaussian_binomial(n, k),
                "theorem1_bound": b,
                "unentangled_value": u,
                "envelope": game.winning_rate_envelope(k / n),
                "theorem1_bound_root": b ** (1 / n),
                "unentangled_value_root": u ** (1 / n),
            })
    return rows


def cmd_bounds(args) -> int:
    if args.n_min < 1 or args.n_max < args.n_min:
        print("need 1 <= n-min <= n-max", file=sys.stderr)
        return EXIT_USAGE
    if not 0 <= args.rate <= 1:
        print("rate must lie in [0, 1]", file=sys.stderr)
        return EXIT_USAGE
    rows = bounds_rows(args.n_min, args.n_max, args.k_rule, args.rate)
    if (args.format or "csv") == "json":
        _emit(args, json.dumps(rows) + "\n")
        return EXIT_OK
    buf = io.StringIO()
    w = csv.DictWriter(buf, BOUNDS_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({c: (f"{v:.12g}" if isinstance(v, float) else v) for c, v in r.items()})
    _emit(args, buf.getvalue())
    return EXIT_OK


def cmd_strategy(args) -> int:
    n, k = args.n, args.k
    builders = {
        "discard": lambda: game.discard_and_guess(n, k),
        "bob-everything": lambda: game.bob_gets_everything(n, k),
        "charlie-everything": lambda: game.charlie_gets_everything(n, k),
        "random-pvm": lambda: game.random_strategy(n, k, args.seed, args.dim, args.dim, "pvm"),
        "random-povm": lambda: game.random_strategy(n, k, args.seed, args.dim, args.dim, "povm"),
    }
    _emit(args, serialize.dumps_strategy(builders[args.kind]()) + "\n")
    return EXIT_OK


def cmd_eval(args) -> int:
    try:
        with open(args.strategy) as fh:
            s = serialize.loads_strategy(fh.read())
    except OSError as exc:
        print(json.dumps({"error": str(exc), "pointer": ""}), file=sys.stderr)
        return EXIT_USAGE
    except serialize.StrategyFormatError as exc:
        print(json.dumps({"error": str(exc), "pointer": exc.pointer}), file=sys.stderr)
        return EXIT_USAGE
    if gf2.gaussian_binomial(s.n, s.k) > _cap(args):
        raise CapExceeded(f"Gr_2({s.n},{s.k}) exceeds cap {_cap(args)}")
    if args.dump:
        with open(args.dump, "w") as fh:
            fh.write(qstate.dump_array(game.choi_state(s.channel)) + "\n")
    bound = game.theorem1_bound(s.n, s.k)
    tol = qstate.TOL.spectral
    if args.mode == "exact":
        v = game.p_win(s, threads=args.threads)
        rep = _report(v, bound, v <= bound + tol, args.seed, mode="exact", n=s.n, k=s.k)
    elif args.mode == "extended":
        v = game.p_win_extended(s)
        rep = _report(v, bound, v <= bound + tol, args.seed, mode="extended", n=s.n, k=s.k)
    else:
        if args.shots < 1:
            print("--shots must be >= 1", file=sys.stderr)
            return EXIT_USAGE
        est, se = game.p_win_mc(s, args.shots, args.seed)
        exact = game.p_win(s, threads=args.threads)
        agrees = abs(est - exact) <= 4 * se + tol
        rep = _report(
            est, bound, agrees, args.seed, mode="mc", n=s.n, k=s.k,
            shots=args.shots, standard_error=se, exact=exact, within_4se=agrees,
        )
    rep["value"] = min(max(rep["value"], 0.0), 1.0)
    rep["slack"] = bound - rep["value"]
    _emit(args, json.dumps(rep, sort_keys=True) + "\n")
    return EXIT_OK if rep["passed"] else EXIT_FAIL


def cmd_verify(args) -> int:
    report = verify.run(args.level, threads=args.threads)
    _emit(args, verify.dumps(report))
    return EXIT_OK if report["passed"] else EXIT_FAIL


COMMANDS = {
    "count": cmd_count,
    "grassmannian": cmd_grassmannian,
    "perms": cmd_perms,
    "bounds": cmd_bounds,
    "strategy": cmd_strategy,
    "eval": cmd_eval,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    if args.cap is not None and args.cap < 1:
        parser.error("--cap must be >= 1")
    saved = qstate.TOL.to_dict()
    qstate.set_tolerances(spectral=args.tolerance_spectral, amplitude=args.tolerance_amplitude)
    try:
        if args.command in ("count", "grassmannian", "strategy") or (
            args.command == "perms" and not args.input
        ):
            _require_nk(parser, args, check_cap=args.command != "count")
        return COMMANDS[args.command](args)
    except (CapExceeded, gf2.GrassmannianTooLarge) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CAP
    finally:
        qstate.set_tolerances(**saved)


if __name__ == "__main__":
    sys.exit(main())
