"""Command-line interface.

Exit status: 0 on success, 2 on invalid input, 3 when an internal
consistency check fails.  Errors are a single ``error: ...`` line on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from hadablom import docio
from hadablom.field import check_prime
from hadablom.metrics import (
    aggregate,
    aggregate_csv,
    cost_report,
    largest_jump,
    recommended_t,
    sweep_csv,
    sweep_t,
)
from hadablom.resilience import InconsistentSystemError, attack_report
from hadablom.scheme import (
    VARIANTS,
    ConsistencyError,
    Network,
    SchemeParams,
    establish,
    full_key_matrix,
    m_from_t,
    provision,
    redact,
    worked_example_network,
)

EXIT_INVALID = 2
EXIT_INCONSISTENT = 3


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _pair(text: str) -> tuple[int, int]:
    vals = _int_list(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected i,j, got {text!r}")
    return vals[0], vals[1]


def _range(text: str) -> range:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    return range(lo, hi + 1)


def _add_rows_arg(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--t", type=int, help="security parameter; m = t, or t+1 with --blom-strict")
    g.add_argument("--m", type=int, help="public-matrix row count")
    p.add_argument("--blom-strict", action="store_true", help="map t to m = t+1")


def _rows_from(args) -> int:
    return args.m if args.m is not None else m_from_t(args.t, args.blom_strict)


def _add_output(p: argparse.ArgumentParser, formats: tuple[str, ...], default: str) -> None:
    p.add_argument("--format", choices=formats, default=default)
    p.add_argument("--output", "-o", type=Path, help="write here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hadablom", description="Blom-style key predistribution toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("provision", help="provision a network and write its document")
    p.add_argument("--variant", choices=VARIANTS, default="modified-hadamard")
    p.add_argument("--N", type=int)
    _add_rows_arg(p, required=False)
    p.add_argument("--q", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--worked-example", action="store_true",
                   help="emit the bundled N=8, m=6, q=31 example network")
    p.add_argument("--redact", action="store_true", help="omit the secret matrix")
    _add_output(p, ("json",), "json")

    p = sub.add_parser("establish", help="derive the key shared by nodes i and j")
    p.add_argument("--network", type=Path, required=True)
    p.add_argument("-i", type=int, required=True)
    p.add_argument("-j", type=int, required=True)
    _add_output(p, ("table", "json"), "table")

    p = sub.add_parser("keymatrix", help="emit the full key matrix K = A P")
    p.add_argument("--network", type=Path, required=True)
    _add_output(p, ("table", "csv", "json"), "table")

    p = sub.add_parser("attack", help="collusion analysis for a compromised set")
    p.add_argument("--network", type=Path, required=True)
    p.add_argument("--compromise", type=_int_list, default=[])
    g = p.add_mutually_exclusive_group()
    g.add_argument("--pair", type=_pair)
    g.add_argument("--threshold", action="store_true", help="search for the resilience threshold")
    p.add_argument("--sampled", action="store_true", help="random subset sampling instead of exhaustive")
    _add_output(p, ("json",), "json")

    p = sub.add_parser("sweep", help="unique-key counts across t")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--t-range", type=_range, help="LO:HI inclusive (default 1:N)")
    p.add_argument("--seeds", type=int, default=10, help="number of seeds, 0..SEEDS-1")
    p.add_argument("--variant", choices=VARIANTS, default="modified-hadamard")
    p.add_argument("--blom-strict", action="store_true")
    _add_output(p, ("csv", "table", "json"), "csv")

    p = sub.add_parser("cost", help="storage and per-key work for each variant")
    p.add_argument("--variant", choices=VARIANTS + ("both",), default="both")
    _add_rows_arg(p)
    p.add_argument("--q", type=int, required=True)
    _add_output(p, ("json", "table"), "json")
    return parser


def _table(header: list[str], rows: list[list]) -> str:
    cells = [[str(h) for h in header]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    return "\n".join(lines) + "\n"


def _load(path: Path) -> Network:
    try:
        text = path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read network file {path}: {exc.strerror}")
    return Network.loads(text)


def _cmd_provision(args) -> str:
    if args.worked_example:
        net = worked_example_network()
    else:
        missing = [f for f in ("N", "q") if getattr(args, f) is None]
        if missing or (args.t is None and args.m is None):
            raise UsageError("provision needs --N, --q and one of --t/--m (or --worked-example)")
        net = provision(SchemeParams(args.variant, args.N, _rows_from(args), args.q, args.seed))
    if args.redact:
        net = redact(net)
    return net.dumps()


def _cmd_establish(args) -> str:
    net = _load(args.network)
    key = establish(net, args.i, args.j)
    if args.format == "json":
        return docio.dumps({"i": key.i, "j": key.j, "key": key.value})
    return f"{key.value}\n"


def _cmd_keymatrix(args) -> str:
    net = _load(args.network)
    K = [[int(x) for x in row] for row in full_key_matrix(net)]
    if args.format == "json":
        return docio.dumps({"N": net.N, "q": net.q, "K": K})
    if args.format == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(K)
        return buf.getvalue()
    return _table([""] + list(range(1, net.N + 1)), [[i + 1] + row for i, row in enumerate(K)])


def _cmd_attack(args) -> str:
    net = _load(args.network)
    for c in args.compromise:
        if not 1 <= c <= net.N:
            raise UsageError(f"compromised node {c} out of range 1..{net.N}")
    if args.pair is not None and not all(1 <= x <= net.N for x in args.pair):
        raise UsageError(f"pair {args.pair} out of range 1..{net.N}")
    doc = attack_report(net, args.compromise, pair=args.pair, threshold=args.threshold,
                        exhaustive=False if args.sampled else None)
    return docio.dumps(doc)


def _cmd_sweep(args) -> str:
    t_values = args.t_range if args.t_range is not None else range(1, args.N + 1)
    if args.seeds < 1:
        raise UsageError("--seeds must be at least 1")
    points = sweep_t(args.N, args.q, t_values, range(args.seeds), args.variant, args.blom_strict)
    series = aggregate(points)
    if args.format == "json":
        return docio.dumps({
            "N": args.N,
            "q": args.q,
            "points": [[p.t, p.m, p.q, p.N, p.seed, p.unique_keys] for p in points],
            "aggregate": [[t, round(v, 4)] for t, v in series],
            "largest_jump_t": largest_jump(series) if len(series) > 1 else None,
            "recommended_t": recommended_t(args.N) if args.N >= 2 else None,
        })
    if args.format == "table":
        return _table(["t", "mean_unique_keys"], [[t, f"{v:.4f}"] for t, v in series])
    return sweep_csv(points) + "\n" + aggregate_csv(series)


def _cmd_cost(args) -> str:
    variants = VARIANTS if args.variant == "both" else (args.variant,)
    m = _rows_from(args)
    if m < 1:
        raise UsageError(f"row count must be positive, got {m}")
    check_prime(args.q)
    doc = cost_report(m, args.q, variants)
    if args.format == "table":
        recs = doc["variants"]
        keys = [k for k in recs[0] if k not in ("m", "q")]
        return _table(keys, [[r[k] for k in keys] for r in recs])
    return docio.dumps(doc)


_COMMANDS = {
    "provision": _cmd_provision,
    "establish": _cmd_establish,
    "keymatrix": _cmd_keymatrix,
    "attack": _cmd_attack,
    "sweep": _cmd_sweep,
    "cost": _cmd_cost,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        text = _COMMANDS[args.command](args)
    except (ConsistencyError, InconsistentSystemError) as exc:
        print(f"error: consistency: {exc}", file=stderr)
        return EXIT_INCONSISTENT
    except (UsageError, ValueError, IndexError, KeyError, TypeError) as exc:
        msg = str(exc).replace("\n", " ")
        if isinstance(exc, KeyError):
            msg = f"missing field {msg}"
        print(f"error: invalid: {msg}", file=stderr)
        return EXIT_INVALID
    if args.output is not None:
        args.output.write_text(text)
    else:
        stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
