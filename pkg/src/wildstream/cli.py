"""Command-line front end: streaming match, diagnostics, difftest and bench."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from typing import BinaryIO, Optional, Sequence, TextIO

from .fingerprint import FieldParams
from .harness import ENGINES, FAULTS, STREAMING, make_stream, percentile, run_bench, run_difftest
from .offset import build_offset_instance, build_prime_cover, gamma_table, length_classes
from .partition import preliminary_partition, secondary_partition, verify_partition_properties
from .periodicity import is_periodic, max_window_occurrences, pi_value, principle_period, EXACT_CAP
from .reference import oracle_match
from .symbols import WILDCARD, decode_pattern, encode_pattern
from .tradeoff import TradeoffState, amortized_report

EXIT_OK = 0
EXIT_IO = 1
EXIT_DIVERGENCE = 1
EXIT_CONFIG = 2


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    pattern: bytes
    wildcard: int = ord("?")
    engine: str = "thm1"
    seed: int = 0
    delta: Optional[float] = None
    tau: Optional[int] = None
    metrics: bool = False
    text_file: Optional[str] = None

    def encoded_pattern(self) -> tuple[int, ...]:
        return encode_pattern(list(self.pattern), self.wildcard)


def _arg_bytes(s: str) -> bytes:
    return s.encode("utf-8", "surrogateescape")


def _read_pattern_file(path: str) -> bytes:
    with open(path, "rb") as fh:
        data = fh.read()
    if data.endswith(b"\r\n"):
        return data[:-2]
    if data.endswith(b"\n"):
        return data[:-1]
    return data


def config_from_args(args: argparse.Namespace, engine: Optional[str] = None) -> RunConfig:
    if (args.pattern is None) == (args.pattern_file is None):
        raise ConfigError("give exactly one of -p/--pattern and --pattern-file")
    pattern = _arg_bytes(args.pattern) if args.pattern is not None else _read_pattern_file(args.pattern_file)
    if not pattern:
        raise ConfigError("empty pattern")
    wildcard = _arg_bytes(args.wildcard)
    if len(wildcard) != 1:
        raise ConfigError("--wildcard must be a single byte")
    engine = engine or args.engine
    if engine not in ENGINES:
        raise ConfigError(f"unknown engine {engine!r}")
    if args.tau is not None and engine != "smallwp":
        raise ConfigError("--tau applies only to the smallwp engine")
    if args.delta is not None and engine != "tradeoff":
        raise ConfigError("--delta applies only to the tradeoff engine")
    if args.tau is not None and args.tau < 1:
        raise ConfigError("--tau must be positive")
    if args.delta is not None and not 0.0 <= args.delta <= 1.0:
        raise ConfigError("--delta must lie in [0, 1]")
    if not 0 <= args.seed < 1 << 64:
        raise ConfigError("--seed must be a 64-bit unsigned integer")
    return RunConfig(
        pattern=pattern,
        wildcard=wildcard[0],
        engine=engine,
        seed=args.seed,
        delta=args.delta,
        tau=args.tau,
        metrics=args.metrics == "json",
        text_file=args.text_file,
    )


def run_match(
    config: RunConfig,
    source: Optional[BinaryIO] = None,
    out: Optional[TextIO] = None,
    err: Optional[TextIO] = None,
    tradeoff_report: bool = False,
) -> int:
    """Stream the text one byte at a time, writing each start as soon as it is known."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    pattern = config.encoded_pattern()
    opened = None
    try:
        if source is None:
            if config.text_file is not None:
                opened = source = open(config.text_file, "rb")
            else:
                source = sys.stdin.buffer
        if config.engine == "oracle":
            return _run_oracle(pattern, source, out, err, config.metrics)
        matcher = make_stream(config.engine, pattern, seed=config.seed, delta=config.delta, tau=config.tau, wildcard=None)
        if config.engine == "smallwp" and not matcher.within_tau:  # type: ignore[attr-defined]
            print(
                f"warning: wildcard period {matcher.pi[0]} exceeds tau={config.tau}; space bound not guaranteed",  # type: ignore[attr-defined]
                file=err,
            )
        step = matcher.process_char
        clock = time.perf_counter_ns
        lat: list[int] = []
        read = source.read
        while True:
            b = read(1)
            if not b:
                break
            t0 = clock()
            reps = step(b[0])
            lat.append(clock() - t0)
            for rep in reps:
                out.write(f"{rep.start}\n")
                out.flush()
        if config.metrics:
            _emit_metrics(matcher.snapshot_metrics(), lat, err)
        if tradeoff_report and isinstance(matcher, TradeoffState):
            err.write(json.dumps(amortized_report(matcher)) + "\n")
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_IO
    finally:
        if opened is not None:
            opened.close()
    return EXIT_OK


def _run_oracle(pattern: tuple[int, ...], source: BinaryIO, out: TextIO, err: TextIO, metrics: bool) -> int:
    text = bytearray()
    while True:
        b = source.read(1)
        if not b:
            break
        text += b
    positions = oracle_match(list(text), pattern, None).positions
    for s in positions:
        out.write(f"{s}\n")
    out.flush()
    if metrics:
        err.write(json.dumps({"chars": len(text), "matches": len(positions)}) + "\n")
    return EXIT_OK


def _emit_metrics(metrics, lat: Sequence[int], err: TextIO) -> None:
    payload = {
        "chars": metrics.chars,
        "matches": metrics.matches,
        "dequeues": metrics.dequeues,
        "assassinations": metrics.assassinations,
        "max_total_explicit": metrics.max_total_explicit,
        "words_used_peak": metrics.words_used_peak,
        "ns_per_char_p50": percentile(lat, 50),
        "ns_per_char_p99": percentile(lat, 99),
    }
    err.write(json.dumps(payload) + "\n")
    err.flush()


# -- diagnostics -------------------------------------------------------------


def _pattern_arg(args: argparse.Namespace) -> tuple[int, ...]:
    if (args.pattern is None) == (getattr(args, "pattern_file", None) is None):
        raise ConfigError("give exactly one of -p/--pattern and --pattern-file")
    raw = _arg_bytes(args.pattern) if args.pattern is not None else _read_pattern_file(args.pattern_file)
    if not raw:
        raise ConfigError("empty pattern")
    wildcard = _arg_bytes(args.wildcard)
    if len(wildcard) != 1:
        raise ConfigError("--wildcard must be a single byte")
    return encode_pattern(list(raw), wildcard[0])


def _show(p: Sequence[int]) -> str:
    return decode_pattern(p)


def cmd_period(args: argparse.Namespace) -> int:
    s = list(_arg_bytes(args.string))
    if not s:
        raise ConfigError("empty string")
    rho = principle_period(s)
    print(json.dumps({"string": args.string, "period": rho, "periodic": is_periodic(s)}))
    return EXIT_OK


def cmd_pi(args: argparse.Namespace) -> int:
    p = _pattern_arg(args)
    value, exact = pi_value(p, None)
    payload = {"pattern": _show(p), "m": len(p), "pi": value, "exact": exact}
    if len(p) <= EXACT_CAP:
        payload["max_window_occurrences"] = max_window_occurrences(p, None)
    print(json.dumps(payload))
    return EXIT_OK


def cmd_partition(args: argparse.Namespace) -> int:
    p = _pattern_arg(args)
    part = secondary_partition(p, None) if args.kind == "secondary" else preliminary_partition(p, None)
    print(" ".join(str(iv) for iv in part))
    print("mu: " + " ".join(str(x) for x in part.mu))
    problems = verify_partition_properties(p, part, None)
    print("properties: " + ("ok" if not problems else "; ".join(problems)))
    return EXIT_OK


def cmd_primes(args: argparse.Namespace) -> int:
    p = _pattern_arg(args)
    wild = [k for k, c in enumerate(p) if c == WILDCARD]
    cover = build_prime_cover(len(p), wild, args.seed)
    print(
        json.dumps(
            {
                "m": len(p),
                "wildcards": wild,
                "primes": list(cover.primes),
                "branch": cover.branch,
                "resample_rounds": cover.resample_rounds,
                "witness": {str(j): q for j, q in sorted(cover.witness.items())},
            }
        )
    )
    return EXIT_OK


def cmd_gamma(args: argparse.Namespace) -> int:
    p = _pattern_arg(args)
    q = args.q
    if q < 1:
        raise ConfigError("-q must be positive")
    table = gamma_table(p, q, None)
    print(f"gamma_{q}: {len(table)} columns")
    for col, ident in table.items():
        print(f"  id {ident}: {_show(col)}")
    if q < len(p):
        f = FieldParams(args.seed)
        for name, length in length_classes(len(p), q):
            inst = build_offset_instance(p, q, name, f, None)
            ids = " ".join("?" if x == WILDCARD else str(x) for x in inst.column_pattern)
            print(f"column pattern ({name}, length {length}): {ids}")
    return EXIT_OK


def cmd_difftest(args: argparse.Namespace) -> int:
    engines = args.engines.split(",") if args.engines else list(STREAMING)
    for e in engines:
        if e not in ENGINES:
            raise ConfigError(f"unknown engine {e!r}")
    if args.fault is not None and "thm1" not in engines:
        raise ConfigError("--fault needs the thm1 engine")
    res = run_difftest(args.count, args.m_max, args.n_max, args.seed, engines, args.fault, args.jobs, args.delta)
    families = ", ".join(f"{k}={v}" for k, v in sorted(res.per_family.items()))
    if res.ok:
        print(f"ok: {res.cases} cases, {res.runs} engine runs, no divergence ({families})")
        return EXIT_OK
    print("divergence:")
    print(res.divergence.describe())  # type: ignore[union-attr]
    print("minimal counterexample:")
    print(res.shrunk.describe())  # type: ignore[union-attr]
    return EXIT_DIVERGENCE


def cmd_bench(args: argparse.Namespace) -> int:
    engines = args.engines.split(",")
    for e in engines:
        if e not in STREAMING:
            raise ConfigError(f"unknown streaming engine {e!r}")
    ms = [int(x) for x in args.m.split(",")]
    ds = [int(x) for x in args.d.split(",")]
    rows = run_bench(engines, ms, ds, args.n, args.seed, args.workload.split(","))
    for row in rows:
        print(json.dumps(row.as_dict()), flush=True)
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def _pattern_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("-p", "--pattern", help="pattern; the wildcard byte matches any text byte")
    sp.add_argument("--pattern-file", help="read the pattern from a file (one trailing newline is dropped)")
    sp.add_argument("--wildcard", default="?", help="pattern byte used as the wildcard (default '?')")


def _match_flags(sp: argparse.ArgumentParser, engine_choice: bool = True) -> None:
    _pattern_flags(sp)
    sp.add_argument("--text-file", help="text source (default: standard input)")
    if engine_choice:
        sp.add_argument("--engine", default="thm1", help="thm1 | smallwp | tradeoff | naive | prelim | oracle")
    sp.add_argument("--seed", type=int, default=0, help="64-bit seed for every random choice")
    sp.add_argument("--delta", type=float, help="tradeoff exponent in [0, 1] (tradeoff only)")
    sp.add_argument("--tau", type=int, help="wildcard-period threshold (smallwp only)")
    sp.add_argument("--metrics", choices=("off", "json"), default="off", help="write a JSON metrics line to stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wildstream", description="Streaming pattern matching with wildcards.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("match", help="stream a text and print match starts")
    _match_flags(sp)
    sp = sub.add_parser("smallwp", help="match with the offset-column engine")
    _match_flags(sp, engine_choice=False)
    sp = sub.add_parser("tradeoff", help="match with the prefix/queue composition")
    _match_flags(sp, engine_choice=False)
    sp.add_argument("--report", action="store_true", help="write the amortized work report to stderr")
    sp = sub.add_parser("oracle", help="offline direct comparison")
    _match_flags(sp, engine_choice=False)

    sp = sub.add_parser("period", help="shortest period of a wildcard-free string")
    sp.add_argument("string")
    sp = sub.add_parser("pi", help="wildcard-period length of a pattern")
    _pattern_flags(sp)
    sp = sub.add_parser("partition", help="show the interval partition and check it")
    _pattern_flags(sp)
    sp.add_argument("--kind", choices=("secondary", "preliminary"), default="secondary")
    sp = sub.add_parser("primes", help="prime cover with witnesses")
    _pattern_flags(sp)
    sp.add_argument("--seed", type=int, default=0)
    sp = sub.add_parser("gamma", help="column table and column pattern for one prime")
    _pattern_flags(sp)
    sp.add_argument("-q", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("difftest", help="compare engines with the oracle on seeded workloads")
    sp.add_argument("--count", type=int, default=1000)
    sp.add_argument("--m-max", type=int, default=64)
    sp.add_argument("--n-max", type=int, default=2048)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--engines", help="comma-separated engine names (default: all streaming engines)")
    sp.add_argument("--fault", choices=FAULTS, help="inject a validation fault into thm1")
    sp.add_argument("--delta", type=float, default=0.5)
    sp.add_argument("--jobs", type=int, default=1, help="worker threads")

    sp = sub.add_parser("bench", help="per-character latency as JSON lines")
    sp.add_argument("--engines", default="thm1")
    sp.add_argument("--m", default=str(1 << 16), help="comma-separated pattern lengths")
    sp.add_argument("--d", default="4,16,64", help="comma-separated wildcard counts")
    sp.add_argument("--n", type=int, default=20000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workload", default="random", help="random and/or unary, comma-separated")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in ("match", "smallwp", "tradeoff", "oracle"):
            engine = None if args.command == "match" else args.command
            config = config_from_args(args, engine)
            return run_match(config, tradeoff_report=getattr(args, "report", False))
        handler = {
            "period": cmd_period,
            "pi": cmd_pi,
            "partition": cmd_partition,
            "primes": cmd_primes,
            "gamma": cmd_gamma,
            "difftest": cmd_difftest,
            "bench": cmd_bench,
        }[args.command]
        return handler(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
