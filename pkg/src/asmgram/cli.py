"""Command-line front door.

Subcommands: compute, decide, verify, convert, oracle, audit, bench.

Exit codes: 0 success (decide: YES, verify: accepted, audit: clean);
1 decide NO / verify rejected / audit violations; 2 malformed input;
3 budget exhausted under ``compute --exact --strict``; 4 decide UNKNOWN.

Report paths (``audit --report``, ``bench --csv``) render summary figures
next to the delimited output unless ``--no-figures`` is given.  The
``ASMGRAM_THREADS`` environment variable caps worker threads inside the
approximation stage; everything else is single-process.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from random import Random

from .approx import approx_best, balanced_shared, repair_compress
from .bounds import BoundsReport, bounds_report, log_lower, lz_factor_count, lz_lower, trivial_upper
from .convert import plan_to_slp, slp_to_plan
from .exact import Decision, SolverConfig, asi_decide, asi_exact
from .formats import (
    decode_witness,
    encode_witness,
    parse_plan,
    parse_slp,
    serialize_plan,
    serialize_slp,
)
from .model import (
    Alphabet,
    AsmgramError,
    AssemblyPlan,
    FormatError,
    Word,
    WordTooLong,
)
from .oracle import (
    DEFAULT_ORACLE_LIMIT,
    asi_oracle,
    oracle_audit,
    write_audit_csv,
)
from .verify import verify_plan

SCHEMA_VERSION = 1

# LZ factorization is a quadratic scan by design; beyond this length the
# CLI reports the log lower bound only (use --lz-limit to override).
DEFAULT_LZ_LIMIT = 2048


class _CliError(Exception):
    def __init__(self, message: str, code: int = 2):
        super().__init__(message)
        self.code = code


def _read_word(text: str) -> Word:
    if not text:
        raise _CliError("input word is empty")
    return Word.from_text(text)


def _word_from_args(args) -> Word:
    if getattr(args, "file", None):
        try:
            text = Path(args.file).read_text().strip()
        except OSError as exc:
            raise _CliError(f"cannot read {args.file}: {exc}") from exc
        return _read_word(text)
    if args.word is None:
        raise _CliError("provide a word or --file")
    return _read_word(args.word)


def _alphabet_from_args(args, word: Word | None) -> Alphabet:
    if getattr(args, "alphabet", None):
        try:
            alphabet = Alphabet.from_text(args.alphabet)
        except ValueError as exc:
            raise _CliError(f"bad alphabet: {exc}") from exc
        if word is not None:
            for sym in word.symbols:
                if sym not in alphabet:
                    raise _CliError(f"word symbol {sym!r} is not in the alphabet")
        return alphabet
    if word is None:
        raise _CliError("an alphabet is required here")
    return Alphabet.for_word(word)


def _solver_config(args) -> SolverConfig:
    return SolverConfig(
        time_budget=getattr(args, "time_budget", None),
        node_budget=getattr(args, "node_budget", None),
        max_exact_len=getattr(args, "max_exact_len", None) or SolverConfig().max_exact_len,
    )


def _cli_bounds(word: Word, lz_limit: int) -> BoundsReport:
    if word.n <= lz_limit:
        return bounds_report(word)
    log = log_lower(word)
    return BoundsReport(
        n=word.n,
        trivial_upper=trivial_upper(word),
        log_lower=log,
        lz_factors=0,
        lz_lower=0,
        best_lower=log,
        best_upper=trivial_upper(word),
    )


def _emit_witnesses(args, plan: AssemblyPlan, slp) -> dict:
    written = {"plan": None, "grammar": None, "witness": None}
    if getattr(args, "emit_plan", None):
        Path(args.emit_plan).write_text(serialize_plan(plan))
        written["plan"] = args.emit_plan
    if getattr(args, "emit_grammar", None):
        Path(args.emit_grammar).write_text(serialize_slp(slp))
        written["grammar"] = args.emit_grammar
    if getattr(args, "emit_witness", None):
        Path(args.emit_witness).write_bytes(encode_witness(plan))
        written["witness"] = args.emit_witness
    return written


def cmd_compute(args) -> int:
    word = _word_from_args(args)
    alphabet = _alphabet_from_args(args, word)
    config = _solver_config(args)

    mode = "auto"
    if args.exact:
        mode = "exact"
    elif args.approx:
        mode = "approx"
    elif args.bounds_only:
        mode = "bounds"
    if mode == "auto":
        mode = "exact" if word.n <= config.max_exact_len else "approx"

    report = _cli_bounds(word, args.lz_limit)
    value = None
    optimal = None
    method = "bounds"
    stats = None
    witness_files = {"plan": None, "grammar": None, "witness": None}

    if mode == "exact":
        try:
            result = asi_exact(word, config, alphabet=alphabet)
        except WordTooLong as exc:
            raise _CliError(f"{exc} (use --max-exact-len or --approx)") from exc
        value, optimal, method, stats = result.value, result.optimal, result.method, result.stats
        witness_files = _emit_witnesses(args, result.plan, result.slp)
    elif mode == "approx":
        methods = None if args.method in (None, "best") else (args.method,)
        result = approx_best(word, methods=methods, alphabet=alphabet)
        value, optimal, method = result.value, False, result.method
        witness_files = _emit_witnesses(args, result.plan, result.slp)

    if args.json:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "word": word.text,
            "n": word.n,
            "mode": mode,
            "method": method,
            "value": value,
            "optimal": optimal,
            "bounds": report.as_dict(),
            "stats": stats.as_dict() if stats else None,
            "witness_files": witness_files,
        }
        print(json.dumps(payload))
    else:
        print(f"word: {word.text} (n={word.n})")
        print(
            f"bounds: lower={report.best_lower} upper={report.best_upper} "
            f"(log={report.log_lower}, lz={report.lz_lower}, trivial={report.trivial_upper})"
        )
        if value is not None:
            certainty = "optimal" if optimal else "upper bound (budget exhausted)" if mode == "exact" else "upper bound"
            print(f"value: {value} ({certainty}, method={method})")
        for kind, path in witness_files.items():
            if path:
                print(f"{kind}: {path}")

    if args.strict and mode == "exact" and optimal is False:
        return 3
    return 0


def cmd_decide(args) -> int:
    word = _word_from_args(args)
    if args.k < 0:
        raise _CliError("k must be non-negative")
    result = asi_decide(word, args.k, _solver_config(args))
    if args.json:
        print(
            json.dumps(
                {
                    "schema_version": SCHEMA_VERSION,
                    "word": word.text,
                    "k": args.k,
                    "answer": result.answer.value,
                    "stats": result.stats.as_dict(),
                }
            )
        )
    else:
        print(result.answer.value)
    return {Decision.YES: 0, Decision.NO: 1, Decision.UNKNOWN: 4}[result.answer]


def cmd_verify(args) -> int:
    target = _read_word(args.target)
    if args.plan:
        try:
            plan = parse_plan(Path(args.plan).read_text())
        except OSError as exc:
            raise _CliError(f"cannot read {args.plan}: {exc}") from exc
    else:
        alphabet = _alphabet_from_args(args, target)
        try:
            plan = decode_witness(Path(args.witness).read_bytes(), alphabet)
        except OSError as exc:
            raise _CliError(f"cannot read {args.witness}: {exc}") from exc
    k = args.k if args.k is not None else plan.cost
    verdict = verify_plan(plan, target, k)
    if args.json:
        print(
            json.dumps(
                {
                    "schema_version": SCHEMA_VERSION,
                    "accepted": verdict.accepted,
                    "produced": verdict.produced.text if verdict.produced else None,
                    "steps_used": verdict.steps_used,
                    "copies": verdict.copies,
                    "reason": verdict.reason,
                }
            )
        )
    elif verdict.accepted:
        print(f"accepted: {verdict.steps_used} steps produce {verdict.produced.text}")
    else:
        produced = verdict.produced.text if verdict.produced else "(not reconstructed)"
        print(f"rejected: {verdict.reason}")
        print(f"produced: {produced}")
    return 0 if verdict.accepted else 1


def cmd_convert(args) -> int:
    out = Path(args.out)
    if args.plan:
        plan = parse_plan(Path(args.plan).read_text())
        out.write_text(serialize_slp(plan_to_slp(plan)))
    else:
        slp = parse_slp(Path(args.grammar).read_text())
        out.write_text(serialize_plan(slp_to_plan(slp)))
    print(f"wrote {out}")
    return 0


def cmd_oracle(args) -> int:
    word = _word_from_args(args)
    value = asi_oracle(word, limit=args.limit)
    if args.json:
        print(
            json.dumps(
                {
                    "schema_version": SCHEMA_VERSION,
                    "word": word.text,
                    "value": value,
                }
            )
        )
    else:
        print(value)
    return 0


def cmd_audit(args) -> int:
    alphabet = _alphabet_from_args(args, None)
    result = oracle_audit(
        alphabet,
        args.max_n,
        config=_solver_config(args),
        check_alphabet_invariance=args.check_alphabet_invariance,
    )
    print(f"audited {len(result.rows)} words up to n={args.max_n}")
    for violation in result.violations:
        print(f"VIOLATION: {violation}")
    print(f"violations: {len(result.violations)}")
    if args.report:
        path = write_audit_csv(result, args.report)
        print(f"wrote {path}")
        if args.figures:
            from . import report as figures  # defer matplotlib to the commands that draw

            stem = Path(args.report).with_suffix("").as_posix()
            figure = figures.render_audit_figure(result.rows, stem + "_values.png")
            print(f"wrote {figure}")
    return 0 if result.ok else 1


@dataclass
class BenchRow:
    name: str
    n: int
    log_lower: int
    lz_factors: int
    lz_lower: int
    trivial_upper: int
    sizes: dict
    times: dict


_BENCH_METHODS = ("repair", "balanced", "exact")


def _bench_words(args) -> list[tuple[str, Word]]:
    if args.corpus:
        corpus = Path(args.corpus)
        if not corpus.is_dir():
            raise _CliError(f"corpus {args.corpus} is not a readable directory")
        words = []
        for path in sorted(corpus.iterdir()):
            if path.is_file():
                text = path.read_text().strip()
                if text:
                    words.append((path.name, _read_word(text)))
        if not words:
            raise _CliError(f"corpus {args.corpus} holds no words")
        return words
    length, count, seed = args.random
    if length < 1 or count < 1:
        raise _CliError("--random needs positive length and count")
    alphabet = args.alphabet or "01"
    rng = Random(seed)
    return [
        (f"rnd-{i:04d}", Word(tuple(rng.choice(alphabet) for _ in range(length))))
        for i in range(count)
    ]


def cmd_bench(args) -> int:
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    for method in methods:
        if method not in _BENCH_METHODS:
            raise _CliError(f"unknown method {method!r} (choose from {_BENCH_METHODS})")
    config = _solver_config(args)
    rows: list[BenchRow] = []
    for name, word in _bench_words(args):
        sizes: dict = {}
        times: dict = {}
        for method in methods:
            begin = time.perf_counter()
            if method == "repair":
                sizes[method] = repair_compress(word).size
            elif method == "balanced":
                sizes[method] = balanced_shared(word).size
            elif word.n <= config.max_exact_len:
                sizes[method] = asi_exact(word, config).value
            else:
                continue
            times[method] = time.perf_counter() - begin
        rows.append(
            BenchRow(
                name=name,
                n=word.n,
                log_lower=log_lower(word),
                lz_factors=lz_factor_count(word),
                lz_lower=lz_lower(word),
                trivial_upper=trivial_upper(word),
                sizes=sizes,
                times=times,
            )
        )

    header = ["name", "n", "log_lower", "lz_factors", "lz_lower", "trivial_upper"]
    header += [f"{m}_size" for m in methods]
    if args.times:
        header += [f"{m}_time_s" for m in methods]

    def csv_row(row: BenchRow) -> list:
        out = [row.name, row.n, row.log_lower, row.lz_factors, row.lz_lower, row.trivial_upper]
        out += [row.sizes.get(m, "") for m in methods]
        if args.times:
            out += [f"{row.times[m]:.6f}" if m in row.times else "" for m in methods]
        return out

    if args.csv:
        with Path(args.csv).open("w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(header)
            for row in rows:
                writer.writerow(csv_row(row))
        print(f"wrote {args.csv}")
        if args.figures:
            from . import report as figures

            stem = Path(args.csv).with_suffix("").as_posix()
            print(f"wrote {figures.render_bench_size_figure(rows, methods, stem + '_sizes.png')}")
            if args.times:
                print(f"wrote {figures.render_bench_time_figure(rows, methods, stem + '_times.png')}")
    else:
        print(",".join(header))
        for row in rows:
            print(",".join(str(v) for v in csv_row(row)))
    return 0


def _add_budget_flags(parser) -> None:
    parser.add_argument("--time-budget", type=float, default=None, metavar="SECONDS")
    parser.add_argument("--node-budget", type=int, default=None, metavar="NODES")
    parser.add_argument("--max-exact-len", type=int, default=None, metavar="N")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asmgram",
        description="Assembly index of strings: exact values, certified bounds, "
        "grammar-compressor upper bounds, and witness verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="compute the index of a word")
    p.add_argument("word", nargs="?")
    p.add_argument("--file", help="read the word from a file")
    p.add_argument("--alphabet", help="explicit alphabet (one scalar per symbol)")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--approx", action="store_true")
    mode.add_argument("--bounds-only", action="store_true")
    p.add_argument("--method", choices=["best", "repair", "balanced"], default="best")
    p.add_argument("--json", action="store_true")
    p.add_argument("--emit-plan", metavar="PATH")
    p.add_argument("--emit-grammar", metavar="PATH")
    p.add_argument("--emit-witness", metavar="PATH")
    p.add_argument("--strict", action="store_true", help="exit 3 if --exact ran out of budget")
    p.add_argument("--lz-limit", type=int, default=DEFAULT_LZ_LIMIT)
    _add_budget_flags(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("decide", help="is the index at most k?")
    p.add_argument("word")
    p.add_argument("k", type=int)
    p.add_argument("--json", action="store_true")
    _add_budget_flags(p)
    p.set_defaults(func=cmd_decide, file=None)

    p = sub.add_parser("verify", help="check a plan or witness file against a target")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--plan", metavar="PATH")
    source.add_argument("--witness", metavar="PATH", help="binary witness encoding")
    p.add_argument("--target", required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--alphabet", help="alphabet for --witness (default: inferred from target)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("convert", help="plan text <-> grammar text")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--plan", metavar="IN", help="convert this plan to a grammar")
    source.add_argument("--grammar", metavar="IN", help="convert this grammar to a plan")
    p.add_argument("--out", required=True, metavar="OUT")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("oracle", help="brute-force value for tiny words")
    p.add_argument("word", nargs="?")
    p.add_argument("--file")
    p.add_argument("--limit", type=int, default=DEFAULT_ORACLE_LIMIT)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("audit", help="cross-check solver, oracle, and bounds exhaustively")
    p.add_argument("--alphabet", required=True)
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--report", metavar="CSV")
    p.add_argument("--figures", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--check-alphabet-invariance", action="store_true")
    _add_budget_flags(p)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("bench", help="benchmark methods over a corpus")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--corpus", metavar="DIR")
    source.add_argument(
        "--random",
        nargs=3,
        type=int,
        metavar=("LENGTH", "COUNT", "SEED"),
        help="generate COUNT random words of LENGTH symbols",
    )
    p.add_argument("--alphabet", help="alphabet for --random (default 01)")
    p.add_argument("--methods", default="repair,balanced")
    p.add_argument("--csv", metavar="OUT")
    p.add_argument("--times", action="store_true", help="include wall-time columns (non-reproducible)")
    p.add_argument("--figures", action=argparse.BooleanOptionalAction, default=True)
    _add_budget_flags(p)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (AsmgramError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
