"""Command-line entry point.

Subcommands: count, predict, compare, sweep, oracle-check, identities.
Exit codes: 0 success, 1 usage error, 2 invalid input (non-prime, out of
range), 3 internal invariant or exact-claim violation.  All comparison
output is deterministic; timestamps appear only in persisted records.
"""

from __future__ import annotations

import argparse
import os
import sys
from datetime import datetime, timezone
from fractions import Fraction

from . import census, oracle, predictor, report
from .census import Equation
from .errors import InvalidInputError, InvariantViolation, MalformedRecordError
from .numtheory import factorize, is_prime, next_primes, prime_context
from .predictor import ha_geneq_form, ha_squarefree_form, ha_sum_form
from .residue_tables import build_tables, class_counts

CLI_PRIME_LIMIT = 1 << 40
THREADS_ENV_VAR = "DLCENSUS_THREADS"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID_INPUT = 2
EXIT_INVARIANT = 3


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _default_threads() -> int:
    env = os.environ.get(THREADS_ENV_VAR)
    if env is not None and env.isdigit() and int(env) >= 1:
        return int(env)
    return os.cpu_count() or 1


def _require_prime(p: int) -> None:
    if p < 2 or p >= CLI_PRIME_LIMIT:
        raise InvalidInputError(f"prime must be in [2, 2^40), got {p}")
    if not is_prime(p):
        raise InvalidInputError(f"not prime: {p}")


def _equations(name: str) -> list[Equation]:
    if name == "all":
        return [Equation.FP, Equation.HA, Equation.TC]
    return [Equation(name)]


def _build_parser() -> _Parser:
    parser = _Parser(prog="dlcensus", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    fmt_kwargs = dict(choices=("text", "csv", "json"), default="text")
    eq_choices = ("fp", "ha", "tc", "all")

    p_count = sub.add_parser("count", help="run the census and print observed counts")
    p_count.add_argument("--prime", type=int, required=True)
    p_count.add_argument("--equation", choices=eq_choices, required=True)
    p_count.add_argument("--threads", type=_positive_int, default=None)
    p_count.add_argument("--format", **fmt_kwargs)

    p_predict = sub.add_parser("predict", help="print exact predicted values")
    p_predict.add_argument("--prime", type=int, required=True)
    p_predict.add_argument("--equation", choices=eq_choices, default="all")
    p_predict.add_argument("--format", **fmt_kwargs)
    p_predict.add_argument("--digits", type=int, default=3)

    p_compare = sub.add_parser("compare", help="census vs predictions with exact claims")
    p_compare.add_argument("--prime", type=int, required=True)
    p_compare.add_argument("--equation", choices=eq_choices, default="all")
    p_compare.add_argument("--threads", type=_positive_int, default=None)
    p_compare.add_argument("--format", **fmt_kwargs)
    p_compare.add_argument("--digits", type=int, default=3)
    p_compare.add_argument("--out", default=None,
                           help="append result records to this JSONL file")

    p_sweep = sub.add_parser("sweep", help="compare consecutive primes, persisting records")
    p_sweep.add_argument("--start", type=int, default=100000)
    p_sweep.add_argument("--count", type=_positive_int, default=5)
    p_sweep.add_argument("--threads", type=_positive_int, default=None)
    p_sweep.add_argument("--out", required=True)

    p_oracle = sub.add_parser("oracle-check", help="census vs brute force on small primes")
    p_oracle.add_argument("--max-prime", type=int, default=311)
    p_oracle.add_argument("--threads", type=_positive_int, default=None)

    p_ident = sub.add_parser("identities", help="exact identities of the prediction formulas")
    p_ident.add_argument("--max-n", type=int, default=2000)

    return parser


def _cmd_count(args) -> int:
    _require_prime(args.prime)
    threads = args.threads or _default_threads()
    wanted = _equations(args.equation)
    tables = build_tables(args.prime)
    matrices = {}
    if Equation.FP in wanted or Equation.TC in wanted:
        matrices[Equation.FP] = census.count_fp(tables, workers=threads)
    if Equation.HA in wanted or Equation.TC in wanted:
        buckets = census.build_ha_buckets(tables)
        matrices[Equation.HA] = census.count_ha(buckets, tables, workers=threads)
        if Equation.TC in wanted:
            matrices[Equation.TC] = census.count_tc(
                buckets, tables, matrices[Equation.FP], workers=threads)
    for eq in wanted:
        sys.stdout.buffer.write(report.render_counts(matrices[eq], args.format))
    sys.stdout.buffer.flush()
    return EXIT_OK


def _cmd_predict(args) -> int:
    _require_prime(args.prime)
    ctx = prime_context(args.prime)
    for eq in _equations(args.equation):
        pm = predictor.predict_matrix(eq, ctx)
        sys.stdout.buffer.write(report.render_predictions(pm, args.format, args.digits))
    sys.stdout.buffer.flush()
    return EXIT_OK


def _compare_prime(p: int, equations: list[Equation], threads: int):
    """Reports for one prime plus the cross-equation claims when applicable."""
    ctx = prime_context(p)
    tables = build_tables(p)
    counts = class_counts(tables)
    buckets = census.build_ha_buckets(tables)
    fp = census.count_fp(tables, workers=threads)
    ha = census.count_ha(buckets, tables, workers=threads)
    tc = census.count_tc(buckets, tables, fp, workers=threads)
    observed = {Equation.FP: fp, Equation.HA: ha, Equation.TC: tc}
    reports = [report.compare(observed[eq], predictor.predict_matrix(eq, ctx), counts)
               for eq in equations]
    cross = (report.cross_equation_checks(ha, tc)
             if Equation.HA in equations and Equation.TC in equations else ())
    return reports, cross


def _cmd_compare(args) -> int:
    _require_prime(args.prime)
    threads = args.threads or _default_threads()
    equations = _equations(args.equation)
    reports, cross = _compare_prime(args.prime, equations, threads)
    for rep in reports:
        sys.stdout.buffer.write(report.render(rep, args.format, args.digits))
    if cross and args.format == "text":
        lines = ["cross-equation claims:"]
        for claim in cross:
            status = "PASS" if claim.passed else f"FAIL ({claim.lhs} != {claim.rhs})"
            lines.append(f"  {status}  {claim.name}")
        sys.stdout.buffer.write(("\n".join(lines) + "\n").encode())
    sys.stdout.buffer.flush()
    if args.out:
        stamp = datetime.now(timezone.utc).isoformat()
        for rep in reports:
            report.append_records(args.out, report.records_from_report(rep, stamp))
    failed = [c.name for rep in reports for c in rep.claims if not c.passed]
    failed += [c.name for c in cross if not c.passed]
    if failed:
        print(f"exact-claim violation: {' '.join(failed)}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def _cmd_sweep(args) -> int:
    if args.start < 2 or args.start >= CLI_PRIME_LIMIT:
        raise InvalidInputError(f"start must be in [2, 2^40), got {args.start}")
    threads = args.threads or _default_threads()
    equations = [Equation.FP, Equation.HA, Equation.TC]
    failures: list[str] = []
    for p in next_primes(args.start, args.count):
        reports, cross = _compare_prime(p, equations, threads)
        stamp = datetime.now(timezone.utc).isoformat()
        written = 0
        for rep in reports:
            records = report.records_from_report(rep, stamp)
            report.append_records(args.out, records)
            written += len(records)
        bad = [c.name for rep in reports for c in rep.claims if not c.passed]
        bad += [c.name for c in cross if not c.passed]
        failures += [f"p={p}:{name}" for name in bad]
        status = "ok" if not bad else "CLAIMS-FAILED"
        print(f"p={p} records={written} claims={status}")
    if failures:
        print(f"exact-claim violation: {' '.join(failures)}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def _cmd_oracle_check(args) -> int:
    if args.max_prime < 2 or args.max_prime > oracle.ORACLE_PRIME_LIMIT:
        raise InvalidInputError(
            f"--max-prime must be in [2, {oracle.ORACLE_PRIME_LIMIT}], got {args.max_prime}")
    threads = args.threads or _default_threads()
    primes = []
    candidate = 2
    while candidate <= args.max_prime:
        if is_prime(candidate):
            primes.append(candidate)
        candidate += 1
    for p in primes:
        fp, ha, tc = census.census_all(p, workers=threads)
        for name, fast, slow in (("fp", fp, oracle.oracle_fp(p)),
                                 ("ha", ha, oracle.oracle_ha(p)),
                                 ("tc", tc, oracle.oracle_tc(p))):
            if fast != slow:
                print(f"oracle mismatch: p={p} equation={name}", file=sys.stderr)
                return EXIT_INVARIANT
    print(f"oracle-check: census equals brute force for all {len(primes)} primes "
          f"<= {args.max_prime}")
    return EXIT_OK


def _cmd_identities(args) -> int:
    if args.max_n < 1:
        raise InvalidInputError(f"--max-n must be >= 1, got {args.max_n}")
    for n in range(1, args.max_n + 1):
        f = factorize(n)
        if ha_sum_form(f) != ha_geneq_form(f):
            print(f"identity violation: sum form != product form at n={n}", file=sys.stderr)
            return EXIT_INVARIANT
        if f.is_squarefree and ha_sum_form(f) != ha_squarefree_form(f):
            print(f"identity violation: squarefree product differs at n={n}", file=sys.stderr)
            return EXIT_INVARIANT
    print(f"identities: sum form == product form for n <= {args.max_n}; "
          "squarefree product agrees")
    for q in range(2, 10001):
        if not is_prime(q):
            continue
        lhs = Fraction((q - 1) ** 3, q**2) + (1 + Fraction(q - 1, q)) ** 2
        if lhs != q + 1 - Fraction(1, q):
            print(f"identity violation: per-prime identity fails at q={q}", file=sys.stderr)
            return EXIT_INVARIANT
    print("identities: phi(q)^3/q^2 + (1+phi(q)/q)^2 == q+1-1/q for all primes q <= 10^4")
    return EXIT_OK


_COMMANDS = {
    "count": _cmd_count,
    "predict": _cmd_predict,
    "compare": _cmd_compare,
    "sweep": _cmd_sweep,
    "oracle-check": _cmd_oracle_check,
    "identities": _cmd_identities,
}


def dispatch(argv: list[str]) -> int:
    """Parse argv and run one subcommand, mapping errors to exit codes."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except InvalidInputError as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except MalformedRecordError as exc:
        print(f"error: malformed record: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except OSError as exc:
        print(f"error: i/o failure: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except InvariantViolation as exc:
        print(f"error: invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
