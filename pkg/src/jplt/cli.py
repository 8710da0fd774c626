"""Command-line front end.

Subcommands cover the full protocol lifecycle: generate a dataset and a
demand, build a query, answer it (in-process or over TCP), recover the
result, run everything end to end, audit a query's privacy, and print rate
tables. Message indices on the command line and in JSON files are 1-based;
binary files carry raw residue matrices.

Any library error exits with status 2 and a single machine-readable line:
"error: <ErrorClass>: <message>".
"""

import argparse
import sys

import numpy as np

from .audit import (
    DEFAULT_SUBSET_LIMIT,
    DEFAULT_TUPLE_LIMIT,
    posterior_oracle,
    verify_structural,
)
from .errors import JpltError, ParamInvalid
from .field import PrimeField, random_dataset
from .formats import (
    decode_answer,
    decode_dataset,
    decode_query,
    demand_from_json,
    demand_to_json,
    encode_answer,
    encode_dataset,
    encode_matrix,
    encode_query,
    plan_from_json,
    plan_to_json,
    posterior_table_to_json,
    structural_report_to_json,
)
from .protocol import (
    DemandSpec,
    build_query,
    direct_demand_eval,
    random_demand,
    rate_report,
    recover,
    sample_query_key,
    server_answer,
)
from .wire import fetch, serve


def _read(path):
    with open(path, "rb") as fh:
        return fh.read()


def _write(path, data):
    mode = "wb" if isinstance(data, bytes) else "w"
    with open(path, mode) as fh:
        fh.write(data)


def _rng(seed):
    return np.random.default_rng(seed)


def _print_rate(r):
    line = (f"rate: {r.jplt_rate} (full download: {r.pir_baseline}, "
            f"per-combination: {r.plc_baseline})")
    if r.answer_bits is not None:
        line += f", answer: {r.answer_bits:.1f} bits"
    print(line)


def _print_values(z):
    for i, row in enumerate(z, start=1):
        print(f"Z[{i}] = {' '.join(str(int(v)) for v in row)}")


def cmd_gen_dataset(args):
    field = PrimeField(args.p)
    data = random_dataset(field, args.K, args.m, _rng(args.seed))
    _write(args.out, encode_dataset(data))
    print(f"dataset p={args.p} K={args.K} m={args.m} -> {args.out}")
    return 0


def _parse_support(text):
    return tuple(int(c) - 1 for c in text.split(","))


def _parse_coeffs(text):
    return [[int(v) for v in row.split(",")] for row in text.split(";")]


def cmd_gen_demand(args):
    field = PrimeField(args.p)
    if args.support is not None or args.coeffs is not None:
        if args.support is None or args.coeffs is None:
            raise ParamInvalid("explicit demands need both --support and --coeffs")
        demand = DemandSpec(
            field=field,
            num_messages=args.K,
            support=_parse_support(args.support),
            coeffs=np.asarray(_parse_coeffs(args.coeffs), dtype=object),
        )
    else:
        if args.D is None or args.L is None:
            raise ParamInvalid("random demands need --D and --L")
        demand = random_demand(field, args.K, args.D, args.L,
                               _rng(args.seed), scramble=args.scramble)
    _write(args.out, demand_to_json(demand))
    print(f"demand D={demand.support_size} L={demand.demand_dim} "
          f"of K={demand.num_messages} -> {args.out}")
    return 0


def cmd_query(args):
    demand = demand_from_json(_read(args.infile).decode("utf-8"))
    key = sample_query_key(demand, _rng(args.seed))
    query, plan = build_query(demand, key, mode=args.mode, msg_len=args.m)
    _write(args.out, encode_query(query))
    _write(args.plan, plan_to_json(plan, demand.field.p))
    print(f"query {query.answer_len}x{query.num_messages} -> {args.out}, "
          f"plan -> {args.plan}")
    _print_rate(rate_report(query.num_messages, query.support_size,
                            query.demand_dim, demand.field.p, args.m))
    return 0


def cmd_answer(args):
    query = decode_query(_read(args.infile))
    data = decode_dataset(_read(args.data))
    ans = server_answer(query, data)
    _write(args.out, encode_answer(ans, data.num_messages))
    print(f"answer: {ans.length} rows of {ans.msg_len} -> {args.out}")
    return 0


def cmd_recover(args):
    ans = decode_answer(_read(args.infile))
    plan = plan_from_json(_read(args.plan).decode("utf-8"))
    z = recover(ans, plan)
    _print_values(z)
    if args.out:
        _write(args.out, encode_matrix(z, ans.field.p))
        print(f"recovered values -> {args.out}")
    return 0


def cmd_run(args):
    field = PrimeField(args.p)
    rng = _rng(args.seed)
    if args.data:
        data = decode_dataset(_read(args.data))
        if data.field.p != args.p or data.msg_len != args.m \
                or data.num_messages != args.K:
            raise JpltError("--data file disagrees with --p/--m/--K")
    else:
        data = random_dataset(field, args.K, args.m, rng)
    if args.infile:
        demand = demand_from_json(_read(args.infile).decode("utf-8"))
    else:
        if args.D is None or args.L is None:
            raise ParamInvalid("need --D and --L unless --in gives a demand")
        demand = random_demand(field, args.K, args.D, args.L, rng)
    key = sample_query_key(demand, rng)
    query, plan = build_query(demand, key, mode=args.mode, msg_len=args.m)
    ans = server_answer(query, data)
    z = recover(ans, plan)
    want = direct_demand_eval(data, demand)
    print(f"query: {query.answer_len}x{query.num_messages} ({args.mode} mode), "
          f"answer: {ans.length} rows")
    _print_values(z)
    ok = np.array_equal(z, want)
    print(f"recovery check: {'ok' if ok else 'MISMATCH'}")
    _print_rate(rate_report(query.num_messages, query.support_size,
                            query.demand_dim, args.p, args.m))
    return 0 if ok else 1


def cmd_audit(args):
    limit = args.work_limit
    if args.mode == "structural":
        if not args.infile:
            raise ParamInvalid("structural audit needs --in <query file>")
        query = decode_query(_read(args.infile))
        report = verify_structural(
            query.matrix, query.field.p, query.support_size, query.demand_dim,
            strict=not args.lenient,
            work_limit=limit if limit is not None else DEFAULT_SUBSET_LIMIT,
        )
        if args.out:
            _write(args.out, structural_report_to_json(report))
        print(f"structural audit ({'lenient' if args.lenient else 'strict'}): "
              f"{'PASS' if report.verdict else 'FAIL'} "
              f"({len(report.records)} supports)")
        return 0 if report.verdict else 1
    if None in (args.p, args.K, args.D, args.L):
        raise ParamInvalid("posterior audit needs --p --K --D --L")
    field = PrimeField(args.p)
    table = posterior_oracle(
        field, args.K, args.D, args.L, scheme=args.scheme,
        work_limit=limit if limit is not None else DEFAULT_TUPLE_LIMIT,
    )
    if args.out:
        _write(args.out, posterior_table_to_json(table))
    print(f"posterior audit: tv_max = {table.tv_max} over "
          f"{table.total_tuples} tuples ({len(table.groups)} distinct queries)")
    return 0 if table.tv_max == 0 else 1


def cmd_bench(args):
    ells = [args.L] if args.L else list(range(1, args.D + 1))
    print(f"K={args.K} D={args.D}" + (f" p={args.p}" if args.p else ""))
    print(f"{'L':>3} {'rate':>8} {'full-dl':>8} {'per-comb':>9} {'bits':>10}")
    for ell in ells:
        r = rate_report(args.K, args.D, ell, args.p, args.m)
        bits = f"{r.answer_bits:.1f}" if r.answer_bits is not None else "-"
        print(f"{ell:>3} {str(r.jplt_rate):>8} {str(r.pir_baseline):>8} "
              f"{str(r.plc_baseline):>9} {bits:>10}")
    return 0


def cmd_serve(args):
    data = decode_dataset(_read(args.infile))
    print(f"serving p={data.field.p} K={data.num_messages} m={data.msg_len} "
          f"on {args.host}:{args.port}")
    try:
        serve(data, args.host, args.port)
    except KeyboardInterrupt:
        pass
    return 0


def cmd_fetch(args):
    query = decode_query(_read(args.infile))
    ans = fetch(args.host, args.port, query)
    _write(args.out, encode_answer(ans, query.num_messages))
    print(f"answer: {ans.length} rows of {ans.msg_len} -> {args.out}")
    return 0


def _add_field_args(sp, m=True):
    sp.add_argument("--p", type=int, required=True, help="field size (prime)")
    if m:
        sp.add_argument("--m", type=int, default=1, help="message length")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="jplt",
        description="private linear transformations of a remote dataset",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("gen-dataset", help="write a random dataset file")
    _add_field_args(sp)
    sp.add_argument("--K", type=int, required=True, help="number of messages")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_gen_dataset)

    sp = sub.add_parser("gen-demand", help="write a demand file (random or explicit)")
    _add_field_args(sp, m=False)
    sp.add_argument("--K", type=int, required=True)
    sp.add_argument("--D", type=int, help="support size (random demands)")
    sp.add_argument("--L", type=int, help="number of combinations (random demands)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--support", help="explicit 1-based indices, e.g. 2,4,5,7,8")
    sp.add_argument("--coeffs", help="explicit rows, e.g. 1,3,2;3,10,7")
    sp.add_argument("--scramble", action="store_true",
                    help="random demands: mix rows so the matrix is not in "
                         "multiplier/point form")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_gen_demand)

    sp = sub.add_parser("query", help="build a query + recovery plan from a demand")
    sp.add_argument("--in", dest="infile", required=True, help="demand JSON")
    sp.add_argument("--m", type=int, default=1, help="message length")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--mode", choices=["grs", "generic"], default="grs")
    sp.add_argument("--out", required=True, help="query file")
    sp.add_argument("--plan", required=True, help="recovery plan JSON")
    sp.set_defaults(func=cmd_query)

    sp = sub.add_parser("answer", help="answer a query file against a dataset file")
    sp.add_argument("--in", dest="infile", required=True, help="query file")
    sp.add_argument("--data", required=True, help="dataset file")
    sp.add_argument("--out", required=True, help="answer file")
    sp.set_defaults(func=cmd_answer)

    sp = sub.add_parser("recover", help="combine an answer with a recovery plan")
    sp.add_argument("--in", dest="infile", required=True, help="answer file")
    sp.add_argument("--plan", required=True, help="recovery plan JSON")
    sp.add_argument("--out", help="optional output matrix file")
    sp.set_defaults(func=cmd_recover)

    sp = sub.add_parser("run", help="full exchange in-process, with self-check")
    _add_field_args(sp)
    sp.add_argument("--K", type=int, required=True)
    sp.add_argument("--D", type=int, help="random demand support size")
    sp.add_argument("--L", type=int, help="random demand combinations")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--mode", choices=["grs", "generic"], default="grs")
    sp.add_argument("--in", dest="infile", help="demand JSON (else random)")
    sp.add_argument("--data", help="dataset file (else random)")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("audit", help="privacy audits: structural or posterior")
    sp.add_argument("--mode", choices=["structural", "posterior"],
                    required=True)
    sp.add_argument("--in", dest="infile", help="query file (structural)")
    sp.add_argument("--lenient", action="store_true",
                    help="structural: necessary condition only")
    sp.add_argument("--p", type=int, help="posterior: field size")
    sp.add_argument("--K", type=int, help="posterior: messages")
    sp.add_argument("--D", type=int, help="posterior: support size")
    sp.add_argument("--L", type=int, help="posterior: combinations")
    sp.add_argument("--scheme", default="grs", choices=["grs", "generic"],
                    help="posterior: which builder to enumerate")
    sp.add_argument("--work-limit", type=int, dest="work_limit")
    sp.add_argument("--out", help="optional JSON report path")
    sp.set_defaults(func=cmd_audit)

    sp = sub.add_parser("bench", help="rate table against both baselines")
    sp.add_argument("--K", type=int, required=True)
    sp.add_argument("--D", type=int, required=True)
    sp.add_argument("--L", type=int, help="single row (default: all L <= D)")
    sp.add_argument("--p", type=int, help="field size, for answer bits")
    sp.add_argument("--m", type=int, default=1)
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("serve", help="serve a dataset file over TCP")
    sp.add_argument("--in", dest="infile", required=True, help="dataset file")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, required=True)
    sp.set_defaults(func=cmd_serve)

    sp = sub.add_parser("fetch", help="send a query file to a server")
    sp.add_argument("--in", dest="infile", required=True, help="query file")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, required=True)
    sp.add_argument("--out", required=True, help="answer file")
    sp.set_defaults(func=cmd_fetch)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (JpltError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
