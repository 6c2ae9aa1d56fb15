"""Command-line front end.

Subcommands: ``compute``, ``verify``, ``dump``, ``betti`` and ``cache``.
Exit codes: 0 success, 1 a check failed, 2 usage, 3 resource limit,
4 internal inconsistency, 5 cache corruption.
"""

import argparse
import json
import sys
import time

from . import config
from .cache import SCHEMA_VERSION, ReportCache
from .coxeter import make_system, reflection_count
from .errors import (CacheCorruption, DivisionByZero, InconsistencyError, ParseError,
                     PrimeDisagreement, ResourceLimit, UsageError)
from .homology import METHODS, compute_homology
from .lsm import dump_matrix, ring_from_tag
from .salvetti import LAURENT, ComplexSpec, build_complex, specialize_complex
from .theorems import (betti, check_rank_formula, check_stability, desk_jobs, extended_jobs,
                       run_suite)

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_RESOURCE, EXIT_INCONSISTENT, EXIT_CACHE = range(6)


def report_document(report, system):
    doc = {
        "schema_version": SCHEMA_VERSION,
        "family": system.family,
        "rank": system.rank,
        "complex": report.complex,
        "hyperplanes": reflection_count(system),
        "method": report.method,
        "degrees": [deg.to_dict() for deg in sorted(report.degrees, key=lambda d: d.k)],
        "timing_ms": report.meta.get("timing_ms", 0),
    }
    if report.meta.get("primes"):
        doc["primes"] = [list(p) for p in report.meta["primes"]]
    return doc


def serialize(document):
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


def _emit(document, path):
    text = serialize(document)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _resolve_method(method, cx):
    if method == "auto":
        return "snf" if cx.num_cells <= config.SNF_CELL_LIMIT else "field"
    return method


def _spec(text):
    try:
        return ComplexSpec.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_compute(args):
    system = make_system(args.family, args.rank)
    spec = _spec(args.complex)
    if spec.variant != "full" and not 0 <= spec.k <= system.rank:
        raise UsageError(f"k={spec.k} outside 0..{system.rank}")
    cx = build_complex(system, spec)
    method = _resolve_method(args.method, cx)
    cache = None if args.no_cache else ReportCache(args.cache_dir)
    key = cache.key(system.family, system.rank, str(spec), method) if cache else None
    doc = cache.get(key) if cache else None
    if doc is None:
        doc = report_document(compute_homology(cx, method), system)
        if cache:
            cache.put(key, doc)
    _emit(doc, args.out)
    return EXIT_OK


def _checks_document(results, extra=None):
    doc = {"schema_version": SCHEMA_VERSION,
           "checks": [r.to_dict() for r in results]}
    doc.update(extra or {})
    return doc


def _finish_checks(results, args, extra=None, start=None):
    for r in results:
        print(r.line(), file=sys.stderr)
    doc = _checks_document(results, extra)
    doc["timing_ms"] = int(1000 * (time.perf_counter() - start)) if start else 0
    if args.out:
        _emit(doc, args.out)
    else:
        sys.stdout.write(serialize(doc))
    failed = [r for r in results if r.counts and not r.passed]
    return EXIT_FAILED if failed else EXIT_OK


def cmd_verify(args):
    start = time.perf_counter()
    if args.what == "stability":
        results = []
        first = 2 if args.family.upper() == "D" else 1
        for n in range(first, args.n_max + 1):
            for k in range(args.k_max + 1):
                if k <= n:
                    results.append(check_stability(args.family.upper(), k, n, args.method))
        return _finish_checks(results, args, {"family": args.family.upper()}, start)
    if args.what == "rank-formula":
        system = make_system(args.family, args.rank)
        result = check_rank_formula(system, args.k, args.method)
        return _finish_checks([result], args, {"family": system.family, "rank": system.rank},
                              start)
    jobs = desk_jobs() if args.profile == "desk" else extended_jobs()
    results = run_suite(jobs, args.threads)
    return _finish_checks(results, args, {"profile": args.profile}, start)


def cmd_dump(args):
    system = make_system(args.family, args.rank)
    if not 1 <= args.degree <= system.rank:
        raise UsageError(f"degree must be in 1..{system.rank}")
    try:
        ring = ring_from_tag(args.ring)
    except ParseError as exc:
        raise UsageError(str(exc)) from None
    cx = build_complex(system, _spec(args.complex), max_degree=args.degree)
    if ring is not LAURENT:
        cx = specialize_complex(cx, ring, check=False)
    dump_matrix(cx, args.degree, sys.stdout)
    return EXIT_OK


def cmd_betti(args):
    vector = betti(make_system(args.family, args.rank))
    sys.stdout.write(json.dumps(vector.to_list()) + "\n")
    return EXIT_OK


def cmd_cache(args):
    cache = ReportCache(args.cache_dir)
    if args.action == "clear":
        info = {"removed": cache.clear()}
    else:
        info = cache.stat()
        for name in cache.entries():
            cache.get(name[: -len(".json")])  # checksum every entry
    sys.stdout.write(json.dumps(info, sort_keys=True) + "\n")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="salvhom",
                                     description="Twisted homology of Artin group complexes.")
    parser.add_argument("--cache-dir", default=None,
                        help="result cache directory (default: $SALV_CACHE_DIR or .salv-cache)")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker processes for suites (default: $SALV_THREADS or all cores)")
    parser.add_argument("--cell-limit", type=int, default=None,
                        help="largest complex to build (default: $SALV_CELL_LIMIT or 8000000)")
    sub = parser.add_subparsers(dest="command", required=True)

    def group(p):
        p.add_argument("--family", required=True, choices=["A", "B", "D", "a", "b", "d"])
        p.add_argument("--rank", required=True, type=int)

    p = sub.add_parser("compute", help="homology report of one complex")
    group(p)
    p.add_argument("--complex", default="full", help="full | subg:K | quotf:K | quotmod:K")
    p.add_argument("--method", default="auto", choices=METHODS)
    p.add_argument("--out", default=None, help="report path (default: standard output)")
    p.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="run checks")
    vsub = p.add_subparsers(dest="what", required=True)
    q = vsub.add_parser("stability")
    q.add_argument("--family", required=True, choices=["A", "B", "D", "a", "b", "d"])
    q.add_argument("--k-max", type=int, required=True)
    q.add_argument("--n-max", type=int, required=True)
    q.add_argument("--method", default="auto", choices=METHODS)
    q = vsub.add_parser("rank-formula")
    group(q)
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--method", default="auto", choices=METHODS)
    q = vsub.add_parser("suite")
    q.add_argument("--profile", choices=["desk", "extended"], default="desk")
    for q in vsub.choices.values():
        q.add_argument("--out", default=None, help="report path (default: standard output)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dump", help="write one boundary matrix in LSM format")
    group(p)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--ring", default="laurent", help="laurent | cyc:D | q1")
    p.add_argument("--complex", default="full")
    p.set_defaults(func=cmd_dump)

    p = sub.add_parser("betti", help="untwisted Betti numbers as JSON")
    group(p)
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("cache", help="inspect or clear the result cache")
    p.add_argument("action", choices=["clear", "stat"])
    p.set_defaults(func=cmd_cache)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    config.override(cell_limit=args.cell_limit)
    args.threads = args.threads or config.threads()
    if args.cache_dir is None:
        args.cache_dir = config.cache_dir()
    try:
        return args.func(args)
    except (UsageError, ValueError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except CacheCorruption as exc:
        print(f"cache corruption: {exc}", file=sys.stderr)
        return EXIT_CACHE
    except (InconsistencyError, PrimeDisagreement, DivisionByZero) as exc:
        print(f"inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    finally:
        config.override(cell_limit=None)


if __name__ == "__main__":
    sys.exit(main())
