"""Command line entry point: ``trideriv analyze | scan | cone``.

Exit codes: 0 success, 1 input error, 2 a constructed derivation failed
its own verification (or a corpus cross-check failed).
"""

from __future__ import annotations

import argparse
import json
import sys

from .analysis import AnalyzeRequest, DEFAULT_PROBE_DEGREE, analyze, cone_plot_data, load_basis, read_input
from .scan import CapExceededError, ScanRequest, scan
from .trinomial import TrinomialParseError

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2


def _analyze(args) -> int:
    basis = load_basis(args.basis) if args.basis else None
    req = AnalyzeRequest(args.input, args.format, basis, args.bound, args.probe_degree)
    report = analyze(req)
    out = report.render_json() if args.format == "json" else report.render_text()
    sys.stdout.write(out)
    if not report.verification_ok or not all(report.consistency.values()):
        return EXIT_VERIFY
    return EXIT_OK


def _scan(args) -> int:
    req = ScanRequest(args.max_ni, args.max_exp, args.out, args.dedupe, args.jobs, not args.no_verify)
    summary = scan(req)
    sys.stdout.write(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if summary["ok"] else EXIT_VERIFY


def _cone(args) -> int:
    basis = load_basis(args.basis) if args.basis else None
    data = cone_plot_data(read_input(args.input), basis, args.probe_degree)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trideriv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="classify one trinomial and verify its elementary derivations")
    p.add_argument("--input", required=True, help="trinomial text, or @file")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--basis", help="target degrees as JSON {\"T01\": [..], ...}, or @file")
    p.add_argument("--bound", type=int, help="nilpotency iteration bound (default 4*max(l)*n)")
    p.add_argument("--probe-degree", type=int, default=DEFAULT_PROBE_DEGREE,
                   help="max total degree of kernel monomials h probed")
    p.set_defaults(func=_analyze)

    p = sub.add_parser("scan", help="scan all trinomials within bounds")
    p.add_argument("--max-ni", type=int, required=True)
    p.add_argument("--max-exp", type=int, required=True)
    p.add_argument("--out", required=True, help="output path (.jsonl or .csv)")
    p.add_argument("--dedupe", action="store_true", help="one trinomial per symmetry orbit")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-verify", action="store_true", help="skip per-family verification")
    p.set_defaults(func=_scan)

    p = sub.add_parser("cone", help="write weight cone plot data as JSON")
    p.add_argument("--input", required=True)
    p.add_argument("--basis")
    p.add_argument("--out", required=True)
    p.add_argument("--probe-degree", type=int, default=2)
    p.set_defaults(func=_cone)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TrinomialParseError, CapExceededError, ValueError, OSError) as exc:
        print(f"trideriv: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
