"""Command-line front end: search, certify and analytic subcommands.

Exit codes: 0 success (certify: conclusion certified), 1 certification
not reached, 2 usage or argument errors.  All data output is
byte-deterministic; diagnostics go to stderr.  Class numbers computed
while certifying persist in a file cache whose location the
TRIQUAD_CACHE environment variable overrides; the cache affects speed
only, never values.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from . import harness, quadfields
from .cache import ClassNumberStore, default_cache_path
from .certify import certify_triquadratic, serialize_certificate
from .errors import TriquadError
from .search import SearchWindow, direct_scan, find_flanked_primes, format_record

logger = logging.getLogger(__name__)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="triquad",
        description="Square-flanked prime search, p-rationality certificates "
        "and sum-chain lower bounds for triquadratic fields.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_search = sub.add_parser("search", help="find square-flanked primes")
    p_search.add_argument("--limit", type=int, required=True, help="upper bound x")
    p_search.add_argument("--A", type=float, required=True, help="flank exponent")
    mode = p_search.add_mutually_exclusive_group(required=True)
    mode.add_argument(
        "--direct", action="store_true", help="scan every prime up to the limit"
    )
    mode.add_argument(
        "--crt",
        action="store_true",
        help="enumerate congruence classes for window pairs (needs --B)",
    )
    p_search.add_argument("--B", type=float, help="window upper exponent (crt mode)")

    p_cert = sub.add_parser("certify", help="emit a p-rationality certificate")
    p_cert.add_argument("--p", type=int, required=True, help="prime to certify")
    p_cert.add_argument("--out", required=True, help="certificate output path")
    p_cert.add_argument("--m", type=int, help="flank witness for p + 2")
    p_cert.add_argument("--n", type=int, help="flank witness for p - 2")
    p_cert.add_argument("--A", type=float, help="flank exponent for the witnesses")
    p_cert.add_argument(
        "--no-cache", action="store_true", help="skip the class number cache"
    )

    p_an = sub.add_parser("analytic", help="sum-chain lower bound CSV")
    p_an.add_argument("--A", type=float, help="flank exponent")
    p_an.add_argument("--B", type=float, help="window upper exponent")
    p_an.add_argument("--C", type=float, help="congruence error exponent")
    p_an.add_argument(
        "--grid", required=True, help="comma-separated evaluation points"
    )
    p_an.add_argument("--grh", action="store_true", help="power-window variant")
    p_an.add_argument("--epsilon", type=float, help="lower power exponent (grh)")
    p_an.add_argument("--alpha", type=float, help="upper power exponent (grh)")
    p_an.add_argument(
        "--force-window",
        help="fixed pair list m1:n1,m2:n2,... bypassing the window",
    )
    p_an.add_argument("--out", help="write CSV here instead of stdout")
    return parser


def _usage_error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def cmd_search(args) -> int:
    if args.crt and args.B is None:
        return _usage_error("--crt requires --B")
    if args.direct and args.B is not None:
        return _usage_error("--direct does not take --B")
    try:
        if args.direct:
            records = direct_scan(args.limit, args.A)
        else:
            window = SearchWindow(args.limit, args.A, args.B)
            records = find_flanked_primes(window)
    except (TriquadError, ValueError) as exc:
        return _usage_error(str(exc))
    for rec in records:
        print(format_record(rec))
    return 0


def cmd_certify(args) -> int:
    if args.p < 5:
        return _usage_error(f"certification needs a prime p >= 5, got {args.p}")
    witness_flags = (args.m is not None, args.n is not None, args.A is not None)
    if any(witness_flags) and not all(witness_flags):
        return _usage_error("--m, --n and --A must be supplied together")
    store = None
    if not args.no_cache:
        try:
            store = ClassNumberStore(default_cache_path())
        except ValueError as exc:
            logger.warning("ignoring inconsistent cache: %s", exc)
    quadfields.set_class_number_store(store)
    try:
        cert = certify_triquadratic(
            args.p, flank_exponent=args.A if all(witness_flags) else None
        )
    except TriquadError as exc:
        return _usage_error(str(exc))
    finally:
        quadfields.set_class_number_store(None)
    if all(witness_flags):
        m, n, _ = cert.flank
        if (m, n) != (args.m, args.n):
            return _usage_error(
                f"witnesses ({args.m}, {args.n}) do not match the square "
                f"parts ({m}, {n}) of p +/- 2"
            )
    text = serialize_certificate(cert)
    try:
        with open(args.out, "w") as fh:
            fh.write(text)
    except OSError as exc:
        return _usage_error(f"cannot write certificate: {exc}")
    print(f"p {args.p}: {cert.conclusion}")
    return 0 if cert.conclusion == "certified" else 1


def _parse_grid(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part]


def _parse_pairs(text: str) -> list[tuple[int, int]]:
    pairs = []
    for chunk in text.split(","):
        if not chunk:
            continue
        m_text, sep, n_text = chunk.partition(":")
        if not sep:
            raise ValueError(f"pair {chunk!r} is not of the form m:n")
        pairs.append((int(m_text), int(n_text)))
    return pairs


def cmd_analytic(args) -> int:
    try:
        grid = _parse_grid(args.grid)
        forced = _parse_pairs(args.force_window) if args.force_window else None
        if args.grh:
            if args.epsilon is None or args.alpha is None:
                return _usage_error("--grh requires --epsilon and --alpha")
            cfg = harness.GrhConfig(args.epsilon, args.alpha, grid)
            rows = harness.grh_chain_report(cfg, forced_pairs=forced)
        else:
            if args.A is None:
                return _usage_error("--A is required without --grh")
            cfg = harness.HarnessConfig(args.A, args.B, args.C, grid)
            rows = harness.chain_report(cfg, forced_pairs=forced)
    except (TriquadError, ValueError) as exc:
        return _usage_error(str(exc))
    csv_text = harness.rows_to_csv(rows)
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(csv_text)
        except OSError as exc:
            return _usage_error(f"cannot write CSV: {exc}")
    else:
        sys.stdout.write(csv_text)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    if not logging.getLogger().handlers:
        logging.basicConfig(stream=sys.stderr, level=logging.WARNING)
    args = _build_parser().parse_args(argv)
    if args.command == "search":
        return cmd_search(args)
    if args.command == "certify":
        return cmd_certify(args)
    return cmd_analytic(args)


if __name__ == "__main__":
    sys.exit(main())
