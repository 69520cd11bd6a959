import argparse
import sys

from ..services.verification_service import verify_all


def run_verify_all(args) -> int:
    report = verify_all(seed=args.seed, workers=args.workers)
    if args.json:
        print(f"seed: {args.seed}", file=sys.stderr)
        print(report.to_json())
    else:
        print(f"# seed: {args.seed}")
        sys.stdout.write(report.to_text())
    return 0 if report.ok else 1


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify-all", help="весь набор проверок")
    parser.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    parser.add_argument("--json", action="store_true", help="отчёт в JSON")
    parser.set_defaults(handler=run_verify_all)
