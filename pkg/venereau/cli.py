"""Командная строка: коды выхода 0 (всё прошло), 1 (проверка не прошла),
2 (внутренняя ошибка), 64 (ошибка использования)."""

import argparse
import logging
import sys

from . import config
from .commands.automorphism import register as register_automorphism
from .commands.certificates import register as register_certificates
from .commands.verify import register as register_verify
from .errors import VenereauError, VerificationError
from .utils.params import positive_int

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INTERNAL = 2
EXIT_USAGE = 64


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: ошибка: {message}\n")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="venereau", description="точные проверки для многочленов Венеро")
    parser.add_argument("--workers", type=positive_int, default=config.WORKERS)
    parser.add_argument("--seed", type=int, default=config.SEED)
    subparsers = parser.add_subparsers(dest="command", required=True)

    register_verify(subparsers)
    register_automorphism(subparsers)
    register_certificates(subparsers)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(
        level=config.LOG_LEVEL,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "parser"):
        args.parser = parser

    try:
        return args.handler(args)
    except VerificationError as exc:
        print(f"проверка не прошла: {exc}", file=sys.stderr)
        if exc.residual is not None:
            print(f"остаток: {exc.residual}", file=sys.stderr)
        return EXIT_FAILED
    except (VenereauError, OSError) as exc:
        print(f"ошибка: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception:
        logger.exception("внутренняя ошибка")
        return EXIT_INTERNAL
