"""emit-automorphism, compose и eval: отображения α_n в канонической записи."""

import argparse
import random
import sys

from ..endomap import build_alpha_n, compose, format_map, is_identity, parse_map
from ..exactpoly import eval_at
from ..rings import AMBIENT
from ..utils.params import positive_int
from ..utils.sampling import random_point

DEFAULT_POINT = (2, 3, 5, 7)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def run_emit(args) -> int:
    if args.n < 3:
        args.parser.error(f"--n должно быть ≥ 3 (θ^(n) содержит x^(n−3)), получено {args.n}")
    pair = build_alpha_n(args.n)
    sys.stdout.write(format_map(pair.inverse if args.inverse else pair.forward))
    return 0


def run_compose(args) -> int:
    if args.first == "-" and args.second == "-":
        args.parser.error("стандартный ввод можно указать только для одного файла")
    first = parse_map(_read(args.first))
    second = parse_map(_read(args.second))
    composite = compose(first, second)
    label = f"{first.provenance or args.first} o {second.provenance or args.second}"
    sys.stdout.write(format_map(composite, [label]))
    if args.check_identity and not is_identity(composite):
        print("композиция не тождественна", file=sys.stderr)
        return 1
    return 0


def run_eval(args) -> int:
    if args.random:
        point = random_point(AMBIENT, random.Random(args.seed))
    else:
        point = dict(zip(AMBIENT.variables, args.point or DEFAULT_POINT, strict=True))
    pair = build_alpha_n(3)

    forward = [eval_at(img, point) for img in pair.forward.images]
    back = [eval_at(img, dict(zip(AMBIENT.variables, forward))) for img in pair.inverse.images]
    original = [point[v] for v in AMBIENT.variables]
    ok = back == original

    def show(values) -> str:
        return "(" + ", ".join(str(v) for v in values) + ")"

    print(f"seed: {args.seed}")
    print(f"point: {show(original)}")
    print(f"alpha3: {show(forward)}")
    print(f"alpha3^-1: {show(back)}")
    print(f"round trip: {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def register(subparsers) -> None:
    emit = subparsers.add_parser("emit-automorphism", help="образы образующих α_n")
    emit.add_argument("--n", type=positive_int, required=True)
    emit.add_argument("--inverse", action="store_true")
    emit.set_defaults(handler=run_emit, parser=emit)

    comp = subparsers.add_parser("compose", help="композиция FIRST∘SECOND двух файлов отображений")
    comp.add_argument("first", metavar="FIRST")
    comp.add_argument("second", metavar="SECOND")
    comp.add_argument("--check-identity", action="store_true")
    comp.set_defaults(handler=run_compose, parser=comp)

    ev = subparsers.add_parser("eval", help="α₃ и α₃⁻¹ в целой точке, по умолчанию (2, 3, 5, 7)")
    ev.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    where = ev.add_mutually_exclusive_group()
    where.add_argument("--point", type=int, nargs=4, metavar=("X", "Y", "Z", "U"))
    where.add_argument("--random", action="store_true", help="случайная точка по --seed")
    ev.set_defaults(handler=run_eval, parser=ev)
