import sys

from ..bundle import (
    approximation,
    cert_d,
    format_certificate,
    lemma5_conditions,
    parse_certificate,
    transition_function,
    verify_cocycle,
    verify_prim,
)
from ..endomap import format_map
from ..errors import CertificateError
from ..poly_format import format_poly
from ..services.search_service import search_certificate
from ..templating import render
from ..utils.params import nonnegative_int, positive_int


def _transition(args):
    tf = transition_function(args.n)
    if args.m is not None:
        tf = approximation(tf, args.m)
    return tf


def run_check_cert(args) -> int:
    with open(args.path, encoding="utf-8") as fh:
        cert, _ = parse_certificate(fh.read())
    tf = _transition(args)

    checks = []
    checks.append(("cocycle", verify_cocycle(cert, tf), ""))
    try:
        d = cert_d(cert)
    except CertificateError as exc:
        checks.append(("d", False, str(exc)))
        checks.append(("prim", False, "d не определён"))
    else:
        checks.append(("d", d == 1, f"d = {format_poly(d)}"))
        checks.append(("prim", verify_prim(cert, tf), ""))
    lemma5 = lemma5_conditions(cert.a)
    checks.append(("lemma-5", lemma5.holds, ""))

    sys.stdout.write(render("check_cert.txt.j2", checks=checks))
    return 0 if all(passed for _, passed, _ in checks) else 1


def run_approx(args) -> int:
    tf = approximation(transition_function(args.n), args.m)
    sys.stdout.write(format_map(tf.as_map()))
    return 0


def run_search(args) -> int:
    result = search_certificate(
        args.n,
        args.max_deg,
        args.max_coeff,
        args.shift_deg,
        m=args.m,
        workers=args.workers,
    )
    provenance = (
        f"search n={args.n} max_deg={args.max_deg} "
        f"max_coeff={args.max_coeff} shift_deg={args.shift_deg}"
    )
    for i, cert in enumerate(result.certificates):
        if i:
            print()
        sys.stdout.write(format_certificate(cert, [provenance]))
        sys.stdout.flush()
    pinned = format_poly(result.pinned)
    if result.exhausted:
        print("# перебор исчерпан: сертификатов в заданных границах нет")
        print(f"# линейная часть a закреплена: {pinned}; перебирались только члены степени >= 2")
    print(
        f"examined {result.examined} of estimate {result.estimate} (linear part pinned: {pinned})",
        file=sys.stderr,
    )
    return 0


def register(subparsers) -> None:
    check = subparsers.add_parser("check-cert", help="проверка файла сертификата")
    check.add_argument("path", metavar="PATH")
    check.add_argument("--n", type=positive_int, required=True)
    check.add_argument("--m", type=positive_int)
    check.set_defaults(handler=run_check_cert)

    approx = subparsers.add_parser("approx", help="приближение φ10^(m)")
    approx.add_argument("--n", type=positive_int, required=True)
    approx.add_argument("--m", type=positive_int, required=True)
    approx.set_defaults(handler=run_approx)

    search = subparsers.add_parser("search-cert", help="ограниченный перебор сертификатов")
    search.add_argument("--n", type=positive_int, required=True)
    search.add_argument("--max-deg", type=nonnegative_int, required=True)
    search.add_argument("--max-coeff", type=nonnegative_int, required=True)
    search.add_argument("--shift-deg", type=nonnegative_int, required=True)
    search.add_argument("--m", type=positive_int)
    search.set_defaults(handler=run_search)
