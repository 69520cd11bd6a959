"""Сводный отчёт verify-all: статический реестр проверок в фиксированном порядке."""

from __future__ import annotations

import json
import logging
import random
from collections.abc import Callable, Mapping
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .. import config
from ..bundle import (
    approximation,
    build_lambda2_trivialization,
    cert_d,
    lemma5_conditions,
    lemma5_membership,
    linear_part_exponents,
    random_lemma5_input,
    remark3_nonmembership,
    sl2_factor,
    sol_certificate,
    transition_function,
    verify_cocycle,
    verify_prim,
    verify_tau0_tame,
)
from ..endomap import (
    beta_chain,
    build_alpha_n,
    flatten,
    invert_chain,
    is_integral,
    nagata_map,
    psi_chart_forms,
    verify_footnote_decomposition,
)
from ..errors import CertificateError, VerificationError
from ..exactpoly import Poly, substitute
from ..gallery import Gallery, fiber_frame_check, identity_suite
from ..poly_format import format_poly
from ..rings import AMBIENT, AMBIENT_X, FIBER, NAGATA_RING
from ..templating import render

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReportEntry:
    id: str
    passed: bool
    anchor: str
    residual: Poly | None = None
    detail: str = ""


@dataclass
class Report:
    entries: list[ReportEntry] = field(default_factory=list)

    @property
    def passed_count(self) -> int:
        return sum(1 for e in self.entries if e.passed)

    @property
    def failed_count(self) -> int:
        return len(self.entries) - self.passed_count

    @property
    def ok(self) -> bool:
        return self.failed_count == 0

    def to_json(self) -> str:
        rows = []
        for e in self.entries:
            row = {"id": e.id, "status": "PASS" if e.passed else "FAIL", "anchor": e.anchor}
            if e.residual is not None and not e.residual.is_zero:
                row["residual"] = format_poly(e.residual)
            rows.append(row)
        return json.dumps(rows, ensure_ascii=False, indent=2)

    def to_text(self) -> str:
        return render("report.txt.j2", report=self)


def _entry(id_: str, anchor: str, passed: bool, residual: Poly | None = None, detail: str = ""):
    return ReportEntry(id_, passed, anchor, None if passed else residual, "" if passed else detail)


def _guarded(id_: str, anchor: str, check: Callable[[], bool]) -> ReportEntry:
    """Проверка, бросающая VerificationError, превращается в FAIL с остатком."""
    try:
        return _entry(id_, anchor, check())
    except VerificationError as exc:
        return _entry(id_, anchor, False, exc.residual, str(exc))


# --- группы реестра ---


def check_identity_suite(overrides: Mapping[str, Poly], seed: int, points: int) -> list[ReportEntry]:
    results = identity_suite(Gallery(overrides=overrides), points=points, seed=seed)
    return [
        _entry(r.id, r.anchor, r.passed, r.residual, "" if r.residual is not None else "smoke")
        for r in results
    ]


def check_psi_charts(overrides: Mapping[str, Poly], seed: int, points: int) -> list[ReportEntry]:
    gal = Gallery(overrides=overrides)
    out = []
    for n in range(3, 6):
        charts = psi_chart_forms(n)
        residual = None
        for got, want in (
            (charts.theta_tau0, gal.theta(n)),
            (charts.theta_tau1, gal.theta(n)),
            (charts.zeta_tau0, gal.zeta(n)),
        ):
            if got != want:
                residual = got - want
                break
        out.append(
            _entry(f"I-PSI(n={n})", "\\psi|U_i:=\\tau_i^{-1}\\varphi_i", residual is None, residual)
        )
    return out


def check_nagata(overrides: Mapping[str, Poly], seed: int, points: int) -> list[ReportEntry]:
    y, z, u = NAGATA_RING.gens()
    w = z * z + y * u
    image = substitute(w, nagata_map().images)
    invariant = _entry("NAGATA-W", "w=z^2+yu", image == w, image - w)
    footnote = _guarded("NAGATA-FOOTNOTE", "\\alpha\\mu=\\mu\\delta", verify_footnote_decomposition)
    return [invariant, footnote]


def check_beta(overrides: Mapping[str, Poly], seed: int, points: int) -> list[ReportEntry]:
    gal = Gallery()
    chain = beta_chain()
    flat = flatten(chain)
    expected = [gal.x, gal.y, gal.t, gal.eta]
    residual = next((g - w for g, w in zip(flat.images, expected) if g != w), None)
    inverse = flatten(invert_chain(chain))
    return [
        _entry("BETA-IMAGES", "\\beta=(y,t,\\eta)", residual is None, residual),
        _entry(
            "BETA-INV-NOT-INTEGRAL",
            "\\beta^{-1}\\notin Aut_{\\mathbb Z[x]}",
            is_integral(inverse, AMBIENT_X) and not is_integral(inverse, AMBIENT),
            detail="β⁻¹ целый над ℤ[x]",
        ),
    ]


def check_alpha(overrides: Mapping[str, Poly], seed: int, points: int) -> list[ReportEntry]:
    out = []
    for n in range(3, 6):

        def build(n=n) -> bool:
            build_alpha_n(n)
            return True

        out.append(_guarded(f"ALPHA(n={n})", "\\alpha_n\\in Aut_{\\mathbb Z[x]}", build))
    return out


def check_lambda2(overrides: Mapping[str, Poly], seed: int, points: int) -> list[ReportEntry]:
    def build() -> bool:
        build_lambda2_trivialization()
        return True

    return [
        _guarded("LAMBDA2-TRIVIAL", "\\varphi_{10}^{(2)}=\\tau_1\\tau_0^{-1}", build),
        _entry("TAU0-TAME", "\\tau_0^{(2)}", verify_tau0_tame()),
    ]


def check_sol_certificates(overrides: Mapping[str, Poly], seed: int, points: int) -> list[ReportEntry]:
    out = []
    for n in range(1, 6):
        tf = approximation(transition_function(n), 2)
        cert = sol_certificate(n)
        failed = []
        if not verify_cocycle(cert, tf):
            failed.append("cocycle")
        try:
            if cert_d(cert) != 1:
                failed.append("d")
            elif not verify_prim(cert, tf):
                failed.append("prim")
        except CertificateError:
            failed.append("d")
        if not lemma5_conditions(cert.a).holds:
            failed.append("lemma5")
        out.append(
            _entry(f"SOL(n={n})", "x^kb_1-v^lb_0=p(a)", not failed, detail=", ".join(failed))
        )
    return out


def check_linear_parts(overrides: Mapping[str, Poly], seed: int, points: int) -> list[ReportEntry]:
    bad_pairs = [
        (a, b) for a in range(4) for b in range(4) if not sl2_factor(a, b).verified
    ]
    exps = {n: linear_part_exponents(transition_function(n)) for n in range(1, 6)}
    bad_n = [n for n, e in exps.items() if e != (1, 2)]
    return [
        _entry("SL2-FACTOR", "g\\tau_0^{(1)}=\\tau_1^{(1)}", not bad_pairs, detail=f"{bad_pairs}"),
        _entry("LINEAR-EXPONENTS", "(\\alpha,\\beta)=(1,2)", not bad_n, detail=f"n = {bad_n}"),
    ]


def check_remark3(overrides: Mapping[str, Poly], seed: int, points: int) -> list[ReportEntry]:
    return [
        _entry(f"REMARK3(n={n})", "p_n\\notin(x^k,v^l)", remark3_nonmembership(n))
        for n in range(1, 6)
    ]


def check_fiber_frame(overrides: Mapping[str, Poly], seed: int, points: int) -> list[ReportEntry]:
    return [_entry("FIBER-FRAME", "(t,\\zeta^{(1)})|_{x=0}", fiber_frame_check(1))]


def check_lemma5_sample(overrides: Mapping[str, Poly], seed: int, points: int) -> list[ReportEntry]:
    """Случайные a с a00 = 0, a01 = a10²: член идеала; сдвиг a01 на t выводит из идеала."""
    rng = random.Random(seed)
    perturbation = FIBER.gen("v") * FIBER.gen("t")
    failures = []
    for i in range(points):
        a = random_lemma5_input(rng)
        for n in range(1, 6):
            if not lemma5_membership(n, a) or lemma5_membership(n, a + perturbation):
                failures.append((i, n))
    return [
        _entry("LEMMA5-SAMPLE", "p(a)\\in(x^k,v^l)", not failures, detail=f"сбои (образец, n): {failures}")
    ]


REGISTRY: tuple[Callable[..., list[ReportEntry]], ...] = (
    check_identity_suite,
    check_psi_charts,
    check_nagata,
    check_beta,
    check_alpha,
    check_lambda2,
    check_sol_certificates,
    check_linear_parts,
    check_remark3,
    check_fiber_frame,
    check_lemma5_sample,
)


def _run_group(args) -> list[ReportEntry]:
    group, overrides, seed, points = args
    return group(overrides, seed, points)


def verify_all(
    overrides: Mapping[str, Poly] | None = None,
    seed: int = config.SEED,
    points: int = config.SMOKE_POINTS,
    workers: int = config.WORKERS,
) -> Report:
    jobs = [(group, dict(overrides or {}), seed, points) for group in REGISTRY]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            groups = list(pool.map(_run_group, jobs))
    else:
        groups = [_run_group(job) for job in jobs]
    report = Report([entry for group in groups for entry in group])
    logger.info(
        "verify-all: %d passed, %d failed", report.passed_count, report.failed_count
    )
    return report
