import io
import json
from functools import partial

import pytest

from venereau.cli import EXIT_USAGE, main
from venereau.gallery import Gallery
from venereau.services import verification_service


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_all_passes_on_clean_build(capsys):
    code, out, _ = run(capsys, "verify-all")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "# seed: 0"
    assert lines[1].startswith("I-REL1 PASS ")
    assert " 0 failed, " in lines[-1]
    assert "FAIL" not in out


def test_verify_all_json_round_trips(capsys):
    code, out, err = run(capsys, "verify-all", "--json")
    assert code == 0
    rows = json.loads(out)
    assert json.loads(json.dumps(rows, ensure_ascii=False)) == rows
    assert rows[0] == {"id": "I-REL1", "status": "PASS", "anchor": "ys+t^2=x^2z^2"}
    assert all(row["status"] == "PASS" for row in rows)
    assert "seed: 0" in err


def test_verify_all_reports_tampered_constant(capsys, monkeypatch):
    gal = Gallery()
    tampered = partial(verification_service.verify_all, overrides={"s": gal.s + 1})
    monkeypatch.setattr("venereau.commands.verify.verify_all", tampered)
    code, out, _ = run(capsys, "verify-all")
    assert code == 1
    assert "I-REL1 FAIL" in out
    assert "    residual: y" in out


def test_verify_all_report_order_is_stable():
    first = verification_service.verify_all(points=0)
    second = verification_service.verify_all(points=0)
    assert [e.id for e in first.entries] == [e.id for e in second.entries]
    assert first.ok


def test_emit_automorphism_prints_venereau_polynomial(capsys):
    code, out, _ = run(capsys, "emit-automorphism", "--n", "3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "ring: x y z u; laurent:"
    assert lines[2] == "x -> x"
    assert lines[3] == "y -> x^3*y^2*u + x^3*y*z^2 + x^4*z + y"
    assert len(lines) == 6


@pytest.mark.parametrize("n", ["2", "0", "abc"])
def test_emit_automorphism_rejects_small_n(capsys, n):
    with pytest.raises(SystemExit) as exc:
        main(["emit-automorphism", "--n", n])
    assert exc.value.code == EXIT_USAGE


def test_emit_inverse_composes_to_identity(capsys, tmp_path, monkeypatch):
    _, forward, _ = run(capsys, "emit-automorphism", "--n", "3")
    _, inverse, _ = run(capsys, "emit-automorphism", "--n", "3", "--inverse")
    first = tmp_path / "a3.map"
    first.write_text(forward, encoding="utf-8")
    monkeypatch.setattr("sys.stdin", io.StringIO(inverse))

    code, out, _ = run(capsys, "compose", str(first), "-", "--check-identity")
    assert code == 0
    assert out.splitlines()[-4:] == ["x -> x", "y -> y", "z -> z", "u -> u"]
    assert "# provenance: alpha n=3 forward o alpha n=3 inverse" in out


def test_compose_check_identity_fails_for_non_identity(capsys, tmp_path):
    path = tmp_path / "swap.map"
    path.write_text("ring: x y; laurent:\nx -> y\ny -> x + y\n", encoding="utf-8")
    code, out, _ = run(capsys, "compose", str(path), str(path), "--check-identity")
    assert code == 1
    assert "y -> x + 2*y" in out


def test_check_cert_on_shipped_certificate(capsys, sol_cert_path):
    code, out, _ = run(capsys, "check-cert", str(sol_cert_path), "--n", "3")
    assert code == 0
    assert out.splitlines() == ["cocycle PASS", "d PASS d = 1", "prim PASS", "lemma-5 PASS"]


def test_check_cert_n_one_against_second_approximation(capsys, sol_cert_n1_path):
    code, _, _ = run(capsys, "check-cert", str(sol_cert_n1_path), "--n", "1", "--m", "2")
    assert code == 0


def test_check_cert_fails_against_full_p2(capsys, sol_cert_path):
    code, out, _ = run(capsys, "check-cert", str(sol_cert_path), "--n", "2")
    assert code == 1
    assert "cocycle FAIL" in out


def test_check_cert_reports_parse_position(capsys, tmp_path):
    path = tmp_path / "bad.cert"
    path.write_text("ring: x v t xi; laurent:\nk = 3\nl = 2\na = v^2*t + $\n", encoding="utf-8")
    code, _, err = run(capsys, "check-cert", str(path), "--n", "3")
    assert code == 2
    assert "строка 4" in err


def test_approx_prints_transition(capsys):
    code, out, _ = run(capsys, "approx", "--n", "3", "--m", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "ring: x v t xi; laurent: x v"
    assert lines[1] == "# provenance: phi10 n=3 m=2"
    assert lines[-1] == "xi -> xi - x^-1*v^-2*t + x^-3*v^-1*t^2"


def test_search_cert_streams_sol(capsys):
    code, out, err = run(
        capsys, "search-cert", "--n", "3", "--max-deg", "3", "--max-coeff", "2", "--shift-deg", "4"
    )
    assert code == 0
    assert "# provenance: search n=3 max_deg=3 max_coeff=2 shift_deg=4" in out
    assert "a = v^2*t + v*xi^2 - x*xi" in out
    assert "b1 = xi" in out
    assert "examined 1 of estimate 125" in err


def test_search_cert_reports_exhausted_bounds(capsys):
    code, out, err = run(
        capsys, "search-cert", "--n", "1", "--max-deg", "1", "--max-coeff", "1", "--shift-deg", "0"
    )
    assert code == 0
    assert out.startswith("# перебор исчерпан")
    assert out.splitlines()[1].startswith("# линейная часть a закреплена: v^2*t - x*xi;")
    assert "linear part pinned: v^2*t - x*xi" in err


def test_eval_round_trip_at_given_point(capsys):
    code, out, _ = run(capsys, "eval", "--seed", "0", "--point", "-1", "4", "0", "6")
    assert code == 0
    assert "point: (-1, 4, 0, 6)" in out
    assert "alpha3^-1: (-1, 4, 0, 6)" in out
    assert out.splitlines()[-1] == "round trip: PASS"


def test_eval_defaults_to_fixed_point(capsys):
    code, out, _ = run(capsys, "eval", "--seed", "0")
    assert code == 0
    assert out.splitlines()[1] == "point: (2, 3, 5, 7)"
    assert out.splitlines()[-1] == "round trip: PASS"


def test_eval_random_point_is_deterministic_for_seed(capsys):
    _, first, _ = run(capsys, "eval", "--seed", "0", "--random")
    _, second, _ = run(capsys, "--seed", "0", "eval", "--random")
    assert first == second
    assert first.splitlines()[0] == "seed: 0"


def test_missing_command_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == EXIT_USAGE


def test_workers_must_be_positive():
    with pytest.raises(SystemExit) as exc:
        main(["--workers", "0", "verify-all"])
    assert exc.value.code == EXIT_USAGE
