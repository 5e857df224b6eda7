"""Command-line behavior: exit codes, artifact files, payload shape."""

import csv
import json

import pytest

from slemma.cli import main
from slemma.homog_core import DEFAULT_SEED


def run(tmp_path, *argv):
    return main([*argv, "--out-dir", str(tmp_path)])


def read_payload(tmp_path, name):
    return json.loads((tmp_path / name).read_text())


def read_rows(tmp_path, name):
    with open(tmp_path / name, newline="") as fh:
        return list(csv.reader(fh))


# -------------------------------------------------------------- happy paths


def test_shs_xi_payload_and_exit(tmp_path, problems_dir):
    code = run(tmp_path, "shs-xi", str(problems_dir / "switch_sextic.json"))
    assert code == 0
    payload = read_payload(tmp_path, "shs-xi_switch_sextic.json")
    assert set(payload) == {"command", "problem", "config", "result"}
    assert payload["command"] == "shs-xi"
    assert payload["problem"] == "switch_sextic.json"
    assert payload["config"]["seed"] == DEFAULT_SEED
    assert payload["config"]["dilation"]["weights"] == [1.0, 1.0]
    res = payload["result"]
    assert res["ok"] is True
    assert res["xi"] == pytest.approx(2.6475887160230425, rel=1e-9)
    assert res["margin"] > 0.75


def test_zeros_detects_the_shared_zero(tmp_path, problems_dir):
    code = run(tmp_path, "zeros", str(problems_dir / "cubic_shared_zero.json"))
    assert code == 1
    payload = read_payload(tmp_path, "zeros_cubic_shared_zero.json")
    assert payload["result"]["margin"] < 1e-9


def test_zeros_clean_pair_exits_zero(tmp_path, problems_dir):
    code = run(tmp_path, "zeros", str(problems_dir / "switch_sextic.json"))
    assert code == 0
    payload = read_payload(tmp_path, "zeros_switch_sextic.json")
    assert payload["result"]["margin"] > 0.25


def test_image_with_csv_and_svg(tmp_path, problems_dir):
    code = run(tmp_path, "image", str(problems_dir / "sector_quartic_pi.json"),
               "--samples", "512", "--format", "csv")
    assert code == 0
    payload = read_payload(tmp_path, "image_sector_quartic_pi.json")
    assert payload["result"]["classification"] == "angular_sector"
    assert payload["result"]["phi"] == pytest.approx(3.14159265, abs=0.05)
    rows = read_rows(tmp_path, "image_sector_quartic_pi.csv")
    assert rows[0] == ["theta_or_index", "f", "g"]
    assert len(rows) == 1 + 512
    assert all(len(r) == 3 for r in rows[1:])

    code = run(tmp_path, "image", str(problems_dir / "sector_quartic_pi.json"),
               "--samples", "512", "--format", "svg")
    assert code == 0
    svg = (tmp_path / "image_sector_quartic_pi.svg").read_text()
    assert svg.startswith("<svg xmlns=") and svg.rstrip().endswith("</svg>")
    assert "<circle" in svg


def test_image_degenerate_pair(tmp_path, problems_dir):
    spec = {
        "version": 1,
        "variables": ["x", "y"],
        "functions": {
            "f": [
                {"coeff": 2.0, "powers": [{"num": 3, "den": 1}, {"num": 1, "den": 1}]},
                {"coeff": 2.0, "powers": [{"num": 1, "den": 1}, {"num": 3, "den": 1}]},
            ],
            "g": [
                {"coeff": -1.0, "powers": [{"num": 3, "den": 1}, {"num": 1, "den": 1}]},
                {"coeff": -1.0, "powers": [{"num": 1, "den": 1}, {"num": 3, "den": 1}]},
            ],
        },
    }
    path = tmp_path / "axes_only.json"
    path.write_text(json.dumps(spec))
    code = run(tmp_path, "image", str(path), "--samples", "4")
    assert code == 1
    payload = read_payload(tmp_path, "image_axes_only.json")
    assert "degenerate" in payload["result"]


def test_curve_csv_row_count(tmp_path, problems_dir):
    code = run(tmp_path, "curve", str(problems_dir / "switch_sextic.json"),
               "--steps", "64", "--z1", "1,0", "--z2", "0,1", "--format", "csv")
    assert code == 0
    rows = read_rows(tmp_path, "curve_switch_sextic.csv")
    assert rows[0] == ["theta", "f", "g"]
    assert len(rows) == 1 + 65  # closed curve repeats the start point
    payload = read_payload(tmp_path, "curve_switch_sextic.json")
    assert payload["result"]["start"] == pytest.approx(payload["result"]["end"])


def test_copositive_strict_suffix(tmp_path, problems_dir):
    prob = str(problems_dir / "cubic_shared_zero.json")
    assert run(tmp_path, "copositive", prob) == 0
    assert run(tmp_path, "copositive", prob, "--strict") == 1
    assert (tmp_path / "copositive_cubic_shared_zero.json").exists()
    assert (tmp_path / "copositive_cubic_shared_zero_strict.json").exists()
    plain = read_payload(tmp_path, "copositive_cubic_shared_zero.json")
    strict = read_payload(tmp_path, "copositive_cubic_shared_zero_strict.json")
    assert plain["result"]["holds"] is True
    assert strict["result"]["holds"] is False


def test_shs_check_exit_codes(tmp_path, problems_dir):
    assert run(tmp_path, "shs-check", str(problems_dir / "switch_sextic.json")) == 0
    assert run(tmp_path, "shs-check", str(problems_dir / "sector_quartic_pi.json")) == 1


def test_hs_xi_succeeds_on_the_sextic_pair(tmp_path, problems_dir):
    code = run(tmp_path, "hs-xi", str(problems_dir / "switch_sextic.json"))
    assert code == 0
    payload = read_payload(tmp_path, "hs-xi_switch_sextic.json")
    assert payload["result"]["ok"] is True
    assert payload["result"]["xi"] >= 0.0


def test_hs_xi_failure_exit(tmp_path, problems_dir):
    code = run(tmp_path, "hs-xi", str(problems_dir / "cubic_shared_zero.json"))
    assert code == 1
    payload = read_payload(tmp_path, "hs-xi_cubic_shared_zero.json")
    assert payload["result"]["ok"] is False
    assert payload["result"]["reason"] == "COMMON_ZERO"


def test_nhs_xi_on_the_shifted_pair(tmp_path, problems_dir):
    code = run(tmp_path, "nhs-xi", str(problems_dir / "affine_sextic_shift.json"))
    assert code == 0
    payload = read_payload(tmp_path, "nhs-xi_affine_sextic_shift.json")
    assert payload["result"]["ok"] is True
    assert payload["result"]["xi"] > 0
    assert payload["result"]["details"]["t1_margin"] > 0


def test_nhs_xi_needs_integer_powers(tmp_path, problems_dir):
    code = run(tmp_path, "nhs-xi", str(problems_dir / "switch_fractional.json"))
    assert code == 2


def test_lfhd_artifacts(tmp_path, problems_dir):
    prob = str(problems_dir / "switch_sextic.json")
    code = run(tmp_path, "lfhd", prob, "--samples", "256", "--format", "csv")
    assert code == 0
    payload = read_payload(tmp_path, "lfhd_switch_sextic.json")
    assert payload["result"]["status"] == "covered"
    assert payload["result"]["system"] == "S"
    assert payload["result"]["lyapunov"] == "V"
    assert payload["result"]["common_degree"] == pytest.approx(6.0)
    rows = read_rows(tmp_path, "lfhd_switch_sextic_regions.csv")
    assert rows[0] == ["theta_or_index", "argmin_subsystem", "min_derivative"]
    assert len(rows) == 1 + 256
    assert {r[1] for r in rows[1:]} <= {"1", "2"}

    code = run(tmp_path, "lfhd", prob, "--samples", "256", "--format", "svg")
    assert code == 0
    assert (tmp_path / "lfhd_switch_sextic_regions.svg").exists()


def test_combo_scan_feasible_and_empty(tmp_path, problems_dir):
    code = run(tmp_path, "combo-scan", str(problems_dir / "switch_sextic.json"),
               "--grid-step", "0.01")
    assert code == 0
    payload = read_payload(tmp_path, "combo-scan_switch_sextic.json")
    lo, hi = payload["result"]["interval"]
    assert lo <= 0.21 and hi >= 0.39
    assert payload["result"]["feasible_count"] >= len(payload["result"]["feasible"])

    code = run(tmp_path, "combo-scan", str(problems_dir / "switch_three_linear.json"),
               "--grid-step", "0.05")
    assert code == 1
    payload = read_payload(tmp_path, "combo-scan_switch_three_linear.json")
    assert payload["result"]["interval"] is None
    assert payload["result"]["feasible_count"] == 0
    assert payload["result"]["best_value"] > 0


def test_combo_synth_weights(tmp_path, problems_dir):
    code = run(tmp_path, "combo-synth", str(problems_dir / "switch_sextic.json"))
    assert code == 0
    payload = read_payload(tmp_path, "combo-synth_switch_sextic.json")
    lam = payload["result"]["lambdas"]
    assert sum(lam) == pytest.approx(1.0)
    assert payload["result"]["max_derivative"] < 0
    assert payload["result"]["certificate"]["ok"] is True


def test_simulate_with_trajectory_csv(tmp_path, problems_dir):
    code = run(tmp_path, "simulate", str(problems_dir / "switch_sextic.json"),
               "--x0", "1,-0.7", "--t-end", "0.2", "--format", "csv")
    assert code == 0
    payload = read_payload(tmp_path, "simulate_switch_sextic.json")
    assert payload["result"]["v_final"] < payload["result"]["v_initial"]
    assert payload["result"]["x0"] == [1.0, -0.7]
    rows = read_rows(tmp_path, "simulate_switch_sextic_trajectory.csv")
    assert rows[0] == ["t", "x_1", "x_2", "sigma", "V"]
    assert len(rows) == 1 + 201  # 200 steps plus the initial sample


def test_eigencheck_exit_codes(tmp_path, problems_dir):
    prob = str(problems_dir / "switch_three_linear.json")
    r3 = 3.0 ** 0.5
    s = 2 * r3 + 2.0
    lam = f"{2 * r3 / s},{1 / s},{1 / s}"
    assert run(tmp_path, "eigencheck", prob, "--lambdas", lam) == 1
    payload = read_payload(tmp_path, "eigencheck_switch_three_linear.json")
    assert abs(payload["result"]["max_eigenvalue"]) < 1e-9

    assert run(tmp_path, "eigencheck", prob, "--lambdas", "1,0,0") == 1
    assert run(tmp_path, "eigencheck", prob) == 2  # weights are required
    assert run(tmp_path, "eigencheck", prob, "--lambdas", "0.5,0.5") == 2
    assert run(tmp_path, "eigencheck",
               str(problems_dir / "switch_sextic.json"),
               "--lambdas", "0.5,0.5") == 2  # nonlinear subsystems


# -------------------------------------------------------------- error paths


def test_missing_problem_file(tmp_path):
    assert run(tmp_path, "zeros", str(tmp_path / "absent.json")) == 2


def test_csv_not_available_everywhere(tmp_path, problems_dir):
    code = run(tmp_path, "zeros", str(problems_dir / "switch_sextic.json"),
               "--format", "csv")
    assert code == 2
    assert not (tmp_path / "zeros_switch_sextic.json").exists()


def test_bad_anchor_vector(tmp_path, problems_dir):
    prob = str(problems_dir / "switch_sextic.json")
    assert run(tmp_path, "curve", prob, "--z1", "a,b") == 2
    assert run(tmp_path, "curve", prob, "--z1", "1,2,3") == 2


def test_lfhd_needs_a_system(tmp_path, problems_dir):
    assert run(tmp_path, "lfhd", str(problems_dir / "cubic_shared_zero.json")) == 2


def test_unknown_subcommand_is_a_usage_error(tmp_path, problems_dir):
    with pytest.raises(SystemExit) as exc:
        main(["not-a-command", str(problems_dir / "switch_sextic.json")])
    assert exc.value.code == 2


def test_no_arguments_is_a_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_verification_failures_map_to_exit_3():
    from slemma.cli import _multiplier_exit
    from slemma.s_lemma import MultiplierFailure, ReasonCode

    bad = MultiplierFailure(reason=ReasonCode.VERIFICATION_FAILED, message="x")
    assert _multiplier_exit(bad) == 3
    neg = MultiplierFailure(reason=ReasonCode.NOT_COPOSITIVE, message="x")
    assert _multiplier_exit(neg) == 1


# ------------------------------------------------------------- determinism


def test_artifacts_are_byte_identical_across_runs(tmp_path, problems_dir):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert main(["shs-xi", str(problems_dir / "switch_sextic.json"),
                     "--out-dir", str(out)]) == 0
        assert main(["image", str(problems_dir / "sector_sextic_wide.json"),
                     "--samples", "512", "--format", "csv",
                     "--out-dir", str(out)]) == 0
    for name in ["shs-xi_switch_sextic.json",
                 "image_sector_sextic_wide.json",
                 "image_sector_sextic_wide.csv"]:
        assert (a / name).read_bytes() == (b / name).read_bytes()
