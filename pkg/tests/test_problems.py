"""Problem-file loading: the shipped fixtures and the validation errors."""

import json

import pytest

from slemma import (
    CoeffVecPolynomial,
    GeneralizedPolynomial,
    Problem,
    ProblemError,
    load_problem,
)

ALL_NAMES = [
    "affine_sextic_shift",
    "cubic_shared_zero",
    "sector_quartic_pi",
    "sector_quartic_wide",
    "sector_sextic_full",
    "sector_sextic_wide",
    "switch_fractional",
    "switch_sextic",
    "switch_three_linear",
]


@pytest.mark.parametrize("name", ALL_NAMES)
def test_all_fixtures_load(problems_dir, name):
    prob = load_problem(problems_dir / f"{name}.json")
    assert isinstance(prob, Problem)
    assert prob.version == 1
    assert prob.n == 2
    assert prob.functions


def test_switch_sextic_contents(problems_dir, sextic_pair):
    prob = load_problem(problems_dir / "switch_sextic.json")
    f, g = prob.pair()
    ef, eg = sextic_pair
    assert (f - ef).is_zero
    assert (g - eg).is_zero
    name, sys = prob.single_system()
    assert name == "S" and sys.count == 2
    vname, V = prob.first_lyapunov()
    assert vname == "V"
    assert V([1.0, 1.0]) == pytest.approx(0.5)
    assert prob.dilation.weights == (1.0, 1.0)


def test_switch_fractional_contents(problems_dir):
    prob = load_problem(problems_dir / "switch_fractional.json")
    assert prob.dilation.weights == (3.0, 1.0)
    f, g = prob.pair()
    assert f([1.0, 1.0]) == pytest.approx(0.0)
    assert g([1.0, 0.0]) == pytest.approx(8.0)
    _, sys = prob.single_system()
    assert sys.count == 2
    # fractional exponents have no coefficient-vector form
    with pytest.raises(ProblemError):
        prob.pair_coeff_vec()


def test_affine_shift_uses_coeff_vectors(problems_dir):
    prob = load_problem(problems_dir / "affine_sextic_shift.json")
    assert isinstance(prob.function("f"), CoeffVecPolynomial)
    f, g = prob.pair()
    assert isinstance(f, GeneralizedPolynomial)
    assert f([1.0, 1.0]) == pytest.approx(-8.0)
    assert g([1.0, 1.0]) == pytest.approx(-7.0)
    cf, cg = prob.pair_coeff_vec()
    assert cf.evaluate([1.0, 1.0]) == pytest.approx(-8.0)
    assert cg.evaluate([1.0, 1.0]) == pytest.approx(-7.0)


def test_cubic_pair_has_the_shared_zero(problems_dir):
    prob = load_problem(problems_dir / "cubic_shared_zero.json")
    f, g = prob.pair()
    assert f([1.0, 1.0]) == pytest.approx(0.0, abs=1e-12)
    assert g([1.0, 1.0]) == pytest.approx(0.0, abs=1e-12)


def test_three_linear_has_no_canonical_pair(problems_dir):
    prob = load_problem(problems_dir / "switch_three_linear.json")
    _, sys = prob.single_system()
    assert sys.count == 3
    with pytest.raises(ProblemError):
        prob.pair()
    with pytest.raises(ProblemError):
        prob.function("nope")


def test_sector_fixtures_are_even(problems_dir):
    from slemma import Parity

    for name in ["sector_quartic_pi", "sector_quartic_wide",
                 "sector_sextic_full", "sector_sextic_wide"]:
        f, g = load_problem(problems_dir / f"{name}.json").pair()
        assert f.parity() is Parity.EVEN
        assert g.parity() is Parity.EVEN


def test_no_system_and_no_lyapunov_accessors(problems_dir):
    prob = load_problem(problems_dir / "cubic_shared_zero.json")
    with pytest.raises(ProblemError):
        prob.single_system()
    with pytest.raises(ProblemError):
        prob.first_lyapunov()


# --------------------------------------------------------------- bad files


def write_problem(tmp_path, payload, name="case.json"):
    p = tmp_path / name
    p.write_text(json.dumps(payload))
    return p


BASE = {
    "version": 1,
    "variables": ["x", "y"],
    "functions": {
        "f": [{"coeff": 1.0, "powers": [{"num": 2, "den": 1}, {"num": 0, "den": 1}]}],
    },
}


def test_missing_file_raises(tmp_path):
    with pytest.raises(ProblemError, match="not found"):
        load_problem(tmp_path / "absent.json")


def test_invalid_json_raises(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    with pytest.raises(ProblemError, match="valid JSON"):
        load_problem(p)


def test_non_object_payload_raises(tmp_path):
    p = tmp_path / "arr.json"
    p.write_text("[1, 2, 3]")
    with pytest.raises(ProblemError, match="JSON object"):
        load_problem(p)


def test_wrong_version_raises(tmp_path):
    bad = dict(BASE, version=2)
    with pytest.raises(ProblemError, match="version"):
        load_problem(write_problem(tmp_path, bad))


def test_missing_variables_raises(tmp_path):
    bad = {k: v for k, v in BASE.items() if k != "variables"}
    with pytest.raises(ProblemError, match="variables"):
        load_problem(write_problem(tmp_path, bad))


def test_dilation_weight_count_mismatch(tmp_path):
    bad = dict(BASE, dilation={"weights": [1.0], "l": 2.0})
    with pytest.raises(ProblemError, match="weights"):
        load_problem(write_problem(tmp_path, bad))


def test_subunit_dilation_weight_rejected(tmp_path):
    bad = dict(BASE, dilation={"weights": [0.5, 1.0], "l": 2.0})
    with pytest.raises(ProblemError, match="bad dilation"):
        load_problem(write_problem(tmp_path, bad))


def test_function_literal_must_be_terms_or_coeffs(tmp_path):
    bad = dict(BASE, functions={"f": "x^2"})
    with pytest.raises(ProblemError, match="bad function 'f'"):
        load_problem(write_problem(tmp_path, bad))


def test_malformed_coeff_key_rejected(tmp_path):
    bad = dict(BASE, functions={"f": {"coeffs": {"nokey": 1.0}}})
    with pytest.raises(ProblemError, match="bad function 'f'"):
        load_problem(write_problem(tmp_path, bad))


def test_system_unknown_reference(tmp_path):
    bad = dict(BASE, systems={"S": {"fields": [["f", "missing"], ["f", "f"]]}})
    with pytest.raises(ProblemError, match="unknown function 'missing'"):
        load_problem(write_problem(tmp_path, bad))


def test_system_component_count(tmp_path):
    bad = dict(BASE, systems={"S": {"fields": [["f"], ["f", "f"]]}})
    with pytest.raises(ProblemError, match="2 components"):
        load_problem(write_problem(tmp_path, bad))


def test_system_needs_fields_list(tmp_path):
    bad = dict(BASE, systems={"S": {}})
    with pytest.raises(ProblemError, match="'fields'"):
        load_problem(write_problem(tmp_path, bad))


def test_single_subsystem_rejected(tmp_path):
    bad = dict(BASE, systems={"S": {"fields": [["f", "f"]]}})
    with pytest.raises(ProblemError, match="bad system 'S'"):
        load_problem(write_problem(tmp_path, bad))


def test_lyapunov_unknown_reference(tmp_path):
    bad = dict(BASE, lyapunov={"V": "missing"})
    with pytest.raises(ProblemError, match="Lyapunov"):
        load_problem(write_problem(tmp_path, bad))


def test_problem_error_is_a_value_error():
    assert issubclass(ProblemError, ValueError)
