from twistlab.validate import (
    check_classifier,
    check_family,
    check_flip,
    check_group_algebra,
    check_hilbert,
    check_stable_twists,
    print_summary,
    run_validation,
)


def test_classifier_check():
    summary = check_classifier(max_size=4)
    assert summary["classifier_ok"] == summary["classifier_cases"]


def test_family_check():
    summary = check_family(count=4)
    assert summary["family_curves"] == 4
    assert summary["family_ok"] == 4
    assert summary["family_eta0_ok"]


def test_algebra_and_hilbert_checks(rng):
    algebra = check_group_algebra(rng, 10)
    assert algebra["gmodule_dims_ok"] and algebra["gmodule_additive"] == 10
    hilbert = check_hilbert(rng, 200)
    assert hilbert["hilbert_ok"] == 200


def test_small_run():
    summary = run_validation(size=1, density_x=1000, export=False)
    assert summary["kramer_agree"] == summary["kramer_cases"] == 1
    assert summary["twist_formula_passed"] == summary["twist_formula_cases"] == 1
    assert summary["classifier_ok"] == summary["classifier_cases"]
    assert summary["stable_ok"] == summary["stable_primes"]
    assert summary["flip_ok"] == summary["flip_curves"]


def test_stable_twists_full_range():
    summary = check_stable_twists(10**4)
    assert summary["stable_primes"] > 50
    assert summary["stable_ok"] == summary["stable_primes"]


def test_flip_full_range():
    summary = check_flip(10**4, count=4)
    assert summary["flip_curves"] == 5
    assert summary["flip_ok"] == 5


def test_print_summary(capsys):
    print_summary({"seed": 1, "all_passed": True})
    out = capsys.readouterr().out
    assert "=== TWISTLAB VALIDATION ===" in out
    assert "all_passed" in out and "True" in out
