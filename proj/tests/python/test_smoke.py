from fractions import Fraction

import pytest

import tiltlab


def test_schema():
    assert tiltlab.schema == 1


def test_pure_axioms():
    rep = tiltlab.axioms(tiltlab.pure(), samples=200, seed=7)
    assert rep["schema"] == 1
    assert rep["passed"]
    verdicts = {v["axiom"]: v["verdict"] for v in rep["verdicts"]}
    assert verdicts["e"] == "SAMPLED_PASS"
    assert all(v == "PASS" for k, v in verdicts.items() if k != "e")


def test_sharp_of_p_flat():
    rep = tiltlab.sharp(tiltlab.pure(depth=4), layer=0, depth=4)
    assert rep["value"] == "5"
    assert rep["effective_precision"] == "6"


def test_tilt_presentation():
    rep = tiltlab.tilt(tiltlab.pure(), layer=0, depth=3)
    assert rep["presentation"] == "F_5[T]/(T^{125})"
    assert rep["p_flat"] == "T"


def test_conductor_matches_closed_form():
    for a, b in [(2, 5), (3, 2), (4, 7), (5, 9)]:
        assert tiltlab.semigroup_conductor(a, b) == (a - 1) * (b - 1)


def test_delta_table():
    t = tiltlab.delta_table(5, 2, 5)
    deltas = [Fraction(r["delta"]) for r in t["rows"]]
    assert deltas == [Fraction(2, 5 ** (n + 1)) for n in range(5)]
    assert all(Fraction(r["scaled"]) == Fraction(2, 5) for r in t["rows"])


def test_ramify_epsilon():
    rep = tiltlab.ramify(5, 2, levels=5, normality_samples=200)
    assert rep["epsilon"]["epsilon"] == "3/25"
    assert rep["epsilon"]["N"] == 2
    assert rep["assembly"]["N_prime"] == 3
    assert rep["passed"]


def test_forced_epsilon_fails():
    rep = tiltlab.ramify(5, 2, levels=5, normality_samples=100, force_eps="1/2")
    assert not rep["passed"]


def test_errors_raise():
    with pytest.raises(tiltlab.TiltlabError):
        tiltlab.axioms(tiltlab.pure(p=4))
    with pytest.raises(ValueError):
        tiltlab.ramify(5, 5)
    with pytest.raises(tiltlab.TiltlabError):
        tiltlab.axioms("{not json")


def test_closure_exact_small():
    rep = tiltlab.closure(tiltlab.pure(p=2, n_digits=2, depth=2), layer=1, exact=True)
    assert rep["result"]["verdict"] == "PASS_EXACT"


def test_deterministic():
    a = tiltlab.criterion(2)
    b = tiltlab.criterion(2)
    assert a == b and a["passed"]
