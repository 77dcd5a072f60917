import math

import pytest

import nnea


def test_version():
    assert nnea.__version__ == "0.1.0"


def test_fitness_hand_values():
    assert nnea.fitness("trapzeros", "1111111111") == 40
    assert nnea.fitness("trapzeros", "0000000000") == 30
    assert nnea.fitness("trapzeros", "1110000000") == 13
    assert nnea.fitness("trapzeros", "1000000000") == 1
    assert nnea.fitness("trapzeros", "0100000000") == 0
    assert nnea.fitness("onemax", "1011") == 3


def test_block_length_and_classify():
    assert nnea.block_length(10) == 7
    assert nnea.block_length(100) == 23
    assert nnea.classify("1110000000") == "s1"
    assert nnea.classify("0011111111") == "s0"
    assert nnea.classify("1111111100") == "sstar"


def test_run_batch_deterministic():
    kwargs = dict(problem="trapzeros", n=8, N=2, trials=24, seed=7)
    a = nnea.run_batch(**kwargs)
    b = nnea.run_batch(**kwargs)
    assert a == b
    assert a["trials"] == 24
    assert a["eval_budget"] == 20 * 8 * 8
    assert 0.0 <= a["wilson_lo"] <= a["p_hat"] <= a["wilson_hi"] <= 1.0
    for rec in a["records"]:
        assert rec["evaluations"] <= a["eval_budget"]
        if rec["hit"]:
            assert rec["evaluations"] == 2 * rec["tau"]


def test_exact_chain_small():
    chain = nnea.ExactChain.build("onemax", 2)
    assert chain.states == 4
    zeros_row = chain.transition_row(0)
    assert zeros_row == pytest.approx([0.25, 0.25, 0.25, 0.25])
    assert chain.expected_from_uniform() == pytest.approx(3.0, abs=1e-12)
    assert chain.expected_from(0) == pytest.approx(4.0, abs=1e-12)
    cdf = chain.hitting_cdf(2)
    assert cdf["cdf"][0] == pytest.approx(0.25)
    assert cdf["cdf"][2] == pytest.approx(0.578125)


def test_bounds_and_wilson():
    check = nnea.check_bound("ChernoffLower", {"m": 100, "p": 0.5, "psi": 0.5})
    assert check["satisfied"]
    assert check["exact"] <= check["bound"] + 1e-12
    assert nnea.upgrade_probability(10, 0, 1) == pytest.approx(0.1)
    lo, hi = nnea.wilson95(0, 100)
    assert lo == 0.0
    assert hi == pytest.approx(0.036994807476001909)


def test_validation_errors():
    with pytest.raises(ValueError):
        nnea.fitness("trapzeros", "10")  # n below the smallest trap size
    with pytest.raises(RuntimeError):
        nnea.ExactChain.build("onemax", 40)
