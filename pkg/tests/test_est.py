import math

import numpy as np
import pytest

from transop import fixtures
from transop.core import FiniteSystem
from transop.errors import ArgumentError, DomainError
from transop.est import (
    EstReport,
    build_neighborhood,
    est_rate_table,
    indicator_set,
    make_config,
    unfiltered_rates,
)
from transop.spectral import NEG_INF, lam
from transop.transfer import power_norm, twist


def test_sys2_neighbourhood():
    A = fixtures.sys2(1, 1)
    cfg = build_neighborhood(A, [0.5, 0.5], 0.1)
    np.testing.assert_allclose(cfg.phi_star, 0.0, atol=1e-12)
    assert cfg.threshold == pytest.approx(-0.1 / 3, abs=1e-12)
    assert cfg.tau == pytest.approx(0.0, abs=1e-9)


def test_sysi3_delta2_neighbourhood():
    A = fixtures.sysi3()
    cfg = build_neighborhood(A, [0, 0, 1], 0.1)
    assert cfg.tau == pytest.approx(np.log(3), abs=1e-8)
    assert lam(A, cfg.phi_star) - cfg.phi_star[2] == pytest.approx(np.log(3), abs=1e-8)


def test_build_neighbourhood_needs_invariance():
    with pytest.raises(DomainError):
        build_neighborhood(fixtures.sys2(), [1.0, 0.0], 0.1)


def test_indicator_set():
    np.testing.assert_array_equal(indicator_set(FiniteSystem([1, 0]), [0, 0], -0.1 / 3, 5), [1, 1])
    np.testing.assert_array_equal(indicator_set(FiniteSystem([0, 1, 2]), [0, -2, -2], -0.1 / 3, 7), [1, 0, 0])
    with pytest.raises(ArgumentError):
        indicator_set(FiniteSystem([0]), [0], 0.0, 0)


def test_make_config_validation():
    with pytest.raises(ArgumentError):
        make_config(fixtures.sys2(), [0.5, 0.5], 0.0, [0, 0], 0.0)
    with pytest.raises(ArgumentError):
        make_config(fixtures.sys2(), [0.5, 0.5], 0.1, [0, 0], 0.0, n_range=[0, 1])


def test_sys2_rows():
    A = fixtures.sys2(1, 1)
    rep = est_rate_table(A, build_neighborhood(A, [0.5, 0.5], 0.1))
    assert rep.passed
    for r in rep.rows:
        assert r.set_size == 2
        assert r.log_norm == pytest.approx(0.0, abs=1e-14)


def test_sysi3_delta2_rows():
    A = fixtures.sysi3()
    rep = est_rate_table(A, build_neighborhood(A, [0, 0, 1], 0.1))
    assert rep.passed
    for r in rep.rows:
        assert r.rate == pytest.approx(np.log(3), abs=1e-12)


def test_sysi3_delta0_filters():
    A = fixtures.sysi3()
    cfg = make_config(A, [1, 0, 0], 0.1, [0.0, -2.0, -2.0], 0.0)
    rep = est_rate_table(A, cfg)
    assert rep.passed
    for r in rep.rows:
        assert r.set_size == 1
        assert r.rate == pytest.approx(0.0, abs=1e-14)
    assert unfiltered_rates(A, [1, 10, 40]) == pytest.approx([np.log(3)] * 3, abs=1e-12)


def test_sysi3_delta0_from_legendre_witness():
    A = fixtures.sysi3()
    cfg = build_neighborhood(A, [1, 0, 0], 0.1)
    assert cfg.tau == pytest.approx(0.0, abs=1e-8)
    assert est_rate_table(A, cfg).passed


def test_c_estimate_definition():
    A = fixtures.random_operator(4, 5, irreducible=True)
    mu = fixtures.random_invariant_measure(A.sys, 5)
    cfg = build_neighborhood(A, mu, 0.2, n_range=range(1, 16))
    rep = est_rate_table(A, cfg)
    T = twist(A, cfg.phi_star)
    direct = max(power_norm(T, n) * math.exp(-n * (cfg.lam_star + 0.1)) for n in cfg.n_range)
    assert rep.c_estimate == pytest.approx(direct, rel=1e-10)


@pytest.mark.parametrize("seed", range(8))
def test_majorant_bound(seed):
    # the inequality used on the way: chi_n <= exp(S_n phi* - n threshold),
    # so ||A^n chi_n|| <= exp(-n threshold) ||A_{phi*}^n||
    rng = np.random.default_rng(seed)
    A = fixtures.random_operator(int(rng.integers(2, 6)), seed, irreducible=True)
    mu = fixtures.random_invariant_measure(A.sys, seed)
    cfg = build_neighborhood(A, mu, 0.1, n_range=range(1, 21))
    rep = est_rate_table(A, cfg)
    T = twist(A, cfg.phi_star)
    for r in rep.rows:
        if r.log_norm == NEG_INF:
            continue
        assert r.log_norm <= -r.n * cfg.threshold + math.log(power_norm(T, r.n)) + 1e-9
    assert rep.passed


def test_nilpotent_target():
    A = fixtures.nilp2()
    cfg = build_neighborhood(A, [1.0, 0.0], 0.1)
    assert cfg.tau == NEG_INF
    assert cfg.target == pytest.approx(-10.0)
    rep = est_rate_table(A, cfg)
    assert all(r.rate == NEG_INF for r in rep.rows[1:])
    assert rep.rows[0].rate == 0.0
    assert "-inf" in rep.to_csv()


def test_csv_format():
    A = fixtures.sys2(1, 1)
    rep = est_rate_table(A, build_neighborhood(A, [0.5, 0.5], 0.1, n_range=range(1, 4)))
    lines = rep.to_csv().splitlines()
    assert lines[0] == "n,set_size,log_norm,rate,bound"
    assert len(lines) == 4
    assert lines[1].split(",")[:2] == ["1", "2"]
    assert isinstance(rep, EstReport)
