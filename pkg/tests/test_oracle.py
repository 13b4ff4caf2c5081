import json

import numpy as np
import pytest

from hookamp.oracle import (
    OracleCapError,
    OracleConfig,
    brute_force_max,
    cophase_distance,
    cross_check_interp,
    verify_cophase,
)


def test_config_validation():
    with pytest.raises(ValueError):
        OracleConfig(phase_grid=0)
    with pytest.raises(ValueError):
        OracleConfig(tolerance=0)
    with pytest.raises(ValueError):
        OracleConfig(random_trials=-1)


def test_caps():
    with pytest.raises(OracleCapError):
        brute_force_max(6, np.ones(5), np.ones(5))
    with pytest.raises(OracleCapError):
        brute_force_max(13, np.ones(2), np.ones(2))
    with pytest.raises(ValueError):
        brute_force_max(1, np.ones(2), np.ones(2))


def test_n1_exact():
    res = brute_force_max(2, [0.5], [1], OracleConfig(random_trials=0))
    assert res.brute_max == 0.25 and res.gap == 0


@pytest.mark.parametrize("t, value", [(2, 3), (3, 5)])
def test_unit_examples(t, value):
    ok, res = verify_cophase(t, [1, 1], [1, 1], OracleConfig(phase_grid=64, random_trials=1000))
    assert ok
    assert res.closed_form == value
    assert abs(res.gap) <= 1e-6
    assert res.cophase_distance <= 1e-12


def test_unequal_radii():
    ok, res = verify_cophase(4, [1, 0.7], [1, 1], OracleConfig(phase_grid=96))
    assert ok


def test_degenerate_weights():
    ok, res = verify_cophase(2, [1, 1], [0, 1], OracleConfig(phase_grid=32, random_trials=500))
    assert ok
    assert res.brute_max <= res.closed_form + 1e-9


def test_upper_bound_on_random_instances():
    rng = np.random.default_rng(0)
    cfg = OracleConfig(phase_grid=16, radial_grid=2, random_trials=2000, seed=3)
    for _ in range(10):
        n = int(rng.integers(1, 4))
        t = int(rng.integers(n, 9))
        r = rng.uniform(0.2, 1.2, n)
        w = rng.uniform(0, 1, n)
        res = brute_force_max(t, r, w, cfg)
        assert res.brute_max <= res.closed_form + 1e-9


def test_phase_refinement_does_not_hurt():
    r, w = [1.0, 0.6, 0.9], [0.3, 1.0, 0.5]
    prev_gap = np.inf
    prev_max = -np.inf
    for m in (4, 8, 16, 32):
        res = brute_force_max(5, r, w, OracleConfig(phase_grid=m, random_trials=0))
        assert res.brute_max >= prev_max - 1e-12
        assert res.gap <= prev_gap + 1e-12
        prev_max, prev_gap = res.brute_max, res.gap


def test_determinism():
    cfg = OracleConfig(phase_grid=16, random_trials=500, seed=11)
    a = brute_force_max(4, [1, 0.5], [1, 1], cfg)
    b = brute_force_max(4, [1, 0.5], [1, 1], cfg)
    assert json.dumps(a.to_json(), sort_keys=True) == json.dumps(b.to_json(), sort_keys=True)


def test_cophase_distance():
    assert cophase_distance([1, 2, 0.5]) == 0
    assert np.isclose(cophase_distance([1, -1]), np.pi)
    assert cophase_distance([1]) == 0


def test_cross_check():
    assert cross_check_interp([0.3, -0.5j], 7) <= 1e-7
    assert cross_check_interp([0.4], 9) <= 1e-15
    # near-coincident grid skips the divided-difference route without failing
    assert cross_check_interp([0.5, 0.5 + 1e-14, -0.2], 8) <= 1e-7
