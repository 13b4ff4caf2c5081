import io
import json
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from hookamp.amplitude import interp_coeffs, min_separation
from hookamp.conjectures import (
    SelfConjugateGrid,
    SingularDenominatorError,
    append_counterexamples,
    error_derivative,
    error_derivative_grid,
    is_self_conjugate,
    kallioniemi_estimate,
    q_eval,
    q_eval_batch,
    sample_self_conjugate,
    sample_self_conjugate_batch,
    scan_pointwise,
    scan_special_case_np1,
    scan_uniform,
    special_case_np1,
)
from hookamp.symfunc import Hook, build_sym_table, elementary_batch, schur_hook


def residual_coefficient(t, n, k, z, nodes):
    """k-th Taylor coefficient at z of x^t - psi_t(x), via explicit polynomials."""
    psi = interp_coeffs(nodes, t, "vandermonde").psi
    res = np.zeros(t + 1, dtype=complex)
    res[t] = 1.0
    res[:n] -= psi
    der = np.polynomial.polynomial.polyder(res, k) / math.factorial(k)
    return np.polynomial.polynomial.polyval(z, der)


def hook_sum_q(t, n, k, zeta):
    """Q by its defining alternating hook sum (double precision, small t only)."""
    table = build_sym_table(zeta, t)
    num = sum((-1) ** d * math.comb(t, n + d) * schur_hook(Hook(d, n - k - 1), table) for d in range(t - n + 1))
    return num / (math.comb(t, n) * table.elem(n - k))


# grids


def test_self_conjugate_predicate():
    assert is_self_conjugate([0.5j, -0.5j])
    assert is_self_conjugate([0.3, 0.3, 1 + 1j, 1 - 1j])
    assert not is_self_conjugate([0.3, -0.3])
    assert not is_self_conjugate([0.5j, 0.5j])
    with pytest.raises(ValueError):
        SelfConjugateGrid((0.2, 0.4))


def test_sampling():
    rng = np.random.default_rng(0)
    grid = sample_self_conjugate(2, "unit_disc", rng)
    assert grid.n == 2 and is_self_conjugate(grid.nodes)
    batch = sample_self_conjugate_batch(6, "right_half_disc", rng, 500)
    assert np.all(batch.real >= 0) and np.all(np.abs(batch) <= 1)
    assert all(is_self_conjugate(row) for row in batch[:50])
    real = sample_self_conjugate_batch(2, "unit_disc", rng, 20, p_real=1.0)
    assert np.all(real[:, 0] == real[:, 1]) and np.all(real.imag == 0)
    circle = sample_self_conjugate_batch(4, "unit_circle", rng, 20, p_real=0.0)
    np.testing.assert_allclose(np.abs(circle), 1)
    with pytest.raises(ValueError):
        sample_self_conjugate_batch(3, "unit_disc", rng, 1)
    with pytest.raises(ValueError):
        sample_self_conjugate_batch(2, "annulus", rng, 1)


# Q ratio and residual derivatives


def test_q_examples():
    assert abs(q_eval(3, 2, 0, [1, 1]) - 1 / 3) < 1e-14
    assert abs(abs(q_eval(3, 2, 0, [2, 2])) - 1 / 3) < 1e-14
    with pytest.raises(SingularDenominatorError):
        q_eval(3, 2, 1, [1, -1])
    with pytest.raises(ValueError):
        q_eval(3, 2, 2, [1, 1])


def test_q_equals_one_at_t_equals_n():
    rng = np.random.default_rng(1)
    for n in range(1, 9):
        zeta = rng.normal(size=(200, n)) + 1j * rng.normal(size=(200, n))
        for k in range(n):
            q, singular = q_eval_batch(n, n, k, zeta)
            assert np.all(np.abs(q[~singular] - 1) <= 1e-12)


def test_q_matches_hook_sum():
    rng = np.random.default_rng(2)
    for _ in range(200):
        n = 2 * int(rng.integers(1, 4))
        t = n + int(rng.integers(0, 7))
        k = int(rng.integers(0, n))
        zeta = sample_self_conjugate_batch(n, "unit_disc", rng, 1)[0] + 1
        a, b = q_eval(t, n, k, zeta), hook_sum_q(t, n, k, zeta)
        assert abs(a - b) <= 1e-9 * max(1.0, abs(b))


def test_error_derivative_examples():
    # residual is f itself at t = n
    nodes = np.array([0.2 + 0.3j, 0.2 - 0.3j, -0.5])
    z = 0.7
    f = np.poly(nodes)[::-1]
    for k in range(3):
        der = np.polynomial.polynomial.polyder(f, k) / math.factorial(k)
        np.testing.assert_allclose(error_derivative(3, 3, k, z, nodes), np.polynomial.polynomial.polyval(z, der))
    # n = 1, t = 2: (z - a)(z + a)
    for a, z in [(0.2, 0.7), (-0.4 + 0.1j, 0.3 - 0.5j)]:
        assert abs(error_derivative(2, 1, 0, z, [a]) - (z - a) * (z + a)) < 1e-15
    # vanishes at the nodes
    for x in nodes:
        assert abs(error_derivative(9, 3, 0, x, nodes)) < 1e-12


def test_error_derivative_route_check():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(150):
        n = 2 * int(rng.integers(1, 5))
        t = int(rng.integers(n, 31))
        nodes = sample_self_conjugate_batch(n, "unit_disc", rng, 1, p_real=0.0)[0]
        if min_separation(nodes) < 1e-6:
            continue
        z = rng.uniform(-1, 1)
        for k in range(n):
            a = error_derivative(t, n, k, z, nodes)
            b = residual_coefficient(t, n, k, z, nodes)
            worst = max(worst, abs(a - b) / abs(b))
    assert worst <= 1e-7


def test_grid_matches_scalar():
    rng = np.random.default_rng(4)
    nodes = sample_self_conjugate_batch(6, "unit_disc", rng, 1)[0]
    zs = np.linspace(-1, 1, 9)
    for t in (6, 11, 25):
        for k in range(6):
            got = error_derivative_grid(t, 6, k, zs, nodes)
            ref = np.array([error_derivative(t, 6, k, z, nodes) for z in zs])
            assert np.all(np.abs(got - ref) <= 1e-9 * np.maximum(1.0, np.abs(ref)))


def test_realness():
    rng = np.random.default_rng(5)
    for _ in range(100):
        n = 2 * int(rng.integers(1, 5))
        t = n + int(rng.integers(0, 20))
        k = int(rng.integers(0, n))
        nodes = sample_self_conjugate_batch(n, "unit_disc", rng, 1)[0]
        z = rng.uniform(-1, 1)
        assert abs(error_derivative(t, n, k, z, nodes).imag) <= 1e-10
        q, singular = q_eval_batch(t, n, k, nodes[None, :] + 1)
        if not singular[0]:
            assert abs(q[0].imag) <= 1e-10


# the proved special case t = n + 1


def test_special_case_examples():
    assert special_case_np1(2, 0, [2, 2]) == (True, True)
    assert special_case_np1(2, 0, [1, 1]) == (True, True)
    with pytest.raises(ValueError):
        special_case_np1(2, 1, [1, 1])


@pytest.mark.parametrize("n, k", [(2, 0), (4, 0), (4, 2), (6, 0), (6, 2), (6, 4)])
def test_special_case_holds(n, k):
    rep = scan_special_case_np1(n, k, trials=10_000, seed=n + k)
    assert rep.all_ok, rep


def test_special_case_is_the_t_equals_n_plus_1_ratio():
    # |Q_{n+1,n,k}| <= 1 is the same statement
    rng = np.random.default_rng(6)
    for n, k in [(2, 0), (4, 0), (4, 2)]:
        zeta = sample_self_conjugate_batch(n, "unit_disc", rng, 2000) + 1
        q, singular = q_eval_batch(n + 1, n, k, zeta)
        assert np.all(np.abs(q[~singular]) <= 1 + 1e-9)


# pointwise scans


def test_scan_t_equals_n():
    reports = scan_pointwise([4], 4, trials=2000, seed=1)
    for rep in reports.values():
        assert abs(rep.max_abs_q - 1) < 1e-12
        assert not rep.counterexamples


def test_scan_example_k0():
    rep = scan_pointwise([3], 2, [0], trials=1000, seed=7)[(3, 0)]
    assert rep.max_abs_q <= 1
    assert rep.samples + rep.singular_skipped == 1000


def test_scan_z0_real_nodes():
    # doubled real nodes in [0, 1]: ratio <= (n-k)/(t-k)
    for n in (2, 4):
        reports = scan_pointwise(range(n, n + 5), n, trials=2000, seed=2, branch="z0", p_real=1.0)
        for (t, k), rep in reports.items():
            assert rep.region == "right_half_disc"
            assert rep.max_abs_q <= (n - k) / (t - k) + 1e-12


def test_scan_is_deterministic_under_threads():
    plain = scan_pointwise(range(4, 8), 4, trials=500, seed=3)
    with ThreadPoolExecutor(4) as pool:
        threaded = scan_pointwise(range(4, 8), 4, trials=500, seed=3, mapper=pool.map)
    for key in plain:
        assert json.dumps(plain[key].to_json()) == json.dumps(threaded[key].to_json())


def test_k_equals_n_minus_1_counterexample():
    # nodes 0.9 +- 0.4i, z = 1: the derivative error of z^3/6 is 0.73/6 while
    # |f'(1)|/2 = 0.1, so |Q| = 0.73/0.6 > 1.
    nodes = np.array([0.9 + 0.4j, 0.9 - 0.4j])
    q = q_eval(3, 2, 1, 1 - nodes)
    assert abs(abs(q) - 0.73 / 0.6) < 1e-12
    err = residual_coefficient(3, 2, 1, 1.0, nodes) / 6
    assert abs(abs(err) - 0.73 / 6) < 1e-12


def test_counterexample_records_are_reproducible(tmp_path):
    log = tmp_path / "ce.ndjson"
    reports = scan_pointwise([3, 5], 2, [1], trials=2000, seed=9, log_path=log)
    records = [json.loads(line) for line in log.read_text().splitlines()]
    assert records and len(records) == sum(len(r.counterexamples) for r in reports.values())
    rng = np.random.default_rng(9)
    grids = sample_self_conjugate_batch(2, "unit_disc", rng, 2000)
    for rec in records[:50]:
        nodes = np.array([complex(*p) for p in rec["nodes"]])
        np.testing.assert_array_equal(nodes, grids[rec["sample_index"]])
        # independent route: explicit residual polynomial at z = -1 for grid nodes,
        # since Q(nodes + 1) is the normalized residual of -nodes at z = 1
        t, n, k = rec["t"], rec["n"], rec["k"]
        ref = residual_coefficient(t, n, k, 1.0, -nodes)
        ref /= math.comb(t, n) * elementary_batch(nodes + 1)[0, n - k]
        assert abs(abs(ref) - rec["abs_value"]) <= 1e-9 * rec["abs_value"]
        assert abs(ref) > 1 + 1e-7


def test_append_counterexamples(tmp_path):
    log = tmp_path / "x.ndjson"
    append_counterexamples(log, [{"a": 1}])
    append_counterexamples(log, [{"b": 2}, {"c": 3}])
    assert [json.loads(x) for x in log.read_text().splitlines()] == [{"a": 1}, {"b": 2}, {"c": 3}]


# Kallioniemi estimator and the uniform scan


def test_kallioniemi_k0_full_membership():
    rng = np.random.default_rng(10)
    for _ in range(20):
        n = 2 * int(rng.integers(1, 4))
        nodes = sample_self_conjugate_batch(n, "unit_disc", rng, 1)[0]
        est = kallioniemi_estimate(nodes, 0, resolution=201)
        assert est.membership.all()


def test_kallioniemi_real_node_zero():
    est = kallioniemi_estimate([0.5, 0.5], 0, resolution=5)  # z = 0.5 is on the grid
    i = int(np.argmin(np.abs(est.z_samples - 0.5)))
    assert est.base_values[i] < 1e-15 and est.membership[i]
    assert est.perturbed


def test_kallioniemi_alternating_pattern():
    nodes = [0.2, 0.2, -0.7, -0.7, 0.8, 0.8]
    est = kallioniemi_estimate(nodes, 3, resolution=401)
    m = est.membership.astype(int)
    assert m[0] == 1 and m[-1] == 1
    assert 0 < est.membership_fraction < 1
    switches = np.count_nonzero(np.diff(m))
    assert switches % 2 == 0 and 2 <= switches <= 2 * (6 - 3)


def test_kallioniemi_serialization():
    est = kallioniemi_estimate([0.5j, -0.5j], 1, resolution=11)
    d = est.to_json()
    assert d["k"] == 1 and len(d["membership"]) == 11
    buf = io.StringIO()
    est.write_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "z,member,sup,base,argmax_m" and len(lines) == 12
    assert lines[1].split(",")[0] == "-1.0"


def test_uniform_examples():
    res = scan_uniform([0.5j, -0.5j], 1, 40)
    assert res.rhs == 2.0
    assert res.sup_over_t <= 2 + 1e-6
    assert res.per_t[0] == res.rhs
    zero = scan_uniform([0.0, 0.0], 1, 20)
    assert zero.sup_over_t == zero.rhs and zero.attained_at_t == 2


def test_uniform_realness():
    rng = np.random.default_rng(11)
    for _ in range(10):
        nodes = sample_self_conjugate_batch(4, "unit_disc", rng, 1)[0]
        assert scan_uniform(nodes, 2, 30, resolution=201).max_imag <= 1e-10
