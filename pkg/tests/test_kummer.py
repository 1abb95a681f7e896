import math

import mpmath
import pytest

from kummersum.errors import IndexBeforeStart, NonPositiveTerm, ZetaOverflow
from kummersum.kummer import (
    TestConfig,
    Verdict,
    run_test,
    seed_zeta,
    zeta_closed_form,
    zeta_step,
)
from kummersum.series import catalog_lookup, from_expression, term
from kummersum.summation import partial_sum, sum_range

LOGA = catalog_lookup("logA")
TELE = catalog_lookup("telescope")
INVSQ = catalog_lookup("invsq")
HALF = catalog_lookup("geom(0.5)")


def tail(name, N):
    """Exact or high-precision R_N = sum of a_k for k > N."""
    if name == "telescope":
        return 1.0 / (N + 1)
    if name == "geom(0.5)":
        return 0.5**N
    if name == "invsq":
        mpmath.mp.dps = 30
        return float(mpmath.psi(1, N + 1))
    raise KeyError(name)


def test_seed_values():
    assert seed_zeta(LOGA, 10_000, 0.1) == pytest.approx(10857.244172, abs=1e-3)
    assert seed_zeta(LOGA, 10_000, 0.15) == pytest.approx(16285.866259, abs=1e-3)
    assert seed_zeta(LOGA, 100_000, 0.011260) == pytest.approx(30928.034437, abs=1e-3)


def test_zeta_step_matches_definition():
    z = seed_zeta(LOGA, 100_000, 0.011260)
    nxt = zeta_step(LOGA, 100_000, z)
    assert nxt == z * (term(LOGA, 100_000) / term(LOGA, 100_001)) - 1.0
    assert nxt == pytest.approx(30927.471495, abs=1e-3)


def test_rejection_experiment():
    out = run_test(LOGA, 10_000, TestConfig(0.1, 50_000))
    assert out.verdict is Verdict.REJECTED
    assert out.break_index == 17_804
    assert out.iterations == 7_805
    assert out.zeta_at(17_804) == pytest.approx(12736.509554, abs=1e-3)
    assert [n for n, _ in out.boundary_zetas] == [17_802, 17_803, 17_804, 17_805]
    assert out.zeta_at(17_805) < out.zeta_at(17_804)
    assert not out.negative_hit


def test_horizon_acceptance():
    out = run_test(LOGA, 10_000, TestConfig(0.15, 50_000))
    assert out.verdict is Verdict.ACCEPTED
    assert out.iterations == 49_999
    assert out.last_index == 59_999
    assert out.zeta_at(59_999) == pytest.approx(42691.069372, abs=1e-3)
    zs = [z for _, z in out.boundary_zetas]
    assert zs == sorted(zs) and len(set(zs)) == len(zs)


def test_horizon_acceptance_is_false():
    # R_10000 is well above 0.15, so a longer scan rejects
    big = partial_sum(LOGA, 10**7).value
    rem_lower = big - partial_sum(LOGA, 10_000).value
    assert rem_lower > 0.15
    out = run_test(LOGA, 10_000, TestConfig(0.15, 10**6))
    assert out.rejected and out.break_index > 59_999


def test_immediate_rejection():
    out = run_test(LOGA, 100_000, TestConfig(0.011260, 50_000))
    assert out.rejected and out.iterations == 1
    assert out.break_index == 100_000
    assert out.zeta_at(100_001) == pytest.approx(30927.471495, abs=1e-3)


def test_geometric_examples():
    ok = run_test(HALF, 0, TestConfig(2.0))
    assert ok.verdict is Verdict.ACCEPTED and ok.numeric_limit
    bad = run_test(HALF, 0, TestConfig(0.5))
    assert bad.rejected


def test_strict_overflow_raises():
    with pytest.raises((ZetaOverflow, NonPositiveTerm)):
        run_test(HALF, 0, TestConfig(2.0, strict_overflow=True))


def test_horizon_one_is_the_seed_alone():
    out = run_test(LOGA, 10, TestConfig(0.1, 1))
    assert out.verdict is Verdict.ACCEPTED and out.iterations == 0
    assert out.boundary_zetas == ((10, seed_zeta(LOGA, 10, 0.1)),)


def test_tolerance_band():
    # the decisive drop at 17,805 is about 1.7e-5
    out = run_test(LOGA, 10_000, TestConfig(0.1, 50_000, tolerance=1e-4))
    assert not out.rejected or out.break_index > 17_804


def test_index_before_start():
    with pytest.raises(IndexBeforeStart):
        run_test(catalog_lookup("boasC"), 1, TestConfig(0.1, 10))


def test_bad_term_names_index():
    s = from_expression("1/(n*n) - 1/10000", 1)
    with pytest.raises(NonPositiveTerm) as info:
        run_test(s, 90, TestConfig(10.0, 100))
    assert info.value.n == 100


@pytest.mark.parametrize("cfg", [
    dict(epsilon=0.0), dict(epsilon=-1.0), dict(epsilon=math.inf), dict(epsilon=1.0, horizon=0),
    dict(epsilon=1.0, trace_keep="some"), dict(epsilon=1.0, tolerance=-1.0),
])
def test_config_validation(cfg):
    with pytest.raises(ValueError):
        TestConfig(**cfg)


@pytest.mark.parametrize("name, N, eps", [("logA", 10_000, 0.15), ("invsq", 10, 0.2), ("telescope", 5, 0.3)])
def test_telescoping_identity_along_trace(name, N, eps):
    s = catalog_lookup(name)
    out = run_test(s, N, TestConfig(eps, 10**5 + 1, trace_keep="full"))
    base = term(s, N) * out.seed_zeta
    for j, z in out.boundary_zetas[1::997]:
        lhs = base - term(s, j) * z
        rhs = sum_range(s, N + 1, j)
        assert lhs == pytest.approx(rhs, rel=1e-9)


@pytest.mark.parametrize("name, N, eps", [("telescope", 9, 0.2), ("telescope", 3, 0.1), ("geom(0.5)", 0, 2.0), ("geom(0.5)", 4, 0.01)])
def test_closed_form_equivalence(name, N, eps):
    s = catalog_lookup(name)
    out = run_test(s, N, TestConfig(eps, 1001, trace_keep="full"))
    for j, z in out.boundary_zetas:
        want = zeta_closed_form(s, N, eps, j, tail(name, j), tail(name, N))
        if j - N > 50 and name.startswith("geom"):
            break  # cancellation in c + R_j swamps doubles once R_j is tiny
        assert z == pytest.approx(want, rel=1e-9)


def test_closed_form_examples():
    assert zeta_closed_form(HALF, 0, 2.0, 10, 2.0**-10, 1.0) == 1025.0
    assert zeta_closed_form(TELE, 9, 0.2, 9, 0.1, 0.1) == pytest.approx(18.0, rel=1e-15)
    assert seed_zeta(TELE, 9, 0.2) == pytest.approx(18.0, rel=1e-15)


def test_closed_form_invsq_against_trigamma():
    out = run_test(INVSQ, 10, TestConfig(0.2, 11, trace_keep="full"))
    want = zeta_closed_form(INVSQ, 10, 0.2, 20, tail("invsq", 20), tail("invsq", 10))
    assert out.zeta_at(20) == pytest.approx(want, rel=1e-12)


@pytest.mark.parametrize("name", ["telescope", "invsq", "geom(0.5)"])
@pytest.mark.parametrize("N", [1, 7, 40])
def test_soundness_true_hypothesis_never_rejected(name, N):
    s = catalog_lookup(name)
    out = run_test(s, N, TestConfig(2 * tail(name, N), 10**6))
    assert out.verdict is Verdict.ACCEPTED


@pytest.mark.parametrize("name", ["telescope", "invsq", "geom(0.5)"])
@pytest.mark.parametrize("N", [1, 7, 40])
def test_completeness_false_hypothesis_rejected(name, N):
    s = catalog_lookup(name)
    R = tail(name, N)
    eps = R / 2
    out = run_test(s, N, TestConfig(eps, 10**6))
    assert out.rejected
    # zeta must go negative once R_j < R_N - eps; the break comes no later
    n_star = N + 1
    while tail(name, n_star) >= R - eps:
        n_star += 1
    assert out.break_index < n_star
    assert out.negative_hit or out.zeta_at(out.break_index + 1) < out.zeta_at(out.break_index)


def test_geometric_fixed_point():
    # seed r/(1-r) = 1 for r = 1/2: every iterate is exactly 1
    N = 3
    eps = term(HALF, N)
    out = run_test(HALF, N, TestConfig(eps, 500, trace_keep="full"))
    assert out.seed_zeta == 1.0
    assert all(z == 1.0 for _, z in out.boundary_zetas)
    assert out.verdict is Verdict.ACCEPTED
