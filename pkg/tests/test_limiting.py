import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mobius_walk import (
    AlphaClass,
    FullVector,
    Kind,
    Localized,
    Provenance,
    degeneracy_report,
    empirical_average_distribution,
    evolve,
    extremum_pattern,
    initial_state,
    limiting_distribution_closed_form,
    limiting_distribution_general,
    make_params,
    position_distribution,
    predicted_pattern,
    qwc_limiting_distribution,
    step,
)
from mobius_walk.errors import NotDegenerateRegime, OddNNotApplicable, UnsupportedInitialState
from mobius_walk.limiting import Distribution, classify_alpha, is_degenerate_regime
from mobius_walk.oracles import dense_step_matrix, dense_time_average

from conftest import random_state

DEGENERATE = [(24, 1.0), (24, 2.0), (26, 1.0), (26, 2.0), (7, 0.5), (9, 1.5), (6, 3.0)]


class TestClassification:
    @pytest.mark.parametrize(
        "alpha,expected",
        [(0.0, AlphaClass.INTEGER), (2.0, AlphaClass.INTEGER), (-3.0, AlphaClass.INTEGER),
         (0.5, AlphaClass.HALF_INTEGER), (1.5, AlphaClass.HALF_INTEGER),
         (0.3, AlphaClass.NON_HALF_INTEGER), (1.5 + 1e-3, AlphaClass.NON_HALF_INTEGER),
         (1.0 + 1e-10, AlphaClass.INTEGER)],
    )
    def test_classify_alpha(self, alpha, expected):
        assert classify_alpha(alpha) is expected

    @pytest.mark.parametrize(
        "n,alpha,expected",
        [(24, 1.0, True), (24, 0.5, False), (7, 0.5, True), (7, 1.0, False), (8, 0.3, False)],
    )
    def test_regime(self, n, alpha, expected):
        assert is_degenerate_regime(make_params(n, alpha)) is expected


class TestDegeneracyReport:
    def test_odd_untwisted_is_uniform(self):
        report = degeneracy_report(make_params(5, 0.0))
        assert report.pairs == [] and report.is_uniform

    def test_tuned_even_is_uniform(self):
        report = degeneracy_report(make_params(8, 0.3))
        assert report.is_uniform
        assert report.alpha_class is AlphaClass.NON_HALF_INTEGER

    def test_even_twisted_pairs(self):
        params = make_params(24, 1.0)
        report = degeneracy_report(params)
        assert report.pairs and not report.is_uniform
        assert report.index_formula_consistent
        from mobius_walk import eigensystem

        vals = eigensystem(params).values
        for (s, r, k), (s2, r2, kp) in report.pairs:
            assert (s, r) == (s2, r2) and k != kp
            assert abs(vals[k, 2 * s + r] - vals[kp, 2 * s + r]) < 1e-9
            assert (k + kp) % 24 in {(12 + 1) % 24, (12 - 1) % 24}

    def test_pairs_match_brute_force(self):
        from mobius_walk import build_kblock

        n = 26
        params = make_params(n, 2.0)
        # project onto the rotation sigma_x = -1 / +1 sectors, split by half-plane
        minus = np.kron(np.eye(2), np.array([[1], [-1]])) / np.sqrt(2)
        plus = np.kron(np.eye(2), np.array([[1], [1]])) / np.sqrt(2)
        labelled = np.empty((n, 4), dtype=complex)
        for k in range(n):
            m = build_kblock(params, k).matrix
            for s, proj in enumerate((minus, plus)):
                ev = np.linalg.eigvals(proj.T @ m @ proj)
                labelled[k, 2 * s: 2 * s + 2] = sorted(ev, key=lambda z: z.real)
        brute = sum(
            int(abs(labelled[k, i] - labelled[kp, i]) < 1e-9)
            for i in range(4) for k in range(n) for kp in range(k + 1, n)
        )
        assert brute == len(degeneracy_report(params).pairs)

    def test_summary(self):
        summary = degeneracy_report(make_params(24, 1.0)).summary()
        assert summary["alpha_class"] == "IntegerAlpha"
        assert summary["is_uniform"] is False
        assert summary["excluded_k"] == []
        assert degeneracy_report(make_params(24, 2.0)).excluded_k == [5, 7, 17, 19]
        assert degeneracy_report(make_params(24, 0.0)).excluded_k == [6, 18]


class TestDistribution:
    def test_clamps_round_off(self):
        d = Distribution(np.array([0.5, 0.5, -1e-15]), Kind.LIMITING, Provenance.GENERAL_SUM)
        assert d.values.min() == 0.0

    def test_rejects_real_negatives(self):
        with pytest.raises(ArithmeticError):
            Distribution(np.array([1.1, -0.1]), Kind.LIMITING, Provenance.GENERAL_SUM)


class TestEmpirical:
    def test_single_step(self):
        params = make_params(6, 0.7)
        psi = initial_state(params)
        emp = empirical_average_distribution(params, 1)
        np.testing.assert_allclose(emp.values, position_distribution(step(psi, params)), atol=1e-14)
        assert emp.kind is Kind.AVERAGE and emp.provenance is Provenance.EMPIRICAL

    def test_odd_uniform(self):
        emp = empirical_average_distribution(make_params(5, 0.0), 10_000).values
        assert np.abs(emp - 0.2).max() < 0.01

    def test_even_untwisted_matches_closed_form(self):
        emp = empirical_average_distribution(make_params(24, 0.0), 10_000).values
        assert np.abs(emp - qwc_limiting_distribution(24).values).max() < 0.01

    def test_matches_brute_force_average(self):
        params = make_params(4, 1.0, initial=Localized(1, 0, 2))
        u = dense_step_matrix(4, 1.0, params.coin)
        ref = dense_time_average(u, initial_state(params).flat(), 4, 2000)
        np.testing.assert_allclose(empirical_average_distribution(params, 2000).values, ref, atol=1e-11)

    def test_matches_position_space_average(self):
        params = make_params(6, 0.4)
        psi = initial_state(params)
        acc = np.zeros(6)
        for _ in range(300):
            psi = step(psi, params)
            acc += position_distribution(psi)
        np.testing.assert_allclose(empirical_average_distribution(params, 300).values, acc / 300, atol=1e-12)

    def test_rejects_zero_t(self):
        with pytest.raises(ValueError):
            empirical_average_distribution(make_params(5, 0.0), 0)


class TestQwcClosedForm:
    def test_two_hills(self):
        pi = qwc_limiting_distribution(24).values
        assert pi[0] == pytest.approx(pi.max(), abs=1e-15)
        assert pi[12] == pytest.approx(pi.max(), abs=1e-15)

    @pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12, 24, 26, 40, 64])
    def test_normalized(self, n):
        pi = qwc_limiting_distribution(n).values
        assert pi.sum() == pytest.approx(1.0, abs=1e-10)
        assert pi.min() >= 0

    @pytest.mark.parametrize("n", [4, 6, 8, 10, 24, 26])
    def test_matches_general_sum(self, n):
        gen = limiting_distribution_general(make_params(n, 0.0)).values
        np.testing.assert_allclose(qwc_limiting_distribution(n).values, gen, atol=1e-10)

    def test_translation(self):
        np.testing.assert_allclose(
            qwc_limiting_distribution(10, p0=3).values,
            limiting_distribution_general(make_params(10, 0.0, initial=Localized(0, 0, 3))).values,
            atol=1e-12,
        )

    def test_odd_rejected(self):
        with pytest.raises(OddNNotApplicable):
            qwc_limiting_distribution(7)

    @pytest.mark.slow
    def test_matches_empirical(self):
        emp = empirical_average_distribution(make_params(24, 0.0), 100_000).values
        assert np.abs(emp - qwc_limiting_distribution(24).values).max() < 5e-3


class TestGeneralSum:
    @pytest.mark.parametrize("n,alpha", [(5, 0.0), (7, 0.2), (8, 0.3), (24, 0.7), (13, 2.0)])
    def test_uniform_when_no_pairs(self, n, alpha):
        params = make_params(n, alpha)
        assert degeneracy_report(params).is_uniform
        np.testing.assert_allclose(limiting_distribution_general(params).values, 1 / n, atol=1e-12)

    @pytest.mark.slow
    def test_matches_empirical_twisted(self):
        params = make_params(26, 1.0)
        emp = empirical_average_distribution(params, 100_000).values
        assert np.abs(emp - limiting_distribution_general(params).values).max() < 5e-3

    def test_any_initial_state(self, rng):
        n, alpha = 6, 1.0
        vec = random_state(rng, n)
        params = make_params(n, alpha, initial=FullVector(vec))
        u = dense_step_matrix(n, alpha, params.coin)
        ref = dense_time_average(u, vec, n, 20_000)
        gen = limiting_distribution_general(params).values
        assert gen.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.abs(gen - ref).max() < 2e-3


class TestClosedForm:
    def test_untwisted_reduces_to_plain_cycle(self):
        closed = limiting_distribution_closed_form(make_params(24, 0.0)).values
        np.testing.assert_allclose(closed, qwc_limiting_distribution(24).values, atol=1e-12)

    def test_hill_and_valley(self):
        pi = limiting_distribution_closed_form(make_params(24, 1.0)).values
        assert pi[0] == pytest.approx(pi.max(), abs=1e-15)
        assert pi[12] == pytest.approx(pi.min(), abs=1e-15)

    def test_two_hills_matches_general(self):
        params = make_params(24, 2.0)
        closed = limiting_distribution_closed_form(params).values
        assert extremum_pattern(limiting_distribution_closed_form(params)) == "two_hills"
        np.testing.assert_allclose(closed, limiting_distribution_general(params).values, atol=1e-9)

    @pytest.mark.parametrize("n,alpha", DEGENERATE)
    def test_oracle_chain_general(self, n, alpha):
        params = make_params(n, alpha)
        closed = limiting_distribution_closed_form(params)
        assert closed.provenance is Provenance.CLOSED_FORM
        assert closed.values.sum() == pytest.approx(1.0, abs=1e-9)
        np.testing.assert_allclose(closed.values, limiting_distribution_general(params).values, atol=1e-9)

    @pytest.mark.slow
    @pytest.mark.parametrize("n,alpha", DEGENERATE[:5])
    def test_oracle_chain_empirical(self, n, alpha):
        params = make_params(n, alpha)
        emp = empirical_average_distribution(params, 100_000).values
        assert np.abs(emp - limiting_distribution_closed_form(params).values).max() < 5e-3

    @pytest.mark.parametrize("n,alpha", [(24, 0.3), (7, 1.0), (8, 0.5)])
    def test_outside_regime(self, n, alpha):
        with pytest.raises(NotDegenerateRegime):
            limiting_distribution_closed_form(make_params(n, alpha))

    def test_other_start(self):
        with pytest.raises(UnsupportedInitialState):
            limiting_distribution_closed_form(make_params(24, 1.0, initial=Localized(0, 0, 3)))
        coin = np.array([[1, 1j], [1j, 1]]) / np.sqrt(2)
        with pytest.raises(UnsupportedInitialState):
            limiting_distribution_closed_form(make_params(24, 1.0, coin))


class TestShape:
    @pytest.mark.parametrize("n", [4, 6, 8, 10, 12, 14, 24, 26, 28, 30])
    @pytest.mark.parametrize("alpha", [0, 1, 2, 3])
    def test_hill_valley_rule(self, n, alpha):
        params = make_params(n, float(alpha))
        dist = limiting_distribution_general(params)
        if dist.values.max() - dist.values.min() < 1e-12:
            pytest.skip("limit is exactly uniform")
        assert extremum_pattern(dist) == predicted_pattern(n, alpha)

    def test_predicted(self):
        assert predicted_pattern(24, 0) == "two_hills"
        assert predicted_pattern(24, 1) == "hill_valley"
        assert predicted_pattern(26, 1) == "two_hills"
        assert predicted_pattern(26, 2) == "hill_valley"
        assert predicted_pattern(7, 0.5) is None
        assert predicted_pattern(24, 0.3) is None

    def test_shifted_start(self):
        dist = qwc_limiting_distribution(24, p0=5)
        assert extremum_pattern(dist, p0=5) == "two_hills"


# -- properties --------------------------------------------------------------

alpha_off_grid = st.floats(0.0, 20.0).filter(lambda a: abs(2 * a - round(2 * a)) > 0.1)


@pytest.mark.slow
@settings(max_examples=50)
@given(st.integers(3, 40), alpha_off_grid)
def test_uniform_limit_without_pairs(n, alpha):
    params = make_params(n, alpha)
    assert degeneracy_report(params).is_uniform
    emp = empirical_average_distribution(params, 100_000).values
    assert np.abs(emp - 1 / n).max() < 1e-2


@pytest.mark.slow
@settings(max_examples=15)
@given(st.integers(5, 30), st.integers(0, 6))
def test_visible_departure_with_pairs(n, m):
    alpha = m if n % 2 == 0 else m + 0.5
    params = make_params(n, alpha)
    if n == 4 and m % 2 == 0:
        return
    assert not degeneracy_report(params).is_uniform
    emp = empirical_average_distribution(params, 100_000).values
    assert np.abs(emp - 1 / n).max() >= 1e-2


@settings(max_examples=30)
@given(st.integers(3, 20), st.sampled_from([0.0, 0.5, 1.0, 2.0, 0.37]), st.integers(0, 19),
       st.integers(0, 2**32 - 1))
def test_translation_covariance(n, alpha, d, seed):
    d %= n
    vec = random_state(np.random.default_rng(seed), n).reshape(2, 2, n)
    base = limiting_distribution_general(make_params(n, alpha, initial=FullVector(vec))).values
    moved = limiting_distribution_general(
        make_params(n, alpha, initial=FullVector(np.roll(vec, d, axis=-1)))
    ).values
    np.testing.assert_allclose(moved, np.roll(base, d), atol=1e-12)


@settings(max_examples=40)
@given(st.integers(2, 40), st.floats(-10, 10), st.integers(0, 2**32 - 1))
def test_normalized_nonnegative(n, alpha, seed):
    vec = random_state(np.random.default_rng(seed), n)
    dist = limiting_distribution_general(make_params(n, alpha, initial=FullVector(vec)))
    assert dist.values.min() >= 0
    assert dist.values.sum() == pytest.approx(1.0, abs=1e-9)
    emp = empirical_average_distribution(make_params(n, alpha), 50)
    assert emp.values.sum() == pytest.approx(1.0, abs=1e-9)
