import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose
from scipy.integrate import quad

from gqarch.coeffs import finite_coeffs, phi_coeffs, power_law_coeffs
from gqarch.exceptions import ConditionError, DomainError
from gqarch.models import (AsymGarch11Spec, Garch11Spec, GqarchSpec, LarchSpec,
                           embed_asym_in_gqarch, sentana_map, sp500_fixture)
from gqarch.moments import (MomentReport, beta_function, garch11_moments, garch_m2, gqarch_m2,
                            larch_m2, lm_asymptotics, lm_cov_curve, m3_recursion, rho_recursion,
                            sentana_fourth_moment)

EXAMPLE = AsymGarch11Spec(a=0.1, b=0.5, c=0.2, gamma=0.3)


def stationary_moment_oracle(a, b, c, g, mu4):
    """Solve the stationary second/fourth-moment equations in exact rationals.

    With ``s^2 = theta + psi r + a11 r^2 + delta s^2_prev`` and symmetric
    innovations, ``E s^4 (1 - a11^2 mu4 - 2 a11 delta - delta^2)
    = theta^2 + psi^2 m2 + 2 theta (a11 + delta) m2``; ``E r^4 = mu4 E s^4``;
    ``cov(r_0^2, r_1^2) = theta m2 + a11 E r^4 + delta E s^4 - m2^2``.
    """
    a, b, c, g, mu4 = (Fraction(x) for x in (a, b, c, g, mu4))
    theta, psi, a11 = c * c + a * a, 2 * a * b, b * b
    m2 = theta / (1 - a11 - g)
    s4 = (theta ** 2 + psi ** 2 * m2 + 2 * theta * (a11 + g) * m2) / \
        (1 - a11 ** 2 * mu4 - 2 * a11 * g - g * g)
    m4 = mu4 * s4
    rho1 = theta * m2 + a11 * m4 + g * s4 - m2 * m2
    return float(m2), float(m4), float(rho1)


def test_example_values():
    mom = garch11_moments(EXAMPLE, 3.0)
    m2, m4, rho1 = stationary_moment_oracle("0.1", "0.5", "0.2", "0.3", 3)
    assert math.isclose(mom.m2, 1 / 9, rel_tol=1e-14) and math.isclose(m2, 1 / 9)
    assert math.isclose(mom.m4_0, m4, rel_tol=1e-13)
    assert math.isclose(mom.C_const, rho1, rel_tol=1e-12)
    # frozen from the rational oracle
    assert round(mom.m4_0, 6) == 0.050946
    assert round(mom.C_const, 6) == 0.011041
    # quoted value carries five significant figures
    assert math.isclose(float(mom.rho(2)), 0.0060727, rel_tol=5e-5)
    assert math.isclose(float(mom.rho(2)), rho1 * 0.55, rel_tol=1e-12)
    assert math.isclose(float(mom.m3(1)), 0.2 * 0.5 / 9, rel_tol=1e-14)
    assert mom.geometric_rate == 0.55


@settings(max_examples=60)
@given(st.floats(-1, 1), st.floats(-0.6, 0.6), st.floats(0, 1), st.floats(0, 0.9),
       st.sampled_from([1.0, 3.0, 4.5]))
def test_matches_rational_oracle(a, b, c, g, mu4):
    spec = AsymGarch11Spec(a, b, c, g)
    if mu4 * b ** 4 + 2 * b * b * g + g * g >= 0.99:
        return
    mom = garch11_moments(spec, mu4)
    m2, m4, rho1 = stationary_moment_oracle(a, b, c, g, mu4)
    assert math.isclose(mom.m2, m2, rel_tol=1e-12, abs_tol=1e-300)
    assert math.isclose(mom.m4_0, m4, rel_tol=1e-10, abs_tol=1e-300)
    assert math.isclose(mom.C_const, rho1, rel_tol=1e-8, abs_tol=1e-14 * max(m4, 1e-300))


def test_symmetric_case_has_no_leverage():
    mom = garch11_moments(AsymGarch11Spec(0.0, 0.5, 0.2, 0.3))
    assert np.all(mom.m3(np.arange(1, 20)) == 0)


def test_no_arch_term():
    mom = garch11_moments(AsymGarch11Spec(0.1, 0.0, 0.2, 0.3))
    assert mom.C_const == 0 and np.all(mom.rho(np.arange(1, 10)) == 0)
    assert math.isclose(mom.m2, 0.05 / 0.7)
    # r^2 = zeta^2 * constant
    assert math.isclose(mom.m4_0, 3 * mom.m2 ** 2)


def test_rho_lag_zero_is_variance():
    mom = garch11_moments(EXAMPLE)
    assert math.isclose(float(mom.rho(0)), mom.m4_0 - mom.m2 ** 2)
    assert float(mom.m3(0)) == 0


def test_recursions_match_closed_form():
    mom = garch11_moments(EXAMPLE)
    t = np.arange(1, 51)
    assert_allclose(m3_recursion(EXAMPLE, 50), mom.m3(t), rtol=1e-12)
    assert_allclose(rho_recursion(EXAMPLE, mom.C_const, 50), mom.rho(t), rtol=1e-12)
    spec = AsymGarch11Spec(-0.3, 0.2, 0.1, 0.7)
    mom = garch11_moments(spec)
    assert_allclose(m3_recursion(spec, 50), mom.m3(t), rtol=1e-12)
    assert_allclose(rho_recursion(spec, mom.C_const, 50), mom.rho(t), rtol=1e-12)


def test_sentana_cross_check_grid():
    rng = np.random.default_rng(2024)
    done = 0
    while done < 100:
        a, b = rng.uniform(-1, 1, 2)
        c, g = rng.uniform(0, 1), rng.uniform(0, 0.95)
        spec = AsymGarch11Spec(a, b, c, g)
        if 3 * b ** 4 + 2 * b * b * g + g * g >= 1:
            continue
        m4 = garch11_moments(spec).m4_0
        assert math.isclose(m4, sentana_fourth_moment(sentana_map(spec), 3.0), rel_tol=1e-12)
        done += 1


def test_conditions_enforced():
    with pytest.raises(ConditionError) as exc:
        garch11_moments(AsymGarch11Spec(0.1, 0.7, 0.2, 0.6))
    assert exc.value.condition == "garch11_variance"
    with pytest.raises(ConditionError) as exc:
        garch11_moments(AsymGarch11Spec(0.1, 0.8, 0.2, 0.1))
    assert exc.value.condition == "garch11_fourth"
    with pytest.raises(DomainError):
        garch11_moments(EXAMPLE, mu3=0.5)


def test_gqarch_m2():
    assert math.isclose(gqarch_m2(embed_asym_in_gqarch(EXAMPLE)), 1 / 9, rel_tol=1e-15)
    assert gqarch_m2(embed_asym_in_gqarch(EXAMPLE)) == garch11_moments(EXAMPLE).m2
    assert math.isclose(gqarch_m2(GqarchSpec(0.1, 0.2, finite_coeffs([0.0]))), 0.05)
    m2 = gqarch_m2(sp500_fixture("Q2"))
    assert 0 < m2 < 1e-3
    with pytest.raises(ConditionError):
        gqarch_m2(GqarchSpec(0.1, 0.2, finite_coeffs([0.9]), 0.3))


def test_gqarch_m2_q2_monte_carlo():
    from gqarch.simulate import SimConfig, simulate
    Q2 = sp500_fixture("Q2", n_trunc=5000)
    means = [np.mean(simulate(Q2, cfg=SimConfig(n=50_000, burn_in=20_000, trunc=5000, seed=4,
                                                replicate=k)).r ** 2) for k in range(10)]
    se = np.std(means, ddof=1) / math.sqrt(10)
    assert abs(np.mean(means) - gqarch_m2(Q2)) < 3 * se


def test_larch_and_garch_m2():
    assert math.isclose(larch_m2(LarchSpec(1.0, finite_coeffs([0.3, -0.2]))), 1 / 0.87)
    assert math.isclose(garch_m2(sp500_fixture("G")), 0.00001 / 0.0348)
    with pytest.raises(ConditionError):
        larch_m2(LarchSpec(1.0, finite_coeffs([1.0])))
    with pytest.raises(ConditionError):
        garch_m2(Garch11Spec(1.0, 0.5, 0.5))


@pytest.mark.parametrize("d", np.arange(0.05, 0.5, 0.05).round(2))
def test_beta_function_matches_quadrature(d):
    integral = quad(lambda x: 1.0, 0, 1, weight="alg", wvar=(d - 1, -2 * d))[0]
    assert math.isclose(beta_function(d, 1 - 2 * d), integral, rel_tol=1e-8)


def test_lm_asymptotics_example():
    seq = power_law_coeffs(0.1, 0.25, 10_000)
    spec = GqarchSpec(0.1, 0.2, seq, 0.3)
    lm = lm_asymptotics(spec)
    B = quad(lambda x: 1.0, 0, 1, weight="alg", wvar=(-0.75, -0.5))[0]
    assert round(B, 5) == 5.24412
    B2 = seq.sum_sq()
    m2 = 0.05 / (0.7 - B2)
    k1 = (2 * 0.1 * 0.1 / (0.7 - B2)) ** 2 * B * m2
    assert math.isclose(lm.kappa1_sq, k1, rel_tol=1e-9)
    assert math.isclose(lm.kappa2_sq, k1 / (0.25 * 1.5), rel_tol=1e-9)
    assert math.isclose(lm.phi_sum, 0.7 / (0.7 - B2))
    assert lm.decay_exponent == -0.5 and lm.hurst == 0.75
    assert lm.B2_tail_bound > 0


def test_lm_gamma_zero_reduction():
    seq = power_law_coeffs(0.2, 0.3, 5000)
    lm = lm_asymptotics(GqarchSpec(0.1, 0.2, seq, 0.0))
    B2 = seq.sum_sq()
    expected = (2 * 0.1 * 0.2 / (1 - B2)) ** 2 * beta_function(0.3, 0.4) * 0.05 / (1 - B2)
    assert math.isclose(lm.kappa1_sq, expected, rel_tol=1e-12)


def test_lm_requires_power_law_and_a():
    with pytest.raises(DomainError):
        lm_asymptotics(GqarchSpec(0.1, 0.2, finite_coeffs([0.3])))
    with pytest.raises(DomainError):
        lm_asymptotics(GqarchSpec(0.0, 0.2, power_law_coeffs(0.2, 0.3, 100)))


def test_phi_sum_single_coefficient():
    lm_like = 0.7 / 0.45
    seq = finite_coeffs([0.5])
    assert math.isclose(phi_coeffs(seq, 0.3, 300).sum(), lm_like, rel_tol=1e-12)


def test_lm_cov_curve():
    lm = lm_asymptotics(GqarchSpec(0.1, 0.2, power_law_coeffs(0.2, 0.352, 1000), 0.0))
    assert float(lm_cov_curve(lm, 1)) == lm.kappa1_sq
    ratio = lm_cov_curve(lm, 200) / lm_cov_curve(lm, 100)
    assert math.isclose(ratio, 2 ** (2 * 0.352 - 1), rel_tol=1e-12)
    assert math.isclose(float(ratio), 0.8146, abs_tol=1e-4)
    t = np.array([3, 10, 77])
    assert_allclose(lm_cov_curve(lm, 2 * t) / lm_cov_curve(lm, t), 2 ** lm.decay_exponent)
    with pytest.raises(DomainError):
        lm_cov_curve(lm, 0)


def test_moment_report():
    rep = MomentReport({"type": "x"}, {"m2": 1.0})
    assert rep.to_dict() == {"model": {"type": "x"}, "theory": {"m2": 1.0}, "empirical": {},
                             "mc_se": {}}
    d = garch11_moments(EXAMPLE).to_dict(3)
    assert len(d["rho"]) == 3 and d["C"] == garch11_moments(EXAMPLE).C_const
