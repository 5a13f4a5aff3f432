"""Tests for the closed-form spectral transforms of the data families.

Reference values come from two independent high-precision routes:

* Gaussian half-line moments: the erfc closed form plus the three-term
  recursion evaluated in 300-digit arithmetic (the cancellation that ruins
  the recursion in doubles is simply absorbed by the working precision).
* Finite-time polynomial-exponential transforms: the confluent
  hypergeometric closed form F_m = t^(m+1) e^(-w) 1F1(m+1; m+2; w) / (m+1).

Adaptive quadrature (scipy.quad / mpmath.quad) is deliberately NOT used as a
reference for large spectral arguments: on these oscillatory integrands it
quietly returns wrong values with optimistic error estimates.
"""

import math

import mpmath as mp
import numpy as np
import pytest
from scipy.integrate import quad

from utmq.datafun import (BoundaryFunction, BoundaryTerm, ForcingFunction,
                          HalfLineFunction, HalfLineTerm)
from utmq.transforms import (RegOrder, _gauss_moments, _poly_exp_lag,
                             boundary_deriv_table, damped_forcing_transform,
                             damped_time_transform, damped_time_transform_dt,
                             default_reg_order, deriv_ft, forcing_hat,
                             forcing_transform, half_line_ft,
                             ibp_time_transform, time_transform)


# ---------------------------------------------------------------------------
# reference oracles
# ---------------------------------------------------------------------------

def ref_moments(a, s, m_max, dps=300):
    """I_m(a, s) by erfc + recursion in high precision."""
    with mp.workdps(dps):
        aa = mp.mpf(repr(float(a)))
        ss = mp.mpc(repr(float(np.real(s))), repr(float(np.imag(s))))
        ra = mp.sqrt(aa)
        vals = [mp.sqrt(mp.pi) / (2 * ra) * mp.exp(ss * ss / (4 * aa))
                * mp.erfc(ss / (2 * ra))]
        if m_max >= 1:
            vals.append((1 - ss * vals[0]) / (2 * aa))
        for m in range(1, m_max):
            vals.append((m * vals[m - 1] - ss * vals[m]) / (2 * aa))
        return np.array([complex(v) for v in vals])


def ref_poly_exp_lag(z, t, m_max):
    """F_m(z, t) by the confluent hypergeometric closed form."""
    w_abs = abs(complex(z)) * float(t)
    with mp.workdps(max(60, int(0.5 * w_abs) + 40)):
        zz = mp.mpc(repr(float(np.real(z))), repr(float(np.imag(z))))
        tt = mp.mpf(repr(float(t)))
        w = zz * tt
        out = [complex(tt ** (m + 1) * mp.exp(-w)
                       * mp.hyp1f1(m + 1, m + 2, w) / (m + 1))
               for m in range(m_max + 1)]
        return np.array(out)


# ---------------------------------------------------------------------------
# Gaussian half-line moments
# ---------------------------------------------------------------------------

# (a, s, m_max) chosen to hit every evaluation zone: Faddeeva/recursion at
# small |s|, endpoint asymptotics at large |s|, the descent path in the
# resonance band sqrt(2 a m) ~ |s| where both closed routes lose digits,
# the reflection fold for Re s < -1/2, and the conjugation fold for Im s < 0.
MOMENT_CASES = [
    (1.0, 0.3 + 0.2j, 6),
    (0.5, 0.0 + 0.0j, 4),
    (2.0, -0.4 + 1.5j, 5),
    (0.05, 1.0 + 1.0j, 8),
    (1.0, 1.0 + 2.0j, 0),
    (1.0, 2.0 + 4.5j, 30),     # resonance band: recursion alone loses ~9 digits
    (0.5, 4.0 + 4.0j, 20),
    (3.0, 6.0 + 2.0j, 40),
    (1.0, 5.5 + 0.1j, 24),
    (0.7, 10.0 + 6.0j, 60),
    (1.0, 8.0 + 8.0j, 120),    # the supported degree cap
    (1.0, 25.0 + 0.5j, 10),
    (0.25, 18.0 + 3.0j, 12),
    (2.0, 40.0 + 10.0j, 16),
    (0.05, 14.0 + 0.0j, 6),
    (1.0, -3.0 + 2.0j, 12),
    (0.5, -9.0 + 2.0j, 20),
    (2.0, -15.0 + 6.0j, 25),
    (1.0, -25.0 + 1.0j, 8),    # reflection prefactor e^(s^2/4a) ~ e^156
    (1.0, 3.0 - 4.0j, 15),
    (0.5, -6.0 - 2.0j, 18),
    (1.5, 12.0 - 9.0j, 10),
    (0.02, 2.0 + 2.0j, 10),
    (20.0, 3.0 + 1.0j, 10),
]


def _random_moment_cases(n, seed):
    rng = np.random.default_rng(seed)
    cases = []
    while len(cases) < n:
        a = 10.0 ** rng.uniform(-1.3, 1.0)
        sr = rng.uniform(-18.0, 22.0)
        si = rng.uniform(-20.0, 20.0)
        if sr < -0.5 and sr * sr - si * si > 2000.0 * a:
            continue  # reflection prefactor would overflow doubles
        cases.append((a, complex(sr, si), int(rng.integers(0, 41))))
    return cases


def _assert_moments_close(cases):
    worst = 0.0
    for a, s, m_max in cases:
        vals = _gauss_moments(a, np.array([s]), m_max)[:, 0]
        refs = ref_moments(a, s, m_max)
        envs = np.abs(ref_moments(a, complex(max(s.real, 0.0), 0.0), m_max))
        diff = np.abs(vals - refs)
        rel = diff / np.maximum(np.abs(refs), 1e-300)
        ok = (rel < 3e-11) | (diff < 3e-12 * np.maximum(envs, 1.0))
        sharp = rel[rel < 3e-11]
        if sharp.size:
            worst = max(worst, float(sharp.max()))
        bad = np.nonzero(~ok)[0]
        assert bad.size == 0, (
            f"a={a} s={s} m={bad.tolist()} rel={rel[bad]} abs={diff[bad]}")
    print(f"\n  gaussian moments: {len(cases)} cases, worst passing rel "
          f"{worst:.3g}")


def test_gauss_moments_fixed_cases():
    _assert_moments_close(MOMENT_CASES)


def test_gauss_moments_random_cases():
    _assert_moments_close(_random_moment_cases(30, seed=20240817))


def test_gauss_moments_conjugation_fold_is_exact():
    s = np.array([0.7 + 1.3j, -2.0 + 5.0j, 9.0 + 0.4j, 3.0 + 11.0j])
    up = _gauss_moments(0.8, s, 12)
    down = _gauss_moments(0.8, np.conj(s), 12)
    assert np.array_equal(down, np.conj(up))


def test_gauss_moments_three_term_identity():
    # 2a I_{m+1} = d_{m0} + m I_{m-1} - s I_m holds across zone boundaries
    a = 1.1
    s = np.array([0.5 + 0.3j, 2.0 + 4.5j, 15.0 + 1.0j, -4.0 + 2.0j,
                  6.0 - 6.0j, 30.0 + 30.0j])
    m_max = 25
    vals = _gauss_moments(a, s, m_max)
    worst = 0.0
    for m in range(m_max):
        lhs = 2.0 * a * vals[m + 1]
        rhs = (1.0 if m == 0 else 0.0) + m * vals[m - 1] - s * vals[m]
        scale = (1.0 + m * np.abs(vals[m - 1] if m else 0.0)
                 + np.abs(s) * np.abs(vals[m]) + np.abs(lhs))
        worst = max(worst, float(np.max(np.abs(lhs - rhs) / scale)))
    print(f"\n  three-term identity worst residual {worst:.3g}")
    assert worst < 5e-11


def test_gauss_moments_shape_and_degree_cap():
    s = np.array([[1.0 + 1.0j, 2.0], [0.5j, -1.0]])
    out = _gauss_moments(1.0, s, 3)
    assert out.shape == (4, 2, 2)
    with pytest.raises(ValueError):
        _gauss_moments(1.0, np.array([1.0 + 0j]), 121)


def test_reflection_overflow_reported():
    with pytest.raises(ValueError):
        _gauss_moments(0.05, np.array([-40.0 + 0.1j]), 4)


# ---------------------------------------------------------------------------
# half-line Fourier transforms
# ---------------------------------------------------------------------------

def test_half_line_ft_rational_closed_forms():
    u = HalfLineFunction((HalfLineTerm(1.0, 0, 0.0, 1.0),))   # e^{-x}
    assert half_line_ft(u, 0.0) == pytest.approx(1.0)
    assert half_line_ft(u, 1.0) == pytest.approx(1.0 / (1.0 + 1.0j))
    assert half_line_ft(u, -0.5j) == pytest.approx(1.0 / 1.5)
    v = HalfLineFunction((HalfLineTerm(1.0, 2, 0.0, 2.0),))   # x^2 e^{-2x}
    lam = 1.7
    assert half_line_ft(v, lam) == pytest.approx(2.0 / (2.0 + 1j * lam) ** 3)


def test_half_line_ft_gaussian_against_reference():
    u = HalfLineFunction((HalfLineTerm(1.0, 1, 0.25, 0.5),))  # x e^{-x^2/4 - x/2}
    for lam in [0.0, 2.0 - 1.0j, -3.0, 7.0 + 0.0j]:
        got = half_line_ft(u, lam)
        ref = ref_moments(0.25, 0.5 + 1j * complex(lam), 1)[1]
        assert abs(got - ref) < 3e-11 * max(abs(ref), 1.0)


def test_half_line_ft_divergence_contract():
    u = HalfLineFunction((HalfLineTerm(1.0, 0, 0.0, 1.0),))
    with pytest.raises(ValueError):
        half_line_ft(u, 0.5j)
    with pytest.raises(ValueError):
        half_line_ft(u, np.array([0.0, 1.0 + 1e-6j]))
    gauss = HalfLineFunction((HalfLineTerm(1.0, 0, 1.0, 0.0),))
    val = half_line_ft(gauss, 2.0j)   # entire: upper half-plane is fine
    ref = ref_moments(1.0, 1j * 2.0j, 0)[0]
    assert abs(val - ref) < 1e-12 * abs(ref)


def test_half_line_ft_shapes():
    u = HalfLineFunction((HalfLineTerm(1.0, 0, 1.0, 0.0),))
    assert isinstance(half_line_ft(u, 1.0), complex)
    lam = np.linspace(-3, 3, 7)
    out = half_line_ft(u, lam)
    assert out.shape == lam.shape and out.dtype == complex


def test_deriv_ft_matches_boundary_identity():
    # [u']^ = i lam u-hat - u(0) for decaying u
    u = HalfLineFunction((HalfLineTerm(1.0, 2, 0.5, 0.0),
                          HalfLineTerm(1.0, 0, 1.0, 0.0)))
    lam = np.array([-4.0, -1.0, 0.0, 0.7, 3.0, 11.0])
    lhs = deriv_ft(u, 1, lam)
    rhs = 1j * lam * half_line_ft(u, lam) - u(0.0)
    assert np.max(np.abs(lhs - rhs)) < 1e-12
    # exponential family spot values
    e = HalfLineFunction((HalfLineTerm(1.0, 0, 0.0, 1.0),))
    assert deriv_ft(e, 1, 0.0) == pytest.approx(-1.0)
    assert deriv_ft(e, RegOrder(2), 0.0) == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# finite-time transforms
# ---------------------------------------------------------------------------

POLY_EXP_CASES = [
    (0.4 + 0.3j, 2.0, 9),
    (3.0 + 0.0j, 2.0, 5),
    (30.0 + 0.0j, 1e-3, 30),
    (0.0 + 2.5j, 1.0, 12),
    (25.0 + 0.0j, 8.0, 30),    # recursion needs the partial-product guard here
    (50.0 + 20.0j, 1.0, 10),
    (200.0 + 0.0j, 1.0, 5),
    (12.0 + 5.0j, 1.0, 2),
    (9.0 + 40.0j, 1.0, 30),
    (0.0 + 60.0j, 1.0, 12),    # purely oscillatory, |w| > m: stable recursion
    (7.0 + 7.0j, 3.0, 25),
    (0.0 + 11.0j, 1.0, 40),    # 6 < |w| < m: the quadrature fallback band
    (0.0 + 9.0j, 1.0, 35),
    (-2.0 + 5.0j, 1.5, 6),
    (-1.0 + 12.0j, 1.0, 9),
]


def _random_poly_exp_cases(n, seed):
    rng = np.random.default_rng(seed)
    cases = []
    for _ in range(n):
        rho = 10.0 ** rng.uniform(-0.7, 2.0)
        theta = rng.uniform(-1.2, 0.5 * math.pi)
        z = rho * complex(math.cos(theta), math.sin(theta))
        t = 10.0 ** rng.uniform(-2.5, 0.45)
        cases.append((z, t, int(rng.integers(0, 41))))
    return cases


def _assert_poly_exp_close(cases):
    worst = 0.0
    for z, t, m_max in cases:
        vals = _poly_exp_lag(np.array([z]), float(t), m_max)[:, 0]
        refs = ref_poly_exp_lag(z, t, m_max)
        m = np.arange(m_max + 1)
        sup = t ** (m + 1.0) / (m + 1.0)    # |F_m| <= sup for Re z >= 0
        diff = np.abs(vals - refs)
        rel = diff / np.maximum(np.abs(refs), 1e-300)
        ok = (rel < 5e-13) | (diff < 1e-13 * sup)
        bad = np.nonzero(~ok)[0]
        assert bad.size == 0, (
            f"z={z} t={t} m={bad.tolist()} rel={rel[bad]} abs={diff[bad]}")
        worst = max(worst, float(np.max(np.where(rel < 5e-13, rel, 0.0))))
    print(f"\n  poly-exp transforms: {len(cases)} cases, worst passing rel "
          f"{worst:.3g}")


def test_poly_exp_lag_fixed_cases():
    _assert_poly_exp_close(POLY_EXP_CASES)


def test_poly_exp_lag_random_cases():
    _assert_poly_exp_close(_random_poly_exp_cases(30, seed=31415))


def test_poly_exp_lag_zero_time():
    out = _poly_exp_lag(np.array([1.0 + 2.0j, 50.0j]), 0.0, 4)
    assert out.shape == (5, 2)
    assert np.all(out == 0.0)


def test_time_transform_closed_forms():
    one = BoundaryFunction((BoundaryTerm(1.0, 0, 0.0, 0.0, 0.0),))
    assert time_transform(one, 1.0, 1.0) == pytest.approx(math.e - 1.0)
    assert damped_time_transform(one, 1.0, 1.0) == pytest.approx(1.0 - 1.0 / math.e)
    assert time_transform(one, 0.0, 2.5) == pytest.approx(2.5)
    tsq = BoundaryFunction((BoundaryTerm(1.0, 2, 0.0, 0.0, 0.0),))
    assert time_transform(tsq, 0.0, 1.8) == pytest.approx(1.8 ** 3 / 3.0)
    assert damped_time_transform(tsq, 3.0 + 4.0j, 0.0) == 0.0


def test_damped_time_transform_against_quadrature():
    g = BoundaryFunction((BoundaryTerm(1.1, 1, 0.3, 2.0, 0.4),))
    t = 2.0
    for om in [0.7 + 0.0j, 1.5 + 40.0j, 0.0 + 9.0j, 5.0 - 3.0j]:
        got = damped_time_transform(g, om, t)

        def fre(tau, om=om):
            return (math.exp(-om.real * (t - tau)) * g(tau)
                    * math.cos(-om.imag * (t - tau)))

        def fim(tau, om=om):
            return (math.exp(-om.real * (t - tau)) * g(tau)
                    * math.sin(-om.imag * (t - tau)))

        re, _ = quad(fre, 0.0, t, epsabs=1e-13, epsrel=1e-13, limit=500)
        im, _ = quad(fim, 0.0, t, epsabs=1e-13, epsrel=1e-13, limit=500)
        assert abs(got - complex(re, im)) < 5e-12


def test_time_transform_shapes():
    g = BoundaryFunction((BoundaryTerm(1.0, 1, 0.2, 1.0, 0.0),))
    om = np.array([[1.0 + 1.0j, 2.0], [5.0j, 0.3]])
    out = damped_time_transform(g, om, 1.3)
    assert out.shape == om.shape
    assert isinstance(damped_time_transform(g, 1.0, 1.3), complex)


def test_damped_time_transform_dt_matches_finite_differences():
    g = BoundaryFunction((BoundaryTerm(0.8, 2, 0.4, 1.5, 0.2),
                          BoundaryTerm(-0.3, 0, 0.0, 3.0, 1.0)))
    om = 1.2 + 0.9j
    t, h = 0.9, 1e-3

    def D(tt):
        return damped_time_transform(g, om, tt)

    d0 = damped_time_transform_dt(g, om, t, 0)
    assert d0 == pytest.approx(D(t))
    d1 = damped_time_transform_dt(g, om, t, 1)
    fd1 = (8.0 * (D(t + h) - D(t - h)) - (D(t + 2*h) - D(t - 2*h))) / (12.0 * h)
    assert abs(d1 - fd1) < 1e-9 * max(abs(d1), 1.0)
    d2 = damped_time_transform_dt(g, om, t, 2)
    fd2 = (-(D(t + 2*h) + D(t - 2*h)) + 16.0 * (D(t + h) + D(t - h))
           - 30.0 * D(t)) / (12.0 * h * h)
    assert abs(d2 - fd2) < 1e-7 * max(abs(d2), 1.0)


def _random_boundary(rng, n_terms):
    terms = []
    for _ in range(n_terms):
        terms.append(BoundaryTerm(
            float(rng.uniform(0.3, 2.0) * rng.choice([-1.0, 1.0])),
            int(rng.integers(0, 4)),
            float(rng.uniform(0.0, 2.0)),
            float(rng.uniform(0.0, 3.0)),
            float(rng.uniform(0.0, 2.0 * math.pi))))
    return BoundaryFunction(tuple(terms))


def test_ibp_expansion_is_an_identity():
    # the order-M integration-by-parts expansion with its exact remainder
    # reproduces the damped transform for every M and lambda != 0
    rng = np.random.default_rng(97)
    worst = 0.0
    for _ in range(50):
        g = _random_boundary(rng, int(rng.integers(1, 3)))
        mag = 10.0 ** rng.uniform(-0.1, 1.7)
        ang = rng.uniform(-math.pi / 4.0, math.pi / 4.0)
        lam = mag * complex(math.cos(ang), math.sin(ang))
        t = float(rng.uniform(0.05, 2.5))
        M = int(rng.integers(0, 5))
        direct = damped_time_transform(g, lam * lam, t)
        expanded = ibp_time_transform(g, lam, t, M)
        rel = abs(expanded - direct) / max(abs(direct), 1e-300)
        worst = max(worst, rel)
        assert rel < 1e-10, (g.terms, lam, t, M, rel)
    print(f"\n  ibp identity worst rel {worst:.3g}")


def test_ibp_hooks_and_validation():
    g = BoundaryFunction((BoundaryTerm(1.0, 1, 0.5, 2.0, 0.3),))
    lam, t, M = 3.0 + 1.0j, 1.2, 3
    base = ibp_time_transform(g, lam, t, M)
    tab_t = boundary_deriv_table(g, M, t)
    tab_0 = boundary_deriv_table(g, M, 0.0)
    same = ibp_time_transform(g, lam, t, M, deriv_table_0=tab_0,
                              deriv_table_t=tab_t)
    assert same == base
    bad = tab_t.copy()
    bad[0] += 1e-6
    off = ibp_time_transform(g, lam, t, M, deriv_table_t=bad)
    assert abs(off - base) == pytest.approx(1e-6 * abs(lam) ** -2, rel=1e-9)
    with pytest.raises(ValueError):
        ibp_time_transform(g, 0.0, t, M)
    assert ibp_time_transform(g, lam, t, RegOrder(3)) == base


def test_boundary_deriv_table_polynomial():
    tsq = BoundaryFunction((BoundaryTerm(1.0, 2, 0.0, 0.0, 0.0),))
    tab = boundary_deriv_table(tsq, 3, 1.5)
    assert np.allclose(tab, [2.25, 3.0, 2.0, 0.0])


def test_reg_order_contract():
    with pytest.raises(ValueError):
        RegOrder(0)
    order = RegOrder(4)
    assert order.validate(2, 0) is order
    with pytest.raises(ValueError):
        RegOrder(3).validate(1, 1)
    assert default_reg_order(1, 2) == RegOrder(1 + 2 * 2 + 2)
    assert default_reg_order() == RegOrder(2)


# ---------------------------------------------------------------------------
# separable forcing
# ---------------------------------------------------------------------------

def _exp_forcing():
    # f(x, t) = e^{-x} e^{-t}
    return ForcingFunction(((
        HalfLineFunction((HalfLineTerm(1.0, 0, 0.0, 1.0),)),
        BoundaryFunction((BoundaryTerm(1.0, 0, 1.0, 0.0, 0.0),))),))


def test_forcing_closed_forms():
    f = _exp_forcing()
    got = forcing_transform(f, 1.0, 1.0, 1.0)
    assert got == pytest.approx(0.5 - 0.5j)
    assert forcing_hat(f, 1.0, 0.7) == pytest.approx(
        math.exp(-0.7) / (1.0 + 1.0j))
    om, t = 2.0 + 3.0j, 1.1
    undamped = forcing_transform(f, 0.5, om, t)
    damped = damped_forcing_transform(f, 0.5, om, t)
    assert damped == pytest.approx(np.exp(-om * t) * undamped)


def test_forcing_against_brute_force_quadrature():
    # one Gaussian-in-x, oscillatory-in-t separable term, checked against
    # independent 1d quadratures of each factor
    f = ForcingFunction(((
        HalfLineFunction((HalfLineTerm(1.0, 1, 1.0, 0.0),)),
        BoundaryFunction((BoundaryTerm(1.0, 0, 0.5, 1.0, 0.0),))),))
    lam, om, t = 1.2 - 0.6j, 0.8, 1.3
    got = forcing_transform(f, lam, om, t)

    def xf(kind):
        def fun(x):
            val = x * math.exp(-x * x) * np.exp(-1j * lam * x)
            return val.real if kind == "re" else val.imag
        return fun

    def tf(kind):
        def fun(tau):
            val = math.exp(om * tau) * math.exp(-0.5 * tau) * math.cos(tau)
            return val if kind == "re" else 0.0
        return fun

    xr, _ = quad(xf("re"), 0.0, 14.0, epsabs=1e-13, limit=400)
    xi, _ = quad(xf("im"), 0.0, 14.0, epsabs=1e-13, limit=400)
    tr, _ = quad(tf("re"), 0.0, t, epsabs=1e-13, limit=400)
    ref = complex(xr, xi) * tr
    assert abs(got - ref) < 1e-11 * max(abs(ref), 1.0)


def test_forcing_shapes_broadcast():
    f = _exp_forcing()
    lam = np.linspace(-2, 2, 5)
    out = forcing_transform(f, lam, lam * lam * 1j, 0.9)
    assert out.shape == lam.shape
    assert isinstance(forcing_transform(f, 1.0, 1.0j, 0.9), complex)
