"""Tests for the closed data families and their exact calculus."""

import json

import numpy as np
import pytest

from utmq.datafun import (BoundaryFunction, BoundaryTerm, DatumTriple,
                          ForcingFunction, HalfLineFunction, HalfLineTerm,
                          datum_from_json, datum_to_json, deriv_t, deriv_x,
                          load_datum)


# 4th-order central stencils (offset: coefficient, common denominator)
_STENCILS = {
    1: ({-2: 1.0, -1: -8.0, 1: 8.0, 2: -1.0}, 12.0),
    2: ({-2: -1.0, -1: 16.0, 0: -30.0, 1: 16.0, 2: -1.0}, 12.0),
    3: ({-3: 1.0, -2: -8.0, -1: 13.0, 1: -13.0, 2: 8.0, 3: -1.0}, 8.0),
    4: ({-3: -1.0, -2: 12.0, -1: -39.0, 0: 56.0, 1: -39.0, 2: 12.0, 3: -1.0},
        6.0),
}


def fd_deriv(fun, x, order, h=1e-2):
    if order == 0:
        return fun(x)
    coeffs, denom = _STENCILS[order]
    return sum(c * fun(x + k * h) for k, c in coeffs.items()) / (denom * h ** order)


def test_half_line_evaluation():
    u = HalfLineFunction((HalfLineTerm(2.0, 1, 0.25, 0.0),
                          HalfLineTerm(-1.0, 0, 0.0, 3.0)))
    x = np.array([0.0, 0.5, 2.0, 10.0])
    expect = 2.0 * x * np.exp(-0.25 * x**2) - np.exp(-3.0 * x)
    assert np.allclose(u(x), expect, rtol=1e-14, atol=1e-300)
    assert u(1.0) == pytest.approx(2.0 * np.exp(-0.25) - np.exp(-3.0), rel=1e-14)


def test_half_line_rejects_negative_argument():
    u = HalfLineFunction((HalfLineTerm(1.0, 0, 1.0, 0.0),))
    with pytest.raises(ValueError):
        u(-0.3)
    with pytest.raises(ValueError):
        u(np.array([0.1, -0.1]))


def test_term_validation():
    with pytest.raises(ValueError):
        HalfLineTerm(1.0, -1, 1.0, 0.0)
    with pytest.raises(ValueError):
        HalfLineTerm(1.0, 0, -0.5, 0.0)
    with pytest.raises(ValueError):
        HalfLineTerm(1.0, 0, 0.0, 0.0)   # no decay at all
    with pytest.raises(ValueError):
        BoundaryTerm(1.0, 2, -1.0, 0.0, 0.0)


def test_half_line_derivatives_match_fd():
    u = HalfLineFunction((HalfLineTerm(1.5, 2, 0.5, 1.0),
                          HalfLineTerm(-0.7, 0, 0.0, 2.0)))
    pts = [0.3, 1.1, 2.7]
    for k in range(1, 5):
        du = deriv_x(u, k)
        for x in pts:
            ref = fd_deriv(u, x, k, h=2e-2 if k > 2 else 1e-3)
            tol = dict(rel=1e-6, abs=1e-8) if k <= 2 else dict(rel=1e-5, abs=1e-6)
            assert du(x) == pytest.approx(ref, **tol), (k, x)


def test_derivative_composition_is_exact():
    u = HalfLineFunction((HalfLineTerm(1.0, 3, 0.25, 0.5),))
    a = deriv_x(deriv_x(u, 2), 3)
    b = deriv_x(u, 5)
    x = np.linspace(0.0, 6.0, 37)
    assert np.array_equal(a(x), b(x))


def test_term_merging_controls_growth():
    u = HalfLineFunction((HalfLineTerm(1.0, 0, 1.0, 0.0),))
    d = deriv_x(u, 12)
    # (d/dx)^12 of exp(-x^2) has 7 distinct powers, not 3^12 terms
    assert len(d.terms) == 7


def test_boundary_function_and_derivatives():
    g = BoundaryFunction((BoundaryTerm(1.2, 1, 0.5, 3.0, 0.4),))
    def ref(t):
        return 1.2 * t * np.exp(-0.5 * t) * np.cos(3.0 * t + 0.4)
    ts = np.array([0.0, 0.7, 2.2])
    assert np.allclose(g(ts), ref(ts), rtol=1e-14, atol=1e-14)
    for j in range(1, 5):
        dg = deriv_t(g, j)
        for t in ts:
            fd = fd_deriv(ref, t, j, h=2e-2 if j > 2 else 1e-3)
            tol = dict(rel=2e-6, abs=1e-7) if j <= 2 else dict(rel=1e-5, abs=1e-6)
            assert dg(t) == pytest.approx(fd, **tol), (j, t)


def test_boundary_value_exact_at_zero():
    g = BoundaryFunction((BoundaryTerm(0.9, 0, 1.0, 2.0, 0.3),
                          BoundaryTerm(-0.4, 2, 0.0, 0.0, 0.0)))
    for j in range(6):
        assert g.value(0.0, j) == pytest.approx(deriv_t(g, j)(0.0), rel=1e-13, abs=1e-13)


def test_linear_algebra_of_families():
    u = HalfLineFunction((HalfLineTerm(1.0, 0, 1.0, 0.0),))
    v = HalfLineFunction((HalfLineTerm(2.0, 1, 0.0, 1.0),))
    x = np.linspace(0, 3, 11)
    assert np.allclose((u + v)(x), u(x) + v(x), rtol=1e-15)
    assert np.allclose((u - v)(x), u(x) - v(x), rtol=1e-15)
    assert np.allclose(u.scaled(-2.5)(x), -2.5 * u(x), rtol=1e-15)
    w = u.multiply_by_x()
    assert np.allclose(w(x), x * u(x), rtol=1e-15)


def test_large_power_log_space_path():
    # t^48 e^{-40 t} peaks near t=1.2 at a huge intermediate scale
    m, b = 48, 40.0
    g = BoundaryFunction((BoundaryTerm(1.0, m, b, 0.0, 0.0),))
    t = 1.2
    ref = np.exp(m * np.log(t) - b * t)
    assert g(t) == pytest.approx(ref, rel=1e-12)
    assert g(0.0) == 0.0
    assert np.isfinite(g(8.0))


def test_forcing_function_partials():
    f = ForcingFunction(((HalfLineFunction((HalfLineTerm(1.0, 0, 0.0, 1.0),)),
                          BoundaryFunction((BoundaryTerm(1.0, 0, 1.0, 0.0, 0.0),))),))
    assert f(1.0, 2.0) == pytest.approx(np.exp(-1.0) * np.exp(-2.0), rel=1e-14)
    assert f.deriv(1, 0)(1.0, 2.0) == pytest.approx(-np.exp(-3.0), rel=1e-13)
    assert f.deriv(0, 2)(1.0, 2.0) == pytest.approx(np.exp(-3.0), rel=1e-13)
    assert f.deriv(2, 1)(0.5, 0.25) == pytest.approx(-np.exp(-0.75), rel=1e-13)


def test_datum_json_roundtrip():
    d = DatumTriple(
        u=HalfLineFunction((HalfLineTerm(1.0, 1, 0.25, 0.0),)),
        g=BoundaryFunction((BoundaryTerm(0.5, 0, 1.0, 2.0, 0.1),)),
        f=ForcingFunction(((HalfLineFunction((HalfLineTerm(1.0, 0, 0.0, 1.0),)),
                            BoundaryFunction((BoundaryTerm(1.0, 0, 1.0, 0.0, 0.0),))),)))
    text = datum_to_json(d)
    d2 = datum_from_json(text)
    assert d2 == d
    xs = np.linspace(0, 4, 9)
    assert np.allclose(d2.u(xs), d.u(xs), rtol=1e-15)
    assert np.allclose(d2.f(xs, 0.7), d.f(xs, 0.7), rtol=1e-15)


def test_datum_json_rejects_malformed(tmp_path):
    with pytest.raises(ValueError):
        datum_from_json("{not json")
    with pytest.raises(ValueError):
        datum_from_json(json.dumps({"u": [], "bogus_key": []}))
    with pytest.raises(ValueError):
        datum_from_json(json.dumps({"u": [{"c": 1.0, "m": -3, "a": 1.0, "b": 0.0}]}))
    p = tmp_path / "bad.json"
    p.write_text("[1, 2")
    with pytest.raises(ValueError):
        load_datum(p)


def test_zero_datum():
    z = DatumTriple.zero()
    assert z.u.is_zero and z.g.is_zero and z.f.is_zero
    assert z.u(np.array([1.0]))[0] == 0.0
    assert z.f(1.0, 1.0) == 0.0
