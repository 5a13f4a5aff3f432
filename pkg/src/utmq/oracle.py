"""Classical solution of the quarter-plane heat problem, for cross-checking.

Everything here solves the same initial-boundary value problem as the
contour-integral operator, but by the textbook route: heat kernel, method of
images, a boundary layer for the Dirichlet datum, and a Duhamel integral for
the forcing.  None of it touches the spectral machinery, so agreement between
the two routes validates both.

The oracle is interior-only (x > 0, t > 0): the kernel becomes singular on
the boundary, and boundary/initial traces are verified through limits.  The
two integrals that are singular as written are evaluated after substitutions
that restore smooth integrands:

* boundary layer: eta = x / (2 sqrt(t - tau)) turns the (t - tau)^(-3/2)
  weight into a plain Gaussian integral over eta;
* Duhamel: sigma = sqrt(t - s) removes the outer endpoint singularity, and
  the inner space integral substitutes y = -+x + 2 sigma v so the kernel
  spike at s -> t becomes a fixed Gaussian window in v.

A catalog of closed-form exact solutions is included for tests that want
errors against truth rather than against quadrature.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .datafun import DatumTriple
from .transforms import _leggauss
from .utm_ops import EvalRequest

__all__ = [
    "OracleConfig", "heat_kernel", "classical_solution",
    "initial_term", "boundary_layer", "duhamel_term",
    "residual", "residual_pair", "exact_catalog",
]

_log = logging.getLogger(__name__)

_SQRT_PI = math.sqrt(math.pi)
#: Gaussian window half-width; exp(-12^2) ~ 3e-63 is far below any tolerance
_V_CUT = 12.0


@dataclass(frozen=True)
class OracleConfig:
    """Quadrature tolerance and finite-difference step for the oracle."""
    quad_tol: float = 1e-11
    fd_step: float = 1e-3

    def __post_init__(self):
        if not self.quad_tol > 0.0:
            raise ValueError("quad_tol must be positive")
        if not 1e-4 <= self.fd_step <= 1e-2:
            raise ValueError("fd_step must lie in [1e-4, 1e-2]")


def heat_kernel(x, t):
    """Full-line heat kernel K(x, t) = (4 pi t)^(-1/2) exp(-x^2 / (4t))."""
    if not t > 0.0:
        raise ValueError("heat kernel needs t > 0")
    x = np.asarray(x, dtype=float)
    val = np.exp(-x * x / (4.0 * t)) / math.sqrt(4.0 * math.pi * t)
    return float(val) if val.ndim == 0 else val


def _interior(x, t):
    if not (x > 0.0 and t > 0.0):
        raise ValueError("the classical oracle is interior-only (x > 0, t > 0)")


def initial_term(u, x, t, cfg=OracleConfig()):
    """Method-of-images evolution int_0^inf [K(x-y,t) - K(x+y,t)] u(y) dy."""
    _interior(x, t)
    if u.is_zero:
        return 0.0
    def integrand(y):
        return (heat_kernel(x - y, t) - heat_kernel(x + y, t)) * u(y)
    # u decays at least exponentially; past the kernel peak the integrand is
    # negligible a few widths beyond max(x, 1) + the decay scale of u
    y_cap = max(x, 1.0) + 12.0 * max(math.sqrt(t), 1.0)
    pts = [x] if x < y_cap else None
    val, _ = quad(integrand, 0.0, y_cap, points=pts, limit=400,
                    epsabs=cfg.quad_tol, epsrel=cfg.quad_tol)
    return val


def boundary_layer(g, x, t, cfg=OracleConfig()):
    """Dirichlet layer int_0^t x (4 pi)^(-1/2) (t-tau)^(-3/2) K-phase g(tau) dtau.

    Evaluated as (2/sqrt pi) int_{x/(2 sqrt t)}^inf e^(-eta^2)
    g(t - x^2/(4 eta^2)) deta, which is smooth for every x > 0.
    """
    _interior(x, t)
    if g.is_zero:
        return 0.0
    lo = x / (2.0 * math.sqrt(t))
    def integrand(eta):
        return math.exp(-eta * eta) * g(t - x * x / (4.0 * eta * eta))
    val, _ = quad(integrand, lo, lo + _V_CUT, limit=400,
                    epsabs=cfg.quad_tol, epsrel=cfg.quad_tol)
    return 2.0 / _SQRT_PI * val


def _gauss_window(f_xt, x_shift, sigma, s, lo, hi):
    # int_lo^hi e^(-v^2) f(x_shift + 2 sigma v, s) dv by 96-node
    # Gauss-Legendre; the integrand is entire with a Gaussian window, so the
    # fixed rule resolves it to roundoff on these short intervals
    nodes, weights = _leggauss(96)
    mid, rad = 0.5 * (hi + lo), 0.5 * (hi - lo)
    v = mid + rad * nodes
    vals = np.exp(-v * v) * f_xt(x_shift + 2.0 * sigma * v, s)
    return rad * float(weights @ vals)


def _duhamel_inner(f_xt, x, sigma, s):
    """int_0^inf [K(x-y, sigma^2) - K(x+y, sigma^2)] f(y, s) dy.

    Substituting y = x + 2 sigma v (and y = -x + 2 sigma v for the image)
    gives Gaussian-windowed integrals that stay smooth as sigma -> 0.
    """
    half = x / (2.0 * sigma)
    val = _gauss_window(f_xt, x, sigma, s, -min(half, _V_CUT), _V_CUT)
    if half < _V_CUT:
        val -= _gauss_window(f_xt, -x, sigma, s, half, _V_CUT)
    return val / _SQRT_PI


def duhamel_term(f, x, t, cfg=OracleConfig()):
    """Forcing response int_0^t int_0^inf [K(x-y,t-s) - K(x+y,t-s)] f dy ds."""
    _interior(x, t)
    if f.is_zero:
        return 0.0
    def outer(sigma):
        return 2.0 * sigma * _duhamel_inner(f, x, sigma, t - sigma * sigma)
    val, _ = quad(outer, 0.0, math.sqrt(t), limit=200,
                    epsabs=cfg.quad_tol * 10.0, epsrel=1e-12)
    return val


def classical_solution(datum, x, t, cfg=OracleConfig()):
    """Images + boundary layer + Duhamel at one interior point."""
    _interior(x, t)
    return (initial_term(datum.u, x, t, cfg)
            + boundary_layer(datum.g, x, t, cfg)
            + duhamel_term(datum.f, x, t, cfg))


def residual_pair(field, x, t, cfg=OracleConfig()):
    """(analytic, finite-difference) PDE residual |U_t - U_xx - f| at (x, t).

    The analytic residual differentiates through the contour integrands; the
    finite-difference one re-derives both derivatives from plain solution
    values with central differences of step cfg.fd_step, making it
    independent of the derivative plumbing (floor: O(fd_step^2)).
    """
    h = cfg.fd_step
    if min(x, t) < 2.0 * h:
        raise ValueError("residual point needs margin >= 2 fd_step from the boundary")
    fval = field.datum.f(x, t)
    u_t = field.solution_value(EvalRequest(x, t, l=1))
    u_xx = field.solution_value(EvalRequest(x, t, k=2))
    analytic = abs(u_t - u_xx - fval)

    center = field.solution_value(EvalRequest(x, t))
    fd_t = (field.solution_value(EvalRequest(x, t + h))
            - field.solution_value(EvalRequest(x, t - h))) / (2.0 * h)
    fd_xx = (field.solution_value(EvalRequest(x + h, t)) - 2.0 * center
             + field.solution_value(EvalRequest(x - h, t))) / (h * h)
    fd = abs(fd_t - fd_xx - fval)
    return float(analytic), float(fd)


def residual(field, x, t, cfg=OracleConfig()):
    """Analytic-derivative PDE residual; the finite-difference cross-check
    is logged and also available via residual_pair."""
    analytic, fd = residual_pair(field, x, t, cfg)
    _log.debug("residual at (%g, %g): analytic %.3e, finite-difference %.3e",
               x, t, analytic, fd)
    return analytic


def exact_catalog():
    """Closed-form (datum, solution) pairs for truth-based tests.

    Returns
    -------
    list of (DatumTriple, callable)
        The callable maps (x, t) on the closed quarter plane (minus the
        corner for the incompatible entry) to the exact solution value.

        1. odd Gaussian: u = x exp(-x^2/4), corner-compatible through first
           order, U = (t+1)^(-3/2) x exp(-x^2 / (4(t+1)));
        2. constant boundary: g = 1, incompatible at the corner
           (u(0) = 0 != 1 = g(0)), U = erfc(x / (2 sqrt t));
        3. zero datum, U = 0.
    """
    from scipy.special import erfc
    from .datafun import BoundaryFunction, ForcingFunction, HalfLineFunction

    odd = DatumTriple(HalfLineFunction([(1.0, 1, 0.25, 0.0)]),
                      BoundaryFunction(), ForcingFunction())
    def odd_solution(x, t):
        return (t + 1.0) ** -1.5 * x * math.exp(-x * x / (4.0 * (t + 1.0)))

    const = DatumTriple(HalfLineFunction(),
                        BoundaryFunction([(1.0, 0, 0.0, 0.0, 0.0)]),
                        ForcingFunction())
    def const_solution(x, t):
        if t == 0.0:
            return 0.0 if x > 0.0 else 1.0
        return float(erfc(x / (2.0 * math.sqrt(t))))

    zero = DatumTriple.zero()
    return [(odd, odd_solution), (const, const_solution), (zero, lambda x, t: 0.0)]
