"""Closed parametric data families for the quarter-plane heat problem.

Initial data live on the half-line x >= 0, boundary data on t >= 0, and
forcing on the quarter plane.  Every family is a finite sum of elementary
terms and is closed under differentiation with *exact* coefficient
arithmetic, so derivative tables needed by the contour representations
(boundary values u^(j)(0), g^(j)(0), g^(j)(t), ...) carry no numerical
differentiation error:

    half-line terms   c * x^m * exp(-a x^2 - b x),   a > 0 or b > 0
    boundary terms    c * t^m * exp(-b t) * cos(phi t + phase)
    forcing           finite sum of spatial(x) * temporal(t) products

Terms with matching shape parameters are merged on construction, which keeps
repeated differentiation linear in the derivative order instead of exponential.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "HalfLineTerm", "HalfLineFunction",
    "BoundaryTerm", "BoundaryFunction",
    "ForcingFunction", "DatumTriple",
    "deriv_x", "deriv_t", "evaluate",
    "datum_from_json", "datum_to_json", "load_datum", "dump_datum",
]

# Powers at or above this use exp/log evaluation to dodge overflow in x**m
# for the large-m late-support bumps used by the causality experiments.
_LOG_EVAL_POWER = 30


def _as_float_array(x, name="x"):
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0):
        raise ValueError(f"{name} must be >= 0 (got a negative coordinate)")
    return arr


@dataclass(frozen=True)
class HalfLineTerm:
    """One term c * x**m * exp(-a*x**2 - b*x) of a half-line datum."""
    c: float
    m: int
    a: float
    b: float

    def __post_init__(self):
        if self.m < 0 or self.m != int(self.m):
            raise ValueError("power m must be a nonnegative integer")
        if self.a < 0 or self.b < 0:
            raise ValueError("decay rates a, b must be nonnegative")
        if self.a == 0 and self.b == 0 and self.c != 0:
            raise ValueError("need a > 0 or b > 0 for half-line decay")


@dataclass(frozen=True)
class BoundaryTerm:
    """One term c * t**m * exp(-b*t) * cos(phi*t + phase) of a boundary datum."""
    c: float
    m: int
    b: float
    phi: float
    phase: float

    def __post_init__(self):
        if self.m < 0 or self.m != int(self.m):
            raise ValueError("power m must be a nonnegative integer")
        if self.b < 0:
            raise ValueError("decay rate b must be nonnegative")


def _eval_poly_exp(c, m, x, rate_quad, rate_lin):
    # c * x^m * exp(-rate_quad x^2 - rate_lin x), overflow-safe for large m.
    if c == 0.0:
        return np.zeros_like(x)
    if m < _LOG_EVAL_POWER:
        return c * x ** m * np.exp(-rate_quad * x * x - rate_lin * x)
    out = np.zeros_like(x)
    pos = x > 0
    xp = x[pos]
    logmag = math.log(abs(c)) + m * np.log(xp) - rate_quad * xp * xp - rate_lin * xp
    out[pos] = math.copysign(1.0, c) * np.exp(logmag)
    return out


class HalfLineFunction:
    """Finite sum of c*x^m*exp(-a x^2 - b x) terms on x >= 0.

    Parameters
    ----------
    terms : iterable of HalfLineTerm (or (c, m, a, b) tuples)

    Closed under d/dx; `derivative()` returns a new instance with exact
    coefficients.  Terms sharing (m, a, b) are merged, zero terms dropped.
    """

    def __init__(self, terms=()):
        merged = {}
        for t in terms:
            if not isinstance(t, HalfLineTerm):
                t = HalfLineTerm(*t)
            key = (t.m, t.a, t.b)
            merged[key] = merged.get(key, 0.0) + t.c
        self.terms = tuple(
            HalfLineTerm(c, m, a, b)
            for (m, a, b), c in sorted(merged.items())
            if c != 0.0
        )

    # -- basic algebra ------------------------------------------------------

    def __call__(self, x):
        xs = _as_float_array(x)
        out = np.zeros_like(xs, dtype=float)
        for t in self.terms:
            out += _eval_poly_exp(t.c, t.m, xs, t.a, t.b)
        return out if np.ndim(x) else float(out)

    def derivative(self):
        new = []
        for t in self.terms:
            if t.m >= 1:
                new.append(HalfLineTerm(t.c * t.m, t.m - 1, t.a, t.b))
            if t.b != 0.0:
                new.append(HalfLineTerm(-t.c * t.b, t.m, t.a, t.b))
            if t.a != 0.0:
                new.append(HalfLineTerm(-2.0 * t.a * t.c, t.m + 1, t.a, t.b))
        return HalfLineFunction(new)

    def deriv(self, k):
        return deriv_x(self, k)

    def boundary_value(self, j=0):
        """u^(j)(0), exact: only the m == 0 terms of the j-th derivative."""
        return sum(t.c for t in self.deriv(j).terms if t.m == 0)

    def scaled(self, factor):
        return HalfLineFunction(
            HalfLineTerm(factor * t.c, t.m, t.a, t.b) for t in self.terms)

    def __add__(self, other):
        return HalfLineFunction(self.terms + other.terms)

    def __sub__(self, other):
        return self + other.scaled(-1.0)

    def multiply_by_x(self):
        # x * u stays in the family; used by the moment (ix)^L identity test.
        return HalfLineFunction(
            HalfLineTerm(t.c, t.m + 1, t.a, t.b) for t in self.terms)

    # -- structure queries used by the transform/operator layers ------------

    @property
    def is_zero(self):
        return not self.terms

    @property
    def has_exponential_terms(self):
        return any(t.a == 0.0 for t in self.terms)

    @property
    def max_power(self):
        return max((t.m for t in self.terms), default=0)

    def sup_bound(self):
        """Crude upper bound for sup |u| on x >= 0 (grid-based)."""
        if self.is_zero:
            return 0.0
        xs = np.concatenate(([0.0], np.geomspace(1e-3, 80.0, 400)))
        return float(np.max(np.abs(self(xs))))

    def _key(self):
        return tuple((t.c, t.m, t.a, t.b) for t in self.terms)

    def __eq__(self, other):
        return isinstance(other, HalfLineFunction) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"HalfLineFunction({list(self.terms)!r})"


class BoundaryFunction:
    """Finite sum of c*t^m*exp(-b t)*cos(phi t + phase) terms on t >= 0."""

    def __init__(self, terms=()):
        merged = {}
        for t in terms:
            if not isinstance(t, BoundaryTerm):
                t = BoundaryTerm(*t)
            c, phase = t.c, t.phase
            if t.phi == 0.0:
                # cos(phase) is a constant factor; fold it into c.
                c, phase = c * math.cos(phase), 0.0
                if c == 0.0:
                    continue
            else:
                # normalize phase to [0, pi) with a sign flip, so the pi/2
                # shifts produced by differentiation merge deterministically
                phase = math.fmod(phase, 2.0 * math.pi)
                if phase < 0.0:
                    phase += 2.0 * math.pi
                if phase >= math.pi:
                    phase -= math.pi
                    c = -c
            key = (t.m, t.b, t.phi, phase)
            merged[key] = merged.get(key, 0.0) + c
        self.terms = tuple(
            BoundaryTerm(c, m, b, phi, phase)
            for (m, b, phi, phase), c in sorted(merged.items())
            if c != 0.0
        )

    def __call__(self, t):
        ts = _as_float_array(t, "t")
        out = np.zeros_like(ts, dtype=float)
        for tm in self.terms:
            osc = np.cos(tm.phi * ts + tm.phase) if tm.phi or tm.phase else 1.0
            out += _eval_poly_exp(tm.c, tm.m, ts, 0.0, tm.b) * osc
        return out if np.ndim(t) else float(out)

    def derivative(self):
        new = []
        for t in self.terms:
            if t.m >= 1:
                new.append(BoundaryTerm(t.c * t.m, t.m - 1, t.b, t.phi, t.phase))
            if t.b != 0.0:
                new.append(BoundaryTerm(-t.c * t.b, t.m, t.b, t.phi, t.phase))
            if t.phi != 0.0:
                # d/dt cos(phi t + ph) = -phi sin(.) = phi cos(. + pi/2)
                new.append(BoundaryTerm(t.c * t.phi, t.m, t.b, t.phi,
                                        t.phase + 0.5 * math.pi))
        return BoundaryFunction(new)

    def deriv(self, k):
        return deriv_t(self, k)

    def value(self, t, j=0):
        """g^(j)(t), exact via the derivative family."""
        return self.deriv(j)(t)

    def scaled(self, factor):
        return BoundaryFunction(
            BoundaryTerm(factor * t.c, t.m, t.b, t.phi, t.phase)
            for t in self.terms)

    def __add__(self, other):
        return BoundaryFunction(self.terms + other.terms)

    def __sub__(self, other):
        return self + other.scaled(-1.0)

    @property
    def is_zero(self):
        return not self.terms

    def sup_bound(self, t_max=8.0):
        if self.is_zero:
            return 0.0
        ts = np.linspace(0.0, t_max, 800)
        return float(np.max(np.abs(self(ts))))

    def _key(self):
        return tuple((t.c, t.m, t.b, t.phi, t.phase) for t in self.terms)

    def __eq__(self, other):
        return isinstance(other, BoundaryFunction) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"BoundaryFunction({list(self.terms)!r})"


class ForcingFunction:
    """Separable forcing f(x,t) = sum_i spatial_i(x) * temporal_i(t)."""

    def __init__(self, terms=()):
        pairs = []
        for spatial, temporal in terms:
            if not isinstance(spatial, HalfLineFunction):
                spatial = HalfLineFunction(spatial)
            if not isinstance(temporal, BoundaryFunction):
                temporal = BoundaryFunction(temporal)
            if not spatial.is_zero and not temporal.is_zero:
                pairs.append((spatial, temporal))
        self.terms = tuple(pairs)

    def __call__(self, x, t):
        xs = _as_float_array(x)
        ts = _as_float_array(t, "t")
        out = np.zeros(np.broadcast(xs, ts).shape, dtype=float)
        for spatial, temporal in self.terms:
            out += spatial(xs) * temporal(ts)
        if np.ndim(x) == 0 and np.ndim(t) == 0:
            return float(out)
        return out

    def dx(self):
        return ForcingFunction(
            (sp.derivative(), tp) for sp, tp in self.terms)

    def dt(self):
        return ForcingFunction(
            (sp, tp.derivative()) for sp, tp in self.terms)

    def deriv(self, kx=0, kt=0):
        f = self
        for _ in range(kx):
            f = f.dx()
        for _ in range(kt):
            f = f.dt()
        return f

    def scaled(self, factor):
        return ForcingFunction(
            (sp.scaled(factor), tp) for sp, tp in self.terms)

    def __add__(self, other):
        return ForcingFunction(self.terms + other.terms)

    @property
    def is_zero(self):
        return not self.terms

    def _key(self):
        return tuple((sp._key(), tp._key()) for sp, tp in self.terms)

    def __eq__(self, other):
        return isinstance(other, ForcingFunction) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"ForcingFunction({list(self.terms)!r})"


@dataclass(frozen=True)
class DatumTriple:
    """Problem datum (u, g, f): initial, boundary, forcing."""
    u: HalfLineFunction
    g: BoundaryFunction
    f: ForcingFunction

    @staticmethod
    def zero():
        return DatumTriple(HalfLineFunction(), BoundaryFunction(), ForcingFunction())

    def scaled(self, factor):
        return DatumTriple(self.u.scaled(factor), self.g.scaled(factor),
                           self.f.scaled(factor))

    def __add__(self, other):
        return DatumTriple(self.u + other.u, self.g + other.g, self.f + other.f)


# -- derivative entry points (cached: families are immutable) ----------------

@lru_cache(maxsize=4096)
def _deriv_x_cached(u, k):
    for _ in range(k):
        u = u.derivative()
    return u


@lru_cache(maxsize=4096)
def _deriv_t_cached(g, k):
    for _ in range(k):
        g = g.derivative()
    return g


def deriv_x(u, k):
    """k-th x-derivative of a half-line or forcing family, exact."""
    if k < 0 or k != int(k):
        raise ValueError("derivative order must be a nonnegative integer")
    if isinstance(u, ForcingFunction):
        return u.deriv(kx=k)
    return _deriv_x_cached(u, int(k))


def deriv_t(g, k):
    """k-th t-derivative of a boundary or forcing family, exact."""
    if k < 0 or k != int(k):
        raise ValueError("derivative order must be a nonnegative integer")
    if isinstance(g, ForcingFunction):
        return g.deriv(kt=k)
    return _deriv_t_cached(g, int(k))


def evaluate(fam, point):
    """Evaluate a family at a point (x, t pair for forcing)."""
    if isinstance(fam, ForcingFunction):
        x, t = point
        return fam(x, t)
    return fam(point)


# -- JSON datum spec ----------------------------------------------------------
#
# {"u": [{"c":..,"m":..,"a":..,"b":..}, ...],
#  "g": [{"c":..,"m":..,"b":..,"phi":..,"phase":..}, ...],
#  "f": [{"spatial": [u-terms], "temporal": [g-terms]}, ...]}

def _u_terms_from(spec):
    return [HalfLineTerm(float(d.get("c", 0.0)), int(d.get("m", 0)),
                         float(d.get("a", 0.0)), float(d.get("b", 0.0)))
            for d in spec]


def _g_terms_from(spec):
    return [BoundaryTerm(float(d.get("c", 0.0)), int(d.get("m", 0)),
                         float(d.get("b", 0.0)), float(d.get("phi", 0.0)),
                         float(d.get("phase", 0.0)))
            for d in spec]


def datum_from_json(obj):
    """Build a DatumTriple from a parsed datum-spec dict."""
    if not isinstance(obj, dict):
        raise ValueError("datum spec must be a JSON object")
    unknown = set(obj) - {"u", "g", "f"}
    if unknown:
        raise ValueError(f"unknown datum spec keys: {sorted(unknown)}")
    u = HalfLineFunction(_u_terms_from(obj.get("u", [])))
    g = BoundaryFunction(_g_terms_from(obj.get("g", [])))
    f = ForcingFunction(
        (_u_terms_from(d.get("spatial", [])), _g_terms_from(d.get("temporal", [])))
        for d in obj.get("f", []))
    return DatumTriple(u, g, f)


def datum_to_json(datum):
    return {
        "u": [{"c": t.c, "m": t.m, "a": t.a, "b": t.b} for t in datum.u.terms],
        "g": [{"c": t.c, "m": t.m, "b": t.b, "phi": t.phi, "phase": t.phase}
              for t in datum.g.terms],
        "f": [{"spatial": [{"c": t.c, "m": t.m, "a": t.a, "b": t.b}
                           for t in sp.terms],
               "temporal": [{"c": t.c, "m": t.m, "b": t.b, "phi": t.phi,
                             "phase": t.phase} for t in tp.terms]}
              for sp, tp in datum.f.terms],
    }


def load_datum(path):
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed datum spec {path}: {exc}") from exc
    return datum_from_json(obj)


def dump_datum(datum, path):
    with open(path, "w") as fh:
        json.dump(datum_to_json(datum), fh, indent=2, sort_keys=True)
        fh.write("\n")
