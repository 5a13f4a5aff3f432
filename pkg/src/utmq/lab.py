"""Experiments on the quarter-plane heat solution operator.

Each experiment turns one analytic property of the solution operator into a
finite, reportable measurement:

* ``compatibility_class``: corner matching of a datum triple.  The zeroth
  condition is u(0) = g(0); the first is g'(0) = u''(0) + f(0,0), i.e. the
  boundary function initially moves at the rate the heat equation dictates.
* ``continuity_experiment``: strip seminorms of solutions for data scaled
  by 1/s.  Linearity of the operator and absolute homogeneity of the
  seminorms force an exact 1/s law on matched grids, so the measured ratio
  is a sharp probe of numerical linearity.  A Gaussian width sequence
  (not a pure rescaling) is run alongside and must decay monotonically.
* ``corner_probe``: Richardson-extrapolated limits of the solution along
  the two axes into the corner.  The limits are g(0+) and u(0+), so their
  difference reproduces the compatibility defect g(0) - u(0) whether or
  not the datum is compatible.
* ``smoothness_probe``: values of the solution and its low-order
  derivatives along parabolic paths (x, r x^2) refined into the corner
  ((x, t) -> (x/2, t/4) per step).  Compatible data give refinement-Cauchy
  sequences with path-independent limits; incompatible data are detected
  by path-dependent limits (each parabola sees a different value).
* ``causality_test``: the solution at time t_obs must not react to datum
  modifications supported after t_obs + delta.  The closed data family has
  no compactly supported member, so the modification t^m e^{-m t/t_peak}
  is used and its small early mass (sup before t_obs) is reported.

Reports carry raw sequences alongside verdicts and serialize to JSON.
"""

import math
from dataclasses import dataclass

import numpy as np

from .datafun import (HalfLineFunction, BoundaryFunction, ForcingFunction,
                      DatumTriple, deriv_t, deriv_x)
from .quad import ToleranceNotMet
from .spaces import GridSpec, strip_seminorm
from .utm_ops import EvalRequest, SolutionField

__all__ = [
    "CompatClass", "ContinuityReport", "CornerReport", "SmoothnessEntry",
    "SmoothnessReport", "compatibility_class", "continuity_experiment",
    "corner_probe", "smoothness_probe", "causality_test",
    "late_support_addition", "EXPERIMENT_GRID", "EXPERIMENT_QUAD_TOL",
]

#: defaults for experiment-grade field evaluations: every seminorm grid node
#: is a contour evaluation, so experiments run coarse stabilized grids and a
#: looser quadrature tolerance than single-point solves
EXPERIMENT_GRID = GridSpec(x_per_decade=3, t_nodes=4, x_cap=6.0,
                           stability_tol=1e-3)
EXPERIMENT_QUAD_TOL = 1e-8


# ---------------------------------------------------------------------------
# compatibility classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CompatClass:
    """Corner-compatibility classification of a datum triple.

    ``level`` is "D" (no corner condition), "D0" (u(0) = g(0)), or "D1"
    (additionally g'(0) = u''(0) + f(0,0)); the levels are nested.
    ``checks`` lists (condition, residual) pairs for both conditions.
    """
    level: str
    checks: tuple

    def to_json(self):
        return {"level": self.level,
                "checks": [[name, res] for name, res in self.checks]}


def compatibility_class(datum, tol=1e-12):
    """Classify a datum by its corner conditions, with exact derivatives.

    Parameters
    ----------
    datum : DatumTriple
    tol : float
        Residuals at or below this threshold count as satisfied.
    """
    u, g, f = datum.u, datum.g, datum.f
    r0 = abs(float(u(0.0)) - float(g(0.0)))
    r1 = abs(float(deriv_t(g, 1)(0.0)) - float(deriv_x(u, 2)(0.0))
             - float(f(0.0, 0.0)))
    if r0 <= tol and r1 <= tol:
        level = "D1"
    elif r0 <= tol:
        level = "D0"
    else:
        level = "D"
    return CompatClass(level, (("u(0) = g(0)", r0),
                               ("g'(0) = u''(0) + f(0,0)", r1)))


# ---------------------------------------------------------------------------
# continuity under data scaling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContinuityReport:
    """Seminorm decay of solutions under data scaling.

    ``seminorm_values[n][i]`` is the level-n strip seminorm of the solution
    for the datum scaled by 1/scales[i]; ``ratios[n]`` are successive value
    ratios (the exact law is scales[i]/scales[i+1]).  ``width_values`` are
    level-1 seminorms for the Gaussian width sequence
    u_s(x) = exp(-x^2) exp(-x^2/s)/s, which decays without being a pure
    rescaling.  ``converged``/``width_converged`` carry the grid stability
    flags — an unstable sup is reported, never silently accepted.
    """
    scales: tuple
    seminorm_values: dict
    ratios: dict
    converged: dict
    width_values: tuple
    width_converged: tuple

    def to_json(self):
        return {
            "scales": list(self.scales),
            "seminorm_values": {str(n): list(v)
                                for n, v in self.seminorm_values.items()},
            "ratios": {str(n): list(v) for n, v in self.ratios.items()},
            "converged": {str(n): list(v)
                          for n, v in self.converged.items()},
            "width_values": list(self.width_values),
            "width_converged": list(self.width_converged),
        }


def continuity_experiment(datum, scales, n_list, *, grid=EXPERIMENT_GRID,
                          quad_tol=EXPERIMENT_QUAD_TOL):
    """Measure strip seminorms of solutions for 1/s-scaled data.

    Parameters
    ----------
    datum : DatumTriple
    scales : increasing positive reals; the datum is scaled by 1/s.
    n_list : strip seminorm levels to measure (each in 1..4).
    """
    scales = [float(s) for s in scales]
    if not scales or min(scales) <= 0.0:
        raise ValueError("scales must be positive")
    if any(b <= a for a, b in zip(scales, scales[1:])):
        raise ValueError("scales must be strictly increasing")

    values, ratios, conv = {}, {}, {}
    for n in n_list:
        reps = [strip_seminorm(SolutionField(datum.scaled(1.0 / s),
                                             quad_tol=quad_tol), n, grid=grid)
                for s in scales]
        values[n] = tuple(r.value for r in reps)
        conv[n] = tuple(r.converged for r in reps)
        ratios[n] = tuple(b / a if a != 0.0 else 0.0
                          for a, b in zip(values[n], values[n][1:]))

    width = []
    for s in scales:
        u_s = HalfLineFunction([(1.0 / s, 0, 1.0 + 1.0 / s, 0.0)])
        fld = SolutionField(DatumTriple(u_s, BoundaryFunction(),
                                        ForcingFunction()),
                            quad_tol=quad_tol)
        width.append(strip_seminorm(fld, 1, grid=grid))
    return ContinuityReport(tuple(scales), values, ratios, conv,
                            tuple(r.value for r in width),
                            tuple(r.converged for r in width))


# ---------------------------------------------------------------------------
# corner limits
# ---------------------------------------------------------------------------

def _richardson(vals):
    # Neville extrapolation to h = 0 for samples at h, h/2, h/4, ...
    row = list(vals)
    for j in range(1, len(vals)):
        fac = 2.0 ** j
        row = [(fac * b - a) / (fac - 1.0) for a, b in zip(row, row[1:])]
    return row[0]


@dataclass(frozen=True)
class CornerReport:
    """Axis limits of the solution into the corner.

    ``time_axis_limit`` extrapolates U(0, t) as t -> 0+ (equals g(0+)),
    ``space_axis_limit`` extrapolates U(x, 0) as x -> 0+ (equals u(0+)),
    and ``mismatch`` is their difference — the compatibility defect.
    """
    time_axis_limit: float
    space_axis_limit: float
    mismatch: float
    time_values: tuple
    space_values: tuple

    def to_json(self):
        return {"time_axis_limit": self.time_axis_limit,
                "space_axis_limit": self.space_axis_limit,
                "mismatch": self.mismatch,
                "time_values": list(self.time_values),
                "space_values": list(self.space_values)}


def corner_probe(datum, *, h0=0.4, levels=6, quad_tol=1e-10):
    """Extrapolated limits of the solution along both axes into the corner."""
    fld = SolutionField(datum, quad_tol=quad_tol)
    hs = [h0 * 2.0 ** -j for j in range(levels)]
    tv = [fld.solution_value(EvalRequest(0.0, h)).real for h in hs]
    sv = [fld.solution_value(EvalRequest(h, 0.0)).real for h in hs]
    t_lim, s_lim = _richardson(tv), _richardson(sv)
    return CornerReport(t_lim, s_lim, t_lim - s_lim, tuple(tv), tuple(sv))


# ---------------------------------------------------------------------------
# smoothness near the corner
# ---------------------------------------------------------------------------

#: derivative budget per claimed class: solutions of D0 data have continuous
#: value and x-slope up to the corner; D1 data extend this through d_t,
#: d_x^2 and d_x^3
_D0_DERIVS = (("phi", 0, 0), ("dx_phi", 1, 0))
_D1_DERIVS = (("dt_phi", 0, 1), ("dxx_phi", 2, 0), ("dxxx_phi", 3, 0))


@dataclass(frozen=True)
class SmoothnessEntry:
    """Refinement record for one derivative of the solution.

    ``path_values[p][j]`` is the derivative at (x0 2^-j, r_p (x0 2^-j)^2);
    ``path_limits`` extrapolate each path.  ``cauchy`` requires successive
    increments to decay by the configured factor (or sit below the noise
    floor) on every path; ``single_valued`` additionally requires the path
    limits to agree, which fails for incompatible data because each
    parabola carries a different limit into the corner.

    A path may end early (``path_levels[p] < levels``) when the quadrature
    engine certifies that the next point is unreachable in double
    precision; that happens only when the derivative grows so fast toward
    the corner that its integral representation is conditioning-limited,
    so the accessible prefix already carries the divergence.
    """
    name: str
    level: str
    k: int
    l: int
    path_values: tuple
    path_limits: tuple
    path_levels: tuple
    bounded: bool
    cauchy: bool
    spread: float
    single_valued: bool

    def to_json(self):
        return {"name": self.name, "level": self.level,
                "k": self.k, "l": self.l,
                "path_values": [list(v) for v in self.path_values],
                "path_limits": list(self.path_limits),
                "path_levels": list(self.path_levels),
                "bounded": self.bounded, "cauchy": self.cauchy,
                "spread": self.spread, "single_valued": self.single_valued}


@dataclass(frozen=True)
class SmoothnessReport:
    """Corner-refinement verdicts for the derivative budget of each class."""
    datum_level: str
    path_ratios: tuple
    x0: float
    entries: tuple
    d0_ok: bool
    d1_ok: bool

    def entry(self, name):
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_json(self):
        return {"datum_level": self.datum_level,
                "path_ratios": list(self.path_ratios), "x0": self.x0,
                "entries": [e.to_json() for e in self.entries],
                "d0_ok": self.d0_ok, "d1_ok": self.d1_ok}


def smoothness_probe(datum, *, x0=0.5, levels=8, path_ratios=(0.25, 1.0, 4.0),
                     decay=0.6, floor=1e-7, tail_pairs=3, spread_tol=1e-4,
                     quad_tol=2e-8):
    """Refine the solution's derivatives into the corner along parabolas.

    Each refinement step halves x and quarters t, the natural parabolic
    scaling of the heat operator.  Multiple path ratios r (t = r x^2) are
    probed because a refinement sequence can be constant along one parabola
    yet have no corner limit; the spread of per-path limits separates the
    two cases.  The per-halving decay factor is enforced on the final
    ``tail_pairs`` increment pairs: the first steps start at unit scale
    where the sequence is still pre-asymptotic.

    The quadrature tolerance is set by conditioning, not appetite: the
    third-derivative integrands at the deepest corner points carry an L1
    mass of order 1/t ~ 1e5, so double precision cannot deliver absolute
    errors much below 1e-9 there.  2e-8 clears that floor while keeping
    quadrature noise two decades under the Cauchy ``floor``.
    """
    fld = SolutionField(datum, quad_tol=quad_tol)
    datum_level = compatibility_class(datum, tol=1e-10).level
    entries = []
    for name, k, l in _D0_DERIVS + _D1_DERIVS:
        level = "D0" if (name, k, l) in _D0_DERIVS else "D1"
        path_values, path_limits, path_levels = [], [], []
        bounded = cauchy = True
        for r in path_ratios:
            vals = []
            for j in range(levels):
                x = x0 * 2.0 ** -j
                try:
                    vals.append(fld.solution_value(
                        EvalRequest(x, r * x * x, k=k, l=l)).real)
                except ToleranceNotMet:
                    break       # conditioning boundary; judge the prefix
            path_values.append(tuple(vals))
            path_levels.append(len(vals))
            if len(vals) < tail_pairs + 2:
                # too little of the sequence is reachable to call it
                # convergent; only diverging derivatives end up here
                path_limits.append(vals[-1] if vals else math.nan)
                bounded = cauchy = False
                continue
            path_limits.append(_richardson(vals))
            incs = [abs(b - a) for a, b in zip(vals, vals[1:])]
            pairs = list(zip(incs, incs[1:]))[-tail_pairs:]
            cauchy &= all(b <= max(decay * a, floor) for a, b in pairs)
            half = max(2, len(vals) // 2)
            scale = max(max(abs(v) for v in vals[:half]), 1e3 * floor)
            bounded &= abs(vals[-1]) <= 2.0 * scale
        spread = max(path_limits) - min(path_limits)
        single = bool(cauchy and spread <= spread_tol)
        entries.append(SmoothnessEntry(name, level, k, l,
                                       tuple(path_values),
                                       tuple(path_limits),
                                       tuple(path_levels), bool(bounded),
                                       bool(cauchy), spread, single))
    d0_ok = all(e.bounded and e.cauchy and e.single_valued
                for e in entries if e.level == "D0")
    d1_ok = d0_ok and all(e.bounded and e.cauchy and e.single_valued
                          for e in entries if e.level == "D1")
    return SmoothnessReport(datum_level, tuple(path_ratios), x0,
                            tuple(entries), d0_ok, d1_ok)


# ---------------------------------------------------------------------------
# causality
# ---------------------------------------------------------------------------

def late_support_addition(t_obs, delta, *, kind="boundary", order=48,
                          amplitude=1.0):
    """Datum addition negligible before t_obs, active after t_obs + delta.

    The temporal factor is t^order exp(-order t / t_peak), normalized to
    peak value `amplitude` at t_peak = max(t_obs + delta, 4 t_obs).  The
    family contains no compactly supported function, so the addition is
    late-supported only up to its early mass sup_{[0, t_obs]} |factor|,
    which is returned for propagation into tolerances.

    Returns
    -------
    (DatumTriple, float)
        The addition (zero initial part) and its early mass.
    """
    t_obs, delta = float(t_obs), float(delta)
    if t_obs <= 0.0 or delta <= 0.0:
        raise ValueError("need t_obs > 0 and delta > 0")
    if amplitude == 0.0:
        return DatumTriple.zero(), 0.0
    t_peak = max(t_obs + delta, 4.0 * t_obs)
    rho = t_obs / t_peak
    early_mass = abs(amplitude) * math.exp(
        order * (math.log(rho) + 1.0 - rho))
    log_c = math.log(abs(amplitude)) + order * (1.0 - math.log(t_peak))
    if log_c > 700.0:
        raise ValueError("modification window too narrow for the "
                         "poly-exponential family")
    c = math.copysign(math.exp(log_c), amplitude)
    g_late = BoundaryFunction([(c, order, order / t_peak, 0.0, 0.0)])
    if kind == "boundary":
        addition = DatumTriple(HalfLineFunction(), g_late, ForcingFunction())
    elif kind == "forcing":
        profile = HalfLineFunction([(1.0, 0, 0.0, 1.0)])
        addition = DatumTriple(HalfLineFunction(), BoundaryFunction(),
                               ForcingFunction([(profile, g_late)]))
    else:
        raise ValueError("kind must be 'boundary' or 'forcing'")
    return addition, early_mass


def causality_test(datum, t_obs, delta, *, kind="boundary", order=48,
                   amplitude=1.0, x_grid=None, quad_tol=1e-10):
    """Largest change of the solution at t_obs under a late modification.

    Builds a late-support addition via `late_support_addition`, solves for
    both data, and returns sup over the x-grid of the pointwise difference
    at time t_obs.  For a causal operator this is of the order of the
    addition's early mass.
    """
    addition, _ = late_support_addition(t_obs, delta, kind=kind, order=order,
                                        amplitude=amplitude)
    base = SolutionField(datum, quad_tol=quad_tol)
    mod = SolutionField(datum + addition, quad_tol=quad_tol)
    if x_grid is None:
        x_grid = np.linspace(0.0, 4.0, 10)
    worst = 0.0
    for x in x_grid:
        req = EvalRequest(float(x), float(t_obs))
        worst = max(worst, abs(mod.solution_value(req)
                               - base.solution_value(req)))
    return worst
