"""Integration contours in the spectral lambda-plane.

The boundary contour `gamma` for the heat dispersion omega(lambda) = lambda^2
is the pair of rays arg(lambda) in {3*pi/4, pi/4}, traversed incoming from
infinity*e^{3i pi/4} to 0 and then outgoing from 0 to infinity*e^{i pi/4}
(the boundary of {Re lambda^2 < 0, Im lambda > 0} with the region on the left).
On these rays Re(lambda^2) = 0 and Im(lambda) = |lambda|/sqrt(2), so
|exp(i lambda x)| = exp(-x |lambda|/sqrt(2)): the certified tail-truncation
bounds used by the quadrature engine come straight from this identity.

Derived contours deform the |lambda| <= sqrt(2) neighbourhood of the origin
away from the pole lambda = 0 that appears in boundary-term expansions:

    gamma_star : gamma tails (|lambda| >= sqrt(2)) + segments [-1+i,-1], [1,1+i]
    gamma0     : gamma tails + top segment [-1+i, 1+i]
    gamma1     : gamma restricted to |lambda| <= sqrt(2)
    gamma2     : gamma restricted to |lambda| >= sqrt(2)
    real_line  : the real axis, -inf to +inf
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass

import numpy as np

__all__ = ["ContourPiece", "Contour", "make_contour", "modulus_bound",
           "CONTOUR_NAMES", "GAMMA_IN", "GAMMA_OUT", "SQRT2"]

SQRT2 = math.sqrt(2.0)
GAMMA_IN = cmath.exp(3j * math.pi / 4)   # incoming ray direction
GAMMA_OUT = cmath.exp(1j * math.pi / 4)  # outgoing ray direction

CONTOUR_NAMES = ("gamma", "gamma_star", "gamma0", "gamma1", "gamma2",
                 "real_line", "custom")

_GAMMA_DIRS = (GAMMA_IN, GAMMA_OUT, -1.0 + 0.0j, 1.0 + 0.0j)


@dataclass(frozen=True)
class ContourPiece:
    """One ray or segment of a contour.

    kind 'ray':     lambda(r) = r * direction, r in [r_lo, inf);
                    sign +1 when traversed outward (r increasing), -1 inward.
    kind 'segment': lambda(s) = start + s * (end - start), s in [0, 1].
    """
    kind: str
    direction: complex = 0j   # rays
    r_lo: float = 0.0
    sign: int = 1
    start: complex = 0j       # segments
    end: complex = 0j

    def __post_init__(self):
        if self.kind == "ray":
            if abs(abs(self.direction) - 1.0) > 1e-12:
                raise ValueError("ray direction must be a unit complex number")
            if self.r_lo < 0:
                raise ValueError("ray r_lo must be >= 0")
            if self.sign not in (-1, 1):
                raise ValueError("ray sign must be +1 (outward) or -1 (inward)")
        elif self.kind == "segment":
            if self.start == self.end:
                raise ValueError("degenerate segment")
        else:
            raise ValueError(f"unknown piece kind {self.kind!r}")

    def points(self, s):
        """Map parameter array to lambda values (r for rays, [0,1] for segments)."""
        s = np.asarray(s, dtype=float)
        if self.kind == "ray":
            return s * self.direction
        return self.start + s * (self.end - self.start)

    def jacobian(self):
        """dlambda/dparameter, a constant for both piece kinds."""
        if self.kind == "ray":
            return self.sign * self.direction
        return self.end - self.start

    def to_json(self):
        if self.kind == "ray":
            return {"kind": "ray",
                    "direction": [self.direction.real, self.direction.imag],
                    "r_lo": self.r_lo, "sign": self.sign}
        return {"kind": "segment",
                "start": [self.start.real, self.start.imag],
                "end": [self.end.real, self.end.imag]}


@dataclass(frozen=True)
class Contour:
    name: str
    pieces: tuple

    def __post_init__(self):
        if self.name not in CONTOUR_NAMES:
            raise ValueError(f"unknown contour name {self.name!r}")
        for p in self.pieces:
            if p.kind == "ray" and self.name != "custom":
                if not any(abs(p.direction - d) < 1e-12 for d in _GAMMA_DIRS):
                    raise ValueError(
                        "named contours only use gamma-ray or real directions")

    @property
    def rays(self):
        return tuple(p for p in self.pieces if p.kind == "ray")

    @property
    def segments(self):
        return tuple(p for p in self.pieces if p.kind == "segment")

    def to_json(self):
        return {"name": self.name, "pieces": [p.to_json() for p in self.pieces]}

    def dump_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2)
            fh.write("\n")


def _ray(direction, r_lo, sign):
    return ContourPiece("ray", direction=direction, r_lo=r_lo, sign=sign)


def _seg(start, end):
    return ContourPiece("segment", start=start, end=end)


def make_contour(name):
    """Build a named contour; traversal order matches the analysis.

    Notes
    -----
    The tails of gamma_star / gamma0 / gamma2 start at radius sqrt(2), so the
    points -1+i and 1+i are shared with the connecting segments; gamma_star
    intentionally leaves the gap (-1, 1) on the real axis to the companion
    real-line piece of the boundary-term expansion.
    """
    if name == "gamma":
        pieces = (_ray(GAMMA_IN, 0.0, -1), _ray(GAMMA_OUT, 0.0, +1))
    elif name == "gamma_star":
        pieces = (_ray(GAMMA_IN, SQRT2, -1),
                  _seg(-1 + 1j, -1 + 0j),
                  _seg(1 + 0j, 1 + 1j),
                  _ray(GAMMA_OUT, SQRT2, +1))
    elif name == "gamma0":
        pieces = (_ray(GAMMA_IN, SQRT2, -1),
                  _seg(-1 + 1j, 1 + 1j),
                  _ray(GAMMA_OUT, SQRT2, +1))
    elif name == "gamma1":
        pieces = (_seg(-1 + 1j, 0j), _seg(0j, 1 + 1j))
    elif name == "gamma2":
        pieces = (_ray(GAMMA_IN, SQRT2, -1), _ray(GAMMA_OUT, SQRT2, +1))
    elif name == "real_line":
        pieces = (_ray(-1.0 + 0j, 0.0, -1), _ray(1.0 + 0j, 0.0, +1))
    else:
        raise ValueError(f"unknown contour name {name!r}")
    return Contour(name, pieces)


def real_tails(r_lo=1.0):
    """The pair (-inf, -r_lo] + [r_lo, inf) on the real axis."""
    return Contour("custom", (_ray(-1.0 + 0j, r_lo, -1), _ray(1.0 + 0j, r_lo, +1)))


def segment_contour(start, end):
    return Contour("custom", (_seg(start, end),))


def modulus_bound(lam, x, t):
    """|exp(i lambda x - lambda^2 t)| = exp(-x Im lambda - t Re lambda^2)."""
    lam = np.asarray(lam, dtype=complex)
    return np.exp(-x * lam.imag - t * (lam * lam).real)
