"""Resonant tori: triple enumeration, period inversion, energy atlas, and
the topology of energy surfaces and momentum-map fibers.

A periodic solution of the coupled pair of oscillators with common period
tau = 2 pi p corresponds to an integer triple (p, q, n) with gcd(p, q, n) = 1
and p > q/(2 sqrt(2)), p > n/(2 sqrt(2)), realized on partial energies
satisfying q T(h3) = n T(h4) = 2 pi p.  Because T is strictly increasing
from pi/sqrt(2) to infinity on (-2, 0), each admissible ratio inverts to a
unique energy; the atlas collects the resulting total energies
h* = h3 + h4 in (-4, 0).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, NonexistentLevelError, PrecisionWarning
from .rootfind import bracketed_root
from .solution import period_T

TWO_SQRT2 = 2.0 * math.sqrt(2.0)
PERIOD_ROOT_TOL = 1e-10  # |T(h) - target| at the accepted root
DEDUP_TOL = 1e-12  # h* closer than this collapse to one surface
BOUNDARY_TOL = 1e-12

SURFACE_LABELS = (
    "S3-foliated-by-tori",  # -4 < h < -2
    "S3-minus-4-points",  # h = -2
    "S3-with-4-disc-boundaries",  # -2 < h < 0
    "two-cylinders-plus-four-planes",  # h = 0
    "cylinders-and-planes",  # h > 0
)


@dataclass(frozen=True)
class ResonanceTriple:
    """Integers (p, q, n) with gcd 1 and p > q/(2 sqrt 2), p > n/(2 sqrt 2)."""

    p: int
    q: int
    n: int

    def __post_init__(self):
        if min(self.p, self.q, self.n) < 1:
            raise DomainError(f"triple {(self.p, self.q, self.n)} must be positive")
        if math.gcd(self.p, self.q, self.n) != 1:
            raise DomainError(f"triple {(self.p, self.q, self.n)} has a common factor")
        if self.q >= TWO_SQRT2 * self.p or self.n >= TWO_SQRT2 * self.p:
            raise DomainError(
                f"triple {(self.p, self.q, self.n)} violates the period bound"
            )


@dataclass(frozen=True)
class ResonantSurface:
    """Energy surface carrying a resonant torus: q T(h3) = n T(h4) = tau."""

    triple: ResonanceTriple
    h3: float
    h4: float
    h_star: float
    tau: float


@dataclass(frozen=True)
class FiberClass:
    """Momentum-map fiber topology at a point (h3, h4)."""

    label: str
    degenerate: bool


@dataclass(frozen=True)
class MomentumLine:
    """Slope -1 segment {h3 + h4 = h} clipped to the momentum-map image
    [-2, inf)^2; degenerates to the single point (-2, -2) at h = -4."""

    h: float
    start: tuple[float, float]
    end: tuple[float, float]
    exists: bool


def totient(p: int) -> int:
    """Euler's phi: the count of integers in [1, p] coprime to p."""
    if p < 1:
        raise DomainError(f"totient of {p!r} undefined")
    result = p
    rem = p
    f = 2
    while f * f <= rem:
        if rem % f == 0:
            while rem % f == 0:
                rem //= f
            result -= result // f
        f += 1
    if rem > 1:
        result -= result // rem
    return result


def triple_count_bound(p: int) -> int:
    """Upper bound 8 p phi(p) + sum of phi(q) over q < 2 sqrt(2) p with
    gcd(p, q) > 1."""
    if p < 1:
        raise DomainError(f"p={p!r} must be >= 1")
    lim = math.floor(TWO_SQRT2 * p)
    extra = sum(totient(q) for q in range(1, lim + 1) if math.gcd(p, q) != 1)
    return 8 * p * totient(p) + extra


def enumerate_triples(p: int) -> list[ResonanceTriple]:
    """All (p, q, n) with q, n in [1, floor(2 sqrt(2) p)] and gcd 1."""
    if p < 1:
        raise DomainError(f"p={p!r} must be >= 1")
    lim = math.floor(TWO_SQRT2 * p)
    return [
        ResonanceTriple(p, q, n)
        for q in range(1, lim + 1)
        for n in range(1, lim + 1)
        if math.gcd(p, math.gcd(q, n)) == 1
    ]


@lru_cache(maxsize=None)
def _invert_period(ratio: Fraction) -> float:
    """Unique h in (-2, 0) with T(h) = 2 pi ratio; cached on the reduced
    fraction so symmetric triples share one root solve."""
    target = 2.0 * math.pi * float(ratio)
    lo, hi = -2.0 + 1e-12, -1e-12
    with warnings.catch_warnings():
        # the upper bracket endpoint sits in the precision-flag band by design
        warnings.simplefilter("ignore", PrecisionWarning)
        return bracketed_root(
            lambda h: period_T(h) - target, lo, hi, ftol=PERIOD_ROOT_TOL
        )


def energy_for_period_ratio(p: int, q: int) -> float:
    """The h in (-2, 0) whose period is 2 pi p / q.

    Requires p/q > 1/(2 sqrt 2); below that limit the period equation has no
    solution.  Huge ratios push h toward 0 where the period evaluation
    carries a precision flag."""
    if p < 1 or q < 1:
        raise DomainError(f"ratio {p}/{q} must have positive entries")
    if TWO_SQRT2 * p <= q:
        raise DomainError(
            f"period 2*pi*{p}/{q} <= pi/sqrt(2): below the infimum of T"
        )
    return _invert_period(Fraction(p, q))


def resonant_surface(t: ResonanceTriple) -> ResonantSurface:
    """Energies realizing the triple: h3 = T^{-1}(2 pi p/q),
    h4 = T^{-1}(2 pi p/n), tau = 2 pi p."""
    h3 = energy_for_period_ratio(t.p, t.q)
    h4 = energy_for_period_ratio(t.p, t.n)
    return ResonantSurface(
        triple=t, h3=h3, h4=h4, h_star=h3 + h4, tau=2.0 * math.pi * t.p
    )


def atlas(p_max: int) -> list[ResonantSurface]:
    """All resonant surfaces with p <= p_max, sorted by h* ascending and
    deduplicated: body exchange (p, q, n) ~ (p, n, q) and any further h*
    coincidences within DEDUP_TOL collapse to a single entry."""
    if p_max < 1:
        raise DomainError(f"p_max={p_max!r} must be >= 1")
    surfaces = []
    for p in range(1, p_max + 1):
        for t in enumerate_triples(p):
            if t.q > t.n:
                continue  # exchange symmetry h3 <-> h4
            surfaces.append(resonant_surface(t))
    surfaces.sort(key=lambda s: s.h_star)
    out: list[ResonantSurface] = []
    for s in surfaces:
        if out and abs(s.h_star - out[-1].h_star) <= DEDUP_TOL:
            continue
        out.append(s)
    return out


def rational_point_check(
    h3: float, h4: float, q_max: int, tol: float = 1e-9
) -> ResonanceTriple | None:
    """Recover a resonance triple from the period point
    (T(h3)/2pi, T(h4)/2pi) if both coordinates admit rational approximations
    r/s, u/v with denominators <= q_max within tol; the triple is
    (ru/g, su/g, rv/g) with g = gcd(ru, su, rv).  Absence (None) is a valid
    outcome."""
    if q_max < 1:
        raise DomainError(f"q_max={q_max!r} must be >= 1")
    x = period_T(h3) / (2.0 * math.pi)
    y = period_T(h4) / (2.0 * math.pi)
    fx = Fraction(x).limit_denominator(q_max)
    if abs(x - float(fx)) > tol:
        return None
    fy = Fraction(y).limit_denominator(q_max)
    if abs(y - float(fy)) > tol:
        return None
    r, s = fx.numerator, fx.denominator
    u, v = fy.numerator, fy.denominator
    g = math.gcd(r * u, math.gcd(s * u, r * v))
    return ResonanceTriple(p=r * u // g, q=s * u // g, n=r * v // g)


# ----------------------------------------------------------------------
# Topology of levels and fibers.
# ----------------------------------------------------------------------

def classify_surface(h: float) -> str:
    """Topology label of the energy level H = h; levels h <= -4 do not
    exist (both bodies cannot sit at the potential minimum together)."""
    if h <= -4.0 + BOUNDARY_TOL:
        raise NonexistentLevelError(f"energy level h={h!r} does not exist")
    if abs(h + 2.0) <= BOUNDARY_TOL:
        return "S3-minus-4-points"
    if h < -2.0:
        return "S3-foliated-by-tori"
    if abs(h) <= BOUNDARY_TOL:
        return "two-cylinders-plus-four-planes"
    if h < 0.0:
        return "S3-with-4-disc-boundaries"
    return "cylinders-and-planes"


def classify_fiber(h3: float, h4: float) -> FiberClass:
    """Momentum-map fiber over (h3, h4): torus when both energies are
    negative, cylinder when exactly one is, plane when both are positive;
    points on the image boundary (h_i = -2) or the parabolic line (h_i = 0)
    are degenerate isotropic fibers."""
    if h3 < -2.0 - BOUNDARY_TOL or h4 < -2.0 - BOUNDARY_TOL:
        return FiberClass(label="outside-image", degenerate=True)
    on_boundary = any(
        abs(v) <= BOUNDARY_TOL or abs(v + 2.0) <= BOUNDARY_TOL for v in (h3, h4)
    )
    negatives = (h3 < 0.0) + (h4 < 0.0)
    label = {2: "torus", 1: "cylinder", 0: "plane"}[negatives]
    if on_boundary:
        return FiberClass(label="degenerate-isotropic", degenerate=True)
    return FiberClass(label=label, degenerate=False)


def momentum_line(h: float) -> MomentumLine:
    """Endpoints of the slope -1 segment {h3 + h4 = h} inside [-2, inf)^2."""
    if h < -4.0 - BOUNDARY_TOL:
        raise NonexistentLevelError(f"energy level h={h!r} does not exist")
    if abs(h + 4.0) <= BOUNDARY_TOL:
        return MomentumLine(h=h, start=(-2.0, -2.0), end=(-2.0, -2.0), exists=False)
    return MomentumLine(h=h, start=(-2.0, h + 2.0), end=(h + 2.0, -2.0), exists=True)
