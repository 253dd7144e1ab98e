"""Membership-function primitives, linguistic variables, and fuzzification.

A membership function maps a crisp value to a degree in [0, 1]. Only the
two piecewise-linear shapes are supported: triangles and trapezoids.
Linguistic variables bundle a named universe with named terms; fuzzifying
a crisp value yields one degree per term.

The module also provides the canonical builders for the temperature
controller: a five-term error partition on [-50, +50] degrees C and a
five-term PWM-level partition on [0, 255].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Union

from .errors import InvalidInputError


@dataclass(frozen=True, slots=True)
class Triangular:
    """Triangle with feet at ``a`` and ``c`` and apex at ``b``.

    ``a == b`` or ``b == c`` give a vertical edge; the shared point still
    evaluates to 1. The support must be nonzero (``a < c``).
    """

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not (self.a <= self.b <= self.c):
            raise ValueError(f"triangular breakpoints must be ordered, got ({self.a}, {self.b}, {self.c})")
        if not self.a < self.c:
            raise ValueError("triangular support must be nonzero (a < c)")

    @property
    def points(self) -> tuple[float, ...]:
        return (self.a, self.b, self.c)

    @property
    def peak(self) -> float:
        """Abscissa of the apex, the extremum used by defuzzification."""
        return self.b

    @property
    def support(self) -> tuple[float, float]:
        return (self.a, self.c)


@dataclass(frozen=True, slots=True)
class Trapezoidal:
    """Trapezoid with feet at ``a``/``d`` and plateau on [``b``, ``c``]."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not (self.a <= self.b <= self.c <= self.d):
            raise ValueError(
                f"trapezoidal breakpoints must be ordered, got ({self.a}, {self.b}, {self.c}, {self.d})"
            )
        if not self.a < self.d:
            raise ValueError("trapezoidal support must be nonzero (a < d)")

    @property
    def points(self) -> tuple[float, ...]:
        return (self.a, self.b, self.c, self.d)

    @property
    def peak(self) -> float:
        """Midpoint of the plateau, the extremum used by defuzzification."""
        return (self.b + self.c) / 2.0

    @property
    def support(self) -> tuple[float, float]:
        return (self.a, self.d)


MembershipFunction = Union[Triangular, Trapezoidal]


def membership_degree(mf: MembershipFunction, x: float) -> float:
    """Evaluate ``mf`` at ``x``. Total over the reals, always in [0, 1]."""
    if isinstance(mf, Triangular):
        a, b, c = mf.a, mf.b, mf.c
        if x < a or x > c:
            return 0.0
        if x == b:
            return 1.0
        if x < b:
            return (x - a) / (b - a)
        return (c - x) / (c - b)
    a, b, c, d = mf.a, mf.b, mf.c, mf.d
    if x < a or x > d:
        return 0.0
    if b <= x <= c:
        return 1.0
    if x < b:
        return (x - a) / (b - a)
    return (d - x) / (d - c)


@dataclass(frozen=True, slots=True)
class LinguisticTerm:
    """A named membership function inside a linguistic variable."""

    name: str
    mf: MembershipFunction

    def __post_init__(self):
        if not self.name:
            raise ValueError("term name must be nonempty")


@dataclass(frozen=True, slots=True)
class LinguisticVariable:
    """A named quantity with a closed universe and at least one term.

    Term names are unique case-insensitively. Each term's support must
    intersect the universe. Full coverage of the universe is desirable but
    not enforced; use :func:`coverage_gaps` as a diagnostic.
    """

    name: str
    universe: tuple[float, float]
    terms: tuple[LinguisticTerm, ...] = field(default=())

    def __post_init__(self):
        if not self.name:
            raise ValueError("variable name must be nonempty")
        object.__setattr__(self, "universe", (float(self.universe[0]), float(self.universe[1])))
        object.__setattr__(self, "terms", tuple(self.terms))
        lo, hi = self.universe
        if not lo < hi:
            raise ValueError(f"universe must satisfy lo < hi, got [{lo}, {hi}]")
        if not self.terms:
            raise ValueError(f"variable {self.name!r} needs at least one term")
        seen: set[str] = set()
        for term in self.terms:
            key = term.name.lower()
            if key in seen:
                raise ValueError(f"duplicate term name {term.name!r} on variable {self.name!r}")
            seen.add(key)
            s_lo, s_hi = term.mf.support
            if s_hi < lo or s_lo > hi:
                raise ValueError(
                    f"term {term.name!r} support [{s_lo}, {s_hi}] does not intersect universe [{lo}, {hi}]"
                )

    def term(self, name: str) -> LinguisticTerm:
        """Look a term up by name, case-insensitively."""
        key = name.lower()
        for term in self.terms:
            if term.name.lower() == key:
                return term
        raise KeyError(f"variable {self.name!r} has no term {name!r}")

    def term_names(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.terms)


def clamp_to_universe(var: LinguisticVariable, x: float) -> float:
    lo, hi = var.universe
    return min(max(x, lo), hi)


def fuzzify(var: LinguisticVariable, x: float) -> dict[str, float]:
    """Map a crisp value to a degree per term.

    ``x`` is clamped to the universe first: a sensor may legitimately
    exceed the design envelope and the controller must still act. The
    result has exactly one entry per term, in declaration order.
    """
    if not math.isfinite(x):
        raise InvalidInputError(f"cannot fuzzify non-finite value {x!r} for variable {var.name!r}")
    clamped = clamp_to_universe(var, x)
    return {term.name: membership_degree(term.mf, clamped) for term in var.terms}


def coverage_gaps(var: LinguisticVariable) -> tuple[float, ...]:
    """Universe points where every term evaluates to zero.

    Diagnostic only. Because all shapes are piecewise linear, checking the
    breakpoints and the midpoints between consecutive breakpoints is exact:
    any uncovered region is bounded by breakpoints (or the universe edge)
    and therefore contains one of these candidates.
    """
    lo, hi = var.universe
    candidates = {lo, hi}
    for term in var.terms:
        for p in term.mf.points:
            if lo <= p <= hi:
                candidates.add(p)
    ordered = sorted(candidates)
    probes = list(ordered)
    probes.extend((p + q) / 2.0 for p, q in zip(ordered, ordered[1:]))
    return tuple(
        x for x in sorted(probes)
        if max(membership_degree(t.mf, x) for t in var.terms) <= 0.0
    )


# -- canonical controller variables ------------------------------------------

def build_error_variable() -> LinguisticVariable:
    """Five-term partition of the temperature error (setpoint - sensed).

    The negative side is calibrated so that an error of -1 degree C
    fuzzifies to SNEG = 1/25 = 0.04 and ZERO = 14/15 = 0.9333; the
    positive side mirrors it.
    """
    return LinguisticVariable(
        name="error",
        universe=(-50.0, 50.0),
        terms=(
            LinguisticTerm("NEG", Trapezoidal(-50.0, -50.0, -25.0, -15.0)),
            LinguisticTerm("SNEG", Triangular(-50.0, -25.0, 0.0)),
            LinguisticTerm("ZERO", Triangular(-15.0, 0.0, 15.0)),
            LinguisticTerm("SPOZ", Triangular(0.0, 25.0, 50.0)),
            LinguisticTerm("POZ", Trapezoidal(15.0, 25.0, 50.0, 50.0)),
        ),
    )


def build_pwm_variable() -> LinguisticVariable:
    """Five-term partition of the PWM level on [0, 255].

    Triangles with apexes at the midpoints of the ranges each band covers:
    Z 44.625, L 89, M 127.5, H 165.5, VH 210.375. The apexes are what the
    weighted-average defuzzifier consumes.
    """
    return LinguisticVariable(
        name="pwm",
        universe=(0.0, 255.0),
        terms=(
            LinguisticTerm("Z", Triangular(0.0, 44.625, 89.25)),
            LinguisticTerm("L", Triangular(51.0, 89.0, 127.0)),
            LinguisticTerm("M", Triangular(89.25, 127.5, 165.75)),
            LinguisticTerm("H", Triangular(127.0, 165.5, 204.0)),
            LinguisticTerm("VH", Triangular(165.75, 210.375, 255.0)),
        ),
    )


# -- JSON document form -------------------------------------------------------

_SHAPES = {"triangular": Triangular, "trapezoidal": Trapezoidal}


def mf_to_dict(mf: MembershipFunction) -> dict:
    shape = "triangular" if isinstance(mf, Triangular) else "trapezoidal"
    return {"shape": shape, "points": list(mf.points)}


def mf_from_dict(doc: Mapping) -> MembershipFunction:
    try:
        cls = _SHAPES[doc["shape"]]
    except KeyError:
        raise ValueError(f"unknown membership shape {doc.get('shape')!r}") from None
    points = [float(p) for p in doc["points"]]
    expected = 3 if cls is Triangular else 4
    if len(points) != expected:
        raise ValueError(f"{doc['shape']} shape needs {expected} points, got {len(points)}")
    return cls(*points)


def variable_to_dict(var: LinguisticVariable) -> dict:
    return {
        "name": var.name,
        "universe": [var.universe[0], var.universe[1]],
        "terms": [{"name": t.name, **mf_to_dict(t.mf)} for t in var.terms],
    }


def variable_from_dict(doc: Mapping) -> LinguisticVariable:
    terms = tuple(LinguisticTerm(t["name"], mf_from_dict(t)) for t in doc["terms"])
    lo, hi = doc["universe"]
    return LinguisticVariable(name=doc["name"], universe=(float(lo), float(hi)), terms=terms)
