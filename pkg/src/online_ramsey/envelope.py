"""Exact concave piecewise-linear functions on a closed interval.

A :class:`LineEnvelope` is the pointwise minimum of finitely many integer
lines ``a + b*theta``.  Envelopes are always stored pruned: every kept line is
the unique minimum somewhere inside the domain, and lines are listed in the
order in which they become minimal as theta increases.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

THETA_MIN = Fraction(0)
THETA_MAX = Fraction(2)


class EnvelopeError(ValueError):
    pass


class NoRootError(EnvelopeError):
    """The envelope stays positive on the whole domain."""


class DegenerateRootError(EnvelopeError):
    """The envelope is identically zero on a segment, so the root is not unique."""


class Line(NamedTuple):
    intercept: int
    slope: int

    def at(self, theta):
        return self.intercept + self.slope * theta


def lower_envelope(lines, lo=THETA_MIN, hi=THETA_MAX):
    """Lines of ``min(lines)`` on ``[lo, hi]`` in left-to-right order."""
    pool = sorted(set(lines))
    if not pool:
        raise EnvelopeError("an envelope needs at least one line")
    current = min(pool, key=lambda line: (line.at(lo), line.slope))
    kept = [current]
    t = Fraction(lo)
    while True:
        best = None
        for line in pool:
            if line.slope >= current.slope:
                continue
            cross = Fraction(line.intercept - current.intercept, current.slope - line.slope)
            if cross < t:
                cross = t
            if best is None or (cross, line.slope) < best[0]:
                best = ((cross, line.slope), line)
        if best is None or best[0][0] >= hi:
            return tuple(kept)
        t, current = best[0][0], best[1]
        kept.append(current)


@dataclass(frozen=True)
class LineEnvelope:
    lines: tuple

    def __post_init__(self):
        object.__setattr__(self, "lines", lower_envelope([Line(*line) for line in self.lines]))

    @classmethod
    def constant(cls, value):
        return cls((Line(value, 0),))

    @classmethod
    def minimum(cls, envelopes):
        pool = [line for env in envelopes for line in env.lines]
        return cls(tuple(pool))

    def __call__(self, theta):
        return self.at(theta)

    def at(self, theta):
        theta = Fraction(theta)
        if not THETA_MIN <= theta <= THETA_MAX:
            raise EnvelopeError(f"theta = {theta} outside [0, 2]")
        return min(line.at(theta) for line in self.lines)

    def __add__(self, other):
        return LineEnvelope(
            tuple(Line(a.intercept + b.intercept, a.slope + b.slope) for a in self.lines for b in other.lines)
        )

    def shift(self, intercept, slope=0):
        return LineEnvelope(tuple(Line(l.intercept + intercept, l.slope + slope) for l in self.lines))

    def scale(self, factor):
        if factor < 0:
            raise EnvelopeError("scaling by a negative factor breaks concavity")
        return LineEnvelope(tuple(Line(l.intercept * factor, l.slope * factor) for l in self.lines))

    def breakpoints(self):
        points = []
        for left, right in zip(self.lines, self.lines[1:]):
            points.append(Fraction(right.intercept - left.intercept, left.slope - right.slope))
        return points

    def pieces(self):
        """``(start, end, line)`` triples covering the domain."""
        edges = [THETA_MIN, *self.breakpoints(), THETA_MAX]
        return [(edges[i], edges[i + 1], line) for i, line in enumerate(self.lines)]

    def is_nonincreasing(self):
        return all(line.slope <= 0 for line in self.lines)

    def root(self):
        """The unique theta in the domain where the envelope reaches zero."""
        for start, end, line in self.pieces():
            if line.at(end) > 0:
                continue
            if line.at(start) < 0:
                raise NoRootError("envelope is already negative at theta = 0")
            if line.slope == 0:
                raise DegenerateRootError("envelope vanishes on a whole segment")
            return Fraction(-line.intercept, line.slope)
        raise NoRootError("envelope is positive on all of [0, 2]")

    def to_pairs(self):
        return [[line.intercept, line.slope] for line in self.lines]

    def __repr__(self):
        body = ", ".join(f"{l.intercept}{l.slope:+d}θ" for l in self.lines)
        return f"LineEnvelope[{body}]"
