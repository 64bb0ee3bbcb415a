"""Constructors for test functions: one-dimensional seeds and their lifts.

A one-dimensional piecewise linear function zeta with breakpoints on
(1/q)Z lifts to the torus along the anti-diagonal: kappa(x) = zeta(x1+x2
mod 1).  The lift is piecewise linear over the triangulation, and it is
minimal/extreme exactly when zeta is, which makes these lifts the natural
seed corpus for the decision pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import Rat, TorusPoint
from .piecewise import PLFunction


@dataclass(frozen=True)
class OneDFunction:
    """Periodic piecewise linear function on [0,1) with breakpoints k/q."""

    q: int
    f0: Rat
    values: tuple[Rat, ...]

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("q must be positive")
        vals = tuple(Rat(v) for v in self.values)
        if len(vals) != self.q:
            raise ValueError(f"need exactly {self.q} breakpoint values")
        object.__setattr__(self, "values", vals)
        if vals[0] != 0:
            raise ValueError("value at 0 must be 0")
        r = Rat(self.f0) * self.q
        if r.denominator != 1 or not 0 < int(r) < self.q:
            raise ValueError("f0 must be an interior breakpoint k/q")
        object.__setattr__(self, "f0", Rat(self.f0))

    def eval(self, t: Rat) -> Rat:
        t = t - (t.numerator // t.denominator)
        s = t * self.q
        k = s.numerator // s.denominator
        a = s - k
        v0 = self.values[k % self.q]
        v1 = self.values[(k + 1) % self.q]
        return v0 + a * (v1 - v0)


def gmic(q: int, f0: Rat) -> OneDFunction:
    """The classical two-slope function: t/f0 up to f0, then down to 0 at 1."""
    f0 = Rat(f0)
    r = f0 * q
    if r.denominator != 1 or not 0 < int(r) < q:
        raise ValueError("f0 must be an interior breakpoint k/q")
    vals = []
    for k in range(q):
        t = Rat(k, q)
        vals.append(t / f0 if t <= f0 else (1 - t) / (1 - f0))
    return OneDFunction(q, f0, tuple(vals))


def diagonal_lift(zeta: OneDFunction) -> PLFunction:
    """Lift along the anti-diagonal: values[i][j] = zeta((i+j)/q mod 1)."""
    q = zeta.q
    vals = tuple(
        tuple(zeta.values[(i + j) % q] for j in range(q)) for i in range(q)
    )
    return PLFunction(q, 1, TorusPoint(zeta.f0, Rat(0)), vals)


def symmetric_family_member(a: Rat, b: Rat) -> OneDFunction:
    """Member of the q=8, f0=1/2 family with the free odd-breakpoint values.

    values = (0, a, 1/2, 1-a, 1, b, 1/2, 1-b); the symmetry condition holds
    for every (a, b), subadditivity only for suitable choices.
    """
    a = Rat(a)
    b = Rat(b)
    half = Rat(1, 2)
    return OneDFunction(
        8, half, (Rat(0), a, half, 1 - a, Rat(1), b, half, 1 - b)
    )


def averaged_pair_zeta() -> OneDFunction:
    """Exact average of the two family members (1/4, 3/4) and (3/4, 1/4)."""
    m1 = symmetric_family_member(Rat(1, 4), Rat(3, 4))
    m2 = symmetric_family_member(Rat(3, 4), Rat(1, 4))
    vals = tuple((x + y) / 2 for x, y in zip(m1.values, m2.values))
    return OneDFunction(8, Rat(1, 2), vals)


def averaged_pair_example() -> PLFunction:
    """A minimal lift that is an average of two distinct minimal lifts.

    Canonical not-extreme seed: the decision pipeline must reject it and
    produce a verifiable decomposition.
    """
    return diagonal_lift(averaged_pair_zeta())
