"""Unit-modulus scalars with an exact representation when one is available.

A phase is stored in one of three ways:

* ``butson``    -- an exact root of unity, exponent ``e`` of order ``l``;
* ``turns``     -- a rotation ``t`` in [0, 1), exact when ``t`` is a Fraction;
* ``cartesian`` -- a plain complex number of modulus ~1.

Arithmetic keeps exact forms exact whenever both operands allow it, and
falls back to floating point otherwise.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from math import gcd
from typing import Optional, Union

from .errors import InvalidInputError

TAU = 2.0 * math.pi

TurnLike = Union[Fraction, float]


def _cis(turn: float) -> complex:
    return cmath.exp(1j * TAU * turn)


class PhaseEntry:
    """A single unit-modulus value."""

    __slots__ = ("kind", "e", "l", "turn", "z")

    def __init__(self, kind: str, e: int = 0, l: int = 1,
                 turn: TurnLike = 0, z: complex = 1.0 + 0.0j):
        self.kind = kind
        self.e = e
        self.l = l
        self.turn = turn
        self.z = z

    # -- constructors -----------------------------------------------------

    @classmethod
    def butson(cls, e: int, l: int) -> "PhaseEntry":
        if l < 1:
            raise InvalidInputError(f"butson order must be >= 1, got {l}")
        return cls("butson", e=e % l, l=l)

    @classmethod
    def turns(cls, t: TurnLike) -> "PhaseEntry":
        if isinstance(t, Fraction):
            return cls("turns", turn=t % 1)
        return cls("turns", turn=float(t) % 1.0)

    @classmethod
    def cartesian(cls, z: complex, tol: float = 1e-9) -> "PhaseEntry":
        z = complex(z)
        if abs(abs(z) - 1.0) > tol:
            raise InvalidInputError(
                f"cartesian phase must have unit modulus within {tol}, got |z|={abs(z)}")
        return cls("cartesian", z=z)

    @classmethod
    def one(cls) -> "PhaseEntry":
        return cls.butson(0, 1)

    # -- views -------------------------------------------------------------

    @property
    def value(self) -> complex:
        if self.kind == "butson":
            return _cis(self.e / self.l)
        if self.kind == "turns":
            return _cis(float(self.turn))
        return self.z

    def exact_turn(self) -> Optional[Fraction]:
        """The rotation in [0, 1) as a Fraction, or None if not exact."""
        if self.kind == "butson":
            return Fraction(self.e, self.l)
        if self.kind == "turns" and isinstance(self.turn, Fraction):
            return self.turn
        return None

    def turn_value(self) -> float:
        """The rotation in [0, 1) as a float, exact or not."""
        if self.kind == "butson":
            return self.e / self.l
        if self.kind == "turns":
            return float(self.turn)
        return (cmath.phase(self.z) / TAU) % 1.0

    @property
    def is_exact(self) -> bool:
        return self.exact_turn() is not None

    # -- arithmetic ---------------------------------------------------------

    def conj(self) -> "PhaseEntry":
        if self.kind == "butson":
            return PhaseEntry.butson(-self.e, self.l)
        if self.kind == "turns":
            return PhaseEntry.turns(-self.turn)
        return PhaseEntry("cartesian", z=self.z.conjugate())

    def __neg__(self) -> "PhaseEntry":
        if self.kind == "butson":
            if self.l % 2 == 0:
                return PhaseEntry.butson(self.e + self.l // 2, self.l)
            return PhaseEntry.butson(2 * self.e + self.l, 2 * self.l)
        if self.kind == "turns":
            if isinstance(self.turn, Fraction):
                return PhaseEntry.turns(self.turn + Fraction(1, 2))
            return PhaseEntry.turns(self.turn + 0.5)
        return PhaseEntry("cartesian", z=-self.z)

    def __mul__(self, other: "PhaseEntry") -> "PhaseEntry":
        if not isinstance(other, PhaseEntry):
            return NotImplemented
        a, b = self, other
        if a.kind == "butson" and b.kind == "butson":
            l = a.l * b.l // gcd(a.l, b.l)
            return PhaseEntry.butson(a.e * (l // a.l) + b.e * (l // b.l), l)
        ta, tb = a.exact_turn(), b.exact_turn()
        if ta is not None and tb is not None:
            return PhaseEntry.turns(ta + tb)
        if a.kind != "cartesian" and b.kind != "cartesian":
            return PhaseEntry.turns(a.turn_value() + b.turn_value())
        return PhaseEntry("cartesian", z=a.value * b.value)

    def power(self, n: int) -> "PhaseEntry":
        """Integer power (exact for exact phases)."""
        if self.kind == "butson":
            return PhaseEntry.butson(self.e * n, self.l)
        if self.kind == "turns":
            return PhaseEntry.turns(self.turn * n)
        return PhaseEntry("cartesian", z=self.z ** n)

    def __repr__(self) -> str:
        if self.kind == "butson":
            return f"PhaseEntry.butson({self.e}, {self.l})"
        if self.kind == "turns":
            return f"PhaseEntry.turns({self.turn!r})"
        return f"PhaseEntry.cartesian({self.z!r})"


def parse_phase(text: str) -> PhaseEntry:
    """Parse a phase given as a turn: 'p/q' or an integer exactly, or a
    decimal float."""
    text = text.strip()
    try:
        if "/" in text:
            return PhaseEntry.turns(Fraction(text))
        try:
            return PhaseEntry.turns(Fraction(int(text)))
        except ValueError:
            return PhaseEntry.turns(float(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInputError(f"cannot parse phase {text!r}: {exc}") from exc
