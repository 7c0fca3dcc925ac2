"""The five value domains every representation is generic over.

A :class:`Semiring` operates on raw Python payloads (``int`` bits, ``int``,
:class:`fractions.Fraction`, ``float``, ``complex``). Representations store
raw payloads next to their semiring; :class:`SemiringValue` is the tagged
scalar used at API boundaries where mixing semirings must be caught.
"""

from __future__ import annotations

import enum
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable

from .errors import NonzeroToleranceOnExactSemiring, ParseError, SemiringMismatch

DEFAULT_TOL = 1e-9


class SemiringId(str, enum.Enum):
    BOOLEAN = "boolean"
    INTEGER = "integer"
    RATIONAL = "rational"
    FLOAT64 = "float64"
    COMPLEX128 = "complex128"


class Semiring:
    """(S, +, x, 0, 1) over raw payloads."""

    id: SemiringId
    exact: bool = True
    zero: Any
    one: Any

    @property
    def name(self) -> str:
        return self.id.value

    def __repr__(self):
        return f"<semiring {self.name}>"

    def __reduce__(self):
        return (get_semiring, (self.name,))

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def sum(self, values: Iterable):
        total = self.zero
        for v in values:
            total = self.add(total, v)
        return total

    def prod(self, values: Iterable):
        total = self.one
        for v in values:
            total = self.mul(total, v)
        return total

    def default_tol(self) -> float:
        return 0.0 if self.exact else DEFAULT_TOL

    def resolve_tol(self, tol) -> float:
        if tol is None:
            return self.default_tol()
        if tol < 0:
            raise ValueError(f"tolerance must be nonnegative, got {tol}")
        if self.exact and tol != 0:
            raise NonzeroToleranceOnExactSemiring(
                f"{self.name} is exact; zero-tests take tol=0, got {tol}")
        return float(tol)

    def is_zero(self, a, tol=None) -> bool:
        tol = self.resolve_tol(tol)
        if self.exact:
            return a == self.zero
        return abs(a) <= tol

    def close(self, a, b, tol=None) -> bool:
        """Entrywise comparison used by dense equality."""
        tol = self.resolve_tol(tol)
        if self.exact:
            return a == b
        return abs(a - b) <= tol

    def coerce(self, x):
        """Convert a plain Python number into this semiring's payload."""
        raise NotImplementedError

    def to_json(self, a):
        raise NotImplementedError

    def from_json(self, obj, field=None):
        raise NotImplementedError

    def format(self, a) -> str:
        return str(a)


class BooleanSemiring(Semiring):
    id = SemiringId.BOOLEAN
    zero = 0
    one = 1

    def add(self, a, b):
        return a | b

    def mul(self, a, b):
        return a & b

    def coerce(self, x):
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, numbers.Integral) and x in (0, 1):
            return int(x)
        raise ValueError(f"boolean payload must be 0/1, got {x!r}")

    def to_json(self, a):
        return bool(a)

    def from_json(self, obj, field=None):
        if isinstance(obj, bool):
            return int(obj)
        if obj in ("true", "false"):
            return int(obj == "true")
        if isinstance(obj, int) and obj in (0, 1):
            return obj
        raise ParseError(f"expected boolean true|false, got {obj!r}", field=field)

    def format(self, a):
        return "true" if a else "false"


class IntegerSemiring(Semiring):
    id = SemiringId.INTEGER
    zero = 0
    one = 1

    def coerce(self, x):
        if isinstance(x, bool) or not isinstance(x, numbers.Integral):
            if isinstance(x, Fraction) and x.denominator == 1:
                return int(x)
            raise ValueError(f"integer payload required, got {x!r}")
        return int(x)

    def to_json(self, a):
        return str(a)

    def from_json(self, obj, field=None):
        if isinstance(obj, bool):
            raise ParseError(f"expected integer, got {obj!r}", field=field)
        if isinstance(obj, int):
            return obj
        if isinstance(obj, str):
            try:
                return int(obj.strip())
            except ValueError:
                pass
        raise ParseError(f"expected integer decimal string, got {obj!r}", field=field)


class RationalSemiring(Semiring):
    id = SemiringId.RATIONAL
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, x):
        if isinstance(x, bool):
            raise ValueError(f"rational payload required, got {x!r}")
        if isinstance(x, (numbers.Rational, str)):
            return Fraction(x)
        if isinstance(x, float) and x.is_integer():
            return Fraction(int(x))
        raise ValueError(f"rational payload required, got {x!r}")

    def to_json(self, a):
        return f"{a.numerator}/{a.denominator}"

    def from_json(self, obj, field=None):
        if isinstance(obj, bool):
            raise ParseError(f"expected rational, got {obj!r}", field=field)
        if isinstance(obj, int):
            return Fraction(obj)
        if isinstance(obj, str):
            try:
                return Fraction(obj.strip())
            except (ValueError, ZeroDivisionError):
                pass
        raise ParseError(f'expected rational "p/q", got {obj!r}', field=field)


class Float64Semiring(Semiring):
    id = SemiringId.FLOAT64
    exact = False
    zero = 0.0
    one = 1.0

    def coerce(self, x):
        if isinstance(x, (bool, complex)):
            raise ValueError(f"float payload required, got {x!r}")
        return float(x)

    def to_json(self, a):
        return a

    def from_json(self, obj, field=None):
        if isinstance(obj, bool) or not isinstance(obj, (int, float)):
            raise ParseError(f"expected float, got {obj!r}", field=field)
        return float(obj)

    def format(self, a):
        return repr(a)


class Complex128Semiring(Semiring):
    id = SemiringId.COMPLEX128
    exact = False
    zero = 0j
    one = 1 + 0j

    def coerce(self, x):
        if isinstance(x, bool):
            raise ValueError(f"complex payload required, got {x!r}")
        if isinstance(x, (tuple, list)) and len(x) == 2:
            return complex(float(x[0]), float(x[1]))
        return complex(x)

    def to_json(self, a):
        return [a.real, a.imag]

    def from_json(self, obj, field=None):
        if (isinstance(obj, list) and len(obj) == 2
                and all(isinstance(p, (int, float)) and not isinstance(p, bool) for p in obj)):
            return complex(float(obj[0]), float(obj[1]))
        raise ParseError(f"expected complex [re, im], got {obj!r}", field=field)

    def format(self, a):
        return f"[{a.real!r}, {a.imag!r}]"


BOOLEAN = BooleanSemiring()
INTEGER = IntegerSemiring()
RATIONAL = RationalSemiring()
FLOAT64 = Float64Semiring()
COMPLEX128 = Complex128Semiring()

SEMIRINGS = {s.name: s for s in (BOOLEAN, INTEGER, RATIONAL, FLOAT64, COMPLEX128)}


def get_semiring(name) -> Semiring:
    if isinstance(name, Semiring):
        return name
    if isinstance(name, SemiringId):
        name = name.value
    try:
        return SEMIRINGS[name]
    except KeyError:
        raise ValueError(
            f"unknown semiring {name!r}; expected one of {sorted(SEMIRINGS)}") from None


@dataclass(frozen=True)
class SemiringValue:
    """A scalar tagged with the semiring it lives in."""

    semiring: Semiring
    payload: Any

    def __post_init__(self):
        object.__setattr__(self, "semiring", get_semiring(self.semiring))
        object.__setattr__(self, "payload", self.semiring.coerce(self.payload))

    def _check(self, other):
        if not isinstance(other, SemiringValue):
            return NotImplemented
        if other.semiring is not self.semiring:
            raise SemiringMismatch(
                f"cannot combine {self.semiring.name} with {other.semiring.name}")
        return None

    def __add__(self, other):
        bad = self._check(other)
        if bad is NotImplemented:
            return bad
        return SemiringValue(self.semiring, self.semiring.add(self.payload, other.payload))

    def __mul__(self, other):
        bad = self._check(other)
        if bad is NotImplemented:
            return bad
        return SemiringValue(self.semiring, self.semiring.mul(self.payload, other.payload))

    def is_zero(self, tol=None) -> bool:
        return self.semiring.is_zero(self.payload, tol)

    def to_json(self):
        return self.semiring.to_json(self.payload)

    def __str__(self):
        return self.semiring.format(self.payload)


def value(semiring, payload) -> SemiringValue:
    return SemiringValue(get_semiring(semiring), payload)


def add(a: SemiringValue, b: SemiringValue) -> SemiringValue:
    return a + b


def mul(a: SemiringValue, b: SemiringValue) -> SemiringValue:
    return a * b


def is_zero(a: SemiringValue, tol=None) -> bool:
    return a.is_zero(tol)


def rel_close(a, b, rel=1e-12) -> bool:
    """Relative closeness on magnitudes, used for float law checks."""
    return abs(a - b) <= rel * max(abs(a), abs(b), 1.0)
