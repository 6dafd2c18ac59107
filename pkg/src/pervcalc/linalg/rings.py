"""The three coefficient rings: Q, F_p and Z.

Elements are plain Python objects: ``int`` for Z and F_p (F_p elements are
kept reduced into ``range(p)``), and for Q an ``int`` when integral and a
``Fraction`` otherwise.  Arithmetic on entries
uses the native operators followed by :meth:`Ring.reduce`, which is the
identity except over F_p.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import InputError, UnsupportedRingError


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Ring:
    """A computable coefficient ring.

    ``tag`` is one of ``"q"``, ``"z"``, ``"fp"``; ``p`` is set only for ``"fp"``.
    Instances compare and hash by value, so ``Ring.fp(5) == Ring.fp(5)``.
    """

    __slots__ = ("tag", "p")

    def __init__(self, tag: str, p: int | None = None):
        if tag not in ("q", "z", "fp"):
            raise InputError(f"ring: unknown tag {tag!r}")
        if tag == "fp":
            if p is None or not _is_prime(int(p)):
                raise InputError(f"ring: {p!r} is not a prime")
            p = int(p)
        elif p is not None:
            raise InputError("ring: only prime fields carry p")
        object.__setattr__(self, "tag", tag)
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("Ring is immutable")

    @classmethod
    def rationals(cls) -> "Ring":
        return cls("q")

    @classmethod
    def integers(cls) -> "Ring":
        return cls("z")

    @classmethod
    def fp(cls, p: int) -> "Ring":
        return cls("fp", p)

    @classmethod
    def parse(cls, text: str) -> "Ring":
        """Parse ``q``, ``z`` or ``fp:P``."""
        text = str(text).strip().lower()
        if text in ("q", "z"):
            return cls(text)
        if text.startswith("fp:"):
            try:
                p = int(text[3:])
            except ValueError:
                raise InputError(f"ring: bad prime in {text!r}") from None
            return cls("fp", p)
        raise InputError(f"ring: cannot parse {text!r}")

    def __str__(self) -> str:
        return f"fp:{self.p}" if self.tag == "fp" else self.tag

    def __repr__(self) -> str:
        return f"Ring({str(self)!r})"

    def __eq__(self, other) -> bool:
        return self is other or (isinstance(other, Ring) and self.tag == other.tag
                                 and self.p == other.p)

    def __hash__(self) -> int:
        return hash((self.tag, self.p))

    @property
    def is_field(self) -> bool:
        return self.tag != "z"

    def require_field(self, what: str) -> None:
        if not self.is_field:
            raise UnsupportedRingError(f"{what}: requires a field, got {self}")

    # -- elements ---------------------------------------------------------

    def reduce(self, x):
        if self.tag == "fp":
            return x % self.p
        if self.tag == "q" and type(x) is Fraction and x._denominator == 1:
            return x._numerator
        return x

    def coerce(self, x):
        """Bring an int/Fraction/string into canonical element form."""
        if isinstance(x, str):
            return self.parse_element(x)
        if self.tag == "q":
            if isinstance(x, bool):
                raise InputError(f"entry {x!r} is not a ring element")
            x = Fraction(x)
            return x.numerator if x.denominator == 1 else x
        if isinstance(x, Fraction):
            if x.denominator != 1:
                if self.tag == "fp":
                    return x.numerator * pow(x.denominator, -1, self.p) % self.p
                raise InputError(f"entry {x} is not an integer")
            x = x.numerator
        if isinstance(x, bool) or not isinstance(x, int):
            raise InputError(f"entry {x!r} is not a ring element")
        return self.reduce(x)

    def parse_element(self, text: str):
        text = text.strip()
        try:
            q = Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"entry {text!r} is not a number") from None
        if "." in text or "e" in text.lower():
            raise InputError(f"entry {text!r}: decimals are not exact entries")
        return self.coerce(q)

    def format_element(self, x) -> str:
        if self.tag == "q":
            x = Fraction(x)
            if x.denominator == 1:
                return str(x.numerator)
            return f"{x.numerator}/{x.denominator}"
        return str(int(x))

    def inverse(self, x):
        if self.tag == "q":
            return self.reduce(1 / Fraction(x))
        if self.tag == "fp":
            return pow(x, -1, self.p)
        if x in (1, -1):
            return x
        raise ZeroDivisionError(f"{x} is not a unit in Z")

    def is_unit(self, x) -> bool:
        if self.tag == "z":
            return x in (1, -1)
        return x != 0

    def size(self, x):
        """Euclidean size used for pivot selection."""
        if self.tag == "z":
            return abs(x)
        return 0 if x == 0 else 1

    def quo(self, a, b):
        """Euclidean quotient; exact division over a field."""
        if self.tag == "z":
            return a // b
        if self.tag == "q":
            return self.reduce(Fraction(a) / b)
        return a * pow(b, -1, self.p) % self.p

    def normalize_unit(self, x):
        """Unit u with u*x canonical (positive over Z, 1 over a field)."""
        if self.tag == "z":
            return -1 if x < 0 else 1
        return self.inverse(x)

    def elements(self):
        """All elements of a finite ring (F_p only)."""
        if self.tag != "fp":
            raise UnsupportedRingError(f"ring {self} is infinite")
        return range(self.p)


QQ = Ring.rationals()
ZZ = Ring.integers()
