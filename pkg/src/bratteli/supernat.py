"""Supernatural numbers: formal products of primes with exponents in N or inf.

A supernatural number n determines the subgroup Q_n of the rationals
generated by 1/d for every natural d dividing n.  The associated
sequence n_1 | n_2 | ... realizes Q_n as an increasing union of cyclic
subgroups and is what the tensoring code consumes.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt


class _Infinity:
    """Distinguished exponent token, strictly above every integer."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __lt__(self, other):
        if isinstance(other, (int, _Infinity)):
            return False
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, _Infinity):
            return True
        if isinstance(other, int):
            return False
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, _Infinity):
            return False
        if isinstance(other, int):
            return True
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, (int, _Infinity)):
            return True
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, (int, _Infinity)):
            return self
        return NotImplemented

    __radd__ = __add__


INF = _Infinity()

Exponent = "int | _Infinity"


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d <= isqrt(p):
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class SupernaturalNumber:
    """Finite association prime -> exponent, exponents positive ints or INF.

    The empty product is the number 1.  Stored as a tuple of pairs sorted
    by prime, so equality and hashing are structural.
    """

    factors: tuple = ()

    def __post_init__(self):
        items = self.factors
        if isinstance(items, dict):
            items = items.items()
        pairs = sorted(tuple(it) for it in items)
        seen = set()
        for p, e in pairs:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            if p in seen:
                raise ValueError(f"prime {p} repeated")
            seen.add(p)
            if e is not INF and (not isinstance(e, int) or e < 1):
                raise ValueError(f"exponent of {p} must be a positive integer or INF")
        object.__setattr__(self, "factors", tuple(pairs))

    @classmethod
    def one(cls) -> "SupernaturalNumber":
        return cls()

    @classmethod
    def from_natural(cls, n: int) -> "SupernaturalNumber":
        if not isinstance(n, int) or n < 1:
            raise ValueError("from_natural needs a natural number >= 1")
        fac = {}
        d = 2
        while d * d <= n:
            while n % d == 0:
                fac[d] = fac.get(d, 0) + 1
                n //= d
            d += 1 if d == 2 else 2
        if n > 1:
            fac[n] = fac.get(n, 0) + 1
        return cls(fac)

    def exponent(self, p: int):
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def primes(self) -> tuple:
        return tuple(p for p, _ in self.factors)

    def is_finite(self) -> bool:
        return all(e is not INF for _, e in self.factors)

    def to_int(self) -> int:
        if not self.is_finite():
            raise ValueError("not a natural number")
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out

    def multiply(self, other: "SupernaturalNumber") -> "SupernaturalNumber":
        fac = dict(self.factors)
        for p, e in other.factors:
            old = fac.get(p, 0)
            fac[p] = INF if (e is INF or old is INF) else old + e
        return SupernaturalNumber(fac)

    __mul__ = multiply

    def divides(self, other: "SupernaturalNumber") -> bool:
        return all(e <= other.exponent(p) for p, e in self.factors)

    def associated_sequence(self, length: int) -> tuple:
        """Canonical divisibility chain n_1 | n_2 | ... | n_length.

        Step i takes the first i primes of the product in ascending
        order, each capped at exponent min(i, e_p).  The supremum of the
        chain recovers every exponent, including the infinite ones.
        """
        if not isinstance(length, int) or length < 1:
            raise ValueError("length must be >= 1")
        out = []
        for i in range(1, length + 1):
            n_i = 1
            for p, e in self.factors[:i]:
                cap = i if e is INF else min(i, e)
                n_i *= p**cap
            out.append(n_i)
        return tuple(out)

    @classmethod
    def parse(cls, text: str) -> "SupernaturalNumber":
        """Read the textual form, e.g. ``2^inf*3^2*5`` or ``1``."""
        text = text.strip()
        if text == "1":
            return cls()
        fac = {}
        for token in text.split("*"):
            token = token.strip()
            if "^" in token:
                base, _, exp = token.partition("^")
                p = _parse_nat(base, token)
                e = INF if exp.strip() == "inf" else _parse_nat(exp, token)
            else:
                p = _parse_nat(token, token)
                e = 1
            if p in fac:
                raise ValueError(f"prime {p} repeated in {text!r}")
            fac[p] = e
        return cls(fac)

    def __str__(self):
        if not self.factors:
            return "1"
        parts = []
        for p, e in self.factors:
            if e == 1:
                parts.append(str(p))
            elif e is INF:
                parts.append(f"{p}^inf")
            else:
                parts.append(f"{p}^{e}")
        return "*".join(parts)


def _parse_nat(text: str, token: str) -> int:
    text = text.strip()
    if not text.isdigit():
        raise ValueError(f"bad supernatural token {token!r}")
    return int(text)


ONE = SupernaturalNumber()
