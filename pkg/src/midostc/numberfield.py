"""Exact arithmetic in the biquadratic field L = Q(w', w).

Here w'^2 = -c' and w^2 = -c for positive squarefree integers c != c'.
Elements are stored as four rational coordinates over the basis
{1, w', w, w'w}, so every ring operation is exact.  Floating point
enters only through embed(), which sends w' to i*sqrt(c') and w to
i*sqrt(c) (hence w'w to -sqrt(c*c')).
"""

from __future__ import annotations

import math
from fractions import Fraction


class ContextMismatchError(ValueError):
    """Raised when elements of different field contexts are combined."""


def _is_squarefree(n: int) -> bool:
    if n <= 0:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


class FieldContext:
    """The field Q(sqrt(-c'), sqrt(-c)).

    c and c' must be positive, squarefree and distinct, which keeps the
    four embeddings of L pairwise distinct (c*c' is then never a square).
    """

    __slots__ = ("c", "cprime")

    def __init__(self, c: int, cprime: int):
        if not _is_squarefree(c) or not _is_squarefree(cprime):
            raise ValueError(f"c and cprime must be positive squarefree, got c={c}, cprime={cprime}")
        if c == cprime:
            raise ValueError("c and cprime must be distinct")
        self.c = c
        self.cprime = cprime

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldContext) and self.c == other.c and self.cprime == other.cprime

    def __hash__(self) -> int:
        return hash((self.c, self.cprime))

    def __repr__(self) -> str:
        return f"FieldContext(c={self.c}, cprime={self.cprime})"

    def element(self, a1=0, a2=0, a3=0, a4=0) -> "FieldElement":
        return FieldElement(self, (Fraction(a1), Fraction(a2), Fraction(a3), Fraction(a4)))

    def zero(self) -> "FieldElement":
        return self.element(0)

    def one(self) -> "FieldElement":
        return self.element(1)

    def omega_prime(self) -> "FieldElement":
        """w', a square root of -c'."""
        return self.element(0, 1)

    def omega(self) -> "FieldElement":
        """w, a square root of -c."""
        return self.element(0, 0, 1)

    def omega_product(self) -> "FieldElement":
        """w'w, whose square is c*c' and whose embedding is -sqrt(c*c')."""
        return self.element(0, 0, 0, 1)


class FieldElement:
    """An element a1 + a2*w' + a3*w + a4*w'w with exact rational coordinates."""

    __slots__ = ("ctx", "coords")

    def __init__(self, ctx: FieldContext, coords):
        if len(coords) != 4:
            raise ValueError("need exactly four coordinates")
        self.ctx = ctx
        self.coords = tuple(Fraction(a) for a in coords)

    # ------------------------------------------------------------------
    # ring structure

    def _check(self, other: "FieldElement") -> None:
        if self.ctx != other.ctx:
            raise ContextMismatchError(f"cannot combine {self.ctx!r} with {other.ctx!r}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.element(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        self._check(other)
        return FieldElement(self.ctx, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.ctx, tuple(-a for a in self.coords))

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.element(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.ctx, tuple(a * other for a in self.coords))
        if not isinstance(other, FieldElement):
            return NotImplemented
        self._check(other)
        a1, a2, a3, a4 = self.coords
        b1, b2, b3, b4 = other.coords
        c = self.ctx.c
        cp = self.ctx.cprime
        # Multiplication table of the basis: w'^2 = -c', w^2 = -c,
        # (w'w)^2 = c*c', w'*w = w'w, w'*(w'w) = -c'*w, w*(w'w) = -c*w'.
        return FieldElement(self.ctx, (
            a1 * b1 - cp * a2 * b2 - c * a3 * b3 + c * cp * a4 * b4,
            a1 * b2 + a2 * b1 - c * (a3 * b4 + a4 * b3),
            a1 * b3 + a3 * b1 - cp * (a2 * b4 + a4 * b2),
            a1 * b4 + a4 * b1 + a2 * b3 + a3 * b2,
        ))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse")
        return (self.sigma() * self.tau() * self.sigma_tau()) * (1 / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (Fraction(1) / Fraction(other))
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = self.ctx.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ctx.element(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.ctx == other.ctx and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((self.ctx, self.coords))

    def __bool__(self) -> bool:
        return any(self.coords)

    # ------------------------------------------------------------------
    # Galois action and invariants

    def sigma(self) -> "FieldElement":
        """The automorphism fixing w and negating w' (and hence w'w)."""
        a1, a2, a3, a4 = self.coords
        return FieldElement(self.ctx, (a1, -a2, a3, -a4))

    def tau(self) -> "FieldElement":
        """The automorphism fixing w' and negating w (and hence w'w)."""
        a1, a2, a3, a4 = self.coords
        return FieldElement(self.ctx, (a1, a2, -a3, -a4))

    def sigma_tau(self) -> "FieldElement":
        """sigma composed with tau; under embed() this is complex conjugation."""
        a1, a2, a3, a4 = self.coords
        return FieldElement(self.ctx, (a1, -a2, -a3, a4))

    def norm(self) -> Fraction:
        """Product of the four Galois conjugates, always a rational number."""
        p = self * self.sigma() * self.tau() * self.sigma_tau()
        if p.coords[1] != 0 or p.coords[2] != 0 or p.coords[3] != 0:
            raise ArithmeticError("norm came out irrational, arithmetic bug")
        return p.coords[0]

    # ------------------------------------------------------------------
    # subfields and sign tests

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def in_q_omega(self) -> bool:
        """Membership in Q(w) = Q(sqrt(-c)), the fixed field of sigma."""
        return self.coords[1] == 0 and self.coords[3] == 0

    def in_q_omega_prime(self) -> bool:
        """Membership in Q(w') = Q(sqrt(-c')), the fixed field of tau."""
        return self.coords[2] == 0 and self.coords[3] == 0

    def is_conjugation_fixed(self) -> bool:
        """True when the element is fixed by sigma_tau, i.e. embeds to a real number."""
        return self.coords[1] == 0 and self.coords[2] == 0

    def real_sign(self) -> int:
        """Exact sign of the (real) embedded value a1 - a4*sqrt(c*c').

        Only defined for conjugation-fixed elements.
        """
        if not self.is_conjugation_fixed():
            raise ValueError("element does not embed to a real number")
        a1, a4 = self.coords[0], self.coords[3]
        q = self.ctx.c * self.ctx.cprime
        if a4 == 0:
            return (a1 > 0) - (a1 < 0)
        if a1 <= 0 and a4 > 0:
            return -1
        if a1 >= 0 and a4 < 0:
            return 1
        diff = a1 * a1 - a4 * a4 * q
        s = (diff > 0) - (diff < 0)
        return s if a1 > 0 else -s

    # ------------------------------------------------------------------
    # embedding and text form

    def embed(self) -> complex:
        """Complex value under w' -> i*sqrt(c'), w -> i*sqrt(c)."""
        a1, a2, a3, a4 = self.coords
        rc = math.sqrt(self.ctx.c)
        rcp = math.sqrt(self.ctx.cprime)
        return complex(float(a1) - float(a4) * rcp * rc,
                       float(a2) * rcp + float(a3) * rc)

    def __str__(self) -> str:
        a1, a2, a3, a4 = self.coords
        return f"{a1} + {a2}*w' + {a3}*w + {a4}*w'w"

    def __repr__(self) -> str:
        return f"FieldElement({self.ctx!r}, {self.coords})"

    _SUFFIXES = ("", "*w'", "*w", "*w'w")

    @classmethod
    def parse(cls, ctx: FieldContext, text: str) -> "FieldElement":
        """Parse the canonical rendering "a1 + a2*w' + a3*w + a4*w'w".

        Signs live on the rational coefficients ("-1/2 + -1/2*w' + ...").
        """
        parts = [p.strip() for p in text.split("+")]
        if len(parts) != 4:
            raise ValueError(f"expected four '+'-separated terms, got {len(parts)}: {text!r}")
        coords = []
        for part, suffix in zip(parts, cls._SUFFIXES):
            if suffix:
                if not part.endswith(suffix):
                    raise ValueError(f"term {part!r} should end with {suffix!r}")
                part = part[: -len(suffix)].strip()
            try:
                coords.append(Fraction(part))
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"bad rational coefficient {part!r}") from exc
        return cls(ctx, tuple(coords))
