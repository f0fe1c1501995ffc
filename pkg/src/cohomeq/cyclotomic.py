"""Exact arithmetic in Q(zeta_n), zeta_n = exp(2*pi*i/n).

Elements are represented by rational coefficient vectors modulo the n-th
cyclotomic polynomial.  Only small orders are ever needed (n = lcm(4, q) for
rational rotations r/q), so the naive dense polynomial arithmetic is plenty.
"""
from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache


def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return _poly_trim(out)


def _poly_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] * inv
        if c == 0:
            continue
        q[i] = c
        for j, bj in enumerate(b):
            a[i + j] -= c * bj
    return _poly_trim(q), _poly_trim(a)


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[Fraction, ...]:
    """Coefficients of the n-th cyclotomic polynomial, low degree first."""
    # x^n - 1 divided by the product of Phi_d over proper divisors d of n
    num = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            q, r = _poly_divmod(num, list(cyclotomic_poly(d)))
            assert not r
            num = q
    return tuple(num)


class Cyclotomic:
    """An element of Q(zeta_n), reduced modulo Phi_n."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs):
        self.n = n
        mod = list(cyclotomic_poly(n))
        c = [Fraction(v) for v in coeffs]
        if len(c) >= len(mod):
            _, c = _poly_divmod(c, mod)
        c += [Fraction(0)] * (len(mod) - 1 - len(c))
        self.coeffs = tuple(c)

    @staticmethod
    def zero(n: int) -> "Cyclotomic":
        return Cyclotomic(n, [])

    @staticmethod
    def from_rational(n: int, q) -> "Cyclotomic":
        return Cyclotomic(n, [Fraction(q)])

    @staticmethod
    def root(n: int, k: int = 1) -> "Cyclotomic":
        """zeta_n^k."""
        k %= n
        return Cyclotomic(n, [Fraction(0)] * k + [Fraction(1)])

    @staticmethod
    def gaussian(n: int, re, im) -> "Cyclotomic":
        """re + i*im; requires 4 | n so that i = zeta_n^(n/4)."""
        if n % 4 != 0:
            raise ValueError("need 4 | n to embed Gaussian rationals")
        return Cyclotomic.from_rational(n, re) + Cyclotomic.root(n, n // 4) * Fraction(im)

    def _check(self, other):
        if isinstance(other, Cyclotomic):
            if other.n != self.n:
                raise ValueError("mixed cyclotomic orders")
            return other
        return Cyclotomic.from_rational(self.n, other)

    def __add__(self, other):
        o = self._check(other)
        return Cyclotomic(self.n, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.n, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.n, [a * Fraction(other) for a in self.coeffs])
        o = self._check(other)
        return Cyclotomic(self.n, _poly_mul(list(self.coeffs), list(o.coeffs)))

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        """Extended Euclid against Phi_n (irreducible, so any nonzero inverts)."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic")
        r0, r1 = list(cyclotomic_poly(self.n)), _poly_trim(list(self.coeffs))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        assert r1, "gcd degenerated; Phi_n should be irreducible"
        inv_lead = 1 / r1[0]
        return Cyclotomic(self.n, [c * inv_lead for c in s1])

    def __truediv__(self, other):
        o = self._check(other)
        return self * o.inverse()

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other):
        try:
            o = self._check(other)
        except (ValueError, TypeError):
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.n, self.coeffs))

    def conjugate(self) -> "Cyclotomic":
        """Complex conjugate: substitute zeta -> zeta^(n-1)."""
        out = Cyclotomic.zero(self.n)
        for j, c in enumerate(self.coeffs):
            if c != 0:
                out = out + Cyclotomic.root(self.n, (self.n - j) % self.n) * c
        return out

    def to_complex(self) -> complex:
        z = 0j
        for j, c in enumerate(self.coeffs):
            if c != 0:
                z += float(c) * cmath.exp(2j * cmath.pi * j / self.n)
        return z

    def __repr__(self):
        return f"Cyclotomic(n={self.n}, coeffs={self.coeffs})"


def _poly_sub(a, b):
    out = [Fraction(0)] * max(len(a), len(b))
    for i, v in enumerate(a):
        out[i] += v
    for i, v in enumerate(b):
        out[i] -= v
    return _poly_trim(out)
