"""Trigonometric polynomials with a finite frequency -> coefficient map.

The function represented is h(x) = sum_l h_l exp(2*pi*i*l*x) with x measured
in turns (period 1).  An angular view (period 2*pi) is provided for the
expanding power maps.  Coefficients are stored as complex doubles, optionally
backed by exact Gaussian-rational pairs for the exact solver backends.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass
class TrigPoly:
    coeffs: dict[int, complex]
    real_flag: bool = True
    exact_coeffs: Optional[dict[int, tuple[Fraction, Fraction]]] = field(default=None, repr=False)

    def __post_init__(self):
        self.coeffs = {int(l): complex(c) for l, c in self.coeffs.items() if c != 0}
        if self.exact_coeffs is not None:
            self.exact_coeffs = {
                int(l): (Fraction(re), Fraction(im))
                for l, (re, im) in self.exact_coeffs.items()
                if re != 0 or im != 0
            }
        if self.real_flag:
            for l, c in self.coeffs.items():
                mate = self.coeffs.get(-l, 0j)
                if abs(mate - c.conjugate()) > 1e-12 * max(1.0, abs(c)):
                    raise ValueError(f"real_flag set but h_{-l} != conj(h_{l})")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_cos_sin(terms: Iterable[tuple[int, Fraction | float, Fraction | float]],
                     exact: bool = True) -> "TrigPoly":
        """Build sum_k a_k cos(2 pi nu_k x) + b_k sin(2 pi nu_k x), nu_k > 0.

        terms: iterable of (nu, a, b).  With exact=True the rational cos/sin
        coefficients are kept so exact backends can use them.
        """
        coeffs: dict[int, complex] = {}
        exact_c: dict[int, tuple[Fraction, Fraction]] = {}
        for nu, a, b in terms:
            nu = int(nu)
            if nu <= 0:
                raise ValueError("frequencies must be positive")
            if exact:
                a, b = Fraction(a), Fraction(b)
                re_p, im_p = a / 2, -b / 2
                _acc_exact(exact_c, nu, re_p, im_p)
                _acc_exact(exact_c, -nu, re_p, -im_p)
            av, bv = float(a), float(b)
            coeffs[nu] = coeffs.get(nu, 0j) + complex(av / 2, -bv / 2)
            coeffs[-nu] = coeffs.get(-nu, 0j) + complex(av / 2, bv / 2)
        return TrigPoly(coeffs, real_flag=True, exact_coeffs=exact_c if exact else None)

    @staticmethod
    def from_exact(pairs: dict[int, tuple[Fraction, Fraction]], real_flag: bool = True) -> "TrigPoly":
        coeffs = {l: complex(float(re), float(im)) for l, (re, im) in pairs.items()}
        return TrigPoly(coeffs, real_flag=real_flag, exact_coeffs=dict(pairs))

    # -- structure ---------------------------------------------------------

    @property
    def spectrum(self) -> list[int]:
        return sorted(self.coeffs)

    @property
    def degree(self) -> int:
        return max((abs(l) for l in self.coeffs), default=0)

    @property
    def h0(self) -> complex:
        return self.coeffs.get(0, 0j)

    def exact_h0(self) -> tuple[Fraction, Fraction]:
        if self.exact_coeffs is None:
            raise ValueError("no exact coefficients stored")
        return self.exact_coeffs.get(0, (Fraction(0), Fraction(0)))

    def positive_frequencies(self) -> list[int]:
        return sorted(l for l in self.coeffs if l > 0)

    def lip_angle(self) -> float:
        """Lipschitz bound w.r.t. the angular (radian) variable."""
        return float(sum(abs(l) * abs(c) for l, c in self.coeffs.items()))

    def sup_bound(self) -> float:
        return float(sum(abs(c) for c in self.coeffs.values()))

    # -- evaluation --------------------------------------------------------

    def eval(self, x):
        """Evaluate at x (turns); numpy-vectorized, real output for real polys."""
        x = np.asarray(x, dtype=np.float64)
        if self.real_flag:
            out = np.full(x.shape, float(self.h0.real))
            for l in self.positive_frequencies():
                c = self.coeffs[l]
                ang = TWO_PI * l * x
                out = out + 2.0 * (c.real * np.cos(ang) - c.imag * np.sin(ang))
            return out if out.shape else float(out)
        out = np.zeros(x.shape, dtype=np.complex128)
        for l, c in self.coeffs.items():
            out = out + c * np.exp(2j * np.pi * l * x)
        return out if out.shape else complex(out)

    def eval_angle(self, theta):
        """Evaluate at theta (radians, period 2*pi)."""
        return self.eval(np.asarray(theta, dtype=np.float64) / TWO_PI)

    def eval_mp(self, turn, mp_ctx):
        """Evaluate at an exact turn fraction with an mpmath context."""
        two_pi = 2 * mp_ctx.pi
        if self.exact_coeffs is not None and self.real_flag:
            total = mp_ctx.mpf(0)
            h0re, _ = self.exact_coeffs.get(0, (Fraction(0), Fraction(0)))
            total += mp_ctx.mpf(h0re.numerator) / h0re.denominator if h0re else 0
            for l, (re, im) in self.exact_coeffs.items():
                if l <= 0:
                    continue
                ang = two_pi * l * mp_ctx.mpf(turn.numerator) / turn.denominator \
                    if isinstance(turn, Fraction) else two_pi * l * turn
                total += 2 * (_mpq(mp_ctx, re) * mp_ctx.cos(ang) - _mpq(mp_ctx, im) * mp_ctx.sin(ang))
            return total
        # fall back to double coefficients
        t = float(turn)
        return mp_ctx.mpf(float(self.eval(t)))

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "real": self.real_flag,
            "coeffs": [
                {"l": l, "re": self.coeffs[l].real, "im": self.coeffs[l].imag}
                for l in self.spectrum
            ],
        }

    @staticmethod
    def from_json(obj: dict) -> "TrigPoly":
        extra = set(obj) - {"real", "coeffs"}
        if extra:
            raise ValueError(f"unknown fields in trig poly: {sorted(extra)}")
        coeffs = {}
        for ent in obj["coeffs"]:
            extra = set(ent) - {"l", "re", "im"}
            if extra:
                raise ValueError(f"unknown fields in coefficient: {sorted(extra)}")
            coeffs[int(ent["l"])] = complex(float(ent["re"]), float(ent.get("im", 0.0)))
        return TrigPoly(coeffs, real_flag=bool(obj.get("real", True)))


def _acc_exact(d, l, re, im):
    old_re, old_im = d.get(l, (Fraction(0), Fraction(0)))
    d[l] = (old_re + re, old_im + im)


def _mpq(mp_ctx, q: Fraction):
    return mp_ctx.mpf(q.numerator) / q.denominator
