"""Kronecker character machinery for a real quadratic field: exact weighted
character sums, the correlation constant C_D, the subgroup index, and three
independent routes to the covolume of the corresponding quotient.

C_D is always an exact rational (fractions.Fraction); only the covolume
cross-checks use floating point, and those carry rigorous truncation bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._chartable import kronecker
from .errors import OutOfRange
from .quadfield import FieldData

__all__ = [
    "kronecker",
    "weighted_char_sums",
    "c_constant",
    "index_gamma",
    "l_value_2",
    "covolume",
    "VolumeReport",
]


def weighted_char_sums(field: FieldData) -> tuple[int, int, int]:
    """Exact s_k = sum_{n=1}^{Delta} n^k chi(n) for k = 0, 1, 2.

    The character is even and primitive, so s0 = s1 = 0; both are computed
    and checked rather than assumed.
    """
    from ._chartable import weighted_sums

    s0, s1, s2 = weighted_sums(field.chi_values)
    if s0 != 0 or s1 != 0:
        raise ArithmeticError(
            f"character sums violate s0 = s1 = 0 for d={field.d}: s0={s0}, s1={s1}"
        )
    if s2 <= 0:
        raise ArithmeticError(f"s2 must be positive, got {s2} for d={field.d}")
    return s0, s1, s2


def _chi_factor(field: FieldData) -> int:
    """2 - chi(2) + 2*chi(4), the local factor at 2."""
    return 2 - field.chi(2) + 2 * field.chi(4)


def c_constant(field: FieldData) -> Fraction:
    """The correlation constant C_D = 32*Delta / ((2 - chi(2) + 2 chi(4)) * s2),
    exact."""
    _, _, s2 = weighted_char_sums(field)
    return Fraction(32 * field.delta, _chi_factor(field) * s2)


def index_gamma(field: FieldData) -> int:
    """Index 6 - 3 chi(2) + 6 chi(4) of the even-trace/antitrace subgroup in
    the full Hilbert modular group: 6, 9 or 15."""
    return 6 - 3 * field.chi(2) + 6 * field.chi(4)


def l_value_2(field: FieldData, terms: int) -> tuple[float, float]:
    """Truncated Dirichlet series L(2, chi) = sum chi(n)/n^2 over n <= terms.

    Returns (value, error_bound). Summation by parts with partial character
    sums bounded by Delta gives |tail| <= Delta / terms^2, well inside the
    Delta/terms envelope the callers rely on. A small cushion covers float
    accumulation.
    """
    if terms < field.delta:
        raise OutOfRange(f"terms={terms} must be >= Delta={field.delta}")
    chi = field.chi_values
    delta = field.delta
    total = 0.0
    chunk = 1 << 20
    for lo in range(1, terms + 1, chunk):
        hi = min(lo + chunk, terms + 1)
        n = np.arange(lo, hi, dtype=np.int64)
        c = chi[n % delta].astype(np.float64)
        total += float(np.sum(c / (n.astype(np.float64) ** 2)))
    bound = field.delta / terms**2 + 1e-12
    return total, bound


@dataclass(frozen=True)
class VolumeReport:
    """Three evaluations of the covolume of the subgroup quotient.

    closed_form   : (2 - chi(2) + 2 chi(4)) * (pi^2/Delta) * s2
    siegel_form   : index * (2/pi^2) * Delta^(3/2) * zeta(2) * L(2, chi)
    bernoulli_form: -2 pi^2 (2 - chi(2) + 2 chi(4)) * L(-1, chi), with
                    L(-1, chi) evaluated through the full B2(n/Delta) sum
    l2_truncation_error: relative slack contributed by truncating L(2, chi)
    """

    closed_form: float
    siegel_form: float
    bernoulli_form: float
    l2_truncation_error: float

    def max_relative_spread(self) -> float:
        ref = abs(self.closed_form)
        return max(
            abs(self.siegel_form - self.closed_form),
            abs(self.bernoulli_form - self.closed_form),
        ) / ref


def covolume(field: FieldData, terms: int | None = None) -> VolumeReport:
    """Evaluate the covolume three ways and assert their agreement.

    Raises ArithmeticError if the spreads exceed the truncation bound plus
    1e-9 relative, which would indicate an implementation fault.
    """
    s0, s1, s2 = weighted_char_sums(field)
    factor = _chi_factor(field)
    delta = field.delta
    pi2 = math.pi**2

    closed = factor * (pi2 / delta) * s2

    if terms is None:
        terms = max(delta, 1_000_000)
    lval, lerr = l_value_2(field, terms)
    index = index_gamma(field)
    # index * (2/pi^2) * Delta^(3/2) * (pi^2/6) * L(2,chi)
    siegel = index * delta * math.sqrt(delta) * lval / 3.0
    siegel_abs_err = index * delta * math.sqrt(delta) * lerr / 3.0

    # L(-1, chi) = -(Delta/2) * sum chi(n) B2(n/Delta), B2(x) = x^2 - x + 1/6,
    # kept as an exact rational before the final float multiply.
    b2_sum = Fraction(s2, delta**2) - Fraction(s1, delta) + Fraction(s0, 6)
    l_minus_one = -Fraction(delta, 2) * b2_sum
    bernoulli = -2.0 * pi2 * factor * float(l_minus_one)

    rel_err = siegel_abs_err / abs(closed)
    report = VolumeReport(
        closed_form=closed,
        siegel_form=siegel,
        bernoulli_form=bernoulli,
        l2_truncation_error=rel_err,
    )
    if report.max_relative_spread() > rel_err + 1e-9:
        raise ArithmeticError(
            f"covolume routes disagree for d={field.d}: {report}"
        )
    return report
