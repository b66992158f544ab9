"""Counting representations lambda = xi^2 + eta^2 with xi, eta ring integers.

Two independent routes:

* r_brute: direct enumeration of (xi, eta) with the second coordinate of
  eta solved from the sqrt(d) component of the defining equations;
* r_sym:   enumeration restricted to six mutually exclusive orbit
  representative classes, recombined as 8*(M1+M2+M3+M4) + 2*(M1*+M2*).

Each serves as the oracle for the other. Everything runs on doubled
coordinates: lambda = (P + Q sqrt(d))/2, xi = (A + B sqrt(d))/2,
eta = (C + E sqrt(d))/2, with

    A^2 + d B^2 + C^2 + d E^2 = 2 P      and      A B + C E = Q.
"""

from __future__ import annotations

from math import isqrt

from .quadfield import FieldData, QuadInt, RingClass, sign_quad


def _signed_range(maxabs: int, even_only: bool, parity: int = 0):
    """Integers in [-maxabs, maxabs]; restricted to one parity class."""
    if even_only:
        start = -(maxabs - (maxabs % 2))
        return range(start, maxabs + 1, 2)
    start = -maxabs + ((maxabs + parity) % 2)
    return range(start, maxabs + 1, 2)


def _totally_nonnegative(lam: QuadInt) -> bool:
    d = lam.field.d
    return sign_quad(lam.p, lam.q, d) >= 0 and sign_quad(lam.p, -lam.q, d) >= 0


def _solutions_doubled(field: FieldData, lam: QuadInt) -> list[tuple[int, int, int, int]]:
    """All doubled quadruples (A, B, C, E) with xi = (A+B sqrt d)/2,
    eta = (C+E sqrt d)/2 and xi^2 + eta^2 = lam."""
    if not _totally_nonnegative(lam):
        return []
    d = field.d
    one_mod_four = field.ring_class is RingClass.ONE_MOD_FOUR
    S = 2 * lam.p
    Q = lam.q
    out: list[tuple[int, int, int, int]] = []
    amax = isqrt(S)
    a_values = range(-amax, amax + 1) if one_mod_four else _signed_range(amax, True)
    for A in a_values:
        SA = S - A * A
        bmax = isqrt(SA // d)
        if one_mod_four:
            b_values = _signed_range(bmax, False, A & 1)
        else:
            b_values = _signed_range(bmax, True)
        for B in b_values:
            SB = SA - d * B * B
            qrem = Q - A * B
            cmax = isqrt(SB)
            c_values = range(-cmax, cmax + 1) if one_mod_four else _signed_range(cmax, True)
            for C in c_values:
                rem = SB - C * C
                if C != 0:
                    if qrem % C == 0:
                        E = qrem // C
                        if d * E * E == rem and (E - C) % 2 == 0:
                            out.append((A, B, C, E))
                else:
                    if qrem != 0:
                        continue
                    if rem == 0:
                        out.append((A, B, 0, 0))
                    elif rem % d == 0:
                        e2 = rem // d
                        e = isqrt(e2)
                        if e * e == e2 and e % 2 == 0:
                            out.append((A, B, 0, e))
                            out.append((A, B, 0, -e))
    return out


def two_square_solutions(field: FieldData, lam: QuadInt) -> list[tuple[QuadInt, QuadInt]]:
    """All ordered pairs (xi, eta) in O^2 with xi^2 + eta^2 = lam."""
    return [
        (field.element(a, b), field.element(c, e))
        for a, b, c, e in _solutions_doubled(field, lam)
    ]


def r_brute(field: FieldData, lam: QuadInt) -> int:
    """Exact number of ordered pairs (xi, eta) in O^2 with xi^2 + eta^2 = lam."""
    return len(_solutions_doubled(field, lam))


def _parity_ok(value: int, anchor: int, one_mod_four: bool) -> bool:
    """Ring membership parity: value = anchor (mod 2) when half coordinates
    exist, and value even otherwise (anchor is then even already)."""
    if one_mod_four:
        return (value - anchor) % 2 == 0
    return value % 2 == 0


def r_sym(field: FieldData, lam: QuadInt) -> int:
    """r(lam) via the eight-fold symmetry classes; equals r_brute everywhere.

    The all-zero solution satisfies two fixed-point condition sets at once,
    so lam = 0 is answered directly instead of through the class count.
    """
    if lam.is_zero():
        return 1
    if not _totally_nonnegative(lam):
        return 0
    d = field.d
    one = field.ring_class is RingClass.ONE_MOD_FOUR
    S = 2 * lam.p
    Q = lam.q

    m1 = m2 = m3 = m4 = 0
    m1s = m2s = 0

    amax = isqrt(S)

    # M1: 0 < C < A, B free, E solved from the sqrt(d) component.
    for A in range(amax, 0, -1):
        if not one and A % 2 != 0:
            continue
        SA = S - A * A
        c_step = 1 if one else 2
        for C in range(c_step, A, c_step):
            SAC = SA - C * C
            if SAC < 0:
                break
            bmax = isqrt(SAC // d)
            b_vals = _signed_range(bmax, not one, A & 1)
            for B in b_vals:
                rem = SAC - d * B * B
                qrem = Q - A * B
                if qrem % C == 0:
                    E = qrem // C
                    if d * E * E == rem and _parity_ok(E, C, one):
                        m1 += 1

    # M2: C = 0 < A, E > 0; B is forced by A B = Q.
    for A in range(1, amax + 1):
        if not one and A % 2 != 0:
            continue
        if Q % A != 0:
            continue
        B = Q // A
        if not _parity_ok(B, A, one):
            continue
        rem = S - A * A - d * B * B
        if rem <= 0 or rem % d != 0:
            continue
        e2 = rem // d
        e = isqrt(e2)
        if e * e == e2 and e % 2 == 0:
            m2 += 1

    # M3: 0 < C = A, E < B; B + E and B^2 + E^2 are both forced.
    a_top = isqrt(S // 2)
    for A in range(1, a_top + 1):
        if not one and A % 2 != 0:
            continue
        if Q % A != 0:
            continue
        total = Q // A  # B + E
        R = S - 2 * A * A
        if R % d != 0:
            continue
        m2sum = R // d  # B^2 + E^2
        disc = 2 * m2sum - total * total  # (B - E)^2
        if disc <= 0:
            continue
        t = isqrt(disc)
        if t * t != disc or (total + t) % 2 != 0:
            continue
        B = (total + t) // 2
        E = (total - t) // 2
        if _parity_ok(B, A, one) and _parity_ok(E, A, one):
            m3 += 1

    # M4: A = C = 0, 0 < E < B; possible only when the sqrt(d) part vanishes.
    if Q == 0 and S % d == 0:
        m2sum = S // d
        E = 2
        while 2 * E * E < m2sum:
            b2 = m2sum - E * E
            b = isqrt(b2)
            if b * b == b2 and b % 2 == 0:
                m4 += 1
            E += 2

    # M1*: A = B = 0, i.e. eta^2 = lam, all sign combinations.
    cmax = isqrt(S)
    c_vals = range(-cmax, cmax + 1) if one else _signed_range(cmax, True)
    for C in c_vals:
        rem = S - C * C
        if C != 0:
            if Q % C == 0:
                E = Q // C
                if d * E * E == rem and _parity_ok(E, C, one):
                    m1s += 1
        else:
            if Q != 0:
                continue
            if rem == 0:
                m1s += 1
            elif rem % d == 0:
                e2 = rem // d
                e = isqrt(e2)
                if e * e == e2 and e % 2 == 0:
                    m1s += 2

    # M2*: A = C, B = E, i.e. lam = 2 xi^2.
    pa = lam.p
    if Q % 2 == 0:
        amax2 = isqrt(pa) if pa >= 0 else -1
        a_vals2 = range(-amax2, amax2 + 1) if one else _signed_range(amax2, True)
        for A in a_vals2:
            if A != 0:
                if (Q // 2) % A != 0:
                    continue
                B = Q // 2 // A
                if A * A + d * B * B == pa and _parity_ok(B, A, one):
                    m2s += 1
            else:
                if Q != 0:
                    continue
                if pa % d == 0:
                    b2 = pa // d
                    b = isqrt(b2)
                    if b > 0 and b * b == b2 and _parity_ok(b, 0, one):
                        m2s += 2

    return 8 * (m1 + m2 + m3 + m4) + 2 * (m1s + m2s)
