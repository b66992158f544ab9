"""Correlation sums over a box: the r-value accumulation table, the shifted
correlation N_D(V1, V2) = sum r(lambda) r(lambda+1), its deviation diagnostics
F and G, and a small-scale quadruple-enumeration oracle.

Geometry and conventions
------------------------
A table cell is a lattice point (i, j) meaning lambda = (i + j*sqrt(d))/sigma
with sigma = 2 when d = 1 (mod 4) (doubled coordinates) and sigma = 1
otherwise. The stored window for box bounds (V1, V2) is the closed region

    lambda >= 0,  lambda^sigma >= 0,  lambda <= V1 + 1,  lambda^sigma <= V2 + 1,

so every lambda + 1 needed by the correlation is present. Box membership in
the correlation itself is half-open (0 <= lambda < V1, 0 <= lambda^sigma < V2)
and decided by exact integer sign tests; lambda = 0 is included by default.

All bookkeeping is integer-exact; floats only seed the search for window
edges, which are then fixed by exact predicates.
"""

from __future__ import annotations

import csv
import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, sqrt

import numpy as np

from .character import c_constant
from .errors import CapacityExceeded, OutOfRange, ScaleGuard
from .quadfield import FieldData, QuadInt, RingClass, sign_quad
from .repcount import r_brute

DEFAULT_MEMORY_BUDGET = 2 << 30
MEMORY_BUDGET_ENV = "QUADCORR_MEM_BUDGET"
ORACLE_QUADRUPLE_LIMIT = 10_000_000


# ---------------------------------------------------------------------------
# Exact box bounds. allows(p, q, strict) answers "bound >= (p + q sqrt d)/2"
# (or strictly greater), with (p, q) doubled coordinates.
# ---------------------------------------------------------------------------


class RationalBound:
    """An exact rational box bound."""

    __slots__ = ("d", "value")

    def __init__(self, d: int, value: Fraction):
        self.d = d
        self.value = Fraction(value)

    def allows(self, p: int, q: int, strict: bool) -> bool:
        num, den = self.value.numerator, self.value.denominator
        s = sign_quad(p * den - 2 * num, q * den, self.d)
        return s < 0 if strict else s <= 0

    def plus_one(self) -> "RationalBound":
        return RationalBound(self.d, self.value + 1)

    def is_positive(self) -> bool:
        return self.value > 0

    def __float__(self) -> float:
        return float(self.value)

    def describe(self) -> str:
        v = self.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


class InvSqrtBound:
    """The bound v**(-1/2) for a positive rational v, kept exact by squaring."""

    __slots__ = ("d", "v")

    def __init__(self, d: int, v: Fraction):
        v = Fraction(v)
        if v <= 0:
            raise OutOfRange("inverse-square-root bound needs v > 0")
        self.d = d
        self.v = v

    def allows(self, p: int, q: int, strict: bool) -> bool:
        s_lam = sign_quad(p, q, self.d)
        if s_lam < 0:
            return True
        if s_lam == 0:
            return True  # bound is strictly positive
        # lambda > 0: compare lambda^2 * v against 1 exactly
        nv, dv = self.v.numerator, self.v.denominator
        a = (p * p + self.d * q * q) * nv - 4 * dv
        b = 2 * p * q * nv
        s = sign_quad(a, b, self.d)
        return s < 0 if strict else s <= 0

    def plus_one(self) -> "OffsetBound":
        return OffsetBound(self, 1)

    def is_positive(self) -> bool:
        return True

    def __float__(self) -> float:
        return float(self.v.denominator / self.v.numerator) ** 0.5

    def describe(self) -> str:
        return f"{Fraction(self.v)}**(-1/2)"


class OffsetBound:
    """inner bound shifted by an integer offset."""

    __slots__ = ("inner", "offset")

    def __init__(self, inner, offset: int):
        self.inner = inner
        self.offset = offset

    @property
    def d(self) -> int:
        return self.inner.d

    def allows(self, p: int, q: int, strict: bool) -> bool:
        return self.inner.allows(p - 2 * self.offset, q, strict)

    def plus_one(self) -> "OffsetBound":
        return OffsetBound(self.inner, self.offset + 1)

    def is_positive(self) -> bool:
        return True

    def __float__(self) -> float:
        return float(self.inner) + self.offset

    def describe(self) -> str:
        return f"{self.inner.describe()}+{self.offset}"


Bound = RationalBound | InvSqrtBound | OffsetBound


def make_bound(field: FieldData, value) -> Bound:
    if isinstance(value, (RationalBound, InvSqrtBound, OffsetBound)):
        if value.d != field.d:
            raise OutOfRange("bound belongs to a different field")
        return value
    return RationalBound(field.d, Fraction(value))


# ---------------------------------------------------------------------------
# Window edge search: float guess, then exact adjustment.
# ---------------------------------------------------------------------------

_SCAN_CAP = 1 << 20


def _doubled(i: int, j: int, sigma: int) -> tuple[int, int]:
    return (i, j) if sigma == 2 else (2 * i, 2 * j)


def _max_j(bound: Bound, i: int, sigma: int, strict: bool) -> int:
    """Largest j with bound >= (i + j sqrt d)/sigma (or > when strict)."""
    d = bound.d
    guess = int((sigma * float(bound) - i) / sqrt(d))

    def ok(j: int) -> bool:
        p, q = _doubled(i, j, sigma)
        return bound.allows(p, q, strict)

    j = guess
    steps = 0
    if ok(j):
        while ok(j + 1):
            j += 1
            steps += 1
            if steps > _SCAN_CAP:
                raise ArithmeticError("window scan failed to converge")
    else:
        while not ok(j):
            j -= 1
            steps += 1
            if steps > _SCAN_CAP:
                raise ArithmeticError("window scan failed to converge")
    return j


def _min_j(bound: Bound, i: int, sigma: int, strict: bool) -> int:
    """Smallest j with bound >= (i - j sqrt d)/sigma (or > when strict)."""
    d = bound.d
    guess = int(-(sigma * float(bound) - i) / sqrt(d))

    def ok(j: int) -> bool:
        p, q = _doubled(i, -j, sigma)
        return bound.allows(p, q, strict)

    j = guess
    steps = 0
    if ok(j):
        while ok(j - 1):
            j -= 1
            steps += 1
            if steps > _SCAN_CAP:
                raise ArithmeticError("window scan failed to converge")
    else:
        while not ok(j):
            j += 1
            steps += 1
            if steps > _SCAN_CAP:
                raise ArithmeticError("window scan failed to converge")
    return j


def _snap_up(j: int, parity: int) -> int:
    return j + ((parity - j) % 2)


def _snap_down(j: int, parity: int) -> int:
    return j - ((j - parity) % 2)


def _memory_budget(explicit: int | None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get(MEMORY_BUDGET_ENV)
    if env:
        return int(env)
    return DEFAULT_MEMORY_BUDGET


# ---------------------------------------------------------------------------
# The accumulation table.
# ---------------------------------------------------------------------------


class RepTable:
    """Dense ragged table of r-values over the closed extended window.

    counts are kept per row i as a contiguous int32 slice covering
    j = y0[i], y0[i]+2, ..., y0[i]+2*(klen[i]-1); rows are glued into one
    flat array. In symmetric mode (only for V1 = V2) just the j >= 0 half
    is stored and negative j is answered through r(lam) = r(lam^sigma).
    """

    def __init__(self, field: FieldData, v1, v2, *, symmetric: bool | None = None,
                 threads: int = 1, memory_budget: int | None = None):
        self.field = field
        self.sigma = 2 if field.ring_class is RingClass.ONE_MOD_FOUR else 1
        self.v1 = make_bound(field, v1)
        self.v2 = make_bound(field, v2)
        if not (self.v1.is_positive() and self.v2.is_positive()):
            raise OutOfRange("box bounds must be positive")
        self.b1 = self.v1.plus_one()
        self.b2 = self.v2.plus_one()

        same = (
            isinstance(self.v1, RationalBound)
            and isinstance(self.v2, RationalBound)
            and self.v1.value == self.v2.value
        )
        if symmetric is None:
            symmetric = same
        if symmetric and not same:
            raise OutOfRange("symmetric storage requires equal rational bounds")
        self.symmetric = symmetric

        self._compute_rows()
        self._check_budget(threads, memory_budget)
        self._build(max(1, threads))

    # -- geometry ---------------------------------------------------------

    def _parity(self, i: int) -> int:
        return i & 1 if self.sigma == 2 else 0

    def _compute_rows(self) -> None:
        d = self.field.d
        sigma = self.sigma
        cap = int((float(self.b1) + float(self.b2)) * sigma / 2) + 4

        jlo_full: list[int] = []
        jhi_full: list[int] = []
        for i in range(cap + 1):
            top = isqrt(i * i // d)
            hi = min(top, _max_j(self.b1, i, sigma, strict=False))
            lo = max(-top, _min_j(self.b2, i, sigma, strict=False))
            jlo_full.append(lo)
            jhi_full.append(hi)

        while jhi_full and jhi_full[-1] < jlo_full[-1]:
            jlo_full.pop()
            jhi_full.pop()
        self.imax = len(jhi_full) - 1
        if self.imax < 0:
            raise OutOfRange("empty window")

        n = self.imax + 1
        y0 = np.zeros(n, dtype=np.int64)
        yhi = np.zeros(n, dtype=np.int64)
        klen = np.zeros(n, dtype=np.int64)
        self.jlo_full = jlo_full
        self.jhi_full = jhi_full
        for i in range(n):
            par = self._parity(i)
            lo = jlo_full[i]
            hi = jhi_full[i]
            if self.symmetric:
                lo = par  # keep only j >= 0; the mirror half follows from conjugation
            lo_p = _snap_up(lo, par)
            hi_p = _snap_down(hi, par)
            if hi_p < lo_p:
                y0[i], yhi[i], klen[i] = 0, -2, 0
            else:
                y0[i], yhi[i], klen[i] = lo_p, hi_p, (hi_p - lo_p) // 2 + 1
        self.y0 = y0
        self.yhi = yhi
        self.klen = klen
        self.row_start = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(klen, out=self.row_start[1:])
        self.cells = int(self.row_start[-1])

    def _check_budget(self, threads: int, memory_budget: int | None) -> None:
        budget = _memory_budget(memory_budget)
        copies = 1 + (threads if threads > 1 else 0)
        need = self.cells * 4 * copies + (self.imax + 1) * 8 * 5
        if need > budget:
            raise CapacityExceeded(
                f"table needs about {need} bytes ({self.cells} cells, "
                f"{copies} copies) against a budget of {budget}"
            )

    # -- population -------------------------------------------------------

    def _square_points(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Distinct squares xi^2 inside the window as (i, j, multiplicity),
        one representative per {xi, -xi} pair."""
        d = self.field.d
        imax = self.imax
        si: list[int] = []
        sj: list[int] = []
        sw: list[int] = []

        def push(iv: int, jv: int, w: int) -> None:
            if iv <= imax and self.jlo_full[iv] <= jv <= self.jhi_full[iv]:
                si.append(iv)
                sj.append(jv)
                sw.append(w)

        if self.sigma == 1:
            amax = isqrt(imax)
            for a in range(0, amax + 1):
                bmax = isqrt((imax - a * a) // d)
                for b in range(0, bmax + 1):
                    iv = a * a + d * b * b
                    jv = 2 * a * b
                    if a == 0 and b == 0:
                        push(0, 0, 1)
                    elif a == 0 or b == 0:
                        push(iv, jv, 2)
                    else:
                        push(iv, jv, 2)
                        push(iv, -jv, 2)
        else:
            amax = isqrt(2 * imax)
            for A in range(0, amax + 1):
                rem = 2 * imax - A * A
                bmax = isqrt(rem // d)
                bstart = A & 1
                for B in range(bstart, bmax + 1, 2):
                    iv = (A * A + d * B * B) // 2
                    jv = A * B
                    if A == 0 and B == 0:
                        push(0, 0, 1)
                    elif A == 0 or B == 0:
                        push(iv, jv, 2)
                    else:
                        push(iv, jv, 2)
                        push(iv, -jv, 2)
        return (
            np.array(si, dtype=np.int64),
            np.array(sj, dtype=np.int64),
            np.array(sw, dtype=np.int64),
        )

    def _build(self, threads: int) -> None:
        si, sj, sw = self._square_points()
        n_pts = len(si)
        flat = np.zeros(self.cells, dtype=np.int32)

        def accumulate(target: np.ndarray, lo: int, hi: int) -> None:
            for t in range(lo, hi):
                ii = si[t] + si[t:]
                jj = sj[t] + sj[t:]
                ww = sw[t] * sw[t:]
                ww = ww * 2
                ww[0] //= 2
                mask = ii <= self.imax
                ii = ii[mask]
                jj = jj[mask]
                ww = ww[mask]
                lo_ok = jj >= self.y0[ii]
                hi_ok = jj <= self.yhi[ii]
                mask2 = lo_ok & hi_ok
                ii = ii[mask2]
                jj = jj[mask2]
                ww = ww[mask2]
                idx = self.row_start[ii] + ((jj - self.y0[ii]) >> 1)
                np.add.at(target, idx, ww.astype(np.int32))

        if threads <= 1 or n_pts < 64:
            accumulate(flat, 0, n_pts)
        else:
            partials = [np.zeros(self.cells, dtype=np.int32) for _ in range(threads)]
            bounds = [round(k * n_pts / threads) for k in range(threads + 1)]
            workers = [
                threading.Thread(target=accumulate, args=(partials[k], bounds[k], bounds[k + 1]))
                for k in range(threads)
            ]
            for w in workers:
                w.start()
            for w in workers:
                w.join()
            for part in partials:  # fixed order: the merge is associative anyway
                flat += part
        if self.cells and int(flat.min()) < 0:
            raise CapacityExceeded("cell counter overflowed 32 bits")
        self.flat = flat

    # -- access -----------------------------------------------------------

    def contains(self, i: int, j: int) -> bool:
        return 0 <= i <= self.imax and self.jlo_full[i] <= j <= self.jhi_full[i]

    def lookup(self, i: int, j: int) -> int:
        """r(lambda) for the cell (i, j); raises OutOfRange outside the window."""
        if not self.contains(i, j):
            raise OutOfRange(f"cell ({i}, {j}) lies outside the stored window")
        if (j - self._parity(i)) % 2 != 0:
            return 0
        if self.symmetric and j < 0:
            j = -j
        if self.klen[i] == 0 or not (self.y0[i] <= j <= self.yhi[i]):
            return 0
        return int(self.flat[self.row_start[i] + ((j - self.y0[i]) >> 1)])

    def value(self, lam: QuadInt) -> int:
        """r(lambda) for a ring element inside the window."""
        if lam.field.d != self.field.d:
            raise OutOfRange("element from another field")
        p, q = lam.p, lam.q
        if self.sigma == 2:
            return self.lookup(p, q)
        if p % 2 or q % 2:
            raise OutOfRange("non-integral coordinates")
        return self.lookup(p // 2, q // 2)

    def nbytes(self) -> int:
        return int(self.flat.nbytes)

    def write_csv(self, stream) -> None:
        """Full window as CSV: metadata line, header, one row per cell."""
        doubled = 1 if self.sigma == 2 else 0
        stream.write(f"# D={self.field.d} doubled={doubled}\n")
        writer = csv.writer(stream)
        writer.writerow(["x", "y", "r"])
        for i in range(self.imax + 1):
            par = self._parity(i)
            lo = _snap_up(self.jlo_full[i], par)
            hi = _snap_down(self.jhi_full[i], par)
            for j in range(lo, hi + 1, 2):
                writer.writerow([i, j, self.lookup(i, j)])


def build_rep_table(field: FieldData, v1, v2, *, symmetric: bool | None = None,
                    threads: int = 1, memory_budget: int | None = None) -> RepTable:
    """Populate the r-value table for the extended box (v1+1, v2+1)."""
    return RepTable(field, v1, v2, symmetric=symmetric, threads=threads,
                    memory_budget=memory_budget)


# ---------------------------------------------------------------------------
# Correlation over the strict box.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CorrelationResult:
    d: int
    v1_label: str
    v2_label: str
    n_value: int
    main_term: float
    deviation: float
    lambda_zero_included: bool
    c_num: int
    c_den: int

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "v1": self.v1_label,
            "v2": self.v2_label,
            "n_value": self.n_value,
            "c_constant_num": self.c_num,
            "c_constant_den": self.c_den,
            "deviation": self.deviation,
        }


def _strict_row_range(table: RepTable, i: int) -> tuple[int, int]:
    d = table.field.d
    sigma = table.sigma
    top = isqrt(i * i // d)
    hi = min(top, _max_j(table.v1, i, sigma, strict=True))
    lo = max(-top, _min_j(table.v2, i, sigma, strict=True))
    return lo, hi


def correlation(field: FieldData, v1, v2, *, table: RepTable | None = None,
                include_lambda_zero: bool = True, symmetric: bool | None = None,
                threads: int = 1, memory_budget: int | None = None) -> CorrelationResult:
    """N_D(v1, v2) = sum of r(lambda) r(lambda + 1) over the half-open box."""
    if table is None:
        table = build_rep_table(field, v1, v2, symmetric=symmetric,
                                threads=threads, memory_budget=memory_budget)
    else:
        want1 = make_bound(field, v1).describe()
        want2 = make_bound(field, v2).describe()
        if table.v1.describe() != want1 or table.v2.describe() != want2:
            raise OutOfRange("supplied table was built for different bounds")
    sigma = table.sigma
    total = 0
    for i in range(table.imax + 1):
        if i == 0 and not include_lambda_zero:
            continue
        lo, hi = _strict_row_range(table, i)
        par = table._parity(i)
        lo = _snap_up(lo, par)
        hi = _snap_down(hi, par)
        if hi < lo:
            continue
        i2 = i + sigma
        if table.symmetric:
            # strict box is symmetric: fold onto j >= 0
            start_pos = 2 - par if par == 0 else 1
            if hi >= start_pos:
                k1 = (start_pos - int(table.y0[i])) >> 1
                k2 = (start_pos - int(table.y0[i2])) >> 1
                ln = (hi - start_pos) // 2 + 1
                a = table.flat[table.row_start[i] + k1: table.row_start[i] + k1 + ln]
                b = table.flat[table.row_start[i2] + k2: table.row_start[i2] + k2 + ln]
                total += 2 * int(np.dot(a.astype(np.int64), b.astype(np.int64)))
            if par == 0 and lo <= 0 <= hi:
                total += table.lookup(i, 0) * table.lookup(i2, 0)
        else:
            k1 = (lo - int(table.y0[i])) >> 1
            k2 = (lo - int(table.y0[i2])) >> 1
            ln = (hi - lo) // 2 + 1
            a = table.flat[table.row_start[i] + k1: table.row_start[i] + k1 + ln]
            b = table.flat[table.row_start[i2] + k2: table.row_start[i2] + k2 + ln]
            total += int(np.dot(a.astype(np.int64), b.astype(np.int64)))

    c = c_constant(field)
    main = float(c) * float(table.v1) * float(table.v2)
    return CorrelationResult(
        d=field.d,
        v1_label=table.v1.describe(),
        v2_label=table.v2.describe(),
        n_value=total,
        main_term=main,
        deviation=total - main,
        lambda_zero_included=include_lambda_zero,
        c_num=c.numerator,
        c_den=c.denominator,
    )


# ---------------------------------------------------------------------------
# Integer-grid N(V, V) for the deviation diagnostics.
# ---------------------------------------------------------------------------


def correlation_grid(field: FieldData, xmax: int, *, include_lambda_zero: bool = True,
                     symmetric: bool | None = True, threads: int = 1,
                     memory_budget: int | None = None,
                     table: RepTable | None = None) -> np.ndarray:
    """N_D(V, V) for every integer V = 0..xmax, as one int64 array.

    Cells are bucketed by the first integer V that contains them, which is
    floor(max(lambda, lambda^sigma)) + 1, and the buckets are prefix-summed.
    """
    if xmax < 0:
        raise OutOfRange("xmax must be >= 0")
    if table is None:
        table = build_rep_table(field, xmax, xmax, symmetric=symmetric,
                                threads=threads, memory_budget=memory_budget)
    sigma = table.sigma
    d = field.d
    buckets = np.zeros(xmax + 2, dtype=np.int64)

    jabs_max = int(max(int(table.yhi.max(initial=0)), -int(table.y0.min(initial=0))))
    fl = np.array([isqrt(j * j * d) for j in range(jabs_max + 1)], dtype=np.int64)

    for i in range(table.imax + 1):
        if i == 0 and not include_lambda_zero:
            continue
        kl = int(table.klen[i])
        if kl == 0:
            continue
        i2 = i + sigma
        if i2 > table.imax:
            continue  # all such cells exceed the strict grid
        js = int(table.y0[i]) + 2 * np.arange(kl, dtype=np.int64)
        vstar = (i + fl[np.abs(js)]) // sigma + 1
        mask = vstar <= xmax
        mask &= (js >= table.y0[i2]) & (js <= table.yhi[i2])
        if not mask.any():
            continue
        js_m = js[mask]
        r1 = table.flat[table.row_start[i]: table.row_start[i] + kl][mask].astype(np.int64)
        k2 = table.row_start[i2] + ((js_m - table.y0[i2]) >> 1)
        r2 = table.flat[k2].astype(np.int64)
        prods = r1 * r2
        if table.symmetric:
            prods = np.where(js_m > 0, 2 * prods, prods)
        np.add.at(buckets, vstar[mask], prods)

    return np.cumsum(buckets)[: xmax + 1]


@dataclass(frozen=True)
class FCheckpoint:
    """F at one checkpoint: the running maximum of |N(V,V) - C_D V^2| over
    the integer grid, both for V < x (strict) and V <= x (inclusive)."""

    x: int
    f_strict: Fraction
    f_inclusive: Fraction


def f_deviation(field: FieldData, xmax: int, checkpoints: list[int] | None = None,
                *, include_lambda_zero: bool = True, threads: int = 1,
                memory_budget: int | None = None) -> list[FCheckpoint]:
    """Deviation suprema on the integer grid V in {1, ..., xmax}."""
    if xmax < 1:
        raise OutOfRange("xmax must be >= 1")
    if checkpoints is None:
        checkpoints = [xmax]
    if any(c < 1 or c > xmax for c in checkpoints):
        raise OutOfRange("checkpoints must lie in [1, xmax]")
    grid = correlation_grid(field, xmax, include_lambda_zero=include_lambda_zero,
                            threads=threads, memory_budget=memory_budget)
    c = c_constant(field)
    num, den = c.numerator, c.denominator
    dev = [0] * (xmax + 1)
    for v in range(1, xmax + 1):
        dev[v] = abs(int(grid[v]) * den - num * v * v)
    running = [0] * (xmax + 1)
    best = 0
    for v in range(1, xmax + 1):
        best = max(best, dev[v])
        running[v] = best
    out = []
    for cpt in sorted(set(checkpoints)):
        strict = running[cpt - 1] if cpt >= 2 else 0
        out.append(FCheckpoint(
            x=cpt,
            f_strict=Fraction(strict, den),
            f_inclusive=Fraction(running[cpt], den),
        ))
    return out


def g_ratio(field: FieldData, v, *, include_lambda_zero: bool = True,
            threads: int = 1, memory_budget: int | None = None) -> float:
    """N_D(v, v**(-1/2)) / (C_D sqrt(v)) for rational v > 1."""
    v = Fraction(v)
    if v <= 1:
        raise OutOfRange("g_ratio needs v > 1")
    res = correlation(field, v, InvSqrtBound(field.d, v),
                      include_lambda_zero=include_lambda_zero,
                      threads=threads, memory_budget=memory_budget)
    c = Fraction(res.c_num, res.c_den)
    return res.n_value / (float(c) * sqrt(v))


# ---------------------------------------------------------------------------
# Quadruple-enumeration oracle (independent of the table route).
# ---------------------------------------------------------------------------


def correlation_group_oracle(field: FieldData, v1, v2, *,
                             include_lambda_zero: bool = True) -> int:
    """Count quadruples (g1, g2, g3, g4) in O^4 with g1^2 + g2^2 =
    g3^2 + g4^2 + 1 and g3^2 + g4^2 in the half-open box.

    This enumerates the matrix set behind the correlation identity point by
    point, so it must return exactly correlation(...).n_value. Only usable
    on small boxes; raises ScaleGuard beyond roughly 1e7 quadruples worth
    of work.
    """
    b1 = make_bound(field, v1)
    b2 = make_bound(field, v2)
    if not (b1.is_positive() and b2.is_positive()):
        raise OutOfRange("box bounds must be positive")

    d = field.d
    one = field.ring_class is RingClass.ONE_MOD_FOUR
    # trace bound: lambda + lambda^sigma < v1 + v2, so the doubled quadratic
    # form c1^2 + d c2^2 + e1^2 + d e2^2 = 2 P stays below 2 (v1 + v2)
    smax = int(2 * (float(b1) + float(b2))) + 4
    parity_factor = 4.0 if one else 16.0
    est = 100.0 + (9.87 / 2.0) * smax * smax / (d * parity_factor)
    if est > ORACLE_QUADRUPLE_LIMIT:
        raise ScaleGuard(f"estimated work {est:.3g} exceeds {ORACLE_QUADRUPLE_LIMIT}")

    cache: dict[tuple[int, int], int] = {}
    total = 0

    def bump(P: int, Q: int) -> int:
        lam_next = field.element(P + 2, Q)
        key = (P + 2, Q)
        r = cache.get(key)
        if r is None:
            r = r_brute(field, lam_next)
            cache[key] = r
        return r

    m1 = isqrt(smax)
    c1_range = range(-m1, m1 + 1) if one else range(-(m1 - m1 % 2), m1 + 1, 2)
    for c1 in c1_range:
        s1 = smax - c1 * c1
        if s1 < 0:
            continue
        m2 = isqrt(s1 // d)
        c2_start = (c1 & 1) if one else 0
        for c2 in range(-(m2 - ((m2 - c2_start) % 2)), m2 + 1, 2):
            s2 = s1 - d * c2 * c2
            if s2 < 0:
                continue
            m3 = isqrt(s2)
            e1_range = range(-m3, m3 + 1) if one else range(-(m3 - m3 % 2), m3 + 1, 2)
            for e1 in e1_range:
                s3 = s2 - e1 * e1
                if s3 < 0:
                    continue
                m4 = isqrt(s3 // d)
                e2_start = (e1 & 1) if one else 0
                for e2 in range(-(m4 - ((m4 - e2_start) % 2)), m4 + 1, 2):
                    P = (c1 * c1 + d * c2 * c2 + e1 * e1 + d * e2 * e2) // 2
                    Q = c1 * c2 + e1 * e2
                    if not include_lambda_zero and P == 0 and Q == 0:
                        continue
                    # box: lambda >= 0 (automatic), strict upper bounds
                    if not b1.allows(P, Q, True):
                        continue
                    if not b2.allows(P, -Q, True):
                        continue
                    total += bump(P, Q)
    return total
