"""Exponential growth of the free Lie algebra on one generator per odd degree >= 3.

With ``f(t) = t^3/(1 - t^2)`` the Poincare series of the generators, the
universal enveloping algebra is the tensor algebra, so

    prod_d (1 - t^d)^(-A_d) = 1/(1 - f(t)).

Applying ``t d/dt log`` gives ``sum_n a_n t^n = p(t)`` with
``a_n = sum_{d | n} d A_d`` and

    p(t) = t^3 (3 - t^2) / ((1 - t^2)(1 - t^2 - t^3)),

and Moebius inversion recovers ``A_n``.  All series work is exact; floats only
enter root finding and the asymptotic check ``a_n alpha^n -> 1``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import mobius

NUMERATOR = (0, 0, 0, 3, 0, -1)  # t^3 (3 - t^2)
DENOMINATOR = (1, 0, -2, -1, 1, 1)  # (1 - t^2)(1 - t^2 - t^3)


class PowerSeries:
    """Exact rational power series truncated after ``t^order``."""

    def __init__(self, coeffs, order: int):
        c = [Fraction(x) for x in list(coeffs)[: order + 1]]
        self.coeffs = c + [Fraction(0)] * (order + 1 - len(c))
        self.order = order

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        n = min(self.order, other.order)
        return PowerSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], n)

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        n = min(self.order, other.order)
        return PowerSeries([a - b for a, b in zip(self.coeffs, other.coeffs)], n)

    def __mul__(self, other: "PowerSeries") -> "PowerSeries":
        n = min(self.order, other.order)
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coeffs[: n + 1]):
            if a:
                for j, b in enumerate(other.coeffs[: n + 1 - i]):
                    out[i + j] += a * b
        return PowerSeries(out, n)

    def scale(self, c) -> "PowerSeries":
        return PowerSeries([c * a for a in self.coeffs], self.order)

    def inverse(self) -> "PowerSeries":
        if self.coeffs[0] == 0:
            raise ZeroDivisionError("constant term is zero")
        n = self.order
        inv = [Fraction(0)] * (n + 1)
        inv[0] = 1 / self.coeffs[0]
        for k in range(1, n + 1):
            s = sum(self.coeffs[j] * inv[k - j] for j in range(1, k + 1))
            inv[k] = -s * inv[0]
        return PowerSeries(inv, n)

    def log_one_minus_inverse(self) -> "PowerSeries":
        """``log(1/(1 - self)) = sum_k self^k / k`` for a series without constant term."""
        if self.coeffs[0] != 0:
            raise ValueError("series must vanish at 0")
        out = PowerSeries([], self.order)
        power = PowerSeries([1], self.order)
        for k in range(1, self.order + 1):
            power = power * self
            if not any(power.coeffs):
                break
            out = out + power.scale(Fraction(1, k))
        return out


def f_series(order: int) -> PowerSeries:
    """``t^3 / (1 - t^2)``: one generator in each odd degree >= 3."""
    return PowerSeries([1 if n >= 3 and n % 2 else 0 for n in range(order + 1)], order)


@lru_cache(maxsize=None)
def _p_coefficients(n_max: int) -> tuple[int, ...]:
    a = [0] * (n_max + 1)
    for n in range(n_max + 1):
        s = NUMERATOR[n] if n < len(NUMERATOR) else 0
        for j in range(1, min(n, len(DENOMINATOR) - 1) + 1):
            s -= DENOMINATOR[j] * a[n - j]
        a[n] = s
    return tuple(a)


def p_coefficients(n_max: int) -> list[int]:
    """``[a_0, a_1, ..., a_N]`` of ``p(t)`` by the recurrence of its denominator."""
    if n_max < 1:
        raise ValueError("order must be at least 1")
    return list(_p_coefficients(n_max))


def p_coefficients_by_series(n_max: int) -> list[int]:
    """Oracle: numerator times the term-by-term inverse of the denominator."""
    s = PowerSeries(NUMERATOR, n_max) * PowerSeries(DENOMINATOR, n_max).inverse()
    out = []
    for c in s.coeffs:
        if c.denominator != 1:
            raise ArithmeticError(f"non-integral coefficient {c}")
        out.append(int(c))
    return out


def lie_dimensions(n_max: int, a: list[int] | None = None) -> list[int]:
    """``[A_0, A_1, ..., A_N]`` by Moebius inversion of ``a_n = sum_{d|n} d A_d``."""
    a = p_coefficients(n_max) if a is None else a
    out = [0] * (n_max + 1)
    for n in range(1, n_max + 1):
        s = sum(int(mobius(n // d)) * a[d] for d in _divisors(n))
        if s % n:
            raise ArithmeticError(f"A_{n} = {s}/{n} is not an integer")
        if s < 0:
            raise ArithmeticError(f"A_{n} = {s // n} is negative")
        out[n] = s // n
    for n in range(1, n_max + 1):
        if sum(d * out[d] for d in _divisors(n)) != a[n]:
            raise ArithmeticError(f"a_{n} not recovered from the A_d")
    return out


def lie_dimensions_by_log(n_max: int) -> list[int]:
    """Oracle: match ``sum_d A_d sum_k t^(dk)/k`` against ``log(1/(1 - f))``."""
    log = f_series(n_max).log_one_minus_inverse()
    out = [0] * (n_max + 1)
    for n in range(1, n_max + 1):
        rest = sum(Fraction(out[d] * d, n) for d in _divisors(n) if d < n)
        v = log[n] - rest
        if v.denominator != 1:
            raise ArithmeticError(f"A_{n} = {v} is not an integer")
        out[n] = int(v)
    return out


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _poly(coeffs, t: float) -> float:
    s = 0.0
    for c in reversed(coeffs):
        s = s * t + c
    return s


def _bisect(fn, lo: float, hi: float, tol: float = 1e-12) -> float:
    flo = fn(lo)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        fm = fn(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return (lo + hi) / 2


@lru_cache(maxsize=None)
def roots() -> tuple[float, float]:
    """``alpha``, the root of ``(1 - t^2)(1 - t^2 - t^3)`` of smallest modulus,
    and ``beta_0 = 1/alpha``, the real root of ``t^3 - t - 1``.

    ``1 - t^2 - t^3`` has one real root, in (0, 1); its roots multiply to 1,
    so the complex pair has modulus ``alpha^(-1/2) > 1``.  ``1 - t^2`` only
    contributes ``t = +-1``.
    """
    alpha = _bisect(lambda t: 1 - t * t - t ** 3, 0.0, 1.0, 1e-15)
    beta = _bisect(lambda t: t ** 3 - t - 1, 1.0, 2.0, 1e-15)
    if abs(beta - 1 / alpha) > 1e-10:
        raise ArithmeticError(f"beta_0 = {beta} but 1/alpha = {1 / alpha}")
    return alpha, beta


def residue_at_alpha() -> tuple[float, float]:
    """``Res_alpha p`` as ``N(alpha)/D'(alpha)`` and as a symmetric estimate of
    ``(t - alpha) p(t)`` at ``alpha +- h``."""
    alpha, _ = roots()
    dd = [k * c for k, c in enumerate(DENOMINATOR)][1:]
    exact = _poly(NUMERATOR, alpha) / _poly(dd, alpha)

    def g(t):
        return (t - alpha) * _poly(NUMERATOR, t) / _poly(DENOMINATOR, t)

    h = 1e-6  # truncation ~h^2, cancellation ~1e-16/h
    return exact, (g(alpha - h) + g(alpha + h)) / 2


@dataclass
class GrowthRow:
    n: int
    a_n: int
    A_n: int
    product: float


@dataclass
class GrowthReport:
    rows: list[GrowthRow]
    alpha: float
    beta0: float
    residue: float
    residue_estimate: float
    threshold: float
    start: int
    converged: bool  # |a_n alpha^n - 1| < threshold for every n >= start

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "a_n", "A_n", "product"])
        for r in self.rows:
            w.writerow([r.n, r.a_n, r.A_n, f"{r.product:.15g}"])
        return buf.getvalue()


def growth_report(n_max: int, threshold: float = 1e-6, start: int = 200) -> GrowthReport:
    if n_max < 10:
        raise ValueError("order must be at least 10")
    a = p_coefficients(n_max)
    lie = lie_dimensions(n_max, a)
    alpha, beta = roots()
    rows = [GrowthRow(n, a[n], lie[n], a[n] * alpha ** n) for n in range(1, n_max + 1)]
    tail = [abs(r.product - 1) for r in rows if r.n >= start]
    res, est = residue_at_alpha()
    return GrowthReport(rows, alpha, beta, res, est, threshold, start,
                        bool(tail) and all(x < threshold for x in tail))
