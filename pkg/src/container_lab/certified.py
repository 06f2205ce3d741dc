"""Rigorous rational enclosures of log and exp.

Endpoints come from mpmath interval arithmetic (outward rounding) and are
converted to exact Fractions, so a comparison made against the unfavourable
endpoint is a proof rather than a floating-point guess.
"""

from __future__ import annotations

from contextlib import contextmanager
from fractions import Fraction

from mpmath import iv

__all__ = ["log_bounds", "exp_bounds", "geq_power", "log_ge_scaled"]

DEFAULT_PREC = 128
MAX_PREC = 4096


def _raw_to_fraction(raw) -> Fraction:
    sign, man, exp, _bc = raw
    if not man:
        if exp:  # +-inf / nan encodings
            raise ArithmeticError("non-finite interval endpoint")
        return Fraction(0)
    value = Fraction(int(man) << exp) if exp >= 0 else Fraction(int(man), 1 << -exp)
    return -value if sign else value


def _endpoints(x) -> tuple[Fraction, Fraction]:
    lo, hi = x._mpi_
    return _raw_to_fraction(lo), _raw_to_fraction(hi)


@contextmanager
def _precision(prec: int):
    saved = iv.prec
    iv.prec = prec
    try:
        yield
    finally:
        iv.prec = saved


def _interval(q: Fraction):
    return iv.mpf(q.numerator) / iv.mpf(q.denominator)


def log_bounds(x: Fraction, prec: int = DEFAULT_PREC) -> tuple[Fraction, Fraction]:
    """Rational ``(lo, hi)`` with ``lo <= ln(x) <= hi`` for ``x > 0``."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("log of a non-positive number")
    with _precision(prec):
        return _endpoints(iv.log(_interval(x)))


def exp_bounds(t: Fraction, prec: int = DEFAULT_PREC) -> tuple[Fraction, Fraction]:
    """Rational ``(lo, hi)`` with ``lo <= exp(t) <= hi``."""
    t = Fraction(t)
    with _precision(prec):
        return _endpoints(iv.exp(_interval(t)))


def geq_power(a: Fraction, b: Fraction, x: Fraction) -> bool:
    """Exactly decide ``a >= b**x`` for ``a, b > 0`` and rational ``x >= 0``.

    With ``x = u/d`` this is ``a**d >= b**u``; used when ``d`` is small.
    """
    u, d = x.numerator, x.denominator
    return a**d >= b**u


def log_ge_scaled(a: Fraction, b: Fraction, x: Fraction, *, exact_limit: int = 64) -> bool:
    """Decide ``ln(a) >= x * ln(b)`` for ``a, b > 0``, ``x >= 0``.

    Small denominators go through :func:`geq_power`.  Otherwise the two sides
    are enclosed with increasing precision until the enclosures separate; a
    ``True`` is returned only when ``lower(ln a) >= upper(x ln b)``.
    """
    a, b, x = Fraction(a), Fraction(b), Fraction(x)
    if x < 0 or a <= 0 or b <= 0:
        raise ValueError("need a, b > 0 and x >= 0")
    if x.denominator <= exact_limit and x.numerator.bit_length() < 4096:
        return geq_power(a, b, x)
    prec = DEFAULT_PREC
    while prec <= MAX_PREC:
        a_lo, a_hi = log_bounds(a, prec)
        b_lo, b_hi = log_bounds(b, prec)
        rhs_hi = x * b_hi
        rhs_lo = x * b_lo
        if a_lo >= rhs_hi:
            return True
        if a_hi < rhs_lo:
            return False
        prec *= 2
    # Enclosures never separated: equality to within 2^-MAX_PREC.  Settle it
    # exactly if the powers are of tractable size, else refuse to guess.
    if x.denominator < 1 << 20:
        return geq_power(a, b, x)
    raise ArithmeticError("could not separate the two sides of a logarithmic inequality")
