"""Truncated power series with exact rational coefficients.

A series is a plain list [c0, c1, ..., cK] over Fraction; all operations
truncate to the shortest operand's order.
"""

from __future__ import annotations

from fractions import Fraction


def series(coeffs, order: int) -> list[Fraction]:
    """Pad / truncate coefficient list to length order + 1."""
    out = [Fraction(c) for c in coeffs[: order + 1]]
    out += [Fraction(0)] * (order + 1 - len(out))
    return out


def mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = min(len(a), len(b))
    out = [Fraction(0)] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j in range(n - i):
                out[i + j] += x * b[j]
    return out


def exp(a: list[Fraction]) -> list[Fraction]:
    """exp of a series with zero constant term."""
    if a and a[0] != 0:
        raise ValueError("exp needs zero constant term")
    n = len(a)
    out = [Fraction(0)] * n
    out[0] = Fraction(1)
    # e' = a' e  =>  (k+1) e_{k+1} = sum_{j} (j+1) a_{j+1} e_{k-j}
    for k in range(n - 1):
        acc = Fraction(0)
        for j in range(k + 1):
            if j + 1 < n and a[j + 1]:
                acc += (j + 1) * a[j + 1] * out[k - j]
        out[k + 1] = acc / (k + 1)
    return out


def inverse(a: list[Fraction]) -> list[Fraction]:
    """Multiplicative inverse of a series with nonzero constant term."""
    if not a or a[0] == 0:
        raise ZeroDivisionError("series has zero constant term")
    n = len(a)
    out = [Fraction(0)] * n
    out[0] = Fraction(1) / a[0]
    for k in range(1, n):
        acc = Fraction(0)
        for j in range(1, k + 1):
            acc += a[j] * out[k - j]
        out[k] = -acc * out[0]
    return out


def from_rational(num, den, order: int) -> list[Fraction]:
    """Series expansion of num(T)/den(T) to the given order."""
    return mul(series(num, order), inverse(series(den, order)))
