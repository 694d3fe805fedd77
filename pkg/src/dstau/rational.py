"""Exact rational arithmetic.

Everything downstream assumes an exact Fraction-like type: gmpy2.mpq when
available (much faster), stdlib fractions.Fraction otherwise.  Both are
always reduced, keep a positive denominator and hash/compare consistently.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as QQ

QQ0 = QQ(0)
QQ1 = QQ(1)


def qq(value, den=None) -> QQ:
    """Build a rational from ints, strings like '3/4', or another rational."""
    if den is not None:
        return QQ(value, den)
    if isinstance(value, str):
        return qq_parse(value)
    return QQ(value)


def qq_parse(text: str) -> QQ:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/")
        return QQ(int(num), int(den))
    return QQ(int(text))


def qq_str(value) -> str:
    """Serialize as 'p/q' with q > 0 (zero is '0/1')."""
    return f"{value.numerator}/{value.denominator}"


def squarefree_part(n: int) -> int:
    """Largest squarefree divisor of n > 0 (trial division; desk-scale inputs)."""
    if n <= 0:
        raise ValueError("squarefree_part requires a positive integer")
    out = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            if e % 2:
                out *= d
        d += 1
    return out * n
