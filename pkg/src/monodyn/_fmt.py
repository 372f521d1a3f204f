"""Exact-to-decimal rendering shared by reports and golden files."""

from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction


def decimal_str(q, places=10):
    """Round a rational to ``places`` decimals (half-even) without floats."""
    q = Fraction(q)
    with localcontext() as ctx:
        digits = len(str(abs(q.numerator) // q.denominator)) + places + 5
        ctx.prec = digits
        v = Decimal(q.numerator) / Decimal(q.denominator)
        return str(v.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN))


def parse_rational(text):
    """Exact rational from "p/q", an integer or a decimal string (0.05 -> 1/20)."""
    text = str(text).strip()
    if not text:
        raise ValueError("empty number")
    return Fraction(text)
