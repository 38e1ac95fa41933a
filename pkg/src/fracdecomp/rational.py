"""Exact rational arithmetic backend.

All deterministic weights in this package are arbitrary-precision
rationals; nothing in the exact modules ever touches floating point.
gmpy2's ``mpq`` is used when available (it is several times faster in
the simplex solver and the large weight compositions), with
``fractions.Fraction`` as the drop-in fallback.  Both types share the
``numerator``/``denominator`` protocol, so the rest of the package is
agnostic to the backend.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as _mpq

    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _mpq = None
    HAVE_GMPY2 = False


if HAVE_GMPY2:
    def rat(p=0, q=1):
        """Exact rational with numerator ``p`` and denominator ``q``."""
        return _mpq(p, q)
else:  # pragma: no cover
    def rat(p=0, q=1):
        """Exact rational with numerator ``p`` and denominator ``q``."""
        return Fraction(p, q)

ZERO = rat(0)
ONE = rat(1)


def is_rational(x) -> bool:
    """True for backend rationals and ints (never for floats)."""
    if isinstance(x, (int, Fraction)):
        return True
    return HAVE_GMPY2 and isinstance(x, type(ZERO))


def format_rational(x) -> str:
    """Serialize as a decimal-free ``"p/q"`` string."""
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str):
    """Parse ``"p/q"`` or a bare integer string into an exact rational.

    Raises ValueError on anything else, in particular on decimal
    notation: floats are never accepted in exact certificate formats.
    """
    text = s.strip()
    if "/" in text:
        num, _, den = text.partition("/")
        p, q = int(num), int(den)
        if q == 0:
            raise ValueError(f"zero denominator in rational {s!r}")
        return rat(p, q)
    if "." in text or "e" in text.lower():
        raise ValueError(f"decimal notation not allowed in exact rational {s!r}")
    return rat(int(text))
